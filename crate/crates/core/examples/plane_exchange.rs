//! Shifting load between the classical and quantum planes of one link by
//! spending shared entanglement.
//!
//! ```text
//! cargo run --example plane_exchange
//! ```

use qsdn::exchange::{balance_link_with, BalanceObjective, ExchangeError};
use qsdn::{dense_code_cost, teleport_cost, LinkLoad, ResourceLedger};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("teleport 11 qubits: {:?} (ebits, cbits)", teleport_cost(11));
    println!(
        "dense-code 2000 bits: {:?} (ebits, qubits)",
        dense_code_cost(2000)
    );

    let cases = [
        (
            "quantum plane overloaded",
            LinkLoad::new(0, 2200),
            ResourceLedger::new(2000, 5000, 1100),
        ),
        (
            "classical plane overloaded",
            LinkLoad::new(4000, 21),
            ResourceLedger::new(800, 3000, 1000),
        ),
        (
            "both planes overloaded",
            LinkLoad::new(90, 90),
            ResourceLedger::new(3, 10, 10),
        ),
    ];
    for (label, load, ledger) in cases {
        println!("\n{label}: load {load:?}, {} ebits", ledger.ebits());
        for objective in [
            BalanceObjective::FitCapacity,
            BalanceObjective::MinMaxUtilization,
        ] {
            match balance_link_with(load, &ledger, objective) {
                Ok(plan) => {
                    let mut after = ledger.clone();
                    after.apply(&plan)?;
                    println!(
                        "  {objective:?}: teleport {}, dense-code {}, load {:?}, utilization ({:.2}, {:.2}), {} ebits left",
                        plan.qubits_teleported,
                        plan.cbits_densecoded,
                        plan.resulting_load,
                        plan.utilization.0,
                        plan.utilization.1,
                        after.ebits()
                    );
                }
                Err(ExchangeError::Infeasible { best }) => {
                    println!(
                        "  {objective:?}: infeasible, best leaves utilization {:.2?}",
                        best.utilization
                    );
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(())
}
