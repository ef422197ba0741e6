//! Two-level aggregation: switches join at their controller, controllers
//! join at the hypervisor, and the hypervisor recovers one controller.
//!
//! ```text
//! cargo run --example qram_aggregation
//! ```

use qsdn::{address_marginal, join_from_raw, qram_join, ClassicalVector, QuantumState, WeightMode};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (controllers, switches, params) = (4, 4, 8);
    let mut joined: Vec<QuantumState> = Vec::new();
    for c in 0..controllers {
        let vectors: Vec<ClassicalVector> = (0..switches)
            .map(|s| {
                ClassicalVector::new(
                    (0..params)
                        .map(|p| 1.0 + ((c * 31 + s * 7 + p) % 5) as f64)
                        .collect(),
                )
            })
            .collect();
        let j = join_from_raw(&vectors)?;
        println!(
            "controller {c}: {} data + {} address qubits, branch weights {:.3?}",
            j.data_qubits(),
            j.address_qubits(),
            j.branch_probabilities()
        );
        joined.push(j.into_state());
    }

    let top = qram_join(&joined, &[], WeightMode::Uniform)?;
    println!("hypervisor state: {} qubits", top.state().num_qubits());

    let (p, branch) = address_marginal(&top, 2)?;
    println!(
        "controller 2 recovered with probability {p:.3}, fidelity {:.12}",
        branch.fidelity(&joined[2])?
    );
    Ok(())
}
