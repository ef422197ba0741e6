//! Latency and energy of one collection round, classical against quantum.
//!
//! ```text
//! cargo run --example collection_round
//! ```

use qsdn::{simulate_collection, EnergyModel, LinkSpec, TierLinks, TopologySpec, TransportMode};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let t = TopologySpec::new(64, 64, 2000);
    let links = TierLinks {
        leaf: LinkSpec::symmetric(1e9, 2e4, 1e-5),
        mid: LinkSpec::symmetric(1e10, 5e5, 1e-4),
    };
    let energy = EnergyModel {
        per_bit_tx: 1e-9,
        per_instruction: 1e-10,
        instructions_per_bit_processed: 10.0,
        bandwidth_scaling: 1e10,
    };

    for (mode, shots) in [
        (TransportMode::Classical, 1),
        (TransportMode::Quantum, 1),
        (TransportMode::Quantum, 100),
    ] {
        let r = simulate_collection(&t, &links, mode, shots, &energy)?;
        println!("{mode} (R = {shots}):");
        for (tier, l) in [("leaf", &r.leaf), ("mid", &r.mid)] {
            println!(
                "  {tier:<4} prop {:.3e}  tx {:.3e}  queue {:.3e}  proc {:.3e}  total {:.3e} s",
                l.propagation, l.transmission, l.queuing, l.processing, l.total
            );
        }
        println!(
            "  end to end {:.4e} s, energy {:.4e} J",
            r.end_to_end, r.energy
        );
    }
    Ok(())
}
