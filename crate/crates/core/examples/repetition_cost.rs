//! Re-encoding cost of repeated measurement and the leaf break-even point.
//!
//! ```text
//! cargo run --example repetition_cost
//! ```

use qsdn::{break_even_shots, classical_loads, quantum_loads, TopologySpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let base = TopologySpec::new(1024, 1024, 2000);
    let classical = classical_loads(&base)?;
    for shots in [1, 10, 100, 181, 182] {
        let q = quantum_loads(&base.with_shots(shots))?;
        let verdict = if q.leaf_link_load <= classical.leaf_link_load {
            "fits"
        } else {
            "exceeds"
        };
        println!(
            "R = {shots:>3}: leaf {:>5} qubits ({verdict} {} bits), hypervisor {:>8} qubits, register {} qubits",
            q.leaf_link_load, classical.leaf_link_load, q.hypervisor_ingest, q.hypervisor_state_size
        );
    }
    for b in [1, 8, 32] {
        let r = break_even_shots(&base.with_bits_per_param(b))?;
        println!("break-even at {b:>2} bits per parameter: {r} shots");
    }
    Ok(())
}
