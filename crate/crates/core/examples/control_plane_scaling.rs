//! Bits versus qubits reaching the hypervisor as the network grows.
//!
//! ```text
//! cargo run --example control_plane_scaling
//! ```

use qsdn::scaling::doubling_range;
use qsdn::{classical_loads, quantum_loads, scaling_table, SweepParam, TopologySpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let t = TopologySpec::new(1024, 1024, 2000);
    let c = classical_loads(&t)?;
    let q = quantum_loads(&t)?;
    println!("N = K = 1024, P = 2000");
    println!(
        "  classical: {} bits per controller, {} at the hypervisor",
        c.mid_link_load, c.hypervisor_ingest
    );
    println!(
        "  quantum:   {} qubits into controllers, {} at the hypervisor, {}-qubit register",
        q.controller_ingest, q.hypervisor_ingest, q.hypervisor_state_size
    );

    println!(
        "\n{:>6} {:>14} {:>10} {:>10}",
        "K", "bits", "qubits", "ratio"
    );
    for row in scaling_table(&t, SweepParam::K, &doubling_range(2, 1024))? {
        println!(
            "{:>6} {:>14} {:>10} {:>10.1}",
            row.sweep_value,
            row.classical_bits,
            row.quantum_qubits,
            row.ratio()
        );
    }
    Ok(())
}
