//! Simulation and accounting for a hybrid classical-quantum SDN control plane.
//!
//! Switches amplitude-encode their telemetry into a logarithmic number of
//! qubits, controllers and the hypervisor aggregate it with QRAM joins, and
//! the crate measures what that saves against classical parameter streaming:
//!
//! - [`statevector`]: amplitude encoding, seeded measurement, expectation
//!   estimates with per-shot re-encoding cost.
//! - [`qram`]: joining `K` states under a `⌈log₂ K⌉`-qubit address register.
//! - [`scaling`]: closed-form bit/qubit loads for an `N × K × P` hierarchy.
//! - [`exchange`]: teleportation / dense-coding costs and per-link balancing.
//! - [`netsim`]: latency breakdown and energy for one collection round.
//! - [`scenario`], [`cli`]: JSON scenarios, CSV/JSON reports, the `qsdn` binary.
//!
//! Runnable walkthroughs live in `examples/`; start with
//! `cargo run --example amplitude_encoding`.

pub mod cli;
pub mod error;
pub mod exchange;
pub mod netsim;
pub mod qram;
pub mod report;
pub mod scaling;
pub mod scenario;
pub mod selftest;
pub mod statevector;

pub use error::{Error, Result};
pub use exchange::{
    balance_link, dense_code_cost, teleport_cost, LinkLoad, ResourceLedger, TransferPlan,
};
pub use netsim::{
    energy_estimate, link_latency, simulate_collection, EnergyModel, LatencyBreakdown, LinkSpec,
    TierLinks, TransportMode,
};
pub use qram::{address_marginal, join_from_raw, qram_join, JoinedState, WeightMode};
pub use scaling::{
    break_even_shots, classical_loads, quantum_loads, qubits_for_parameters, scaling_table,
    LoadReport, SweepParam, TopologySpec,
};
pub use scenario::{run_scenario, ScenarioConfig};
pub use statevector::{
    amplitude_encode, estimate_expectation, expectation, inner_product, measure_sample,
    ClassicalVector, OutcomeHistogram, QuantumState,
};
