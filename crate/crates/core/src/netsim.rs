//! Deterministic latency and energy model for one collection round.
//!
//! Link latency is the sum of propagation, transmission, queuing and
//! processing delay. A round starts synchronised: every switch sends at
//! `t = 0`, so at a controller the `j`-th arriving message waits behind the
//! `j − 1` messages ahead of it (FIFO). Controllers then forward to the
//! hypervisor the same way. The round completes when the slowest leaf
//! message plus the slowest mid-tier message have been delivered.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scaling::{classical_loads, quantum_loads, LoadReport, ScalingError, TopologySpec};

/// Signal speed in fibre, m/s.
pub const DEFAULT_PROPAGATION_SPEED: f64 = 2.0e8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetsimError {
    #[error("available bandwidth must be positive")]
    ZeroBandwidth,
    #[error("{field} must be strictly positive and finite, got {value}")]
    InvalidLink { field: &'static str, value: f64 },
    #[error("{field} must be non-negative and finite, got {value}")]
    InvalidEnergy { field: &'static str, value: f64 },
    #[error(transparent)]
    Scaling(#[from] ScalingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransportMode {
    Classical,
    Quantum,
}

impl fmt::Display for TransportMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TransportMode::Classical => "classical",
            TransportMode::Quantum => "quantum",
        })
    }
}

fn default_speed() -> f64 {
    DEFAULT_PROPAGATION_SPEED
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkSpec {
    /// Classical rate, bits/s.
    pub capacity: f64,
    /// Quantum rate, qubits/s.
    pub q_capacity: f64,
    /// Metres.
    pub length: f64,
    #[serde(default = "default_speed")]
    pub propagation_speed: f64,
    /// Seconds per message.
    pub per_message_processing: f64,
}

impl LinkSpec {
    /// Link with `q_capacity = capacity` and fibre propagation speed.
    pub fn symmetric(capacity: f64, length: f64, per_message_processing: f64) -> Self {
        Self {
            capacity,
            q_capacity: capacity,
            length,
            propagation_speed: DEFAULT_PROPAGATION_SPEED,
            per_message_processing,
        }
    }

    pub fn validate(&self) -> Result<(), NetsimError> {
        for (field, value) in [
            ("capacity", self.capacity),
            ("q_capacity", self.q_capacity),
            ("length", self.length),
            ("propagation_speed", self.propagation_speed),
            ("per_message_processing", self.per_message_processing),
        ] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(NetsimError::InvalidLink { field, value });
            }
        }
        Ok(())
    }

    /// Symbol rate for the given transport.
    pub fn rate(&self, mode: TransportMode) -> f64 {
        match mode {
            TransportMode::Classical => self.capacity,
            TransportMode::Quantum => self.q_capacity,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatencyBreakdown {
    pub propagation: f64,
    pub transmission: f64,
    pub queuing: f64,
    pub processing: f64,
    pub total: f64,
}

impl LatencyBreakdown {
    pub fn new(propagation: f64, transmission: f64, queuing: f64, processing: f64) -> Self {
        Self {
            propagation,
            transmission,
            queuing,
            processing,
            total: propagation + transmission + queuing + processing,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergyModel {
    /// J/bit at the reference bandwidth.
    pub per_bit_tx: f64,
    /// J/instruction.
    pub per_instruction: f64,
    pub instructions_per_bit_processed: f64,
    /// Reference bandwidth, bits/s, at which `per_bit_tx` applies.
    pub bandwidth_scaling: f64,
}

impl EnergyModel {
    pub fn validate(&self) -> Result<(), NetsimError> {
        for (field, value) in [
            ("per_bit_tx", self.per_bit_tx),
            ("per_instruction", self.per_instruction),
            (
                "instructions_per_bit_processed",
                self.instructions_per_bit_processed,
            ),
            ("bandwidth_scaling", self.bandwidth_scaling),
        ] {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(NetsimError::InvalidEnergy { field, value });
            }
        }
        Ok(())
    }
}

/// Latency of one message of `message_size` symbols behind `backlog` queued
/// symbols.
pub fn link_latency(
    message_size: f64,
    link: &LinkSpec,
    backlog: f64,
    mode: TransportMode,
) -> LatencyBreakdown {
    let rate = link.rate(mode);
    LatencyBreakdown::new(
        link.length / link.propagation_speed,
        message_size / rate,
        backlog / rate,
        link.per_message_processing,
    )
}

/// `per_bit_tx · bits · (bandwidth_scaling / bandwidth) + per_instruction · instructions`.
pub fn energy_estimate(
    bits_sent: f64,
    instructions: f64,
    available_bandwidth: f64,
    model: &EnergyModel,
) -> Result<f64, NetsimError> {
    if available_bandwidth.is_nan() || available_bandwidth <= 0.0 {
        return Err(NetsimError::ZeroBandwidth);
    }
    Ok(
        model.per_bit_tx * bits_sent * (model.bandwidth_scaling / available_bandwidth)
            + model.per_instruction * instructions,
    )
}

/// Leaf (switch → controller) and mid (controller → hypervisor) links.
/// All links within a tier are identical.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TierLinks {
    pub leaf: LinkSpec,
    pub mid: LinkSpec,
}

impl TierLinks {
    pub fn validate(&self) -> Result<(), (&'static str, NetsimError)> {
        self.leaf.validate().map_err(|e| ("leaf", e))?;
        self.mid.validate().map_err(|e| ("mid", e))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollectionReport {
    pub mode: TransportMode,
    /// Breakdown of the last message to arrive at a controller.
    pub leaf: LatencyBreakdown,
    /// Breakdown of the last message to arrive at the hypervisor.
    pub mid: LatencyBreakdown,
    pub end_to_end: f64,
    pub loads: LoadReport,
    pub energy: f64,
}

/// Worst message latency when `senders` messages of `size` symbols arrive
/// together at one FIFO queue.
fn worst_fifo_arrival(
    senders: u64,
    size: f64,
    link: &LinkSpec,
    mode: TransportMode,
) -> LatencyBreakdown {
    (0..senders)
        .map(|ahead| link_latency(size, link, ahead as f64 * size, mode))
        .max_by(|a, b| a.total.total_cmp(&b.total))
        .expect("topology has at least one sender per tier")
}

/// Run one collection round over `t` with `shots` repetitions.
///
/// `shots` overrides `t.shots`; classical mode sends every parameter once and
/// ignores it. Energy is charged on the hypervisor ingest at the mid-tier
/// rate, with `instructions_per_bit_processed × ingest` instructions.
pub fn simulate_collection(
    t: &TopologySpec,
    links: &TierLinks,
    mode: TransportMode,
    shots: u64,
    energy: &EnergyModel,
) -> Result<CollectionReport, NetsimError> {
    let t = t.with_shots(shots);
    let loads = match mode {
        TransportMode::Classical => classical_loads(&t)?,
        TransportMode::Quantum => quantum_loads(&t)?,
    };
    links.leaf.validate()?;
    links.mid.validate()?;
    energy.validate()?;

    let leaf = worst_fifo_arrival(
        t.switches_per_controller,
        loads.leaf_link_load as f64,
        &links.leaf,
        mode,
    );
    let mid = worst_fifo_arrival(
        t.num_controllers,
        loads.mid_link_load as f64,
        &links.mid,
        mode,
    );

    let ingest = loads.hypervisor_ingest as f64;
    let joules = energy_estimate(
        ingest,
        energy.instructions_per_bit_processed * ingest,
        links.mid.rate(mode),
        energy,
    )?;

    Ok(CollectionReport {
        mode,
        leaf,
        mid,
        end_to_end: leaf.total + mid.total,
        loads,
        energy: joules,
    })
}
