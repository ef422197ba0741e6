//! Logical QRAM aggregation.
//!
//! `K` data states of `m` qubits are joined under an address register of
//! `⌈log₂ K⌉` qubits into `Σₖ βₖ |k⟩ ⊗ |ψₖ⟩`. The address occupies the
//! high-order qubits, so the joined amplitude vector is the weighted
//! concatenation of the input vectors, followed by zero-amplitude branches
//! when `K` is not a power of two.
//!
//! The join is computed directly on amplitudes; no gate-level QRAM circuit is
//! simulated.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::statevector::{
    amplitude_encode, qubits_for_len, ClassicalVector, QuantumState, StateError,
};

/// Branch probabilities below this are treated as empty.
pub const EMPTY_BRANCH_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JoinError {
    #[error("nothing to join: at least one source is required")]
    NoSources,
    #[error("source {index} has {actual} data qubits, expected {expected}")]
    MixedDimensions {
        index: usize,
        expected: u32,
        actual: u32,
    },
    #[error("expected {expected} weights, got {actual}")]
    WeightCount { expected: usize, actual: usize },
    #[error("weight {index} is not positive ({value})")]
    NonPositiveWeight { index: usize, value: f64 },
    #[error("address {address} out of range for {num_sources} sources")]
    AddressOutOfRange { address: usize, num_sources: usize },
    #[error("address branch {address} has probability {probability:e}")]
    EmptyBranch { address: usize, probability: f64 },
    #[error(transparent)]
    State(#[from] StateError),
}

/// How the address branches are weighted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightMode {
    /// `βₖ = 1/√K`: each source has an equal voice.
    Uniform,
    /// `βₖ = wₖ/‖w‖`: reproduces encoding of the concatenated raw data when
    /// `wₖ` is the norm of source `k`.
    #[default]
    NormProportional,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JoinedState {
    state: QuantumState,
    num_sources: usize,
    data_qubits: u32,
    weight_mode: WeightMode,
}

impl JoinedState {
    pub fn state(&self) -> &QuantumState {
        &self.state
    }

    pub fn into_state(self) -> QuantumState {
        self.state
    }

    pub fn num_sources(&self) -> usize {
        self.num_sources
    }

    pub fn data_qubits(&self) -> u32 {
        self.data_qubits
    }

    pub fn address_qubits(&self) -> u32 {
        self.state.num_qubits() - self.data_qubits
    }

    pub fn weight_mode(&self) -> WeightMode {
        self.weight_mode
    }

    /// Probability of each address branch, over `num_sources` branches.
    pub fn branch_probabilities(&self) -> Vec<f64> {
        let block = 1usize << self.data_qubits;
        self.state
            .amplitudes()
            .chunks(block)
            .take(self.num_sources)
            .map(|c| c.iter().map(|a| a.norm_sqr()).sum())
            .collect()
    }
}

/// Join `states` under a fresh address register.
///
/// `weights` is only consulted in [`WeightMode::NormProportional`] and may be
/// empty in uniform mode.
pub fn qram_join(
    states: &[QuantumState],
    weights: &[f64],
    mode: WeightMode,
) -> Result<JoinedState, JoinError> {
    let first = states.first().ok_or(JoinError::NoSources)?;
    let data_qubits = first.num_qubits();
    if let Some((index, s)) = states
        .iter()
        .enumerate()
        .find(|(_, s)| s.num_qubits() != data_qubits)
    {
        return Err(JoinError::MixedDimensions {
            index,
            expected: data_qubits,
            actual: s.num_qubits(),
        });
    }

    let k = states.len();
    let betas: Vec<f64> = match mode {
        WeightMode::Uniform => vec![1.0 / (k as f64).sqrt(); k],
        WeightMode::NormProportional => {
            if weights.len() != k {
                return Err(JoinError::WeightCount {
                    expected: k,
                    actual: weights.len(),
                });
            }
            if let Some((index, &value)) = weights
                .iter()
                .enumerate()
                .find(|(_, w)| !(**w > 0.0 && w.is_finite()))
            {
                return Err(JoinError::NonPositiveWeight { index, value });
            }
            let norm = weights.iter().map(|w| w * w).sum::<f64>().sqrt();
            weights.iter().map(|w| w / norm).collect()
        }
    };

    let address_qubits = qubits_for_len(k);
    let block = 1usize << data_qubits;
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); block << address_qubits];
    for ((chunk, s), beta) in amplitudes.chunks_mut(block).zip(states).zip(&betas) {
        for (dst, src) in chunk.iter_mut().zip(s.amplitudes()) {
            *dst = src * beta;
        }
    }

    Ok(JoinedState {
        state: QuantumState::from_raw_unchecked(amplitudes),
        num_sources: k,
        data_qubits,
        weight_mode: mode,
    })
}

/// Encode each raw vector and join them with norm-proportional weights.
///
/// The result equals `amplitude_encode` of the concatenation of the padded
/// vectors (itself padded to a power of two).
pub fn join_from_raw(vectors: &[ClassicalVector]) -> Result<JoinedState, JoinError> {
    let first = vectors.first().ok_or(JoinError::NoSources)?;
    let mut states = Vec::with_capacity(vectors.len());
    let mut weights = Vec::with_capacity(vectors.len());
    for (index, v) in vectors.iter().enumerate() {
        if v.len() != first.len() {
            return Err(JoinError::MixedDimensions {
                index,
                expected: qubits_for_len(first.len()),
                actual: qubits_for_len(v.len()),
            });
        }
        states.push(amplitude_encode(v)?);
        weights.push(v.norm());
    }
    qram_join(&states, &weights, WeightMode::NormProportional)
}

/// Post-select the address register on `address`.
///
/// Returns the branch probability and the renormalised data state of that
/// branch.
pub fn address_marginal(j: &JoinedState, address: usize) -> Result<(f64, QuantumState), JoinError> {
    if address >= j.num_sources {
        return Err(JoinError::AddressOutOfRange {
            address,
            num_sources: j.num_sources,
        });
    }
    let block = 1usize << j.data_qubits;
    let branch = &j.state.amplitudes()[address * block..(address + 1) * block];
    let probability: f64 = branch.iter().map(|a| a.norm_sqr()).sum();
    if probability < EMPTY_BRANCH_THRESHOLD {
        return Err(JoinError::EmptyBranch {
            address,
            probability,
        });
    }
    let scale = probability.sqrt();
    let conditional = branch.iter().map(|a| a / scale).collect();
    Ok((probability, QuantumState::from_raw_unchecked(conditional)))
}
