//! Pure-state simulation for amplitude-encoded telemetry.
//!
//! A classical vector of `n` values is zero-padded to the next power of two,
//! normalised, and stored as the amplitudes of a `⌈log₂ n⌉`-qubit state.
//! Measurement is computational-basis sampling by inverse CDF over a seeded
//! ChaCha8 stream, so every histogram and estimate is reproducible from its
//! seed.
//!
//! Encoding a vector of `2^50` one-byte coefficients (one petabyte) takes 50
//! qubits under this scheme; [`qubits_for_len`] is the single source for that
//! count.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute tolerance on the squared-magnitude sum of a state.
pub const NORM_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("cannot encode an empty vector")]
    EmptyVector,
    #[error("cannot encode a vector with zero Euclidean norm")]
    ZeroVector,
    #[error("vector entry {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("amplitude vector of length {len} is not a power of two")]
    NotPowerOfTwo { len: usize },
    #[error("amplitudes are not normalised (squared-magnitude sum {sum})")]
    NotNormalized { sum: f64 },
    #[error("at least one shot is required")]
    NoShots,
    #[error("estimating a standard error needs at least 2 shots, got {shots}")]
    ShotsTooFew { shots: u64 },
}

/// `⌈log₂ len⌉`, with `len ≤ 1` mapped to zero qubits.
pub fn qubits_for_len(len: usize) -> u32 {
    if len <= 1 {
        0
    } else {
        usize::BITS - (len - 1).leading_zeros()
    }
}

/// Real-valued telemetry vector, the classical input to encoding and the
/// diagonal of an observable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassicalVector(Vec<f64>);

impl ClassicalVector {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Copy of the values zero-padded up to `2^⌈log₂ n⌉` entries.
    pub fn padded(&self) -> Vec<f64> {
        let mut out = self.0.clone();
        out.resize(1usize << qubits_for_len(self.0.len()), 0.0);
        out
    }

    fn check_finite(&self) -> Result<(), StateError> {
        match self.0.iter().position(|v| !v.is_finite()) {
            Some(index) => Err(StateError::NonFinite {
                index,
                value: self.0[index],
            }),
            None => Ok(()),
        }
    }
}

impl From<Vec<f64>> for ClassicalVector {
    fn from(values: Vec<f64>) -> Self {
        Self(values)
    }
}

impl From<&[f64]> for ClassicalVector {
    fn from(values: &[f64]) -> Self {
        Self(values.to_vec())
    }
}

/// Normalised pure state over `num_qubits` qubits.
///
/// Basis index `i` is the big-endian bit string of the qubits: qubit 0 is the
/// most significant bit. Values are immutable once constructed.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    amplitudes: Vec<Complex64>,
    num_qubits: u32,
}

impl QuantumState {
    /// Validating constructor: length must be a power of two and the
    /// squared-magnitude sum must be 1 within [`NORM_TOLERANCE`].
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self, StateError> {
        let len = amplitudes.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(StateError::NotPowerOfTwo { len });
        }
        let sum: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (sum - 1.0).abs() > NORM_TOLERANCE || !sum.is_finite() {
            return Err(StateError::NotNormalized { sum });
        }
        Ok(Self {
            num_qubits: len.trailing_zeros(),
            amplitudes,
        })
    }

    /// Computational basis state `|index⟩` on `num_qubits` qubits.
    pub fn basis(num_qubits: u32, index: usize) -> Self {
        let dim = 1usize << num_qubits;
        assert!(
            index < dim,
            "basis index {index} out of range for {num_qubits} qubits"
        );
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self {
            amplitudes,
            num_qubits,
        }
    }

    pub(crate) fn from_raw_unchecked(amplitudes: Vec<Complex64>) -> Self {
        debug_assert!(amplitudes.len().is_power_of_two());
        Self {
            num_qubits: amplitudes.len().trailing_zeros(),
            amplitudes,
        }
    }

    pub fn num_qubits(&self) -> u32 {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `|⟨self|other⟩|`.
    pub fn fidelity(&self, other: &QuantumState) -> Result<f64, StateError> {
        inner_product(self, other).map(|c| c.norm())
    }
}

/// Shot counts per basis index. Only observed outcomes are stored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeHistogram {
    counts: BTreeMap<usize, u64>,
    total_shots: u64,
    num_qubits: u32,
}

impl OutcomeHistogram {
    pub fn counts(&self) -> &BTreeMap<usize, u64> {
        &self.counts
    }

    pub fn count(&self, index: usize) -> u64 {
        self.counts.get(&index).copied().unwrap_or(0)
    }

    pub fn total_shots(&self) -> u64 {
        self.total_shots
    }

    pub fn num_qubits(&self) -> u32 {
        self.num_qubits
    }

    pub fn frequency(&self, index: usize) -> f64 {
        self.count(index) as f64 / self.total_shots as f64
    }
}

/// Zero-pad `v` to a power of two and normalise it into a real-valued state.
pub fn amplitude_encode(v: &ClassicalVector) -> Result<QuantumState, StateError> {
    if v.is_empty() {
        return Err(StateError::EmptyVector);
    }
    v.check_finite()?;
    let norm = v.norm();
    if norm == 0.0 {
        return Err(StateError::ZeroVector);
    }
    let amplitudes = v
        .padded()
        .into_iter()
        .map(|x| Complex64::new(x / norm, 0.0))
        .collect();
    Ok(QuantumState::from_raw_unchecked(amplitudes))
}

/// Inverse-CDF sampler over a fixed probability vector.
struct BasisSampler {
    cumulative: Vec<f64>,
    last_nonzero: usize,
}

impl BasisSampler {
    fn new(state: &QuantumState) -> Self {
        let mut acc = 0.0;
        let mut last_nonzero = 0;
        let cumulative = state
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let p = a.norm_sqr();
                if p > 0.0 {
                    last_nonzero = i;
                }
                acc += p;
                acc
            })
            .collect();
        Self {
            cumulative,
            last_nonzero,
        }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> usize {
        // Scale by the actual total so rounding in the last bin cannot push
        // a draw past the final non-zero outcome.
        let total = *self.cumulative.last().expect("non-empty state");
        let u = rng.gen::<f64>() * total;
        let idx = self.cumulative.partition_point(|&c| c <= u);
        idx.min(self.last_nonzero)
    }
}

/// Sample `shots` computational-basis measurements of `s`.
pub fn measure_sample(
    s: &QuantumState,
    shots: u64,
    seed: u64,
) -> Result<OutcomeHistogram, StateError> {
    if shots == 0 {
        return Err(StateError::NoShots);
    }
    let sampler = BasisSampler::new(s);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = BTreeMap::new();
    for _ in 0..shots {
        *counts.entry(sampler.draw(&mut rng)).or_insert(0) += 1;
    }
    Ok(OutcomeHistogram {
        counts,
        total_shots: shots,
        num_qubits: s.num_qubits,
    })
}

/// Exact expectation of a diagonal observable: `Σ |aᵢ|² · oᵢ`.
pub fn expectation(s: &QuantumState, observable: &ClassicalVector) -> Result<f64, StateError> {
    if observable.len() != s.dim() {
        return Err(StateError::DimensionMismatch {
            expected: s.dim(),
            actual: observable.len(),
        });
    }
    Ok(s.amplitudes
        .iter()
        .zip(observable.values())
        .map(|(a, o)| a.norm_sqr() * o)
        .sum())
}

/// Result of a repeated encode-and-measure estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub estimate: f64,
    pub std_error: f64,
    /// Total qubits shipped from the source: one fresh encoding per shot.
    pub qubits_sent: u64,
}

/// Estimate `⟨observable⟩` from `shots` single-shot rounds.
///
/// A measured state is destroyed and cannot be copied, so every round
/// ships a fresh encoding from the source; `qubits_sent` charges
/// `shots × ⌈log₂ len(source)⌉`. The observable may be given either at the
/// source length or at the padded length; padding entries are never sampled.
pub fn estimate_expectation(
    source: &ClassicalVector,
    observable: &ClassicalVector,
    shots: u64,
    seed: u64,
) -> Result<Estimate, StateError> {
    let state = amplitude_encode(source)?;
    if shots < 2 {
        return Err(StateError::ShotsTooFew { shots });
    }
    let diag = if observable.len() == state.dim() {
        observable.values().to_vec()
    } else if observable.len() == source.len() {
        observable.padded()
    } else {
        return Err(StateError::DimensionMismatch {
            expected: state.dim(),
            actual: observable.len(),
        });
    };

    let sampler = BasisSampler::new(&state);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Welford accumulation keeps the variance stable for large shot counts.
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for n in 1..=shots {
        let x = diag[sampler.draw(&mut rng)];
        let delta = x - mean;
        mean += delta / n as f64;
        m2 += delta * (x - mean);
    }
    let variance = m2 / (shots - 1) as f64;
    Ok(Estimate {
        estimate: mean,
        std_error: (variance / shots as f64).sqrt(),
        qubits_sent: shots * u64::from(state.num_qubits),
    })
}

/// `Σ conj(aᵢ)·bᵢ`.
pub fn inner_product(a: &QuantumState, b: &QuantumState) -> Result<Complex64, StateError> {
    if a.num_qubits != b.num_qubits {
        return Err(StateError::DimensionMismatch {
            expected: a.dim(),
            actual: b.dim(),
        });
    }
    Ok(a.amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| x.conj() * y)
        .sum())
}
