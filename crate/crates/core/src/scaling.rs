//! Closed-form bit and qubit accounting for one hierarchical collection round.
//!
//! Topology: `N` controllers, each managing `K` switches, each switch
//! reporting `P` parameters of `b` bits. Classically every parameter is
//! forwarded to the hypervisor. In quantum mode each switch amplitude-encodes
//! its parameters into `m = ⌈log₂ P⌉` qubits, controllers QRAM-join their
//! switches into `m + ⌈log₂ K⌉` qubits, and the hypervisor joins controllers
//! into `m + ⌈log₂ K⌉ + ⌈log₂ N⌉` qubits. Each repetition `R` of a
//! measurement resends everything, since measured states cannot be reused.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScalingError {
    #[error("topology.{field} must be at least 1")]
    ZeroField { field: &'static str },
    #[error("topology.classical_reduction must lie in (0, 1], got {0}")]
    BadReduction(f64),
    #[error("topology is too large: loads overflow 64-bit counters")]
    Overflow,
    #[error("break-even is unbounded for a single parameter (it encodes into 0 qubits)")]
    DegenerateEncoding,
    #[error("unknown sweep parameter `{0}` (expected one of N, K, P, R)")]
    UnknownParameter(String),
    #[error("sweep values must be at least 1")]
    ZeroSweepValue,
}

fn one() -> u64 {
    1
}

fn unit_reduction() -> f64 {
    1.0
}

/// `N × K × P` hierarchy with parameter width and repetition count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologySpec {
    pub num_controllers: u64,
    pub switches_per_controller: u64,
    pub params_per_switch: u64,
    #[serde(default = "one")]
    pub bits_per_param: u64,
    #[serde(default = "one")]
    pub shots: u64,
    /// Fraction of a controller's classical ingest it forwards upstream,
    /// for controllers that pre-reduce data. `1.0` is raw forwarding.
    #[serde(default = "unit_reduction")]
    pub classical_reduction: f64,
}

impl TopologySpec {
    pub fn new(num_controllers: u64, switches_per_controller: u64, params_per_switch: u64) -> Self {
        Self {
            num_controllers,
            switches_per_controller,
            params_per_switch,
            bits_per_param: 1,
            shots: 1,
            classical_reduction: 1.0,
        }
    }

    pub fn with_bits_per_param(mut self, b: u64) -> Self {
        self.bits_per_param = b;
        self
    }

    pub fn with_shots(mut self, r: u64) -> Self {
        self.shots = r;
        self
    }

    pub fn with_classical_reduction(mut self, rho: f64) -> Self {
        self.classical_reduction = rho;
        self
    }

    pub fn validate(&self) -> Result<(), ScalingError> {
        for (field, v) in [
            ("num_controllers", self.num_controllers),
            ("switches_per_controller", self.switches_per_controller),
            ("params_per_switch", self.params_per_switch),
            ("bits_per_param", self.bits_per_param),
            ("shots", self.shots),
        ] {
            if v == 0 {
                return Err(ScalingError::ZeroField { field });
            }
        }
        let rho = self.classical_reduction;
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(ScalingError::BadReduction(rho));
        }
        // Largest classical and quantum products must fit in u64.
        let classical = [
            self.num_controllers,
            self.switches_per_controller,
            self.params_per_switch,
            self.bits_per_param,
        ]
        .iter()
        .try_fold(1u64, |acc, &x| acc.checked_mul(x));
        let quantum = (u64::from(qubits_for_parameters(self.params_per_switch))
            + u64::from(qubits_for_parameters(self.switches_per_controller)))
        .checked_mul(self.shots)
        .and_then(|x| x.checked_mul(self.num_controllers.max(self.switches_per_controller)));
        match (classical, quantum) {
            (Some(_), Some(_)) => Ok(()),
            _ => Err(ScalingError::Overflow),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LoadUnit {
    Bits,
    Qubits,
}

impl fmt::Display for LoadUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LoadUnit::Bits => "bits",
            LoadUnit::Qubits => "qubits",
        })
    }
}

/// Per-link and aggregate traffic for one collection round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoadReport {
    /// One switch → controller link.
    pub leaf_link_load: u64,
    /// Everything arriving at one controller (`K × leaf`).
    pub controller_ingest: u64,
    /// One controller → hypervisor link.
    pub mid_link_load: u64,
    /// Everything arriving at the hypervisor (`N × mid`).
    pub hypervisor_ingest: u64,
    /// Qubits held at the hypervisor after the final join; 0 for classical.
    pub hypervisor_state_size: u64,
    pub unit: LoadUnit,
}

/// `⌈log₂ P⌉` qubits to amplitude-encode `P` values; 0 for `P ≤ 1`.
pub fn qubits_for_parameters(p: u64) -> u32 {
    if p <= 1 {
        0
    } else {
        u64::BITS - (p - 1).leading_zeros()
    }
}

/// Raw classical forwarding (optionally reduced at controllers).
pub fn classical_loads(t: &TopologySpec) -> Result<LoadReport, ScalingError> {
    t.validate()?;
    let leaf = t.params_per_switch * t.bits_per_param;
    let controller_ingest = t.switches_per_controller * leaf;
    let mid = if t.classical_reduction == 1.0 {
        controller_ingest
    } else {
        (controller_ingest as f64 * t.classical_reduction).ceil() as u64
    };
    Ok(LoadReport {
        leaf_link_load: leaf,
        controller_ingest,
        mid_link_load: mid,
        hypervisor_ingest: t.num_controllers * mid,
        hypervisor_state_size: 0,
        unit: LoadUnit::Bits,
    })
}

/// Amplitude-encoded, QRAM-joined collection repeated `t.shots` times.
pub fn quantum_loads(t: &TopologySpec) -> Result<LoadReport, ScalingError> {
    t.validate()?;
    let m = u64::from(qubits_for_parameters(t.params_per_switch));
    let lk = u64::from(qubits_for_parameters(t.switches_per_controller));
    let ln = u64::from(qubits_for_parameters(t.num_controllers));
    let leaf = m * t.shots;
    let mid = (m + lk) * t.shots;
    Ok(LoadReport {
        leaf_link_load: leaf,
        controller_ingest: t.switches_per_controller * leaf,
        mid_link_load: mid,
        hypervisor_ingest: t.num_controllers * mid,
        hypervisor_state_size: m + lk + ln,
        unit: LoadUnit::Qubits,
    })
}

/// Largest `R` with quantum leaf load `m·R` not above the classical `P·b`.
pub fn break_even_shots(t: &TopologySpec) -> Result<u64, ScalingError> {
    t.validate()?;
    let m = u64::from(qubits_for_parameters(t.params_per_switch));
    if m == 0 {
        return Err(ScalingError::DegenerateEncoding);
    }
    Ok(t.params_per_switch * t.bits_per_param / m)
}

/// Topology field a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepParam {
    N,
    K,
    P,
    R,
}

impl SweepParam {
    pub fn apply(self, t: &TopologySpec, value: u64) -> TopologySpec {
        let mut t = *t;
        match self {
            SweepParam::N => t.num_controllers = value,
            SweepParam::K => t.switches_per_controller = value,
            SweepParam::P => t.params_per_switch = value,
            SweepParam::R => t.shots = value,
        }
        t
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SweepParam::N => "N",
            SweepParam::K => "K",
            SweepParam::P => "P",
            SweepParam::R => "R",
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepParam {
    type Err = ScalingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "N" | "n" | "num_controllers" => Ok(SweepParam::N),
            "K" | "k" | "switches_per_controller" => Ok(SweepParam::K),
            "P" | "p" | "params_per_switch" => Ok(SweepParam::P),
            "R" | "r" | "shots" => Ok(SweepParam::R),
            other => Err(ScalingError::UnknownParameter(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub sweep_param: SweepParam,
    pub sweep_value: u64,
    pub classical_bits: u64,
    pub quantum_qubits: u64,
}

impl ScalingRow {
    /// `classical / quantum`; infinite when no qubits are sent.
    pub fn ratio(&self) -> f64 {
        self.classical_bits as f64 / self.quantum_qubits as f64
    }
}

/// Hypervisor ingest, classical vs quantum, for each swept value.
pub fn scaling_table(
    base: &TopologySpec,
    param: SweepParam,
    values: &[u64],
) -> Result<Vec<ScalingRow>, ScalingError> {
    values
        .iter()
        .map(|&v| {
            if v == 0 {
                return Err(ScalingError::ZeroSweepValue);
            }
            let t = param.apply(base, v);
            Ok(ScalingRow {
                sweep_param: param,
                sweep_value: v,
                classical_bits: classical_loads(&t)?.hypervisor_ingest,
                quantum_qubits: quantum_loads(&t)?.hypervisor_ingest,
            })
        })
        .collect()
}

/// `from, 2·from, 4·from, …` up to and including `to`.
pub fn doubling_range(from: u64, to: u64) -> Vec<u64> {
    std::iter::successors(Some(from.max(1)), |&v| v.checked_mul(2))
        .take_while(|&v| v <= to)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn reference() -> TopologySpec {
        TopologySpec::new(1024, 1024, 2000)
    }

    #[test]
    fn parameter_qubits() {
        assert_eq!(qubits_for_parameters(2000), 11);
        assert_eq!(qubits_for_parameters(1), 0);
        assert_eq!(qubits_for_parameters(1024), 10);
        assert_eq!(qubits_for_parameters(1025), 11);
        // log oracle
        for p in 2u64..5000 {
            assert_eq!(
                qubits_for_parameters(p),
                (p as f64).log2().ceil() as u32,
                "p = {p}"
            );
        }
    }

    #[test]
    fn classical_reference_network() {
        let c = classical_loads(&reference()).unwrap();
        assert_eq!(c.mid_link_load, 2_048_000);
        assert_eq!(c.hypervisor_ingest, 2_097_152_000);
        assert_eq!(c.hypervisor_state_size, 0);
        assert_eq!(c.unit, LoadUnit::Bits);
    }

    #[test]
    fn classical_small_networks() {
        let c = classical_loads(&TopologySpec::new(1, 1, 1)).unwrap();
        assert_eq!(
            (
                c.leaf_link_load,
                c.controller_ingest,
                c.mid_link_load,
                c.hypervisor_ingest
            ),
            (1, 1, 1, 1)
        );
        let c = classical_loads(&TopologySpec::new(2, 3, 4).with_bits_per_param(8)).unwrap();
        assert_eq!(c.leaf_link_load, 32);
        assert_eq!(c.controller_ingest, 96);
        assert_eq!(c.hypervisor_ingest, 192);
    }

    #[test]
    fn classical_reduction_scales_mid_link() {
        let c =
            classical_loads(&TopologySpec::new(2, 3, 4).with_classical_reduction(0.25)).unwrap();
        assert_eq!(c.controller_ingest, 12);
        assert_eq!(c.mid_link_load, 3);
        assert_eq!(c.hypervisor_ingest, 6);
        let c = classical_loads(&TopologySpec::new(1, 1, 3).with_classical_reduction(0.5)).unwrap();
        assert_eq!(c.mid_link_load, 2);
    }

    #[test]
    fn quantum_reference_network() {
        let q = quantum_loads(&reference()).unwrap();
        assert_eq!(q.hypervisor_state_size, 31);
        assert_eq!(q.leaf_link_load, 11);
        assert_eq!(q.controller_ingest, 11 * 1024);
        assert_eq!(q.mid_link_load, 21);
        assert_eq!(q.hypervisor_ingest, 21 * 1024);
        assert_eq!(q.unit, LoadUnit::Qubits);
    }

    #[test]
    fn quantum_repetition_multiplies_traffic_not_state() {
        let one = quantum_loads(&reference()).unwrap();
        let hundred = quantum_loads(&reference().with_shots(100)).unwrap();
        assert_eq!(hundred.leaf_link_load, 100 * one.leaf_link_load);
        assert_eq!(hundred.controller_ingest, 100 * one.controller_ingest);
        assert_eq!(hundred.mid_link_load, 100 * one.mid_link_load);
        assert_eq!(hundred.hypervisor_ingest, 100 * one.hypervisor_ingest);
        assert_eq!(hundred.hypervisor_state_size, 31);
    }

    #[test]
    fn degenerate_quantum_network() {
        let q = quantum_loads(&TopologySpec::new(1, 1, 1)).unwrap();
        assert_eq!(
            (
                q.leaf_link_load,
                q.controller_ingest,
                q.mid_link_load,
                q.hypervisor_ingest,
                q.hypervisor_state_size
            ),
            (0, 0, 0, 0, 0)
        );
    }

    #[test]
    fn break_even_values() {
        assert_eq!(
            break_even_shots(&TopologySpec::new(1, 1, 2000)).unwrap(),
            181
        );
        assert_eq!(break_even_shots(&TopologySpec::new(1, 1, 2)).unwrap(), 2);
        assert_eq!(
            break_even_shots(&TopologySpec::new(1, 1, 2000).with_bits_per_param(8)).unwrap(),
            1454
        );
        assert_eq!(
            break_even_shots(&TopologySpec::new(1, 1, 1)),
            Err(ScalingError::DegenerateEncoding)
        );
    }

    #[test]
    fn break_even_is_maximal_by_scan() {
        for p in 2u64..=300 {
            for b in [1u64, 2, 8] {
                let base = TopologySpec::new(1, 1, p).with_bits_per_param(b);
                let classical = classical_loads(&base).unwrap().leaf_link_load;
                let scanned = (1..=p * b + 1)
                    .take_while(|&r| {
                        quantum_loads(&base.with_shots(r)).unwrap().leaf_link_load <= classical
                    })
                    .last()
                    .unwrap();
                assert_eq!(
                    break_even_shots(&base).unwrap(),
                    scanned,
                    "p = {p}, b = {b}"
                );
            }
        }
    }

    #[test]
    fn validation() {
        assert_eq!(
            TopologySpec::new(0, 1, 1).validate(),
            Err(ScalingError::ZeroField {
                field: "num_controllers"
            })
        );
        assert_eq!(
            TopologySpec::new(1, 1, 1).with_shots(0).validate(),
            Err(ScalingError::ZeroField { field: "shots" })
        );
        assert!(matches!(
            TopologySpec::new(1, 1, 1)
                .with_classical_reduction(0.0)
                .validate(),
            Err(ScalingError::BadReduction(_))
        ));
        assert_eq!(
            TopologySpec::new(u64::MAX, 2, 2).validate(),
            Err(ScalingError::Overflow)
        );
    }

    #[test]
    fn sweep_parsing() {
        assert_eq!("K".parse::<SweepParam>().unwrap(), SweepParam::K);
        assert_eq!("shots".parse::<SweepParam>().unwrap(), SweepParam::R);
        assert_eq!(
            "Q".parse::<SweepParam>(),
            Err(ScalingError::UnknownParameter("Q".into()))
        );
    }

    #[test]
    fn single_value_sweep_matches_direct_calls() {
        let rows = scaling_table(&reference(), SweepParam::K, &[1024]).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(
            rows[0].classical_bits,
            classical_loads(&reference()).unwrap().hypervisor_ingest
        );
        assert_eq!(
            rows[0].quantum_qubits,
            quantum_loads(&reference()).unwrap().hypervisor_ingest
        );
        assert_eq!(
            scaling_table(&reference(), SweepParam::K, &[0]),
            Err(ScalingError::ZeroSweepValue)
        );
    }

    #[test]
    fn k_sweep_is_linear_vs_logarithmic() {
        let values = doubling_range(2, 1024);
        assert_eq!(values, vec![2, 4, 8, 16, 32, 64, 128, 256, 512, 1024]);
        let rows = scaling_table(&reference(), SweepParam::K, &values).unwrap();
        for (j, row) in (1u64..).zip(&rows) {
            assert_eq!(row.classical_bits, 1024 * 2000 * (1 << j));
            assert_eq!(row.quantum_qubits, 1024 * (11 + j));
        }
    }

    #[test]
    fn p_sweep_leaf_growth() {
        for j in 1u32..=20 {
            let t = TopologySpec::new(1, 1, 1u64 << j);
            assert_eq!(quantum_loads(&t).unwrap().leaf_link_load, u64::from(j));
            assert_eq!(classical_loads(&t).unwrap().leaf_link_load, 1u64 << j);
        }
    }

    #[test]
    fn ratio_on_doubling_p_follows_encoding_growth() {
        // Doubling P doubles classical ingest; quantum ingest grows by N·R
        // only when ⌈log₂ P⌉ steps up.
        for k in [1u64, 2, 16, 1024] {
            for p in 2u64..2048 {
                let a = TopologySpec::new(4, k, p);
                let b = TopologySpec::new(4, k, 2 * p);
                let ra = scaling_table(&a, SweepParam::P, &[p]).unwrap()[0].ratio();
                let rb = scaling_table(&b, SweepParam::P, &[2 * p]).unwrap()[0].ratio();
                let width_a = (qubits_for_parameters(p) + qubits_for_parameters(k)) as f64;
                let width_b = (qubits_for_parameters(2 * p) + qubits_for_parameters(k)) as f64;
                let expected = 2.0 * width_a / width_b;
                assert!(
                    ((rb / ra) - expected).abs() <= 1e-12 * expected,
                    "k {k} p {p}"
                );
                assert!(rb >= ra);
                if qubits_for_parameters(2 * p) == qubits_for_parameters(p) {
                    assert!((rb / ra - 2.0).abs() < 1e-12);
                }
            }
        }
    }

    fn fields(r: &LoadReport) -> [u64; 5] {
        [
            r.leaf_link_load,
            r.controller_ingest,
            r.mid_link_load,
            r.hypervisor_ingest,
            r.hypervisor_state_size,
        ]
    }

    proptest! {
        #[test]
        fn loads_monotone_in_every_field(
            n in 1u64..200, k in 1u64..200, p in 1u64..5000, b in 1u64..16, r in 1u64..50,
            which in 0usize..5,
        ) {
            let t = TopologySpec::new(n, k, p).with_bits_per_param(b).with_shots(r);
            let mut bumped = t;
            match which {
                0 => bumped.num_controllers += 1,
                1 => bumped.switches_per_controller += 1,
                2 => bumped.params_per_switch += 1,
                3 => bumped.bits_per_param += 1,
                _ => bumped.shots += 1,
            }
            for f in [classical_loads, quantum_loads] {
                let lo = fields(&f(&t).unwrap());
                let hi = fields(&f(&bumped).unwrap());
                for (a, b) in lo.iter().zip(&hi) {
                    prop_assert!(a <= b);
                }
            }
        }

        #[test]
        fn aggregate_invariants(n in 1u64..5000, k in 1u64..5000, p in 1u64..5000, r in 1u64..100) {
            let t = TopologySpec::new(n, k, p).with_shots(r);
            for rep in [classical_loads(&t).unwrap(), quantum_loads(&t).unwrap()] {
                prop_assert_eq!(rep.controller_ingest, k * rep.leaf_link_load);
                prop_assert_eq!(rep.hypervisor_ingest, n * rep.mid_link_load);
            }
            let q1 = quantum_loads(&t.with_shots(1)).unwrap();
            prop_assert_eq!(quantum_loads(&t).unwrap().leaf_link_load, r * q1.leaf_link_load);
        }
    }
}
