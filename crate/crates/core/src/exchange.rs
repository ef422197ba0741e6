//! Moving load between the classical and quantum planes with stored
//! entanglement.
//!
//! Teleportation sends one qubit for one ebit plus two classical bits; dense
//! coding sends two classical bits for one ebit plus one qubit. A link holds a
//! [`ResourceLedger`] of pre-shared ebits; [`balance_link`] picks how many
//! conversions to perform in one direction, and [`ResourceLedger::apply`]
//! debits the ebits and records the event.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExchangeError {
    #[error("link capacities must be positive (classical {classical}, quantum {quantum})")]
    ZeroCapacity { classical: u64, quantum: u64 },
    #[error(
        "no plan fits either plane: best utilization is classical {:.3}, quantum {:.3}",
        best.utilization.0,
        best.utilization.1
    )]
    Infeasible { best: Box<TransferPlan> },
    #[error("plan needs {needed} ebits but the ledger holds {available}")]
    InsufficientEbits { needed: u64, available: u64 },
    #[error("plan converts in both directions at once")]
    MixedDirections,
}

/// Teleporting `q` qubits: `(ebits, cbits)`.
pub fn teleport_cost(q: u64) -> (u64, u64) {
    (q, 2 * q)
}

/// Dense-coding `c` classical bits: `(ebits, qubits)`, rounding odd `c` up.
pub fn dense_code_cost(c: u64) -> (u64, u64) {
    let pairs = c.div_ceil(2);
    (pairs, pairs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkLoad {
    pub cbits: u64,
    pub qubits: u64,
}

impl LinkLoad {
    pub fn new(cbits: u64, qubits: u64) -> Self {
        Self { cbits, qubits }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConversionKind {
    Teleport,
    DenseCode,
}

impl fmt::Display for ConversionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConversionKind::Teleport => "teleport",
            ConversionKind::DenseCode => "dense_code",
        })
    }
}

/// One debit against a ledger.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConversionEvent {
    pub sequence: u64,
    pub kind: ConversionKind,
    /// Qubits teleported or classical bits dense-coded.
    pub units: u64,
    pub ebits_consumed: u64,
    pub ebits_after: u64,
}

/// Entanglement stock and per-round capacities of one link.
///
/// Ebits are only consumed; replenishment is not modelled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResourceLedger {
    ebits: u64,
    classical_capacity: u64,
    quantum_capacity: u64,
    #[serde(default)]
    events: Vec<ConversionEvent>,
}

impl ResourceLedger {
    pub fn new(ebits: u64, classical_capacity: u64, quantum_capacity: u64) -> Self {
        Self {
            ebits,
            classical_capacity,
            quantum_capacity,
            events: Vec::new(),
        }
    }

    pub fn ebits(&self) -> u64 {
        self.ebits
    }

    pub fn classical_capacity(&self) -> u64 {
        self.classical_capacity
    }

    pub fn quantum_capacity(&self) -> u64 {
        self.quantum_capacity
    }

    pub fn events(&self) -> &[ConversionEvent] {
        &self.events
    }

    /// Debit the plan's ebits and log the conversion. Zero-conversion plans
    /// leave the ledger untouched.
    pub fn apply(&mut self, plan: &TransferPlan) -> Result<(), ExchangeError> {
        let (kind, units) = match (plan.qubits_teleported, plan.cbits_densecoded) {
            (0, 0) => return Ok(()),
            (x, 0) => (ConversionKind::Teleport, x),
            (0, c) => (ConversionKind::DenseCode, c),
            _ => return Err(ExchangeError::MixedDirections),
        };
        if plan.ebits_consumed > self.ebits {
            return Err(ExchangeError::InsufficientEbits {
                needed: plan.ebits_consumed,
                available: self.ebits,
            });
        }
        self.ebits -= plan.ebits_consumed;
        self.events.push(ConversionEvent {
            sequence: self.events.len() as u64,
            kind,
            units,
            ebits_consumed: plan.ebits_consumed,
            ebits_after: self.ebits,
        });
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransferPlan {
    pub qubits_teleported: u64,
    /// Always even: dense coding moves bits in pairs.
    pub cbits_densecoded: u64,
    pub resulting_load: LinkLoad,
    pub ebits_consumed: u64,
    /// `(classical, quantum)` load over capacity after conversion.
    pub utilization: (f64, f64),
}

impl TransferPlan {
    pub fn max_utilization(&self) -> f64 {
        self.utilization.0.max(self.utilization.1)
    }

    pub fn is_noop(&self) -> bool {
        self.ebits_consumed == 0
    }
}

/// What [`balance_link_with`] minimises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BalanceObjective {
    /// Minimise `max(util_c, util_q, 1)`: spend ebits only to pull an
    /// overloaded plane back under capacity, never to lower utilization that
    /// already fits.
    #[default]
    FitCapacity,
    /// Minimise `max(util_c, util_q)` outright.
    MinMaxUtilization,
}

/// Exact non-negative rational for utilization comparisons.
#[derive(Debug, Clone, Copy)]
struct Ratio {
    num: u128,
    den: u128,
}

impl Ratio {
    fn new(num: u64, den: u64) -> Self {
        Self {
            num: num.into(),
            den: den.into(),
        }
    }

    fn max(self, other: Ratio) -> Ratio {
        if self.cmp(&other) == Ordering::Less {
            other
        } else {
            self
        }
    }

    fn exceeds_one(self) -> bool {
        self.num > self.den
    }
}

impl PartialEq for Ratio {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Ratio {}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

struct Candidate {
    teleported: u64,
    dense_pairs: u64,
    load: LinkLoad,
    cost: Ratio,
    util_c: Ratio,
    util_q: Ratio,
}

impl Candidate {
    fn ebits(&self) -> u64 {
        self.teleported + self.dense_pairs
    }
}

fn evaluate(
    load: LinkLoad,
    teleported: u64,
    dense_pairs: u64,
    ledger: &ResourceLedger,
    objective: BalanceObjective,
) -> Candidate {
    let next = LinkLoad {
        cbits: load.cbits + 2 * teleported - 2 * dense_pairs,
        qubits: load.qubits - teleported + dense_pairs,
    };
    let util_c = Ratio::new(next.cbits, ledger.classical_capacity);
    let util_q = Ratio::new(next.qubits, ledger.quantum_capacity);
    let peak = util_c.max(util_q);
    let cost = match objective {
        BalanceObjective::FitCapacity => peak.max(Ratio::new(1, 1)),
        BalanceObjective::MinMaxUtilization => peak,
    };
    Candidate {
        teleported,
        dense_pairs,
        load: next,
        cost,
        util_c,
        util_q,
    }
}

/// [`balance_link_with`] under [`BalanceObjective::FitCapacity`].
pub fn balance_link(
    load: LinkLoad,
    ledger: &ResourceLedger,
) -> Result<TransferPlan, ExchangeError> {
    balance_link_with(load, ledger, BalanceObjective::default())
}

/// Choose a one-directional conversion for `load` on a link.
///
/// Teleporting `x` qubits moves the load to `(cbits + 2x, qubits − x)`;
/// dense-coding `2y` bits moves it to `(cbits − 2y, qubits + y)`. Every
/// feasible `x` and `y` is scanned exhaustively; among equal objective values
/// the plan consuming the fewest ebits wins, then the no-op, then teleport
/// before dense coding. Errors with [`ExchangeError::Infeasible`] when even
/// the best plan leaves both planes over capacity.
pub fn balance_link_with(
    load: LinkLoad,
    ledger: &ResourceLedger,
    objective: BalanceObjective,
) -> Result<TransferPlan, ExchangeError> {
    if ledger.classical_capacity == 0 || ledger.quantum_capacity == 0 {
        return Err(ExchangeError::ZeroCapacity {
            classical: ledger.classical_capacity,
            quantum: ledger.quantum_capacity,
        });
    }
    let max_teleport = load.qubits.min(ledger.ebits);
    let max_pairs = (load.cbits / 2).min(ledger.ebits);

    let candidates = std::iter::once((0, 0))
        .chain((1..=max_teleport).map(|x| (x, 0)))
        .chain((1..=max_pairs).map(|y| (0, y)));
    let mut best: Option<Candidate> = None;
    for (x, y) in candidates {
        let c = evaluate(load, x, y, ledger, objective);
        let better = match &best {
            None => true,
            Some(b) => match c.cost.cmp(&b.cost) {
                Ordering::Less => true,
                Ordering::Equal => c.ebits() < b.ebits(),
                Ordering::Greater => false,
            },
        };
        if better {
            best = Some(c);
        }
    }
    let best = best.expect("the no-op plan is always a candidate");

    let plan = TransferPlan {
        qubits_teleported: best.teleported,
        cbits_densecoded: 2 * best.dense_pairs,
        resulting_load: best.load,
        ebits_consumed: best.ebits(),
        utilization: (
            best.load.cbits as f64 / ledger.classical_capacity as f64,
            best.load.qubits as f64 / ledger.quantum_capacity as f64,
        ),
    };
    if best.util_c.exceeds_one() && best.util_q.exceeds_one() {
        return Err(ExchangeError::Infeasible {
            best: Box::new(plan),
        });
    }
    Ok(plan)
}
