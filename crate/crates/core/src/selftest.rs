//! Reference-network arithmetic checks: `N = K = 1024` controllers and
//! switches, 2000 one-bit parameters per switch.

use serde::Serialize;

use crate::scaling::{
    break_even_shots, classical_loads, quantum_loads, qubits_for_parameters, TopologySpec,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub observed: String,
    pub expected: String,
    pub pass: bool,
}

impl Check {
    fn new(name: &'static str, observed: String, expected: String) -> Self {
        let pass = observed == expected;
        Self {
            name,
            observed,
            expected,
            pass,
        }
    }
}

pub fn reference_topology() -> TopologySpec {
    TopologySpec::new(1024, 1024, 2000)
}

pub fn run() -> Vec<Check> {
    let t = reference_topology();
    let q = quantum_loads(&t).expect("reference topology is valid");
    let c = classical_loads(&t).expect("reference topology is valid");
    let q100 = quantum_loads(&t.with_shots(100)).expect("reference topology is valid");

    let scaled = [
        q100.leaf_link_load == 100 * q.leaf_link_load,
        q100.controller_ingest == 100 * q.controller_ingest,
        q100.mid_link_load == 100 * q.mid_link_load,
        q100.hypervisor_ingest == 100 * q.hypervisor_ingest,
    ]
    .iter()
    .all(|&ok| ok);

    let leaf = TopologySpec::new(1, 1, 2000);
    let be = break_even_shots(&leaf).expect("P = 2000 encodes into 11 qubits");
    let classical_leaf = classical_loads(&leaf).expect("valid").leaf_link_load;
    let fits = |r: u64| {
        quantum_loads(&leaf.with_shots(r))
            .expect("valid")
            .leaf_link_load
            <= classical_leaf
    };
    let scanned = (1..=classical_leaf)
        .take_while(|&r| fits(r))
        .last()
        .unwrap_or(0);

    vec![
        Check::new(
            "qubits_for_parameters(2000)",
            qubits_for_parameters(2000).to_string(),
            "11".into(),
        ),
        Check::new(
            "quantum hypervisor_state_size",
            q.hypervisor_state_size.to_string(),
            "31".into(),
        ),
        Check::new(
            "quantum controller_ingest/hypervisor_ingest",
            format!("{}/{}", q.controller_ingest, q.hypervisor_ingest),
            "11264/21504".into(),
        ),
        Check::new(
            "classical mid_link_load/hypervisor_ingest",
            format!("{}/{}", c.mid_link_load, c.hypervisor_ingest),
            "2048000/2097152000".into(),
        ),
        Check::new(
            "R=100 quantum loads x100, state size",
            format!("{}/{}", scaled, q100.hypervisor_state_size),
            "true/31".into(),
        ),
        Check::new(
            "break_even_shots(P=2000,b=1) (often rounded to 200)",
            format!("{be}/{scanned}"),
            "181/181".into(),
        ),
    ]
}

#[cfg(test)]
mod tests {
    #[test]
    fn all_checks_pass() {
        let checks = super::run();
        assert_eq!(checks.len(), 6);
        for c in checks {
            assert!(c.pass, "{c:?}");
        }
    }
}
