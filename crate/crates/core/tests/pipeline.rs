//! Cross-module checks: real joins against the closed-form accounting, and
//! estimator behaviour across shot counts.

use qsdn::statevector::qubits_for_len;
use qsdn::{
    address_marginal, estimate_expectation, join_from_raw, qram_join, quantum_loads,
    simulate_collection, ClassicalVector, EnergyModel, LinkSpec, QuantumState, TierLinks,
    TopologySpec, TransportMode, WeightMode,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_vector(rng: &mut ChaCha8Rng, len: usize) -> ClassicalVector {
    ClassicalVector::new((0..len).map(|_| rng.gen_range(0.1..5.0)).collect())
}

/// Build the hypervisor state for an `n × k × p` network by actually joining.
fn hypervisor_state(n: usize, k: usize, p: usize, seed: u64) -> QuantumState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let controllers: Vec<QuantumState> = (0..n)
        .map(|_| {
            let switches: Vec<ClassicalVector> =
                (0..k).map(|_| random_vector(&mut rng, p)).collect();
            join_from_raw(&switches).unwrap().into_state()
        })
        .collect();
    qram_join(&controllers, &[], WeightMode::Uniform)
        .unwrap()
        .into_state()
}

#[test]
fn two_level_join_matches_closed_form_state_size() {
    for (n, k, p) in [(4, 4, 8), (1, 1, 1), (3, 5, 7), (2, 8, 33), (8, 2, 2)] {
        let state = hypervisor_state(n, k, p, (n * 100 + k * 10 + p) as u64);
        let loads = quantum_loads(&TopologySpec::new(n as u64, k as u64, p as u64)).unwrap();
        assert_eq!(
            u64::from(state.num_qubits()),
            loads.hypervisor_state_size,
            "{n} {k} {p}"
        );
        assert!((state.norm_sqr() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn hypervisor_can_recover_each_controller() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let controllers: Vec<QuantumState> = (0..4)
        .map(|_| {
            let switches: Vec<ClassicalVector> =
                (0..4).map(|_| random_vector(&mut rng, 8)).collect();
            join_from_raw(&switches).unwrap().into_state()
        })
        .collect();
    let top = qram_join(&controllers, &[], WeightMode::Uniform).unwrap();
    for (k, c) in controllers.iter().enumerate() {
        let (p, cond) = address_marginal(&top, k).unwrap();
        assert!((p - 0.25).abs() < 1e-12);
        assert!(cond.fidelity(c).unwrap() >= 1.0 - 1e-10);
    }
}

#[test]
fn std_error_shrinks_tenfold_per_hundredfold_shots() {
    let source = ClassicalVector::new(vec![1.0, 1.0]);
    let observable = ClassicalVector::new(vec![0.0, 1.0]);
    let mut ratios = Vec::new();
    for seed in 0..50u64 {
        let small = estimate_expectation(&source, &observable, 100, seed).unwrap();
        let large = estimate_expectation(&source, &observable, 10_000, seed + 1000).unwrap();
        assert!(large.std_error < small.std_error);
        ratios.push(small.std_error / large.std_error);
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    assert!((7.0..=13.0).contains(&mean), "mean ratio {mean}");
}

#[test]
fn qubits_sent_scale_with_source_dimension() {
    let observable = ClassicalVector::new(vec![1.0; 300]);
    for len in [2usize, 3, 17, 300] {
        let source = ClassicalVector::new(vec![1.0; len]);
        let obs = ClassicalVector::new(observable.values()[..len].to_vec());
        let e = estimate_expectation(&source, &obs, 40, 1).unwrap();
        assert_eq!(e.qubits_sent, 40 * u64::from(qubits_for_len(len)));
        assert!((e.estimate - 1.0).abs() < 1e-12);
    }
}

#[test]
fn collection_round_uses_slower_quantum_links_when_configured() {
    let t = TopologySpec::new(16, 16, 2000);
    let mut links = TierLinks {
        leaf: LinkSpec::symmetric(1e6, 1e4, 1e-5),
        mid: LinkSpec::symmetric(1e7, 1e5, 1e-4),
    };
    let energy = EnergyModel {
        per_bit_tx: 1e-9,
        per_instruction: 0.0,
        instructions_per_bit_processed: 0.0,
        bandwidth_scaling: 1e7,
    };
    let fast = simulate_collection(&t, &links, TransportMode::Quantum, 1, &energy).unwrap();
    links.leaf.q_capacity = 1e3;
    links.mid.q_capacity = 1e4;
    let slow = simulate_collection(&t, &links, TransportMode::Quantum, 1, &energy).unwrap();
    assert!(slow.end_to_end > fast.end_to_end);
    assert_eq!(slow.loads, fast.loads);
    // energy is charged against the quantum mid-link rate
    assert!((slow.energy / fast.energy - 1e3).abs() < 1e-9);
}
