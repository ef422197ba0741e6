//! Encode a telemetry vector into qubit amplitudes and sample it.
//!
//! ```text
//! cargo run --example amplitude_encoding
//! ```

use qsdn::{amplitude_encode, estimate_expectation, measure_sample, ClassicalVector};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let telemetry = ClassicalVector::new(vec![0.9, 0.1, 0.4, 0.7, 0.2]);
    let state = amplitude_encode(&telemetry)?;
    println!(
        "{} values -> {} qubits ({} amplitudes)",
        telemetry.len(),
        state.num_qubits(),
        state.dim()
    );
    for (i, (a, p)) in state
        .amplitudes()
        .iter()
        .zip(state.probabilities())
        .enumerate()
    {
        println!("  |{i:03b}>  amplitude {:+.4}  probability {p:.4}", a.re);
    }

    let hist = measure_sample(&state, 10_000, 42)?;
    println!("10000 shots:");
    for (outcome, count) in hist.counts() {
        println!("  |{outcome:03b}>  {count}");
    }

    // weight of the 4th parameter, estimated from repeated encodings
    let observable = ClassicalVector::new(vec![0.0, 0.0, 0.0, 1.0, 0.0]);
    for shots in [100, 10_000] {
        let e = estimate_expectation(&telemetry, &observable, shots, 7)?;
        println!(
            "shots {shots:>6}: estimate {:.4} ± {:.4}, {} qubits sent",
            e.estimate, e.std_error, e.qubits_sent
        );
    }
    Ok(())
}
