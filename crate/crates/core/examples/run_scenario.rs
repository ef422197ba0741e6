//! Run a scenario file and list the report it writes.
//!
//! ```text
//! cargo run --example run_scenario -- [config.json] [output-dir]
//! ```

use std::path::PathBuf;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args_os().skip(1);
    let config = args.next().map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios/paper_example.json")
    });
    let out = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("qsdn-example-report"));

    for path in qsdn::run_scenario(&config, &out)? {
        let size = std::fs::metadata(&path)?.len();
        println!("{:>8} bytes  {}", size, path.display());
    }
    print!("{}", std::fs::read_to_string(out.join("summary.csv"))?);
    Ok(())
}
