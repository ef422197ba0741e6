//! Command-line front end.
//!
//! Every subcommand accepts `--seed`, `--output` and `--format csv|json`.
//! Output goes to stdout unless `--output` names a file; `run` writes a
//! directory of reports instead (`--output`, then `$QSDN_OUTPUT_DIR`, then
//! `./qsdn-report`).
//!
//! Exit codes: 0 success, 1 selftest failure, 2 parse, 3 validation, 4 i/o,
//! 5 infeasible balance.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::{Error, Result};
use crate::exchange::{balance_link_with, BalanceObjective, LinkLoad, ResourceLedger};
use crate::qram::{join_from_raw, qram_join, WeightMode};
use crate::report::{fmt_real, to_json, write_atomic, CsvTable};
use crate::scaling::{doubling_range, scaling_table, SweepParam, TopologySpec};
use crate::scenario::{self, run_scenario, BalanceOutcome, ScenarioConfig};
use crate::selftest;
use crate::statevector::{amplitude_encode, measure_sample, ClassicalVector};

pub const OUTPUT_DIR_ENV: &str = "QSDN_OUTPUT_DIR";
pub const DEFAULT_OUTPUT_DIR: &str = "qsdn-report";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum JoinMode {
    Uniform,
    NormProportional,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    FitCapacity,
    MinMax,
}

#[derive(Debug, Parser)]
#[command(
    name = "qsdn",
    version,
    about = "Hybrid classical-quantum SDN control-plane simulator"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Seed for every sampled quantity.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file (directory for `run`); stdout when omitted.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Amplitude-encode a vector file.
    Encode {
        /// One value per line, or a JSON array.
        input: PathBuf,
        /// Also sample this many measurements.
        #[arg(long)]
        shots: Option<u64>,
    },
    /// QRAM-join a set of vectors.
    Join {
        /// JSON array of arrays, or one-value-per-line blocks separated by blank lines.
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = JoinMode::NormProportional)]
        mode: JoinMode,
    },
    /// Classical vs quantum hypervisor ingest over a parameter sweep.
    Scale(ScaleArgs),
    /// One collection round per mode of a scenario file.
    Simulate { config: PathBuf },
    /// Plan teleportation / dense coding for one link.
    Balance(BalanceArgs),
    /// Check the reference-network arithmetic.
    Selftest,
    /// Run a scenario file and write its report directory.
    Run { config: PathBuf },
}

#[derive(Debug, Args)]
pub struct ScaleArgs {
    /// Parameter to sweep: N, K, P or R.
    #[arg(long, default_value = "K")]
    pub sweep: String,
    /// First value of a doubling sweep.
    #[arg(long, default_value_t = 2)]
    pub from: u64,
    /// Last value (inclusive) of a doubling sweep.
    #[arg(long, default_value_t = 1024)]
    pub to: u64,
    /// Explicit comma-separated values; overrides --from/--to.
    #[arg(long, value_delimiter = ',')]
    pub values: Option<Vec<u64>>,
    #[arg(long, default_value_t = 1024)]
    pub n: u64,
    #[arg(long, default_value_t = 1024)]
    pub k: u64,
    #[arg(long, default_value_t = 2000)]
    pub p: u64,
    #[arg(long, default_value_t = 1)]
    pub b: u64,
    #[arg(long, default_value_t = 1)]
    pub r: u64,
}

#[derive(Debug, Args)]
pub struct BalanceArgs {
    #[arg(long)]
    pub cbits: u64,
    #[arg(long)]
    pub qubits: u64,
    #[arg(long)]
    pub ebits: u64,
    #[arg(long)]
    pub classical_capacity: u64,
    #[arg(long)]
    pub quantum_capacity: u64,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::FitCapacity)]
    pub objective: ObjectiveArg,
}

/// Parse `args` and run; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("qsdn: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli) -> Result<()> {
    let g = &cli.global;
    match &cli.command {
        Command::Encode { input, shots } => {
            emit(g, encode(input, *shots, g.seed.unwrap_or(0), g.format)?)
        }
        Command::Join { input, mode } => emit(g, join(input, *mode, g.format)?),
        Command::Scale(args) => emit(g, scale(args, g.format)?),
        Command::Simulate { config } => emit(g, simulate(config, g.seed, g.format)?),
        Command::Balance(args) => emit(g, balance(args, g.format)?),
        Command::Selftest => {
            let checks = selftest::run();
            let text = match g.format {
                Format::Json => to_json(&checks),
                Format::Csv => {
                    let mut out = String::new();
                    for c in &checks {
                        out.push_str(&format!(
                            "{}  {} = {} (expected {})\n",
                            if c.pass { "PASS" } else { "FAIL" },
                            c.name,
                            c.observed,
                            c.expected
                        ));
                    }
                    let passed = checks.iter().filter(|c| c.pass).count();
                    out.push_str(&format!(
                        "selftest: {passed}/{} {}\n",
                        checks.len(),
                        if passed == checks.len() {
                            "PASS"
                        } else {
                            "FAIL"
                        }
                    ));
                    out
                }
            };
            emit(g, text)?;
            let failed = checks.iter().filter(|c| !c.pass).count();
            if failed > 0 {
                return Err(Error::SelfTest {
                    failed,
                    total: checks.len(),
                });
            }
            Ok(())
        }
        Command::Run { config } => {
            let dir = g
                .output
                .clone()
                .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR));
            match g.seed {
                None => run_scenario(config, &dir)?,
                Some(seed) => {
                    let mut cfg = ScenarioConfig::load(config)?;
                    cfg.seed = seed;
                    write_report_dir(&cfg, &dir)?
                }
            };
            Ok(())
        }
    }
}

fn write_report_dir(cfg: &ScenarioConfig, dir: &Path) -> Result<Vec<PathBuf>> {
    let report = scenario::evaluate(cfg)?;
    let files: Vec<(PathBuf, String)> = report
        .files()
        .into_iter()
        .map(|(n, c)| (dir.join(n), c))
        .collect();
    crate::report::write_all_atomic(&files)?;
    Ok(files.into_iter().map(|(p, _)| p).collect())
}

fn emit(g: &GlobalArgs, text: String) -> Result<()> {
    match &g.output {
        Some(path) => write_atomic(path, &text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .map_err(|e| Error::io("<stdout>", e))
        }
    }
}

fn read_input(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn parse_number(token: &str, line: usize) -> Result<f64> {
    token
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("line {line}: `{token}` is not a number")))
}

/// One value per line (blank lines and `#` comments skipped), or a JSON array.
pub fn parse_vector(text: &str) -> Result<ClassicalVector> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') {
        let values: Vec<f64> =
            serde_json::from_str(trimmed).map_err(|e| Error::Parse(e.to_string()))?;
        return Ok(ClassicalVector::new(values));
    }
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if !line.is_empty() {
            values.push(parse_number(line, i + 1)?);
        }
    }
    Ok(ClassicalVector::new(values))
}

/// JSON array of arrays, or one-value-per-line blocks separated by blank lines.
pub fn parse_vector_set(text: &str) -> Result<Vec<ClassicalVector>> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') {
        let sets: Vec<Vec<f64>> =
            serde_json::from_str(trimmed).map_err(|e| Error::Parse(e.to_string()))?;
        return Ok(sets.into_iter().map(ClassicalVector::new).collect());
    }
    let mut sets = Vec::new();
    let mut current = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        if raw.trim().starts_with('#') {
            continue;
        }
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            if !current.is_empty() {
                sets.push(ClassicalVector::new(std::mem::take(&mut current)));
            }
        } else {
            current.push(parse_number(line, i + 1)?);
        }
    }
    if !current.is_empty() {
        sets.push(ClassicalVector::new(current));
    }
    Ok(sets)
}

pub fn encode(input: &Path, shots: Option<u64>, seed: u64, format: Format) -> Result<String> {
    let v = parse_vector(&read_input(input)?)?;
    let state = amplitude_encode(&v)?;
    let histogram = match shots {
        Some(n) => Some(measure_sample(&state, n, seed)?),
        None => None,
    };
    let probs = state.probabilities();
    Ok(match format {
        Format::Json => to_json(&json!({
            "num_qubits": state.num_qubits(),
            "amplitudes": state.amplitudes().iter().map(|a| a.re).collect::<Vec<_>>(),
            "probabilities": probs,
            "counts": histogram.as_ref().map(|h| h.counts()),
        })),
        Format::Csv => {
            let mut header = vec!["index", "amplitude", "probability"];
            if histogram.is_some() {
                header.push("count");
            }
            let mut t = CsvTable::new(&header);
            for (i, (a, p)) in state.amplitudes().iter().zip(&probs).enumerate() {
                let mut row = vec![i.to_string(), fmt_real(a.re), fmt_real(*p)];
                if let Some(h) = &histogram {
                    row.push(h.count(i).to_string());
                }
                t.row(row);
            }
            t.finish()
        }
    })
}

pub fn join(input: &Path, mode: JoinMode, format: Format) -> Result<String> {
    let vectors = parse_vector_set(&read_input(input)?)?;
    let joined = match mode {
        JoinMode::NormProportional => join_from_raw(&vectors)?,
        JoinMode::Uniform => {
            let states = vectors
                .iter()
                .map(amplitude_encode)
                .collect::<Result<Vec<_>, _>>()?;
            qram_join(&states, &[], WeightMode::Uniform)?
        }
    };
    let s = joined.state();
    let data_dim = 1usize << joined.data_qubits();
    Ok(match format {
        Format::Json => to_json(&json!({
            "num_qubits": s.num_qubits(),
            "address_qubits": joined.address_qubits(),
            "data_qubits": joined.data_qubits(),
            "num_sources": joined.num_sources(),
            "weight_mode": joined.weight_mode(),
            "amplitudes": s.amplitudes().iter().map(|a| a.re).collect::<Vec<_>>(),
            "branch_probabilities": joined.branch_probabilities(),
        })),
        Format::Csv => {
            let mut t =
                CsvTable::new(&["index", "address", "data_index", "amplitude", "probability"]);
            for (i, a) in s.amplitudes().iter().enumerate() {
                t.row([
                    i.to_string(),
                    (i / data_dim).to_string(),
                    (i % data_dim).to_string(),
                    fmt_real(a.re),
                    fmt_real(a.norm_sqr()),
                ]);
            }
            t.finish()
        }
    })
}

pub fn scale(args: &ScaleArgs, format: Format) -> Result<String> {
    let param: SweepParam = args.sweep.parse()?;
    let values = match &args.values {
        Some(v) => v.clone(),
        None => {
            if args.from == 0 || args.from > args.to {
                return Err(Error::validation("--from", "must satisfy 1 <= from <= to"));
            }
            doubling_range(args.from, args.to)
        }
    };
    let base = TopologySpec::new(args.n, args.k, args.p)
        .with_bits_per_param(args.b)
        .with_shots(args.r);
    let rows = scaling_table(&base, param, &values)?;
    Ok(match format {
        Format::Json => to_json(
            &rows
                .iter()
                .map(|r| {
                    json!({
                        "sweep_param": r.sweep_param,
                        "sweep_value": r.sweep_value,
                        "classical_bits": r.classical_bits,
                        "quantum_qubits": r.quantum_qubits,
                        "ratio": if r.quantum_qubits == 0 { None } else { Some(r.ratio()) },
                    })
                })
                .collect::<Vec<_>>(),
        ),
        Format::Csv => scenario::sweep_csv(&rows),
    })
}

pub fn simulate(config: &Path, seed: Option<u64>, format: Format) -> Result<String> {
    let mut cfg = ScenarioConfig::load(config)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let report = scenario::evaluate(&cfg)?;
    Ok(match format {
        Format::Json => to_json(&report.rounds),
        Format::Csv => scenario::summary_csv(&report.rounds),
    })
}

pub fn balance(args: &BalanceArgs, format: Format) -> Result<String> {
    let ledger = ResourceLedger::new(args.ebits, args.classical_capacity, args.quantum_capacity);
    let objective = match args.objective {
        ObjectiveArg::FitCapacity => BalanceObjective::FitCapacity,
        ObjectiveArg::MinMax => BalanceObjective::MinMaxUtilization,
    };
    let load = LinkLoad::new(args.cbits, args.qubits);
    let plan = balance_link_with(load, &ledger, objective).map_err(|source| match source {
        e @ crate::exchange::ExchangeError::ZeroCapacity { .. } => {
            Error::validation("--classical-capacity/--quantum-capacity", e)
        }
        source => Error::Infeasible {
            link: "link".into(),
            source,
        },
    })?;
    let mut applied = ledger.clone();
    applied.apply(&plan).map_err(|source| Error::Infeasible {
        link: "link".into(),
        source,
    })?;
    let outcome = BalanceOutcome {
        link: "link".into(),
        feasible: true,
        plan,
        ebits_before: args.ebits,
        ebits_after: applied.ebits(),
        events: applied.events().to_vec(),
    };
    Ok(match format {
        Format::Json => to_json(&outcome),
        Format::Csv => scenario::balance_csv(std::slice::from_ref(&outcome)),
    })
}
