//! Batch front end behind the `nepg` binary.
//!
//! Every subcommand resolves its parameters from built-in defaults, then an
//! optional JSON config file (flat keys named like the long flags, with `_`
//! for `-`), then explicit flags. The resolved record is echoed into the
//! output together with the library version, so a run is reproducible from
//! its own output.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::battery::{battery_sweep, LadderProfile, SweepConfig};
use crate::bounds::{r2_lambda2_search, BoundReport, GateInstance, ReportOptions, SearchOptions, Variant};
use crate::channels::WorstCaseOptions;
use crate::coherence::{entropic_coherence, is_incoherent, twirl};
use crate::error::{Error, Result};
use crate::iid::{
    entropy_lower_bound, incommensurability_rank, maximal_span, prepartition_lambda, sum_entropy, DiscreteRV,
    Prepartition, RankOptions,
};
use crate::io::{load_prepartition, load_rv, read_json, GateFile, HamiltonianFile, MatrixFile, StateFile};
use crate::quantum::linalg::{CMatrix, C64};
use crate::quantum::{moments, qfi, von_neumann_entropy, Hamiltonian};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "nepg", version, about = "Coherence cost of non-energy-preserving gates")]
pub struct Cli {
    /// JSON file with defaults for any flag (flat object, snake_case keys).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// json or csv
    #[arg(long, global = true)]
    pub format: Option<String>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coherence diagnostics of a battery state.
    Coherence(CoherenceArgs),
    /// Qubit gate on ladder batteries of growing support.
    BatterySweep(SweepArgs),
    /// Coherence, dimension, energy and QFI lower bounds for a gate.
    Bounds(BoundsArgs),
    /// Exact entropy of i.i.d. sums against the asymptotic bound.
    Iid(IidArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct CoherenceArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    /// Gate file (matrix schema) or one of: hadamard, identity, pauli-x, s.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gate: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lengths: Option<Vec<usize>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_b: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub starts: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iters: Option<usize>,
    /// uniform or sine
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct BoundsArgs {
    /// Gate file, or a built-in qubit gate name on H = diag(0, 1).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gate: Option<String>,
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<Vec<f64>>,
    /// general, proportionate or qubit
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Basis names for the gate file's exact levels, e.g. 1,sqrt2.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub random_samples: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct IidArgs {
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rv: Option<PathBuf>,
    #[arg(long = "n", value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<Vec<usize>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prepartition: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlobalConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherenceConfig {
    pub state: PathBuf,
    pub hamiltonian: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRunConfig {
    #[serde(default = "default_gate")]
    pub gate: String,
    #[serde(default = "one")]
    pub omega: f64,
    #[serde(default = "default_lengths")]
    pub lengths: Vec<usize>,
    #[serde(default = "default_d_b")]
    pub d_b: usize,
    #[serde(default = "default_starts")]
    pub starts: usize,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    #[serde(default)]
    pub profile: LadderProfile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsRunConfig {
    #[serde(default = "default_gate")]
    pub gate: String,
    #[serde(default = "default_eps")]
    pub eps: Vec<f64>,
    #[serde(default)]
    pub variant: Variant,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub basis: Option<Vec<String>>,
    #[serde(default)]
    pub eta: Option<f64>,
    #[serde(default)]
    pub omega: Option<f64>,
    #[serde(default = "default_depth")]
    pub depth: usize,
    #[serde(default = "default_random_samples")]
    pub random_samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IidRunConfig {
    pub rv: PathBuf,
    #[serde(default = "default_n")]
    pub n: Vec<usize>,
    #[serde(default)]
    pub prepartition: Option<PathBuf>,
}

fn default_gate() -> String {
    "hadamard".into()
}
fn one() -> f64 {
    1.0
}
fn default_lengths() -> Vec<usize> {
    vec![2, 4, 8, 16, 32]
}
fn default_d_b() -> usize {
    64
}
fn default_starts() -> usize {
    WorstCaseOptions::default().starts
}
fn default_max_iters() -> usize {
    WorstCaseOptions::default().max_iters
}
fn default_eps() -> Vec<f64> {
    vec![1e-2, 1e-4, 1e-6, 1e-8]
}
fn default_depth() -> usize {
    SearchOptions::default().degenerate_superposition_depth
}
fn default_random_samples() -> usize {
    SearchOptions::default().random_samples
}
fn default_n() -> Vec<usize> {
    vec![100, 200, 400]
}

/// Built-in qubit gates by name.
pub fn named_gate(name: &str) -> Option<CMatrix> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let c = |re: f64, im: f64| C64::new(re, im);
    let entries = match name {
        "hadamard" | "h" => [c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)],
        "identity" | "i" => [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        "pauli-x" | "x" => [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        "s" => [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)],
        _ => return None,
    };
    Some(CMatrix::from_row_slice(2, 2, &entries))
}

fn load_matrix_gate(name: &str) -> Result<CMatrix> {
    match named_gate(name) {
        Some(m) => Ok(m),
        None => read_json::<MatrixFile>(name)?.to_matrix(),
    }
}

fn load_bounds_gate(name: &str, basis: Option<&[String]>) -> Result<GateInstance> {
    match named_gate(name) {
        Some(v) => GateInstance::new(Hamiltonian::diagonal(&[0.0, 1.0])?, v),
        None => read_json::<GateFile>(name)?.to_instance(basis),
    }
}

/// Result of a run: the rendered output and the exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub code: u8,
}

/// 2 for malformed or invalid input, 3 for numeric caps.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::DimensionLimit { .. } | Error::SupportExplosion { .. } | Error::Overflow => 3,
        _ => 2,
    }
}

fn schema(e: impl std::fmt::Display) -> Error {
    Error::Schema(e.to_string())
}

fn merge(file: &Map<String, Value>, flags: &impl Serialize) -> Result<Map<String, Value>> {
    let mut merged = file.clone();
    if let Value::Object(m) = serde_json::to_value(flags).map_err(schema)? {
        merged.extend(m.into_iter().filter(|(_, v)| !v.is_null()));
    }
    Ok(merged)
}

/// The resolved command config with the global seed and format attached.
fn echo(cfg: &impl Serialize, global: &GlobalConfig) -> Result<Value> {
    let mut v = serde_json::to_value(cfg).map_err(schema)?;
    if let Value::Object(m) = &mut v {
        m.insert("seed".into(), global.seed.into());
        m.insert("format".into(), serde_json::to_value(global.format).map_err(schema)?);
    }
    Ok(v)
}

fn resolve<T: DeserializeOwned>(merged: &Map<String, Value>) -> Result<T> {
    serde_json::from_value(Value::Object(merged.clone())).map_err(schema)
}

/// Number with 12 significant digits, shortest form.
pub fn format_sig(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    format!("{rounded:?}")
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) if n.is_f64() => format_sig(n.as_f64().expect("f64")),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

struct Render<'a> {
    command: &'a str,
    config: Value,
}

impl Render<'_> {
    fn json(&self, results: Value) -> Result<String> {
        let doc = serde_json::json!({
            "tool": "nepg",
            "version": VERSION,
            "command": self.command,
            "config": self.config,
            "results": results,
        });
        serde_json::to_string_pretty(&doc).map(|s| s + "\n").map_err(schema)
    }

    fn csv(&self, rows: &[Value]) -> Result<String> {
        let mut out = format!("# nepg {VERSION} {} config={}\n", self.command, self.config);
        let mut w = csv::Writer::from_writer(Vec::new());
        if let Some(Value::Object(first)) = rows.first() {
            w.write_record(first.keys()).map_err(schema)?;
            for row in rows {
                let Value::Object(m) = row else { return Err(schema("non-tabular row")) };
                w.write_record(first.keys().map(|k| m.get(k).map(csv_cell).unwrap_or_default())).map_err(schema)?;
            }
        }
        out.push_str(&String::from_utf8(w.into_inner().map_err(schema)?).map_err(schema)?);
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoherenceReport {
    pub coherence_bits: f64,
    pub entropy: f64,
    pub twirled_entropy: f64,
    pub is_incoherent: bool,
    pub mean_energy: f64,
    pub variance: f64,
    pub qfi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IidRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub exact_entropy: Option<f64>,
    pub bound: Option<f64>,
    pub gap: Option<f64>,
    pub branch: Option<String>,
    pub lambda: Option<f64>,
    pub status: String,
}

/// Whole support if it is a lattice, else the certified prepartition with the largest λ.
pub fn default_prepartition(x: &DiscreteRV) -> Result<Prepartition> {
    if x.is_deterministic() {
        return Err(Error::Undefined("entropy bound of a deterministic variable".into()));
    }
    let values = x.values();
    if maximal_span(&values, x.basis())?.is_lattice() {
        return Ok(Prepartition::new(vec![(0..values.len()).collect()]));
    }
    let rank = incommensurability_rank(&values, x.basis(), &RankOptions::default())?;
    rank.alternatives
        .into_iter()
        .filter_map(|p| Some((prepartition_lambda(x, &p).ok()?.lambda, p)))
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, p)| p)
        .ok_or_else(|| Error::Undefined("no certified prepartition".into()))
}

fn iid_rows(x: &DiscreteRV, ns: &[usize], part: &Result<Prepartition>) -> Vec<IidRow> {
    ns.iter()
        .map(|&n| {
            let blank = |status: String| IidRow {
                n,
                exact_entropy: None,
                bound: None,
                gap: None,
                branch: None,
                lambda: None,
                status,
            };
            let part = match part {
                Ok(p) => p,
                Err(e) => return blank(format!("error: {e}")),
            };
            let bound = match entropy_lower_bound(x, n, part) {
                Ok(b) => b,
                Err(e) => return blank(format!("error: {e}")),
            };
            let mut row = IidRow {
                branch: Some(serde_json::to_value(bound.branch).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()),
                lambda: Some(bound.lambda),
                bound: Some(bound.value),
                ..blank("ok".into())
            };
            match sum_entropy(x, n) {
                Ok(s) => {
                    row.exact_entropy = Some(s);
                    row.gap = Some(s - bound.value);
                }
                Err(e @ (Error::SupportExplosion { .. } | Error::Overflow)) => row.status = format!("skipped: {e}"),
                Err(e) => row.status = format!("error: {e}"),
            }
            row
        })
        .collect()
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Result<Outcome> {
    let file: Map<String, Value> = match &cli.config {
        Some(path) => match read_json::<Value>(path)? {
            Value::Object(m) => m,
            _ => return Err(schema("config file must hold a JSON object")),
        },
        None => Map::new(),
    };
    #[derive(Serialize)]
    struct GlobalFlags<'a> {
        seed: Option<u64>,
        format: Option<&'a str>,
        out: Option<&'a PathBuf>,
    }
    let global_flags = GlobalFlags { seed: cli.seed, format: cli.format.as_deref(), out: cli.out.as_ref() };
    let command_flags = match &cli.command {
        Command::Coherence(a) => serde_json::to_value(a),
        Command::BatterySweep(a) => serde_json::to_value(a),
        Command::Bounds(a) => serde_json::to_value(a),
        Command::Iid(a) => serde_json::to_value(a),
    }
    .map_err(schema)?;
    let merged = merge(&merge(&file, &global_flags)?, &command_flags)?;
    let global: GlobalConfig = resolve(&merged)?;

    let (command, config, json, rows, code): (&str, Value, Value, Value, u8) = match &cli.command {
        Command::Coherence(_) => {
            let cfg: CoherenceConfig = resolve(&merged)?;
            let rho = read_json::<StateFile>(&cfg.state)?.to_density()?;
            let h = read_json::<HamiltonianFile>(&cfg.hamiltonian)?.to_hamiltonian()?;
            let (mean_energy, variance) = moments(&rho, &h)?;
            let report = CoherenceReport {
                coherence_bits: entropic_coherence(&rho, &h)?,
                entropy: von_neumann_entropy(&rho),
                twirled_entropy: von_neumann_entropy(&twirl(&rho, &h)?),
                is_incoherent: is_incoherent(&rho, &h, 1e-10)?,
                mean_energy,
                variance,
                qfi: qfi(&rho, &h)?,
            };
            let v = serde_json::to_value(report).map_err(schema)?;
            ("coherence", echo(&cfg, &global)?, v.clone(), v, 0)
        }
        Command::BatterySweep(_) => {
            let cfg: SweepRunConfig = resolve(&merged)?;
            let v = load_matrix_gate(&cfg.gate)?;
            let sweep = SweepConfig {
                d_b: cfg.d_b,
                omega: cfg.omega,
                lengths: cfg.lengths.clone(),
                profile: cfg.profile,
                optimizer: WorstCaseOptions {
                    starts: cfg.starts,
                    max_iters: cfg.max_iters,
                    seed: global.seed,
                    ..WorstCaseOptions::default()
                },
            };
            let table = battery_sweep(&v, &sweep)?;
            let code = if table.iter().all(|r| r.converged) { 0 } else { 4 };
            let v = serde_json::to_value(&table).map_err(schema)?;
            ("battery-sweep", echo(&cfg, &global)?, v.clone(), v, code)
        }
        Command::Bounds(_) => {
            let cfg: BoundsRunConfig = resolve(&merged)?;
            let gate = load_bounds_gate(&cfg.gate, cfg.basis.as_deref())?;
            let opts = SearchOptions {
                degenerate_superposition_depth: cfg.depth,
                random_samples: cfg.random_samples,
                seed: global.seed,
                ..SearchOptions::default()
            };
            let search = r2_lambda2_search(&gate, &opts)?;
            let ropts = ReportOptions { alpha: cfg.alpha, variant: cfg.variant, eta: cfg.eta, omega: cfg.omega };
            let reports =
                cfg.eps.iter().map(|&e| BoundReport::evaluate(&gate, &search, e, &ropts)).collect::<Result<Vec<_>>>()?;
            let json = serde_json::json!({
                "search": search,
                "reports": reports,
                "warnings": if cfg.alpha.is_none() { vec!["alpha not given; using 1"] } else { vec![] },
            });
            let rows = serde_json::to_value(&reports).map_err(schema)?;
            ("bounds", echo(&cfg, &global)?, json, rows, 0)
        }
        Command::Iid(_) => {
            let cfg: IidRunConfig = resolve(&merged)?;
            let x = load_rv(&cfg.rv)?;
            let part = match &cfg.prepartition {
                Some(p) => load_prepartition(p),
                None => default_prepartition(&x),
            };
            let table = iid_rows(&x, &cfg.n, &part);
            let json = serde_json::json!({
                "prepartition": part.as_ref().ok(),
                "rows": table,
            });
            let rows = serde_json::to_value(&table).map_err(schema)?;
            ("iid", echo(&cfg, &global)?, json, rows, 0)
        }
    };
    let render = Render { command, config };
    let text = match (global.format, rows) {
        (Format::Json, _) => render.json(json)?,
        (Format::Csv, Value::Array(rows)) => render.csv(&rows)?,
        (Format::Csv, single) => render.csv(&[single])?,
    };
    if let Some(path) = &global.out {
        fs::write(path, &text).map_err(|e| schema(format!("{}: {e}", path.display())))?;
        return Ok(Outcome { text: String::new(), code });
    }
    Ok(Outcome { text, code })
}

/// Entry point used by the binary.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.code == 4 {
                eprintln!("warning: optimizer did not converge for every row");
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
