//! Command-line front end. [`run`] is the whole program minus process
//! plumbing, so it can be driven from tests.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::coherence::{coherence, CoherenceMeasure};
use crate::error::{Error, Result};
use crate::optimizer::OptimizerConfig;
use crate::powers::{self, PowerKind, PowerReport, UPPER_BOUND_SLACK};
use crate::quantum::json::state_from_json;
use crate::quantum::{KrausChannel, EIGEN_CUTOFF};
use crate::verify;
use crate::zoo::parse_channel;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CLAIM_FAILED: i32 = 1;
pub const EXIT_MALFORMED: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "qcoherence",
    version,
    about = "Coherence measures and cohering/decohering powers of quantum channels"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Coherence of a density matrix.
    Measure(MeasureArgs),
    /// Cohering or decohering power of a channel.
    Power(PowerArgs),
    /// An ancilla-extended power over a range of ancilla dimensions.
    Sweep(SweepArgs),
    /// Run the verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    /// State JSON file.
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long, alias = "measure", default_value = "rel-entropy")]
    pub kind: CoherenceMeasure,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct ChannelSource {
    /// Channel file holding either Kraus JSON or a named channel spec.
    #[arg(long, conflicts_with = "spec", required_unless_present = "spec")]
    pub channel: Option<PathBuf>,
    /// Inline channel spec JSON, e.g. '{"name":"erasing","dim":2}'.
    #[arg(long)]
    pub spec: Option<String>,
}

#[derive(Debug, Args)]
pub struct Optimizer {
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

impl Optimizer {
    fn config(&self) -> Result<OptimizerConfig> {
        let mut cfg = OptimizerConfig::default();
        if let Some(r) = self.restarts {
            cfg.restarts = r;
        }
        if let Some(m) = self.max_iters {
            cfg.max_iters = m;
        }
        if let Some(s) = self.seed {
            cfg.rng_seed = s;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct PowerArgs {
    #[command(flatten)]
    pub source: ChannelSource,
    /// A power kind, or `cgen` for the coherence generating capacity bound.
    #[arg(long)]
    pub power: String,
    #[arg(long, default_value = "rel-entropy")]
    pub measure: CoherenceMeasure,
    /// Largest ancilla dimension for the extended powers.
    #[arg(long)]
    pub kmax: Option<usize>,
    #[command(flatten)]
    pub optimizer: Optimizer,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub source: ChannelSource,
    #[arg(long)]
    pub power: PowerKind,
    #[arg(long, default_value = "rel-entropy")]
    pub measure: CoherenceMeasure,
    #[arg(long, default_value_t = 1)]
    pub kmin: usize,
    #[arg(long)]
    pub kmax: usize,
    #[command(flatten)]
    pub optimizer: Optimizer,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Only run these claims (repeatable).
    #[arg(long = "claim")]
    pub claims: Vec<String>,
    #[command(flatten)]
    pub output: Output,
}

/// Exit code plus what would go to stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn error(err: &Error) -> Self {
        let code = if err.is_invariant_violation() { EXIT_INVARIANT } else { EXIT_MALFORMED };
        Self { code, stdout: String::new(), stderr: format!("error: {err}\n") }
    }
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_MALFORMED } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            };
        }
    };
    match dispatch(cli.command) {
        Ok((code, doc, out)) => match out {
            Some(path) => match std::fs::write(&path, &doc) {
                Ok(()) => Outcome { code, stdout: String::new(), stderr: String::new() },
                Err(e) => Outcome::error(&Error::Io(e)),
            },
            None => Outcome { code, stdout: doc, stderr: String::new() },
        },
        Err(e) => Outcome::error(&e),
    }
}

type Rendered = (i32, String, Option<PathBuf>);

fn dispatch(command: Command) -> Result<Rendered> {
    match command {
        Command::Measure(a) => measure(&a).map(|doc| (EXIT_OK, doc, a.output.out)),
        Command::Power(a) => power(&a).map(|doc| (EXIT_OK, doc, a.output.out)),
        Command::Sweep(a) => sweep(&a).map(|doc| (EXIT_OK, doc, a.out)),
        Command::Verify(a) => {
            let results = verify::run_selected(a.seed, &a.claims)?;
            let code = if verify::all_passed(&results) { EXIT_OK } else { EXIT_CLAIM_FAILED };
            let doc = match a.output.format {
                Format::Json => verify::report_json(a.seed, &results) + "\n",
                Format::Table => verify::report_table(&results),
                Format::Csv => verify_csv(&results)?,
            };
            Ok((code, doc, a.output.out))
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

impl ChannelSource {
    fn load(&self) -> Result<KrausChannel> {
        match (&self.channel, &self.spec) {
            (Some(path), _) => parse_channel(&read(path)?),
            (None, Some(spec)) => parse_channel(spec),
            (None, None) => Err(Error::InvalidParameter("one of --channel or --spec is required".into())),
        }
    }
}

fn json_doc<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn csv_doc(header: &[&str], rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(&row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn table_doc(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut all = vec![header.iter().map(|h| h.to_string()).collect::<Vec<_>>()];
    all.extend(rows);
    let widths: Vec<usize> = (0..header.len()).map(|c| all.iter().map(|r| r[c].len()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for row in all {
        let cells: Vec<String> = row.iter().zip(&widths).map(|(cell, w)| format!("{cell:<w$}")).collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn measure(a: &MeasureArgs) -> Result<String> {
    let rho = state_from_json(&read(&a.state)?)?;
    let value = coherence(a.kind, &rho);
    let doc = match a.output.format {
        Format::Json => json_doc(&json!({
            "command": "measure",
            "measure": a.kind,
            "dims": rho.dims(),
            "value": value,
            "tolerance": EIGEN_CUTOFF,
        })),
        Format::Csv => csv_doc(&["measure", "value"], vec![vec![a.kind.name().into(), value.to_string()]])?,
        Format::Table => table_doc(&["measure", "value"], vec![vec![a.kind.name().into(), format!("{value:.12}")]]),
    };
    Ok(doc)
}

fn best_value(reports: &[PowerReport]) -> f64 {
    reports.iter().map(|r| r.value).fold(f64::NEG_INFINITY, f64::max)
}

fn power_rows(reports: &[PowerReport]) -> Vec<Vec<String>> {
    reports
        .iter()
        .map(|r| {
            vec![
                r.ancilla_dim.to_string(),
                r.value.to_string(),
                r.upper_bound.to_string(),
                r.family.clone(),
                r.config.rng_seed.to_string(),
                r.passed().to_string(),
            ]
        })
        .collect()
}

fn power(a: &PowerArgs) -> Result<String> {
    let phi = a.source.load()?;
    let cfg = a.optimizer.config()?;
    if a.power == "cgen" {
        let report = powers::cgen_report(&phi, &cfg)?;
        return Ok(match a.output.format {
            Format::Json => json_doc(&json!({
                "command": "power",
                "power": "cgen",
                "seed": cfg.rng_seed,
                "tolerance": UPPER_BOUND_SLACK,
                "cgen_upper_bound": report.cgen_upper_bound,
                "cgen_mio_value": report.cgen_mio_value,
                "generalized": report.generalized,
            })),
            Format::Csv => csv_doc(
                &["cgen_upper_bound", "cgen_mio_value", "seed"],
                vec![vec![
                    report.cgen_upper_bound.to_string(),
                    report.cgen_mio_value.to_string(),
                    cfg.rng_seed.to_string(),
                ]],
            )?,
            Format::Table => table_doc(
                &["cgen_upper_bound", "cgen_mio_value"],
                vec![vec![format!("{:.9}", report.cgen_upper_bound), format!("{:.9}", report.cgen_mio_value)]],
            ),
        });
    }
    let kind: PowerKind = a.power.parse()?;
    let k_max = a.kmax.unwrap_or_else(|| powers::default_k_max(phi.dim_in()));
    let reports = powers::compute(kind, &phi, a.measure, k_max, &cfg)?;
    let header = ["k", "value", "upper_bound", "family", "seed", "passed"];
    Ok(match a.output.format {
        Format::Json => json_doc(&json!({
            "command": "power",
            "power": kind,
            "measure": a.measure,
            "seed": cfg.rng_seed,
            "tolerance": UPPER_BOUND_SLACK,
            "value": best_value(&reports),
            "passed": reports.iter().all(PowerReport::passed),
            "reports": reports,
        })),
        Format::Csv => csv_doc(&header, power_rows(&reports))?,
        Format::Table => table_doc(&header, power_rows(&reports)),
    })
}

fn sweep(a: &SweepArgs) -> Result<String> {
    if !a.power.uses_ancilla() {
        return Err(Error::InvalidParameter(format!("{} has no ancilla to sweep", a.power.name())));
    }
    if a.kmin == 0 || a.kmin > a.kmax {
        return Err(Error::InvalidParameter(format!("invalid ancilla range {}..={}", a.kmin, a.kmax)));
    }
    let phi = a.source.load()?;
    let cfg = a.optimizer.config()?;
    let generalized = match a.power {
        PowerKind::CompleteCohering => powers::generalized_cohering_power(&phi, a.measure, &cfg)?,
        PowerKind::SeparableCompleteDecohering if a.measure != CoherenceMeasure::RelEntropy => {
            return Err(Error::InvalidParameter(
                "separable complete decohering power is defined for rel-entropy only".into(),
            ))
        }
        _ => powers::generalized_decohering_power(&phi, a.measure, &cfg)?,
    };
    let mut rows = Vec::new();
    for k in a.kmin..=a.kmax {
        let start = Instant::now();
        let mut reports = match a.power {
            PowerKind::CompleteCohering => powers::complete_cohering_over(&phi, &generalized, k..=k, &cfg)?,
            PowerKind::CompleteDecohering => powers::complete_decohering_over(&phi, &generalized, k..=k, &cfg)?,
            _ => powers::separable_complete_decohering_over(&phi, &generalized, k..=k, &cfg)?,
        };
        rows.push((reports.remove(0), start.elapsed().as_millis()));
    }
    let header = ["k", "value", "upper_bound", "family", "seed", "wall_ms"];
    let csv_rows = || {
        rows.iter()
            .map(|(r, ms)| {
                vec![
                    r.ancilla_dim.to_string(),
                    r.value.to_string(),
                    r.upper_bound.to_string(),
                    r.family.clone(),
                    cfg.rng_seed.to_string(),
                    ms.to_string(),
                ]
            })
            .collect::<Vec<_>>()
    };
    Ok(match a.format {
        Format::Csv => csv_doc(&header, csv_rows())?,
        Format::Table => table_doc(&header, csv_rows()),
        // timings are left out so identical invocations give identical bytes
        Format::Json => json_doc(&json!({
            "command": "sweep",
            "power": a.power,
            "measure": a.measure,
            "seed": cfg.rng_seed,
            "tolerance": UPPER_BOUND_SLACK,
            "rows": rows.iter().map(|(r, _)| json!({
                "k": r.ancilla_dim,
                "value": r.value,
                "upper_bound": r.upper_bound,
                "family": r.family,
                "passed": r.passed(),
            })).collect::<Vec<_>>(),
        })),
    })
}

fn verify_csv(results: &[verify::ClaimResult]) -> Result<String> {
    let mut rows = Vec::new();
    for r in results {
        for m in &r.measured {
            rows.push(vec![
                r.claim_id.clone(),
                m.name.clone(),
                m.value.to_string(),
                m.bound.map(|b| b.to_string()).unwrap_or_default(),
                m.ok.map(|ok| ok.to_string()).unwrap_or_default(),
                r.seed.to_string(),
            ]);
        }
    }
    csv_doc(&["claim_id", "name", "value", "bound", "ok", "seed"], rows)
}
