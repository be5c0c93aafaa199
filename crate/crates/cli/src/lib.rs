//! Command-line front end for the principal subspace checks.
//!
//! `run` parses arguments, executes one command and renders the report. Exit
//! codes: 0 when every check passes, 1 when one is falsified, 2 on bad usage.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use principal_core::fock::{check_intertwining, square_zero_failures};
use principal_core::relations::{
    check_d_r_identity, check_lift_identity, check_tau_ideal_inclusion, check_tau_r_identity,
    check_tau_rho_bijection, RelationError, RelationFamily,
};
use principal_core::verify::{
    check_ideal_d_stability, graded_dims, kernel_containment_l0_in_l1, partition_oracle,
    verify_presentation, weight_totals, VerifyError,
};
use principal_core::{BigradedIndex, ModuleTag, PieceReport, VerificationRun};
use serde::{Deserialize, Serialize};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FALSIFIED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Default cap on the Fock-space sweeps run by `lemmas`.
pub const DEFAULT_FOCK_WEIGHT: u32 = 6;

#[derive(Debug, Parser)]
#[command(name = "principal", version, about = "Exact checks of principal subspace presentations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Compare kernel and ideal in every bigraded piece
    Verify(Flags),
    /// Graded dimensions of the principal subspaces
    Dims(Flags),
    /// Sweep the relation identities and the Fock-space lemmas
    Lemmas(Flags),
    /// Weight totals beside the partition counts
    Qseries(Flags),
}

#[derive(Debug, Clone, Args)]
pub struct Flags {
    #[arg(long, value_enum, default_value_t = ModuleArg::All)]
    pub module: ModuleArg,
    #[arg(long, default_value_t = 12)]
    pub max_weight: u32,
    #[arg(long, default_value_t = 20)]
    pub t_max: u32,
    /// Weight bound for square-zero and intertwining [default: min(max-weight, 6)]
    #[arg(long)]
    pub fock_weight: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CommandName {
    Verify,
    Dims,
    Lemmas,
    Qseries,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModuleArg {
    Lambda0,
    Lambda1,
    Lambda1prime,
    All,
}

impl ModuleArg {
    pub fn tags(self) -> Vec<ModuleTag> {
        match self {
            ModuleArg::Lambda0 => vec![ModuleTag::Lambda0],
            ModuleArg::Lambda1 => vec![ModuleTag::Lambda1],
            ModuleArg::Lambda1prime => vec![ModuleTag::Lambda1Prime],
            ModuleArg::All => ModuleTag::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: CommandName,
    pub module_tag: ModuleArg,
    pub max_weight: u32,
    pub t_max: u32,
    pub fock_weight: u32,
    pub format: Format,
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Self {
        let (command, flags) = match cli.command {
            CommandArgs::Verify(f) => (CommandName::Verify, f),
            CommandArgs::Dims(f) => (CommandName::Dims, f),
            CommandArgs::Lemmas(f) => (CommandName::Lemmas, f),
            CommandArgs::Qseries(f) => (CommandName::Qseries, f),
        };
        RunConfig {
            command,
            module_tag: flags.module,
            max_weight: flags.max_weight,
            t_max: flags.t_max,
            fock_weight: flags
                .fock_weight
                .unwrap_or(flags.max_weight.min(DEFAULT_FOCK_WEIGHT)),
            format: flags.format,
            output_path: flags.out,
        }
    }

    /// `dims` and `qseries` accept weight 0, which only holds the highest
    /// weight vector.
    pub fn validate(&self) -> Result<(), CliError> {
        let min_weight = match self.command {
            CommandName::Verify | CommandName::Lemmas => 1,
            CommandName::Dims | CommandName::Qseries => 0,
        };
        if self.max_weight < min_weight {
            return Err(CliError::Config(format!(
                "--max-weight must be at least {min_weight} for {}",
                self.command.as_str()
            )));
        }
        let t_min = RelationFamily::R1.t_min as u32;
        if self.t_max < t_min {
            return Err(CliError::Config(format!(
                "--t-max must be at least {t_min}, the smallest weight of R^1"
            )));
        }
        if self.command == CommandName::Lemmas && self.fock_weight < 1 {
            return Err(CliError::Config("--fock-weight must be at least 1".into()));
        }
        Ok(())
    }
}

impl CommandName {
    pub fn as_str(self) -> &'static str {
        match self {
            CommandName::Verify => "verify",
            CommandName::Dims => "dims",
            CommandName::Lemmas => "lemmas",
            CommandName::Qseries => "qseries",
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Verify(VerifyError),
    Relation(RelationError),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => f.write_str(msg),
            CliError::Verify(e) => write!(f, "{e}"),
            CliError::Relation(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        CliError::Verify(e)
    }
}

impl From<RelationError> for CliError {
    fn from(e: RelationError) -> Self {
        CliError::Relation(e)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimRow {
    pub module_tag: ModuleTag,
    pub weight: i64,
    pub charge: u32,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QseriesRow {
    pub weight: i64,
    pub lambda0: usize,
    pub lambda0_oracle: u64,
    pub lambda1prime: usize,
    pub lambda1prime_oracle: u64,
    #[serde(rename = "match")]
    pub matches: bool,
}

/// Everything a command produced; this is the JSON document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub run: RunConfig,
    pub pieces: Vec<PieceReport>,
    pub lemmas: BTreeMap<String, bool>,
    pub dims: Vec<DimRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub qseries: Vec<QseriesRow>,
}

impl Report {
    fn new(run: RunConfig) -> Self {
        Report {
            run,
            pieces: Vec::new(),
            lemmas: BTreeMap::new(),
            dims: Vec::new(),
            qseries: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.pieces.iter().all(|p| p.equality_ok)
            && self.lemmas.values().all(|&ok| ok)
            && self.qseries.iter().all(|row| row.matches)
    }
}

fn dim_rows(dims: &BTreeMap<(ModuleTag, BigradedIndex), usize>) -> Vec<DimRow> {
    let mut rows: Vec<DimRow> = dims
        .iter()
        .map(|(&(module_tag, idx), &dim)| DimRow {
            module_tag,
            weight: idx.weight,
            charge: idx.charge,
            dim,
        })
        .collect();
    rows.sort_by_key(|r| (r.weight, r.charge, r.module_tag));
    rows
}

/// Smallest part allowed in the partitions counting `W(Λi)`.
fn oracle_min_part(tag: ModuleTag) -> i64 {
    match tag {
        ModuleTag::Lambda0 => 1,
        ModuleTag::Lambda1 | ModuleTag::Lambda1Prime => 2,
    }
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<Report, CliError> {
    let max_weight = i64::from(cfg.max_weight);
    let mut run = VerificationRun::new(max_weight);
    for tag in cfg.module_tag.tags() {
        run.merge(verify_presentation(tag, max_weight)?);
    }
    if matches!(cfg.module_tag, ModuleArg::Lambda1 | ModuleArg::All) {
        run.lemma_results.insert(
            "kernel_containment".into(),
            kernel_containment_l0_in_l1(max_weight),
        );
    }
    let mut report = Report::new(cfg.clone());
    report.dims = dim_rows(&run.dims_table);
    report.pieces = run.pieces;
    report.lemmas = run.lemma_results;
    Ok(report)
}

pub fn cmd_dims(cfg: &RunConfig) -> Result<Report, CliError> {
    let max_weight = i64::from(cfg.max_weight);
    let mut table = BTreeMap::new();
    let mut report = Report::new(cfg.clone());
    for tag in cfg.module_tag.tags() {
        let dims = graded_dims(tag, max_weight);
        let agrees = dims.iter().all(|(idx, &d)| {
            d as u64 == partition_oracle(idx.weight, idx.charge.into(), oracle_min_part(tag))
        });
        report.lemmas.insert(format!("oracle_{tag}"), agrees);
        table.extend(dims.into_iter().map(|(idx, d)| ((tag, idx), d)));
    }
    report.dims = dim_rows(&table);
    Ok(report)
}

fn sweep_t(
    range: std::ops::RangeInclusive<i64>,
    name: &str,
    check: impl Fn(i64) -> Result<bool, RelationError>,
) -> Result<bool, CliError> {
    let mut ok = true;
    for t in range {
        if !check(t)? {
            eprintln!("{name} fails at t = {t}");
            ok = false;
        }
    }
    Ok(ok)
}

pub fn cmd_lemmas(cfg: &RunConfig) -> Result<Report, CliError> {
    let t_max = i64::from(cfg.t_max);
    let max_weight = i64::from(cfg.max_weight);
    let fock_weight = i64::from(cfg.fock_weight);
    let mut lemmas = BTreeMap::new();

    lemmas.insert("tau_R".to_string(), sweep_t(2..=t_max, "tau_R", check_tau_r_identity)?);
    lemmas.insert("D_R".to_string(), sweep_t(2..=t_max, "D_R", check_d_r_identity)?);
    lemmas.insert(
        "lift".to_string(),
        sweep_t(RelationFamily::R1.t_min..=t_max, "lift", check_lift_identity)?,
    );

    let mut inclusion = true;
    let mut bijection = true;
    for n in 0..=max_weight {
        for k in 0..=n as u32 {
            let idx = BigradedIndex::new(n, k);
            if !check_tau_ideal_inclusion(idx)? {
                eprintln!("tau_ideal_inclusion fails at {idx}");
                inclusion = false;
            }
            if !check_tau_rho_bijection(idx)? {
                eprintln!("tau_rho_bijection fails at {idx}");
                bijection = false;
            }
        }
    }
    lemmas.insert("tau_ideal_inclusion".into(), inclusion);
    lemmas.insert("tau_rho_bijection".into(), bijection);
    lemmas.insert("ideal_D_stability".into(), check_ideal_d_stability(max_weight));

    let failures = square_zero_failures(fock_weight);
    for (state, t) in failures.iter().take(10) {
        eprintln!("square_zero fails: R_{t} on {state}");
    }
    lemmas.insert("square_zero".into(), failures.is_empty());
    lemmas.insert(
        "intertwining".into(),
        check_intertwining(fock_weight, fock_weight),
    );

    let mut report = Report::new(cfg.clone());
    report.lemmas = lemmas;
    Ok(report)
}

pub fn cmd_qseries(cfg: &RunConfig) -> Result<Report, CliError> {
    let max_weight = i64::from(cfg.max_weight);
    let d0 = graded_dims(ModuleTag::Lambda0, max_weight);
    let d1 = graded_dims(ModuleTag::Lambda1Prime, max_weight);
    let t0 = weight_totals(&d0, max_weight);
    let t1 = weight_totals(&d1, max_weight);
    let mut report = Report::new(cfg.clone());
    for n in 0..=max_weight {
        let o0: u64 = (0..=n).map(|k| partition_oracle(n, k, 1)).sum();
        let o1: u64 = (0..=n).map(|k| partition_oracle(n, k, 2)).sum();
        let (a, b) = (t0[n as usize], t1[n as usize]);
        report.qseries.push(QseriesRow {
            weight: n,
            lambda0: a,
            lambda0_oracle: o0,
            lambda1prime: b,
            lambda1prime_oracle: o1,
            matches: a as u64 == o0 && b as u64 == o1,
        });
    }
    let mut table = BTreeMap::new();
    table.extend(d0.into_iter().map(|(idx, d)| ((ModuleTag::Lambda0, idx), d)));
    table.extend(d1.into_iter().map(|(idx, d)| ((ModuleTag::Lambda1Prime, idx), d)));
    report.dims = dim_rows(&table);
    Ok(report)
}

pub fn execute(cfg: &RunConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    match cfg.command {
        CommandName::Verify => cmd_verify(cfg),
        CommandName::Dims => cmd_dims(cfg),
        CommandName::Lemmas => cmd_lemmas(cfg),
        CommandName::Qseries => cmd_qseries(cfg),
    }
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => render_json(report),
        Format::Csv => render_csv(report),
        Format::Text => render_text(report),
    }
}

pub fn render_json(report: &Report) -> String {
    let mut out = serde_json::to_string_pretty(report).expect("report serializes");
    out.push('\n');
    out
}

#[derive(Serialize)]
struct PieceRow<'a> {
    module_tag: ModuleTag,
    weight: i64,
    charge: u32,
    dim_domain: usize,
    rank_eval: usize,
    dim_kernel: usize,
    dim_ideal_piece: usize,
    containment_ok: bool,
    equality_ok: bool,
    witness: &'a str,
}

#[derive(Serialize)]
struct LemmaRow<'a> {
    lemma: &'a str,
    pass: bool,
}

fn csv_string(write: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    write(&mut w).expect("in-memory csv");
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
}

pub fn render_csv(report: &Report) -> String {
    match report.run.command {
        CommandName::Verify => csv_string(|w| {
            if report.pieces.is_empty() {
                w.write_record([
                    "module_tag", "weight", "charge", "dim_domain", "rank_eval", "dim_kernel",
                    "dim_ideal_piece", "containment_ok", "equality_ok", "witness",
                ])?;
            }
            for p in &report.pieces {
                w.serialize(PieceRow {
                    module_tag: p.module_tag,
                    weight: p.idx.weight,
                    charge: p.idx.charge,
                    dim_domain: p.dim_domain,
                    rank_eval: p.rank_eval,
                    dim_kernel: p.dim_kernel,
                    dim_ideal_piece: p.dim_ideal_piece,
                    containment_ok: p.containment_ok,
                    equality_ok: p.equality_ok,
                    witness: p.witness.as_deref().unwrap_or(""),
                })?;
            }
            Ok(())
        }),
        CommandName::Dims => csv_string(|w| {
            if report.dims.is_empty() {
                w.write_record(["module_tag", "weight", "charge", "dim"])?;
            }
            report.dims.iter().try_for_each(|r| w.serialize(r))
        }),
        CommandName::Lemmas => csv_string(|w| {
            if report.lemmas.is_empty() {
                w.write_record(["lemma", "pass"])?;
            }
            report
                .lemmas
                .iter()
                .try_for_each(|(lemma, &pass)| w.serialize(LemmaRow { lemma, pass }))
        }),
        CommandName::Qseries => csv_string(|w| {
            report.qseries.iter().try_for_each(|r| w.serialize(r))
        }),
    }
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn lemma_scope(name: &str, run: &RunConfig) -> String {
    let t_min = RelationFamily::R1.t_min;
    match name {
        "tau_R" | "D_R" => format!("2 <= t <= {}", run.t_max),
        "lift" => format!("{t_min} <= t <= {}", run.t_max),
        "tau_ideal_inclusion" | "tau_rho_bijection" | "ideal_D_stability"
        | "kernel_containment" => format!("weight <= {}", run.max_weight),
        "square_zero" | "intertwining" => format!("Fock weight <= {}", run.fock_weight),
        _ => String::new(),
    }
}

pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    let run = &report.run;
    match run.command {
        CommandName::Verify => {
            let _ = writeln!(
                out,
                "{:<13} {:>6} {:>6} {:>6} {:>5} {:>6} {:>5}  result",
                "module", "weight", "charge", "domain", "rank", "kernel", "ideal"
            );
            for p in &report.pieces {
                let _ = writeln!(
                    out,
                    "{:<13} {:>6} {:>6} {:>6} {:>5} {:>6} {:>5}  {}",
                    p.module_tag.as_str(),
                    p.idx.weight,
                    p.idx.charge,
                    p.dim_domain,
                    p.rank_eval,
                    p.dim_kernel,
                    p.dim_ideal_piece,
                    mark(p.equality_ok)
                );
                if let Some(w) = &p.witness {
                    let _ = writeln!(out, "    witness: {w}");
                }
            }
            out.push('\n');
            for tag in run.module_tag.tags() {
                let pieces: Vec<_> = report.pieces.iter().filter(|p| p.module_tag == tag).collect();
                let passed = pieces.iter().filter(|p| p.equality_ok).count();
                let _ = writeln!(
                    out,
                    "{} {tag}: {passed}/{} pieces up to weight {}",
                    mark(passed == pieces.len()),
                    pieces.len(),
                    run.max_weight
                );
            }
        }
        CommandName::Dims => {
            for tag in run.module_tag.tags() {
                let rows: Vec<_> = report.dims.iter().filter(|r| r.module_tag == tag).collect();
                let _ = writeln!(out, "{tag}");
                for n in 0..=i64::from(run.max_weight) {
                    let by_charge: Vec<String> = rows
                        .iter()
                        .filter(|r| r.weight == n)
                        .map(|r| r.dim.to_string())
                        .collect();
                    let total: usize = rows.iter().filter(|r| r.weight == n).map(|r| r.dim).sum();
                    let _ = writeln!(out, "  {n:>3}: {total:>4}  [{}]", by_charge.join(" "));
                }
            }
        }
        CommandName::Lemmas => {}
        CommandName::Qseries => {
            let _ = writeln!(
                out,
                "{:>6} {:>8} {:>8} {:>13} {:>13}  match",
                "weight", "lambda0", "oracle", "lambda1prime", "oracle"
            );
            for r in &report.qseries {
                let _ = writeln!(
                    out,
                    "{:>6} {:>8} {:>8} {:>13} {:>13}  {}",
                    r.weight,
                    r.lambda0,
                    r.lambda0_oracle,
                    r.lambda1prime,
                    r.lambda1prime_oracle,
                    if r.matches { "yes" } else { "no" }
                );
            }
        }
    }
    for (name, &ok) in &report.lemmas {
        let scope = lemma_scope(name, run);
        if scope.is_empty() {
            let _ = writeln!(out, "{} {name}", mark(ok));
        } else {
            let _ = writeln!(out, "{} {name} ({scope})", mark(ok));
        }
    }
    let _ = writeln!(out, "{}", if report.passed() { "all checks pass" } else { "checks FAILED" });
    out
}

/// Parses `args`, runs the command and writes the report. Returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    let cfg = RunConfig::from_cli(cli);
    let report = match execute(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let text = render(&report, cfg.format);
    let written = match &cfg.output_path {
        Some(path) => std::fs::write(path, text).map_err(CliError::Io),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes()).map_err(CliError::Io)
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return EXIT_USAGE;
    }
    if report.passed() {
        EXIT_PASS
    } else {
        EXIT_FALSIFIED
    }
}
