//! The `frac-ostrowski` command line.
//!
//! Exit codes: 0 all checks pass, 1 a violation was found, 2 usage or
//! configuration error, 3 a bound diverged or a hypothesis is uncertified.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bounds::{Gate, Hypothesis, HypothesisFlags, Theorem, Variant, SLACK_TOL};
use crate::fracint::QuadratureConfig;
use crate::funcs::{self, Property, PropertyReport, F_REGISTRY, H_REGISTRY, STANDARD_GRID};
use crate::verify::{
    self, Report, SuiteConfig, Summary, SweepGrid, SweepResult, SweepStatus, Verifier, VerifyError, DEFAULT_ALPHAS,
};

/// Resolves relative `--output` paths when set.
pub const OUT_DIR_ENV: &str = "FRAC_OSTROWSKI_OUT_DIR";

pub const CSV_HEADER: [&str; 11] = ["x", "alpha", "s", "p", "q", "theorem", "variant", "lhs", "bound", "slack", "status"];

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNCERTAIN: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "frac-ostrowski", version)]
#[command(about = "Numerically verify fractional Ostrowski inequalities for h-convex derivatives")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List registry h-functions and test functions
    List {
        #[command(flatten)]
        common: Common,
    },
    /// Run the property checkers for an h-function and/or a test function
    CheckProps {
        #[arg(long)]
        h: Option<String>,
        #[arg(long)]
        f: Option<String>,
        /// Exponent on |f'| in the h-convexity check
        #[arg(long, default_value_t = 1.0)]
        q: f64,
        #[arg(long, default_value_t = STANDARD_GRID)]
        grid: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Residual of the integral identity on interior grid points
    Identity {
        #[arg(long)]
        f: String,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_ALPHAS)]
        alpha: Vec<f64>,
        #[arg(long, default_value_t = STANDARD_GRID)]
        grid: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Verify a theorem variant over an x grid and parameter lists
    Sweep {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = STANDARD_GRID)]
        grid: usize,
        /// Evaluate even when hypotheses are uncertified
        #[arg(long)]
        force: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Minimize slack over x for each parameter combination
    Tightness {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        force: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Compare the order-one weights with the classical bound
    CompareClassical {
        #[arg(long)]
        h: String,
        #[arg(long)]
        p: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Closed-form power-h weight factors against quadrature
    Corollary {
        #[arg(long, value_parser = parse_theorem, default_value = "1")]
        theorem: Theorem,
        #[arg(long, value_enum, default_value_t = VariantArg::First)]
        variant: VariantArg,
        #[arg(long, value_delimiter = ',', default_values_t = [0.25, 0.5, 0.75, 1.0])]
        s: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0, 2.0])]
        alpha: Vec<f64>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        q: Option<f64>,
        /// Relative agreement tolerance
        #[arg(long, default_value_t = 1e-10)]
        agree_tol: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Every registry combination of functions, h, theorems and variants
    Suite {
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_ALPHAS)]
        alpha: Vec<f64>,
        #[arg(long, default_value_t = STANDARD_GRID)]
        grid: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Re-read a JSON report and recompute its pass/fail status
    Status {
        report: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Args)]
struct Target {
    #[arg(long)]
    f: String,
    #[arg(long)]
    h: String,
    #[arg(long, value_parser = parse_theorem, default_value = "1")]
    theorem: Theorem,
    #[arg(long, value_enum, default_value_t = VariantArg::First)]
    variant: VariantArg,
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_ALPHAS)]
    alpha: Vec<f64>,
    /// Hölder exponents for theorem 2 (q = p/(p-1))
    #[arg(long, value_delimiter = ',')]
    p: Vec<f64>,
    /// Power-mean exponents for theorem 3
    #[arg(long, value_delimiter = ',')]
    q: Vec<f64>,
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write here instead of stdout; relative paths resolve against $FRAC_OSTROWSKI_OUT_DIR
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    abs_tol: Option<f64>,
    #[arg(long)]
    rel_tol: Option<f64>,
    #[arg(long)]
    max_subdivisions: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VariantArg {
    First,
    Second,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::First => Variant::First,
            VariantArg::Second => Variant::Second,
        }
    }
}

fn parse_theorem(s: &str) -> Result<Theorem, String> {
    let n: u8 = s.parse().map_err(|_| format!("expected 1, 2 or 3, got `{s}`"))?;
    Theorem::try_from(n)
}

/// Validated settings of one invocation; recorded as the report `config`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub subcommand: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem: Option<Theorem>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<Variant>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub alphas: Vec<f64>,
    pub grid: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub p: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub q: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub s: Vec<f64>,
    pub format: Format,
    /// Not recorded in reports, so identical runs give identical bytes.
    #[serde(skip)]
    pub output: Option<PathBuf>,
    pub quadrature: QuadratureConfig,
    #[serde(default)]
    pub force: bool,
}

impl RunConfig {
    fn base(subcommand: &str, common: &Common) -> Self {
        let defaults = QuadratureConfig::default();
        Self {
            subcommand: subcommand.to_string(),
            f: None,
            h: None,
            theorem: None,
            variant: None,
            alphas: Vec::new(),
            grid: STANDARD_GRID,
            p: Vec::new(),
            q: Vec::new(),
            s: Vec::new(),
            format: common.format,
            output: common.output.clone(),
            quadrature: QuadratureConfig {
                abs_tol: common.abs_tol.unwrap_or(defaults.abs_tol),
                rel_tol: common.rel_tol.unwrap_or(defaults.rel_tol),
                max_subdivisions: common.max_subdivisions.unwrap_or(defaults.max_subdivisions),
            },
            force: false,
        }
    }

    fn with_target(mut self, target: &Target) -> Self {
        self.f = Some(target.f.clone());
        self.h = Some(target.h.clone());
        self.theorem = Some(target.theorem);
        self.variant = Some(target.variant.into());
        self.alphas = target.alpha.clone();
        self.p = target.p.clone();
        self.q = target.q.clone();
        self
    }

    /// Checks every value against the preconditions of the operations it feeds.
    pub fn validate(&self) -> Result<(), String> {
        self.quadrature.validate().map_err(|e| e.to_string())?;
        if let Some(f) = &self.f {
            funcs::f_from_spec(f).map_err(|e| e.to_string())?;
        }
        if let Some(h) = &self.h {
            funcs::h_from_spec(h).map_err(|e| e.to_string())?;
        }
        if let Some(&alpha) = self.alphas.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
            return Err(format!("alpha must be > 0, got {alpha}"));
        }
        if self.grid < 3 {
            return Err(format!("grid must be >= 3, got {}", self.grid));
        }
        if let Some(&p) = self.p.iter().find(|p| !(p.is_finite() && **p > 1.0)) {
            return Err(format!("p must be > 1, got {p}"));
        }
        if let Some(&q) = self.q.iter().find(|q| !(q.is_finite() && **q >= 1.0)) {
            return Err(format!("q must be >= 1, got {q}"));
        }
        if let Some(&s) = self.s.iter().find(|s| !(**s > 0.0 && **s <= 1.0)) {
            return Err(format!("s must lie in (0, 1], got {s}"));
        }
        match (self.subcommand.as_str(), self.theorem) {
            ("sweep" | "tightness", Some(Theorem::Two)) if self.p.is_empty() => {
                Err("theorem 2 needs --p".into())
            }
            ("sweep" | "tightness", Some(Theorem::Three)) if self.q.is_empty() => {
                Err("theorem 3 needs --q".into())
            }
            ("corollary", Some(Theorem::Two)) if self.p.is_empty() => Err("theorem 2 needs --p".into()),
            ("corollary", Some(Theorem::Three)) if self.q.is_empty() => Err("theorem 3 needs --q".into()),
            ("check-props", _) if self.f.is_none() && self.h.is_none() => {
                Err("check-props needs --h and/or --f".into())
            }
            ("suite", _) if self.format == Format::Csv => {
                Err("csv output holds one sweep; use --format json for the suite".into())
            }
            _ => Ok(()),
        }
    }

    fn sweep_grid(&self) -> SweepGrid {
        SweepGrid::new(self.grid, &self.alphas).with_ps(&self.p).with_qs(&self.q)
    }

    fn gate(&self) -> Gate {
        if self.force {
            Gate::Force
        } else {
            Gate::Enforce
        }
    }
}

/// Everything a subcommand produced, ready for any output format.
struct Outcome {
    results: Vec<Value>,
    summary: Summary,
    text: String,
    csv: Vec<u8>,
}

enum Failure {
    Usage(String),
    Uncertain(String),
}

impl From<VerifyError> for Failure {
    fn from(err: VerifyError) -> Self {
        match err {
            VerifyError::Uncertified(_) => Failure::Uncertain(err.to_string()),
            e if e.is_divergent() => Failure::Uncertain(e.to_string()),
            e => Failure::Usage(e.to_string()),
        }
    }
}

fn usage<E: ToString>(err: E) -> Failure {
    Failure::Usage(err.to_string())
}

/// Runs the tool with std streams; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_PASS
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    let config = match build_config(&cli.command) {
        Ok(config) => config,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let outcome = match execute(&cli.command, &config) {
        Ok(outcome) => outcome,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
        Err(Failure::Uncertain(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_UNCERTAIN;
        }
    };
    let code = outcome.summary.exit_code();
    let body = match config.format {
        Format::Json => {
            let report = Report {
                config: serde_json::to_value(&config).expect("run config is JSON-safe"),
                results: outcome.results,
                summary: outcome.summary,
            };
            report.to_json().into_bytes()
        }
        Format::Csv => outcome.csv,
        Format::Text => outcome.text.into_bytes(),
    };
    match &config.output {
        Some(path) => {
            let path = resolve_output(path);
            if let Err(e) = write_file(&path, &body) {
                let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                return EXIT_USAGE;
            }
        }
        None => {
            if out.write_all(&body).is_err() {
                return EXIT_USAGE;
            }
        }
    }
    code
}

fn resolve_output(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn write_file(path: &Path, body: &[u8]) -> std::io::Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(path, body)
}

fn build_config(command: &Command) -> Result<RunConfig, String> {
    let config = match command {
        Command::List { common } => RunConfig::base("list", common),
        Command::CheckProps { h, f, q, grid, common } => RunConfig {
            h: h.clone(),
            f: f.clone(),
            q: vec![*q],
            grid: *grid,
            ..RunConfig::base("check-props", common)
        },
        Command::Identity { f, alpha, grid, common } => RunConfig {
            f: Some(f.clone()),
            alphas: alpha.clone(),
            grid: *grid,
            ..RunConfig::base("identity", common)
        },
        Command::Sweep { target, grid, force, common } => RunConfig {
            grid: *grid,
            force: *force,
            ..RunConfig::base("sweep", common).with_target(target)
        },
        Command::Tightness { target, force, common } => RunConfig {
            force: *force,
            ..RunConfig::base("tightness", common).with_target(target)
        },
        Command::CompareClassical { h, p, common } => RunConfig {
            h: Some(h.clone()),
            p: p.iter().copied().collect(),
            ..RunConfig::base("compare-classical", common)
        },
        Command::Corollary { theorem, variant, s, alpha, p, q, agree_tol, common } => {
            if !(agree_tol.is_finite() && *agree_tol > 0.0) {
                return Err(format!("agree-tol must be > 0, got {agree_tol}"));
            }
            RunConfig {
                theorem: Some(*theorem),
                variant: Some((*variant).into()),
                s: s.clone(),
                alphas: alpha.clone(),
                p: p.iter().copied().collect(),
                q: q.iter().copied().collect(),
                ..RunConfig::base("corollary", common)
            }
        }
        Command::Suite { alpha, grid, common } => RunConfig {
            alphas: alpha.clone(),
            grid: *grid,
            ..RunConfig::base("suite", common)
        },
        Command::Status { common, .. } => RunConfig::base("status", common),
    };
    config.validate()?;
    Ok(config)
}

fn execute(command: &Command, config: &RunConfig) -> Result<Outcome, Failure> {
    match command {
        Command::List { .. } => Ok(list()),
        Command::CheckProps { .. } => check_props(config),
        Command::Identity { .. } => identity(config),
        Command::Sweep { .. } => sweep(config),
        Command::Tightness { .. } => tightness(config),
        Command::CompareClassical { .. } => compare_classical(config),
        Command::Corollary { agree_tol, .. } => corollary(config, *agree_tol),
        Command::Suite { .. } => suite(config),
        Command::Status { report, .. } => status(report),
    }
}

fn with_status<T: Serialize>(row: &T, status: SweepStatus) -> Value {
    let mut value = serde_json::to_value(row).expect("rows are JSON-safe");
    if let Value::Object(map) = &mut value {
        map.insert("status".into(), Value::from(status.as_str()));
    }
    value
}

fn csv_table<T: Serialize>(rows: &[T]) -> Vec<u8> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row).expect("rows are CSV-safe");
    }
    writer.into_inner().expect("in-memory writer")
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[derive(Serialize)]
struct RegistryEntry {
    kind: &'static str,
    name: &'static str,
    params: &'static str,
}

fn list() -> Outcome {
    let h_params = |name: &str| if name == "power" { "s in (0, 1]" } else { "" };
    let f_params = |name: &str| match name {
        "power_primitive" => "a, b, r > 0",
        "linear" | "const" => "a, b, c",
        _ => "a, b",
    };
    let mut rows: Vec<RegistryEntry> =
        H_REGISTRY.iter().map(|n| RegistryEntry { kind: "h", name: n, params: h_params(n) }).collect();
    rows.extend(F_REGISTRY.iter().map(|n| RegistryEntry { kind: "f", name: n, params: f_params(n) }));
    let mut text = String::new();
    for row in &rows {
        text.push_str(&format!("{:<2} {:<16} {}\n", row.kind, row.name, row.params));
    }
    Outcome {
        results: rows.iter().map(|r| with_status(r, SweepStatus::Pass)).collect(),
        summary: Summary::from_entries([], false),
        text,
        csv: csv_table(&rows),
    }
}

#[derive(Serialize)]
struct PropertyRow {
    subject: String,
    property: String,
    holds: bool,
    worst_violation: f64,
    witness: String,
    /// Failing a required property counts as a violation.
    required: bool,
}

impl PropertyRow {
    fn new(subject: String, report: &PropertyReport, required: bool) -> Self {
        let witness = report.witness.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(" ");
        Self {
            subject,
            property: report.property.to_string(),
            holds: report.holds,
            worst_violation: report.worst_violation,
            witness,
            required,
        }
    }

    fn status(&self) -> SweepStatus {
        if self.holds || !self.required {
            SweepStatus::Pass
        } else {
            SweepStatus::Fail
        }
    }
}

fn check_props(config: &RunConfig) -> Result<Outcome, Failure> {
    let grid = config.grid;
    let q = config.q.first().copied().unwrap_or(1.0);
    let h = config.h.as_deref().map(funcs::h_from_spec).transpose().map_err(usage)?;
    let f = config.f.as_deref().map(funcs::f_from_spec).transpose().map_err(usage)?;
    let mut rows = Vec::new();
    if let Some(h) = &h {
        type Checker = fn(&funcs::HFunction, usize) -> Result<PropertyReport, funcs::FuncError>;
        let checks: [(Property, Checker); 4] = [
            (Property::Nonneg, funcs::check_nonneg),
            (Property::Supermultiplicative, funcs::check_supermultiplicative),
            (Property::Superadditive, funcs::check_superadditive),
            (Property::DominatesIdentity, funcs::check_dominates_identity),
        ];
        for (property, check) in checks {
            match check(h, grid) {
                Ok(report) => rows.push(PropertyRow::new(h.label(), &report, false)),
                Err(funcs::FuncError::Domain { t, .. }) => rows.push(PropertyRow {
                    subject: h.label(),
                    property: property.to_string(),
                    holds: false,
                    worst_violation: f64::INFINITY,
                    witness: t.to_string(),
                    required: false,
                }),
                Err(e) => return Err(usage(e)),
            }
        }
    }
    if let Some(f) = &f {
        rows.push(PropertyRow::new(f.label(), &f.check_derivative_bound(grid).map_err(usage)?, true));
        rows.push(PropertyRow::new(f.label(), &f.check_derivative_consistency(grid).map_err(usage)?, true));
        if let Some(h) = &h {
            let g = |t: f64| f.derivative(t).abs().powf(q);
            let subject = format!("|{}'|^{q} under {}", f.label(), h.label());
            match funcs::check_h_convex(g, f.a(), f.b(), h, grid) {
                Ok(report) => rows.push(PropertyRow::new(subject, &report, true)),
                Err(funcs::FuncError::Domain { t, .. }) => rows.push(PropertyRow {
                    subject,
                    property: Property::HConvex.to_string(),
                    holds: false,
                    worst_violation: f64::INFINITY,
                    witness: t.to_string(),
                    required: true,
                }),
                Err(e) => return Err(usage(e)),
            }
        }
    }
    let mut text = format!("{:<36} {:<22} {:<6} {:>24}  witness\n", "subject", "property", "holds", "worst_violation");
    for r in &rows {
        text.push_str(&format!(
            "{:<36} {:<22} {:<6} {:>24.16e}  {}\n",
            r.subject,
            r.property,
            yes_no(r.holds),
            r.worst_violation,
            r.witness
        ));
    }
    let summary = Summary::from_entries(
        rows.iter().map(|r| (r.status(), usize::from(r.status() == SweepStatus::Fail), None)),
        false,
    );
    Ok(Outcome {
        results: rows.iter().map(|r| with_status(r, r.status())).collect(),
        summary,
        text,
        csv: csv_table(&rows),
    })
}

fn identity(config: &RunConfig) -> Result<Outcome, Failure> {
    let f = funcs::f_from_spec(config.f.as_deref().unwrap_or_default()).map_err(usage)?;
    let sweep = verify::identity_sweep(&f, &config.alphas, config.grid, &config.quadrature)?;
    let violations = sweep.points.iter().filter(|p| p.residual > crate::bounds::IDENTITY_TOL).count();
    let status = if violations == 0 { SweepStatus::Pass } else { SweepStatus::Fail };
    let text = format!(
        "f = {}  points {}\nmax residual {:.6e} at x = {}, alpha = {}\nstatus: {}\n",
        sweep.function_name,
        sweep.points.len(),
        sweep.max_residual,
        sweep.worst_x,
        sweep.worst_alpha,
        status
    );
    let mut value = with_status(&sweep, status);
    value["violations"] = Value::from(violations);
    Ok(Outcome {
        results: vec![value],
        summary: Summary::from_entries([(status, violations, None)], false),
        text,
        csv: csv_table(&sweep.points),
    })
}

fn point_status(report: &crate::bounds::BoundReport) -> &'static str {
    if !report.certified {
        "uncertified"
    } else if report.holds() && report.ordered() {
        "pass"
    } else {
        "fail"
    }
}

fn sweep_csv(results: &[SweepResult]) -> Vec<u8> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(CSV_HEADER).expect("in-memory writer");
    for result in results {
        for r in &result.reports {
            writer
                .write_record([
                    num(r.x),
                    num(r.params.alpha),
                    opt_num(r.params.s),
                    opt_num(r.params.p),
                    opt_num(r.params.q),
                    r.theorem.to_string(),
                    result.variant.to_string(),
                    num(r.lhs),
                    num(r.bound()),
                    num(r.slack()),
                    point_status(r).to_string(),
                ])
                .expect("in-memory writer");
        }
    }
    writer.into_inner().expect("in-memory writer")
}

fn hypothesis_table(flags: &HypothesisFlags, theorem: Theorem, variant: Variant) -> String {
    let required = crate::bounds::required_hypotheses(theorem, variant);
    let all = [
        Hypothesis::HNonneg,
        Hypothesis::DerivativeBounded,
        Hypothesis::DerivativeHConvex,
        Hypothesis::Supermultiplicative,
        Hypothesis::DominatesIdentity,
        Hypothesis::Superadditive,
    ];
    let mut text = format!("{:<22} {:<9} certified\n", "hypothesis", "required");
    for hyp in all {
        text.push_str(&format!(
            "{:<22} {:<9} {}\n",
            hyp.to_string(),
            yes_no(required.contains(&hyp)),
            yes_no(flags.get(hyp))
        ));
    }
    text
}

fn sweep_text(r: &SweepResult) -> String {
    let mut text = hypothesis_table(&r.hypotheses, r.theorem, r.variant);
    text.push_str(&format!(
        "\nf = {}  h = {}  theorem {} ({})\n",
        r.function_name, r.h_name, r.theorem, r.variant
    ));
    if let Some(msg) = &r.message {
        text.push_str(&format!("note: {msg}\n"));
    }
    if let (Some(slack), Some(x)) = (r.min_slack, r.argmin_x) {
        text.push_str(&format!(
            "points {}  violations {}  min_slack {slack:.6e} at x = {x}\n",
            r.reports.len(),
            r.violations
        ));
    }
    text.push_str(&format!("status: {}\n", r.status));
    text
}

fn target_functions(config: &RunConfig) -> Result<(funcs::TestFunction, funcs::HFunction), Failure> {
    let f = funcs::f_from_spec(config.f.as_deref().unwrap_or_default()).map_err(usage)?;
    let h = funcs::h_from_spec(config.h.as_deref().unwrap_or_default()).map_err(usage)?;
    Ok((f, h))
}

fn sweep(config: &RunConfig) -> Result<Outcome, Failure> {
    let (f, h) = target_functions(config)?;
    let theorem = config.theorem.unwrap_or(Theorem::One);
    let variant = config.variant.unwrap_or(Variant::First);
    let mut verifier = Verifier::new(config.quadrature).with_gate(config.gate());
    let result = verifier.sweep(&f, &h, theorem, variant, &config.sweep_grid())?;
    let summary = Summary::from_results([&result], false);
    Ok(Outcome {
        results: vec![serde_json::to_value(result.projection()).expect("sweep results are JSON-safe")],
        summary,
        text: sweep_text(&result),
        csv: sweep_csv(std::slice::from_ref(&result)),
    })
}

#[derive(Serialize)]
struct TightnessRow {
    alpha: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<f64>,
    x_star: f64,
    min_slack: f64,
    coarse_x: f64,
    coarse_min_slack: f64,
}

fn tightness(config: &RunConfig) -> Result<Outcome, Failure> {
    let (f, h) = target_functions(config)?;
    let theorem = config.theorem.unwrap_or(Theorem::One);
    let variant = config.variant.unwrap_or(Variant::First);
    let grid = config.sweep_grid();
    let combos = grid.params(theorem, h.param("s"))?;
    let mut verifier = Verifier::new(config.quadrature).with_gate(config.gate());
    let mut rows = Vec::with_capacity(combos.len());
    for params in &combos {
        let t = verifier.tightness_search(&f, &h, theorem, variant, params)?;
        rows.push(TightnessRow {
            alpha: params.alpha,
            p: params.p.filter(|_| theorem == Theorem::Two),
            q: params.q.filter(|_| theorem != Theorem::One),
            x_star: t.x_star,
            min_slack: t.min_slack,
            coarse_x: t.coarse_x,
            coarse_min_slack: t.coarse_min_slack,
        });
    }
    let q = verify::derivative_exponent(theorem, &combos[0]);
    let flags = verifier.hypotheses(&f, &h, q).map_err(usage)?;
    let certified = flags.satisfies(theorem, variant);
    let row_status = |r: &TightnessRow| {
        if !certified {
            SweepStatus::Uncertified
        } else if r.min_slack >= -SLACK_TOL {
            SweepStatus::Pass
        } else {
            SweepStatus::Fail
        }
    };
    let mut text = hypothesis_table(&flags, theorem, variant);
    text.push_str(&format!(
        "\nf = {}  h = {}  theorem {theorem} ({variant})\n{:>6} {:>6} {:>6} {:>20} {:>24}\n",
        f.label(),
        h.label(),
        "alpha",
        "p",
        "q",
        "x_star",
        "min_slack"
    ));
    for r in &rows {
        text.push_str(&format!(
            "{:>6} {:>6} {:>6} {:>20.12} {:>24.16e}\n",
            r.alpha,
            r.p.map(|v| v.to_string()).unwrap_or_default(),
            r.q.map(|v| v.to_string()).unwrap_or_default(),
            r.x_star,
            r.min_slack
        ));
    }
    let entries: Vec<_> = rows
        .iter()
        .map(|r| {
            let s = row_status(r);
            (s, usize::from(s == SweepStatus::Fail), Some(r.min_slack))
        })
        .collect();
    let summary = Summary::from_entries(entries, false);
    text.push_str(&format!("status: {}\n", if summary.pass { "pass" } else { "fail" }));
    Ok(Outcome {
        results: rows
            .iter()
            .map(|r| {
                let mut v = with_status(r, row_status(r));
                v["violations"] = Value::from(usize::from(row_status(r) == SweepStatus::Fail));
                v
            })
            .collect(),
        summary,
        text,
        csv: csv_table(&rows),
    })
}

fn compare_classical(config: &RunConfig) -> Result<Outcome, Failure> {
    let h = funcs::h_from_spec(config.h.as_deref().unwrap_or_default()).map_err(usage)?;
    let cmp = verify::compare_classical(&h, config.p.first().copied(), &config.quadrature)?;
    let mut text = format!(
        "h = {}\norder-one weight {:.16e} (better than classical iff < 0.5): {}\n",
        cmp.h_name,
        cmp.thm1_factor,
        yes_no(cmp.thm1_better)
    );
    if let (Some(p), Some(lhs), Some(threshold), Some(better)) =
        (cmp.p, cmp.thm2_lhs_factor, cmp.thm2_threshold, cmp.thm2_better)
    {
        text.push_str(&format!(
            "hoelder weight {lhs:.16e} vs threshold {threshold:.16e} (p = {p}): {}\n",
            yes_no(better)
        ));
    }
    Ok(Outcome {
        results: vec![with_status(&cmp, SweepStatus::Pass)],
        summary: Summary::from_entries([(SweepStatus::Pass, 0, None)], false),
        text,
        csv: csv_table(std::slice::from_ref(&cmp)),
    })
}

#[derive(Serialize)]
struct CorollaryOut {
    s: f64,
    alpha: f64,
    closed_form: f64,
    quadrature: f64,
    relative_difference: f64,
    agrees: bool,
}

fn corollary(config: &RunConfig, agree_tol: f64) -> Result<Outcome, Failure> {
    let theorem = config.theorem.unwrap_or(Theorem::One);
    let variant = config.variant.unwrap_or(Variant::First);
    let p_or_q = match theorem {
        Theorem::One => None,
        Theorem::Two => config.p.first().copied(),
        Theorem::Three => config.q.first().copied(),
    };
    let mut rows = Vec::new();
    for &s in &config.s {
        for row in verify::corollary_check(theorem, variant, s, &config.alphas, p_or_q, agree_tol, &config.quadrature)? {
            rows.push(CorollaryOut {
                s,
                alpha: row.alpha,
                closed_form: row.closed_form,
                quadrature: row.quadrature,
                relative_difference: row.relative_difference,
                agrees: row.agrees,
            });
        }
    }
    let mut text = format!(
        "theorem {theorem} ({variant})\n{:>6} {:>6} {:>24} {:>24} {:>10}\n",
        "s", "alpha", "closed_form", "quadrature", "rel_diff"
    );
    for r in &rows {
        text.push_str(&format!(
            "{:>6} {:>6} {:>24.16e} {:>24.16e} {:>10.2e}\n",
            r.s, r.alpha, r.closed_form, r.quadrature, r.relative_difference
        ));
    }
    let status = |r: &CorollaryOut| if r.agrees { SweepStatus::Pass } else { SweepStatus::Fail };
    let summary =
        Summary::from_entries(rows.iter().map(|r| (status(r), usize::from(!r.agrees), None)), false);
    text.push_str(&format!("status: {}\n", if summary.pass { "pass" } else { "fail" }));
    Ok(Outcome {
        results: rows
            .iter()
            .map(|r| {
                let mut v = with_status(r, status(r));
                v["violations"] = Value::from(usize::from(!r.agrees));
                v
            })
            .collect(),
        summary,
        text,
        csv: csv_table(&rows),
    })
}

fn suite(config: &RunConfig) -> Result<Outcome, Failure> {
    let suite_config = SuiteConfig {
        alphas: config.alphas.clone(),
        x_count: config.grid,
        quadrature: config.quadrature,
        ..SuiteConfig::default()
    };
    let outcome = verify::full_suite(&suite_config)?;
    let report = outcome.report();
    let mut text = format!(
        "{:<18} {:<14} {:>3} {:<7} {:>5} {:>5} {:>11} {:>24}\n",
        "f", "h", "thm", "variant", "p", "q", "status", "min_slack"
    );
    for r in &outcome.results {
        text.push_str(&format!(
            "{:<18} {:<14} {:>3} {:<7} {:>5} {:>5} {:>11} {:>24}\n",
            r.function_name,
            r.h_name,
            r.theorem,
            r.variant,
            r.grid.ps.first().map(|v| v.to_string()).unwrap_or_default(),
            r.grid.qs.first().map(|v| v.to_string()).unwrap_or_default(),
            r.status,
            r.min_slack.map(|v| format!("{v:.16e}")).unwrap_or_default()
        ));
    }
    let s = report.summary;
    text.push_str(&format!(
        "\nsweeps {}  violations {}  divergent {}  uncertified {}\nstatus: {}\n",
        outcome.results.len(),
        s.violations,
        s.divergent,
        s.uncertified,
        if s.pass { "pass" } else { "fail" }
    ));
    Ok(Outcome { results: report.results, summary: report.summary, text, csv: Vec::new() })
}

fn status(path: &Path) -> Result<Outcome, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let report = Report::from_json(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let summary = report.recomputed_summary().map_err(usage)?;
    let consistent = summary.pass == report.summary.pass;
    let verdict = if summary.pass { "pass" } else { "fail" };
    let text = format!(
        "{}: {} results, recorded {}, recomputed {verdict}{}\n",
        path.display(),
        report.results.len(),
        if report.summary.pass { "pass" } else { "fail" },
        if consistent { "" } else { " (MISMATCH)" }
    );
    if !consistent {
        return Err(usage(format!("{}: recorded status disagrees with its results", path.display())));
    }
    Ok(Outcome {
        results: report.results,
        summary,
        text,
        csv: Vec::new(),
    })
}
