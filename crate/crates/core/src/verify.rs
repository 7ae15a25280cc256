//! Parameter sweeps, slack minimization and comparisons with the classical
//! Ostrowski bound.
//!
//! A [`Verifier`] caches hypothesis certification (keyed by function labels
//! and the exponent q) and left-hand-side values, so running many theorem
//! variants over the same functions costs one certification and one pair of
//! fractional integrals per point.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::bounds::{
    self, BoundError, BoundReport, Gate, Hypothesis, HypothesisFlags, PreparedBound, Theorem, Variant,
};
use crate::fracint::{self, FracParams, QuadratureConfig};
use crate::funcs::{self, FuncError, HFunction, TestFunction, STANDARD_GRID};

/// Default fractional orders.
pub const DEFAULT_ALPHAS: [f64; 4] = [0.5, 1.0, 1.5, 2.0];

const GOLDEN_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("hypothesis `{0}` is not certified")]
    Uncertified(Hypothesis),
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Func(#[from] FuncError),
}

impl VerifyError {
    pub fn is_divergent(&self) -> bool {
        matches!(self, Self::Bound(e) if e.is_divergent())
    }
}

impl From<fracint::FracError> for VerifyError {
    fn from(err: fracint::FracError) -> Self {
        Self::Bound(err.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepStatus {
    Pass,
    Fail,
    Divergent,
    Uncertified,
}

impl SweepStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Pass => "pass",
            Self::Fail => "fail",
            Self::Divergent => "divergent",
            Self::Uncertified => "uncertified",
        }
    }
}

impl std::fmt::Display for SweepStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Points and exponents of a sweep. `ps` is used by theorem 2, `qs` by
/// theorem 3; theorem 1 ignores both.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub x_count: usize,
    pub alphas: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ps: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub qs: Vec<f64>,
}

impl Default for SweepGrid {
    fn default() -> Self {
        Self {
            x_count: STANDARD_GRID,
            alphas: DEFAULT_ALPHAS.to_vec(),
            ps: Vec::new(),
            qs: Vec::new(),
        }
    }
}

impl SweepGrid {
    pub fn new(x_count: usize, alphas: &[f64]) -> Self {
        Self { x_count, alphas: alphas.to_vec(), ..Self::default() }
    }

    pub fn with_ps(mut self, ps: &[f64]) -> Self {
        self.ps = ps.to_vec();
        self
    }

    pub fn with_qs(mut self, qs: &[f64]) -> Self {
        self.qs = qs.to_vec();
        self
    }

    /// Every (α, p or q) combination for the theorem, α outermost.
    pub fn params(&self, theorem: Theorem, s: Option<f64>) -> Result<Vec<FracParams>, VerifyError> {
        if self.x_count < 2 {
            return Err(VerifyError::Grid(format!("need at least 2 x points, got {}", self.x_count)));
        }
        if self.alphas.is_empty() {
            return Err(VerifyError::Grid("empty alpha list".into()));
        }
        let mut out = Vec::new();
        for &alpha in &self.alphas {
            let mut base = FracParams::new(alpha)?;
            if let Some(s) = s {
                base = base.with_s(s)?;
            }
            match theorem {
                Theorem::One => out.push(base),
                Theorem::Two => {
                    if self.ps.is_empty() {
                        return Err(VerifyError::Grid("theorem 2 needs at least one p".into()));
                    }
                    for &p in &self.ps {
                        out.push(base.with_p(p)?);
                    }
                }
                Theorem::Three => {
                    if self.qs.is_empty() {
                        return Err(VerifyError::Grid("theorem 3 needs at least one q".into()));
                    }
                    for &q in &self.qs {
                        out.push(base.with_q(q)?);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Exponent on |f′| in the h-convexity hypothesis.
pub fn derivative_exponent(theorem: Theorem, params: &FracParams) -> f64 {
    match theorem {
        Theorem::One => 1.0,
        Theorem::Two | Theorem::Three => params.q.unwrap_or(1.0),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub function_name: String,
    pub h_name: String,
    pub theorem: Theorem,
    pub variant: Variant,
    pub grid: SweepGrid,
    pub hypotheses: HypothesisFlags,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reports: Vec<BoundReport>,
    pub min_slack: Option<f64>,
    pub argmin_x: Option<f64>,
    pub violations: usize,
    pub status: SweepStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl SweepResult {
    /// The result without per-point reports.
    pub fn projection(&self) -> SweepResult {
        SweepResult { reports: Vec::new(), ..self.clone() }
    }

    fn empty(f: &TestFunction, h: &HFunction, theorem: Theorem, variant: Variant, grid: &SweepGrid) -> Self {
        Self {
            function_name: f.label(),
            h_name: h.label(),
            theorem,
            variant,
            grid: grid.clone(),
            hypotheses: HypothesisFlags::default(),
            reports: Vec::new(),
            min_slack: None,
            argmin_x: None,
            violations: 0,
            status: SweepStatus::Pass,
            message: None,
        }
    }
}

/// Slack minimum over x for one parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tightness {
    pub x_star: f64,
    pub min_slack: f64,
    pub coarse_x: f64,
    pub coarse_min_slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalComparison {
    pub h_name: String,
    pub thm1_factor: f64,
    pub thm1_better: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thm2_lhs_factor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thm2_threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thm2_better: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityPoint {
    pub x: f64,
    pub alpha: f64,
    pub signed_lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentitySweep {
    pub function_name: String,
    pub points: Vec<IdentityPoint>,
    pub max_residual: f64,
    pub worst_x: f64,
    pub worst_alpha: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorollaryRow {
    pub alpha: f64,
    pub closed_form: f64,
    pub quadrature: f64,
    pub relative_difference: f64,
    pub agrees: bool,
}

/// Cached certification and left-hand-side evaluation.
#[derive(Debug, Clone)]
pub struct Verifier {
    cfg: QuadratureConfig,
    gate: Gate,
    certification_grid: usize,
    flags: HashMap<(String, String, u64), HypothesisFlags>,
    lhs: HashMap<(String, u64, u64), f64>,
}

impl Verifier {
    pub fn new(cfg: QuadratureConfig) -> Self {
        Self {
            cfg,
            gate: Gate::Enforce,
            certification_grid: STANDARD_GRID,
            flags: HashMap::new(),
            lhs: HashMap::new(),
        }
    }

    pub fn with_gate(mut self, gate: Gate) -> Self {
        self.gate = gate;
        self
    }

    pub fn with_certification_grid(mut self, grid_n: usize) -> Self {
        self.certification_grid = grid_n;
        self
    }

    pub fn config(&self) -> &QuadratureConfig {
        &self.cfg
    }

    /// Certifies every hypothesis for (f, h) with |f′|^q in the h-convexity
    /// condition. Results are cached by the function labels.
    pub fn hypotheses(&mut self, f: &TestFunction, h: &HFunction, q: f64) -> Result<HypothesisFlags, FuncError> {
        let key = (f.label(), h.label(), q.to_bits());
        if let Some(flags) = self.flags.get(&key) {
            return Ok(*flags);
        }
        let grid = self.certification_grid;
        let mut flags = HypothesisFlags::from_h(h.certified_or_check()?);
        flags.derivative_bounded =
            f.check_derivative_bound(grid)?.holds && f.check_derivative_consistency(grid)?.holds;
        flags.derivative_h_convex = match funcs::check_h_convex(|t| f.derivative(t).abs().powf(q), f.a(), f.b(), h, grid) {
            Ok(report) => report.holds,
            Err(FuncError::Domain { .. }) => false,
            Err(other) => return Err(other),
        };
        self.flags.insert(key, flags);
        Ok(flags)
    }

    pub fn lhs(&mut self, f: &TestFunction, x: f64, alpha: f64) -> Result<f64, BoundError> {
        let key = (f.label(), alpha.to_bits(), x.to_bits());
        if let Some(&v) = self.lhs.get(&key) {
            return Ok(v);
        }
        let v = bounds::ostrowski_lhs(f, x, alpha, &self.cfg)?;
        self.lhs.insert(key, v);
        Ok(v)
    }

    fn prepare(
        &self,
        h: &HFunction,
        theorem: Theorem,
        variant: Variant,
        params: &FracParams,
    ) -> Result<(PreparedBound, Option<PreparedBound>), BoundError> {
        // hypotheses are gated by the caller, which also knows the f side
        let first = PreparedBound::new(theorem, Variant::First, h, params, Gate::Force, &self.cfg)?;
        let second = match variant {
            Variant::First => None,
            Variant::Second => Some(PreparedBound::new(theorem, Variant::Second, h, params, Gate::Force, &self.cfg)?),
        };
        Ok((first, second))
    }

    /// Evaluates the variant (and, for the second variant, also the first)
    /// at every grid x and parameter set.
    pub fn sweep(
        &mut self,
        f: &TestFunction,
        h: &HFunction,
        theorem: Theorem,
        variant: Variant,
        grid: &SweepGrid,
    ) -> Result<SweepResult, VerifyError> {
        let combos = grid.params(theorem, h.param("s"))?;
        let mut result = SweepResult::empty(f, h, theorem, variant, grid);

        let mut flags_per_combo = Vec::with_capacity(combos.len());
        let mut missing = None;
        for params in &combos {
            let q = derivative_exponent(theorem, params);
            let flags = self.hypotheses(f, h, q)?;
            if missing.is_none() {
                missing = flags.missing(theorem, variant).map(|hyp| (hyp, q));
            }
            flags_per_combo.push(flags);
        }
        // report the first combination's flags, or the failing one's
        result.hypotheses = flags_per_combo[0];
        if let Some((hyp, q)) = missing {
            result.status = SweepStatus::Uncertified;
            result.message = Some(format!("hypothesis `{hyp}` is not certified (q = {q})"));
            if self.gate == Gate::Enforce {
                return Ok(result);
            }
        }

        let mut prepared = Vec::with_capacity(combos.len());
        for params in &combos {
            match self.prepare(h, theorem, variant, params) {
                Ok(pair) => prepared.push(pair),
                Err(e) if e.is_divergent() => {
                    result.status = SweepStatus::Divergent;
                    result.message = Some(e.to_string());
                    return Ok(result);
                }
                Err(e) => return Err(e.into()),
            }
        }

        let mut reports = Vec::with_capacity(grid.x_count * combos.len());
        for x in funcs::closed_grid(f.a(), f.b(), grid.x_count) {
            for ((first, second), flags) in prepared.iter().zip(&flags_per_combo) {
                let lhs = match self.lhs(f, x, first.params.alpha) {
                    Ok(v) => v,
                    Err(e) if e.is_divergent() => {
                        result.status = SweepStatus::Divergent;
                        result.message = Some(e.to_string());
                        return Ok(result);
                    }
                    Err(e) => return Err(e.into()),
                };
                reports.push(BoundReport::from_lhs(f, x, lhs, first, second.as_ref(), *flags)?);
            }
        }
        reports.sort_by(|a, b| {
            a.x.total_cmp(&b.x)
                .then(a.params.alpha.total_cmp(&b.params.alpha))
                .then(a.params.p.unwrap_or(0.0).total_cmp(&b.params.p.unwrap_or(0.0)))
                .then(a.params.q.unwrap_or(0.0).total_cmp(&b.params.q.unwrap_or(0.0)))
        });

        for report in &reports {
            let slack = report.slack();
            if result.min_slack.is_none_or(|m| slack < m) {
                result.min_slack = Some(slack);
                result.argmin_x = Some(report.x);
            }
            if !(report.holds() && report.ordered()) {
                result.violations += 1;
            }
        }
        result.reports = reports;
        if result.status != SweepStatus::Uncertified {
            result.status = if result.violations == 0 { SweepStatus::Pass } else { SweepStatus::Fail };
        }
        Ok(result)
    }

    /// Minimizes slack(x) = bound(x) − lhs(x): a 101-point scan, then
    /// golden-section search on the bracket around the best grid point until
    /// the bracket is shorter than 1e-6·(b − a).
    pub fn tightness_search(
        &mut self,
        f: &TestFunction,
        h: &HFunction,
        theorem: Theorem,
        variant: Variant,
        params: &FracParams,
    ) -> Result<Tightness, VerifyError> {
        let q = derivative_exponent(theorem, params);
        let flags = self.hypotheses(f, h, q)?;
        if self.gate == Gate::Enforce {
            if let Some(hyp) = flags.missing(theorem, variant) {
                return Err(VerifyError::Uncertified(hyp));
            }
        }
        let bound = PreparedBound::new(theorem, variant, h, params, Gate::Force, &self.cfg)?;
        let (a, b, m) = (f.a(), f.b(), f.m());
        let alpha = params.alpha;
        let mut slack = |x: f64| -> Result<f64, VerifyError> { Ok(bound.at(m, a, b, x)? - self.lhs(f, x, alpha)?) };

        let xs: Vec<f64> = funcs::closed_grid(a, b, STANDARD_GRID).collect();
        let mut best_i = 0;
        let mut best = f64::INFINITY;
        for (i, &x) in xs.iter().enumerate() {
            let s = slack(x)?;
            if s < best {
                best = s;
                best_i = i;
            }
        }
        let coarse_x = xs[best_i];
        let coarse_min_slack = best;
        let mut x_star = coarse_x;

        let mut lo = xs[best_i.saturating_sub(1)];
        let mut hi = xs[(best_i + 1).min(xs.len() - 1)];
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let mut c = hi - inv_phi * (hi - lo);
        let mut d = lo + inv_phi * (hi - lo);
        let mut fc = slack(c)?;
        let mut fd = slack(d)?;
        let offer = |x: f64, s: f64, best: &mut f64, x_star: &mut f64| {
            if s < *best {
                *best = s;
                *x_star = x;
            }
        };
        offer(c, fc, &mut best, &mut x_star);
        offer(d, fd, &mut best, &mut x_star);
        while hi - lo >= GOLDEN_TOL * (b - a) {
            if fc <= fd {
                hi = d;
                d = c;
                fd = fc;
                c = hi - inv_phi * (hi - lo);
                fc = slack(c)?;
                offer(c, fc, &mut best, &mut x_star);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + inv_phi * (hi - lo);
                fd = slack(d)?;
                offer(d, fd, &mut best, &mut x_star);
            }
        }
        Ok(Tightness { x_star, min_slack: best, coarse_x, coarse_min_slack })
    }
}

pub fn sweep(
    f: &TestFunction,
    h: &HFunction,
    theorem: Theorem,
    variant: Variant,
    grid: &SweepGrid,
    cfg: &QuadratureConfig,
) -> Result<SweepResult, VerifyError> {
    Verifier::new(*cfg).sweep(f, h, theorem, variant, grid)
}

pub fn tightness_search(
    f: &TestFunction,
    h: &HFunction,
    theorem: Theorem,
    variant: Variant,
    params: &FracParams,
    cfg: &QuadratureConfig,
) -> Result<Tightness, VerifyError> {
    Verifier::new(*cfg).tightness_search(f, h, theorem, variant, params)
}

/// Order-one weights against the classical bound. The comparisons are
/// strict, and a weight only counts as smaller when it stays smaller after
/// adding its quadrature error estimate.
pub fn compare_classical(h: &HFunction, p: Option<f64>, cfg: &QuadratureConfig) -> Result<ClassicalComparison, VerifyError> {
    let thm1 = fracint::integrate_unit_with_error(|t| h.eval(t * t) + h.eval(t - t * t), cfg)
        .map_err(BoundError::from)?;
    let mut out = ClassicalComparison {
        h_name: h.label(),
        thm1_factor: thm1.value,
        thm1_better: thm1.value + thm1.abs_error < 0.5,
        p,
        thm2_lhs_factor: None,
        thm2_threshold: None,
        thm2_better: None,
    };
    if let Some(p) = p {
        if !(p.is_finite() && p > 1.0) {
            return Err(VerifyError::Grid(format!("p must be > 1, got {p}")));
        }
        let q = p / (p - 1.0);
        let w = fracint::integrate_unit_with_error(|t| h.eval(t) + h.eval(1.0 - t), cfg).map_err(BoundError::from)?;
        let threshold = (1.0 + p).powf(1.0 / p) / 2.0;
        out.thm2_lhs_factor = Some(w.value.powf(1.0 / q));
        out.thm2_threshold = Some(threshold);
        out.thm2_better = Some((w.value + w.abs_error).powf(1.0 / q) < threshold);
    }
    Ok(out)
}

/// Identity residuals at `x_count` interior points of [a, b] per α.
pub fn identity_sweep(
    f: &TestFunction,
    alphas: &[f64],
    x_count: usize,
    cfg: &QuadratureConfig,
) -> Result<IdentitySweep, VerifyError> {
    if x_count == 0 || alphas.is_empty() {
        return Err(VerifyError::Grid("need at least one x point and one alpha".into()));
    }
    let mut points = Vec::with_capacity(x_count * alphas.len());
    for x in funcs::open_grid(f.a(), f.b(), x_count) {
        for &alpha in alphas {
            let signed_lhs = bounds::ostrowski_signed(f, x, alpha, cfg)?;
            let rhs = bounds::lemma1_rhs(f, x, alpha, cfg)?;
            points.push(IdentityPoint { x, alpha, signed_lhs, rhs, residual: (signed_lhs - rhs).abs() });
        }
    }
    let worst = points
        .iter()
        .fold(&points[0], |w, p| if p.residual > w.residual { p } else { w });
    Ok(IdentitySweep {
        function_name: f.label(),
        max_residual: worst.residual,
        worst_x: worst.x,
        worst_alpha: worst.alpha,
        holds: worst.residual <= bounds::IDENTITY_TOL,
        points,
    })
}

/// Closed-form weight factors for h(t) = t^s against the quadrature weight
/// factors of the same bound.
pub fn corollary_check(
    theorem: Theorem,
    variant: Variant,
    s: f64,
    alphas: &[f64],
    p_or_q: Option<f64>,
    rel_tol: f64,
    cfg: &QuadratureConfig,
) -> Result<Vec<CorollaryRow>, VerifyError> {
    let h = funcs::builtin_h("power", &[("s".to_string(), s)])?;
    let mut rows = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let closed_form = bounds::corollary_weight_factor(theorem, variant, s, alpha, p_or_q)?;
        let params = match theorem {
            Theorem::One => FracParams::new(alpha)?,
            Theorem::Two => FracParams::new(alpha)?.with_p(p_or_q.unwrap_or(f64::NAN))?,
            Theorem::Three => FracParams::new(alpha)?.with_q(p_or_q.unwrap_or(f64::NAN))?,
        };
        let quadrature = PreparedBound::new(theorem, variant, &h, &params, Gate::Enforce, cfg)?.weight_factor;
        let relative_difference = ((closed_form - quadrature) / quadrature).abs();
        rows.push(CorollaryRow {
            alpha,
            closed_form,
            quadrature,
            relative_difference,
            agrees: relative_difference <= rel_tol,
        });
    }
    Ok(rows)
}

/// Top-level pass/fail of a report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: bool,
    pub violations: usize,
    pub min_slack: Option<f64>,
    pub divergent: usize,
    pub uncertified: usize,
}

impl Summary {
    /// `tolerate_uncertified` lets uncertified entries pass (they make no
    /// numeric claim); divergent entries and violations never pass.
    pub fn from_results<'a>(results: impl IntoIterator<Item = &'a SweepResult>, tolerate_uncertified: bool) -> Self {
        Self::from_entries(results.into_iter().map(|r| (r.status, r.violations, r.min_slack)), tolerate_uncertified)
    }

    /// Summary over (status, violations, min_slack) entries.
    pub fn from_entries(
        entries: impl IntoIterator<Item = (SweepStatus, usize, Option<f64>)>,
        tolerate_uncertified: bool,
    ) -> Self {
        let mut summary = Summary { pass: true, violations: 0, min_slack: None, divergent: 0, uncertified: 0 };
        for (status, violations, min_slack) in entries {
            summary.record(status, violations, min_slack);
        }
        summary.finish(tolerate_uncertified)
    }

    fn record(&mut self, status: SweepStatus, violations: usize, min_slack: Option<f64>) {
        self.violations += violations;
        match status {
            SweepStatus::Divergent => self.divergent += 1,
            SweepStatus::Uncertified => self.uncertified += 1,
            SweepStatus::Fail => self.violations += usize::from(violations == 0),
            SweepStatus::Pass => {}
        }
        // uncertified entries carry no claims, forced or not
        if status != SweepStatus::Uncertified {
            if let Some(s) = min_slack {
                if self.min_slack.is_none_or(|m| s < m) {
                    self.min_slack = Some(s);
                }
            }
        }
    }

    fn finish(mut self, tolerate_uncertified: bool) -> Self {
        self.pass = self.violations == 0 && self.divergent == 0 && (tolerate_uncertified || self.uncertified == 0);
        self
    }

    /// Recomputes the summary from serialized results, each carrying
    /// `status`, and optionally `violations` and `min_slack`.
    pub fn from_json_results(results: &[Value], tolerate_uncertified: bool) -> Result<Self, String> {
        let mut summary = Summary { pass: true, violations: 0, min_slack: None, divergent: 0, uncertified: 0 };
        for (i, r) in results.iter().enumerate() {
            let status: SweepStatus = r
                .get("status")
                .cloned()
                .ok_or_else(|| format!("result {i} has no status"))
                .and_then(|v| serde_json::from_value(v).map_err(|e| format!("result {i}: {e}")))?;
            let violations = r.get("violations").and_then(Value::as_u64).unwrap_or(0) as usize;
            let min_slack = r.get("min_slack").and_then(Value::as_f64);
            summary.record(status, violations, min_slack);
        }
        Ok(summary.finish(tolerate_uncertified))
    }

    /// 0 pass, 1 violation, 3 divergent or uncertified.
    pub fn exit_code(&self) -> i32 {
        if self.violations > 0 {
            1
        } else if self.pass {
            0
        } else {
            3
        }
    }
}

/// JSON report: the run configuration, one entry per result and a summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: Value,
    pub results: Vec<Value>,
    pub summary: Summary,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report values are JSON-safe");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Whether uncertified entries are expected (suite runs skip them).
    pub fn tolerates_uncertified(&self) -> bool {
        self.config.get("subcommand").and_then(Value::as_str) == Some("suite")
    }

    /// The summary recomputed from `results`.
    pub fn recomputed_summary(&self) -> Result<Summary, String> {
        Summary::from_json_results(&self.results, self.tolerates_uncertified())
    }
}

/// The registry-wide verification run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub functions: Vec<String>,
    pub hs: Vec<String>,
    pub alphas: Vec<f64>,
    pub ps: Vec<f64>,
    pub qs: Vec<f64>,
    pub x_count: usize,
    pub certification_grid: usize,
    pub quadrature: QuadratureConfig,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            functions: vec!["square".into(), "cube".into(), "exp".into()],
            hs: vec!["identity".into(), "power:s=0.5".into(), "power:s=0.75".into(), "one".into()],
            alphas: DEFAULT_ALPHAS.to_vec(),
            ps: vec![1.5, 2.0, 4.0],
            qs: vec![1.0, 2.0, 3.0],
            x_count: STANDARD_GRID,
            certification_grid: STANDARD_GRID,
            quadrature: QuadratureConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOutcome {
    pub config: SuiteConfig,
    /// One sweep per (f, h, theorem, variant, p or q), with reports.
    pub results: Vec<SweepResult>,
}

impl SuiteOutcome {
    pub fn summary(&self) -> Summary {
        Summary::from_results(&self.results, true)
    }

    pub fn report(&self) -> Report {
        let mut config = serde_json::to_value(&self.config).expect("suite config is JSON-safe");
        config["subcommand"] = Value::from("suite");
        Report {
            config,
            results: self
                .results
                .iter()
                .map(|r| serde_json::to_value(r.projection()).expect("sweep results are JSON-safe"))
                .collect(),
            summary: self.summary(),
        }
    }
}

/// Every theorem and variant over the configured functions, h and exponents.
pub fn full_suite(config: &SuiteConfig) -> Result<SuiteOutcome, VerifyError> {
    let mut verifier = Verifier::new(config.quadrature).with_certification_grid(config.certification_grid);
    let fs = config
        .functions
        .iter()
        .map(|s| funcs::f_from_spec(s))
        .collect::<Result<Vec<_>, _>>()?;
    let hs = config
        .hs
        .iter()
        .map(|s| funcs::h_from_spec(s))
        .collect::<Result<Vec<_>, _>>()?;
    let base = SweepGrid::new(config.x_count, &config.alphas);
    let mut grids: Vec<(Theorem, SweepGrid)> = vec![(Theorem::One, base.clone())];
    grids.extend(config.ps.iter().map(|&p| (Theorem::Two, base.clone().with_ps(&[p]))));
    grids.extend(config.qs.iter().map(|&q| (Theorem::Three, base.clone().with_qs(&[q]))));

    let mut results = Vec::new();
    for f in &fs {
        for h in &hs {
            for (theorem, grid) in &grids {
                for variant in [Variant::First, Variant::Second] {
                    results.push(verifier.sweep(f, h, *theorem, variant, grid)?);
                }
            }
        }
    }
    Ok(SuiteOutcome { config: config.clone(), results })
}
