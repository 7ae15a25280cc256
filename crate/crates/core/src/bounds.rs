//! The fractional Ostrowski quantity, its integral identity, and the bound
//! families for h-convex derivatives.
//!
//! Every bound has the shape `M · G(x) · W`, where
//! `G(x) = ((x − a)^(α+1) + (b − x)^(α+1)) / (b − a)` is the geometric
//! prefactor and `W` is a weight factor that depends only on h, the
//! variant and the exponents. [`PreparedBound`] caches `W` so that sweeps
//! over x evaluate each weight integral once.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fracint::{self, FracError, FracParams, QuadError, QuadratureConfig};
use crate::funcs::{FuncError, HFunction, HProperties, TestFunction};
use crate::specfun::{self, SpecFunError};

/// Slack below which a bound counts as violated.
pub const SLACK_TOL: f64 = 1e-8;

/// Allowed excess of the first variant over the second.
pub const ORDERING_TOL: f64 = 1e-10;

/// Contract on the identity residual.
pub const IDENTITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("divergent bound: {0}")]
    Divergent(QuadError),
    #[error("hypothesis `{0}` is not certified")]
    Hypothesis(Hypothesis),
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Frac(FracError),
    #[error(transparent)]
    Func(#[from] FuncError),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
}

impl BoundError {
    pub fn is_divergent(&self) -> bool {
        matches!(self, Self::Divergent(_))
    }
}

impl From<QuadError> for BoundError {
    fn from(err: QuadError) -> Self {
        if err.is_divergent() {
            Self::Divergent(err)
        } else {
            Self::Frac(FracError::Quad(err))
        }
    }
}

impl From<FracError> for BoundError {
    fn from(err: FracError) -> Self {
        match err {
            FracError::Quad(q) => q.into(),
            FracError::SpecFun(s) => Self::SpecFun(s),
            other => Self::Frac(other),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Theorem {
    /// |f′| h-convex; weights ∫t^α[h(t) + h(1−t)] and ∫[h(t^(α+1)) + h(t^α(1−t))].
    One,
    /// |f′|^q h-convex via Hölder with conjugate p; weights ∫[h(t) + h(1−t)] and h(1).
    Two,
    /// |f′|^q h-convex via the power mean; q-th roots of the Theorem One weights.
    Three,
}

impl From<Theorem> for u8 {
    fn from(t: Theorem) -> u8 {
        match t {
            Theorem::One => 1,
            Theorem::Two => 2,
            Theorem::Three => 3,
        }
    }
}

impl TryFrom<u8> for Theorem {
    type Error = String;

    fn try_from(n: u8) -> Result<Self, String> {
        match n {
            1 => Ok(Theorem::One),
            2 => Ok(Theorem::Two),
            3 => Ok(Theorem::Three),
            other => Err(format!("theorem must be 1, 2 or 3, got {other}")),
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", u8::from(*self))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    First,
    Second,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::First => "first",
            Variant::Second => "second",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Hypothesis {
    HNonneg,
    DerivativeBounded,
    DerivativeHConvex,
    Supermultiplicative,
    DominatesIdentity,
    Superadditive,
}

impl Hypothesis {
    /// Whether the hypothesis is about h alone (checkable without f).
    pub fn concerns_h(self) -> bool {
        !matches!(self, Hypothesis::DerivativeBounded | Hypothesis::DerivativeHConvex)
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Hypothesis::HNonneg => "h_nonneg",
            Hypothesis::DerivativeBounded => "derivative_bounded",
            Hypothesis::DerivativeHConvex => "derivative_h_convex",
            Hypothesis::Supermultiplicative => "supermultiplicative",
            Hypothesis::DominatesIdentity => "dominates_identity",
            Hypothesis::Superadditive => "superadditive",
        })
    }
}

/// Hypotheses of a theorem variant, in the order they are reported.
pub fn required_hypotheses(theorem: Theorem, variant: Variant) -> &'static [Hypothesis] {
    use Hypothesis::*;
    match (theorem, variant) {
        (Theorem::One | Theorem::Three, Variant::First) | (Theorem::Two, Variant::First) => {
            &[HNonneg, DerivativeBounded, DerivativeHConvex]
        }
        (Theorem::One | Theorem::Three, Variant::Second) => &[
            HNonneg,
            DerivativeBounded,
            DerivativeHConvex,
            Supermultiplicative,
            DominatesIdentity,
        ],
        (Theorem::Two, Variant::Second) => &[HNonneg, DerivativeBounded, DerivativeHConvex, Superadditive],
    }
}

/// Which hypotheses were certified for one evaluation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisFlags {
    pub h_nonneg: bool,
    pub derivative_bounded: bool,
    pub derivative_h_convex: bool,
    pub supermultiplicative: bool,
    pub dominates_identity: bool,
    pub superadditive: bool,
}

impl HypothesisFlags {
    /// h-side flags only; the f-side ones start false.
    pub fn from_h(props: HProperties) -> Self {
        Self {
            h_nonneg: props.nonneg,
            supermultiplicative: props.supermultiplicative,
            dominates_identity: props.dominates_identity,
            superadditive: props.superadditive,
            ..Self::default()
        }
    }

    pub fn get(&self, hypothesis: Hypothesis) -> bool {
        match hypothesis {
            Hypothesis::HNonneg => self.h_nonneg,
            Hypothesis::DerivativeBounded => self.derivative_bounded,
            Hypothesis::DerivativeHConvex => self.derivative_h_convex,
            Hypothesis::Supermultiplicative => self.supermultiplicative,
            Hypothesis::DominatesIdentity => self.dominates_identity,
            Hypothesis::Superadditive => self.superadditive,
        }
    }

    /// First uncertified hypothesis of the variant, if any.
    pub fn missing(&self, theorem: Theorem, variant: Variant) -> Option<Hypothesis> {
        required_hypotheses(theorem, variant).iter().copied().find(|&h| !self.get(h))
    }

    pub fn satisfies(&self, theorem: Theorem, variant: Variant) -> bool {
        self.missing(theorem, variant).is_none()
    }
}

/// Whether bound evaluators refuse uncertified hypotheses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gate {
    #[default]
    Enforce,
    /// Evaluate anyway; callers must mark the result uncertified.
    Force,
}

fn check_interval(a: f64, b: f64, x: f64) -> Result<(), BoundError> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(BoundError::Input(format!("need a < b, got [{a}, {b}]")));
    }
    if !(x >= a && x <= b) {
        return Err(BoundError::Input(format!("x = {x} outside [{a}, {b}]")));
    }
    Ok(())
}

fn check_alpha(alpha: f64) -> Result<(), BoundError> {
    if alpha.is_finite() && alpha > 0.0 {
        Ok(())
    } else {
        Err(BoundError::Input(format!("alpha must be > 0, got {alpha}")))
    }
}

/// ((x − a)^(α+1) + (b − x)^(α+1)) / (b − a).
pub fn geometric_factor(a: f64, b: f64, x: f64, alpha: f64) -> f64 {
    ((x - a).powf(alpha + 1.0) + (b - x).powf(alpha + 1.0)) / (b - a)
}

/// Signed left-hand side
/// `((x−a)^α + (b−x)^α)/(b−a) · f(x) − Γ(α+1)/(b−a) · [J_{x−}^α f(a) + J_{x+}^α f(b)]`,
/// where J_{x−}^α f(a) integrates (t − a)^(α−1) f(t) over [a, x] and
/// J_{x+}^α f(b) integrates (b − t)^(α−1) f(t) over [x, b].
pub fn ostrowski_signed(f: &TestFunction, x: f64, alpha: f64, cfg: &QuadratureConfig) -> Result<f64, BoundError> {
    let (a, b) = (f.a(), f.b());
    check_interval(a, b, x)?;
    check_alpha(alpha)?;
    let lower = fracint::rl_right(f, a, x, alpha, cfg)?;
    let upper = fracint::rl_left(f, x, b, alpha, cfg)?;
    let width = b - a;
    let mean_weight = ((x - a).powf(alpha) + (b - x).powf(alpha)) / width;
    Ok(mean_weight * f.value(x) - specfun::gamma(alpha + 1.0)? / width * (lower + upper))
}

pub fn ostrowski_lhs(f: &TestFunction, x: f64, alpha: f64, cfg: &QuadratureConfig) -> Result<f64, BoundError> {
    ostrowski_signed(f, x, alpha, cfg).map(f64::abs)
}

/// Right-hand side of the integral identity, built from f′ only:
/// `(x−a)^(α+1)/(b−a) ∫₀¹ t^α f′(tx + (1−t)a) dt − (b−x)^(α+1)/(b−a) ∫₀¹ t^α f′(tx + (1−t)b) dt`.
pub fn lemma1_rhs(f: &TestFunction, x: f64, alpha: f64, cfg: &QuadratureConfig) -> Result<f64, BoundError> {
    let (a, b) = (f.a(), f.b());
    check_interval(a, b, x)?;
    check_alpha(alpha)?;
    let width = b - a;
    let left = if x > a {
        let integral = fracint::integrate_unit(|t| t.powf(alpha) * f.derivative(t * x + (1.0 - t) * a), cfg)?;
        (x - a).powf(alpha + 1.0) / width * integral
    } else {
        0.0
    };
    let right = if x < b {
        let integral = fracint::integrate_unit(|t| t.powf(alpha) * f.derivative(t * x + (1.0 - t) * b), cfg)?;
        (b - x).powf(alpha + 1.0) / width * integral
    } else {
        0.0
    };
    Ok(left - right)
}

/// |signed left-hand side − identity right-hand side|.
pub fn identity_residual(f: &TestFunction, x: f64, alpha: f64, cfg: &QuadratureConfig) -> Result<f64, BoundError> {
    Ok((ostrowski_signed(f, x, alpha, cfg)? - lemma1_rhs(f, x, alpha, cfg)?).abs())
}

/// Classical Ostrowski bound M(b − a)[1/4 + (x − (a+b)/2)²/(b − a)²].
pub fn bound_classical(m: f64, a: f64, b: f64, x: f64) -> Result<f64, BoundError> {
    check_interval(a, b, x)?;
    if !(m.is_finite() && m >= 0.0) {
        return Err(BoundError::Input(format!("M must be >= 0, got {m}")));
    }
    let width = b - a;
    let offset = x - 0.5 * (a + b);
    Ok(m * width * (0.25 + offset * offset / (width * width)))
}

/// The raw weight integral of a theorem variant (before roots and
/// Hölder/power-mean constants). Theorem Two's second variant is h(1).
pub fn weight_integral(
    theorem: Theorem,
    variant: Variant,
    h: &HFunction,
    alpha: f64,
    cfg: &QuadratureConfig,
) -> Result<f64, BoundError> {
    check_alpha(alpha)?;
    let value = match (theorem, variant) {
        (Theorem::One | Theorem::Three, Variant::First) => {
            fracint::integrate_unit(|t| t.powf(alpha) * (h.eval(t) + h.eval(1.0 - t)), cfg)?
        }
        (Theorem::One | Theorem::Three, Variant::Second) => fracint::integrate_unit(
            |t| h.eval(t.powf(alpha + 1.0)) + h.eval(t.powf(alpha) * (1.0 - t)),
            cfg,
        )?,
        (Theorem::Two, Variant::First) => fracint::integrate_unit(|t| h.eval(t) + h.eval(1.0 - t), cfg)?,
        (Theorem::Two, Variant::Second) => h.try_eval(1.0)?,
    };
    Ok(value)
}

fn exponent_q(theorem: Theorem, params: &FracParams) -> Result<f64, BoundError> {
    match theorem {
        Theorem::One => Ok(1.0),
        Theorem::Two => {
            let p = params
                .p
                .ok_or_else(|| BoundError::Input("theorem 2 needs a Hölder exponent p > 1".into()))?;
            if !(p.is_finite() && p > 1.0) {
                return Err(BoundError::Input(format!("p must be > 1, got {p}")));
            }
            Ok(p / (p - 1.0))
        }
        Theorem::Three => {
            let q = params
                .q
                .ok_or_else(|| BoundError::Input("theorem 3 needs an exponent q >= 1".into()))?;
            if !(q.is_finite() && q >= 1.0) {
                return Err(BoundError::Input(format!("q must be >= 1, got {q}")));
            }
            Ok(q)
        }
    }
}

/// Multiplier turning a raw weight integral into the full weight factor.
fn finish_weight(theorem: Theorem, raw: f64, alpha: f64, p: Option<f64>, q: f64) -> f64 {
    match theorem {
        Theorem::One => raw,
        Theorem::Two => {
            let p = p.unwrap_or(q / (q - 1.0));
            raw.powf(1.0 / q) / (1.0 + p * alpha).powf(1.0 / p)
        }
        Theorem::Three => raw.powf(1.0 / q) / (1.0 + alpha).powf(1.0 - 1.0 / q),
    }
}

/// A bound with its x-independent weight factor evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PreparedBound {
    pub theorem: Theorem,
    pub variant: Variant,
    pub params: FracParams,
    /// Exponent applied to |f′| in the h-convexity hypothesis.
    pub q: f64,
    pub weight_factor: f64,
}

impl PreparedBound {
    pub fn new(
        theorem: Theorem,
        variant: Variant,
        h: &HFunction,
        params: &FracParams,
        gate: Gate,
        cfg: &QuadratureConfig,
    ) -> Result<Self, BoundError> {
        params.validate()?;
        let q = exponent_q(theorem, params)?;
        if gate == Gate::Enforce {
            let flags = HypothesisFlags::from_h(h.certified_or_check()?);
            if let Some(missing) = required_hypotheses(theorem, variant)
                .iter()
                .copied()
                .find(|hyp| hyp.concerns_h() && !flags.get(*hyp))
            {
                return Err(BoundError::Hypothesis(missing));
            }
        }
        let raw = weight_integral(theorem, variant, h, params.alpha, cfg)?;
        let p = if theorem == Theorem::Two { params.p } else { None };
        Ok(Self {
            theorem,
            variant,
            params: *params,
            q,
            weight_factor: finish_weight(theorem, raw, params.alpha, p, q),
        })
    }

    pub fn at(&self, m: f64, a: f64, b: f64, x: f64) -> Result<f64, BoundError> {
        check_interval(a, b, x)?;
        if !(m.is_finite() && m >= 0.0) {
            return Err(BoundError::Input(format!("M must be >= 0, got {m}")));
        }
        Ok(m * geometric_factor(a, b, x, self.params.alpha) * self.weight_factor)
    }
}

#[allow(clippy::too_many_arguments)]
pub fn theorem_bound(
    theorem: Theorem,
    variant: Variant,
    h: &HFunction,
    m: f64,
    a: f64,
    b: f64,
    x: f64,
    params: &FracParams,
    gate: Gate,
    cfg: &QuadratureConfig,
) -> Result<f64, BoundError> {
    check_interval(a, b, x)?;
    PreparedBound::new(theorem, variant, h, params, gate, cfg)?.at(m, a, b, x)
}

/// Bound for |f′| h-convex with |f′| ≤ M. The caller vouches for the
/// f-side hypotheses; the h-side ones are enforced here.
#[allow(clippy::too_many_arguments)]
pub fn bound_thm1(
    h: &HFunction,
    m: f64,
    a: f64,
    b: f64,
    x: f64,
    alpha: f64,
    variant: Variant,
    cfg: &QuadratureConfig,
) -> Result<f64, BoundError> {
    let params = FracParams::new(alpha)?;
    theorem_bound(Theorem::One, variant, h, m, a, b, x, &params, Gate::Enforce, cfg)
}

/// Hölder bound for |f′|^q h-convex, q = p/(p − 1).
#[allow(clippy::too_many_arguments)]
pub fn bound_thm2(
    h: &HFunction,
    m: f64,
    a: f64,
    b: f64,
    x: f64,
    alpha: f64,
    p: f64,
    variant: Variant,
    cfg: &QuadratureConfig,
) -> Result<f64, BoundError> {
    let params = FracParams::new(alpha)?.with_p(p)?;
    theorem_bound(Theorem::Two, variant, h, m, a, b, x, &params, Gate::Enforce, cfg)
}

/// Power-mean bound for |f′|^q h-convex, q ≥ 1.
#[allow(clippy::too_many_arguments)]
pub fn bound_thm3(
    h: &HFunction,
    m: f64,
    a: f64,
    b: f64,
    x: f64,
    alpha: f64,
    q: f64,
    variant: Variant,
    cfg: &QuadratureConfig,
) -> Result<f64, BoundError> {
    let params = FracParams::new(alpha)?.with_q(q)?;
    theorem_bound(Theorem::Three, variant, h, m, a, b, x, &params, Gate::Enforce, cfg)
}

/// Closed-form weight factor for h(t) = t^s.
///
/// With B the Beta function:
/// * ∫t^α(t^s + (1−t)^s) = (1 + (α+s+1)·B(α+1, s+1)) / (α+s+1)
/// * ∫t^(s(α+1)) + t^(αs)(1−t)^s = (1 + (αs+s+1)·B(αs+1, s+1)) / (αs+s+1)
/// * ∫t^s + (1−t)^s = 2/(s+1), and h(1) = 1
pub fn corollary_weight_factor(
    theorem: Theorem,
    variant: Variant,
    s: f64,
    alpha: f64,
    p_or_q: Option<f64>,
) -> Result<f64, BoundError> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(BoundError::Input(format!("s must lie in (0, 1], got {s}")));
    }
    check_alpha(alpha)?;
    let first_raw = || -> Result<f64, BoundError> {
        let n = alpha + s + 1.0;
        // Γ(α+1)Γ(s+1)/Γ(α+s+1) = (α+s+1)·B(α+1, s+1)
        Ok((1.0 + n * specfun::beta(alpha + 1.0, s + 1.0)?) / n)
    };
    let second_raw = || -> Result<f64, BoundError> {
        let n = alpha * s + s + 1.0;
        Ok((1.0 + n * specfun::beta(alpha * s + 1.0, s + 1.0)?) / n)
    };
    let params = match theorem {
        Theorem::One => FracParams::new(alpha)?,
        Theorem::Two => {
            let p = p_or_q.ok_or_else(|| BoundError::Input("theorem 2 needs p".into()))?;
            FracParams::new(alpha)?.with_p(p)?
        }
        Theorem::Three => {
            let q = p_or_q.ok_or_else(|| BoundError::Input("theorem 3 needs q".into()))?;
            FracParams::new(alpha)?.with_q(q)?
        }
    };
    let q = exponent_q(theorem, &params)?;
    let raw = match (theorem, variant) {
        (Theorem::One | Theorem::Three, Variant::First) => first_raw()?,
        (Theorem::One | Theorem::Three, Variant::Second) => second_raw()?,
        (Theorem::Two, Variant::First) => 2.0 / (s + 1.0),
        (Theorem::Two, Variant::Second) => {
            // t^s is superadditive only at s = 1
            if s != 1.0 {
                return Err(BoundError::Hypothesis(Hypothesis::Superadditive));
            }
            1.0
        }
    };
    Ok(finish_weight(theorem, raw, alpha, params.p, q))
}

/// Closed-form bound for h(t) = t^s; `p_or_q` is p for theorem 2, q for theorem 3.
#[allow(clippy::too_many_arguments)]
pub fn corollary_power_bound(
    theorem: Theorem,
    variant: Variant,
    s: f64,
    m: f64,
    a: f64,
    b: f64,
    x: f64,
    alpha: f64,
    p_or_q: Option<f64>,
) -> Result<f64, BoundError> {
    check_interval(a, b, x)?;
    let factor = corollary_weight_factor(theorem, variant, s, alpha, p_or_q)?;
    Ok(m * geometric_factor(a, b, x, alpha) * factor)
}

/// Order-one bounds written out directly: without `p`,
/// `M[(x−a)² + (b−x)²]/(b−a) · ∫[h(t²) + h(t − t²)]`; with `p`,
/// `M[(x−a)² + (b−x)²]/((1+p)^(1/p)(b−a)) · (∫[h(t) + h(1−t)])^(1/q)`.
pub fn remark_alpha1_bound(
    h: &HFunction,
    m: f64,
    a: f64,
    b: f64,
    x: f64,
    p: Option<f64>,
    cfg: &QuadratureConfig,
) -> Result<f64, BoundError> {
    check_interval(a, b, x)?;
    if !(m.is_finite() && m >= 0.0) {
        return Err(BoundError::Input(format!("M must be >= 0, got {m}")));
    }
    let props = HypothesisFlags::from_h(h.certified_or_check()?);
    let square_sum = ((x - a).powi(2) + (b - x).powi(2)) / (b - a);
    match p {
        None => {
            for hyp in [Hypothesis::HNonneg, Hypothesis::Supermultiplicative, Hypothesis::DominatesIdentity] {
                if !props.get(hyp) {
                    return Err(BoundError::Hypothesis(hyp));
                }
            }
            let weight = fracint::integrate_unit(|t| h.eval(t * t) + h.eval(t - t * t), cfg)?;
            Ok(m * square_sum * weight)
        }
        Some(p) => {
            if !(p.is_finite() && p > 1.0) {
                return Err(BoundError::Input(format!("p must be > 1, got {p}")));
            }
            if !props.h_nonneg {
                return Err(BoundError::Hypothesis(Hypothesis::HNonneg));
            }
            let q = p / (p - 1.0);
            let weight = fracint::integrate_unit(|t| h.eval(t) + h.eval(1.0 - t), cfg)?;
            Ok(m * square_sum / (1.0 + p).powf(1.0 / p) * weight.powf(1.0 / q))
        }
    }
}

/// One evaluation point: the left-hand side against one or both variants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub x: f64,
    pub params: FracParams,
    pub theorem: Theorem,
    pub lhs: f64,
    pub bound_first: f64,
    pub bound_second: Option<f64>,
    pub slack_first: f64,
    pub slack_second: Option<f64>,
    pub hypotheses: HypothesisFlags,
    /// All hypotheses of the evaluated variants were certified.
    pub certified: bool,
    /// x sits on an endpoint of [a, b], where the bound is a limit.
    pub extrapolated: bool,
}

impl BoundReport {
    /// Evaluates lhs and the prepared bounds at x. `second` must belong to
    /// the same theorem and parameters as `first`.
    pub fn evaluate(
        f: &TestFunction,
        x: f64,
        first: &PreparedBound,
        second: Option<&PreparedBound>,
        hypotheses: HypothesisFlags,
        cfg: &QuadratureConfig,
    ) -> Result<Self, BoundError> {
        let alpha = first.params.alpha;
        let lhs = ostrowski_lhs(f, x, alpha, cfg)?;
        Self::from_lhs(f, x, lhs, first, second, hypotheses)
    }

    /// As [`BoundReport::evaluate`] with a precomputed left-hand side.
    pub fn from_lhs(
        f: &TestFunction,
        x: f64,
        lhs: f64,
        first: &PreparedBound,
        second: Option<&PreparedBound>,
        hypotheses: HypothesisFlags,
    ) -> Result<Self, BoundError> {
        let (a, b, m) = (f.a(), f.b(), f.m());
        let bound_first = first.at(m, a, b, x)?;
        let bound_second = second.map(|s| s.at(m, a, b, x)).transpose()?;
        let variant = if second.is_some() { Variant::Second } else { Variant::First };
        Ok(Self {
            x,
            params: first.params,
            theorem: first.theorem,
            lhs,
            bound_first,
            bound_second,
            slack_first: bound_first - lhs,
            slack_second: bound_second.map(|bound| bound - lhs),
            hypotheses,
            certified: hypotheses.satisfies(first.theorem, variant),
            extrapolated: x == a || x == b,
        })
    }

    /// Slack of the strongest evaluated variant claim (the second when present).
    pub fn slack(&self) -> f64 {
        self.slack_second.unwrap_or(self.slack_first)
    }

    pub fn bound(&self) -> f64 {
        self.bound_second.unwrap_or(self.bound_first)
    }

    /// Every present slack is at least −[`SLACK_TOL`].
    pub fn holds(&self) -> bool {
        self.slack_first >= -SLACK_TOL && self.slack_second.is_none_or(|s| s >= -SLACK_TOL)
    }

    /// The first variant does not exceed the second beyond [`ORDERING_TOL`].
    pub fn ordered(&self) -> bool {
        self.bound_second.is_none_or(|second| self.bound_first <= second + ORDERING_TOL)
    }
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::funcs::{builtin_f, builtin_h};

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn kv(pairs: &[(&str, f64)]) -> Vec<(String, f64)> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    fn h(name: &str) -> HFunction {
        crate::funcs::h_from_spec(name).unwrap()
    }

    #[test]
    fn lhs_examples() {
        let k = builtin_f("const", &kv(&[("a", 0.0), ("b", 2.0), ("c", 7.0)])).unwrap();
        for &(x, alpha) in &[(0.3, 0.5), (1.0, 1.0), (1.9, 2.0)] {
            assert!(ostrowski_lhs(&k, x, alpha, &cfg()).unwrap() < 1e-12);
        }
        let sq = builtin_f("square", &[]).unwrap();
        let v = ostrowski_lhs(&sq, 0.5, 1.0, &cfg()).unwrap();
        assert!((v - 1.0 / 12.0).abs() < 1e-12);
        let lin = builtin_f("linear", &[]).unwrap();
        assert!(ostrowski_lhs(&lin, 0.5, 0.5, &cfg()).unwrap() < 1e-12);
    }

    #[test]
    fn lhs_matches_independent_reference() {
        // 40-digit reference values from direct singular-kernel quadrature
        let cube = builtin_f("cube", &kv(&[("a", 0.0), ("b", 2.0)])).unwrap();
        let ex = builtin_f("exp", &[]).unwrap();
        let cases = [
            (&cube, 1.3, 0.5, -0.408_168_303_159_216_592_5),
            (&ex, 0.25, 2.0, -0.213_920_688_049_544_622_8),
            (&ex, 0.3, 0.5, -0.577_821_013_694_727_931_0),
        ];
        for (f, x, alpha, want) in cases {
            let got = ostrowski_signed(f, x, alpha, &cfg()).unwrap();
            assert!((got - want).abs() < 1e-9, "{} x={x} α={alpha}: {got} vs {want}", f.name());
        }
    }

    #[test]
    fn lhs_rejects_bad_inputs() {
        let sq = builtin_f("square", &[]).unwrap();
        assert!(matches!(ostrowski_lhs(&sq, 1.5, 1.0, &cfg()), Err(BoundError::Input(_))));
        assert!(matches!(ostrowski_lhs(&sq, 0.5, 0.0, &cfg()), Err(BoundError::Input(_))));
    }

    #[test]
    fn identity_examples() {
        let k = builtin_f("const", &kv(&[("c", 3.0)])).unwrap();
        assert_eq!(lemma1_rhs(&k, 0.4, 0.7, &cfg()).unwrap(), 0.0);
        assert!(identity_residual(&k, 0.4, 0.7, &cfg()).unwrap() < 1e-12);

        let sq = builtin_f("square", &[]).unwrap();
        let signed = ostrowski_signed(&sq, 0.5, 1.0, &cfg()).unwrap();
        let rhs = lemma1_rhs(&sq, 0.5, 1.0, &cfg()).unwrap();
        assert!((signed - rhs).abs() < 1e-12);
        assert!((rhs.abs() - 1.0 / 12.0).abs() < 1e-12);

        let lin = builtin_f("linear", &[]).unwrap();
        assert!((lemma1_rhs(&lin, 0.0, 1.0, &cfg()).unwrap() + 0.5).abs() < 1e-14);

        let cube = builtin_f("cube", &kv(&[("a", 0.0), ("b", 2.0)])).unwrap();
        assert!(identity_residual(&cube, 1.3, 0.5, &cfg()).unwrap() <= IDENTITY_TOL);
        let ex = builtin_f("exp", &[]).unwrap();
        assert!(identity_residual(&ex, 0.25, 2.0, &cfg()).unwrap() <= IDENTITY_TOL);
    }

    #[test]
    fn classical_examples() {
        assert_eq!(bound_classical(1.0, 0.0, 1.0, 0.5).unwrap(), 0.25);
        assert_eq!(bound_classical(1.0, 0.0, 1.0, 0.0).unwrap(), 0.5);
        assert_eq!(bound_classical(2.0, 0.0, 2.0, 0.5).unwrap(), 1.25);
        assert!(bound_classical(1.0, 1.0, 1.0, 1.0).is_err());
        assert!(bound_classical(1.0, 2.0, 1.0, 1.5).is_err());
    }

    #[test]
    fn thm1_examples() {
        let c = cfg();
        let v = bound_thm1(&h("identity"), 1.0, 0.0, 1.0, 0.5, 1.0, Variant::First, &c).unwrap();
        assert!((v - 0.25).abs() < 1e-12);
        let v = bound_thm1(&h("one"), 1.0, 0.0, 1.0, 0.5, 1.0, Variant::First, &c).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
        let v = bound_thm1(&h("power:s=0.5"), 1.0, 0.0, 1.0, 0.5, 0.5, Variant::Second, &c).unwrap();
        // 2·(1/2)^1.5 · 1.0708681055794513924…
        assert!((v - 0.757_218_099_211_621_807_9).abs() < 1e-10, "{v}");
    }

    #[test]
    fn thm1_godunova_diverges() {
        let err = bound_thm1(&h("godunova"), 1.0, 0.0, 1.0, 0.5, 1.0, Variant::First, &cfg()).unwrap_err();
        assert!(err.is_divergent(), "{err}");
    }

    #[test]
    fn thm2_examples() {
        let c = cfg();
        let want = 0.5 / 3f64.sqrt();
        let v = bound_thm2(&h("identity"), 1.0, 0.0, 1.0, 0.5, 1.0, 2.0, Variant::First, &c).unwrap();
        assert!((v - want).abs() < 1e-12);
        let v = bound_thm2(&h("identity"), 1.0, 0.0, 1.0, 0.5, 1.0, 2.0, Variant::Second, &c).unwrap();
        assert!((v - want).abs() < 1e-15);
        let v = bound_thm2(&h("power:s=0.5"), 1.0, 0.0, 1.0, 0.5, 1.0, 2.0, Variant::First, &c).unwrap();
        assert!((v - want * (4.0f64 / 3.0).sqrt()).abs() < 1e-11);
        assert!((v - 1.0 / 3.0).abs() < 1e-11);
        assert!(matches!(
            bound_thm2(&h("one"), 1.0, 0.0, 1.0, 0.5, 1.0, 1.0, Variant::First, &c),
            Err(BoundError::Frac(_))
        ));
    }

    #[test]
    fn thm3_examples() {
        let c = cfg();
        for name in ["identity", "one", "power:s=0.3"] {
            for variant in [Variant::First, Variant::Second] {
                let one = bound_thm1(&h(name), 1.5, 0.0, 2.0, 0.7, 0.8, variant, &c).unwrap();
                let three = bound_thm3(&h(name), 1.5, 0.0, 2.0, 0.7, 0.8, 1.0, variant, &c).unwrap();
                assert_eq!(one, three, "{name} {variant}");
            }
        }
        let v = bound_thm3(&h("identity"), 1.0, 0.0, 1.0, 0.5, 1.0, 2.0, Variant::First, &c).unwrap();
        assert!((v - 0.25).abs() < 1e-12);
        let v = bound_thm3(&h("one"), 1.0, 0.0, 1.0, 0.5, 1.0, 2.0, Variant::First, &c).unwrap();
        assert!((v - 0.353_553_390_6).abs() < 1e-10);
        assert!(bound_thm3(&h("one"), 1.0, 0.0, 1.0, 0.5, 1.0, 0.5, Variant::First, &c).is_err());
    }

    #[test]
    fn gating_names_the_missing_hypothesis() {
        let c = cfg();
        // h ≡ 1 is not superadditive
        let err = bound_thm2(&h("one"), 1.0, 0.0, 1.0, 0.5, 1.0, 2.0, Variant::Second, &c).unwrap_err();
        assert_eq!(err, BoundError::Hypothesis(Hypothesis::Superadditive));
        assert!(err.to_string().contains("superadditive"));
        // t² does not dominate t
        let sq = HFunction::custom("t^2", |t| t * t);
        let err = bound_thm1(&sq, 1.0, 0.0, 1.0, 0.5, 1.0, Variant::Second, &c).unwrap_err();
        assert_eq!(err, BoundError::Hypothesis(Hypothesis::DominatesIdentity));
        // forcing evaluates anyway
        let params = FracParams::new(1.0).unwrap();
        let v = theorem_bound(Theorem::One, Variant::Second, &sq, 1.0, 0.0, 1.0, 0.5, &params, Gate::Force, &c);
        assert!(v.unwrap() > 0.0);
        let neg = HFunction::custom("neg", |t| t - 0.5);
        let err = bound_thm1(&neg, 1.0, 0.0, 1.0, 0.5, 1.0, Variant::First, &c).unwrap_err();
        assert_eq!(err, BoundError::Hypothesis(Hypothesis::HNonneg));
    }

    #[test]
    fn corollary_examples() {
        let v = corollary_weight_factor(Theorem::One, Variant::First, 1.0, 1.0, None).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
        for p in [1.5, 2.0, 4.0] {
            let v = corollary_weight_factor(Theorem::Two, Variant::First, 1.0, 1.0, Some(p)).unwrap();
            // weight integral 2/(s+1) = 1 at s = 1, leaving the Hölder constant
            assert!((v - 1.0 / (1.0 + p).powf(1.0 / p)).abs() < 1e-15);
        }
        let v = corollary_weight_factor(Theorem::One, Variant::Second, 0.5, 0.5, None).unwrap();
        assert!((v - 1.070_868_105_579_451_392_5).abs() < 1e-13);
        assert!(corollary_weight_factor(Theorem::One, Variant::First, 0.0, 1.0, None).is_err());
        assert!(corollary_weight_factor(Theorem::One, Variant::First, 1.2, 1.0, None).is_err());
        assert_eq!(
            corollary_weight_factor(Theorem::Two, Variant::Second, 0.5, 1.0, Some(2.0)),
            Err(BoundError::Hypothesis(Hypothesis::Superadditive))
        );
    }

    #[test]
    fn corollary_matches_quadrature() {
        let c = cfg();
        let hp = h("power:s=0.5");
        let closed = corollary_power_bound(Theorem::One, Variant::Second, 0.5, 1.0, 0.0, 1.0, 0.5, 0.5, None).unwrap();
        let numeric = bound_thm1(&hp, 1.0, 0.0, 1.0, 0.5, 0.5, Variant::Second, &c).unwrap();
        assert!(((closed - numeric) / closed).abs() < 1e-10);
    }

    #[test]
    fn remark_examples() {
        let c = cfg();
        let v = remark_alpha1_bound(&h("identity"), 1.0, 0.0, 1.0, 0.5, None, &c).unwrap();
        assert!((v - 0.25).abs() < 1e-12);
        let v = remark_alpha1_bound(&h("one"), 1.0, 0.0, 1.0, 0.0, None, &c).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
        let v = remark_alpha1_bound(&h("power:s=1"), 1.0, 0.0, 1.0, 0.5, Some(2.0), &c).unwrap();
        assert!((v - 0.288_675_134_6).abs() < 1e-10);
    }

    #[test]
    fn remark_matches_order_one_theorems() {
        let c = cfg();
        for name in ["identity", "one", "power:s=0.25", "power:s=0.75"] {
            let hf = h(name);
            for &x in &[0.0, 0.2, 0.5, 0.9] {
                let r2 = remark_alpha1_bound(&hf, 1.3, 0.0, 1.0, x, None, &c).unwrap();
                let t1 = bound_thm1(&hf, 1.3, 0.0, 1.0, x, 1.0, Variant::Second, &c).unwrap();
                assert!((r2 - t1).abs() <= 1e-10 * t1.abs().max(1.0), "{name} x={x}");
                let r3 = remark_alpha1_bound(&hf, 1.3, 0.0, 1.0, x, Some(3.0), &c).unwrap();
                let t2 = bound_thm2(&hf, 1.3, 0.0, 1.0, x, 1.0, 3.0, Variant::First, &c).unwrap();
                assert!((r3 - t2).abs() <= 1e-10 * t2.abs().max(1.0), "{name} x={x}");
            }
        }
    }

    #[test]
    fn theorem_serializes_as_number() {
        assert_eq!(serde_json::to_string(&Theorem::Two).unwrap(), "2");
        assert_eq!(serde_json::from_str::<Theorem>("3").unwrap(), Theorem::Three);
        assert!(serde_json::from_str::<Theorem>("4").is_err());
        assert_eq!(serde_json::to_string(&Variant::Second).unwrap(), "\"second\"");
    }

    #[test]
    fn report_slack_and_ordering() {
        let c = cfg();
        let sq = builtin_f("square", &[]).unwrap();
        let hp = builtin_h("power", &kv(&[("s", 0.5)])).unwrap();
        let params = FracParams::new(0.5).unwrap();
        let first = PreparedBound::new(Theorem::One, Variant::First, &hp, &params, Gate::Enforce, &c).unwrap();
        let second = PreparedBound::new(Theorem::One, Variant::Second, &hp, &params, Gate::Enforce, &c).unwrap();
        let mut flags = HypothesisFlags::from_h(hp.certified().unwrap());
        flags.derivative_bounded = true;
        flags.derivative_h_convex = true;
        let report = BoundReport::evaluate(&sq, 0.3, &first, Some(&second), flags, &c).unwrap();
        assert!(report.certified && report.holds() && report.ordered());
        assert!(!report.extrapolated);
        assert_eq!(report.slack(), report.slack_second.unwrap());
        let edge = BoundReport::evaluate(&sq, 1.0, &first, None, flags, &c).unwrap();
        assert!(edge.extrapolated && edge.holds());
    }
}
