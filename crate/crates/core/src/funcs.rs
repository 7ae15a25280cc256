//! Weight functions h, test functions f, and grid checkers for the function
//! classes that the bounds assume.
//!
//! Checkers sample; they do not prove. Every check compares a "required"
//! quantity with an "available" one and reports the largest shortfall
//! (`worst_violation`) together with the grid point where it occurs. A
//! property holds when that shortfall is at most [`CHECK_TOL`].

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Absolute tolerance on grid violations.
pub const CHECK_TOL: f64 = 1e-12;

/// Points per axis used when certifying hypotheses.
pub const STANDARD_GRID: usize = 101;

/// Step and tolerance of the central-difference derivative certificate.
pub const FD_STEP: f64 = 1e-5;
pub const FD_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FuncError {
    #[error("unknown function `{0}`")]
    Unknown(String),
    #[error("invalid parameters for `{name}`: {msg}")]
    Param { name: String, msg: String },
    #[error("malformed function spec `{0}` (expected name or name:key=value,...)")]
    Spec(String),
    #[error("{name} is undefined at t = {t}")]
    Domain { name: String, t: f64 },
    #[error("function under test is negative ({value}) at {at}")]
    Negative { at: f64, value: f64 },
    #[error("grid needs at least 3 points, got {0}")]
    Grid(usize),
    #[error("claimed property `{property}` of {name} is refuted: worst violation {violation:e}")]
    ClaimRefuted {
        name: String,
        property: Property,
        violation: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    Nonneg,
    Supermultiplicative,
    Superadditive,
    DominatesIdentity,
    HConvex,
    DerivativeBound,
    DerivativeConsistent,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Self::Nonneg => "nonneg",
            Self::Supermultiplicative => "supermultiplicative",
            Self::Superadditive => "superadditive",
            Self::DominatesIdentity => "dominates_identity",
            Self::HConvex => "h_convex",
            Self::DerivativeBound => "derivative_bound",
            Self::DerivativeConsistent => "derivative_consistent",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: Property,
    pub holds: bool,
    pub worst_violation: f64,
    /// Grid coordinates of the worst violation: (t), (x, y) or (x, y, t).
    pub witness: Vec<f64>,
}

/// Tracks the largest violation; ties keep the first (lexicographically
/// smallest) witness because grids are walked in ascending order.
struct Worst {
    violation: f64,
    witness: Vec<f64>,
}

impl Worst {
    fn new() -> Self {
        Self { violation: f64::NEG_INFINITY, witness: Vec::new() }
    }

    fn offer(&mut self, violation: f64, witness: &[f64]) {
        if violation > self.violation {
            self.violation = violation;
            self.witness = witness.to_vec();
        }
    }

    fn finish(self, property: Property) -> PropertyReport {
        PropertyReport {
            property,
            holds: self.violation <= CHECK_TOL,
            worst_violation: self.violation,
            witness: self.witness,
        }
    }
}

/// Class flags of an h function.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HProperties {
    pub nonneg: bool,
    pub supermultiplicative: bool,
    pub superadditive: bool,
    pub dominates_identity: bool,
}

impl HProperties {
    fn get(&self, property: Property) -> bool {
        match property {
            Property::Nonneg => self.nonneg,
            Property::Supermultiplicative => self.supermultiplicative,
            Property::Superadditive => self.superadditive,
            Property::DominatesIdentity => self.dominates_identity,
            _ => false,
        }
    }
}

/// A weight function h with claimed and (after certification) confirmed
/// class flags. Custom functions start with no claims.
#[derive(Clone)]
pub struct HFunction {
    name: String,
    params: Vec<(String, f64)>,
    eval: RealFn,
    domain_contains_unit: bool,
    divergent_weight: bool,
    claimed: HProperties,
    certified: Option<HProperties>,
}

impl fmt::Debug for HFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HFunction")
            .field("name", &self.name)
            .field("params", &self.params)
            .field("claimed", &self.claimed)
            .field("certified", &self.certified)
            .finish_non_exhaustive()
    }
}

impl HFunction {
    pub fn custom(name: impl Into<String>, eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            params: Vec::new(),
            eval: Arc::new(eval),
            domain_contains_unit: true,
            divergent_weight: false,
            claimed: HProperties::default(),
            certified: None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &[(String, f64)] {
        &self.params
    }

    pub fn param(&self, key: &str) -> Option<f64> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    /// `name` or `name:key=value,...`, the same form accepted by [`h_from_spec`].
    pub fn label(&self) -> String {
        spec_label(&self.name, &self.params)
    }

    pub fn domain_contains_unit(&self) -> bool {
        self.domain_contains_unit
    }

    /// Set for weights whose theorem integrals are known to diverge.
    pub fn divergent_weight(&self) -> bool {
        self.divergent_weight
    }

    pub fn claimed(&self) -> HProperties {
        self.claimed
    }

    pub fn certified(&self) -> Option<HProperties> {
        self.certified
    }

    /// Raw evaluation; may return a non-finite value outside the domain.
    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    pub fn try_eval(&self, t: f64) -> Result<f64, FuncError> {
        let value = self.eval(t);
        if value.is_finite() {
            Ok(value)
        } else {
            Err(FuncError::Domain { name: self.label(), t })
        }
    }

    /// Runs every h-checker on a `grid_n` grid and records the outcome. A
    /// checker that cannot evaluate h (domain error) counts as not holding.
    /// Fails when a claimed flag is refuted.
    pub fn certify(&self, grid_n: usize) -> Result<HFunction, FuncError> {
        if grid_n < 3 {
            return Err(FuncError::Grid(grid_n));
        }
        let mut confirmed = HProperties::default();
        for property in [
            Property::Nonneg,
            Property::Supermultiplicative,
            Property::Superadditive,
            Property::DominatesIdentity,
        ] {
            let outcome = match property {
                Property::Nonneg => check_nonneg(self, grid_n),
                Property::Supermultiplicative => check_supermultiplicative(self, grid_n),
                Property::Superadditive => check_superadditive(self, grid_n),
                _ => check_dominates_identity(self, grid_n),
            };
            let (holds, violation) = match outcome {
                Ok(report) => (report.holds, report.worst_violation),
                Err(FuncError::Domain { .. }) => (false, f64::INFINITY),
                Err(other) => return Err(other),
            };
            if self.claimed.get(property) && !holds {
                return Err(FuncError::ClaimRefuted { name: self.label(), property, violation });
            }
            match property {
                Property::Nonneg => confirmed.nonneg = holds,
                Property::Supermultiplicative => confirmed.supermultiplicative = holds,
                Property::Superadditive => confirmed.superadditive = holds,
                _ => confirmed.dominates_identity = holds,
            }
        }
        let mut out = self.clone();
        out.certified = Some(confirmed);
        Ok(out)
    }

    /// Certified flags, certifying on the standard grid if that has not
    /// happened yet.
    pub fn certified_or_check(&self) -> Result<HProperties, FuncError> {
        match self.certified {
            Some(props) => Ok(props),
            None => Ok(self.certify(STANDARD_GRID)?.certified.unwrap_or_default()),
        }
    }
}

/// Registry names of h.
pub const H_REGISTRY: [&str; 4] = ["identity", "power", "one", "godunova"];

/// Registry names of f.
pub const F_REGISTRY: [&str; 6] = ["square", "cube", "exp", "power_primitive", "linear", "const"];

fn param_error(name: &str, msg: impl Into<String>) -> FuncError {
    FuncError::Param { name: name.to_string(), msg: msg.into() }
}

fn take_params(name: &str, params: &[(String, f64)], allowed: &[&str]) -> Result<Vec<(String, f64)>, FuncError> {
    let mut seen: Vec<(String, f64)> = Vec::new();
    for (key, value) in params {
        if !allowed.contains(&key.as_str()) {
            return Err(param_error(name, format!("unexpected parameter `{key}`")));
        }
        if seen.iter().any(|(k, _)| k == key) {
            return Err(param_error(name, format!("parameter `{key}` given twice")));
        }
        if !value.is_finite() {
            return Err(param_error(name, format!("parameter `{key}` must be finite")));
        }
        seen.push((key.clone(), *value));
    }
    Ok(seen)
}

fn lookup(params: &[(String, f64)], key: &str) -> Option<f64> {
    params.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
}

/// Registry weight functions, certified on the standard grid.
///
/// * `identity`: h(t) = t (plain convexity)
/// * `power` (`s` in (0, 1]): h(t) = t^s (s-convexity in the second sense)
/// * `one`: h ≡ 1 (P-functions)
/// * `godunova`: h(t) = 1/t (Godunova–Levin class); its theorem weights diverge
pub fn builtin_h(name: &str, params: &[(String, f64)]) -> Result<HFunction, FuncError> {
    let h = match name {
        "identity" => {
            take_params(name, params, &[])?;
            HFunction {
                name: name.into(),
                params: Vec::new(),
                eval: Arc::new(|t| t),
                domain_contains_unit: true,
                divergent_weight: false,
                claimed: HProperties {
                    nonneg: true,
                    supermultiplicative: true,
                    superadditive: true,
                    dominates_identity: true,
                },
                certified: None,
            }
        }
        "power" => {
            let params = take_params(name, params, &["s"])?;
            let s = lookup(&params, "s").ok_or_else(|| param_error(name, "missing `s`"))?;
            if !(s > 0.0 && s <= 1.0) {
                return Err(param_error(name, format!("s must lie in (0, 1], got {s}")));
            }
            HFunction {
                name: name.into(),
                params,
                eval: Arc::new(move |t: f64| t.powf(s)),
                domain_contains_unit: true,
                divergent_weight: false,
                claimed: HProperties {
                    nonneg: true,
                    supermultiplicative: true,
                    // t^s is subadditive for s < 1
                    superadditive: s == 1.0,
                    dominates_identity: true,
                },
                certified: None,
            }
        }
        "one" => {
            take_params(name, params, &[])?;
            HFunction {
                name: name.into(),
                params: Vec::new(),
                eval: Arc::new(|_| 1.0),
                domain_contains_unit: true,
                divergent_weight: false,
                claimed: HProperties {
                    nonneg: true,
                    supermultiplicative: true,
                    superadditive: false,
                    dominates_identity: true,
                },
                certified: None,
            }
        }
        "godunova" => {
            take_params(name, params, &[])?;
            HFunction {
                name: name.into(),
                params: Vec::new(),
                eval: Arc::new(|t| 1.0 / t),
                // undefined at 0
                domain_contains_unit: false,
                divergent_weight: true,
                claimed: HProperties {
                    nonneg: true,
                    supermultiplicative: false,
                    superadditive: false,
                    dominates_identity: true,
                },
                certified: None,
            }
        }
        other => return Err(FuncError::Unknown(other.to_string())),
    };
    h.certify(STANDARD_GRID)
}

/// What is known analytically about |f′|, used to declare h-convexity of |f′|^q.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum DerivativeClass {
    /// |f′| is non-negative and convex, so |f′|^q is convex for q >= 1.
    Convex,
    /// |f′|(t) = t^r on a domain inside [0, ∞).
    PowerLaw { r: f64 },
    Undeclared,
}

/// A differentiable test function on [a, b] with its exact derivative and
/// derivative bound M.
#[derive(Clone)]
pub struct TestFunction {
    name: String,
    params: Vec<(String, f64)>,
    a: f64,
    b: f64,
    f: RealFn,
    fprime: RealFn,
    m: f64,
    class: DerivativeClass,
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestFunction")
            .field("name", &self.name)
            .field("params", &self.params)
            .field("a", &self.a)
            .field("b", &self.b)
            .field("m", &self.m)
            .field("class", &self.class)
            .finish_non_exhaustive()
    }
}

fn check_domain(name: &str, a: f64, b: f64) -> Result<(), FuncError> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(param_error(name, "domain endpoints must be finite"));
    }
    if a < 0.0 {
        return Err(param_error(name, format!("domain must lie in [0, inf), got a = {a}")));
    }
    if a >= b {
        return Err(param_error(name, format!("need a < b, got [{a}, {b}]")));
    }
    Ok(())
}

impl TestFunction {
    /// A user-supplied function. Nothing is declared about |f′|.
    pub fn custom(
        name: impl Into<String>,
        a: f64,
        b: f64,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        fprime: impl Fn(f64) -> f64 + Send + Sync + 'static,
        m: f64,
    ) -> Result<Self, FuncError> {
        let name = name.into();
        check_domain(&name, a, b)?;
        if !(m.is_finite() && m >= 0.0) {
            return Err(param_error(&name, format!("M must be finite and >= 0, got {m}")));
        }
        Ok(Self {
            name,
            params: vec![("a".into(), a), ("b".into(), b)],
            a,
            b,
            f: Arc::new(f),
            fprime: Arc::new(fprime),
            m,
            class: DerivativeClass::Undeclared,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn label(&self) -> String {
        spec_label(&self.name, &self.params)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Certified sup of |f′| on [a, b].
    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn class(&self) -> DerivativeClass {
        self.class
    }

    pub fn value(&self, t: f64) -> f64 {
        (self.f)(t)
    }

    pub fn derivative(&self, t: f64) -> f64 {
        (self.fprime)(t)
    }

    /// f̃(t) = f(a + b − t) on the same interval.
    pub fn reflected(&self) -> TestFunction {
        let (f, fprime) = (self.f.clone(), self.fprime.clone());
        let sum = self.a + self.b;
        TestFunction {
            name: format!("{}~reflected", self.name),
            params: self.params.clone(),
            a: self.a,
            b: self.b,
            f: Arc::new(move |t| f(sum - t)),
            fprime: Arc::new(move |t| -fprime(sum - t)),
            m: self.m,
            class: self.class,
        }
    }

    /// c·f with derivative bound |c|·M.
    pub fn scaled(&self, c: f64) -> TestFunction {
        let (f, fprime) = (self.f.clone(), self.fprime.clone());
        TestFunction {
            name: format!("{}*{}", self.name, c),
            params: self.params.clone(),
            a: self.a,
            b: self.b,
            f: Arc::new(move |t| c * f(t)),
            fprime: Arc::new(move |t| c * fprime(t)),
            m: c.abs() * self.m,
            class: if c == 0.0 { DerivativeClass::Convex } else { self.class },
        }
    }

    /// Checks |f′(t)| ≤ M on `grid_n` equispaced points of [a, b].
    pub fn check_derivative_bound(&self, grid_n: usize) -> Result<PropertyReport, FuncError> {
        if grid_n < 3 {
            return Err(FuncError::Grid(grid_n));
        }
        let mut worst = Worst::new();
        for t in closed_grid(self.a, self.b, grid_n) {
            worst.offer(self.derivative(t).abs() - self.m, &[t]);
        }
        Ok(worst.finish(Property::DerivativeBound))
    }

    /// Central differences with step [`FD_STEP`] against the analytic
    /// derivative on the interior grid; holds when every gap is ≤ [`FD_TOL`].
    pub fn check_derivative_consistency(&self, grid_n: usize) -> Result<PropertyReport, FuncError> {
        if grid_n < 3 {
            return Err(FuncError::Grid(grid_n));
        }
        let mut worst = Worst::new();
        for t in open_grid(self.a, self.b, grid_n) {
            if t - FD_STEP < self.a || t + FD_STEP > self.b {
                continue;
            }
            let fd = (self.value(t + FD_STEP) - self.value(t - FD_STEP)) / (2.0 * FD_STEP);
            worst.offer((fd - self.derivative(t)).abs() - FD_TOL, &[t]);
        }
        let mut report = worst.finish(Property::DerivativeConsistent);
        // report the raw gap, not the gap past tolerance
        report.holds = report.worst_violation <= 0.0;
        report.worst_violation += FD_TOL;
        Ok(report)
    }

    /// Whether the analytic class of |f′| implies that |f′|^q is h-convex.
    /// Convex non-negative functions are h-convex whenever h(t) ≥ t; the
    /// power law t^e with e < 1 is h-convex whenever h(t) ≥ t^e, by
    /// subadditivity of t^e.
    pub fn declares_h_convex(&self, h: &HFunction, q: f64, grid_n: usize) -> bool {
        let exponent = match self.class {
            DerivativeClass::Convex => 1.0,
            DerivativeClass::PowerLaw { r } => (r * q).min(1.0),
            DerivativeClass::Undeclared => return false,
        };
        open_grid(0.0, 1.0, grid_n).all(|t| match h.try_eval(t) {
            Ok(v) => v >= t.powf(exponent) - CHECK_TOL,
            Err(_) => false,
        })
    }
}

/// Registry test functions. Every entry takes an optional domain `a`, `b`
/// (default [0, 1], with 0 ≤ a < b).
///
/// * `square`: t², M = 2b
/// * `cube`: t³, M = 3b²
/// * `exp`: eᵗ, M = e^b
/// * `power_primitive` (`r` > 0, default 0.5): t^(r+1)/(r+1), f′ = t^r, M = b^r
/// * `linear` (`c`, default 1): c·t, M = |c|
/// * `const` (`c`, default 1): c, M = 0
pub fn builtin_f(name: &str, params: &[(String, f64)]) -> Result<TestFunction, FuncError> {
    let allowed: &[&str] = match name {
        "square" | "cube" | "exp" => &["a", "b"],
        "power_primitive" => &["a", "b", "r"],
        "linear" | "const" => &["a", "b", "c"],
        other => return Err(FuncError::Unknown(other.to_string())),
    };
    let given = take_params(name, params, allowed)?;
    let a = lookup(&given, "a").unwrap_or(0.0);
    let b = lookup(&given, "b").unwrap_or(1.0);
    check_domain(name, a, b)?;

    let mut stored = vec![("a".to_string(), a), ("b".to_string(), b)];
    let (f, fprime, m, class): (RealFn, RealFn, f64, DerivativeClass) = match name {
        "square" => (Arc::new(|t| t * t), Arc::new(|t| 2.0 * t), 2.0 * b, DerivativeClass::Convex),
        "cube" => (Arc::new(|t| t * t * t), Arc::new(|t| 3.0 * t * t), 3.0 * b * b, DerivativeClass::Convex),
        "exp" => (Arc::new(f64::exp), Arc::new(f64::exp), b.exp(), DerivativeClass::Convex),
        "power_primitive" => {
            let r = lookup(&given, "r").unwrap_or(0.5);
            if r <= 0.0 {
                return Err(param_error(name, format!("r must be > 0, got {r}")));
            }
            stored.push(("r".into(), r));
            let class = if r >= 1.0 { DerivativeClass::Convex } else { DerivativeClass::PowerLaw { r } };
            (
                Arc::new(move |t: f64| t.powf(r + 1.0) / (r + 1.0)),
                Arc::new(move |t: f64| t.powf(r)),
                b.powf(r),
                class,
            )
        }
        "linear" => {
            let c = lookup(&given, "c").unwrap_or(1.0);
            stored.push(("c".into(), c));
            (Arc::new(move |t| c * t), Arc::new(move |_| c), c.abs(), DerivativeClass::Convex)
        }
        _ => {
            let c = lookup(&given, "c").unwrap_or(1.0);
            stored.push(("c".into(), c));
            (Arc::new(move |_| c), Arc::new(|_| 0.0), 0.0, DerivativeClass::Convex)
        }
    };
    Ok(TestFunction { name: name.into(), params: stored, a, b, f, fprime, m, class })
}

/// Splits `name` or `name:key=value,key=value`.
pub fn parse_spec(spec: &str) -> Result<(String, Vec<(String, f64)>), FuncError> {
    let spec = spec.trim();
    let (name, rest) = match spec.split_once(':') {
        Some((name, rest)) => (name.trim(), Some(rest)),
        None => (spec, None),
    };
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(FuncError::Spec(spec.to_string()));
    }
    let mut params = Vec::new();
    if let Some(rest) = rest {
        for item in rest.split(',') {
            let (key, value) = item.split_once('=').ok_or_else(|| FuncError::Spec(spec.to_string()))?;
            let value: f64 = value.trim().parse().map_err(|_| FuncError::Spec(spec.to_string()))?;
            let key = key.trim();
            if key.is_empty() {
                return Err(FuncError::Spec(spec.to_string()));
            }
            params.push((key.to_string(), value));
        }
    }
    Ok((name.to_string(), params))
}

pub fn h_from_spec(spec: &str) -> Result<HFunction, FuncError> {
    let (name, params) = parse_spec(spec)?;
    builtin_h(&name, &params)
}

pub fn f_from_spec(spec: &str) -> Result<TestFunction, FuncError> {
    let (name, params) = parse_spec(spec)?;
    builtin_f(&name, &params)
}

fn spec_label(name: &str, params: &[(String, f64)]) -> String {
    if params.is_empty() {
        name.to_string()
    } else {
        let joined: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{name}:{}", joined.join(","))
    }
}

/// `n` equispaced points from `lo` to `hi`, endpoints included exactly.
pub fn closed_grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> + Clone {
    let last = (n - 1) as f64;
    (0..n).map(move |i| if i + 1 == n { hi } else { lo + (hi - lo) * (i as f64 / last) })
}

/// `n` interior points lo + (hi − lo)·k/(n + 1), k = 1..=n.
pub fn open_grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> + Clone {
    let denom = (n + 1) as f64;
    (1..=n).map(move |k| lo + (hi - lo) * (k as f64 / denom))
}

/// g(tx + (1−t)y) − h(t)g(x) − h(1−t)g(y) at a single point.
pub fn h_convexity_gap(g: impl Fn(f64) -> f64, h: &HFunction, x: f64, y: f64, t: f64) -> Result<f64, FuncError> {
    let ht = h.try_eval(t)?;
    let hs = h.try_eval(1.0 - t)?;
    Ok(g(t * x + (1.0 - t) * y) - ht * g(x) - hs * g(y))
}

/// Samples the h-convexity inequality on x, y ∈ `grid_n` points of [a, b]
/// and t ∈ {k/(grid_n + 1)}, which avoids t = 0 and t = 1.
pub fn check_h_convex(
    g: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    h: &HFunction,
    grid_n: usize,
) -> Result<PropertyReport, FuncError> {
    if grid_n < 3 {
        return Err(FuncError::Grid(grid_n));
    }
    let xs: Vec<f64> = closed_grid(a, b, grid_n).collect();
    let gx: Vec<f64> = xs.iter().map(|&x| g(x)).collect();
    for (&x, &value) in xs.iter().zip(&gx) {
        if value < 0.0 || value.is_nan() {
            return Err(FuncError::Negative { at: x, value });
        }
    }
    let ts: Vec<f64> = open_grid(0.0, 1.0, grid_n).collect();
    let weights: Vec<(f64, f64)> = ts
        .iter()
        .map(|&t| Ok((h.try_eval(t)?, h.try_eval(1.0 - t)?)))
        .collect::<Result<_, FuncError>>()?;

    let mut worst = Worst::new();
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in xs.iter().enumerate() {
            for (k, &t) in ts.iter().enumerate() {
                let (ht, hs) = weights[k];
                let gap = g(t * x + (1.0 - t) * y) - ht * gx[i] - hs * gx[j];
                worst.offer(gap, &[x, y, t]);
            }
        }
    }
    Ok(worst.finish(Property::HConvex))
}

/// h(t) ≥ 0 on the interior grid and at whichever endpoints h is defined.
pub fn check_nonneg(h: &HFunction, grid_n: usize) -> Result<PropertyReport, FuncError> {
    if grid_n < 3 {
        return Err(FuncError::Grid(grid_n));
    }
    let mut worst = Worst::new();
    for t in std::iter::once(0.0).chain(open_grid(0.0, 1.0, grid_n)).chain(std::iter::once(1.0)) {
        let value = h.eval(t);
        if !value.is_finite() {
            if t == 0.0 || t == 1.0 {
                continue;
            }
            return Err(FuncError::Domain { name: h.label(), t });
        }
        worst.offer(-value, &[t]);
    }
    Ok(worst.finish(Property::Nonneg))
}

/// h(xy) ≥ h(x)h(y) for x, y on a `grid_n` grid of [0, 1].
pub fn check_supermultiplicative(h: &HFunction, grid_n: usize) -> Result<PropertyReport, FuncError> {
    if grid_n < 3 {
        return Err(FuncError::Grid(grid_n));
    }
    let xs: Vec<f64> = closed_grid(0.0, 1.0, grid_n).collect();
    let hx: Vec<f64> = xs.iter().map(|&x| h.try_eval(x)).collect::<Result<_, _>>()?;
    let mut worst = Worst::new();
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in xs.iter().enumerate() {
            let gap = hx[i] * hx[j] - h.try_eval(x * y)?;
            worst.offer(gap, &[x, y]);
        }
    }
    Ok(worst.finish(Property::Supermultiplicative))
}

/// h(x + y) ≥ h(x) + h(y) for x, y on a `grid_n` grid of [0, 1/2].
pub fn check_superadditive(h: &HFunction, grid_n: usize) -> Result<PropertyReport, FuncError> {
    if grid_n < 3 {
        return Err(FuncError::Grid(grid_n));
    }
    let xs: Vec<f64> = closed_grid(0.0, 0.5, grid_n).collect();
    let hx: Vec<f64> = xs.iter().map(|&x| h.try_eval(x)).collect::<Result<_, _>>()?;
    let mut worst = Worst::new();
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in xs.iter().enumerate() {
            let gap = hx[i] + hx[j] - h.try_eval(x + y)?;
            worst.offer(gap, &[x, y]);
        }
    }
    Ok(worst.finish(Property::Superadditive))
}

/// h(t) ≥ t on the interior grid of (0, 1).
pub fn check_dominates_identity(h: &HFunction, grid_n: usize) -> Result<PropertyReport, FuncError> {
    if grid_n < 3 {
        return Err(FuncError::Grid(grid_n));
    }
    let mut worst = Worst::new();
    for t in open_grid(0.0, 1.0, grid_n) {
        worst.offer(t - h.try_eval(t)?, &[t]);
    }
    Ok(worst.finish(Property::DominatesIdentity))
}
