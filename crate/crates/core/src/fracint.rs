//! Riemann–Liouville fractional integrals and the unit-interval quadrature
//! engine behind every weight integral.
//!
//! All integrals funnel through [`integrate_unit`]: a globally adaptive
//! 21-point Gauss–Kronrod scheme applied after the smoothing substitution
//! t = u²(3 − 2u), which flattens integrable power singularities at both
//! endpoints. The kernel (x − t)^(α−1) is removed analytically with
//! u = (x − t)^α so the integrand handed to the engine is bounded.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::funcs::TestFunction;
use crate::specfun::{self, SpecFunError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("divergent integral: estimate {estimate:e} with error {error:e} after {subdivisions} subdivisions")]
    Divergent {
        estimate: f64,
        error: f64,
        subdivisions: usize,
    },
    #[error("divergent integral: integrand is {value} at t = {at}")]
    NonFinite { at: f64, value: f64 },
    #[error("invalid quadrature configuration: {0}")]
    Config(String),
}

impl QuadError {
    pub fn is_divergent(&self) -> bool {
        matches!(self, Self::Divergent { .. } | Self::NonFinite { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FracError {
    #[error("fractional order must be finite and >= 0, got {0}")]
    Order(f64),
    #[error("point {x} lies outside [{lo}, {hi}]")]
    Range { x: f64, lo: f64, hi: f64 },
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_subdivisions: 200,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<(), QuadError> {
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(QuadError::Config(format!("abs_tol must be > 0, got {}", self.abs_tol)));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(QuadError::Config(format!("rel_tol must be > 0, got {}", self.rel_tol)));
        }
        if self.max_subdivisions < 1 {
            return Err(QuadError::Config("max_subdivisions must be >= 1".into()));
        }
        Ok(())
    }
}

/// Parameter tuple of a bound evaluation. `q` is derived from `p` when a
/// Hölder pair is requested, never set independently.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FracParams {
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
}

impl FracParams {
    pub fn new(alpha: f64) -> Result<Self, FracError> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(FracError::Params(format!("alpha must be > 0, got {alpha}")));
        }
        Ok(Self { alpha, s: None, p: None, q: None })
    }

    /// Hölder pair: sets p and q = p/(p − 1).
    pub fn with_p(mut self, p: f64) -> Result<Self, FracError> {
        if !(p.is_finite() && p > 1.0) {
            return Err(FracError::Params(format!("p must be > 1, got {p}")));
        }
        self.p = Some(p);
        self.q = Some(p / (p - 1.0));
        Ok(self)
    }

    /// Power-mean exponent q >= 1 (no conjugate p).
    pub fn with_q(mut self, q: f64) -> Result<Self, FracError> {
        if !(q.is_finite() && q >= 1.0) {
            return Err(FracError::Params(format!("q must be >= 1, got {q}")));
        }
        self.p = None;
        self.q = Some(q);
        Ok(self)
    }

    pub fn with_s(mut self, s: f64) -> Result<Self, FracError> {
        if !(s > 0.0 && s <= 1.0) {
            return Err(FracError::Params(format!("s must lie in (0, 1], got {s}")));
        }
        self.s = Some(s);
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), FracError> {
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(FracError::Params(format!("alpha must be > 0, got {}", self.alpha)));
        }
        if let (Some(p), Some(q)) = (self.p, self.q) {
            if (1.0 / p + 1.0 / q - 1.0).abs() > 1e-12 {
                return Err(FracError::Params(format!("1/p + 1/q != 1 for p = {p}, q = {q}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub abs_error: f64,
    pub subdivisions: usize,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

fn checked<F: Fn(f64) -> f64>(g: &F, u: f64) -> Result<f64, QuadError> {
    let value = g(u);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(QuadError::NonFinite { at: u, value })
    }
}

/// QUADPACK error rescaling: (200·|K − G| / resasc)^1.5, floored at roundoff.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

fn gauss_kronrod_21<F: Fn(f64) -> f64>(g: &F, lo: f64, hi: f64) -> Result<Panel, QuadError> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let f_center = checked(g, center)?;

    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    let mut res_kronrod = WGK[10] * f_center;
    let mut res_gauss = 0.0;
    let mut res_abs = res_kronrod.abs();

    for (j, &wg) in WG.iter().enumerate() {
        let k = 2 * j + 1;
        let dx = half * XGK[k];
        let f1 = checked(g, center - dx)?;
        let f2 = checked(g, center + dx)?;
        fv1[k] = f1;
        fv2[k] = f2;
        res_gauss += wg * (f1 + f2);
        res_kronrod += WGK[k] * (f1 + f2);
        res_abs += WGK[k] * (f1.abs() + f2.abs());
    }
    for j in 0..5 {
        let k = 2 * j;
        let dx = half * XGK[k];
        let f1 = checked(g, center - dx)?;
        let f2 = checked(g, center + dx)?;
        fv1[k] = f1;
        fv2[k] = f2;
        res_kronrod += WGK[k] * (f1 + f2);
        res_abs += WGK[k] * (f1.abs() + f2.abs());
    }

    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for k in 0..10 {
        res_asc += WGK[k] * ((fv1[k] - mean).abs() + (fv2[k] - mean).abs());
    }

    let err = (res_kronrod - res_gauss) * half;
    Ok(Panel {
        lo,
        hi,
        value: res_kronrod * half,
        error: rescale_error(err, res_abs * half.abs(), res_asc * half.abs()),
    })
}

/// Globally adaptive GK21 on [0, 1] without any change of variables.
fn adaptive_unit<F: Fn(f64) -> f64>(g: &F, cfg: &QuadratureConfig) -> Result<Quadrature, QuadError> {
    cfg.validate()?;
    let mut panels = vec![gauss_kronrod_21(g, 0.0, 1.0)?];
    let mut subdivisions = 0;
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        let tolerance = cfg.abs_tol.max(cfg.rel_tol * value.abs());
        if error <= tolerance {
            return Ok(Quadrature { value, abs_error: error, subdivisions });
        }
        if subdivisions >= cfg.max_subdivisions {
            return Err(QuadError::Divergent { estimate: value, error, subdivisions });
        }
        // first panel with the largest error; keeps the run deterministic
        let worst = panels
            .iter()
            .enumerate()
            .fold(0, |best, (i, p)| if p.error > panels[best].error { i } else { best });
        let Panel { lo, hi, .. } = panels[worst];
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Err(QuadError::Divergent { estimate: value, error, subdivisions });
        }
        panels[worst] = gauss_kronrod_21(g, lo, mid)?;
        panels.insert(worst + 1, gauss_kronrod_21(g, mid, hi)?);
        subdivisions += 1;
    }
}

/// Smoothing map t = u²(3 − 2u) on [0, 1] and its derivative 6u(1 − u).
fn smooth_map(u: f64) -> (f64, f64) {
    (u * u * (3.0 - 2.0 * u), 6.0 * u * (1.0 - u))
}

/// ∫₀¹ g(t) dt with an error estimate. Integrable endpoint singularities are
/// allowed; g must be finite at every interior point.
pub fn integrate_unit_with_error<F: Fn(f64) -> f64>(
    g: F,
    cfg: &QuadratureConfig,
) -> Result<Quadrature, QuadError> {
    let transformed = |u: f64| {
        let (t, dt) = smooth_map(u);
        if dt == 0.0 {
            0.0
        } else {
            g(t) * dt
        }
    };
    adaptive_unit(&transformed, cfg).map_err(|err| match err {
        // report the location in the caller's variable
        QuadError::NonFinite { at, value } => QuadError::NonFinite { at: smooth_map(at).0, value },
        other => other,
    })
}

/// ∫₀¹ g(t) dt.
pub fn integrate_unit<F: Fn(f64) -> f64>(g: F, cfg: &QuadratureConfig) -> Result<f64, QuadError> {
    integrate_unit_with_error(g, cfg).map(|q| q.value)
}

/// ∫_lo^hi g(t) dt via an affine map onto [0, 1].
pub fn integrate<F: Fn(f64) -> f64>(g: F, lo: f64, hi: f64, cfg: &QuadratureConfig) -> Result<f64, QuadError> {
    if lo == hi {
        return Ok(0.0);
    }
    let width = hi - lo;
    Ok(width * integrate_unit(|v| g(lo + width * v), cfg)?)
}

fn check_order(alpha: f64) -> Result<(), FracError> {
    if alpha.is_finite() && alpha >= 0.0 {
        Ok(())
    } else {
        Err(FracError::Order(alpha))
    }
}

/// Left-sided integral J_{lo+}^α g(x) for a plain closure.
///
/// With u = (x − t)^α the weakly singular kernel becomes a constant:
/// J = (x − lo)^α / Γ(α + 1) · ∫₀¹ g(x − (x − lo)·v^(1/α)) dv.
/// Order 0 is the identity operator.
pub fn rl_left_fn<F: Fn(f64) -> f64>(
    g: F,
    lo: f64,
    x: f64,
    alpha: f64,
    cfg: &QuadratureConfig,
) -> Result<f64, FracError> {
    check_order(alpha)?;
    if x < lo || x.is_nan() {
        return Err(FracError::Range { x, lo, hi: f64::INFINITY });
    }
    if alpha == 0.0 {
        return Ok(g(x));
    }
    if x == lo {
        return Ok(0.0);
    }
    let width = x - lo;
    let inv = 1.0 / alpha;
    let integral = integrate_unit(|v| g(x - width * v.powf(inv)), cfg)?;
    Ok(width.powf(alpha) / specfun::gamma(alpha + 1.0)? * integral)
}

/// Right-sided integral J_{hi−}^α g(x): the mirror image of [`rl_left_fn`].
pub fn rl_right_fn<F: Fn(f64) -> f64>(
    g: F,
    x: f64,
    hi: f64,
    alpha: f64,
    cfg: &QuadratureConfig,
) -> Result<f64, FracError> {
    check_order(alpha)?;
    if x > hi || x.is_nan() {
        return Err(FracError::Range { x, lo: f64::NEG_INFINITY, hi });
    }
    if alpha == 0.0 {
        return Ok(g(x));
    }
    if x == hi {
        return Ok(0.0);
    }
    let width = hi - x;
    let inv = 1.0 / alpha;
    let integral = integrate_unit(|v| g(x + width * v.powf(inv)), cfg)?;
    Ok(width.powf(alpha) / specfun::gamma(alpha + 1.0)? * integral)
}

fn check_inside(f: &TestFunction, point: f64) -> Result<(), FracError> {
    if point >= f.a() && point <= f.b() {
        Ok(())
    } else {
        Err(FracError::Range { x: point, lo: f.a(), hi: f.b() })
    }
}

/// J_{lo+}^α f(x) for a test function; both `lo` and `x` must lie in its domain.
pub fn rl_left(f: &TestFunction, lo: f64, x: f64, alpha: f64, cfg: &QuadratureConfig) -> Result<f64, FracError> {
    check_inside(f, lo)?;
    check_inside(f, x)?;
    rl_left_fn(|t| f.value(t), lo, x, alpha, cfg)
}

/// J_{hi−}^α f(x) for a test function; both `x` and `hi` must lie in its domain.
pub fn rl_right(f: &TestFunction, x: f64, hi: f64, alpha: f64, cfg: &QuadratureConfig) -> Result<f64, FracError> {
    check_inside(f, x)?;
    check_inside(f, hi)?;
    rl_right_fn(|t| f.value(t), x, hi, alpha, cfg)
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::funcs::builtin_f;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn params(pairs: &[(&str, f64)]) -> Vec<(String, f64)> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn unit_integral_examples() {
        let v = integrate_unit(|t| t * t, &cfg()).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-14);
        let v = integrate_unit(|t| t.powf(-0.5), &cfg()).unwrap();
        assert!((v - 2.0).abs() < 1e-10);
        let err = integrate_unit(|t| 1.0 / t, &cfg()).unwrap_err();
        assert!(err.is_divergent(), "{err}");
    }

    #[test]
    fn stronger_singularities() {
        // t^(-0.9) integrates to 10
        let v = integrate_unit(|t| t.powf(-0.9), &cfg()).unwrap();
        assert!((v - 10.0).abs() < 1e-9 * 10.0, "{v}");
        // non-integrable power singularity at the right end
        let err = integrate_unit(|t| (1.0 - t).powf(-1.5), &cfg()).unwrap_err();
        assert!(err.is_divergent());
    }

    #[test]
    fn error_estimate_is_reported() {
        let q = integrate_unit_with_error(|t| t.exp(), &cfg()).unwrap();
        assert!((q.value - (1f64.exp() - 1.0)).abs() < 1e-14);
        assert!(q.abs_error <= 1e-10);
    }

    #[test]
    fn config_is_validated() {
        let bad = QuadratureConfig { abs_tol: 0.0, ..cfg() };
        assert!(matches!(integrate_unit(|t| t, &bad), Err(QuadError::Config(_))));
        let bad = QuadratureConfig { max_subdivisions: 0, ..cfg() };
        assert!(matches!(integrate_unit(|t| t, &bad), Err(QuadError::Config(_))));
    }

    #[test]
    fn general_interval() {
        let v = integrate(|t| t, 1.0, 3.0, &cfg()).unwrap();
        assert!((v - 4.0).abs() < 1e-13);
        assert_eq!(integrate(|t| t, 2.0, 2.0, &cfg()).unwrap(), 0.0);
    }

    #[test]
    fn rl_left_examples() {
        let one = builtin_f("const", &params(&[("c", 1.0)])).unwrap();
        let lin = builtin_f("linear", &params(&[("c", 1.0)])).unwrap();
        let v = rl_left(&one, 0.0, 1.0, 0.5, &cfg()).unwrap();
        assert!((v - std::f64::consts::FRAC_2_SQRT_PI).abs() < 1e-10);
        let v = rl_left(&lin, 0.0, 1.0, 1.0, &cfg()).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
        let v = rl_left(&lin, 0.0, 1.0, 0.5, &cfg()).unwrap();
        assert!((v - 0.752_252_778_063_675_1).abs() < 1e-10);
    }

    #[test]
    fn rl_right_examples() {
        let one = builtin_f("const", &params(&[("c", 1.0)])).unwrap();
        let lin = builtin_f("linear", &params(&[("c", 1.0)])).unwrap();
        let v = rl_right(&one, 0.0, 1.0, 0.5, &cfg()).unwrap();
        assert!((v - std::f64::consts::FRAC_2_SQRT_PI).abs() < 1e-10);
        let v = rl_right(&lin, 0.0, 1.0, 1.0, &cfg()).unwrap();
        assert!((v - 0.5).abs() < 1e-12);
        let v = rl_right_fn(|t| 1.0 - t, 0.0, 1.0, 0.5, &cfg()).unwrap();
        assert!((v - 0.752_252_778_063_675_1).abs() < 1e-10);
    }

    #[test]
    fn degenerate_ranges_and_order_zero() {
        assert_eq!(rl_left_fn(|t| t + 5.0, 0.3, 0.3, 0.7, &cfg()).unwrap(), 0.0);
        assert_eq!(rl_right_fn(|t| t + 5.0, 0.9, 0.9, 0.7, &cfg()).unwrap(), 0.0);
        assert_eq!(rl_left_fn(|t| t * t, 0.0, 0.5, 0.0, &cfg()).unwrap(), 0.25);
        assert_eq!(rl_right_fn(|t| t * t, 0.5, 1.0, 0.0, &cfg()).unwrap(), 0.25);
    }

    #[test]
    fn rl_errors() {
        assert_eq!(rl_left_fn(|t| t, 0.0, 1.0, -0.5, &cfg()), Err(FracError::Order(-0.5)));
        assert!(matches!(rl_left_fn(|t| t, 1.0, 0.5, 0.5, &cfg()), Err(FracError::Range { .. })));
        assert!(matches!(rl_right_fn(|t| t, 1.0, 0.5, 0.5, &cfg()), Err(FracError::Range { .. })));
        let sq = builtin_f("square", &[]).unwrap();
        assert!(matches!(rl_left(&sq, 0.0, 1.5, 0.5, &cfg()), Err(FracError::Range { .. })));
    }

    #[test]
    fn frac_params_constraints() {
        let p = FracParams::new(0.5).unwrap().with_p(3.0).unwrap();
        assert_eq!(p.q, Some(1.5));
        p.validate().unwrap();
        assert!(FracParams::new(0.0).is_err());
        assert!(FracParams::new(1.0).unwrap().with_p(1.0).is_err());
        assert!(FracParams::new(1.0).unwrap().with_q(0.5).is_err());
        assert!(FracParams::new(1.0).unwrap().with_s(1.5).is_err());
        let broken = FracParams { alpha: 1.0, s: None, p: Some(2.0), q: Some(3.0) };
        assert!(broken.validate().is_err());
    }
}
