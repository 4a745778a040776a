//! Special-function evaluation: Gamma, ln-Gamma, the Gauss hypergeometric
//! series and the Lp unit-ball volume, plus the finite-difference utilities
//! used to estimate curvature bounds.

use crate::convexity::FunctionSpec;
use crate::error::{Error, Result};
use crate::interval::Interval;

/// Lanczos approximation, g = 7, 9 coefficients (GNU Scientific Library set).
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

const SQRT_TWO_PI: f64 = 2.5066282746310002;

fn lanczos_sum(x: f64) -> f64 {
    // x is the argument shifted by one: series for Gamma(x + 1).
    let mut s = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        s += c / (x + i as f64);
    }
    s
}

/// Gamma function for positive arguments.
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("gamma requires x > 0, got {x}")));
    }
    let z = x - 1.0;
    let s = lanczos_sum(z);
    let w = z + LANCZOS_G + 0.5;
    Ok(SQRT_TWO_PI * w.powf(z + 0.5) * (-w).exp() * s)
}

/// Overflow-safe log of the Gamma function for positive arguments.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    let z = x - 1.0;
    let s = lanczos_sum(z);
    let w = z + LANCZOS_G + 0.5;
    Ok(SQRT_TWO_PI.ln() + s.ln() + (z + 0.5) * w.ln() - w)
}

/// Parameters of the Gauss hypergeometric series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypergeometricParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl HypergeometricParams {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && c > 0.0) {
            return Err(Error::Invalid(format!(
                "hypergeometric parameters must be positive, got ({a}, {b}, {c})"
            )));
        }
        Ok(HypergeometricParams { a, b, c })
    }

    /// The Anderson-Vamanamurthy-Vuorinen condition under which 1/F is
    /// concave on (0, 1): a + b >= c > 2ab and c >= a + b - 1/2.
    pub fn avv_concavity_condition(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        a + b >= c && c > 2.0 * a * b && c >= a + b - 0.5
    }
}

const HYP2F1_TERM_CAP: usize = 10_000;
const HYP2F1_REL_TOL: f64 = 1e-15;

/// Direct defining-series evaluation of 2F1(a, b; c; x) on |x| < 1.
pub fn hyp2f1(params: HypergeometricParams, x: f64) -> Result<f64> {
    if !(x.abs() < 1.0) {
        return Err(Error::Domain(format!(
            "hyp2f1 series requires |x| < 1, got {x}"
        )));
    }
    let (a, b, c) = (params.a, params.b, params.c);
    let mut sum = 1.0f64;
    let mut term = 1.0f64;
    for n in 0..HYP2F1_TERM_CAP {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * x;
        if term.abs() <= HYP2F1_REL_TOL * sum.abs() {
            return Ok(sum + term);
        }
        sum += term;
    }
    Err(Error::NonConvergence(format!(
        "hyp2f1 series hit the {HYP2F1_TERM_CAP}-term cap at x = {x}"
    )))
}

/// Volume of the unit ball of l^p in dimension `alpha`,
/// V_alpha(p) = 2^alpha Gamma^alpha(1 + 1/p) / Gamma(1 + alpha/p),
/// evaluated in log space for overflow safety.
pub fn lp_ball_volume(alpha: f64, p: f64) -> Result<f64> {
    Ok(ln_lp_ball_volume(alpha, p)?.exp())
}

/// log V_alpha(p); shared by the volume inequality evaluator.
pub fn ln_lp_ball_volume(alpha: f64, p: f64) -> Result<f64> {
    if !(alpha > 1.0) {
        return Err(Error::Domain(format!(
            "lp_ball_volume requires alpha > 1, got {alpha}"
        )));
    }
    if !(p > 0.0) {
        return Err(Error::Domain(format!(
            "lp_ball_volume requires p > 0, got {p}"
        )));
    }
    Ok(alpha * 2f64.ln() + alpha * ln_gamma(1.0 + 1.0 / p)? - ln_gamma(1.0 + alpha / p)?)
}

/// Central second difference (f(x+h) - 2 f(x) + f(x-h)) / h^2.
/// When `step` is None, h = eps^(1/4) * max(1, |x|).
pub fn second_derivative(f: &FunctionSpec, x: f64, step: Option<f64>) -> Result<f64> {
    let h = match step {
        Some(h) if h > 0.0 => h,
        Some(h) => return Err(Error::Invalid(format!("step must be positive, got {h}"))),
        None => f64::EPSILON.powf(0.25) * x.abs().max(1.0),
    };
    let fp = f.eval(x + h)?;
    let f0 = f.eval(x)?;
    let fm = f.eval(x - h)?;
    Ok((fp - 2.0 * f0 + fm) / (h * h))
}

/// Grid estimate of (inf f'', sup f'') over an interval. This is an inner
/// approximation of [m, M]; callers must widen tolerances by the grid
/// modulus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureBounds {
    pub inf: f64,
    pub sup: f64,
    pub interval: Interval,
    pub grid_n: usize,
}

pub fn curvature_bounds(f: &FunctionSpec, interval: Interval, grid_n: usize) -> Result<CurvatureBounds> {
    if grid_n < 2 {
        return Err(Error::Invalid(format!("grid_n must be >= 2, got {grid_n}")));
    }
    if !interval.is_bounded() {
        return Err(Error::Invalid("curvature_bounds needs a bounded interval".into()));
    }
    let mut inf = f64::INFINITY;
    let mut sup = f64::NEG_INFINITY;
    for x in interval.grid(grid_n) {
        let d2 = second_derivative(f, x, None)?;
        inf = inf.min(d2);
        sup = sup.max(d2);
    }
    Ok(CurvatureBounds {
        inf,
        sup,
        interval,
        grid_n,
    })
}
