//! Weighted quasi-arithmetic means, power means with limit orders, and the
//! two- and three-point logarithmic and identric means.

use crate::error::{Error, Result};
use crate::interval::Interval;

/// Monotonicity direction of a generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// Strictly monotone continuous generator of a quasi-arithmetic mean.
///
/// A closed enumeration: exact inverses and the monotonicity direction must
/// be known statically for the direction split in the quasi-arithmetic
/// Popoviciu evaluator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Generator {
    Identity,
    /// x^p with p != 0, on (0, inf).
    Power(f64),
    Log,
    Exp,
}

impl Generator {
    pub fn power(p: f64) -> Result<Self> {
        if p == 0.0 || !p.is_finite() {
            return Err(Error::Invalid(format!(
                "power generator needs finite p != 0, got {p}"
            )));
        }
        Ok(Generator::Power(p))
    }

    pub fn parse(s: &str) -> Result<Self> {
        let mut parts = s.split(':');
        let name = parts.next().unwrap_or("");
        match name {
            "identity" | "id" => Ok(Generator::Identity),
            "log" => Ok(Generator::Log),
            "exp" => Ok(Generator::Exp),
            "power" => {
                let p: f64 = parts
                    .next()
                    .ok_or_else(|| Error::Invalid("power generator needs a parameter".into()))?
                    .parse()
                    .map_err(|e| Error::Invalid(format!("bad generator parameter: {e}")))?;
                Generator::power(p)
            }
            other => Err(Error::Invalid(format!("unknown generator '{other}'"))),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Generator::Identity => "identity".into(),
            Generator::Power(p) => format!("power:{p}"),
            Generator::Log => "log".into(),
            Generator::Exp => "exp".into(),
        }
    }

    pub fn domain(&self) -> Interval {
        match self {
            Generator::Identity | Generator::Exp => Interval::ALL,
            Generator::Power(_) | Generator::Log => Interval::POSITIVE,
        }
    }

    pub fn direction(&self) -> Direction {
        match self {
            Generator::Power(p) if *p < 0.0 => Direction::Decreasing,
            _ => Direction::Increasing,
        }
    }

    pub fn apply(&self, x: f64) -> Result<f64> {
        if !self.domain().contains(x) {
            return Err(Error::Domain(format!(
                "{} generator undefined at {x}",
                self.name()
            )));
        }
        Ok(match self {
            Generator::Identity => x,
            Generator::Power(p) => x.powf(*p),
            Generator::Log => x.ln(),
            Generator::Exp => x.exp(),
        })
    }

    pub fn invert(&self, y: f64) -> Result<f64> {
        match self {
            Generator::Identity => Ok(y),
            Generator::Power(p) => {
                if !(y > 0.0) {
                    return Err(Error::Domain(format!(
                        "power generator inverse needs y > 0, got {y}"
                    )));
                }
                Ok(y.powf(1.0 / p))
            }
            Generator::Log => Ok(y.exp()),
            Generator::Exp => {
                if !(y > 0.0) {
                    return Err(Error::Domain(format!(
                        "exp generator inverse needs y > 0, got {y}"
                    )));
                }
                Ok(y.ln())
            }
        }
    }

    /// Image of an interval under the generator (endpoints swapped when the
    /// generator is decreasing).
    pub fn image(&self, iv: Interval) -> Result<Interval> {
        let clip = |x: f64| x.clamp(self.domain().lo, self.domain().hi);
        let a = self.apply(clip(iv.lo))?;
        let b = self.apply(clip(iv.hi))?;
        Interval::new(a.min(b), a.max(b))
    }
}

/// Evaluation points with optional weights of total mass 1.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    values: Vec<f64>,
    weights: Option<Vec<f64>>,
}

impl PointSet {
    pub fn uniform(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Invalid("point set must be nonempty".into()));
        }
        Ok(PointSet {
            values,
            weights: None,
        })
    }

    pub fn weighted(values: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Invalid("point set must be nonempty".into()));
        }
        if values.len() != weights.len() {
            return Err(Error::Invalid(format!(
                "{} values but {} weights",
                values.len(),
                weights.len()
            )));
        }
        if weights.iter().any(|w| *w < 0.0) {
            return Err(Error::Invalid("weights must be nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Invalid(format!("weights sum to {total}, not 1")));
        }
        Ok(PointSet {
            values,
            weights: Some(weights),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn weight(&self, i: usize) -> f64 {
        match &self.weights {
            Some(w) => w[i],
            None => 1.0 / self.values.len() as f64,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, self.weight(i)))
    }
}

/// Three evaluation points for the Popoviciu-type inequalities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triple {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Triple {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Triple { x, y, z }
    }

    /// Ascending copy; evaluators sort internally so every report is
    /// permutation-invariant by construction.
    pub fn sorted(&self) -> Triple {
        let mut v = [self.x, self.y, self.z];
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Triple::new(v[0], v[1], v[2])
    }

    pub fn mean(&self) -> f64 {
        (self.x + self.y + self.z) / 3.0
    }

    pub fn midpoints(&self) -> [f64; 3] {
        [
            (self.x + self.y) / 2.0,
            (self.y + self.z) / 2.0,
            (self.z + self.x) / 2.0,
        ]
    }

    /// S = (x-y)^2 + (y-z)^2 + (z-x)^2.
    pub fn squared_spread(&self) -> f64 {
        let (x, y, z) = (self.x, self.y, self.z);
        (x - y).powi(2) + (y - z).powi(2) + (z - x).powi(2)
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

/// Weighted quasi-arithmetic mean: invert(g, sum of lambda_k * apply(g, x_k)).
pub fn qa_mean(g: Generator, pts: &PointSet) -> Result<f64> {
    let mut acc = 0.0;
    for (v, w) in pts.iter() {
        acc += w * g.apply(v)?;
    }
    g.invert(acc)
}

/// Power mean of extended-real order p, with min/max limits at -inf/+inf and
/// the weighted geometric mean at p = 0.
pub fn power_mean(p: f64, pts: &PointSet) -> Result<f64> {
    if p <= 0.0 && pts.values().iter().any(|v| *v <= 0.0) {
        return Err(Error::Domain(format!(
            "power mean of order {p} requires positive values"
        )));
    }
    if p == f64::NEG_INFINITY {
        return Ok(pts.values().iter().cloned().fold(f64::INFINITY, f64::min));
    }
    if p == f64::INFINITY {
        return Ok(pts
            .values()
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max));
    }
    if p == 0.0 {
        let mut acc = 0.0;
        for (v, w) in pts.iter() {
            acc += w * v.ln();
        }
        return Ok(acc.exp());
    }
    if pts.values().iter().any(|v| *v < 0.0) {
        return Err(Error::Domain(
            "power mean requires nonnegative values".into(),
        ));
    }
    let mut acc = 0.0;
    for (v, w) in pts.iter() {
        acc += w * v.powf(p);
    }
    Ok(acc.powf(1.0 / p))
}

/// Relative coincidence threshold at which the two-point means return `a`.
const COINCIDENCE_2PT: f64 = 1e-12;

/// Two-point logarithmic mean L(a, b) = (a - b) / (ln a - ln b).
pub fn log_mean2(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain(format!(
            "logarithmic mean requires positive arguments, got ({a}, {b})"
        )));
    }
    // log(a/b) via log1p keeps full precision when a and b are close.
    let r = (a - b) / b;
    let d = r.ln_1p();
    if d.abs() <= COINCIDENCE_2PT {
        return Ok(a);
    }
    Ok((a - b) / d)
}

/// Identric mean I(a, b) = e^(-1) (b^b / a^a)^(1/(b-a)).
pub fn identric_mean(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain(format!(
            "identric mean requires positive arguments, got ({a}, {b})"
        )));
    }
    let r = (b - a) / a;
    if r.abs() <= COINCIDENCE_2PT {
        return Ok(a);
    }
    // (b ln b - a ln a)/(b - a) - 1 = ln a + (1 + r) ln(1 + r)/r - 1.
    let expo = a.ln() + (1.0 + r) * r.ln_1p() / r - 1.0;
    Ok(expo.exp())
}

/// Relative log-spread below which the three-point logarithmic mean switches
/// to the confluent (divided-difference series) evaluation.
const LOG_MEAN3_SERIES_SPREAD: f64 = 0.02;

/// Neuman's three-point logarithmic mean: twice the second divided
/// difference of exp at the log-points. Arguments are sorted on entry so the
/// result is exactly permutation-invariant.
pub fn log_mean3(a: f64, b: f64, c: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0 && c > 0.0) {
        return Err(Error::Domain(format!(
            "logarithmic mean requires positive arguments, got ({a}, {b}, {c})"
        )));
    }
    let mut v = [a, b, c];
    v.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let u = [v[0].ln(), v[1].ln(), v[2].ln()];
    let spread = u[2] - u[0];
    if spread < LOG_MEAN3_SERIES_SPREAD {
        Ok(2.0 * exp_divided_diff2_series(u[0], u[1], u[2]))
    } else {
        // Nested first divided differences: the outer difference divides by
        // the full spread, so cancellation only threatens when the spread is
        // small — the series region above. Handles coincident pairs exactly.
        let dd2 = (exp_divided_diff1(u[1], u[2]) - exp_divided_diff1(u[0], u[1])) / spread;
        Ok(2.0 * dd2)
    }
}

/// First divided difference of exp: (e^b - e^a)/(b - a), confluent at a = b.
fn exp_divided_diff1(a: f64, b: f64) -> f64 {
    let d = b - a;
    if d.abs() <= COINCIDENCE_2PT {
        ((a + b) / 2.0).exp()
    } else {
        a.exp() * d.exp_m1() / d
    }
}

/// Direct three-term formula 2a/(log(a/b) log(a/c)) + ... ; accurate only
/// for well-separated arguments. Exposed so tests can compare it against the
/// divided-difference path.
pub fn log_mean3_direct(a: f64, b: f64, c: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0 && c > 0.0) {
        return Err(Error::Domain(format!(
            "logarithmic mean requires positive arguments, got ({a}, {b}, {c})"
        )));
    }
    let mut v = [a, b, c];
    v.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let u = [v[0].ln(), v[1].ln(), v[2].ln()];
    if u[0] == u[1] || u[1] == u[2] {
        return Err(Error::Domain(
            "direct three-term formula requires distinct arguments".into(),
        ));
    }
    Ok(log_mean3_direct_sorted(v, u))
}

fn log_mean3_direct_sorted(v: [f64; 3], u: [f64; 3]) -> f64 {
    let t0 = 2.0 * v[0] / ((u[0] - u[1]) * (u[0] - u[2]));
    let t1 = 2.0 * v[1] / ((u[1] - u[0]) * (u[1] - u[2]));
    let t2 = 2.0 * v[2] / ((u[2] - u[0]) * (u[2] - u[1]));
    t0 + t1 + t2
}

/// Second divided difference of exp at (u, v, w) by the centered series
/// exp[u,v,w] = e^m * sum_{n>=0} h_n(u-m, v-m, w-m) / (n+2)!, where h_n are
/// the complete homogeneous symmetric polynomials. Extends continuously to
/// every coincidence pattern (Hermite confluent limit).
fn exp_divided_diff2_series(u: f64, v: f64, w: f64) -> f64 {
    let m = (u + v + w) / 3.0;
    let (a, b, c) = (u - m, v - m, w - m);
    let e1 = a + b + c; // ~0 after centering; kept for exactness
    let e2 = a * b + a * c + b * c;
    let e3 = a * b * c;
    // h_n = e1 h_{n-1} - e2 h_{n-2} + e3 h_{n-3}
    let (mut h0, mut h1, mut h2) = (1.0, e1, e1 * e1 - e2);
    let mut factorial = 2.0; // (0+2)!
    let mut sum = h0 / factorial;
    factorial *= 3.0;
    sum += h1 / factorial;
    // Centering can zero out individual odd-order terms (e.g. equally
    // spaced points give e1 = e3 = 0), so stop only after two consecutive
    // negligible terms.
    let mut small_streak = 0;
    for n in 2..=60usize {
        factorial *= (n + 2) as f64;
        let term = h2 / factorial;
        sum += term;
        if term.abs() <= f64::EPSILON * sum.abs() {
            small_streak += 1;
            if small_streak >= 2 {
                break;
            }
        } else {
            small_streak = 0;
        }
        let h3 = e1 * h2 - e2 * h1 + e3 * h0;
        h0 = h1;
        h1 = h2;
        h2 = h3;
    }
    m.exp() * sum
}
