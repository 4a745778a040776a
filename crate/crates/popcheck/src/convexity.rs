//! Convexity classification machinery: the function registry, the Aczel
//! transform, midpoint-convexity defect testing, and the h-function family
//! with its property checks.

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::means::{Direction, Generator};
use crate::specfun::{self, HypergeometricParams};

/// Registry of test functions.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionKind {
    Exp,
    Log,
    /// -log, convex on (0, inf).
    NegLog,
    Abs,
    Sin,
    /// x^r; integer r on all of R, fractional r on [0, inf).
    Power(f64),
    /// c0 + c1 x + c2 x^2 + ...
    Polynomial(Vec<f64>),
    Gamma,
    Hyp2f1(HypergeometricParams),
    ReciprocalHyp2f1(HypergeometricParams),
    /// V_alpha(p) as a function of p.
    LpVolume(f64),
}

/// A named test function with a declared domain and an optional scalar
/// multiplier (the multiplier serves the h-Jensen-pair constructions).
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSpec {
    pub kind: FunctionKind,
    pub domain: Interval,
    pub scale: f64,
}

impl FunctionSpec {
    pub fn new(kind: FunctionKind) -> Self {
        let domain = Self::natural_domain(&kind);
        FunctionSpec {
            kind,
            domain,
            scale: 1.0,
        }
    }

    pub fn with_domain(mut self, lo: f64, hi: f64) -> Result<Self> {
        let iv = Interval::new(lo, hi)?;
        if !Self::natural_domain(&self.kind).contains_interval(&iv) {
            return Err(Error::Invalid(format!(
                "[{lo}, {hi}] is outside the natural domain of {}",
                self.name()
            )));
        }
        self.domain = iv;
        Ok(self)
    }

    pub fn scaled(mut self, k: f64) -> Self {
        self.scale *= k;
        self
    }

    fn natural_domain(kind: &FunctionKind) -> Interval {
        match kind {
            FunctionKind::Exp | FunctionKind::Abs | FunctionKind::Sin | FunctionKind::Polynomial(_) => {
                Interval::ALL
            }
            FunctionKind::Log | FunctionKind::NegLog | FunctionKind::Gamma => Interval::POSITIVE,
            FunctionKind::Power(r) => {
                if r.fract() == 0.0 && *r >= 0.0 {
                    Interval::ALL
                } else if *r < 0.0 {
                    Interval::POSITIVE
                } else {
                    Interval { lo: 0.0, hi: f64::INFINITY }
                }
            }
            FunctionKind::Hyp2f1(_) | FunctionKind::ReciprocalHyp2f1(_) => {
                // Open unit interval; stay strictly inside.
                Interval { lo: -1.0 + 1e-12, hi: 1.0 - 1e-12 }
            }
            FunctionKind::LpVolume(_) => Interval::POSITIVE,
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !self.domain.contains(x) {
            return Err(Error::Domain(format!(
                "{} evaluated at {x} outside [{}, {}]",
                self.name(),
                self.domain.lo,
                self.domain.hi
            )));
        }
        let v = match &self.kind {
            FunctionKind::Exp => x.exp(),
            FunctionKind::Log => x.ln(),
            FunctionKind::NegLog => -x.ln(),
            FunctionKind::Abs => x.abs(),
            FunctionKind::Sin => x.sin(),
            FunctionKind::Power(r) => {
                if r.fract() == 0.0 {
                    x.powi(*r as i32)
                } else {
                    x.powf(*r)
                }
            }
            FunctionKind::Polynomial(coeffs) => {
                coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
            }
            FunctionKind::Gamma => specfun::gamma(x)?,
            FunctionKind::Hyp2f1(p) => specfun::hyp2f1(*p, x)?,
            FunctionKind::ReciprocalHyp2f1(p) => 1.0 / specfun::hyp2f1(*p, x)?,
            FunctionKind::LpVolume(alpha) => specfun::lp_ball_volume(*alpha, x)?,
        };
        Ok(self.scale * v)
    }

    pub fn name(&self) -> String {
        let base = match &self.kind {
            FunctionKind::Exp => "exp".into(),
            FunctionKind::Log => "log".into(),
            FunctionKind::NegLog => "neglog".into(),
            FunctionKind::Abs => "abs".into(),
            FunctionKind::Sin => "sin".into(),
            FunctionKind::Power(r) => format!("power:{r}"),
            FunctionKind::Polynomial(c) => {
                let body: Vec<String> = c.iter().map(|v| v.to_string()).collect();
                format!("poly:{}", body.join(":"))
            }
            FunctionKind::Gamma => "gamma".into(),
            FunctionKind::Hyp2f1(p) => format!("hyp2f1:{}:{}:{}", p.a, p.b, p.c),
            FunctionKind::ReciprocalHyp2f1(p) => {
                format!("reciprocal_hyp2f1:{}:{}:{}", p.a, p.b, p.c)
            }
            FunctionKind::LpVolume(a) => format!("lpvol:{a}"),
        };
        if self.scale != 1.0 {
            format!("{}*{base}", self.scale)
        } else {
            base
        }
    }

    /// Parse the registry syntax `name[:param[:param...]]`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut parts = s.split(':');
        let name = parts.next().unwrap_or("");
        let rest: Vec<&str> = parts.collect();
        let num = |i: usize| -> Result<f64> {
            rest.get(i)
                .ok_or_else(|| Error::Invalid(format!("'{name}' is missing parameter {i}")))?
                .parse::<f64>()
                .map_err(|e| Error::Invalid(format!("bad parameter for '{name}': {e}")))
        };
        let kind = match name {
            "exp" => FunctionKind::Exp,
            "log" => FunctionKind::Log,
            "neglog" => FunctionKind::NegLog,
            "abs" => FunctionKind::Abs,
            "sin" => FunctionKind::Sin,
            "power" => FunctionKind::Power(num(0)?),
            "poly" | "polynomial" => {
                if rest.is_empty() {
                    return Err(Error::Invalid("polynomial needs coefficients".into()));
                }
                let coeffs: Result<Vec<f64>> = (0..rest.len()).map(num).collect();
                FunctionKind::Polynomial(coeffs?)
            }
            "gamma" => FunctionKind::Gamma,
            "hyp2f1" => FunctionKind::Hyp2f1(HypergeometricParams::new(num(0)?, num(1)?, num(2)?)?),
            "reciprocal_hyp2f1" | "rhyp2f1" => {
                FunctionKind::ReciprocalHyp2f1(HypergeometricParams::new(num(0)?, num(1)?, num(2)?)?)
            }
            "lpvol" | "lp_volume" => FunctionKind::LpVolume(num(0)?),
            other => return Err(Error::Invalid(format!("unknown function '{other}'"))),
        };
        Ok(FunctionSpec::new(kind))
    }
}

/// Result of a grid defect scan: the minimal slack and where it occurred.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Defect {
    pub min_slack: f64,
    pub witness: (f64, f64),
    pub grid_n: usize,
}

/// Verdict tolerance: 1e-9 absolute, scaled by the largest function value
/// seen on the grid.
pub fn defect_tolerance(max_abs: f64) -> f64 {
    1e-9 * max_abs.max(1.0)
}

/// min over grid pairs (u, v) of [g(u) + g(v)]/2 - g((u+v)/2); nonnegative
/// (within tolerance) iff g is midpoint-convex on the grid.
pub fn midpoint_convexity_defect<G>(g: G, interval: Interval, grid_n: usize) -> Result<Defect>
where
    G: Fn(f64) -> Result<f64>,
{
    if grid_n < 3 {
        return Err(Error::Invalid(format!("grid_n must be >= 3, got {grid_n}")));
    }
    let pts: Vec<f64> = interval.grid(grid_n).collect();
    let vals: Result<Vec<f64>> = pts.iter().map(|&u| g(u)).collect();
    let vals = vals?;
    let mut best = f64::INFINITY;
    let mut witness = (pts[0], pts[0]);
    for i in 0..pts.len() {
        for j in i..pts.len() {
            let mid = g((pts[i] + pts[j]) / 2.0)?;
            let slack = (vals[i] + vals[j]) / 2.0 - mid;
            if slack < best {
                best = slack;
                witness = (pts[i], pts[j]);
            }
        }
    }
    Ok(Defect {
        min_slack: best,
        witness,
        grid_n,
    })
}

/// The Aczel transform psi . f . phi^{-1} together with its domain phi(I).
pub struct AczelTransform {
    f: FunctionSpec,
    phi: Generator,
    psi: Generator,
    pub domain: Interval,
}

pub fn aczel_transform(f: &FunctionSpec, phi: Generator, psi: Generator) -> Result<AczelTransform> {
    if !phi.domain().contains_interval(&clip_unbounded(f.domain)) {
        return Err(Error::Incompatible(format!(
            "generator {} is not defined on the domain of {}",
            phi.name(),
            f.name()
        )));
    }
    let domain = phi.image(f.domain)?;
    Ok(AczelTransform {
        f: f.clone(),
        phi,
        psi,
        domain,
    })
}

// Intervals like (0, inf) are stored with a MIN_POSITIVE endpoint; treat the
// endpoint as open when checking generator compatibility.
fn clip_unbounded(iv: Interval) -> Interval {
    Interval {
        lo: if iv.lo == f64::NEG_INFINITY { -1.0 } else { iv.lo },
        hi: if iv.hi == f64::INFINITY { 1.0f64.max(iv.lo) } else { iv.hi },
    }
}

impl AczelTransform {
    pub fn eval(&self, t: f64) -> Result<f64> {
        self.psi.apply(self.f.eval(self.phi.invert(t)?)?)
    }
}

/// Verdict of an (M_phi, M_psi)-convexity grid check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvexityVerdict {
    Convex,
    Concave,
    Neither,
}

#[derive(Debug, Clone, Copy)]
pub struct MnConvexityReport {
    pub verdict: ConvexityVerdict,
    /// Midpoint slack of the raw Aczel transform (min over pairs).
    pub transform_convex_slack: f64,
    /// Midpoint slack of the negated transform.
    pub transform_concave_slack: f64,
    /// Raw (un-translated) verdict of the transform itself.
    pub transform_verdict: ConvexityVerdict,
    pub grid_n: usize,
    pub tolerance: f64,
}

/// Grid-certified (M_phi, M_psi)-convexity via the Aczel transform. With a
/// strictly increasing psi the transform's verdict carries over unchanged;
/// with a strictly decreasing psi convex and concave swap.
pub fn mn_convexity_check(
    f: &FunctionSpec,
    phi: Generator,
    psi: Generator,
    grid_n: usize,
) -> Result<MnConvexityReport> {
    let t = aczel_transform(f, phi, psi)?;
    if !t.domain.is_bounded() {
        return Err(Error::Invalid(
            "mn_convexity_check needs a bounded transform domain".into(),
        ));
    }
    let pts: Vec<f64> = t.domain.grid(grid_n).collect();
    let mut max_abs: f64 = 0.0;
    for &p in &pts {
        max_abs = max_abs.max(t.eval(p)?.abs());
    }
    let tol = defect_tolerance(max_abs);
    let convex = midpoint_convexity_defect(|u| t.eval(u), t.domain, grid_n)?;
    let concave = midpoint_convexity_defect(|u| t.eval(u).map(|v| -v), t.domain, grid_n)?;
    let transform_verdict = if convex.min_slack >= -tol && concave.min_slack >= -tol {
        // Affine on the grid; report convex.
        ConvexityVerdict::Convex
    } else if convex.min_slack >= -tol {
        ConvexityVerdict::Convex
    } else if concave.min_slack >= -tol {
        ConvexityVerdict::Concave
    } else {
        ConvexityVerdict::Neither
    };
    let verdict = match (psi.direction(), transform_verdict) {
        (Direction::Increasing, v) => v,
        (Direction::Decreasing, ConvexityVerdict::Convex) => ConvexityVerdict::Concave,
        (Direction::Decreasing, ConvexityVerdict::Concave) => ConvexityVerdict::Convex,
        (Direction::Decreasing, ConvexityVerdict::Neither) => ConvexityVerdict::Neither,
    };
    Ok(MnConvexityReport {
        verdict,
        transform_convex_slack: convex.min_slack,
        transform_concave_slack: concave.min_slack,
        transform_verdict,
        grid_n,
        tolerance: tol,
    })
}

/// The h-function family of Varosanec-style generalized convexity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HKind {
    Identity,
    /// lambda^s with s in (0, 1] (Breckner s-convexity).
    Power(f64),
    /// 1/lambda (Godunova-Levin).
    Reciprocal,
    /// h == 1 (P-convexity).
    ConstantOne,
}

/// Numerically checkable property of an h-function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HProperty {
    H1Condition,
    Concave,
    Supermultiplicative,
    Submultiplicative,
}

/// An h:(0,1) -> (0,inf) weight-distortion function. Construction verifies
/// condition (h1): h(1-l) + h(l) >= 1 on a 10^4-point grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HSpec {
    kind: HKind,
}

const H1_CONSTRUCTION_GRID: usize = 10_000;

impl HSpec {
    pub fn new(kind: HKind) -> Result<Self> {
        if let HKind::Power(s) = kind {
            if !(s > 0.0 && s <= 1.0) {
                return Err(Error::Invalid(format!(
                    "Breckner exponent must lie in (0, 1], got {s}"
                )));
            }
        }
        let h = HSpec { kind };
        let check = h.property_check(HProperty::H1Condition, H1_CONSTRUCTION_GRID)?;
        if !check.holds {
            return Err(Error::Invalid(format!(
                "condition (h1) fails with slack {}",
                check.worst_slack
            )));
        }
        Ok(h)
    }

    pub fn parse(s: &str) -> Result<Self> {
        let mut parts = s.split(':');
        match parts.next().unwrap_or("") {
            "identity" | "id" => HSpec::new(HKind::Identity),
            "reciprocal" => HSpec::new(HKind::Reciprocal),
            "one" | "constant_one" => HSpec::new(HKind::ConstantOne),
            "power" => {
                let s: f64 = parts
                    .next()
                    .ok_or_else(|| Error::Invalid("power h-kind needs a parameter".into()))?
                    .parse()
                    .map_err(|e| Error::Invalid(format!("bad h parameter: {e}")))?;
                HSpec::new(HKind::Power(s))
            }
            other => Err(Error::Invalid(format!("unknown h-kind '{other}'"))),
        }
    }

    pub fn kind(&self) -> HKind {
        self.kind
    }

    pub fn name(&self) -> String {
        match self.kind {
            HKind::Identity => "identity".into(),
            HKind::Power(s) => format!("power:{s}"),
            HKind::Reciprocal => "reciprocal".into(),
            HKind::ConstantOne => "constant_one".into(),
        }
    }

    pub fn eval(&self, lam: f64) -> Result<f64> {
        if !(lam > 0.0 && lam < 1.0) {
            return Err(Error::Domain(format!(
                "h is defined on the open interval (0, 1); got {lam}"
            )));
        }
        Ok(match self.kind {
            HKind::Identity => lam,
            HKind::Power(s) => lam.powf(s),
            HKind::Reciprocal => 1.0 / lam,
            HKind::ConstantOne => 1.0,
        })
    }

    /// Properties known analytically for the closed kind enumeration; used
    /// by the inequality evaluators as advisory hypothesis flags.
    pub fn declared_properties(&self) -> &'static [HProperty] {
        match self.kind {
            // All four kinds are multiplicative, hence both super- and
            // sub-multiplicative.
            HKind::Identity | HKind::ConstantOne | HKind::Power(_) => &[
                HProperty::Concave,
                HProperty::Supermultiplicative,
                HProperty::Submultiplicative,
            ],
            HKind::Reciprocal => &[
                HProperty::Supermultiplicative,
                HProperty::Submultiplicative,
            ],
        }
    }

    pub fn declares(&self, p: HProperty) -> bool {
        p == HProperty::H1Condition || self.declared_properties().contains(&p)
    }

    /// Grid verification of a property over (0,1); pairs are used for the
    /// multiplicativity checks since xy stays inside (0,1). Returns the
    /// minimal slack and a witness.
    pub fn property_check(&self, property: HProperty, grid_n: usize) -> Result<PropertyReport> {
        if grid_n < 3 {
            return Err(Error::Invalid(format!("grid_n must be >= 3, got {grid_n}")));
        }
        // Open-interval grid with margin 1/(grid_n + 1).
        let lam = |k: usize| (k + 1) as f64 / (grid_n + 1) as f64;
        let mut worst = f64::INFINITY;
        let mut witness = (lam(0), f64::NAN);
        match property {
            HProperty::H1Condition => {
                for k in 0..grid_n {
                    let l = lam(k);
                    let slack = self.eval(1.0 - l)? + self.eval(l)? - 1.0;
                    if slack < worst {
                        worst = slack;
                        witness = (l, f64::NAN);
                    }
                }
            }
            HProperty::Concave => {
                for i in 0..grid_n {
                    for j in i..grid_n {
                        let (u, v) = (lam(i), lam(j));
                        let slack = self.eval((u + v) / 2.0)? - (self.eval(u)? + self.eval(v)?) / 2.0;
                        if slack < worst {
                            worst = slack;
                            witness = (u, v);
                        }
                    }
                }
            }
            HProperty::Supermultiplicative | HProperty::Submultiplicative => {
                for i in 0..grid_n {
                    for j in i..grid_n {
                        let (u, v) = (lam(i), lam(j));
                        let diff = self.eval(u * v)? - self.eval(u)? * self.eval(v)?;
                        let slack = if property == HProperty::Supermultiplicative {
                            diff
                        } else {
                            -diff
                        };
                        if slack < worst {
                            worst = slack;
                            witness = (u, v);
                        }
                    }
                }
            }
        }
        Ok(PropertyReport {
            holds: worst >= -1e-12,
            worst_slack: worst,
            witness,
            grid_n,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropertyReport {
    pub holds: bool,
    pub worst_slack: f64,
    pub witness: (f64, f64),
    pub grid_n: usize,
}

/// min over a grid of (x, y, lambda) of
/// h(1-l) f(x) + h(l) f(y) - f((1-l) x + l y).
/// f is grid-certified h-convex iff the result is >= -tolerance.
pub fn h_convexity_defect(f: &FunctionSpec, h: &HSpec, grid_n: usize) -> Result<Defect> {
    if grid_n < 3 {
        return Err(Error::Invalid(format!("grid_n must be >= 3, got {grid_n}")));
    }
    if !f.domain.is_bounded() {
        return Err(Error::Invalid(
            "h_convexity_defect needs a bounded function domain".into(),
        ));
    }
    let pts: Vec<f64> = f.domain.grid(grid_n).collect();
    let vals: Result<Vec<f64>> = pts.iter().map(|&u| f.eval(u)).collect();
    let vals = vals?;
    let lam = |k: usize| (k + 1) as f64 / (grid_n + 1) as f64;
    let mut best = f64::INFINITY;
    let mut witness = (pts[0], pts[0]);
    for i in 0..pts.len() {
        for j in 0..pts.len() {
            for k in 0..grid_n {
                let l = lam(k);
                // the combination can land 1 ulp outside the closed domain
                let t = ((1.0 - l) * pts[i] + l * pts[j]).clamp(f.domain.lo, f.domain.hi);
                let combo = f.eval(t)?;
                let slack = h.eval(1.0 - l)? * vals[i] + h.eval(l)? * vals[j] - combo;
                if slack < best {
                    best = slack;
                    witness = (pts[i], pts[j]);
                }
            }
        }
    }
    Ok(Defect {
        min_slack: best,
        witness,
        grid_n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_registry_names() {
        assert!(FunctionSpec::parse("exp").is_ok());
        assert!(FunctionSpec::parse("power:2").is_ok());
        assert!(FunctionSpec::parse("poly:1:0:2").is_ok());
        assert!(FunctionSpec::parse("hyp2f1:0.5:0.5:0.75").is_ok());
        assert!(FunctionSpec::parse("lpvol:2").is_ok());
        assert!(FunctionSpec::parse("nope").is_err());
        assert!(FunctionSpec::parse("power").is_err());
    }

    #[test]
    fn polynomial_horner() {
        let f = FunctionSpec::parse("poly:1:0:2").unwrap(); // 1 + 2x^2
        assert_eq!(f.eval(3.0).unwrap(), 19.0);
    }

    #[test]
    fn domain_enforcement() {
        let f = FunctionSpec::new(FunctionKind::Log);
        assert!(f.eval(-1.0).is_err());
        let g = FunctionSpec::new(FunctionKind::Exp)
            .with_domain(0.0, 1.0)
            .unwrap();
        assert!(g.eval(2.0).is_err());
        assert!(FunctionSpec::new(FunctionKind::Log).with_domain(-1.0, 1.0).is_err());
    }

    #[test]
    fn midpoint_defect_examples() {
        let iv = Interval::new(-1.0, 1.0).unwrap();
        let sq = |u: f64| Ok(u * u);
        let d = midpoint_convexity_defect(sq, iv, 51).unwrap();
        assert!(d.min_slack >= -1e-12);
        let nsq = |u: f64| Ok(-u * u);
        let d = midpoint_convexity_defect(nsq, iv, 51).unwrap();
        assert!((d.min_slack + 1.0).abs() < 1e-12, "defect -(u-v)^2/4 at the diameter");
        assert_eq!(d.witness, (-1.0, 1.0));
        let ex = |u: f64| Ok(f64::exp(u));
        let d = midpoint_convexity_defect(ex, Interval::new(0.0, 1.0).unwrap(), 101).unwrap();
        assert!(d.min_slack >= -1e-12);
    }

    #[test]
    fn aczel_transform_examples() {
        // log . id . exp = identity on R.
        let f = FunctionSpec::new(FunctionKind::Power(1.0))
            .with_domain(0.5, 2.0)
            .unwrap();
        let t = aczel_transform(&f, Generator::Log, Generator::Log).unwrap();
        assert!((t.eval(0.3).unwrap() - 0.3).abs() < 1e-14);
        assert!((t.domain.lo - 0.5f64.ln()).abs() < 1e-14);

        let f = FunctionSpec::new(FunctionKind::Exp).with_domain(0.0, 1.0).unwrap();
        let t = aczel_transform(&f, Generator::Identity, Generator::Identity).unwrap();
        assert!((t.eval(0.7).unwrap() - 0.7f64.exp()).abs() < 1e-14);
    }

    #[test]
    fn aczel_decreasing_phi_swaps_endpoints() {
        let f = FunctionSpec::new(FunctionKind::Exp).with_domain(1.0, 2.0).unwrap();
        let t = aczel_transform(&f, Generator::power(-1.0).unwrap(), Generator::Identity).unwrap();
        assert!((t.domain.lo - 0.5).abs() < 1e-14);
        assert!((t.domain.hi - 1.0).abs() < 1e-14);
    }

    #[test]
    fn mn_convexity_directions() {
        // Ordinary convexity.
        let f = FunctionSpec::new(FunctionKind::Exp).with_domain(0.0, 1.0).unwrap();
        let r = mn_convexity_check(&f, Generator::Identity, Generator::Identity, 41).unwrap();
        assert_eq!(r.verdict, ConvexityVerdict::Convex);

        // (A, G): log of exp is affine, defect ~ 0 both ways.
        let r = mn_convexity_check(&f, Generator::Identity, Generator::Log, 41).unwrap();
        assert_eq!(r.verdict, ConvexityVerdict::Convex);
        assert!(r.transform_convex_slack.abs() <= 1e-12);
        assert!(r.transform_concave_slack.abs() <= 1e-12);

        // Gamma is log-convex.
        let f = FunctionSpec::new(FunctionKind::Gamma).with_domain(1.1, 2.0).unwrap();
        let r = mn_convexity_check(&f, Generator::Identity, Generator::Log, 41).unwrap();
        assert_eq!(r.verdict, ConvexityVerdict::Convex);
    }

    #[test]
    fn mn_convexity_decreasing_psi_flips() {
        // 2F1 with the AVV parameters is (A, H)-convex: the transform 1/F is
        // concave, and the decreasing psi flips the verdict back to convex.
        let p = HypergeometricParams::new(0.5, 0.5, 0.75).unwrap();
        let f = FunctionSpec::new(FunctionKind::Hyp2f1(p))
            .with_domain(0.05, 0.95)
            .unwrap();
        let r = mn_convexity_check(&f, Generator::Identity, Generator::power(-1.0).unwrap(), 41)
            .unwrap();
        assert_eq!(r.verdict, ConvexityVerdict::Convex);
        assert_eq!(r.transform_verdict, ConvexityVerdict::Concave);

        // V_alpha is (H, G)-concave.
        let f = FunctionSpec::new(FunctionKind::LpVolume(2.0))
            .with_domain(1.0, 10.0)
            .unwrap();
        let r = mn_convexity_check(&f, Generator::power(-1.0).unwrap(), Generator::Log, 41).unwrap();
        assert_eq!(r.verdict, ConvexityVerdict::Concave);
    }

    #[test]
    fn h_eval_examples() {
        let h = HSpec::new(HKind::Power(0.5)).unwrap();
        assert!((h.eval(0.25).unwrap() - 0.5).abs() < 1e-15);
        let h = HSpec::new(HKind::Reciprocal).unwrap();
        assert!((h.eval(0.5).unwrap() - 2.0).abs() < 1e-15);
        let h = HSpec::new(HKind::ConstantOne).unwrap();
        assert_eq!(h.eval(0.9).unwrap(), 1.0);
        assert!(h.eval(0.0).is_err());
        assert!(h.eval(1.0).is_err());
    }

    #[test]
    fn h_property_checks() {
        let sqrt_h = HSpec::new(HKind::Power(0.5)).unwrap();
        let r = sqrt_h.property_check(HProperty::H1Condition, 999).unwrap();
        assert!(r.holds);
        // Minimal slack approaches 0 near the endpoints.
        assert!(r.worst_slack < 0.05 && r.worst_slack >= 0.0);

        let r = sqrt_h.property_check(HProperty::Supermultiplicative, 99).unwrap();
        assert!(r.holds && r.worst_slack.abs() < 1e-12, "multiplicative");

        let id = HSpec::new(HKind::Identity).unwrap();
        let r = id.property_check(HProperty::Concave, 99).unwrap();
        assert!(r.holds && r.worst_slack.abs() < 1e-12, "affine");

        let rec = HSpec::new(HKind::Reciprocal).unwrap();
        let r = rec.property_check(HProperty::Concave, 99).unwrap();
        assert!(!r.holds);
    }

    #[test]
    fn every_kind_passes_h1() {
        for kind in [
            HKind::Identity,
            HKind::Power(0.25),
            HKind::Power(1.0),
            HKind::Reciprocal,
            HKind::ConstantOne,
        ] {
            let h = HSpec::new(kind).unwrap();
            let r = h.property_check(HProperty::H1Condition, 1001).unwrap();
            assert!(r.worst_slack >= -1e-12, "{:?}", kind);
        }
        assert!(HSpec::new(HKind::Power(1.5)).is_err());
    }

    #[test]
    fn breckner_family_defects() {
        for s in [0.25, 0.5, 0.75, 1.0] {
            let f = FunctionSpec::new(FunctionKind::Power(s))
                .with_domain(0.0, 10.0)
                .unwrap();
            let h = HSpec::new(HKind::Power(s)).unwrap();
            let d = h_convexity_defect(&f, &h, 25).unwrap();
            assert!(d.min_slack >= -1e-10, "s = {s}: {}", d.min_slack);
        }
    }

    #[test]
    fn godunova_levin_monotone_example() {
        // Nonnegative increasing function is Godunova-Levin convex.
        let f = FunctionSpec::new(FunctionKind::Exp).with_domain(0.0, 2.0).unwrap();
        let h = HSpec::new(HKind::Reciprocal).unwrap();
        let d = h_convexity_defect(&f, &h, 25).unwrap();
        assert!(d.min_slack >= -1e-10);
    }

    #[test]
    fn ordinary_convexity_as_h_convexity() {
        let f = FunctionSpec::new(FunctionKind::Exp).with_domain(0.0, 1.0).unwrap();
        let h = HSpec::new(HKind::Identity).unwrap();
        let d = h_convexity_defect(&f, &h, 25).unwrap();
        assert!(d.min_slack >= -1e-10);
    }

    #[test]
    fn breckner_piecewise_example() {
        // f(0) = a, f(t) = b t^s + c for t > 0, with b >= 0 and 0 <= c <= a,
        // is s-convex. Sampled (a, b, c, s) via the polynomial composition:
        // here a = c so the piecewise function is b t^s + c everywhere.
        for (b, c, s) in [(1.0, 0.0, 0.5), (2.0, 0.5, 0.25), (0.3, 1.0, 0.75)] {
            let f = FunctionSpec::new(FunctionKind::Power(s))
                .scaled(b)
                .with_domain(0.0, 5.0)
                .unwrap();
            // shift by c: emulate with polynomial addition through a closure
            // is not in the registry; instead check the pure power part and
            // the constant part separately via subadditivity of the defect.
            let h = HSpec::new(HKind::Power(s)).unwrap();
            let d = h_convexity_defect(&f, &h, 17).unwrap();
            // constant c contributes h(1-l)c + h(l)c - c >= 0 by (h1)
            assert!(d.min_slack >= -1e-10, "(b={b}, c={c}, s={s})");
        }
    }
}
