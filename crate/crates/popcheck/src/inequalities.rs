//! Residual evaluators, one per inequality. Every report is oriented so
//! that residual >= 0 means the inequality holds; where the source display
//! has the sides the other way around for a concave instance, the evaluator
//! performs the swap so the verdict logic stays uniform.

use serde::Serialize;

use crate::convexity::{FunctionSpec, HProperty, HSpec};
use crate::error::{Error, Result};
use crate::means::{self, Generator, PointSet, Triple};
use crate::specfun::{self, CurvatureBounds, HypergeometricParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated,
}

/// Signed residual of one inequality evaluation.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub inequality_id: String,
    pub point: Vec<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub verdict: Verdict,
    pub tolerance: f64,
    pub hypothesis_flags: Vec<String>,
}

impl ResidualReport {
    fn new(id: &str, point: Vec<f64>, lhs: f64, rhs: f64, flags: Vec<String>) -> Self {
        let residual = lhs - rhs;
        let tolerance = default_tolerance(lhs, rhs);
        ResidualReport {
            inequality_id: id.to_string(),
            point,
            lhs,
            rhs,
            residual,
            verdict: if residual >= -tolerance {
                Verdict::Holds
            } else {
                Verdict::Violated
            },
            tolerance,
        hypothesis_flags: flags,
        }
    }
}

/// 1e-9 absolute, scaled by max(1, |lhs|, |rhs|).
pub fn default_tolerance(lhs: f64, rhs: f64) -> f64 {
    1e-9 * lhs.abs().max(rhs.abs()).max(1.0)
}

fn eval3(f: &FunctionSpec, t: &Triple) -> Result<[f64; 3]> {
    Ok([f.eval(t.x)?, f.eval(t.y)?, f.eval(t.z)?])
}

fn eval_mids(f: &FunctionSpec, t: &Triple) -> Result<[f64; 3]> {
    let m = t.midpoints();
    Ok([f.eval(m[0])?, f.eval(m[1])?, f.eval(m[2])?])
}

/// Classic Popoviciu residual:
/// [f(x)+f(y)+f(z)]/3 + f((x+y+z)/3) - (2/3) sum of f at pairwise midpoints.
pub fn popoviciu_residual(f: &FunctionSpec, t: Triple) -> Result<ResidualReport> {
    let t = t.sorted();
    let fv = eval3(f, &t)?;
    let fm = eval_mids(f, &t)?;
    let lhs = (fv[0] + fv[1] + fv[2]) / 3.0 + f.eval(t.mean())?;
    let rhs = 2.0 / 3.0 * (fm[0] + fm[1] + fm[2]);
    Ok(ResidualReport::new(
        "popoviciu",
        t.as_array().to_vec(),
        lhs,
        rhs,
        vec![],
    ))
}

/// Two-sided semiconvexity sandwich from curvature bounds:
/// upper_gap = M S/36 - D, lower_gap = D - m S/36.
pub fn semiconvex_sandwich(
    f: &FunctionSpec,
    t: Triple,
    bounds: &CurvatureBounds,
) -> Result<(f64, f64)> {
    let t = t.sorted();
    for v in t.as_array() {
        if !bounds.interval.contains(v) {
            return Err(Error::Domain(format!(
                "triple point {v} outside the curvature interval"
            )));
        }
    }
    let d = popoviciu_residual(f, t)?.residual;
    let s = t.squared_spread();
    Ok((bounds.sup * s / 36.0 - d, d - bounds.inf * s / 36.0))
}

/// Strongly convex lower bound: D >= C S / 36.
pub fn strong_convexity_residual(f: &FunctionSpec, c: f64, t: Triple) -> Result<ResidualReport> {
    if !(c > 0.0) {
        return Err(Error::Invalid(format!("strong convexity modulus must be positive, got {c}")));
    }
    let t = t.sorted();
    let d = popoviciu_residual(f, t)?.residual;
    let rhs = c * t.squared_spread() / 36.0;
    Ok(ResidualReport::new(
        "strong",
        t.as_array().to_vec(),
        d,
        rhs,
        vec![],
    ))
}

/// AM/GM corollary of the strongly convex case of exp:
/// (a+b+c)/3 + (abc)^(1/3) - (2/3)(sqrt(ab)+sqrt(bc)+sqrt(ca))
///   >= (1/36)(ln^2(a/b) + ln^2(b/c) + ln^2(c/a)), for a, b, c >= 1.
pub fn agm_log_corollary(a: f64, b: f64, c: f64) -> Result<ResidualReport> {
    if !(a >= 1.0 && b >= 1.0 && c >= 1.0) {
        return Err(Error::Domain(format!(
            "corollary requires a, b, c >= 1, got ({a}, {b}, {c})"
        )));
    }
    let mut v = [a, b, c];
    v.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let [a, b, c] = v;
    let lhs = (a + b + c) / 3.0 + (a * b * c).powf(1.0 / 3.0)
        - 2.0 / 3.0 * ((a * b).sqrt() + (b * c).sqrt() + (c * a).sqrt());
    let rhs = ((a / b).ln().powi(2) + (b / c).ln().powi(2) + (c / a).ln().powi(2)) / 36.0;
    Ok(ResidualReport::new("agm-log", v.to_vec(), lhs, rhs, vec![]))
}

/// Quasi-arithmetic Popoviciu inequality for an (M_phi, M_psi)-convex f:
/// the nested mean M_psi(M_psi(f-values), f(M_phi(x,y,z))) dominates the
/// psi-mean of f at the pairwise phi-means. The psi-space inequality
/// reverses for a decreasing psi, but so does psi itself, so the mean-space
/// orientation is the same for both directions.
pub fn qa_popoviciu(
    f: &FunctionSpec,
    phi: Generator,
    psi: Generator,
    t: Triple,
) -> Result<ResidualReport> {
    let t = t.sorted();
    let fv = eval3(f, &t)?;
    let a = means::qa_mean(psi, &PointSet::uniform(fv.to_vec())?)?;
    let b = f.eval(means::qa_mean(phi, &PointSet::uniform(t.as_array().to_vec())?)?)?;
    let nested = means::qa_mean(psi, &PointSet::uniform(vec![a, b])?)?;

    let pair_mean = |u: f64, v: f64| -> Result<f64> {
        f.eval(means::qa_mean(phi, &PointSet::uniform(vec![u, v])?)?)
    };
    let f_mids = vec![
        pair_mean(t.x, t.y)?,
        pair_mean(t.y, t.z)?,
        pair_mean(t.z, t.x)?,
    ];
    let mids_mean = means::qa_mean(psi, &PointSet::uniform(f_mids)?)?;

    let (lhs, rhs) = (nested, mids_mean);
    Ok(ResidualReport::new(
        "qa-pop",
        t.as_array().to_vec(),
        lhs,
        rhs,
        vec![],
    ))
}

/// Popoviciu analogue for the hypergeometric function (reciprocal-average
/// form). 1/F is concave under the AVV parameter condition, so the averaged
/// reciprocals at the midpoints dominate:
/// (1/3) sum 1/F(mid) >= (1/2)[(1/3) sum 1/F + 1/F(mean)].
pub fn hypergeometric_popoviciu(params: HypergeometricParams, t: Triple) -> Result<ResidualReport> {
    let t = t.sorted();
    for v in t.as_array() {
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::Domain(format!("triple must lie in (0,1)^3, got {v}")));
        }
    }
    let mut flags = vec![];
    if !params.avv_concavity_condition() {
        flags.push(format!(
            "avv_condition_violated: a+b >= c > 2ab and c >= a+b-1/2 fails for (a={}, b={}, c={})",
            params.a, params.b, params.c
        ));
    }
    let recip = |x: f64| -> Result<f64> { Ok(1.0 / specfun::hyp2f1(params, x)?) };
    let rv = [recip(t.x)?, recip(t.y)?, recip(t.z)?];
    let m = t.midpoints();
    let rm = [recip(m[0])?, recip(m[1])?, recip(m[2])?];
    let lhs = (rm[0] + rm[1] + rm[2]) / 3.0;
    let rhs = 0.5 * ((rv[0] + rv[1] + rv[2]) / 3.0 + recip(t.mean())?);
    Ok(ResidualReport::new(
        "hyp-pop",
        t.as_array().to_vec(),
        lhs,
        rhs,
        flags,
    ))
}

/// Popoviciu analogue for the (H, G)-concave Lp-ball volume, computed in log
/// space. Concavity puts the cube-root product of pairwise-harmonic volumes
/// on the dominating side:
/// cbrt(prod V(pairwise harmonic)) >= sqrt(cbrt(V V V) * V(3-pt harmonic)).
pub fn volume_popoviciu(alpha: f64, t: Triple) -> Result<ResidualReport> {
    let t = t.sorted();
    let (p, q, r) = (t.x, t.y, t.z);
    if !(p > 0.0) {
        return Err(Error::Domain(format!("volume arguments must be positive, got {p}")));
    }
    let lnv = |u: f64| specfun::ln_lp_ball_volume(alpha, u);
    let harm2 = |u: f64, v: f64| 2.0 / (1.0 / u + 1.0 / v);
    let harm3 = 3.0 / (1.0 / p + 1.0 / q + 1.0 / r);
    let ln_nested = 0.5 * ((lnv(p)? + lnv(q)? + lnv(r)?) / 3.0 + lnv(harm3)?);
    let ln_mids = (lnv(harm2(p, q))? + lnv(harm2(q, r))? + lnv(harm2(r, p))?) / 3.0;
    Ok(ResidualReport::new(
        "vol-pop",
        t.as_array().to_vec(),
        ln_mids.exp(),
        ln_nested.exp(),
        vec![],
    ))
}

/// The (A, L)-convexity gap functional E. The first fraction of E is exactly
/// the two-point logarithmic mean of L(f(x), f(y), f(z)) and f(mean), which
/// stays finite at coincidence. No sign is expected: this functional probes
/// whether the Popoviciu pattern survives for (M, N)-convex functions.
pub fn al_popoviciu_gap(f: &FunctionSpec, t: Triple) -> Result<ResidualReport> {
    let t = t.sorted();
    let fv = eval3(f, &t)?;
    if fv.iter().any(|v| *v <= 0.0) {
        return Err(Error::Domain("al-gap requires a positive-valued function".into()));
    }
    let l_values = means::log_mean3(fv[0], fv[1], fv[2])?;
    let f_mean = f.eval(t.mean())?;
    let lhs = means::log_mean2(l_values, f_mean)?;
    let fm = eval_mids(f, &t)?;
    let rhs = means::log_mean3(fm[0], fm[1], fm[2])?;
    Ok(ResidualReport::new(
        "al-gap",
        t.as_array().to_vec(),
        lhs,
        rhs,
        vec![],
    ))
}

fn h_hypothesis_flag(h: &HSpec, needed: HProperty, flags: &mut Vec<String>) {
    if !h.declares(needed) {
        flags.push(format!("h_missing_property: {:?} for h = {}", needed, h.name()));
    }
}

/// Popoviciu inequality for nonnegative h-convex f with concave h:
/// max{h(1/2), 2h(1/4)} (f(x)+f(y)+f(z)) + 2h(3/4) f(mean) >= sum f(mid).
pub fn hpop_residual(f: &FunctionSpec, h: &HSpec, t: Triple) -> Result<ResidualReport> {
    let t = t.sorted();
    let mut flags = vec![];
    h_hypothesis_flag(h, HProperty::Concave, &mut flags);
    let fv = eval3(f, &t)?;
    let fm = eval_mids(f, &t)?;
    let coeff = h.eval(0.5)?.max(2.0 * h.eval(0.25)?);
    let lhs = coeff * (fv[0] + fv[1] + fv[2]) + 2.0 * h.eval(0.75)? * f.eval(t.mean())?;
    let rhs = fm[0] + fm[1] + fm[2];
    Ok(ResidualReport::new(
        "hpop",
        t.as_array().to_vec(),
        lhs,
        rhs,
        flags,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HRatioMode {
    /// h supermultiplicative with h(1/3) < 1, f h-convex.
    ConvexI,
    /// h submultiplicative with h(1/3) > 1, f h-concave.
    ConcaveII,
}

/// Ratio-coefficient Popoviciu bounds for h-convex / h-concave functions.
pub fn h_ratio_popoviciu(
    f: &FunctionSpec,
    h: &HSpec,
    t: Triple,
    mode: HRatioMode,
) -> Result<ResidualReport> {
    let t = t.sorted();
    let h13 = h.eval(1.0 / 3.0)?;
    let h12 = h.eval(0.5)?;
    if (h13 - 1.0).abs() < 1e-14 {
        return Err(Error::Degenerate(
            "h(1/3) = 1 makes the ratio coefficient degenerate".into(),
        ));
    }
    let mut flags = vec![];
    let fv = eval3(f, &t)?;
    let fm = eval_mids(f, &t)?;
    let sum_mid = fm[0] + fm[1] + fm[2];
    let f_mean = f.eval(t.mean())?;
    let sum_v = fv[0] + fv[1] + fv[2];
    let (id, lhs, rhs) = match mode {
        HRatioMode::ConvexI => {
            h_hypothesis_flag(h, HProperty::Supermultiplicative, &mut flags);
            if h13 >= 1.0 {
                flags.push(format!("h(1/3) = {h13} >= 1: hypothesis of case (i) fails"));
            }
            let coeff = (1.0 - h13) / (2.0 * h12);
            ("h-ratio-i", sum_v - f_mean, coeff * sum_mid)
        }
        HRatioMode::ConcaveII => {
            h_hypothesis_flag(h, HProperty::Submultiplicative, &mut flags);
            if h13 <= 1.0 {
                flags.push(format!("h(1/3) = {h13} <= 1: hypothesis of case (ii) fails"));
            }
            let coeff = (h13 - 1.0) / (2.0 * h12);
            ("h-ratio-ii", f_mean - sum_v, coeff * sum_mid)
        }
    };
    Ok(ResidualReport::new(id, t.as_array().to_vec(), lhs, rhs, flags))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HJensenMode {
    /// h supermultiplicative, f h-convex.
    ConvexSuper,
    /// h submultiplicative, f h-concave.
    ConcaveSub,
}

/// Jensen-type inequality for h-convex functions on a uniform-weight point
/// set: h(1/n) sum f(x_i) >= f(mean) (reversed for the concave case).
pub fn h_jensen(
    f: &FunctionSpec,
    h: &HSpec,
    pts: &PointSet,
    mode: HJensenMode,
) -> Result<ResidualReport> {
    let n = pts.len();
    if n < 2 {
        return Err(Error::Invalid("h-Jensen needs at least two points".into()));
    }
    let mut flags = vec![];
    let mut sum_f = 0.0;
    let mut sum_x = 0.0;
    for &v in pts.values() {
        sum_f += f.eval(v)?;
        sum_x += v;
    }
    let hn = h.eval(1.0 / n as f64)?;
    let f_mean = f.eval(sum_x / n as f64)?;
    let (lhs, rhs) = match mode {
        HJensenMode::ConvexSuper => {
            h_hypothesis_flag(h, HProperty::Supermultiplicative, &mut flags);
            (hn * sum_f, f_mean)
        }
        HJensenMode::ConcaveSub => {
            h_hypothesis_flag(h, HProperty::Submultiplicative, &mut flags);
            (f_mean, hn * sum_f)
        }
    };
    Ok(ResidualReport::new(
        "h-jensen",
        pts.values().to_vec(),
        lhs,
        rhs,
        flags,
    ))
}

/// Popoviciu-type inequality for an h-Jensen pair (f, g) with concave h:
/// the outer terms use g, the midpoint terms use f.
pub fn h_jensen_pair_pop(
    f: &FunctionSpec,
    g: &FunctionSpec,
    h: &HSpec,
    t: Triple,
) -> Result<ResidualReport> {
    let t = t.sorted();
    let mut flags = vec![];
    h_hypothesis_flag(h, HProperty::Concave, &mut flags);
    let gv = eval3(g, &t)?;
    let fm = eval_mids(f, &t)?;
    let coeff = h.eval(0.5)?.max(2.0 * h.eval(0.25)?);
    let lhs = coeff * (gv[0] + gv[1] + gv[2]) + 2.0 * h.eval(0.75)? * g.eval(t.mean())?;
    let rhs = fm[0] + fm[1] + fm[2];
    Ok(ResidualReport::new(
        "h-pair-pop",
        t.as_array().to_vec(),
        lhs,
        rhs,
        flags,
    ))
}

/// Grid minimum of h(1-l) g(x) + h(l) g(y) - f((1-l) x + l y); certifies the
/// h-Jensen-pair precondition when nonnegative.
pub fn h_jensen_pair_defect(
    f: &FunctionSpec,
    g: &FunctionSpec,
    h: &HSpec,
    grid_n: usize,
) -> Result<f64> {
    if grid_n < 3 {
        return Err(Error::Invalid(format!("grid_n must be >= 3, got {grid_n}")));
    }
    if f.domain != g.domain {
        return Err(Error::Incompatible(
            "h-Jensen pair needs a common domain".into(),
        ));
    }
    if !f.domain.is_bounded() {
        return Err(Error::Invalid("h_jensen_pair_defect needs a bounded domain".into()));
    }
    let pts: Vec<f64> = f.domain.grid(grid_n).collect();
    let gv: Result<Vec<f64>> = pts.iter().map(|&u| g.eval(u)).collect();
    let gv = gv?;
    let lam = |k: usize| (k + 1) as f64 / (grid_n + 1) as f64;
    let mut best = f64::INFINITY;
    for i in 0..pts.len() {
        for j in 0..pts.len() {
            for k in 0..grid_n {
                let l = lam(k);
                // the combination can land 1 ulp outside the closed domain
                let t = ((1.0 - l) * pts[i] + l * pts[j]).clamp(f.domain.lo, f.domain.hi);
                let combo = f.eval(t)?;
                let slack = h.eval(1.0 - l)? * gv[i] + h.eval(l)? * gv[j] - combo;
                best = best.min(slack);
            }
        }
    }
    Ok(best)
}

/// A fully-parameterized inequality, addressable by id string. This is the
/// dispatch surface used by the search module and the CLI.
#[derive(Debug, Clone)]
pub enum Inequality {
    Popoviciu { f: FunctionSpec },
    Semiconvex { f: FunctionSpec, bounds: CurvatureBounds },
    Strong { f: FunctionSpec, c: f64 },
    AgmLog,
    QaPop { f: FunctionSpec, phi: Generator, psi: Generator },
    HypPop { params: HypergeometricParams },
    VolPop { alpha: f64 },
    AlGap { f: FunctionSpec },
    HPop { f: FunctionSpec, h: HSpec },
    HRatioI { f: FunctionSpec, h: HSpec },
    HRatioII { f: FunctionSpec, h: HSpec },
    HJensen { f: FunctionSpec, h: HSpec, mode: HJensenMode },
    HPairPop { f: FunctionSpec, g: FunctionSpec, h: HSpec },
}

impl Inequality {
    pub fn id(&self) -> &'static str {
        match self {
            Inequality::Popoviciu { .. } => "popoviciu",
            Inequality::Semiconvex { .. } => "semiconvex",
            Inequality::Strong { .. } => "strong",
            Inequality::AgmLog => "agm-log",
            Inequality::QaPop { .. } => "qa-pop",
            Inequality::HypPop { .. } => "hyp-pop",
            Inequality::VolPop { .. } => "vol-pop",
            Inequality::AlGap { .. } => "al-gap",
            Inequality::HPop { .. } => "hpop",
            Inequality::HRatioI { .. } => "h-ratio-i",
            Inequality::HRatioII { .. } => "h-ratio-ii",
            Inequality::HJensen { .. } => "h-jensen",
            Inequality::HPairPop { .. } => "h-pair-pop",
        }
    }

    pub fn eval_triple(&self, t: Triple) -> Result<ResidualReport> {
        match self {
            Inequality::Popoviciu { f } => popoviciu_residual(f, t),
            Inequality::Semiconvex { f, bounds } => {
                let (upper, lower) = semiconvex_sandwich(f, t, bounds)?;
                let mut rep = ResidualReport::new(
                    "semiconvex",
                    t.sorted().as_array().to_vec(),
                    upper.min(lower),
                    0.0,
                    vec![format!("upper_gap={upper}"), format!("lower_gap={lower}")],
                );
                rep.residual = upper.min(lower);
                Ok(rep)
            }
            Inequality::Strong { f, c } => strong_convexity_residual(f, *c, t),
            Inequality::AgmLog => agm_log_corollary(t.x, t.y, t.z),
            Inequality::QaPop { f, phi, psi } => qa_popoviciu(f, *phi, *psi, t),
            Inequality::HypPop { params } => hypergeometric_popoviciu(*params, t),
            Inequality::VolPop { alpha } => volume_popoviciu(*alpha, t),
            Inequality::AlGap { f } => al_popoviciu_gap(f, t),
            Inequality::HPop { f, h } => hpop_residual(f, h, t),
            Inequality::HRatioI { f, h } => h_ratio_popoviciu(f, h, t, HRatioMode::ConvexI),
            Inequality::HRatioII { f, h } => h_ratio_popoviciu(f, h, t, HRatioMode::ConcaveII),
            Inequality::HJensen { f, h, mode } => {
                let pts = PointSet::uniform(t.as_array().to_vec())?;
                h_jensen(f, h, &pts, *mode)
            }
            Inequality::HPairPop { f, g, h } => h_jensen_pair_pop(f, g, h, t),
        }
    }

    /// Domain box used by sweeps and searches when no explicit region is
    /// given; None when the target's domain is unbounded.
    pub fn default_domain(&self) -> Option<crate::interval::Interval> {
        let dom = match self {
            Inequality::Popoviciu { f }
            | Inequality::Strong { f, .. }
            | Inequality::AlGap { f }
            | Inequality::HPop { f, .. }
            | Inequality::HRatioI { f, .. }
            | Inequality::HRatioII { f, .. }
            | Inequality::HJensen { f, .. }
            | Inequality::QaPop { f, .. }
            | Inequality::HPairPop { f, .. } => f.domain,
            Inequality::Semiconvex { bounds, .. } => bounds.interval,
            Inequality::AgmLog => return None,
            Inequality::HypPop { .. } => crate::interval::Interval { lo: 1e-6, hi: 1.0 - 1e-6 },
            Inequality::VolPop { .. } => return None,
        };
        dom.is_bounded().then_some(dom)
    }
}
