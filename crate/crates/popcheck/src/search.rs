//! Counterexample discovery: exhaustive grid scan over a box region followed
//! by derivative-free (Nelder-Mead) refinement of the most promising nodes,
//! and certification of any violation by a fresh re-evaluation.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::inequalities::{Inequality, ResidualReport};
use crate::interval::Interval;
use crate::means::Triple;

/// Box region for a triple search.
#[derive(Debug, Clone, Copy)]
pub struct SearchRegion {
    pub intervals: [Interval; 3],
    /// Grid resolution per axis (number of nodes).
    pub resolution: usize,
    pub seed: u64,
}

impl SearchRegion {
    pub fn cube(iv: Interval, resolution: usize, seed: u64) -> Result<Self> {
        SearchRegion::new([iv; 3], resolution, seed)
    }

    pub fn new(intervals: [Interval; 3], resolution: usize, seed: u64) -> Result<Self> {
        if resolution < 2 {
            return Err(Error::Invalid(format!(
                "grid resolution must be >= 2, got {resolution}"
            )));
        }
        for iv in &intervals {
            if !iv.is_bounded() {
                return Err(Error::Invalid(format!(
                    "search region must be bounded, got [{}, {}]",
                    iv.lo, iv.hi
                )));
            }
        }
        Ok(SearchRegion {
            intervals,
            resolution,
            seed,
        })
    }

    pub fn contains(&self, t: &Triple) -> bool {
        self.intervals[0].contains(t.x)
            && self.intervals[1].contains(t.y)
            && self.intervals[2].contains(t.z)
    }

    fn clip(&self, p: [f64; 3]) -> [f64; 3] {
        [
            p[0].clamp(self.intervals[0].lo, self.intervals[0].hi),
            p[1].clamp(self.intervals[1].lo, self.intervals[1].hi),
            p[2].clamp(self.intervals[2].lo, self.intervals[2].hi),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateStatus {
    ViolationCertified,
    NoViolationFound,
}

/// Outcome of a counterexample search. `violation_certified` is only issued
/// after the residual has been recomputed from scratch at the reported point.
#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub inequality_id: String,
    pub point: [f64; 3],
    pub residual: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub tolerance: f64,
    pub status: CertificateStatus,
    /// Minimum residual seen during the scan, reported as evidence even when
    /// no violation is certified.
    pub scanned_minimum: f64,
    pub skipped_nodes: usize,
}

/// One grid node with its residual, produced by `grid_scan`.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub point: [f64; 3],
    pub index: [usize; 3],
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct GridScan {
    /// Successfully evaluated nodes, ascending by residual (ties broken by
    /// lexicographic grid index, so the ordering is deterministic).
    pub candidates: Vec<Candidate>,
    /// Nodes where the evaluator returned an error.
    pub skipped: Vec<([usize; 3], String)>,
}

/// Evaluates the inequality residual at every node of the region grid.
pub fn grid_scan(ineq: &Inequality, region: &SearchRegion) -> Result<GridScan> {
    let axes: Vec<Vec<f64>> = region
        .intervals
        .iter()
        .map(|iv| iv.grid(region.resolution).collect())
        .collect();
    let mut candidates = Vec::new();
    let mut skipped = Vec::new();
    for (i, &x) in axes[0].iter().enumerate() {
        for (j, &y) in axes[1].iter().enumerate() {
            for (k, &z) in axes[2].iter().enumerate() {
                match ineq.eval_triple(Triple::new(x, y, z)) {
                    Ok(rep) if rep.residual.is_finite() => candidates.push(Candidate {
                        point: [x, y, z],
                        index: [i, j, k],
                        residual: rep.residual,
                    }),
                    Ok(rep) => skipped.push((
                        [i, j, k],
                        format!("non-finite residual {}", rep.residual),
                    )),
                    Err(e) => skipped.push(([i, j, k], e.to_string())),
                }
            }
        }
    }
    candidates.sort_by(|a, b| a.residual.total_cmp(&b.residual).then(a.index.cmp(&b.index)));
    Ok(GridScan { candidates, skipped })
}

#[derive(Debug, Clone)]
pub struct Refined {
    pub point: [f64; 3],
    pub residual: f64,
    pub iterations: usize,
    /// Set when every vertex of the initial simplex failed to evaluate and
    /// the start point is returned unchanged.
    pub all_vertices_failed: bool,
}

const NM_ALPHA: f64 = 1.0; // reflection
const NM_GAMMA: f64 = 2.0; // expansion
const NM_RHO: f64 = 0.5; // contraction
const NM_SIGMA: f64 = 0.5; // shrink

/// Nelder-Mead descent on the residual, clipped to the region box. Failed
/// evaluations score +infinity, which the shrink step contracts away from;
/// the best point ever evaluated is tracked so the result can never be worse
/// than the start.
pub fn refine<F>(
    start: [f64; 3],
    mut objective: F,
    region: &SearchRegion,
    max_iter: usize,
) -> Refined
where
    F: FnMut([f64; 3]) -> Result<f64>,
{
    let mut eval = |p: [f64; 3]| -> f64 {
        let p = region.clip(p);
        objective(p).unwrap_or(f64::INFINITY)
    };

    // Initial simplex: start plus 5% of the box width along each axis,
    // stepping inward when that would leave the box.
    let mut simplex: Vec<([f64; 3], f64)> = Vec::with_capacity(4);
    let f0 = eval(start);
    simplex.push((start, f0));
    for d in 0..3 {
        let mut v = start;
        let step = 0.05 * region.intervals[d].width().max(1e-8);
        v[d] = if v[d] + step <= region.intervals[d].hi {
            v[d] + step
        } else {
            v[d] - step
        };
        let v = region.clip(v);
        let fv = eval(v);
        simplex.push((v, fv));
    }
    if simplex.iter().all(|(_, f)| !f.is_finite()) {
        return Refined {
            point: start,
            residual: f64::INFINITY,
            iterations: 0,
            all_vertices_failed: true,
        };
    }

    let (mut best_pt, mut best_val) = simplex
        .iter()
        .cloned()
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .unwrap();

    let mut iterations = 0;
    for _ in 0..max_iter {
        iterations += 1;
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        if simplex[0].1 < best_val {
            (best_pt, best_val) = simplex[0];
        }

        // simplex diameter
        let diam = simplex
            .iter()
            .flat_map(|(p, _)| simplex.iter().map(move |(q, _)| dist(*p, *q)))
            .fold(0.0f64, f64::max);
        if diam < 1e-10 {
            break;
        }

        // centroid of the best three vertices
        let mut c = [0.0; 3];
        for (p, _) in &simplex[..3] {
            for d in 0..3 {
                c[d] += p[d] / 3.0;
            }
        }
        let worst = simplex[3];
        let reflect = region.clip(combine(c, worst.0, -NM_ALPHA));
        let fr = eval(reflect);
        if fr < simplex[0].1 {
            let expand = region.clip(combine(c, worst.0, -NM_GAMMA));
            let fe = eval(expand);
            simplex[3] = if fe < fr { (expand, fe) } else { (reflect, fr) };
        } else if fr < simplex[2].1 {
            simplex[3] = (reflect, fr);
        } else {
            let contract = region.clip(combine(c, worst.0, NM_RHO));
            let fc = eval(contract);
            if fc < worst.1 {
                simplex[3] = (contract, fc);
            } else {
                // shrink toward the best vertex
                let anchor = simplex[0].0;
                for v in simplex.iter_mut().skip(1) {
                    let mut p = anchor;
                    for d in 0..3 {
                        p[d] += NM_SIGMA * (v.0[d] - anchor[d]);
                    }
                    let p = region.clip(p);
                    *v = (p, eval(p));
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    if simplex[0].1 < best_val {
        (best_pt, best_val) = simplex[0];
    }
    Refined {
        point: best_pt,
        residual: best_val,
        iterations,
        all_vertices_failed: false,
    }
}

fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// c + t (w - c): t = -alpha reflects w through c, t = rho contracts.
fn combine(c: [f64; 3], w: [f64; 3], t: f64) -> [f64; 3] {
    [
        c[0] + t * (w[0] - c[0]),
        c[1] + t * (w[1] - c[1]),
        c[2] + t * (w[2] - c[2]),
    ]
}

#[derive(Debug, Clone, Copy)]
pub struct SearchConfig {
    /// Number of best grid nodes used as refinement starts.
    pub refine_starts: usize,
    pub max_iter: usize,
    /// Override for the certification tolerance; None derives it from the
    /// evaluated magnitudes.
    pub tolerance: Option<f64>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            refine_starts: 5,
            max_iter: 400,
            tolerance: None,
        }
    }
}

/// Full pipeline: scan, refine the best nodes, certify the overall best
/// point with a fresh evaluation.
pub fn find_counterexample(
    ineq: &Inequality,
    region: &SearchRegion,
    config: &SearchConfig,
) -> Result<Certificate> {
    let scan = grid_scan(ineq, region)?;
    if scan.candidates.is_empty() {
        return Err(Error::Search(format!(
            "every grid node failed to evaluate ({} skipped)",
            scan.skipped.len()
        )));
    }
    let scanned_minimum = scan.candidates[0].residual;

    let mut best = (scan.candidates[0].point, scanned_minimum);
    for cand in scan.candidates.iter().take(config.refine_starts) {
        let refined = refine(
            cand.point,
            |p| ineq.eval_triple(Triple::new(p[0], p[1], p[2])).map(|r| r.residual),
            region,
            config.max_iter,
        );
        if refined.residual < best.1 {
            best = (refined.point, refined.residual);
        }
    }

    // Fresh certification pass at the winning point.
    let report: ResidualReport = ineq.eval_triple(Triple::new(best.0[0], best.0[1], best.0[2]))?;
    let tolerance = config.tolerance.unwrap_or(report.tolerance);
    let status = if report.residual < -tolerance {
        CertificateStatus::ViolationCertified
    } else {
        CertificateStatus::NoViolationFound
    };
    Ok(Certificate {
        inequality_id: ineq.id().to_string(),
        point: best.0,
        residual: report.residual,
        lhs: report.lhs,
        rhs: report.rhs,
        tolerance,
        status,
        scanned_minimum,
        skipped_nodes: scan.skipped.len(),
    })
}
