use crate::error::{Error, Result};

/// Closed real interval `[lo, hi]`. Endpoints may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::Invalid(format!("bad interval [{lo}, {hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    pub const ALL: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    /// (0, +inf) approximated as a closed interval with the smallest
    /// positive normal lower endpoint.
    pub const POSITIVE: Interval = Interval {
        lo: f64::MIN_POSITIVE,
        hi: f64::INFINITY,
    };

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Uniform grid of `n` points including both endpoints (`n >= 2`).
    pub fn grid(&self, n: usize) -> impl Iterator<Item = f64> + '_ {
        let n = n.max(2);
        let step = self.width() / (n - 1) as f64;
        (0..n).map(move |i| {
            if i == n - 1 {
                self.hi
            } else {
                self.lo + step * i as f64
            }
        })
    }
}
