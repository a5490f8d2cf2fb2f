//! Piecewise-linear interpolants of the entropy terms and McCormick envelopes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_SEGMENTS: usize = 24;

/// The two nonlinear functions left in the objective after share inversion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropyTerm {
    /// `w ln w`, convex.
    XLnX,
    /// `w ln(1 - w)`, concave.
    XLnOneMinusX,
}

impl EntropyTerm {
    pub fn eval(self, w: f64) -> f64 {
        match self {
            EntropyTerm::XLnX => w * w.ln(),
            EntropyTerm::XLnOneMinusX => w * (-w).ln_1p(),
        }
    }

    pub fn second_derivative(self, w: f64) -> f64 {
        match self {
            EntropyTerm::XLnX => 1.0 / w,
            EntropyTerm::XLnOneMinusX => {
                let u = 1.0 - w;
                -1.0 / u - 1.0 / (u * u)
            }
        }
    }

    pub fn is_convex(self) -> bool {
        matches!(self, EntropyTerm::XLnX)
    }
}

/// One affine piece `value = slope * w + intercept` valid on `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub lo: f64,
    pub hi: f64,
    pub slope: f64,
    pub intercept: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PwlApprox {
    pub target: EntropyTerm,
    pub epsilon: f64,
    /// `(w, f(w))`, strictly increasing in `w`, first and last at the domain ends.
    pub breakpoints: Vec<(f64, f64)>,
    /// Supremum of `|pwl - f|` over the domain, located per segment.
    pub max_abs_error: f64,
}

impl PwlApprox {
    pub fn num_segments(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        self.breakpoints.windows(2).map(|p| {
            let (x0, y0) = p[0];
            let (x1, y1) = p[1];
            let slope = (y1 - y0) / (x1 - x0);
            Segment {
                lo: x0,
                hi: x1,
                slope,
                intercept: y0 - slope * x0,
            }
        })
    }

    /// Interpolated value; clamps to the domain.
    pub fn eval(&self, w: f64) -> f64 {
        let bp = &self.breakpoints;
        let w = w.clamp(bp[0].0, bp[bp.len() - 1].0);
        let k = bp.partition_point(|p| p.0 <= w).clamp(1, bp.len() - 1);
        let (x0, y0) = bp[k - 1];
        let (x1, y1) = bp[k];
        y0 + (y1 - y0) * (w - x0) / (x1 - x0)
    }

    /// Largest `|pwl - f|` over `n` evenly spaced points of `[eps, 1 - eps]`.
    pub fn error_on_uniform_grid(&self, n: usize) -> f64 {
        let (lo, hi) = (self.epsilon, 1.0 - self.epsilon);
        (0..n)
            .map(|k| {
                let w = lo + (hi - lo) * k as f64 / (n - 1) as f64;
                (self.eval(w) - self.target.eval(w)).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Breakpoints equidistribute `sqrt|f''|`, which packs them toward whichever
/// domain end the function bends hardest.
pub fn build_pwl(target: EntropyTerm, epsilon: f64, num_segments: usize) -> Result<PwlApprox> {
    if num_segments < 2 {
        return Err(Error::invalid(
            "pwl",
            format!("need at least 2 segments, got {num_segments}"),
        ));
    }
    if !(epsilon > 0.0 && epsilon < 0.25) {
        return Err(Error::invalid(
            "pwl",
            format!("epsilon {epsilon} outside (0, 0.25)"),
        ));
    }
    let (lo, hi) = (epsilon, 1.0 - epsilon);
    let grid = refinement_grid(lo, hi, 4000);
    let density: Vec<f64> = grid
        .iter()
        .map(|&w| target.second_derivative(w).abs().sqrt())
        .collect();
    let mut cumulative = vec![0.0; grid.len()];
    for k in 1..grid.len() {
        cumulative[k] =
            cumulative[k - 1] + 0.5 * (density[k] + density[k - 1]) * (grid[k] - grid[k - 1]);
    }
    let total = cumulative[grid.len() - 1];

    let mut xs = Vec::with_capacity(num_segments + 1);
    xs.push(lo);
    for s in 1..num_segments {
        let level = total * s as f64 / num_segments as f64;
        let k = cumulative
            .partition_point(|c| *c < level)
            .clamp(1, grid.len() - 1);
        let frac = (level - cumulative[k - 1]) / (cumulative[k] - cumulative[k - 1]);
        xs.push(grid[k - 1] + frac * (grid[k] - grid[k - 1]));
    }
    xs.push(hi);
    xs.dedup_by(|a, b| *a <= *b);
    if xs.len() < 3 {
        return Err(Error::invalid("pwl", "degenerate breakpoint placement"));
    }

    let breakpoints: Vec<(f64, f64)> = xs.iter().map(|&w| (w, target.eval(w))).collect();
    let mut approx = PwlApprox {
        target,
        epsilon,
        breakpoints,
        max_abs_error: 0.0,
    };
    approx.max_abs_error = approx
        .segments()
        .map(|seg| segment_max_error(target, &seg))
        .fold(0.0, f64::max);
    Ok(approx)
}

/// Log-spaced toward both ends of `[lo, hi]`.
fn refinement_grid(lo: f64, hi: f64, per_side: usize) -> Vec<f64> {
    let mid = 0.5;
    let step = ((mid / lo).ln()) / per_side as f64;
    let mut grid: Vec<f64> = (0..=per_side)
        .map(|k| lo * (step * k as f64).exp())
        .collect();
    let tail = 1.0 - hi;
    let step_hi = ((mid / tail).ln()) / per_side as f64;
    grid.extend(
        (0..per_side)
            .rev()
            .map(|k| 1.0 - tail * (step_hi * k as f64).exp()),
    );
    grid[0] = lo;
    let last = grid.len() - 1;
    grid[last] = hi;
    grid
}

/// `f - secant` is single-signed and unimodal on a segment of a convex or concave
/// function, so a ternary search finds its extremum.
fn segment_max_error(target: EntropyTerm, seg: &Segment) -> f64 {
    let gap = |w: f64| (seg.slope * w + seg.intercept - target.eval(w)).abs();
    let (mut a, mut b) = (seg.lo, seg.hi);
    for _ in 0..200 {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        if gap(m1) < gap(m2) {
            a = m1;
        } else {
            b = m2;
        }
    }
    gap(0.5 * (a + b))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }
}

/// Bounds of the two factors of `w = u * v`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McCormickBox {
    pub u: Interval,
    pub v: Interval,
}

/// `coef_w * w + coef_u * u + coef_v * v <= rhs`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearInequality {
    pub coef_w: f64,
    pub coef_u: f64,
    pub coef_v: f64,
    pub rhs: f64,
}

impl LinearInequality {
    pub fn holds(&self, w: f64, u: f64, v: f64, tol: f64) -> bool {
        self.coef_w * w + self.coef_u * u + self.coef_v * v <= self.rhs + tol
    }
}

/// The four-inequality envelope of `w = u * v` over `bx`: two under-estimators
/// followed by two over-estimators.
pub fn mccormick_constraints(bx: &McCormickBox) -> Result<[LinearInequality; 4]> {
    let (ul, uh, vl, vh) = (bx.u.lo, bx.u.hi, bx.v.lo, bx.v.hi);
    if !(ul <= uh) || !(vl <= vh) {
        return Err(Error::invalid(
            "mccormick box",
            format!("u [{ul}, {uh}], v [{vl}, {vh}]"),
        ));
    }
    Ok([
        // w >= ul*v + u*vl - ul*vl
        LinearInequality {
            coef_w: -1.0,
            coef_u: vl,
            coef_v: ul,
            rhs: ul * vl,
        },
        // w >= uh*v + u*vh - uh*vh
        LinearInequality {
            coef_w: -1.0,
            coef_u: vh,
            coef_v: uh,
            rhs: uh * vh,
        },
        // w <= uh*v + u*vl - uh*vl
        LinearInequality {
            coef_w: 1.0,
            coef_u: -vl,
            coef_v: -uh,
            rhs: -uh * vl,
        },
        // w <= ul*v + u*vh - ul*vh
        LinearInequality {
            coef_w: 1.0,
            coef_u: -vh,
            coef_v: -ul,
            rhs: -ul * vh,
        },
    ])
}

/// Range of `w` the envelope admits at `(u, v)`.
pub fn mccormick_range(bx: &McCormickBox, u: f64, v: f64) -> Result<(f64, f64)> {
    let rows = mccormick_constraints(bx)?;
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for r in rows {
        let bound = (r.rhs - r.coef_u * u - r.coef_v * v) / r.coef_w;
        if r.coef_w < 0.0 {
            lo = lo.max(bound);
        } else {
            hi = hi.min(bound);
        }
    }
    Ok((lo, hi))
}
