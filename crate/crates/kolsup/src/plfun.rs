//! Continuous piecewise-linear functions of one variable.
//!
//! Every function this crate constructs (the inner functions, each stage's
//! outer increment `h`, and the accumulated `g`) is stored as a [`Pl1d`]:
//! strictly increasing breakpoints, one value per breakpoint, affine
//! interpolation in between, and a configurable extension on each side.
//! Sup norms and oscillations over an interval are exact because the
//! extrema of an affine segment sit at its endpoints.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Breakpoints closer than this (relative) are merged when summing.
pub const MERGE_REL_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum PlError {
    #[error("breakpoints must be strictly increasing, finite, and non-empty")]
    BadBreakpoints,
    #[error("breakpoints and values must have equal length")]
    LengthMismatch,
    #[error("values must all be finite")]
    NonFiniteValue,
    #[error("invalid interval [{0}, {1}]")]
    InvalidInterval(f64, f64),
}

/// Behaviour outside the breakpoint span.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extension {
    /// Constant at the boundary value.
    Constant,
    /// Affine continuation of the boundary segment.
    Affine,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RawPl1d", into = "RawPl1d")]
pub struct Pl1d {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    left_ext: Extension,
    right_ext: Extension,
}

/// Serialization mirror with the wire field names.
#[derive(Serialize, Deserialize)]
struct RawPl1d {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    left_ext: Extension,
    right_ext: Extension,
}

impl TryFrom<RawPl1d> for Pl1d {
    type Error = PlError;
    fn try_from(raw: RawPl1d) -> Result<Self, PlError> {
        Pl1d::new(raw.breakpoints, raw.values, raw.left_ext, raw.right_ext)
    }
}

impl From<Pl1d> for RawPl1d {
    fn from(f: Pl1d) -> RawPl1d {
        RawPl1d {
            breakpoints: f.breakpoints,
            values: f.values,
            left_ext: f.left_ext,
            right_ext: f.right_ext,
        }
    }
}

impl Pl1d {
    pub fn new(
        breakpoints: Vec<f64>,
        values: Vec<f64>,
        left_ext: Extension,
        right_ext: Extension,
    ) -> Result<Self, PlError> {
        if breakpoints.is_empty() || breakpoints.iter().any(|x| !x.is_finite()) {
            return Err(PlError::BadBreakpoints);
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(PlError::BadBreakpoints);
        }
        if breakpoints.len() != values.len() {
            return Err(PlError::LengthMismatch);
        }
        if values.iter().any(|y| !y.is_finite()) {
            return Err(PlError::NonFiniteValue);
        }
        Ok(Pl1d {
            breakpoints,
            values,
            left_ext,
            right_ext,
        })
    }

    pub fn constant(c: f64) -> Self {
        Pl1d::new(vec![0.0], vec![c], Extension::Constant, Extension::Constant).unwrap()
    }

    pub fn zero() -> Self {
        Pl1d::constant(0.0)
    }

    /// `x -> |x|`, exact on all of R via affine extensions.
    pub fn abs_value() -> Self {
        Pl1d::new(
            vec![-1.0, 0.0, 1.0],
            vec![1.0, 0.0, 1.0],
            Extension::Affine,
            Extension::Affine,
        )
        .unwrap()
    }

    /// `x -> x`, exact on all of R.
    pub fn identity() -> Self {
        Pl1d::new(
            vec![-1.0, 1.0],
            vec![-1.0, 1.0],
            Extension::Affine,
            Extension::Affine,
        )
        .unwrap()
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn left_ext(&self) -> Extension {
        self.left_ext
    }

    pub fn right_ext(&self) -> Extension {
        self.right_ext
    }

    pub fn len(&self) -> usize {
        self.breakpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn slope(&self, i: usize) -> f64 {
        (self.values[i + 1] - self.values[i]) / (self.breakpoints[i + 1] - self.breakpoints[i])
    }

    fn left_slope(&self) -> f64 {
        match self.left_ext {
            Extension::Constant => 0.0,
            Extension::Affine if self.len() >= 2 => self.slope(0),
            Extension::Affine => 0.0,
        }
    }

    fn right_slope(&self) -> f64 {
        match self.right_ext {
            Extension::Constant => 0.0,
            Extension::Affine if self.len() >= 2 => self.slope(self.len() - 2),
            Extension::Affine => 0.0,
        }
    }

    /// Evaluate at `x`. Exact at breakpoints; affine in between and in the
    /// extensions. Total on R.
    pub fn eval(&self, x: f64) -> f64 {
        let xs = &self.breakpoints;
        let n = xs.len();
        // partition_point: number of breakpoints strictly below x
        let k = xs.partition_point(|&b| b < x);
        if k < n && xs[k] == x {
            return self.values[k];
        }
        if k == 0 {
            return self.values[0] + self.left_slope() * (x - xs[0]);
        }
        if k == n {
            return self.values[n - 1] + self.right_slope() * (x - xs[n - 1]);
        }
        let (x0, x1) = (xs[k - 1], xs[k]);
        let (y0, y1) = (self.values[k - 1], self.values[k]);
        y0 + (y1 - y0) * ((x - x0) / (x1 - x0))
    }

    fn candidate_points(&self, a: f64, b: f64) -> impl Iterator<Item = f64> + '_ {
        let lo = self.breakpoints.partition_point(|&x| x <= a);
        let hi = self.breakpoints.partition_point(|&x| x < b);
        std::iter::once(a)
            .chain(self.breakpoints[lo..hi].iter().copied())
            .chain(std::iter::once(b))
    }

    /// Exact supremum of `|f|` on `[a, b]`.
    pub fn sup_norm(&self, a: f64, b: f64) -> Result<f64, PlError> {
        if !(a <= b) {
            return Err(PlError::InvalidInterval(a, b));
        }
        Ok(self
            .candidate_points(a, b)
            .map(|x| self.eval(x).abs())
            .fold(0.0, f64::max))
    }

    /// Exact (min, max) of `f` on `[a, b]`.
    pub fn range_on(&self, a: f64, b: f64) -> Result<(f64, f64), PlError> {
        if !(a <= b) {
            return Err(PlError::InvalidInterval(a, b));
        }
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for x in self.candidate_points(a, b) {
            let y = self.eval(x);
            min = min.min(y);
            max = max.max(y);
        }
        Ok((min, max))
    }

    /// Exact oscillation (max - min) on `[a, b]`.
    pub fn oscillation(&self, a: f64, b: f64) -> Result<f64, PlError> {
        let (min, max) = self.range_on(a, b)?;
        Ok(max - min)
    }

    /// Largest |slope| over all segments and both extensions.
    pub fn max_abs_slope(&self) -> f64 {
        let mut m = self.left_slope().abs().max(self.right_slope().abs());
        for i in 0..self.len().saturating_sub(1) {
            m = m.max(self.slope(i).abs());
        }
        m
    }

    /// Largest |slope| over the parts of the graph meeting `[a, b]`.
    pub fn max_abs_slope_on(&self, a: f64, b: f64) -> f64 {
        let xs = &self.breakpoints;
        let n = xs.len();
        let mut m: f64 = 0.0;
        if a < xs[0] {
            m = m.max(self.left_slope().abs());
        }
        if b > xs[n - 1] {
            m = m.max(self.right_slope().abs());
        }
        for i in 0..n.saturating_sub(1) {
            if xs[i + 1] > a && xs[i] < b {
                m = m.max(self.slope(i).abs());
            }
        }
        m
    }

    fn merged_breakpoints(&self, other: &Pl1d) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (a, b) = (&self.breakpoints, &other.breakpoints);
        let (mut i, mut j) = (0, 0);
        let close = |x: f64, y: f64| (x - y).abs() <= MERGE_REL_TOL * x.abs().max(y.abs()).max(1.0);
        while i < a.len() || j < b.len() {
            let next = if i == a.len() {
                let v = b[j];
                j += 1;
                v
            } else if j == b.len() {
                let v = a[i];
                i += 1;
                v
            } else if a[i] <= b[j] {
                let v = a[i];
                i += 1;
                v
            } else {
                let v = b[j];
                j += 1;
                v
            };
            match out.last() {
                Some(&last) if close(last, next) => {}
                _ => out.push(next),
            }
        }
        out
    }

    /// Exact pointwise sum. The breakpoint set is the merged set (with
    /// near-duplicates within [`MERGE_REL_TOL`] collapsed).
    pub fn add(&self, other: &Pl1d) -> Pl1d {
        let xs = self.merged_breakpoints(other);
        let ys: Vec<f64> = xs.iter().map(|&x| self.eval(x) + other.eval(x)).collect();
        let pick = |a: Extension, b: Extension| {
            if xs.len() < 2 {
                Extension::Constant
            } else if a == Extension::Affine || b == Extension::Affine {
                Extension::Affine
            } else {
                Extension::Constant
            }
        };
        let left = pick(self.left_ext, other.left_ext);
        let right = pick(self.right_ext, other.right_ext);
        Pl1d::new(xs, ys, left, right).expect("merged sum is well-formed")
    }

    /// Exact pointwise scaling.
    pub fn scale(&self, c: f64) -> Pl1d {
        let values = self.values.iter().map(|y| y * c).collect();
        Pl1d::new(
            self.breakpoints.clone(),
            values,
            self.left_ext,
            self.right_ext,
        )
        .expect("scaled function is well-formed")
    }

    /// Drop interior knots of runs of exactly-zero values. The evaluated
    /// function is unchanged (interpolation through equal values is flat).
    pub fn prune_zero_runs(&self) -> Pl1d {
        let n = self.len();
        if n < 3 {
            return self.clone();
        }
        let mut keep = vec![true; n];
        for i in 1..n - 1 {
            if self.values[i] == 0.0 && self.values[i - 1] == 0.0 && self.values[i + 1] == 0.0 {
                keep[i] = false;
            }
        }
        let xs: Vec<f64> = self
            .breakpoints
            .iter()
            .zip(&keep)
            .filter(|(_, &k)| k)
            .map(|(&x, _)| x)
            .collect();
        let ys: Vec<f64> = self
            .values
            .iter()
            .zip(&keep)
            .filter(|(_, &k)| k)
            .map(|(&y, _)| y)
            .collect();
        Pl1d::new(xs, ys, self.left_ext, self.right_ext).unwrap()
    }
}

/// Reference one-variable function a plateau family tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Baseline {
    /// `|x|` (the setting with unconstrained continuous inner functions).
    Abs,
    /// `x` (the setting with increasing inner functions).
    Identity,
}

impl Baseline {
    pub fn pl1d(self) -> Pl1d {
        match self {
            Baseline::Abs => Pl1d::abs_value(),
            Baseline::Identity => Pl1d::identity(),
        }
    }

    pub fn eval(self, x: f64) -> f64 {
        match self {
            Baseline::Abs => x.abs(),
            Baseline::Identity => x,
        }
    }
}

/// One plateau: the function is constant at `value` on `[lo, hi]`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Plateau {
    pub lo: f64,
    pub hi: f64,
    pub value: f64,
}

#[derive(Debug, Error)]
pub enum PlateauError {
    #[error("plateau intervals must be disjoint and increasing")]
    BadIntervals,
    #[error("realized function is not constant on plateau {0}")]
    NotConstant(usize),
}

/// A continuous function constant on a family of disjoint closed intervals,
/// affine between them, following its previous shape (ultimately the
/// baseline) outside the plateau span.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlateauFunction {
    plateaus: Vec<Plateau>,
    baseline: Baseline,
    realized: Pl1d,
}

impl PlateauFunction {
    pub fn new(
        plateaus: Vec<Plateau>,
        baseline: Baseline,
        realized: Pl1d,
    ) -> Result<Self, PlateauError> {
        for w in plateaus.windows(2) {
            if !(w[0].hi < w[1].lo) {
                return Err(PlateauError::BadIntervals);
            }
        }
        for (i, p) in plateaus.iter().enumerate() {
            if !(p.lo <= p.hi) {
                return Err(PlateauError::BadIntervals);
            }
            let mid = 0.5 * (p.lo + p.hi);
            if realized.eval(p.lo) != p.value
                || realized.eval(p.hi) != p.value
                || realized.eval(mid) != p.value
            {
                return Err(PlateauError::NotConstant(i));
            }
        }
        Ok(PlateauFunction {
            plateaus,
            baseline,
            realized,
        })
    }

    /// The baseline itself, as a degenerate plateau function (no plateaus).
    pub fn from_baseline(baseline: Baseline) -> Self {
        PlateauFunction {
            plateaus: Vec::new(),
            baseline,
            realized: baseline.pl1d(),
        }
    }

    pub fn plateaus(&self) -> &[Plateau] {
        &self.plateaus
    }

    pub fn baseline(&self) -> Baseline {
        self.baseline
    }

    pub fn realized(&self) -> &Pl1d {
        &self.realized
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.realized.eval(x)
    }

    /// Exact global sup of |realized - baseline|.
    ///
    /// Outside its breakpoint span the realized function coincides with the
    /// baseline by construction (it either is the baseline or copies a
    /// predecessor that ends on it), so scanning the merged span plus a
    /// margin is exact; the extension slopes are checked to agree.
    pub fn deviation_from_baseline(&self) -> f64 {
        let diff = self.realized.add(&self.baseline.pl1d().scale(-1.0));
        let lo = diff.breakpoints()[0] - 1.0;
        let hi = diff.breakpoints()[diff.len() - 1] + 1.0;
        let edge = diff.eval(lo).abs().max(diff.eval(hi).abs());
        let interior = diff.sup_norm(lo, hi).expect("valid interval");
        debug_assert!(
            edge <= interior + 1e-15,
            "realized function does not rejoin the baseline"
        );
        interior
    }

    /// Membership in the admissible class: |f(x) - baseline(x)| < 1 on R.
    pub fn in_admissible_class(&self) -> bool {
        self.deviation_from_baseline() < 1.0
    }

    /// Plateau values strictly increase with the interval index, and the
    /// realized breakpoint values never decrease (the monotone variant's
    /// construction invariant; plateaus themselves are flat).
    pub fn values_monotone(&self) -> bool {
        let plateau_values_increase = self
            .plateaus
            .windows(2)
            .all(|w| w[0].value < w[1].value);
        let realized_nondecreasing = self
            .realized
            .values()
            .windows(2)
            .all(|w| w[0] <= w[1]);
        plateau_values_increase && realized_nondecreasing
    }
}
