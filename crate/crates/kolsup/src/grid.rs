//! Interval families and boxes for one stage.
//!
//! Family `q` (1-based, `q = 1..=m`) tiles the line with closed intervals
//! `[q d + m j d, (q + m - 1) d + m j d]` of length `(m-1) d`, separated by
//! open gaps of length `d`; the gaps of different families never overlap, so
//! every point lies in at least `m - 1` families. A stage keeps the nonempty
//! intersections with `[-bound, bound]`, and the n-fold products of one
//! family's intervals are its boxes.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("grid step must satisfy 0 < delta < 1/(m*n), got {0}")]
    BadDelta(f64),
    #[error("bound must be positive, got {0}")]
    BadBound(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// The intervals of one family clipped to `[-bound, bound]`, in increasing
/// order.
#[derive(Debug, Clone)]
pub struct IntervalFamily {
    pub q: usize,
    pub m: usize,
    pub delta: f64,
    pub bound: f64,
    intervals: Vec<Interval>,
}

/// Build family `q` of an `m`-family grid with step `delta` on
/// `[-bound, bound]` in dimension `n` (the step cap `1/(m n)` depends on the
/// dimension the boxes will live in).
pub fn build_family(
    q: usize,
    m: usize,
    n: usize,
    delta: f64,
    bound: f64,
) -> Result<IntervalFamily, GridError> {
    if !(delta > 0.0) || !(delta < 1.0 / (m as f64 * n as f64)) {
        return Err(GridError::BadDelta(delta));
    }
    if !(bound > 0.0) {
        return Err(GridError::BadBound(bound));
    }
    debug_assert!((1..=m).contains(&q));
    let qf = q as f64;
    let mf = m as f64;
    // I_q(j) nonempty in [-bound, bound] roughly for j in [j_lo, j_hi];
    // widen by 2 and filter to stay safe against rounding.
    let j_lo = ((-bound / delta - qf - mf + 1.0) / mf).floor() as i64 - 2;
    let j_hi = ((bound / delta - qf) / mf).ceil() as i64 + 2;
    let mut intervals = Vec::new();
    for j in j_lo..=j_hi {
        let start = delta * (qf + mf * j as f64);
        let end = delta * (qf + mf - 1.0 + mf * j as f64);
        let lo = start.max(-bound);
        let hi = end.min(bound);
        if lo <= hi {
            intervals.push(Interval { lo, hi });
        }
    }
    Ok(IntervalFamily {
        q,
        m,
        delta,
        bound,
        intervals,
    })
}

impl IntervalFamily {
    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Index of the interval containing `x`, if any (intervals are closed,
    /// so shared endpoints count as covered).
    pub fn locate(&self, x: f64) -> Option<usize> {
        let k = self.intervals.partition_point(|iv| iv.lo <= x);
        if k == 0 {
            return None;
        }
        let idx = k - 1;
        self.intervals[idx].contains(x).then_some(idx)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.locate(x).is_some()
    }

    /// Debug dump: one `i,left,right` row per interval.
    pub fn csv_dump(&self) -> String {
        let mut out = String::from("i,left,right\n");
        for (i, iv) in self.intervals.iter().enumerate() {
            out.push_str(&format!("{},{:?},{:?}\n", i + 1, iv.lo, iv.hi));
        }
        out
    }
}

/// How many of the families contain `x`.
pub fn coverage_count(x: f64, families: &[IntervalFamily]) -> usize {
    families.iter().filter(|f| f.contains(x)).count()
}

/// Box of family `q` containing the point, as one interval index per
/// coordinate; absent if some coordinate falls in a gap.
pub fn locate_box(x: &[f64], family: &IntervalFamily) -> Option<Vec<usize>> {
    x.iter().map(|&c| family.locate(c)).collect()
}

/// How many families box the point.
pub fn boxed_family_count(x: &[f64], families: &[IntervalFamily]) -> usize {
    families
        .iter()
        .filter(|f| locate_box(x, f).is_some())
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn families(m: usize, n: usize, delta: f64, bound: f64) -> Vec<IntervalFamily> {
        (1..=m)
            .map(|q| build_family(q, m, n, delta, bound).unwrap())
            .collect()
    }

    #[test]
    fn family_enumeration_small_case() {
        // m=3, q=1, delta=0.1, bound=0.6 (dimension 2: cap 1/6 ok)
        let fam = build_family(1, 3, 2, 0.1, 0.6).unwrap();
        let expect = [(-0.5, -0.3), (-0.2, 0.0), (0.1, 0.3), (0.4, 0.6)];
        for (lo, hi) in expect {
            assert!(
                fam.intervals()
                    .iter()
                    .any(|iv| (iv.lo - lo).abs() < 1e-12 && (iv.hi - hi).abs() < 1e-12),
                "missing interval [{lo}, {hi}]"
            );
        }
        // all full intervals have length (m-1)*delta
        for iv in fam.intervals() {
            assert!(iv.len() <= 0.2 + 1e-12);
            if iv.lo > -0.6 + 1e-9 && iv.hi < 0.6 - 1e-9 {
                assert!((iv.len() - 0.2).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn consecutive_intervals_separated_by_delta() {
        for q in 1..=5 {
            let fam = build_family(q, 5, 2, 0.03, 4.0).unwrap();
            for w in fam.intervals().windows(2) {
                let gap = w[1].lo - w[0].hi;
                // boundary truncation can only shrink intervals, not gaps
                assert!((gap - 0.03).abs() < 1e-12, "gap {gap}");
            }
        }
    }

    #[test]
    fn rejects_bad_step() {
        assert!(build_family(1, 3, 2, 0.0, 1.0).is_err());
        assert!(build_family(1, 3, 2, 0.2, 1.0).is_err()); // 0.2 >= 1/6
        assert!(build_family(1, 3, 2, 0.01, -1.0).is_err());
    }

    #[test]
    fn point_in_one_gap_is_covered_by_m_minus_1() {
        let fams = families(3, 2, 0.1, 0.6);
        // x = 0.35 sits in family 1's gap (0.3, 0.4), inside [0.2,0.4] of
        // family 2 and [0.3,0.5] of family 3
        assert!(!fams[0].contains(0.35));
        assert!(fams[1].contains(0.35));
        assert!(fams[2].contains(0.35));
        assert_eq!(coverage_count(0.35, &fams), 2);
    }

    #[test]
    fn shared_endpoint_is_covered_by_all() {
        let fams = families(3, 2, 0.1, 0.6);
        // x = 0.1 is the left endpoint of family 1's [0.1, 0.3]; gaps are open
        let x = 0.1 * (1.0 + 3.0 * 0.0); // q*delta + m*j*delta with q=1, j=0
        assert_eq!(coverage_count(x, &fams), 3);
    }

    #[test]
    fn box_location_unique_and_counts() {
        let fams = families(3, 2, 0.1, 0.6);
        // x=(0.35, 0.15): family 1 misses (0.35 in gap), families 2, 3 box it
        let x = [0.35, 0.15];
        assert!(locate_box(&x, &fams[0]).is_none());
        assert!(locate_box(&x, &fams[1]).is_some());
        assert!(locate_box(&x, &fams[2]).is_some());
        assert_eq!(boxed_family_count(&x, &fams), 2); // = m-1 >= m-n
    }

    #[test]
    fn coverage_lower_bound_on_fine_scan() {
        // exhaustive over one period [0, m*delta)
        let m = 5;
        let delta = 0.02;
        let fams = families(m, 2, delta, 2.0);
        let steps = 5000;
        let mut min_count = usize::MAX;
        for i in 0..steps {
            let x = (i as f64) * (m as f64 * delta) / steps as f64;
            min_count = min_count.min(coverage_count(x, &fams));
        }
        assert_eq!(min_count, m - 1);
    }

    #[test]
    fn boxed_count_lower_bound_random() {
        use rand::prelude::*;
        let m = 7;
        let n = 2;
        let delta = 0.01;
        let fams = families(m, n, delta, 1.0);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let span = 1.0 - (m as f64) * delta;
        for _ in 0..2000 {
            let x: Vec<f64> = (0..n).map(|_| rng.random_range(-span..span)).collect();
            assert!(boxed_family_count(&x, &fams) >= m - n);
        }
    }

    #[test]
    fn csv_dump_has_row_per_interval() {
        let fam = build_family(2, 3, 2, 0.1, 0.6).unwrap();
        let dump = fam.csv_dump();
        assert_eq!(dump.lines().count(), fam.len() + 1);
        assert!(dump.starts_with("i,left,right"));
    }
}
