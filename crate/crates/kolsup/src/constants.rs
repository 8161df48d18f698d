//! Derivation and validation of the run parameters.
//!
//! Everything downstream assumes these relations hold, so they are checked
//! once here and the result is immutable: `m > (2 + sqrt 2) n`, distinct
//! positive weights summing to one, the contraction slack `eps` strictly
//! inside its feasible interval, and the decay exponent `alpha` strictly
//! inside the window where the per-stage envelope closes.

use serde::{Deserialize, Serialize};
use thiserror::Error;

const DISTINCT_TOL: f64 = 1e-12;
const SUM_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum ParamError {
    #[error("dimension must satisfy n >= 2 (got {0})")]
    DimensionTooSmall(usize),
    #[error("term count must satisfy m > (2+sqrt(2))*n: m = {m} fails for n = {n} (threshold {threshold:.6})")]
    TermCountTooSmall { n: usize, m: usize, threshold: f64 },
    #[error("weights must be {0} positive, pairwise distinct reals summing to 1")]
    BadWeights(usize),
}

/// All numeric constants of a run, derived once from `(n, m, lambda)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Params {
    pub n: usize,
    pub m: usize,
    pub lambda: Vec<f64>,
    /// Smallest weight.
    pub lambda_min: f64,
    /// `1 / lambda_min`; drives the cube growth.
    pub big_c: f64,
    /// `1 / (m - n)`.
    pub eps0: f64,
    /// `n * eps0`.
    pub eps1: f64,
    /// Largest admissible contraction slack, `(1/eps1 - 1)/m`.
    pub eps_max: f64,
    /// Chosen slack: midpoint of `(eps0, eps_max)`.
    pub eps: f64,
    /// Largest admissible decay exponent.
    pub alpha_max: f64,
    /// Chosen exponent: 90% of `alpha_max`.
    pub alpha: f64,
}

/// The quantity `(2x - 1)/(x - 1)^2` at `x = m/n` from the slack-feasibility
/// argument; `< 1` exactly when `m > (2 + sqrt 2) n`.
pub fn contraction_quantity(n: usize, m: usize) -> f64 {
    let x = m as f64 / n as f64;
    (2.0 * x - 1.0) / ((x - 1.0) * (x - 1.0))
}

/// Whether `eps1 * (1 + m * eps0) < 1` holds for `(n, m)`, via the quantity
/// above. Agrees with `m > (2 + sqrt 2) n` for integer inputs.
pub fn check_lemma4(n: usize, m: usize) -> bool {
    if m <= n {
        return false;
    }
    contraction_quantity(n, m) < 1.0
}

impl Params {
    /// Derive and validate all constants.
    pub fn derive(n: usize, m: usize, lambda: Vec<f64>) -> Result<Params, ParamError> {
        if n < 2 {
            return Err(ParamError::DimensionTooSmall(n));
        }
        let threshold = (2.0 + std::f64::consts::SQRT_2) * n as f64;
        if (m as f64) <= threshold {
            return Err(ParamError::TermCountTooSmall { n, m, threshold });
        }
        if lambda.len() != n {
            return Err(ParamError::BadWeights(n));
        }
        if lambda.iter().any(|&l| !(l > 0.0) || !l.is_finite()) {
            return Err(ParamError::BadWeights(n));
        }
        let sum: f64 = lambda.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(ParamError::BadWeights(n));
        }
        for i in 0..n {
            for j in i + 1..n {
                if (lambda[i] - lambda[j]).abs() <= DISTINCT_TOL {
                    return Err(ParamError::BadWeights(n));
                }
            }
        }
        let lambda_min = lambda.iter().copied().fold(f64::INFINITY, f64::min);
        let big_c = 1.0 / lambda_min;
        let eps0 = 1.0 / (m - n) as f64;
        let eps1 = n as f64 * eps0;
        let eps_max = (1.0 / eps1 - 1.0) / m as f64;
        debug_assert!(eps_max > eps0, "guaranteed by the m > (2+sqrt 2)n gate");
        let eps = eps0 + 0.5 * (eps_max - eps0);
        // alpha feasibility: eps1^(1-2a) * (1 + m eps) < 1
        //   <=>  a < (1 - ln(1+m eps)/(-ln eps1)) / 2
        let alpha_max = 0.5 * (1.0 - (1.0 + m as f64 * eps).ln() / -eps1.ln());
        debug_assert!(alpha_max > 0.0);
        let alpha = 0.9 * alpha_max;
        Ok(Params {
            n,
            m,
            lambda,
            lambda_min,
            big_c,
            eps0,
            eps1,
            eps_max,
            eps,
            alpha_max,
            alpha,
        })
    }

    /// Derive with the default weights: `lambda_p` proportional to `p`,
    /// normalized (distinct, positive, sums to 1).
    pub fn derive_auto(n: usize, m: usize) -> Result<Params, ParamError> {
        let raw: Vec<f64> = (1..=n).map(|p| p as f64).collect();
        let sum: f64 = raw.iter().sum();
        Params::derive(n, m, raw.into_iter().map(|l| l / sum).collect())
    }

    /// Cube half-width `D_t`: `D_0 = 1`, `D_{t+1} = C (D_t + 10)`.
    pub fn d(&self, t: usize) -> f64 {
        let mut d = 1.0;
        for _ in 0..t {
            d = self.big_c * (d + 10.0);
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent root-finder for the largest alpha with
    /// `eps1^(1-2a) (1 + m eps) = 1`, by bisection on the monotone residual.
    fn alpha_max_oracle(eps1: f64, m: usize, eps: f64) -> f64 {
        let residual = |a: f64| eps1.powf(1.0 - 2.0 * a) * (1.0 + m as f64 * eps) - 1.0;
        let (mut lo, mut hi) = (0.0, 0.5);
        assert!(residual(lo) < 0.0 && residual(hi) > 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if residual(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn smallest_admissible_pair() {
        let p = Params::derive(2, 7, vec![0.4, 0.6]).unwrap();
        assert_eq!(p.eps0, 0.2);
        assert_eq!(p.eps1, 0.4);
        assert!((contraction_quantity(2, 7) - 0.96).abs() < 1e-15);
        assert!(p.eps1 * (1.0 + p.m as f64 * p.eps0) < 1.0);
    }

    #[test]
    fn cube_recurrence() {
        let p = Params::derive(2, 7, vec![0.4, 0.6]).unwrap();
        assert_eq!(p.lambda_min, 0.4);
        assert_eq!(p.big_c, 2.5);
        assert_eq!(p.d(0), 1.0);
        assert_eq!(p.d(1), 27.5);
        assert_eq!(p.d(2), 93.75);
        // strictly increasing, faster than C
        for t in 0..6 {
            assert!(p.d(t + 1) > p.big_c * p.d(t));
        }
    }

    #[test]
    fn eps_and_alpha_inside_feasible_windows() {
        let p = Params::derive(2, 7, vec![0.4, 0.6]).unwrap();
        assert!((p.eps_max - 1.5 / 7.0).abs() < 1e-15);
        assert!(p.eps0 < p.eps && p.eps < p.eps_max);
        assert!(p.eps1 * (1.0 + p.m as f64 * p.eps) < 1.0);
        assert!(0.0 < p.alpha && p.alpha < 0.5);
        assert!(p.eps1.powf(1.0 - 2.0 * p.alpha) * (1.0 + p.m as f64 * p.eps) < 1.0);
        // frozen against the bisection oracle
        let oracle = alpha_max_oracle(p.eps1, p.m, p.eps);
        assert!((p.alpha_max - oracle).abs() < 1e-12);
        assert!(p.alpha < oracle);
    }

    #[test]
    fn gate_agrees_with_threshold() {
        assert!(check_lemma4(2, 7));
        assert!(!check_lemma4(2, 6));
        assert!(check_lemma4(3, 11));
        assert!((contraction_quantity(3, 11) - 57.0 / 64.0).abs() < 1e-15);
        // agreement with the closed-form threshold over a sweep
        for n in 2..8usize {
            for m in (n + 1)..60usize {
                let expect = m as f64 > (2.0 + std::f64::consts::SQRT_2) * n as f64;
                assert_eq!(check_lemma4(n, m), expect, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Params::derive(2, 6, vec![0.4, 0.6]).is_err());
        assert!(Params::derive(1, 7, vec![1.0]).is_err());
        assert!(Params::derive(2, 7, vec![0.5, 0.5]).is_err()); // not distinct
        assert!(Params::derive(2, 7, vec![0.3, 0.6]).is_err()); // wrong sum
        assert!(Params::derive(2, 7, vec![-0.2, 1.2]).is_err()); // not positive
    }

    #[test]
    fn auto_weights_are_valid() {
        for n in 2..6 {
            let p = Params::derive_auto(n, 6 * n).unwrap();
            assert_eq!(p.lambda.len(), n);
            let sum: f64 = p.lambda.iter().sum();
            assert!((sum - 1.0).abs() <= 1e-12);
        }
    }
}
