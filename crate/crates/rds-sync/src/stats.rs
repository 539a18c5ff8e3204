//! Estimation utilities shared by the analysis and pullback modules.

use crate::circle::{circle_dist, CirclePoint};

/// A point estimate with a standard error and provenance tag.
#[derive(Clone, Debug, PartialEq)]
pub struct EstimateCi {
    pub value: f64,
    pub stderr: f64,
    pub n_samples: u64,
    /// Short label of the estimator that produced the value.
    pub method: String,
}

impl EstimateCi {
    /// Bernoulli proportion estimate: `p = successes / n`,
    /// `stderr = sqrt(p (1 - p) / n)`.
    pub fn bernoulli(successes: u64, n: u64, method: impl Into<String>) -> EstimateCi {
        assert!(n > 0, "empty sample");
        assert!(successes <= n);
        let p = successes as f64 / n as f64;
        EstimateCi {
            value: p,
            stderr: (p * (1.0 - p) / n as f64).sqrt(),
            n_samples: n,
            method: method.into(),
        }
    }

    /// Sample mean with the usual `s / sqrt(n)` standard error.
    pub fn mean(values: &[f64], method: impl Into<String>) -> EstimateCi {
        assert!(!values.is_empty(), "empty sample");
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let stderr = if values.len() == 1 {
            0.0
        } else {
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
            (var / n).sqrt()
        };
        EstimateCi {
            value: mean,
            stderr,
            n_samples: values.len() as u64,
            method: method.into(),
        }
    }

    /// Upper edge of the `k`-sigma interval.
    pub fn upper(&self, k: f64) -> f64 {
        self.value + k * self.stderr
    }

    /// Lower edge of the `k`-sigma interval.
    pub fn lower(&self, k: f64) -> f64 {
        self.value - k * self.stderr
    }
}

/// The five-number summary `(min, q1, median, q3, max)` by linear
/// interpolation on the order statistics.
pub fn five_number_summary(values: &[f64]) -> [f64; 5] {
    assert!(!values.is_empty());
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let q = |p: f64| -> f64 {
        let idx = p * (sorted.len() - 1) as f64;
        let lo = idx.floor() as usize;
        let hi = idx.ceil() as usize;
        let frac = idx - lo as f64;
        sorted[lo] * (1.0 - frac) + sorted[hi] * frac
    };
    [q(0.0), q(0.25), q(0.5), q(0.75), q(1.0)]
}

/// Median by linear interpolation.
pub fn median(values: &[f64]) -> f64 {
    five_number_summary(values)[2]
}

/// Kolmogorov-Smirnov distance between the empirical distribution of
/// `samples` (values in `[0, 1)`) and the uniform law on `[0, 1)`.
pub fn ks_distance_to_uniform(samples: &[f64]) -> f64 {
    assert!(!samples.is_empty());
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let upper = (i as f64 + 1.0) / n - x;
        let lower = x - i as f64 / n;
        d = d.max(upper).max(lower);
    }
    d
}

/// Weighted circular mean of atoms; `None` when the resultant vector
/// vanishes (perfectly balanced mass, e.g. two antipodal atoms).
pub fn circular_mean(points: &[(CirclePoint, f64)]) -> Option<CirclePoint> {
    use std::f64::consts::TAU;
    let (mut s, mut c) = (0.0, 0.0);
    for &(p, w) in points {
        let (ps, pc) = (TAU * p.pos()).sin_cos();
        s += w * ps;
        c += w * pc;
    }
    if s.hypot(c) < 1e-12 {
        return None;
    }
    Some(CirclePoint::new(s.atan2(c) / TAU))
}

/// Largest circle distance from `center` to any atom.
pub fn circular_spread(points: &[(CirclePoint, f64)], center: CirclePoint) -> f64 {
    points
        .iter()
        .map(|&(p, _)| circle_dist(p, center))
        .fold(0.0, f64::max)
}

/// Best rational approximation `p/q` of `x` with `q <= max_denominator` and
/// `|x - p/q| < tol`, via the continued-fraction convergents of `x`.
///
/// Returns `None` when no convergent with a small denominator comes close
/// enough — the caller treats `x` as irrational at this resolution.
pub fn rational_approximation(x: f64, max_denominator: u64, tol: f64) -> Option<(i64, u64)> {
    assert!(x.is_finite());
    assert!(max_denominator >= 1);
    let mut value = x;
    // Convergent recurrence: p_k = a_k p_{k-1} + p_{k-2}, same for q.
    let (mut p_prev, mut q_prev): (i64, u64) = (1, 0);
    let (mut p, mut q): (i64, u64) = (value.floor() as i64, 1);
    for _ in 0..64 {
        if (x - p as f64 / q as f64).abs() < tol {
            return Some((p, q));
        }
        let frac = value - value.floor();
        if frac.abs() < 1e-15 {
            break;
        }
        value = 1.0 / frac;
        let a = value.floor() as i64;
        let q_next = (a as u64).saturating_mul(q).saturating_add(q_prev);
        if q_next > max_denominator {
            break;
        }
        let p_next = a.saturating_mul(p).saturating_add(p_prev);
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
    }
    if q <= max_denominator && (x - p as f64 / q as f64).abs() < tol {
        return Some((p, q));
    }
    None
}

/// The additive-recurrence low-discrepancy sequence in the unit square
/// (two-dimensional Kronecker sequence with the plastic-number ratios).
/// Deterministic, well spread; used to pick representative point pairs.
pub fn low_discrepancy_pairs(count: usize) -> Vec<(CirclePoint, CirclePoint)> {
    // Plastic number rho ~ 1.3247...: alpha = (1/rho, 1/rho^2) gives the R2
    // sequence, the standard 2D additive recurrence.
    const A1: f64 = 0.754_877_666_246_693;
    const A2: f64 = 0.569_840_290_998_053;
    (1..=count)
        .map(|i| {
            let x = CirclePoint::new(0.5 + i as f64 * A1);
            let y = CirclePoint::new(0.25 + i as f64 * A2);
            (x, y)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::NoiseStream;

    #[test]
    fn bernoulli_estimates() {
        let e = EstimateCi::bernoulli(50, 200, "test");
        assert_eq!(e.value, 0.25);
        assert!((e.stderr - (0.25 * 0.75 / 200.0_f64).sqrt()).abs() < 1e-15);
        let sure = EstimateCi::bernoulli(200, 200, "test");
        assert_eq!(sure.value, 1.0);
        assert_eq!(sure.stderr, 0.0);
        let never = EstimateCi::bernoulli(0, 200, "test");
        assert_eq!(never.value, 0.0);
        assert_eq!(never.stderr, 0.0);
    }

    #[test]
    fn mean_estimate_of_constant_has_zero_stderr() {
        let e = EstimateCi::mean(&[0.7; 50], "test");
        assert!((e.value - 0.7).abs() < 1e-15);
        assert!(e.stderr < 1e-15);
    }

    #[test]
    fn mean_estimate_matches_hand_computation() {
        let e = EstimateCi::mean(&[1.0, 2.0, 3.0, 4.0], "test");
        assert_eq!(e.value, 2.5);
        // sample variance 5/3, stderr = sqrt(5/12)
        assert!((e.stderr - (5.0 / 12.0_f64).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn five_number_summary_on_known_data() {
        let s = five_number_summary(&[4.0, 1.0, 3.0, 2.0, 5.0]);
        assert_eq!(s, [1.0, 2.0, 3.0, 4.0, 5.0]);
    }

    #[test]
    fn ks_distance_of_perfect_grid_is_small() {
        let n = 10_000;
        let grid: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        assert!(ks_distance_to_uniform(&grid) < 1.0 / n as f64 + 1e-12);
    }

    #[test]
    fn ks_distance_of_point_mass_is_near_one() {
        let clump = vec![0.5; 1000];
        assert!(ks_distance_to_uniform(&clump) > 0.49);
    }

    #[test]
    fn ks_distance_of_uniform_draws_is_plausible() {
        let s = NoiseStream::new(7, 7);
        let draws: Vec<f64> = (1..=100_000).map(|k| s.draw(k)).collect();
        // For i.i.d. uniforms, KS ~ 1.36 / sqrt(n) at the 5% level; allow 2x.
        let d = ks_distance_to_uniform(&draws);
        assert!(d < 2.0 * 1.36 / (draws.len() as f64).sqrt(), "KS {d}");
    }

    #[test]
    fn circular_mean_handles_wraparound() {
        let pts = vec![(CirclePoint::new(0.95), 0.5), (CirclePoint::new(0.05), 0.5)];
        let m = circular_mean(&pts).unwrap();
        assert!(circle_dist(m, CirclePoint::new(0.0)) < 1e-12, "{m:?}");
    }

    #[test]
    fn circular_mean_of_balanced_mass_is_undefined() {
        let pts = vec![(CirclePoint::new(0.1), 0.5), (CirclePoint::new(0.6), 0.5)];
        assert!(circular_mean(&pts).is_none());
    }

    #[test]
    fn circular_spread_examples() {
        let pts = vec![(CirclePoint::new(0.1), 0.5), (CirclePoint::new(0.2), 0.5)];
        let c = circular_mean(&pts).unwrap();
        assert!((circular_spread(&pts, c) - 0.05).abs() < 1e-12);
    }

    #[test]
    fn rational_reconstruction_finds_small_fractions() {
        assert_eq!(
            rational_approximation(1.0 / 3.0, 10_000, 1e-12),
            Some((1, 3))
        );
        assert_eq!(rational_approximation(0.25, 10_000, 1e-12), Some((1, 4)));
        assert_eq!(rational_approximation(0.0, 10_000, 1e-12), Some((0, 1)));
        assert_eq!(
            rational_approximation(5.0 / 7.0, 10_000, 1e-12),
            Some((5, 7))
        );
    }

    #[test]
    fn rational_reconstruction_rejects_badly_approximable_numbers() {
        // Golden-ratio conjugate: the worst-approximable irrational; its best
        // q <= 10^4 approximation error is ~ 1/(sqrt 5 q^2) >> 1e-12.
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        assert_eq!(rational_approximation(phi, 10_000, 1e-12), None);
        assert_eq!(
            rational_approximation(std::f64::consts::SQRT_2 - 1.0, 10_000, 1e-12),
            None
        );
    }

    #[test]
    fn low_discrepancy_pairs_are_spread_and_distinct() {
        let pairs = low_discrepancy_pairs(20);
        assert_eq!(pairs.len(), 20);
        for (x, y) in &pairs {
            assert!(circle_dist(*x, *y) > 1e-3, "degenerate pair {x:?} {y:?}");
        }
        // Distinct pairs.
        for i in 0..pairs.len() {
            for j in (i + 1)..pairs.len() {
                assert!(circle_dist(pairs[i].0, pairs[j].0) > 1e-6);
            }
        }
    }
}
