//! Cocycle iteration: one-point orbits, two-point motion, ensembles.
//!
//! Iterating a [`RandomMapSystem`] along a [`NoiseStream`] realises the
//! cocycle `phi(n, omega) = f_{alpha_n} o ... o f_{alpha_1}` with
//! `alpha_k = omega.draw(k)`. Because draws are counter-based, time shifts of
//! the stream reproduce exactly the same parameters, so the cocycle identity
//!
//! ```text
//!     phi(m + n, omega) = phi(n, shift(omega, m)) o phi(m, omega)
//! ```
//!
//! holds bit-for-bit, not merely up to rounding.

use crate::circle::{circle_dist, CirclePoint};
use crate::lift::Lift;
use crate::noise::NoiseStream;

/// A random dynamical system: one lift family, i.i.d. uniform translations.
#[derive(Clone, Debug)]
pub struct RandomMapSystem {
    pub lift: Lift,
    pub description: String,
}

impl RandomMapSystem {
    pub fn new(lift: Lift, description: impl Into<String>) -> RandomMapSystem {
        RandomMapSystem {
            lift,
            description: description.into(),
        }
    }

    /// System named after the lift itself.
    pub fn from_lift(lift: Lift) -> RandomMapSystem {
        let description = lift.describe();
        RandomMapSystem { lift, description }
    }

    /// One randomized step with translation parameter `alpha`.
    #[inline]
    pub fn step(&self, alpha: f64, x: CirclePoint) -> CirclePoint {
        self.lift.apply_randomized_unchecked(alpha, x)
    }

    /// `phi(n, omega) x`: the `n`-step image of `x` along the stream.
    pub fn iterate(&self, omega: &NoiseStream, x: CirclePoint, n: u64) -> CirclePoint {
        let mut y = x;
        for k in 1..=n {
            y = self.step(omega.draw(k), y);
        }
        y
    }

    /// The full orbit `x_0, x_1, ..., x_n` (length `n + 1`).
    pub fn iterate_path(&self, omega: &NoiseStream, x: CirclePoint, n: u64) -> Vec<CirclePoint> {
        let mut path = Vec::with_capacity(n as usize + 1);
        let mut y = x;
        path.push(y);
        for k in 1..=n {
            y = self.step(omega.draw(k), y);
            path.push(y);
        }
        path
    }

    /// Distances `d(x_k, y_k)` of the paired motion for `k = 0..=n`.
    ///
    /// Both points see the same translation parameters — the essence of the
    /// two-point motion: a shared environment, different initial conditions.
    pub fn two_point_orbit(
        &self,
        omega: &NoiseStream,
        x: CirclePoint,
        y: CirclePoint,
        n: u64,
    ) -> Vec<f64> {
        let mut distances = Vec::with_capacity(n as usize + 1);
        let (mut xt, mut yt) = (x, y);
        distances.push(circle_dist(xt, yt));
        for k in 1..=n {
            let alpha = omega.draw(k);
            xt = self.step(alpha, xt);
            yt = self.step(alpha, yt);
            distances.push(circle_dist(xt, yt));
        }
        distances
    }
}

/// A finite set of points advancing under one shared noise realisation.
#[derive(Clone, Debug)]
pub struct TrajectoryEnsemble {
    /// Current positions.
    pub points: Vec<CirclePoint>,
    /// Positions at time zero.
    pub origin: Vec<CirclePoint>,
    /// Steps taken so far; step `k` of the shared stream moves the ensemble
    /// from time `k - 1` to time `k`.
    pub time: u64,
    /// `(time, diameter)` samples recorded during evolution.
    pub diameter_history: Vec<(u64, f64)>,
}

impl TrajectoryEnsemble {
    /// New ensemble at time zero; records the initial diameter.
    pub fn new(points: Vec<CirclePoint>) -> TrajectoryEnsemble {
        assert!(!points.is_empty(), "ensemble must hold at least one point");
        let d0 = ensemble_diameter(&points);
        TrajectoryEnsemble {
            origin: points.clone(),
            points,
            time: 0,
            diameter_history: vec![(0, d0)],
        }
    }

    /// `count` points equally spaced on the closed arc `[center - r, center + r]`.
    ///
    /// This is the discrete stand-in for a metric ball used by the stability
    /// and containment probes.
    pub fn arc(center: CirclePoint, radius: f64, count: usize) -> TrajectoryEnsemble {
        assert!(count >= 2, "an arc needs at least its two endpoints");
        assert!(
            radius > 0.0 && radius <= 0.25,
            "arc radius must be in (0, 1/4]"
        );
        let points = (0..count)
            .map(|i| {
                let offset = -radius + 2.0 * radius * i as f64 / (count - 1) as f64;
                center.rotate(offset)
            })
            .collect();
        TrajectoryEnsemble::new(points)
    }

    /// `count` equally spaced points (a discretisation of Lebesgue measure).
    pub fn equispaced(count: usize) -> TrajectoryEnsemble {
        assert!(count >= 1);
        let points = (0..count)
            .map(|i| CirclePoint::new(i as f64 / count as f64))
            .collect();
        TrajectoryEnsemble::new(points)
    }

    /// Current diameter (largest pairwise circle distance, with the sorted-gap
    /// shortcut for large ensembles).
    pub fn diameter(&self) -> f64 {
        ensemble_diameter(&self.points)
    }

    /// Advances all points `n` steps under the shared stream, recording the
    /// diameter every `record_every` steps and at the final step.
    ///
    /// Draw `time + k` moves the ensemble from time `time + k - 1` to
    /// `time + k`, so splitting one long evolution into several calls with the
    /// same stream reproduces identical trajectories.
    pub fn evolve(
        &mut self,
        system: &RandomMapSystem,
        omega: &NoiseStream,
        n: u64,
        record_every: u64,
    ) {
        assert!(record_every >= 1, "record_every must be >= 1");
        for step in 1..=n {
            let alpha = omega.draw(self.time + step);
            for p in &mut self.points {
                *p = system.step(alpha, *p);
            }
            if step % record_every == 0 || step == n {
                self.diameter_history
                    .push((self.time + step, ensemble_diameter(&self.points)));
            }
        }
        self.time += n;
    }
}

/// Largest pairwise circle distance among `points`.
///
/// Up to 64 points: exact pairwise maximum. Beyond that: the circular range
/// `1 - (largest gap between cyclically sorted positions)`, capped at the
/// circle diameter 1/2. The two notions agree whenever the ensemble fits in
/// a half-circle — in particular throughout any contraction regime — and the
/// cap keeps the value inside the metric's range in all cases.
pub fn ensemble_diameter(points: &[CirclePoint]) -> f64 {
    assert!(!points.is_empty());
    if points.len() == 1 {
        return 0.0;
    }
    if points.len() <= 64 {
        let mut best: f64 = 0.0;
        for (i, &a) in points.iter().enumerate() {
            for &b in &points[i + 1..] {
                best = best.max(circle_dist(a, b));
            }
        }
        return best;
    }
    let mut pos: Vec<f64> = points.iter().map(|p| p.pos()).collect();
    pos.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut max_gap = 1.0 - pos[pos.len() - 1] + pos[0]; // wraparound gap
    for w in pos.windows(2) {
        max_gap = max_gap.max(w[1] - w[0]);
    }
    (1.0 - max_gap).clamp(0.0, 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sine_system(a: f64) -> RandomMapSystem {
        RandomMapSystem::from_lift(Lift::sine(a))
    }

    #[test]
    fn zero_steps_is_identity() {
        let sys = sine_system(0.1);
        let omega = NoiseStream::new(4, 2);
        let x = CirclePoint::new(0.37);
        assert_eq!(sys.iterate(&omega, x, 0), x);
        assert_eq!(sys.iterate_path(&omega, x, 0), vec![x]);
    }

    #[test]
    fn rotation_quarter_turns_return_home() {
        // c = 1/4 is exactly representable, so four steps compose to the
        // identity with no rounding at all.
        let sys = RandomMapSystem::from_lift(Lift::rotation(0.25));
        let omega = NoiseStream::new(1, 1);
        let x = CirclePoint::new(0.0);
        let y = sys.iterate(&omega, x, 4);
        assert_eq!(y.pos(), 0.0);
    }

    #[test]
    fn cocycle_identity_bit_for_bit() {
        let sys = RandomMapSystem::from_lift(
            Lift::fourier(vec![
                crate::lift::FourierTerm::new(1, 0.09, 0.01),
                crate::lift::FourierTerm::new(2, -0.02, 0.03),
            ])
            .unwrap(),
        );
        let picker = NoiseStream::new(31337, 0);
        for trial in 0..1000u64 {
            let omega = NoiseStream::new(77, trial);
            let x = CirclePoint::new(picker.draw(3 * trial + 1));
            let m = (picker.draw(3 * trial + 2) * 40.0) as u64;
            let n = (picker.draw(3 * trial + 3) * 40.0) as u64;
            let whole = sys.iterate(&omega, x, m + n);
            let first = sys.iterate(&omega, x, m);
            let rest = sys.iterate(&omega.shift(m), first, n);
            assert_eq!(whole.pos(), rest.pos(), "trial {trial}: m={m} n={n}");
        }
    }

    #[test]
    fn iterate_path_endpoints_match_iterate() {
        let sys = sine_system(0.1);
        let omega = NoiseStream::new(5, 5);
        let x = CirclePoint::new(0.123);
        let path = sys.iterate_path(&omega, x, 50);
        assert_eq!(path.len(), 51);
        assert_eq!(path[0], x);
        assert_eq!(path[50], sys.iterate(&omega, x, 50));
        for (k, &p) in path.iter().enumerate() {
            assert_eq!(p, sys.iterate(&omega, x, k as u64), "prefix {k}");
        }
    }

    #[test]
    fn two_point_diagonal_stays_zero() {
        let sys = sine_system(0.1);
        let omega = NoiseStream::new(8, 0);
        let x = CirclePoint::new(0.6180339887);
        let d = sys.two_point_orbit(&omega, x, x, 200);
        assert!(d.iter().all(|&v| v == 0.0), "diagonal must be exact");
    }

    #[test]
    fn rotation_two_point_distance_is_conserved_exactly_on_dyadics() {
        // Dyadic initial points and a dyadic rotation angle keep every
        // intermediate quantity exactly representable.
        let sys = RandomMapSystem::from_lift(Lift::rotation(0.25));
        let omega = NoiseStream::new(12, 9);
        let d = sys.two_point_orbit(&omega, CirclePoint::new(0.0), CirclePoint::new(0.375), 100);
        assert!(d.iter().all(|&v| v == 0.375));
    }

    #[test]
    fn rotation_pairwise_distances_conserved_to_tolerance() {
        let sys = RandomMapSystem::from_lift(Lift::rotation(0.217));
        let omega = NoiseStream::new(3, 3);
        let d = sys.two_point_orbit(
            &omega,
            CirclePoint::new(0.111),
            CirclePoint::new(0.723),
            10_000,
        );
        let d0 = d[0];
        for (k, &v) in d.iter().enumerate() {
            assert!((v - d0).abs() < 1e-12, "step {k}: {v} vs {d0}");
        }
    }

    #[test]
    fn ensemble_diameter_small_vs_gap_method_agree() {
        // 200 points inside an arc of length 0.4: the gap method must equal
        // the brute-force pairwise maximum exactly.
        let picker = NoiseStream::new(55, 1);
        let points: Vec<CirclePoint> = (1..=200)
            .map(|k| CirclePoint::new(0.3 + 0.4 * picker.draw(k)))
            .collect();
        let gap = ensemble_diameter(&points);
        let mut brute: f64 = 0.0;
        for (i, &a) in points.iter().enumerate() {
            for &b in &points[i + 1..] {
                brute = brute.max(circle_dist(a, b));
            }
        }
        assert!((gap - brute).abs() < 1e-15, "{gap} vs {brute}");
    }

    #[test]
    fn ensemble_diameter_is_capped_at_half() {
        let points: Vec<CirclePoint> = (0..1000)
            .map(|i| CirclePoint::new(i as f64 / 1000.0))
            .collect();
        assert_eq!(ensemble_diameter(&points), 0.5);
        assert_eq!(ensemble_diameter(&points[..1]), 0.0);
    }

    #[test]
    fn contracting_family_collapses_an_ensemble() {
        let sys = sine_system(0.1);
        let omega = NoiseStream::new(1, 0);
        let mut ens = TrajectoryEnsemble::equispaced(32);
        ens.evolve(&sys, &omega, 500, 100);
        assert!(ens.diameter() < 1e-6, "diameter {}", ens.diameter());
        assert_eq!(ens.time, 500);
        // history: t=0 plus records at 100, 200, 300, 400, 500.
        assert_eq!(ens.diameter_history.len(), 6);
        assert_eq!(ens.diameter_history[0].0, 0);
        assert_eq!(ens.diameter_history[5].0, 500);
        let diam_seq: Vec<f64> = ens.diameter_history.iter().map(|&(_, d)| d).collect();
        assert!(diam_seq[5] < diam_seq[0]);
    }

    #[test]
    fn evolution_in_chunks_matches_single_run() {
        let sys = sine_system(0.08);
        let omega = NoiseStream::new(21, 4);
        let mut whole = TrajectoryEnsemble::equispaced(16);
        whole.evolve(&sys, &omega, 300, 50);
        let mut chunked = TrajectoryEnsemble::equispaced(16);
        chunked.evolve(&sys, &omega, 120, 50);
        chunked.evolve(&sys, &omega, 180, 50);
        for (a, b) in whole.points.iter().zip(&chunked.points) {
            assert_eq!(a.pos(), b.pos());
        }
    }

    #[test]
    fn rotation_isometry_preserves_ensemble_distances() {
        let sys = RandomMapSystem::from_lift(Lift::rotation(0.31));
        let omega = NoiseStream::new(6, 6);
        let mut ens = TrajectoryEnsemble::equispaced(20);
        let before: Vec<CirclePoint> = ens.points.clone();
        ens.evolve(&sys, &omega, 1000, 1000);
        for i in 0..before.len() {
            for j in (i + 1)..before.len() {
                let d0 = circle_dist(before[i], before[j]);
                let d1 = circle_dist(ens.points[i], ens.points[j]);
                assert!((d0 - d1).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn arc_ensemble_spans_requested_ball() {
        let ens = TrajectoryEnsemble::arc(CirclePoint::new(0.5), 0.1, 17);
        assert_eq!(ens.points.len(), 17);
        assert!((ens.points[0].pos() - 0.4).abs() < 1e-15);
        assert!((ens.points[16].pos() - 0.6).abs() < 1e-15);
        assert!((ens.diameter() - 0.2).abs() < 1e-15);
        // Wrap across zero.
        let ens = TrajectoryEnsemble::arc(CirclePoint::new(0.0), 0.05, 17);
        assert!((ens.points[0].pos() - 0.95).abs() < 1e-15);
        assert!((ens.diameter() - 0.1).abs() < 1e-15);
    }
}
