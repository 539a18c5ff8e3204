//! Property-based invariants: the parsers are total, rendering a config is
//! lossless, the noise shift is a semigroup action, and the geometry
//! primitives respect the circle.

use proptest::prelude::*;
use rds_sync::config::{
    parse_config, parse_harmonic_list, parse_lift_expr, ConfigError, ExperimentConfig, LiftSpec,
};
use rds_sync::pullback::{cluster_atoms, EmpiricalMeasure};
use rds_sync::{circle_dist, CirclePoint, FourierTerm, Lift, NoiseStream, RandomMapSystem};

fn lift_strategy() -> impl Strategy<Value = Lift> {
    let fourier = (
        proptest::collection::vec(-0.2f64..0.2, 4),
        proptest::collection::vec(-0.2f64..0.2, 4),
        1u32..16,
    )
        .prop_filter_map("degenerate fourier lift", |(sins, coss, mask)| {
            let terms: Vec<FourierTerm> = (0..4)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| FourierTerm::new(i as u32 + 1, sins[i as usize], coss[i as usize]))
                .collect();
            Lift::fourier(terms).ok()
        });
    prop_oneof![
        (-0.5f64..0.5).prop_map(Lift::sine),
        (-2.0f64..2.0).prop_map(Lift::rotation),
        fourier,
    ]
}

/// Lines assembled from config-shaped fragments; reaches much deeper into
/// the parser than fully random strings do.
fn config_soup() -> impl Strategy<Value = String> {
    let token = prop_oneof![
        Just("lift".to_string()),
        Just("=".to_string()),
        Just("sine(a=0.1)".to_string()),
        Just("rotation(c=)".to_string()),
        Just("fourier".to_string()),
        Just("harmonics".to_string()),
        Just("[(1, 0.1, 0)]".to_string()),
        Just("[(,)]".to_string()),
        Just("#".to_string()),
        Just("seed".to_string()),
        Just("deltas".to_string()),
        Just("1e309".to_string()),
        Just("nan".to_string()),
        Just("-3".to_string()),
        Just("(".to_string()),
        Just(")".to_string()),
        Just(",".to_string()),
        "[a-z_]{1,12}",
        "-?[0-9]{1,18}(\\.[0-9]{1,8})?",
    ];
    let line = proptest::collection::vec(token, 0..6).prop_map(|ts| ts.join(" "));
    proptest::collection::vec(line, 0..8).prop_map(|ls| ls.join("\n"))
}

fn config_strategy() -> impl Strategy<Value = ExperimentConfig> {
    let lift = prop_oneof![
        (-0.5f64..0.5).prop_map(|a| LiftSpec::Sine { a }),
        (-2.0f64..2.0).prop_map(|c| LiftSpec::Rotation { c }),
        proptest::collection::vec((1u32..=9, -0.3f64..0.3, -0.3f64..0.3), 1..=3)
            .prop_filter("distinct harmonic indices", |hs| {
                let mut js: Vec<u32> = hs.iter().map(|h| h.0).collect();
                js.sort_unstable();
                js.dedup();
                js.len() == hs.len()
            })
            .prop_map(|harmonics| LiftSpec::Fourier { harmonics }),
    ];
    (
        lift,
        any::<u64>(),
        1u64..5000,
        1u64..300,
        1e-12f64..1e-3,
        0.01f64..0.5,
        proptest::collection::vec(0.004f64..1.0, 1..4),
        proptest::collection::vec(0.001f64..0.25, 1..4),
        0.0f64..1.0,
    )
        .prop_flat_map(
            |(lift, seed, horizon, n_samples, eps_sync, epsilon, dfrac, radii, x0)| {
                (
                    Just((
                        lift, seed, horizon, n_samples, eps_sync, epsilon, dfrac, radii, x0,
                    )),
                    1..=horizon,
                )
            },
        )
        .prop_map(
            |((lift, seed, horizon, n_samples, eps_sync, epsilon, dfrac, radii, x0), window)| {
                let deltas = dfrac.iter().map(|f| (f * epsilon).min(0.25)).collect();
                ExperimentConfig {
                    lift,
                    seed,
                    horizon,
                    n_samples,
                    eps_sync,
                    epsilon,
                    deltas,
                    radii,
                    x0,
                    window,
                    ..ExperimentConfig::default()
                }
            },
        )
}

proptest! {
    #[test]
    fn canonical_position_in_unit_interval(
        x in any::<f64>().prop_filter("finite", |v| v.is_finite())
    ) {
        let p = CirclePoint::new(x).pos();
        prop_assert!((0.0..1.0).contains(&p), "pos {p} from {x}");
    }

    #[test]
    fn circle_dist_is_a_bounded_metric(
        a in 0.0f64..1.0, b in 0.0f64..1.0, c in 0.0f64..1.0
    ) {
        let (x, y, z) = (CirclePoint::new(a), CirclePoint::new(b), CirclePoint::new(c));
        let d = circle_dist(x, y);
        prop_assert!((0.0..=0.5).contains(&d));
        prop_assert_eq!(d, circle_dist(y, x));
        prop_assert_eq!(circle_dist(x, x), 0.0);
        prop_assert!(circle_dist(x, z) <= d + circle_dist(y, z) + 1e-15);
    }

    #[test]
    fn rotations_are_isometries(
        a in 0.0f64..1.0, b in 0.0f64..1.0, c in -4.0f64..4.0
    ) {
        let (x, y) = (CirclePoint::new(a), CirclePoint::new(b));
        let before = circle_dist(x, y);
        let after = circle_dist(x.rotate(c), y.rotate(c));
        prop_assert!((before - after).abs() < 1e-12);
    }

    #[test]
    fn randomized_step_stays_on_circle(
        lift in lift_strategy(), x in 0.0f64..1.0, alpha in 0.0f64..1.0
    ) {
        let sys = RandomMapSystem::from_lift(lift);
        let y = sys.step(alpha, CirclePoint::new(x)).pos();
        prop_assert!((0.0..1.0).contains(&y));
    }

    #[test]
    fn noise_shift_is_a_semigroup_action(
        seed in any::<u64>(),
        id in any::<u64>(),
        a in 0u64..1_000_000,
        b in 0u64..1_000_000,
        k in 1u64..1000,
    ) {
        let s = NoiseStream::new(seed, id);
        let lhs = s.shift(a).shift(b).draw(k);
        let rhs = s.shift(a + b).draw(k);
        prop_assert_eq!(lhs.to_bits(), rhs.to_bits());
        prop_assert!((0.0..1.0).contains(&lhs));
    }

    #[test]
    fn cocycle_identity_holds_bit_for_bit(
        lift in lift_strategy(),
        seed in any::<u64>(),
        x in 0.0f64..1.0,
        m in 0u64..40,
        n in 0u64..40,
    ) {
        let sys = RandomMapSystem::from_lift(lift);
        let omega = NoiseStream::new(seed, 7);
        let x0 = CirclePoint::new(x);
        let direct = sys.iterate(&omega, x0, m + n);
        let staged = sys.iterate(&omega.shift(m), sys.iterate(&omega, x0, m), n);
        prop_assert_eq!(direct.pos().to_bits(), staged.pos().to_bits());
    }

    #[test]
    fn cluster_masses_are_conserved(
        positions in proptest::collection::vec(0.0f64..1.0, 1..200),
        merge_radius in 0.001f64..0.49,
    ) {
        let n = positions.len();
        let atoms = positions
            .iter()
            .map(|&p| (CirclePoint::new(p), 1.0 / n as f64))
            .collect();
        let measure = EmpiricalMeasure { atoms, resolution: n };
        let report = cluster_atoms(&measure, merge_radius);
        let total: f64 = report.clusters.iter().map(|c| c.mass).sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
        prop_assert!(report.n_clusters() >= 1);
        for cl in &report.clusters {
            prop_assert!(cl.mass > 0.0);
            prop_assert!((0.0..=0.5).contains(&cl.spread));
            prop_assert!((0.0..1.0).contains(&cl.center.pos()));
        }
    }

    #[test]
    fn parser_is_total_on_arbitrary_strings(text in any::<String>()) {
        let _ = parse_config(&text);
        let _ = parse_lift_expr(&text);
        let _ = parse_harmonic_list(&text);
    }

    #[test]
    fn parser_is_total_on_token_soup(text in config_soup()) {
        let _ = parse_config(&text);
    }

    #[test]
    fn parse_errors_point_at_a_real_line(text in config_soup()) {
        if let Err(
            ConfigError::Parse { line, .. } | ConfigError::UnknownKey { line, .. },
        ) = parse_config(&text)
        {
            prop_assert!(line >= 1);
            prop_assert!(line <= text.lines().count().max(1));
        }
    }

    #[test]
    fn config_round_trip_is_lossless(cfg in config_strategy()) {
        let text = cfg.to_config_string();
        let parsed = parse_config(&text);
        prop_assert_eq!(parsed, Ok(cfg));
    }
}
