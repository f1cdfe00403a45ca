use ifs_lab::circle::{arc_diameter, arc_gap, circ_dist, Arc, CirclePoint};
use ifs_lab::detectors::{minimality_verdict, sensitivity_estimate, Resolution, Witness};
use ifs_lab::generators::Generator;
use ifs_lab::semigroup::IfsSystem;
use proptest::prelude::*;

fn p(v: f64) -> CirclePoint {
    CirclePoint::new(v)
}

/// Brute-force distance over fine samples of both arcs.
fn sampled_gap(a: &Arc, b: &Arc) -> f64 {
    let (sa, sb) = (a.subnet(400), b.subnet(400));
    let mut best = f64::INFINITY;
    for &x in sa.iter().chain([a.start, a.end()].iter()) {
        for &y in sb.iter().chain([b.start, b.end()].iter()) {
            best = best.min(circ_dist(x, y));
        }
    }
    best
}

fn sampled_diameter(a: &Arc) -> f64 {
    let pts: Vec<CirclePoint> = a.subnet(300).into_iter().chain([a.start, a.end()]).collect();
    pts.iter().flat_map(|&x| pts.iter().map(move |&y| circ_dist(x, y))).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn metric_axioms(x in -3.0..3.0f64, y in -3.0..3.0f64, z in -3.0..3.0f64) {
        let (x, y, z) = (p(x), p(y), p(z));
        prop_assert_eq!(circ_dist(x, x), 0.0);
        prop_assert_eq!(circ_dist(x, y), circ_dist(y, x));
        prop_assert!(circ_dist(x, y) <= 0.5);
        prop_assert!(circ_dist(x, z) <= circ_dist(x, y) + circ_dist(y, z) + 1e-15);
    }

    #[test]
    fn diameter_matches_samples(s in 0.0..1.0f64, l in 0.0..1.0f64) {
        let a = Arc::new(s, l);
        prop_assert!((arc_diameter(&a) - sampled_diameter(&a)).abs() <= 5e-3);
    }

    #[test]
    fn gap_matches_samples(s in 0.0..1.0f64, l in 0.0..0.5f64, t in 0.0..1.0f64, m in 0.0..0.5f64) {
        let (a, b) = (Arc::new(s, l), Arc::new(t, m));
        prop_assert!((arc_gap(&a, &b) - sampled_gap(&a, &b)).abs() <= 5e-3);
        prop_assert!(arc_gap(&a, &b) <= sampled_gap(&a, &b) + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 6, failure_persistence: None, ..ProptestConfig::default() })]

    /// Isometries cannot separate points of a ball beyond its diameter.
    #[test]
    fn isometries_are_not_sensitive(alpha in 0.0..1.0f64, flip in any::<bool>()) {
        let mut gens = vec![Generator::rotation(alpha)];
        if flip {
            gens.push(Generator::flip());
        }
        let ifs = IfsSystem::new(gens).unwrap();
        let res = Resolution::default().with_net_size(20).with_depth(20);
        let (report, v) = sensitivity_estimate(&ifs, &res);
        prop_assert!(report.delta_hat <= 2.0 * res.r + 1e-12);
        prop_assert!(!v.holds);
    }
}

/// A rotation by `a / q` in lowest terms has orbits of exactly `q` points.
#[test]
fn rational_rotation_gaps() {
    for (a, q) in [(1, 3), (2, 5), (3, 8), (5, 12), (7, 60)] {
        let ifs = IfsSystem::new(vec![Generator::rotation(a as f64 / q as f64)]).unwrap();
        let v = minimality_verdict(&ifs, &Resolution::default());
        let Witness::OrbitDensity { per_point, worst, .. } = &v.witness else { unreachable!() };
        for d in per_point {
            assert_eq!(d.orbit_size, q);
            assert!((d.max_gap - 1.0 / q as f64).abs() <= 1e-12);
        }
        assert!((worst.gap.length - 1.0 / q as f64).abs() <= 1e-12);
        assert_eq!(v.holds, 1.0 / q as f64 <= 0.02);
    }
}

#[test]
fn arc_gap_of_separated_arcs() {
    let g = arc_gap(&Arc::new(0.0, 0.1), &Arc::new(0.2, 0.1));
    assert!((g - 0.1).abs() <= 1e-12);
    assert_eq!(arc_gap(&Arc::new(0.9, 0.2), &Arc::new(0.05, 0.1)), 0.0);
    // [0.9, 0.95] and [0.05, 0.1] are 0.1 apart across 0
    let (a, b) = (Arc::new(0.9, 0.05), Arc::new(0.05, 0.05));
    assert!((arc_gap(&a, &b) - 0.1).abs() <= 1e-12);
    assert!((sampled_gap(&a, &b) - 0.1).abs() <= 1e-12);
}
