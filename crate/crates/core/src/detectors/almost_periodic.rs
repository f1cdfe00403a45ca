use serde::{Deserialize, Serialize};

use super::{Property, Resolution, Verdict, Witness};
use crate::circle::{dedup_key, raw_dist, CirclePoint};
use crate::exec;
use crate::generators::FIXED_POINT_TOL;
use crate::semigroup::{IfsSystem, OrbitTree};

const CHUNK: usize = 16;

/// A closure point whose orbit misses part of the closure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApFailure {
    pub y: CirclePoint,
    pub orbit_size: usize,
    /// Closure point furthest from the orbit of `y`.
    pub missed: CirclePoint,
    pub distance: f64,
}

/// Distance from `v` to a sorted, nonempty set of circle values.
fn distance_to_sorted(sorted: &[f64], v: f64) -> f64 {
    let i = sorted.partition_point(|&s| s < v);
    let n = sorted.len();
    let after = sorted[i % n];
    let before = sorted[(i + n - 1) % n];
    raw_dist(after, v).min(raw_dist(before, v))
}

fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Greedy `eps`-thinning of a sorted set, closing up around the circle.
fn thin(sorted: &[f64], eps: f64) -> Vec<f64> {
    let mut kept: Vec<f64> = Vec::new();
    for &v in sorted {
        if kept.last().is_none_or(|&last| v - last > eps) {
            kept.push(v);
        }
    }
    if kept.len() > 1 && raw_dist(kept[0], kept[kept.len() - 1]) <= eps {
        kept.pop();
    }
    kept
}

/// Farthest point of `targets` from the orbit values, with its distance.
fn farthest(orbit: &[f64], targets: &[f64]) -> (f64, f64) {
    let orbit = sorted(orbit);
    targets
        .iter()
        .map(|&s| (s, distance_to_sorted(&orbit, s)))
        .fold((targets[0], -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc })
}

/// Approximates the orbit closure of `x` by the `eps`-thinned orbit plus the
/// generator fixed points within `eps` of it; `x` is almost periodic when
/// every point of that set has an orbit `eps`-dense in the set.
pub fn almost_periodic_verdict(ifs: &IfsSystem, x: CirclePoint, res: &Resolution) -> Verdict {
    let eps = res.eps;
    let orbit = OrbitTree::grow(ifs, x, res.depth, res.budget, |_| false);
    let orbit_sorted = sorted(&orbit.values);
    let mut limit_points: Vec<f64> = ifs
        .generator_fixed_points(FIXED_POINT_TOL)
        .into_iter()
        .map(|(_, rec)| rec.location.value())
        .filter(|&p| distance_to_sorted(&orbit_sorted, p) <= eps)
        .collect();
    limit_points.sort_by(f64::total_cmp);
    limit_points.dedup_by_key(|p| dedup_key(*p));
    let mut closure = thin(&orbit_sorted, eps);
    closure.extend(&limit_points);
    closure.sort_by(f64::total_cmp);
    closure.dedup_by_key(|p| dedup_key(*p));

    // chunks are scanned in order so the reported failure does not depend
    // on scheduling
    let mut failure = None;
    for chunk in closure.chunks(CHUNK) {
        let results = exec::map(chunk, |&y| {
            let covers = |t: &OrbitTree| farthest(&t.values, &closure).1 <= eps;
            let tree = OrbitTree::grow(ifs, CirclePoint::new(y), res.depth, res.budget, covers);
            let (missed, distance) = farthest(&tree.values, &closure);
            (distance > eps).then(|| ApFailure {
                y: CirclePoint::new(y),
                orbit_size: tree.values.len(),
                missed: CirclePoint::new(missed),
                distance,
            })
        });
        failure = results.into_iter().flatten().next();
        if failure.is_some() {
            break;
        }
    }
    let holds = failure.is_none();
    let to_points = |v: &[f64]| v.iter().map(|&p| CirclePoint::new(p)).collect::<Vec<_>>();
    let witness = Witness::AlmostPeriodic {
        x,
        orbit_size: orbit.values.len(),
        closure: to_points(&closure),
        limit_points: to_points(&limit_points),
        failure,
    };
    Verdict::new(Property::AlmostPeriodic, holds, *res, witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::Generator;

    #[test]
    fn thinning_respects_spacing() {
        let v: Vec<f64> = (0..1000).map(|i| i as f64 / 1000.0).collect();
        let t = thin(&v, 0.01);
        assert!(t.windows(2).all(|w| w[1] - w[0] > 0.01));
        assert!(t.iter().all(|&p| distance_to_sorted(&t, p) == 0.0));
        assert!(v.iter().all(|&p| distance_to_sorted(&t, p) <= 0.0111));
    }

    #[test]
    fn rational_rotation_orbit_is_periodic() {
        let ifs = IfsSystem::new(vec![Generator::rotation(0.2)]).unwrap();
        let v = almost_periodic_verdict(&ifs, CirclePoint::new(0.05), &Resolution::default());
        assert!(v.holds);
        let Witness::AlmostPeriodic { closure, .. } = v.witness else { panic!() };
        assert_eq!(closure.len(), 5);
    }

    #[test]
    fn north_south_orbit_is_not_almost_periodic() {
        let ifs = IfsSystem::new(vec![Generator::north_south(0.0, 2.0).unwrap()]).unwrap();
        let v = almost_periodic_verdict(&ifs, CirclePoint::new(0.2), &Resolution::default());
        assert!(!v.holds);
    }
}
