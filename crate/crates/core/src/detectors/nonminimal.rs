use serde::{Deserialize, Serialize};

use super::transitivity::cover_dedup;
use super::{minimality_verdict, test_arcs, Property, Resolution, SearchBounds, Verdict, Witness};
use crate::circle::{dedup_key, largest_gap, raw_dist, Arc, CirclePoint};
use crate::error::{IfsError, Result};
use crate::exec;
use crate::generators::FIXED_POINT_TOL;
use crate::semigroup::{IfsSystem, OrbitTree};
use crate::symbolic::Word;
use crate::track::{ArcTree, NetCover, Tracked};

const SAMPLE_LIMIT: usize = 32;

/// Words `T_s` and `T_j` for one test arc `U`: `T_s(U)` meets the ball
/// around `y`, and `T_j(T_s(U))` meets the ball around `z` while having
/// diameter above the candidate constant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DoubleCover {
    pub center: CirclePoint,
    pub outer: Word,
    pub inner: Word,
    pub diameter: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonminimalFailure {
    pub center: CirclePoint,
    pub reason: String,
    pub bounds: SearchBounds,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonminimalWitness {
    /// Point whose orbit is not `eps`-dense.
    pub y: CirclePoint,
    pub closure_size: usize,
    /// The whole approximate closure when it is small.
    pub closure_sample: Vec<CirclePoint>,
    /// Point furthest from the closure of the orbit of `y`.
    pub z: CirclePoint,
    pub distance: f64,
    pub delta_candidate: f64,
    /// Radius of the ball around `y` that the first cover must meet.
    pub y_radius: f64,
    pub per_arc: Vec<DoubleCover>,
    pub failure: Option<NonminimalFailure>,
}

fn approximate_closure(ifs: &IfsSystem, y: CirclePoint, res: &Resolution) -> Vec<f64> {
    let orbit = OrbitTree::grow(ifs, y, res.depth, res.budget, |_| false);
    let mut closure = orbit.values.clone();
    for (_, rec) in ifs.generator_fixed_points(FIXED_POINT_TOL) {
        let p = rec.location.value();
        if orbit.values.iter().any(|&v| raw_dist(v, p) <= res.eps) {
            closure.push(p);
        }
    }
    closure.sort_by(f64::total_cmp);
    closure.dedup_by_key(|p| dedup_key(*p));
    closure
}

fn double_cover(
    ifs: &IfsSystem,
    center: CirclePoint,
    res: &Resolution,
    w_ball: &Arc,
    v_ball: &Arc,
    delta: f64,
) -> std::result::Result<DoubleCover, NonminimalFailure> {
    let dedup = cover_dedup(res, res.eps);
    let mut cover = NetCover::new(res.net_size);
    let mut found: Option<(usize, Word, f64)> = None;
    let mut inner_examined = 0;
    let outer = ArcTree::search(ifs, Tracked::around(center.value(), res.r), res.depth, res.budget, dedup, |idx, state| {
        cover.mark(&state.arc(), res.eps);
        if found.is_none() && state.arc().intersects(w_ball) {
            let mut hit = None;
            let inner = ArcTree::search(ifs, *state, res.depth, res.budget, dedup, |j, image| {
                if image.diameter() > delta && image.arc().intersects(v_ball) {
                    hit = Some(j);
                }
                hit.is_some()
            });
            inner_examined += inner.stats.examined;
            if let Some(j) = hit {
                found = Some((idx, inner.word(j), inner.state(j).diameter()));
            }
        }
        found.is_some() && cover.is_complete()
    });
    match found {
        Some((s, inner, diameter)) if cover.is_complete() => {
            Ok(DoubleCover { center, outer: outer.word(s), inner, diameter })
        }
        _ => Err(NonminimalFailure {
            center,
            reason: if cover.is_complete() {
                "no image of U near y has an image reaching z with large diameter".into()
            } else {
                "the images of U do not cover the circle".into()
            },
            bounds: SearchBounds {
                depth: res.depth,
                budget: res.budget,
                examined: outer.stats.examined + inner_examined,
                depth_reached: outer.stats.depth_reached,
            },
        }),
    }
}

/// Builds the sensitivity constant of a non-minimal S-transitive system:
/// `y` has a non-dense orbit, `z` is the point furthest from its closure,
/// and the candidate is a quarter of that distance. The candidate is then
/// checked by a double cover search from every test arc.
pub fn sensitivity_witness_from_nonminimality(ifs: &IfsSystem, res: &Resolution) -> Result<(f64, Verdict)> {
    let minimal = minimality_verdict(ifs, res);
    if minimal.holds {
        return Err(IfsError::NotApplicable("every tested forward orbit is eps-dense".into()));
    }
    let Witness::OrbitDensity { worst, .. } = &minimal.witness else {
        unreachable!("minimality verdicts carry orbit densities")
    };
    let y = worst.x;
    let closure = approximate_closure(ifs, y, res);
    let gap = largest_gap(&closure).expect("closure contains y");
    let z = gap.midpoint();
    let distance = 0.5 * gap.length;
    let delta = 0.25 * distance;
    let y_radius = 2.0 * res.eps;
    let w_ball = Arc::centered(y.value(), y_radius);
    let v_ball = Arc::centered(z.value(), delta);

    let arcs = test_arcs(res);
    let outcomes = exec::map(&arcs, |(c, _)| double_cover(ifs, *c, res, &w_ball, &v_ball, delta));
    let mut per_arc = Vec::with_capacity(outcomes.len());
    let mut failure = None;
    for o in outcomes {
        match o {
            Ok(d) => per_arc.push(d),
            Err(f) => {
                if failure.is_none() {
                    failure = Some(f);
                }
            }
        }
    }
    let holds = failure.is_none();
    let closure_sample = if closure.len() <= SAMPLE_LIMIT {
        closure.iter().map(|&p| CirclePoint::new(p)).collect()
    } else {
        Vec::new()
    };
    let witness = NonminimalWitness {
        y,
        closure_size: closure.len(),
        closure_sample,
        z,
        distance,
        delta_candidate: delta,
        y_radius,
        per_arc,
        failure,
    };
    Ok((delta, Verdict::new(Property::NonminimalWitness, holds, *res, Witness::Nonminimal(witness))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::Generator;

    #[test]
    fn minimal_rotation_is_not_applicable() {
        let alpha = (5f64.sqrt() - 1.0) / 2.0;
        let ifs = IfsSystem::new(vec![Generator::rotation(alpha)]).unwrap();
        let err = sensitivity_witness_from_nonminimality(&ifs, &Resolution::default().with_depth(200)).unwrap_err();
        assert!(matches!(err, IfsError::NotApplicable(_)));
    }

    #[test]
    fn north_south_candidate_fails_verification() {
        let ifs = IfsSystem::new(vec![Generator::north_south(0.0, 2.0).unwrap()]).unwrap();
        let (delta, v) = sensitivity_witness_from_nonminimality(&ifs, &Resolution::default()).unwrap();
        assert!(delta > 0.0);
        assert!(!v.holds);
    }
}
