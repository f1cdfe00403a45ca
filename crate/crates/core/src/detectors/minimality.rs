use serde::{Deserialize, Serialize};

use super::{test_points, Property, Resolution, Verdict, Witness};
use crate::circle::{is_eps_dense, largest_gap, Arc, CirclePoint};
use crate::error::Result;
use crate::exec;
use crate::semigroup::{Direction, IfsSystem, OrbitTree};

const SAMPLE_LIMIT: usize = 32;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointDensity {
    pub x: CirclePoint,
    pub orbit_size: usize,
    pub depth_reached: usize,
    pub max_gap: f64,
    pub dense: bool,
}

/// The test point whose orbit leaves the largest gap.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorstOrbit {
    pub x: CirclePoint,
    pub gap: Arc,
    pub orbit_size: usize,
    /// The whole orbit when it is small, sorted.
    pub orbit_sample: Vec<CirclePoint>,
}

/// Forward orbits of every net point and every generator fixed point are
/// checked for `eps`-density (largest gap at most `2 eps`).
pub fn minimality_verdict(ifs: &IfsSystem, res: &Resolution) -> Verdict {
    orbit_density(ifs, res, Property::Minimality, Direction::Forward)
}

/// Minimality of the inverse system, i.e. density of backward orbits.
pub fn strong_transitivity_verdict(ifs: &IfsSystem, res: &Resolution) -> Result<Verdict> {
    let inverse = ifs.inverse_system()?;
    Ok(orbit_density(&inverse, res, Property::StrongTransitivity, Direction::Backward))
}

fn orbit_density(ifs: &IfsSystem, res: &Resolution, property: Property, direction: Direction) -> Verdict {
    let eps = res.eps;
    let points = test_points(ifs, res.net_size);
    let trees = exec::map(&points, |&x| {
        OrbitTree::grow(ifs, x, res.depth, res.budget, |t| is_eps_dense(&t.values, eps))
    });
    let mut per_point = Vec::with_capacity(points.len());
    let mut worst: Option<(usize, Arc)> = None;
    for (i, tree) in trees.iter().enumerate() {
        let gap = largest_gap(&tree.values).unwrap_or_else(|| Arc::new(0.0, 0.0));
        let dense = gap.length <= 2.0 * eps;
        per_point.push(PointDensity {
            x: points[i],
            orbit_size: tree.values.len(),
            depth_reached: tree.depth_reached,
            max_gap: gap.length,
            dense,
        });
        if worst.as_ref().is_none_or(|(_, g)| gap.length > g.length) {
            worst = Some((i, gap));
        }
    }
    let (wi, gap) = worst.expect("test points are never empty");
    let tree = &trees[wi];
    let mut orbit_sample = Vec::new();
    if tree.values.len() <= SAMPLE_LIMIT {
        let mut vals = tree.values.clone();
        vals.sort_by(f64::total_cmp);
        orbit_sample = vals.into_iter().map(CirclePoint::new).collect();
    }
    let holds = per_point.iter().all(|p| p.dense);
    let worst = WorstOrbit { x: points[wi], gap, orbit_size: tree.values.len(), orbit_sample };
    Verdict::new(property, holds, *res, Witness::OrbitDensity { direction, per_point, worst })
}
