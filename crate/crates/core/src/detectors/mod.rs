//! Resolution-parameterized deciders for the dynamical properties of an IFS.
//!
//! Universally quantified definitions are discretized over the uniform net
//! of `net_size` points and radius-`r` test arcs centered on it. Searches
//! over the semigroup run breadth-first over words, bounded by `depth` and
//! `budget`. A positive verdict carries a witness that replays; a negative
//! verdict only means nothing was found within the stated bounds.

mod almost_periodic;
mod cofinite;
mod minimality;
mod nonminimal;
mod periodic;
mod sensitivity;
mod transitivity;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circle::{dedup_key, net, Arc, CirclePoint};
use crate::error::{IfsError, Result};
use crate::generators::{FixedPointRecord, FIXED_POINT_TOL};
use crate::semigroup::{Direction, IfsSystem, PeriodicPoints};
use crate::smooth::ExpandingCover;

pub use almost_periodic::{almost_periodic_verdict, ApFailure};
pub use cofinite::{cofinite_sensitivity_verdict, separation_times, CofiniteArc, CofiniteWitness, ExtensionRule};
pub use minimality::{minimality_verdict, strong_transitivity_verdict, PointDensity, WorstOrbit};
pub use nonminimal::{sensitivity_witness_from_nonminimality, DoubleCover, NonminimalFailure, NonminimalWitness};
pub use periodic::{periodic_points_verdict, repelling_fixed_point_verdict};
pub use sensitivity::{
    sensitivity_estimate, LadderStep, PointSeparation, SearchStrategy, SensitivityReport,
};
pub use transitivity::{replay_arc_cover, s_transitivity_verdict, topological_transitivity_verdict, ArcCover, CoverFailure};

/// Discretization of the quantifiers in the property definitions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Resolution {
    /// Density and covering tolerance.
    pub eps: f64,
    /// Radius of test arcs; also the smallest sensitivity radius.
    pub r: f64,
    /// Maximum word length.
    pub depth: usize,
    /// Number of net points.
    pub net_size: usize,
    /// Maximum number of words (or orbit points) examined per search.
    pub budget: usize,
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution { eps: 0.01, r: 0.01, depth: 60, net_size: 100, budget: 100_000 }
    }
}

impl Resolution {
    pub fn validate(&self) -> Result<()> {
        let unit = |v: f64| v > 0.0 && v <= 0.5;
        if !unit(self.eps) {
            return Err(IfsError::InvalidParameter(format!("eps must lie in (0, 1/2], got {}", self.eps)));
        }
        if !unit(self.r) {
            return Err(IfsError::InvalidParameter(format!("r must lie in (0, 1/2], got {}", self.r)));
        }
        if self.depth == 0 || self.net_size == 0 || self.budget == 0 {
            return Err(IfsError::InvalidParameter("depth, net_size and budget must be at least 1".into()));
        }
        Ok(())
    }

    pub fn with_depth(mut self, depth: usize) -> Self {
        self.depth = depth;
        self
    }

    pub fn with_net_size(mut self, net_size: usize) -> Self {
        self.net_size = net_size;
        self
    }

    pub fn with_r(mut self, r: f64) -> Self {
        self.r = r;
        self
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    /// Radii 0.1, 0.05, 0.025, ... strictly above `r`, then `r` itself.
    pub fn radius_ladder(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut rho = 0.1;
        while rho > self.r * (1.0 + 1e-12) {
            out.push(rho);
            rho *= 0.5;
        }
        out.push(self.r);
        out
    }

    fn bounds(&self, examined: usize, depth_reached: usize) -> SearchBounds {
        SearchBounds { depth: self.depth, budget: self.budget, examined, depth_reached }
    }
}

/// The properties a [`Verdict`] can decide.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Property {
    #[serde(rename = "minimality")]
    Minimality,
    #[serde(rename = "transitivity")]
    TopologicalTransitivity,
    #[serde(rename = "strong_transitivity")]
    StrongTransitivity,
    #[serde(rename = "s_transitivity")]
    STransitivity,
    #[serde(rename = "sensitivity")]
    Sensitivity,
    #[serde(rename = "cofinite_sensitivity")]
    CofiniteSensitivity,
    #[serde(rename = "almost_periodic")]
    AlmostPeriodic,
    #[serde(rename = "nonminimal_witness")]
    NonminimalWitness,
    #[serde(rename = "periodic_points")]
    DensePeriodicPoints,
    #[serde(rename = "repelling_fixed_point")]
    RepellingFixedPoint,
    #[serde(rename = "expanding")]
    Expanding,
    #[serde(rename = "local_expanding")]
    LocalExpanding,
}

impl Property {
    pub const ALL: [Property; 12] = [
        Property::Minimality,
        Property::TopologicalTransitivity,
        Property::StrongTransitivity,
        Property::STransitivity,
        Property::Sensitivity,
        Property::CofiniteSensitivity,
        Property::AlmostPeriodic,
        Property::NonminimalWitness,
        Property::DensePeriodicPoints,
        Property::RepellingFixedPoint,
        Property::Expanding,
        Property::LocalExpanding,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Minimality => "minimality",
            Property::TopologicalTransitivity => "transitivity",
            Property::StrongTransitivity => "strong_transitivity",
            Property::STransitivity => "s_transitivity",
            Property::Sensitivity => "sensitivity",
            Property::CofiniteSensitivity => "cofinite_sensitivity",
            Property::AlmostPeriodic => "almost_periodic",
            Property::NonminimalWitness => "nonminimal_witness",
            Property::DensePeriodicPoints => "periodic_points",
            Property::RepellingFixedPoint => "repelling_fixed_point",
            Property::Expanding => "expanding",
            Property::LocalExpanding => "local_expanding",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = IfsError;

    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| IfsError::InvalidParameter(format!("unknown property `{s}`")))
    }
}

/// Bounds of an exhausted search.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchBounds {
    pub depth: usize,
    pub budget: usize,
    pub examined: usize,
    pub depth_reached: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LetterFixedPoint {
    pub letter: u16,
    pub record: FixedPointRecord,
}

/// Property-specific evidence carried by a verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    OrbitDensity { direction: Direction, per_point: Vec<PointDensity>, worst: WorstOrbit },
    ArcCovers { radius: f64, pad: f64, per_arc: Vec<ArcCover>, failure: Option<CoverFailure> },
    Sensitivity(SensitivityReport),
    Cofinite(CofiniteWitness),
    AlmostPeriodic {
        x: CirclePoint,
        orbit_size: usize,
        closure: Vec<CirclePoint>,
        limit_points: Vec<CirclePoint>,
        failure: Option<ApFailure>,
    },
    Nonminimal(NonminimalWitness),
    PeriodicPoints { periodic: PeriodicPoints, uncovered: Option<CirclePoint> },
    FixedPoints { records: Vec<LetterFixedPoint> },
    Expanding { grid: usize, eta: f64 },
    Cover(ExpandingCover),
    Stuck { point: CirclePoint, best_derivative: f64, bounds: SearchBounds },
    NotApplicable { reason: String },
}

/// A property decision at a stated resolution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub property: Property,
    pub holds: bool,
    pub resolution: Resolution,
    pub witness: Witness,
    pub caveat: String,
}

impl Verdict {
    pub(crate) fn new(property: Property, holds: bool, resolution: Resolution, witness: Witness) -> Self {
        let caveat = if holds {
            format!("certified at net size {} by the attached witness", resolution.net_size)
        } else {
            format!(
                "no witness found within depth {} and budget {}; not a proof that the property fails",
                resolution.depth, resolution.budget
            )
        };
        Verdict { property, holds, resolution, witness, caveat }
    }

    pub(crate) fn with_caveat(mut self, caveat: impl Into<String>) -> Self {
        self.caveat = caveat.into();
        self
    }
}

/// Net points together with every isolated fixed point of a generator.
pub(crate) fn test_points(ifs: &IfsSystem, net_size: usize) -> Vec<CirclePoint> {
    let mut pts = net(net_size);
    pts.extend(ifs.generator_fixed_points(FIXED_POINT_TOL).into_iter().map(|(_, r)| r.location));
    pts.sort_by(|a, b| a.value().total_cmp(&b.value()));
    pts.dedup_by_key(|p| dedup_key(p.value()));
    pts
}

/// Closed test arcs of radius `r` centered on the net.
pub(crate) fn test_arcs(res: &Resolution) -> Vec<(CirclePoint, Arc)> {
    net(res.net_size).into_iter().map(|c| (c, Arc::centered(c.value(), res.r))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_resolution_is_valid() {
        let res = Resolution::default();
        res.validate().unwrap();
        assert_eq!(res.radius_ladder(), vec![0.1, 0.05, 0.025, 0.0125, 0.01]);
        assert!(Resolution { eps: 0.0, ..res }.validate().is_err());
        assert!(Resolution { r: 0.6, ..res }.validate().is_err());
        assert!(Resolution { depth: 0, ..res }.validate().is_err());
    }

    #[test]
    fn property_names_round_trip() {
        for p in Property::ALL {
            assert_eq!(p.name().parse::<Property>().unwrap(), p);
            let json = serde_json::to_string(&p).unwrap();
            assert_eq!(json, format!("\"{}\"", p.name()));
        }
        assert!("chaos".parse::<Property>().is_err());
    }
}
