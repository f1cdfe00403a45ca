//! Runs named property detectors with one set of settings.

use serde::{Deserialize, Serialize};

use crate::circle::CirclePoint;
use crate::detectors::{
    almost_periodic_verdict, cofinite_sensitivity_verdict, minimality_verdict, periodic_points_verdict,
    repelling_fixed_point_verdict, s_transitivity_verdict, sensitivity_estimate,
    sensitivity_witness_from_nonminimality, strong_transitivity_verdict, topological_transitivity_verdict,
    Property, Resolution, SearchBounds, Verdict, Witness,
};
use crate::error::{IfsError, Result};
use crate::semigroup::IfsSystem;
use crate::symbolic::enumerate_words;
use crate::smooth::{expanding_verdict, local_expanding_cover};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisSettings {
    pub resolution: Resolution,
    /// Separation threshold for cofinite sensitivity.
    pub delta: f64,
    /// Consecutive separation times required for cofinite sensitivity.
    pub window: usize,
    /// Base point for almost periodicity.
    pub point: CirclePoint,
    /// Longest word searched for periodic points.
    pub periodic_max_len: usize,
    /// Grid size for the expanding check.
    pub grid: usize,
}

impl Default for AnalysisSettings {
    fn default() -> Self {
        AnalysisSettings {
            resolution: Resolution::default(),
            delta: 0.2,
            window: 100,
            point: CirclePoint::new(0.25),
            periodic_max_len: 4,
            grid: 1000,
        }
    }
}

/// Decides one property. Errors are reserved for systems the detector
/// cannot handle (non-invertible or non-differentiable generators).
pub fn run_property(ifs: &IfsSystem, property: Property, settings: &AnalysisSettings) -> Result<Verdict> {
    let res = &settings.resolution;
    res.validate()?;
    Ok(match property {
        Property::Minimality => minimality_verdict(ifs, res),
        Property::TopologicalTransitivity => topological_transitivity_verdict(ifs, res),
        Property::StrongTransitivity => strong_transitivity_verdict(ifs, res)?,
        Property::STransitivity => s_transitivity_verdict(ifs, res),
        Property::Sensitivity => sensitivity_estimate(ifs, res).1,
        Property::CofiniteSensitivity => cofinite_sensitivity_verdict(ifs, settings.delta, res, settings.window)?,
        Property::AlmostPeriodic => almost_periodic_verdict(ifs, settings.point, res),
        Property::NonminimalWitness => match sensitivity_witness_from_nonminimality(ifs, res) {
            Ok((_, v)) => v,
            Err(IfsError::NotApplicable(reason)) => {
                Verdict::new(property, false, *res, Witness::NotApplicable { reason: reason.clone() })
                    .with_caveat(format!("not applicable: {reason}"))
            }
            Err(e) => return Err(e),
        },
        Property::DensePeriodicPoints => periodic_points_verdict(ifs, res, settings.periodic_max_len),
        Property::RepellingFixedPoint => repelling_fixed_point_verdict(ifs, res),
        Property::Expanding => {
            let (holds, eta) = expanding_verdict(ifs, settings.grid)?;
            Verdict::new(property, holds, *res, Witness::Expanding { grid: settings.grid, eta })
                .with_caveat(format!("derivatives sampled on a grid of {} points per generator", settings.grid))
        }
        Property::LocalExpanding => match local_expanding_cover(ifs, res) {
            Ok(cover) => Verdict::new(property, true, *res, Witness::Cover(cover)),
            Err(IfsError::NotLocallyExpanding { point, best_derivative }) => Verdict::new(
                property,
                false,
                *res,
                Witness::Stuck {
                    point: CirclePoint::new(point),
                    best_derivative,
                    bounds: SearchBounds {
                        depth: res.depth,
                        budget: res.budget,
                        examined: enumerate_words(ifs.k(), res.depth, res.budget).count() - 1,
                        depth_reached: res.depth,
                    },
                },
            ),
            Err(e) => return Err(e),
        },
    })
}
