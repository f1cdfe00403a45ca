//! Named systems with the properties they are known to have.

use serde::{Deserialize, Serialize};

use crate::circle::CirclePoint;
use crate::detectors::Property;
use crate::error::{IfsError, Result};
use crate::generators::Generator;
use crate::semigroup::IfsSystem;

pub const GALLERY_NAMES: [&str; 5] =
    ["rotation_flip", "ex42_hinges", "thm34_ns_rotation", "cor33_morse_smale", "prop35_expanding"];

/// The golden ratio conjugate, the default irrational rotation number.
pub fn golden() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}

/// Overrides for the default parameters of a gallery system.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GalleryParams {
    /// Rotation number.
    pub alpha: Option<f64>,
    /// North-south multiplier.
    pub lambda: Option<f64>,
    /// Hinge height: `h1(1/2) = 1/2 + s`, `h2(1/2) = 1/2 - s`.
    pub s: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Expectation {
    pub property: Property,
    pub holds: bool,
    /// Base point, for pointwise properties.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<CirclePoint>,
    /// Expected constant (the contraction constant for expanding systems).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant: Option<f64>,
}

impl Expectation {
    fn new(property: Property, holds: bool) -> Self {
        Expectation { property, holds, point: None, constant: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GalleryEntry {
    pub name: String,
    pub system: IfsSystem,
    pub expected: Vec<Expectation>,
}

fn rotation_flip(p: &GalleryParams) -> Result<GalleryEntry> {
    let system = IfsSystem::new(vec![Generator::rotation(p.alpha.unwrap_or_else(golden)), Generator::flip()])?;
    Ok(GalleryEntry {
        name: "rotation_flip".into(),
        system,
        expected: vec![
            Expectation::new(Property::TopologicalTransitivity, true),
            Expectation::new(Property::DensePeriodicPoints, true),
            Expectation::new(Property::Sensitivity, false),
        ],
    })
}

/// The fixed point `p = 0` attracts under `f` with `1/2 < f'(p) < 1`; the
/// hinge maps stretch `(0, 1/2)` and `(1/2, 1)` away from `p`.
fn ex42_hinges(p: &GalleryParams) -> Result<GalleryEntry> {
    let lambda = p.lambda.unwrap_or(1.8);
    let s = p.s.unwrap_or(0.1);
    if !(lambda > 1.0 && lambda < 2.0) {
        return Err(IfsError::InvalidParameter(format!("ex42_hinges needs 1 < lambda < 2, got {lambda}")));
    }
    if !(s > 0.0 && s < 0.5) {
        return Err(IfsError::InvalidParameter(format!("ex42_hinges needs 0 < s < 1/2, got {s}")));
    }
    let f = Generator::north_south(0.5, lambda)?;
    let f_inv = f.inverse()?;
    let h1 = Generator::piecewise_linear(vec![(0.0, 0.0), (0.5, 0.5 + s), (1.0, 1.0)])?;
    let h2 = Generator::piecewise_linear(vec![(0.0, 0.0), (0.5, 0.5 - s), (1.0, 1.0)])?;
    // h1 maps (0, 1/2) onto (0, 1/2 + s) and h2 maps (1/2, 1) onto
    // (1/2 - s, 1); both keep p = 0 as an endpoint
    let (a, b) = (h1.lift(0.0), h1.lift(0.5));
    if !(a == 0.0 && b > 0.5) {
        return Err(IfsError::InvalidParameter("h1 does not stretch (0, 1/2) away from p".into()));
    }
    let (c, d) = (h2.lift(0.5), h2.lift(1.0));
    if !(c < 0.5 && d == 1.0) {
        return Err(IfsError::InvalidParameter("h2 does not stretch (1/2, 1) away from p".into()));
    }
    let fp = f.derivative(CirclePoint::new(0.0))?;
    if !(fp > 0.5 && fp < 1.0) {
        return Err(IfsError::InvalidParameter(format!("f'(p) = {fp} is outside (1/2, 1)")));
    }
    let system = IfsSystem::new(vec![f, f_inv, h1, h2])?;
    Ok(GalleryEntry {
        name: "ex42_hinges".into(),
        system,
        expected: vec![
            Expectation::new(Property::STransitivity, true),
            Expectation::new(Property::TopologicalTransitivity, true),
            Expectation::new(Property::Minimality, false),
            Expectation::new(Property::StrongTransitivity, false),
            Expectation::new(Property::Sensitivity, true),
            Expectation { point: Some(CirclePoint::new(0.25)), ..Expectation::new(Property::AlmostPeriodic, false) },
            Expectation { point: Some(CirclePoint::new(0.0)), ..Expectation::new(Property::AlmostPeriodic, true) },
            Expectation { constant: Some(0.125), ..Expectation::new(Property::NonminimalWitness, true) },
        ],
    })
}

fn thm34_ns_rotation(p: &GalleryParams) -> Result<GalleryEntry> {
    let ns = Generator::north_south(0.0, p.lambda.unwrap_or(2.0))?;
    let alpha = p.alpha.unwrap_or_else(golden);
    let system = IfsSystem::new(vec![ns.clone(), ns.inverse()?, Generator::rotation(alpha), Generator::rotation(-alpha)])?;
    Ok(GalleryEntry {
        name: "thm34_ns_rotation".into(),
        system,
        expected: vec![
            Expectation::new(Property::StrongTransitivity, true),
            Expectation::new(Property::RepellingFixedPoint, true),
            Expectation::new(Property::Sensitivity, true),
        ],
    })
}

fn cor33_morse_smale(p: &GalleryParams) -> Result<GalleryEntry> {
    let lambda = p.lambda.unwrap_or(2.0);
    let alpha = p.alpha.unwrap_or_else(golden);
    let system = IfsSystem::new(vec![
        Generator::north_south(0.0, lambda)?,
        Generator::north_south(0.25, 1.5)?,
        Generator::rotation(alpha),
        Generator::rotation(-alpha),
    ])?;
    Ok(GalleryEntry {
        name: "cor33_morse_smale".into(),
        system,
        expected: vec![
            Expectation::new(Property::StrongTransitivity, true),
            Expectation::new(Property::Sensitivity, true),
        ],
    })
}

fn prop35_expanding(_: &GalleryParams) -> Result<GalleryEntry> {
    let system = IfsSystem::new(vec![Generator::expanding(2)?, Generator::expanding(3)?])?;
    Ok(GalleryEntry {
        name: "prop35_expanding".into(),
        system,
        expected: vec![
            Expectation { constant: Some(0.5), ..Expectation::new(Property::Expanding, true) },
            Expectation::new(Property::CofiniteSensitivity, true),
        ],
    })
}

/// Builds a gallery system by name, applying `params` over its defaults.
pub fn build_example(name: &str, params: &GalleryParams) -> Result<GalleryEntry> {
    match name {
        "rotation_flip" => rotation_flip(params),
        "ex42_hinges" => ex42_hinges(params),
        "thm34_ns_rotation" => thm34_ns_rotation(params),
        "cor33_morse_smale" => cor33_morse_smale(params),
        "prop35_expanding" => prop35_expanding(params),
        other => Err(IfsError::UnknownExample(other.to_string())),
    }
}
