//! Dynamics of iterated function systems on the circle.
//!
//! Generators are circle maps given by lifts. The semigroup they generate is
//! explored word by word, and the detectors decide minimality, the
//! transitivity notions, sensitivity and related properties at an explicit
//! [`Resolution`](detectors::Resolution), returning witnesses that can be
//! replayed.

pub mod analysis;
pub mod circle;
pub mod detectors;
pub mod error;
pub mod exec;
pub mod gallery;
pub mod generators;
pub mod semigroup;
pub mod smooth;
pub mod symbolic;
mod track;

pub use analysis::{run_property, AnalysisSettings};
pub use circle::{arc_diameter, arc_gap, circ_dist, net, Arc, CirclePoint};
pub use detectors::{Property, Resolution, Verdict, Witness};
pub use error::{IfsError, Result};
pub use gallery::{build_example, GalleryEntry, GalleryParams};
pub use generators::{FixedPointClass, FixedPointRecord, Generator};
pub use semigroup::IfsSystem;
pub use symbolic::Word;
