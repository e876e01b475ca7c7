//! Analytic models of standard machine elements.
//!
//! Parts are closed solids described by a list of typed boundary faces
//! (planes, cylinders, cones) rather than a general B-rep. Every part is
//! built in a canonical frame: the part axis is +z, horizontal faces are
//! z = const, and every curved face is a surface of revolution about a
//! vertical axis. That restriction is what keeps face areas, edge counts
//! and face-to-face distances computable without a modeling kernel.
//!
//! The crate also carries the embedded dimension tables for the supported
//! standards (screws, nuts, retaining rings, parallel keys, washers) and
//! the part generators used to produce training data and fixtures.

pub mod build;
pub mod class;
pub mod dims;
pub mod error;
pub mod face;
pub mod part;
pub mod query;
pub mod random;
pub mod rng;
pub mod vec3;

pub use class::StandardClass;
pub use dims::{DimensionRow, DimensionTable};
pub use error::GeomError;
pub use face::{AnalyticFace, FaceId, Loop2, Patch, Seg2, SurfaceKind};
pub use part::{FeatureMeta, PartModel, PitchKind, ThreadSpec};
pub use query::{closest_face_distance, faces_by_kind};
