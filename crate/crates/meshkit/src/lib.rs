//! Triangle meshes for the recognition pipeline.
//!
//! [`tessellate`] turns an analytic part into a watertight triangle mesh:
//! every circle in a part is sampled on one shared absolute angle grid and
//! every coordinate is quantized to 1e-9 mm, so faces that meet along a
//! common circle or line weld by exact vertex identity — no tolerance-based
//! stitching pass is needed or wanted.

pub mod mesh;
pub mod rotate;
pub mod stl;
pub mod tessellate;

pub use mesh::{MeshBuilder, TriangleMesh};
pub use rotate::{octahedral_rotations, random_rotation, rotate_mesh, Rotation};
pub use stl::{read_stl, write_ascii_stl, write_binary_stl, StlError};
pub use tessellate::{tessellate, MeshError, DEFAULT_CHORD_TOL};
