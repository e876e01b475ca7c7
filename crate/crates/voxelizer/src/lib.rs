//! Triangle meshes -> binary occupancy grids.
//!
//! Surface voxels come from a conservative triangle/box separating-axis
//! test; the interior of a watertight mesh is filled by axis-ray parity
//! with a 2-of-3 majority vote. Framing is isotropic, centered, with a
//! one-voxel margin, and all voxel-space arithmetic commutes exactly with
//! axis permutations and sign flips, so 90-degree rotations of the input
//! permute the grid bit for bit.

mod fill;
mod grid;
mod invariants;
pub mod io;
mod raster;

pub use grid::{Frame, VoxelGrid};
pub use invariants::{make_invariants, DEFAULT_ORIENTATIONS};
pub use io::{
    read_binvox, read_binvox_file, read_dense, read_dense_file, write_binvox,
    write_binvox_file, write_dense, write_dense_file, BinvoxError, DenseError,
};

use meshkit::TriangleMesh;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VoxelError {
    #[error("mesh has no triangles or zero extent")]
    EmptyMesh,
}

/// Rasterize a mesh into an `r^3` grid, its bounding box scaled and
/// centered to span `r - 2` voxels on the longest axis. Watertight meshes
/// are solid-filled; open meshes get surface voxels and `surface_only`.
pub fn voxelize(mesh: &TriangleMesh, r: usize) -> Result<VoxelGrid, VoxelError> {
    assert!(r >= 2, "resolution must be at least 2");
    if mesh.triangles.is_empty() {
        return Err(VoxelError::EmptyMesh);
    }
    let framing = raster::Framing::fit(mesh, r).ok_or(VoxelError::EmptyMesh)?;
    let mut g = VoxelGrid::new(r, framing.frame());
    raster::rasterize(mesh, &framing, true, &mut g);
    let closed = mesh.is_closed();
    if closed {
        fill::parity_fill(mesh, &framing, &mut g);
    }
    g.surface_only = !closed;
    if g.count() == 0 {
        // A zero-volume sheet lying exactly on voxel faces marks nothing
        // under the open-box rule; fall back to closed boxes so any
        // non-empty mesh occupies at least one voxel.
        raster::rasterize(mesh, &framing, false, &mut g);
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use geomcore::random::make_random_part;

    #[test]
    fn surface_voxels_are_subset_of_filled_grid() {
        for seed in [2u64, 9, 23] {
            let part = make_random_part(seed);
            let mesh = meshkit::tessellate(&part, meshkit::DEFAULT_CHORD_TOL).unwrap();
            let framing = raster::Framing::fit(&mesh, 24).unwrap();
            let mut surface = VoxelGrid::new(24, framing.frame());
            raster::rasterize(&mesh, &framing, true, &mut surface);
            let full = voxelize(&mesh, 24).unwrap();
            for (s, f) in surface.data().iter().zip(full.data()) {
                assert!(s <= f, "seed {seed}: surface voxel missing from filled grid");
            }
            assert!(full.count() > surface.count(), "seed {seed}: no interior");
        }
    }

    #[test]
    fn flat_sheet_on_voxel_faces_still_occupies() {
        // A single quad, zero volume, axis-aligned: the open-box pass sees
        // nothing, the closed-box fallback must keep the grid non-empty.
        let mut b = meshkit::MeshBuilder::new();
        b.add_triangle([0.0, 0.0, 0.0], [4.0, 0.0, 0.0], [4.0, 4.0, 0.0]);
        b.add_triangle([0.0, 0.0, 0.0], [4.0, 4.0, 0.0], [0.0, 4.0, 0.0]);
        let mesh = b.finish();
        let g = voxelize(&mesh, 6).unwrap();
        assert!(g.surface_only);
        assert!(g.count() >= 1);
    }

    #[test]
    fn empty_mesh_is_rejected() {
        let empty = meshkit::TriangleMesh::empty();
        assert!(matches!(voxelize(&empty, 8), Err(VoxelError::EmptyMesh)));
    }
}
