use crate::{voxelize, VoxelError, VoxelGrid};
use meshkit::{random_rotation, rotate_mesh, TriangleMesh};

/// Orientation count used by the classification stage.
pub const DEFAULT_ORIENTATIONS: usize = 21;

/// Voxelize `n` orientations of a mesh: the input pose first, then `n - 1`
/// uniformly random rotations drawn deterministically from `seed`. Each
/// pose is framed by its own bounding box.
pub fn make_invariants(
    mesh: &TriangleMesh,
    r: usize,
    n: usize,
    seed: u64,
) -> Result<Vec<VoxelGrid>, VoxelError> {
    assert!(n >= 1, "need at least one orientation");
    let mut out = Vec::with_capacity(n);
    out.push(voxelize(mesh, r)?);
    let mut rng = geomcore::rng::seeded(seed);
    for _ in 1..n {
        let rot = random_rotation(&mut rng);
        out.push(voxelize(&rotate_mesh(mesh, &rot), r)?);
    }
    Ok(out)
}
