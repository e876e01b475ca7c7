//! Rigid rotations for pose augmentation.

use crate::mesh::TriangleMesh;
use geomcore::rng::unit_f64;
use geomcore::vec3::V3;
use rand_chacha::ChaCha8Rng;

/// Proper rotation as a row-major 3x3 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation(pub [[f64; 3]; 3]);

impl Rotation {
    pub const IDENTITY: Rotation =
        Rotation([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    pub fn apply(&self, v: V3) -> V3 {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
        ]
    }

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Max deviation of RᵀR from the identity.
    pub fn orthonormal_error(&self) -> f64 {
        let m = &self.0;
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let dot = (0..3).map(|k| m[k][i] * m[k][j]).sum::<f64>();
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - want).abs());
            }
        }
        worst
    }

    pub fn from_quaternion(w: f64, x: f64, y: f64, z: f64) -> Rotation {
        let n = (w * w + x * x + y * y + z * z).sqrt();
        let (w, x, y, z) = (w / n, x / n, y / n, z / n);
        Rotation([
            [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
            [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
            [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
        ])
    }
}

/// Uniform random rotation (uniform quaternion on S³ from three uniforms).
pub fn random_rotation(rng: &mut ChaCha8Rng) -> Rotation {
    let u1 = unit_f64(rng);
    let u2 = unit_f64(rng);
    let u3 = unit_f64(rng);
    let tau = std::f64::consts::TAU;
    let a = (1.0 - u1).sqrt();
    let b = u1.sqrt();
    let x = a * (tau * u2).sin();
    let y = a * (tau * u2).cos();
    let z = b * (tau * u3).sin();
    let w = b * (tau * u3).cos();
    Rotation::from_quaternion(w, x, y, z)
}

/// The 24 proper rotations of the cube: signed permutation matrices with
/// determinant +1, in a fixed deterministic order.
pub fn octahedral_rotations() -> Vec<Rotation> {
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut out = Vec::with_capacity(24);
    for perm in perms {
        for signs in 0..8u8 {
            let mut m = [[0.0; 3]; 3];
            for (row, &col) in perm.iter().enumerate() {
                m[row][col] = if signs >> row & 1 == 1 { -1.0 } else { 1.0 };
            }
            let r = Rotation(m);
            if r.det() > 0.5 {
                out.push(r);
            }
        }
    }
    out
}

pub fn rotate_mesh(mesh: &TriangleMesh, rot: &Rotation) -> TriangleMesh {
    TriangleMesh {
        vertices: mesh.vertices.iter().map(|&v| rot.apply(v)).collect(),
        triangles: mesh.triangles.clone(),
    }
}
