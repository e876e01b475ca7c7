//! Surface rasterization: conservative triangle/box overlap.
//!
//! All geometry is evaluated in a frame centered on the grid (voxel `i`
//! spans `[i - r/2, i + 1 - r/2]`), where every arithmetic step commutes
//! exactly with coordinate sign flips and permutations. That makes the
//! grid of a 90-degree-rotated mesh the exact index permutation of the
//! original grid, bit for bit.

use crate::grid::{Frame, VoxelGrid};
use meshkit::TriangleMesh;

/// Isotropic fit of a mesh into the `(r-2)^3` core of an `r^3` grid.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Framing {
    pub center: [f64; 3],
    pub scale: f64,
    pub r: usize,
}

impl Framing {
    /// `None` when the mesh has zero extent on every axis.
    pub fn fit(mesh: &TriangleMesh, r: usize) -> Option<Framing> {
        let (lo, hi) = mesh.aabb();
        let center = [
            (lo[0] + hi[0]) * 0.5,
            (lo[1] + hi[1]) * 0.5,
            (lo[2] + hi[2]) * 0.5,
        ];
        let extent = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(hi[2] - lo[2]);
        if !(extent > 0.0) {
            return None;
        }
        Some(Framing { center, scale: (r as f64 - 2.0) / extent, r })
    }

    /// Centered grid coordinates: `(w - center) * scale`, computed in that
    /// exact order on every axis (sign-flip symmetry depends on it).
    #[inline]
    pub fn to_centered(&self, p: [f64; 3]) -> [f64; 3] {
        [
            (p[0] - self.center[0]) * self.scale,
            (p[1] - self.center[1]) * self.scale,
            (p[2] - self.center[2]) * self.scale,
        ]
    }

    /// Public metadata equivalent (grid corner coordinates, not centered).
    pub fn frame(&self) -> Frame {
        let h = self.r as f64 / 2.0;
        Frame {
            scale: self.scale,
            translate: [
                h - self.center[0] * self.scale,
                h - self.center[1] * self.scale,
                h - self.center[2] * self.scale,
            ],
        }
    }
}

/// Mark every voxel whose cube intersects some triangle. With `strict`,
/// boxes are treated as open sets: a triangle lying exactly on a voxel
/// face touches both neighbors but intersects neither. That keeps a
/// grid-aligned solid from bleeding into its margin.
pub(crate) fn rasterize(mesh: &TriangleMesh, f: &Framing, strict: bool, out: &mut VoxelGrid) {
    let r = f.r;
    let half = r as f64 / 2.0;
    for t in &mesh.triangles {
        let v = [
            f.to_centered(mesh.vertices[t[0] as usize]),
            f.to_centered(mesh.vertices[t[1] as usize]),
            f.to_centered(mesh.vertices[t[2] as usize]),
        ];
        let mut lo = [0usize; 3];
        let mut hi = [0usize; 3];
        for k in 0..3 {
            let a = v[0][k].min(v[1][k]).min(v[2][k]) + half;
            let b = v[0][k].max(v[1][k]).max(v[2][k]) + half;
            lo[k] = (a.floor() as i64 - 1).clamp(0, r as i64 - 1) as usize;
            hi[k] = (b.floor() as i64 + 1).clamp(0, r as i64 - 1) as usize;
        }
        for z in lo[2]..=hi[2] {
            for y in lo[1]..=hi[1] {
                for x in lo[0]..=hi[0] {
                    if out.get(x, y, z) {
                        continue;
                    }
                    let c = [
                        x as f64 - half + 0.5,
                        y as f64 - half + 0.5,
                        z as f64 - half + 0.5,
                    ];
                    if tri_box_overlap(&v, c, strict) {
                        out.set(x, y, z, true);
                    }
                }
            }
        }
    }
}

#[inline]
fn separated(mn: f64, mx: f64, rad: f64, strict: bool) -> bool {
    if strict {
        mn >= rad || mx <= -rad
    } else {
        mn > rad || mx < -rad
    }
}

#[inline]
fn minmax(a: f64, b: f64, c: f64) -> (f64, f64) {
    (a.min(b).min(c), a.max(b).max(c))
}

/// Separating-axis test between a triangle and the unit cube centered at
/// `c` (half-size 0.5). With `strict`, touching counts as separated.
pub(crate) fn tri_box_overlap(v: &[[f64; 3]; 3], c: [f64; 3], strict: bool) -> bool {
    let h = 0.5;
    let t = [
        [v[0][0] - c[0], v[0][1] - c[1], v[0][2] - c[2]],
        [v[1][0] - c[0], v[1][1] - c[1], v[1][2] - c[2]],
        [v[2][0] - c[0], v[2][1] - c[1], v[2][2] - c[2]],
    ];

    // Box face normals.
    for k in 0..3 {
        let (mn, mx) = minmax(t[0][k], t[1][k], t[2][k]);
        if separated(mn, mx, h, strict) {
            return false;
        }
    }

    let e = [
        [t[1][0] - t[0][0], t[1][1] - t[0][1], t[1][2] - t[0][2]],
        [t[2][0] - t[1][0], t[2][1] - t[1][1], t[2][2] - t[1][2]],
        [t[0][0] - t[2][0], t[0][1] - t[2][1], t[0][2] - t[2][2]],
    ];

    // Triangle plane.
    let n = [
        e[0][1] * e[1][2] - e[0][2] * e[1][1],
        e[0][2] * e[1][0] - e[0][0] * e[1][2],
        e[0][0] * e[1][1] - e[0][1] * e[1][0],
    ];
    let d = n[0] * t[0][0] + n[1] * t[0][1] + n[2] * t[0][2];
    let rad = h * (n[0].abs() + n[1].abs() + n[2].abs());
    if separated(d, d, rad, strict) {
        return false;
    }

    // Cross products of box axes with triangle edges.
    for edge in &e {
        for k in 0..3 {
            let (u, w) = ((k + 1) % 3, (k + 2) % 3);
            // axis = unit(k) x edge
            let mut a = [0.0; 3];
            a[u] = -edge[w];
            a[w] = edge[u];
            if a[u] == 0.0 && a[w] == 0.0 {
                continue; // edge parallel to the box axis: nothing to separate
            }
            let p0 = a[u] * t[0][u] + a[w] * t[0][w];
            let p1 = a[u] * t[1][u] + a[w] * t[1][w];
            let p2 = a[u] * t[2][u] + a[w] * t[2][w];
            let (mn, mx) = minmax(p0, p1, p2);
            let rad = h * (a[u].abs() + a[w].abs());
            if separated(mn, mx, rad, strict) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_through_box_interior_hits() {
        let v = [[-1.0, 0.1, 0.2], [1.0, 0.1, 0.2], [0.0, 0.4, -0.3]];
        assert!(tri_box_overlap(&v, [0.0; 3], true));
    }

    #[test]
    fn triangle_on_box_face_touches_but_misses_when_strict() {
        // Triangle in the plane x = 0.5: the +x face of a box at the origin.
        let v = [[0.5, -2.0, -2.0], [0.5, 2.0, -2.0], [0.5, 0.0, 2.0]];
        assert!(!tri_box_overlap(&v, [0.0; 3], true));
        assert!(tri_box_overlap(&v, [0.0; 3], false));
        // The neighbor box on the other side misses too.
        assert!(!tri_box_overlap(&v, [1.0, 0.0, 0.0], true));
    }

    #[test]
    fn far_triangle_misses() {
        let v = [[3.0, 3.0, 3.0], [4.0, 3.0, 3.0], [3.0, 4.0, 3.0]];
        assert!(!tri_box_overlap(&v, [0.0; 3], true));
        assert!(!tri_box_overlap(&v, [0.0; 3], false));
    }

    #[test]
    fn sign_flip_gives_mirrored_verdicts() {
        // The overlap verdict must be invariant under negating any axis of
        // both triangle and box center (bitwise-symmetric arithmetic).
        let tris = [
            [[0.3, -0.2, 0.1], [1.4, 0.9, -0.6], [-0.8, 0.55, 0.35]],
            [[0.5, 0.5, 0.5], [1.5, 0.5, 0.5], [0.5, 1.5, 0.5]],
        ];
        let cells = [[0.0, 0.0, 0.0], [1.0, 0.0, -1.0], [0.0, 1.0, 0.0]];
        for v in &tris {
            for c in &cells {
                for mask in 0..8u32 {
                    let s = |k: usize| if mask >> k & 1 == 1 { -1.0 } else { 1.0 };
                    let flip = |p: [f64; 3]| [p[0] * s(0), p[1] * s(1), p[2] * s(2)];
                    let fv = [flip(v[0]), flip(v[1]), flip(v[2])];
                    assert_eq!(
                        tri_box_overlap(v, *c, true),
                        tri_box_overlap(&fv, flip(*c), true)
                    );
                }
            }
        }
    }
}
