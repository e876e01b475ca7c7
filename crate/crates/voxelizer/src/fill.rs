//! Interior fill: ray parity along all three grid axes at voxel centers,
//! majority vote per voxel. Rays that graze edges or vertices are decided
//! by a symbolic perturbation of the ray point, so every surface crossing
//! is claimed by exactly one triangle; a voxel misjudged along one axis
//! (a grazing hit) is outvoted by the other two.

use crate::grid::VoxelGrid;
use crate::raster::Framing;
use meshkit::TriangleMesh;

/// Edge function of the directed edge `s -> t` at `q`: positive to the left.
#[inline]
fn edge_w(s: [f64; 2], t: [f64; 2], q: [f64; 2]) -> f64 {
    (t[0] - s[0]) * (q[1] - s[1]) - (t[1] - s[1]) * (q[0] - s[0])
}

/// Resolve a zero edge function by nudging `q` along (eps, eps^2):
/// the sign of `cross(t - s, nudge)` in the limit eps -> 0+.
#[inline]
fn tie_sign(s: [f64; 2], t: [f64; 2]) -> f64 {
    let d = [t[0] - s[0], t[1] - s[1]];
    if d[1] != 0.0 {
        -d[1]
    } else {
        d[0]
    }
}

fn mark_axis_parity(mesh: &TriangleMesh, f: &Framing, axis: usize, counts: &mut [u8]) {
    let r = f.r;
    let half = r as f64 / 2.0;
    let (p, q) = ((axis + 1) % 3, (axis + 2) % 3);

    // Crossing coordinates along `axis`, bucketed per (p, q) ray.
    let mut rays: Vec<Vec<f64>> = vec![Vec::new(); r * r];
    for t in &mesh.triangles {
        let u = [
            f.to_centered(mesh.vertices[t[0] as usize]),
            f.to_centered(mesh.vertices[t[1] as usize]),
            f.to_centered(mesh.vertices[t[2] as usize]),
        ];
        let mut pp = [[u[0][p], u[0][q]], [u[1][p], u[1][q]], [u[2][p], u[2][q]]];
        let mut xx = [u[0][axis], u[1][axis], u[2][axis]];
        let area2 = edge_w(pp[0], pp[1], pp[2]);
        if area2 == 0.0 {
            continue; // projects to a segment: crossed only by grazing rays
        }
        if area2 < 0.0 {
            pp.swap(1, 2);
            xx.swap(1, 2);
        }
        let area2 = area2.abs();

        let range = |k: usize| {
            let lo = pp[0][k].min(pp[1][k]).min(pp[2][k]);
            let hi = pp[0][k].max(pp[1][k]).max(pp[2][k]);
            let a = ((lo + half - 0.5).floor() as i64 - 1).clamp(0, r as i64 - 1);
            let b = ((hi + half - 0.5).ceil() as i64 + 1).clamp(0, r as i64 - 1);
            (a as usize, b as usize)
        };
        let (j0, j1) = range(0);
        let (k0, k1) = range(1);
        for j in j0..=j1 {
            for k in k0..=k1 {
                let c = [j as f64 + 0.5 - half, k as f64 + 0.5 - half];
                let w0 = edge_w(pp[0], pp[1], c);
                let w1 = edge_w(pp[1], pp[2], c);
                let w2 = edge_w(pp[2], pp[0], c);
                let keep = |w: f64, s: [f64; 2], t: [f64; 2]| {
                    w > 0.0 || (w == 0.0 && tie_sign(s, t) > 0.0)
                };
                if keep(w0, pp[0], pp[1])
                    && keep(w1, pp[1], pp[2])
                    && keep(w2, pp[2], pp[0])
                {
                    // Barycentric interpolation keeps the crossing inside
                    // the triangle's own span along the ray axis.
                    let x = (w1 * xx[0] + w2 * xx[1] + w0 * xx[2]) / area2;
                    rays[j * r + k].push(x);
                }
            }
        }
    }

    let mut coord = [0usize; 3];
    for j in 0..r {
        for k in 0..r {
            let xs = &mut rays[j * r + k];
            if xs.is_empty() {
                continue;
            }
            xs.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
            coord[p] = j;
            coord[q] = k;
            let mut ptr = 0;
            for i in 0..r {
                let center = i as f64 + 0.5 - half;
                while ptr < xs.len() && xs[ptr] < center {
                    ptr += 1;
                }
                if ptr % 2 == 1 {
                    coord[axis] = i;
                    counts[coord[0] + r * (coord[1] + r * coord[2])] += 1;
                }
            }
        }
    }
}

/// Mark voxels whose center is inside the mesh along at least 2 of 3 axes.
pub(crate) fn parity_fill(mesh: &TriangleMesh, f: &Framing, out: &mut VoxelGrid) {
    let r = f.r;
    let mut counts = vec![0u8; r * r * r];
    for axis in 0..3 {
        mark_axis_parity(mesh, f, axis, &mut counts);
    }
    let data = out.data_mut();
    for (v, &n) in data.iter_mut().zip(&counts) {
        if n >= 2 {
            *v = 1;
        }
    }
}
