//! Analytic part -> watertight triangle mesh.
//!
//! One angular grid per part: every arc and band samples angles that are
//! exact multiples of 2π/n (plus its own exact endpoints), and shared rim
//! radii are stored in the part model as identical f64 values, so adjacent
//! faces generate bitwise-identical rim vertices and the mesh welds shut
//! without any stitching tolerance.

use crate::mesh::{MeshBuilder, TriangleMesh};
use geomcore::face::{Loop2, Patch, Seg2, TAU};
use geomcore::part::PartModel;
use thiserror::Error;

/// Default chord deviation (mm) between an arc and its polyline.
pub const DEFAULT_CHORD_TOL: f64 = 0.05;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("face {face}: hole bridging failed (hole outside outer ring?)")]
    Bridge { face: u32 },
    #[error("part has no faces")]
    Empty,
}

/// Triangulate a part. `tol` is the maximum chord deviation for arcs; the
/// whole part shares the angle count derived from its largest circle.
pub fn tessellate(part: &PartModel, tol: f64) -> Result<TriangleMesh, MeshError> {
    if part.faces.is_empty() {
        return Err(MeshError::Empty);
    }
    let n = angle_count(max_radius(part), tol);
    let mut b = MeshBuilder::new();
    for face in &part.faces {
        match &face.patch {
            Patch::Planar { z, up, rings } => {
                let polys: Vec<Vec<[f64; 2]>> = rings.iter().map(|r| ring_polyline(r, n)).collect();
                let tris = earclip::triangulate(&polys).ok_or(MeshError::Bridge { face: face.id })?;
                for t in tris {
                    let p = |q: [f64; 2]| [q[0], q[1], *z];
                    if *up {
                        b.add_triangle(p(t[0]), p(t[1]), p(t[2]));
                    } else {
                        b.add_triangle(p(t[0]), p(t[2]), p(t[1]));
                    }
                }
            }
            Patch::Wall { pts, .. } => {
                for i in 1..pts.len() - 1 {
                    b.add_triangle(pts[0], pts[i], pts[i + 1]);
                }
            }
            Patch::CylBand { cx, cy, radius, a0, a1, z0, z1, outward } => {
                band(&mut b, *cx, *cy, *radius, *radius, *a0, *a1, *z0, *z1, *outward, n);
            }
            Patch::ConeBand { cx, cy, r0, z0, r1, z1, outward } => {
                band(&mut b, *cx, *cy, *r0, *r1, 0.0, TAU, *z0, *z1, *outward, n);
            }
        }
    }
    Ok(b.finish())
}

/// Segments for a full circle of radius `r_max` within chord tolerance.
pub fn angle_count(r_max: f64, tol: f64) -> usize {
    if r_max <= 0.0 || tol <= 0.0 {
        return 12;
    }
    let t = tol.min(r_max * 0.5);
    let steps = (std::f64::consts::PI / (1.0 - t / r_max).acos()).ceil();
    (steps as usize).clamp(12, 512)
}

fn max_radius(part: &PartModel) -> f64 {
    let mut r_max: f64 = 0.0;
    for f in &part.faces {
        match &f.patch {
            Patch::CylBand { radius, .. } => r_max = r_max.max(*radius),
            Patch::ConeBand { r0, r1, .. } => r_max = r_max.max(*r0).max(*r1),
            Patch::Planar { rings, .. } => {
                for ring in rings {
                    for seg in &ring.segs {
                        if let Seg2::Arc { radius, .. } = seg {
                            r_max = r_max.max(*radius);
                        }
                    }
                }
            }
            Patch::Wall { .. } => {}
        }
    }
    r_max
}

#[inline]
fn arc_pt(center: [f64; 2], r: f64, a: f64) -> [f64; 2] {
    [center[0] + r * a.cos(), center[1] + r * a.sin()]
}

/// Grid angles strictly between a0 and a1, ordered from a0 toward a1.
/// Grid angle j is always computed as `j as f64 * (TAU / n)` so that every
/// face sampling the same circle produces identical bits.
fn arc_interior(a0: f64, a1: f64, n: usize) -> Vec<f64> {
    let delta = TAU / n as f64;
    let (lo, hi) = if a0 < a1 { (a0, a1) } else { (a1, a0) };
    let mut j = (lo / delta).floor() as i64 + 1;
    while j as f64 * delta <= lo {
        j += 1;
    }
    let mut out = Vec::new();
    while (j as f64 * delta) < hi {
        out.push(j as f64 * delta);
        j += 1;
    }
    if a0 > a1 {
        out.reverse();
    }
    out
}

/// Points of one ring in stored traversal order. Each segment contributes
/// its exact start point (the end comes from the next segment); arcs add
/// the shared-grid interior angles in between.
fn ring_polyline(ring: &Loop2, n: usize) -> Vec<[f64; 2]> {
    let mut pts = Vec::new();
    for seg in &ring.segs {
        match seg {
            Seg2::Line { p0, .. } => pts.push(*p0),
            Seg2::Arc { center, radius, a0, a1 } => {
                pts.push(arc_pt(*center, *radius, *a0));
                for a in arc_interior(*a0, *a1, n) {
                    pts.push(arc_pt(*center, *radius, a));
                }
            }
        }
    }
    pts
}

/// Quad strip between the rim at (r0, z0) and the rim at (r1, z1).
#[allow(clippy::too_many_arguments)]
fn band(
    b: &mut MeshBuilder,
    cx: f64,
    cy: f64,
    r0: f64,
    r1: f64,
    a0: f64,
    a1: f64,
    z0: f64,
    z1: f64,
    outward: bool,
    n: usize,
) {
    let full = ((a1 - a0).abs() - TAU).abs() < 1e-15;
    let mut angles = vec![a0];
    angles.extend(arc_interior(a0, a1, n));
    if !full {
        angles.push(a1);
    }
    let c = [cx, cy];
    let m = angles.len();
    let steps = if full { m } else { m - 1 };
    for i in 0..steps {
        let aa = angles[i];
        let ab = angles[(i + 1) % m];
        let pa0 = arc_pt(c, r0, aa);
        let pb0 = arc_pt(c, r0, ab);
        let pa1 = arc_pt(c, r1, aa);
        let pb1 = arc_pt(c, r1, ab);
        let v00 = [pa0[0], pa0[1], z0];
        let v10 = [pb0[0], pb0[1], z0];
        let v11 = [pb1[0], pb1[1], z1];
        let v01 = [pa1[0], pa1[1], z1];
        if outward == (a1 > a0) {
            b.add_triangle(v00, v10, v11);
            b.add_triangle(v00, v11, v01);
        } else {
            b.add_triangle(v00, v11, v10);
            b.add_triangle(v00, v01, v11);
        }
    }
}

mod earclip {
    //! Plane triangulation: ear clipping of the boundary polygon with the
    //! holes bridged into the outer ring (via `earcutr`).

    type P2 = [f64; 2];

    fn cross(a: P2, b: P2, c: P2) -> f64 {
        (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    }

    /// Twice the signed area of a ring (shoelace).
    fn ring_area2(ring: &[P2]) -> f64 {
        let n = ring.len();
        (0..n)
            .map(|i| {
                let p = ring[i];
                let q = ring[(i + 1) % n];
                p[0] * q[1] - q[0] * p[1]
            })
            .sum()
    }

    /// First ring: outer boundary (counterclockwise). Rest: holes (clockwise).
    /// Returns counterclockwise triangles covering the region exactly, or
    /// None when the rings do not describe a valid polygon with holes.
    pub(super) fn triangulate(rings: &[Vec<P2>]) -> Option<Vec<[P2; 3]>> {
        let mut flat = Vec::new();
        let mut hole_starts = Vec::new();
        for (i, ring) in rings.iter().enumerate() {
            if i > 0 {
                hole_starts.push(flat.len() / 2);
            }
            for p in ring {
                flat.extend_from_slice(p);
            }
        }
        let idx = earcutr::earcut(&flat, &hole_starts, 2).ok()?;
        let pt = |k: usize| -> P2 { [flat[2 * k], flat[2 * k + 1]] };
        let mut tris = Vec::with_capacity(idx.len() / 3);
        let mut covered2 = 0.0;
        for t in idx.chunks_exact(3) {
            let (a, b, c) = (pt(t[0]), pt(t[1]), pt(t[2]));
            let s = cross(a, b, c);
            covered2 += s.abs();
            if s > 0.0 {
                tris.push([a, b, c]);
            } else if s < 0.0 {
                tris.push([a, c, b]);
            } // exactly-flat slivers carry no area and are dropped
        }
        // Ear clipping partitions the region exactly, so the triangle areas
        // must add up to the ring area; a shortfall means a hole was skipped
        // or the rings self-intersect.
        let want2: f64 = rings.iter().map(|r| ring_area2(r)).sum();
        let tol = want2.abs().max(1.0) * 1e-9;
        ((covered2 - want2).abs() <= tol).then_some(tris)
    }

    #[cfg(test)]
    mod tests {
        use super::*;

        fn area(tris: &[[P2; 3]]) -> f64 {
            tris.iter().map(|t| 0.5 * cross(t[0], t[1], t[2])).sum()
        }

        #[test]
        fn square_with_square_hole() {
            let outer = vec![[0.0, 0.0], [4.0, 0.0], [4.0, 4.0], [0.0, 4.0]];
            let hole = vec![[1.0, 1.0], [1.0, 3.0], [3.0, 3.0], [3.0, 1.0]]; // CW
            let tris = triangulate(&[outer, hole]).unwrap();
            assert!((area(&tris) - 12.0).abs() < 1e-9);
            for t in &tris {
                assert!(cross(t[0], t[1], t[2]) > 0.0, "triangles must stay CCW");
            }
        }

        #[test]
        fn two_holes() {
            let outer = vec![[0.0, 0.0], [10.0, 0.0], [10.0, 4.0], [0.0, 4.0]];
            let h1 = vec![[1.0, 1.0], [1.0, 3.0], [3.0, 3.0], [3.0, 1.0]];
            let h2 = vec![[6.0, 1.0], [6.0, 3.0], [8.0, 3.0], [8.0, 1.0]];
            let tris = triangulate(&[outer, h1, h2]).unwrap();
            assert!((area(&tris) - (40.0 - 8.0)).abs() < 1e-9);
        }

        #[test]
        fn concave_outline() {
            // L-shape
            let outer = vec![
                [0.0, 0.0],
                [4.0, 0.0],
                [4.0, 2.0],
                [2.0, 2.0],
                [2.0, 4.0],
                [0.0, 4.0],
            ];
            let tris = triangulate(&[outer]).unwrap();
            assert!((area(&tris) - 12.0).abs() < 1e-9);
        }
    }
}
