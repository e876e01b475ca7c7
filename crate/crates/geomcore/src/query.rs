//! Measurement queries over analytic faces.
//!
//! Dimension extraction only ever measures between parallel planar faces
//! (horizontal discs or vertical flats) or between coaxial-frame cylinder
//! bands; the fast paths below return those distances exactly. Remaining
//! pairs fall back to dense surface sampling.

use crate::error::GeomError;
use crate::face::{AnalyticFace, Patch, Seg2};
use crate::part::PartModel;
use crate::vec3::{self, V3};

/// Surface sample points for a face, boundaries included.
///
/// Planar faces are sampled along their ring boundaries only: every query
/// pair involving a planar face either hits the parallel-plane fast path or
/// measures against a band whose closest approach is on an edge shared with
/// the plane's boundary.
pub fn sample_face(face: &AnalyticFace, n: usize) -> Vec<V3> {
    let n = n.max(8);
    let mut pts = Vec::new();
    match &face.patch {
        Patch::Planar { z, rings, .. } => {
            for ring in rings {
                for seg in &ring.segs {
                    match seg {
                        Seg2::Line { p0, p1 } => {
                            for i in 0..=n {
                                let t = i as f64 / n as f64;
                                pts.push([
                                    p0[0] + (p1[0] - p0[0]) * t,
                                    p0[1] + (p1[1] - p0[1]) * t,
                                    *z,
                                ]);
                            }
                        }
                        Seg2::Arc { center, radius, a0, a1 } => {
                            for i in 0..=n {
                                let a = a0 + (a1 - a0) * i as f64 / n as f64;
                                pts.push([
                                    center[0] + radius * a.cos(),
                                    center[1] + radius * a.sin(),
                                    *z,
                                ]);
                            }
                        }
                    }
                }
            }
        }
        Patch::Wall { pts: corners, .. } => {
            // Ruled grid between the first edge and the opposite edge; walls
            // are planar quads or simple planar polygons, so a fan grid over
            // triangles covers them.
            for tri in 1..corners.len() - 1 {
                let (a, b, c) = (corners[0], corners[tri], corners[tri + 1]);
                for i in 0..=n {
                    for j in 0..=(n - i) {
                        let u = i as f64 / n as f64;
                        let v = j as f64 / n as f64;
                        let w = 1.0 - u - v;
                        pts.push([
                            w * a[0] + u * b[0] + v * c[0],
                            w * a[1] + u * b[1] + v * c[1],
                            w * a[2] + u * b[2] + v * c[2],
                        ]);
                    }
                }
            }
        }
        Patch::CylBand { cx, cy, radius, a0, a1, z0, z1, .. } => {
            for i in 0..=n {
                let a = a0 + (a1 - a0) * i as f64 / n as f64;
                for j in 0..=n {
                    let z = z0 + (z1 - z0) * j as f64 / n as f64;
                    pts.push([cx + radius * a.cos(), cy + radius * a.sin(), z]);
                }
            }
        }
        Patch::ConeBand { cx, cy, r0, z0, r1, z1, .. } => {
            for i in 0..=n {
                let a = i as f64 / n as f64 * crate::face::TAU;
                for j in 0..=n {
                    let t = j as f64 / n as f64;
                    let z = z0 + (z1 - z0) * t;
                    let r = r0 + (r1 - r0) * t;
                    pts.push([cx + r * a.cos(), cy + r * a.sin(), z]);
                }
            }
        }
    }
    pts
}

fn parallel_plane_distance(a: &AnalyticFace, b: &AnalyticFace) -> Option<f64> {
    match (&a.patch, &b.patch) {
        (Patch::Planar { z: za, .. }, Patch::Planar { z: zb, .. }) => Some((za - zb).abs()),
        (Patch::Wall { pts: pa, normal: na }, Patch::Wall { pts: pb, normal: nb }) => {
            if vec3::dot(*na, *nb).abs() > 1.0 - 1e-9 {
                Some(vec3::dot(*na, vec3::sub(pb[0], pa[0])).abs())
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Closest distance between the surfaces of two distinct faces of a part.
///
/// Parallel planar faces (including vertical flats) measure the exact
/// perpendicular separation of their supporting planes; other pairs return
/// the minimum over dense surface samples.
pub fn closest_face_distance(part: &PartModel, a: u32, b: u32) -> Result<f64, GeomError> {
    if a == b {
        return Err(GeomError::SameFace(a));
    }
    let fa = part.face(a)?;
    let fb = part.face(b)?;
    if let Some(d) = parallel_plane_distance(fa, fb) {
        return Ok(d);
    }
    let pa = sample_face(fa, 32);
    let pb = sample_face(fb, 32);
    let mut best = f64::INFINITY;
    for p in &pa {
        for q in &pb {
            let d2 = vec3::dist2(*p, *q);
            if d2 < best {
                best = d2;
            }
        }
    }
    Ok(best.sqrt())
}

/// Faces of a part grouped by surface kind, each group deterministically
/// ordered: planes by area descending, cylinders by radius descending,
/// cones by half angle descending; ties break on face id.
pub struct FacesByKind<'a> {
    pub planes: Vec<&'a AnalyticFace>,
    pub cylinders: Vec<&'a AnalyticFace>,
    pub cones: Vec<&'a AnalyticFace>,
}

pub fn faces_by_kind(part: &PartModel) -> FacesByKind<'_> {
    let mut planes: Vec<&AnalyticFace> = part.faces.iter().filter(|f| f.is_plane()).collect();
    let mut cylinders: Vec<&AnalyticFace> = part.faces.iter().filter(|f| f.is_cylinder()).collect();
    let mut cones: Vec<&AnalyticFace> = part.faces.iter().filter(|f| f.is_cone()).collect();
    let by_key = |key: fn(&AnalyticFace) -> f64| {
        move |x: &&AnalyticFace, y: &&AnalyticFace| {
            key(y).partial_cmp(&key(x)).unwrap().then(x.id.cmp(&y.id))
        }
    };
    planes.sort_by(by_key(|f| f.area()));
    cylinders.sort_by(by_key(|f| f.cylinder_radius().unwrap()));
    cones.sort_by(by_key(|f| match f.kind() {
        crate::face::SurfaceKind::Cone { half_angle_deg, .. } => half_angle_deg,
        _ => 0.0,
    }));
    FacesByKind { planes, cylinders, cones }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build::make_standard_part;
    use crate::class::StandardClass;

    #[test]
    fn nut_flat_distance_is_width_across_flats() {
        let p = make_standard_part(StandardClass::HexNut, "M12", None).unwrap();
        let walls: Vec<u32> =
            p.faces.iter().filter(|f| matches!(f.patch, Patch::Wall { .. })).map(|f| f.id).collect();
        assert_eq!(walls.len(), 6);
        let mut best: f64 = 0.0;
        for i in 0..walls.len() {
            for j in i + 1..walls.len() {
                let d = closest_face_distance(&p, walls[i], walls[j]).unwrap();
                best = best.max(d);
            }
        }
        assert!((best - 18.0).abs() < 1e-9, "wf came out {best}");
    }

    #[test]
    fn screw_length_is_tip_to_underhead_plane_distance() {
        let p =
            make_standard_part(StandardClass::HexSocketHeadCapScrew, "M12x80", None).unwrap();
        // Tip disc is the only 1-edge plane; under-head is the only 2-edge plane.
        let tip = p.faces.iter().find(|f| f.is_plane() && f.edge_count() == 1).unwrap();
        let under = p.faces.iter().find(|f| f.is_plane() && f.edge_count() == 2).unwrap();
        let d = closest_face_distance(&p, tip.id, under.id).unwrap();
        assert!((d - 80.0).abs() < 1e-9);
    }

    #[test]
    fn key_end_cap_distance_recovers_length() {
        let p = make_standard_part(StandardClass::ParallelKeyA, "5x5x12", None).unwrap();
        let caps: Vec<u32> =
            p.faces.iter().filter(|f| f.is_cylinder()).map(|f| f.id).collect();
        assert_eq!(caps.len(), 2);
        let d = closest_face_distance(&p, caps[0], caps[1]).unwrap();
        // Straight span between the caps plus one width = overall length.
        assert!((d + 5.0 - 12.0).abs() < 1e-9, "cap distance {d}");
    }

    #[test]
    fn same_face_is_an_error() {
        let p = make_standard_part(StandardClass::HexNut, "M12", None).unwrap();
        assert!(matches!(closest_face_distance(&p, 0, 0), Err(GeomError::SameFace(0))));
        assert!(closest_face_distance(&p, 0, 99).is_err());
    }

    #[test]
    fn kind_groups_are_sorted_descending() {
        let p = make_standard_part(StandardClass::RetainingRingBore, "20", None).unwrap();
        let fk = faces_by_kind(&p);
        for w in fk.cylinders.windows(2) {
            assert!(w[0].cylinder_radius().unwrap() >= w[1].cylinder_radius().unwrap());
        }
        for w in fk.planes.windows(2) {
            assert!(w[0].area() >= w[1].area());
        }
    }
}
