//! Geometric measurements shared by validation and extraction.
//!
//! Every function here reads an analytic part model in its canonical frame
//! and either produces an exact dimension or fails with the name of the
//! rule whose candidate faces are missing. Distances between parallel
//! planes are exact (plane-to-plane); only the key end-cap query falls back
//! to sampled surfaces.

use crate::error::ExtractError;
use geomcore::{
    closest_face_distance, AnalyticFace, PartModel, Patch, SurfaceKind,
};
use std::collections::BTreeMap;

/// Relative tolerance for the equal-area plane grouping.
pub const AREA_REL_TOL: f64 = 1e-6;

fn fail(rule: &'static str) -> ExtractError {
    ExtractError::NoCandidates { rule }
}

fn distance(part: &PartModel, a: &AnalyticFace, b: &AnalyticFace) -> Result<f64, ExtractError> {
    Ok(closest_face_distance(part, a.id, b.id)?)
}

fn plane_normal(face: &AnalyticFace) -> [f64; 3] {
    match face.kind() {
        SurfaceKind::Plane { normal, .. } => normal,
        _ => unreachable!("normal of a non-plane"),
    }
}

pub(crate) fn planes(part: &PartModel) -> Vec<&AnalyticFace> {
    part.faces.iter().filter(|f| f.is_plane()).collect()
}

pub(crate) fn cylinders(part: &PartModel) -> Vec<&AnalyticFace> {
    part.faces.iter().filter(|f| f.is_cylinder()).collect()
}

pub(crate) fn cones(part: &PartModel) -> Vec<&AnalyticFace> {
    part.faces.iter().filter(|f| f.is_cone()).collect()
}

/// Plane counts per boundary edge count, e.g. a hex nut gives {4: 6, 7: 2}.
pub(crate) fn plane_edge_histogram(part: &PartModel) -> BTreeMap<u32, usize> {
    let mut hist = BTreeMap::new();
    for f in planes(part) {
        *hist.entry(f.edge_count()).or_insert(0) += 1;
    }
    hist
}

/// Cylinder radii, descending.
pub(crate) fn cylinder_radii(part: &PartModel) -> Vec<f64> {
    let mut rs: Vec<f64> =
        part.faces.iter().filter_map(|f| f.cylinder_radius()).collect();
    rs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    rs
}

/// The unique plane with exactly `edges` boundary edges.
fn unique_plane<'a>(
    part: &'a PartModel,
    edges: u32,
    rule: &'static str,
) -> Result<&'a AnalyticFace, ExtractError> {
    let mut found = None;
    for f in planes(part) {
        if f.edge_count() == edges {
            if found.is_some() {
                return Err(fail(rule));
            }
            found = Some(f);
        }
    }
    found.ok_or_else(|| fail(rule))
}

/// Groups of planes with pairwise equal areas (relative tolerance
/// [`AREA_REL_TOL`]), each group sorted by face id, groups by area
/// ascending.
pub(crate) fn equal_area_groups(part: &PartModel) -> Vec<Vec<&AnalyticFace>> {
    let mut ps = planes(part);
    ps.sort_by(|a, b| a.area().partial_cmp(&b.area()).unwrap().then(a.id.cmp(&b.id)));
    let mut groups: Vec<Vec<&AnalyticFace>> = Vec::new();
    for f in ps {
        match groups.last_mut() {
            Some(g) if {
                let a0 = g[0].area();
                let a = f.area();
                (a - a0).abs() <= AREA_REL_TOL * a0.max(a)
            } =>
            {
                g.push(f);
            }
            _ => groups.push(vec![f]),
        }
    }
    groups
}

/// Width measured across a set of six equal-area planes: the distance
/// between opposed (parallel) members, taking the largest over all parallel
/// pairs. When several six-plane groups exist the smallest-area group wins,
/// which picks a socket hexagon over an external one.
pub(crate) fn six_plane_width(part: &PartModel) -> Result<f64, ExtractError> {
    const RULE: &str = "six equal-area planes";
    let group = equal_area_groups(part)
        .into_iter()
        .find(|g| g.len() == 6)
        .ok_or_else(|| fail(RULE))?;
    let mut width: Option<f64> = None;
    for i in 0..6 {
        for j in i + 1..6 {
            let ni = plane_normal(group[i]);
            let nj = plane_normal(group[j]);
            let dot = ni[0] * nj[0] + ni[1] * nj[1] + ni[2] * nj[2];
            if dot.abs() > 1.0 - 1e-9 {
                let d = distance(part, group[i], group[j])?;
                width = Some(width.map_or(d, |w: f64| w.max(d)));
            }
        }
    }
    width.ok_or_else(|| fail(RULE))
}

/// Dimensions measurable on any of the three screw families.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ScrewDims {
    /// Shank diameter.
    pub d: f64,
    /// Overall length per the standard's convention (under head or head
    /// included, depending on the family).
    pub length: f64,
    pub head_h: f64,
    pub head_d: Option<f64>,
    /// Across-flats width of the hexagon (head or socket).
    pub width: f64,
}

/// Hex head screw: one shank cylinder; length from the single-edge tip disc
/// to the seven-edge under-head plane; head height from there to the
/// six-edge head top.
pub(crate) fn hex_head_screw_dims(part: &PartModel) -> Result<ScrewDims, ExtractError> {
    let cyls = cylinders(part);
    if cyls.len() != 1 {
        return Err(fail("single shank cylinder"));
    }
    let tip = unique_plane(part, 1, "single-edge tip plane")?;
    let under = unique_plane(part, 7, "seven-edge under-head plane")?;
    let top = unique_plane(part, 6, "six-edge head-top plane")?;
    Ok(ScrewDims {
        d: 2.0 * cyls[0].cylinder_radius().unwrap(),
        length: distance(part, tip, under)?,
        head_h: distance(part, under, top)?,
        head_d: None,
        width: six_plane_width(part)?,
    })
}

/// Socket head cap screw: exactly two cylinders (head and shank); length
/// from the single-edge tip to the two-edge under-head annulus.
pub(crate) fn socket_head_screw_dims(part: &PartModel) -> Result<ScrewDims, ExtractError> {
    let cyls = cylinders(part);
    if cyls.len() != 2 {
        return Err(fail("head and shank cylinders"));
    }
    let r0 = cyls[0].cylinder_radius().unwrap();
    let r1 = cyls[1].cylinder_radius().unwrap();
    let tip = unique_plane(part, 1, "single-edge tip plane")?;
    let under = unique_plane(part, 2, "two-edge under-head plane")?;
    let top = unique_plane(part, 7, "seven-edge head-top plane")?;
    Ok(ScrewDims {
        d: 2.0 * r0.min(r1),
        length: distance(part, tip, under)?,
        head_h: distance(part, under, top)?,
        head_d: Some(2.0 * r0.max(r1)),
        width: six_plane_width(part)?,
    })
}

/// Countersunk socket screw: one shank cylinder and two cones, the head
/// being the cone with the larger rim; length from the single-edge tip to
/// the seven-edge head-top plane.
pub(crate) fn countersunk_screw_dims(part: &PartModel) -> Result<ScrewDims, ExtractError> {
    let cyls = cylinders(part);
    if cyls.len() != 1 {
        return Err(fail("single shank cylinder"));
    }
    let cns = cones(part);
    if cns.len() != 2 {
        return Err(fail("head and tip cones"));
    }
    let rim = |f: &AnalyticFace| match f.patch {
        Patch::ConeBand { r0, r1, .. } => r0.max(r1),
        _ => unreachable!(),
    };
    let span = |f: &AnalyticFace| match f.patch {
        Patch::ConeBand { z0, z1, .. } => (z1 - z0).abs(),
        _ => unreachable!(),
    };
    let head = if rim(cns[0]) >= rim(cns[1]) { cns[0] } else { cns[1] };
    let tip = unique_plane(part, 1, "single-edge tip plane")?;
    let top = unique_plane(part, 7, "seven-edge head-top plane")?;
    Ok(ScrewDims {
        d: 2.0 * cyls[0].cylinder_radius().unwrap(),
        length: distance(part, tip, top)?,
        head_h: span(head),
        head_d: Some(2.0 * rim(head)),
        width: six_plane_width(part)?,
    })
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct NutDims {
    /// Bore diameter; equal to the nominal thread size (threads are
    /// metadata, not geometry).
    pub d: f64,
    pub wf: f64,
    /// Distance between the two seven-edge planes.
    pub height: f64,
}

pub(crate) fn hex_nut_dims(part: &PartModel) -> Result<NutDims, ExtractError> {
    let cyls = cylinders(part);
    if cyls.len() != 1 {
        return Err(fail("single bore cylinder"));
    }
    let sevens: Vec<&AnalyticFace> =
        planes(part).into_iter().filter(|f| f.edge_count() == 7).collect();
    if sevens.len() != 2 {
        return Err(fail("two seven-edge planes"));
    }
    Ok(NutDims {
        d: 2.0 * cyls[0].cylinder_radius().unwrap(),
        wf: six_plane_width(part)?,
        height: distance(part, sevens[0], sevens[1])?,
    })
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct WasherDims {
    pub bore_d: f64,
    pub outer_d: f64,
    pub thickness: f64,
}

pub(crate) fn washer_dims(part: &PartModel) -> Result<WasherDims, ExtractError> {
    let rs = cylinder_radii(part);
    if rs.len() != 2 {
        return Err(fail("outer and bore cylinders"));
    }
    let ps = planes(part);
    if ps.len() != 2 {
        return Err(fail("two annular planes"));
    }
    Ok(WasherDims {
        bore_d: 2.0 * rs[1],
        outer_d: 2.0 * rs[0],
        thickness: distance(part, ps[0], ps[1])?,
    })
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct KeyDims {
    pub width: f64,
    pub height: f64,
    /// Overall length: end-cap distance plus the width.
    pub length: f64,
}

/// Parallel key of either form. `with_hole` selects form C (three
/// cylinders, one countersink cone) over form A (two cap cylinders only).
pub(crate) fn parallel_key_dims(part: &PartModel, with_hole: bool) -> Result<KeyDims, ExtractError> {
    let cyls = cylinders(part);
    let n_cones = cones(part).len();
    let ok = if with_hole { cyls.len() == 3 && n_cones == 1 } else { cyls.len() == 2 && n_cones == 0 };
    if !ok {
        return Err(fail(if with_hole { "two end caps and a hole" } else { "two end caps" }));
    }
    let mut caps: Vec<&AnalyticFace> = cyls.clone();
    caps.sort_by(|a, b| {
        b.cylinder_radius().unwrap().partial_cmp(&a.cylinder_radius().unwrap()).unwrap()
    });
    caps.truncate(2);
    let (r0, r1) = (caps[0].cylinder_radius().unwrap(), caps[1].cylinder_radius().unwrap());
    if (r0 - r1).abs() > 1e-9 {
        return Err(fail("equal-radius end caps"));
    }
    // The flat top and bottom are the horizontal planes; the side walls are
    // vertical and excluded by patch kind.
    let flats: Vec<&AnalyticFace> = part
        .faces
        .iter()
        .filter(|f| matches!(f.patch, Patch::Planar { .. }))
        .collect();
    if flats.len() != 2 {
        return Err(fail("top and bottom flats"));
    }
    let width = 2.0 * r0;
    Ok(KeyDims {
        width,
        height: distance(part, flats[0], flats[1])?,
        length: distance(part, caps[0], caps[1])? + width,
    })
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct RingDims {
    pub fit_d: f64,
    pub thickness: f64,
}

/// Retaining ring. The fit diameter for a shaft ring is twice the fourth
/// largest cylinder radius (side and mid bands come first); for a bore ring
/// it is twice the largest radius. Thickness is the distance between the
/// two largest planes.
pub(crate) fn retaining_ring_dims(part: &PartModel, bore: bool) -> Result<RingDims, ExtractError> {
    let rs = cylinder_radii(part);
    let fit_d = if bore {
        2.0 * *rs.first().ok_or_else(|| fail("largest-diameter cylinder"))?
    } else {
        if rs.len() < 4 {
            return Err(fail("fourth-largest cylinder radius"));
        }
        2.0 * rs[3]
    };
    let mut ps = planes(part);
    if ps.len() < 2 {
        return Err(fail("largest planes"));
    }
    ps.sort_by(|a, b| b.area().partial_cmp(&a.area()).unwrap().then(a.id.cmp(&b.id)));
    Ok(RingDims { fit_d, thickness: distance(part, ps[0], ps[1])? })
}
