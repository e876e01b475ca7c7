//! Typed boundary faces.
//!
//! A face pairs its geometric support (plane / cylinder / cone, reported by
//! [`SurfaceKind`]) with a bounded patch describing the actual extent of the
//! face on that surface. Parts are always modeled in a canonical frame:
//!
//! * horizontal faces are `Planar` at z = const, bounded by loops of line
//!   and circular-arc segments in the xy plane (holes allowed),
//! * vertical flat faces are `Wall` polygons (no holes, no arcs),
//! * every curved face is a band of a surface of revolution about an axis
//!   parallel to +z (`CylBand`, `ConeBand`).
//!
//! Loops are stored with the outer ring counter-clockwise in xy and holes
//! clockwise; a full circle is a single arc segment spanning 2π and counts
//! as one edge.

use crate::vec3::{self, V3};
use serde::{Deserialize, Serialize};

pub type FaceId = u32;

pub const TAU: f64 = std::f64::consts::TAU;

/// Geometric support of a face, in part coordinates (mm, degrees).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SurfaceKind {
    Plane { origin: V3, normal: V3 },
    Cylinder { origin: V3, axis: V3, radius: f64 },
    Cone { apex: V3, axis: V3, half_angle_deg: f64 },
}

/// One segment of a planar boundary loop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Seg2 {
    Line { p0: [f64; 2], p1: [f64; 2] },
    /// Circular arc from angle `a0` to `a1` (radians, CCW iff `a1 > a0`).
    Arc { center: [f64; 2], radius: f64, a0: f64, a1: f64 },
}

impl Seg2 {
    pub fn start(&self) -> [f64; 2] {
        match *self {
            Seg2::Line { p0, .. } => p0,
            Seg2::Arc { center, radius, a0, .. } => {
                [center[0] + radius * a0.cos(), center[1] + radius * a0.sin()]
            }
        }
    }

    pub fn end(&self) -> [f64; 2] {
        match *self {
            Seg2::Line { p1, .. } => p1,
            Seg2::Arc { center, radius, a1, .. } => {
                [center[0] + radius * a1.cos(), center[1] + radius * a1.sin()]
            }
        }
    }

    /// Contribution to the loop's signed area (Green's theorem).
    fn signed_area_term(&self) -> f64 {
        match *self {
            Seg2::Line { p0, p1 } => 0.5 * (p0[0] * p1[1] - p1[0] * p0[1]),
            Seg2::Arc { center, radius, a0, a1 } => {
                let [cx, cy] = center;
                0.5 * (cx * radius * (a1.sin() - a0.sin()) - cy * radius * (a1.cos() - a0.cos())
                    + radius * radius * (a1 - a0))
            }
        }
    }
}

/// Closed chain of segments. Each segment starts where the previous ended.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Loop2 {
    pub segs: Vec<Seg2>,
}

impl Loop2 {
    pub fn new(segs: Vec<Seg2>) -> Loop2 {
        let lp = Loop2 { segs };
        debug_assert!(lp.is_closed(1e-9), "loop segments do not close");
        lp
    }

    /// Full CCW circle (one edge).
    pub fn circle(center: [f64; 2], radius: f64) -> Loop2 {
        Loop2::new(vec![Seg2::Arc { center, radius, a0: 0.0, a1: TAU }])
    }

    /// Full CW circle, for holes.
    pub fn circle_hole(center: [f64; 2], radius: f64) -> Loop2 {
        Loop2::new(vec![Seg2::Arc { center, radius, a0: TAU, a1: 0.0 }])
    }

    /// Straight-sided polygon through `pts` in order.
    pub fn polygon(pts: &[[f64; 2]]) -> Loop2 {
        let segs = (0..pts.len())
            .map(|i| Seg2::Line { p0: pts[i], p1: pts[(i + 1) % pts.len()] })
            .collect();
        Loop2 { segs }
    }

    pub fn is_closed(&self, tol: f64) -> bool {
        self.segs.iter().enumerate().all(|(i, s)| {
            let nxt = &self.segs[(i + 1) % self.segs.len()];
            let e = s.end();
            let b = nxt.start();
            (e[0] - b[0]).abs() <= tol && (e[1] - b[1]).abs() <= tol
        })
    }

    /// Positive for CCW loops, negative for CW (holes).
    pub fn signed_area(&self) -> f64 {
        self.segs.iter().map(|s| s.signed_area_term()).sum()
    }

    /// Reverse traversal direction (outer ring <-> hole).
    pub fn reversed(&self) -> Loop2 {
        Loop2 {
            segs: self
                .segs
                .iter()
                .rev()
                .map(|s| match *s {
                    Seg2::Line { p0, p1 } => Seg2::Line { p0: p1, p1: p0 },
                    Seg2::Arc { center, radius, a0, a1 } => {
                        Seg2::Arc { center, radius, a0: a1, a1: a0 }
                    }
                })
                .collect(),
        }
    }

    pub fn bbox(&self) -> ([f64; 2], [f64; 2]) {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        let mut take = |p: [f64; 2]| {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        };
        for s in &self.segs {
            take(s.start());
            take(s.end());
            if let Seg2::Arc { center, radius, a0, a1 } = *s {
                let (lo_a, hi_a) = if a0 <= a1 { (a0, a1) } else { (a1, a0) };
                // Quadrant extremes covered by the angular span.
                for q in 0..4 {
                    let base = q as f64 * (TAU / 4.0);
                    let mut ang = base;
                    while ang > lo_a {
                        ang -= TAU;
                    }
                    while ang < lo_a {
                        ang += TAU;
                    }
                    if ang <= hi_a {
                        take([center[0] + radius * ang.cos(), center[1] + radius * ang.sin()]);
                    }
                }
            }
        }
        (lo, hi)
    }
}

/// Bounded extent of a face.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Patch {
    /// Horizontal face at z = const. `up` = outward normal along +z.
    /// First ring is the outer boundary (CCW), the rest are holes (CW).
    Planar { z: f64, up: bool, rings: Vec<Loop2> },
    /// Vertical flat polygon, listed CCW around the outward `normal`.
    Wall { pts: Vec<V3>, normal: V3 },
    /// Cylinder band about a vertical axis through (cx, cy).
    /// Full cylinder iff `a1 - a0 == 2π`. `outward` = normal points away
    /// from the axis (false for bores).
    CylBand { cx: f64, cy: f64, radius: f64, a0: f64, a1: f64, z0: f64, z1: f64, outward: bool },
    /// Full frustum band of a cone about a vertical axis through (cx, cy),
    /// with radius `r0` at `z0` and `r1` at `z1` (r0 != r1). Storing the two
    /// rim radii directly keeps them bitwise equal to the neighboring faces'
    /// radii, which downstream tessellation relies on for exact stitching.
    ConeBand { cx: f64, cy: f64, r0: f64, z0: f64, r1: f64, z1: f64, outward: bool },
}

impl Patch {
    pub fn cone_radius_at(&self, z: f64) -> f64 {
        match *self {
            Patch::ConeBand { r0, z0, r1, z1, .. } => r0 + (r1 - r0) * (z - z0) / (z1 - z0),
            _ => panic!("cone_radius_at on a non-cone patch"),
        }
    }
}

/// A typed boundary face of a part.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticFace {
    pub id: FaceId,
    pub patch: Patch,
}

impl AnalyticFace {
    pub fn kind(&self) -> SurfaceKind {
        match &self.patch {
            Patch::Planar { z, up, .. } => SurfaceKind::Plane {
                origin: [0.0, 0.0, *z],
                normal: [0.0, 0.0, if *up { 1.0 } else { -1.0 }],
            },
            Patch::Wall { pts, normal } => SurfaceKind::Plane { origin: pts[0], normal: *normal },
            Patch::CylBand { cx, cy, radius, z0, .. } => SurfaceKind::Cylinder {
                origin: [*cx, *cy, *z0],
                axis: [0.0, 0.0, 1.0],
                radius: *radius,
            },
            Patch::ConeBand { cx, cy, r0, z0, r1, z1, .. } => {
                let slope = (r1 - r0) / (z1 - z0);
                let apex_z = z0 - r0 / slope;
                SurfaceKind::Cone {
                    apex: [*cx, *cy, apex_z],
                    axis: [0.0, 0.0, if 0.5 * (z0 + z1) >= apex_z { 1.0 } else { -1.0 }],
                    half_angle_deg: slope.abs().atan().to_degrees(),
                }
            }
        }
    }

    pub fn is_plane(&self) -> bool {
        matches!(self.patch, Patch::Planar { .. } | Patch::Wall { .. })
    }

    pub fn is_cylinder(&self) -> bool {
        matches!(self.patch, Patch::CylBand { .. })
    }

    pub fn is_cone(&self) -> bool {
        matches!(self.patch, Patch::ConeBand { .. })
    }

    pub fn cylinder_radius(&self) -> Option<f64> {
        match self.patch {
            Patch::CylBand { radius, .. } => Some(radius),
            _ => None,
        }
    }

    /// Exact face area in mm².
    pub fn area(&self) -> f64 {
        match &self.patch {
            Patch::Planar { rings, .. } => rings.iter().map(|r| r.signed_area()).sum::<f64>().abs(),
            Patch::Wall { pts, .. } => {
                // Planar polygon area from the cross-product fan.
                let mut acc = [0.0; 3];
                for i in 1..pts.len() - 1 {
                    let c = vec3::cross(vec3::sub(pts[i], pts[0]), vec3::sub(pts[i + 1], pts[0]));
                    acc = vec3::add(acc, c);
                }
                0.5 * vec3::norm(acc)
            }
            Patch::CylBand { radius, a0, a1, z0, z1, .. } => radius * (a1 - a0).abs() * (z1 - z0),
            Patch::ConeBand { r0, z0, r1, z1, .. } => {
                let slant = ((z1 - z0).powi(2) + (r1 - r0).powi(2)).sqrt();
                std::f64::consts::PI * (r0 + r1) * slant
            }
        }
    }

    /// Number of boundary edges. A full circle is one edge, a full
    /// cylinder band has its two rim circles, a frustum likewise.
    pub fn edge_count(&self) -> u32 {
        match &self.patch {
            Patch::Planar { rings, .. } => rings.iter().map(|r| r.segs.len() as u32).sum(),
            Patch::Wall { pts, .. } => pts.len() as u32,
            Patch::CylBand { a0, a1, .. } => {
                if ((a1 - a0).abs() - TAU).abs() < 1e-12 {
                    2
                } else {
                    4
                }
            }
            Patch::ConeBand { .. } => 2,
        }
    }

    pub fn aabb(&self) -> (V3, V3) {
        match &self.patch {
            Patch::Planar { z, rings, .. } => {
                let mut lo = [f64::INFINITY; 2];
                let mut hi = [f64::NEG_INFINITY; 2];
                for r in rings {
                    let (l, h) = r.bbox();
                    for k in 0..2 {
                        lo[k] = lo[k].min(l[k]);
                        hi[k] = hi[k].max(h[k]);
                    }
                }
                ([lo[0], lo[1], *z], [hi[0], hi[1], *z])
            }
            Patch::Wall { pts, .. } => {
                let mut lo = [f64::INFINITY; 3];
                let mut hi = [f64::NEG_INFINITY; 3];
                for p in pts {
                    for k in 0..3 {
                        lo[k] = lo[k].min(p[k]);
                        hi[k] = hi[k].max(p[k]);
                    }
                }
                (lo, hi)
            }
            Patch::CylBand { cx, cy, radius, z0, z1, .. } => {
                ([cx - radius, cy - radius, *z0], [cx + radius, cy + radius, *z1])
            }
            Patch::ConeBand { cx, cy, r0, z0, r1, z1, .. } => {
                let r = r0.max(*r1);
                ([cx - r, cy - r, *z0], [cx + r, cy + r, *z1])
            }
        }
    }
}
