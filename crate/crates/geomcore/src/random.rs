//! Non-standard ("other") part generators.
//!
//! Two parametric families cover the machine-element shapes that surround
//! standard parts in real assemblies: coaxial stacks (shafts, bushings,
//! spacers, stepped discs) and rectangular plates with drilled holes. The
//! seeded generator draws from both; the parametric builders are also used
//! directly to model specific non-standard parts.

use crate::class::StandardClass;
use crate::face::{AnalyticFace, Loop2, Patch, TAU};
use crate::part::{PartModel, PART_DOC_VERSION};
use crate::rng::{below_u64, seeded, unit_f64};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SectionKind {
    Cylinder,
    Hex,
    Square,
    /// Frustum from `inradius` at the bottom to this radius at the top.
    Cone { top_radius: f64 },
}

#[derive(Debug, Clone, Copy)]
pub struct StackSection {
    pub kind: SectionKind,
    /// Inradius of the cross-section (radius for round sections).
    pub inradius: f64,
    pub height: f64,
}

/// Circumradius factor of a section outline relative to its inradius.
fn circum_factor(kind: SectionKind) -> f64 {
    match kind {
        SectionKind::Cylinder | SectionKind::Cone { .. } => 1.0,
        SectionKind::Hex => 2.0 / 3f64.sqrt(),
        SectionKind::Square => 2f64.sqrt(),
    }
}

/// Outline radius (inradius) at the bottom/top joint of a section.
fn joint_radii(s: &StackSection) -> (f64, f64) {
    match s.kind {
        SectionKind::Cone { top_radius } => (s.inradius, top_radius),
        _ => (s.inradius, s.inradius),
    }
}

fn outline(kind: SectionKind, inradius: f64, top: bool) -> Loop2 {
    match kind {
        SectionKind::Cylinder => Loop2::circle([0.0, 0.0], inradius),
        SectionKind::Cone { top_radius } => {
            Loop2::circle([0.0, 0.0], if top { top_radius } else { inradius })
        }
        SectionKind::Hex => Loop2::polygon(&crate::build::hex_points(2.0 * inradius)),
        SectionKind::Square => {
            let r = inradius;
            Loop2::polygon(&[[-r, -r], [r, -r], [r, r], [-r, r]])
        }
    }
}

fn push_face(faces: &mut Vec<AnalyticFace>, patch: Patch) {
    let id = faces.len() as u32;
    faces.push(AnalyticFace { id, patch });
}

fn push_section_sides(faces: &mut Vec<AnalyticFace>, s: &StackSection, z0: f64, z1: f64) {
    let mut push = |patch: Patch| push_face(faces, patch);
    match s.kind {
        SectionKind::Cylinder => push(Patch::CylBand {
            cx: 0.0,
            cy: 0.0,
            radius: s.inradius,
            a0: 0.0,
            a1: TAU,
            z0,
            z1,
            outward: true,
        }),
        SectionKind::Cone { top_radius } => {
            debug_assert!((top_radius - s.inradius).abs() > 1e-12, "degenerate cone section");
            push(Patch::ConeBand {
                cx: 0.0,
                cy: 0.0,
                r0: s.inradius,
                z0,
                r1: top_radius,
                z1,
                outward: true,
            });
        }
        SectionKind::Hex | SectionKind::Square => {
            let ring = outline(s.kind, s.inradius, false);
            let pts: Vec<[f64; 2]> = ring.segs.iter().map(|seg| seg.start()).collect();
            for i in 0..pts.len() {
                let a = pts[i];
                let b = pts[(i + 1) % pts.len()];
                let out = [(a[0] + b[0]) * 0.5, (a[1] + b[1]) * 0.5, 0.0];
                push(crate::build::wall(
                    vec![[a[0], a[1], z0], [b[0], b[1], z0], [b[0], b[1], z1], [a[0], a[1], z1]],
                    out,
                ));
            }
        }
    }
}

/// Coaxial stack of prismatic/conic sections with an optional through-bore.
///
/// Consecutive sections must nest: the joint outline of one must contain
/// the other's (checked via circumradius against inradius), except for cone
/// sections whose joint radius matches exactly.
pub fn make_stack(sections: &[StackSection], bore: Option<f64>, label: &str) -> PartModel {
    assert!(!sections.is_empty());
    let mut faces: Vec<AnalyticFace> = Vec::new();

    let total_h: f64 = sections.iter().map(|s| s.height).sum();
    let mut min_inr = f64::INFINITY;
    for s in sections {
        let (r0, r1) = joint_radii(s);
        min_inr = min_inr.min(r0).min(r1);
    }
    if let Some(rb) = bore {
        assert!(rb < min_inr, "bore must stay inside every section");
    }

    // Bottom cap.
    let first = &sections[0];
    let mut rings = vec![outline(first.kind, first.inradius, false)];
    if let Some(rb) = bore {
        rings.push(Loop2::circle_hole([0.0, 0.0], rb));
    }
    push_face(&mut faces, Patch::Planar { z: 0.0, up: false, rings });

    // Sections and interfaces.
    let mut z = 0.0;
    for (i, s) in sections.iter().enumerate() {
        let z1 = z + s.height;
        push_section_sides(&mut faces, s, z, z1);
        if let Some(next) = sections.get(i + 1) {
            let (_, r_top) = joint_radii(s);
            let (r_bot, _) = joint_radii(next);
            let top_kind = s.kind;
            let bot_kind = next.kind;
            let same = top_kind == bot_kind && (r_top - r_bot).abs() < 1e-12;
            let cone_joint = (matches!(top_kind, SectionKind::Cone { .. })
                || matches!(bot_kind, SectionKind::Cone { .. }))
                && (r_top - r_bot).abs() < 1e-12
                && circum_factor(top_kind) == 1.0
                && circum_factor(bot_kind) == 1.0;
            if !(same || cone_joint) {
                let up_grows = r_bot * circum_factor(bot_kind) > r_top * circum_factor(top_kind);
                if up_grows {
                    assert!(
                        r_top * circum_factor(top_kind) <= r_bot + 1e-12,
                        "section {i} must nest in section {}",
                        i + 1
                    );
                    push_face(&mut faces, Patch::Planar {
                        z: z1,
                        up: false,
                        rings: vec![
                            outline(bot_kind, r_bot, false),
                            outline(top_kind, r_top, true).reversed(),
                        ],
                    });
                } else {
                    assert!(
                        r_bot * circum_factor(bot_kind) <= r_top + 1e-12,
                        "section {} must nest in section {i}",
                        i + 1
                    );
                    push_face(&mut faces, Patch::Planar {
                        z: z1,
                        up: true,
                        rings: vec![
                            outline(top_kind, r_top, true),
                            outline(bot_kind, r_bot, false).reversed(),
                        ],
                    });
                }
            }
        }
        z = z1;
    }

    // Top cap.
    let last = sections.last().unwrap();
    let (_, r_top) = joint_radii(last);
    let mut rings = vec![outline(last.kind, r_top, true)];
    if let Some(rb) = bore {
        rings.push(Loop2::circle_hole([0.0, 0.0], rb));
    }
    push_face(&mut faces, Patch::Planar { z: total_h, up: true, rings });

    if let Some(rb) = bore {
        push_face(&mut faces, Patch::CylBand {
            cx: 0.0,
            cy: 0.0,
            radius: rb,
            a0: 0.0,
            a1: TAU,
            z0: 0.0,
            z1: total_h,
            outward: false,
        });
    }

    PartModel {
        version: PART_DOC_VERSION,
        true_class: StandardClass::Other,
        size_key: label.to_string(),
        features: None,
        faces,
    }
}

/// Rectangular plate with round through-holes. `holes` are (x, y, radius)
/// relative to the plate center; callers keep holes inside the outline and
/// apart from each other.
pub fn make_plate(w: f64, d: f64, t: f64, holes: &[(f64, f64, f64)], label: &str) -> PartModel {
    let (hw, hd) = (w / 2.0, d / 2.0);
    let corners = [[-hw, -hd], [hw, -hd], [hw, hd], [-hw, hd]];
    let mut faces: Vec<AnalyticFace> = Vec::new();
    let mut push = |patch: Patch| {
        let id = faces.len() as u32;
        faces.push(AnalyticFace { id, patch });
    };

    let rings = |_top: bool| {
        let mut r = vec![Loop2::polygon(&corners)];
        for &(x, y, hr) in holes {
            r.push(Loop2::circle_hole([x, y], hr));
        }
        r
    };
    push(Patch::Planar { z: 0.0, up: false, rings: rings(false) });
    push(Patch::Planar { z: t, up: true, rings: rings(true) });
    for i in 0..4 {
        let a = corners[i];
        let b = corners[(i + 1) % 4];
        let out = [(a[0] + b[0]) * 0.5, (a[1] + b[1]) * 0.5, 0.0];
        push(crate::build::wall(
            vec![[a[0], a[1], 0.0], [b[0], b[1], 0.0], [b[0], b[1], t], [a[0], a[1], t]],
            out,
        ));
    }
    for &(x, y, hr) in holes {
        push(Patch::CylBand { cx: x, cy: y, radius: hr, a0: 0.0, a1: TAU, z0: 0.0, z1: t, outward: false });
    }

    PartModel {
        version: PART_DOC_VERSION,
        true_class: StandardClass::Other,
        size_key: label.to_string(),
        features: None,
        faces,
    }
}

fn roll_kind(rng: &mut ChaCha8Rng) -> SectionKind {
    let r = unit_f64(rng);
    if r < 0.5 {
        SectionKind::Cylinder
    } else if r < 0.75 {
        SectionKind::Hex
    } else {
        SectionKind::Square
    }
}

/// Seeded generator for non-standard parts.
///
/// Shapes are kept visually distinct from the standard classes: a lone
/// bored cylinder is made taller than any washer, and a lone bored hex
/// taller than any nut, so the label "other" never contradicts the silhouette.
pub fn make_random_part(seed: u64) -> PartModel {
    let rng = &mut seeded(seed);
    let fam = unit_f64(rng);
    let label = format!("rnd-{seed}");
    if fam < 0.70 {
        let bored = fam >= 0.40 || unit_f64(rng) < 0.25;
        let n = 1 + below_u64(rng, 4) as usize;
        let mut sections: Vec<StackSection> = Vec::new();
        let mut rho = 3.0 + 9.0 * unit_f64(rng);
        let mut kind = roll_kind(rng);
        for i in 0..n {
            let mut h = 3.0 + 19.0 * unit_f64(rng);
            if n == 1 && bored {
                // Keep lone bored sections off the washer/nut silhouettes.
                h = match kind {
                    SectionKind::Hex => rho * (2.6 + 1.4 * unit_f64(rng)),
                    _ => rho * (1.0 + 1.5 * unit_f64(rng)),
                };
            }
            sections.push(StackSection { kind, inradius: rho, height: h });
            if i + 1 < n {
                // The factor ranges themselves guarantee nesting: going up,
                // 1.45 exceeds sqrt(2), so the old outline's circumscribed
                // circle fits the new inradius; going down, 0.70 * sqrt(2)
                // stays below 1. Picking the direction only when it has room
                // inside [1.5, 16] avoids clamping, which would undo that.
                let mut shrink = unit_f64(rng) < 0.5;
                if rho * 1.45 > 16.0 {
                    shrink = true;
                } else if rho * 0.70 < 1.5 {
                    shrink = false;
                }
                let f = if shrink {
                    let lo = (1.5 / rho).max(0.45);
                    lo + (0.70 - lo) * unit_f64(rng)
                } else {
                    let hi = (16.0 / rho).min(2.2);
                    1.45 + (hi - 1.45) * unit_f64(rng)
                };
                let next_rho = rho * f;
                let next_kind = roll_kind(rng);
                // A frustum can stand in for a step between two round sections.
                let cone = kind == SectionKind::Cylinder
                    && next_kind == SectionKind::Cylinder
                    && unit_f64(rng) < 0.3;
                if cone {
                    let h_c = 2.0 + 6.0 * unit_f64(rng);
                    sections.push(StackSection {
                        kind: SectionKind::Cone { top_radius: next_rho },
                        inradius: rho,
                        height: h_c,
                    });
                }
                rho = next_rho;
                kind = next_kind;
            }
        }
        let bore = if bored {
            let mut min_inr = f64::INFINITY;
            for s in &sections {
                let (r0, r1) = joint_radii(s);
                min_inr = min_inr.min(r0).min(r1);
            }
            Some((0.25 + 0.3 * unit_f64(rng)) * min_inr)
        } else {
            None
        };
        make_stack(&sections, bore, &label)
    } else {
        let w = 10.0 + 30.0 * unit_f64(rng);
        let d = 8.0 + 24.0 * unit_f64(rng);
        let t = 2.0 + 8.0 * unit_f64(rng);
        let n_holes = below_u64(rng, 5) as usize;
        let mut holes: Vec<(f64, f64, f64)> = Vec::new();
        for _ in 0..n_holes {
            let r = 1.0 + unit_f64(rng) * (w.min(d) / 6.5 - 1.0).max(0.2);
            for _attempt in 0..12 {
                let x = -w / 2.0 + r + 0.8 + unit_f64(rng) * (w - 2.0 * (r + 0.8));
                let y = -d / 2.0 + r + 0.8 + unit_f64(rng) * (d - 2.0 * (r + 0.8));
                let ok = holes
                    .iter()
                    .all(|&(hx, hy, hr)| ((hx - x).powi(2) + (hy - y).powi(2)).sqrt() >= hr + r + 0.8);
                if ok {
                    holes.push((x, y, r));
                    break;
                }
            }
        }
        make_plate(w, d, t, &holes, &label)
    }
}
