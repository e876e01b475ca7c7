//! Generators for the supported standard parts.
//!
//! Every builder works in the canonical frame (axis +z) and produces a
//! closed face list whose shared boundary coordinates are computed once and
//! reused, so downstream tessellation can stitch faces watertight by exact
//! vertex identity.
//!
//! Threads are never modeled; a threaded region is a plain cylinder and the
//! thread lives in [`FeatureMeta`].

use crate::class::StandardClass;
use crate::dims::{DimensionRow, DimensionTable};
use crate::error::GeomError;
use crate::face::{AnalyticFace, Loop2, Patch, Seg2, TAU};
use crate::part::{FeatureMeta, PartModel, PitchKind, ThreadSpec, PART_DOC_VERSION};
use crate::vec3::{self, V3};

/// Hexagon vertices for a width across flats `wf`, centered at the origin,
/// vertices at angles 0°, 60°, ... (flats face 30°, 90°, ...).
pub fn hex_points(wf: f64) -> [[f64; 2]; 6] {
    let rc = wf / 3f64.sqrt();
    std::array::from_fn(|k| {
        let a = k as f64 * TAU / 6.0;
        [rc * a.cos(), rc * a.sin()]
    })
}

/// Vertical flat polygon with a guaranteed-outward orientation.
pub(crate) fn wall(pts: Vec<V3>, outward: V3) -> Patch {
    // Newell normal of the polygon as listed.
    let mut n = [0.0; 3];
    for i in 0..pts.len() {
        let a = pts[i];
        let b = pts[(i + 1) % pts.len()];
        n[0] += (a[1] - b[1]) * (a[2] + b[2]);
        n[1] += (a[2] - b[2]) * (a[0] + b[0]);
        n[2] += (a[0] - b[0]) * (a[1] + b[1]);
    }
    let pts = if vec3::dot(n, outward) < 0.0 { pts.into_iter().rev().collect() } else { pts };
    Patch::Wall { pts, normal: vec3::normalize(outward) }
}

fn quad_wall(a: V3, b: V3, c: V3, d: V3, outward: V3) -> Patch {
    wall(vec![a, b, c, d], outward)
}

struct FaceList {
    faces: Vec<AnalyticFace>,
}

impl FaceList {
    fn new() -> FaceList {
        FaceList { faces: Vec::new() }
    }

    fn push(&mut self, patch: Patch) {
        let id = self.faces.len() as u32;
        self.faces.push(AnalyticFace { id, patch });
    }

    /// Six core walls of a hexagonal prism between z0 and z1.
    fn hex_walls(&mut self, wf: f64, z0: f64, z1: f64, outward_out: bool) {
        let pts = hex_points(wf);
        for k in 0..6 {
            let a = pts[k];
            let b = pts[(k + 1) % 6];
            let mid = [(a[0] + b[0]) * 0.5, (a[1] + b[1]) * 0.5, 0.0];
            let out = if outward_out { mid } else { vec3::scale(mid, -1.0) };
            self.push(quad_wall(
                [a[0], a[1], z0],
                [b[0], b[1], z0],
                [b[0], b[1], z1],
                [a[0], a[1], z1],
                out,
            ));
        }
    }
}

fn hex_hole_ring(wf: f64) -> Loop2 {
    Loop2::polygon(&hex_points(wf)).reversed()
}

fn full_cyl(r: f64, z0: f64, z1: f64, outward: bool) -> Patch {
    Patch::CylBand { cx: 0.0, cy: 0.0, radius: r, a0: 0.0, a1: TAU, z0, z1, outward }
}

fn torque_nm(d: f64, strength: &str) -> f64 {
    let c = match strength {
        "10.9" => 0.079,
        "12.9" => 0.095,
        _ => 0.055,
    };
    (c * d * d * d * 10.0).round() / 10.0
}

fn thread_meta(d: f64, pitch: f64, kind: PitchKind, thread_length: f64, strength: &str) -> FeatureMeta {
    FeatureMeta {
        thread: Some(ThreadSpec { nominal_diameter: d, pitch, pitch_kind: kind, thread_length }),
        bom_torque: Some(torque_nm(d, strength)),
        config_name: Some(strength.to_string()),
    }
}

fn part(class: StandardClass, size_key: String, features: Option<FeatureMeta>, faces: FaceList) -> PartModel {
    PartModel { version: PART_DOC_VERSION, true_class: class, size_key, features, faces: faces.faces }
}

/// Socket head cap screw per the ISO 4762 row. Under-head plane at z = 0,
/// head above, shank of length `len` below.
fn build_socket_head_screw(row: &DimensionRow, len: f64, strength: &str) -> PartModel {
    let d = row.nominal_d().expect("validated");
    let dk = row.head_d.unwrap();
    let k = row.head_h.unwrap();
    let s = row.socket_w.unwrap();
    let pitch = row.pitch.unwrap();
    let t_socket = k / 2.0;
    let c_head = dk / 20.0;
    let c_tip = (pitch).min(d / 4.0);

    let mut fl = FaceList::new();
    let r_tip = d / 2.0 - c_tip;
    // Tip disc (the single 1-edge plane).
    fl.push(Patch::Planar { z: -len, up: false, rings: vec![Loop2::circle([0.0, 0.0], r_tip)] });
    // Tip chamfer, 45 degrees.
    fl.push(Patch::ConeBand {
        cx: 0.0,
        cy: 0.0,
        r0: r_tip,
        z0: -len,
        r1: d / 2.0,
        z1: -len + c_tip,
        outward: true,
    });
    fl.push(full_cyl(d / 2.0, -len + c_tip, 0.0, true));
    // Under-head bearing face.
    fl.push(Patch::Planar {
        z: 0.0,
        up: false,
        rings: vec![Loop2::circle([0.0, 0.0], dk / 2.0), Loop2::circle_hole([0.0, 0.0], d / 2.0)],
    });
    fl.push(full_cyl(dk / 2.0, 0.0, k - c_head, true));
    let r_top = dk / 2.0 - c_head;
    fl.push(Patch::ConeBand {
        cx: 0.0,
        cy: 0.0,
        r0: dk / 2.0,
        z0: k - c_head,
        r1: r_top,
        z1: k,
        outward: true,
    });
    // Head top: outer rim circle plus the socket hexagon (7 edges).
    fl.push(Patch::Planar {
        z: k,
        up: true,
        rings: vec![Loop2::circle([0.0, 0.0], r_top), hex_hole_ring(s)],
    });
    // Socket cavity: six walls facing the axis, hexagonal bottom.
    let hp = hex_points(s);
    for i in 0..6 {
        let a = hp[i];
        let b = hp[(i + 1) % 6];
        let mid = [(a[0] + b[0]) * 0.5, (a[1] + b[1]) * 0.5, 0.0];
        fl.push(quad_wall(
            [a[0], a[1], k - t_socket],
            [b[0], b[1], k - t_socket],
            [b[0], b[1], k],
            [a[0], a[1], k],
            vec3::scale(mid, -1.0),
        ));
    }
    fl.push(Patch::Planar { z: k - t_socket, up: true, rings: vec![Loop2::polygon(&hp)] });

    let b = (2.0 * d + 12.0).min(len);
    let meta = thread_meta(d, pitch, PitchKind::Regular, b, strength);
    let size_key = format!("{}x{}", row.size, fmt_len(len));
    part(StandardClass::HexSocketHeadCapScrew, size_key, Some(meta), fl)
}

/// Countersunk socket screw per the ISO 10642 row. Head top at z = 0,
/// overall length `len` (head included, as the standard measures it).
fn build_countersunk_screw(row: &DimensionRow, len: f64, strength: &str) -> PartModel {
    let d = row.nominal_d().expect("validated");
    let dk = row.head_d.unwrap();
    let k = row.head_h.unwrap();
    let s = row.socket_w.unwrap();
    let pitch = row.pitch.unwrap();
    let t_socket = k * 0.5;
    let c_tip = (pitch).min(d / 4.0);

    let mut fl = FaceList::new();
    fl.push(Patch::Planar {
        z: 0.0,
        up: true,
        rings: vec![Loop2::circle([0.0, 0.0], dk / 2.0), hex_hole_ring(s)],
    });
    let hp = hex_points(s);
    for i in 0..6 {
        let a = hp[i];
        let b = hp[(i + 1) % 6];
        let mid = [(a[0] + b[0]) * 0.5, (a[1] + b[1]) * 0.5, 0.0];
        fl.push(quad_wall(
            [a[0], a[1], -t_socket],
            [b[0], b[1], -t_socket],
            [b[0], b[1], 0.0],
            [a[0], a[1], 0.0],
            vec3::scale(mid, -1.0),
        ));
    }
    fl.push(Patch::Planar { z: -t_socket, up: true, rings: vec![Loop2::polygon(&hp)] });
    // Countersunk head: 90 degree included angle (head_d = d + 2*head_h).
    fl.push(Patch::ConeBand {
        cx: 0.0,
        cy: 0.0,
        r0: d / 2.0,
        z0: -k,
        r1: dk / 2.0,
        z1: 0.0,
        outward: true,
    });
    fl.push(full_cyl(d / 2.0, -len + c_tip, -k, true));
    let r_tip = d / 2.0 - c_tip;
    fl.push(Patch::ConeBand {
        cx: 0.0,
        cy: 0.0,
        r0: r_tip,
        z0: -len,
        r1: d / 2.0,
        z1: -len + c_tip,
        outward: true,
    });
    fl.push(Patch::Planar { z: -len, up: false, rings: vec![Loop2::circle([0.0, 0.0], r_tip)] });

    let b = (2.0 * d + 12.0).min(len - k);
    let meta = thread_meta(d, pitch, PitchKind::Regular, b, strength);
    let size_key = format!("{}x{}", row.size, fmt_len(len));
    part(StandardClass::HexSocketCountersunkScrew, size_key, Some(meta), fl)
}

/// Hex head screw (ISO 4014 partial / ISO 4017 full / ISO 8676 fine full).
fn build_hex_head_screw(row: &DimensionRow, len: f64, strength: &str) -> PartModel {
    let d = row.nominal_d().expect("validated");
    let wf = row.wf.unwrap();
    let k = row.head_h.unwrap();
    let pitch = row.pitch.unwrap();
    let c_tip = (pitch).min(d / 4.0);

    let mut fl = FaceList::new();
    let r_tip = d / 2.0 - c_tip;
    fl.push(Patch::Planar { z: -len, up: false, rings: vec![Loop2::circle([0.0, 0.0], r_tip)] });
    fl.push(Patch::ConeBand {
        cx: 0.0,
        cy: 0.0,
        r0: r_tip,
        z0: -len,
        r1: d / 2.0,
        z1: -len + c_tip,
        outward: true,
    });
    fl.push(full_cyl(d / 2.0, -len + c_tip, 0.0, true));
    let hp = hex_points(wf);
    fl.push(Patch::Planar {
        z: 0.0,
        up: false,
        rings: vec![Loop2::polygon(&hp), Loop2::circle_hole([0.0, 0.0], d / 2.0)],
    });
    fl.hex_walls(wf, 0.0, k, true);
    fl.push(Patch::Planar { z: k, up: true, rings: vec![Loop2::polygon(&hp)] });

    let full_thread = row.standard != "ISO 4014";
    let b = if full_thread { len } else { (2.0 * d + 6.0).min(len) };
    let kind = if row.standard == "ISO 8676" { PitchKind::Fine } else { PitchKind::Regular };
    let mut size_key = row.size.clone();
    if kind == PitchKind::Fine {
        size_key = format!("{}x{}", size_key, fmt_len(pitch));
    }
    let size_key = format!("{}x{}", size_key, fmt_len(len));
    let meta = thread_meta(d, pitch, kind, b, strength);
    part(StandardClass::HexHeadScrew, size_key, Some(meta), fl)
}

/// Hex nut (ISO 4032 family). Plain hexagonal prism with a cylindrical bore;
/// the thread is metadata, so the bore diameter equals the nominal size.
fn build_hex_nut(row: &DimensionRow, strength: &str) -> PartModel {
    let d = row.bore_d.unwrap();
    let wf = row.wf.unwrap();
    let m = row.height.unwrap();
    let pitch = row.pitch.unwrap();

    let mut fl = FaceList::new();
    let hp = hex_points(wf);
    fl.push(Patch::Planar {
        z: 0.0,
        up: false,
        rings: vec![Loop2::polygon(&hp), Loop2::circle_hole([0.0, 0.0], d / 2.0)],
    });
    fl.push(Patch::Planar {
        z: m,
        up: true,
        rings: vec![Loop2::polygon(&hp), Loop2::circle_hole([0.0, 0.0], d / 2.0)],
    });
    fl.hex_walls(wf, 0.0, m, true);
    fl.push(full_cyl(d / 2.0, 0.0, m, false));

    let fine = ["ISO 8673", "ISO 8674", "ISO 8675"].contains(&row.standard.as_str());
    let kind = if fine { PitchKind::Fine } else { PitchKind::Regular };
    let mut size_key = row.size.clone();
    if fine {
        size_key = format!("{}x{}", size_key, fmt_len(pitch));
    }
    let meta = thread_meta(d, pitch, kind, m, strength);
    part(StandardClass::HexNut, size_key, Some(meta), fl)
}

/// Chamfered plain washer (ISO 7090): annulus with a 45 degree chamfer on
/// the top outer edge.
fn build_washer(row: &DimensionRow) -> PartModel {
    let r_i = row.bore_d.unwrap() / 2.0;
    let r_o = row.outer_d.unwrap() / 2.0;
    let t = row.thickness.unwrap();
    let c = t / 4.0;

    let mut fl = FaceList::new();
    fl.push(Patch::Planar {
        z: 0.0,
        up: false,
        rings: vec![Loop2::circle([0.0, 0.0], r_o), Loop2::circle_hole([0.0, 0.0], r_i)],
    });
    fl.push(Patch::Planar {
        z: t,
        up: true,
        rings: vec![Loop2::circle([0.0, 0.0], r_o - c), Loop2::circle_hole([0.0, 0.0], r_i)],
    });
    fl.push(Patch::ConeBand {
        cx: 0.0,
        cy: 0.0,
        r0: r_o,
        z0: t - c,
        r1: r_o - c,
        z1: t,
        outward: true,
    });
    fl.push(full_cyl(r_o, 0.0, t - c, true));
    fl.push(full_cyl(r_i, 0.0, t, false));
    part(StandardClass::ChamferedPlainWasher, row.size.clone(), None, fl)
}

/// Parallel key (DIN 6885 form A or C). Stadium outline, length along x.
fn build_key(row: &DimensionRow, len: f64) -> PartModel {
    let b = row.key_w.unwrap();
    let h = row.key_h.unwrap();
    let form_c = row.size.starts_with("C-");
    let r = b / 2.0;
    let hx = (len - b) / 2.0;

    let stadium = || {
        Loop2::new(vec![
            Seg2::Line { p0: [-hx, -r], p1: [hx, -r] },
            Seg2::Arc { center: [hx, 0.0], radius: r, a0: -TAU / 4.0, a1: TAU / 4.0 },
            Seg2::Line { p0: [hx, r], p1: [-hx, r] },
            Seg2::Arc { center: [-hx, 0.0], radius: r, a0: TAU / 4.0, a1: 3.0 * TAU / 4.0 },
        ])
    };

    let mut fl = FaceList::new();
    let (r_hole, r_cs, z_cs) = if form_c {
        let r_hole = row.hole_d.unwrap() / 2.0;
        let r_cs = 1.6 * r_hole;
        (r_hole, r_cs, h - (r_cs - r_hole))
    } else {
        (0.0, 0.0, 0.0)
    };

    let mut bottom = vec![stadium()];
    let mut top = vec![stadium()];
    if form_c {
        bottom.push(Loop2::circle_hole([0.0, 0.0], r_hole));
        top.push(Loop2::circle_hole([0.0, 0.0], r_cs));
    }
    fl.push(Patch::Planar { z: 0.0, up: false, rings: bottom });
    fl.push(Patch::Planar { z: h, up: true, rings: top });
    fl.push(quad_wall([-hx, -r, 0.0], [hx, -r, 0.0], [hx, -r, h], [-hx, -r, h], [0.0, -1.0, 0.0]));
    fl.push(quad_wall([-hx, r, 0.0], [hx, r, 0.0], [hx, r, h], [-hx, r, h], [0.0, 1.0, 0.0]));
    fl.push(Patch::CylBand {
        cx: hx,
        cy: 0.0,
        radius: r,
        a0: -TAU / 4.0,
        a1: TAU / 4.0,
        z0: 0.0,
        z1: h,
        outward: true,
    });
    fl.push(Patch::CylBand {
        cx: -hx,
        cy: 0.0,
        radius: r,
        a0: TAU / 4.0,
        a1: 3.0 * TAU / 4.0,
        z0: 0.0,
        z1: h,
        outward: true,
    });
    if form_c {
        fl.push(Patch::ConeBand {
            cx: 0.0,
            cy: 0.0,
            r0: r_hole,
            z0: z_cs,
            r1: r_cs,
            z1: h,
            outward: false,
        });
        fl.push(full_cyl(r_hole, 0.0, z_cs, false));
    }

    let class = if form_c { StandardClass::ParallelKeyC } else { StandardClass::ParallelKeyA };
    let section = row.size.split_once('-').unwrap().1;
    part(class, format!("{}x{}", section, fmt_len(len)), None, fl)
}

/// Retaining ring geometry shared by both forms.
struct RingLayout {
    gap_half: f64,
    t: f64,
}

/// Retaining ring for shafts (DIN 471). Open C-ring, outer boundary stepped
/// (wider opposite the gap), assembly lugs with pliers holes extending
/// outward at the gap.
fn build_shaft_ring(row: &DimensionRow) -> PartModel {
    let d = row.fit_d.unwrap();
    let lay = RingLayout { gap_half: 24f64.to_radians(), t: row.thickness.unwrap() };
    let r_b = d / 2.0;
    let w_mid = 0.10 * d + 0.8;
    let w_side = 0.75 * w_mid;
    let r_mid = r_b + w_mid;
    let r_side = r_b + w_side;
    let d_out = 0.14 * d + 0.4;
    let r_tab = r_side + d_out;
    let phi = 108f64.to_radians();
    let th1 = lay.gap_half;
    let th2 = TAU - lay.gap_half;

    let r_hc = (r_b + r_tab) / 2.0;
    let l_tab = 0.9 * lay.gap_half.sin() * r_hc;
    let r_h = (0.05 * d + 0.35).min(0.35 * l_tab).min(0.35 * (r_tab - r_b));

    let e1 = [th1.cos(), th1.sin()];
    let e2 = [th2.cos(), th2.sin()];
    // Tangent directions pointing into the gap.
    let t1 = [th1.sin(), -th1.cos()];
    let t2 = [-th2.sin(), th2.cos()];

    let p = |r: f64, e: [f64; 2]| [r * e[0], r * e[1]];
    let shift = |q: [f64; 2], t: [f64; 2], l: f64| [q[0] + l * t[0], q[1] + l * t[1]];

    let a1 = p(r_b, e1);
    let b1 = p(r_tab, e1);
    let s1 = p(r_side, e1);
    let a1f = shift(a1, t1, l_tab);
    let b1f = shift(b1, t1, l_tab);
    let a2 = p(r_b, e2);
    let b2 = p(r_tab, e2);
    let s2 = p(r_side, e2);
    let a2f = shift(a2, t2, l_tab);
    let b2f = shift(b2, t2, l_tab);
    let h1 = shift(p(r_hc, e1), t1, l_tab / 2.0);
    let h2 = shift(p(r_hc, e2), t2, l_tab / 2.0);

    let outline = Loop2::new(vec![
        Seg2::Line { p0: a1f, p1: b1f },
        Seg2::Line { p0: b1f, p1: b1 },
        Seg2::Line { p0: b1, p1: s1 },
        Seg2::Arc { center: [0.0, 0.0], radius: r_side, a0: th1, a1: phi },
        Seg2::Line { p0: p(r_side, [phi.cos(), phi.sin()]), p1: p(r_mid, [phi.cos(), phi.sin()]) },
        Seg2::Arc { center: [0.0, 0.0], radius: r_mid, a0: phi, a1: TAU - phi },
        Seg2::Line {
            p0: p(r_mid, [(TAU - phi).cos(), (TAU - phi).sin()]),
            p1: p(r_side, [(TAU - phi).cos(), (TAU - phi).sin()]),
        },
        Seg2::Arc { center: [0.0, 0.0], radius: r_side, a0: TAU - phi, a1: th2 },
        Seg2::Line { p0: s2, p1: b2 },
        Seg2::Line { p0: b2, p1: b2f },
        Seg2::Line { p0: b2f, p1: a2f },
        Seg2::Line { p0: a2f, p1: a2 },
        Seg2::Arc { center: [0.0, 0.0], radius: r_b, a0: th2, a1: th1 },
        Seg2::Line { p0: a1, p1: a1f },
    ]);

    let mut fl = FaceList::new();
    let rings = vec![outline, Loop2::circle_hole(h1, r_h), Loop2::circle_hole(h2, r_h)];
    fl.push(Patch::Planar { z: 0.0, up: false, rings: rings.clone() });
    fl.push(Patch::Planar { z: lay.t, up: true, rings });
    push_loop_walls(&mut fl, &[
        (a1f, b1f), (b1f, b1), (b1, s1),
        (p(r_side, [phi.cos(), phi.sin()]), p(r_mid, [phi.cos(), phi.sin()])),
        (p(r_mid, [(TAU - phi).cos(), (TAU - phi).sin()]), p(r_side, [(TAU - phi).cos(), (TAU - phi).sin()])),
        (s2, b2), (b2, b2f), (b2f, a2f), (a2f, a2), (a1, a1f),
    ], 0.0, lay.t);
    fl.push(Patch::CylBand { cx: 0.0, cy: 0.0, radius: r_side, a0: th1, a1: phi, z0: 0.0, z1: lay.t, outward: true });
    fl.push(Patch::CylBand { cx: 0.0, cy: 0.0, radius: r_mid, a0: phi, a1: TAU - phi, z0: 0.0, z1: lay.t, outward: true });
    fl.push(Patch::CylBand { cx: 0.0, cy: 0.0, radius: r_side, a0: TAU - phi, a1: th2, z0: 0.0, z1: lay.t, outward: true });
    fl.push(Patch::CylBand { cx: 0.0, cy: 0.0, radius: r_b, a0: th1, a1: th2, z0: 0.0, z1: lay.t, outward: false });
    fl.push(Patch::CylBand { cx: h1[0], cy: h1[1], radius: r_h, a0: 0.0, a1: TAU, z0: 0.0, z1: lay.t, outward: false });
    fl.push(Patch::CylBand { cx: h2[0], cy: h2[1], radius: r_h, a0: 0.0, a1: TAU, z0: 0.0, z1: lay.t, outward: false });

    part(StandardClass::RetainingRingShaft, row.size.clone(), None, fl)
}

/// Retaining ring for bores (DIN 472). Outer arc is the fit surface; the
/// inner boundary is stepped in five arcs and the lugs point inward.
fn build_bore_ring(row: &DimensionRow) -> PartModel {
    let dd = row.fit_d.unwrap();
    let lay = RingLayout { gap_half: 24f64.to_radians(), t: row.thickness.unwrap() };
    let r_o = dd / 2.0;
    let w_mid = 0.10 * dd + 0.8;
    let w_side = 0.75 * w_mid;
    let w_step = 0.875 * w_mid;
    let r_in_mid = r_o - w_mid;
    let r_in_step = r_o - w_step;
    let r_in_side = r_o - w_side;
    let d_in = 0.14 * dd + 0.4;
    let r_tab = r_in_side - d_in;
    let phi1 = 72f64.to_radians();
    let phi2 = 126f64.to_radians();
    let th1 = lay.gap_half;
    let th2 = TAU - lay.gap_half;

    let r_hc = (r_tab + r_o) / 2.0;
    let l_tab = 0.9 * lay.gap_half.sin() * r_hc;
    let r_h = (0.05 * dd + 0.35).min(0.35 * l_tab).min(0.35 * (r_o - r_tab));

    let e1 = [th1.cos(), th1.sin()];
    let e2 = [th2.cos(), th2.sin()];
    let t1 = [th1.sin(), -th1.cos()];
    let t2 = [-th2.sin(), th2.cos()];
    let p = |r: f64, e: [f64; 2]| [r * e[0], r * e[1]];
    let shift = |q: [f64; 2], t: [f64; 2], l: f64| [q[0] + l * t[0], q[1] + l * t[1]];
    let dir = |ang: f64| [ang.cos(), ang.sin()];

    let b1 = p(r_o, e1);
    let a1 = p(r_tab, e1);
    let s1 = p(r_in_side, e1);
    let b1f = shift(b1, t1, l_tab);
    let a1f = shift(a1, t1, l_tab);
    let b2 = p(r_o, e2);
    let a2 = p(r_tab, e2);
    let s2 = p(r_in_side, e2);
    let b2f = shift(b2, t2, l_tab);
    let a2f = shift(a2, t2, l_tab);
    let h1 = shift(p(r_hc, e1), t1, l_tab / 2.0);
    let h2 = shift(p(r_hc, e2), t2, l_tab / 2.0);

    let outline = Loop2::new(vec![
        Seg2::Arc { center: [0.0, 0.0], radius: r_o, a0: th1, a1: th2 },
        Seg2::Line { p0: b2, p1: b2f },
        Seg2::Line { p0: b2f, p1: a2f },
        Seg2::Line { p0: a2f, p1: a2 },
        Seg2::Line { p0: a2, p1: s2 },
        Seg2::Arc { center: [0.0, 0.0], radius: r_in_side, a0: th2, a1: TAU - phi1 },
        Seg2::Line { p0: p(r_in_side, dir(TAU - phi1)), p1: p(r_in_step, dir(TAU - phi1)) },
        Seg2::Arc { center: [0.0, 0.0], radius: r_in_step, a0: TAU - phi1, a1: TAU - phi2 },
        Seg2::Line { p0: p(r_in_step, dir(TAU - phi2)), p1: p(r_in_mid, dir(TAU - phi2)) },
        Seg2::Arc { center: [0.0, 0.0], radius: r_in_mid, a0: TAU - phi2, a1: phi2 },
        Seg2::Line { p0: p(r_in_mid, dir(phi2)), p1: p(r_in_step, dir(phi2)) },
        Seg2::Arc { center: [0.0, 0.0], radius: r_in_step, a0: phi2, a1: phi1 },
        Seg2::Line { p0: p(r_in_step, dir(phi1)), p1: p(r_in_side, dir(phi1)) },
        Seg2::Arc { center: [0.0, 0.0], radius: r_in_side, a0: phi1, a1: th1 },
        Seg2::Line { p0: s1, p1: a1 },
        Seg2::Line { p0: a1, p1: a1f },
        Seg2::Line { p0: a1f, p1: b1f },
        Seg2::Line { p0: b1f, p1: b1 },
    ]);

    let mut fl = FaceList::new();
    let rings = vec![outline, Loop2::circle_hole(h1, r_h), Loop2::circle_hole(h2, r_h)];
    fl.push(Patch::Planar { z: 0.0, up: false, rings: rings.clone() });
    fl.push(Patch::Planar { z: lay.t, up: true, rings });
    push_loop_walls(&mut fl, &[
        (b2, b2f), (b2f, a2f), (a2f, a2), (a2, s2),
        (p(r_in_side, dir(TAU - phi1)), p(r_in_step, dir(TAU - phi1))),
        (p(r_in_step, dir(TAU - phi2)), p(r_in_mid, dir(TAU - phi2))),
        (p(r_in_mid, dir(phi2)), p(r_in_step, dir(phi2))),
        (p(r_in_step, dir(phi1)), p(r_in_side, dir(phi1))),
        (s1, a1), (a1, a1f), (a1f, b1f), (b1f, b1),
    ], 0.0, lay.t);
    fl.push(Patch::CylBand { cx: 0.0, cy: 0.0, radius: r_o, a0: th1, a1: th2, z0: 0.0, z1: lay.t, outward: true });
    fl.push(Patch::CylBand { cx: 0.0, cy: 0.0, radius: r_in_side, a0: th2, a1: TAU - phi1, z0: 0.0, z1: lay.t, outward: false });
    fl.push(Patch::CylBand { cx: 0.0, cy: 0.0, radius: r_in_step, a0: TAU - phi1, a1: TAU - phi2, z0: 0.0, z1: lay.t, outward: false });
    fl.push(Patch::CylBand { cx: 0.0, cy: 0.0, radius: r_in_mid, a0: TAU - phi2, a1: phi2, z0: 0.0, z1: lay.t, outward: false });
    fl.push(Patch::CylBand { cx: 0.0, cy: 0.0, radius: r_in_step, a0: phi2, a1: phi1, z0: 0.0, z1: lay.t, outward: false });
    fl.push(Patch::CylBand { cx: 0.0, cy: 0.0, radius: r_in_side, a0: phi1, a1: th1, z0: 0.0, z1: lay.t, outward: false });
    fl.push(Patch::CylBand { cx: h1[0], cy: h1[1], radius: r_h, a0: 0.0, a1: TAU, z0: 0.0, z1: lay.t, outward: false });
    fl.push(Patch::CylBand { cx: h2[0], cy: h2[1], radius: r_h, a0: 0.0, a1: TAU, z0: 0.0, z1: lay.t, outward: false });

    part(StandardClass::RetainingRingBore, row.size.clone(), None, fl)
}

/// One vertical wall per straight outline segment, normal away from material.
fn push_loop_walls(fl: &mut FaceList, segs: &[([f64; 2], [f64; 2])], z0: f64, z1: f64) {
    for &(a, b) in segs {
        // Outward = right-hand side of the traversal direction (material is
        // on the left of a CCW outer boundary).
        let d = [b[0] - a[0], b[1] - a[1]];
        let out = [d[1], -d[0], 0.0];
        fl.push(quad_wall([a[0], a[1], z0], [b[0], b[1], z0], [b[0], b[1], z1], [a[0], a[1], z1], out));
    }
}

fn fmt_len(l: f64) -> String {
    if l.fract() == 0.0 {
        format!("{}", l as i64)
    } else {
        format!("{l}")
    }
}

/// Build a part from an explicit standard + size row reference.
///
/// `length` is required for screws and keys, ignored otherwise. `strength`
/// applies to screws and nuts and defaults to "8.8".
pub fn make_from_standard(
    standard: &str,
    size: &str,
    length: Option<f64>,
    strength: Option<&str>,
) -> Result<PartModel, GeomError> {
    let table = DimensionTable::global();
    let row = table.find(standard, size).ok_or_else(|| GeomError::UnknownSize {
        class: StandardClass::Other,
        size: format!("{standard} {size}"),
    })?;
    let strength = strength.unwrap_or("8.8");
    let need_len = || {
        let l = length.ok_or_else(|| GeomError::BadSizeKey {
            size: size.to_string(),
            reason: format!("{standard} needs a length"),
        })?;
        let (lo, hi) = (row.len_min.unwrap(), row.len_max.unwrap());
        if l < lo || l > hi {
            return Err(GeomError::BadSizeKey {
                size: size.to_string(),
                reason: format!("length {l} outside [{lo}, {hi}] for {standard} {size}"),
            });
        }
        Ok(l)
    };
    Ok(match standard {
        "ISO 4762" => build_socket_head_screw(row, need_len()?, strength),
        "ISO 10642" => build_countersunk_screw(row, need_len()?, strength),
        "ISO 4014" | "ISO 4017" | "ISO 8676" => build_hex_head_screw(row, need_len()?, strength),
        "ISO 4032" | "ISO 4033" | "ISO 4035" | "ISO 8673" | "ISO 8674" | "ISO 8675" => {
            build_hex_nut(row, strength)
        }
        "ISO 7090" => build_washer(row),
        "DIN 471" => build_shaft_ring(row),
        "DIN 472" => build_bore_ring(row),
        "DIN 6885" => build_key(row, need_len()?),
        _ => unreachable!("validated table"),
    })
}

/// Build a part from a class-level size key, e.g.
/// `(HexSocketHeadCapScrew, "M12x80")` or `(ParallelKeyA, "5x5x12")`.
///
/// Screw and nut keys may carry a fine pitch ("M12x1.25x60", "M12x1.25");
/// the matching fine-pitch standard is then used.
pub fn make_standard_part(
    class: StandardClass,
    size_key: &str,
    strength: Option<&str>,
) -> Result<PartModel, GeomError> {
    let bad = |reason: &str| GeomError::BadSizeKey { size: size_key.into(), reason: reason.into() };
    let parse_screw = |key: &str| -> Result<(String, Option<f64>, f64), GeomError> {
        // "M12x80" or "M12x1.25x60" -> (size, fine pitch, length)
        let parts: Vec<&str> = key.split('x').collect();
        match parts.len() {
            2 => Ok((parts[0].into(), None, parts[1].parse().map_err(|_| bad("bad length"))?)),
            3 => Ok((
                parts[0].into(),
                Some(parts[1].parse().map_err(|_| bad("bad pitch"))?),
                parts[2].parse().map_err(|_| bad("bad length"))?,
            )),
            _ => Err(bad("expected SIZExLENGTH")),
        }
    };
    match class {
        StandardClass::HexSocketHeadCapScrew => {
            let (size, fine, len) = parse_screw(size_key)?;
            if fine.is_some() {
                return Err(bad("fine pitch not tabulated for socket head cap screws"));
            }
            make_from_standard("ISO 4762", &size, Some(len), strength)
        }
        StandardClass::HexSocketCountersunkScrew => {
            let (size, fine, len) = parse_screw(size_key)?;
            if fine.is_some() {
                return Err(bad("fine pitch not tabulated for countersunk screws"));
            }
            make_from_standard("ISO 10642", &size, Some(len), strength)
        }
        StandardClass::HexHeadScrew => {
            let (size, fine, len) = parse_screw(size_key)?;
            match fine {
                None => make_from_standard("ISO 4017", &size, Some(len), strength),
                Some(p) => {
                    let row = DimensionTable::global()
                        .find("ISO 8676", &size)
                        .ok_or_else(|| bad("no fine-pitch row"))?;
                    if row.pitch != Some(p) {
                        return Err(bad(&format!("fine pitch {p} not tabulated")));
                    }
                    make_from_standard("ISO 8676", &size, Some(len), strength)
                }
            }
        }
        StandardClass::HexNut => {
            let parts: Vec<&str> = size_key.split('x').collect();
            match parts.len() {
                1 => make_from_standard("ISO 4032", size_key, None, strength),
                2 => {
                    let p: f64 = parts[1].parse().map_err(|_| bad("bad pitch"))?;
                    let row = DimensionTable::global()
                        .find("ISO 8673", parts[0])
                        .ok_or_else(|| bad("no fine-pitch row"))?;
                    if row.pitch != Some(p) {
                        return Err(bad(&format!("fine pitch {p} not tabulated")));
                    }
                    make_from_standard("ISO 8673", parts[0], None, strength)
                }
                _ => Err(bad("expected SIZE or SIZExPITCH")),
            }
        }
        StandardClass::ChamferedPlainWasher => make_from_standard("ISO 7090", size_key, None, None),
        StandardClass::RetainingRingShaft => make_from_standard("DIN 471", size_key, None, None),
        StandardClass::RetainingRingBore => make_from_standard("DIN 472", size_key, None, None),
        StandardClass::ParallelKeyA | StandardClass::ParallelKeyC => {
            let parts: Vec<&str> = size_key.split('x').collect();
            if parts.len() != 3 {
                return Err(bad("expected WxHxL"));
            }
            let len: f64 = parts[2].parse().map_err(|_| bad("bad length"))?;
            let form = if class == StandardClass::ParallelKeyC { "C" } else { "A" };
            let section = format!("{}-{}x{}", form, parts[0], parts[1]);
            make_from_standard("DIN 6885", &section, Some(len), None)
        }
        StandardClass::Other => Err(GeomError::NotGenerable { class }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count_kinds(p: &PartModel) -> (usize, usize, usize) {
        let pl = p.faces.iter().filter(|f| f.is_plane()).count();
        let cy = p.faces.iter().filter(|f| f.is_cylinder()).count();
        let co = p.faces.iter().filter(|f| f.is_cone()).count();
        (pl, cy, co)
    }

    #[test]
    fn shcs_face_inventory_matches_its_rule() {
        let p = make_standard_part(StandardClass::HexSocketHeadCapScrew, "M12x80", Some("10.9"))
            .unwrap();
        let (pl, cy, co) = count_kinds(&p);
        assert_eq!((pl, cy, co), (10, 2, 2));
        assert_eq!(p.faces.len(), 14);
        let one_edge = p.faces.iter().filter(|f| f.is_plane() && f.edge_count() == 1).count();
        let seven_edge = p.faces.iter().filter(|f| f.is_plane() && f.edge_count() == 7).count();
        assert_eq!(one_edge, 1, "exactly one single-edge plane (the tip)");
        assert_eq!(seven_edge, 1, "exactly one seven-edge plane (head top)");
        let t = p.features.as_ref().unwrap().thread.as_ref().unwrap();
        assert_eq!(t.thread_length, 36.0);
        assert_eq!(t.pitch, 1.75);
    }

    #[test]
    fn hex_nut_has_two_seven_edge_planes() {
        let p = make_standard_part(StandardClass::HexNut, "M12", Some("10.9")).unwrap();
        assert_eq!(p.faces.len(), 9);
        let seven: Vec<_> =
            p.faces.iter().filter(|f| f.is_plane() && f.edge_count() == 7).collect();
        assert_eq!(seven.len(), 2);
        let (pl, cy, co) = count_kinds(&p);
        assert_eq!((pl, cy, co), (8, 1, 0));
    }

    #[test]
    fn face_counts_separate_all_classes() {
        let parts = [
            make_standard_part(StandardClass::HexHeadScrew, "M10x60", None).unwrap(),
            make_standard_part(StandardClass::HexSocketHeadCapScrew, "M10x60", None).unwrap(),
            make_standard_part(StandardClass::HexSocketCountersunkScrew, "M10x60", None).unwrap(),
            make_standard_part(StandardClass::HexNut, "M10", None).unwrap(),
            make_standard_part(StandardClass::RetainingRingShaft, "10", None).unwrap(),
            make_standard_part(StandardClass::RetainingRingBore, "10", None).unwrap(),
            make_standard_part(StandardClass::ParallelKeyA, "5x5x20", None).unwrap(),
            make_standard_part(StandardClass::ParallelKeyC, "5x5x20", None).unwrap(),
            make_standard_part(StandardClass::ChamferedPlainWasher, "10", None).unwrap(),
        ];
        let counts: Vec<usize> = parts.iter().map(|p| p.faces.len()).collect();
        let mut uniq = counts.clone();
        uniq.sort();
        uniq.dedup();
        assert_eq!(uniq.len(), counts.len(), "face totals must differ: {counts:?}");
    }

    #[test]
    fn ring_cylinder_radius_order() {
        let p = make_standard_part(StandardClass::RetainingRingShaft, "10", None).unwrap();
        let mut radii: Vec<f64> = p.faces.iter().filter_map(|f| f.cylinder_radius()).collect();
        radii.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert_eq!(radii.len(), 6);
        assert_eq!(radii[3], 5.0, "4th largest cylinder is the shaft fit");
        let p = make_standard_part(StandardClass::RetainingRingBore, "10", None).unwrap();
        let mut radii: Vec<f64> = p.faces.iter().filter_map(|f| f.cylinder_radius()).collect();
        radii.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert_eq!(radii.len(), 8);
        assert_eq!(radii[0], 5.0, "largest cylinder is the bore fit");
    }

    #[test]
    fn key_forms_differ_only_by_the_hole() {
        let a = make_standard_part(StandardClass::ParallelKeyA, "5x5x12", None).unwrap();
        let c = make_standard_part(StandardClass::ParallelKeyC, "5x5x12", None).unwrap();
        assert_eq!(a.faces.len(), 6);
        assert_eq!(c.faces.len(), 8);
        assert_eq!(c.faces.iter().filter(|f| f.is_cone()).count(), 1);
    }

    #[test]
    fn washer_smallest_cylinder_is_the_bore() {
        let p = make_standard_part(StandardClass::ChamferedPlainWasher, "12", None).unwrap();
        assert_eq!(p.faces.len(), 5);
        let min_r = p
            .faces
            .iter()
            .filter_map(|f| f.cylinder_radius())
            .fold(f64::INFINITY, f64::min);
        assert_eq!(min_r * 2.0, 12.0);
    }

    #[test]
    fn out_of_range_length_is_rejected() {
        let err = make_standard_part(StandardClass::HexSocketHeadCapScrew, "M12x500", None);
        assert!(err.is_err());
        let err = make_standard_part(StandardClass::ParallelKeyA, "5x5x300", None);
        assert!(err.is_err());
    }

    #[test]
    fn fine_pitch_screw_uses_fine_standard_metadata() {
        let p = make_standard_part(StandardClass::HexHeadScrew, "M12x1.25x60", None).unwrap();
        let t = p.features.as_ref().unwrap().thread.as_ref().unwrap();
        assert_eq!(t.pitch, 1.25);
        assert_eq!(t.pitch_kind, PitchKind::Fine);
        assert_eq!(t.thread_length, 60.0, "fine hex screws are fully threaded");
    }

    #[test]
    fn all_class_parts_have_positive_face_areas() {
        for class in StandardClass::STANDARD {
            let key = match class {
                StandardClass::HexHeadScrew
                | StandardClass::HexSocketHeadCapScrew
                | StandardClass::HexSocketCountersunkScrew => "M8x40",
                StandardClass::HexNut => "M8",
                StandardClass::RetainingRingShaft | StandardClass::RetainingRingBore => "16",
                StandardClass::ParallelKeyA | StandardClass::ParallelKeyC => "6x6x25",
                StandardClass::ChamferedPlainWasher => "8",
                StandardClass::Other => unreachable!(),
            };
            let p = make_standard_part(class, key, None).unwrap();
            for f in &p.faces {
                assert!(f.area() > 1e-6, "{class:?} face {} has area {}", f.id, f.area());
            }
        }
    }
}
