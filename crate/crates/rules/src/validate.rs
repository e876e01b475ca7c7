//! Rule-based validation of a classification decision.
//!
//! A decided class is checked against the part's analytic model on four
//! requirement levels: total shell face count, face kinds, boundary edge
//! counts, and dimensions against the embedded standard tables. Failures
//! are data, never errors — the report records every check's outcome.

use crate::measure;
use geomcore::{DimensionRow, DimensionTable, PartModel, StandardClass};

/// Absolute tolerance for matching measured dimensions against table rows.
pub const DIMENSION_TOLERANCE_MM: f64 = 0.05;

/// The four requirement levels, in checking order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RequirementKind {
    FaceCount,
    FaceKinds,
    EdgeCounts,
    Dimensions,
}

impl RequirementKind {
    pub const ALL: [RequirementKind; 4] = [
        RequirementKind::FaceCount,
        RequirementKind::FaceKinds,
        RequirementKind::EdgeCounts,
        RequirementKind::Dimensions,
    ];

    pub fn label(self) -> &'static str {
        match self {
            RequirementKind::FaceCount => "face count",
            RequirementKind::FaceKinds => "face kinds",
            RequirementKind::EdgeCounts => "edge counts",
            RequirementKind::Dimensions => "dimensions",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Passed,
    Failed,
    /// The class has no rule on this level (ring bodies have variable
    /// geometry, so their dimensions are not tabulated).
    NotApplicable,
}

/// One requirement's result, with human-readable evidence.
#[derive(Debug, Clone)]
pub struct RequirementCheck {
    pub kind: RequirementKind,
    pub outcome: Outcome,
    pub expected: String,
    pub observed: String,
}

/// Validation result for one (part, class) pair.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub class: StandardClass,
    /// Exactly four checks, ordered face count, kinds, edges, dimensions.
    pub checks: Vec<RequirementCheck>,
    /// (standard, size) of the table row the dimension check matched.
    pub matched_row: Option<(String, String)>,
    /// True iff every applicable check passed.
    pub passed: bool,
}

impl ValidationReport {
    pub fn failures(&self) -> impl Iterator<Item = &RequirementCheck> {
        self.checks.iter().filter(|c| c.outcome == Outcome::Failed)
    }
}

/// Exact face inventory of a class: total, kind counts, and plane counts
/// per edge count.
struct ClassShape {
    face_total: usize,
    planes: usize,
    cylinders: usize,
    cones: usize,
    plane_edges: &'static [(u32, usize)],
}

fn class_shape(class: StandardClass) -> Option<ClassShape> {
    use StandardClass::*;
    let s = match class {
        HexHeadScrew => ClassShape {
            face_total: 11,
            planes: 9,
            cylinders: 1,
            cones: 1,
            plane_edges: &[(1, 1), (4, 6), (6, 1), (7, 1)],
        },
        // The cap screw's shape is checked by its own rule, not a table.
        HexSocketHeadCapScrew => return None,
        HexSocketCountersunkScrew => ClassShape {
            face_total: 12,
            planes: 9,
            cylinders: 1,
            cones: 2,
            plane_edges: &[(1, 1), (4, 6), (6, 1), (7, 1)],
        },
        HexNut => ClassShape {
            face_total: 9,
            planes: 8,
            cylinders: 1,
            cones: 0,
            plane_edges: &[(4, 6), (7, 2)],
        },
        RetainingRingShaft => ClassShape {
            face_total: 18,
            planes: 12,
            cylinders: 6,
            cones: 0,
            plane_edges: &[(4, 10), (16, 2)],
        },
        RetainingRingBore => ClassShape {
            face_total: 22,
            planes: 14,
            cylinders: 8,
            cones: 0,
            plane_edges: &[(4, 12), (20, 2)],
        },
        ParallelKeyA => ClassShape {
            face_total: 6,
            planes: 4,
            cylinders: 2,
            cones: 0,
            plane_edges: &[(4, 4)],
        },
        ParallelKeyC => ClassShape {
            face_total: 8,
            planes: 4,
            cylinders: 3,
            cones: 1,
            plane_edges: &[(4, 2), (5, 2)],
        },
        ChamferedPlainWasher => ClassShape {
            face_total: 5,
            planes: 2,
            cylinders: 2,
            cones: 1,
            plane_edges: &[(2, 2)],
        },
        Other => return None,
    };
    Some(s)
}

fn check(kind: RequirementKind, passed: bool, expected: String, observed: String) -> RequirementCheck {
    RequirementCheck {
        kind,
        outcome: if passed { Outcome::Passed } else { Outcome::Failed },
        expected,
        observed,
    }
}

fn face_count_check(part: &PartModel, expected: usize) -> RequirementCheck {
    let n = part.faces.len();
    check(
        RequirementKind::FaceCount,
        n == expected,
        format!("{expected} shell faces"),
        format!("{n} shell faces"),
    )
}

fn kinds_observed(part: &PartModel) -> (usize, usize, usize) {
    (
        measure::planes(part).len(),
        measure::cylinders(part).len(),
        measure::cones(part).len(),
    )
}

/// Face-kind and edge-count checks for the socket head cap screw. The rule
/// is fixed: the part may only contain two cylindrical faces, two or three
/// conical faces and two distinguished plane faces — one with a single
/// edge, the other(s) with seven edges.
fn cap_screw_checks(part: &PartModel) -> (RequirementCheck, RequirementCheck) {
    let (_, cy, co) = kinds_observed(part);
    let kinds = check(
        RequirementKind::FaceKinds,
        cy == 2 && (2..=3).contains(&co),
        "2 cylindrical and 2-3 conical faces".into(),
        format!("{cy} cylindrical, {co} conical"),
    );
    let hist = measure::plane_edge_histogram(part);
    let ones = hist.get(&1).copied().unwrap_or(0);
    let sevens = hist.get(&7).copied().unwrap_or(0);
    let edges = check(
        RequirementKind::EdgeCounts,
        ones == 1 && sevens == 1,
        "one single-edge plane and one seven-edge plane".into(),
        format!("{ones} single-edge, {sevens} seven-edge"),
    );
    (kinds, edges)
}

fn shape_checks(part: &PartModel, shape: &ClassShape) -> (RequirementCheck, RequirementCheck) {
    let (pl, cy, co) = kinds_observed(part);
    let kinds = check(
        RequirementKind::FaceKinds,
        (pl, cy, co) == (shape.planes, shape.cylinders, shape.cones),
        format!("{} planar, {} cylindrical, {} conical", shape.planes, shape.cylinders, shape.cones),
        format!("{pl} planar, {cy} cylindrical, {co} conical"),
    );
    let hist = measure::plane_edge_histogram(part);
    let expected: Vec<(u32, usize)> = shape.plane_edges.to_vec();
    let observed: Vec<(u32, usize)> = hist.into_iter().collect();
    let fmt = |h: &[(u32, usize)]| {
        h.iter().map(|(e, n)| format!("{n}x{e}-edge")).collect::<Vec<_>>().join(", ")
    };
    let edges = check(
        RequirementKind::EdgeCounts,
        observed == expected,
        format!("planes: {}", fmt(&expected)),
        format!("planes: {}", fmt(&observed)),
    );
    (kinds, edges)
}

fn within(v: f64, target: f64) -> bool {
    (v - target).abs() <= DIMENSION_TOLERANCE_MM
}

fn length_in_range(len: f64, row: &DimensionRow) -> bool {
    match (row.len_min, row.len_max) {
        (Some(lo), Some(hi)) => {
            len >= lo - DIMENSION_TOLERANCE_MM && len <= hi + DIMENSION_TOLERANCE_MM
        }
        _ => true,
    }
}

struct DimOutcome {
    passed: bool,
    expected: String,
    observed: String,
    matched: Option<(String, String)>,
}

impl DimOutcome {
    fn fail(expected: &str, observed: String) -> DimOutcome {
        DimOutcome { passed: false, expected: expected.into(), observed, matched: None }
    }
}

/// Match measured dims against candidate rows: candidates are ordered by
/// closeness on the primary dimension, and the first row satisfying `fits`
/// wins. With no fitting row the nearest candidate is reported as evidence.
fn match_rows<'a>(
    mut candidates: Vec<&'a DimensionRow>,
    closeness: impl Fn(&DimensionRow) -> f64,
    fits: impl Fn(&DimensionRow) -> bool,
    expected_of: impl Fn(&DimensionRow) -> String,
    observed: String,
) -> DimOutcome {
    candidates.sort_by(|a, b| closeness(a).partial_cmp(&closeness(b)).unwrap());
    match candidates.iter().find(|r| fits(r)) {
        Some(row) => DimOutcome {
            passed: true,
            expected: expected_of(row),
            observed,
            matched: Some((row.standard.clone(), row.size.clone())),
        },
        None => {
            let expected = candidates
                .first()
                .map(|r| expected_of(r))
                .unwrap_or_else(|| "a tabulated size".into());
            DimOutcome { passed: false, expected, observed, matched: None }
        }
    }
}

fn dims_for(class: StandardClass, part: &PartModel) -> DimOutcome {
    use StandardClass::*;
    let table = DimensionTable::global();
    let rows = |standards: &[&str]| -> Vec<&DimensionRow> {
        table.rows().iter().filter(|r| standards.contains(&r.standard.as_str())).collect()
    };
    match class {
        HexHeadScrew => match measure::hex_head_screw_dims(part) {
            Ok(m) => match_rows(
                rows(&["ISO 4014", "ISO 4017", "ISO 8676"]),
                |r| (r.nominal_d().unwrap() - m.d).abs(),
                |r| {
                    within(m.d, r.nominal_d().unwrap())
                        && within(m.width, r.wf.unwrap())
                        && within(m.head_h, r.head_h.unwrap())
                        && length_in_range(m.length, r)
                },
                |r| {
                    format!(
                        "{} {}: wf {}, head {}, length {}..{}",
                        r.standard,
                        r.size,
                        r.wf.unwrap(),
                        r.head_h.unwrap(),
                        r.len_min.unwrap(),
                        r.len_max.unwrap()
                    )
                },
                format!("d {:.3}, wf {:.3}, head {:.3}, length {:.3}", m.d, m.width, m.head_h, m.length),
            ),
            Err(e) => DimOutcome::fail("measurable hex head screw dimensions", e.to_string()),
        },
        HexSocketHeadCapScrew | HexSocketCountersunkScrew => {
            let (standard, measured) = if class == HexSocketHeadCapScrew {
                ("ISO 4762", measure::socket_head_screw_dims(part))
            } else {
                ("ISO 10642", measure::countersunk_screw_dims(part))
            };
            match measured {
                Ok(m) => match_rows(
                    rows(&[standard]),
                    |r| (r.nominal_d().unwrap() - m.d).abs(),
                    |r| {
                        within(m.d, r.nominal_d().unwrap())
                            && within(m.width, r.socket_w.unwrap())
                            && within(m.head_h, r.head_h.unwrap())
                            && within(m.head_d.unwrap(), r.head_d.unwrap())
                            && length_in_range(m.length, r)
                    },
                    |r| {
                        format!(
                            "{} {}: head d {}, head h {}, socket {}, length {}..{}",
                            r.standard,
                            r.size,
                            r.head_d.unwrap(),
                            r.head_h.unwrap(),
                            r.socket_w.unwrap(),
                            r.len_min.unwrap(),
                            r.len_max.unwrap()
                        )
                    },
                    format!(
                        "d {:.3}, head d {:.3}, head h {:.3}, socket {:.3}, length {:.3}",
                        m.d,
                        m.head_d.unwrap_or(f64::NAN),
                        m.head_h,
                        m.width,
                        m.length
                    ),
                ),
                Err(e) => DimOutcome::fail("measurable socket screw dimensions", e.to_string()),
            }
        }
        HexNut => match measure::hex_nut_dims(part) {
            Ok(m) => match_rows(
                rows(&["ISO 4032", "ISO 4033", "ISO 4035", "ISO 8673", "ISO 8674", "ISO 8675"]),
                |r| {
                    (r.bore_d.unwrap() - m.d).abs() * 1e3 + (r.height.unwrap() - m.height).abs()
                },
                |r| {
                    within(m.d, r.bore_d.unwrap())
                        && within(m.wf, r.wf.unwrap())
                        && within(m.height, r.height.unwrap())
                },
                |r| {
                    format!(
                        "{} {}: wf {}, height {}",
                        r.standard,
                        r.size,
                        r.wf.unwrap(),
                        r.height.unwrap()
                    )
                },
                format!("bore {:.3}, wf {:.3}, height {:.3}", m.d, m.wf, m.height),
            ),
            Err(e) => DimOutcome::fail("measurable hex nut dimensions", e.to_string()),
        },
        ChamferedPlainWasher => match measure::washer_dims(part) {
            Ok(m) => match_rows(
                rows(&["ISO 7090"]),
                |r| (r.bore_d.unwrap() - m.bore_d).abs(),
                |r| {
                    within(m.bore_d, r.bore_d.unwrap())
                        && within(m.outer_d, r.outer_d.unwrap())
                        && within(m.thickness, r.thickness.unwrap())
                },
                |r| {
                    format!(
                        "{} {}: bore {}, outer {}, thickness {}",
                        r.standard,
                        r.size,
                        r.bore_d.unwrap(),
                        r.outer_d.unwrap(),
                        r.thickness.unwrap()
                    )
                },
                format!(
                    "bore {:.3}, outer {:.3}, thickness {:.3}",
                    m.bore_d, m.outer_d, m.thickness
                ),
            ),
            Err(e) => DimOutcome::fail("measurable washer dimensions", e.to_string()),
        },
        ParallelKeyA | ParallelKeyC => {
            let form = if class == ParallelKeyC { "C-" } else { "A-" };
            match measure::parallel_key_dims(part, class == ParallelKeyC) {
                Ok(m) => match_rows(
                    table.rows_for("DIN 6885").filter(|r| r.size.starts_with(form)).collect(),
                    |r| (r.key_w.unwrap() - m.width).abs() + (r.key_h.unwrap() - m.height).abs(),
                    |r| {
                        within(m.width, r.key_w.unwrap())
                            && within(m.height, r.key_h.unwrap())
                            && length_in_range(m.length, r)
                    },
                    |r| {
                        format!(
                            "DIN 6885 {}: {}x{}, length {}..{}",
                            r.size,
                            r.key_w.unwrap(),
                            r.key_h.unwrap(),
                            r.len_min.unwrap(),
                            r.len_max.unwrap()
                        )
                    },
                    format!("{:.3}x{:.3}x{:.3}", m.width, m.height, m.length),
                ),
                Err(e) => DimOutcome::fail("measurable key dimensions", e.to_string()),
            }
        }
        RetainingRingShaft | RetainingRingBore | Other => unreachable!("dimension rule gated"),
    }
}

/// Check a decided class against the part's analytic model.
///
/// Always returns a full four-entry report; failures are recorded, never
/// raised. The dimension level is marked not-applicable for retaining
/// rings, whose body geometry is variable. A decision of `Other` has no
/// rule set and fails outright.
pub fn validate(part: &PartModel, class: StandardClass) -> ValidationReport {
    use StandardClass::*;

    if class == Other {
        let checks = RequirementKind::ALL
            .into_iter()
            .map(|kind| RequirementCheck {
                kind,
                outcome: Outcome::Failed,
                expected: "a standard-backed class".into(),
                observed: "non-standard parts have no rule set".into(),
            })
            .collect();
        return ValidationReport { class, checks, matched_row: None, passed: false };
    }

    let (face_count, kinds, edges) = if class == HexSocketHeadCapScrew {
        let fc = face_count_check(part, 14);
        let (kinds, edges) = cap_screw_checks(part);
        (fc, kinds, edges)
    } else {
        let shape = class_shape(class).expect("standard class has a shape table");
        let fc = face_count_check(part, shape.face_total);
        let (kinds, edges) = shape_checks(part, &shape);
        (fc, kinds, edges)
    };

    let (dims, matched_row) = if matches!(class, RetainingRingShaft | RetainingRingBore) {
        (
            RequirementCheck {
                kind: RequirementKind::Dimensions,
                outcome: Outcome::NotApplicable,
                expected: "none (ring body geometry is variable)".into(),
                observed: String::new(),
            },
            None,
        )
    } else {
        let d = dims_for(class, part);
        (
            check(RequirementKind::Dimensions, d.passed, d.expected, d.observed),
            d.matched,
        )
    };

    let checks = vec![face_count, kinds, edges, dims];
    let passed = checks.iter().all(|c| c.outcome != Outcome::Failed);
    ValidationReport { class, checks, matched_row, passed }
}
