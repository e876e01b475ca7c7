//! Designation strings: standard selection, formatting, and parsing.
//!
//! Grammar (canonical `" - "` separators throughout):
//!
//! ```text
//! <standard> - <size>[ - <strength>]          screws, nuts, washers, rings
//! DIN 6885 - <A|C> - <w>x<h>x<length>         parallel keys
//! ```
//!
//! Screw sizes append the length (`M12x80`); ring sizes append the
//! thickness (`10x1`); washers and nuts echo the table size verbatim.
//! Only screws and nuts may carry a strength suffix, and it is omitted —
//! never an error — when the metadata is absent.

use crate::error::{DesignateError, ParseError};
use crate::extract::StandardProperties;
use crate::validate::DIMENSION_TOLERANCE_MM;
use geomcore::{DimensionRow, DimensionTable, PitchKind, StandardClass};

/// Canonical field separator.
pub const SEPARATOR: &str = " - ";

/// A matched standard plus the full designation text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Designation {
    /// Standard of the matched table row, e.g. `"ISO 4762"`.
    pub standard: String,
    /// Canonical designation, e.g. `"ISO 4762 - M12x80 - 10.9"`.
    pub text: String,
}

const TOL: f64 = DIMENSION_TOLERANCE_MM;

/// Millimetre value for designation text: snapped to 1 µm, integral values
/// printed without a decimal point.
fn fmt_mm(v: f64) -> String {
    let v = (v * 1000.0).round() / 1000.0;
    if v.fract() == 0.0 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

fn require<T: Copy>(
    v: Option<T>,
    class: StandardClass,
    property: &'static str,
) -> Result<T, DesignateError> {
    v.ok_or(DesignateError::MissingProperty { class, property })
}

/// The best-fitting row: candidates are ranked by `closeness` ascending and
/// the first that `fits` wins. With no fitting row the three nearest are
/// reported as evidence.
fn pick_row<'t>(
    family: &'static str,
    candidates: impl Iterator<Item = &'t DimensionRow>,
    score: impl Fn(&DimensionRow) -> (f64, bool),
) -> Result<&'t DimensionRow, DesignateError> {
    let mut scored: Vec<(f64, bool, &DimensionRow)> = candidates
        .map(|r| {
            let (closeness, fits) = score(r);
            (closeness, fits, r)
        })
        .collect();
    scored.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    if let Some(&(_, _, row)) = scored.iter().find(|(_, fits, _)| *fits) {
        return Ok(row);
    }
    let nearest =
        scored.iter().take(3).map(|(_, _, r)| format!("{} {}", r.standard, r.size)).collect();
    Err(DesignateError::NoMatchingStandard { family, tolerance: TOL, nearest })
}

fn within(measured: f64, tabulated: Option<f64>) -> bool {
    tabulated.is_some_and(|t| (measured - t).abs() <= TOL)
}

fn length_in_range(len: f64, row: &DimensionRow) -> bool {
    match (row.len_min, row.len_max) {
        (Some(lo), Some(hi)) => len >= lo - TOL && len <= hi + TOL,
        _ => false,
    }
}

/// Strength suffix for the classes that carry one.
fn strength_suffix(props: &StandardProperties) -> String {
    props.strength_class.as_deref().map(|s| format!("{SEPARATOR}{s}")).unwrap_or_default()
}

fn designate_screw(
    class: StandardClass,
    props: &StandardProperties,
) -> Result<Designation, DesignateError> {
    let d = require(props.nominal_diameter, class, "nominal diameter")?;
    let len = require(props.overall_length, class, "overall length")?;
    let standard: &'static str = match class {
        StandardClass::HexSocketHeadCapScrew => "ISO 4762",
        StandardClass::HexSocketCountersunkScrew => "ISO 10642",
        _ => {
            // Hex head screws split across three standards: fine pitch is
            // ISO 8676, a thread reaching the head is ISO 4017, a plain
            // partial thread is ISO 4014.
            match require(props.pitch_kind, class, "pitch kind")? {
                PitchKind::Fine => "ISO 8676",
                PitchKind::Regular => {
                    let b = require(props.thread_length, class, "thread length")?;
                    if b >= len - TOL {
                        "ISO 4017"
                    } else {
                        "ISO 4014"
                    }
                }
            }
        }
    };
    let table = DimensionTable::global();
    let row = pick_row(standard, table.rows_for(standard), |r| {
        let dn = r.nominal_d().unwrap_or(f64::INFINITY);
        ((dn - d).abs(), (dn - d).abs() <= TOL && length_in_range(len, r))
    })?;
    Ok(Designation {
        standard: standard.to_string(),
        text: format!("{standard}{SEPARATOR}{}x{}{}", row.size, fmt_mm(len), strength_suffix(props)),
    })
}

fn designate_nut(props: &StandardProperties) -> Result<Designation, DesignateError> {
    let class = StandardClass::HexNut;
    let d = require(props.nominal_diameter, class, "nominal diameter")?;
    let h = require(props.height, class, "height")?;
    let kw = require(props.key_width, class, "key width")?;
    // Regular and fine families share bore diameters and heights, so the
    // pitch kind must come from the thread metadata; within a family the
    // style (regular / thick / thin) is whichever standard's height matches.
    let (family, standards): (&'static str, [&'static str; 3]) =
        match require(props.pitch_kind, class, "pitch kind")? {
            PitchKind::Regular => ("ISO 4032/4033/4035", ["ISO 4032", "ISO 4033", "ISO 4035"]),
            PitchKind::Fine => ("ISO 8673/8674/8675", ["ISO 8673", "ISO 8674", "ISO 8675"]),
        };
    let table = DimensionTable::global();
    let candidates = standards.iter().flat_map(|s| table.rows_for(s));
    let row = pick_row(family, candidates, |r| {
        let dn = r.nominal_d().unwrap_or(f64::INFINITY);
        let dh = (r.height.unwrap_or(f64::INFINITY) - h).abs();
        ((dn - d).abs() * 1e3 + dh, (dn - d).abs() <= TOL && dh <= TOL && within(kw, r.wf))
    })?;
    Ok(Designation {
        standard: row.standard.clone(),
        text: format!("{}{SEPARATOR}{}{}", row.standard, row.size, strength_suffix(props)),
    })
}

fn designate_washer(props: &StandardProperties) -> Result<Designation, DesignateError> {
    let class = StandardClass::ChamferedPlainWasher;
    let bore = require(props.nominal_diameter, class, "nominal diameter")?;
    let t = require(props.thickness, class, "thickness")?;
    let table = DimensionTable::global();
    let row = pick_row("ISO 7090", table.rows_for("ISO 7090"), |r| {
        let db = (r.bore_d.unwrap_or(f64::INFINITY) - bore).abs();
        (db, db <= TOL && within(t, r.thickness))
    })?;
    // Washers never carry a strength suffix.
    Ok(Designation {
        standard: row.standard.clone(),
        text: format!("{}{SEPARATOR}{}", row.standard, row.size),
    })
}

fn designate_ring(class: StandardClass, props: &StandardProperties) -> Result<Designation, DesignateError> {
    let fit = require(props.fit_diameter, class, "fit diameter")?;
    let t = require(props.thickness, class, "thickness")?;
    let standard: &'static str =
        if class == StandardClass::RetainingRingBore { "DIN 472" } else { "DIN 471" };
    let table = DimensionTable::global();
    let row = pick_row(standard, table.rows_for(standard), |r| {
        let df = (r.fit_d.unwrap_or(f64::INFINITY) - fit).abs();
        (df, df <= TOL && within(t, r.thickness))
    })?;
    Ok(Designation {
        standard: standard.to_string(),
        text: format!(
            "{standard}{SEPARATOR}{}x{}",
            row.size,
            fmt_mm(row.thickness.unwrap())
        ),
    })
}

fn designate_key(class: StandardClass, props: &StandardProperties) -> Result<Designation, DesignateError> {
    let w = require(props.key_section_width, class, "section width")?;
    let h = require(props.key_section_height, class, "section height")?;
    let len = require(props.key_length, class, "length")?;
    let form = if class == StandardClass::ParallelKeyC { "C" } else { "A" };
    let prefix = format!("{form}-");
    let table = DimensionTable::global();
    let candidates = table.rows_for("DIN 6885").filter(|r| r.size.starts_with(&prefix));
    let row = pick_row("DIN 6885", candidates, |r| {
        let dw = (r.key_w.unwrap_or(f64::INFINITY) - w).abs();
        let dh = (r.key_h.unwrap_or(f64::INFINITY) - h).abs();
        (dw + dh, dw <= TOL && dh <= TOL && length_in_range(len, r))
    })?;
    let section = row.size.strip_prefix(&prefix).unwrap();
    Ok(Designation {
        standard: row.standard.clone(),
        text: format!(
            "DIN 6885{SEPARATOR}{form}{SEPARATOR}{section}x{}",
            fmt_mm(len)
        ),
    })
}

/// Designation for a validated part's extracted properties.
///
/// Matches the properties against the dimension tables of the standards
/// admissible for `class` and formats the canonical text. Fails when a
/// required property is absent, when no table row fits within
/// ±[`DIMENSION_TOLERANCE_MM`], or for [`StandardClass::Other`].
pub fn designate(
    class: StandardClass,
    props: &StandardProperties,
) -> Result<Designation, DesignateError> {
    use StandardClass::*;
    match class {
        HexHeadScrew | HexSocketHeadCapScrew | HexSocketCountersunkScrew => {
            designate_screw(class, props)
        }
        HexNut => designate_nut(props),
        ChamferedPlainWasher => designate_washer(props),
        RetainingRingShaft | RetainingRingBore => designate_ring(class, props),
        ParallelKeyA | ParallelKeyC => designate_key(class, props),
        Other => Err(DesignateError::Unsupported { class }),
    }
}

/// A designation decomposed into its grammar fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedDesignation {
    pub standard: String,
    /// Key form letter; `DIN 6885` only.
    pub form: Option<String>,
    pub size: String,
    pub strength: Option<String>,
}

impl ParsedDesignation {
    /// The canonical text (parse ∘ format is the identity).
    pub fn format(&self) -> String {
        let mut out = self.standard.clone();
        if let Some(f) = &self.form {
            out.push_str(SEPARATOR);
            out.push_str(f);
        }
        out.push_str(SEPARATOR);
        out.push_str(&self.size);
        if let Some(s) = &self.strength {
            out.push_str(SEPARATOR);
            out.push_str(s);
        }
        out
    }
}

/// A plain positive decimal number, e.g. `80` or `1.25`.
fn is_number(s: &str) -> bool {
    let mut parts = s.split('.');
    let int = parts.next().unwrap_or("");
    let frac = parts.next();
    parts.next().is_none()
        && !int.is_empty()
        && int.bytes().all(|b| b.is_ascii_digit())
        && frac.is_none_or(|f| !f.is_empty() && f.bytes().all(|b| b.is_ascii_digit()))
}

/// `x`-separated run of exactly `n` numbers, e.g. `5x5x12`.
fn is_number_run(s: &str, n: usize) -> bool {
    let parts: Vec<&str> = s.split('x').collect();
    parts.len() == n && parts.iter().all(|p| is_number(p))
}

fn size_shape_ok(standard: &str, size: &str) -> bool {
    match standard {
        // Screw sizes carry a length suffix, nut sizes do not.
        "ISO 4014" | "ISO 4017" | "ISO 8676" | "ISO 4762" | "ISO 10642" => {
            size.strip_prefix('M').is_some_and(|rest| is_number_run(rest, 2))
        }
        "ISO 4032" | "ISO 4033" | "ISO 4035" | "ISO 8673" | "ISO 8674" | "ISO 8675" => {
            size.strip_prefix('M').is_some_and(is_number)
        }
        "ISO 7090" => is_number(size),
        "DIN 471" | "DIN 472" => is_number_run(size, 2),
        "DIN 6885" => is_number_run(size, 3),
        _ => false,
    }
}

fn strength_allowed(standard: &str) -> bool {
    !matches!(standard, "ISO 7090" | "DIN 471" | "DIN 472" | "DIN 6885")
}

fn is_strength(s: &str) -> bool {
    is_number(s)
}

/// Parse a designation against the documented grammar.
///
/// The standard must be one of the tabulated standards; the size must have
/// that family's shape; a strength field is only admitted on screws and
/// nuts. `DIN 6885` takes a mandatory form field (`A` or `C`) and no
/// strength.
pub fn parse_designation(text: &str) -> Result<ParsedDesignation, ParseError> {
    let fields: Vec<&str> = text.split(SEPARATOR).collect();
    if fields.len() < 2 {
        return Err(ParseError::BadShape(text.to_string()));
    }
    let standard = fields[0];
    if !DimensionTable::global().standards().contains(standard) {
        return Err(ParseError::UnknownStandard(standard.to_string()));
    }
    if standard == "DIN 6885" {
        let [_, form, size] = fields[..] else {
            return Err(ParseError::BadShape(text.to_string()));
        };
        if form != "A" && form != "C" {
            return Err(ParseError::BadForm(form.to_string()));
        }
        if !size_shape_ok(standard, size) {
            return Err(ParseError::BadSize(size.to_string()));
        }
        return Ok(ParsedDesignation {
            standard: standard.to_string(),
            form: Some(form.to_string()),
            size: size.to_string(),
            strength: None,
        });
    }
    let (size, strength) = match fields[..] {
        [_, size] => (size, None),
        [_, size, strength] if strength_allowed(standard) => (size, Some(strength)),
        _ => return Err(ParseError::BadShape(text.to_string())),
    };
    if !size_shape_ok(standard, size) {
        return Err(ParseError::BadSize(size.to_string()));
    }
    if let Some(s) = strength {
        if !is_strength(s) {
            return Err(ParseError::BadStrength(s.to_string()));
        }
    }
    Ok(ParsedDesignation {
        standard: standard.to_string(),
        form: None,
        size: size.to_string(),
        strength: strength.map(str::to_string),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn screw_props(d: f64, len: f64, b: f64, kind: PitchKind, strength: Option<&str>) -> StandardProperties {
        StandardProperties {
            nominal_diameter: Some(d),
            overall_length: Some(len),
            thread_length: Some(b),
            pitch_kind: Some(kind),
            strength_class: strength.map(str::to_string),
            ..Default::default()
        }
    }

    #[test]
    fn hex_screw_standard_tracks_thread_form() {
        use StandardClass::HexHeadScrew;
        let partial = designate(HexHeadScrew, &screw_props(12.0, 60.0, 30.0, PitchKind::Regular, None)).unwrap();
        assert_eq!(partial.text, "ISO 4014 - M12x60");
        let full = designate(HexHeadScrew, &screw_props(12.0, 60.0, 60.0, PitchKind::Regular, None)).unwrap();
        assert_eq!(full.text, "ISO 4017 - M12x60");
        let fine = designate(HexHeadScrew, &screw_props(12.0, 60.0, 60.0, PitchKind::Fine, Some("10.9"))).unwrap();
        assert_eq!(fine.text, "ISO 8676 - M12x60 - 10.9");
    }

    #[test]
    fn nut_style_is_selected_by_height() {
        let mut props = StandardProperties {
            nominal_diameter: Some(12.0),
            key_width: Some(18.0),
            height: Some(10.8),
            pitch_kind: Some(PitchKind::Regular),
            strength_class: Some("10.9".into()),
            ..Default::default()
        };
        assert_eq!(designate(StandardClass::HexNut, &props).unwrap().text, "ISO 4032 - M12 - 10.9");
        props.height = Some(12.0);
        assert_eq!(designate(StandardClass::HexNut, &props).unwrap().standard, "ISO 4033");
        props.height = Some(6.0);
        assert_eq!(designate(StandardClass::HexNut, &props).unwrap().standard, "ISO 4035");
        props.height = Some(10.8);
        props.pitch_kind = Some(PitchKind::Fine);
        assert_eq!(designate(StandardClass::HexNut, &props).unwrap().standard, "ISO 8673");
    }

    #[test]
    fn unmatched_sizes_report_the_nearest_rows() {
        let props = screw_props(13.0, 60.0, 30.0, PitchKind::Regular, None);
        match designate(StandardClass::HexHeadScrew, &props) {
            Err(DesignateError::NoMatchingStandard { family, nearest, .. }) => {
                assert_eq!(family, "ISO 4014");
                assert_eq!(nearest[0], "ISO 4014 M12");
            }
            other => panic!("expected no matching standard, got {other:?}"),
        }
    }

    #[test]
    fn missing_strength_omits_the_suffix() {
        let d = designate(
            StandardClass::HexSocketHeadCapScrew,
            &screw_props(12.0, 80.0, 36.0, PitchKind::Regular, None),
        )
        .unwrap();
        assert_eq!(d.text, "ISO 4762 - M12x80");
    }

    #[test]
    fn parser_round_trips_canonical_text() {
        for text in [
            "ISO 4762 - M12x80 - 10.9",
            "ISO 4032 - M12 - 10.9",
            "ISO 7090 - 12",
            "DIN 471 - 10x1",
            "DIN 6885 - A - 5x5x12",
            "ISO 8676 - M12x60 - 8.8",
        ] {
            let parsed = parse_designation(text).unwrap();
            assert_eq!(parsed.format(), text);
        }
    }

    #[test]
    fn parser_rejects_malformed_fields() {
        use ParseError::*;
        assert_eq!(parse_designation("ISO 9999 - M12"), Err(UnknownStandard("ISO 9999".into())));
        assert_eq!(parse_designation("ISO 4762"), Err(BadShape("ISO 4762".into())));
        assert_eq!(parse_designation("ISO 7090 - 12 - 8.8"), Err(BadShape("ISO 7090 - 12 - 8.8".into())));
        assert_eq!(parse_designation("DIN 6885 - B - 5x5x12"), Err(BadForm("B".into())));
        assert_eq!(parse_designation("DIN 6885 - A - 5x5"), Err(BadSize("5x5".into())));
        assert_eq!(parse_designation("ISO 4762 - 12x80 - 10.9"), Err(BadSize("12x80".into())));
        assert_eq!(parse_designation("ISO 4762 - M12x80 - fast"), Err(BadStrength("fast".into())));
        assert_eq!(parse_designation("ISO 4032 - M12x1.75"), Err(BadSize("M12x1.75".into())));
    }
}
