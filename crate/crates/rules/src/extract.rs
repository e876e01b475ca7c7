//! Property extraction from analytic part models.
//!
//! Geometric properties are measured on the face list; thread, strength
//! class, and assembly torque are read through feature metadata the way a
//! designer records them (cosmetic thread, configuration name, BOM table).
//! Absent metadata leaves the field absent — only a geometric rule with no
//! candidate faces is an error.

use crate::error::ExtractError;
use crate::measure;
use geomcore::{PartModel, PitchKind, StandardClass};

/// Union of the per-class property sets. Fields are present when the class
/// defines them and the part carries the data; all lengths are in mm,
/// torque in N·m.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StandardProperties {
    /// Across-flats width of the driving hexagon (head, nut body, or
    /// socket).
    pub key_width: Option<f64>,
    /// Nominal thread diameter (screws, nuts) or bore diameter (washers).
    pub nominal_diameter: Option<f64>,
    pub thread_pitch: Option<f64>,
    pub pitch_kind: Option<PitchKind>,
    pub thread_length: Option<f64>,
    /// Screw length per the standard's measuring convention.
    pub overall_length: Option<f64>,
    /// Nut height.
    pub height: Option<f64>,
    pub strength_class: Option<String>,
    pub assembly_torque: Option<f64>,
    /// Washer or retaining-ring thickness.
    pub thickness: Option<f64>,
    /// Shaft or bore diameter a retaining ring fits.
    pub fit_diameter: Option<f64>,
    /// Parallel-key section width, section height, and overall length.
    pub key_section_width: Option<f64>,
    pub key_section_height: Option<f64>,
    pub key_length: Option<f64>,
}

impl StandardProperties {
    /// Every present dimensional field, by name. Torque and strength are
    /// not dimensions and are excluded.
    pub fn lengths(&self) -> Vec<(&'static str, f64)> {
        [
            ("key_width", self.key_width),
            ("nominal_diameter", self.nominal_diameter),
            ("thread_pitch", self.thread_pitch),
            ("thread_length", self.thread_length),
            ("overall_length", self.overall_length),
            ("height", self.height),
            ("thickness", self.thickness),
            ("fit_diameter", self.fit_diameter),
            ("key_section_width", self.key_section_width),
            ("key_section_height", self.key_section_height),
            ("key_length", self.key_length),
        ]
        .into_iter()
        .filter_map(|(n, v)| v.map(|v| (n, v)))
        .collect()
    }
}

fn thread_fields(part: &PartModel, props: &mut StandardProperties) {
    if let Some(meta) = &part.features {
        if let Some(t) = &meta.thread {
            props.nominal_diameter = Some(t.nominal_diameter);
            props.thread_pitch = Some(t.pitch);
            props.pitch_kind = Some(t.pitch_kind);
            props.thread_length = Some(t.thread_length);
        }
        props.strength_class = meta.config_name.clone();
        props.assembly_torque = meta.bom_torque;
    }
}

/// Measure the class-applicable properties of a part.
///
/// The caller is expected to have validated the (part, class) pair first;
/// on mismatched classes the geometric rules simply find no candidates.
pub fn extract_properties(
    part: &PartModel,
    class: StandardClass,
) -> Result<StandardProperties, ExtractError> {
    use StandardClass::*;
    let mut props = StandardProperties::default();
    match class {
        HexHeadScrew | HexSocketHeadCapScrew | HexSocketCountersunkScrew => {
            let dims = match class {
                HexHeadScrew => measure::hex_head_screw_dims(part)?,
                HexSocketHeadCapScrew => measure::socket_head_screw_dims(part)?,
                _ => measure::countersunk_screw_dims(part)?,
            };
            props.key_width = Some(dims.width);
            props.overall_length = Some(dims.length);
            props.nominal_diameter = Some(dims.d);
            thread_fields(part, &mut props);
        }
        HexNut => {
            let dims = measure::hex_nut_dims(part)?;
            props.key_width = Some(dims.wf);
            props.height = Some(dims.height);
            props.nominal_diameter = Some(dims.d);
            thread_fields(part, &mut props);
        }
        ChamferedPlainWasher => {
            let dims = measure::washer_dims(part)?;
            props.nominal_diameter = Some(dims.bore_d);
            props.thickness = Some(dims.thickness);
        }
        RetainingRingShaft | RetainingRingBore => {
            let dims = measure::retaining_ring_dims(part, class == RetainingRingBore)?;
            props.fit_diameter = Some(dims.fit_d);
            props.thickness = Some(dims.thickness);
        }
        ParallelKeyA | ParallelKeyC => {
            let dims = measure::parallel_key_dims(part, class == ParallelKeyC)?;
            props.key_section_width = Some(dims.width);
            props.key_section_height = Some(dims.height);
            props.key_length = Some(dims.length);
        }
        Other => {}
    }
    debug_assert!(
        props.lengths().iter().all(|(_, v)| *v > 0.0),
        "extracted a non-positive dimension"
    );
    Ok(props)
}
