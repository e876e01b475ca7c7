//! Part model and metadata documents.

use crate::class::StandardClass;
use crate::error::GeomError;
use crate::face::{AnalyticFace, FaceId};
use serde::{Deserialize, Serialize};

pub const PART_DOC_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PitchKind {
    Regular,
    Fine,
}

/// Cosmetic thread data. Threads are never modeled as geometry; the shank
/// or bore stays a plain cylinder and this record carries the thread.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThreadSpec {
    pub nominal_diameter: f64,
    pub pitch: f64,
    pub pitch_kind: PitchKind,
    pub thread_length: f64,
}

/// Non-geometric part attributes, the equivalent of CAD feature metadata.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FeatureMeta {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thread: Option<ThreadSpec>,
    /// Assembly torque in Nm, when the source model carried one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bom_torque: Option<f64>,
    /// Configuration name; for fasteners this is the strength class, e.g. "10.9".
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config_name: Option<String>,
}

/// A closed solid described by typed boundary faces, plus provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartModel {
    pub version: u32,
    /// Ground-truth class recorded by the generator.
    pub true_class: StandardClass,
    /// Size identifier within the class, e.g. "M12x80", "10", "5x5x12".
    pub size_key: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub features: Option<FeatureMeta>,
    pub faces: Vec<AnalyticFace>,
}

impl PartModel {
    pub fn face(&self, id: FaceId) -> Result<&AnalyticFace, GeomError> {
        self.faces.iter().find(|f| f.id == id).ok_or(GeomError::NoSuchFace(id))
    }

    pub fn aabb(&self) -> ([f64; 3], [f64; 3]) {
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for f in &self.faces {
            let (l, h) = f.aabb();
            for k in 0..3 {
                lo[k] = lo[k].min(l[k]);
                hi[k] = hi[k].max(h[k]);
            }
        }
        (lo, hi)
    }

    /// Serialize to the part document format (JSON, schema version 1).
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("part model serializes")
    }

    pub fn from_json(text: &str) -> Result<PartModel, GeomError> {
        let part: PartModel =
            serde_json::from_str(text).map_err(|e| GeomError::Document(e.to_string()))?;
        if part.version != PART_DOC_VERSION {
            return Err(GeomError::Document(format!(
                "unsupported document version {} (expected {})",
                part.version, PART_DOC_VERSION
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for f in &part.faces {
            if !seen.insert(f.id) {
                return Err(GeomError::Document(format!("duplicate face id {}", f.id)));
            }
        }
        Ok(part)
    }
}
