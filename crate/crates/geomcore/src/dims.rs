//! Embedded dimension tables.
//!
//! The tables live in `data/dimensions.csv` (schema documented in the file
//! header), are parsed once on first use, and validated: every row must
//! belong to a known standard and carry the dimensions its family needs.

use crate::error::GeomError;
use serde::Deserialize;
use std::collections::BTreeSet;
use std::sync::OnceLock;

const TABLE_TEXT: &str = include_str!("../data/dimensions.csv");
const TABLE_VERSION_TAG: &str = "# dimtab v1";

/// Standard length series used when generating fastener/key variants.
pub const LENGTH_SERIES: [f64; 25] = [
    5.0, 6.0, 8.0, 10.0, 12.0, 16.0, 20.0, 25.0, 30.0, 35.0, 40.0, 45.0, 50.0, 55.0, 60.0, 70.0,
    80.0, 90.0, 100.0, 110.0, 120.0, 140.0, 160.0, 180.0, 200.0,
];

#[derive(Debug, Clone, Deserialize)]
pub struct DimensionRow {
    pub standard: String,
    pub size: String,
    pub pitch: Option<f64>,
    pub pitch_fine: Option<f64>,
    pub wf: Option<f64>,
    pub head_d: Option<f64>,
    pub head_h: Option<f64>,
    pub socket_w: Option<f64>,
    pub bore_d: Option<f64>,
    pub outer_d: Option<f64>,
    pub height: Option<f64>,
    pub thickness: Option<f64>,
    pub key_w: Option<f64>,
    pub key_h: Option<f64>,
    pub fit_d: Option<f64>,
    pub hole_d: Option<f64>,
    pub len_min: Option<f64>,
    pub len_max: Option<f64>,
}

impl DimensionRow {
    /// Nominal thread diameter parsed from an "M12"-style size.
    pub fn nominal_d(&self) -> Option<f64> {
        self.size.strip_prefix('M').and_then(|s| s.parse().ok())
    }

    /// Standard lengths admissible for this row.
    pub fn lengths(&self) -> Vec<f64> {
        match (self.len_min, self.len_max) {
            (Some(lo), Some(hi)) => {
                LENGTH_SERIES.iter().copied().filter(|&l| l >= lo && l <= hi).collect()
            }
            _ => Vec::new(),
        }
    }
}

pub struct DimensionTable {
    rows: Vec<DimensionRow>,
}

const KNOWN_STANDARDS: [&str; 15] = [
    "ISO 4762", "ISO 10642", "ISO 4014", "ISO 4017", "ISO 8676", "ISO 4032", "ISO 4033",
    "ISO 4035", "ISO 8673", "ISO 8674", "ISO 8675", "ISO 7090", "DIN 471", "DIN 472",
    "DIN 6885",
];

impl DimensionTable {
    /// The embedded table, parsed and validated once.
    pub fn global() -> &'static DimensionTable {
        static TABLE: OnceLock<DimensionTable> = OnceLock::new();
        TABLE.get_or_init(|| DimensionTable::parse(TABLE_TEXT).expect("embedded table is valid"))
    }

    pub fn parse(text: &str) -> Result<DimensionTable, GeomError> {
        if !text.starts_with(TABLE_VERSION_TAG) {
            return Err(GeomError::Table(format!(
                "missing version tag {TABLE_VERSION_TAG:?} on the first line"
            )));
        }
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut rows = Vec::new();
        for rec in reader.deserialize() {
            let row: DimensionRow = rec.map_err(|e| GeomError::Table(e.to_string()))?;
            validate_row(&row)?;
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(GeomError::Table("table has no rows".into()));
        }
        Ok(DimensionTable { rows })
    }

    pub fn rows(&self) -> &[DimensionRow] {
        &self.rows
    }

    pub fn standards(&self) -> BTreeSet<&str> {
        self.rows.iter().map(|r| r.standard.as_str()).collect()
    }

    pub fn find(&self, standard: &str, size: &str) -> Option<&DimensionRow> {
        self.rows.iter().find(|r| r.standard == standard && r.size == size)
    }

    pub fn rows_for<'a>(&'a self, standard: &'a str) -> impl Iterator<Item = &'a DimensionRow> {
        self.rows.iter().filter(move |r| r.standard == standard)
    }
}

fn require(row: &DimensionRow, field: &str, v: Option<f64>) -> Result<f64, GeomError> {
    v.ok_or_else(|| {
        GeomError::Table(format!("{} {}: missing required column {field}", row.standard, row.size))
    })
}

fn validate_row(row: &DimensionRow) -> Result<(), GeomError> {
    if !KNOWN_STANDARDS.contains(&row.standard.as_str()) {
        return Err(GeomError::Table(format!("unknown standard {:?}", row.standard)));
    }
    match row.standard.as_str() {
        "ISO 4762" | "ISO 10642" => {
            require(row, "pitch", row.pitch)?;
            require(row, "head_d", row.head_d)?;
            require(row, "head_h", row.head_h)?;
            require(row, "socket_w", row.socket_w)?;
            require(row, "len_min", row.len_min)?;
            require(row, "len_max", row.len_max)?;
            if row.nominal_d().is_none() {
                return Err(GeomError::Table(format!("bad thread size {:?}", row.size)));
            }
        }
        "ISO 4014" | "ISO 4017" | "ISO 8676" => {
            require(row, "pitch", row.pitch)?;
            require(row, "wf", row.wf)?;
            require(row, "head_h", row.head_h)?;
            require(row, "len_min", row.len_min)?;
            require(row, "len_max", row.len_max)?;
        }
        "ISO 4032" | "ISO 4033" | "ISO 4035" | "ISO 8673" | "ISO 8674" | "ISO 8675" => {
            require(row, "pitch", row.pitch)?;
            require(row, "wf", row.wf)?;
            require(row, "bore_d", row.bore_d)?;
            require(row, "height", row.height)?;
        }
        "ISO 7090" => {
            require(row, "bore_d", row.bore_d)?;
            require(row, "outer_d", row.outer_d)?;
            require(row, "thickness", row.thickness)?;
        }
        "DIN 471" | "DIN 472" => {
            require(row, "fit_d", row.fit_d)?;
            require(row, "thickness", row.thickness)?;
        }
        "DIN 6885" => {
            require(row, "key_w", row.key_w)?;
            require(row, "key_h", row.key_h)?;
            require(row, "len_min", row.len_min)?;
            require(row, "len_max", row.len_max)?;
            let (form, _) = row
                .size
                .split_once('-')
                .ok_or_else(|| GeomError::Table(format!("bad key size {:?}", row.size)))?;
            if form == "C" {
                require(row, "hole_d", row.hole_d)?;
            } else if form != "A" {
                return Err(GeomError::Table(format!("unknown key form {form:?}")));
            }
        }
        _ => unreachable!(),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_table_loads() {
        let t = DimensionTable::global();
        assert!(t.rows().len() > 100);
        assert_eq!(t.standards().len(), 15);
    }

    #[test]
    fn pinned_case_study_values() {
        let t = DimensionTable::global();
        let shcs_m12 = t.find("ISO 4762", "M12").unwrap();
        assert_eq!(shcs_m12.socket_w, Some(10.0));
        assert_eq!(shcs_m12.head_d, Some(18.0));
        let nut_m12 = t.find("ISO 4032", "M12").unwrap();
        assert_eq!(nut_m12.wf, Some(18.0));
        assert_eq!(nut_m12.height, Some(10.8));
        let washer_12 = t.find("ISO 7090", "12").unwrap();
        assert_eq!(washer_12.bore_d, Some(12.0));
        assert_eq!(washer_12.thickness, Some(2.5));
        let shcs_m5 = t.find("ISO 4762", "M5").unwrap();
        assert_eq!(shcs_m5.socket_w, Some(4.0));
        let ring_10 = t.find("DIN 471", "10").unwrap();
        assert_eq!(ring_10.thickness, Some(1.0));
        assert!(t.find("DIN 6885", "A-5x5").is_some());
        assert!(t.find("DIN 6885", "A-3x3").is_some());
    }

    #[test]
    fn key_length_ranges_allow_case_study_lengths() {
        let t = DimensionTable::global();
        let k5 = t.find("DIN 6885", "A-5x5").unwrap();
        assert!(k5.len_min.unwrap() <= 12.0 && 12.0 <= k5.len_max.unwrap());
        let k3 = t.find("DIN 6885", "A-3x3").unwrap();
        assert!(k3.len_min.unwrap() <= 11.0 && 11.0 <= k3.len_max.unwrap());
    }

    #[test]
    fn screw_lengths_come_from_series() {
        let t = DimensionTable::global();
        let m12 = t.find("ISO 4762", "M12").unwrap();
        let ls = m12.lengths();
        assert!(ls.contains(&80.0));
        assert!(ls.iter().all(|&l| (20.0..=120.0).contains(&l)));
    }

    #[test]
    fn missing_version_tag_is_rejected() {
        assert!(DimensionTable::parse("standard,size\nISO 4762,M3").is_err());
    }

    #[test]
    fn unknown_standard_is_rejected() {
        let text = "# dimtab v1\nstandard,size,pitch,pitch_fine,wf,head_d,head_h,socket_w,bore_d,outer_d,height,thickness,key_w,key_h,fit_d,hole_d,len_min,len_max\nISO 9999,M3,0.5,,,5.5,3,2.5,,,,,,,,,5,30\n";
        assert!(DimensionTable::parse(text).is_err());
    }
}
