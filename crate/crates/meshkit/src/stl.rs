//! STL read/write (binary and ASCII).
//!
//! Vertices are stored as f32 per the format; the writer casts through f32
//! before computing facet normals so that write -> read -> write reproduces
//! the byte stream exactly.

use crate::mesh::{MeshBuilder, TriangleMesh};
use geomcore::vec3::{self, V3};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StlError {
    #[error("binary STL truncated at byte {at}: need {need} bytes")]
    Truncated { at: usize, need: usize },
    #[error("binary STL header says {header} triangles but payload holds {actual}")]
    CountMismatch { header: u32, actual: usize },
    #[error("ASCII STL parse error on line {line}: {what}")]
    Ascii { line: usize, what: String },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

const HEADER: &[u8; 80] = &{
    let mut h = [0u8; 80];
    let tag = b"binary mesh export";
    let mut i = 0;
    while i < tag.len() {
        h[i] = tag[i];
        i += 1;
    }
    h
};

fn f32_normal(a: V3, b: V3, c: V3) -> [f32; 3] {
    let n = vec3::cross(vec3::sub(b, a), vec3::sub(c, a));
    let len = vec3::norm(n);
    if len <= 0.0 {
        return [0.0; 3];
    }
    [(n[0] / len) as f32, (n[1] / len) as f32, (n[2] / len) as f32]
}

fn tri_as_f32(mesh: &TriangleMesh, t: [u32; 3]) -> [[f32; 3]; 3] {
    let f = |i: u32| {
        let v = mesh.vertices[i as usize];
        [v[0] as f32, v[1] as f32, v[2] as f32]
    };
    [f(t[0]), f(t[1]), f(t[2])]
}

fn widen(v: [f32; 3]) -> V3 {
    [v[0] as f64, v[1] as f64, v[2] as f64]
}

pub fn write_binary_stl(mesh: &TriangleMesh) -> Vec<u8> {
    let mut out = Vec::with_capacity(84 + 50 * mesh.triangles.len());
    out.extend_from_slice(HEADER);
    out.extend_from_slice(&(mesh.triangles.len() as u32).to_le_bytes());
    for &t in &mesh.triangles {
        let v = tri_as_f32(mesh, t);
        let n = f32_normal(widen(v[0]), widen(v[1]), widen(v[2]));
        for x in n {
            out.extend_from_slice(&x.to_le_bytes());
        }
        for p in v {
            for x in p {
                out.extend_from_slice(&x.to_le_bytes());
            }
        }
        out.extend_from_slice(&0u16.to_le_bytes());
    }
    out
}

pub fn write_ascii_stl(mesh: &TriangleMesh, name: &str) -> String {
    let mut s = String::new();
    s.push_str(&format!("solid {name}\n"));
    for &t in &mesh.triangles {
        let v = tri_as_f32(mesh, t);
        let n = f32_normal(widen(v[0]), widen(v[1]), widen(v[2]));
        s.push_str(&format!("  facet normal {} {} {}\n", n[0], n[1], n[2]));
        s.push_str("    outer loop\n");
        for p in v {
            s.push_str(&format!("      vertex {} {} {}\n", p[0], p[1], p[2]));
        }
        s.push_str("    endloop\n  endfacet\n");
    }
    s.push_str(&format!("endsolid {name}\n"));
    s
}

/// Parse STL bytes, auto-detecting the ASCII and binary variants.
pub fn read_stl(bytes: &[u8]) -> Result<TriangleMesh, StlError> {
    let head = &bytes[..bytes.len().min(1024)];
    let looks_ascii = head.starts_with(b"solid")
        && head.windows(5).any(|w| w == b"facet")
        || (head.starts_with(b"solid") && head.ends_with(b"\n") && bytes.len() < 90);
    if looks_ascii {
        read_ascii(bytes)
    } else {
        read_binary(bytes)
    }
}

fn read_binary(bytes: &[u8]) -> Result<TriangleMesh, StlError> {
    if bytes.len() < 84 {
        return Err(StlError::Truncated { at: bytes.len(), need: 84 });
    }
    let count = u32::from_le_bytes(bytes[80..84].try_into().unwrap());
    let need = 84 + 50 * count as usize;
    if bytes.len() < need {
        return Err(StlError::Truncated { at: bytes.len(), need });
    }
    let actual = (bytes.len() - 84) / 50;
    if actual != count as usize {
        return Err(StlError::CountMismatch { header: count, actual });
    }
    let mut b = MeshBuilder::new();
    for i in 0..count as usize {
        let rec = &bytes[84 + 50 * i..84 + 50 * (i + 1)];
        let mut p = [[0.0f64; 3]; 3];
        for (v, pv) in p.iter_mut().enumerate() {
            for k in 0..3 {
                let off = 12 + 12 * v + 4 * k;
                let x = f32::from_le_bytes(rec[off..off + 4].try_into().unwrap());
                pv[k] = x as f64;
            }
        }
        b.add_triangle(p[0], p[1], p[2]);
    }
    Ok(b.finish())
}

fn read_ascii(bytes: &[u8]) -> Result<TriangleMesh, StlError> {
    let text = std::str::from_utf8(bytes)
        .map_err(|e| StlError::Ascii { line: 0, what: format!("not utf-8: {e}") })?;
    let mut b = MeshBuilder::new();
    let mut tri: Vec<V3> = Vec::with_capacity(3);
    let mut in_loop = false;
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let mut it = raw.split_whitespace();
        match it.next() {
            Some("solid") | Some("endsolid") | Some("facet") | Some("endfacet") | None => {}
            Some("outer") => {
                in_loop = true;
                tri.clear();
            }
            Some("endloop") => {
                if tri.len() != 3 {
                    return Err(StlError::Ascii {
                        line,
                        what: format!("loop has {} vertices, want 3", tri.len()),
                    });
                }
                b.add_triangle(tri[0], tri[1], tri[2]);
                in_loop = false;
            }
            Some("vertex") => {
                if !in_loop {
                    return Err(StlError::Ascii { line, what: "vertex outside loop".into() });
                }
                let mut p = [0.0f64; 3];
                for x in &mut p {
                    let tok = it.next().ok_or_else(|| StlError::Ascii {
                        line,
                        what: "vertex needs 3 coordinates".into(),
                    })?;
                    *x = tok.parse::<f32>().map_err(|e| StlError::Ascii {
                        line,
                        what: format!("bad coordinate {tok:?}: {e}"),
                    })? as f64;
                }
                tri.push(p);
            }
            Some(other) => {
                return Err(StlError::Ascii { line, what: format!("unexpected token {other:?}") });
            }
        }
    }
    Ok(b.finish())
}

pub fn read_stl_file(path: &Path) -> Result<TriangleMesh, StlError> {
    read_stl(&std::fs::read(path)?)
}

pub fn write_binary_stl_file(mesh: &TriangleMesh, path: &Path) -> Result<(), StlError> {
    Ok(std::fs::write(path, write_binary_stl(mesh))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tessellate::{tessellate, DEFAULT_CHORD_TOL};
    use geomcore::build::make_standard_part;
    use geomcore::class::StandardClass;

    fn sample_mesh() -> TriangleMesh {
        let p = make_standard_part(StandardClass::ChamferedPlainWasher, "12", None).unwrap();
        tessellate(&p, DEFAULT_CHORD_TOL).unwrap()
    }

    #[test]
    fn binary_round_trip_is_byte_identical() {
        let m = sample_mesh();
        let b1 = write_binary_stl(&m);
        let m2 = read_stl(&b1).unwrap();
        let b2 = write_binary_stl(&m2);
        assert_eq!(b1, b2);
        assert_eq!(m.triangles.len(), m2.triangles.len());
    }

    #[test]
    fn ascii_round_trip_preserves_geometry() {
        let m = sample_mesh();
        let a = write_ascii_stl(&m, "washer");
        let m2 = read_stl(a.as_bytes()).unwrap();
        assert_eq!(m.triangles.len(), m2.triangles.len());
        assert!((m.signed_volume() - m2.signed_volume()).abs() < 1e-3);
        // f32 Display round-trips exactly, so a second pass is stable.
        let a2 = write_ascii_stl(&m2, "washer");
        let m3 = read_stl(a2.as_bytes()).unwrap();
        assert_eq!(write_binary_stl(&m2), write_binary_stl(&m3));
    }

    #[test]
    fn truncated_binary_reports_offset() {
        let m = sample_mesh();
        let mut b = write_binary_stl(&m);
        b.truncate(b.len() - 13);
        match read_stl(&b) {
            Err(StlError::Truncated { at, need }) => {
                assert_eq!(at, need - 13);
            }
            other => panic!("expected truncation error, got {other:?}"),
        }
    }

    #[test]
    fn ascii_error_carries_line_number() {
        let text = "solid x\n  facet normal 0 0 1\n    outer loop\n      vertex 0 0 zero\n";
        match read_stl(text.as_bytes()) {
            Err(StlError::Ascii { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected ascii error, got {other:?}"),
        }
    }

    #[test]
    fn read_keeps_welded_mesh_closed() {
        let m = sample_mesh();
        assert!(m.is_closed());
        let m2 = read_stl(&write_binary_stl(&m)).unwrap();
        assert!(m2.is_closed(), "f32 rounding must not split welded vertices");
    }
}
