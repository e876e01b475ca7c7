//! Grid interchange: the binvox run-length format and a dense raw format.
//!
//! Both carry resolution and occupancy only (binvox also keeps the frame);
//! the `surface_only` diagnostic is not persisted.

use crate::grid::{Frame, VoxelGrid};
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BinvoxError {
    #[error("not a binvox stream (first line {0:?})")]
    BadMagic(String),
    #[error("malformed header: {0}")]
    Header(&'static str),
    #[error("grid must be cubic with side >= 2, got {0}x{1}x{2}")]
    BadDims(usize, usize, usize),
    #[error("zero-length run in payload")]
    ZeroRun,
    #[error("occupancy value {0} is not 0 or 1")]
    BadValue(u8),
    #[error("payload overruns the grid: {got} voxels of {expect}")]
    Overflow { got: usize, expect: usize },
    #[error("payload ends early: {got} voxels of {expect}")]
    Truncated { got: usize, expect: usize },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Write the published binvox layout: header lines, then (value, count)
/// byte pairs over the voxels in x-slowest / z / y-fastest order.
pub fn write_binvox<W: Write>(g: &VoxelGrid, w: &mut W) -> io::Result<()> {
    let d = g.resolution();
    // Header transform: mesh = translate + scale * (index / d).
    let s = d as f64 / g.frame.scale;
    let t = [
        (0.0 - g.frame.translate[0]) / g.frame.scale,
        (0.0 - g.frame.translate[1]) / g.frame.scale,
        (0.0 - g.frame.translate[2]) / g.frame.scale,
    ];
    write!(
        w,
        "#binvox 1\ndim {d} {d} {d}\ntranslate {} {} {}\nscale {}\ndata\n",
        t[0], t[1], t[2], s
    )?;

    let mut run_val = 0u8;
    let mut run_len = 0u32;
    let flush = |w: &mut W, val: u8, len: u32| -> io::Result<()> {
        let mut left = len;
        while left > 0 {
            let chunk = left.min(255) as u8;
            w.write_all(&[val, chunk])?;
            left -= chunk as u32;
        }
        Ok(())
    };
    for x in 0..d {
        for z in 0..d {
            for y in 0..d {
                let v = g.get(x, y, z) as u8;
                if run_len > 0 && v == run_val {
                    run_len += 1;
                } else {
                    flush(w, run_val, run_len)?;
                    run_val = v;
                    run_len = 1;
                }
            }
        }
    }
    flush(w, run_val, run_len)
}

pub fn read_binvox<R: Read>(r: R) -> Result<VoxelGrid, BinvoxError> {
    let mut br = BufReader::new(r);
    let mut line = String::new();
    br.read_line(&mut line)?;
    if line.trim_end() != "#binvox 1" {
        return Err(BinvoxError::BadMagic(line.trim_end().to_string()));
    }

    let mut dims: Option<[usize; 3]> = None;
    let mut translate = [0.0f64; 3];
    let mut scale = 1.0f64;
    loop {
        line.clear();
        if br.read_line(&mut line)? == 0 {
            return Err(BinvoxError::Header("missing data section"));
        }
        let mut tok = line.split_whitespace();
        match tok.next() {
            Some("data") => break,
            Some("dim") => {
                let mut d = [0usize; 3];
                for v in &mut d {
                    *v = tok
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or(BinvoxError::Header("dim needs three integers"))?;
                }
                dims = Some(d);
            }
            Some("translate") => {
                for v in &mut translate {
                    *v = tok
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or(BinvoxError::Header("translate needs three numbers"))?;
                }
            }
            Some("scale") => {
                scale = tok
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or(BinvoxError::Header("scale needs a number"))?;
            }
            Some(_) | None => {} // unknown header lines are ignored
        }
    }
    let d = dims.ok_or(BinvoxError::Header("missing dim line"))?;
    if d[0] != d[1] || d[0] != d[2] || d[0] < 2 {
        return Err(BinvoxError::BadDims(d[0], d[1], d[2]));
    }
    let d = d[0];
    let expect = d * d * d;

    // Recover our frame: g = w * fs + ft.
    let fs = d as f64 / scale;
    let ft = [-translate[0] * fs, -translate[1] * fs, -translate[2] * fs];
    let mut g = VoxelGrid::new(d, Frame { scale: fs, translate: ft });

    let mut payload = Vec::new();
    br.read_to_end(&mut payload)?;
    let mut filled = 0usize;
    for pair in payload.chunks(2) {
        if pair.len() < 2 {
            return Err(BinvoxError::Truncated { got: filled, expect });
        }
        let (val, cnt) = (pair[0], pair[1] as usize);
        if val > 1 {
            return Err(BinvoxError::BadValue(val));
        }
        if cnt == 0 {
            return Err(BinvoxError::ZeroRun);
        }
        if filled + cnt > expect {
            return Err(BinvoxError::Overflow { got: filled + cnt, expect });
        }
        if val == 1 {
            for i in filled..filled + cnt {
                // binvox order: index = x*d^2 + z*d + y
                let y = i % d;
                let z = (i / d) % d;
                let x = i / (d * d);
                g.set(x, y, z, true);
            }
        }
        filled += cnt;
    }
    if filled < expect {
        return Err(BinvoxError::Truncated { got: filled, expect });
    }
    Ok(g)
}

pub fn write_binvox_file<P: AsRef<Path>>(g: &VoxelGrid, path: P) -> io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_binvox(g, &mut w)?;
    w.flush()
}

pub fn read_binvox_file<P: AsRef<Path>>(path: P) -> Result<VoxelGrid, BinvoxError> {
    read_binvox(File::open(path)?)
}

pub const DENSE_MAGIC: &[u8; 8] = b"VOXDENSE";
pub const DENSE_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum DenseError {
    #[error("not a dense voxel stream (bad magic)")]
    BadMagic,
    #[error("unsupported dense format version {0}")]
    Version(u32),
    #[error("resolution {0} out of range")]
    BadResolution(u32),
    #[error("occupancy value {0} is not 0 or 1")]
    BadValue(u8),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// 16-byte header (magic, version, resolution), then one byte per voxel in
/// memory order (x-fastest). The frame is not stored.
pub fn write_dense<W: Write>(g: &VoxelGrid, w: &mut W) -> io::Result<()> {
    w.write_all(DENSE_MAGIC)?;
    w.write_all(&DENSE_VERSION.to_le_bytes())?;
    w.write_all(&(g.resolution() as u32).to_le_bytes())?;
    w.write_all(g.data())
}

pub fn read_dense<R: Read>(mut r: R) -> Result<VoxelGrid, DenseError> {
    let mut head = [0u8; 16];
    r.read_exact(&mut head)?;
    if &head[..8] != DENSE_MAGIC {
        return Err(DenseError::BadMagic);
    }
    let version = u32::from_le_bytes(head[8..12].try_into().unwrap());
    if version != DENSE_VERSION {
        return Err(DenseError::Version(version));
    }
    let res = u32::from_le_bytes(head[12..16].try_into().unwrap());
    if !(2..=4096).contains(&res) {
        return Err(DenseError::BadResolution(res));
    }
    let d = res as usize;
    let mut data = vec![0u8; d * d * d];
    r.read_exact(&mut data)?;
    if let Some(&bad) = data.iter().find(|&&v| v > 1) {
        return Err(DenseError::BadValue(bad));
    }
    Ok(VoxelGrid::from_data(d, data, Frame::IDENTITY))
}

pub fn write_dense_file<P: AsRef<Path>>(g: &VoxelGrid, path: P) -> io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_dense(g, &mut w)?;
    w.flush()
}

pub fn read_dense_file<P: AsRef<Path>>(path: P) -> Result<VoxelGrid, DenseError> {
    read_dense(BufReader::new(File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_zero_grid_payload_is_exact_zero_runs() {
        let g = VoxelGrid::new(32, Frame::IDENTITY);
        let mut buf = Vec::new();
        write_binvox(&g, &mut buf).unwrap();
        let data_at = buf.windows(5).position(|w| w == b"data\n").unwrap() + 5;
        let payload = &buf[data_at..];
        // 32768 voxels = 128 runs of 255 plus one run of 128.
        assert_eq!(payload.len(), 129 * 2);
        for pair in payload[..256].chunks(2) {
            assert_eq!(pair, &[0, 255]);
        }
        assert_eq!(&payload[256..], &[0, 128]);
    }

    #[test]
    fn hand_written_binvox_reads_with_expected_occupancy() {
        // Golden bytes laid out from the published format description:
        // a 4^3 grid whose slab x = 2 is solid (binvox order is
        // x-slowest, z, then y-fastest, so that slab is indices 32..48).
        let mut bytes =
            b"#binvox 1\ndim 4 4 4\ntranslate -1 -2 0.5\nscale 8\ndata\n".to_vec();
        bytes.extend_from_slice(&[0, 32, 1, 16, 0, 16]);
        let g = read_binvox(&bytes[..]).unwrap();
        assert_eq!(g.resolution(), 4);
        assert_eq!(g.count(), 16);
        for y in 0..4 {
            for z in 0..4 {
                assert!(g.get(2, y, z));
                assert!(!g.get(1, y, z));
            }
        }
        // Frame round-trips through the header transform: scale 8 over a
        // 4-cell grid is 0.5 cells per unit.
        assert_eq!(g.frame.scale, 0.5);
        assert_eq!(g.frame.translate, [0.5, 1.0, -0.25]);
    }

    #[test]
    fn binvox_rejects_malformed_streams() {
        let cases: Vec<(Vec<u8>, &str)> = vec![
            (b"#voxel 1\ndim 4 4 4\ndata\n".to_vec(), "magic"),
            (b"#binvox 1\ndim 4 4 5\ndata\n".to_vec(), "dims"),
            (b"#binvox 1\ndata\n".to_vec(), "missing dim"),
            (b"#binvox 1\ndim 4 4 4\n".to_vec(), "missing data"),
        ];
        for (bytes, what) in cases {
            assert!(read_binvox(&bytes[..]).is_err(), "{what} accepted");
        }

        let head = b"#binvox 1\ndim 4 4 4\ndata\n";
        let mut overflow = head.to_vec();
        overflow.extend_from_slice(&[0, 255, 0, 255]);
        assert!(matches!(read_binvox(&overflow[..]), Err(BinvoxError::Overflow { .. })));

        let mut short = head.to_vec();
        short.extend_from_slice(&[0, 32]);
        assert!(matches!(read_binvox(&short[..]), Err(BinvoxError::Truncated { .. })));

        let mut zero = head.to_vec();
        zero.extend_from_slice(&[0, 0]);
        assert!(matches!(read_binvox(&zero[..]), Err(BinvoxError::ZeroRun)));

        let mut badval = head.to_vec();
        badval.extend_from_slice(&[2, 64]);
        assert!(matches!(read_binvox(&badval[..]), Err(BinvoxError::BadValue(2))));
    }

    #[test]
    fn dense_header_is_16_bytes_and_validates() {
        let mut g = VoxelGrid::new(4, Frame::IDENTITY);
        g.set(3, 1, 2, true);
        let mut buf = Vec::new();
        write_dense(&g, &mut buf).unwrap();
        assert_eq!(buf.len(), 16 + 64);
        assert_eq!(&buf[..8], DENSE_MAGIC);

        let back = read_dense(&buf[..]).unwrap();
        assert_eq!(back.data(), g.data());

        buf[5] = b'X';
        assert!(matches!(read_dense(&buf[..]), Err(DenseError::BadMagic)));
        buf[5] = b'N';
        buf[8] = 9;
        assert!(matches!(read_dense(&buf[..]), Err(DenseError::Version(9))));
        buf[8] = 1;
        buf[20] = 7;
        assert!(matches!(read_dense(&buf[..]), Err(DenseError::BadValue(7))));
    }
}
