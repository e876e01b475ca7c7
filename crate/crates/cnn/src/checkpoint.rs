//! Checkpoint files.
//!
//! Binary layout, all integers and floats little-endian:
//!
//! ```text
//! magic       8 bytes  "CNNCKPT\0"
//! version     u32      currently 1
//! resolution  u32      input side length
//! n_layers    u32
//! layers      n_layers records:
//!   tag u8: 0 = conv, 1 = pool, 2 = fc
//!   conv: in u32, out u32, act record
//!   fc:   inputs u32, outputs u32, act record
//!   act record: u8 (0 linear, 1 relu, 2 leaky) + f64 slope when leaky
//! blocks      n_layers records: wlen u64, wlen f64 values,
//!                               blen u64, blen f64 values
//! adam flag   u8 (0 = absent, 1 = present)
//!   when present: t u64, alpha f64, beta1 f64, beta2 f64, eps f64,
//!                 len u64, len f64 first moments,
//!                 len u64, len f64 second moments
//! ```
//!
//! Parameters are stored as f64 no matter the network's element type;
//! f32 -> f64 -> f32 is lossless, and double-precision networks round-trip
//! bit for bit.

use std::fs::File;
use std::io::{BufReader, BufWriter, ErrorKind, Read, Write};
use std::path::Path;

use crate::adam::AdamState;
use crate::error::CheckpointError;
use crate::net::{Network, ParamBlock};
use crate::spec::{Activation, LayerSpec, NetworkSpec};
use crate::tensor::Scalar;

const MAGIC: &[u8; 8] = b"CNNCKPT\0";
const VERSION: u32 = 1;

/// Caps on declared sizes so a corrupt header cannot demand absurd
/// allocations before the payload read fails.
const MAX_DIM: usize = 1 << 24;
const MAX_LAYERS: usize = 4096;
const MAX_RESOLUTION: usize = 4096;

fn wr_u32(w: &mut impl Write, v: u32) -> std::io::Result<()> {
    w.write_all(&v.to_le_bytes())
}

fn wr_u64(w: &mut impl Write, v: u64) -> std::io::Result<()> {
    w.write_all(&v.to_le_bytes())
}

fn wr_f64(w: &mut impl Write, v: f64) -> std::io::Result<()> {
    w.write_all(&v.to_le_bytes())
}

fn wr_act(w: &mut impl Write, act: Activation) -> std::io::Result<()> {
    match act {
        Activation::Linear => w.write_all(&[0]),
        Activation::Relu => w.write_all(&[1]),
        Activation::LeakyRelu(a) => {
            w.write_all(&[2])?;
            wr_f64(w, a)
        }
    }
}

pub fn save<F: Scalar>(
    path: &Path,
    net: &Network<F>,
    adam: Option<&AdamState>,
) -> Result<(), CheckpointError> {
    if let Some(a) = adam {
        if a.param_count() != net.param_count() {
            return Err(CheckpointError::Malformed(
                "optimizer state does not match the network",
            ));
        }
    }
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MAGIC)?;
    wr_u32(&mut w, VERSION)?;
    wr_u32(&mut w, net.resolution() as u32)?;
    wr_u32(&mut w, net.spec().layers.len() as u32)?;
    for layer in &net.spec().layers {
        match *layer {
            LayerSpec::Conv { in_ch, out_ch, act } => {
                w.write_all(&[0])?;
                wr_u32(&mut w, in_ch as u32)?;
                wr_u32(&mut w, out_ch as u32)?;
                wr_act(&mut w, act)?;
            }
            LayerSpec::Pool => w.write_all(&[1])?,
            LayerSpec::Fc {
                inputs,
                outputs,
                act,
            } => {
                w.write_all(&[2])?;
                wr_u32(&mut w, inputs as u32)?;
                wr_u32(&mut w, outputs as u32)?;
                wr_act(&mut w, act)?;
            }
        }
    }
    for blk in net.blocks() {
        wr_u64(&mut w, blk.w.len() as u64)?;
        for v in &blk.w {
            wr_f64(&mut w, v.f64())?;
        }
        wr_u64(&mut w, blk.b.len() as u64)?;
        for v in &blk.b {
            wr_f64(&mut w, v.f64())?;
        }
    }
    match adam {
        None => w.write_all(&[0])?,
        Some(a) => {
            w.write_all(&[1])?;
            wr_u64(&mut w, a.t)?;
            wr_f64(&mut w, a.alpha)?;
            wr_f64(&mut w, a.beta1)?;
            wr_f64(&mut w, a.beta2)?;
            wr_f64(&mut w, a.eps)?;
            let (m, v) = a.moments();
            for half in [m, v] {
                wr_u64(&mut w, half.len() as u64)?;
                for x in half {
                    wr_f64(&mut w, *x)?;
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}

struct Rd<R> {
    inner: R,
}

impl<R: Read> Rd<R> {
    fn bytes<const K: usize>(&mut self) -> Result<[u8; K], CheckpointError> {
        let mut b = [0u8; K];
        self.inner.read_exact(&mut b).map_err(|e| {
            if e.kind() == ErrorKind::UnexpectedEof {
                CheckpointError::Truncated
            } else {
                CheckpointError::Io(e)
            }
        })?;
        Ok(b)
    }

    fn u8(&mut self) -> Result<u8, CheckpointError> {
        Ok(self.bytes::<1>()?[0])
    }

    fn u32(&mut self) -> Result<u32, CheckpointError> {
        Ok(u32::from_le_bytes(self.bytes()?))
    }

    fn u64(&mut self) -> Result<u64, CheckpointError> {
        Ok(u64::from_le_bytes(self.bytes()?))
    }

    fn f64(&mut self) -> Result<f64, CheckpointError> {
        Ok(f64::from_le_bytes(self.bytes()?))
    }

    fn f64s(&mut self, n: usize) -> Result<Vec<f64>, CheckpointError> {
        let mut buf = vec![0u8; n * 8];
        self.inner.read_exact(&mut buf).map_err(|e| {
            if e.kind() == ErrorKind::UnexpectedEof {
                CheckpointError::Truncated
            } else {
                CheckpointError::Io(e)
            }
        })?;
        Ok(buf
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect())
    }

    fn act(&mut self) -> Result<Activation, CheckpointError> {
        match self.u8()? {
            0 => Ok(Activation::Linear),
            1 => Ok(Activation::Relu),
            2 => Ok(Activation::LeakyRelu(self.f64()?)),
            _ => Err(CheckpointError::Malformed("unknown activation tag")),
        }
    }

    fn dim(&mut self) -> Result<usize, CheckpointError> {
        let v = self.u32()? as usize;
        if v > MAX_DIM {
            return Err(CheckpointError::Malformed("implausible layer size"));
        }
        Ok(v)
    }
}

pub fn load<F: Scalar>(
    path: &Path,
) -> Result<(Network<F>, Option<AdamState>), CheckpointError> {
    let mut r = Rd {
        inner: BufReader::new(File::open(path)?),
    };
    if &r.bytes::<8>()? != MAGIC {
        return Err(CheckpointError::BadMagic);
    }
    let version = r.u32()?;
    if version != VERSION {
        return Err(CheckpointError::Version(version));
    }
    let resolution = r.u32()? as usize;
    if resolution == 0 || resolution > MAX_RESOLUTION {
        return Err(CheckpointError::Malformed("implausible resolution"));
    }
    let n_layers = r.u32()? as usize;
    if n_layers > MAX_LAYERS {
        return Err(CheckpointError::Malformed("implausible layer count"));
    }
    let mut layers = Vec::with_capacity(n_layers);
    for _ in 0..n_layers {
        layers.push(match r.u8()? {
            0 => LayerSpec::Conv {
                in_ch: r.dim()?,
                out_ch: r.dim()?,
                act: r.act()?,
            },
            1 => LayerSpec::Pool,
            2 => LayerSpec::Fc {
                inputs: r.dim()?,
                outputs: r.dim()?,
                act: r.act()?,
            },
            _ => return Err(CheckpointError::Malformed("unknown layer tag")),
        });
    }
    let spec = NetworkSpec { resolution, layers };
    spec.stages()?; // surfaces inconsistent layer chains as a Spec error

    let mut blocks = Vec::with_capacity(n_layers);
    for layer in &spec.layers {
        let (wlen, blen) = match *layer {
            LayerSpec::Conv { in_ch, out_ch, .. } => (out_ch * in_ch * 27, out_ch),
            LayerSpec::Fc { inputs, outputs, .. } => (outputs * inputs, outputs),
            LayerSpec::Pool => (0, 0),
        };
        if r.u64()? != wlen as u64 {
            return Err(CheckpointError::Malformed("weight block length mismatch"));
        }
        let w = r.f64s(wlen)?.into_iter().map(F::of).collect();
        if r.u64()? != blen as u64 {
            return Err(CheckpointError::Malformed("bias block length mismatch"));
        }
        let b = r.f64s(blen)?.into_iter().map(F::of).collect();
        blocks.push(ParamBlock { w, b });
    }
    let net = Network::from_parts(spec, blocks)?;

    let adam = match r.u8()? {
        0 => None,
        1 => {
            let t = r.u64()?;
            let alpha = r.f64()?;
            let beta1 = r.f64()?;
            let beta2 = r.f64()?;
            let eps = r.f64()?;
            let want = net.param_count() as u64;
            if r.u64()? != want {
                return Err(CheckpointError::Malformed("first-moment length mismatch"));
            }
            let m = r.f64s(want as usize)?;
            if r.u64()? != want {
                return Err(CheckpointError::Malformed("second-moment length mismatch"));
            }
            let v = r.f64s(want as usize)?;
            Some(AdamState::from_parts(alpha, beta1, beta2, eps, t, m, v))
        }
        _ => return Err(CheckpointError::Malformed("unknown optimizer flag")),
    };

    let mut probe = [0u8; 1];
    match r.inner.read(&mut probe) {
        Ok(0) => {}
        Ok(_) => return Err(CheckpointError::Malformed("trailing data")),
        Err(e) => return Err(CheckpointError::Io(e)),
    }
    Ok((net, adam))
}

/// Load a checkpoint that must accept `resolution`-sided inputs.
pub fn load_expecting<F: Scalar>(
    path: &Path,
    resolution: usize,
) -> Result<(Network<F>, Option<AdamState>), CheckpointError> {
    let (net, adam) = load::<F>(path)?;
    if net.resolution() != resolution {
        return Err(CheckpointError::ResolutionMismatch {
            expected: net.resolution(),
            requested: resolution,
        });
    }
    Ok((net, adam))
}
