//! Model file.
//!
//! Little-endian layout:
//!
//! | bytes        | content                                             |
//! |--------------|-----------------------------------------------------|
//! | 4            | magic `GSVM`                                        |
//! | 1            | version (1)                                         |
//! | 1            | L, label count                                      |
//! | L            | label codes                                         |
//! | 4            | d, input dimension (u32)                            |
//! | 8 · 3        | C, γ, tol (f64)                                     |
//! | 4            | max_passes (u32)                                    |
//! | 4            | pair count, L·(L−1)/2 (u32)                         |
//! | per pair     | positive code (u8), negative code (u8),             |
//! |              | S = support vector count (u32), bias (f64),         |
//! |              | S coefficients (f32), S·d support vector values (f32) |

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::dataset::SceneClass;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::multiclass::{PairModel, SvmModel};
use super::smo::BinaryModel;
use super::SvmParams;

pub const MODEL_MAGIC: &[u8; 4] = b"GSVM";
pub const MODEL_VERSION: u8 = 1;

pub fn write_model<T: Scalar, W: Write>(m: &SvmModel<T>, mut w: W) -> std::io::Result<()> {
    w.write_all(MODEL_MAGIC)?;
    w.write_all(&[MODEL_VERSION, m.labels.len() as u8])?;
    w.write_all(&m.labels.iter().map(|l| l.code()).collect::<Vec<_>>())?;
    w.write_all(&(m.dim as u32).to_le_bytes())?;
    for v in [m.params.c, m.params.gamma, m.params.tol] {
        w.write_all(&v.to_le_bytes())?;
    }
    w.write_all(&(m.params.max_passes as u32).to_le_bytes())?;
    w.write_all(&(m.pairs.len() as u32).to_le_bytes())?;
    for p in &m.pairs {
        w.write_all(&[p.positive.code(), p.negative.code()])?;
        w.write_all(&(p.model.support_vectors.len() as u32).to_le_bytes())?;
        w.write_all(&p.model.bias.as_f64().to_le_bytes())?;
        for c in &p.model.coefficients {
            w.write_all(&(c.as_f64() as f32).to_le_bytes())?;
        }
        for sv in &p.model.support_vectors {
            for v in sv {
                w.write_all(&(v.as_f64() as f32).to_le_bytes())?;
            }
        }
    }
    w.flush()
}

struct Input<R> {
    r: R,
}

impl<R: Read> Input<R> {
    fn bytes<const N: usize>(&mut self, what: &str) -> Result<[u8; N]> {
        let mut b = [0u8; N];
        self.r.read_exact(&mut b).map_err(|e| match e.kind() {
            std::io::ErrorKind::UnexpectedEof => Error::format(format!("truncated model while reading {what}")),
            _ => Error::format(format!("model read failed at {what}: {e}")),
        })?;
        Ok(b)
    }

    fn u8(&mut self, what: &str) -> Result<u8> {
        Ok(self.bytes::<1>(what)?[0])
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        Ok(u32::from_le_bytes(self.bytes(what)?))
    }

    fn f32(&mut self, what: &str) -> Result<f32> {
        Ok(f32::from_le_bytes(self.bytes(what)?))
    }

    fn f64(&mut self, what: &str) -> Result<f64> {
        Ok(f64::from_le_bytes(self.bytes(what)?))
    }

    fn label(&mut self, what: &str) -> Result<SceneClass> {
        let code = self.u8(what)?;
        SceneClass::from_code(code).ok_or_else(|| Error::format(format!("invalid label code {code} in {what}")))
    }
}

pub fn read_model<T: Scalar, R: Read>(r: R) -> Result<SvmModel<T>> {
    let mut inp = Input { r };
    if &inp.bytes::<4>("magic")? != MODEL_MAGIC {
        return Err(Error::format("not a model file (bad magic)"));
    }
    let version = inp.u8("version")?;
    if version != MODEL_VERSION {
        return Err(Error::format(format!("unsupported model version {version}")));
    }
    let count = inp.u8("label count")? as usize;
    let labels = (0..count).map(|_| inp.label("label table")).collect::<Result<Vec<_>>>()?;
    if labels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::format("label table is not strictly increasing"));
    }
    let dim = inp.u32("dimension")? as usize;
    let params = SvmParams {
        c: inp.f64("c")?,
        gamma: inp.f64("gamma")?,
        tol: inp.f64("tol")?,
        max_passes: inp.u32("max_passes")? as usize,
        ..SvmParams::default()
    };
    params.validate().map_err(|e| Error::format(e.to_string()))?;
    let pair_count = inp.u32("pair count")? as usize;
    if pair_count != count * count.saturating_sub(1) / 2 {
        return Err(Error::format(format!("{pair_count} pair models for {count} labels")));
    }

    let gamma = T::of(params.gamma);
    let mut pairs = Vec::with_capacity(pair_count);
    for a in 0..count {
        for b in a + 1..count {
            let positive = inp.label("pair label")?;
            let negative = inp.label("pair label")?;
            if positive != labels[a] || negative != labels[b] {
                return Err(Error::format(format!(
                    "pair ({positive}, {negative}) out of order, expected ({}, {})",
                    labels[a], labels[b]
                )));
            }
            let svs = inp.u32("support vector count")? as usize;
            let bias = T::of(inp.f64("bias")?);
            let coefficients = (0..svs)
                .map(|_| inp.f32("coefficients").map(|v| T::of(v as f64)))
                .collect::<Result<Vec<_>>>()?;
            let support_vectors = (0..svs)
                .map(|_| {
                    (0..dim)
                        .map(|_| inp.f32("support vectors").map(|v| T::of(v as f64)))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            pairs.push(PairModel {
                positive,
                negative,
                model: BinaryModel {
                    support_vectors,
                    coefficients,
                    bias,
                    gamma,
                    dim,
                },
            });
        }
    }
    let mut probe = [0u8; 1];
    if inp.r.read(&mut probe).map_err(|e| Error::format(e.to_string()))? != 0 {
        return Err(Error::format("trailing bytes after model payload"));
    }
    Ok(SvmModel {
        labels,
        pairs,
        params,
        dim,
    })
}

pub fn save_model<T: Scalar>(m: &SvmModel<T>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_model(m, BufWriter::new(file)).map_err(|e| Error::io(path, e))
}

pub fn load_model<T: Scalar>(path: impl AsRef<Path>) -> Result<SvmModel<T>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_model(BufReader::new(file))
}
