//! Descriptor cache file.
//!
//! Little-endian layout:
//!
//! | bytes      | content                                   |
//! |------------|-------------------------------------------|
//! | 4          | magic `FMDS`                              |
//! | 1          | version (1)                               |
//! | 8          | N, instance count (u64)                   |
//! | 8          | d, descriptor dimension (u64)             |
//! | N          | label codes, one byte each                |
//! | 4·N·d      | descriptors, row-major f32                |
//! | per source | u32 byte length followed by UTF-8 bytes   |

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::gist::GistDescriptor;
use crate::scalar::Scalar;

use super::{LabeledDataset, SceneClass};

pub const CACHE_MAGIC: &[u8; 4] = b"FMDS";
pub const CACHE_VERSION: u8 = 1;

pub fn write_cache<T: Scalar, W: Write>(ds: &LabeledDataset<T>, mut w: W) -> std::io::Result<()> {
    w.write_all(CACHE_MAGIC)?;
    w.write_all(&[CACHE_VERSION])?;
    w.write_all(&(ds.len() as u64).to_le_bytes())?;
    w.write_all(&(ds.dim() as u64).to_le_bytes())?;
    let codes: Vec<u8> = ds.labels().iter().map(|l| l.code()).collect();
    w.write_all(&codes)?;
    for d in ds.descriptors() {
        for v in d.values() {
            w.write_all(&(v.as_f64() as f32).to_le_bytes())?;
        }
    }
    for s in ds.sources() {
        w.write_all(&(s.len() as u32).to_le_bytes())?;
        w.write_all(s.as_bytes())?;
    }
    w.flush()
}

fn read_exact<R: Read>(r: &mut R, buf: &mut [u8], what: &str) -> Result<()> {
    r.read_exact(buf).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => Error::format(format!("truncated cache while reading {what}")),
        _ => Error::format(format!("cache read failed at {what}: {e}")),
    })
}

fn read_u64<R: Read>(r: &mut R, what: &str) -> Result<u64> {
    let mut b = [0u8; 8];
    read_exact(r, &mut b, what)?;
    Ok(u64::from_le_bytes(b))
}

pub fn read_cache<T: Scalar, R: Read>(mut r: R) -> Result<LabeledDataset<T>> {
    let mut magic = [0u8; 5];
    read_exact(&mut r, &mut magic, "header")?;
    if &magic[..4] != CACHE_MAGIC {
        return Err(Error::format("not a descriptor cache (bad magic)"));
    }
    if magic[4] != CACHE_VERSION {
        return Err(Error::format(format!("unsupported cache version {}", magic[4])));
    }
    let n = read_u64(&mut r, "instance count")? as usize;
    let d = read_u64(&mut r, "dimension")? as usize;
    // guards allocation on corrupt headers; real caches are far smaller
    if n.checked_mul(d).is_none_or(|x| x > (1 << 34)) {
        return Err(Error::format(format!("implausible cache shape {n}x{d}")));
    }

    let mut codes = vec![0u8; n];
    read_exact(&mut r, &mut codes, "labels")?;
    let labels = codes
        .iter()
        .map(|&c| SceneClass::from_code(c).ok_or_else(|| Error::format(format!("invalid label code {c}"))))
        .collect::<Result<Vec<_>>>()?;

    let mut descriptors = Vec::with_capacity(n);
    let mut row = vec![0u8; 4 * d];
    for i in 0..n {
        read_exact(&mut r, &mut row, "descriptors")?;
        let values = row
            .chunks_exact(4)
            .map(|b| T::of(f32::from_le_bytes([b[0], b[1], b[2], b[3]]) as f64))
            .collect();
        descriptors.push(GistDescriptor::new(values).map_err(|e| Error::format(format!("descriptor {i}: {e}")))?);
    }

    let mut sources = Vec::with_capacity(n);
    for _ in 0..n {
        let mut len = [0u8; 4];
        read_exact(&mut r, &mut len, "source length")?;
        let mut bytes = vec![0u8; u32::from_le_bytes(len) as usize];
        read_exact(&mut r, &mut bytes, "source")?;
        sources.push(String::from_utf8(bytes).map_err(|_| Error::format("source is not UTF-8"))?);
    }
    let mut probe = [0u8; 1];
    if r.read(&mut probe).map_err(|e| Error::format(e.to_string()))? != 0 {
        return Err(Error::format("trailing bytes after cache payload"));
    }
    LabeledDataset::new(descriptors, labels, sources)
}

pub fn cache_save<T: Scalar>(ds: &LabeledDataset<T>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_cache(ds, BufWriter::new(file)).map_err(|e| Error::io(path, e))
}

pub fn cache_load<T: Scalar>(path: impl AsRef<Path>) -> Result<LabeledDataset<T>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_cache(BufReader::new(file))
}
