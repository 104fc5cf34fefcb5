//! Compact wire record for sending a descriptor instead of an image.
//!
//! Little-endian layout, 13 + d bytes:
//!
//! | offset | size | content                        |
//! |--------|------|--------------------------------|
//! | 0      | 2    | magic `FG`                     |
//! | 2      | 1    | version (1)                    |
//! | 3      | 2    | dimension d (u16)              |
//! | 5      | 4    | range minimum (f32)            |
//! | 9      | 4    | range maximum (f32)            |
//! | 13     | d    | quantized values, one byte each |
//!
//! Value `q` decodes to `min + q·(max − min)/255`.

use crate::error::{Error, Result};
use crate::gist::GistDescriptor;
use crate::scalar::Scalar;

pub const WIRE_MAGIC: &[u8; 2] = b"FG";
pub const WIRE_VERSION: u8 = 1;
pub const WIRE_HEADER_LEN: usize = 13;

/// An encoded descriptor. Always holds a well-formed header whose declared
/// dimension matches the payload.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WireDescriptor {
    bytes: Vec<u8>,
}

impl WireDescriptor {
    /// Validates the header and length of a received record.
    pub fn from_bytes(bytes: Vec<u8>) -> Result<Self> {
        if bytes.len() < WIRE_HEADER_LEN {
            return Err(Error::format(format!(
                "wire record of {} bytes is shorter than its header",
                bytes.len()
            )));
        }
        if &bytes[..2] != WIRE_MAGIC {
            return Err(Error::format("bad wire magic"));
        }
        if bytes[2] != WIRE_VERSION {
            return Err(Error::format(format!("unsupported wire version {}", bytes[2])));
        }
        let w = Self { bytes };
        let d = w.dim();
        if d == 0 {
            return Err(Error::format("wire record declares dimension 0"));
        }
        if w.bytes.len() != WIRE_HEADER_LEN + d {
            return Err(Error::format(format!(
                "wire record declares {d} values but carries {}",
                w.bytes.len() - WIRE_HEADER_LEN
            )));
        }
        let (min, max) = (w.min(), w.max());
        if !(min.is_finite() && max.is_finite() && min <= max) {
            return Err(Error::format(format!("invalid wire range [{min}, {max}]")));
        }
        Ok(w)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }

    pub fn len(&self) -> usize {
        self.bytes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bytes.is_empty()
    }

    pub fn dim(&self) -> usize {
        u16::from_le_bytes([self.bytes[3], self.bytes[4]]) as usize
    }

    pub fn min(&self) -> f32 {
        f32::from_le_bytes(self.bytes[5..9].try_into().unwrap())
    }

    pub fn max(&self) -> f32 {
        f32::from_le_bytes(self.bytes[9..13].try_into().unwrap())
    }

    pub fn payload(&self) -> &[u8] {
        &self.bytes[WIRE_HEADER_LEN..]
    }
}

/// Largest `f32` not above `v`.
fn f32_floor(v: f64) -> f32 {
    let r = v as f32;
    if r as f64 > v {
        r.next_down()
    } else {
        r
    }
}

/// Smallest `f32` not below `v`.
fn f32_ceil(v: f64) -> f32 {
    let r = v as f32;
    if (r as f64) < v {
        r.next_up()
    } else {
        r
    }
}

/// Quantizes every value to 8 bits over the descriptor's own range.
///
/// The range is widened outward to the nearest `f32` values so the header
/// bounds contain every input.
pub fn encode_descriptor<T: Scalar>(desc: &GistDescriptor<T>) -> Result<WireDescriptor> {
    let d = desc.len();
    if d == 0 || d > u16::MAX as usize {
        return Err(Error::arg(format!("descriptor dimension {d} outside [1, 65535]")));
    }
    let values: Vec<f64> = desc.values().iter().map(|v| v.as_f64()).collect();
    if let Some(v) = values.iter().find(|v| !v.is_finite() || v.abs() > f32::MAX as f64) {
        return Err(Error::arg(format!("descriptor value {v} cannot be encoded")));
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (min, max) = (f32_floor(lo), f32_ceil(hi));

    let mut bytes = Vec::with_capacity(WIRE_HEADER_LEN + d);
    bytes.extend_from_slice(WIRE_MAGIC);
    bytes.push(WIRE_VERSION);
    bytes.extend_from_slice(&(d as u16).to_le_bytes());
    bytes.extend_from_slice(&min.to_le_bytes());
    bytes.extend_from_slice(&max.to_le_bytes());
    let (min, span) = (min as f64, max as f64 - min as f64);
    bytes.extend(values.iter().map(|&v| {
        if span > 0.0 {
            (255.0 * (v - min) / span).round().clamp(0.0, 255.0) as u8
        } else {
            0
        }
    }));
    Ok(WireDescriptor { bytes })
}

pub fn decode_descriptor<T: Scalar>(w: &WireDescriptor) -> Result<GistDescriptor<T>> {
    let (min, max) = (w.min() as f64, w.max() as f64);
    let step = (max - min) / 255.0;
    let values = w
        .payload()
        .iter()
        .map(|&q| T::of(if q == 255 { max } else { min + q as f64 * step }))
        .collect();
    GistDescriptor::new(values).map_err(|e| Error::format(format!("wire record does not hold a descriptor: {e}")))
}
