//! Image ingestion: luminance rasters, file decoding and geometric
//! normalization to the descriptor's square working size.
//!
//! Supported inputs are the portable anymap family (P2/P3/P5/P6, maxval 255)
//! and PNG. Colour is reduced to luminance with the Rec. 601 weights.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Upper bound on the working size accepted by [`resize_crop`].
pub const MAX_WORKING_SIZE: usize = 8192;

/// Row-major single channel luminance raster with values in `[0, 255]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage<T> {
    width: usize,
    height: usize,
    data: Vec<T>,
}

impl<T: Scalar> GrayImage<T> {
    pub fn new(width: usize, height: usize, data: Vec<T>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::arg(format!("image dimensions must be positive, got {width}x{height}")));
        }
        if data.len() != width * height {
            return Err(Error::arg(format!(
                "image data has {} values, expected {}x{} = {}",
                data.len(),
                width,
                height,
                width * height
            )));
        }
        let hi = T::of(255.0);
        if let Some(i) = data.iter().position(|v| !v.is_finite() || *v < T::zero() || *v > hi) {
            return Err(Error::arg(format!("pixel {i} is outside [0, 255]")));
        }
        Ok(Self { width, height, data })
    }

    /// Builds an image by evaluating `f(x, y)` at every pixel. Values are
    /// clamped to `[0, 255]`.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> T) -> Result<Self> {
        let hi = T::of(255.0);
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                let v = f(x, y);
                data.push(if v.is_nan() { T::zero() } else { v.max(T::zero()).min(hi) });
            }
        }
        Self::new(width, height, data)
    }

    pub fn filled(width: usize, height: usize, value: T) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> T {
        self.data[y * self.width + x]
    }

    pub fn is_square(&self) -> bool {
        self.width == self.height
    }

    pub fn mean(&self) -> T {
        self.data.iter().copied().sum::<T>() / T::of(self.data.len() as f64)
    }

    /// Left-right mirror image.
    pub fn flip_horizontal(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for row in self.data.chunks_exact(self.width) {
            data.extend(row.iter().rev().copied());
        }
        Self {
            width: self.width,
            height: self.height,
            data,
        }
    }

    /// Values rounded to the nearest 8-bit level.
    pub fn to_u8(&self) -> Vec<u8> {
        self.data
            .iter()
            .map(|v| v.as_f64().round().clamp(0.0, 255.0) as u8)
            .collect()
    }

    fn from_u8(width: usize, height: usize, bytes: &[u8]) -> Result<Self> {
        Self::new(width, height, bytes.iter().map(|&b| T::of(b as f64)).collect())
    }
}

/// Rec. 601 luminance of an 8-bit RGB triple.
///
/// Integer weights summing to 1000 keep saturated inputs exact.
#[inline]
pub fn luminance(r: u8, g: u8, b: u8) -> f64 {
    (299 * r as u32 + 587 * g as u32 + 114 * b as u32) as f64 / 1000.0
}

/// Decodes a PGM/PPM or PNG file into luminance.
pub fn load_image<T: Scalar>(path: impl AsRef<Path>) -> Result<GrayImage<T>> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_image(&bytes)
}

/// Decodes an in-memory image file, sniffing the format from its magic bytes.
pub fn decode_image<T: Scalar>(bytes: &[u8]) -> Result<GrayImage<T>> {
    if bytes.starts_with(b"\x89PNG") {
        decode_png(bytes)
    } else if bytes.len() >= 2 && bytes[0] == b'P' && matches!(bytes[1], b'2' | b'3' | b'5' | b'6') {
        decode_pnm(bytes)
    } else {
        Err(Error::Decode {
            offset: 0,
            message: "unrecognized image signature (expected PNG or P2/P3/P5/P6)".into(),
        })
    }
}

struct PnmCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl PnmCursor<'_> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Decode {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn skip_space_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                c if c.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            self.pos = start;
            return Err(self.err(format!("expected {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Decode {
                offset: start,
                message: format!("{what} out of range"),
            })
    }
}

fn decode_pnm<T: Scalar>(bytes: &[u8]) -> Result<GrayImage<T>> {
    let kind = bytes[1];
    let mut cur = PnmCursor { bytes, pos: 2 };
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    cur.skip_space_and_comments();
    let maxval_at = cur.pos;
    let maxval = cur.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::Decode {
            offset: 2,
            message: format!("zero image dimension {width}x{height}"),
        });
    }
    if maxval != 255 {
        return Err(Error::Decode {
            offset: maxval_at,
            message: format!("unsupported maxval {maxval} (only 255)"),
        });
    }
    let channels = if matches!(kind, b'3' | b'6') { 3 } else { 1 };
    let count = width
        .checked_mul(height)
        .and_then(|p| p.checked_mul(channels))
        .ok_or_else(|| cur.err("image dimensions overflow"))?;

    let samples: Vec<u8> = if matches!(kind, b'5' | b'6') {
        // exactly one whitespace byte separates the header from the raster
        if cur.pos >= bytes.len() || !bytes[cur.pos].is_ascii_whitespace() {
            return Err(cur.err("missing whitespace after header"));
        }
        cur.pos += 1;
        let end = cur.pos + count;
        if end > bytes.len() {
            return Err(Error::Decode {
                offset: bytes.len(),
                message: format!("truncated raster: expected {count} bytes"),
            });
        }
        bytes[cur.pos..end].to_vec()
    } else {
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            let at = cur.pos;
            let v = cur.number("sample")?;
            if v > 255 {
                return Err(Error::Decode {
                    offset: at,
                    message: format!("sample {v} exceeds maxval"),
                });
            }
            out.push(v as u8);
        }
        out
    };

    if channels == 1 {
        GrayImage::from_u8(width, height, &samples)
    } else {
        let data = samples
            .chunks_exact(3)
            .map(|p| T::of(luminance(p[0], p[1], p[2])))
            .collect();
        GrayImage::new(width, height, data)
    }
}

/// Tracks how many bytes the PNG decoder pulled, so failures can be placed.
struct CountingReader<R> {
    inner: R,
    consumed: std::rc::Rc<std::cell::Cell<usize>>,
}

impl<R: Read> Read for CountingReader<R> {
    fn read(&mut self, buf: &mut [u8]) -> std::io::Result<usize> {
        let n = self.inner.read(buf)?;
        self.consumed.set(self.consumed.get() + n);
        Ok(n)
    }
}

impl<R: std::io::BufRead> std::io::BufRead for CountingReader<R> {
    fn fill_buf(&mut self) -> std::io::Result<&[u8]> {
        self.inner.fill_buf()
    }

    fn consume(&mut self, amt: usize) {
        self.consumed.set(self.consumed.get() + amt);
        self.inner.consume(amt)
    }
}

impl<R: std::io::Seek> std::io::Seek for CountingReader<R> {
    fn seek(&mut self, pos: std::io::SeekFrom) -> std::io::Result<u64> {
        let p = self.inner.seek(pos)?;
        self.consumed.set(p as usize);
        Ok(p)
    }
}

fn decode_png<T: Scalar>(bytes: &[u8]) -> Result<GrayImage<T>> {
    let consumed = std::rc::Rc::new(std::cell::Cell::new(0usize));
    let reader = CountingReader {
        inner: std::io::Cursor::new(bytes),
        consumed: consumed.clone(),
    };
    let png_err = |e: png::DecodingError| Error::Decode {
        offset: consumed.get(),
        message: format!("png: {e}"),
    };
    let mut decoder = png::Decoder::new(reader);
    decoder.set_transformations(png::Transformations::EXPAND | png::Transformations::STRIP_16);
    let mut reader = decoder.read_info().map_err(png_err)?;
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| Error::Decode {
            offset: consumed.get(),
            message: "png: image too large".into(),
        })?;
    let mut buf = vec![0u8; size];
    let info = reader.next_frame(&mut buf).map_err(png_err)?;
    let (width, height) = (info.width as usize, info.height as usize);
    let buf = &buf[..info.buffer_size()];

    let data: Vec<T> = match info.color_type {
        png::ColorType::Grayscale => buf.iter().map(|&v| T::of(v as f64)).collect(),
        png::ColorType::GrayscaleAlpha => buf.chunks_exact(2).map(|p| T::of(p[0] as f64)).collect(),
        png::ColorType::Rgb => buf
            .chunks_exact(3)
            .map(|p| T::of(luminance(p[0], p[1], p[2])))
            .collect(),
        png::ColorType::Rgba => buf
            .chunks_exact(4)
            .map(|p| T::of(luminance(p[0], p[1], p[2])))
            .collect(),
        png::ColorType::Indexed => {
            return Err(Error::Decode {
                offset: consumed.get(),
                message: "png: palette was not expanded".into(),
            })
        }
    };
    GrayImage::new(width, height, data)
}

/// Writes a binary (P5) graymap, rounding values to 8 bits.
pub fn save_pgm<T: Scalar>(img: &GrayImage<T>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    write!(w, "P5\n{} {}\n255\n", img.width, img.height)
        .and_then(|_| w.write_all(&img.to_u8()))
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}

/// Writes an 8-bit grayscale PNG.
pub fn save_png<T: Scalar>(img: &GrayImage<T>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut encoder = png::Encoder::new(BufWriter::new(file), img.width as u32, img.height as u32);
    encoder.set_color(png::ColorType::Grayscale);
    encoder.set_depth(png::BitDepth::Eight);
    let to_io = |e: png::EncodingError| Error::io(path, std::io::Error::other(e));
    let mut writer = encoder.write_header().map_err(to_io)?;
    writer.write_image_data(&img.to_u8()).map_err(to_io)?;
    writer.finish().map_err(to_io)
}

/// Dimensions after scaling the shorter side to `n` with aspect ratio kept.
pub fn scaled_size(width: usize, height: usize, n: usize) -> (usize, usize) {
    if width <= height {
        let h = (height as f64 * n as f64 / width as f64).round() as usize;
        (n, h.max(n))
    } else {
        let w = (width as f64 * n as f64 / height as f64).round() as usize;
        (w.max(n), n)
    }
}

/// Bilinear resampling with pixel-centre alignment and edge clamping.
pub fn resize_bilinear<T: Scalar>(img: &GrayImage<T>, new_width: usize, new_height: usize) -> Result<GrayImage<T>> {
    if new_width == 0 || new_height == 0 {
        return Err(Error::arg("target size must be positive"));
    }
    if new_width == img.width && new_height == img.height {
        return Ok(img.clone());
    }
    let xs = sample_positions(img.width, new_width);
    let ys = sample_positions(img.height, new_height);
    let mut data = Vec::with_capacity(new_width * new_height);
    for &(y0, y1, fy) in &ys {
        let (r0, r1) = (&img.data[y0 * img.width..], &img.data[y1 * img.width..]);
        for &(x0, x1, fx) in &xs {
            let top = r0[x0] + (r0[x1] - r0[x0]) * fx;
            let bottom = r1[x0] + (r1[x1] - r1[x0]) * fx;
            data.push(top + (bottom - top) * fy);
        }
    }
    Ok(GrayImage {
        width: new_width,
        height: new_height,
        data,
    })
}

fn sample_positions<T: Scalar>(src: usize, dst: usize) -> Vec<(usize, usize, T)> {
    let ratio = src as f64 / dst as f64;
    (0..dst)
        .map(|i| {
            let s = ((i as f64 + 0.5) * ratio - 0.5).clamp(0.0, (src - 1) as f64);
            let i0 = s.floor() as usize;
            let i1 = (i0 + 1).min(src - 1);
            (i0, i1, T::of(s - i0 as f64))
        })
        .collect()
}

/// Centred `width`×`height` window; odd surpluses leave the extra pixel on the
/// right/bottom.
pub fn center_crop<T: Scalar>(img: &GrayImage<T>, width: usize, height: usize) -> Result<GrayImage<T>> {
    if width > img.width || height > img.height || width == 0 || height == 0 {
        return Err(Error::arg(format!(
            "cannot crop {}x{} to {width}x{height}",
            img.width, img.height
        )));
    }
    let x0 = (img.width - width) / 2;
    let y0 = (img.height - height) / 2;
    let mut data = Vec::with_capacity(width * height);
    for row in img.data.chunks_exact(img.width).skip(y0).take(height) {
        data.extend_from_slice(&row[x0..x0 + width]);
    }
    Ok(GrayImage { width, height, data })
}

/// Scales the shorter side to `n` and centre-crops to `n`×`n`.
pub fn resize_crop<T: Scalar>(img: &GrayImage<T>, n: usize) -> Result<GrayImage<T>> {
    if n < 8 {
        return Err(Error::arg(format!("working size {n} is below the minimum of 8")));
    }
    if n > MAX_WORKING_SIZE {
        return Err(Error::arg(format!("working size {n} exceeds {MAX_WORKING_SIZE}")));
    }
    let (w, h) = scaled_size(img.width, img.height, n);
    let scaled = resize_bilinear(img, w, h)?;
    center_crop(&scaled, n, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn white_rgb_is_full_luminance() {
        let img: GrayImage<f64> = decode_image(b"P6\n2 2\n255\n\xff\xff\xff\xff\xff\xff\xff\xff\xff\xff\xff\xff").unwrap();
        assert_eq!(img.data(), &[255.0; 4]);
    }

    #[test]
    fn ascii_graymap_with_comments() {
        let img: GrayImage<f64> = decode_image(b"P2\n# a comment\n3 1\n255\n0 17 255\n").unwrap();
        assert_eq!((img.width(), img.height()), (3, 1));
        assert_eq!(img.data(), &[0.0, 17.0, 255.0]);
    }

    #[test]
    fn truncated_raster_reports_offset() {
        let err = decode_image::<f64>(b"P5\n4 4\n255\n\x00\x01").unwrap_err();
        match err {
            Error::Decode { offset, .. } => assert_eq!(offset, 13),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bad_sample_reports_offset() {
        let err = decode_image::<f64>(b"P2 2 1 255 12 x").unwrap_err();
        assert!(matches!(err, Error::Decode { offset: 14, .. }), "{err:?}");
    }

    #[test]
    fn unsupported_maxval() {
        let err = decode_image::<f64>(b"P5 1 1 65535\n\x00\x00").unwrap_err();
        assert!(matches!(err, Error::Decode { offset: 7, .. }), "{err:?}");
    }

    #[test]
    fn unknown_signature() {
        assert!(matches!(
            decode_image::<f64>(b"GIF89a").unwrap_err(),
            Error::Decode { offset: 0, .. }
        ));
    }

    #[test]
    fn corrupt_png_is_a_decode_error() {
        let err = decode_image::<f64>(b"\x89PNG\r\n\x1a\n\x00\x00\x00\x0dIHDRjunk").unwrap_err();
        assert!(matches!(err, Error::Decode { .. }), "{err:?}");
    }

    #[test]
    fn missing_file_is_io_error() {
        assert!(matches!(
            load_image::<f64>("/nonexistent/frame.png").unwrap_err(),
            Error::Io { .. }
        ));
    }

    #[test]
    fn rejects_out_of_range_values() {
        assert!(GrayImage::new(1, 1, vec![256.0f64]).is_err());
        assert!(GrayImage::new(1, 1, vec![f64::NAN]).is_err());
        assert!(GrayImage::new(2, 1, vec![1.0f64]).is_err());
    }

    #[test]
    fn fm1_frame_geometry() {
        assert_eq!(scaled_size(640, 480, 256), (341, 256));
        let img = GrayImage::from_fn(640, 480, |x, y| ((x + y) % 256) as f64).unwrap();
        let out = resize_crop(&img, 256).unwrap();
        assert_eq!((out.width(), out.height()), (256, 256));
    }

    #[test]
    fn working_size_bounds() {
        let img = GrayImage::filled(16, 16, 1.0f64).unwrap();
        assert!(resize_crop(&img, 7).is_err());
        assert!(resize_crop(&img, 8193).is_err());
    }

    #[test]
    fn square_input_of_working_size_is_unchanged() {
        let img = GrayImage::from_fn(32, 32, |x, y| (x * 7 + y * 3) as f64).unwrap();
        assert_eq!(resize_crop(&img, 32).unwrap(), img);
    }

    #[test]
    fn mirror_twice_is_identity() {
        let img = GrayImage::from_fn(5, 3, |x, y| (x * 10 + y) as f64).unwrap();
        assert_eq!(img.flip_horizontal().get(0, 2), img.get(4, 2));
        assert_eq!(img.flip_horizontal().flip_horizontal(), img);
    }
}
