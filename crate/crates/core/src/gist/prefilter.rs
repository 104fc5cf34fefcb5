use num_complex::Complex;

use crate::error::{Error, Result};
use crate::fft::Fft2Plan;
use crate::imaging::GrayImage;
use crate::scalar::Scalar;

/// Whitening and local contrast normalization settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrefilterParams {
    /// Low-pass cutoff in cycles per image.
    pub fc: f64,
    /// Floor added to the local standard deviation.
    pub eps: f64,
    /// Symmetric extension, in pixels, applied while filtering.
    pub pad: usize,
}

impl Default for PrefilterParams {
    fn default() -> Self {
        Self {
            fc: 4.0,
            eps: 0.2,
            pad: 5,
        }
    }
}

impl PrefilterParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.fc.is_finite() && self.fc > 0.0) {
            return Err(Error::arg(format!("prefilter fc must be positive, got {}", self.fc)));
        }
        if !(self.eps.is_finite() && self.eps > 0.0) {
            return Err(Error::arg(format!("prefilter eps must be positive, got {}", self.eps)));
        }
        Ok(())
    }
}

/// Mirror index into `0..n` with edge repetition (`… b a | a b c | c b …`).
#[inline]
pub(crate) fn reflect(i: isize, n: usize) -> usize {
    let n = n as isize;
    let period = 2 * n;
    let mut k = i.rem_euclid(period);
    if k >= n {
        k = period - 1 - k;
    }
    k as usize
}

/// Extends a `width`×`height` grid by `pad` mirrored pixels on every side.
pub fn pad_symmetric<T: Copy>(data: &[T], width: usize, height: usize, pad: usize) -> Vec<T> {
    let (pw, ph) = (width + 2 * pad, height + 2 * pad);
    let mut out = Vec::with_capacity(pw * ph);
    for y in 0..ph {
        let sy = reflect(y as isize - pad as isize, height);
        let row = &data[sy * width..(sy + 1) * width];
        for x in 0..pw {
            out.push(row[reflect(x as isize - pad as isize, width)]);
        }
    }
    out
}

pub(crate) fn crop<T: Copy>(data: &[T], width: usize, pad: usize, out_w: usize, out_h: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(out_w * out_h);
    for y in pad..pad + out_h {
        out.extend_from_slice(&data[y * width + pad..y * width + pad + out_w]);
    }
    out
}

/// Signed frequency (cycles per image) of transform bin `k` out of `n`;
/// the Nyquist bin of an even size maps to `-n/2`.
#[inline]
pub(crate) fn signed_frequency(k: usize, n: usize) -> f64 {
    if k >= n.div_ceil(2) {
        k as f64 - n as f64
    } else {
        k as f64
    }
}

/// Rescales intensities linearly so the darkest pixel is 0 and the brightest
/// 255. A flat image becomes all zeros.
pub fn normalize_intensity<T: Scalar>(img: &GrayImage<T>) -> GrayImage<T> {
    let (lo, hi) = img
        .data()
        .iter()
        .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let range = hi - lo;
    let scale = if range > T::zero() { T::of(255.0) / range } else { T::zero() };
    let data = img
        .data()
        .iter()
        .map(|&v| ((v - lo) * scale).min(T::of(255.0)))
        .collect();
    GrayImage::new(img.width(), img.height(), data).expect("rescaled values stay in range")
}

/// Prefilter bound to one image size, reusable across images.
#[derive(Debug, Clone)]
pub struct Prefilter<T: Scalar> {
    size: usize,
    params: PrefilterParams,
    plan: Fft2Plan<T>,
    lowpass: Vec<T>,
}

impl<T: Scalar> Prefilter<T> {
    pub fn new(size: usize, params: PrefilterParams) -> Result<Self> {
        params.validate()?;
        if size == 0 {
            return Err(Error::arg("prefilter size must be positive"));
        }
        let n = size + 2 * params.pad;
        let s1 = params.fc / std::f64::consts::LN_2.sqrt();
        let mut lowpass = Vec::with_capacity(n * n);
        for ky in 0..n {
            let fy = signed_frequency(ky, n);
            for kx in 0..n {
                let fx = signed_frequency(kx, n);
                lowpass.push(T::of((-(fx * fx + fy * fy) / (s1 * s1)).exp()));
            }
        }
        Ok(Self {
            size,
            params,
            plan: Fft2Plan::new(n, n)?,
            lowpass,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    fn low_pass(&self, grid: &[T]) -> Vec<T> {
        let mut spec: Vec<Complex<T>> = grid.iter().map(|&v| Complex::new(v, T::zero())).collect();
        self.plan.forward(&mut spec);
        for (c, &g) in spec.iter_mut().zip(&self.lowpass) {
            *c = *c * g;
        }
        self.plan.inverse(&mut spec);
        spec.into_iter().map(|c| c.re).collect()
    }

    /// Log-compresses, whitens and contrast-normalizes a square image.
    pub fn apply(&self, img: &GrayImage<T>) -> Result<Vec<T>> {
        if !img.is_square() {
            return Err(Error::arg(format!(
                "prefilter needs a square image, got {}x{}",
                img.width(),
                img.height()
            )));
        }
        if img.width() != self.size {
            return Err(Error::arg(format!(
                "prefilter built for {0}x{0}, got {1}x{1}",
                self.size,
                img.width()
            )));
        }
        let (size, pad) = (self.size, self.params.pad);
        let n = size + 2 * pad;
        let logged: Vec<T> = img.data().iter().map(|&v| v.ln_1p()).collect();
        let padded = pad_symmetric(&logged, size, size, pad);

        let smooth = self.low_pass(&padded);
        let whitened: Vec<T> = padded.iter().zip(&smooth).map(|(&v, &s)| v - s).collect();

        let energy: Vec<T> = whitened.iter().map(|&v| v * v).collect();
        let local_var = self.low_pass(&energy);
        let eps = T::of(self.params.eps);
        let normalized: Vec<T> = whitened
            .iter()
            .zip(&local_var)
            .map(|(&w, &v)| w / (eps + v.abs().sqrt()))
            .collect();

        Ok(crop(&normalized, n, pad, size, size))
    }
}

/// One-shot prefilter of a square image; see [`Prefilter::apply`].
pub fn prefilter<T: Scalar>(img: &GrayImage<T>, params: &PrefilterParams) -> Result<Vec<T>> {
    if !img.is_square() {
        return Err(Error::arg(format!(
            "prefilter needs a square image, got {}x{}",
            img.width(),
            img.height()
        )));
    }
    Prefilter::new(img.width(), *params)?.apply(img)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflect_repeats_edges() {
        let idx: Vec<usize> = (-3..6).map(|i| reflect(i, 3)).collect();
        assert_eq!(idx, vec![2, 1, 0, 0, 1, 2, 2, 1, 0]);
    }

    #[test]
    fn padding_mirrors_rows_and_columns() {
        let g = [1, 2, 3, 4];
        let p = pad_symmetric(&g, 2, 2, 1);
        assert_eq!(p, vec![1, 1, 2, 2, 1, 1, 2, 2, 3, 3, 4, 4, 3, 3, 4, 4]);
        assert_eq!(crop(&p, 4, 1, 2, 2), g.to_vec());
    }

    #[test]
    fn frequency_layout() {
        let f: Vec<f64> = (0..6).map(|k| signed_frequency(k, 6)).collect();
        assert_eq!(f, vec![0.0, 1.0, 2.0, -3.0, -2.0, -1.0]);
        let f: Vec<f64> = (0..5).map(|k| signed_frequency(k, 5)).collect();
        assert_eq!(f, vec![0.0, 1.0, 2.0, -2.0, -1.0]);
    }

    #[test]
    fn constant_image_prefilters_to_zero() {
        let img = GrayImage::filled(32, 32, 128.0f64).unwrap();
        let out = prefilter(&img, &PrefilterParams::default()).unwrap();
        assert!(out.iter().all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn non_square_is_rejected() {
        let img = GrayImage::filled(16, 8, 1.0f64).unwrap();
        assert!(matches!(
            prefilter(&img, &PrefilterParams::default()),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn invalid_params_are_rejected() {
        let img = GrayImage::filled(8, 8, 1.0f64).unwrap();
        let bad = PrefilterParams {
            eps: 0.0,
            ..Default::default()
        };
        assert!(prefilter(&img, &bad).is_err());
    }

    #[test]
    fn intensity_normalization_spans_full_range() {
        let img = GrayImage::new(2, 2, vec![10.0f64, 20.0, 30.0, 50.0]).unwrap();
        let n = normalize_intensity(&img);
        assert_eq!(n.data(), &[0.0, 63.75, 127.5, 255.0]);
        let flat = normalize_intensity(&GrayImage::filled(2, 2, 7.0f64).unwrap());
        assert!(flat.data().iter().all(|&v| v == 0.0));
    }
}
