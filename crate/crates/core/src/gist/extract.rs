use num_complex::Complex;

use crate::error::{Error, Result};
use crate::fft::Fft2Plan;
use crate::imaging::{resize_crop, GrayImage};
use crate::scalar::Scalar;

use super::gabor::{build_gabor_bank, GaborBank};
use super::prefilter::{normalize_intensity, pad_symmetric, Prefilter, PrefilterParams};
use super::{GistConfig, GistDescriptor};

/// Filter bank, prefilter and transform plans for one configuration.
///
/// Immutable after construction; share one instance across worker threads.
#[derive(Debug, Clone)]
pub struct GistExtractor<T: Scalar> {
    config: GistConfig,
    bank: GaborBank<T>,
    prefilter: Prefilter<T>,
    plan: Fft2Plan<T>,
}

impl<T: Scalar> GistExtractor<T> {
    pub fn new(config: GistConfig) -> Result<Self> {
        config.validate()?;
        let n = config.transform_size();
        let scales = config.orientations_per_scale.len();
        let bank = build_gabor_bank(n, scales, &config.orientations_per_scale)?;
        let prefilter = Prefilter::new(config.working_size, config.prefilter)?;
        Ok(Self {
            bank,
            prefilter,
            plan: Fft2Plan::new(n, n)?,
            config,
        })
    }

    pub fn config(&self) -> &GistConfig {
        &self.config
    }

    pub fn bank(&self) -> &GaborBank<T> {
        &self.bank
    }

    /// Descriptor of an image already at the working size.
    pub fn extract(&self, img: &GrayImage<T>) -> Result<GistDescriptor<T>> {
        let size = self.config.working_size;
        if img.width() != size || img.height() != size {
            return Err(Error::arg(format!(
                "expected a {size}x{size} image, got {}x{}",
                img.width(),
                img.height()
            )));
        }
        let filtered = self.prefilter.apply(&normalize_intensity(img))?;
        Ok(filter_and_pool(&filtered, size, self.config.pad, self.config.blocks, &self.bank, &self.plan))
    }

    /// Scales and crops an arbitrary image to the working size, then extracts.
    pub fn extract_any(&self, img: &GrayImage<T>) -> Result<GistDescriptor<T>> {
        if img.width() == self.config.working_size && img.height() == self.config.working_size {
            self.extract(img)
        } else {
            self.extract(&resize_crop(img, self.config.working_size)?)
        }
    }
}

/// Computes the descriptor of a square image with an explicit bank.
///
/// `bank.n()` must equal the image side plus `2·pad`.
pub fn extract_gist<T: Scalar>(
    img: &GrayImage<T>,
    bank: &GaborBank<T>,
    blocks: usize,
    pad: usize,
    params: &PrefilterParams,
) -> Result<GistDescriptor<T>> {
    if !img.is_square() {
        return Err(Error::arg(format!(
            "descriptor input must be square, got {}x{}",
            img.width(),
            img.height()
        )));
    }
    let size = img.width();
    if bank.n() != size + 2 * pad {
        return Err(Error::arg(format!(
            "bank size {} does not match image {size} + 2·pad {pad}",
            bank.n()
        )));
    }
    if blocks == 0 || blocks > size {
        return Err(Error::arg(format!("blocks {blocks} must be in [1, {size}]")));
    }
    let filtered = Prefilter::new(size, *params)?.apply(&normalize_intensity(img))?;
    let plan = Fft2Plan::new(bank.n(), bank.n())?;
    Ok(filter_and_pool(&filtered, size, pad, blocks, bank, &plan))
}

fn filter_and_pool<T: Scalar>(
    filtered: &[T],
    size: usize,
    pad: usize,
    blocks: usize,
    bank: &GaborBank<T>,
    plan: &Fft2Plan<T>,
) -> GistDescriptor<T> {
    let n = bank.n();
    let mut spectrum: Vec<Complex<T>> = pad_symmetric(filtered, size, size, pad)
        .into_iter()
        .map(|v| Complex::new(v, T::zero()))
        .collect();
    plan.forward(&mut spectrum);

    let mut values = Vec::with_capacity(bank.len() * blocks * blocks);
    let mut response = vec![Complex::default(); n * n];
    let mut magnitude = vec![T::zero(); size * size];
    let scale = T::one() / T::of((n * n) as f64);
    for transfer in bank.transfer_functions() {
        for ((r, &s), &g) in response.iter_mut().zip(&spectrum).zip(transfer) {
            *r = s * g;
        }
        plan.inverse_unscaled(&mut response);
        for (y, row) in magnitude.chunks_exact_mut(size).enumerate() {
            let src = &response[(y + pad) * n + pad..(y + pad) * n + pad + size];
            for (m, c) in row.iter_mut().zip(src) {
                *m = (c.re * c.re + c.im * c.im).sqrt() * scale;
            }
        }
        pool_blocks(&magnitude, size, blocks, &mut values);
    }
    GistDescriptor { values }
}

/// Appends per-cell means of a `size`×`size` grid, row-major over cells.
/// Remainder pixels at the right and bottom edges are dropped.
fn pool_blocks<T: Scalar>(grid: &[T], size: usize, blocks: usize, out: &mut Vec<T>) {
    let cell = size / blocks;
    let inv = T::one() / T::of((cell * cell) as f64);
    for by in 0..blocks {
        for bx in 0..blocks {
            let mut sum = T::zero();
            for y in by * cell..(by + 1) * cell {
                let row = &grid[y * size + bx * cell..y * size + (bx + 1) * cell];
                sum = sum + row.iter().copied().sum::<T>();
            }
            out.push(sum * inv);
        }
    }
}
