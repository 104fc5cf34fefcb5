//! Two dimensional discrete Fourier transforms on row-major grids.
//!
//! The forward transform is unnormalized; the inverse scales by `1/(w·h)`
//! so that `ifft2(fft2(x)) == x`. Sizes need not be powers of two.

use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Reusable forward/inverse plans for one grid shape.
#[derive(Clone)]
pub struct Fft2Plan<T: Scalar> {
    width: usize,
    height: usize,
    row_fwd: Arc<dyn Fft<T>>,
    row_inv: Arc<dyn Fft<T>>,
    col_fwd: Arc<dyn Fft<T>>,
    col_inv: Arc<dyn Fft<T>>,
}

impl<T: Scalar> std::fmt::Debug for Fft2Plan<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fft2Plan")
            .field("width", &self.width)
            .field("height", &self.height)
            .finish()
    }
}

impl<T: Scalar> Fft2Plan<T> {
    pub fn new(width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::arg(format!("transform size must be positive, got {width}x{height}")));
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            width,
            height,
            row_fwd: planner.plan_fft_forward(width),
            row_inv: planner.plan_fft_inverse(width),
            col_fwd: planner.plan_fft_forward(height),
            col_inv: planner.plan_fft_inverse(height),
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Unnormalized forward transform in place.
    pub fn forward(&self, grid: &mut [Complex<T>]) {
        self.run(grid, &self.row_fwd, &self.col_fwd);
    }

    /// Inverse transform in place, scaled by `1/(w·h)`.
    pub fn inverse(&self, grid: &mut [Complex<T>]) {
        self.inverse_unscaled(grid);
        let scale = T::one() / T::of((self.width * self.height) as f64);
        for v in grid.iter_mut() {
            *v = *v * scale;
        }
    }

    /// Inverse transform without the `1/(w·h)` factor.
    pub(crate) fn inverse_unscaled(&self, grid: &mut [Complex<T>]) {
        self.run(grid, &self.row_inv, &self.col_inv);
    }

    fn run(&self, grid: &mut [Complex<T>], rows: &Arc<dyn Fft<T>>, cols: &Arc<dyn Fft<T>>) {
        let (w, h) = (self.width, self.height);
        assert_eq!(grid.len(), w * h, "grid does not match plan shape");
        let mut scratch = vec![Complex::default(); rows.get_inplace_scratch_len().max(cols.get_inplace_scratch_len())];
        rows.process_with_scratch(grid, &mut scratch);

        let mut transposed = vec![Complex::default(); w * h];
        transpose(grid, &mut transposed, w, h);
        cols.process_with_scratch(&mut transposed, &mut scratch);
        transpose(&transposed, grid, h, w);
    }
}

/// `src` is `h` rows of `w`; `dst` receives `w` rows of `h`.
fn transpose<T: Copy>(src: &[T], dst: &mut [T], w: usize, h: usize) {
    const BLOCK: usize = 16;
    for by in (0..h).step_by(BLOCK) {
        for bx in (0..w).step_by(BLOCK) {
            for y in by..(by + BLOCK).min(h) {
                for x in bx..(bx + BLOCK).min(w) {
                    dst[x * h + y] = src[y * w + x];
                }
            }
        }
    }
}

fn check_input<T: Scalar>(grid: &[Complex<T>], width: usize, height: usize) -> Result<()> {
    if grid.len() != width * height {
        return Err(Error::arg(format!(
            "grid has {} values, expected {width}x{height}",
            grid.len()
        )));
    }
    if let Some(i) = grid.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::arg(format!("non-finite value at index {i}")));
    }
    Ok(())
}

/// Forward 2-D DFT of a `width`×`height` row-major grid.
pub fn fft2<T: Scalar>(grid: &[Complex<T>], width: usize, height: usize) -> Result<Vec<Complex<T>>> {
    check_input(grid, width, height)?;
    let plan = Fft2Plan::new(width, height)?;
    let mut out = grid.to_vec();
    plan.forward(&mut out);
    Ok(out)
}

/// Forward transform of a real grid.
pub fn fft2_real<T: Scalar>(grid: &[T], width: usize, height: usize) -> Result<Vec<Complex<T>>> {
    let c: Vec<Complex<T>> = grid.iter().map(|&v| Complex::new(v, T::zero())).collect();
    fft2(&c, width, height)
}

/// Inverse 2-D DFT, normalized by `1/(width·height)`.
pub fn ifft2<T: Scalar>(spectrum: &[Complex<T>], width: usize, height: usize) -> Result<Vec<Complex<T>>> {
    check_input(spectrum, width, height)?;
    let plan = Fft2Plan::new(width, height)?;
    let mut out = spectrum.to_vec();
    plan.inverse(&mut out);
    Ok(out)
}
