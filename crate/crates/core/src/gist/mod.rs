//! GIST spatial-envelope descriptor.
//!
//! An image is normalized to `[0, 255]`, log-compressed, whitened and
//! contrast-normalized ([`prefilter`]), then passed through a bank of
//! frequency-domain Gabor filters ([`GaborBank`]). Each filter's response
//! magnitude is averaged over a `blocks`×`blocks` grid and the cell means
//! are concatenated filter-major. With the default four scales of eight
//! orientations and a 4×4 grid this gives 512 values.

mod extract;
mod gabor;
mod prefilter;

pub use extract::{extract_gist, GistExtractor};
pub use gabor::{build_gabor_bank, GaborBank, GaborFilter};
pub use prefilter::{normalize_intensity, pad_symmetric, prefilter, PrefilterParams, Prefilter};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Descriptor values in filter-major order:
/// `index = filter · blocks² + block_row · blocks + block_col`.
#[derive(Debug, Clone, PartialEq)]
pub struct GistDescriptor<T> {
    values: Vec<T>,
}

impl<T: Scalar> GistDescriptor<T> {
    /// Wraps raw values; every value must be finite and nonnegative.
    pub fn new(values: Vec<T>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite() || *v < T::zero()) {
            return Err(Error::arg(format!(
                "descriptor value {i} is {} (must be finite and nonnegative)",
                values[i]
            )));
        }
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    /// Mean over the `blocks²` cells of one filter.
    pub fn channel_energy(&self, filter: usize, blocks: usize) -> T {
        let cells = blocks * blocks;
        let s = &self.values[filter * cells..(filter + 1) * cells];
        s.iter().copied().sum::<T>() / T::of(cells as f64)
    }

    pub fn cast<U: Scalar>(&self) -> GistDescriptor<U> {
        GistDescriptor {
            values: self.values.iter().map(|v| U::of(v.as_f64())).collect(),
        }
    }
}

impl<T> AsRef<[T]> for GistDescriptor<T> {
    fn as_ref(&self) -> &[T] {
        &self.values
    }
}

/// Every knob of the descriptor pipeline. The defaults yield 512 dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct GistConfig {
    /// Square size images are scaled and cropped to.
    pub working_size: usize,
    pub blocks: usize,
    /// Symmetric extension applied before Gabor filtering.
    pub pad: usize,
    pub orientations_per_scale: Vec<usize>,
    pub prefilter: PrefilterParams,
}

impl Default for GistConfig {
    fn default() -> Self {
        Self {
            working_size: 256,
            blocks: 4,
            pad: 32,
            orientations_per_scale: vec![8, 8, 8, 8],
            prefilter: PrefilterParams::default(),
        }
    }
}

impl GistConfig {
    pub fn filter_count(&self) -> usize {
        self.orientations_per_scale.iter().sum()
    }

    pub fn descriptor_len(&self) -> usize {
        self.filter_count() * self.blocks * self.blocks
    }

    /// Side of the padded transform grid.
    pub fn transform_size(&self) -> usize {
        self.working_size + 2 * self.pad
    }

    pub fn validate(&self) -> Result<()> {
        if self.working_size < 8 || self.working_size > crate::imaging::MAX_WORKING_SIZE {
            return Err(Error::arg(format!("working size {} outside [8, 8192]", self.working_size)));
        }
        if self.blocks == 0 || self.blocks > self.working_size {
            return Err(Error::arg(format!("blocks {} must be in [1, working size]", self.blocks)));
        }
        if !self.transform_size().is_multiple_of(2) {
            return Err(Error::arg("working size + 2·pad must be even"));
        }
        self.prefilter.validate()?;
        if self.orientations_per_scale.is_empty() || self.orientations_per_scale.contains(&0) {
            return Err(Error::arg("every scale needs at least one orientation"));
        }
        Ok(())
    }
}
