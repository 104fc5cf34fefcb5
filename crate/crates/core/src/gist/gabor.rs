use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::prefilter::signed_frequency;

const RADIAL_SHARPNESS: f64 = 0.35;
const BASE_TUNING: f64 = 0.3;

/// Closed-form description of one filter of the bank.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaborFilter {
    /// 1-based scale index.
    pub scale: usize,
    /// 0-based orientation index within the scale.
    pub orientation: usize,
    pub orientations: usize,
    /// Transform size the radial tuning is relative to.
    pub n: usize,
}

impl GaborFilter {
    /// Preferred orientation in radians, `π·j/o`.
    pub fn angle(&self) -> f64 {
        PI * self.orientation as f64 / self.orientations as f64
    }

    /// Radial tuning as a fraction of the transform size.
    fn tuning(&self) -> f64 {
        BASE_TUNING / 2f64.sqrt().powi(self.scale as i32 - 1)
    }

    fn angular_width(&self) -> f64 {
        let o = self.orientations as f64;
        16.0 * o * o / (32.0 * 32.0)
    }

    /// Transfer value at radial frequency `fr` (cycles per image) and polar
    /// angle `theta`.
    pub fn response(&self, fr: f64, theta: f64) -> f64 {
        let radial = fr / (self.n as f64 * self.tuning()) - 1.0;
        let t = wrap_angle(theta - self.angle());
        (-10.0 * RADIAL_SHARPNESS * radial * radial).exp() * (-2.0 * PI * self.angular_width() * t * t).exp()
    }
}

/// Wraps into `(-π, π]`.
fn wrap_angle(t: f64) -> f64 {
    let mut t = t.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    t
}

/// Frequency-domain Gabor transfer functions on an `n`×`n` grid, DC at index
/// `(0, 0)`, ordered scale-major then orientation.
#[derive(Debug, Clone)]
pub struct GaborBank<T> {
    n: usize,
    orientations_per_scale: Vec<usize>,
    filters: Vec<GaborFilter>,
    transfer: Vec<Vec<T>>,
}

impl<T: Scalar> GaborBank<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn scales(&self) -> usize {
        self.orientations_per_scale.len()
    }

    pub fn orientations_per_scale(&self) -> &[usize] {
        &self.orientations_per_scale
    }

    pub fn len(&self) -> usize {
        self.filters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.filters.is_empty()
    }

    pub fn filters(&self) -> &[GaborFilter] {
        &self.filters
    }

    pub fn transfer_functions(&self) -> &[Vec<T>] {
        &self.transfer
    }

    pub fn transfer(&self, filter: usize) -> &[T] {
        &self.transfer[filter]
    }
}

/// Builds the filter bank for an `n`×`n` transform.
pub fn build_gabor_bank<T: Scalar>(n: usize, scales: usize, orientations_per_scale: &[usize]) -> Result<GaborBank<T>> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::arg(format!("gabor bank size must be even and positive, got {n}")));
    }
    if scales == 0 || orientations_per_scale.len() != scales {
        return Err(Error::arg(format!(
            "expected {scales} orientation counts, got {}",
            orientations_per_scale.len()
        )));
    }
    if orientations_per_scale.contains(&0) {
        return Err(Error::arg("orientation counts must be at least 1"));
    }

    let mut polar = Vec::with_capacity(n * n);
    for ky in 0..n {
        let fy = signed_frequency(ky, n);
        for kx in 0..n {
            let fx = signed_frequency(kx, n);
            polar.push((fx.hypot(fy), fy.atan2(fx)));
        }
    }

    let filters: Vec<GaborFilter> = orientations_per_scale
        .iter()
        .enumerate()
        .flat_map(|(s, &o)| {
            (0..o).map(move |j| GaborFilter {
                scale: s + 1,
                orientation: j,
                orientations: o,
                n,
            })
        })
        .collect();
    let transfer = filters
        .iter()
        .map(|f| polar.iter().map(|&(fr, th)| T::of(f.response(fr, th))).collect())
        .collect();

    Ok(GaborBank {
        n,
        orientations_per_scale: orientations_per_scale.to_vec(),
        filters,
        transfer,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_bank_shape() {
        let bank = build_gabor_bank::<f64>(320, 4, &[8, 8, 8, 8]).unwrap();
        assert_eq!(bank.len(), 32);
        assert_eq!(bank.len() * 16, 512);
        assert!(bank.transfer_functions().iter().all(|t| t.len() == 320 * 320));
        assert_eq!(bank.filters()[9].scale, 2);
        assert_eq!(bank.filters()[9].orientation, 1);
    }

    #[test]
    fn transfer_values_are_bounded() {
        let bank = build_gabor_bank::<f64>(64, 3, &[4, 6, 2]).unwrap();
        for t in bank.transfer_functions() {
            assert!(t.iter().all(|&v| v.is_finite() && (0.0..=1.0).contains(&v)));
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(build_gabor_bank::<f64>(63, 1, &[8]).is_err());
        assert!(build_gabor_bank::<f64>(64, 2, &[8]).is_err());
        assert!(build_gabor_bank::<f64>(64, 1, &[0]).is_err());
        assert!(build_gabor_bank::<f64>(64, 0, &[]).is_err());
    }

    #[test]
    fn angle_wraps_to_half_open_interval() {
        assert_eq!(wrap_angle(PI), PI);
        assert!((wrap_angle(-PI) - PI).abs() < 1e-15);
        assert!((wrap_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
    }
}
