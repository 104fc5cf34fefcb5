use crate::error::{Error, Result};
use crate::scalar::{squared_distance, Scalar};

/// `exp(-gamma·‖x−y‖²)`.
pub fn rbf_kernel<T: Scalar>(x: &[T], y: &[T], gamma: T) -> Result<T> {
    if x.len() != y.len() {
        return Err(Error::arg(format!("kernel dimension mismatch: {} vs {}", x.len(), y.len())));
    }
    Ok(rbf(x, y, gamma))
}

#[inline]
pub(crate) fn rbf<T: Scalar>(x: &[T], y: &[T], gamma: T) -> T {
    (-gamma * squared_distance(x, y)).exp()
}
