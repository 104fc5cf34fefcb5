use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const MAX_ITERATIONS: usize = 1000;
const OVERSAMPLE: usize = 4;

/// Leading principal directions of a point set.
#[derive(Debug, Clone, PartialEq)]
pub struct PcaModel<T> {
    pub mean: Vec<T>,
    /// Orthonormal rows, by decreasing explained variance.
    pub components: Vec<Vec<T>>,
    /// Variance along each component, nonincreasing.
    pub eigenvalues: Vec<T>,
}

impl<T: Scalar> PcaModel<T> {
    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn project(&self, x: &[T]) -> Result<Vec<T>> {
        pca_project(self, x)
    }
}

/// Fits `k` components by orthogonal iteration on the centred data matrix.
///
/// Works on `XᵀX` implicitly, so the d×d covariance is never formed. Each
/// round multiplies a block of `k + 4` vectors by `XᵀX`, re-orthonormalizes
/// it and rotates it onto the Ritz vectors of the block, until the leading
/// `k` Ritz pairs have negligible residuals.
pub fn pca_fit<T: Scalar, V: AsRef<[T]>>(x: &[V], k: usize) -> Result<PcaModel<T>> {
    let n = x.len();
    if n < 2 {
        return Err(Error::arg(format!("pca needs at least 2 points, got {n}")));
    }
    let d = x[0].as_ref().len();
    if d == 0 {
        return Err(Error::arg("pca input has dimension 0"));
    }
    if k == 0 || k > (n - 1).min(d) {
        return Err(Error::arg(format!(
            "component count {k} outside [1, {}]",
            (n - 1).min(d)
        )));
    }
    let mut data = Vec::with_capacity(n * d);
    for (i, row) in x.iter().enumerate() {
        let row = row.as_ref();
        if row.len() != d {
            return Err(Error::arg(format!("point {i} has dimension {}, expected {d}", row.len())));
        }
        if let Some(v) = row.iter().find(|v| !v.is_finite()) {
            return Err(Error::arg(format!("point {i} has non-finite value {v}")));
        }
        data.extend(row.iter().map(|v| v.as_f64()));
    }
    let mut mean = vec![0.0; d];
    for row in data.chunks_exact(d) {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= n as f64;
    }
    for row in data.chunks_exact_mut(d) {
        for (v, m) in row.iter_mut().zip(&mean) {
            *v -= m;
        }
    }

    let p = (k + OVERSAMPLE).min(d);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut basis: Vec<Vec<f64>> = (0..p)
        .map(|_| (0..d).map(|_| rng.random::<f64>() - 0.5).collect())
        .collect();
    orthonormalize(&mut basis);
    let (mut basis, mut values) = rayleigh_ritz(&data, d, basis);

    for _ in 0..MAX_ITERATIONS {
        let images: Vec<Vec<f64>> = basis.iter().map(|q| gram_apply(&data, d, q)).collect();
        let limit = 1e-12 * values[0].abs().max(f64::MIN_POSITIVE);
        let settled = (0..k).all(|i| {
            let residual = images[i]
                .iter()
                .zip(&basis[i])
                .map(|(z, q)| (z - values[i] * q).powi(2))
                .sum::<f64>()
                .sqrt();
            residual <= limit
        });
        if settled {
            break;
        }
        let mut next = images;
        orthonormalize(&mut next);
        (basis, values) = rayleigh_ritz(&data, d, next);
    }

    let scale = (n - 1) as f64;
    let components = basis
        .into_iter()
        .take(k)
        .map(|mut q| {
            let lead = q
                .iter()
                .enumerate()
                .fold(0, |best, (i, v)| if v.abs() > q[best].abs() { i } else { best });
            if q[lead] < 0.0 {
                q.iter_mut().for_each(|v| *v = -*v);
            }
            q.into_iter().map(T::of).collect()
        })
        .collect();
    Ok(PcaModel {
        mean: mean.into_iter().map(T::of).collect(),
        components,
        eigenvalues: values.into_iter().take(k).map(|l| T::of((l / scale).max(0.0))).collect(),
    })
}

/// `components · (x − mean)`.
pub fn pca_project<T: Scalar>(m: &PcaModel<T>, x: &[T]) -> Result<Vec<T>> {
    if x.len() != m.mean.len() {
        return Err(Error::arg(format!(
            "point has dimension {}, model expects {}",
            x.len(),
            m.mean.len()
        )));
    }
    Ok(m.components
        .iter()
        .map(|c| {
            c.iter()
                .zip(x.iter().zip(&m.mean))
                .fold(T::zero(), |acc, (&w, (&v, &mu))| acc + w * (v - mu))
        })
        .collect())
}

/// `Xq` for row-major `data` with `d` columns.
fn apply(data: &[f64], d: usize, q: &[f64]) -> Vec<f64> {
    data.chunks_exact(d)
        .map(|row| row.iter().zip(q).map(|(a, b)| a * b).sum())
        .collect()
}

/// `XᵀXq`.
fn gram_apply(data: &[f64], d: usize, q: &[f64]) -> Vec<f64> {
    let xq = apply(data, d, q);
    let mut out = vec![0.0; d];
    for (row, s) in data.chunks_exact(d).zip(&xq) {
        for (o, v) in out.iter_mut().zip(row) {
            *o += v * s;
        }
    }
    out
}

/// Modified Gram-Schmidt. A vector that collapses (the data has lower rank
/// than the block) is replaced by the first unit axis that survives.
fn orthonormalize(vs: &mut [Vec<f64>]) {
    let d = vs[0].len();
    let mut axis = 0;
    for i in 0..vs.len() {
        let original = norm(&vs[i]);
        loop {
            for j in 0..i {
                let (done, rest) = vs.split_at_mut(i);
                let proj: f64 = rest[0].iter().zip(&done[j]).map(|(a, b)| a * b).sum();
                for (v, u) in rest[0].iter_mut().zip(&done[j]) {
                    *v -= proj * u;
                }
            }
            let len = norm(&vs[i]);
            if len > 1e-10 * original.max(f64::MIN_POSITIVE) && len > 0.0 {
                vs[i].iter_mut().for_each(|v| *v /= len);
                break;
            }
            assert!(axis < d, "ran out of basis axes");
            vs[i] = vec![0.0; d];
            vs[i][axis] = 1.0;
            axis += 1;
        }
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Rotates an orthonormal block onto the eigenvectors of its projected
/// Gram matrix, sorted by decreasing eigenvalue.
fn rayleigh_ritz(data: &[f64], d: usize, basis: Vec<Vec<f64>>) -> (Vec<Vec<f64>>, Vec<f64>) {
    let p = basis.len();
    let images: Vec<Vec<f64>> = basis.iter().map(|q| apply(data, d, q)).collect();
    let mut b = vec![vec![0.0; p]; p];
    for i in 0..p {
        for j in i..p {
            let v: f64 = images[i].iter().zip(&images[j]).map(|(a, c)| a * c).sum();
            b[i][j] = v;
            b[j][i] = v;
        }
    }
    let (values, vectors) = jacobi_eigen(b);
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&a, &c| values[c].total_cmp(&values[a]));
    let rotated = order
        .iter()
        .map(|&col| {
            let mut v = vec![0.0; d];
            for (q, row) in basis.iter().zip(&vectors) {
                let w = row[col];
                for (o, x) in v.iter_mut().zip(q) {
                    *o += w * x;
                }
            }
            let len = norm(&v);
            v.iter_mut().for_each(|x| *x /= len);
            v
        })
        .collect();
    (rotated, order.iter().map(|&i| values[i]).collect())
}

/// Cyclic Jacobi eigendecomposition of a small symmetric matrix.
/// Returns eigenvalues and the eigenvector matrix (eigenvectors as columns).
fn jacobi_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let p = a.len();
    let mut v = vec![vec![0.0; p]; p];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _ in 0..100 {
        let off: f64 = (0..p)
            .flat_map(|i| (0..p).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let diag: f64 = (0..p).map(|i| a[i][i] * a[i][i]).sum();
        if off <= 1e-30 * diag || off == 0.0 {
            break;
        }
        for i in 0..p {
            for j in i + 1..p {
                if a[i][j] == 0.0 {
                    continue;
                }
                let theta = (a[j][j] - a[i][i]) / (2.0 * a[i][j]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..p {
                    let (aki, akj) = (a[k][i], a[k][j]);
                    a[k][i] = c * aki - s * akj;
                    a[k][j] = s * aki + c * akj;
                }
                for k in 0..p {
                    let (aik, ajk) = (a[i][k], a[j][k]);
                    a[i][k] = c * aik - s * ajk;
                    a[j][k] = s * aik + c * ajk;
                }
                for row in v.iter_mut() {
                    let (vi, vj) = (row[i], row[j]);
                    row[i] = c * vi - s * vj;
                    row[j] = s * vi + c * vj;
                }
            }
        }
    }
    ((0..p).map(|i| a[i][i]).collect(), v)
}
