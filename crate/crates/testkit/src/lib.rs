//! Reference computations for tests.
//!
//! Everything here is written directly from the defining formulas, on plain
//! `f64` slices, without touching the library under test. Speed is not a
//! goal: transforms are double sums, filtering is explicit convolution and
//! optimizers enumerate.

use std::f64::consts::PI;

pub mod fixtures;

/// Direct 2-D DFT of a `w`×`h` row-major complex grid (O(w²h²)).
/// `inverse` flips the exponent sign and divides by `w·h`.
pub fn dft2_direct(grid: &[(f64, f64)], w: usize, h: usize, inverse: bool) -> Vec<(f64, f64)> {
    assert_eq!(grid.len(), w * h);
    let sign = if inverse { 1.0 } else { -1.0 };
    let norm = if inverse { 1.0 / (w * h) as f64 } else { 1.0 };
    let mut out = vec![(0.0, 0.0); w * h];
    for v in 0..h {
        for u in 0..w {
            let (mut re, mut im) = (0.0, 0.0);
            for y in 0..h {
                for x in 0..w {
                    let phase = sign * 2.0 * PI * ((u * x) as f64 / w as f64 + (v * y) as f64 / h as f64);
                    let (s, c) = phase.sin_cos();
                    let (a, b) = grid[y * w + x];
                    re += a * c - b * s;
                    im += a * s + b * c;
                }
            }
            out[v * w + u] = (re * norm, im * norm);
        }
    }
    out
}

/// Direct 1-D DFT along rows then columns (O(n³)), for grids too large
/// for [`dft2_direct`].
pub fn dft2_separable(grid: &[(f64, f64)], w: usize, h: usize, inverse: bool) -> Vec<(f64, f64)> {
    assert_eq!(grid.len(), w * h);
    let sign = if inverse { 1.0 } else { -1.0 };
    let dft1 = |line: &[(f64, f64)]| -> Vec<(f64, f64)> {
        let n = line.len();
        let twiddle: Vec<(f64, f64)> = (0..n)
            .map(|k| {
                let (s, c) = (sign * 2.0 * PI * k as f64 / n as f64).sin_cos();
                (c, s)
            })
            .collect();
        (0..n)
            .map(|u| {
                line.iter().enumerate().fold((0.0, 0.0), |(re, im), (x, &(a, b))| {
                    let (c, s) = twiddle[(u * x) % n];
                    (re + a * c - b * s, im + a * s + b * c)
                })
            })
            .collect()
    };
    let mut rows: Vec<(f64, f64)> = grid.chunks_exact(w).flat_map(dft1).collect();
    for x in 0..w {
        let col: Vec<(f64, f64)> = (0..h).map(|y| rows[y * w + x]).collect();
        for (y, v) in dft1(&col).into_iter().enumerate() {
            rows[y * w + x] = v;
        }
    }
    if inverse {
        let norm = 1.0 / (w * h) as f64;
        rows.iter_mut().for_each(|v| *v = (v.0 * norm, v.1 * norm));
    }
    rows
}

/// Frequency in cycles per image of bin `k` of `n`, upper half negative.
pub fn bin_frequency(k: usize, n: usize) -> f64 {
    if 2 * k >= n {
        k as f64 - n as f64
    } else {
        k as f64
    }
}

/// Mirror extension with the edge pixel repeated: `c b a | a b c | c b a`.
pub fn mirror_pad(img: &[f64], w: usize, h: usize, pad: usize) -> Vec<f64> {
    let m = |i: isize, n: usize| -> usize {
        let n = n as isize;
        let mut i = i;
        while i < 0 || i >= n {
            i = if i < 0 { -1 - i } else { 2 * n - 1 - i };
        }
        i as usize
    };
    let (pw, ph) = (w + 2 * pad, h + 2 * pad);
    let mut out = Vec::with_capacity(pw * ph);
    for y in 0..ph {
        for x in 0..pw {
            out.push(img[m(y as isize - pad as isize, h) * w + m(x as isize - pad as isize, w)]);
        }
    }
    out
}

/// Inner `w`×`h` window starting at (`pad`, `pad`) of a grid `pw` wide.
pub fn crop(grid: &[f64], pw: usize, pad: usize, w: usize, h: usize) -> Vec<f64> {
    (0..h)
        .flat_map(|y| grid[(y + pad) * pw + pad..(y + pad) * pw + pad + w].iter().copied())
        .collect()
}

/// Rescales to span `[0, 255]`; constant input becomes zeros.
pub fn minmax_normalize(img: &[f64]) -> Vec<f64> {
    let lo = img.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = img.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi > lo {
        img.iter().map(|v| (v - lo) * 255.0 / (hi - lo)).collect()
    } else {
        vec![0.0; img.len()]
    }
}

/// Spatial kernel of the Gaussian low-pass `exp(-f²/s1²)` along one axis
/// of an `n`-periodic signal. The 2-D transfer factorizes, so the 2-D
/// kernel is the outer product of two of these.
pub fn gaussian_kernel_1d(n: usize, fc: f64) -> Vec<f64> {
    let s1 = fc / 2f64.ln().sqrt();
    (0..n)
        .map(|x| {
            (0..n)
                .map(|k| {
                    let f = bin_frequency(k, n);
                    (-(f * f) / (s1 * s1)).exp() * (2.0 * PI * (k * x) as f64 / n as f64).cos()
                })
                .sum::<f64>()
                / n as f64
        })
        .collect()
}

/// Circular convolution of an `n`×`n` grid with the separable kernel
/// `k(x)·k(y)`, one axis at a time.
pub fn convolve_separable(grid: &[f64], n: usize, k: &[f64]) -> Vec<f64> {
    let mut rows = vec![0.0; n * n];
    for y in 0..n {
        for x in 0..n {
            rows[y * n + x] = (0..n).map(|t| grid[y * n + t] * k[(x + n - t) % n]).sum();
        }
    }
    let mut out = vec![0.0; n * n];
    for y in 0..n {
        for x in 0..n {
            out[y * n + x] = (0..n).map(|t| rows[t * n + x] * k[(y + n - t) % n]).sum();
        }
    }
    out
}

/// Log, whitening and local contrast normalization by explicit spatial
/// convolution with the inverse-transformed Gaussian.
pub fn prefilter_spatial(img: &[f64], size: usize, fc: f64, eps: f64, pad: usize) -> Vec<f64> {
    let n = size + 2 * pad;
    let logged: Vec<f64> = img.iter().map(|v| (1.0 + v).ln()).collect();
    let padded = mirror_pad(&logged, size, size, pad);
    let k = gaussian_kernel_1d(n, fc);
    let smooth = convolve_separable(&padded, n, &k);
    let white: Vec<f64> = padded.iter().zip(&smooth).map(|(a, b)| a - b).collect();
    let energy: Vec<f64> = white.iter().map(|v| v * v).collect();
    let var = convolve_separable(&energy, n, &k);
    let out: Vec<f64> = white
        .iter()
        .zip(&var)
        .map(|(w, v)| w / (eps + v.abs().sqrt()))
        .collect();
    crop(&out, n, pad, size, size)
}

/// Gabor transfer value at (`fx`, `fy`) cycles per image for scale `s`
/// (1-based) and orientation `j` of `o`, on an `n`-point transform.
pub fn gabor_transfer_at(n: usize, s: usize, j: usize, o: usize, fx: f64, fy: f64) -> f64 {
    let fr = (fx * fx + fy * fy).sqrt();
    let theta = fy.atan2(fx);
    let tuned = n as f64 * 0.3 / 2f64.sqrt().powi(s as i32 - 1);
    let mut t = theta - PI * j as f64 / o as f64;
    while t > PI {
        t -= 2.0 * PI;
    }
    while t <= -PI {
        t += 2.0 * PI;
    }
    let width = 16.0 * (o * o) as f64 / 1024.0;
    (-3.5 * (fr / tuned - 1.0).powi(2)).exp() * (-2.0 * PI * width * t * t).exp()
}

/// Descriptor by spatial convolution: each filter's impulse response is
/// obtained by inverse DFT of its transfer function and convolved
/// circularly with the padded, prefiltered image.
pub fn gist_spatial(
    img: &[f64],
    size: usize,
    pad: usize,
    blocks: usize,
    orientations: &[usize],
    prefilter: (f64, f64, usize),
) -> Vec<f64> {
    let (fc, eps, ppad) = prefilter;
    let pre = prefilter_spatial(&minmax_normalize(img), size, fc, eps, ppad);
    let n = size + 2 * pad;
    let padded = mirror_pad(&pre, size, size, pad);
    let cell = size / blocks;
    let mut out = Vec::new();
    for (si, &o) in orientations.iter().enumerate() {
        for j in 0..o {
            let transfer: Vec<(f64, f64)> = (0..n * n)
                .map(|i| {
                    let (fx, fy) = (bin_frequency(i % n, n), bin_frequency(i / n, n));
                    (gabor_transfer_at(n, si + 1, j, o, fx, fy), 0.0)
                })
                .collect();
            let kernel = dft2_separable(&transfer, n, n, true);
            let mut magnitude = vec![0.0; size * size];
            for y in 0..size {
                for x in 0..size {
                    let (cy, cx) = (y + pad, x + pad);
                    let (mut re, mut im) = (0.0, 0.0);
                    for ty in 0..n {
                        let krow = &kernel[((cy + n - ty) % n) * n..][..n];
                        let irow = &padded[ty * n..(ty + 1) * n];
                        for (tx, &v) in irow.iter().enumerate() {
                            let (a, b) = krow[(cx + n - tx) % n];
                            re += v * a;
                            im += v * b;
                        }
                    }
                    magnitude[y * size + x] = (re * re + im * im).sqrt();
                }
            }
            for by in 0..blocks {
                for bx in 0..blocks {
                    let mut sum = 0.0;
                    for y in by * cell..(by + 1) * cell {
                        for x in bx * cell..(bx + 1) * cell {
                            sum += magnitude[y * size + x];
                        }
                    }
                    out.push(sum / (cell * cell) as f64);
                }
            }
        }
    }
    out
}

/// Bilinear sample at continuous coordinates, clamped at the borders.
pub fn bilinear_at(src: &[f64], w: usize, h: usize, x: f64, y: f64) -> f64 {
    let x = x.clamp(0.0, (w - 1) as f64);
    let y = y.clamp(0.0, (h - 1) as f64);
    let (x0, y0) = (x.floor() as usize, y.floor() as usize);
    let (x1, y1) = ((x0 + 1).min(w - 1), (y0 + 1).min(h - 1));
    let (fx, fy) = (x - x0 as f64, y - y0 as f64);
    let p = |xx: usize, yy: usize| src[yy * w + xx];
    (1.0 - fy) * ((1.0 - fx) * p(x0, y0) + fx * p(x1, y0)) + fy * ((1.0 - fx) * p(x0, y1) + fx * p(x1, y1))
}

/// Resample to `ow`×`oh` with pixel centres aligned:
/// source coordinate `(i + 0.5)·(w/ow) − 0.5`.
pub fn bilinear_resize(src: &[f64], w: usize, h: usize, ow: usize, oh: usize) -> Vec<f64> {
    let (rx, ry) = (w as f64 / ow as f64, h as f64 / oh as f64);
    let mut out = Vec::with_capacity(ow * oh);
    for j in 0..oh {
        for i in 0..ow {
            out.push(bilinear_at(src, w, h, (i as f64 + 0.5) * rx - 0.5, (j as f64 + 0.5) * ry - 0.5));
        }
    }
    out
}

pub fn rec601(r: f64, g: f64, b: f64) -> f64 {
    0.299 * r + 0.587 * g + 0.114 * b
}

/// Eigen-decomposition of the symmetric matrix `[[a, b], [b, d]]`:
/// eigenvalues in decreasing order with unit eigenvectors.
pub fn eigen_sym_2x2(a: f64, b: f64, d: f64) -> ([f64; 2], [[f64; 2]; 2]) {
    let mean = 0.5 * (a + d);
    let r = (0.25 * (a - d) * (a - d) + b * b).sqrt();
    let (l1, l2) = (mean + r, mean - r);
    let vec_for = |l: f64| -> [f64; 2] {
        let v = if b.abs() > 1e-300 {
            [b, l - a]
        } else if (l - a).abs() <= (l - d).abs() {
            [1.0, 0.0]
        } else {
            [0.0, 1.0]
        };
        let n = (v[0] * v[0] + v[1] * v[1]).sqrt();
        [v[0] / n, v[1] / n]
    };
    ([l1, l2], [vec_for(l1), vec_for(l2)])
}

/// Minimum k-means inertia over every assignment of points to `k`
/// non-empty clusters, with one optimal assignment.
pub fn best_partition(points: &[Vec<f64>], k: usize) -> (f64, Vec<usize>) {
    let n = points.len();
    assert!(k >= 1 && k <= n && n <= 12, "enumeration too large");
    let mut best = (f64::INFINITY, Vec::new());
    let mut assign = vec![0usize; n];
    loop {
        let mut used = vec![false; k];
        assign.iter().for_each(|&a| used[a] = true);
        if used.iter().all(|&u| u) {
            let d = points[0].len();
            let mut inertia = 0.0;
            for c in 0..k {
                let members: Vec<&Vec<f64>> = points.iter().zip(&assign).filter(|(_, &a)| a == c).map(|(p, _)| p).collect();
                let centroid: Vec<f64> = (0..d)
                    .map(|t| members.iter().map(|p| p[t]).sum::<f64>() / members.len() as f64)
                    .collect();
                for p in members {
                    inertia += p.iter().zip(&centroid).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
                }
            }
            if inertia < best.0 {
                best = (inertia, assign.clone());
            }
        }
        // next assignment in base k
        let mut i = 0;
        while i < n {
            assign[i] += 1;
            if assign[i] < k {
                break;
            }
            assign[i] = 0;
            i += 1;
        }
        if i == n {
            return best;
        }
    }
}

pub fn rbf(a: &[f64], b: &[f64], gamma: f64) -> f64 {
    (-gamma * a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>()).exp()
}

/// `Σα − ½ Σᵢⱼ αᵢαⱼyᵢyⱼK(xᵢ, xⱼ)`.
pub fn dual_objective(x: &[Vec<f64>], y: &[f64], alpha: &[f64], gamma: f64) -> f64 {
    let mut quad = 0.0;
    for i in 0..x.len() {
        for j in 0..x.len() {
            quad += alpha[i] * alpha[j] * y[i] * y[j] * rbf(&x[i], &x[j], gamma);
        }
    }
    alpha.iter().sum::<f64>() - 0.5 * quad
}

/// Exact maximizer of the soft-margin SVM dual for a handful of points.
///
/// Every coefficient is assigned to its lower bound, its upper bound or the
/// free set. For each of the 3ᴺ assignments the stationarity conditions of
/// the free coefficients together with `Σ yᵢαᵢ = 0` form a linear system;
/// feasible solutions are scored and the best one returned with its
/// objective. The dual is concave, so its maximum is the stationary point
/// of some face and is found this way.
pub fn svm_dual_exact(x: &[Vec<f64>], y: &[f64], c: f64, gamma: f64) -> (Vec<f64>, f64) {
    let n = x.len();
    assert!(n <= 8, "enumeration too large");
    let q: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| y[i] * y[j] * rbf(&x[i], &x[j], gamma)).collect())
        .collect();
    let mut best = (vec![0.0; n], 0.0);
    let mut state = vec![0u8; n];
    loop {
        if let Some(alpha) = face_solution(&q, y, c, &state) {
            let w = dual_objective(x, y, &alpha, gamma);
            if w > best.1 {
                best = (alpha, w);
            }
        }
        let mut i = 0;
        while i < n {
            state[i] += 1;
            if state[i] < 3 {
                break;
            }
            state[i] = 0;
            i += 1;
        }
        if i == n {
            return best;
        }
    }
}

/// state: 0 = at 0, 1 = at C, 2 = free.
fn face_solution(q: &[Vec<f64>], y: &[f64], c: f64, state: &[u8]) -> Option<Vec<f64>> {
    let n = y.len();
    let mut alpha: Vec<f64> = state.iter().map(|&s| if s == 1 { c } else { 0.0 }).collect();
    let free: Vec<usize> = (0..n).filter(|&i| state[i] == 2).collect();
    let bound_sum: f64 = (0..n).map(|i| y[i] * alpha[i]).sum();
    if free.is_empty() {
        return (bound_sum.abs() < 1e-12).then_some(alpha);
    }
    let m = free.len();
    // unknowns: alpha_F then the multiplier b
    let mut a = vec![vec![0.0; m + 2]; m + 1];
    for (r, &i) in free.iter().enumerate() {
        for (s, &j) in free.iter().enumerate() {
            a[r][s] = q[i][j];
        }
        a[r][m] = y[i];
        let fixed: f64 = (0..n).filter(|&j| state[j] != 2).map(|j| q[i][j] * alpha[j]).sum();
        a[r][m + 1] = 1.0 - fixed;
    }
    for (s, &j) in free.iter().enumerate() {
        a[m][s] = y[j];
    }
    a[m][m + 1] = -bound_sum;
    let sol = solve(a)?;
    for (s, &i) in free.iter().enumerate() {
        if !(-1e-12..=c + 1e-12).contains(&sol[s]) {
            return None;
        }
        alpha[i] = sol[s].clamp(0.0, c);
    }
    Some(alpha)
}

/// Gaussian elimination with partial pivoting on an augmented matrix.
fn solve(mut a: Vec<Vec<f64>>) -> Option<Vec<f64>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                for k in col..=n {
                    a[r][k] -= f * a[col][k];
                }
            }
        }
    }
    Some((0..n).map(|i| a[i][n] / a[i][i]).collect())
}

/// Pearson statistic of a contingency table against independence.
pub fn chi_square_statistic(table: &[Vec<f64>]) -> f64 {
    let total: f64 = table.iter().flatten().sum();
    let rows: Vec<f64> = table.iter().map(|r| r.iter().sum()).collect();
    let cols: Vec<f64> = (0..table[0].len()).map(|j| table.iter().map(|r| r[j]).sum()).collect();
    let mut stat = 0.0;
    for (i, r) in table.iter().enumerate() {
        for (j, &o) in r.iter().enumerate() {
            let e = rows[i] * cols[j] / total;
            if e > 0.0 {
                stat += (o - e) * (o - e) / e;
            }
        }
    }
    stat
}

fn ln_gamma(x: f64) -> f64 {
    // Lanczos, g = 7
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = C[0];
    let t = x + 7.5;
    for (i, &c) in C.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Regularized lower incomplete gamma `P(a, x)`.
fn gamma_p(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        let (mut sum, mut term, mut ap) = (1.0 / a, 1.0 / a, a);
        for _ in 0..1000 {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if term.abs() < sum.abs() * 1e-16 {
                break;
            }
        }
        sum * (-x + a * x.ln() - ln_gamma(a)).exp()
    } else {
        // Lentz continued fraction for Q
        let tiny = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..1000 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        1.0 - (-x + a * x.ln() - ln_gamma(a)).exp() * h
    }
}

pub fn chi_square_cdf(x: f64, df: usize) -> f64 {
    gamma_p(df as f64 / 2.0, x / 2.0)
}

/// Inverse CDF by bisection.
pub fn chi_square_quantile(p: f64, df: usize) -> f64 {
    let (mut lo, mut hi) = (0.0, 10.0 * df as f64 + 100.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if chi_square_cdf(mid, df) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_square_known_quantiles() {
        assert!((chi_square_quantile(0.99, 18) - 34.8053).abs() < 1e-3);
        assert!((chi_square_quantile(0.95, 1) - 3.8415).abs() < 1e-3);
        assert!((chi_square_quantile(0.5, 2) - 2.0 * 2f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn dft_routes_agree() {
        let g: Vec<(f64, f64)> = (0..12).map(|i| ((i as f64).sin(), (i * i % 5) as f64)).collect();
        let a = dft2_direct(&g, 4, 3, false);
        let b = dft2_separable(&g, 4, 3, false);
        for (p, q) in a.iter().zip(&b) {
            assert!((p.0 - q.0).abs() < 1e-12 && (p.1 - q.1).abs() < 1e-12);
        }
        let back = dft2_direct(&a, 4, 3, true);
        for (p, q) in back.iter().zip(&g) {
            assert!((p.0 - q.0).abs() < 1e-12 && (p.1 - q.1).abs() < 1e-12);
        }
    }

    #[test]
    fn two_point_svm() {
        // x = ±1 on a line: alpha = 1/(1 - K) with K = exp(-4γ)
        let x = vec![vec![-1.0], vec![1.0]];
        let y = vec![-1.0, 1.0];
        let (alpha, _) = svm_dual_exact(&x, &y, 100.0, 0.5);
        let k = (-2.0f64).exp();
        assert!((alpha[0] - 1.0 / (1.0 - k)).abs() < 1e-12);
        assert!((alpha[1] - alpha[0]).abs() < 1e-12);
    }

    #[test]
    fn eigen_2x2() {
        let ([l1, l2], [v1, _]) = eigen_sym_2x2(2.0, 1.0, 2.0);
        assert!((l1 - 3.0).abs() < 1e-15 && (l2 - 1.0).abs() < 1e-15);
        assert!((v1[0] - v1[1]).abs() < 1e-15);
    }

    #[test]
    fn partition_fixture() {
        let pts: Vec<Vec<f64>> = [0.0, 1.0, 2.0, 3.0, 10.0, 11.0, 12.0, 13.0].iter().map(|&v| vec![v]).collect();
        let (inertia, assign) = best_partition(&pts, 2);
        assert_eq!(inertia, 10.0);
        assert!(assign[..4].iter().all(|&a| a == assign[0]) && assign[4..].iter().all(|&a| a != assign[0]));
    }
}
