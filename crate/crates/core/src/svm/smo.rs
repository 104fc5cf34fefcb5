//! Sequential minimal optimization for the soft-margin dual
//!
//! ```text
//! max  W(α) = Σ αᵢ − ½ Σᵢ Σⱼ αᵢ αⱼ yᵢ yⱼ K(xᵢ, xⱼ)
//! s.t. 0 ≤ αᵢ ≤ C,  Σ αᵢ yᵢ = 0
//! ```
//!
//! Each step picks the maximal violating pair: `i` maximizes
//! `uₜ = yₜ − gₜ` over coefficients that may move up, `j` minimizes it over
//! coefficients that may move down (`gₜ = Σ αₛ yₛ K(xₜ, xₛ)`). Since the
//! prediction error is `Eₜ = b − uₜ`, this pair also maximizes `|Eᵢ − Eⱼ|`.
//! The pair is optimized analytically with box clipping. The solver stops
//! once `max u − min u ≤ tol`, which leaves every example within `tol` of
//! its KKT condition.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::cache::KernelCache;
use super::kernel::rbf;
use super::SvmParams;

/// Coefficients at or below this are not support vectors.
const SV_THRESHOLD: f64 = 1e-8;
/// Curvature floor for degenerate pairs (duplicate points).
const TAU: f64 = 1e-12;

/// Kernel expansion `f(x) = Σ cᵢ·K(svᵢ, x) + b` with `cᵢ = αᵢ·yᵢ`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryModel<T> {
    pub support_vectors: Vec<Vec<T>>,
    pub coefficients: Vec<T>,
    pub bias: T,
    pub gamma: T,
    pub dim: usize,
}

impl<T: Scalar> BinaryModel<T> {
    pub fn decision_value(&self, x: &[T]) -> Result<T> {
        decision_value(self, x)
    }
}

/// Evaluates the decision function at `x`.
pub fn decision_value<T: Scalar>(m: &BinaryModel<T>, x: &[T]) -> Result<T> {
    if x.len() != m.dim {
        return Err(Error::arg(format!(
            "input has dimension {}, model expects {}",
            x.len(),
            m.dim
        )));
    }
    Ok(m
        .support_vectors
        .iter()
        .zip(&m.coefficients)
        .fold(m.bias, |acc, (sv, &c)| acc + c * rbf(sv, x, m.gamma)))
}

/// Full solver output, including the coefficients of non-support vectors.
#[derive(Debug, Clone)]
pub struct SmoSolution<T> {
    pub alpha: Vec<T>,
    pub bias: T,
    pub iterations: usize,
    /// Final `max u − min u`.
    pub gap: T,
    /// Dual objective at exit.
    pub objective: T,
    /// True when the solver quit on the stall limit or iteration cap before
    /// reaching `tol`.
    pub stalled: bool,
    /// Dual objective before the first and after every update, when tracing.
    pub objective_trace: Vec<T>,
}

pub struct SmoSolver {
    params: SvmParams,
    trace: bool,
    max_iterations: Option<usize>,
}

impl SmoSolver {
    pub fn new(params: SvmParams) -> Self {
        Self {
            params,
            trace: false,
            max_iterations: None,
        }
    }

    /// Records the dual objective after every step (costs O(N) per step).
    pub fn with_trace(mut self, trace: bool) -> Self {
        self.trace = trace;
        self
    }

    pub fn with_max_iterations(mut self, cap: usize) -> Self {
        self.max_iterations = Some(cap);
        self
    }

    pub fn solve<T: Scalar, V: AsRef<[T]>>(&self, x: &[V], y: &[i8]) -> Result<SmoSolution<T>> {
        self.params.validate()?;
        check_problem(x, y)?;
        let n = x.len();
        let c = T::of(self.params.c);
        let tol = T::of(self.params.tol);
        let tau = T::of(TAU);
        let yf: Vec<T> = y.iter().map(|&v| T::of(v as f64)).collect();
        let cap = self.max_iterations.unwrap_or_else(|| (100 * n).max(10_000_000));

        let mut cache = KernelCache::new(x, T::of(self.params.gamma), self.params.cache_bytes);
        let mut alpha = vec![T::zero(); n];
        // gradient of ½αᵀQα − eᵀα, with Q = yyᵀ∘K
        let mut grad = vec![-T::one(); n];
        let mut trace = Vec::new();
        if self.trace {
            trace.push(objective(&alpha, &grad));
        }

        let mut iterations = 0;
        let mut idle = 0;
        let mut stalled = false;
        let mut gap;
        loop {
            let (i, j, g) = select_pair(&alpha, &grad, &yf, c);
            gap = g;
            let (i, j) = match (i, j) {
                (Some(i), Some(j)) if gap > tol => (i, j),
                _ => break,
            };
            if iterations >= cap {
                stalled = true;
                break;
            }
            iterations += 1;

            let ki = cache.row(i);
            let kj = cache.row(j);
            let (old_i, old_j) = (alpha[i], alpha[j]);
            let (yi, yj) = (yf[i], yf[j]);
            let mut quad = ki[i] + kj[j] - (ki[j] + ki[j]);
            if quad <= T::zero() {
                quad = tau;
            }

            if yi != yj {
                let delta = (-grad[i] - grad[j]) / quad;
                let diff = alpha[i] - alpha[j];
                alpha[i] = alpha[i] + delta;
                alpha[j] = alpha[j] + delta;
                if diff > T::zero() {
                    if alpha[j] < T::zero() {
                        alpha[j] = T::zero();
                        alpha[i] = diff;
                    }
                } else if alpha[i] < T::zero() {
                    alpha[i] = T::zero();
                    alpha[j] = -diff;
                }
                if diff > T::zero() {
                    if alpha[i] > c {
                        alpha[i] = c;
                        alpha[j] = c - diff;
                    }
                } else if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = c + diff;
                }
            } else {
                let delta = (grad[i] - grad[j]) / quad;
                let sum = alpha[i] + alpha[j];
                alpha[i] = alpha[i] - delta;
                alpha[j] = alpha[j] + delta;
                if sum > c {
                    if alpha[i] > c {
                        alpha[i] = c;
                        alpha[j] = sum - c;
                    }
                } else if alpha[j] < T::zero() {
                    alpha[j] = T::zero();
                    alpha[i] = sum;
                }
                if sum > c {
                    if alpha[j] > c {
                        alpha[j] = c;
                        alpha[i] = sum - c;
                    }
                } else if alpha[i] < T::zero() {
                    alpha[i] = T::zero();
                    alpha[j] = sum;
                }
            }

            let (di, dj) = (alpha[i] - old_i, alpha[j] - old_j);
            if di == T::zero() && dj == T::zero() {
                idle += 1;
                if idle > self.params.max_passes {
                    stalled = true;
                    break;
                }
                continue;
            }
            idle = 0;
            let (si, sj) = (yi * di, yj * dj);
            for t in 0..n {
                grad[t] = grad[t] + yf[t] * (ki[t] * si + kj[t] * sj);
            }
            if self.trace {
                trace.push(objective(&alpha, &grad));
            }
        }

        let bias = compute_bias(&alpha, &grad, &yf, c);
        Ok(SmoSolution {
            objective: objective(&alpha, &grad),
            alpha,
            bias,
            iterations,
            gap,
            stalled,
            objective_trace: trace,
        })
    }
}

fn check_problem<T: Scalar, V: AsRef<[T]>>(x: &[V], y: &[i8]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::arg(format!("{} examples but {} labels", x.len(), y.len())));
    }
    if x.len() < 2 {
        return Err(Error::arg("binary training needs at least two examples"));
    }
    if let Some(bad) = y.iter().find(|&&v| v != 1 && v != -1) {
        return Err(Error::arg(format!("binary labels must be ±1, got {bad}")));
    }
    if !(y.contains(&1) && y.contains(&-1)) {
        return Err(Error::arg("binary training needs both classes present"));
    }
    let d = x[0].as_ref().len();
    for (i, row) in x.iter().enumerate() {
        let row = row.as_ref();
        if row.len() != d {
            return Err(Error::arg(format!("example {i} has dimension {}, expected {d}", row.len())));
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::arg(format!("example {i} has a non-finite value")));
        }
    }
    Ok(())
}

#[inline]
fn can_move_up<T: Scalar>(a: T, y: T, c: T) -> bool {
    if y > T::zero() {
        a < c
    } else {
        a > T::zero()
    }
}

#[inline]
fn can_move_down<T: Scalar>(a: T, y: T, c: T) -> bool {
    if y > T::zero() {
        a > T::zero()
    } else {
        a < c
    }
}

/// Maximal violating pair and its gap `max u − min u`. Ties go to the lowest
/// index.
fn select_pair<T: Scalar>(alpha: &[T], grad: &[T], y: &[T], c: T) -> (Option<usize>, Option<usize>, T) {
    let mut up = (None, T::neg_infinity());
    let mut low = (None, T::infinity());
    for t in 0..alpha.len() {
        let u = -y[t] * grad[t];
        if can_move_up(alpha[t], y[t], c) && u > up.1 {
            up = (Some(t), u);
        }
        if can_move_down(alpha[t], y[t], c) && u < low.1 {
            low = (Some(t), u);
        }
    }
    let gap = if up.0.is_some() && low.0.is_some() {
        up.1 - low.1
    } else {
        T::zero()
    };
    (up.0, low.0, gap)
}

/// Mean of `u` over free coefficients, else the midpoint of the feasible
/// interval.
fn compute_bias<T: Scalar>(alpha: &[T], grad: &[T], y: &[T], c: T) -> T {
    let mut free_sum = T::zero();
    let mut free = 0usize;
    let mut hi = T::neg_infinity();
    let mut lo = T::infinity();
    for t in 0..alpha.len() {
        let u = -y[t] * grad[t];
        if alpha[t] > T::zero() && alpha[t] < c {
            free_sum = free_sum + u;
            free += 1;
        }
        if can_move_up(alpha[t], y[t], c) {
            hi = hi.max(u);
        }
        if can_move_down(alpha[t], y[t], c) {
            lo = lo.min(u);
        }
    }
    if free > 0 {
        free_sum / T::of(free as f64)
    } else if hi.is_finite() && lo.is_finite() {
        (hi + lo) / T::of(2.0)
    } else if hi.is_finite() {
        hi
    } else {
        lo
    }
}

/// `W(α) = ½ Σ αᵢ (1 − ∇ᵢ)` given the gradient `∇ = Qα − 1`.
fn objective<T: Scalar>(alpha: &[T], grad: &[T]) -> T {
    alpha
        .iter()
        .zip(grad)
        .fold(T::zero(), |acc, (&a, &g)| acc + a * (T::one() - g))
        / T::of(2.0)
}

/// Trains a binary classifier on labels `±1`.
pub fn smo_train_binary<T: Scalar, V: AsRef<[T]>>(x: &[V], y: &[i8], params: &SvmParams) -> Result<BinaryModel<T>> {
    let sol = SmoSolver::new(*params).solve(x, y)?;
    Ok(model_from_solution(x, y, &sol, T::of(params.gamma)))
}

pub(crate) fn model_from_solution<T: Scalar, V: AsRef<[T]>>(
    x: &[V],
    y: &[i8],
    sol: &SmoSolution<T>,
    gamma: T,
) -> BinaryModel<T> {
    let threshold = T::of(SV_THRESHOLD);
    let mut support_vectors = Vec::new();
    let mut coefficients = Vec::new();
    for (t, &a) in sol.alpha.iter().enumerate() {
        if a > threshold {
            support_vectors.push(x[t].as_ref().to_vec());
            coefficients.push(a * T::of(y[t] as f64));
        }
    }
    BinaryModel {
        support_vectors,
        coefficients,
        bias: sol.bias,
        gamma,
        dim: x[0].as_ref().len(),
    }
}
