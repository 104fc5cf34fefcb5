use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::{squared_distance, Scalar};

pub const DEFAULT_MAX_ITER: usize = 300;

#[derive(Debug, Clone, PartialEq)]
pub struct KmeansResult<T> {
    pub centroids: Vec<Vec<T>>,
    pub assignments: Vec<usize>,
    /// Σ squared distance from each point to its assigned centroid.
    pub inertia: T,
    /// Completed centroid updates.
    pub iterations: usize,
    /// Inertia after every assignment step, starting with the seeding.
    pub inertia_trace: Vec<T>,
}

/// Lloyd's algorithm from k-means++ seeding, deterministic in `seed`.
///
/// Stops when an assignment step changes nothing or after `max_iter`
/// centroid updates. Nearest-centroid ties go to the lower index.
pub fn kmeans<T: Scalar, V: AsRef<[T]> + Sync>(
    x: &[V],
    k: usize,
    seed: u64,
    max_iter: usize,
) -> Result<KmeansResult<T>> {
    let n = x.len();
    if k == 0 || k > n {
        return Err(Error::arg(format!("cluster count {k} outside [1, {n}]")));
    }
    let d = x[0].as_ref().len();
    if let Some(i) = x.iter().position(|p| p.as_ref().len() != d) {
        return Err(Error::arg(format!(
            "point {i} has dimension {}, expected {d}",
            x[i].as_ref().len()
        )));
    }
    if x.iter().any(|p| p.as_ref().iter().any(|v| !v.is_finite())) {
        return Err(Error::arg("k-means input contains non-finite values"));
    }

    let mut centroids = seed_plus_plus(x, k, seed);
    let (mut assignments, mut distances) = assign(x, &centroids);
    let mut trace = vec![sum(&distances)];
    let mut iterations = 0;
    while iterations < max_iter {
        centroids = update(x, k, &centroids, &mut assignments, &distances);
        iterations += 1;
        let (next, next_distances) = assign(x, &centroids);
        trace.push(sum(&next_distances));
        let stable = next == assignments;
        assignments = next;
        distances = next_distances;
        if stable {
            break;
        }
    }
    Ok(KmeansResult {
        centroids,
        assignments,
        inertia: *trace.last().expect("trace starts non-empty"),
        iterations,
        inertia_trace: trace,
    })
}

/// Runs every seed and keeps the lowest inertia; ties keep the earlier seed.
pub fn kmeans_best_of<T: Scalar, V: AsRef<[T]> + Sync>(
    x: &[V],
    k: usize,
    seeds: impl IntoIterator<Item = u64>,
    max_iter: usize,
) -> Result<KmeansResult<T>> {
    let mut best: Option<KmeansResult<T>> = None;
    for seed in seeds {
        let run = kmeans(x, k, seed, max_iter)?;
        if best.as_ref().is_none_or(|b| run.inertia < b.inertia) {
            best = Some(run);
        }
    }
    best.ok_or_else(|| Error::arg("no seeds given"))
}

fn sum<T: Scalar>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |a, &b| a + b)
}

fn seed_plus_plus<T: Scalar, V: AsRef<[T]>>(x: &[V], k: usize, seed: u64) -> Vec<Vec<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let first = rng.random_range(0..x.len());
    let mut centroids = vec![x[first].as_ref().to_vec()];
    let mut nearest: Vec<f64> = x
        .iter()
        .map(|p| squared_distance(p.as_ref(), &centroids[0]).as_f64())
        .collect();
    while centroids.len() < k {
        let total: f64 = nearest.iter().sum();
        let pick = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut chosen = None;
            for (i, &w) in nearest.iter().enumerate() {
                acc += w;
                if w > 0.0 && acc > target {
                    chosen = Some(i);
                    break;
                }
            }
            // rounding can leave `target` just past the final sum
            chosen.unwrap_or_else(|| nearest.iter().rposition(|&w| w > 0.0).expect("total is positive"))
        } else {
            rng.random_range(0..x.len())
        };
        let c = x[pick].as_ref().to_vec();
        for (m, p) in nearest.iter_mut().zip(x) {
            *m = m.min(squared_distance(p.as_ref(), &c).as_f64());
        }
        centroids.push(c);
    }
    centroids
}

fn assign<T: Scalar, V: AsRef<[T]> + Sync>(x: &[V], centroids: &[Vec<T>]) -> (Vec<usize>, Vec<T>) {
    x.par_iter()
        .map(|p| {
            let p = p.as_ref();
            let mut best = (0, squared_distance(p, &centroids[0]));
            for (j, c) in centroids.iter().enumerate().skip(1) {
                let dist = squared_distance(p, c);
                if dist < best.1 {
                    best = (j, dist);
                }
            }
            best
        })
        .unzip()
}

/// Centroid means. An empty cluster takes over the point farthest from its
/// current centroid, which is moved into it.
fn update<T: Scalar, V: AsRef<[T]>>(
    x: &[V],
    k: usize,
    previous: &[Vec<T>],
    assignments: &mut [usize],
    distances: &[T],
) -> Vec<Vec<T>> {
    let d = previous[0].len();
    let mut sums = vec![vec![T::zero(); d]; k];
    let mut counts = vec![0usize; k];
    for (p, &a) in x.iter().zip(assignments.iter()) {
        counts[a] += 1;
        for (s, &v) in sums[a].iter_mut().zip(p.as_ref()) {
            *s = *s + v;
        }
    }
    let mut taken = vec![false; x.len()];
    for j in 0..k {
        if counts[j] > 0 {
            continue;
        }
        let far = (0..x.len())
            .filter(|&i| !taken[i] && counts[assignments[i]] > 1)
            .fold(None, |best: Option<usize>, i| match best {
                Some(b) if distances[b] >= distances[i] => Some(b),
                _ => Some(i),
            });
        let Some(i) = far else { continue };
        taken[i] = true;
        let old = assignments[i];
        counts[old] -= 1;
        for (s, &v) in sums[old].iter_mut().zip(x[i].as_ref()) {
            *s = *s - v;
        }
        assignments[i] = j;
        counts[j] = 1;
        sums[j] = x[i].as_ref().to_vec();
    }
    sums.into_iter()
        .zip(&counts)
        .zip(previous)
        .map(|((s, &c), prev)| {
            if c == 0 {
                prev.clone()
            } else {
                let inv = T::one() / T::of(c as f64);
                s.into_iter().map(|v| v * inv).collect()
            }
        })
        .collect()
}
