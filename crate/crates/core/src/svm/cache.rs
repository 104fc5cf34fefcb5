use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use crate::scalar::Scalar;

use super::kernel::rbf;

/// Least-recently-used cache of RBF kernel matrix rows.
pub struct KernelCache<'a, T: Scalar, V> {
    data: &'a [V],
    gamma: T,
    capacity: usize,
    rows: HashMap<usize, (Rc<[T]>, u64)>,
    by_age: BTreeMap<u64, usize>,
    clock: u64,
    hits: u64,
    misses: u64,
}

impl<'a, T: Scalar, V: AsRef<[T]>> KernelCache<'a, T, V> {
    /// Holds as many rows as fit in `bytes`, and never fewer than two.
    pub fn new(data: &'a [V], gamma: T, bytes: usize) -> Self {
        let row_bytes = (data.len() * std::mem::size_of::<T>()).max(1);
        Self {
            data,
            gamma,
            capacity: (bytes / row_bytes).max(2),
            rows: HashMap::new(),
            by_age: BTreeMap::new(),
            clock: 0,
            hits: 0,
            misses: 0,
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// (hits, misses)
    pub fn stats(&self) -> (u64, u64) {
        (self.hits, self.misses)
    }

    pub fn contains(&self, i: usize) -> bool {
        self.rows.contains_key(&i)
    }

    /// Row `i`: `K(x_i, x_t)` for every `t`.
    pub fn row(&mut self, i: usize) -> Rc<[T]> {
        self.clock += 1;
        if let Some((row, age)) = self.rows.get_mut(&i) {
            self.hits += 1;
            self.by_age.remove(age);
            *age = self.clock;
            self.by_age.insert(self.clock, i);
            return row.clone();
        }
        self.misses += 1;
        if self.rows.len() >= self.capacity {
            if let Some((_, victim)) = self.by_age.pop_first() {
                self.rows.remove(&victim);
            }
        }
        let xi = self.data[i].as_ref();
        let row: Rc<[T]> = self.data.iter().map(|xt| rbf(xi, xt.as_ref(), self.gamma)).collect();
        self.rows.insert(i, (row.clone(), self.clock));
        self.by_age.insert(self.clock, i);
        row
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evicts_least_recently_used() {
        let data: Vec<Vec<f64>> = (0..4).map(|i| vec![i as f64]).collect();
        // room for exactly two rows
        let mut cache = KernelCache::new(&data, 1.0, 2 * 4 * 8);
        assert_eq!(cache.capacity(), 2);
        cache.row(0);
        cache.row(1);
        cache.row(0);
        cache.row(2);
        assert!(cache.contains(0) && cache.contains(2) && !cache.contains(1));
        assert_eq!(cache.stats(), (1, 3));
        let r = cache.row(2);
        assert_eq!(r[2], 1.0);
        assert!((r[0] - (-4.0f64).exp()).abs() < 1e-15);
    }
}
