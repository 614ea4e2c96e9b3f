//! Exact proportional sampling over integer weights with a Fenwick tree of
//! partial sums: `O(log n)` updates and draws.

use rand::Rng;

#[derive(Debug, Clone)]
pub struct CumulativeWeights {
    tree: Vec<u64>,
    weights: Vec<u64>,
    total: u64,
}

impl CumulativeWeights {
    pub fn new(len: usize) -> Self {
        CumulativeWeights { tree: vec![0; len + 1], weights: vec![0; len], total: 0 }
    }

    pub fn from_weights(weights: &[u64]) -> Self {
        let mut w = Self::new(weights.len());
        for (i, &x) in weights.iter().enumerate() {
            w.set(i, x);
        }
        w
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn weight(&self, index: usize) -> u64 {
        self.weights[index]
    }

    pub fn set(&mut self, index: usize, weight: u64) {
        let old = self.weights[index];
        if old == weight {
            return;
        }
        self.weights[index] = weight;
        self.total = self.total - old + weight;
        let mut k = index + 1;
        while k < self.tree.len() {
            self.tree[k] = self.tree[k] - old + weight;
            k += k & k.wrapping_neg();
        }
    }

    /// Smallest index whose inclusive prefix sum exceeds `target`.
    /// Requires `target < total()`.
    pub fn find(&self, mut target: u64) -> usize {
        debug_assert!(target < self.total);
        let mut pos = 0;
        let mut step = (self.tree.len() - 1).next_power_of_two();
        while step > 0 {
            let next = pos + step;
            if next < self.tree.len() && self.tree[next] <= target {
                target -= self.tree[next];
                pos = next;
            }
            step >>= 1;
        }
        pos
    }

    /// Draws an index with probability `weight / total`; `None` when every
    /// weight is zero.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<usize> {
        (self.total > 0).then(|| self.find(rng.random_range(0..self.total)))
    }
}
