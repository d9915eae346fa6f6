use num_traits::Zero;
use rayon::prelude::*;
use std::ops::Add;

const LEAF: usize = 16;

/// Pairwise (cascade) summation with a fixed tree shape, so the result
/// depends only on the order of `xs`.
pub fn pairwise_sum<T: Copy + Zero + Add<Output = T>>(xs: &[T]) -> T {
    if xs.len() <= LEAF {
        xs.iter().fold(T::zero(), |acc, &x| acc + x)
    } else {
        let mid = xs.len() / 2;
        pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
    }
}

/// Evaluates `f` over `range` in parallel, then reduces in index order.
/// The reduction tree does not depend on the worker count.
pub fn par_collect_sum<T, F>(range: std::ops::Range<usize>, f: F) -> T
where
    T: Copy + Zero + Add<Output = T> + Send,
    F: Fn(usize) -> T + Sync + Send,
{
    let terms: Vec<T> = range.into_par_iter().map(f).collect();
    pairwise_sum(&terms)
}

/// Neumaier's compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}
