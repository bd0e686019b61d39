//! Streaming mean/variance with an order-fixed pairwise reduction.

use serde::{Deserialize, Serialize};

/// Count, mean and sum of squared deviations of a sample.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub count: u64,
    pub mean: f64,
    m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(a: Moments, b: Moments) -> Moments {
        if a.count == 0 {
            return b;
        }
        if b.count == 0 {
            return a;
        }
        let count = a.count + b.count;
        let delta = b.mean - a.mean;
        let mean = a.mean + delta * b.count as f64 / count as f64;
        let m2 = a.m2 + b.m2 + delta * delta * a.count as f64 * b.count as f64 / count as f64;
        Moments { count, mean, m2 }
    }

    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    /// Sample standard deviation over `√count`.
    pub fn std_err(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }

    pub fn estimate(&self) -> Estimate {
        Estimate {
            value: self.mean,
            std_err: self.std_err(),
        }
    }
}

/// Merges block results as a balanced binary tree in index order, so the
/// floating-point result depends only on the block layout.
pub fn pairwise_reduce<T: Copy>(mut items: Vec<T>, merge: impl Fn(T, T) -> T) -> Option<T> {
    if items.is_empty() {
        return None;
    }
    while items.len() > 1 {
        items = items
            .chunks(2)
            .map(|pair| {
                if pair.len() == 2 {
                    merge(pair[0], pair[1])
                } else {
                    pair[0]
                }
            })
            .collect();
    }
    items.pop()
}

/// A Monte-Carlo (or exact, with zero error) estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub std_err: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            std_err: 0.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn merge_matches_single_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.1).collect();
        let mut whole = Moments::default();
        xs.iter().for_each(|x| whole.push(*x));
        let blocks: Vec<Moments> = xs
            .chunks(64)
            .map(|c| {
                let mut m = Moments::default();
                c.iter().for_each(|x| m.push(*x));
                m
            })
            .collect();
        let merged = pairwise_reduce(blocks, Moments::merge).unwrap();
        assert_eq!(merged.count, 1000);
        assert_abs_diff_eq!(merged.mean, whole.mean, epsilon = 1e-12);
        assert_abs_diff_eq!(merged.variance(), whole.variance(), epsilon = 1e-10);
    }

    #[test]
    fn empty_reduce() {
        assert!(pairwise_reduce(Vec::<Moments>::new(), Moments::merge).is_none());
    }
}
