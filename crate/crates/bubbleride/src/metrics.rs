//! Distances and statistical summaries: weighted quantile sketches, exact 1-D
//! Wasserstein distance between step quantile functions, and the path-space
//! metric that compares inventory paths with entry times by freezing the
//! pre-entry segment at the entry value.

use crate::error::{Error, Result};

/// Number of quantile knots used when sketches are exchanged across modules.
pub const SKETCH_GRID: usize = 99;

/// A weighted empirical distribution: sorted support values with positive
/// weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileSketch {
    values: Vec<f64>,
    weights: Vec<f64>,
}

impl QuantileSketch {
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        let w = vec![1.0; samples.len()];
        Self::from_weighted(samples, &w)
    }

    pub fn from_weighted(samples: &[f64], weights: &[f64]) -> Result<Self> {
        if samples.is_empty() || samples.len() != weights.len() {
            return Err(Error::EmptySketch);
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) || weights.iter().any(|&w| w < 0.0) {
            return Err(Error::EmptySketch);
        }
        let mut pairs: Vec<(f64, f64)> = samples
            .iter()
            .zip(weights.iter())
            .filter(|(_, &w)| w > 0.0)
            .map(|(&v, &w)| (v, w / total))
            .collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        Ok(QuantileSketch {
            values: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
        })
    }

    /// Build directly from already-sorted equal-weight quantile knots, as used
    /// for damped interpolation of measure flows.
    pub fn from_sorted_quantiles(quantiles: Vec<f64>) -> Result<Self> {
        if quantiles.is_empty() {
            return Err(Error::EmptySketch);
        }
        let n = quantiles.len();
        Ok(QuantileSketch {
            weights: vec![1.0 / n as f64; n],
            values: quantiles,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }

    /// Left-continuous generalized inverse of the CDF.
    pub fn quantile(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        let mut acc = 0.0;
        for (v, w) in self.values.iter().zip(&self.weights) {
            acc += w;
            if acc >= u - 1e-15 {
                return *v;
            }
        }
        *self.values.last().unwrap()
    }

    /// Summarize onto the fixed quantile grid (midpoint rule), the bounded
    /// representation exchanged between the flow and the solver.
    pub fn to_grid(&self) -> Vec<f64> {
        (0..SKETCH_GRID)
            .map(|i| self.quantile((i as f64 + 0.5) / SKETCH_GRID as f64))
            .collect()
    }
}

/// Exact 1-Wasserstein distance between two weighted empirical measures,
/// computed as the area between their CDFs.
pub fn wasserstein1_1d(a: &QuantileSketch, b: &QuantileSketch) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySketch);
    }
    let mut dist = 0.0;
    let (mut ia, mut ib) = (0usize, 0usize);
    let (mut fa, mut fb) = (0.0f64, 0.0f64);
    let mut x = a.values[0].min(b.values[0]);
    while ia < a.len() || ib < b.len() {
        let next = match (a.values.get(ia), b.values.get(ib)) {
            (Some(&va), Some(&vb)) => va.min(vb),
            (Some(&va), None) => va,
            (None, Some(&vb)) => vb,
            (None, None) => break,
        };
        dist += (fa - fb).abs() * (next - x);
        x = next;
        while ia < a.len() && a.values[ia] <= next {
            fa += a.weights[ia];
            ia += 1;
        }
        while ib < b.len() && b.values[ib] <= next {
            fb += b.weights[ib];
            ib += 1;
        }
    }
    Ok(dist)
}

/// Metric on inventory paths carrying entry times: sup distance between the
/// continuous counterparts (pre-entry segment frozen at the entry value) plus
/// the entry-time gap. Entries are grid indices; `None` is the never-entered
/// sentinel, mapped to time T + 1.
pub fn path_metric_dx(
    x1: &[f64],
    entry1: Option<usize>,
    x2: &[f64],
    entry2: Option<usize>,
    dt: f64,
    horizon: f64,
) -> f64 {
    assert_eq!(x1.len(), x2.len());
    let frozen = |x: &[f64], entry: Option<usize>, k: usize| -> f64 {
        match entry {
            None => 0.0,
            Some(e) => {
                if k < e {
                    x[e.min(x.len() - 1)]
                } else {
                    x[k]
                }
            }
        }
    };
    let sup = (0..x1.len())
        .map(|k| (frozen(x1, entry1, k) - frozen(x2, entry2, k)).abs())
        .fold(0.0, f64::max);
    let t_of = |entry: Option<usize>| entry.map(|e| e as f64 * dt).unwrap_or(horizon + 1.0);
    sup + (t_of(entry1) - t_of(entry2)).abs()
}
