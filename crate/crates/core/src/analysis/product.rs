//! Delayed product moments `(1/T) sum_i S(i + d_1) ... S(i + d_k)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{AnalysisError, CompensatedSum, Result};

/// Detection threshold `5 / sqrt(T)` for a mean of `T` roughly unit-variance terms.
pub fn noise_floor(t: usize) -> f64 {
    5.0 / (t as f64).sqrt()
}

/// Product moment over `t` terms. When `block_len` is given the last delay
/// must stay below `t - block_len`.
pub fn product_moment(samples: &[f64], delays: &[usize], t: usize, block_len: Option<usize>) -> Result<f64> {
    let last = *delays.last().ok_or(AnalysisError::ZeroOrder)?;
    if t == 0 {
        return Err(AnalysisError::Empty);
    }
    if !delays.windows(2).all(|w| w[0] < w[1]) {
        return Err(AnalysisError::Delays("delays must be strictly increasing".into()));
    }
    if let Some(m) = block_len {
        if last + m >= t {
            return Err(AnalysisError::Delays(format!("largest delay {last} must be below T - M = {}", t as i64 - m as i64)));
        }
    }
    let needed = t + last;
    if samples.len() < needed {
        return Err(AnalysisError::InsufficientSamples {
            needed,
            available: samples.len(),
        });
    }
    let mut acc = CompensatedSum::default();
    for i in 0..t {
        acc.add(delays.iter().map(|&d| samples[i + d]).product());
    }
    Ok(acc.value() / t as f64)
}

/// `c(d1, d2) = (1/T) sum_{i<T} S(i) S(i + d1) S(i + d2)` for `0 <= d1, d2 < window`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TripleMomentGrid {
    pub window: usize,
    pub count: usize,
    /// Row-major, row `d1`.
    pub values: Vec<f64>,
}

impl TripleMomentGrid {
    pub fn get(&self, d1: usize, d2: usize) -> f64 {
        self.values[d1 * self.window + d2]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Cells with `|c| > threshold`, as `(d1, d2, c)`.
    pub fn cells_above(&self, threshold: f64) -> Vec<(usize, usize, f64)> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.abs() > threshold)
            .map(|(i, &v)| (i / self.window, i % self.window, v))
            .collect()
    }
}

/// Builds the full grid; each cell is an independent sum so the result does
/// not depend on the thread count.
pub fn triple_moment_grid(samples: &[f64], window: usize, t: usize) -> Result<TripleMomentGrid> {
    if window == 0 || t == 0 {
        return Err(AnalysisError::Empty);
    }
    let needed = t + window - 1;
    if samples.len() < needed {
        return Err(AnalysisError::InsufficientSamples {
            needed,
            available: samples.len(),
        });
    }
    if let Some(i) = samples[..needed].iter().position(|x| !x.is_finite()) {
        return Err(AnalysisError::NonFinite(i));
    }
    let base = &samples[..t];
    let values: Vec<f64> = (0..window)
        .into_par_iter()
        .flat_map_iter(|d1| {
            let pair: Vec<f64> = base.iter().zip(&samples[d1..d1 + t]).map(|(a, b)| a * b).collect();
            (0..window).map(move |d2| dot(&pair, &samples[d2..d2 + t]) / t as f64).collect::<Vec<_>>()
        })
        .collect();
    Ok(TripleMomentGrid { window, count: t, values })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut lanes = [0.0f64; 4];
    let chunks = a.len() / 4;
    for c in 0..chunks {
        for l in 0..4 {
            lanes[l] += a[4 * c + l] * b[4 * c + l];
        }
    }
    let mut tail = 0.0;
    for i in 4 * chunks..a.len() {
        tail += a[i] * b[i];
    }
    (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]) + tail
}
