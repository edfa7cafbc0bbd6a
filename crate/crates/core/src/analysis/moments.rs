//! Raw sample moments `m_k = (1/T) sum x^k`.

use serde::{Deserialize, Serialize};

use super::{AnalysisError, CompensatedSum, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub count: usize,
    /// `moments[k - 1]` is the raw moment of order `k`.
    pub moments: Vec<f64>,
}

impl MomentReport {
    pub fn order(&self, k: usize) -> Option<f64> {
        k.checked_sub(1).and_then(|i| self.moments.get(i)).copied()
    }

    /// Central moments derived from the raw ones by binomial expansion.
    pub fn central(&self) -> Vec<f64> {
        let mean = self.moments.first().copied().unwrap_or(0.0);
        (1..=self.moments.len())
            .map(|k| {
                let mut acc = CompensatedSum::default();
                let mut binom = 1.0;
                for j in 0..=k {
                    let raw = if j == 0 { 1.0 } else { self.moments[j - 1] };
                    acc.add(binom * raw * (-mean).powi((k - j) as i32));
                    binom = binom * (k - j) as f64 / (j + 1) as f64;
                }
                acc.value()
            })
            .collect()
    }
}

/// Raw moments of orders `1..=max_order`, summed with compensation.
pub fn raw_moments(samples: &[f64], max_order: usize) -> Result<MomentReport> {
    if samples.is_empty() {
        return Err(AnalysisError::Empty);
    }
    if max_order == 0 {
        return Err(AnalysisError::ZeroOrder);
    }
    if let Some(i) = samples.iter().position(|x| !x.is_finite()) {
        return Err(AnalysisError::NonFinite(i));
    }
    let mut sums = vec![CompensatedSum::default(); max_order];
    for &x in samples {
        let mut p = 1.0;
        for s in sums.iter_mut() {
            p *= x;
            s.add(p);
        }
    }
    let t = samples.len() as f64;
    Ok(MomentReport {
        count: samples.len(),
        moments: sums.into_iter().map(|s| s.value() / t).collect(),
    })
}
