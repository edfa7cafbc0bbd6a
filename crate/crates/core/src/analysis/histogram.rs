//! Fixed-width histograms.

use serde::{Deserialize, Serialize};

use super::{AnalysisError, Result};

pub const DEFAULT_BINS: usize = 100;
pub const DEFAULT_RANGE: (f64, f64) = (-5.0, 5.0);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
    /// Samples below `lo`.
    pub underflow: u64,
    /// Samples above `hi`.
    pub overflow: u64,
}

impl Histogram {
    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    /// Lower edge of bin `i`; `edge(bins())` is `hi`.
    pub fn edge(&self, i: usize) -> f64 {
        if i == self.counts.len() {
            self.hi
        } else {
            self.lo + (self.hi - self.lo) * i as f64 / self.counts.len() as f64
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum::<u64>() + self.underflow + self.overflow
    }

    fn bin_of(&self, x: f64) -> Option<usize> {
        if x < self.lo || x > self.hi {
            return None;
        }
        let n = self.counts.len();
        let guess = ((x - self.lo) / (self.hi - self.lo) * n as f64).floor();
        let mut i = (guess.max(0.0) as usize).min(n - 1);
        while i > 0 && x < self.edge(i) {
            i -= 1;
        }
        while i + 1 < n && x >= self.edge(i + 1) {
            i += 1;
        }
        Some(i)
    }
}

/// Counts `samples` into `bins` equal bins over `[lo, hi]`. A sample on an
/// interior edge goes to the upper bin; `hi` itself lands in the last bin.
pub fn histogram(samples: &[f64], bins: usize, lo: f64, hi: f64) -> Result<Histogram> {
    if bins == 0 {
        return Err(AnalysisError::Histogram("zero bins".into()));
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(AnalysisError::Histogram(format!("bad range [{lo}, {hi}]")));
    }
    let mut h = Histogram {
        lo,
        hi,
        counts: vec![0; bins],
        underflow: 0,
        overflow: 0,
    };
    for (i, &x) in samples.iter().enumerate() {
        if !x.is_finite() {
            return Err(AnalysisError::NonFinite(i));
        }
        match h.bin_of(x) {
            Some(b) => h.counts[b] += 1,
            None if x < lo => h.underflow += 1,
            None => h.overflow += 1,
        }
    }
    Ok(h)
}
