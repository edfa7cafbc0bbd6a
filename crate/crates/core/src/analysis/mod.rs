//! Statistical checks on generated sequences and samples.

pub mod correlation;
pub mod histogram;
pub mod moments;
pub mod product;
pub mod report;

use thiserror::Error;

pub use correlation::{
    correlation_measure_exact, correlation_measure_restricted, exact_search_cap,
    CorrelationMeasureResult, RestrictedSearch, Witness,
};
pub use histogram::{histogram, Histogram};
pub use moments::{raw_moments, MomentReport};
pub use product::{noise_floor, product_moment, triple_moment_grid, TripleMomentGrid};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("no samples")]
    Empty,
    #[error("non-finite sample at index {0}")]
    NonFinite(usize),
    #[error("order k must be at least 1")]
    ZeroOrder,
    #[error("exact search at k = {k} is capped at N = {cap}, got N = {n}; use the restricted search")]
    TooLarge { k: usize, n: u128, cap: u64 },
    #[error("sequence must hold a full period")]
    NotFullPeriod,
    #[error("restricted search has no admissible point")]
    EmptySearch,
    #[error("invalid delays: {0}")]
    Delays(String),
    #[error("need {needed} samples, have {available}")]
    InsufficientSamples { needed: usize, available: usize },
    #[error("invalid histogram: {0}")]
    Histogram(String),
}

pub type Result<T> = std::result::Result<T, AnalysisError>;

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    #[inline]
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(self) -> f64 {
        self.sum + self.carry
    }
}
