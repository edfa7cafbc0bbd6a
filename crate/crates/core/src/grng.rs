//! Gaussian samples from binary streams.
//!
//! Two models share the same bit sources:
//!
//! * **block sum**: `S(i) = M^{-1/2} * sum_{n=1}^{M} s(n + iM)`, the sum of `M`
//!   consecutive `±1` symbols, blocks disjoint. The first symbol read from
//!   the source (after `start_offset`) is `s(1)`.
//! * **Tausworthe**: consecutive `B`-bit windows `(e_1, ..., e_B)` become
//!   uniforms `sum e_i 2^{-i}`; `terms` consecutive uniforms are summed and
//!   standardised to zero mean and unit variance.
//!
//! Each sample depends only on its own slice of the stream, so generation
//! reads the stream sequentially in chunks and evaluates samples within a
//! chunk in parallel. Results do not depend on the thread count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::{BitSource, PackedBits};

/// Block length used for the reference experiments.
pub const DEFAULT_BLOCK_LEN: usize = 256;
/// Bits per uniform in the Tausworthe model.
pub const DEFAULT_BIT_DEPTH: u32 = 32;
/// Uniforms summed per Tausworthe output.
pub const DEFAULT_TERMS: usize = 8;
/// Bit depths above this are not exactly representable as `f64` fractions.
pub const MAX_BIT_DEPTH: u32 = 53;

const CHUNK_BITS: usize = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrngError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("source exhausted: needed {needed} bits, got {available}")]
    InsufficientSource { needed: u64, available: u64 },
}

pub type Result<T> = std::result::Result<T, GrngError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    BinaryBlockSum,
    TauswortheClt,
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Model::BinaryBlockSum => "binary-block-sum",
            Model::TauswortheClt => "tausworthe-clt",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSumConfig {
    pub block_len: usize,
    /// Symbols skipped before `s(1)`.
    #[serde(default)]
    pub start_offset: u64,
    /// Stride-1 windows instead of disjoint blocks.
    #[serde(default)]
    pub overlapping: bool,
}

impl Default for BlockSumConfig {
    fn default() -> Self {
        Self {
            block_len: DEFAULT_BLOCK_LEN,
            start_offset: 0,
            overlapping: false,
        }
    }
}

impl BlockSumConfig {
    pub fn new(block_len: usize) -> Self {
        Self {
            block_len,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.block_len == 0 {
            return Err(GrngError::Config("block length M must be at least 1".into()));
        }
        Ok(())
    }

    /// Checks `M <= N / 4`; returns a warning when `M > N / 100`.
    pub fn check_against_period(&self, period: u128) -> Result<Option<String>> {
        let m = self.block_len as u128;
        if m.saturating_mul(4) > period {
            return Err(GrngError::Config(format!(
                "block length {m} exceeds a quarter of the period {period}"
            )));
        }
        Ok((m.saturating_mul(100) > period).then(|| {
            format!("block length {m} is more than 1% of the period {period}; samples are not independent")
        }))
    }

    /// Symbols consumed by `count` samples, excluding the offset.
    pub fn bits_needed(&self, count: usize) -> u64 {
        if count == 0 {
            0
        } else if self.overlapping {
            (count + self.block_len - 1) as u64
        } else {
            (count * self.block_len) as u64
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauswortheConfig {
    pub bit_depth: u32,
    pub terms: usize,
}

impl Default for TauswortheConfig {
    fn default() -> Self {
        Self {
            bit_depth: DEFAULT_BIT_DEPTH,
            terms: DEFAULT_TERMS,
        }
    }
}

impl TauswortheConfig {
    pub fn validate(&self) -> Result<()> {
        if self.bit_depth == 0 || self.bit_depth > MAX_BIT_DEPTH {
            return Err(GrngError::Config(format!(
                "bit depth must be in 1..={MAX_BIT_DEPTH}, got {}",
                self.bit_depth
            )));
        }
        if self.terms == 0 {
            return Err(GrngError::Config("terms must be at least 1".into()));
        }
        Ok(())
    }
}

/// Generation parameters recorded with every sample block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum ModelConfig {
    BinaryBlockSum(BlockSumConfig),
    TauswortheClt(TauswortheConfig),
}

impl ModelConfig {
    pub fn model(&self) -> Model {
        match self {
            ModelConfig::BinaryBlockSum(_) => Model::BinaryBlockSum,
            ModelConfig::TauswortheClt(_) => Model::TauswortheClt,
        }
    }

    /// Largest possible `|sample|`.
    pub fn max_abs_sample(&self) -> f64 {
        match self {
            ModelConfig::BinaryBlockSum(c) => (c.block_len as f64).sqrt(),
            ModelConfig::TauswortheClt(c) => (3.0 * c.terms as f64).sqrt(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaussianSampleBlock {
    pub samples: Vec<f64>,
    pub config: ModelConfig,
}

impl GaussianSampleBlock {
    pub fn model(&self) -> Model {
        self.config.model()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// `M` for block-sum samples.
    pub fn block_len(&self) -> Option<usize> {
        match self.config {
            ModelConfig::BinaryBlockSum(c) => Some(c.block_len),
            ModelConfig::TauswortheClt(_) => None,
        }
    }
}

fn read_exact<S: BitSource + ?Sized>(source: &mut S, out: &mut PackedBits, count: usize, needed: u64, consumed: u64) -> Result<()> {
    let got = source.fill(out, count);
    if got < count {
        return Err(GrngError::InsufficientSource {
            needed,
            available: consumed + got as u64,
        });
    }
    Ok(())
}

/// Block sums `sqrt(M) * S(i)` for samples `range`, from bits already read.
///
/// Sample `i` uses bits `i*M .. i*M + M` (disjoint) or `i .. i + M`
/// (overlapping) of `bits`. Pure, so disjoint ranges may run anywhere.
pub fn block_sums(bits: &PackedBits, block_len: usize, overlapping: bool, range: std::ops::Range<usize>) -> Vec<i64> {
    let stride = if overlapping { 1 } else { block_len };
    range
        .map(|i| {
            let start = i * stride;
            let ones = bits.count_ones(start, start + block_len) as i64;
            block_len as i64 - 2 * ones
        })
        .collect()
}

/// Block-sum Gaussian samples `S(0), ..., S(count - 1)`.
pub fn block_sum_gaussian<S: BitSource + ?Sized>(cfg: &BlockSumConfig, source: &mut S, count: usize) -> Result<GaussianSampleBlock> {
    cfg.validate()?;
    let needed = cfg.start_offset + cfg.bits_needed(count);
    let skipped = source.skip(cfg.start_offset);
    if skipped < cfg.start_offset {
        return Err(GrngError::InsufficientSource {
            needed,
            available: skipped,
        });
    }
    let m = cfg.block_len;
    let scale = (m as f64).sqrt().recip();
    let mut samples = Vec::with_capacity(count);
    if cfg.overlapping {
        let mut bits = PackedBits::with_capacity(cfg.bits_needed(count) as usize);
        read_exact(source, &mut bits, cfg.bits_needed(count) as usize, needed, skipped)?;
        let sums = block_sums(&bits, m, true, 0..count);
        samples.extend(sums.into_iter().map(|s| s as f64 * scale));
    } else {
        let per_chunk = (CHUNK_BITS / m).max(1);
        let mut done = 0usize;
        while done < count {
            let blocks = per_chunk.min(count - done);
            let mut bits = PackedBits::with_capacity(blocks * m);
            read_exact(source, &mut bits, blocks * m, needed, skipped + (done * m) as u64)?;
            let sums: Vec<f64> = (0..blocks)
                .into_par_iter()
                .with_min_len(1024)
                .map(|i| {
                    let ones = bits.count_ones(i * m, i * m + m) as i64;
                    (m as i64 - 2 * ones) as f64 * scale
                })
                .collect();
            samples.extend(sums);
            done += blocks;
        }
    }
    Ok(GaussianSampleBlock {
        samples,
        config: ModelConfig::BinaryBlockSum(*cfg),
    })
}

#[inline]
fn window_to_uniform(window: u64, bit_depth: u32) -> f64 {
    // first bit read sits in bit 0 and is the most significant binary digit
    let v = window.reverse_bits() >> (64 - bit_depth);
    v as f64 / (1u64 << bit_depth) as f64
}

/// Uniforms in `[0, 1 - 2^-B]` from consecutive non-overlapping `B`-bit windows.
pub fn tausworthe_uniform<S: BitSource + ?Sized>(cfg: &TauswortheConfig, source: &mut S, count: usize) -> Result<Vec<f64>> {
    cfg.validate()?;
    let b = cfg.bit_depth as usize;
    let needed = (count * b) as u64;
    let per_chunk = (CHUNK_BITS / b).max(1);
    let mut out = Vec::with_capacity(count);
    let mut done = 0usize;
    while done < count {
        let n = per_chunk.min(count - done);
        let mut bits = PackedBits::with_capacity(n * b);
        read_exact(source, &mut bits, n * b, needed, (done * b) as u64)?;
        let chunk: Vec<f64> = (0..n)
            .into_par_iter()
            .with_min_len(1024)
            .map(|i| window_to_uniform(bits.read_word(i * b, cfg.bit_depth), cfg.bit_depth))
            .collect();
        out.extend(chunk);
        done += n;
    }
    Ok(out)
}

/// Standardised sums of `terms` consecutive uniforms.
pub fn tausworthe_gaussian<S: BitSource + ?Sized>(cfg: &TauswortheConfig, source: &mut S, count: usize) -> Result<GaussianSampleBlock> {
    cfg.validate()?;
    let uniforms = tausworthe_uniform(cfg, source, count * cfg.terms)?;
    Ok(GaussianSampleBlock {
        samples: standardize_sums(&uniforms, cfg.terms),
        config: ModelConfig::TauswortheClt(*cfg),
    })
}

/// `(sum of `terms` uniforms - terms/2) / sqrt(terms/12)` for each group.
pub fn standardize_sums(uniforms: &[f64], terms: usize) -> Vec<f64> {
    let center = terms as f64 / 2.0;
    let scale = (12.0 / terms as f64).sqrt();
    uniforms
        .par_chunks_exact(terms)
        .with_min_len(1024)
        .map(|group| (group.iter().sum::<f64>() - center) * scale)
        .collect()
}
