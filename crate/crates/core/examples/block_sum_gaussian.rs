//! Gaussian samples as normalised block sums of a Gold code, with moments and a histogram.

use pngauss::analysis::{histogram, raw_moments};
use pngauss::bits::BitSource;
use pngauss::galois::{BinaryPolynomial, DEGREE89_PENTANOMIAL, DEGREE89_TRINOMIAL};
use pngauss::grng::{block_sum_gaussian, BlockSumConfig};
use pngauss::lfsr::LfsrState;
use pngauss::sequences::PnStream;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p1: BinaryPolynomial = DEGREE89_TRINOMIAL.parse()?;
    let p2: BinaryPolynomial = DEGREE89_PENTANOMIAL.parse()?;
    let mut source = PnStream::gold(&p1, &p2, &LfsrState::default_seed(&p1), &LfsrState::default_seed(&p2))?;
    // skip the structured prefix that follows a weight-one seed
    source.skip(1 << 23);

    let block = block_sum_gaussian(&BlockSumConfig::new(256), &mut source, 50_000)?;
    let m = raw_moments(&block.samples, 4)?;
    println!("M = 256, T = {}: moments {:.4?}", block.len(), m.moments);

    let h = histogram(&block.samples, 20, -5.0, 5.0)?;
    let peak = *h.counts.iter().max().unwrap_or(&1) as f64;
    for (i, c) in h.counts.iter().enumerate() {
        println!("{:>6.2} {}", h.edge(i), "#".repeat((60.0 * *c as f64 / peak) as usize));
    }
    Ok(())
}
