//! Tausworthe uniforms from 32-bit windows, standardised sums of 8, compared with the Irwin-Hall kurtosis.

use pngauss::analysis::raw_moments;
use pngauss::bits::BitSource;
use pngauss::galois::{BinaryPolynomial, DEGREE89_TRINOMIAL};
use pngauss::grng::{tausworthe_gaussian, tausworthe_uniform, TauswortheConfig};
use pngauss::lfsr::LfsrState;
use pngauss::sequences::PnStream;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p: BinaryPolynomial = DEGREE89_TRINOMIAL.parse()?;
    let cfg = TauswortheConfig { bit_depth: 32, terms: 8 };

    let mut source = PnStream::m_sequence(&p, &LfsrState::default_seed(&p))?;
    source.skip(1 << 23);
    let u = tausworthe_uniform(&cfg, &mut source.clone(), 100_000)?;
    let m = raw_moments(&u, 2)?;
    println!("uniforms: mean {:.5} (1/2), second moment {:.5} (1/3)", m.moments[0], m.moments[1]);

    let g = tausworthe_gaussian(&cfg, &mut source, 100_000)?;
    let m = raw_moments(&g.samples, 4)?;
    println!("sums of 8: moments {:.4?}; Irwin-Hall fourth moment {:.4}", m.moments, 3.0 - 6.0 / 40.0);
    Ok(())
}
