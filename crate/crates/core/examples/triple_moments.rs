//! Triple product moment grids: structured peaks for an m-sequence, noise for a Gold code.

use pngauss::analysis::{noise_floor, report::write_grid_csv, triple_moment_grid};
use pngauss::bits::BitSource;
use pngauss::galois::{BinaryPolynomial, DEGREE89_PENTANOMIAL, DEGREE89_TRINOMIAL};
use pngauss::grng::{block_sum_gaussian, BlockSumConfig};
use pngauss::lfsr::LfsrState;
use pngauss::sequences::PnStream;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p1: BinaryPolynomial = DEGREE89_TRINOMIAL.parse()?;
    let p2: BinaryPolynomial = DEGREE89_PENTANOMIAL.parse()?;
    let (s1, s2) = (LfsrState::default_seed(&p1), LfsrState::default_seed(&p2));
    let (t, window) = (100_000, 100);
    let floor = noise_floor(t);
    let dir = std::env::temp_dir();
    for (name, mut source) in [
        ("m-sequence", PnStream::m_sequence(&p1, &s1)?),
        ("gold", PnStream::gold(&p1, &p2, &s1, &s2)?),
    ] {
        source.skip(1 << 23);
        let s = block_sum_gaussian(&BlockSumConfig::new(256), &mut source, t + window - 1)?.samples;
        let grid = triple_moment_grid(&s, window, t)?;
        let mut cells = grid.cells_above(floor);
        cells.sort_by(|a, b| b.2.abs().total_cmp(&a.2.abs()));
        println!("{name}: {} cells above 5/sqrt(T) = {floor:.4}; largest {:.4?}", cells.len(), &cells[..cells.len().min(5)]);
        let path = dir.join(format!("triple_{name}.csv"));
        write_grid_csv(&grid, std::fs::File::create(&path)?)?;
        println!("  grid written to {}", path.display());
    }
    Ok(())
}
