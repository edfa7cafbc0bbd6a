//! A Fibonacci LFSR, its period, and the balance and autocorrelation of the m-sequence it emits.

use pngauss::galois::BinaryPolynomial;
use pngauss::lfsr::{LfsrState, PeriodMeasurement, DEFAULT_PERIOD_CAP};
use pngauss::sequences::{m_sequence, mls_period};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p: BinaryPolynomial = "x^4 + x + 1".parse()?;
    let mut state = LfsrState::default_seed(&p);
    print!("states from seed {}:", state.to_hex());
    for _ in 0..5 {
        print!(" {:?}", state.registers().iter().map(|&b| b as u8).collect::<Vec<_>>());
        state = state.step();
    }
    println!();

    for poly in ["x^4 + x + 1", "x^10 + x^3 + 1", "x^16 + x^14 + x^13 + x^11 + 1"] {
        let p: BinaryPolynomial = poly.parse()?;
        let seed = LfsrState::default_seed(&p);
        let period = match seed.measure_period(DEFAULT_PERIOD_CAP)? {
            PeriodMeasurement::Found(n) => n,
            PeriodMeasurement::ExceededCap(n) => panic!("no repeat within {n} steps"),
        };
        let n = mls_period(p.degree()) as u64;
        let s = m_sequence(&p, &seed, n)?;
        let shifted = s.cyclic_shift(3)?;
        let auto: i64 = s.symbols().iter().zip(shifted.symbols()).map(|(a, b)| (*a as i64) * (b as i64)).sum();
        println!("{poly}: period {period} (2^n - 1 = {n}), period sum {}, autocorrelation at shift 3 = {auto}", s.stored_sum());
    }
    Ok(())
}
