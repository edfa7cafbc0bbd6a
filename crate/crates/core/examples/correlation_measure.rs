//! Combined correlation measure: exhaustive values, a restricted periodic search, and the full peak at order five.

use pngauss::analysis::{correlation_measure_exact, correlation_measure_restricted, RestrictedSearch};
use pngauss::galois::BinaryPolynomial;
use pngauss::lfsr::LfsrState;
use pngauss::sequences::{gold_code, gold_partner, m_sequence};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p: BinaryPolynomial = "x^5 + x^2 + 1".parse()?;
    let q = gold_partner(&p, 1)?;
    let (s1, s2) = (LfsrState::default_seed(&p), LfsrState::default_seed(&q));
    let gold = gold_code(&p, &q, &s1, &s2, 31)?;
    let msq = m_sequence(&p, &s1, 31)?;

    for k in 1..=5 {
        let r = correlation_measure_exact(&gold, k)?;
        let w = &r.witness;
        println!(
            "gold k = {k}: theta = {:>2}  (L = {}, D = {:?}, T = {}){}",
            r.value,
            w.step,
            w.delays,
            w.count,
            if w.is_full_peak(31) { "  full peak" } else { "" }
        );
    }

    let periodic = RestrictedSearch { steps: vec![1], max_delay: 30, counts: Some(vec![31]), periodic: true };
    println!("m-sequence periodic autocorrelation max: {}", correlation_measure_restricted(&msq, 2, &periodic)?.value);
    println!("gold periodic autocorrelation max: {}", correlation_measure_restricted(&gold, 2, &periodic)?.value);
    Ok(())
}
