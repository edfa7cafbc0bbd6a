//! Gold codes: the XOR of a preferred pair of m-sequences, its three-valued
//! cross-correlation, and agreement with the trace definition.

use pngauss::galois::BinaryPolynomial;
use pngauss::lfsr::LfsrState;
use pngauss::sequences::{gold_code, gold_code_trace_oracle, gold_partner, locate_in_gold_family, m_sequence, mls_period};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (poly, r) in [("x^5 + x^2 + 1", 1), ("x^7 + x + 1", 1)] {
        let p: BinaryPolynomial = poly.parse()?;
        let q = gold_partner(&p, r)?;
        let n = mls_period(p.degree()) as u64;
        let (s1, s2) = (LfsrState::default_seed(&p), LfsrState::default_seed(&q));
        let u = m_sequence(&p, &s1, n)?;
        let v = m_sequence(&q, &s2, n)?;
        let mut values: Vec<i64> = (0..n as i64)
            .map(|d| {
                let w = v.cyclic_shift(d).unwrap();
                u.symbols().iter().zip(w.symbols()).map(|(a, b)| (*a as i64) * (b as i64)).sum()
            })
            .collect();
        values.sort_unstable();
        values.dedup();
        println!("{poly} with partner {q}: cross-correlation values {values:?}");

        let g = gold_code(&p, &q, &s1, &s2, n)?;
        println!("  gold code, first 20 symbols: {:?}", &g.symbols()[..20]);
        let oracle = gold_code_trace_oracle(&p, r, n)?;
        match locate_in_gold_family(&oracle, &p, &q)? {
            Some((a, b)) => println!("  trace definition matches the XOR construction with seeds {} / {}", a.to_hex(), b.to_hex()),
            None => println!("  trace definition not found in the XOR family"),
        }
    }
    Ok(())
}
