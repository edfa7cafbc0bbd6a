//! Moment and correlation bounds: right-hand sides, the small-sequence sweep, and the Gold-code bound.

use pngauss::bounds::{theorem1_rhs, theorem1_sweep, theorem2_rhs, theorem3_gold_bound};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("block-sum bound, M = 4, theta = 2, T = 7: k = 1 -> {:.4}, k = 2 -> {:.4}", theorem1_rhs(4, 1, 7, 2.0)?, theorem1_rhs(4, 2, 7, 2.0)?);
    println!("product bound, M = 16, theta = 10, T = 1000: k = 2 -> {:.4}, k = 3 -> {:.4}", theorem2_rhs(16, 2, 1000, 10.0)?, theorem2_rhs(16, 3, 1000, 10.0)?);
    for (n, r) in [(13, 1), (89, 1), (10, 3)] {
        let b = theorem3_gold_bound(n, r)?;
        println!("gold bound n = {n}, r = {r}: {:.4e} vs period {:.4e}{}", b.value, 2f64.powi(n as i32) - 1.0, b.warning.map(|w| format!(" ({w})")).unwrap_or_default());
    }

    let reports = theorem1_sweep(None)?;
    let held = reports.iter().filter(|r| r.satisfied == Some(true)).count();
    let tightest = reports
        .iter()
        .filter_map(|r| Some((r.lhs_value? / r.rhs_value, r)))
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(ratio, r)| format!("{ratio:.3} at {:?} M = {:?} k = {:?}", r.parameters.polynomials, r.parameters.block_len, r.parameters.k));
    println!("block-sum sweep with exact theta: {held}/{} hold; tightest lhs/rhs {}", reports.len(), tightest.unwrap_or_default());
    Ok(())
}
