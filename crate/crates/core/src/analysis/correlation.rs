//! Combined correlation measure of order `k`.
//!
//! For a `±1` sequence `s` of period `N` (indexed `1..=N`):
//!
//! ```text
//! theta_k(s, N) = max over L, D, T of | sum_{i=1}^{T} s(L i + d_1) ... s(L i + d_k) |
//! ```
//!
//! with `0 <= d_1 < ... < d_k < N`, `L >= 1`, and every index `L i + d_j`
//! inside `1..=N`, i.e. `L T + d_k <= N`. For each `(L, D)` the exact search
//! walks the partial sums up to the largest admissible `T`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::sequences::BipolarSequence;

use super::{AnalysisError, Result};

/// One point `(L, D, T)` of the search and its signed correlation sum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// Progression step `L`.
    pub step: u64,
    /// Delays `d_1 < ... < d_k`.
    pub delays: Vec<u64>,
    /// Number of terms `T`.
    pub count: u64,
    pub sum: i64,
}

impl Witness {
    /// Largest `T` with `L T + d_k <= N`.
    pub fn admissible_count(&self, period: u64) -> u64 {
        let last = *self.delays.last().expect("k >= 1");
        period.saturating_sub(last) / self.step
    }

    /// Every term of the sum agrees (`|sum| = T`) over the whole admissible range.
    pub fn is_full_peak(&self, period: u64) -> bool {
        self.sum.unsigned_abs() == self.count && self.count == self.admissible_count(period)
    }

    /// Canonical ordering used to pick one witness among equal values.
    fn key(&self) -> (&[u64], u64, u64) {
        (&self.delays, self.step, self.count)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrelationMeasureResult {
    pub k: usize,
    pub value: u64,
    pub witness: Witness,
    /// True for the exhaustive search, false for a restricted lower bound.
    pub exact: bool,
}

/// Largest period for which [`correlation_measure_exact`] runs at order `k`.
pub fn exact_search_cap(k: usize) -> u64 {
    match k {
        0..=3 => 64,
        4 | 5 => 32,
        _ => 16,
    }
}

fn better(a: Witness, b: Witness) -> Witness {
    let (va, vb) = (a.sum.unsigned_abs(), b.sum.unsigned_abs());
    if va > vb || (va == vb && a.key() <= b.key()) {
        a
    } else {
        b
    }
}

/// Calls `f` for every strictly increasing `k`-tuple in `0..n` whose first entry is `first`.
fn for_each_tuple(first: u64, k: usize, n: u64, f: &mut impl FnMut(&[u64])) {
    let mut d = vec![0u64; k];
    d[0] = first;
    fn rec(d: &mut [u64], pos: usize, n: u64, f: &mut impl FnMut(&[u64])) {
        if pos == d.len() {
            f(d);
            return;
        }
        let remaining = (d.len() - pos) as u64;
        let mut v = d[pos - 1] + 1;
        while v + remaining <= n {
            d[pos] = v;
            rec(d, pos + 1, n, f);
            v += 1;
        }
    }
    if first + k as u64 > n {
        return;
    }
    rec(&mut d, 1, n, f);
}

/// Best partial sum along `L` for delays `D`, considering only counts accepted by `allow`.
fn scan(bits: &[u8], n: u64, step: u64, delays: &[u64], periodic: bool, max_count: u64, allow: impl Fn(u64) -> bool) -> Option<Witness> {
    let mut best: Option<Witness> = None;
    let mut sum = 0i64;
    for i in 1..=max_count {
        let mut parity = 0u8;
        for &d in delays {
            let idx = step * i + d;
            let idx = if periodic { (idx - 1) % n } else { idx - 1 };
            parity ^= bits[idx as usize];
        }
        sum += if parity == 1 { -1 } else { 1 };
        if allow(i) && best.as_ref().is_none_or(|b| sum.unsigned_abs() > b.sum.unsigned_abs()) {
            best = Some(Witness {
                step,
                delays: delays.to_vec(),
                count: i,
                sum,
            });
        }
    }
    best
}

fn full_period_bits(s: &BipolarSequence) -> Result<(Vec<u8>, u64)> {
    if !s.is_full_period() {
        return Err(AnalysisError::NotFullPeriod);
    }
    let bits: Vec<u8> = s.bits().iter().map(|b| b as u8).collect();
    let n = bits.len() as u64;
    Ok((bits, n))
}

/// Exhaustive `theta_k` over every admissible `(L, D, T)`.
pub fn correlation_measure_exact(s: &BipolarSequence, k: usize) -> Result<CorrelationMeasureResult> {
    if k == 0 {
        return Err(AnalysisError::ZeroOrder);
    }
    let cap = exact_search_cap(k);
    if s.period() > cap as u128 {
        return Err(AnalysisError::TooLarge {
            k,
            n: s.period(),
            cap,
        });
    }
    let (bits, n) = full_period_bits(s)?;
    if (k as u64) > n {
        return Err(AnalysisError::Delays(format!("k = {k} exceeds the period {n}")));
    }
    let best = (0..n)
        .into_par_iter()
        .filter_map(|first| {
            let mut local: Option<Witness> = None;
            for_each_tuple(first, k, n, &mut |delays| {
                let last = *delays.last().expect("k >= 1");
                let mut step = 1;
                while step + last <= n {
                    let max_count = (n - last) / step;
                    if let Some(w) = scan(&bits, n, step, delays, false, max_count, |_| true) {
                        local = Some(match local.take() {
                            Some(cur) => better(cur, w),
                            None => w,
                        });
                    }
                    step += 1;
                }
            });
            local
        })
        .reduce_with(better)
        .expect("at least one admissible point");
    Ok(CorrelationMeasureResult {
        k,
        value: best.sum.unsigned_abs(),
        witness: best,
        exact: true,
    })
}

/// Finite search sets for [`correlation_measure_restricted`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictedSearch {
    /// Steps `L` to try.
    pub steps: Vec<u64>,
    /// Largest delay `d_k` considered.
    pub max_delay: u64,
    /// Term counts `T` to try; `None` tries every count.
    pub counts: Option<Vec<u64>>,
    /// Wrap indices modulo `N` (classical periodic correlation) instead of
    /// requiring `L T + d_k <= N`. Only the non-periodic form is a lower bound
    /// on the exact measure.
    pub periodic: bool,
}

/// `theta_k` maximised over the given finite sets only.
pub fn correlation_measure_restricted(s: &BipolarSequence, k: usize, search: &RestrictedSearch) -> Result<CorrelationMeasureResult> {
    if k == 0 {
        return Err(AnalysisError::ZeroOrder);
    }
    let mut counts = search.counts.clone();
    if let Some(c) = counts.as_mut() {
        c.sort_unstable();
        c.dedup();
    }
    if search.steps.is_empty() || counts.as_ref().is_some_and(|c| c.is_empty()) || search.steps.contains(&0) {
        return Err(AnalysisError::EmptySearch);
    }
    let (bits, n) = full_period_bits(s)?;
    let max_delay = search.max_delay.min(n - 1);
    let max_count_wanted = counts.as_ref().map_or(n, |c| *c.last().expect("non-empty"));
    let best = (0..=max_delay)
        .into_par_iter()
        .filter_map(|first| {
            let mut local: Option<Witness> = None;
            for_each_tuple(first, k, max_delay + 1, &mut |delays| {
                let last = *delays.last().expect("k >= 1");
                for &step in &search.steps {
                    let max_count = if search.periodic {
                        max_count_wanted.min(n)
                    } else if step + last > n {
                        continue;
                    } else {
                        max_count_wanted.min((n - last) / step)
                    };
                    let allow = |t: u64| counts.as_ref().is_none_or(|c| c.binary_search(&t).is_ok());
                    if let Some(w) = scan(&bits, n, step, delays, search.periodic, max_count, allow) {
                        local = Some(match local.take() {
                            Some(cur) => better(cur, w),
                            None => w,
                        });
                    }
                }
            });
            local
        })
        .reduce_with(better)
        .ok_or(AnalysisError::EmptySearch)?;
    Ok(CorrelationMeasureResult {
        k,
        value: best.sum.unsigned_abs(),
        witness: best,
        exact: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::BinaryPolynomial;
    use crate::lfsr::LfsrState;
    use crate::sequences::{gold_code, gold_partner, m_sequence, mls_period};

    fn msq(p: &str) -> BipolarSequence {
        let p: BinaryPolynomial = p.parse().unwrap();
        m_sequence(&p, &LfsrState::default_seed(&p), mls_period(p.degree()) as u64).unwrap()
    }

    fn gold(p: &str) -> BipolarSequence {
        let p1: BinaryPolynomial = p.parse().unwrap();
        let p2 = gold_partner(&p1, 1).unwrap();
        let n = mls_period(p1.degree()) as u64;
        gold_code(&p1, &p2, &LfsrState::default_seed(&p1), &LfsrState::default_seed(&p2), n).unwrap()
    }

    /// Direct transcription of the definition: every L, D, T summed from scratch.
    fn brute_force(s: &[i8], k: usize) -> u64 {
        let n = s.len() as u64;
        let mut best = 0;
        let mut delays: Vec<u64> = (0..k as u64).collect();
        loop {
            let last = delays[k - 1];
            for step in 1..=n {
                for t in 1..=n {
                    if step * t + last > n {
                        break;
                    }
                    let mut sum = 0i64;
                    for i in 1..=t {
                        let mut prod = 1i64;
                        for &d in &delays {
                            prod *= s[(step * i + d - 1) as usize] as i64;
                        }
                        sum += prod;
                    }
                    best = best.max(sum.unsigned_abs());
                }
            }
            // next combination
            let mut j = k;
            loop {
                if j == 0 {
                    return best;
                }
                j -= 1;
                if delays[j] < n - (k - j) as u64 {
                    delays[j] += 1;
                    for m in j + 1..k {
                        delays[m] = delays[m - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    /// Max |partial sum| over arithmetic progressions, k = 1, by triple loop.
    fn progression_partial_sums(s: &[i8]) -> u64 {
        let n = s.len() as i64;
        let mut best = 0;
        for d in 0..n {
            for step in 1..=n {
                let mut sum = 0i64;
                let mut i = 1;
                while step * i + d <= n {
                    sum += s[(step * i + d - 1) as usize] as i64;
                    best = best.max(sum.unsigned_abs());
                    i += 1;
                }
            }
        }
        best
    }

    #[test]
    fn constant_sequence_peaks_at_n() {
        let s = BipolarSequence::from_symbols(&[1; 12]).unwrap();
        let r = correlation_measure_exact(&s, 1).unwrap();
        assert_eq!(r.value, 12);
        assert_eq!((r.witness.step, r.witness.count), (1, 12));
        for k in 2..=3 {
            let r = correlation_measure_exact(&s, k).unwrap();
            // L T + d_k <= N with d_k >= k - 1
            assert_eq!(r.value, 12 - (k as u64 - 1));
        }
    }

    #[test]
    fn alternating_sequence_order_one() {
        let s = BipolarSequence::from_symbols(&[1, -1, 1, -1, 1, -1]).unwrap();
        let r = correlation_measure_restricted(
            &s,
            1,
            &RestrictedSearch { steps: vec![1], max_delay: 5, counts: None, periodic: false },
        )
        .unwrap();
        assert_eq!(r.value, 1);
        // with step 2 every term agrees
        assert_eq!(correlation_measure_exact(&s, 1).unwrap().value, 3);
    }

    #[test]
    fn exact_matches_brute_force() {
        let cases = [
            (msq("x^3 + x + 1"), vec![1, 2, 3, 4, 5]),
            (msq("x^4 + x + 1"), vec![1, 2, 3, 4]),
            (msq("x^5 + x^2 + 1"), vec![1, 2, 3]),
            (gold("x^3 + x + 1"), vec![1, 2, 3, 4]),
            (gold("x^5 + x^2 + 1"), vec![1, 2, 3]),
        ];
        for (s, ks) in cases {
            let sym = s.symbols();
            for k in ks {
                let r = correlation_measure_exact(&s, k).unwrap();
                assert_eq!(r.value, brute_force(&sym, k), "N = {} k = {k}", sym.len());
                assert!(r.exact);
                let w = &r.witness;
                assert_eq!(w.delays.len(), k);
                assert!(w.delays.windows(2).all(|p| p[0] < p[1]));
                assert!(w.step * w.count + w.delays[k - 1] <= sym.len() as u64);
            }
        }
    }

    #[test]
    fn period_seven_order_two_fixture() {
        // frozen from brute_force above
        let r = correlation_measure_exact(&msq("x^3 + x + 1"), 2).unwrap();
        assert_eq!(r.value, brute_force(&msq("x^3 + x + 1").symbols(), 2));
        assert_eq!(r.value, PERIOD7_THETA2);
    }

    const PERIOD7_THETA2: u64 = 3;

    #[test]
    fn order_one_matches_progression_partial_sums() {
        for p in ["x^3 + x + 1", "x^4 + x + 1", "x^5 + x^2 + 1"] {
            let s = msq(p);
            let r = correlation_measure_exact(&s, 1).unwrap();
            assert_eq!(r.value, progression_partial_sums(&s.symbols()));
        }
        let odd: Vec<i8> = (0..40).map(|i| if (i * i + 3 * i) % 7 < 3 { -1 } else { 1 }).collect();
        let s = BipolarSequence::from_symbols(&odd).unwrap();
        assert_eq!(correlation_measure_exact(&s, 1).unwrap().value, progression_partial_sums(&odd));
    }

    #[test]
    fn periodic_autocorrelation_of_m_sequences_is_minus_one() {
        for p in ["x^5 + x^2 + 1", "x^7 + x + 1", "x^10 + x^3 + 1"] {
            let s = msq(p);
            let n = s.period() as u64;
            let r = correlation_measure_restricted(
                &s,
                2,
                &RestrictedSearch { steps: vec![1], max_delay: n - 1, counts: Some(vec![n]), periodic: true },
            )
            .unwrap();
            assert_eq!(r.value, 1, "{p}");
            assert_eq!(r.witness.sum, -1);
        }
    }

    #[test]
    fn gold_periodic_autocorrelation_bounded() {
        let s = gold("x^5 + x^2 + 1");
        let r = correlation_measure_restricted(
            &s,
            2,
            &RestrictedSearch { steps: vec![1], max_delay: 30, counts: Some(vec![31]), periodic: true },
        )
        .unwrap();
        assert!(r.value <= 9, "{}", r.value);
    }

    #[test]
    fn restricted_never_exceeds_exact() {
        let s = gold("x^5 + x^2 + 1");
        for k in 1..=3 {
            let exact = correlation_measure_exact(&s, k).unwrap().value;
            for (steps, max_delay, counts) in [
                (vec![1], 30, None),
                (vec![1, 2, 3], 10, Some(vec![5, 10, 15])),
                (vec![2], 20, Some(vec![7])),
            ] {
                let r = correlation_measure_restricted(&s, k, &RestrictedSearch { steps, max_delay, counts, periodic: false });
                if let Ok(r) = r {
                    assert!(r.value <= exact);
                    assert!(!r.exact);
                }
            }
        }
    }

    #[test]
    fn errors() {
        let s = msq("x^7 + x + 1");
        assert!(matches!(correlation_measure_exact(&s, 4), Err(AnalysisError::TooLarge { .. })));
        assert!(matches!(correlation_measure_exact(&s, 0), Err(AnalysisError::ZeroOrder)));
        let bad = RestrictedSearch { steps: vec![], max_delay: 3, counts: Some(vec![1]), periodic: false };
        assert!(matches!(correlation_measure_restricted(&s, 2, &bad), Err(AnalysisError::EmptySearch)));
        let none = RestrictedSearch { steps: vec![1], max_delay: 3, counts: Some(vec![127]), periodic: false };
        assert!(matches!(correlation_measure_restricted(&s, 2, &none), Err(AnalysisError::EmptySearch)));
    }

    // frozen from brute_force; default seeds, partner r = 1
    const GOLD5_THETA: [u64; 3] = [9, 10, 13];

    #[test]
    fn gold_period_31_fixtures() {
        let s = gold("x^5 + x^2 + 1");
        for (k, want) in (1..=3).zip(GOLD5_THETA) {
            let r = correlation_measure_exact(&s, k).unwrap();
            assert_eq!(r.value, want, "k = {k}");
            assert!(r.value < 31);
        }
    }

    #[test]
    fn gold_period_31_full_peak_at_order_five() {
        let s = gold("x^5 + x^2 + 1");
        let r = correlation_measure_exact(&s, 5).unwrap();
        assert!(r.witness.is_full_peak(31), "{:?}", r.witness);
        assert_eq!(r.witness.delays, vec![0, 2, 7, 8, 13]);
        assert_eq!(r.value, 18);
        let sym = s.symbols();
        for i in 1..=18u64 {
            let prod: i64 = r.witness.delays.iter().map(|&d| sym[(i + d - 1) as usize] as i64).product();
            assert_eq!(prod, 1);
        }
    }

    #[test]
    fn result_is_independent_of_thread_count() {
        let s = gold("x^5 + x^2 + 1");
        let a = correlation_measure_exact(&s, 3).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| correlation_measure_exact(&s, 3).unwrap());
        assert_eq!(a, b);
    }
}
