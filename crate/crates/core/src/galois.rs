//! Polynomials over GF(2) and arithmetic in small binary extension fields.
//!
//! A [`BinaryPolynomial`] stores its coefficients as a packed bit mask:
//! bit `i` of the mask is the coefficient `b_i` of `x^i`.
//!
//! ```text
//! 0b1011            -> x^3 + x + 1
//! "x^89 + x^38 + 1" -> bits 0, 38 and 89 set
//! ```
//!
//! Field arithmetic (`GF(2^n)` with `n <= 24`) only backs the primitivity
//! check and the trace-based Gold code construction used to cross-check the
//! LFSR generators. Sequence generation itself never touches this module's
//! field types and works at any degree.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest extension degree supported by [`FieldElement`] arithmetic.
pub const MAX_FIELD_DEGREE: u32 = 24;

/// Largest degree for which the Mersenne-exponent primitivity proof runs.
pub const MAX_MERSENNE_CHECK_DEGREE: u32 = 127;

/// Known exponents `n` for which `2^n - 1` is prime.
pub const MERSENNE_EXPONENTS: &[u32] = &[
    2, 3, 5, 7, 13, 17, 19, 31, 61, 89, 107, 127, 521, 607, 1279, 2203, 2281, 3217, 4253, 4423,
    9689, 9941, 11213, 19937, 21701, 23209, 44497, 86243, 110503, 132049, 216091, 756839, 859433,
    1257787, 1398269, 2976221, 3021377, 6972593, 13466917, 20996011, 24036583, 25964951, 30402457,
    32582657, 37156667, 42643801, 43112609, 57885161, 74207281, 77232917, 82589933, 136279841,
];

/// Degree-89 trinomial used for the reference m-sequence experiments.
pub const DEGREE89_TRINOMIAL: &str = "x^89 + x^38 + 1";

/// Degree-89 pentanomial paired with [`DEGREE89_TRINOMIAL`] to form a Gold code.
pub const DEGREE89_PENTANOMIAL: &str = "x^89 + x^72 + x^55 + x^38 + 1";

/// Polynomials accepted as primitive without factoring `2^n - 1`.
pub const TRUSTED_PRIMITIVE: &[&str] = &[DEGREE89_TRINOMIAL, DEGREE89_PENTANOMIAL];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GaloisError {
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("cannot parse polynomial {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("field degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: u32, right: u32 },
    #[error("degree {degree} is not supported here (limit {limit})")]
    UnsupportedDegree { degree: u32, limit: u32 },
    #[error("value {value:#x} is not reduced for a degree-{degree} field")]
    NotReduced { value: u64, degree: u32 },
    #[error("polynomial {0} is not primitive")]
    NotPrimitive(String),
}

pub type Result<T> = std::result::Result<T, GaloisError>;

/// Returns true if `2^n - 1` is a known Mersenne prime.
pub fn is_mersenne_exponent(n: u32) -> bool {
    MERSENNE_EXPONENTS.binary_search(&n).is_ok()
}

/// Characteristic polynomial `f(x) = sum b_i x^i` over GF(2) with `b_0 = b_n = 1`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct BinaryPolynomial {
    words: Vec<u64>,
    degree: u32,
}

impl BinaryPolynomial {
    /// Builds a polynomial from a little-endian word mask (bit `i` = `b_i`).
    pub fn from_words(mut words: Vec<u64>) -> Result<Self> {
        while words.last() == Some(&0) {
            words.pop();
        }
        let Some(&top) = words.last() else {
            return Err(GaloisError::InvalidPolynomial("zero polynomial".into()));
        };
        let degree = (words.len() as u32 - 1) * 64 + (63 - top.leading_zeros());
        if degree == 0 {
            return Err(GaloisError::InvalidPolynomial(
                "constant polynomial has no registers".into(),
            ));
        }
        if words[0] & 1 == 0 {
            return Err(GaloisError::InvalidPolynomial(
                "constant coefficient b_0 must be 1".into(),
            ));
        }
        Ok(Self { words, degree })
    }

    pub fn from_mask(mask: u128) -> Result<Self> {
        Self::from_words(vec![mask as u64, (mask >> 64) as u64])
    }

    /// Builds `sum x^e` for the given exponents. Repeated exponents are rejected.
    pub fn from_exponents(exponents: &[u32]) -> Result<Self> {
        let max = exponents.iter().copied().max().unwrap_or(0);
        let mut words = vec![0u64; max as usize / 64 + 1];
        for &e in exponents {
            let (w, b) = (e as usize / 64, e % 64);
            if words[w] >> b & 1 == 1 {
                return Err(GaloisError::InvalidPolynomial(format!(
                    "exponent {e} listed twice"
                )));
            }
            words[w] |= 1 << b;
        }
        Self::from_words(words)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Coefficient `b_i`; zero above the degree.
    pub fn coefficient(&self, i: u32) -> bool {
        self.words
            .get(i as usize / 64)
            .is_some_and(|w| w >> (i % 64) & 1 == 1)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Exponents with non-zero coefficient, highest first.
    pub fn exponents(&self) -> Vec<u32> {
        (0..=self.degree).rev().filter(|&i| self.coefficient(i)).collect()
    }

    pub fn weight(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    /// The mask as a `u128`, if the degree is below 128.
    pub fn to_u128(&self) -> Option<u128> {
        (self.degree < 128).then(|| {
            self.words
                .iter()
                .take(2)
                .enumerate()
                .fold(0u128, |acc, (i, &w)| acc | (w as u128) << (64 * i))
        })
    }

    /// Lowercase hex coefficient mask with a `0x` prefix.
    pub fn to_hex(&self) -> String {
        let mut out = String::from("0x");
        let mut started = false;
        for &w in self.words.iter().rev() {
            if started {
                out.push_str(&format!("{w:016x}"));
            } else if w != 0 {
                out.push_str(&format!("{w:x}"));
                started = true;
            }
        }
        out
    }

    fn parse_hex(input: &str, digits: &str) -> Result<Self> {
        let err = |reason: &str| GaloisError::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let digits: String = digits.chars().filter(|&c| c != '_').collect();
        if digits.is_empty() {
            return Err(err("empty hex mask"));
        }
        let mut words = Vec::new();
        let bytes = digits.as_bytes();
        let mut end = bytes.len();
        while end > 0 {
            let start = end.saturating_sub(16);
            let chunk = std::str::from_utf8(&bytes[start..end]).expect("ascii");
            words.push(u64::from_str_radix(chunk, 16).map_err(|_| err("bad hex digit"))?);
            end = start;
        }
        Self::from_words(words)
    }

    fn parse_terms(input: &str) -> Result<Self> {
        let err = |reason: String| GaloisError::Parse {
            input: input.to_string(),
            reason,
        };
        let mut exponents = Vec::new();
        for term in input.split('+') {
            let term: String = term.chars().filter(|c| !c.is_whitespace()).collect();
            let e = match term.as_str() {
                "" => return Err(err("empty term".into())),
                "1" => 0,
                "x" | "X" => 1,
                t => {
                    let rest = t
                        .strip_prefix("x^")
                        .or_else(|| t.strip_prefix("X^"))
                        .ok_or_else(|| err(format!("unrecognised term {t:?}")))?;
                    rest.parse::<u32>()
                        .map_err(|_| err(format!("bad exponent in {t:?}")))?
                }
            };
            exponents.push(e);
        }
        Self::from_exponents(&exponents).map_err(|e| match e {
            GaloisError::InvalidPolynomial(reason) => err(reason),
            other => other,
        })
    }

    /// Evaluates the polynomial at `x = 1` (parity of the number of terms).
    pub fn eval_at_one(&self) -> bool {
        self.weight() % 2 == 1
    }
}

impl FromStr for BinaryPolynomial {
    type Err = GaloisError;

    /// Accepts either a hex coefficient mask (`0xb`) or a sum of terms (`x^3 + x + 1`).
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Some(hex) = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
            Self::parse_hex(s, hex)
        } else {
            Self::parse_terms(t)
        }
    }
}

impl TryFrom<String> for BinaryPolynomial {
    type Error = GaloisError;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<BinaryPolynomial> for String {
    fn from(p: BinaryPolynomial) -> String {
        p.to_string()
    }
}

impl fmt::Display for BinaryPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .exponents()
            .into_iter()
            .map(|e| match e {
                0 => "1".to_string(),
                1 => "x".to_string(),
                e => format!("x^{e}"),
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

impl fmt::Debug for BinaryPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryPolynomial({self})")
    }
}

/// Element of `GF(2^n)` stored as its residue bits modulo the defining polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    degree: u32,
}

impl FieldElement {
    pub fn new(value: u32, degree: u32) -> Result<Self> {
        if degree == 0 || degree > MAX_FIELD_DEGREE {
            return Err(GaloisError::UnsupportedDegree {
                degree,
                limit: MAX_FIELD_DEGREE,
            });
        }
        if value >> degree != 0 {
            return Err(GaloisError::NotReduced {
                value: value as u64,
                degree,
            });
        }
        Ok(Self { value, degree })
    }

    pub fn zero(degree: u32) -> Result<Self> {
        Self::new(0, degree)
    }

    pub fn one(degree: u32) -> Result<Self> {
        Self::new(1, degree)
    }

    /// The class of `x` modulo `p`, i.e. the primitive element when `p` is primitive.
    pub fn generator(p: &BinaryPolynomial) -> Result<Self> {
        let modulus = field_modulus(p)?;
        let n = p.degree();
        let x = if n == 1 { 0b10 ^ modulus } else { 0b10 };
        Self::new(x, n)
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn degree(self) -> u32 {
        self.degree
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// Field addition (XOR). Errors on mismatched fields.
    pub fn add(self, other: Self) -> Result<Self> {
        same_degree(self.degree, other.degree)?;
        Ok(Self {
            value: self.value ^ other.value,
            degree: self.degree,
        })
    }
}

fn same_degree(left: u32, right: u32) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(GaloisError::DegreeMismatch { left, right })
    }
}

fn field_modulus(p: &BinaryPolynomial) -> Result<u32> {
    if p.degree() > MAX_FIELD_DEGREE {
        return Err(GaloisError::UnsupportedDegree {
            degree: p.degree(),
            limit: MAX_FIELD_DEGREE,
        });
    }
    Ok(p.words()[0] as u32)
}

/// Carry-less product of two reduced elements, reduced modulo `p`.
pub fn poly_mul_mod(a: FieldElement, b: FieldElement, p: &BinaryPolynomial) -> Result<FieldElement> {
    let modulus = field_modulus(p)?;
    let n = p.degree();
    same_degree(a.degree, n)?;
    same_degree(b.degree, n)?;
    let top = 1u32 << n;
    let mut acc = 0u32;
    let mut shifted = a.value;
    let mut rest = b.value;
    while rest != 0 {
        if rest & 1 == 1 {
            acc ^= shifted;
        }
        rest >>= 1;
        shifted <<= 1;
        if shifted & top != 0 {
            shifted ^= modulus;
        }
    }
    Ok(FieldElement {
        value: acc,
        degree: n,
    })
}

/// `a^e` modulo `p` by square-and-multiply.
pub fn field_pow(a: FieldElement, e: u64, p: &BinaryPolynomial) -> Result<FieldElement> {
    same_degree(a.degree, p.degree())?;
    let mut result = FieldElement::one(p.degree())?;
    let mut base = a;
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mul_mod(result, base, p)?;
        }
        e >>= 1;
        if e > 0 {
            base = poly_mul_mod(base, base, p)?;
        }
    }
    Ok(result)
}

/// Absolute trace `Tr(a) = a^2 + a^4 + ... + a^(2^n)`.
///
/// The sum runs over `j = 1..=n`; since `a^(2^n) = a` this is the same
/// value as the conventional `j = 0..n-1` form.
pub fn trace(a: FieldElement, p: &BinaryPolynomial) -> Result<bool> {
    same_degree(a.degree, p.degree())?;
    let mut conjugate = a;
    let mut sum = FieldElement::zero(p.degree())?;
    for _ in 1..=p.degree() {
        conjugate = poly_mul_mod(conjugate, conjugate, p)?;
        sum = sum.add(conjugate)?;
    }
    debug_assert!(sum.value <= 1, "trace must land in the prime field");
    Ok(sum.value == 1)
}

/// Distinct prime divisors by trial division.
pub fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// True iff `x` has multiplicative order `2^n - 1` modulo `p` (`n <= 24`).
pub fn is_primitive(p: &BinaryPolynomial) -> Result<bool> {
    field_modulus(p)?;
    let n = p.degree();
    let order = (1u64 << n) - 1;
    let x = FieldElement::generator(p)?;
    let one = FieldElement::one(n)?;
    if field_pow(x, order, p)? != one {
        return Ok(false);
    }
    for r in prime_factors(order) {
        if field_pow(x, order / r, p)? == one {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Minimal polynomial over GF(2) of `beta`, as the product of its conjugates.
pub fn minimal_polynomial(beta: FieldElement, p: &BinaryPolynomial) -> Result<BinaryPolynomial> {
    same_degree(beta.degree, p.degree())?;
    let n = p.degree();
    let mut conjugates = vec![beta];
    loop {
        let last = *conjugates.last().expect("non-empty");
        let next = poly_mul_mod(last, last, p)?;
        if next == beta {
            break;
        }
        conjugates.push(next);
    }
    // coefficients in GF(2^n), lowest degree first
    let mut coeffs = vec![FieldElement::one(n)?];
    for c in conjugates {
        let mut next = vec![FieldElement::zero(n)?; coeffs.len() + 1];
        for (i, &k) in coeffs.iter().enumerate() {
            next[i + 1] = next[i + 1].add(k)?;
            next[i] = next[i].add(poly_mul_mod(k, c, p)?)?;
        }
        coeffs = next;
    }
    let mut mask = 0u128;
    for (i, c) in coeffs.iter().enumerate() {
        debug_assert!(c.value <= 1, "minimal polynomial must have binary coefficients");
        if c.value == 1 {
            mask |= 1 << i;
        }
    }
    BinaryPolynomial::from_mask(mask)
}

/// `a * b mod p` for polynomials of degree below 128; `p` has degree `n`.
fn mul_mod_u128(a: u128, b: u128, p: u128, n: u32) -> u128 {
    let top = 1u128 << (n - 1);
    let low = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    let mut acc = 0u128;
    for i in (0..n).rev() {
        let carry = acc & top != 0;
        acc = (acc << 1) & low;
        if carry {
            acc ^= p & low;
        }
        if b >> i & 1 == 1 {
            acc ^= a;
        }
    }
    acc
}

/// Complete primitivity proof for degrees whose `2^n - 1` is a Mersenne prime.
///
/// With `n` prime, `x^(2^n) = x (mod p)` forces every irreducible factor of
/// `p` to have degree 1 or `n`, and squarefree. Ruling out the roots 0 and 1
/// leaves `p` irreducible, hence primitive because the group order is prime.
pub fn is_primitive_mersenne(p: &BinaryPolynomial) -> Result<bool> {
    let n = p.degree();
    if n > MAX_MERSENNE_CHECK_DEGREE || !is_mersenne_exponent(n) {
        return Err(GaloisError::UnsupportedDegree {
            degree: n,
            limit: MAX_MERSENNE_CHECK_DEGREE,
        });
    }
    if !p.coefficient(0) || !p.eval_at_one() {
        return Ok(false);
    }
    let mask = p.to_u128().expect("degree below 128");
    let x = 0b10u128;
    let mut r = x;
    for _ in 0..n {
        r = mul_mod_u128(r, r, mask, n);
    }
    Ok(r == x)
}

/// How a characteristic polynomial was accepted as primitive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Primitivity {
    /// Order of `x` checked against every prime factor of `2^n - 1`.
    Verified,
    /// `2^n - 1` is prime and `x^(2^n) = x` holds with no linear factors.
    VerifiedMersenne,
    /// On the trusted list and beyond every available check.
    Trusted,
}

/// Accepts `p` as the characteristic polynomial of a maximum-length LFSR.
pub fn validate_characteristic(p: &BinaryPolynomial) -> Result<Primitivity> {
    let n = p.degree();
    if n <= MAX_FIELD_DEGREE {
        return if is_primitive(p)? {
            Ok(Primitivity::Verified)
        } else {
            Err(GaloisError::NotPrimitive(p.to_string()))
        };
    }
    if n <= MAX_MERSENNE_CHECK_DEGREE && is_mersenne_exponent(n) {
        return if is_primitive_mersenne(p)? {
            Ok(Primitivity::VerifiedMersenne)
        } else {
            Err(GaloisError::NotPrimitive(p.to_string()))
        };
    }
    let trusted = TRUSTED_PRIMITIVE
        .iter()
        .any(|s| s.parse::<BinaryPolynomial>().as_ref() == Ok(p));
    if trusted {
        Ok(Primitivity::Trusted)
    } else {
        Err(GaloisError::UnsupportedDegree {
            degree: n,
            limit: MAX_FIELD_DEGREE,
        })
    }
}
