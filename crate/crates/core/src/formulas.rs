//! Closed-form counts and bounds, all in exact arithmetic.

use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numbers::{is_power_of_two, is_prime, list_kaps, mult_order, Structure, StructureKind};
use crate::search::{CountReport, Method};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FormulaId {
    TwoColorLowerBound,
    UpperBound,
    ExactCyclicPrime,
    ProductRecurrence,
}

impl FormulaId {
    pub fn name(self) -> &'static str {
        match self {
            FormulaId::TwoColorLowerBound => "two_color_lower_bound",
            FormulaId::UpperBound => "upper_bound",
            FormulaId::ExactCyclicPrime => "exact_cyclic_prime",
            FormulaId::ProductRecurrence => "product_recurrence",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaValue {
    pub id: FormulaId,
    pub value: BigRational,
    pub params: Vec<(&'static str, String)>,
    /// The value says nothing at these parameters (e.g. a lower bound below
    /// the trivial count).
    pub vacuous: bool,
    /// A hypothesis of the bound fails at these parameters.
    pub outside_hypothesis: bool,
}

impl FormulaValue {
    fn integer(id: FormulaId, value: BigInt, params: Vec<(&'static str, String)>) -> Self {
        FormulaValue { id, value: BigRational::from_integer(value), params, vacuous: false, outside_hypothesis: false }
    }

    /// The value as an integer, when it is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.value.is_integer().then(|| self.value.to_integer())
    }
}

fn choose2(r: u64) -> BigInt {
    BigInt::from(binomial(r, 2))
}

fn pow2(e: u64) -> BigInt {
    BigInt::one() << e as usize
}

fn require_r(r: u64) -> Result<()> {
    if r < 3 {
        return Err(Error::InvalidParameter(format!("r must be at least 3, got {r}")));
    }
    Ok(())
}

fn require_odd_prime(p: u64) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    Ok(())
}

/// `c * ord_p(2)` with `c = 1` for even order and 2 otherwise.
fn orbit_size(p: u64) -> Result<u64> {
    let ord = mult_order(2, p)?;
    Ok(if ord % 2 == 0 { ord } else { 2 * ord })
}

/// Colorings that use at most two colors: `C(r,2) 2^size - r^2 + 2r`.
pub fn eq1_lower_bound(r: u64, size: u64) -> Result<FormulaValue> {
    require_r(r)?;
    let r_big = BigInt::from(r);
    let value = choose2(r) * pow2(size) - &r_big * &r_big + 2 * &r_big;
    // Any structure has at least one coloring.
    let vacuous = value < BigInt::one();
    let mut out = FormulaValue::integer(
        FormulaId::TwoColorLowerBound,
        value,
        vec![("r", r.to_string()), ("size", size.to_string())],
    );
    out.vacuous = vacuous;
    Ok(out)
}

const FRAC_BITS: u32 = 32;
const MANTISSA_BITS: u32 = 96;
const EXP_TERMS: u32 = 24;

fn dyadic(num: BigInt, bits: u32) -> BigRational {
    BigRational::new(num, BigInt::one() << bits as usize)
}

/// Upper bound on `log2 n` with `FRAC_BITS` fractional bits, by repeated
/// squaring of the mantissa with upward rounding.
pub fn log2_upper(n: u64) -> BigRational {
    assert!(n >= 1);
    let e = 63 - n.leading_zeros() as u64;
    let one = BigInt::one() << MANTISSA_BITS as usize;
    let two = &one << 1usize;
    // Mantissa n / 2^e in [1, 2), scaled by 2^MANTISSA_BITS; exact here.
    let mut m = (BigInt::from(n) << MANTISSA_BITS as usize) >> e as usize;
    let mut bits = BigInt::zero();
    for _ in 0..FRAC_BITS {
        let sq = &m * &m;
        m = (sq + &one - 1u32) >> MANTISSA_BITS as usize;
        bits <<= 1usize;
        if m >= two {
            bits += 1u32;
            m = (m + 1u32) >> 1usize;
        }
    }
    // What is left is 2^-FRAC_BITS * log2(m) with m < 4.
    let residual = if m < two { 1u32 } else { 2u32 };
    let total = (BigInt::from(e) << FRAC_BITS as usize) + bits + residual;
    dyadic(total, FRAC_BITS)
}

/// Lower bound on `ln 2` (20 correct decimals, truncated).
fn ln2_lower() -> BigRational {
    BigRational::new(
        "69314718055994530941".parse().expect("literal"),
        "100000000000000000000".parse().expect("literal"),
    )
}

/// Upper bound on `2^{-n / (36 log2 n)}` of the form `m / 2^(FRAC_BITS + w)`.
pub fn decay_upper_bound(n: u64) -> Result<BigRational> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n={n}: log2 n must be positive")));
    }
    let l_hi = log2_upper(n);
    // Exponent rounded down: t_lo <= n / (36 log2 n).
    let t = BigRational::from_integer(BigInt::from(n)) / (BigRational::from_integer(BigInt::from(36)) * l_hi);
    let scale = BigRational::from_integer(BigInt::one() << FRAC_BITS as usize);
    let t_lo = dyadic((t * &scale).floor().to_integer(), FRAC_BITS);
    let whole = t_lo.floor();
    let frac = &t_lo - &whole;
    // 2^-frac = e^{-frac ln 2} <= e^{-y} <= 1 / sum_{i<=K} y^i / i!.
    let y = frac * ln2_lower();
    let mut term = BigRational::one();
    let mut sum = BigRational::one();
    for i in 1..=EXP_TERMS {
        term = term * &y / BigRational::from_integer(BigInt::from(i));
        sum += &term;
    }
    let whole_exp = whole.to_integer().to_u64().expect("exponent fits");
    // Round the fractional factor up to FRAC_BITS bits; the 2^-whole factor is exact.
    let frac_factor = (scale / sum).ceil().to_integer();
    Ok(dyadic(frac_factor, FRAC_BITS) / BigRational::from_integer(pow2(whole_exp)))
}

/// `C(r,2) 2^size + 2^{-n/(36 log2 n)} 2^n`, with the second term bounded
/// from above.
pub fn thm2_upper_bound(r: u64, n: u64, size: u64) -> Result<FormulaValue> {
    require_r(r)?;
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n={n}: needs n >= 2")));
    }
    if size > n {
        return Err(Error::InvalidParameter(format!("|A|={size} exceeds n={n}")));
    }
    let decay = decay_upper_bound(n)?;
    let value = BigRational::from_integer(choose2(r) * pow2(size)) + decay * BigRational::from_integer(pow2(n));
    let xi = BigRational::new(BigInt::from(n - size), BigInt::from(n));
    let xi_max = 3.0 / (5.0 + 8.0 * (r as f64).log2());
    let outside = xi.to_f64().unwrap_or(f64::MAX) > xi_max;
    Ok(FormulaValue {
        id: FormulaId::UpperBound,
        value,
        params: vec![
            ("r", r.to_string()),
            ("n", n.to_string()),
            ("size", size.to_string()),
            ("xi", xi.to_string()),
        ],
        vacuous: false,
        outside_hypothesis: outside,
    })
}

/// Exact number of rainbow 3-AP-free `r`-colorings of `Z_p`.
pub fn thm5_exact_zp(r: u64, p: u64) -> Result<FormulaValue> {
    require_r(r)?;
    require_odd_prime(p)?;
    let m = (p - 1) / orbit_size(p)?;
    let r_big = BigInt::from(r);
    let value = choose2(r) * pow2(p) - &r_big * &r_big + 2 * &r_big
        + &r_big * BigInt::from(binomial(r - 1, 2)) * BigInt::from(p) * (pow2(m) - 2);
    Ok(FormulaValue::integer(
        FormulaId::ExactCyclicPrime,
        value,
        vec![("r", r.to_string()), ("p", p.to_string()), ("orbits", m.to_string())],
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AwClause {
    /// `n` is a power of 2.
    PowerOfTwo,
    /// `n` is prime and 2 generates `Z_n^*`.
    TwoGenerates,
    /// `n` is prime, `ord_n(2) = (n-1)/2` and `(n-1)/2` is odd.
    HalfOrderOdd,
}

impl AwClause {
    pub fn label(self) -> &'static str {
        match self {
            AwClause::PowerOfTwo => "i",
            AwClause::TwoGenerates => "ii",
            AwClause::HalfOrderOdd => "iii",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AwZnCharacterization {
    pub n: u64,
    pub holds: bool,
    pub clause: Option<AwClause>,
}

/// Whether `aw(Z_n, 3) = 3`, by the number-theoretic characterization.
/// Clauses are tried in order and the first match is reported.
pub fn aw_zn3_is_3(n: u64) -> Result<AwZnCharacterization> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let clause = if is_power_of_two(n) {
        Some(AwClause::PowerOfTwo)
    } else if is_prime(n) {
        let ord = mult_order(2, n)?;
        if ord == n - 1 {
            Some(AwClause::TwoGenerates)
        } else if ord == (n - 1) / 2 && ((n - 1) / 2) % 2 == 1 {
            Some(AwClause::HalfOrderOdd)
        } else {
            None
        }
    } else {
        None
    };
    Ok(AwZnCharacterization { n, holds: clause.is_some(), clause })
}

/// Right-hand side of the lower bound on `g_r(Z_{np})` in terms of
/// `g_zn = g_r(Z_n)`.
pub fn cor6_rhs(r: u64, n: u64, p: u64, g_zn: &BigInt) -> Result<FormulaValue> {
    require_r(r)?;
    require_odd_prime(p)?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let m = (p - 1) / orbit_size(p)?;
    let r_big = BigInt::from(r);
    let p_big = BigInt::from(p);
    let two_n = pow2(n);
    let value = choose2(r) * pow2(n * p) - &r_big * &r_big + 2 * &r_big
        + &p_big * &r_big * (g_zn - (&r_big - 1) * &two_n + &r_big - 2)
        + choose2(r) * &p_big * (pow2(m) - 2) * (g_zn - &two_n);
    Ok(FormulaValue::integer(
        FormulaId::ProductRecurrence,
        value,
        vec![("r", r.to_string()), ("n", n.to_string()), ("p", p.to_string()), ("g_zn", g_zn.to_string())],
    ))
}

/// A count obtained without search, where one is known:
/// structures without any `k`-AP (`r^|A|`), `r <= 2` with `k = 3`, `Z_p` for
/// odd primes, and `Z_n` whenever `aw(Z_n, 3) = 3`.
pub fn closed_form_count(s: &Structure, r: usize, k: usize) -> Result<CountReport> {
    let start = Instant::now();
    let size = s.len() as u64;
    let count: BigInt = if list_kaps(s, k).is_empty() || (k == 3 && r <= 2) {
        BigInt::from(r).pow(s.len())
    } else if k == 3 && s.kind() == StructureKind::Cyclic && s.is_full() {
        let n = s.n() as u64;
        if n >= 3 && is_prime(n) {
            thm5_exact_zp(r as u64, n)?.value.to_integer()
        } else if aw_zn3_is_3(n)?.holds {
            eq1_lower_bound(r as u64, size)?.value.to_integer()
        } else {
            return Err(Error::InvalidParameter(format!("no closed form for {s} with r={r}")));
        }
    } else {
        return Err(Error::InvalidParameter(format!("no closed form for {s} with r={r}, k={k}")));
    };
    let count = count.to_biguint().ok_or_else(|| Error::InvalidParameter("negative closed form".into()))?;
    Ok(CountReport {
        structure: s.key(),
        r,
        k,
        exact: None,
        count,
        by_colors_used: Vec::<BigUint>::new(),
        method: Method::Formula,
        elapsed: start.elapsed(),
        nodes: 0,
        leaves: 0,
    })
}
