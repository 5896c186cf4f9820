//! Exact rational numbers.
//!
//! Degrees, exponents and the rational part of every coefficient are
//! arbitrary-precision fractions kept in lowest terms with a positive
//! denominator. The arithmetic itself comes from `num-rational`; this module
//! adds the handful of conversions the rest of the crate needs.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use num_rational::BigRational as Rational;

/// Builds `num/den`, reduced. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Renders `p` or `p/q` (no parentheses).
pub fn to_plain_string(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Best-effort conversion to `f64`; correct for values far outside the `i64`
/// range because numerator and denominator are scaled before dividing.
pub fn to_f64(r: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    // keep ~60 significant bits of each part
    let ns = (nb - 60).max(0);
    let ds = (db - 60).max(0);
    let n = (r.numer() >> ns as usize).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> ds as usize).to_f64().unwrap_or(1.0);
    n / d * 2f64.powi((ns - ds) as i32)
}

/// Exact conversion of a finite decimal literal such as `0.25`.
pub fn from_decimal(int_part: &str, frac_part: &str) -> Option<Rational> {
    let digits = format!("{int_part}{frac_part}");
    let num = digits.parse::<BigInt>().ok()?;
    let den = num_traits::pow(BigInt::from(10u32), frac_part.len());
    Some(Rational::new(num, den))
}

/// `floor(log2 |r|)` up to one; used for relative rounding. `r` must be nonzero.
pub(crate) fn approx_log2(r: &Rational) -> i64 {
    r.numer().bits() as i64 - r.denom().bits() as i64
}

/// Rounds `r` down (towards -inf) to a multiple of `2^(e - bits)` where `e`
/// approximates `log2 |r|`, i.e. keeps about `bits` significant bits.
pub(crate) fn round_down(r: &Rational, bits: u32) -> Rational {
    round_dyadic(r, bits, false)
}

pub(crate) fn round_up(r: &Rational, bits: u32) -> Rational {
    round_dyadic(r, bits, true)
}

fn round_dyadic(r: &Rational, bits: u32, up: bool) -> Rational {
    if r.is_zero() || r.denom().is_one() && r.numer().bits() <= u64::from(bits) {
        return r.clone();
    }
    let shift = i64::from(bits) - approx_log2(r);
    let scaled = if shift >= 0 {
        r * Rational::from_integer(BigInt::one() << shift as usize)
    } else {
        r / Rational::from_integer(BigInt::one() << (-shift) as usize)
    };
    let q = if up { scaled.ceil() } else { scaled.floor() };
    if shift >= 0 {
        q / Rational::from_integer(BigInt::one() << shift as usize)
    } else {
        q * Rational::from_integer(BigInt::one() << (-shift) as usize)
    }
}

/// `floor(x^(1/k))` for a nonnegative rational `x`, together with an
/// exactness flag, computed at `bits` fractional bits:
/// returns `(lo, hi)` with `lo <= x^(1/k) <= hi` and `hi - lo <= 2^-bits`.
pub(crate) fn root_bounds(x: &Rational, k: u32, bits: u32) -> (Rational, Rational) {
    debug_assert!(!x.is_negative());
    if x.is_zero() {
        return (Rational::zero(), Rational::zero());
    }
    if k == 1 {
        return (x.clone(), x.clone());
    }
    if let (Some(a), Some(b)) = (exact_root(x.numer(), k), exact_root(x.denom(), k)) {
        let r = Rational::new(a, b);
        return (r.clone(), r);
    }
    // scale so the root carries `bits` fractional bits beyond its own magnitude
    let mag = (approx_log2(x) / i64::from(k)).min(0).unsigned_abs() as u32;
    let frac = bits + mag;
    let scale = BigInt::one() << (frac as usize * k as usize);
    let scaled = (x * Rational::from_integer(scale)).floor().to_integer();
    let root = scaled.magnitude().nth_root(k);
    let den = BigInt::one() << frac as usize;
    let lo = Rational::new(BigInt::from_biguint(Sign::Plus, root.clone()), den.clone());
    let hi = Rational::new(BigInt::from_biguint(Sign::Plus, root + BigUint::one()), den);
    (lo, hi)
}

fn exact_root(v: &BigInt, k: u32) -> Option<BigInt> {
    let m = v.magnitude();
    let r = m.nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == *m {
        Some(BigInt::from_biguint(Sign::Plus, r))
    } else {
        None
    }
}

/// Integer part and fractional part in `[0, 1)`.
pub(crate) fn split_floor(r: &Rational) -> (BigInt, Rational) {
    let fl = r.floor();
    (fl.to_integer(), r - fl)
}
