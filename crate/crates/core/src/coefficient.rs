//! Exact radical-rational leading coefficients.
//!
//! A [`Coefficient`] is a quotient of two *radical sums*. A radical sum is a
//! finite sum of terms `c * p1^e1 * p2^e2 * ...` with `c` rational, the `pi`
//! distinct primes and every `ei` in the open interval `(0, 1)`. Integer parts
//! of exponents are always folded into `c`, so `sqrt(8)` is stored as
//! `2 * 2^(1/2)`. Terms sharing a radical signature are merged and zero terms
//! dropped; distinct signatures are linearly independent over the rationals,
//! which makes "is this zero?" a check for an empty numerator.
//!
//! The denominator is `1` unless a multi-term sum had to be divided by; single
//! terms are always inverted into the numerator.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::interval::Interval;
use crate::primes::factorize;
use crate::rational::{root_bounds, split_floor, to_f64, to_plain_string, Rational};

/// Product of prime powers with exponents in `(0, 1)`; empty means `1`.
pub type Radical = BTreeMap<BigUint, Rational>;

const SIGN_START_BITS: u32 = 64;
const SIGN_MAX_BITS: u32 = 16_384;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoefficientError {
    #[error("division by a zero coefficient")]
    DivisionByZero,
    #[error("non-integer power of a coefficient that is not positive")]
    NonPositiveBase,
    #[error("non-integer power of a multi-term coefficient has no canonical form")]
    MultiTermPower,
    #[error("could not factor a rational constant")]
    Unfactorable,
    #[error("sign could not be resolved at the precision cap")]
    SignIndeterminate,
}

/// Outcome of the zero test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroTest {
    Zero,
    NonZero,
    /// Unreachable while the canonical-form invariant holds.
    Indeterminate,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
struct RadicalSum {
    terms: BTreeMap<Radical, Rational>,
}

impl RadicalSum {
    fn zero() -> Self {
        Self::default()
    }

    fn rational(r: Rational) -> Self {
        let mut s = Self::zero();
        s.push(Radical::new(), r);
        s
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn single(&self) -> Option<(&Radical, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    fn is_one(&self) -> bool {
        matches!(self.single(), Some((r, c)) if r.is_empty() && c.is_one())
    }

    fn push(&mut self, rad: Radical, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(rad) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (r, c) in &other.terms {
            out.push(r.clone(), c.clone());
        }
        out
    }

    fn neg(&self) -> Self {
        RadicalSum { terms: self.terms.iter().map(|(r, c)| (r.clone(), -c)).collect() }
    }

    fn scale(&self, k: &Rational) -> Self {
        let mut out = Self::zero();
        for (r, c) in &self.terms {
            out.push(r.clone(), c * k);
        }
        out
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (r1, c1) in &self.terms {
            for (r2, c2) in &other.terms {
                let mut exps = r1.clone();
                for (p, e) in r2 {
                    *exps.entry(p.clone()).or_insert_with(Rational::zero) += e;
                }
                let (rad, c) = normalize_term(c1 * c2, exps);
                out.push(rad, c);
            }
        }
        out
    }

    fn powi(&self, k: u64) -> Self {
        let mut acc = Self::rational(Rational::one());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Ratio `self / other` if the two sums are rational multiples of each other.
    fn proportional_to(&self, other: &Self) -> Option<Rational> {
        if self.terms.len() != other.terms.len() {
            return None;
        }
        let mut ratio: Option<Rational> = None;
        for ((r1, c1), (r2, c2)) in self.terms.iter().zip(&other.terms) {
            if r1 != r2 {
                return None;
            }
            let k = c1 / c2;
            match &ratio {
                None => ratio = Some(k),
                Some(prev) if *prev == k => {}
                Some(_) => return None,
            }
        }
        ratio
    }

    fn interval(&self, bits: u32) -> Interval {
        let mut acc = Interval::point(Rational::zero());
        for (rad, c) in &self.terms {
            let mut term = Interval::point(c.clone());
            for (p, e) in rad {
                let base = Rational::from_integer(BigInt::from_biguint(
                    Sign::Plus,
                    num_traits::pow(p.clone(), usize::try_from(e.numer()).unwrap_or(1)),
                ));
                let q = u32::try_from(e.denom()).unwrap_or(u32::MAX);
                let (lo, hi) = root_bounds(&base, q, bits + 16);
                term = term.mul(&Interval::new(lo, hi), bits + 8);
            }
            acc = acc.add(&term, bits + 8);
        }
        acc
    }

    fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(rad, c)| {
                rad.iter().fold(to_f64(c), |acc, (p, e)| {
                    acc * to_f64(&Rational::from_integer(BigInt::from(p.clone()))).powf(to_f64(e))
                })
            })
            .sum()
    }
}

/// Folds integer parts of exponents into the rational coefficient.
fn normalize_term(mut c: Rational, exps: BTreeMap<BigUint, Rational>) -> (Radical, Rational) {
    let mut rad = Radical::new();
    for (p, e) in exps {
        let (whole, frac) = split_floor(&e);
        if !whole.is_zero() {
            let pr = Rational::from_integer(BigInt::from(p.clone()));
            let k: i32 = (&whole).try_into().expect("exponent integer part fits in i32");
            c *= num_traits::Pow::pow(&pr, k);
        }
        if !frac.is_zero() {
            rad.insert(p, frac);
        }
    }
    (rad, c)
}

/// Exact value of a leading coefficient.
#[derive(Debug, Clone, Eq)]
pub struct Coefficient {
    num: RadicalSum,
    den: RadicalSum,
}

impl Default for Coefficient {
    fn default() -> Self {
        Self::zero()
    }
}

impl PartialEq for Coefficient {
    fn eq(&self, other: &Self) -> bool {
        if self.den.is_one() && other.den.is_one() {
            self.num == other.num
        } else {
            self.num.mul(&other.den) == other.num.mul(&self.den)
        }
    }
}

impl From<Rational> for Coefficient {
    fn from(r: Rational) -> Self {
        Coefficient { num: RadicalSum::rational(r), den: RadicalSum::rational(Rational::one()) }
    }
}

impl Coefficient {
    pub fn zero() -> Self {
        Rational::zero().into()
    }

    pub fn one() -> Self {
        Rational::one().into()
    }

    /// A single radical term `c * prod(p^e)`; exponents may be any rationals.
    pub fn from_term(c: Rational, radical: BTreeMap<BigUint, Rational>) -> Self {
        let (rad, c) = normalize_term(c, radical);
        let mut num = RadicalSum::zero();
        num.push(rad, c);
        Coefficient { num, den: RadicalSum::rational(Rational::one()) }
    }

    fn from_parts(num: RadicalSum, den: RadicalSum) -> Self {
        let mut c = Coefficient { num, den };
        c.fold();
        c
    }

    /// Restores the canonical shape after arithmetic.
    fn fold(&mut self) {
        if self.num.is_zero() {
            self.den = RadicalSum::rational(Rational::one());
            return;
        }
        if self.den.is_one() {
            return;
        }
        if let Some((rad, c)) = self.den.single() {
            let inv = invert_term(rad, c);
            self.num = self.num.mul(&inv);
            self.den = RadicalSum::rational(Rational::one());
            return;
        }
        if let Some(k) = self.num.proportional_to(&self.den) {
            self.num = RadicalSum::rational(k);
            self.den = RadicalSum::rational(Rational::one());
            return;
        }
        // fix the scale: first denominator coefficient is 1
        let lead = self.den.terms.values().next().expect("nonzero denominator").clone();
        let inv = lead.recip();
        self.num = self.num.scale(&inv);
        self.den = self.den.scale(&inv);
    }

    /// Re-runs canonicalization. Idempotent on values produced by this type.
    pub fn canonical(&self) -> Self {
        let num = self.num.terms.iter().fold(RadicalSum::zero(), |mut s, (r, c)| {
            let (rad, c) = normalize_term(c.clone(), r.clone());
            s.push(rad, c);
            s
        });
        let den = self.den.terms.iter().fold(RadicalSum::zero(), |mut s, (r, c)| {
            let (rad, c) = normalize_term(c.clone(), r.clone());
            s.push(rad, c);
            s
        });
        Self::from_parts(num, den)
    }

    pub fn is_zero(&self) -> ZeroTest {
        if self.num.is_zero() {
            ZeroTest::Zero
        } else {
            ZeroTest::NonZero
        }
    }

    /// Number of terms in the canonical numerator.
    pub fn term_count(&self) -> usize {
        self.num.terms.len()
    }

    pub fn has_unit_denominator(&self) -> bool {
        self.den.is_one()
    }

    /// The value as a plain rational, if it has no radical part.
    pub fn as_rational(&self) -> Option<Rational> {
        if !self.den.is_one() {
            return None;
        }
        if self.num.is_zero() {
            return Some(Rational::zero());
        }
        match self.num.single() {
            Some((rad, c)) if rad.is_empty() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn neg(&self) -> Self {
        Coefficient { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den.is_one() && other.den.is_one() {
            return Self::from_parts(self.num.add(&other.num), self.den.clone());
        }
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        Self::from_parts(num, self.den.mul(&other.den))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_parts(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &Self) -> Result<Self, CoefficientError> {
        if other.num.is_zero() {
            return Err(CoefficientError::DivisionByZero);
        }
        Ok(Self::from_parts(self.num.mul(&other.den), self.den.mul(&other.num)))
    }

    /// `self^exp`. Integer exponents work for any nonzero value (and for zero
    /// when positive); non-integer exponents need a single-term value, which
    /// must be positive unless the exponent has an odd denominator.
    pub fn pow(&self, exp: &Rational) -> Result<Self, CoefficientError> {
        if exp.is_integer() {
            let k: i64 = exp.to_integer().try_into().map_err(|_| CoefficientError::Unfactorable)?;
            if k == 0 {
                return Ok(Self::one());
            }
            if self.num.is_zero() {
                return if k > 0 { Ok(Self::zero()) } else { Err(CoefficientError::DivisionByZero) };
            }
            let (n, d) = (self.num.powi(k.unsigned_abs()), self.den.powi(k.unsigned_abs()));
            return Ok(if k > 0 { Self::from_parts(n, d) } else { Self::from_parts(d, n) });
        }
        if self.num.is_zero() {
            return if exp.is_positive() { Ok(Self::zero()) } else { Err(CoefficientError::NonPositiveBase) };
        }
        if !self.den.is_one() {
            return Err(CoefficientError::MultiTermPower);
        }
        let (rad, c) = self.num.single().ok_or(CoefficientError::MultiTermPower)?;
        let mut sign = Rational::one();
        if c.is_negative() {
            if exp.denom().is_even() {
                return Err(CoefficientError::NonPositiveBase);
            }
            if exp.numer().is_odd() {
                sign = -sign;
            }
        }
        let mut exps: BTreeMap<BigUint, Rational> = rad.iter().map(|(p, e)| (p.clone(), e * exp)).collect();
        let mag = c.abs();
        let nf = factorize(mag.numer().magnitude()).ok_or(CoefficientError::Unfactorable)?;
        let df = factorize(mag.denom().magnitude()).ok_or(CoefficientError::Unfactorable)?;
        for (p, k) in nf {
            *exps.entry(p).or_insert_with(Rational::zero) += Rational::from_integer(k.into()) * exp;
        }
        for (p, k) in df {
            *exps.entry(p).or_insert_with(Rational::zero) -= Rational::from_integer(k.into()) * exp;
        }
        exps.retain(|_, e| !e.is_zero());
        Ok(Self::from_term(sign, exps))
    }

    /// Enclosure of the value at roughly `bits` bits of precision. `None` only
    /// if the denominator enclosure still contains zero.
    pub fn interval(&self, bits: u32) -> Option<Interval> {
        let n = self.num.interval(bits);
        if self.den.is_one() {
            return Some(n);
        }
        n.div(&self.den.interval(bits), bits)
    }

    /// Sign by interval evaluation with precision doubling.
    pub fn sign(&self) -> Result<Ordering, CoefficientError> {
        if self.num.is_zero() {
            return Ok(Ordering::Equal);
        }
        let mut bits = SIGN_START_BITS;
        while bits <= SIGN_MAX_BITS {
            let n = self.num.interval(bits).sign().filter(|s| *s != Ordering::Equal);
            let d = if self.den.is_one() {
                Some(Ordering::Greater)
            } else {
                self.den.interval(bits).sign().filter(|s| *s != Ordering::Equal)
            };
            if let (Some(n), Some(d)) = (n, d) {
                return Ok(if n == d { Ordering::Greater } else { Ordering::Less });
            }
            bits *= 2;
        }
        Err(CoefficientError::SignIndeterminate)
    }

    pub fn to_f64(&self) -> f64 {
        self.num.to_f64() / self.den.to_f64()
    }
}

fn invert_term(rad: &Radical, c: &Rational) -> RadicalSum {
    let exps = rad.iter().map(|(p, e)| (p.clone(), -e)).collect();
    let (rad, c) = normalize_term(c.recip(), exps);
    let mut s = RadicalSum::zero();
    s.push(rad, c);
    s
}

fn fmt_sum(s: &RadicalSum, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if s.is_zero() {
        return write!(f, "0");
    }
    for (i, (rad, c)) in s.terms.iter().enumerate() {
        let negative = c.is_negative();
        let mag = c.abs();
        match (i, negative) {
            (0, true) => write!(f, "-")?,
            (0, false) => {}
            (_, true) => write!(f, " - ")?,
            (_, false) => write!(f, " + ")?,
        }
        let mut parts = Vec::new();
        if !mag.is_one() || rad.is_empty() {
            parts.push(to_plain_string(&mag));
        }
        for (p, e) in rad {
            parts.push(format!("{}^({})", p, to_plain_string(e)));
        }
        write!(f, "{}", parts.join("*"))?;
    }
    Ok(())
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            fmt_sum(&self.num, f)
        } else {
            write!(f, "(")?;
            fmt_sum(&self.num, f)?;
            write!(f, ")/(")?;
            fmt_sum(&self.den, f)?;
            write!(f, ")")
        }
    }
}
