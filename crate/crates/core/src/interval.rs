//! Closed intervals with exact rational endpoints.
//!
//! Arithmetic on degenerate (point) intervals stays exact; anything wider is
//! rounded outward to roughly `bits` significant bits after each operation,
//! which keeps endpoint sizes bounded during long evaluations.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{root_bounds, round_down, round_up, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

/// Why an interval power could not be taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PowIssue {
    /// Base is definitely outside the domain (negative under an even root, or
    /// zero under a non-positive exponent).
    Domain,
    /// Base straddles zero; more precision might settle it.
    Unresolved,
}

impl Interval {
    pub fn point(v: Rational) -> Self {
        Interval { lo: v.clone(), hi: v }
    }

    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_exact_zero(&self) -> bool {
        self.lo.is_zero() && self.hi.is_zero()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// `Some(Greater)` / `Some(Less)` if the interval lies strictly on one
    /// side of zero, `Some(Equal)` for the exact zero point, `None` otherwise.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.is_exact_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    fn rounded(lo: Rational, hi: Rational, bits: u32) -> Self {
        if lo == hi {
            Interval { lo, hi }
        } else {
            Interval { lo: round_down(&lo, bits), hi: round_up(&hi, bits) }
        }
    }

    pub fn add(&self, other: &Self, bits: u32) -> Self {
        Self::rounded(&self.lo + &other.lo, &self.hi + &other.hi, bits)
    }

    pub fn sub(&self, other: &Self, bits: u32) -> Self {
        Self::rounded(&self.lo - &other.hi, &self.hi - &other.lo, bits)
    }

    pub fn neg(&self) -> Self {
        Interval { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn mul(&self, other: &Self, bits: u32) -> Self {
        if self.is_point() && other.is_point() {
            return Self::point(&self.lo * &other.lo);
        }
        let c = [&self.lo * &other.lo, &self.lo * &other.hi, &self.hi * &other.lo, &self.hi * &other.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Self::rounded(lo, hi, bits)
    }

    /// Reciprocal; `None` when the interval contains zero.
    pub fn recip(&self, bits: u32) -> Option<Self> {
        if self.contains_zero() {
            return None;
        }
        Some(Self::rounded(self.hi.recip(), self.lo.recip(), bits))
    }

    pub fn div(&self, other: &Self, bits: u32) -> Option<Self> {
        Some(self.mul(&other.recip(bits)?, bits))
    }

    pub fn powi(&self, k: i64, bits: u32) -> Option<Self> {
        if k < 0 {
            return self.powi(-k, bits)?.recip(bits);
        }
        if k == 0 {
            return Some(Self::point(Rational::one()));
        }
        let k = k as usize;
        let a = num_traits::pow(self.lo.clone(), k);
        let b = num_traits::pow(self.hi.clone(), k);
        if self.is_point() {
            return Some(Self::point(a));
        }
        let out = if k % 2 == 1 || self.lo.is_positive() || self.lo.is_zero() {
            (a, b)
        } else if self.hi.is_negative() || self.hi.is_zero() {
            (b, a)
        } else {
            (Rational::zero(), a.max(b))
        };
        Some(Self::rounded(out.0, out.1, bits))
    }

    /// `self^(p/q)` for `p/q` in lowest terms with `q > 1`, following the
    /// real-valued convention: odd roots of negatives are negative reals,
    /// even roots of negatives are outside the domain.
    pub fn pow_rational(&self, exp: &Rational, bits: u32) -> Result<Self, PowIssue> {
        if exp.is_integer() {
            let k: i64 = exp.to_integer().try_into().map_err(|_| PowIssue::Domain)?;
            return self.powi(k, bits).ok_or(if self.is_exact_zero() {
                PowIssue::Domain
            } else {
                PowIssue::Unresolved
            });
        }
        let p = exp.numer();
        let q: u32 = exp.denom().try_into().map_err(|_| PowIssue::Domain)?;
        if self.is_exact_zero() {
            return if p.is_positive() { Ok(self.clone()) } else { Err(PowIssue::Domain) };
        }
        if self.hi.is_negative() {
            if q.is_multiple_of(2) {
                return Err(PowIssue::Domain);
            }
            let mag = self.neg().pow_positive(p, q, bits)?;
            return Ok(if p.is_odd() { mag.neg() } else { mag });
        }
        if !self.lo.is_positive() {
            if self.lo.is_zero() && p.is_positive() {
                return self.pow_positive(p, q, bits);
            }
            return Err(PowIssue::Unresolved);
        }
        self.pow_positive(p, q, bits)
    }

    fn pow_positive(&self, p: &BigInt, q: u32, bits: u32) -> Result<Self, PowIssue> {
        let k: usize = p.magnitude().try_into().map_err(|_| PowIssue::Domain)?;
        let lo_p = num_traits::pow(self.lo.clone(), k);
        let hi_p = num_traits::pow(self.hi.clone(), k);
        let (lo, _) = root_bounds(&lo_p, q, bits + 8);
        let (_, hi) = root_bounds(&hi_p, q, bits + 8);
        let base = Self::rounded(lo, hi, bits);
        if p.is_negative() {
            base.recip(bits).ok_or(PowIssue::Domain)
        } else {
            Ok(base)
        }
    }
}
