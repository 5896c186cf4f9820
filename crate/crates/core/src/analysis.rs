//! Convergence verdicts and eventual-sign search.
//!
//! For a member expression of degree `r` the series `sum E(n)` converges
//! absolutely when `r < -1` and diverges when `r >= -1`; the comparison is an
//! exact rational one. [`find_domain`] locates where an expression is
//! defined and where its sign has settled to the sign of its leading
//! coefficient.

use std::cmp::Ordering;
use std::fmt;

use num_traits::One;
use rayon::prelude::*;
use thiserror::Error;

use crate::attributes::{analyze_attributes, MembershipStatus};
use crate::expr::Expr;
use crate::pointwise::{Evaluator, PointValue};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    fn from_ordering(o: Ordering) -> Option<Self> {
        match o {
            Ordering::Greater => Some(Sign::Positive),
            Ordering::Less => Some(Sign::Negative),
            Ordering::Equal => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    AbsolutelyConvergent,
    Divergent,
    ZeroSeries,
    /// The expression is not a member; carries its status.
    NotApplicable(MembershipStatus),
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::AbsolutelyConvergent => "absolutely-convergent",
            Verdict::Divergent => "divergent",
            Verdict::ZeroSeries => "zero-series",
            Verdict::NotApplicable(_) => "not-applicable",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub verdict: Verdict,
    /// Present for convergent / divergent verdicts.
    pub degree: Option<Rational>,
    pub coeff_sign: Option<Sign>,
}

fn by_degree(degree: Rational, coeff_sign: Option<Sign>) -> Classification {
    let verdict = if degree < int(-1) { Verdict::AbsolutelyConvergent } else { Verdict::Divergent };
    Classification { verdict, degree: Some(degree), coeff_sign }
}

pub fn classify(e: &Expr) -> Classification {
    let a = analyze_attributes(e);
    match a.status {
        MembershipStatus::Member => {
            let sign = a.coeff.sign().ok().and_then(Sign::from_ordering);
            by_degree(a.degree, sign)
        }
        MembershipStatus::ZeroConstant => {
            Classification { verdict: Verdict::ZeroSeries, degree: None, coeff_sign: None }
        }
        status => Classification { verdict: Verdict::NotApplicable(status), degree: None, coeff_sign: None },
    }
}

/// Closed form for `sum root_k(P_q(n)) / root_h(R_s(n))` with polynomials of
/// degrees `q` and `s` and positive leading coefficients: convergent exactly
/// when `s/h - q/k > 1`.
///
/// Panics if `k` or `h` is zero.
pub fn classify_radical_quotient(q: u64, k: u64, s: u64, h: u64) -> Classification {
    assert!(k >= 1 && h >= 1, "root indices must be positive");
    let degree = Rational::new(q.into(), k.into()) - Rational::new(s.into(), h.into());
    by_degree(degree, Some(Sign::Positive))
}

/// `sum 1 / R_s(n)`: convergent exactly when `s > 1`.
pub fn classify_reciprocal_polynomial(s: u64) -> Classification {
    classify_radical_quotient(0, 1, s, 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainReport {
    /// First `n` from which `window + 1` consecutive points all evaluate.
    pub n_defined: u64,
    /// First `n >= n_defined` from which `window + 1` consecutive points all
    /// have the sign of the leading coefficient.
    pub n_sign_stable: u64,
    pub window: u64,
    /// Always `false`: the search is a finite scan, not a proof.
    pub certified: bool,
    pub sign: Sign,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DomainSearchError {
    #[error("expression is not a member ({0})")]
    NotMember(MembershipStatus),
    #[error("leading coefficient sign could not be determined")]
    UnknownSign,
    #[error("n_start must be positive and at most n_max")]
    BadRange,
    #[error("no stable window starting at or below n = {n_max}")]
    WindowNotFound { n_max: u64 },
}

pub const DEFAULT_WINDOW: u64 = 64;
pub const DEFAULT_N_MAX: u64 = 10_000_000;

fn sign_ordering(s: Sign) -> Ordering {
    match s {
        Sign::Positive => Ordering::Greater,
        Sign::Negative => Ordering::Less,
    }
}

/// Run-length bookkeeping for the scan; points arrive in increasing order.
struct Scan {
    need: u64,
    sign: Sign,
    defined_run: u64,
    sign_run: u64,
    n_defined: Option<u64>,
}

impl Scan {
    /// `len` consecutive defined points from `start`; `good` when all of
    /// them carry the target sign. Returns the stable start once found.
    fn run(&mut self, start: u64, len: u64, good: bool) -> Option<u64> {
        if self.n_defined.is_none() && self.defined_run + len >= self.need {
            let k = start + (self.need - self.defined_run) - 1;
            self.n_defined = Some(k + 1 - self.need);
        }
        self.defined_run += len;
        if !good {
            self.sign_run = 0;
            return None;
        }
        if self.sign_run + len >= self.need {
            let k = start + (self.need - self.sign_run) - 1;
            return Some(k + 1 - self.need);
        }
        self.sign_run += len;
        None
    }

    fn point(&mut self, k: u64, v: PointValue) -> Option<u64> {
        match v {
            PointValue::Undefined => {
                self.defined_run = 0;
                self.sign_run = 0;
                None
            }
            PointValue::Positive => self.run(k, 1, self.sign == Sign::Positive),
            PointValue::Negative => self.run(k, 1, self.sign == Sign::Negative),
            PointValue::Zero => self.run(k, 1, false),
        }
    }
}

/// Below this many points a block that resists a range proof is evaluated
/// point by point.
const LEAF: u64 = 256;

fn visit(ev: &Evaluator<'_>, scan: &mut Scan, a: u64, b: u64) -> Option<u64> {
    let len = b - a + 1;
    match ev.range_sign(a, b) {
        Some(o) => scan.run(a, len, o == sign_ordering(scan.sign)),
        None if len <= LEAF => {
            let values: Vec<PointValue> = (a..=b).into_par_iter().map(|k| ev.point(k)).collect();
            for (i, v) in values.into_iter().enumerate() {
                if let Some(s) = scan.point(a + i as u64, v) {
                    return Some(s);
                }
            }
            None
        }
        None => {
            let mid = a + len / 2 - 1;
            visit(ev, scan, a, mid).or_else(|| visit(ev, scan, mid + 1, b))
        }
    }
}

/// Forward scan from `n_start` for the domain start and the point from
/// which the sign matches the leading coefficient, each required to hold
/// over `window + 1` consecutive integers.
///
/// The answer is the same as checking every integer in turn; blocks of `n`
/// on which an interval enclosure proves a constant sign are skipped whole.
pub fn find_domain(e: &Expr, n_start: u64, n_max: u64, window: u64) -> Result<DomainReport, DomainSearchError> {
    if n_start == 0 || n_start > n_max {
        return Err(DomainSearchError::BadRange);
    }
    let a = analyze_attributes(e);
    if !a.is_member() {
        return Err(DomainSearchError::NotMember(a.status));
    }
    let sign = a.coeff.sign().ok().and_then(Sign::from_ordering).ok_or(DomainSearchError::UnknownSign)?;

    let ev = Evaluator::new(e);
    let mut scan = Scan { need: window + 1, sign, defined_run: 0, sign_run: 0, n_defined: None };
    let last = n_max.saturating_add(window);
    let mut n = n_start;
    let mut block = LEAF;
    while n <= last {
        let hi = n.saturating_add(block - 1).min(last);
        if let Some(n_sign_stable) = visit(&ev, &mut scan, n, hi) {
            return Ok(DomainReport {
                n_defined: scan.n_defined.expect("defined run at least as long"),
                n_sign_stable,
                window,
                certified: false,
                sign,
            });
        }
        if hi == u64::MAX {
            break;
        }
        n = hi + 1;
        block = block.saturating_mul(2);
    }
    Err(DomainSearchError::WindowNotFound { n_max })
}

/// `true` when the exact degree is below `-1`.
pub fn degree_converges(degree: &Rational) -> bool {
    *degree < -Rational::one()
}
