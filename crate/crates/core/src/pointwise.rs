//! Sign and domain of `E(n)` at integers, decided by interval evaluation.
//!
//! Two tiers. A compiled `f64` interval program with outward rounding
//! settles almost every point, and also whole ranges of `n` at once (the
//! variable becomes `[a, b]`). Whatever it cannot settle goes to exact
//! rational intervals with precision doubling. A zero that still cannot be
//! excluded at the precision cap is reported as undefined.

use std::cmp::Ordering;

use num_traits::{Signed, ToPrimitive};

use crate::expr::Expr;
use crate::interval::{Interval, PowIssue};
use crate::rational::{to_f64, Rational};

/// Value of `E(n)` as far as the domain search cares.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointValue {
    Positive,
    Negative,
    Zero,
    Undefined,
}

const START_BITS: u32 = 64;
const MAX_BITS: u32 = 2048;

/// Relative slack for `exp(a ln x)`, far above the few-ulp libm error.
const POW_SLACK: f64 = 1.0 / (1u64 << 44) as f64;

#[derive(Debug, Clone)]
enum Node {
    Const(f64, f64),
    Var,
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow { base: Box<Node>, alpha: f64, int: Option<i32>, odd_den: bool, odd_num: bool },
}

/// An expression prepared for repeated interval evaluation.
#[derive(Debug, Clone)]
pub struct Evaluator<'a> {
    expr: &'a Expr,
    root: Node,
}

impl<'a> Evaluator<'a> {
    pub fn new(expr: &'a Expr) -> Self {
        Evaluator { expr, root: compile(expr) }
    }

    pub fn point(&self, n: u64) -> PointValue {
        match enclose(&self.root, span(n, n)) {
            Ok((lo, _)) if lo > 0.0 => return PointValue::Positive,
            Ok((_, hi)) if hi < 0.0 => return PointValue::Negative,
            Err(PowIssue::Domain) => return PointValue::Undefined,
            _ => {}
        }
        exact_point(self.expr, n)
    }

    /// `Some(sign)` if every integer in `[a, b]` is provably in the domain
    /// with that sign; `None` if the `f64` enclosure cannot tell.
    pub fn range_sign(&self, a: u64, b: u64) -> Option<Ordering> {
        match enclose(&self.root, span(a, b)) {
            Ok((lo, _)) if lo > 0.0 => Some(Ordering::Greater),
            Ok((_, hi)) if hi < 0.0 => Some(Ordering::Less),
            _ => None,
        }
    }
}

pub fn point_value(e: &Expr, n: u64) -> PointValue {
    Evaluator::new(e).point(n)
}

/// `[a, b]` as an `f64` interval containing every integer in it.
fn span(a: u64, b: u64) -> (f64, f64) {
    let (lo, hi) = (a as f64, b as f64);
    let lo = if lo as u64 > a { lo.next_down() } else { lo };
    let hi = if (hi as u64) < b { hi.next_up() } else { hi };
    (lo, hi)
}

fn compile(e: &Expr) -> Node {
    let bx = |e: &Expr| Box::new(compile(e));
    match e {
        Expr::Const(v) => {
            let f = to_f64(v);
            if v.is_integer() && f.abs() < 9.0e15 {
                Node::Const(f, f)
            } else {
                Node::Const(f.next_down(), f.next_up())
            }
        }
        Expr::Var => Node::Var,
        Expr::Add(a, b) => Node::Add(bx(a), bx(b)),
        Expr::Sub(a, b) => Node::Sub(bx(a), bx(b)),
        Expr::Mul(a, b) => Node::Mul(bx(a), bx(b)),
        Expr::Div(a, b) => Node::Div(bx(a), bx(b)),
        Expr::Pow(b, alpha) => Node::Pow {
            base: bx(b),
            alpha: to_f64(alpha),
            int: if alpha.is_integer() { alpha.to_integer().to_i32() } else { None },
            odd_den: alpha.denom().bit(0),
            odd_num: alpha.numer().abs().bit(0),
        },
    }
}

fn out(lo: f64, hi: f64) -> (f64, f64) {
    (lo.next_down(), hi.next_up())
}

fn min_max(c: [f64; 4]) -> (f64, f64) {
    let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// Outward-rounded enclosure of the node over `x` in `[xlo, xhi]`.
/// Non-finite bounds come back as `Unresolved`.
fn enclose(node: &Node, x: (f64, f64)) -> Result<(f64, f64), PowIssue> {
    let r = match node {
        Node::Const(lo, hi) => (*lo, *hi),
        Node::Var => x,
        Node::Add(a, b) => {
            let (a, b) = (enclose(a, x)?, enclose(b, x)?);
            out(a.0 + b.0, a.1 + b.1)
        }
        Node::Sub(a, b) => {
            let (a, b) = (enclose(a, x)?, enclose(b, x)?);
            out(a.0 - b.1, a.1 - b.0)
        }
        Node::Mul(a, b) => {
            let (a, b) = (enclose(a, x)?, enclose(b, x)?);
            let (lo, hi) = min_max([a.0 * b.0, a.0 * b.1, a.1 * b.0, a.1 * b.1]);
            out(lo, hi)
        }
        Node::Div(a, b) => {
            let (a, b) = (enclose(a, x)?, enclose(b, x)?);
            if b.0 <= 0.0 && b.1 >= 0.0 {
                return Err(PowIssue::Unresolved);
            }
            let (lo, hi) = min_max([a.0 / b.0, a.0 / b.1, a.1 / b.0, a.1 / b.1]);
            out(lo, hi)
        }
        Node::Pow { base, alpha, int, odd_den, odd_num } => {
            enclose_pow(enclose(base, x)?, *alpha, *int, *odd_den, *odd_num)?
        }
    };
    if r.0.is_finite() && r.1.is_finite() {
        Ok(r)
    } else {
        Err(PowIssue::Unresolved)
    }
}

fn enclose_pow(
    (lo, hi): (f64, f64),
    alpha: f64,
    int: Option<i32>,
    odd_den: bool,
    odd_num: bool,
) -> Result<(f64, f64), PowIssue> {
    if int == Some(0) {
        return Ok((1.0, 1.0));
    }
    let straddles = lo <= 0.0 && hi >= 0.0;
    if straddles {
        return match int {
            Some(k) if k > 0 => {
                let (a, b) = (lo.powi(k), hi.powi(k));
                Ok(if k % 2 == 0 { out(0.0, a.max(b)) } else { out(a, b) })
            }
            _ => Err(PowIssue::Unresolved),
        };
    }
    if hi < 0.0 && int.is_none() && !odd_den {
        return Err(PowIssue::Domain);
    }
    let (mlo, mhi) = if hi < 0.0 { (-hi, -lo) } else { (lo, hi) };
    let f = |m: f64| match int {
        Some(k) => m.powi(k),
        None => (alpha * m.ln()).exp(),
    };
    let (p, q) = (f(mlo), f(mhi));
    let (plo, phi) = if p <= q { (p, q) } else { (q, p) };
    // powi may be off by a few ulps for large k as well
    let (plo, phi) = out(plo - plo.abs() * POW_SLACK, phi + phi.abs() * POW_SLACK);
    Ok(if hi < 0.0 && odd_num { (-phi, -plo) } else { (plo, phi) })
}

fn exact_point(e: &Expr, n: u64) -> PointValue {
    let x = Interval::point(Rational::from_integer(n.into()));
    let mut bits = START_BITS;
    while bits <= MAX_BITS {
        match exact_enclosure(e, &x, bits) {
            Err(PowIssue::Domain) => return PointValue::Undefined,
            Err(PowIssue::Unresolved) => {}
            Ok(iv) => match iv.sign() {
                Some(Ordering::Greater) => return PointValue::Positive,
                Some(Ordering::Less) => return PointValue::Negative,
                Some(Ordering::Equal) => return PointValue::Zero,
                None => {}
            },
        }
        bits *= 2;
    }
    PointValue::Undefined
}

fn exact_enclosure(e: &Expr, x: &Interval, bits: u32) -> Result<Interval, PowIssue> {
    Ok(match e {
        Expr::Const(v) => Interval::point(v.clone()),
        Expr::Var => x.clone(),
        Expr::Add(a, b) => exact_enclosure(a, x, bits)?.add(&exact_enclosure(b, x, bits)?, bits),
        Expr::Sub(a, b) => exact_enclosure(a, x, bits)?.sub(&exact_enclosure(b, x, bits)?, bits),
        Expr::Mul(a, b) => exact_enclosure(a, x, bits)?.mul(&exact_enclosure(b, x, bits)?, bits),
        Expr::Div(a, b) => {
            let d = exact_enclosure(b, x, bits)?;
            if d.is_exact_zero() {
                return Err(PowIssue::Domain);
            }
            exact_enclosure(a, x, bits)?.div(&d, bits).ok_or(PowIssue::Unresolved)?
        }
        Expr::Pow(b, alpha) => exact_enclosure(b, x, bits)?.pow_rational(alpha, bits)?,
    })
}
