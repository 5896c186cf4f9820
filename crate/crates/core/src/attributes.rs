//! Degree, leading coefficient and family membership.
//!
//! One bottom-up pass assigns every node a degree `r` and leading
//! coefficient `c` such that the node behaves like `c * n^r` for large `n`:
//!
//! | node        | degree              | coefficient           |
//! |-------------|---------------------|-----------------------|
//! | constant a  | 0                   | a                     |
//! | n           | 1                   | 1                     |
//! | E1 * E2     | r1 + r2             | a1 * a2               |
//! | E1 / E2     | r1 - r2             | a1 / a2               |
//! | E1 ^ alpha  | r1 * alpha          | a1 ^ alpha            |
//! | E1 +/- E2   | max(r1, r2)         | coefficient of the dominant side (negated for `-` on the right) |
//! | E1 +/- E2, r1 = r2 | r1           | a1 +/- a2, which must not vanish |
//!
//! Expressions where an equal-degree sum cancels are outside the family.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::coefficient::{Coefficient, CoefficientError, ZeroTest};
use crate::expr::{Expr, NodePath};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OutsideReason {
    AdditiveCancellation,
    SubtractiveCancellation,
    PowerOfNonPositive,
    DivisionByZeroExpression,
}

impl OutsideReason {
    pub fn as_str(self) -> &'static str {
        match self {
            OutsideReason::AdditiveCancellation => "additive-cancellation",
            OutsideReason::SubtractiveCancellation => "subtractive-cancellation",
            OutsideReason::PowerOfNonPositive => "power-of-non-positive",
            OutsideReason::DivisionByZeroExpression => "division-by-zero-expression",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MembershipStatus {
    Member,
    /// The literal constant `0`.
    ZeroConstant,
    Outside(OutsideReason),
    /// The coefficient at this node has no exact representation.
    Indeterminate(NodePath),
}

impl MembershipStatus {
    pub fn is_member(&self) -> bool {
        matches!(self, MembershipStatus::Member)
    }
}

impl fmt::Display for MembershipStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MembershipStatus::Member => write!(f, "member"),
            MembershipStatus::ZeroConstant => write!(f, "zero-constant"),
            MembershipStatus::Outside(r) => write!(f, "outside: {}", r.as_str()),
            MembershipStatus::Indeterminate(_) => write!(f, "indeterminate"),
        }
    }
}

/// Result of the attribute pass. `degree` and `coeff` are meaningful only
/// when `status` is [`MembershipStatus::Member`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attributes {
    pub degree: Rational,
    pub coeff: Coefficient,
    pub status: MembershipStatus,
}

impl Attributes {
    fn member(degree: Rational, coeff: Coefficient) -> Self {
        debug_assert_eq!(coeff.is_zero(), ZeroTest::NonZero);
        Attributes { degree, coeff, status: MembershipStatus::Member }
    }

    fn zero() -> Self {
        Attributes { degree: Rational::zero(), coeff: Coefficient::zero(), status: MembershipStatus::ZeroConstant }
    }

    fn failed(status: MembershipStatus) -> Self {
        Attributes { degree: Rational::zero(), coeff: Coefficient::zero(), status }
    }

    pub fn is_member(&self) -> bool {
        self.status.is_member()
    }

    fn is_zero_constant(&self) -> bool {
        self.status == MembershipStatus::ZeroConstant
    }

    fn is_failure(&self) -> bool {
        matches!(self.status, MembershipStatus::Outside(_) | MembershipStatus::Indeterminate(_))
    }
}

/// Computes degree, leading coefficient and membership for `e`.
pub fn analyze_attributes(e: &Expr) -> Attributes {
    analyze_at(e, &NodePath::root())
}

fn analyze_at(e: &Expr, path: &NodePath) -> Attributes {
    let kids: Vec<Attributes> =
        e.children().into_iter().enumerate().map(|(i, c)| analyze_at(c, &path.child(i as u8))).collect();
    apply_rule(e, &kids, path)
}

/// Applies the rule for the root of `e` given the attributes of its direct
/// children (in [`Expr::children`] order). Lets callers that build trees
/// bottom-up avoid re-analyzing whole subtrees.
pub fn node_attributes(e: &Expr, kids: &[Attributes]) -> Attributes {
    apply_rule(e, kids, &NodePath::root())
}

fn apply_rule(e: &Expr, kids: &[Attributes], path: &NodePath) -> Attributes {
    if let Some(bad) = kids.iter().find(|k| k.is_failure()) {
        return bad.clone();
    }
    match e {
        Expr::Const(a) => {
            if a.is_zero() {
                Attributes::zero()
            } else {
                Attributes::member(Rational::zero(), a.clone().into())
            }
        }
        Expr::Var => Attributes::member(Rational::one(), Coefficient::one()),
        Expr::Mul(..) => {
            let (l, r) = (&kids[0], &kids[1]);
            if l.is_zero_constant() || r.is_zero_constant() {
                return Attributes::zero();
            }
            Attributes::member(&l.degree + &r.degree, l.coeff.mul(&r.coeff))
        }
        Expr::Div(..) => {
            let (l, r) = (&kids[0], &kids[1]);
            if r.is_zero_constant() {
                return Attributes::failed(MembershipStatus::Outside(OutsideReason::DivisionByZeroExpression));
            }
            if l.is_zero_constant() {
                return Attributes::zero();
            }
            let c = l.coeff.div(&r.coeff).expect("member coefficients are nonzero");
            Attributes::member(&l.degree - &r.degree, c)
        }
        Expr::Pow(base, alpha) => pow_rule(base, alpha, &kids[0], path),
        Expr::Add(..) => sum_rule(&kids[0], &kids[1], false),
        Expr::Sub(..) => sum_rule(&kids[0], &kids[1], true),
    }
}

fn pow_rule(base: &Expr, alpha: &Rational, b: &Attributes, path: &NodePath) -> Attributes {
    if alpha.is_zero() {
        return if b.is_zero_constant() {
            Attributes::failed(MembershipStatus::Outside(OutsideReason::PowerOfNonPositive))
        } else {
            Attributes::member(Rational::zero(), Coefficient::one())
        };
    }
    if b.is_zero_constant() {
        return if alpha.is_positive() {
            Attributes::zero()
        } else {
            Attributes::failed(MembershipStatus::Outside(OutsideReason::DivisionByZeroExpression))
        };
    }
    // A fractional power of a sum that itself carries fractional powers is a
    // nested radical; its lower-order behaviour has no representation here.
    if !alpha.is_integer() && matches!(base, Expr::Add(..) | Expr::Sub(..)) && base.has_fractional_power() {
        return Attributes::failed(MembershipStatus::Indeterminate(path.clone()));
    }
    match b.coeff.pow(alpha) {
        Ok(c) => Attributes::member(&b.degree * alpha, c),
        Err(CoefficientError::NonPositiveBase) => {
            Attributes::failed(MembershipStatus::Outside(OutsideReason::PowerOfNonPositive))
        }
        Err(_) => Attributes::failed(MembershipStatus::Indeterminate(path.clone())),
    }
}

fn sum_rule(l: &Attributes, r: &Attributes, subtract: bool) -> Attributes {
    let rc = if subtract { r.coeff.neg() } else { r.coeff.clone() };
    match (l.is_zero_constant(), r.is_zero_constant()) {
        (true, true) => return Attributes::zero(),
        (true, false) => return Attributes::member(r.degree.clone(), rc),
        (false, true) => return l.clone(),
        (false, false) => {}
    }
    if l.degree > r.degree {
        Attributes::member(l.degree.clone(), l.coeff.clone())
    } else if r.degree > l.degree {
        Attributes::member(r.degree.clone(), rc)
    } else {
        let c = l.coeff.add(&rc);
        match c.is_zero() {
            ZeroTest::NonZero => Attributes::member(l.degree.clone(), c),
            _ => Attributes::failed(MembershipStatus::Outside(if subtract {
                OutsideReason::SubtractiveCancellation
            } else {
                OutsideReason::AdditiveCancellation
            })),
        }
    }
}

/// Smallest degree difference between the two sides of any sum or difference
/// whose sides have different degrees. `None` when no such node exists or
/// the expression is not a member.
///
/// The subdominant side decays relative to the dominant one like
/// `n^(-gap)`, so this bounds how fast `E(n) / n^r` settles.
pub fn min_degree_gap(e: &Expr) -> Option<Rational> {
    fn go(e: &Expr, best: &mut Option<Rational>) -> Option<Attributes> {
        let kids: Vec<Attributes> = e.children().into_iter().map(|c| go(c, best)).collect::<Option<_>>()?;
        if let (Expr::Add(..) | Expr::Sub(..), [l, r]) = (e, kids.as_slice()) {
            if l.is_member() && r.is_member() && l.degree != r.degree {
                let g = (&l.degree - &r.degree).abs();
                if best.as_ref().is_none_or(|b| g < *b) {
                    *best = Some(g);
                }
            }
        }
        let a = node_attributes(e, &kids);
        (!a.is_failure()).then_some(a)
    }
    let mut best = None;
    go(e, &mut best)?.is_member().then_some(())?;
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn sqrt(e: Expr) -> Expr {
        Expr::pow(e, ratio(1, 2))
    }

    #[test]
    fn base_cases() {
        let a = analyze_attributes(&Expr::Var);
        assert_eq!(a.degree, int(1));
        assert_eq!(a.coeff, Coefficient::one());
        assert!(a.is_member());
        let a = analyze_attributes(&Expr::Const(ratio(-3, 4)));
        assert_eq!(a.degree, int(0));
        assert_eq!(a.coeff, ratio(-3, 4).into());
        assert_eq!(analyze_attributes(&Expr::int(0)).status, MembershipStatus::ZeroConstant);
    }

    #[test]
    fn cancellation_is_outside() {
        let e = Expr::sub(Expr::Var, Expr::Var);
        assert_eq!(analyze_attributes(&e).status, MembershipStatus::Outside(OutsideReason::SubtractiveCancellation));
        let e = Expr::add(Expr::Var, Expr::negate(Expr::Var));
        assert_eq!(analyze_attributes(&e).status, MembershipStatus::Outside(OutsideReason::AdditiveCancellation));
        // failure propagates through later nodes
        let e = Expr::mul(Expr::int(3), Expr::sub(Expr::Var, Expr::Var));
        assert_eq!(analyze_attributes(&e).status, MembershipStatus::Outside(OutsideReason::SubtractiveCancellation));
    }

    #[test]
    fn negation_is_member() {
        let a = analyze_attributes(&Expr::negate(Expr::Var));
        assert!(a.is_member());
        assert_eq!(a.coeff, int(-1).into());
        let a = analyze_attributes(&Expr::negate(Expr::int(5)));
        assert_eq!(a.coeff, int(-5).into());
    }

    #[test]
    fn zero_constant_rules() {
        let z = || Expr::int(0);
        assert_eq!(
            analyze_attributes(&Expr::div(Expr::Var, z())).status,
            MembershipStatus::Outside(OutsideReason::DivisionByZeroExpression)
        );
        assert_eq!(analyze_attributes(&Expr::mul(Expr::Var, z())).status, MembershipStatus::ZeroConstant);
        assert_eq!(analyze_attributes(&Expr::div(z(), Expr::Var)).status, MembershipStatus::ZeroConstant);
        assert_eq!(analyze_attributes(&Expr::pow(z(), ratio(1, 2))).status, MembershipStatus::ZeroConstant);
        assert_eq!(
            analyze_attributes(&Expr::pow(z(), int(-1))).status,
            MembershipStatus::Outside(OutsideReason::DivisionByZeroExpression)
        );
        assert_eq!(analyze_attributes(&Expr::sub(z(), z())).status, MembershipStatus::ZeroConstant);
    }

    #[test]
    fn powers() {
        // (n - 7)^3: negative-constant subterm, integer exponent
        let e = Expr::pow(Expr::sub(Expr::Var, Expr::int(7)), int(3));
        let a = analyze_attributes(&e);
        assert_eq!((a.degree, a.coeff), (int(3), Coefficient::one()));
        // (7 - n)^(1/2) is eventually negative under an even root
        let e = sqrt(Expr::sub(Expr::int(7), Expr::Var));
        assert_eq!(analyze_attributes(&e).status, MembershipStatus::Outside(OutsideReason::PowerOfNonPositive));
        // (7 - n)^(1/3) is a real odd root
        let e = Expr::pow(Expr::sub(Expr::int(7), Expr::Var), ratio(1, 3));
        let a = analyze_attributes(&e);
        assert!(a.is_member());
        assert_eq!(a.coeff, int(-1).into());
        // sqrt(2n) has coefficient 2^(1/2)
        let a = analyze_attributes(&sqrt(Expr::mul(Expr::int(2), Expr::Var)));
        assert_eq!(a.coeff.to_string(), "2^(1/2)");
        assert_eq!(a.degree, ratio(1, 2));
    }

    #[test]
    fn nested_radical_of_sum_is_indeterminate() {
        let inner = Expr::add(Expr::int(1), sqrt(Expr::Var));
        let e = Expr::mul(Expr::int(2), sqrt(inner));
        assert_eq!(analyze_attributes(&e).status, MembershipStatus::Indeterminate(NodePath(vec![1])));
    }

    #[test]
    fn multi_term_coefficient_power_is_indeterminate() {
        // sqrt(2)*n + n has coefficient 1 + sqrt 2; its square root is not representable
        let base = Expr::add(Expr::mul(sqrt(Expr::int(2)), Expr::Var), Expr::Var);
        let e = Expr::pow(base.clone(), ratio(1, 2));
        assert_eq!(analyze_attributes(&e).status, MembershipStatus::Indeterminate(NodePath::root()));
        // integer powers and division are fine
        let a = analyze_attributes(&Expr::div(Expr::int(1), Expr::pow(base, int(2))));
        assert!(a.is_member());
        assert_eq!(a.degree, int(-2));
    }

    #[test]
    fn degree_gap() {
        let e = Expr::sub(Expr::pow(Expr::Var, ratio(2, 5)), Expr::int(17));
        assert_eq!(min_degree_gap(&e), Some(ratio(2, 5)));
        assert_eq!(min_degree_gap(&Expr::Var), None);
        assert_eq!(min_degree_gap(&Expr::sub(Expr::Var, Expr::Var)), None);
    }
}
