//! Expression trees over the single variable `n`.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::rational::Rational;

/// Immutable expression tree. Exponents are rational literals, never
/// sub-expressions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Const(Rational),
    Var,
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Rational),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
}

/// Coarse node classification, handy for coverage statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeKind {
    Const,
    Var,
    Mul,
    Div,
    Pow,
    Add,
    Sub,
}

/// Location of a node: child indices from the root (`0` = left / base /
/// numerator, `1` = right / denominator).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct NodePath(pub Vec<u8>);

impl NodePath {
    pub fn root() -> Self {
        Self::default()
    }

    pub fn child(&self, i: u8) -> Self {
        let mut v = self.0.clone();
        v.push(i);
        NodePath(v)
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "/");
        }
        for i in &self.0 {
            write!(f, "/{i}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("root index must be at least 1")]
pub struct ZeroRootIndex;

#[allow(clippy::should_implement_trait)] // constructors, not operators
impl Expr {
    pub fn constant(v: Rational) -> Self {
        Expr::Const(v)
    }

    pub fn int(v: i64) -> Self {
        Expr::Const(crate::rational::int(v))
    }

    pub fn var() -> Self {
        Expr::Var
    }

    pub fn mul(a: Expr, b: Expr) -> Self {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: Expr, b: Expr) -> Self {
        Expr::Div(Box::new(a), Box::new(b))
    }

    pub fn pow(a: Expr, e: Rational) -> Self {
        Expr::Pow(Box::new(a), e)
    }

    pub fn add(a: Expr, b: Expr) -> Self {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Self {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    /// `0 - e`, the in-family negation.
    pub fn negate(e: Expr) -> Self {
        Expr::sub(Expr::Const(Rational::zero()), e)
    }

    pub fn kind(&self) -> NodeKind {
        match self {
            Expr::Const(_) => NodeKind::Const,
            Expr::Var => NodeKind::Var,
            Expr::Mul(..) => NodeKind::Mul,
            Expr::Div(..) => NodeKind::Div,
            Expr::Pow(..) => NodeKind::Pow,
            Expr::Add(..) => NodeKind::Add,
            Expr::Sub(..) => NodeKind::Sub,
        }
    }

    pub fn children(&self) -> Vec<&Expr> {
        match self {
            Expr::Const(_) | Expr::Var => vec![],
            Expr::Pow(b, _) => vec![b],
            Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Add(a, b) | Expr::Sub(a, b) => vec![a, b],
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children().iter().map(|c| c.node_count()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    /// Visits every node in pre-order.
    pub fn walk(&self, f: &mut impl FnMut(&Expr)) {
        f(self);
        for c in self.children() {
            c.walk(f);
        }
    }

    pub fn at(&self, path: &NodePath) -> Option<&Expr> {
        let mut cur = self;
        for &i in &path.0 {
            cur = *cur.children().get(i as usize)?;
        }
        Some(cur)
    }

    /// True if the tree contains a power whose exponent is not an integer.
    pub fn has_fractional_power(&self) -> bool {
        let mut found = false;
        self.walk(&mut |e| {
            if let Expr::Pow(_, a) = e {
                found |= !a.is_integer();
            }
        });
        found
    }
}

/// `k`-th root as a rational power.
pub fn desugar_root(k: u64, e: Expr) -> Result<Expr, ZeroRootIndex> {
    if k == 0 {
        return Err(ZeroRootIndex);
    }
    Ok(Expr::pow(e, Rational::new(One::one(), k.into())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn roots_desugar() {
        assert_eq!(
            desugar_root(2, Expr::add(Expr::Var, Expr::int(1))).unwrap(),
            Expr::pow(Expr::add(Expr::Var, Expr::int(1)), ratio(1, 2))
        );
        assert_eq!(desugar_root(1, Expr::Var).unwrap(), Expr::pow(Expr::Var, ratio(1, 1)));
        assert_eq!(
            desugar_root(3, Expr::sub(Expr::Var, Expr::int(7))).unwrap(),
            Expr::pow(Expr::sub(Expr::Var, Expr::int(7)), ratio(1, 3))
        );
        assert_eq!(desugar_root(0, Expr::Var), Err(ZeroRootIndex));
    }

    #[test]
    fn paths_address_nodes() {
        let e = Expr::div(Expr::Var, Expr::pow(Expr::Var, ratio(1, 2)));
        assert_eq!(e.at(&NodePath(vec![1, 0])), Some(&Expr::Var));
        assert_eq!(e.at(&NodePath(vec![0, 0])), None);
        assert_eq!(NodePath(vec![1, 0]).to_string(), "/1/0");
        assert_eq!(e.node_count(), 4);
        assert_eq!(e.depth(), 3);
    }
}
