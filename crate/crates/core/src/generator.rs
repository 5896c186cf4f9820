//! Seeded random members of the expression family.
//!
//! Trees are grown bottom-up with the same rules the attribute pass uses;
//! any node that would cancel, become indeterminate, leave the degree bounds
//! or violate the degree-gap floor is redrawn.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::attributes::{node_attributes, Attributes};
use crate::expr::{Expr, NodeKind};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub seed: u64,
    pub max_depth: u32,
    /// Constants are drawn from `[-constant_bound, constant_bound]`.
    pub constant_bound: i64,
    pub constant_denominator_max: i64,
    pub exponent_denominator_max: i64,
    /// Every sum or difference of unequal degrees must have sides at least
    /// this far apart.
    pub min_degree_gap: Rational,
    /// Inclusive bounds on the degree of every generated node.
    pub degree_bounds: (Rational, Rational),
    /// Redraws allowed per node before giving up.
    pub retry_budget: u32,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 0,
            max_depth: 5,
            constant_bound: 100,
            constant_denominator_max: 10,
            exponent_denominator_max: 6,
            min_degree_gap: int(0),
            degree_bounds: (int(-3), int(3)),
            retry_budget: 1000,
        }
    }
}

impl GenConfig {
    pub fn with_seed(seed: u64) -> Self {
        GenConfig { seed, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("retry budget exhausted after {0} rejected draws")]
    RetryBudgetExhausted(u32),
    #[error("invalid generator configuration: {0}")]
    InvalidConfig(&'static str),
}

const KINDS: [NodeKind; 7] =
    [NodeKind::Const, NodeKind::Var, NodeKind::Mul, NodeKind::Div, NodeKind::Pow, NodeKind::Add, NodeKind::Sub];

struct Gen<'a> {
    cfg: &'a GenConfig,
    rng: ChaCha8Rng,
}

impl Gen<'_> {
    fn constant(&mut self) -> Rational {
        let den = self.rng.random_range(1..=self.cfg.constant_denominator_max.max(1));
        let bound = self.cfg.constant_bound * den;
        loop {
            let num = self.rng.random_range(-bound..=bound);
            if num != 0 {
                return Rational::new(num.into(), den.into());
            }
        }
    }

    fn exponent(&mut self) -> Rational {
        let den = self.rng.random_range(1..=self.cfg.exponent_denominator_max.max(1));
        loop {
            let num = self.rng.random_range(-2 * den..=2 * den);
            if num != 0 {
                return Rational::new(num.into(), den.into());
            }
        }
    }

    fn acceptable(&self, e: &Expr, kids: &[Attributes], a: &Attributes) -> bool {
        if !a.is_member() {
            return false;
        }
        let (lo, hi) = &self.cfg.degree_bounds;
        if a.degree < *lo || a.degree > *hi {
            return false;
        }
        if let (Expr::Add(..) | Expr::Sub(..), [l, r]) = (e, kids) {
            if l.degree != r.degree {
                let gap = if l.degree > r.degree { &l.degree - &r.degree } else { &r.degree - &l.degree };
                if gap < self.cfg.min_degree_gap {
                    return false;
                }
            }
        }
        true
    }

    fn node(&mut self, depth: u32) -> Result<(Expr, Attributes), GenError> {
        for _ in 0..self.cfg.retry_budget {
            let kind = if depth == 0 {
                if self.rng.random_bool(0.5) {
                    NodeKind::Var
                } else {
                    NodeKind::Const
                }
            } else {
                *KINDS.choose(&mut self.rng).expect("non-empty")
            };
            let (e, kids) = match kind {
                NodeKind::Const | NodeKind::Var => {
                    let e = if kind == NodeKind::Var { Expr::Var } else { Expr::Const(self.constant()) };
                    (e, vec![])
                }
                NodeKind::Pow => {
                    let (b, ba) = self.node(depth - 1)?;
                    (Expr::pow(b, self.exponent()), vec![ba])
                }
                _ => {
                    let (l, la) = self.node(depth - 1)?;
                    let (r, ra) = self.node(depth - 1)?;
                    let e = match kind {
                        NodeKind::Mul => Expr::mul(l, r),
                        NodeKind::Div => Expr::div(l, r),
                        NodeKind::Add => Expr::add(l, r),
                        _ => Expr::sub(l, r),
                    };
                    (e, vec![la, ra])
                }
            };
            let a = node_attributes(&e, &kids);
            if self.acceptable(&e, &kids, &a) {
                return Ok((e, a));
            }
        }
        Err(GenError::RetryBudgetExhausted(self.cfg.retry_budget))
    }

    /// Polynomial of exact degree `deg` with positive leading coefficient,
    /// in Horner form.
    fn polynomial(&mut self, deg: u64) -> Expr {
        let positive = |g: &mut Self| loop {
            let c = g.constant();
            if c > int(0) {
                return c;
            }
        };
        let mut acc = Expr::Const(positive(self));
        for _ in 0..deg {
            acc = Expr::mul(acc, Expr::Var);
            // about a third of the lower coefficients are zero
            if self.rng.random_bool(2.0 / 3.0) {
                acc = Expr::add(acc, Expr::Const(self.constant()));
            }
        }
        acc
    }
}

fn validate(cfg: &GenConfig) -> Result<(), GenError> {
    if cfg.degree_bounds.0 > cfg.degree_bounds.1 {
        return Err(GenError::InvalidConfig("empty degree bounds"));
    }
    if cfg.constant_bound < 1 {
        return Err(GenError::InvalidConfig("constant bound must be at least 1"));
    }
    Ok(())
}

/// A random family member; the same config always yields the same tree.
pub fn generate_member(cfg: &GenConfig) -> Result<Expr, GenError> {
    validate(cfg)?;
    let mut g = Gen { cfg, rng: ChaCha8Rng::seed_from_u64(cfg.seed) };
    Ok(g.node(cfg.max_depth)?.0)
}

/// `count` members drawn from one stream seeded by `cfg.seed`.
pub fn generate_members(cfg: &GenConfig, count: usize) -> Result<Vec<Expr>, GenError> {
    validate(cfg)?;
    let mut g = Gen { cfg, rng: ChaCha8Rng::seed_from_u64(cfg.seed) };
    (0..count).map(|_| g.node(cfg.max_depth).map(|(e, _)| e)).collect()
}

/// `root_k(P_q(n)) / root_h(R_s(n))` with random polynomials of exact
/// degrees `q` and `s`, positive leading coefficients.
pub fn generate_radical_quotient(cfg: &GenConfig, q: u64, k: u64, s: u64, h: u64) -> Result<Expr, GenError> {
    if k == 0 || h == 0 {
        return Err(GenError::InvalidConfig("root indices must be positive"));
    }
    validate(cfg)?;
    let mut g = Gen { cfg, rng: ChaCha8Rng::seed_from_u64(cfg.seed) };
    let p = g.polynomial(q);
    let r = g.polynomial(s);
    Ok(Expr::div(Expr::pow(p, Rational::new(1.into(), k.into())), Expr::pow(r, Rational::new(1.into(), h.into()))))
}
