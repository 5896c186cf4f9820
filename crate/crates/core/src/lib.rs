//! Convergence of series over a recursive family of radical expressions.
//!
//! Expressions in `n` built from rational constants, `n` itself, products,
//! quotients, rational powers and non-cancelling sums carry an exact degree
//! `r` and leading coefficient `c` with `E(n) ~ c * n^r`. The series
//! `sum E(n)` then converges absolutely iff `r < -1`. This crate computes
//! those attributes exactly, classifies the series, and ships numerical
//! oracles (log-log slope fits, limit ratios, partial sums) to check the
//! symbolic results.
//!
//! ```
//! use serconv::{classify, parse, Verdict};
//!
//! let e = parse("(sqrt(n+1)*root(3,n-7)+2)/(n^(2/5)-17)").unwrap();
//! let c = classify(&e);
//! assert_eq!(c.verdict, Verdict::Divergent);
//! assert_eq!(c.degree.unwrap().to_string(), "13/30");
//! ```

pub mod analysis;
pub mod attributes;
pub mod coefficient;
pub mod expr;
pub mod generator;
pub mod interval;
pub mod numeric;
pub mod parser;
pub mod pointwise;
pub mod primes;
pub mod rational;

pub use analysis::{
    classify, classify_radical_quotient, classify_reciprocal_polynomial, find_domain, Classification, DomainReport,
    DomainSearchError, Sign, Verdict,
};
pub use attributes::{analyze_attributes, min_degree_gap, Attributes, MembershipStatus, OutsideReason};
pub use coefficient::{Coefficient, CoefficientError, ZeroTest};
pub use expr::{desugar_root, Expr, NodeKind, NodePath};
pub use generator::{generate_member, generate_members, generate_radical_quotient, GenConfig, GenError};
pub use numeric::{
    convergence_probe, estimate_degree, estimate_leading_coefficient, eval_at, partial_sum, NumericError, ProbeReport,
    VerdictHint,
};
pub use parser::{format, parse, tokenize, ParseError, Token, TokenKind};
pub use rational::Rational;

/// Zero test on a canonical coefficient.
pub fn coefficient_is_zero(c: &Coefficient) -> ZeroTest {
    c.is_zero()
}
