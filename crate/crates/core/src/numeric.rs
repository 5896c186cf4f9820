//! Floating-point evaluation and the numerical oracles.
//!
//! None of this decides anything; it exists to cross-check the symbolic
//! verdicts. Evaluation is plain IEEE double with the same real-valued
//! domain rules used by the exact pointwise evaluator: odd roots of negative
//! numbers are allowed, even roots of negatives and division by zero are
//! domain errors.

use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

use crate::expr::{Expr, NodePath};
use crate::rational::{to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("expression undefined at n = {n} (node {path})")]
    Domain { n: u64, path: NodePath },
    #[error("expression is exactly zero at n = {n}")]
    ZeroSample { n: u64 },
    #[error("invalid range or grid: {0}")]
    BadRange(&'static str),
}

#[derive(Debug, Clone)]
enum Op {
    Const(f64),
    Var,
    Mul,
    Div(u32),
    Add,
    Sub,
    Pow { alpha: f64, int: Option<i32>, odd_den: bool, odd_num: bool, node: u32 },
}

/// Postfix form of an expression for repeated evaluation.
#[derive(Debug, Clone)]
pub struct Compiled {
    ops: Vec<Op>,
    paths: Vec<NodePath>,
}

impl Compiled {
    pub fn new(e: &Expr) -> Self {
        let mut c = Compiled { ops: Vec::new(), paths: Vec::new() };
        c.emit(e, NodePath::root());
        c
    }

    fn emit(&mut self, e: &Expr, path: NodePath) {
        for (i, child) in e.children().into_iter().enumerate() {
            self.emit(child, path.child(i as u8));
        }
        let op = match e {
            Expr::Const(v) => Op::Const(to_f64(v)),
            Expr::Var => Op::Var,
            Expr::Mul(..) => Op::Mul,
            Expr::Add(..) => Op::Add,
            Expr::Sub(..) => Op::Sub,
            Expr::Div(..) => {
                self.paths.push(path);
                Op::Div(self.paths.len() as u32 - 1)
            }
            Expr::Pow(_, a) => {
                self.paths.push(path);
                Op::Pow {
                    alpha: to_f64(a),
                    int: if a.is_integer() { a.to_integer().to_i32() } else { None },
                    odd_den: a.denom().bit(0),
                    odd_num: a.numer().abs().bit(0),
                    node: self.paths.len() as u32 - 1,
                }
            }
        };
        self.ops.push(op);
    }

    pub fn eval(&self, n: u64) -> Result<f64, NumericError> {
        let x = n as f64;
        let mut stack: Vec<f64> = Vec::with_capacity(16);
        for op in &self.ops {
            let v = match *op {
                Op::Const(c) => c,
                Op::Var => x,
                Op::Mul | Op::Add | Op::Sub | Op::Div(_) => {
                    let b = stack.pop().expect("operand");
                    let a = stack.pop().expect("operand");
                    match *op {
                        Op::Mul => a * b,
                        Op::Add => a + b,
                        Op::Sub => a - b,
                        Op::Div(node) => {
                            if b == 0.0 {
                                return Err(self.domain(n, node));
                            }
                            a / b
                        }
                        _ => unreachable!(),
                    }
                }
                Op::Pow { alpha, int, odd_den, odd_num, node } => {
                    let b = stack.pop().expect("operand");
                    real_pow(b, alpha, int, odd_den, odd_num).ok_or_else(|| self.domain(n, node))?
                }
            };
            stack.push(v);
        }
        Ok(stack.pop().expect("result"))
    }

    fn domain(&self, n: u64, node: u32) -> NumericError {
        NumericError::Domain { n, path: self.paths[node as usize].clone() }
    }
}

fn real_pow(b: f64, alpha: f64, int: Option<i32>, odd_den: bool, odd_num: bool) -> Option<f64> {
    if let Some(k) = int {
        if b == 0.0 && k < 0 {
            return None;
        }
        return Some(b.powi(k));
    }
    if b > 0.0 {
        Some((alpha * b.ln()).exp())
    } else if b == 0.0 {
        (alpha > 0.0).then_some(0.0)
    } else if odd_den {
        let m = (alpha * (-b).ln()).exp();
        Some(if odd_num { -m } else { m })
    } else {
        None
    }
}

pub fn eval_at(e: &Expr, n: u64) -> Result<f64, NumericError> {
    Compiled::new(e).eval(n)
}

/// Neumaier's variant of compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `sum_{n=from}^{to} E(n)` in ascending order with compensation.
pub fn partial_sum(e: &Expr, from: u64, to: u64) -> Result<f64, NumericError> {
    if from == 0 || from > to {
        return Err(NumericError::BadRange("need 1 <= from <= to"));
    }
    sum_range(&Compiled::new(e), from, to)
}

fn sum_range(c: &Compiled, from: u64, to: u64) -> Result<f64, NumericError> {
    let mut acc = CompensatedSum::default();
    for n in from..=to {
        acc.add(c.eval(n)?);
    }
    Ok(acc.value())
}

/// Up to `points` integers spread geometrically over `[lo, hi]`, deduplicated.
pub fn geometric_grid(lo: u64, hi: u64, points: usize) -> Vec<u64> {
    if points <= 1 || lo >= hi {
        return vec![lo];
    }
    let (a, b) = ((lo as f64).ln(), (hi as f64).ln());
    let mut out: Vec<u64> = (0..points)
        .map(|i| {
            let t = i as f64 / (points - 1) as f64;
            ((a + t * (b - a)).exp().round() as u64).clamp(lo, hi)
        })
        .collect();
    out.dedup();
    out
}

/// Least-squares slope of `ln|E(n)|` against `ln n` over a geometric grid,
/// with the RMS residual of the fit.
pub fn estimate_degree(e: &Expr, n_lo: u64, n_hi: u64, points: usize) -> Result<(f64, f64), NumericError> {
    if n_lo == 0 || n_lo >= n_hi || points < 2 {
        return Err(NumericError::BadRange("need 1 <= lo < hi and at least 2 points"));
    }
    let c = Compiled::new(e);
    let mut xs = Vec::with_capacity(points);
    let mut ys = Vec::with_capacity(points);
    for n in geometric_grid(n_lo, n_hi, points) {
        let v = c.eval(n)?;
        if v == 0.0 {
            return Err(NumericError::ZeroSample { n });
        }
        xs.push((n as f64).ln());
        ys.push(v.abs().ln());
    }
    Ok(fit_line(&xs, &ys))
}

/// Ordinary least squares; returns `(slope, rms residual)`.
fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let icept = my - slope * mx;
    let rss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - icept - slope * x).powi(2)).sum();
    (slope, (rss / m).sqrt())
}

/// `E(n) / n^r`, with `n^r` computed as `exp(r ln n)`.
pub fn estimate_leading_coefficient(e: &Expr, r: &Rational, n: u64) -> Result<f64, NumericError> {
    let v = eval_at(e, n)?;
    Ok(v / (to_f64(r) * (n as f64).ln()).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictHint {
    ConsistentConvergent,
    ConsistentDivergent,
    Inconclusive,
}

impl VerdictHint {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictHint::ConsistentConvergent => "consistent-convergent",
            VerdictHint::ConsistentDivergent => "consistent-divergent",
            VerdictHint::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    /// First summation index used.
    pub start: u64,
    pub estimated_degree: f64,
    pub degree_residual: f64,
    pub estimated_coeff: f64,
    /// `(cutoff, sum_{start..=cutoff} E(n))`, strictly increasing in cutoff.
    pub cutoff_sums: Vec<(u64, f64)>,
    /// `sum` over each `(previous cutoff, cutoff]`.
    pub deltas: Vec<f64>,
    /// Growth exponent `s` of the tail implied by the last pair of deltas,
    /// i.e. partial sums behave like `n^s`; `s = r + 1` for a power law.
    pub tail_exponent: Option<f64>,
    pub verdict_hint: VerdictHint,
}

/// Tail exponents at or below this read as convergent.
pub const CONVERGENT_TAIL_MAX: f64 = -0.05;
/// Tail exponents at or above this read as divergent (`r >= -1` up to noise).
pub const DIVERGENT_TAIL_MIN: f64 = -0.02;

/// Partial sums from `start` at each cutoff and an empirical convergence
/// hint. Cutoffs at or below `start` are ignored.
pub fn convergence_probe(e: &Expr, start: u64, cutoffs: &[u64]) -> Result<ProbeReport, NumericError> {
    if start == 0 {
        return Err(NumericError::BadRange("start must be positive"));
    }
    if cutoffs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(NumericError::BadRange("cutoffs must be strictly increasing"));
    }
    let cutoffs: Vec<u64> = cutoffs.iter().copied().filter(|&c| c > start).collect();
    if cutoffs.is_empty() {
        return Err(NumericError::BadRange("no cutoff beyond the summation start"));
    }
    let c = Compiled::new(e);
    let mut segments = Vec::with_capacity(cutoffs.len());
    let mut prev = start - 1;
    for &cut in &cutoffs {
        segments.push(sum_range(&c, prev + 1, cut)?);
        prev = cut;
    }
    let mut cutoff_sums = Vec::with_capacity(cutoffs.len());
    let mut running = CompensatedSum::default();
    for (&cut, &seg) in cutoffs.iter().zip(&segments) {
        running.add(seg);
        cutoff_sums.push((cut, running.value()));
    }
    let deltas = segments[1..].to_vec();

    let last = *cutoffs.last().unwrap();
    let lo = cutoffs[0].max(start);
    let (estimated_degree, degree_residual) =
        if last > lo { estimate_degree(e, lo, last, 16).unwrap_or((f64::NAN, f64::NAN)) } else { (f64::NAN, f64::NAN) };
    let estimated_coeff = c.eval(last)? / (estimated_degree * (last as f64).ln()).exp();

    let mut tail_exponent = None;
    let mut verdict_hint = VerdictHint::Inconclusive;
    if deltas.len() >= 2 {
        let same_sign = deltas.iter().all(|d| *d > 0.0) || deltas.iter().all(|d| *d < 0.0);
        let k = cutoffs.len();
        let s = tail_exponent_from(
            [cutoffs[k - 3] as f64, cutoffs[k - 2] as f64, cutoffs[k - 1] as f64],
            deltas[deltas.len() - 2],
            deltas[deltas.len() - 1],
        );
        tail_exponent = s;
        if let (true, Some(s)) = (same_sign, s) {
            verdict_hint = if s <= CONVERGENT_TAIL_MAX {
                VerdictHint::ConsistentConvergent
            } else if s >= DIVERGENT_TAIL_MIN {
                VerdictHint::ConsistentDivergent
            } else {
                VerdictHint::Inconclusive
            };
        }
    }
    Ok(ProbeReport {
        start,
        estimated_degree,
        degree_residual,
        estimated_coeff,
        cutoff_sums,
        deltas,
        tail_exponent,
        verdict_hint,
    })
}

/// Solves `(c^s - b^s) / (b^s - a^s) = d2 / d1` for `s`, the exponent for
/// which a sum growing like `n^s` (or `ln n` at `s = 0`) reproduces the
/// observed ratio of consecutive deltas.
fn tail_exponent_from([a, b, c]: [f64; 3], d1: f64, d2: f64) -> Option<f64> {
    let target = d2 / d1;
    if !(target.is_finite() && target > 0.0) {
        return None;
    }
    let ratio = |s: f64| {
        if s.abs() < 1e-9 {
            (c / b).ln() / (b / a).ln()
        } else {
            (c.powf(s) - b.powf(s)) / (b.powf(s) - a.powf(s))
        }
    };
    // ratio is increasing in s
    let (mut lo, mut hi) = (-20.0f64, 20.0f64);
    if target <= ratio(lo) || target >= ratio(hi) {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ratio(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}
