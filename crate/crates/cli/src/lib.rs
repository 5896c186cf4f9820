//! Command-line front end: `analyze`, `verify`, `sum` and `generate`.
//!
//! Exit codes: 0 success, 1 parse or domain error, 2 expression outside the
//! family, 3 indeterminate membership, 4 a numeric oracle disagrees with the
//! symbolic result, 5 the generator ran out of retries.

use std::io::Write;

use clap::{Args, Parser, Subcommand};
use serconv::analysis::{DEFAULT_N_MAX, DEFAULT_WINDOW};
use serconv::rational::{from_decimal, to_f64, Rational};
use serconv::{
    analyze_attributes, classify, convergence_probe, estimate_degree, estimate_leading_coefficient, find_domain,
    generate_members, min_degree_gap, parse, partial_sum, Attributes, Expr, GenConfig, GenError, MembershipStatus,
    Verdict, VerdictHint,
};

mod document;

pub use document::{AnalysisDocument, Degree, LeadingCoefficient};

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_OUTSIDE: u8 = 2;
pub const EXIT_INDETERMINATE: u8 = 3;
pub const EXIT_DISAGREE: u8 = 4;
pub const EXIT_RETRIES: u8 = 5;

#[derive(Debug, Parser)]
#[command(name = "serconv", version, about = "Convergence of series over radical expressions in n")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Degree, leading coefficient, membership and verdict for an expression.
    Analyze(AnalyzeArgs),
    /// Check the symbolic result against the numeric oracles.
    Verify(VerifyArgs),
    /// Compensated partial sum over an index range.
    Sum(SumArgs),
    /// Random family members, one per line.
    Generate(GenerateArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Expression in `n`, e.g. `(n+1)^(1/2)/n^2`.
    #[arg(allow_hyphen_values = true)]
    pub expr: String,
    /// First index considered by the domain search.
    #[arg(long, default_value_t = 1, value_parser = parse_count)]
    pub n0: u64,
    /// Consecutive points (beyond the first) that must agree.
    #[arg(long, default_value_t = DEFAULT_WINDOW, value_parser = parse_count)]
    pub window: u64,
    #[arg(long, default_value_t = DEFAULT_N_MAX, value_parser = parse_count)]
    pub n_max: u64,
    /// Print the analysis as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Expression in `n`, e.g. `(n+1)^(1/2)/n^2`.
    #[arg(allow_hyphen_values = true)]
    pub expr: String,
    #[arg(long, default_value_t = 10_000, value_parser = parse_count)]
    pub grid_lo: u64,
    #[arg(long, default_value_t = 10_000_000, value_parser = parse_count)]
    pub grid_hi: u64,
    #[arg(long, default_value_t = 16)]
    pub points: usize,
    /// Comma-separated, increasing.
    #[arg(long, value_delimiter = ',', default_values_t = [10_000u64, 100_000, 1_000_000], value_parser = parse_count)]
    pub cutoffs: Vec<u64>,
}

#[derive(Debug, Args)]
pub struct SumArgs {
    /// Expression in `n`, e.g. `(n+1)^(1/2)/n^2`.
    #[arg(allow_hyphen_values = true)]
    pub expr: String,
    #[arg(long, value_parser = parse_count)]
    pub from: u64,
    #[arg(long, value_parser = parse_count)]
    pub to: u64,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 5)]
    pub depth: u32,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    /// Minimum degree gap at sums of unequal degree, e.g. `1/2`.
    #[arg(long, default_value = "0", value_parser = parse_rational)]
    pub min_gap: Rational,
    /// Redraws allowed per node before giving up (exit code 5).
    #[arg(long, default_value_t = 1000)]
    pub retry_budget: u32,
}

/// Accepts `10000000`, `10_000_000` or `1e7`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    let plain = s.replace('_', "");
    if let Ok(v) = plain.parse::<u64>() {
        return Ok(v);
    }
    match plain.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v <= 9.007_199_254_740_992e15 => Ok(v as u64),
        _ => Err(format!("expected a non-negative integer, got `{s}`")),
    }
}

/// Accepts `p`, `p/q` or a finite decimal.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let bad = || format!("expected a rational such as 1/2, got `{s}`");
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(p.into(), q.into()));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !(int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()))
    {
        return Err(bad());
    }
    let int_part = if int_part.is_empty() { "0" } else { int_part };
    let v = from_decimal(int_part, frac_part).ok_or_else(bad)?;
    Ok(if neg { -v } else { v })
}

/// Runs one command, writing results to `out` and diagnostics to `err`;
/// returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let r = match cli.command {
        Command::Analyze(a) => analyze(&a, out, err),
        Command::Verify(a) => verify(&a, out, err),
        Command::Sum(a) => sum(&a, out, err),
        Command::Generate(a) => generate(&a, out, err),
    };
    r.unwrap_or_else(|e| {
        let _ = writeln!(err, "error: cannot write output: {e}");
        EXIT_ERROR
    })
}

fn parse_or_report(text: &str, err: &mut dyn Write) -> std::io::Result<Option<Expr>> {
    match parse(text) {
        Ok(e) => Ok(Some(e)),
        Err(e) => {
            writeln!(err, "{}", e.annotate(text))?;
            Ok(None)
        }
    }
}

fn status_code(status: &MembershipStatus) -> u8 {
    match status {
        MembershipStatus::Member | MembershipStatus::ZeroConstant => EXIT_OK,
        MembershipStatus::Outside(_) => EXIT_OUTSIDE,
        MembershipStatus::Indeterminate(_) => EXIT_INDETERMINATE,
    }
}

fn describe_status(status: &MembershipStatus) -> String {
    match status {
        MembershipStatus::Indeterminate(path) => format!("indeterminate (at node {path})"),
        s => s.to_string(),
    }
}

/// Builds the analysis document; `None` for the domain fields when the
/// search finds no window (the reason goes to `warnings`).
pub fn analysis_document(
    text: &str,
    e: &Expr,
    n0: u64,
    window: u64,
    n_max: u64,
    warnings: &mut Vec<String>,
) -> AnalysisDocument {
    let a = analyze_attributes(e);
    let c = classify(e);
    let mut doc = AnalysisDocument::new(text, &a.status, &c.verdict);
    match a.status {
        MembershipStatus::Member => {
            doc.degree = Degree::from_rational(&a.degree);
            if doc.degree.is_none() {
                warnings.push(format!("degree {} does not fit the JSON integer fields", a.degree));
            }
            doc.leading_coefficient =
                Some(LeadingCoefficient { decimal: a.coeff.to_f64(), exact: a.coeff.to_string() });
            doc.coeff_sign = c.coeff_sign.map(|s| s.as_i8());
            match find_domain(e, n0, n_max, window) {
                Ok(r) => {
                    doc.n_defined = Some(r.n_defined);
                    doc.n_sign_stable = Some(r.n_sign_stable);
                }
                Err(err) => warnings.push(format!("domain search: {err}")),
            }
        }
        MembershipStatus::ZeroConstant => {
            doc.leading_coefficient = Some(LeadingCoefficient { decimal: 0.0, exact: "0".into() });
        }
        _ => {}
    }
    doc
}

fn analyze(args: &AnalyzeArgs, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<u8> {
    let Some(e) = parse_or_report(&args.expr, err)? else { return Ok(EXIT_ERROR) };
    let mut warnings = Vec::new();
    let doc = analysis_document(&args.expr, &e, args.n0, args.window, args.n_max, &mut warnings);
    for w in &warnings {
        writeln!(err, "warning: {w}")?;
    }
    if args.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("document serializes"))?;
    } else {
        write_report(&doc, &e, args.window, out)?;
    }
    Ok(status_code(&analyze_attributes(&e).status))
}

fn write_report(doc: &AnalysisDocument, e: &Expr, window: u64, out: &mut dyn Write) -> std::io::Result<()> {
    let a = analyze_attributes(e);
    writeln!(out, "expression      {}", serconv::parser::pretty(e))?;
    writeln!(out, "membership      {}", describe_status(&a.status))?;
    if a.is_member() {
        writeln!(out, "degree          {}", a.degree)?;
        writeln!(out, "coefficient     {} (~ {:.6})", a.coeff, a.coeff.to_f64())?;
    }
    writeln!(out, "classification  {}", doc.classification)?;
    if let (Some(d), Some(s)) = (doc.n_defined, doc.n_sign_stable) {
        let sign = if doc.coeff_sign == Some(1) { "+" } else { "-" };
        writeln!(out, "defined from    n = {d} (window {window})")?;
        writeln!(out, "sign {sign} from     n = {s} (finite scan, not a proof)")?;
    }
    Ok(())
}

fn nonmember_exit(a: &Attributes, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<Option<u8>> {
    match &a.status {
        MembershipStatus::Member => Ok(None),
        MembershipStatus::ZeroConstant => {
            writeln!(out, "zero series: every term is 0, nothing to verify")?;
            Ok(Some(EXIT_OK))
        }
        s => {
            writeln!(err, "error: not a family member: {}", describe_status(s))?;
            Ok(Some(status_code(s)))
        }
    }
}

/// Oracle tolerances widen when some sum has sides less than 1/2 apart in
/// degree, since the subdominant side only decays like `n^-gap`.
fn tolerances(e: &Expr) -> (f64, f64, &'static str) {
    let half = Rational::new(1.into(), 2.into());
    match min_degree_gap(e) {
        Some(g) if g < half => (0.2, 0.05, "degree gap below 1/2, loose tolerances"),
        _ => (0.05, 0.01, "tight tolerances"),
    }
}

fn verify(args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<u8> {
    let Some(e) = parse_or_report(&args.expr, err)? else { return Ok(EXIT_ERROR) };
    let a = analyze_attributes(&e);
    if let Some(code) = nonmember_exit(&a, out, err)? {
        return Ok(code);
    }
    let verdict = classify(&e).verdict;
    let dom = match find_domain(&e, 1, DEFAULT_N_MAX.max(args.grid_lo), DEFAULT_WINDOW) {
        Ok(d) => d,
        Err(e) => {
            writeln!(err, "error: domain search: {e}")?;
            return Ok(EXIT_ERROR);
        }
    };
    let (deg_tol, coeff_tol, label) = tolerances(&e);
    writeln!(out, "checks          {label}")?;
    let mut consistent = true;

    let grid_lo = args.grid_lo.max(dom.n_sign_stable);
    let r = to_f64(&a.degree);
    match estimate_degree(&e, grid_lo, args.grid_hi, args.points) {
        Ok((slope, _)) => {
            let ok = (slope - r).abs() <= deg_tol;
            consistent &= ok;
            writeln!(
                out,
                "degree          {} vs slope {slope:.5} on [{grid_lo}, {}]: {}",
                a.degree,
                args.grid_hi,
                mark(ok)
            )?;
        }
        Err(e) => {
            writeln!(err, "error: degree fit: {e}")?;
            return Ok(EXIT_ERROR);
        }
    }

    let c = a.coeff.to_f64();
    let n_coeff = args.grid_hi.saturating_mul(10);
    match estimate_leading_coefficient(&e, &a.degree, n_coeff) {
        Ok(v) => {
            let ok = ((v - c) / c).abs() <= coeff_tol;
            consistent &= ok;
            writeln!(out, "coefficient     {} ~ {c:.6} vs E(n)/n^r = {v:.6} at n = {n_coeff}: {}", a.coeff, mark(ok))?;
        }
        Err(e) => {
            writeln!(err, "error: coefficient estimate: {e}")?;
            return Ok(EXIT_ERROR);
        }
    }

    match convergence_probe(&e, dom.n_sign_stable, &args.cutoffs) {
        Ok(p) => {
            let ok = !matches!(
                (&verdict, p.verdict_hint),
                (Verdict::Divergent, VerdictHint::ConsistentConvergent)
                    | (Verdict::AbsolutelyConvergent, VerdictHint::ConsistentDivergent)
            );
            consistent &= ok;
            let tail = p.tail_exponent.map_or("n/a".to_string(), |s| format!("{s:.4}"));
            writeln!(
                out,
                "probe           {} from n = {}, tail exponent {tail}, theorem says {verdict}: {}",
                p.verdict_hint.as_str(),
                p.start,
                mark(ok)
            )?;
            for (cut, s) in &p.cutoff_sums {
                writeln!(out, "  S({cut}) = {s}")?;
            }
        }
        Err(e) => {
            writeln!(err, "error: probe: {e}")?;
            return Ok(EXIT_ERROR);
        }
    }
    writeln!(out, "result          {}", if consistent { "consistent" } else { "oracle disagreement" })?;
    Ok(if consistent { EXIT_OK } else { EXIT_DISAGREE })
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "MISMATCH"
    }
}

fn sum(args: &SumArgs, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<u8> {
    let Some(e) = parse_or_report(&args.expr, err)? else { return Ok(EXIT_ERROR) };
    match partial_sum(&e, args.from, args.to) {
        Ok(v) => {
            writeln!(out, "{v}")?;
            Ok(EXIT_OK)
        }
        Err(e) => {
            writeln!(err, "error: {e}")?;
            Ok(EXIT_ERROR)
        }
    }
}

fn generate(args: &GenerateArgs, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<u8> {
    let cfg = GenConfig {
        max_depth: args.depth,
        min_degree_gap: args.min_gap.clone(),
        retry_budget: args.retry_budget,
        ..GenConfig::with_seed(args.seed)
    };
    match generate_members(&cfg, args.count) {
        Ok(v) => {
            for e in v {
                writeln!(out, "{}", serconv::parser::pretty(&e))?;
            }
            Ok(EXIT_OK)
        }
        Err(e @ GenError::RetryBudgetExhausted(_)) => {
            writeln!(err, "error: {e}")?;
            Ok(EXIT_RETRIES)
        }
        Err(e) => {
            writeln!(err, "error: {e}")?;
            Ok(EXIT_ERROR)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(parse_count("1e7"), Ok(10_000_000));
        assert_eq!(parse_count("10_000"), Ok(10_000));
        assert_eq!(parse_count("64"), Ok(64));
        assert!(parse_count("1.5").is_err());
        assert!(parse_count("-3").is_err());
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("1/2"), Ok(Rational::new(1.into(), 2.into())));
        assert_eq!(parse_rational("0.25"), Ok(Rational::new(1.into(), 4.into())));
        assert_eq!(parse_rational("-3"), Ok(Rational::from_integer((-3).into())));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn gap_aware_tolerances() {
        assert_eq!(tolerances(&parse("1/n^2").unwrap()).0, 0.05);
        assert_eq!(tolerances(&parse("n + 1").unwrap()).0, 0.05);
        assert_eq!(tolerances(&parse("n + n^(3/5)").unwrap()).0, 0.2);
    }
}
