//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serconv::analysis::{DEFAULT_N_MAX, DEFAULT_WINDOW};
use serconv::pointwise::{Evaluator, PointValue};
use serconv::rational::{int, ratio, to_f64};
use serconv::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn gap_population() -> Vec<(u64, Expr, Attributes)> {
    (0..200)
        .map(|seed| {
            let cfg = GenConfig { min_degree_gap: ratio(1, 2), ..GenConfig::with_seed(seed) };
            let e = generate_member(&cfg).expect("generator");
            let a = analyze_attributes(&e);
            (seed, e, a)
        })
        .collect()
}

fn golden_example() -> Outcome {
    let t = Instant::now();
    let e = parse("(sqrt(n+1)*root(3,n-7)+2)/(n^(2/5)-17)").expect("parses");
    let a = analyze_attributes(&e);
    let c = classify(&e);
    let d = find_domain(&e, 1, DEFAULT_N_MAX, DEFAULT_WINDOW);
    let elapsed = t.elapsed();
    let ok = a.status == MembershipStatus::Member
        && a.degree == ratio(13, 30)
        && a.coeff == Coefficient::one()
        && c.verdict == Verdict::Divergent
        && d.is_ok()
        && elapsed < Duration::from_secs(1);
    outcome(
        ok,
        format!(
            "membership {}, degree {}, coefficient {}, {}, n' = {:?}, {}",
            a.status,
            a.degree,
            a.coeff,
            c.verdict,
            d.map(|r| r.n_sign_stable),
            secs(elapsed)
        ),
    )
}

fn application_equivalence() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut disagreements = Vec::new();
    for i in 0..1000 {
        let (q, k, s, h) = (
            rng.random_range(0..=6u64),
            rng.random_range(1..=5u64),
            rng.random_range(0..=6u64),
            rng.random_range(1..=5u64),
        );
        let e = generate_radical_quotient(&GenConfig::with_seed(rng.random()), q, k, s, h).expect("generator");
        if classify(&e) != classify_radical_quotient(q, k, s, h) {
            disagreements.push((i, q, k, s, h));
        }
    }
    let elapsed = t.elapsed();
    outcome(
        disagreements.is_empty() && elapsed < Duration::from_secs(30),
        format!("{} disagreements in 1000 instances {:?}, {}", disagreements.len(), disagreements, secs(elapsed)),
    )
}

fn degree_oracle(pop: &[(u64, Expr, Attributes)]) -> Outcome {
    let t = Instant::now();
    let (mut tight, mut loose, mut outliers) = (0, 0, Vec::new());
    for (seed, e, a) in pop {
        let r = to_f64(&a.degree);
        let dev = match estimate_degree(e, 10_000, 10_000_000, 16) {
            Ok((slope, _)) => (slope - r).abs(),
            Err(_) => f64::INFINITY,
        };
        if dev <= 0.05 {
            tight += 1;
        }
        if dev <= 0.2 {
            loose += 1;
        } else {
            outliers.push(format!("seed {seed}: |dev| {dev:.3}"));
        }
    }
    let elapsed = t.elapsed();
    let n = pop.len();
    outcome(
        tight * 100 >= 95 * n && loose == n && elapsed < Duration::from_secs(60),
        format!("{tight}/{n} within 0.05, {loose}/{n} within 0.2 {outliers:?}, {}", secs(elapsed)),
    )
}

fn coefficient_oracle(pop: &[(u64, Expr, Attributes)]) -> Outcome {
    let mut good = 0;
    let mut misses = Vec::new();
    for (seed, e, a) in pop {
        let c = a.coeff.to_f64();
        match estimate_leading_coefficient(e, &a.degree, 100_000_000) {
            Ok(v) if ((v - c) / c).abs() <= 0.01 => good += 1,
            Ok(v) => misses.push(format!("seed {seed}: {:.4}", (v - c) / c)),
            Err(err) => misses.push(format!("seed {seed}: {err}")),
        }
    }
    let n = pop.len();
    outcome(good * 100 >= 95 * n, format!("{good}/{n} within 1% {misses:?}"))
}

fn sign_stability() -> Outcome {
    let t = Instant::now();
    let (mut checked, mut no_window) = (0, Vec::new());
    let mut violations = Vec::new();
    for seed in 0..500 {
        let e = generate_member(&GenConfig::with_seed(seed)).expect("generator");
        let r = match find_domain(&e, 1, DEFAULT_N_MAX, DEFAULT_WINDOW) {
            Ok(r) => r,
            Err(_) => {
                no_window.push(seed);
                continue;
            }
        };
        checked += 1;
        let want = if r.sign == Sign::Positive { PointValue::Positive } else { PointValue::Negative };
        let ev = Evaluator::new(&e);
        let end = r.n_sign_stable + 10_000;
        if let Some(n) = (r.n_sign_stable..=end).find(|&n| ev.point(n) != want) {
            violations.push(format!("seed {seed}: n' = {}, {:?} at n = {n}", r.n_sign_stable, ev.point(n)));
        }
    }
    outcome(
        violations.is_empty(),
        format!(
            "{} violations in {checked} windows {violations:?}; no window up to n = {DEFAULT_N_MAX} for seeds {no_window:?}, {}",
            violations.len(),
            secs(t.elapsed())
        ),
    )
}

fn probe_consistency() -> Outcome {
    let t = Instant::now();
    let (mut convergent, mut divergent) = (0, 0);
    let (mut contradictions, mut ratio_misses, mut skipped) = (Vec::new(), Vec::new(), Vec::new());
    let mut seed = 0u64;
    while convergent < 100 || divergent < 100 {
        let cfg = GenConfig { min_degree_gap: ratio(1, 2), ..GenConfig::with_seed(seed) };
        seed += 1;
        let e = generate_member(&cfg).expect("generator");
        let a = analyze_attributes(&e);
        let is_conv = a.degree <= ratio(-6, 5);
        let wanted = if is_conv { convergent < 100 } else { a.degree >= ratio(-4, 5) && divergent < 100 };
        if !wanted {
            continue;
        }
        let verdict = classify(&e).verdict;
        let Ok(dom) = find_domain(&e, 1, DEFAULT_N_MAX, DEFAULT_WINDOW) else {
            skipped.push(format!("seed {}: no window", seed - 1));
            continue;
        };
        let base = (2 * dom.n_sign_stable).max(100_000);
        let cutoffs: Vec<u64> = (0..5).map(|i| base << i).collect();
        let report = match convergence_probe(&e, dom.n_sign_stable, &cutoffs) {
            Ok(r) => r,
            Err(err) => {
                skipped.push(format!("seed {}: {err}", seed - 1));
                continue;
            }
        };
        if is_conv {
            convergent += 1;
        } else {
            divergent += 1;
        }
        let contradicts = match report.verdict_hint {
            VerdictHint::ConsistentConvergent => verdict == Verdict::Divergent,
            VerdictHint::ConsistentDivergent => verdict == Verdict::AbsolutelyConvergent,
            VerdictHint::Inconclusive => false,
        };
        if contradicts {
            contradictions.push(seed - 1);
        }
        if is_conv {
            let want = 2f64.powf(to_f64(&a.degree) + 1.0);
            if let Some(w) = report.deltas.windows(2).find(|w| ((w[1] / w[0]) / want - 1.0).abs() > 0.25) {
                ratio_misses.push(format!("seed {}: ratio {:.3} vs {:.3}", seed - 1, w[1] / w[0], want));
            }
        }
    }
    outcome(
        contradictions.is_empty() && ratio_misses.is_empty(),
        format!(
            "{} contradicting hints, {}/100 delta ratios off by more than 25% {ratio_misses:?}; replaced {skipped:?}, {}",
            contradictions.len(),
            ratio_misses.len(),
            secs(t.elapsed())
        ),
    )
}

fn harmonic_boundary() -> Outcome {
    let e = parse("1/n").expect("parses");
    let c = classify(&e);
    let report = convergence_probe(&e, 1, &[1000, 10_000, 100_000, 1_000_000]).expect("probe");
    let ln10 = 10f64.ln();
    let ok = c.verdict == Verdict::Divergent
        && c.degree == Some(int(-1))
        && report.deltas.iter().all(|d| ((d - ln10) / ln10).abs() <= 0.02);
    outcome(ok, format!("{}, decade deltas {:?}", c.verdict, report.deltas))
}

fn membership_negatives() -> Outcome {
    let cancel = MembershipStatus::Outside(OutsideReason::SubtractiveCancellation);
    let cases = [
        ("n - n", cancel.clone()),
        ("(n+1) - n", cancel.clone()),
        ("sqrt(n) - root(2, n)", cancel),
        ("(1 + n^(1/2))^(1/2)", MembershipStatus::Indeterminate(NodePath::root())),
    ];
    let mut bad = Vec::new();
    for (text, want) in cases {
        let got = analyze_attributes(&parse(text).expect("parses")).status;
        if got != want {
            bad.push(format!("{text}: {got:?}"));
        }
    }
    outcome(bad.is_empty(), format!("{} of 4 statuses wrong {bad:?}", bad.len()))
}

fn round_trip() -> Outcome {
    let failures: Vec<u64> = (0..10_000u64)
        .filter(|&seed| {
            let e = generate_member(&GenConfig::with_seed(seed)).expect("generator");
            parse(&format(&e)).ok() != Some(e)
        })
        .collect();
    outcome(failures.is_empty(), format!("{} failures in 10000 {failures:?}", failures.len()))
}

fn main() -> ExitCode {
    let pop = gap_population();
    type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Criterion> = vec![
        ("golden example", Box::new(golden_example)),
        ("application equivalence", Box::new(application_equivalence)),
        ("degree oracle", Box::new(|| degree_oracle(&pop))),
        ("coefficient oracle", Box::new(|| coefficient_oracle(&pop))),
        ("sign stability", Box::new(sign_stability)),
        ("probe consistency", Box::new(probe_consistency)),
        ("harmonic boundary", Box::new(harmonic_boundary)),
        ("membership negatives", Box::new(membership_negatives)),
        ("parser round trip", Box::new(round_trip)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!("criterion {} {name}: {} - {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
