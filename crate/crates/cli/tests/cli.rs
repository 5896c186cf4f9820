use std::process::{Command, Output};

use serconv_cli::AnalysisDocument;

const EXAMPLE: &str = "(sqrt(n+1)*root(3,n-7)+2)/(n^(2/5)-17)";

fn serconv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_serconv")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn document(o: &Output) -> AnalysisDocument {
    serde_json::from_slice(&o.stdout).expect("valid analysis document")
}

#[test]
fn analyze_worked_example() {
    let o = serconv(&["analyze", EXAMPLE, "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let d = document(&o);
    assert_eq!(d.classification, "divergent");
    assert_eq!(d.membership, "member");
    let deg = d.degree.unwrap();
    assert_eq!((deg.num, deg.den), (13, 30));
    let c = d.leading_coefficient.unwrap();
    assert_eq!((c.exact.as_str(), c.decimal), ("1", 1.0));
    assert_eq!((d.n_defined, d.n_sign_stable, d.coeff_sign), (Some(1), Some(1192), Some(1)));

    let text = stdout(&serconv(&["analyze", EXAMPLE]));
    assert!(text.contains("divergent") && text.contains("13/30"), "{text}");
}

#[test]
fn json_field_names_are_stable() {
    let o = serconv(&["analyze", "1/n^2", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort();
    assert_eq!(
        keys,
        [
            "classification",
            "coeff_sign",
            "degree",
            "expr_text",
            "leading_coefficient",
            "membership",
            "n_defined",
            "n_sign_stable",
            "tool_version"
        ]
    );
    assert_eq!(v["classification"], "absolutely-convergent");
    assert_eq!(v["degree"]["num"], -2);
    assert_eq!(v["degree"]["den"], 1);
    assert!(v["leading_coefficient"]["decimal"].is_f64());
    assert!(v["leading_coefficient"]["exact"].is_string());
    assert_eq!(v["coeff_sign"], 1);
}

#[test]
fn identical_runs_are_byte_identical() {
    let a = serconv(&["analyze", EXAMPLE, "--json", "--window", "32"]);
    let b = serconv(&["analyze", EXAMPLE, "--json", "--window", "32"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn non_members_omit_degree() {
    let o = serconv(&["analyze", "n - n", "--json"]);
    assert_eq!(o.status.code(), Some(2));
    let d = document(&o);
    assert_eq!(d.membership, "outside: subtractive-cancellation");
    assert_eq!(d.classification, "not-applicable");
    assert!(d.degree.is_none() && d.n_defined.is_none());

    let o = serconv(&["analyze", "(1 + n^(1/2))^(1/2)"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("indeterminate (at node /)"));

    let o = serconv(&["analyze", "0", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(document(&o).classification, "zero-series");
}

#[test]
fn parse_errors_are_annotated() {
    let o = serconv(&["analyze", "n + * 2"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("n + * 2\n    ^\n"), "{err}");
    assert!(err.contains("at byte 4"), "{err}");
    assert!(o.stdout.is_empty());
}

#[test]
fn missing_window_is_a_warning() {
    let o = serconv(&["analyze", "n - 5000", "--n-max", "100", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("no stable window"));
    assert!(document(&o).n_sign_stable.is_none());
}

#[test]
fn verify_codes() {
    let o = serconv(&["verify", "1/n^2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = serconv(&["verify", EXAMPLE]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("consistent-divergent") && text.contains("slope 0.367"), "{text}");
    let o = serconv(&["verify", "n - n"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
}

#[test]
fn verify_reports_disagreement() {
    // a constant 10^6 swamps n^(3/4) until n ~ 10^8, so the slope on the
    // default grid is far from 3/4 while the gap is a comfortable 3/4
    let o = serconv(&["verify", "n^(3/4) + 1000000"]);
    assert_eq!(o.status.code(), Some(4), "{}", stdout(&o));
    assert!(stdout(&o).contains("MISMATCH"));
}

#[test]
fn leading_minus_is_an_expression() {
    let o = serconv(&["analyze", "-n^(-2)", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(document(&o).coeff_sign, Some(-1));
    assert_eq!(stdout(&serconv(&["sum", "-n", "--from", "1", "--to", "3"])).trim(), "-6");
}

#[test]
fn sums() {
    let o = serconv(&["sum", "1/n^2", "--from", "1", "--to", "10"]);
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 1.5497677).abs() < 1e-7);
    assert_eq!(stdout(&serconv(&["sum", "n", "--from", "1", "--to", "1"])).trim(), "1");
    let o = serconv(&["sum", "1/(n-10)", "--from", "1", "--to", "20"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("n = 10"));
}

#[test]
fn generate_is_deterministic_and_parseable() {
    let a = serconv(&["generate", "--seed", "42", "--count", "3"]);
    let b = serconv(&["generate", "--seed", "42", "--count", "3"]);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert_eq!(text.lines().count(), 3);

    let leaf = stdout(&serconv(&["generate", "--depth", "0", "--count", "1", "--seed", "5"]));
    let e = serconv::parse(leaf.trim()).unwrap();
    assert!(matches!(e, serconv::Expr::Var | serconv::Expr::Const(_)));

    let many = stdout(&serconv(&["generate", "--seed", "7", "--count", "25", "--min-gap", "1/2"]));
    for line in many.lines() {
        let o = serconv(&["analyze", line, "--n-max", "1e5"]);
        assert_eq!(o.status.code(), Some(0), "{line}");
    }
}

#[test]
fn exhausted_retries() {
    let o = serconv(&["generate", "--retry-budget", "1", "--count", "50"]);
    assert_eq!(o.status.code(), Some(5));
    assert!(stderr(&o).contains("retry budget"));
}

#[test]
fn bad_flags() {
    let o = serconv(&["analyze", "n", "--n-max", "lots"]);
    assert_eq!(o.status.code(), Some(2));
    let o = serconv(&["generate", "--min-gap", "1/0"]);
    assert_ne!(o.status.code(), Some(0));
}
