use qi_cli::expr::parse;
use qi_cli::ops::OperatorSpec;
use qi_cli::study::{parse_ladder, run_study, StudyOptions};
use qi_cli::CliError;

fn study(op: &str, f: &str, ladder: &str, opts: StudyOptions) -> qi_cli::study::StudyReport {
    run_study(&op.parse::<OperatorSpec>().unwrap(), &parse(f).unwrap(), &parse_ladder(ladder).unwrap(), &opts).unwrap()
}

#[test]
fn bernstein_linear_is_exact() {
    let rep = study("bernstein:n=1", "x", "16..256", StudyOptions::default());
    assert!(rep.rows.iter().all(|r| r.error < 1e-14 && r.exact));
}

#[test]
fn bernstein_exp_first_order() {
    let rep = study("bernstein:n=1", "exp(x)", "16..256", StudyOptions::default());
    assert_eq!(rep.rows.len(), 5);
    assert!(rep.rows[0].order.is_none());
    for r in &rep.rows[1..] {
        let p = r.order.unwrap();
        assert!((p - 1.0).abs() < 0.1, "order {p}");
    }
}

#[test]
fn q2star_sin_third_order() {
    let rep = study("q2star:m=3,k=8", "sin(x)", "8..64", StudyOptions::default());
    for r in &rep.rows[1..] {
        let p = r.order.unwrap();
        assert!((p - 3.0).abs() < 0.2, "order {p}");
    }
}

#[test]
fn order_needs_three_rows() {
    let rep = study("bernstein:n=1", "exp(x)", "16,32", StudyOptions::default());
    assert!(rep.rows.iter().all(|r| r.order.is_none()));
}

#[test]
fn richardson_column_beats_raw_values() {
    let opts = StudyOptions {
        richardson: true,
        at: Some(0.3),
        ..StudyOptions::default()
    };
    let rep = study("bernstein:n=1", "exp(x)", "8..64", opts);
    let exact = 0.3_f64.exp();
    let last = rep.rows.last().unwrap();
    assert!((last.extrapolated.unwrap() - exact).abs() * 10.0 < (last.value - exact).abs());
}

#[test]
fn ladder_and_dispatch_errors() {
    assert!(parse_ladder("32,16").is_err());
    assert!(parse_ladder("0..8").is_err());
    assert_eq!(parse_ladder("3..20").unwrap(), vec![3, 6, 12]);
    let spec: OperatorSpec = "bernstein:n=1".parse().unwrap();
    let r = run_study(&spec, &parse("x2").unwrap(), &[4, 8], &StudyOptions::default());
    assert!(matches!(r, Err(CliError::Dispatch(_))));
    let simplex: OperatorSpec = "simplex:d=3,n=1".parse().unwrap();
    let r = run_study(&simplex, &parse("x^2").unwrap(), &[4, 8], &StudyOptions::default());
    assert!(matches!(r, Err(CliError::Dispatch(_))));
}

#[test]
fn simplex_study_runs() {
    let opts = StudyOptions {
        grid: 6,
        ..StudyOptions::default()
    };
    let rep = study("simplex:d=3,n=1", "x1^2 + x2*x3", "4..32", opts);
    for r in &rep.rows[1..] {
        assert!((r.order.unwrap() - 1.0).abs() < 1e-6);
    }
}
