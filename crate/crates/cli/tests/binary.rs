use std::path::PathBuf;
use std::process::{Command, Output};

fn qi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qi")).args(args).output().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qi-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn apply_csv_layout() {
    let out = stdout(&qi(&["apply", "--op", "bernstein:n=4", "--expr", "x^2", "--grid", "4"]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "x,qf,f,error");
    assert_eq!(lines.len(), 6);
    // B_4 e2 = x^2 + x(1-x)/4 at x = 1/2
    let mid: Vec<f64> = lines[3].split(',').map(|c| c.parse().unwrap()).collect();
    assert_eq!(mid[1], 0.3125);
    assert_eq!(lines[3].split(',').next().unwrap(), "5.0000000000000000e-1");
}

#[test]
fn output_is_byte_identical() {
    let args = ["norm", "--op", "q2star:m=4,k=12,ratio=1000", "--seed", "42", "--grid", "512"];
    let a = qi(&args);
    let b = qi(&args);
    assert_eq!(stdout(&a), stdout(&b));
    let c = qi(&["norm", "--op", "q2star:m=4,k=12,ratio=1000", "--seed", "43", "--grid", "512"]);
    assert_ne!(stdout(&a), stdout(&c));
    let s = ["study", "--op", "gs:n=2", "--expr", "sin(2*x)", "--ladder", "8..64", "--richardson"];
    assert_eq!(stdout(&qi(&s)), stdout(&qi(&s)));
}

#[test]
fn errors_are_one_line_and_nonzero() {
    let cases: &[&[&str]] = &[
        &["apply", "--op", "bernstein:n=4", "--expr", "x +"],
        &["apply", "--op", "bernstein:n=4", "--expr", "y"],
        &["apply", "--op", "spline:n=4", "--expr", "x"],
        &["apply", "--op", "bernstein:n=4", "--expr", "x1"],
        &["apply", "--op", "bernstein:n=4"],
        &["norm", "--op", "simplex:d=2,n=3"],
        &["nearbest", "--n", "1", "--exact", "5", "--order", "4"],
        &["nearbest", "--n", "0"],
        &["norm", "--op", "q2star:m=3,k=4", "--knots", "/nonexistent/knots.txt"],
        &["study", "--op", "bernstein:n=1", "--expr", "x", "--ladder", "8,4"],
        &["extrapolate", "--values", "8:1,8:2"],
        &["norm", "--op", "q2star:m=3", "--config", "/nonexistent/qi.conf"],
        &["frobnicate"],
        &[],
    ];
    for args in cases {
        let o = qi(args);
        assert!(!o.status.success(), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
        let err = String::from_utf8(o.stderr).unwrap();
        assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
        assert!(err.starts_with("qi: error: "), "{err}");
    }
}

#[test]
fn config_defaults_and_flag_precedence() {
    let cfg = scratch("qi.conf");
    std::fs::write(&cfg, "# test settings\ngrid = 2\nseed = 5\n").unwrap();
    let c = cfg.to_str().unwrap();
    let out = stdout(&qi(&["apply", "--op", "bernstein:n=3", "--expr", "x", "--config", c]));
    assert_eq!(out.lines().count(), 4);
    let out = stdout(&qi(&["apply", "--op", "bernstein:n=3", "--expr", "x", "--config", c, "--grid", "5"]));
    assert_eq!(out.lines().count(), 7);
    let n1 = stdout(&qi(&["norm", "--op", "g1:m=3,k=6,ratio=10", "--grid", "64", "--config", c]));
    assert!(n1.lines().nth(1).unwrap().contains(",5,"));
    let n2 = stdout(&qi(&["norm", "--op", "g1:m=3,k=6,ratio=10", "--grid", "64", "--config", c, "--seed", "9"]));
    assert!(n2.lines().nth(1).unwrap().contains(",9,"));
    std::fs::write(&cfg, "grid = 2\nquadrature = 7\n").unwrap();
    assert!(!qi(&["apply", "--op", "bernstein:n=3", "--expr", "x", "--config", c]).status.success());
}

#[test]
fn knots_file_and_plot() {
    let kf = scratch("knots.txt");
    std::fs::write(&kf, "2: 8 0 0 0 0.25 0.3 1 1 1\n").unwrap();
    let plot = scratch("apply.dat");
    let out = stdout(&qi(&[
        "apply", "--op", "q2star:m=2", "--knots", kf.to_str().unwrap(), "--expr", "3*x^2-x", "--grid", "10", "--plot",
        plot.to_str().unwrap(),
    ]));
    for line in out.lines().skip(1) {
        let err: f64 = line.split(',').nth(3).unwrap().parse().unwrap();
        assert!(err < 1e-12, "{line}");
    }
    let data = std::fs::read_to_string(&plot).unwrap();
    let blocks: Vec<&str> = data.split("\n\n\n").collect();
    assert_eq!(blocks.len(), 2);
    assert!(blocks[0].starts_with("# qf"));
    assert_eq!(blocks[1].lines().count(), 12);
    assert_eq!(blocks[1].lines().nth(1).unwrap().split_whitespace().count(), 2);
}

#[test]
fn nearbest_and_norm2d_values() {
    let out = stdout(&qi(&["nearbest", "--kind", "discrete", "--n", "2", "--grid", "1024"]));
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    let nu: f64 = row[4].parse().unwrap();
    let leb: f64 = row[5].parse().unwrap();
    assert!((nu - 7.0 / 6.0).abs() < 1e-12);
    assert!((leb - 1.1389).abs() < 2e-3);
    let a: Vec<f64> = row[8..].iter().map(|v| v.parse().unwrap()).collect();
    assert!((a[0] - (1.0 + 1.0 / 12.0)).abs() < 1e-12 && a[1] == 0.0 && (a[2] + 1.0 / 24.0).abs() < 1e-12);
    let out = stdout(&qi(&["norm2d", "--mesh", "four_dir", "--s", "1", "--grid", "32"]));
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[..2], ["four_dir", "1"]);
    assert!((row[3].parse::<f64>().unwrap() - 1.5).abs() < 5e-3);
}

#[test]
fn extrapolate_from_values_and_file() {
    let out = stdout(&qi(&["extrapolate", "--values", "10:1.1,20:1.05,40:1.025"]));
    let last = out.lines().last().unwrap();
    let v: f64 = last.split(',').nth(2).unwrap().parse().unwrap();
    assert!((v - 1.0).abs() < 1e-12);
    let f = scratch("values.txt");
    std::fs::write(&f, "# n value\n10 1.1\n20 1.05\n\n40 1.025\n").unwrap();
    assert_eq!(stdout(&qi(&["extrapolate", "--data", f.to_str().unwrap()])), out);
}
