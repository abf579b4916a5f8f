use std::fs;
use std::process::{Command, Output};

fn casimir(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_casimir"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field(row: &str, i: usize) -> f64 {
    row.trim().split(',').nth(i).unwrap().parse().unwrap()
}

#[test]
fn compute_undeformed_row() {
    let o = casimir(&[
        "compute",
        "--dim",
        "1",
        "--beta-star",
        "0",
        "--method",
        "auto",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1);
    assert!(out.starts_with("1,"));
    assert!(out.contains(",closed-form,"));
    assert_eq!(field(&out, 3), -1.0);
}

#[test]
fn compute_near_undeformed_3d() {
    let o = casimir(&["compute", "--dim", "3", "--beta-star", "1e-4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!((field(&stdout(&o), 3) + 1.0).abs() < 1e-6);
}

#[test]
fn compute_exit_codes() {
    let o = casimir(&[
        "compute",
        "--dim",
        "1",
        "--beta-star",
        "0.5",
        "--method",
        "series-large",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        casimir(&["compute", "--dim", "4", "--beta-star", "1"])
            .status
            .code()
            == Some(2)
    );
    assert!(
        casimir(&[
            "compute",
            "--dim",
            "2",
            "--beta-star",
            "1",
            "--method",
            "mode-sum"
        ])
        .status
        .code()
            == Some(2)
    );
    let o = casimir(&[
        "compute",
        "--dim",
        "1",
        "--beta-star",
        "1",
        "--method",
        "mode-sum",
        "--rel-tol",
        "1e-20",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn validate_exit_codes() {
    assert_eq!(
        casimir(&["validate", "--dim", "1", "--beta-star", "1.0"])
            .status
            .code(),
        Some(0)
    );
    let o = casimir(&["validate", "--dim", "2", "--beta-star", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("closed-form"));
    assert_eq!(
        casimir(&["validate", "--dim", "1", "--beta-star", "NaN"])
            .status
            .code(),
        Some(2)
    );
    let o = casimir(&[
        "validate",
        "--dim",
        "1",
        "--beta-star",
        "0.5",
        "--series-factor",
        "1e-9",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn physical_conversion() {
    let o = casimir(&[
        "physical", "--dim", "1", "--beta", "0", "--a", "1", "--hbar-c", "1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let row = out.lines().nth(1).unwrap();
    assert_eq!(field(row, 0), 0.0);
    assert_eq!(field(row, 1), -1.0);
    assert!((field(row, 2) + std::f64::consts::PI / 24.0).abs() < 1e-15);

    let beta = format!("{}", 2.0 / std::f64::consts::PI);
    let o = casimir(&["physical", "--dim", "1", "--beta", &beta, "--a", "1"]);
    let out = stdout(&o);
    assert!((field(out.lines().nth(1).unwrap(), 0) - 1.0).abs() < 1e-15);

    assert_eq!(
        casimir(&["physical", "--dim", "1", "--beta", "1", "--a", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn audit_passes() {
    let o = casimir(&["audit"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn sweep_two_linear_points() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("two.csv");
    let o = casimir(&[
        "sweep",
        "--dim",
        "2",
        "--beta-min",
        "0.5",
        "--beta-max",
        "3",
        "--points",
        "2",
        "--scale",
        "linear",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "dim,beta_star,method,eps_star,err_est");
    assert_eq!(lines.len(), 3);
    assert_eq!(field(lines[1], 1), 0.5);
    assert_eq!(field(lines[2], 1), 3.0);
}

#[test]
fn sweep_matches_compute_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = |p: &str| {
        vec![
            "sweep".to_string(),
            "--dim".into(),
            "1,2,3".into(),
            "--beta-min".into(),
            "0.01".into(),
            "--beta-max".into(),
            "100".into(),
            "--points".into(),
            "50".into(),
            "--out".into(),
            p.to_string(),
        ]
    };
    for p in [&a, &b] {
        let argv = args(p.to_str().unwrap());
        let argv: Vec<&str> = argv.iter().map(String::as_str).collect();
        assert_eq!(casimir(&argv).status.code(), Some(0));
    }
    let csv = fs::read(&a).unwrap();
    assert_eq!(csv, fs::read(&b).unwrap());

    let text = String::from_utf8(csv).unwrap();
    assert!(!text.contains('\r'));
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 150);
    for dim_rows in rows.chunks(50) {
        let eps: Vec<f64> = dim_rows.iter().map(|r| field(r, 3)).collect();
        assert!(eps.iter().all(|e| *e > -1.0 && *e < 0.0));
        assert!(eps.windows(2).all(|w| w[0] < w[1]));
        let betas: Vec<f64> = dim_rows.iter().map(|r| field(r, 1)).collect();
        assert!(betas.windows(2).all(|w| w[0] < w[1]));
    }

    // a sweep row is byte-identical to the compute output at that beta*
    let row = rows[50 + 17];
    let beta = row.split(',').nth(1).unwrap();
    let o = casimir(&["compute", "--dim", "2", "--beta-star", beta]);
    assert_eq!(stdout(&o).trim_end(), row);
}

#[test]
fn failed_sweep_leaves_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    let o = casimir(&[
        "sweep",
        "--dim",
        "1",
        "--beta-min",
        "0.5",
        "--beta-max",
        "2",
        "--points",
        "4",
        "--method",
        "series-large",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!path.exists());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}
