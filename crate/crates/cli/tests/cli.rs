use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const UNIT: &str = r#"
[metal]
dissipation_constant = "1 nat"
relaxation = "1 nat"
density = "1 nat"

[plates]
gap = "1 nat"
radius = "1 nat"

[quadrature]
m_max = "100 nat"

[run]
v = { from = "1e-3 nat", to = "1 nat", points = 7, spacing = "log" }
omega = ["1 nat"]
"#;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_casimir-friction"));
    // Keep stray overrides from the calling shell out of the tests.
    for (key, _) in std::env::vars() {
        if key.starts_with("CF_") {
            cmd.env_remove(key);
        }
    }
    cmd
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str], config: &Path) -> Output {
    bin().args(args).arg("--config").arg(config).output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Data rows of a CSV with `#` comment lines, as (header, rows).
fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    (header, rows)
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.abs().ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}

#[test]
fn force_unit_parameters_and_slope() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "unit.toml", UNIT);
    let text = stdout(&run(&["force"], &cfg));
    assert!(text.contains("# config-sha256: "));
    let (header, rows) = parse_csv(&text);
    assert_eq!(header, ["v [nat]", "F_T0 [nat]", "F_finiteT [nat]", "flags"]);
    let last = rows.last().unwrap();
    assert_eq!(num(&last[0]), 1.0);
    let expected = -15.0 * PI * PI / 64.0;
    assert!(((num(&last[1]) - expected) / expected).abs() < 1e-14);
    assert_eq!(last[2], "", "no finite-temperature force at T = 0");
    let v: Vec<f64> = rows.iter().map(|r| num(&r[0])).collect();
    let f: Vec<f64> = rows.iter().map(|r| num(&r[1])).collect();
    assert!((slope(&v, &f) - 3.0).abs() < 1e-9);
}

#[test]
fn finite_temperature_force_is_linear() {
    let dir = tempfile::tempdir().unwrap();
    let text = UNIT.replace("radius = \"1 nat\"", "beta = \"1 nat\"");
    let cfg = write_config(dir.path(), "warm.toml", &text);
    let (_, rows) = parse_csv(&stdout(&run(&["force"], &cfg)));
    let v: Vec<f64> = rows.iter().map(|r| num(&r[0])).collect();
    let f: Vec<f64> = rows.iter().map(|r| num(&r[2])).collect();
    assert!((slope(&v, &f) - 1.0).abs() < 1e-9);
    let at_one = num(&rows.last().unwrap()[2]);
    assert!((at_one + PI.powi(4) / 4.0).abs() < 1e-12 * PI.powi(4));
    // The speed v = 1 violates d/(βv) ≫ 1 and is flagged.
    assert_eq!(rows.last().unwrap()[3], "thermal");
}

#[test]
fn empty_grid_gives_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let text = UNIT.replace(
        "v = { from = \"1e-3 nat\", to = \"1 nat\", points = 7, spacing = \"log\" }",
        "v = []",
    );
    let cfg = write_config(dir.path(), "empty.toml", &text);
    let (header, rows) = parse_csv(&stdout(&run(&["force"], &cfg)));
    assert_eq!(header.len(), 4);
    assert!(rows.is_empty());
}

#[test]
fn pipeline_column_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let text = UNIT.replace(
        "v = { from = \"1e-3 nat\", to = \"1 nat\", points = 7, spacing = \"log\" }",
        "v = [\"1e-3 nat\", \"2e-3 nat\"]\npipeline = true",
    );
    let cfg = write_config(dir.path(), "pipe.toml", &text);
    let (header, rows) = parse_csv(&stdout(&run(&["force"], &cfg)));
    assert_eq!(header[3], "F_pipeline [nat]");
    for r in &rows {
        let (closed, pipe) = (num(&r[1]), num(&r[3]));
        assert!(((pipe - closed) / closed).abs() < 1e-3, "{r:?}");
    }
}

#[test]
fn torque_unit_parameters_and_radius_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let text = UNIT.replace(
        "omega = [\"1 nat\"]",
        "omega = [\"1 nat\"]\nradius = [\"1 nat\", \"2 nat\"]",
    );
    let cfg = write_config(dir.path(), "torque.toml", &text);
    let (header, rows) = parse_csv(&stdout(&run(&["torque"], &cfg)));
    assert_eq!(
        header[..6],
        [
            "R [nat]",
            "Omega [nat]",
            "tau_T0 [nat]",
            "tau_finiteT [nat]",
            "tau_numeric [nat]",
            "rel_err"
        ]
    );
    // τ_T0 = −(π/3) C_P R⁶ Ω³ with C_P = 15π²/64 at unit D, ρ and d.
    assert!((num(&rows[0][2]) + PI / 3.0 * 15.0 * PI * PI / 64.0).abs() < 1e-14);
    assert!(num(&rows[0][5]) <= 1e-9);
    assert!(((num(&rows[1][2]) / num(&rows[0][2])) / 64.0 - 1.0).abs() < 1e-13);

    let warm = text.replace("gap = \"1 nat\"", "gap = \"1 nat\"\nbeta = \"1 nat\"");
    let cfg = write_config(dir.path(), "warm.toml", &warm);
    let (_, rows) = parse_csv(&stdout(&run(&["torque"], &cfg)));
    assert!((num(&rows[0][3]) + PI / 2.0 * PI.powi(4) / 4.0).abs() < 1e-12);
    assert!(((num(&rows[1][3]) / num(&rows[0][3])) / 16.0 - 1.0).abs() < 1e-13);
    assert!(num(&rows[1][5]) <= 1e-9);
}

#[test]
fn single_annulus_is_flagged() {
    let dir = tempfile::tempdir().unwrap();
    let text = UNIT.replace("omega = [\"1 nat\"]", "omega = [\"1 nat\"]\nn_annuli = 1");
    let cfg = write_config(dir.path(), "coarse.toml", &text);
    let (_, rows) = parse_csv(&stdout(&run(&["torque"], &cfg)));
    assert!(num(&rows[0][5]) > 0.1);
    assert!(rows[0][6].contains("coarse"));
}

#[test]
fn parse_errors_exit_2_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = UNIT.replace("gap = \"1 nat\"", "gap = 1.0");
    let cfg = write_config(dir.path(), "bad.toml", &bad);
    let out = run(&["force"], &cfg);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.toml:8:"), "{err}");
    assert!(err.contains("unit"), "{err}");

    let out = run(&["force"], &dir.path().join("missing.toml"));
    assert_eq!(out.status.code(), Some(2));
    let out = bin().arg("force").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn environment_overrides_apply() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "unit.toml", UNIT);
    let base = stdout(&run(&["force"], &cfg));
    let out = bin()
        .arg("force")
        .env("CF_CONFIG", &cfg)
        .env("CF_PLATES_GAP", "2 nat")
        .output()
        .unwrap();
    let moved = stdout(&out);
    let (_, a) = parse_csv(&base);
    let (_, b) = parse_csv(&moved);
    let ratio = num(&a[6][1]) / num(&b[6][1]);
    assert!((ratio / 64.0 - 1.0).abs() < 1e-13, "gap slope -6: {ratio}");
    assert_ne!(base.lines().nth(1), moved.lines().nth(1), "hash follows the override");
}

#[test]
fn output_files_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "unit.toml", UNIT);
    let csv = dir.path().join("f.csv");
    let plot = dir.path().join("f.dat");
    let out = bin()
        .args(["force", "--threads", "1", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&csv)
        .arg("--plot")
        .arg(&plot)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let first = std::fs::read(&csv).unwrap();
    let plotted = std::fs::read_to_string(&plot).unwrap();
    assert_eq!(plotted.lines().filter(|l| !l.starts_with('#')).count(), 7);
    assert_eq!(plotted.lines().nth(1).unwrap().split(' ').count(), 2);
    let again = stdout(&run(&["force", "--threads", "3"], &cfg));
    assert_eq!(first, again.as_bytes());
}

#[test]
fn dissipation_from_trajectory_file() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("square.txt"),
        "# units: time=nat, length=nat, v=nat\n0 0 0\n1 1 0\n2 1 1\n3 0 1\n4 0 0\n",
    )
    .unwrap();
    let text = format!(
        "{}\n[trajectory]\nfile = \"square.txt\"\n",
        UNIT.replace("[quadrature]", "[quadrature]\nrel_tol = 1e-8")
    );
    let cfg = write_config(dir.path(), "sq.toml", &text);
    let (header, rows) = parse_csv(&stdout(&run(&["dissipation"], &cfg)));
    assert_eq!(header[1], "dE [nat]");
    // Four unit legs at unit speed: ΔE = 4 C_P.
    let expected = 4.0 * 15.0 * PI * PI / 64.0;
    assert!(((num(&rows[0][1]) - expected) / expected).abs() < 1e-6, "{rows:?}");
    assert_eq!(rows[0][3], "T0");

    std::fs::write(
        dir.path().join("square.txt"),
        "# units: time=nat, length=nat, v=nat\n0 0 0\n1 1\n",
    )
    .unwrap();
    let out = run(&["dissipation"], &cfg);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("square.txt:3"));
}

#[test]
fn verify_selection_and_failure() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write_config(dir.path(), "empty.toml", "[run]\nsuite = []\n");
    let (_, rows) = parse_csv(&stdout(&run(&["verify"], &empty)));
    assert!(rows.is_empty());

    let loose = write_config(
        dir.path(),
        "loose.toml",
        "[run]\nsuite = [\"pair-duration\"]\npair_periods = 5\n",
    );
    let out = run(&["verify"], &loose);
    assert_eq!(out.status.code(), Some(3));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("pair-duration") && text.contains("FAIL"), "{text}");
}

#[test]
fn verify_default_suite_passes() {
    let out = bin().arg("verify").output().unwrap();
    let text = stdout(&out);
    let (_, rows) = parse_csv(&text);
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| r[3] == "pass"), "{text}");
}
