//! Exercises the `pa-fbl` binary end to end.

use std::path::Path;
use std::process::{Command, Output};

use pa_fbl_cli::output::NA;
use pa_fbl_cli::{EXIT_CONFIG, EXIT_OK, EXIT_PARTIAL, HEADER};

const SMALL_SWEEP: &str = r#"
command = "sweep-snr"
regimes = ["pa-theorem1", "no-csit"]

[fixed]
sigma = 0.5
length = 300

[[axis]]
name = "snr_db"
values = [10.0, 20.0]
"#;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_pa-fbl"));
    cmd.env_remove("PA_FBL_SEED");
    cmd
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

fn rows(text: &str) -> Vec<csv::StringRecord> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(r.headers().unwrap().iter().collect::<Vec<_>>(), HEADER);
    r.records().map(Result::unwrap).collect()
}

fn column(name: &str) -> usize {
    HEADER.iter().position(|h| *h == name).unwrap()
}

fn mc_point(extra: &[&str]) -> Command {
    let mut cmd = bin();
    cmd.args([
        "point",
        "--snr-db",
        "15",
        "--sigma",
        "0.5",
        "--length",
        "300",
        "--regime",
        "monte-carlo",
        "--mc-samples",
        "4000",
    ])
    .args(extra);
    cmd
}

fn write(dir: &Path, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn analytic_point_prints_one_row() {
    let out = run(bin().args([
        "point",
        "--snr-db",
        "20",
        "--sigma",
        "0.5",
        "--length",
        "300",
        "--regime",
        "pa-theorem1",
    ]));
    assert_eq!(
        out.status.code(),
        Some(EXIT_OK),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rows = rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(rows.len(), 1);
    let row = &rows[0];
    assert_eq!(&row[column("command")], "point");
    assert_eq!(&row[column("rate")], NA);
    assert_eq!(&row[column("mc_se_throughput")], NA);
    assert_eq!(&row[column("mc_se_error_prob")], NA);
    assert_eq!(&row[column("error")], NA);
    let thr: f64 = row[column("throughput")].parse().unwrap();
    assert!(thr > 0.0 && thr < 10.0, "{thr}");
}

#[test]
fn monte_carlo_point_reports_standard_errors() {
    let out = run(&mut mc_point(&["--seed", "7"]));
    assert_eq!(out.status.code(), Some(EXIT_OK));
    let rows = rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(rows.len(), 1);
    let se: f64 = rows[0][column("mc_se_throughput")].parse().unwrap();
    assert!(se > 0.0);
}

#[test]
fn seed_comes_from_environment_unless_flag_given() {
    let flag = run(&mut mc_point(&["--seed", "7"])).stdout;
    let env = run(mc_point(&[]).env("PA_FBL_SEED", "7")).stdout;
    assert_eq!(flag, env);
    let overridden = run(mc_point(&["--seed", "8"]).env("PA_FBL_SEED", "7")).stdout;
    let eight = run(&mut mc_point(&["--seed", "8"])).stdout;
    assert_eq!(overridden, eight);
    assert_ne!(overridden, flag);
}

#[test]
fn failed_points_give_partial_status() {
    let out = run(bin().args([
        "point",
        "--snr-db",
        "20",
        "--sigma",
        "1.5",
        "--length",
        "300",
        "--regime",
        "pa-numeric",
    ]));
    assert_eq!(out.status.code(), Some(EXIT_PARTIAL));
    let rows = rows(&String::from_utf8(out.stdout).unwrap());
    assert_ne!(&rows[0][column("error")], NA);
    assert_eq!(&rows[0][column("throughput")], NA);
}

#[test]
fn bad_config_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "bad.toml",
        &SMALL_SWEEP.replace("values = [10.0, 20.0]", "values = [20.0, 10.0]"),
    );
    let out = run(bin().arg("run").arg(&path));
    assert_eq!(out.status.code(), Some(EXIT_CONFIG));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bad.toml: line 11: "), "{err}");
}

#[test]
fn gnuplot_needs_output_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "s.toml", SMALL_SWEEP);
    let out = run(bin().arg("run").arg(&path).arg("--gnuplot"));
    assert_eq!(out.status.code(), Some(EXIT_CONFIG));
}

#[test]
fn run_writes_csv_and_gnuplot_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "s.toml", SMALL_SWEEP);
    let csv_path = dir.path().join("out.csv");
    let out = run(bin().arg("run").arg(&path).arg("--out").arg(&csv_path).arg("--gnuplot"));
    assert_eq!(
        out.status.code(),
        Some(EXIT_OK),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(out.stdout.is_empty());

    let text = std::fs::read_to_string(&csv_path).unwrap();
    let rows = rows(&text);
    assert_eq!(rows.len(), 4);
    let regimes: Vec<&str> = rows.iter().map(|r| &r[column("regime")]).collect();
    assert_eq!(regimes, ["pa-theorem1", "no-csit", "pa-theorem1", "no-csit"]);
    for row in &rows {
        for name in ["snr_db", "sigma", "length", "throughput", "error_prob", "rate_opt"] {
            let v: f64 = row[column(name)]
                .parse()
                .unwrap_or_else(|_| panic!("{name}: {:?}", &row[column(name)]));
            assert!(v.is_finite());
        }
    }

    let dat = std::fs::read_to_string(csv_path.with_extension("dat")).unwrap();
    assert_eq!(dat.matches("# regime").count(), 2);
    assert!(dat.contains("\n\n\n# regime no-csit"));
    let data_lines = dat.lines().filter(|l| !l.is_empty() && !l.starts_with('#')).count();
    assert_eq!(data_lines, 4);
}

#[test]
fn preset_names_are_validated() {
    let out = run(bin().args(["preset", "fig9"]));
    assert!(!out.status.success());
}
