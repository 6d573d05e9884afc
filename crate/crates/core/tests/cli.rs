use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_barrier-ruin");

fn config(a: f64, ks: &str, p2: f64) -> String {
    format!(
        r#"model.claim.family = "lomax"
model.claim.scale = 1.0
model.claim.alpha = 1.5
model.interarrival.family = "exponential"
model.interarrival.rate = 1.0
model.p1 = 4.0
model.p2 = {p2}

instance.a = {a}
instance.k = {ks}

simulation.replications = 2000
simulation.seed = 17

output.directory = "out"
"#
    )
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("experiment.toml");
    fs::write(&path, text).unwrap();
    path
}

fn barrier_ruin(args: &[&str], cfg: &Path, out: &Path) -> Output {
    Command::new(BIN)
        .args(args)
        .arg(cfg)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn table(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

#[test]
fn canonical_run_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &config(0.5, "[25, 50, 100]", 3.0));
    let out = dir.path().join("run");
    let o = barrier_ruin(&["run"], &cfg, &out);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let (h, rows) = table(&out.join("sweep.csv"));
    assert_eq!(rows.len(), 3);
    let (vee, times) = (column(&h, "psi_hat_vee"), column(&h, "psi_hat_times"));
    for r in &rows {
        assert_eq!(r[column(&h, "regime")], "TwoDim");
        let (v, t): (f64, f64) = (r[vee].parse().unwrap(), r[times].parse().unwrap());
        assert!(t >= v);
    }

    let (h, checks) = table(&out.join("identities.csv"));
    let (res, passed, source) = (column(&h, "residual"), column(&h, "passed"), column(&h, "source"));
    for c in &checks {
        assert_eq!(c[passed], "true", "{c:?}");
        if c[source] == "asymptotics" {
            assert!(c[res].parse::<f64>().unwrap() < 1e-9, "{c:?}");
        }
    }
    let report = fs::read_to_string(out.join("report.txt")).unwrap();
    assert!(report.contains("regime: TwoDim"));
    assert!(report.contains("wall_time_seconds"));
}

#[test]
fn sweep_is_byte_identical_across_runs_and_workers() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &config(0.5, "[25, 50]", 3.0));
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert!(barrier_ruin(&["run"], &cfg, &a).status.success());
    let o = Command::new(BIN)
        .arg("run")
        .arg(&cfg)
        .arg("--out")
        .arg(&b)
        .args(["--workers", "3"])
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(fs::read(a.join("sweep.csv")).unwrap(), fs::read(b.join("sweep.csv")).unwrap());
}

#[test]
fn unstable_model_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &config(0.5, "[25]", 1.5));
    let o = barrier_ruin(&["run"], &cfg, &dir.path().join("x"));
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("Unstable"), "{err}");
    assert!(!dir.path().join("x").exists());
}

#[test]
fn parse_errors_report_line() {
    let dir = tempfile::tempdir().unwrap();
    let text = config(0.5, "[50, 25]", 3.0);
    let cfg = write_config(dir.path(), &text);
    let o = barrier_ruin(&["run"], &cfg, &dir.path().join("x"));
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("experiment.toml:10:"), "{err}");

    let cfg = write_config(dir.path(), &text.replace("rate = 1.0", "rate = = 1.0"));
    let o = barrier_ruin(&["run"], &cfg, &dir.path().join("x"));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("experiment.toml:5:"), "{err}");
}

#[test]
fn one_dimensional_sweep_uses_single_walk_asymptotes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &config(2.0, "[25, 100]", 3.0));
    let out = dir.path().join("cmp");
    let o = barrier_ruin(&["compare"], &cfg, &out);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (h, rows) = table(&out.join("ratios.csv"));
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r[column(&h, "regime")] == "OneDim"));
    for r in &rows {
        assert!(r[column(&h, "times_over_vee")].parse::<f64>().unwrap() >= 1.0);
    }

    let run = dir.path().join("run");
    assert!(barrier_ruin(&["run"], &cfg, &run).status.success());
    let (h, rows) = table(&run.join("sweep.csv"));
    for r in &rows {
        let k: f64 = r[0].parse().unwrap();
        // Tail integral of Lomax(1, 1.5) is 2 (1 + x)^(-1/2); drifts 2 and 1.
        let v2 = 2.0 * (1.0 + k).powf(-0.5);
        let v1 = (1.0 + 2.0 * k).powf(-0.5);
        let wedge: f64 = r[column(&h, "asym_wedge")].parse().unwrap();
        let vee: f64 = r[column(&h, "asym_vee")].parse().unwrap();
        assert!((wedge - v2).abs() < 1e-14 * v2);
        assert!((vee - v1).abs() < 1e-14 * v1);
    }
}
