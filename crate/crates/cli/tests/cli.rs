use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn qew(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qew")).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

/// Header names and numeric rows of a CSV produced by the runner.
fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn column(csv: &(Vec<String>, Vec<Vec<f64>>), name: &str) -> Vec<f64> {
    let i = csv.0.iter().position(|c| c == name).unwrap();
    csv.1.iter().map(|r| r[i]).collect()
}

fn run_to_csv(dir: &TempDir, sub: &str, config: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let cfg = write(dir, &format!("{sub}.cfg"), config);
    let out = dir.path().join(format!("{sub}.csv"));
    let o = qew(&[sub, "--config", &cfg, "--output", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    read_csv(&out)
}

#[test]
fn simulate_coherent_reference() {
    let dir = TempDir::new().unwrap();
    let csv = run_to_csv(
        &dir,
        "simulate",
        "scenario.upsilon = 0.01\nscenario.gamma0 = 1\nphoton.kind = coherent\nphoton.nu0 = 100\n",
    );
    assert_eq!(csv.1.len(), 1);
    assert_eq!(csv.0[0], "dnu1_num");
    assert_eq!(csv.0.last().unwrap(), "extinction");
    let (num, oracle) = (column(&csv, "dnu1_num")[0], column(&csv, "oracle_dnu1")[0]);
    assert!((num - 0.242612).abs() < 1e-6);
    assert!(((num - oracle) / oracle).abs() < 1e-6);
}

#[test]
fn simulate_fock_and_zero_coupling() {
    let dir = TempDir::new().unwrap();
    let fock = run_to_csv(&dir, "simulate", "scenario.upsilon = 0.02\nphoton.kind = fock\nphoton.nu0 = 7\nscenario.theta = 1\n");
    assert!(column(&fock, "dnu1_num")[0].abs() < 1e-12);
    let zero = run_to_csv(&dir, "simulate", "photon.nu0 = 9\n");
    for name in ["dnu1_num", "dnu2_num", "dE1_num", "dE2_num", "dnu_direct", "dE_direct", "norm_deficit"] {
        assert_eq!(column(&zero, name)[0], 0.0, "{name}");
    }
}

#[test]
fn sweep_phase_follows_cosine() {
    let dir = TempDir::new().unwrap();
    let csv = run_to_csv(
        &dir,
        "sweep",
        &format!("scenario.upsilon = 0.01\nphoton.nu0 = 4\nscenario.theta = 0.8\nsweep.parameter = phi0\nsweep.from = 0\nsweep.to = {}\nsweep.steps = 9\n", 2.0 * PI),
    );
    assert_eq!(csv.0[0], "phi0");
    let (phi, dnu1) = (column(&csv, "phi0"), column(&csv, "dnu1_num"));
    assert_eq!(phi.len(), 9);
    let scale = dnu1[0] / 0.4f64.cos();
    for (p, d) in phi.iter().zip(&dnu1) {
        assert!((d - scale * (0.4 + p).cos()).abs() < 1e-12);
    }
}

#[test]
fn sweep_gamma_leaves_second_order_fixed() {
    let dir = TempDir::new().unwrap();
    let csv = run_to_csv(
        &dir,
        "sweep",
        "scenario.upsilon = 0.01\nphoton.nu0 = 4\nrun.epsilon = 0.1\nscenario.theta = 1\nsweep.parameter = gamma0\nsweep.from = 0.3\nsweep.to = 3\nsweep.steps = 6\n",
    );
    let dnu2 = column(&csv, "dnu2_num");
    for d in &dnu2 {
        assert!(((d - dnu2[0]) / dnu2[0]).abs() < 1e-10);
    }
}

#[test]
fn sweep_squeeze_tracks_sinh_squared() {
    let dir = TempDir::new().unwrap();
    let csv = run_to_csv(
        &dir,
        "sweep",
        "scenario.upsilon = 0.01\nphoton.kind = squeezed\nphoton.nu0 = 0\nrun.epsilon = 0.1\nscenario.theta = 1.5\nsweep.parameter = xi\nsweep.from = 0\nsweep.to = 1\nsweep.steps = 5\n",
    );
    let (xi, dnu2) = (column(&csv, "xi"), column(&csv, "dnu2_num"));
    let unit = (dnu2[4] - dnu2[0]) / 1f64.sinh().powi(2);
    for (x, d) in xi.iter().zip(&dnu2) {
        assert!(((d - dnu2[0]) - unit * x.sinh().powi(2)).abs() < 1e-12);
    }
}

#[test]
fn fig3a_columns() {
    let dir = TempDir::new().unwrap();
    let cfg = "scenario.upsilon = 0.05\nphoton.nu0 = 1\nfig3a.gamma_from = 0.05\nfig3a.gamma_to = 4\nfig3a.steps = 30\nfig3a.scale = log\n";
    let csv = run_to_csv(&dir, "fig3a", cfg);
    let norm = column(&csv, "normalized_emission");
    assert!((norm[0] - 1.0).abs() < 2e-3);
    let floor = column(&csv, "vacuum_floor");
    for f in &floor {
        assert!((f - 0.0025).abs() < 1e-14);
    }
    let text = fs::read_to_string(dir.path().join("fig3a.csv")).unwrap();
    assert!(text.contains("# crossing gamma = "));
    assert!(!text.contains("none in range"));
    let ratio: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("# point-particle signal over floor = "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((ratio - 80.0).abs() < 1e-9);
}

#[test]
fn fig3b_symmetry_and_reference_point() {
    let dir = TempDir::new().unwrap();
    let sigma = 0.7 * 800e-9 / (2.0 * PI);
    let csv = run_to_csv(
        &dir,
        "fig3b",
        &format!("fig3b.sigma_from = {sigma:e}\nfig3b.sigma_to = 2e-7\nfig3b.sigma_steps = 3\nfig3b.drift_from = -0.2\nfig3b.drift_to = 0.2\nfig3b.drift_steps = 5\n"),
    );
    let ext = column(&csv, "extinction");
    let drift = column(&csv, "drift_length");
    assert_eq!(drift[2], 0.0);
    assert!((ext[2] - (-0.5f64).exp()).abs() < 1e-12);
    for s in 0..3 {
        let row = &ext[s * 5..s * 5 + 5];
        assert_eq!(row[0], row[4]);
        assert_eq!(row[1], row[3]);
    }
}

#[test]
fn smith_purcell_peak_and_scaling() {
    let dir = TempDir::new().unwrap();
    let base = "sp.omega_from = 1.12e15\nsp.omega_to = 1.14e15\nsp.omega_steps = 201\n";
    let a = run_to_csv(&dir, "smith-purcell", base);
    let b = run_to_csv(&dir, "smith-purcell", &format!("{base}sp.length = 2e-4\n"));
    let (theta, d) = (column(&a, "theta_bar"), column(&a, "d2nu_domega_dOmega"));
    let peak = d.iter().enumerate().max_by(|x, y| x.1.total_cmp(y.1)).unwrap().0;
    let closest = theta.iter().enumerate().min_by(|x, y| x.1.abs().total_cmp(&y.1.abs())).unwrap().0;
    assert_eq!(peak, closest);
    let db = column(&b, "d2nu_domega_dOmega");
    let tb = column(&b, "theta_bar");
    for i in 0..d.len() {
        assert_eq!(tb[i], 2.0 * theta[i]);
    }
    // same detuning only at the synchronous point; compare the L² factor via the peak envelope
    assert!((db[closest] / d[closest] - 4.0).abs() < 1e-2);
}

#[test]
fn output_is_byte_deterministic_across_workers() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.cfg", "scenario.upsilon = 0.01\nphoton.nu0 = 4\nfig3a.steps = 8\n");
    let mut outputs = Vec::new();
    for workers in ["1", "3"] {
        let out = dir.path().join(format!("w{workers}.csv"));
        let o = qew(&["fig3a", "--config", &cfg, "--output", out.to_str().unwrap(), "--workers", workers]);
        assert!(o.status.success());
        outputs.push(fs::read(out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let text = String::from_utf8(outputs.remove(0)).unwrap();
    assert!(!text.contains('\r'));
    assert!(text.starts_with("# fig3a.steps = 8\n# photon.nu0 = 4\n# scenario.upsilon = 0.01\n"));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let unknown = write(&dir, "u.cfg", "scenario.upsilom = 0.01\n");
    assert_eq!(qew(&["simulate", "--config", &unknown]).status.code(), Some(2));
    assert_eq!(qew(&["simulate", "--config", "/nonexistent/qew.cfg"]).status.code(), Some(2));
    let strong = write(&dir, "s.cfg", "scenario.upsilon = 0.2\nphoton.nu0 = 100\n");
    assert_eq!(qew(&["simulate", "--config", &strong]).status.code(), Some(3));
    let no_sweep = write(&dir, "n.cfg", "photon.nu0 = 1\n");
    assert_eq!(qew(&["sweep", "--config", &no_sweep]).status.code(), Some(2));
    assert_eq!(qew(&["simulate", "--workers", "0"]).status.code(), Some(2));
}

#[test]
fn verify_report_and_failure_path() {
    let o = qew(&["verify"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 16);
    assert!(text.contains("ratio 0.5000"));
    let all_pass = text.contains("15 checks, 0 failed");
    assert_eq!(o.status.code(), Some(if all_pass { 0 } else { 1 }));

    let o = qew(&["verify", "--tolerance-scale", "1e-30"]);
    assert_eq!(o.status.code(), Some(1));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().filter(|l| l.contains(" FAIL ")).count() > 8);
}
