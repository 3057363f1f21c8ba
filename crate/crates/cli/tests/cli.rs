//! End-to-end tests of the binary: exit codes, artifact shapes, byte
//! reproducibility, and agreement between the figure and sweep routes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_subrad-sync"))
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("config.json");
    std::fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).to_string()
}

/// Parses one of our CSV artifacts: header comment, column names, float rows.
fn read_table(path: &Path) -> (String, Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    assert!(header.starts_with("# subrad-sync "), "missing header comment");
    let columns: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse::<f64>().unwrap()).collect())
        .collect();
    (header, columns, rows)
}

fn col(columns: &[String], name: &str) -> usize {
    columns
        .iter()
        .position(|c| c == name)
        .unwrap_or_else(|| panic!("no column {name}"))
}

const FIG3_CONFIG: &str = r#"{
  "gamma1": 1.1, "gamma2": 0.9, "gamma12": 0.95, "s12": 0.6,
  "delta": 1.0, "omega0": 10.0,
  "state": "plusplus", "horizon": 5.0, "dt": 0.05,
  "observables": ["sx1", "sx2", "intensity"]
}"#;

#[test]
fn spectrum_emits_the_decomposition() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), FIG3_CONFIG);
    let out = run(&[
        "spectrum",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));

    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("spectrum.json")).unwrap())
            .unwrap();
    assert_eq!(json["degenerate"], serde_json::json!(false));
    assert_eq!(json["sectors"].as_array().unwrap().len(), 5);

    let text = std::fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    let mut rates = Vec::new();
    for line in text.lines().skip(2) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 4);
        if fields[0] == "a" {
            rates.push(fields[2].parse::<f64>().unwrap());
        }
    }
    assert_eq!(rates.len(), 6);
    // The slow population mode relaxes at gamma0 - Re V.
    let target = -0.16778257986254363;
    let best = rates
        .iter()
        .copied()
        .min_by(|a, b| (a - target).abs().partial_cmp(&(b - target).abs()).unwrap())
        .unwrap();
    assert!((best - target).abs() < 1e-12, "slow rate {best}");
}

#[test]
fn spectrum_rejects_the_dicke_limit() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"gamma1": 1.0, "gamma2": 1.0, "gamma12": 1.0, "s12": 0.0,
            "delta": 0.0, "omega0": 10.0}"#,
    );
    let out = run(&[
        "spectrum",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_of(&out);
    assert!(err.contains("degenerate"), "stderr: {err}");
    assert!(err.contains("collide"), "stderr: {err}");
}

#[test]
fn invalid_parameters_exit_one() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"gamma1": 1.0, "gamma2": 1.0, "gamma12": 1.5, "s12": 0.0,
            "delta": 1.0, "omega0": 10.0}"#,
    );
    let out = run(&["spectrum", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_config_keys_exit_one() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"gamma1": 1.0, "gamma2": 1.0, "gamma12": 0.5, "s12": 0.0,
            "delta": 1.0, "omega0": 10.0, "bogus": 3}"#,
    );
    let out = run(&["spectrum", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("bogus"));
}

#[test]
fn evolve_writes_modal_and_check_columns() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), FIG3_CONFIG);
    let out = run(&[
        "evolve",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));

    let (header, columns, rows) = read_table(&dir.path().join("evolve.csv"));
    assert_eq!(columns.len(), 1 + 32 + 3 + 32 + 3);
    assert_eq!(rows.len(), 101);
    assert!(header.contains("max_deviation="));

    // The uncorrelated |+>|+> state starts with unit local dipoles and
    // total emission gamma1 + gamma2 on equal populations.
    let first = &rows[0];
    assert!((first[col(&columns, "sx1")] - 1.0).abs() < 1e-9);
    assert!((first[col(&columns, "sx2")] - 1.0).abs() < 1e-9);
    assert!((first[col(&columns, "intensity")] - (0.5 * (1.1 + 0.9) + 0.5 * 0.95)).abs() < 1e-9);

    // Check columns mirror the main ones within the oracle tolerance.
    for row in &rows {
        for name in ["re_rho_00", "im_rho_12", "sx1", "intensity"] {
            let main = row[col(&columns, name)];
            let check = row[col(&columns, &format!("{name}_check"))];
            assert!((main - check).abs() < 1e-6, "{name}: {main} vs {check}");
        }
    }
}

#[test]
fn evolve_is_byte_reproducible() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), FIG3_CONFIG);
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    for out_dir in [&out_a, &out_b] {
        let out = run(&[
            "evolve",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    }
    let a = std::fs::read(out_a.join("evolve.csv")).unwrap();
    let b = std::fs::read(out_b.join("evolve.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn evolve_accepts_an_explicit_density_matrix() {
    let dir = TempDir::new().unwrap();
    // |+>|+><+|<+| has every entry 1/4.
    let quarter = "[0.25, 0.0]";
    let row = format!("[{quarter}, {quarter}, {quarter}, {quarter}]");
    let cfg = write_config(
        dir.path(),
        &format!(
            r#"{{"gamma1": 1.1, "gamma2": 0.9, "gamma12": 0.95, "s12": 0.6,
                "delta": 1.0, "omega0": 10.0,
                "state_matrix": [{row}, {row}, {row}, {row}],
                "horizon": 1.0, "dt": 0.1, "out_dir": "artifacts"}}"#
        ),
    );
    let out = bin()
        .args(["evolve", "--config", cfg.to_str().unwrap()])
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    // Output lands in the configured directory when --out is absent.
    assert!(dir.path().join("artifacts/evolve.csv").is_file());
}

#[test]
fn evolve_rejects_a_non_state_matrix() {
    let dir = TempDir::new().unwrap();
    // Trace 2: not a density matrix.
    let cfg = write_config(
        dir.path(),
        r#"{"gamma1": 1.0, "gamma2": 1.0, "gamma12": 0.5, "s12": 0.6,
            "delta": 1.0, "omega0": 10.0,
            "state_matrix": [
              [[1.0,0.0],[0.0,0.0],[0.0,0.0],[0.0,0.0]],
              [[0.0,0.0],[1.0,0.0],[0.0,0.0],[0.0,0.0]],
              [[0.0,0.0],[0.0,0.0],[0.0,0.0],[0.0,0.0]],
              [[0.0,0.0],[0.0,0.0],[0.0,0.0],[0.0,0.0]]],
            "horizon": 1.0, "dt": 0.1}"#,
    );
    let out = run(&["evolve", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn evolve_requires_an_initial_state() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"gamma1": 1.0, "gamma2": 1.0, "gamma12": 0.5, "s12": 0.6,
            "delta": 1.0, "omega0": 10.0}"#,
    );
    let out = run(&["evolve", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("initial state"));
}

#[test]
fn figure_fig6_equals_the_matching_sweep() {
    let dir = TempDir::new().unwrap();
    let out = run(&[
        "figure",
        "--id",
        "fig6",
        "--out",
        dir.path().join("fig").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));

    let cfg = write_config(
        dir.path(),
        r#"{"gamma1": 1.0, "gamma2": 1.0, "gamma12": 0.0, "s12": 0.6,
            "delta": 1.0, "omega0": 10.0,
            "sweep": {"grid": [{"field": "gamma12", "min": 0.0, "max": 1.0, "n": 21}],
                      "diagnostics": ["C_delayed", "R_I"]}}"#,
    );
    let out = run(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().join("sw").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));

    let fig = std::fs::read(dir.path().join("fig/fig6.csv")).unwrap();
    let sw = std::fs::read(dir.path().join("sw/sweep.csv")).unwrap();
    assert_eq!(fig, sw, "figure and sweep artifacts differ");

    // Synchronization and relative emission both approach 1 at full cross
    // decay; both are far from 1 without it.
    let (_, columns, rows) = read_table(&dir.path().join("fig/fig6.csv"));
    assert_eq!(rows.len(), 21);
    let c = col(&columns, "C_delayed");
    let r = col(&columns, "R_I");
    assert!(rows[20][c] > 0.999 && rows[20][r] > 0.99);
    assert!(rows[0][c] < 0.5 && rows[0][r] < 0.5);
}

#[test]
fn sweep_single_point_agrees_with_the_spectrum_constants() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"gamma1": 1.1, "gamma2": 0.9, "gamma12": 0.95, "s12": 0.6,
            "delta": 1.0, "omega0": 10.0,
            "sweep": {"grid": [{"field": "gamma12", "min": 0.95, "max": 0.95, "n": 1}],
                      "diagnostics": ["kappaS", "nuS"]}}"#,
    );
    let out = run(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let (_, columns, rows) = read_table(&dir.path().join("sweep.csv"));
    assert_eq!(rows.len(), 1);
    assert!((rows[0][col(&columns, "kappaS")] - 0.8322174201374564).abs() < 1e-12);
    assert!((rows[0][col(&columns, "nuS")] - 9.2550023767856296).abs() < 1e-12);
}

#[test]
fn sweep_rejects_malformed_grids() {
    let dir = TempDir::new().unwrap();
    let cases = [
        // Unknown field name.
        r#"{"field": "coupling", "min": 0.0, "max": 1.0, "n": 5}"#,
        // Empty axis.
        r#"{"field": "gamma12", "min": 0.0, "max": 1.0, "n": 0}"#,
        // Reversed bounds.
        r#"{"field": "gamma12", "min": 1.0, "max": 0.0, "n": 5}"#,
    ];
    for axis in cases {
        let cfg = write_config(
            dir.path(),
            &format!(
                r#"{{"gamma1": 1.0, "gamma2": 1.0, "gamma12": 0.5, "s12": 0.6,
                    "delta": 1.0, "omega0": 10.0,
                    "sweep": {{"grid": [{axis}], "diagnostics": ["kappaS"]}}}}"#
            ),
        );
        let out = run(&["sweep", "--config", cfg.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(1), "axis {axis}");
    }

    // Unknown diagnostic.
    let cfg = write_config(
        dir.path(),
        r#"{"gamma1": 1.0, "gamma2": 1.0, "gamma12": 0.5, "s12": 0.6,
            "delta": 1.0, "omega0": 10.0,
            "sweep": {"grid": [{"field": "gamma12", "min": 0.0, "max": 1.0, "n": 3}],
                      "diagnostics": ["entropy"]}}"#,
    );
    let out = run(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn figure_rejects_unknown_ids() {
    let out = run(&["figure", "--id", "fig9"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn fig2_shows_the_threshold_zero_line() {
    let dir = TempDir::new().unwrap();
    let out = run(&["figure", "--id", "fig2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let (_, columns, rows) = read_table(&dir.path().join("fig2.csv"));
    assert_eq!(rows.len(), 101 * 101);
    let (d, s, k) = (
        col(&columns, "delta"),
        col(&columns, "s12"),
        col(&columns, "kappaS"),
    );
    for row in &rows {
        if row[s] == 0.0 && row[d] >= 0.81 {
            // Without coherent coupling the collective rate shuts off past
            // the threshold detuning.
            assert!(row[k].abs() < 1e-12, "kappa {} at delta {}", row[k], row[d]);
        }
        if row[s] >= 0.1 {
            assert!(row[k] > 0.0, "kappa not positive at s12 {}", row[s]);
        }
    }
}

#[test]
fn fig5_reference_curve_decays_at_the_bare_rate() {
    let dir = TempDir::new().unwrap();
    let out = run(&["figure", "--id", "fig5", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let (_, columns, rows) = read_table(&dir.path().join("fig5.csv"));
    let t = col(&columns, "t");
    let ia = col(&columns, "IA");
    // One independent excited atom: I(t)/(2 gamma0) = exp(-t)/2.
    let row = rows.iter().find(|r| (r[t] - 10.0).abs() < 1e-9).unwrap();
    let expected = (10.0f64.exp().recip() / 2.0).log10();
    assert!((row[ia] - expected).abs() < 1e-9, "IA {} vs {}", row[ia], expected);
    // The doubly excited state starts at the full two-atom rate.
    let ee = col(&columns, "ee");
    assert!(rows[0][ee].abs() < 1e-12);
}

#[test]
fn fig3_reports_emerging_synchronization() {
    let dir = TempDir::new().unwrap();
    let out = run(&["figure", "--id", "fig3", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));

    let (_, columns, rows) = read_table(&dir.path().join("fig3.csv"));
    assert_eq!(rows.len(), 1551);
    assert!((rows[0][col(&columns, "sx1")] - 1.0).abs() < 1e-9);

    let (_, columns, rows) = read_table(&dir.path().join("fig3_inset.csv"));
    let c = col(&columns, "C_delayed");
    let last = rows.last().unwrap();
    assert!(last[c] > 0.999, "delayed correlation {} never locked", last[c]);
}

#[test]
fn svg_artifacts_are_emitted_on_request() {
    let dir = TempDir::new().unwrap();
    let out = run(&[
        "figure",
        "--id",
        "fig4a",
        "--out",
        dir.path().to_str().unwrap(),
        "--svg",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    assert!(dir.path().join("fig4a.csv").is_file());
    let svg = std::fs::read_to_string(dir.path().join("fig4a.svg")).unwrap();
    assert!(svg.starts_with("<svg "));
    assert!(svg.trim_end().ends_with("</svg>"));
}

#[test]
fn missing_config_exits_one() {
    let out = run(&["spectrum"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).contains("--config"));
}
