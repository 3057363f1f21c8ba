//! The four subcommands. Spectrum and evolve work from the run
//! configuration; figure regenerates bundled datasets from baked-in
//! parameters; sweep tabulates scalar diagnostics over a parameter grid.
//! Figure ids `fig2` and `fig6` route through the same sweep executor as
//! the sweep command, so a sweep over the matching grid reproduces those
//! files byte for byte.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use subrad_core::analysis::{
    bloch_series_modal, delayed_pearson, delayed_pearson_at, radiation_observable,
    radiation_series_modal, subradiance_ratio_at, SignalSeries, DEFAULT_SIGNAL_DT,
};
use subrad_core::dynamics::{evolve_modal, propagate_rk4, TimeGrid, Trajectory};
use subrad_core::hilbert::{
    local_pauli, named_state, total_excitation, DensityMatrix, NamedState, Observable, Pauli,
};
use subrad_core::liouvillian::build_full;
use subrad_core::spectral::{
    collective_states, spectral_decomposition, sync_constants, SpectralDecomposition,
};
use subrad_core::{CoreError, SystemParams};

use crate::config::{GridAxis, RunConfig, SweepSpec};
use crate::error::{CliError, Result};
use crate::output::{fmt_value, write_text, Table};
use crate::svg;

/// Inner step of the Runge-Kutta cross-check, in units of 1/gamma0.
const RK4_SUBSTEP: f64 = 1e-3;
/// Largest tolerated deviation between the modal and integrator routes.
const ORACLE_TOLERANCE: f64 = 1e-6;

/// Where artifacts go and whether plots are rendered alongside them.
pub struct OutputSpec {
    pub dir: PathBuf,
    pub svg: bool,
}

impl OutputSpec {
    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }
}

fn report_written(path: &Path) {
    println!("wrote {}", path.display());
}

fn params_meta(p: &SystemParams) -> Vec<(String, String)> {
    p.summary_pairs()
        .into_iter()
        .map(|(k, v)| (k.to_string(), format!("{v}")))
        .collect()
}

/// Rejects a decomposition the modal machinery cannot expand.
fn require_simple(decomp: &SpectralDecomposition) -> Result<()> {
    if decomp.degenerate() {
        return Err(CliError::Core(CoreError::DegenerateSpectrum(
            decomp.notes().join("; "),
        )));
    }
    Ok(())
}

pub fn cmd_spectrum(cfg: &RunConfig, out: &OutputSpec) -> Result<()> {
    let p = cfg.params()?;
    let decomp = spectral_decomposition(&p)?;
    require_simple(&decomp)?;

    let json_path = out.path("spectrum.json");
    write_text(&json_path, &serde_json::to_string_pretty(&decomp.to_json()).unwrap())?;
    report_written(&json_path);

    let mut csv = crate::output::header_line(&cfg.header_pairs(None));
    csv.push('\n');
    csv.push_str("sector,index,re_lambda,im_lambda\n");
    for (sector, index, value) in decomp.eigenvalues() {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            sector.name(),
            index,
            fmt_value(value.re),
            fmt_value(value.im)
        ));
    }
    let csv_path = out.path("spectrum.csv");
    std::fs::write(&csv_path, csv)?;
    report_written(&csv_path);

    if out.svg {
        let eigenvalues = decomp.eigenvalues();
        let res: Vec<f64> = eigenvalues.iter().map(|(_, _, v)| v.re).collect();
        let ims: Vec<f64> = eigenvalues.iter().map(|(_, _, v)| v.im).collect();
        let body = svg::scatter(&res, &ims, "Re lambda [gamma0]", "Im lambda [gamma0]");
        let svg_path = out.path("spectrum.svg");
        write_text(&svg_path, &body)?;
        report_written(&svg_path);
    }
    Ok(())
}

fn observable_from_token(p: &SystemParams, token: &str) -> Result<Observable> {
    match token {
        "sx1" => Ok(local_pauli(1, Pauli::X)?),
        "sy1" => Ok(local_pauli(1, Pauli::Y)?),
        "sz1" => Ok(local_pauli(1, Pauli::Z)?),
        "sx2" => Ok(local_pauli(2, Pauli::X)?),
        "sy2" => Ok(local_pauli(2, Pauli::Y)?),
        "sz2" => Ok(local_pauli(2, Pauli::Z)?),
        "excitation" => Ok(total_excitation()),
        "intensity" => Ok(radiation_observable(p)),
        _ => Err(CliError::input(format!(
            "unknown observable `{token}` (expected sx1, sy1, sz1, sx2, sy2, sz2, \
             excitation, intensity)"
        ))),
    }
}

/// State columns in the fixed index order, re parts then im parts.
fn state_columns(suffix: &str) -> Vec<String> {
    let mut cols = Vec::new();
    for part in ["re", "im"] {
        for i in 0..4 {
            for j in 0..4 {
                cols.push(format!("{part}_rho_{i}{j}{suffix}"));
            }
        }
    }
    cols
}

fn state_values(rho: &DensityMatrix) -> Vec<f64> {
    let m = rho.matrix();
    let mut vals = Vec::with_capacity(32);
    for i in 0..4 {
        for j in 0..4 {
            vals.push(m[(i, j)].re);
        }
    }
    for i in 0..4 {
        for j in 0..4 {
            vals.push(m[(i, j)].im);
        }
    }
    vals
}

fn max_state_deviation(a: &Trajectory, b: &Trajectory) -> f64 {
    let mut dev: f64 = 0.0;
    for k in 0..a.states().len() {
        let (ma, mb) = (a.state(k).matrix(), b.state(k).matrix());
        for i in 0..4 {
            for j in 0..4 {
                let d = ma[(i, j)] - mb[(i, j)];
                dev = dev.max(d.re.abs()).max(d.im.abs());
            }
        }
    }
    dev
}

pub fn cmd_evolve(cfg: &RunConfig, out: &OutputSpec) -> Result<()> {
    let p = cfg.params()?;
    let rho0 = cfg.initial_state(&p)?;
    let decomp = spectral_decomposition(&p)?;
    require_simple(&decomp)?;
    let grid = TimeGrid::span(cfg.horizon, cfg.dt)?;

    let modal = evolve_modal(&rho0, &decomp, &grid)?;
    let full = build_full(&p);
    let rk4 = propagate_rk4(&rho0, &full, &grid, RK4_SUBSTEP)?;
    let deviation = max_state_deviation(&modal, &rk4);

    let observables = cfg
        .observables
        .iter()
        .map(|token| Ok((token.clone(), observable_from_token(&p, token)?)))
        .collect::<Result<Vec<_>>>()?;

    let mut columns = vec!["t".to_string()];
    columns.extend(state_columns(""));
    columns.extend(observables.iter().map(|(token, _)| token.clone()));
    columns.extend(state_columns("_check"));
    columns.extend(observables.iter().map(|(token, _)| format!("{token}_check")));

    let mut meta = cfg.header_pairs(None);
    meta.push(("state".to_string(), cfg.state_label()));
    meta.push(("horizon".to_string(), format!("{}", cfg.horizon)));
    meta.push(("dt".to_string(), format!("{}", cfg.dt)));
    meta.push(("substep".to_string(), format!("{RK4_SUBSTEP}")));
    meta.push(("max_deviation".to_string(), fmt_value(deviation)));

    let mut table = Table::new(meta, columns);
    for (k, t) in grid.times().into_iter().enumerate() {
        let mut row = vec![t];
        row.extend(state_values(modal.state(k)));
        row.extend(observables.iter().map(|(_, o)| modal.state(k).expect(o)));
        row.extend(state_values(rk4.state(k)));
        row.extend(observables.iter().map(|(_, o)| rk4.state(k).expect(o)));
        table.push_row(row);
    }
    let csv_path = out.path("evolve.csv");
    table.write_csv(&csv_path)?;
    report_written(&csv_path);
    println!("max modal-vs-integrator deviation: {}", fmt_value(deviation));

    if out.svg {
        let times: Vec<f64> = table.rows().iter().map(|r| r[0]).collect();
        let series: Vec<(String, Vec<f64>)> = if observables.is_empty() {
            // With no observables requested, plot the four populations.
            [("pop_ee", 1), ("pop_eg", 6), ("pop_ge", 11), ("pop_gg", 16)]
                .iter()
                .map(|(label, col)| {
                    (label.to_string(), table.rows().iter().map(|r| r[*col]).collect())
                })
                .collect()
        } else {
            observables
                .iter()
                .enumerate()
                .map(|(i, (token, _))| {
                    let col = 1 + 32 + i;
                    (token.clone(), table.rows().iter().map(|r| r[col]).collect())
                })
                .collect()
        };
        let body = svg::line_plot(&times, &series, "t [1/gamma0]", "expectation value");
        let svg_path = out.path("evolve.svg");
        write_text(&svg_path, &body)?;
        report_written(&svg_path);
    }

    if deviation > ORACLE_TOLERANCE {
        return Err(CliError::Deviation(format!(
            "modal and integrator trajectories differ by {deviation:.3e} \
             (tolerance {ORACLE_TOLERANCE:.0e}); see {}",
            csv_path.display()
        )));
    }
    Ok(())
}

/// One sweep point of the synchronization diagnostics: the delayed dipole
/// correlation at `t_star` and the emission relative to the subradiant tail,
/// both from the shared uncorrelated initial state.
fn sync_point(p: &SystemParams, t_star: f64, window: f64) -> Result<(f64, f64, f64)> {
    let sc = sync_constants(p);
    if sc.nu_s <= 0.0 {
        return Err(CliError::Core(CoreError::InvalidArgument(format!(
            "locked frequency {} is not positive at these parameters",
            sc.nu_s
        ))));
    }
    let period = TAU / sc.nu_s;
    let horizon = t_star + window + period + 0.5;
    let grid = TimeGrid::span(horizon, DEFAULT_SIGNAL_DT)?;
    let decomp = spectral_decomposition(p)?;
    let rho0 = named_state(NamedState::PlusPlus, None, None)?;
    let x1 = bloch_series_modal(&rho0, &decomp, 1, Pauli::X, &grid)?;
    let x2 = bloch_series_modal(&rho0, &decomp, 2, Pauli::X, &grid)?;
    let (c_delayed, delay) = delayed_pearson_at(&x1, &x2, t_star, window, period)?;
    let r_i = subradiance_ratio_at(&rho0, &decomp, t_star)?;
    Ok((c_delayed, delay, r_i))
}

fn axis_points(axis: &GridAxis) -> Vec<f64> {
    (0..axis.n).map(|k| axis.value(k)).collect()
}

/// Expands the grid and tabulates the requested diagnostics, one row per
/// point, axis values first. Row order is axis-major: the first named axis
/// varies slowest.
fn run_sweep(cfg: &RunConfig) -> Result<Table> {
    let spec = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::input("sweep requires a `sweep` section in the config".into()))?;
    spec.validate()?;

    let mut columns: Vec<String> = spec.grid.iter().map(|a| a.field.clone()).collect();
    columns.extend(spec.diagnostics.iter().cloned());

    let mut meta = cfg.header_pairs(Some(spec));
    if spec.wants_sync() {
        meta.push(("state".to_string(), "plusplus".to_string()));
        meta.push(("t_star".to_string(), format!("{}", spec.t_star)));
        meta.push(("window".to_string(), format!("{}", spec.window)));
    }

    let outer = axis_points(&spec.grid[0]);
    let inner: Vec<f64> = spec.grid.get(1).map(axis_points).unwrap_or_else(|| vec![0.0]);

    let mut table = Table::new(meta, columns);
    for &v0 in &outer {
        for &v1 in &inner {
            let mut overrides = vec![(spec.grid[0].field.as_str(), v0)];
            let mut row = vec![v0];
            if let Some(axis1) = spec.grid.get(1) {
                overrides.push((axis1.field.as_str(), v1));
                row.push(v1);
            }
            let p = cfg.params_with(&overrides)?;
            let sc = sync_constants(&p);
            let sync = if spec.wants_sync() {
                Some(sync_point(&p, spec.t_star, spec.window)?)
            } else {
                None
            };
            for d in &spec.diagnostics {
                let value = match d.as_str() {
                    "kappaS" => sc.kappa_s,
                    "nuS" => sc.nu_s,
                    "C_delayed" => sync.unwrap().0,
                    "delay" => sync.unwrap().1,
                    "R_I" => sync.unwrap().2,
                    _ => unreachable!("diagnostics are validated"),
                };
                row.push(value);
            }
            table.push_row(row);
        }
    }
    Ok(table)
}

fn sweep_svg(table: &Table, spec: &SweepSpec, out: &OutputSpec, stem: &str) -> Result<()> {
    let body = if spec.grid.len() == 1 {
        let xs: Vec<f64> = table.rows().iter().map(|r| r[0]).collect();
        let series: Vec<(String, Vec<f64>)> = spec
            .diagnostics
            .iter()
            .enumerate()
            .map(|(i, d)| (d.clone(), table.rows().iter().map(|r| r[1 + i]).collect()))
            .collect();
        svg::line_plot(&xs, &series, &spec.grid[0].field, "diagnostic value")
    } else {
        let xs = axis_points(&spec.grid[0]);
        let ys = axis_points(&spec.grid[1]);
        let values: Vec<f64> = table.rows().iter().map(|r| r[2]).collect();
        svg::heatmap(
            &xs,
            &ys,
            &values,
            &spec.grid[0].field,
            &spec.grid[1].field,
            &spec.diagnostics[0],
        )
    };
    let path = out.path(&format!("{stem}.svg"));
    write_text(&path, &body)?;
    report_written(&path);
    Ok(())
}

pub fn cmd_sweep(cfg: &RunConfig, out: &OutputSpec) -> Result<()> {
    let table = run_sweep(cfg)?;
    let path = out.path("sweep.csv");
    table.write_csv(&path)?;
    report_written(&path);
    if out.svg {
        sweep_svg(&table, cfg.sweep.as_ref().unwrap(), out, "sweep")?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FigureId {
    Fig2,
    Fig3,
    Fig4a,
    Fig4b,
    Fig5,
    Fig6,
}

/// Parameters shared by the synchronization figures: detuned, asymmetric,
/// strongly coupled qubits.
fn sync_figure_params() -> SystemParams {
    SystemParams::new(1.1, 0.9, 0.95, 0.6, 1.0, 10.0).expect("fixed valid parameters")
}

/// The baked configuration behind fig2: a two-axis sweep of the collective
/// decay rate over detuning and coherent coupling.
fn fig2_config() -> RunConfig {
    let mut cfg = baseline_config(1.0, 1.0, 0.8, 0.0, 0.0, 10.0);
    cfg.sweep = Some(SweepSpec {
        grid: vec![
            GridAxis {
                field: "delta".to_string(),
                min: 0.0,
                max: 2.0,
                n: 101,
            },
            GridAxis {
                field: "s12".to_string(),
                min: 0.0,
                max: 1.0,
                n: 101,
            },
        ],
        diagnostics: vec!["kappaS".to_string()],
        t_star: 5.0,
        window: 2.0,
    });
    cfg
}

/// The baked configuration behind fig6: synchronization quality and
/// relative emission against the collective decay rate.
fn fig6_config() -> RunConfig {
    let mut cfg = baseline_config(1.0, 1.0, 0.0, 0.6, 1.0, 10.0);
    cfg.sweep = Some(SweepSpec {
        grid: vec![GridAxis {
            field: "gamma12".to_string(),
            min: 0.0,
            max: 1.0,
            n: 21,
        }],
        diagnostics: vec!["C_delayed".to_string(), "R_I".to_string()],
        t_star: 5.0,
        window: 2.0,
    });
    cfg
}

fn baseline_config(
    gamma1: f64,
    gamma2: f64,
    gamma12: f64,
    s12: f64,
    delta: f64,
    omega0: f64,
) -> RunConfig {
    RunConfig {
        gamma1,
        gamma2,
        gamma12,
        s12,
        delta,
        omega0,
        s1: 0.0,
        s2: 0.0,
        dep11: 0.0,
        dep22: 0.0,
        dep12: 0.0,
        state: None,
        state_matrix: None,
        horizon: 10.0,
        dt: 0.01,
        observables: Vec::new(),
        out_dir: None,
        emit_svg: false,
        sweep: None,
    }
}

/// Writes the two-dipole trace for one initial state: columns t, sx1, sx2.
fn dipole_figure(
    stem: &str,
    state: NamedState,
    horizon: f64,
    out: &OutputSpec,
) -> Result<(SystemParams, SpectralDecomposition, SignalSeries, SignalSeries)> {
    let p = sync_figure_params();
    let decomp = spectral_decomposition(&p)?;
    require_simple(&decomp)?;
    let cs = collective_states(&p)?;
    let rho0 = named_state(state, Some(&cs), Some(&p))?;
    let grid = TimeGrid::span(horizon, DEFAULT_SIGNAL_DT)?;
    let x1 = bloch_series_modal(&rho0, &decomp, 1, Pauli::X, &grid)?;
    let x2 = bloch_series_modal(&rho0, &decomp, 2, Pauli::X, &grid)?;

    let mut meta = params_meta(&p);
    meta.push(("state".to_string(), state.name().to_string()));
    meta.push(("horizon".to_string(), format!("{horizon}")));
    meta.push(("dt".to_string(), format!("{DEFAULT_SIGNAL_DT}")));
    let mut table = Table::new(
        meta,
        vec!["t".to_string(), "sx1".to_string(), "sx2".to_string()],
    );
    for k in 0..x1.len() {
        table.push_row(vec![x1.time(k), x1.values()[k], x2.values()[k]]);
    }
    let path = out.path(&format!("{stem}.csv"));
    table.write_csv(&path)?;
    report_written(&path);

    if out.svg {
        let times: Vec<f64> = (0..x1.len()).map(|k| x1.time(k)).collect();
        let series = vec![
            ("sx1".to_string(), x1.values().to_vec()),
            ("sx2".to_string(), x2.values().to_vec()),
        ];
        let body = svg::line_plot(&times, &series, "t [1/gamma0]", "local dipole <sigma_x>");
        let svg_path = out.path(&format!("{stem}.svg"));
        write_text(&svg_path, &body)?;
        report_written(&svg_path);
    }
    Ok((p, decomp, x1, x2))
}

/// fig3: dipole traces from the uncorrelated state, plus the inset table
/// with the plain and delayed correlations over the window start.
fn figure_sync_main(out: &OutputSpec) -> Result<()> {
    let (p, _decomp, x1, x2) = dipole_figure("fig3", NamedState::PlusPlus, 15.5, out)?;

    let sc = sync_constants(&p);
    let period = TAU / sc.nu_s;
    let window = 2.0;
    let report = delayed_pearson(&x1, &x2, window, period)?;

    let mut meta = params_meta(&p);
    meta.push(("state".to_string(), NamedState::PlusPlus.name().to_string()));
    meta.push(("window".to_string(), format!("{window}")));
    meta.push(("period".to_string(), fmt_value(period)));
    let mut table = Table::new(
        meta,
        vec![
            "t".to_string(),
            "C_plain".to_string(),
            "C_delayed".to_string(),
            "delay".to_string(),
        ],
    );
    for k in 0..report.times.len() {
        table.push_row(vec![
            report.times[k],
            report.plain[k],
            report.delayed[k],
            report.delays[k],
        ]);
    }
    let path = out.path("fig3_inset.csv");
    table.write_csv(&path)?;
    report_written(&path);

    if out.svg {
        let series = vec![
            ("C_plain".to_string(), report.plain.clone()),
            ("C_delayed".to_string(), report.delayed.clone()),
        ];
        let body = svg::line_plot(
            &report.times,
            &series,
            "window start t [1/gamma0]",
            "Pearson correlation",
        );
        let svg_path = out.path("fig3_inset.svg");
        write_text(&svg_path, &body)?;
        report_written(&svg_path);
    }
    Ok(())
}

/// fig5: emission rate against time, log scale, for the bare, collective
/// and dressed one-excitation states, the doubly excited state, and an
/// independent-atom reference.
fn figure_emission(out: &OutputSpec) -> Result<()> {
    let p = sync_figure_params();
    let decomp = spectral_decomposition(&p)?;
    require_simple(&decomp)?;
    let cs = collective_states(&p)?;
    let grid = TimeGrid::span(30.0, DEFAULT_SIGNAL_DT)?;
    let log_ratio = |v: f64, gamma0: f64| (v.max(1e-300) / (2.0 * gamma0)).log10();

    let states = [
        NamedState::S,
        NamedState::A,
        NamedState::SR,
        NamedState::AR,
        NamedState::SDelta,
        NamedState::ADelta,
        NamedState::Ee,
    ];
    let mut series: Vec<(String, Vec<f64>)> = Vec::new();
    for state in states {
        let rho0 = named_state(state, Some(&cs), Some(&p))?;
        let signal = radiation_series_modal(&rho0, &decomp, &grid)?;
        let values = signal
            .values()
            .iter()
            .map(|&v| log_ratio(v, p.gamma0()))
            .collect();
        series.push((state.name().to_string(), values));
    }

    // Independent-atom reference: no cross decay, no coherent coupling, one
    // excitation. The collective basis is undefined there, so this curve is
    // integrated rather than expanded in modes.
    let p_ia = SystemParams::new(1.0, 1.0, 0.0, 0.0, 1.0, 10.0)?;
    let rho_ia = named_state(NamedState::Eg, None, None)?;
    let traj = propagate_rk4(&rho_ia, &build_full(&p_ia), &grid, RK4_SUBSTEP)?;
    let obs = radiation_observable(&p_ia);
    let values = (0..grid.len())
        .map(|k| log_ratio(traj.state(k).expect(&obs), p_ia.gamma0()))
        .collect();
    series.push(("IA".to_string(), values));

    let mut meta = params_meta(&p);
    meta.push(("value".to_string(), "log10(I/(2*gamma0))".to_string()));
    meta.push(("ia_params".to_string(), "(1,1,0,0,1,10)".to_string()));
    meta.push(("ia_state".to_string(), "eg".to_string()));
    meta.push(("horizon".to_string(), "30".to_string()));
    meta.push(("dt".to_string(), format!("{DEFAULT_SIGNAL_DT}")));
    let mut columns = vec!["t".to_string()];
    columns.extend(series.iter().map(|(label, _)| label.clone()));
    let mut table = Table::new(meta, columns);
    for k in 0..grid.len() {
        let mut row = vec![grid.at(k)];
        row.extend(series.iter().map(|(_, vs)| vs[k]));
        table.push_row(row);
    }
    let path = out.path("fig5.csv");
    table.write_csv(&path)?;
    report_written(&path);

    if out.svg {
        let times = grid.times();
        let body = svg::line_plot(&times, &series, "t [1/gamma0]", "log10(I/(2*gamma0))");
        let svg_path = out.path("fig5.svg");
        write_text(&svg_path, &body)?;
        report_written(&svg_path);
    }
    Ok(())
}

fn write_sweep_figure(cfg: &RunConfig, stem: &str, out: &OutputSpec) -> Result<()> {
    let table = run_sweep(cfg)?;
    let path = out.path(&format!("{stem}.csv"));
    table.write_csv(&path)?;
    report_written(&path);
    if out.svg {
        sweep_svg(&table, cfg.sweep.as_ref().unwrap(), out, stem)?;
    }
    Ok(())
}

pub fn cmd_figure(id: FigureId, out: &OutputSpec) -> Result<()> {
    match id {
        FigureId::Fig2 => write_sweep_figure(&fig2_config(), "fig2", out),
        FigureId::Fig3 => figure_sync_main(out),
        FigureId::Fig4a => dipole_figure("fig4a", NamedState::GPlusAR, 15.5, out).map(|_| ()),
        FigureId::Fig4b => dipole_figure("fig4b", NamedState::GPlusSR, 15.5, out).map(|_| ()),
        FigureId::Fig5 => figure_emission(out),
        FigureId::Fig6 => write_sweep_figure(&fig6_config(), "fig6", out),
    }
}
