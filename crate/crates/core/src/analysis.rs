//! Observables over time and the quantities built from them: transverse
//! dipole signals, emission rate and its integral, the subradiance ratio,
//! and the plain/delayed Pearson correlations that quantify
//! synchronization.

use num_complex::Complex64;

use crate::error::CoreError;
use crate::hilbert::{local_pauli, DensityMatrix, NamedState, Observable, Pauli};
use crate::hs::{hs_inner, vectorize_op};
use crate::dynamics::{TimeGrid, Trajectory};
use crate::liouvillian::Sector;
use crate::params::SystemParams;
use crate::spectral::{
    collective_states, mode_weights, spectral_decomposition, sync_constants,
    SpectralDecomposition,
};
use crate::Result;

/// Default sampling step for signal series, in units of 1/gamma0.
pub const DEFAULT_SIGNAL_DT: f64 = 1e-2;
/// Default correlation window length, in units of 1/gamma0.
pub const DEFAULT_WINDOW: f64 = 2.0;
/// Number of trial delays per oscillation period in the delay search.
pub const DELAY_GRID: usize = 256;

/// A real-valued signal sampled on a uniform time grid.
#[derive(Debug, Clone)]
pub struct SignalSeries {
    label: String,
    t0: f64,
    dt: f64,
    values: Vec<f64>,
}

impl SignalSeries {
    pub fn new(label: impl Into<String>, t0: f64, dt: f64, values: Vec<f64>) -> Result<Self> {
        if !t0.is_finite() || !dt.is_finite() || dt <= 0.0 {
            return Err(CoreError::InvalidArgument(format!(
                "signal series needs finite t0 and positive dt, got t0 = {t0}, dt = {dt}"
            )));
        }
        if values.is_empty() {
            return Err(CoreError::InvalidArgument(
                "signal series needs at least one sample".into(),
            ));
        }
        Ok(Self {
            label: label.into(),
            t0,
            dt,
            values,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t0 + self.dt * k as f64
    }

    pub fn t_end(&self) -> f64 {
        self.time(self.len() - 1)
    }

    pub fn value(&self, k: usize) -> f64 {
        self.values[k]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// (time, value) pairs.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(k, &v)| (self.time(k), v))
    }

    fn same_grid(&self, other: &Self) -> Result<()> {
        if self.t0 != other.t0 || self.dt != other.dt || self.len() != other.len() {
            return Err(CoreError::InvalidArgument(format!(
                "signals '{}' and '{}' live on different grids",
                self.label, other.label
            )));
        }
        Ok(())
    }
}

/// Modal expectation series `<O>(t) = Re sum_i w_i Tr(O tau_i) e^{lambda_i t}`.
///
/// The modal sum is evaluated exactly at each sample; an imaginary residue
/// beyond rounding is reported as an error rather than discarded.
pub fn expectation_series_modal(
    rho0: &DensityMatrix,
    decomp: &SpectralDecomposition,
    obs: &Observable,
    grid: &TimeGrid,
) -> Result<SignalSeries> {
    let terms = modal_terms(rho0, decomp, obs)?;
    let mut values = Vec::with_capacity(grid.len());
    let scale = terms.iter().map(|(c, _)| c.norm()).sum::<f64>().max(1.0);
    for k in 0..grid.len() {
        let t = grid.at(k);
        let mut z = Complex64::new(0., 0.);
        for (c, lam) in &terms {
            z += c * (lam * t).exp();
        }
        if z.im.abs() > 1e-9 * scale {
            return Err(CoreError::Numerical(format!(
                "expectation of {} at t = {t} has imaginary residue {:.3e}",
                obs.label(),
                z.im
            )));
        }
        values.push(z.re);
    }
    SignalSeries::new(obs.label(), grid.t0(), grid.dt(), values)
}

/// The nonzero modal coefficients `(w_i Tr(O tau_i), lambda_i)`.
fn modal_terms(
    rho0: &DensityMatrix,
    decomp: &SpectralDecomposition,
    obs: &Observable,
) -> Result<Vec<(Complex64, Complex64)>> {
    let weights = mode_weights(rho0, decomp)?;
    let obs_vec = vectorize_op(&obs.matrix().view());
    let mut terms = Vec::new();
    for s in decomp.sectors() {
        let ws = weights.sector_weights(s.sector);
        for (pair, &w) in s.pairs.iter().zip(ws) {
            let c = w * hs_inner(&obs_vec.view(), &pair.right.view());
            if c.norm() > 0.0 {
                terms.push((c, pair.value));
            }
        }
    }
    Ok(terms)
}

/// Modal transverse/longitudinal dipole signal of one atom.
pub fn bloch_series_modal(
    rho0: &DensityMatrix,
    decomp: &SpectralDecomposition,
    site: usize,
    axis: Pauli,
    grid: &TimeGrid,
) -> Result<SignalSeries> {
    let obs = local_pauli(site, axis)?;
    expectation_series_modal(rho0, decomp, &obs, grid)
}

/// Dipole signal read off a propagated trajectory (any provenance).
pub fn bloch_series(traj: &Trajectory, site: usize, axis: Pauli) -> Result<SignalSeries> {
    let obs = local_pauli(site, axis)?;
    let values = traj.states().iter().map(|s| s.expect(&obs)).collect();
    SignalSeries::new(obs.label(), traj.grid().t0(), traj.grid().dt(), values)
}

/// Closed-form transverse dipole signals for the equal superpositions of
/// the ground state with one collective state: a single optical-coherence
/// mode carries the whole signal, so
/// `<sigma_x,1>(t) = |alpha| e^{-Gamma t/2} cos(nu t - arg alpha) / sqrt(1+|alpha|^2)`
/// and site 2 is the same envelope with zero phase and unit amplitude.
/// For the subradiant superposition `Gamma = gamma0 - Re V`,
/// `nu = omega0 - Im V / 2`, `alpha = alpha_A`; for the superradiant one
/// `Gamma = gamma0 + Re V`, `nu = omega0 + Im V / 2`, `alpha = alpha_S`.
pub fn closed_form_bloch(
    p: &SystemParams,
    state: NamedState,
    site: usize,
    grid: &TimeGrid,
) -> Result<SignalSeries> {
    let cs = collective_states(p)?;
    let (alpha, rate, freq) = match state {
        NamedState::GPlusAR => (
            cs.alpha_a(),
            p.gamma0() - cs.v().re,
            p.omega0() - 0.5 * cs.v().im,
        ),
        NamedState::GPlusSR => (
            cs.alpha_s(),
            p.gamma0() + cs.v().re,
            p.omega0() + 0.5 * cs.v().im,
        ),
        other => {
            return Err(CoreError::InvalidArgument(format!(
                "no closed-form dipole signal for initial state '{other}'"
            )))
        }
    };
    let (amp, phase) = match site {
        1 => (alpha.norm(), alpha.arg()),
        2 => (1.0, 0.0),
        other => {
            return Err(CoreError::InvalidArgument(format!(
                "site must be 1 or 2, got {other}"
            )))
        }
    };
    let norm = (1.0 + alpha.norm_sqr()).sqrt();
    let values = (0..grid.len())
        .map(|k| {
            let t = grid.at(k);
            amp * (-0.5 * rate * t).exp() * (freq * t - phase).cos() / norm
        })
        .collect();
    SignalSeries::new(format!("sigma_x[{site}]"), grid.t0(), grid.dt(), values)
}

/// The emission-rate observable
/// `Q = gamma1 n_1 + gamma2 n_2 + gamma12 (sigma1+ sigma2- + sigma2+ sigma1-)`,
/// so that `I(t) = Tr(Q rho)` equals `-d<n1+n2>/dt`.
pub fn radiation_observable(p: &SystemParams) -> Observable {
    let (g1, g2, g12) = (p.gamma1(), p.gamma2(), p.gamma12());
    let mut m = ndarray::Array2::zeros((4, 4));
    m[(0, 0)] = Complex64::new(g1 + g2, 0.);
    m[(1, 1)] = Complex64::new(g1, 0.);
    m[(2, 2)] = Complex64::new(g2, 0.);
    m[(1, 2)] = Complex64::new(g12, 0.);
    m[(2, 1)] = Complex64::new(g12, 0.);
    Observable::from_matrix(m, "emission rate").expect("hermitian by construction")
}

/// Instantaneous emission rate of a state.
pub fn radiation_rate(rho: &DensityMatrix, p: &SystemParams) -> f64 {
    rho.expect(&radiation_observable(p))
}

/// Emission rate along a propagated trajectory.
pub fn radiation_series(traj: &Trajectory, p: &SystemParams) -> Result<SignalSeries> {
    let obs = radiation_observable(p);
    let values = traj.states().iter().map(|s| s.expect(&obs)).collect();
    SignalSeries::new(obs.label(), traj.grid().t0(), traj.grid().dt(), values)
}

/// Modal emission rate series; only population-sector modes contribute.
pub fn radiation_series_modal(
    rho0: &DensityMatrix,
    decomp: &SpectralDecomposition,
    grid: &TimeGrid,
) -> Result<SignalSeries> {
    expectation_series_modal(rho0, decomp, &radiation_observable(decomp.params()), grid)
}

/// Total emitted excitation number `int_0^inf I(t) dt`, evaluated from the
/// modal expansion: `sum_i c_i (e^{lambda_i T} - 1)/lambda_i` with the
/// horizon `T = 60 / min |Re lambda_i|` over the decaying modes, far past
/// any surviving transient. The steady mode radiates nothing; this is
/// checked, not assumed.
pub fn integrated_radiation(
    rho0: &DensityMatrix,
    decomp: &SpectralDecomposition,
) -> Result<f64> {
    let obs = radiation_observable(decomp.params());
    let terms = modal_terms(rho0, decomp, &obs)?;
    let scale = terms.iter().map(|(c, _)| c.norm()).sum::<f64>().max(1.0);
    let mut slowest = f64::INFINITY;
    for (_, lam) in &terms {
        if lam.re < -1e-12 {
            slowest = slowest.min(lam.re.abs());
        }
    }
    if !slowest.is_finite() {
        // Nothing decays; the only admissible case is a dark state with no
        // emission at all.
        return Ok(0.0);
    }
    let horizon = 60.0 / slowest;
    let mut total = Complex64::new(0., 0.);
    for (c, lam) in &terms {
        if lam.re >= -1e-12 {
            if c.norm() > 1e-9 * scale {
                return Err(CoreError::Numerical(format!(
                    "non-decaying mode at {lam} radiates with weight {:.3e}",
                    c.norm()
                )));
            }
            continue;
        }
        total += c * ((lam * horizon).exp() - 1.0) / lam;
    }
    if total.im.abs() > 1e-9 * scale {
        return Err(CoreError::Numerical(format!(
            "integrated emission has imaginary residue {:.3e}",
            total.im
        )));
    }
    Ok(total.re)
}

/// Emission rate, subradiant reference and their ratio over a grid.
#[derive(Debug, Clone)]
pub struct RadianceReport {
    pub intensity: SignalSeries,
    pub reference: SignalSeries,
    pub ratio: SignalSeries,
}

struct RadianceCalc {
    terms: Vec<(Complex64, Complex64)>,
    weight_sub: f64,
    lam_sub: f64,
}

impl RadianceCalc {
    fn new(rho0: &DensityMatrix, decomp: &SpectralDecomposition) -> Result<Self> {
        if !decomp.sector_a_is_analytic() {
            return Err(CoreError::InvalidState(
                "the subradiant reference needs the closed-form population-sector labels".into(),
            ));
        }
        let obs = radiation_observable(decomp.params());
        let terms = modal_terms(rho0, decomp, &obs)?;
        let weights = mode_weights(rho0, decomp)?;
        let sub = decomp
            .pair(Sector::A, 6)
            .expect("analytic population sector has six labeled pairs");
        let w6 = weights
            .get(decomp, Sector::A, 6)
            .expect("weight aligned with pair");
        if w6.im.abs() > 1e-9 || sub.value.im.abs() > 1e-9 {
            return Err(CoreError::Numerical(
                "subradiant mode weight or rate has an imaginary residue".into(),
            ));
        }
        Ok(Self {
            terms,
            weight_sub: w6.re,
            lam_sub: sub.value.re,
        })
    }

    fn intensity(&self, t: f64) -> f64 {
        let mut z = Complex64::new(0., 0.);
        for (c, lam) in &self.terms {
            z += c * (lam * t).exp();
        }
        z.re
    }

    /// The subradiant-tail reference `-w_6 lambda_6 e^{lambda_6 t}`; the
    /// prefactor equals the mode's emission weight because
    /// `Tr(Q |A_R><A_R|) = gamma0 - Re V` exactly.
    fn reference(&self, t: f64) -> f64 {
        -self.weight_sub * self.lam_sub * (self.lam_sub * t).exp()
    }

    fn ratio(&self, t: f64) -> f64 {
        let i = self.intensity(t);
        let r = self.reference(t);
        if i.abs() < 1e-14 && r.abs() < 1e-14 {
            return 1.0;
        }
        if i <= 0.0 || r <= 0.0 {
            return 0.0;
        }
        (i / r).min(r / i).clamp(0.0, 1.0)
    }
}

/// `R_I(t)`: how close the current emission is to the pure subradiant
/// tail, as `min(I/I_sub, I_sub/I)` clipped to [0, 1].
pub fn subradiance_ratio_at(
    rho0: &DensityMatrix,
    decomp: &SpectralDecomposition,
    t: f64,
) -> Result<f64> {
    Ok(RadianceCalc::new(rho0, decomp)?.ratio(t))
}

/// The emission rate, the subradiant reference and `R_I` over a grid.
pub fn subradiance_ratio(
    rho0: &DensityMatrix,
    decomp: &SpectralDecomposition,
    grid: &TimeGrid,
) -> Result<RadianceReport> {
    let calc = RadianceCalc::new(rho0, decomp)?;
    let times: Vec<f64> = grid.times();
    let intensity: Vec<f64> = times.iter().map(|&t| calc.intensity(t)).collect();
    let reference: Vec<f64> = times.iter().map(|&t| calc.reference(t)).collect();
    let ratio: Vec<f64> = times.iter().map(|&t| calc.ratio(t)).collect();
    Ok(RadianceReport {
        intensity: SignalSeries::new("emission rate", grid.t0(), grid.dt(), intensity)?,
        reference: SignalSeries::new("subradiant reference", grid.t0(), grid.dt(), reference)?,
        ratio: SignalSeries::new("subradiance ratio", grid.t0(), grid.dt(), ratio)?,
    })
}

/// Trapezoid-weighted Pearson correlation of two equal-length sample
/// windows. At least 10 samples; a window with spread below 1e-14 has no
/// defined correlation.
fn pearson_raw(xs: &[f64], ys: &[f64], x_label: &str, y_label: &str) -> Result<f64> {
    let n = xs.len();
    if n < 10 || ys.len() != n {
        return Err(CoreError::InvalidArgument(format!(
            "correlation needs two equal windows of at least 10 samples, got {} and {}",
            n,
            ys.len()
        )));
    }
    for (vals, label) in [(xs, x_label), (ys, y_label)] {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &v in vals {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if hi - lo < 1e-14 {
            return Err(CoreError::UndefinedCorrelation(format!(
                "signal '{label}' is constant over the window"
            )));
        }
    }
    let w = |k: usize| if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
    let wsum: f64 = (0..n).map(w).sum();
    let mx: f64 = (0..n).map(|k| w(k) * xs[k]).sum::<f64>() / wsum;
    let my: f64 = (0..n).map(|k| w(k) * ys[k]).sum::<f64>() / wsum;
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for k in 0..n {
        let (dx, dy) = (xs[k] - mx, ys[k] - my);
        cov += w(k) * dx * dy;
        vx += w(k) * dx * dx;
        vy += w(k) * dy * dy;
    }
    if vx <= 0.0 || vy <= 0.0 {
        return Err(CoreError::UndefinedCorrelation(
            "window variance vanished".into(),
        ));
    }
    let c = cov / (vx * vy).sqrt();
    if c.abs() > 1.0 + 1e-12 {
        return Err(CoreError::Numerical(format!(
            "correlation coefficient {c} left [-1, 1]"
        )));
    }
    Ok(c.clamp(-1.0, 1.0))
}

/// Pearson correlation of two whole series on the same grid.
pub fn pearson(x: &SignalSeries, y: &SignalSeries) -> Result<f64> {
    x.same_grid(y)?;
    pearson_raw(x.values(), y.values(), x.label(), y.label())
}

/// Sample indices covering `[t, t + window]` on the series grid.
fn window_indices(x: &SignalSeries, t: f64, window: f64) -> Result<(usize, usize)> {
    if !t.is_finite() || !window.is_finite() || window <= 0.0 {
        return Err(CoreError::InvalidArgument(format!(
            "need finite t and positive window, got t = {t}, window = {window}"
        )));
    }
    let eps = 1e-9 * x.dt();
    let lo = ((t - x.t0() - eps) / x.dt()).ceil().max(0.0) as usize;
    let hi_f = (t + window - x.t0() + eps) / x.dt();
    if hi_f < 0.0 {
        return Err(CoreError::InvalidArgument(format!(
            "window [{t}, {}] starts before the series",
            t + window
        )));
    }
    let hi = (hi_f.floor() as usize).min(x.len().saturating_sub(1));
    if lo >= x.len() || hi < lo + 9 {
        return Err(CoreError::InvalidArgument(format!(
            "window [{t}, {}] has fewer than 10 samples on this grid",
            t + window
        )));
    }
    Ok((lo, hi))
}

/// `y(t_k + delay)` for `k` in `[lo, hi]` by linear interpolation on the
/// grid of `y`. The shift has the same fractional part for every sample.
fn shifted_window(y: &SignalSeries, lo: usize, hi: usize, delay: f64) -> Result<Vec<f64>> {
    let pos = delay / y.dt();
    let base = pos.floor();
    let frac = pos - base;
    let base = base as usize;
    if hi + base + 1 > y.len() - 1 {
        return Err(CoreError::InvalidArgument(format!(
            "delay {delay} pushes the window past the end of '{}'",
            y.label()
        )));
    }
    Ok((lo..=hi)
        .map(|k| y.value(k + base) * (1.0 - frac) + y.value(k + base + 1) * frac)
        .collect())
}

/// Plain windowed Pearson correlation over `[t, t + window]`.
pub fn windowed_pearson_at(
    x: &SignalSeries,
    y: &SignalSeries,
    t: f64,
    window: f64,
) -> Result<f64> {
    x.same_grid(y)?;
    let (lo, hi) = window_indices(x, t, window)?;
    pearson_raw(
        &x.values()[lo..=hi],
        &y.values()[lo..=hi],
        x.label(),
        y.label(),
    )
}

/// Delayed Pearson correlation at one window start: the maximum of
/// `C[x(.), y(. + delta)]` over one oscillation period of trial delays,
/// returned together with the maximizing delay (smallest on ties).
///
/// Trial delays where the shifted signal is constant are skipped; if every
/// delay is skipped the correlation is undefined.
pub fn delayed_pearson_at(
    x: &SignalSeries,
    y: &SignalSeries,
    t: f64,
    window: f64,
    period: f64,
) -> Result<(f64, f64)> {
    x.same_grid(y)?;
    if !period.is_finite() || period <= 0.0 {
        return Err(CoreError::InvalidArgument(format!(
            "delay search needs a positive period, got {period}"
        )));
    }
    let (lo, hi) = window_indices(x, t, window)?;
    let xs = &x.values()[lo..=hi];
    {
        let (mut l, mut h) = (f64::INFINITY, f64::NEG_INFINITY);
        for &v in xs {
            l = l.min(v);
            h = h.max(v);
        }
        if h - l < 1e-14 {
            return Err(CoreError::UndefinedCorrelation(format!(
                "signal '{}' is constant over the window at t = {t}",
                x.label()
            )));
        }
    }
    let mut best: Option<(f64, f64)> = None;
    for j in 0..DELAY_GRID {
        let delay = period * j as f64 / DELAY_GRID as f64;
        let ys = shifted_window(y, lo, hi, delay)?;
        match pearson_raw(xs, &ys, x.label(), y.label()) {
            Ok(c) => {
                if best.map_or(true, |(cb, _)| c > cb) {
                    best = Some((c, delay));
                }
            }
            Err(CoreError::UndefinedCorrelation(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    best.ok_or_else(|| {
        CoreError::UndefinedCorrelation(format!(
            "signal '{}' is constant at every trial delay for t = {t}",
            y.label()
        ))
    })
}

/// Plain and delayed correlations over every window start the series can
/// support. `plain` holds NaN where the undelayed correlation is
/// undefined; window starts whose delayed search is undefined are dropped.
#[derive(Debug, Clone)]
pub struct SyncReport {
    pub window: f64,
    pub period: f64,
    pub times: Vec<f64>,
    pub plain: Vec<f64>,
    pub delayed: Vec<f64>,
    pub delays: Vec<f64>,
}

impl SyncReport {
    /// The locked delay: the maximizer at the last evaluable window.
    pub fn final_delay(&self) -> Option<f64> {
        self.delays.last().copied()
    }
}

/// Runs the plain and delayed correlation over all window starts.
pub fn delayed_pearson(
    x: &SignalSeries,
    y: &SignalSeries,
    window: f64,
    period: f64,
) -> Result<SyncReport> {
    x.same_grid(y)?;
    let mut times = Vec::new();
    let mut plain = Vec::new();
    let mut delayed = Vec::new();
    let mut delays = Vec::new();
    let max_delay = period * (DELAY_GRID as f64 - 1.0) / DELAY_GRID as f64;
    for k in 0..x.len() {
        let t = x.time(k);
        if t + window + max_delay > x.t_end() + 1e-9 * x.dt() {
            break;
        }
        match delayed_pearson_at(x, y, t, window, period) {
            Ok((c, d)) => {
                let p = match windowed_pearson_at(x, y, t, window) {
                    Ok(v) => v,
                    Err(CoreError::UndefinedCorrelation(_)) => f64::NAN,
                    Err(e) => return Err(e),
                };
                times.push(t);
                plain.push(p);
                delayed.push(c);
                delays.push(d);
            }
            Err(CoreError::UndefinedCorrelation(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(SyncReport {
        window,
        period,
        times,
        plain,
        delayed,
        delays,
    })
}

/// The synchronization rate over a grid of detunings and coherent
/// couplings, holding the decay rates of `base` fixed. Rows are emitted
/// detuning-major: `(delta, s12, kappa_S)`.
pub fn kappa_surface(
    base: &SystemParams,
    deltas: &[f64],
    s12s: &[f64],
) -> Result<Vec<(f64, f64, f64)>> {
    let mut rows = Vec::with_capacity(deltas.len() * s12s.len());
    for &delta in deltas {
        for &s12 in s12s {
            let p = SystemParams::new(
                base.gamma1(),
                base.gamma2(),
                base.gamma12(),
                s12,
                delta,
                base.omega0(),
            )?;
            rows.push((delta, s12, sync_constants(&p).kappa_s));
        }
    }
    Ok(rows)
}

/// One point of the synchronization-versus-subradiance sweep.
#[derive(Debug, Clone, Copy)]
pub struct SweepRow {
    pub gamma12: f64,
    pub kappa_s: f64,
    pub nu_s: f64,
    pub c_delayed: f64,
    pub delay: f64,
    pub r_i: f64,
}

/// Sweeps the collective decay rate: for each `gamma12` the two dipole
/// signals from the shared uncorrelated initial state are correlated in a
/// delayed window at `t_star`, and the emission is compared against the
/// subradiant tail at the same time.
pub fn sync_vs_subradiance_sweep(
    base: &SystemParams,
    gamma12s: &[f64],
    t_star: f64,
    window: f64,
) -> Result<Vec<SweepRow>> {
    let rho0 = crate::hilbert::named_state(NamedState::PlusPlus, None, None)?;
    let mut rows = Vec::with_capacity(gamma12s.len());
    for &g12 in gamma12s {
        let p = SystemParams::new(
            base.gamma1(),
            base.gamma2(),
            g12,
            base.s12(),
            base.delta(),
            base.omega0(),
        )?;
        let sc = sync_constants(&p);
        if sc.nu_s <= 0.0 {
            return Err(CoreError::InvalidArgument(format!(
                "locked frequency {} is not positive at gamma12 = {g12}",
                sc.nu_s
            )));
        }
        let period = std::f64::consts::TAU / sc.nu_s;
        let horizon = t_star + window + period + 0.5;
        let grid = TimeGrid::span(horizon, DEFAULT_SIGNAL_DT)?;
        let decomp = spectral_decomposition(&p)?;
        let x1 = bloch_series_modal(&rho0, &decomp, 1, Pauli::X, &grid)?;
        let x2 = bloch_series_modal(&rho0, &decomp, 2, Pauli::X, &grid)?;
        let (c_delayed, delay) = delayed_pearson_at(&x1, &x2, t_star, window, period)?;
        let r_i = subradiance_ratio_at(&rho0, &decomp, t_star)?;
        rows.push(SweepRow {
            gamma12: g12,
            kappa_s: sc.kappa_s,
            nu_s: sc.nu_s,
            c_delayed,
            delay,
            r_i,
        });
    }
    Ok(rows)
}
