//! Time evolution along three independent routes: modal propagation over
//! the spectral decomposition, a fixed-step Runge-Kutta integrator on the
//! full generator, and closed forms for states that excite a single
//! collective mode. The routes share no code past the generator itself, so
//! they can check one another.

use ndarray::Array1;
use num_complex::Complex64;

use crate::error::CoreError;
use crate::hilbert::{named_pure_state, DensityMatrix, NamedState, PureState};
use crate::hs::{devectorize, vectorize, HSVector, HS_DIM};
use crate::liouvillian::SuperOp;
use crate::params::SystemParams;
use crate::spectral::{collective_states, mode_weights, ModeWeights, SpectralDecomposition};
use crate::Result;

/// Uniform time grid `t_k = t0 + k dt`, `k = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t0: f64,
    dt: f64,
    n: usize,
}

impl TimeGrid {
    pub fn new(t0: f64, dt: f64, n: usize) -> Result<Self> {
        if !t0.is_finite() || !dt.is_finite() || dt <= 0.0 {
            return Err(CoreError::InvalidArgument(format!(
                "time grid needs finite t0 and positive dt, got t0 = {t0}, dt = {dt}"
            )));
        }
        if n == 0 {
            return Err(CoreError::InvalidArgument(
                "time grid needs at least one step".into(),
            ));
        }
        Ok(Self { t0, dt, n })
    }

    /// Grid from 0 to at least `t_end` with step `dt`.
    pub fn span(t_end: f64, dt: f64) -> Result<Self> {
        if !t_end.is_finite() || t_end <= 0.0 {
            return Err(CoreError::InvalidArgument(format!(
                "time span must be positive, got {t_end}"
            )));
        }
        let n = (t_end / dt - 1e-12).ceil().max(1.0) as usize;
        Self::new(0.0, dt, n)
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Number of points, one more than the number of steps.
    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn at(&self, k: usize) -> f64 {
        self.t0 + self.dt * k as f64
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.at(k)).collect()
    }
}

/// How a trajectory was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Modal,
    RungeKutta,
    ClosedForm,
}

impl Provenance {
    pub fn name(&self) -> &'static str {
        match self {
            Provenance::Modal => "modal",
            Provenance::RungeKutta => "runge-kutta",
            Provenance::ClosedForm => "closed-form",
        }
    }
}

/// A density-matrix trajectory on a uniform grid.
#[derive(Debug, Clone)]
pub struct Trajectory {
    grid: TimeGrid,
    provenance: Provenance,
    states: Vec<DensityMatrix>,
}

impl Trajectory {
    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, k: usize) -> &DensityMatrix {
        &self.states[k]
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    /// (time, state) pairs.
    pub fn iter(&self) -> impl Iterator<Item = (f64, &DensityMatrix)> {
        self.states
            .iter()
            .enumerate()
            .map(move |(k, s)| (self.grid.at(k), s))
    }
}

/// Turns a propagated 16-vector back into a density matrix, enforcing
/// hermiticity within 1e-9 before symmetrizing.
fn vector_to_density(v: &HSVector, context: &str) -> Result<DensityMatrix> {
    let m = devectorize(&v.view());
    let scale = m.iter().map(|z| z.norm()).fold(1.0f64, f64::max);
    let mut herm_dev = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            herm_dev = herm_dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    if herm_dev > 1e-9 * scale {
        return Err(CoreError::Numerical(format!(
            "{context}: propagated state lost hermiticity by {herm_dev:.3e}"
        )));
    }
    let sym = ndarray::Array2::from_shape_fn((4, 4), |(i, j)| {
        0.5 * (m[(i, j)] + m[(j, i)].conj())
    });
    DensityMatrix::new_relaxed(sym)
}

/// A prepared modal evolution: the initial state projected once on the
/// biorthogonal eigenbasis, evaluable at any time.
#[derive(Debug, Clone)]
pub struct ModalEvolution<'a> {
    decomp: &'a SpectralDecomposition,
    terms: Vec<(Complex64, Complex64, HSVector)>,
}

impl<'a> ModalEvolution<'a> {
    pub fn new(rho0: &DensityMatrix, decomp: &'a SpectralDecomposition) -> Result<Self> {
        let weights = mode_weights(rho0, decomp)?;
        Ok(Self::from_weights(&weights, decomp))
    }

    pub fn from_weights(weights: &ModeWeights, decomp: &'a SpectralDecomposition) -> Self {
        let mut terms = Vec::new();
        for s in decomp.sectors() {
            let ws = weights.sector_weights(s.sector);
            for (pair, &w) in s.pairs.iter().zip(ws) {
                if w.norm() > 0.0 {
                    terms.push((w, pair.value, pair.right.clone()));
                }
            }
        }
        Self { decomp, terms }
    }

    pub fn decomposition(&self) -> &SpectralDecomposition {
        self.decomp
    }

    /// The propagated 16-vector `sum_i w_i e^{lambda_i t} tau_i`.
    pub fn vector_at(&self, t: f64) -> HSVector {
        let mut v: HSVector = Array1::zeros(HS_DIM);
        for (w, lam, tau) in &self.terms {
            v.scaled_add(w * (lam * t).exp(), tau);
        }
        v
    }

    pub fn density_at(&self, t: f64) -> Result<DensityMatrix> {
        vector_to_density(&self.vector_at(t), "modal evolution")
    }
}

/// Modal time evolution of an initial state over a grid.
pub fn evolve_modal(
    rho0: &DensityMatrix,
    decomp: &SpectralDecomposition,
    grid: &TimeGrid,
) -> Result<Trajectory> {
    let ev = ModalEvolution::new(rho0, decomp)?;
    let mut states = Vec::with_capacity(grid.len());
    for k in 0..grid.len() {
        states.push(ev.density_at(grid.at(k))?);
    }
    Ok(Trajectory {
        grid: *grid,
        provenance: Provenance::Modal,
        states,
    })
}

/// The modal state at a single time.
pub fn evolve_modal_at(
    rho0: &DensityMatrix,
    decomp: &SpectralDecomposition,
    t: f64,
) -> Result<DensityMatrix> {
    ModalEvolution::new(rho0, decomp)?.density_at(t)
}

/// Classic fixed-step fourth-order Runge-Kutta propagation of the full
/// generator, the workhorse oracle against the spectral route.
///
/// `substep_dt` is the integrator step; each grid interval is covered by a
/// whole number of substeps no longer than it. The step must satisfy
/// `substep_dt * max|L_ij| <= 0.1` so the scheme stays well inside its
/// stability region.
pub fn propagate_rk4(
    rho0: &DensityMatrix,
    generator: &SuperOp,
    grid: &TimeGrid,
    substep_dt: f64,
) -> Result<Trajectory> {
    if !substep_dt.is_finite() || substep_dt <= 0.0 {
        return Err(CoreError::InvalidArgument(format!(
            "substep must be positive, got {substep_dt}"
        )));
    }
    let scale = generator.max_abs();
    if substep_dt * scale > 0.1 {
        return Err(CoreError::InvalidArgument(format!(
            "substep {substep_dt} too large for a generator with max entry {scale:.3}; \
             need substep <= {:.3e}",
            0.1 / scale
        )));
    }

    let n_sub = ((grid.dt() / substep_dt) - 1e-12).ceil().max(1.0) as usize;
    let h = grid.dt() / n_sub as f64;
    let m = generator.matrix();

    let mut v = vectorize(rho0);
    let mut states = Vec::with_capacity(grid.len());
    states.push(vector_to_density(&v, "runge-kutta")?);
    for _ in 0..grid.len() - 1 {
        for _ in 0..n_sub {
            let k1 = m.dot(&v);
            let k2 = m.dot(&(&v + &(&k1 * Complex64::new(0.5 * h, 0.))));
            let k3 = m.dot(&(&v + &(&k2 * Complex64::new(0.5 * h, 0.))));
            let k4 = m.dot(&(&v + &(&k3 * Complex64::new(h, 0.))));
            let two = Complex64::new(2.0, 0.);
            let incr = &k1 + &(&k2 * two) + &(&k3 * two) + &k4;
            v.scaled_add(Complex64::new(h / 6.0, 0.), &incr);
        }
        states.push(vector_to_density(&v, "runge-kutta")?);
    }
    Ok(Trajectory {
        grid: *grid,
        provenance: Provenance::RungeKutta,
        states,
    })
}

/// Closed-form state at time `t` for an initial pure subradiant state:
/// `rho(t) = e^{-(gamma0 - Re V) t} |A_R><A_R| + (1 - e^{...}) |gg><gg|`.
pub fn closed_form_pure_ar_at(p: &SystemParams, t: f64) -> Result<DensityMatrix> {
    closed_form_collective_at(p, t, false)
}

/// Closed-form state at time `t` for an initial pure superradiant state,
/// decaying at `gamma0 + Re V`.
pub fn closed_form_pure_sr_at(p: &SystemParams, t: f64) -> Result<DensityMatrix> {
    closed_form_collective_at(p, t, true)
}

fn closed_form_collective_at(p: &SystemParams, t: f64, superradiant: bool) -> Result<DensityMatrix> {
    if t < 0.0 {
        return Err(CoreError::InvalidArgument(format!(
            "closed forms are causal, got t = {t}"
        )));
    }
    let cs = collective_states(p)?;
    let rate = if superradiant {
        p.gamma0() + cs.v().re
    } else {
        p.gamma0() - cs.v().re
    };
    let state: &PureState = if superradiant { cs.sr() } else { cs.ar() };
    let gg = named_pure_state(NamedState::Gg, None, None)?;
    let w = (-rate * t).exp();
    let proj = state.projector().matrix().to_owned();
    let ground = gg.projector().matrix().to_owned();
    let m = &proj * Complex64::new(w, 0.) + &ground * Complex64::new(1.0 - w, 0.);
    DensityMatrix::new_relaxed(m)
}

fn closed_form_collective(
    p: &SystemParams,
    grid: &TimeGrid,
    superradiant: bool,
) -> Result<Trajectory> {
    let mut states = Vec::with_capacity(grid.len());
    for k in 0..grid.len() {
        states.push(closed_form_collective_at(p, grid.at(k), superradiant)?);
    }
    Ok(Trajectory {
        grid: *grid,
        provenance: Provenance::ClosedForm,
        states,
    })
}

/// Closed-form trajectory for the pure subradiant initial state.
pub fn closed_form_pure_ar(p: &SystemParams, grid: &TimeGrid) -> Result<Trajectory> {
    closed_form_collective(p, grid, false)
}

/// Closed-form trajectory for the pure superradiant initial state.
pub fn closed_form_pure_sr(p: &SystemParams, grid: &TimeGrid) -> Result<Trajectory> {
    closed_form_collective(p, grid, true)
}

/// The six matrix elements that close under the collective-basis rate
/// equations: populations of `|ee>` and `|gg>`, and the 2x2 block over the
/// left collective states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateComponents {
    pub ee: Complex64,
    pub sl_sl: Complex64,
    pub sl_al: Complex64,
    pub al_sl: Complex64,
    pub al_al: Complex64,
    pub gg: Complex64,
}

/// Extracts the rate-equation components of a state.
pub fn rate_components(rho: &DensityMatrix, p: &SystemParams) -> Result<RateComponents> {
    let cs = collective_states(p)?;
    let ee = named_pure_state(NamedState::Ee, None, None)?;
    let gg = named_pure_state(NamedState::Gg, None, None)?;
    let (sl, al) = (cs.sl(), cs.al());
    Ok(RateComponents {
        ee: rho.matrix_element(&ee, &ee),
        sl_sl: rho.matrix_element(sl, sl),
        sl_al: rho.matrix_element(sl, al),
        al_sl: rho.matrix_element(al, sl),
        al_al: rho.matrix_element(al, al),
        gg: rho.matrix_element(&gg, &gg),
    })
}

/// The closed system of rate equations over the collective components:
/// time derivatives as a function of the current components.
///
/// Together with [`rate_components`] this is a third, scalar route to the
/// populations; it never touches the 16-dimensional generator.
pub fn rate_rhs(rc: &RateComponents, p: &SystemParams) -> Result<RateComponents> {
    let cs = collective_states(p)?;
    let (g1, g2, g12, g0) = (p.gamma1(), p.gamma2(), p.gamma12(), p.gamma0());
    let v = cs.v();
    let (a_s, a_a) = (cs.alpha_s(), cs.alpha_a());
    let na = 1.0 + a_a.norm_sqr();
    let frac_a = (1.0 - a_a.norm_sqr()) / na;
    let abs_a = a_a.norm();

    let ee = -(g1 + g2) * rc.ee;
    let sl_sl = (g0 + v.re - (g1 - g2) * frac_a) * rc.ee - (g0 + v.re) * rc.sl_sl;
    let al_al = (g0 - v.re + (g1 - g2) * frac_a) * rc.ee - (g0 - v.re) * rc.al_al;
    let src_sa = abs_a * (g1 + g2 * a_s * a_a.conj() + g12 * (a_s + a_a.conj())) / na;
    let sl_al = src_sa * rc.ee - Complex64::new(g0, v.im) * rc.sl_al;
    let src_as = abs_a * (g1 + g2 * a_a * a_s.conj() + g12 * (a_a + a_s.conj())) / na;
    let al_sl = src_as * rc.ee - Complex64::new(g0, -v.im) * rc.al_sl;

    // Ground-state feed: the emission quadratic form mapped through the
    // non-orthogonal collective components.
    let one_plus_aa2 = Complex64::new(1.0, 0.) + a_a * a_a;
    let pre = na / one_plus_aa2.norm_sqr();
    let c_sa =
        -g1 * abs_a + g2 * a_a * a_a / abs_a + g12 * (a_a * abs_a - a_a / abs_a);
    let c_as = c_sa.conj();
    let gg = pre
        * (na * (g0 + v.re) * rc.sl_sl
            + c_sa * rc.sl_al
            + c_as * rc.al_sl
            + na * (g0 - v.re) * rc.al_al);

    Ok(RateComponents {
        ee,
        sl_sl,
        sl_al,
        al_sl,
        al_al,
        gg,
    })
}
