//! Two-qubit states and observables.
//!
//! Basis order: `|ee> = 0`, `|eg> = 1`, `|ge> = 2`, `|gg> = 3` (atom 1
//! first, `e` above `g`). Single-atom operators use `sigma_z |e> = +|e>`.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use std::fmt;
use std::str::FromStr;

use crate::error::CoreError;
use crate::hs::{kron, DIM};
use crate::params::SystemParams;
use crate::spectral::CollectiveStates;
use crate::Result;

/// Amplitudes below this magnitude are treated as zero when fixing the
/// global phase of a pure state.
const PHASE_EPS: f64 = 1e-9;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A normalized two-qubit pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amps: [Complex64; 4],
}

impl PureState {
    /// Builds a state from amplitudes that are already normalized
    /// (within 1e-12).
    pub fn new(amps: [Complex64; 4]) -> Result<Self> {
        for a in &amps {
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(CoreError::InvalidState(
                    "pure-state amplitude is not finite".into(),
                ));
            }
        }
        let norm2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > 1e-12 {
            return Err(CoreError::InvalidState(format!(
                "pure state norm^2 = {norm2} deviates from 1 beyond 1e-12"
            )));
        }
        Ok(PureState { amps })
    }

    /// Builds a state by rescaling arbitrary amplitudes to unit norm.
    /// The global phase is left untouched.
    pub fn normalized(amps: [Complex64; 4]) -> Result<Self> {
        let norm2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if !norm2.is_finite() || norm2 <= 0.0 {
            return Err(CoreError::InvalidState(
                "cannot normalize a zero or non-finite amplitude vector".into(),
            ));
        }
        let inv = 1.0 / norm2.sqrt();
        let mut out = [c(0.0, 0.0); 4];
        for (o, a) in out.iter_mut().zip(amps.iter()) {
            *o = a * inv;
        }
        Ok(PureState { amps: out })
    }

    /// Rotates the global phase so the first amplitude with magnitude above
    /// 1e-9 is real and positive.
    pub fn with_phase_convention(mut self) -> Self {
        for a in self.amps {
            if a.norm() > PHASE_EPS {
                let phase = a / a.norm();
                for amp in &mut self.amps {
                    *amp /= phase;
                }
                break;
            }
        }
        self
    }

    pub fn amp(&self, i: usize) -> Complex64 {
        self.amps[i]
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.amps
    }

    pub fn as_array(&self) -> Array1<Complex64> {
        Array1::from_iter(self.amps.iter().copied())
    }

    /// Componentwise complex conjugate (used to pair right and left
    /// collective states). No phase convention is re-applied.
    pub fn conj(&self) -> PureState {
        let mut amps = self.amps;
        for a in &mut amps {
            *a = a.conj();
        }
        PureState { amps }
    }

    /// Inner product `<self|other>`.
    pub fn overlap(&self, other: &PureState) -> Complex64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// The projector `|psi><psi|` as a density matrix.
    pub fn projector(&self) -> DensityMatrix {
        let m = Array2::from_shape_fn((DIM, DIM), |(i, j)| self.amps[i] * self.amps[j].conj());
        DensityMatrix::new(m).expect("projector of a normalized state is a valid density matrix")
    }
}

/// A validated two-qubit density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: Array2<Complex64>,
}

impl DensityMatrix {
    /// Strict construction: hermiticity and unit trace within 1e-12,
    /// smallest eigenvalue >= -1e-12.
    pub fn new(m: Array2<Complex64>) -> Result<Self> {
        Self::validated(m, 1e-12, 1e-12, -1e-12)
    }

    /// Relaxed construction for numerically evolved states: hermiticity and
    /// trace within 1e-9, smallest eigenvalue >= -1e-8.
    pub fn new_relaxed(m: Array2<Complex64>) -> Result<Self> {
        Self::validated(m, 1e-9, 1e-9, -1e-8)
    }

    fn validated(m: Array2<Complex64>, herm_tol: f64, trace_tol: f64, eig_floor: f64) -> Result<Self> {
        if m.dim() != (DIM, DIM) {
            return Err(CoreError::InvalidState(format!(
                "density matrix must be 4x4, got {:?}",
                m.dim()
            )));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(CoreError::InvalidState(
                "density matrix contains non-finite entries".into(),
            ));
        }
        let mut herm_dev = 0.0f64;
        for i in 0..DIM {
            for j in 0..DIM {
                herm_dev = herm_dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        if herm_dev > herm_tol {
            return Err(CoreError::InvalidState(format!(
                "hermiticity deviation {herm_dev:.3e} exceeds {herm_tol:.1e}"
            )));
        }
        let trace: Complex64 = (0..DIM).map(|i| m[(i, i)]).sum();
        if (trace - 1.0).norm() > trace_tol {
            return Err(CoreError::InvalidState(format!(
                "trace {trace} deviates from 1 beyond {trace_tol:.1e}"
            )));
        }
        let min_eig = crate::eigen::hermitian_min_eig(&m.view());
        if min_eig < eig_floor {
            return Err(CoreError::InvalidState(format!(
                "smallest eigenvalue {min_eig:.3e} below floor {eig_floor:.1e}"
            )));
        }
        Ok(DensityMatrix { m })
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.m
    }

    pub fn trace(&self) -> Complex64 {
        (0..DIM).map(|i| self.m[(i, i)]).sum()
    }

    /// Matrix element `<bra| rho |ket>` between arbitrary (not necessarily
    /// orthogonal) pure states.
    pub fn matrix_element(&self, bra: &PureState, ket: &PureState) -> Complex64 {
        let mut z = c(0.0, 0.0);
        for i in 0..DIM {
            for j in 0..DIM {
                z += bra.amp(i).conj() * self.m[(i, j)] * ket.amp(j);
            }
        }
        z
    }

    /// Expectation value `Tr(O rho)`. The imaginary part is asserted to be
    /// a rounding residue, never silently dropped.
    pub fn expect(&self, obs: &Observable) -> f64 {
        let mut val = c(0.0, 0.0);
        for i in 0..DIM {
            for j in 0..DIM {
                val += obs.m[(i, j)] * self.m[(j, i)];
            }
        }
        let scale = obs.m.iter().map(|z| z.norm()).fold(1.0f64, f64::max);
        assert!(
            val.im.abs() <= 1e-9 * scale,
            "expectation of {} has imaginary residue {:.3e}",
            obs.label,
            val.im
        );
        val.re
    }
}

/// Pauli axis of a single-atom operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl FromStr for Pauli {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" | "X" => Ok(Pauli::X),
            "y" | "Y" => Ok(Pauli::Y),
            "z" | "Z" => Ok(Pauli::Z),
            other => Err(CoreError::InvalidArgument(format!(
                "unknown Pauli axis '{other}' (expected x, y or z)"
            ))),
        }
    }
}

fn pauli_2x2(axis: Pauli) -> Array2<Complex64> {
    match axis {
        Pauli::X => ndarray::array![[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]],
        Pauli::Y => ndarray::array![[c(0., 0.), c(0., -1.)], [c(0., 1.), c(0., 0.)]],
        Pauli::Z => ndarray::array![[c(1., 0.), c(0., 0.)], [c(0., 0.), c(-1., 0.)]],
    }
}

fn identity_2x2() -> Array2<Complex64> {
    ndarray::array![[c(1., 0.), c(0., 0.)], [c(0., 0.), c(1., 0.)]]
}

/// Embeds a single-atom operator on the given site (1 or 2).
pub fn embed_site(site: usize, op: &Array2<Complex64>) -> Result<Array2<Complex64>> {
    match site {
        1 => Ok(kron(op, &identity_2x2())),
        2 => Ok(kron(&identity_2x2(), op)),
        other => Err(CoreError::InvalidArgument(format!(
            "site must be 1 or 2, got {other}"
        ))),
    }
}

/// The lowering operator of one atom, embedded in the two-qubit space.
pub fn sigma_minus(site: usize) -> Result<Array2<Complex64>> {
    let op = ndarray::array![[c(0., 0.), c(0., 0.)], [c(1., 0.), c(0., 0.)]];
    embed_site(site, &op)
}

/// A Hermitian observable with a display label.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    m: Array2<Complex64>,
    label: String,
}

impl Observable {
    /// Builds an observable, checking hermiticity within 1e-12.
    pub fn from_matrix(m: Array2<Complex64>, label: impl Into<String>) -> Result<Self> {
        if m.dim() != (DIM, DIM) {
            return Err(CoreError::InvalidArgument(format!(
                "observable must be 4x4, got {:?}",
                m.dim()
            )));
        }
        let scale = m.iter().map(|z| z.norm()).fold(1.0f64, f64::max);
        for i in 0..DIM {
            for j in 0..DIM {
                if (m[(i, j)] - m[(j, i)].conj()).norm() > 1e-12 * scale {
                    return Err(CoreError::InvalidArgument(
                        "observable matrix is not Hermitian".into(),
                    ));
                }
            }
        }
        Ok(Observable {
            m,
            label: label.into(),
        })
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.m
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// The Pauli operator `sigma_axis` of one atom (site 1 or 2).
pub fn local_pauli(site: usize, axis: Pauli) -> Result<Observable> {
    let m = embed_site(site, &pauli_2x2(axis))?;
    let name = match axis {
        Pauli::X => "sigma_x",
        Pauli::Y => "sigma_y",
        Pauli::Z => "sigma_z",
    };
    Observable::from_matrix(m, format!("{name}[{site}]"))
}

/// A general single-atom observable `ax sigma_x + ay sigma_y + az sigma_z
/// + ad I` on the given site. Coefficients must be real and finite.
pub fn bloch_observable(site: usize, ax: f64, ay: f64, az: f64, ad: f64) -> Result<Observable> {
    for (name, v) in [("ax", ax), ("ay", ay), ("az", az), ("ad", ad)] {
        if !v.is_finite() {
            return Err(CoreError::InvalidArgument(format!(
                "coefficient {name} = {v} is not finite"
            )));
        }
    }
    let mut m2 = pauli_2x2(Pauli::X) * c(ax, 0.0);
    m2 = m2 + pauli_2x2(Pauli::Y) * c(ay, 0.0);
    m2 = m2 + pauli_2x2(Pauli::Z) * c(az, 0.0);
    m2 = m2 + identity_2x2() * c(ad, 0.0);
    let m = embed_site(site, &m2)?;
    Observable::from_matrix(m, format!("bloch[{site}]({ax},{ay},{az},{ad})"))
}

/// Total excitation number `n1 + n2` with `n_k = sigma_k^+ sigma_k^-`.
pub fn total_excitation() -> Observable {
    let m = Array2::from_shape_fn((DIM, DIM), |(i, j)| {
        if i != j {
            return c(0.0, 0.0);
        }
        match i {
            0 => c(2.0, 0.0),
            1 | 2 => c(1.0, 0.0),
            _ => c(0.0, 0.0),
        }
    });
    Observable::from_matrix(m, "n1+n2").expect("diagonal real matrix is Hermitian")
}

/// Named initial states used throughout the reference figures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedState {
    /// Both atoms excited.
    Ee,
    /// Both atoms in the ground state.
    Gg,
    /// Atom 1 excited.
    Eg,
    /// Atom 2 excited.
    Ge,
    /// Bare symmetric one-excitation state `(|eg> + |ge>)/sqrt(2)`.
    S,
    /// Bare antisymmetric one-excitation state `(|eg> - |ge>)/sqrt(2)`.
    A,
    /// Superradiant collective state `S_R`.
    SR,
    /// Subradiant collective state `A_R`.
    AR,
    /// Upper dressed eigenstate of the one-excitation Hamiltonian block.
    SDelta,
    /// Lower dressed eigenstate of the one-excitation Hamiltonian block.
    ADelta,
    /// Product state `|+>|+>`.
    PlusPlus,
    /// `(|gg> + |A_R>)/sqrt(2)`.
    GPlusAR,
    /// `(|gg> + |S_R>)/sqrt(2)`.
    GPlusSR,
}

impl NamedState {
    pub const ALL: [NamedState; 13] = [
        NamedState::Ee,
        NamedState::Gg,
        NamedState::Eg,
        NamedState::Ge,
        NamedState::S,
        NamedState::A,
        NamedState::SR,
        NamedState::AR,
        NamedState::SDelta,
        NamedState::ADelta,
        NamedState::PlusPlus,
        NamedState::GPlusAR,
        NamedState::GPlusSR,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            NamedState::Ee => "ee",
            NamedState::Gg => "gg",
            NamedState::Eg => "eg",
            NamedState::Ge => "ge",
            NamedState::S => "S",
            NamedState::A => "A",
            NamedState::SR => "S_R",
            NamedState::AR => "A_R",
            NamedState::SDelta => "S_delta",
            NamedState::ADelta => "A_delta",
            NamedState::PlusPlus => "plusplus",
            NamedState::GPlusAR => "G_plus_AR",
            NamedState::GPlusSR => "G_plus_SR",
        }
    }
}

impl fmt::Display for NamedState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedState {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        NamedState::ALL
            .iter()
            .find(|n| n.name() == s)
            .copied()
            .ok_or_else(|| {
                let all: Vec<&str> = NamedState::ALL.iter().map(|n| n.name()).collect();
                CoreError::InvalidArgument(format!(
                    "unknown state name '{s}' (expected one of {})",
                    all.join(", ")
                ))
            })
    }
}

fn basis_state(idx: usize) -> PureState {
    let mut amps = [c(0.0, 0.0); 4];
    amps[idx] = c(1.0, 0.0);
    PureState::new(amps).expect("basis state is normalized")
}

fn superpose(a: &PureState, b: &PureState) -> Result<PureState> {
    let mut amps = [c(0.0, 0.0); 4];
    for (i, amp) in amps.iter_mut().enumerate() {
        *amp = a.amp(i) + b.amp(i);
    }
    PureState::normalized(amps)
}

/// The pure state behind a [`NamedState`]. Collective names need the
/// collective states; dressed names need the parameters.
pub fn named_pure_state(
    name: NamedState,
    cs: Option<&CollectiveStates>,
    params: Option<&SystemParams>,
) -> Result<PureState> {
    fn need_cs<'a>(
        cs: Option<&'a CollectiveStates>,
        name: NamedState,
    ) -> Result<&'a CollectiveStates> {
        cs.ok_or_else(|| {
            CoreError::InvalidArgument(format!(
                "state '{name}' requires the collective states of a parameter set"
            ))
        })
    }
    match name {
        NamedState::Ee => Ok(basis_state(0)),
        NamedState::Eg => Ok(basis_state(1)),
        NamedState::Ge => Ok(basis_state(2)),
        NamedState::Gg => Ok(basis_state(3)),
        NamedState::S => PureState::normalized([c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]),
        NamedState::A => PureState::normalized([c(0., 0.), c(1., 0.), c(-1., 0.), c(0., 0.)]),
        NamedState::SR => Ok(need_cs(cs, name)?.sr().clone()),
        NamedState::AR => Ok(need_cs(cs, name)?.ar().clone()),
        NamedState::SDelta | NamedState::ADelta => {
            let p = params.ok_or_else(|| {
                CoreError::InvalidArgument(format!(
                    "state '{name}' requires the system parameters"
                ))
            })?;
            let (upper, lower) = dressed_one_excitation_eigenstates(p)?;
            Ok(if name == NamedState::SDelta { upper } else { lower })
        }
        NamedState::PlusPlus => {
            PureState::normalized([c(1., 0.), c(1., 0.), c(1., 0.), c(1., 0.)])
        }
        NamedState::GPlusAR => superpose(&basis_state(3), need_cs(cs, name)?.ar()),
        NamedState::GPlusSR => superpose(&basis_state(3), need_cs(cs, name)?.sr()),
    }
}

/// The density matrix (projector) of a named initial state.
pub fn named_state(
    name: NamedState,
    cs: Option<&CollectiveStates>,
    params: Option<&SystemParams>,
) -> Result<DensityMatrix> {
    Ok(named_pure_state(name, cs, params)?.projector())
}

/// Eigenstates of the dressed one-excitation block
/// `[[delta/2 + s1 - s2, s12], [s12, -delta/2 - s1 + s2]]` acting on
/// `span{|eg>, |ge>}`, ordered by descending eigenvalue, each with the
/// first significant amplitude rotated real positive. When the block is
/// fully degenerate (`delta/2 + s1 - s2 = 0` and `s12 = 0`) the bare pair
/// `(|eg>, |ge>)` is returned.
pub fn dressed_one_excitation_eigenstates(p: &SystemParams) -> Result<(PureState, PureState)> {
    let h = 0.5 * p.delta() + p.s1() - p.s2();
    let q = p.s12();
    let r = (h * h + q * q).sqrt();
    if r == 0.0 {
        return Ok((basis_state(1), basis_state(2)));
    }
    // Robust closed-form eigenvectors of [[h, q], [q, -h]].
    let (up, lo) = if h >= 0.0 {
        ((h + r, q), (-q, h + r))
    } else {
        ((q, r - h), (-(r - h), q))
    };
    let upper = PureState::normalized([c(0., 0.), c(up.0, 0.), c(up.1, 0.), c(0., 0.)])?
        .with_phase_convention();
    let lower = PureState::normalized([c(0., 0.), c(lo.0, 0.), c(lo.1, 0.), c(0., 0.)])?
        .with_phase_convention();
    Ok((upper, lower))
}
