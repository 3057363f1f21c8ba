use serde::Serialize;

use crate::error::CoreError;
use crate::Result;

/// Relative slack applied to the Cauchy-Schwarz style bounds so that
/// boundary cases entered as `sqrt(g1 * g2)` survive rounding.
const BOUND_SLACK: f64 = 1e-12;

/// Validated parameters of the two-qubit dissipative model.
///
/// All rates are expressed in units of the mean decay rate `gamma0 =
/// (gamma1 + gamma2) / 2`; the natural choice is `gamma0 = 1`. Frequencies
/// (`omega0`, `delta`, `s12`, ...) share the same unit.
///
/// * `gamma1`, `gamma2`: individual decay rates (nonnegative).
/// * `gamma12`: collective decay rate; may carry either sign but is bounded
///   by `|gamma12| <= sqrt(gamma1 * gamma2)` so the damping matrix stays
///   positive semidefinite.
/// * `s12`: coherent dipole-dipole coupling (real, either sign).
/// * `delta`: detuning `omega1 - omega2` between the bare frequencies.
/// * `omega0`: mean bare frequency `(omega1 + omega2) / 2`, strictly
///   positive and typically much larger than every rate.
/// * `s1`, `s2` (optional): local frequency shifts. They only displace the
///   diagonal of the dressed one-excitation block used to define the
///   `S_delta` / `A_delta` states; they renormalize the bare frequencies and
///   therefore never enter the coupling parameter `V`, the sector
///   eigenvalues, or the collective states.
/// * `dep11`, `dep22`, `dep12` (optional): dephasing rates. The dephasing
///   matrix must be positive semidefinite: `dep11, dep22 >= 0` and
///   `|dep12| <= sqrt(dep11 * dep22)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SystemParams {
    gamma1: f64,
    gamma2: f64,
    gamma12: f64,
    s12: f64,
    delta: f64,
    omega0: f64,
    s1: f64,
    s2: f64,
    dep11: f64,
    dep22: f64,
    dep12: f64,
}

impl SystemParams {
    /// Builds a parameter set with no local shifts and no dephasing.
    pub fn new(
        gamma1: f64,
        gamma2: f64,
        gamma12: f64,
        s12: f64,
        delta: f64,
        omega0: f64,
    ) -> Result<Self> {
        let p = SystemParams {
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
        };
        p.validate()?;
        Ok(p)
    }

    /// Returns a copy with local frequency shifts `s1`, `s2` set.
    pub fn with_local_shifts(mut self, s1: f64, s2: f64) -> Result<Self> {
        self.s1 = s1;
        self.s2 = s2;
        self.validate()?;
        Ok(self)
    }

    /// Returns a copy with dephasing rates set.
    pub fn with_dephasing(mut self, dep11: f64, dep22: f64, dep12: f64) -> Result<Self> {
        self.dep11 = dep11;
        self.dep22 = dep22;
        self.dep12 = dep12;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let fields = [
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("gamma12", self.gamma12),
            ("s12", self.s12),
            ("delta", self.delta),
            ("omega0", self.omega0),
            ("s1", self.s1),
            ("s2", self.s2),
            ("dep11", self.dep11),
            ("dep22", self.dep22),
            ("dep12", self.dep12),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(CoreError::InvalidParams(format!(
                    "{name} = {value} is not finite"
                )));
            }
        }
        if self.gamma1 < 0.0 || self.gamma2 < 0.0 {
            return Err(CoreError::InvalidParams(format!(
                "decay rates must be nonnegative: gamma1 = {}, gamma2 = {}",
                self.gamma1, self.gamma2
            )));
        }
        let g12_bound = self.gamma1 * self.gamma2;
        if self.gamma12 * self.gamma12 > g12_bound * (1.0 + BOUND_SLACK) {
            return Err(CoreError::InvalidParams(format!(
                "|gamma12| = {} exceeds sqrt(gamma1 * gamma2) = {}",
                self.gamma12.abs(),
                g12_bound.sqrt()
            )));
        }
        if self.omega0 <= 0.0 {
            return Err(CoreError::InvalidParams(format!(
                "omega0 = {} must be strictly positive",
                self.omega0
            )));
        }
        if self.dep11 < 0.0 || self.dep22 < 0.0 {
            return Err(CoreError::InvalidParams(format!(
                "dephasing rates must be nonnegative: dep11 = {}, dep22 = {}",
                self.dep11, self.dep22
            )));
        }
        let d12_bound = self.dep11 * self.dep22;
        if self.dep12 * self.dep12 > d12_bound * (1.0 + BOUND_SLACK) {
            return Err(CoreError::InvalidParams(format!(
                "|dep12| = {} exceeds sqrt(dep11 * dep22) = {}",
                self.dep12.abs(),
                d12_bound.sqrt()
            )));
        }
        Ok(())
    }

    pub fn gamma1(&self) -> f64 {
        self.gamma1
    }

    pub fn gamma2(&self) -> f64 {
        self.gamma2
    }

    pub fn gamma12(&self) -> f64 {
        self.gamma12
    }

    pub fn s12(&self) -> f64 {
        self.s12
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn s1(&self) -> f64 {
        self.s1
    }

    pub fn s2(&self) -> f64 {
        self.s2
    }

    pub fn dep11(&self) -> f64 {
        self.dep11
    }

    pub fn dep22(&self) -> f64 {
        self.dep22
    }

    pub fn dep12(&self) -> f64 {
        self.dep12
    }

    /// Mean decay rate `(gamma1 + gamma2) / 2`, the natural rate unit.
    pub fn gamma0(&self) -> f64 {
        0.5 * (self.gamma1 + self.gamma2)
    }

    /// Bare frequency of atom 1, `omega0 + delta / 2`.
    pub fn omega1(&self) -> f64 {
        self.omega0 + 0.5 * self.delta
    }

    /// Bare frequency of atom 2, `omega0 - delta / 2`.
    pub fn omega2(&self) -> f64 {
        self.omega0 - 0.5 * self.delta
    }

    /// True if any dephasing rate is nonzero.
    pub fn has_dephasing(&self) -> bool {
        self.dep11 != 0.0 || self.dep22 != 0.0 || self.dep12 != 0.0
    }

    /// True if the dephasing leaves the one-excitation coherence sector
    /// untouched: the sector-a shift is proportional to
    /// `dep11 + dep22 - 2 dep12`, so the condition is
    /// `dep11 + dep22 = 2 dep12` (within 1e-12 of the overall scale).
    pub fn dephasing_preserves_sector_a(&self) -> bool {
        let shift = self.dep11 + self.dep22 - 2.0 * self.dep12;
        let scale = self.dep11.abs() + self.dep22.abs() + self.dep12.abs();
        shift.abs() <= 1e-12 * scale.max(1.0)
    }

    /// Ordered (name, value) pairs of every stored parameter, including the
    /// derived `gamma0`. Used for report headers.
    pub fn summary_pairs(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("gamma12", self.gamma12),
            ("s12", self.s12),
            ("delta", self.delta),
            ("omega0", self.omega0),
            ("s1", self.s1),
            ("s2", self.s2),
            ("dep11", self.dep11),
            ("dep22", self.dep22),
            ("dep12", self.dep12),
            ("gamma0", self.gamma0()),
        ]
    }
}
