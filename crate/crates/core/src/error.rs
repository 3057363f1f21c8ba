use thiserror::Error;

/// Errors surfaced by the library.
///
/// The variants mirror the failure contracts of the public operations:
/// validation failures are reported as `InvalidParams` / `InvalidState` /
/// `InvalidArgument`, physically meaningful special cases get their own
/// variants (`IndependentAtoms`, `DegenerateSpectrum`,
/// `UndefinedCorrelation`), and `OracleDisagreement` / `Numerical` flag
/// internal consistency breaches that should never be silently absorbed.
#[derive(Debug, Error)]
pub enum CoreError {
    /// Model parameters violate a positivity or finiteness constraint.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A state failed validation (normalization, hermiticity, trace or
    /// positivity within tolerance).
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A generic argument error: unknown name, bad grid, out-of-range site.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// `gamma12 = s12 = 0`: the two atoms do not talk to each other and the
    /// collective states are undefined (`V = g + i delta` comes with
    /// `alpha_S` formally infinite).
    #[error("independent atoms: gamma12 = s12 = 0 leaves the collective basis undefined")]
    IndependentAtoms,

    /// The spectral decomposition cannot back a modal expansion: eigenvalue
    /// matching became ambiguous, a biorthogonal overlap vanished, or the
    /// Liouvillian is defective at these parameters.
    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),

    /// Two independent computational routes disagree beyond tolerance.
    #[error("oracle disagreement: {0}")]
    OracleDisagreement(String),

    /// A windowed Pearson correlation was requested for a signal with
    /// (numerically) zero variance.
    #[error("undefined correlation: {0}")]
    UndefinedCorrelation(String),

    /// Internal numerical failure: solver breakdown, block-structure breach,
    /// or a residual that should be zero by construction.
    #[error("numerical failure: {0}")]
    Numerical(String),
}
