//! Two-qubit mixed states from fifteen real coordinates.
//!
//! A density matrix is built from its eigenensemble: four mixing weights
//! `μ₀ ≥ μ₁ ≥ μ₂ ≥ μ₃` (encoded as the simplex coordinates `ν₁, ν₂, ν₃`)
//! and four orthonormal eigenvectors produced by a cascade of 2×2 unitary
//! blocks acting on nested subspaces. The dominant eigenvector is a generic
//! entangled pure state `|Ψ⟩ = q₊|φφ′⟩ + e^{iζ} q₋|φ⊥φ′⊥⟩` fixed by four
//! local angles, the phase ζ and the Schmidt angle χ.
//!
//! On top of the construction the crate computes entanglement quantities
//! two ways: numerically, through a self-contained Hermitian eigensolver
//! ([`linalg`]), and in closed form on the coordinate slices where such
//! expressions exist ([`entangle`], [`geometry`]). The [`verify`] module
//! runs seeded randomized suites that hold the two routes against each
//! other at fixed tolerances.

pub mod entangle;
pub mod geometry;
pub mod linalg;
pub mod parametrize;
pub mod rng;
pub mod verify;

/// Central tolerance table. Every comparison in the crate goes through one
/// of these knobs.
pub mod tol {
    /// Orthonormality of constructed bases (Gram matrix deviation).
    pub const EPS_ORTHO: f64 = 1e-12;
    /// Eigenvalue recovery and eigendecomposition residuals.
    pub const EPS_EIG: f64 = 1e-11;
    /// Closed-form expressions against the eigensolver oracle.
    pub const EPS_MATCH: f64 = 1e-10;
    /// Entrywise agreement of the two density-matrix construction routes.
    pub const EPS_ENTRY: f64 = 1e-12;
    /// Closed-form distances against direct Frobenius evaluation.
    pub const EPS_DIST: f64 = 1e-12;
    /// Jacobi sweep target for the off-diagonal Frobenius norm.
    pub const EPS_JACOBI_OFF: f64 = 1e-14;
    /// Maximum number of Jacobi sweeps before giving up.
    pub const MAX_JACOBI_SWEEPS: usize = 60;
    /// Admissible Hermiticity deviation of eigensolver input.
    pub const EPS_HERM_INPUT: f64 = 1e-10;
    /// An eigenvalue of a partial transpose below `-EPS_NEG_EIG` counts as
    /// genuinely negative.
    pub const EPS_NEG_EIG: f64 = 1e-11;
    /// States with negativity at or below this are reported separable.
    pub const EPS_SEPARABLE: f64 = 1e-10;
    /// Spectrum entries of the spin-flipped product below this magnitude
    /// are numerical zeros; the square root would amplify them to ~1e-7.
    pub const EPS_WOOTTERS_NULL: f64 = 1e-14;
    /// Weight vectors must satisfy ordering/normalization to this slack.
    pub const EPS_WEIGHT: f64 = 1e-12;
}

/// Errors shared by all modules of the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{op}: dimension mismatch ({details})")]
    Dimension { op: &'static str, details: String },

    #[error("matrix is not Hermitian: deviation {deviation:.3e} exceeds {limit:.3e}")]
    NotHermitian { deviation: f64, limit: f64 },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps (off-norm {off:.3e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("{name} = {value} outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("coordinate {name} is not finite")]
    NotFinite { name: &'static str },

    #[error("invalid mixing weights: {0}")]
    InvalidWeights(String),

    #[error("vector is not normalized: |v| = {norm}")]
    NotNormalized { norm: f64 },

    #[error("not a valid density matrix: {0}")]
    InvalidState(String),

    #[error("coordinates are not at the required limit: {0}")]
    NotAtLimit(String),

    #[error("PPT condition is not violated; the closed forms do not apply")]
    PptNotViolated,

    #[error("unknown verification suite '{0}'")]
    UnknownSuite(String),

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
