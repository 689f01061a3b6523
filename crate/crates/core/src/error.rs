use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("state is not normalized: squared norm {norm_sqr} deviates from 1 by more than {tol}")]
    NotNormalized { norm_sqr: f64, tol: f64 },

    #[error("qubit {qubit} out of range for {num_coins} coin qubits")]
    QubitOutOfRange { qubit: usize, num_coins: usize },

    #[error("lattice site {site} out of range for lattice of {lattice_size} sites")]
    SiteOutOfRange { site: usize, lattice_size: usize },

    #[error("invalid lattice geometry: {0}")]
    InvalidLattice(String),

    #[error("wraparound risk: lattice of {lattice_size} sites cannot hold {steps} steps without cyclic overlap (needs at least {required})")]
    Wraparound {
        lattice_size: usize,
        steps: usize,
        required: usize,
    },

    #[error("no walker amplitude at site {site}: weight {weight} is below threshold {threshold}")]
    UndefinedSite {
        site: usize,
        weight: f64,
        threshold: f64,
    },

    #[error("toss operator is not unitary within {tol}")]
    NonUnitaryToss { tol: f64 },

    #[error("moment order {m} unsupported; only m = 1 and m = 2 are defined")]
    BadMomentOrder { m: u32 },

    #[error("invalid qubit subset: {0}")]
    InvalidSubset(String),

    #[error("global entanglement requires at least 2 coin qubits, got {num_coins}")]
    TooFewCoins { num_coins: usize },

    #[error("parameter out of range: {0}")]
    InvalidParam(String),

    #[error(
        "norm constraint violated: amplitudes square-sum to {norm_sqr}, expected 1 within {tol}"
    )]
    NormViolation { norm_sqr: f64, tol: f64 },

    #[error(
        "quadrature grid too coarse: {num_points} points, need at least {required} for t = {t}"
    )]
    QuadratureTooCoarse {
        num_points: usize,
        required: usize,
        t: usize,
    },

    #[error(
        "quadrature did not converge at t = {t}: doubling the grid moved the value by {shift}"
    )]
    QuadratureNotConverged { t: usize, shift: f64 },

    #[error("integral expected to be real, imaginary residue {residue} exceeds {tol}")]
    ImaginaryResidue { residue: f64, tol: f64 },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("degenerate sweep: {0}")]
    DegenerateSweep(String),

    #[error("state file parse error at line {line}: {msg}")]
    StateFileParse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
