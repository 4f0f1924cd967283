use crate::C64;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("root finder did not converge after {sweeps} sweeps (best residual {residual:.3e})")]
    RootsDidNotConverge {
        sweeps: usize,
        residual: f64,
        /// Best iterate found before giving up.
        best: Vec<C64>,
    },

    #[error("interpolation abscissae {i} and {j} coincide")]
    DuplicateAbscissa { i: usize, j: usize },

    #[error("interpolation needs {need} samples, got {got}")]
    NotEnoughSamples { need: usize, got: usize },

    #[error("discriminant cross-check failed: trace forms differ by {0:.3e}")]
    DiscriminantMismatch(f64),

    #[error("Floquet solution has a pole at lambda = {lambda}: Dirichlet eigenvalue")]
    FloquetPole { lambda: C64 },

    #[error(
        "lambda = {lambda} is not a periodic/antiperiodic eigenvalue (|Delta| off by {excess:.3e})"
    )]
    NotPeriodicEigenvalue { lambda: C64, excess: f64 },

    #[error("inconsistent two-spectra data: {0}")]
    InconsistentSpectra(String),

    #[error("inverse solver converged to no solution after {starts} starts; every monic target of the right leading sign is attainable, so this indicates a solver failure or pathological conditioning")]
    NoSolutions { starts: usize },

    #[error("Toda integration aborted at t = {t:.6}: |c({index})| fell below 1e-12")]
    TodaCoefficientVanished { t: f64, index: usize },

    #[error("{0}")]
    Precondition(String),
}
