use thiserror::Error;

/// Errors raised by every module of the crate.
///
/// Variants map onto the failure classes of the physics operations; the CLI
/// turns any of them into exit code 1.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("outside the sub-barrier regime: {0}")]
    OutOfRegime(String),
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("barrier too thick for direct amplitudes (kappa*a = {kappa_a:.3} > {limit}); use log_transmission")]
    ThickBarrier { kappa_a: f64, limit: f64 },
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precision failure in {what}: about {digits:.1} significant digits achieved")]
    Precision { what: String, digits: f64 },
    #[error("inconsistent branches: {0}")]
    InconsistentBranch(String),
    #[error("degenerate branch: {0}")]
    DegenerateBranch(String),
    #[error("caustic: {0}")]
    Caustic(String),
    #[error("unsupported initial state: {0}")]
    UnsupportedInitialState(String),
    #[error("nonphysical absorption: |S_L| = {0} exceeds 1")]
    NonphysicalAbsorption(f64),
    #[error("loop is not closed (first and last samples differ)")]
    OpenLoop,
    #[error("ill-defined geodesic between antipodal samples {0} and {1}")]
    AntipodalSamples(usize, usize),
    #[error("ill-posed problem: {0}")]
    IllPosed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
