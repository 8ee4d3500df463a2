use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("evaluation at a pole: {at}")]
    PoleEvaluation { at: Complex64 },
    #[error("value overflows at {at}; use the projective form")]
    Overflow { at: Complex64 },
    #[error("derivative too small ({value:e}) at u = {at}")]
    DegenerateDerivative { at: f64, value: f64 },
    #[error("curvature grid too coarse: spacing {spacing} exceeds {limit}")]
    GridTooCoarse { spacing: f64, limit: f64 },
    #[error("phase derivative left (1e-12, 1e12) at u = {at}")]
    BlowUp { at: f64 },
    #[error("ode integration failed at t = {at}: step size underflow")]
    StepUnderflow { at: f64 },
    #[error("root or pole on the window boundary near {near}; perturb the window")]
    WindowOnPole { near: Complex64 },
    #[error("quadrature did not reach tolerance: estimate {value}, error {error:e}")]
    QuadratureFailure { value: f64, error: f64 },
    #[error("need at least {needed} points in the top decade, have {have}")]
    InsufficientRange { needed: usize, have: usize },
    #[error("kernel diagonal {value:e} too small to normalise")]
    DegenerateNorm { value: f64 },
    #[error("{at} is not an eigenvalue of the self-adjoint extension (phase residue {residue:e})")]
    NotAnEigenvalue { at: f64, residue: f64 },
    #[error("samples do not cover the node {missing} inside the truncation window")]
    InsufficientWindow { missing: f64 },
    #[error("integrand does not decay over the last decade (exponent {exponent})")]
    NonDecaying { exponent: f64 },
    #[error("construction check failed: mismatch {mismatch:e}")]
    ConstructionMismatch { mismatch: f64 },
    #[error("|B(iy)| underflows before y = {at}; fewer than 3 usable points")]
    Underflow { at: f64 },
    #[error("duplicate eigenvalue {at}")]
    DuplicateEigenvalue { at: Complex64 },
    #[error("index {index} beyond recurrence cap {cap}")]
    IndexBeyondCap { index: usize, cap: usize },
    #[error("series did not converge before the cap {cap} (last term {last:e})")]
    NoConvergence { cap: usize, last: f64 },
    #[error("sign scan could not separate roots near {near}")]
    ScanResolution { near: f64 },
    #[error("{at} is a spectral point of the extension")]
    SpectralPoint { at: Complex64 },
    #[error("wronskian not positive ({value:e}) at u = {at}")]
    WronskianSign { at: f64, value: f64 },
}
