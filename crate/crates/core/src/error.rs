use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |m - m^dagger| entry = {defect:e}")]
    NotHermitian { defect: f64 },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("density matrix trace is {trace}, expected 1 (defect {defect:e})")]
    TraceNotOne { trace: f64, defect: f64 },

    #[error("density matrix is not positive semidefinite: smallest eigenvalue {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("time {t} outside schedule domain [{start}, {end}]")]
    TimeOutOfRange { t: f64, start: f64, end: f64 },

    #[error("invalid schedule at breakpoint {index}: {reason}")]
    InvalidSchedule { index: usize, reason: String },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("channel is not dephasing: {0}")]
    NotDephasing(String),

    #[error("operator is not normal: ||[a, a^dagger]||_F = {defect:e}")]
    NotNormal { defect: f64 },

    #[error("integration step rejected at t = {t}: {reason}")]
    StepRejected { t: f64, reason: String },

    #[error("steady-state kernel is degenerate or unphysical: {reason}")]
    KernelDegenerate { reason: String },

    #[error("reference state is not stationary: ||L(rho_s)||_F = {residual:e}")]
    NotStationary { residual: f64 },

    #[error("no steady state reached within t = {t_max} (||d rho/dt||_F = {rate:e})")]
    NoSteadyState { t_max: f64, rate: f64 },

    #[error("unknown scenario `{0}` (expected one of fig1, fig2, control, tightness)")]
    UnknownScenario(String),

    #[error("composed dimension {dim} exceeds the supported maximum of 64")]
    DimTooLarge { dim: usize },

    #[error("{0}")]
    InvalidArgument(String),
}
