use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: max |M - M^dagger| = {deviation:e} exceeds {tol:e}")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("trace is {trace} (expected 1 within {tol:e})")]
    TraceNotOne { trace: f64, tol: f64 },

    #[error("matrix is not positive semidefinite: min eigenvalue {min_eig:e} < -{tol:e}")]
    NotPsd { min_eig: f64, tol: f64 },

    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("invalid mixture weights: {0}")]
    WeightError(String),

    #[error("basis index {index} out of range for subsystem dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("state is not pure: Tr(rho^2) = {purity}")]
    NotPure { purity: f64 },

    #[error("separability inequality needs d x d dimensions, got {d1} x {d2}")]
    NotSquareBipartite { d1: usize, d2: usize },

    #[error("parameter {name} = {value} outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("ket amplitudes are not normalised: norm^2 = {0}")]
    Norm(f64),

    #[error("malformed input: {0}")]
    Parse(String),
}
