//! Bipartite quantum-state analysis built on expectation values of
//! non-Hermitian transition operators `|a><b|`.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: dense complex matrices, Kronecker products and a cyclic
//!   Jacobi eigensolver for Hermitian matrices.
//! * [`states`]: kets, validated bipartite density matrices and mixtures.
//! * [`evm`]: transition operators, operator words and the
//!   expectation-value matrix, which reproduces the density matrix entry by
//!   entry.
//! * [`criteria`]: purity, the pure-product diagonal test, the operational
//!   partial transpose, and the `d x d` separability inequality with its
//!   closed-form Werner and isotropic witnesses.
//! * [`families`]: Werner, isotropic, Horodecki-type and UPB-tiles mixtures.
//! * [`io`]: the JSON state-file container.

pub mod criteria;
pub mod error;
pub mod evm;
pub mod families;
pub mod io;
pub mod linalg;
pub mod random;
pub mod states;

pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use num_complex::Complex64;
pub use states::{BipartiteDims, DensityMatrix, Ket};

/// Default absolute tolerance for Hermiticity, trace and positivity checks.
pub const DEFAULT_TOL: f64 = 1e-9;
