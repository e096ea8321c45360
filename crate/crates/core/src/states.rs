//! Kets, bipartite dimensions and validated density matrices.
//!
//! Basis ordering is the Kronecker one: `|i>|j>` lives at flat index
//! `i * d2 + j`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Inputs whose squared norm is further than this from 1 are flagged as
/// renormalised.
const RENORM_WARN: f64 = 1e-6;
const WEIGHT_SUM_TOL: f64 = 1e-12;

/// A normalised state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Ket {
    amplitudes: Vec<Complex64>,
    renormalized: bool,
}

impl Ket {
    /// Normalises `amplitudes`. Fails only for an all-zero vector.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm_sqr: f64 = amplitudes.iter().map(Complex64::norm_sqr).sum();
        if norm_sqr == 0.0 || !norm_sqr.is_finite() {
            return Err(Error::Norm(norm_sqr));
        }
        let scale = norm_sqr.sqrt().recip();
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|a| a * scale).collect(),
            renormalized: (norm_sqr - 1.0).abs() > RENORM_WARN,
        })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Computational basis ket `|index>` in dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self {
            amplitudes,
            renormalized: false,
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// True when the input norm was off by more than 1e-6 and got rescaled.
    pub fn was_renormalized(&self) -> bool {
        self.renormalized
    }

    /// Tensor product `|self>|other>`.
    pub fn tensor(&self, other: &Ket) -> Ket {
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        Ket {
            amplitudes,
            renormalized: false,
        }
    }

    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
    }
}

/// Subsystem dimensions of a bipartite state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "[usize; 2]", into = "[usize; 2]")]
pub struct BipartiteDims {
    d1: usize,
    d2: usize,
}

impl BipartiteDims {
    pub fn new(d1: usize, d2: usize) -> Result<Self> {
        if d1 < 2 || d2 < 2 {
            return Err(Error::DimMismatch(format!(
                "subsystem dimensions must be at least 2, got ({d1}, {d2})"
            )));
        }
        Ok(Self { d1, d2 })
    }

    /// `d x d`.
    pub fn square(d: usize) -> Result<Self> {
        Self::new(d, d)
    }

    pub fn d1(&self) -> usize {
        self.d1
    }

    pub fn d2(&self) -> usize {
        self.d2
    }

    /// Dimension of subsystem 1 or 2.
    pub fn of(&self, subsystem: Subsystem) -> usize {
        match subsystem {
            Subsystem::First => self.d1,
            Subsystem::Second => self.d2,
        }
    }

    pub fn total(&self) -> usize {
        self.d1 * self.d2
    }

    pub fn flat(&self, i: usize, j: usize) -> usize {
        i * self.d2 + j
    }

    /// Inverse of [`flat`](Self::flat).
    pub fn split(&self, index: usize) -> (usize, usize) {
        (index / self.d2, index % self.d2)
    }
}

impl TryFrom<[usize; 2]> for BipartiteDims {
    type Error = Error;

    fn try_from([d1, d2]: [usize; 2]) -> Result<Self> {
        Self::new(d1, d2)
    }
}

impl From<BipartiteDims> for [usize; 2] {
    fn from(d: BipartiteDims) -> Self {
        [d.d1, d.d2]
    }
}

/// One of the two tensor factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Subsystem {
    First,
    Second,
}

impl Subsystem {
    /// Maps the 1-based labels `1`, `2` onto subsystems.
    pub fn from_label(k: u8) -> Option<Self> {
        match k {
            1 => Some(Self::First),
            2 => Some(Self::Second),
            _ => None,
        }
    }

    pub fn label(self) -> u8 {
        match self {
            Self::First => 1,
            Self::Second => 2,
        }
    }
}

/// A Hermitian, unit-trace, positive semidefinite matrix on `C^d1 (x) C^d2`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dims: BipartiteDims,
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Checks Hermiticity, unit trace and positivity at `tol`.
    pub fn validate(mat: ComplexMatrix, dims: BipartiteDims, tol: f64) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::NonSquare {
                rows: mat.rows(),
                cols: mat.cols(),
            });
        }
        if mat.rows() != dims.total() {
            return Err(Error::DimMismatch(format!(
                "{}x{} matrix does not match dims ({}, {})",
                mat.rows(),
                mat.cols(),
                dims.d1,
                dims.d2
            )));
        }
        let deviation = mat.hermitian_deviation()?;
        if deviation > tol {
            return Err(Error::NotHermitian { deviation, tol });
        }
        let trace = mat.trace()?.re;
        if (trace - 1.0).abs() > tol {
            return Err(Error::TraceNotOne { trace, tol });
        }
        let min_eig = mat.min_eigenvalue(tol)?;
        if min_eig < -tol {
            return Err(Error::NotPsd { min_eig, tol });
        }
        Ok(Self { dims, mat })
    }

    /// `|v><v|`.
    pub fn pure(v: &Ket, dims: BipartiteDims) -> Result<Self> {
        if v.dim() != dims.total() {
            return Err(Error::DimMismatch(format!(
                "ket of dimension {} for dims ({}, {})",
                v.dim(),
                dims.d1,
                dims.d2
            )));
        }
        Ok(Self {
            dims,
            mat: v.projector(),
        })
    }

    /// Convex combination `sum_i w_i rho_i`.
    pub fn mix(weights: &[f64], states: &[DensityMatrix]) -> Result<Self> {
        if weights.len() != states.len() || states.is_empty() {
            return Err(Error::WeightError(format!(
                "{} weights for {} states",
                weights.len(),
                states.len()
            )));
        }
        if let Some(w) = weights.iter().find(|&&w| w.is_nan() || w <= 0.0) {
            return Err(Error::WeightError(format!("weight {w} is not positive")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::WeightError(format!("weights sum to {total}")));
        }
        let dims = states[0].dims;
        if let Some(s) = states.iter().find(|s| s.dims != dims) {
            return Err(Error::DimMismatch(format!(
                "mixing ({}, {}) with ({}, {})",
                dims.d1, dims.d2, s.dims.d1, s.dims.d2
            )));
        }
        let mut acc = ComplexMatrix::zeros(dims.total(), dims.total());
        for (w, s) in weights.iter().zip(states) {
            acc = &acc + &s.mat.scale(*w);
        }
        Ok(Self { dims, mat: acc })
    }

    /// `rho1 (x) rho2`, each factor checked as a single-system state.
    pub fn product(rho1: &ComplexMatrix, rho2: &ComplexMatrix, dims: BipartiteDims) -> Result<Self> {
        if rho1.rows() != dims.d1 || rho2.rows() != dims.d2 {
            return Err(Error::DimMismatch(format!(
                "factors {}x{} and {}x{} for dims ({}, {})",
                rho1.rows(),
                rho1.cols(),
                rho2.rows(),
                rho2.cols(),
                dims.d1,
                dims.d2
            )));
        }
        check_single_system(rho1, crate::DEFAULT_TOL)?;
        check_single_system(rho2, crate::DEFAULT_TOL)?;
        Self::validate(rho1.kron(rho2), dims, crate::DEFAULT_TOL)
    }

    pub(crate) fn from_parts_unchecked(mat: ComplexMatrix, dims: BipartiteDims) -> Self {
        debug_assert_eq!(mat.rows(), dims.total());
        Self { dims, mat }
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    /// Entry at 0-based flat indices.
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.mat[(row, col)]
    }

    /// Real part of a diagonal entry.
    pub fn diag(&self, i: usize) -> f64 {
        self.mat[(i, i)].re
    }
}

fn check_single_system(m: &ComplexMatrix, tol: f64) -> Result<()> {
    let deviation = m.hermitian_deviation()?;
    if deviation > tol {
        return Err(Error::NotHermitian { deviation, tol });
    }
    let trace = m.trace()?.re;
    if (trace - 1.0).abs() > tol {
        return Err(Error::TraceNotOne { trace, tol });
    }
    let min_eig = m.min_eigenvalue(tol)?;
    if min_eig < -tol {
        return Err(Error::NotPsd { min_eig, tol });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{rngs::StdRng, SeedableRng};

    fn dims22() -> BipartiteDims {
        BipartiteDims::new(2, 2).unwrap()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn pure_from_basis_ket() {
        let rho = DensityMatrix::pure(&Ket::basis(4, 0), dims22()).unwrap();
        assert_eq!(rho.matrix(), &ComplexMatrix::from_diag(&[1.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn pure_bell_state() {
        let h = 0.5f64.sqrt();
        let bell = Ket::from_real(&[h, 0.0, 0.0, h]).unwrap();
        let rho = DensityMatrix::pure(&bell, dims22()).unwrap();
        for (r, cc) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            assert_abs_diff_eq!(rho.get(r, cc).re, 0.5, epsilon = 1e-15);
        }
        assert_eq!(rho.get(1, 1), c(0.0));
    }

    #[test]
    fn pure_unequal_amplitudes() {
        let v = Ket::from_real(&[0.6, 0.0, 0.0, 0.8]).unwrap();
        assert!(!v.was_renormalized());
        let rho = DensityMatrix::pure(&v, dims22()).unwrap();
        assert_abs_diff_eq!(rho.get(0, 3).re, 0.48, epsilon = 1e-15);
    }

    #[test]
    fn ket_renormalisation_flag() {
        let v = Ket::from_real(&[1.0, 1.0]).unwrap();
        assert!(v.was_renormalized());
        assert_abs_diff_eq!(v.amplitudes()[0].re, 0.5f64.sqrt(), epsilon = 1e-15);
        assert!(matches!(Ket::from_real(&[0.0, 0.0]), Err(Error::Norm(_))));
    }

    #[test]
    fn pure_rejects_wrong_dimension() {
        assert!(matches!(
            DensityMatrix::pure(&Ket::basis(3, 0), dims22()),
            Err(Error::DimMismatch(_))
        ));
    }

    #[test]
    fn mix_examples() {
        let p00 = DensityMatrix::pure(&Ket::basis(4, 0), dims22()).unwrap();
        let p11 = DensityMatrix::pure(&Ket::basis(4, 3), dims22()).unwrap();
        assert_eq!(DensityMatrix::mix(&[1.0], std::slice::from_ref(&p00)).unwrap(), p00);
        let m = DensityMatrix::mix(&[0.5, 0.5], &[p00.clone(), p11]).unwrap();
        assert_eq!(m.matrix(), &ComplexMatrix::from_diag(&[0.5, 0.0, 0.0, 0.5]));
    }

    #[test]
    fn mix_errors() {
        let p00 = DensityMatrix::pure(&Ket::basis(4, 0), dims22()).unwrap();
        let other = DensityMatrix::pure(&Ket::basis(6, 0), BipartiteDims::new(2, 3).unwrap()).unwrap();
        assert!(matches!(
            DensityMatrix::mix(&[0.5, 0.4], &[p00.clone(), p00.clone()]),
            Err(Error::WeightError(_))
        ));
        assert!(matches!(
            DensityMatrix::mix(&[1.5, -0.5], &[p00.clone(), p00.clone()]),
            Err(Error::WeightError(_))
        ));
        assert!(matches!(
            DensityMatrix::mix(&[0.5, 0.5], &[p00, other]),
            Err(Error::DimMismatch(_))
        ));
    }

    #[test]
    fn product_examples() {
        let half = ComplexMatrix::identity(2).scale(0.5);
        let rho = DensityMatrix::product(&half, &half, dims22()).unwrap();
        assert_eq!(rho.matrix(), &ComplexMatrix::identity(4).scale(0.25));

        let rho = DensityMatrix::product(
            &ComplexMatrix::unit(2, 0, 0),
            &ComplexMatrix::unit(2, 1, 1),
            dims22(),
        )
        .unwrap();
        assert_eq!(rho.matrix(), &ComplexMatrix::from_diag(&[0.0, 1.0, 0.0, 0.0]));

        assert!(matches!(
            DensityMatrix::product(&half, &ComplexMatrix::identity(3).scale(1.0 / 3.0), dims22()),
            Err(Error::DimMismatch(_))
        ));
    }

    #[test]
    fn validate_examples() {
        let ok = ComplexMatrix::from_diag(&[0.5, 0.5, 0.0, 0.0]);
        assert!(DensityMatrix::validate(ok, dims22(), 1e-9).is_ok());

        // 2x2 block [[1, 0.9], [0.9, 0]] has eigenvalues (1 +- sqrt(1 + 3.24)) / 2.
        let mut bad = ComplexMatrix::from_diag(&[1.0, 0.0, 0.0, -0.0]);
        bad[(0, 1)] = c(0.9);
        bad[(1, 0)] = c(0.9);
        let expected_min = (1.0 - (1.0f64 + 3.24).sqrt()) / 2.0;
        match DensityMatrix::validate(bad, dims22(), 1e-9) {
            Err(Error::NotPsd { min_eig, .. }) => assert_abs_diff_eq!(min_eig, expected_min, epsilon = 1e-12),
            other => panic!("expected NotPsd, got {other:?}"),
        }

        let scaled = ComplexMatrix::from_diag(&[2.0, 0.0, 0.0, 0.0]).scale(0.5);
        assert!(DensityMatrix::validate(scaled, dims22(), 1e-9).is_ok());
    }

    #[test]
    fn validate_reports_each_violation() {
        let m = ComplexMatrix::from_diag(&[0.5, 0.4, 0.0, 0.0]);
        assert!(matches!(
            DensityMatrix::validate(m, dims22(), 1e-9),
            Err(Error::TraceNotOne { .. })
        ));
        let mut m = ComplexMatrix::from_diag(&[0.5, 0.5, 0.0, 0.0]);
        m[(0, 1)] = c(0.1);
        assert!(matches!(
            DensityMatrix::validate(m, dims22(), 1e-9),
            Err(Error::NotHermitian { .. })
        ));
        assert!(matches!(
            DensityMatrix::validate(ComplexMatrix::identity(3).scale(1.0 / 3.0), dims22(), 1e-9),
            Err(Error::DimMismatch(_))
        ));
    }

    #[test]
    fn dims_reject_trivial_subsystems() {
        assert!(BipartiteDims::new(1, 4).is_err());
        let d = BipartiteDims::new(2, 3).unwrap();
        assert_eq!(d.flat(1, 2), 5);
        assert_eq!(d.split(5), (1, 2));
    }

    #[test]
    fn mix_of_identical_states_is_idempotent() {
        let mut rng = StdRng::seed_from_u64(3);
        let dims = BipartiteDims::new(3, 2).unwrap();
        let rho = random::density(&mut rng, dims);
        let mixed = DensityMatrix::mix(&[0.2, 0.3, 0.5], &[rho.clone(), rho.clone(), rho.clone()]).unwrap();
        assert!(mixed.matrix().max_abs_diff(rho.matrix()) <= 1e-12);
    }

    proptest! {
        #[test]
        fn constructor_outputs_are_valid_states(seed in any::<u64>(), d1 in 2usize..4, d2 in 2usize..4) {
            let mut rng = StdRng::seed_from_u64(seed);
            let dims = BipartiteDims::new(d1, d2).unwrap();
            let ket = random::ket(&mut rng, dims.total());
            let pure = DensityMatrix::pure(&ket, dims).unwrap();
            let purity = (pure.matrix() * pure.matrix()).trace().unwrap().re;
            prop_assert!((purity - 1.0).abs() <= 1e-9);

            let mixed = random::density(&mut rng, dims);
            let separable = random::separable_mixture(&mut rng, dims, 5);
            for s in [pure, mixed, separable] {
                prop_assert!(DensityMatrix::validate(s.into_matrix(), dims, 1e-9).is_ok());
            }
        }
    }
}
