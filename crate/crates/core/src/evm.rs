//! Transition operators `|a><b|` on one subsystem, words built from them,
//! and the expectation-value matrix (EVM).
//!
//! The ladder operators of a subsystem are `A^i = |0><i|` for
//! `i = 1..d-1`. Every matrix unit on that subsystem is a short word in
//! them:
//!
//! | unit       | word          |
//! |------------|---------------|
//! | `\|0><0\|` | `A^1 A^1†`    |
//! | `\|0><i\|` | `A^i`         |
//! | `\|i><0\|` | `A^i†`        |
//! | `\|i><j\|` | `A^i† A^j`    |
//!
//! EVM entry `(r, c)` stores `<W>` for `W = |c1><r1| (x) |c2><r2|`, which
//! equals `rho[r][c]`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::states::{BipartiteDims, DensityMatrix, Subsystem};

/// `|ket><bra|` acting on one subsystem of dimension `dim`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TransitionOperator {
    pub subsystem: Subsystem,
    pub ket: usize,
    pub bra: usize,
    pub dim: usize,
}

impl TransitionOperator {
    pub fn new(subsystem: Subsystem, ket: usize, bra: usize, dim: usize) -> Result<Self> {
        for index in [ket, bra] {
            if index >= dim {
                return Err(Error::IndexOutOfRange { index, dim });
            }
        }
        Ok(Self {
            subsystem,
            ket,
            bra,
            dim,
        })
    }

    /// The ladder operator `A^i = |0><i|`, `1 <= i < dim`.
    pub fn ladder(subsystem: Subsystem, i: usize, dim: usize) -> Result<Self> {
        if i == 0 {
            return Err(Error::IndexOutOfRange { index: 0, dim });
        }
        Self::new(subsystem, 0, i, dim)
    }

    pub fn dagger(self) -> Self {
        Self {
            ket: self.bra,
            bra: self.ket,
            ..self
        }
    }

    pub fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix::unit(self.dim, self.ket, self.bra)
    }
}

impl fmt::Display for TransitionOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.subsystem.label();
        match (self.ket, self.bra) {
            (0, i) if i > 0 => write!(f, "A{k}^{i}"),
            (i, 0) if i > 0 => write!(f, "A{k}^{i}†"),
            (a, b) => write!(f, "|{a}><{b}|_{k}"),
        }
    }
}

/// An ordered product of transition operators.
///
/// Factors on different subsystems commute, so only the relative order
/// within each subsystem matters.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct OperatorWord {
    factors: Vec<TransitionOperator>,
}

/// A word collapsed on one subsystem.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reduced {
    Identity,
    Zero,
    /// `|ket><bra|`
    Unit { ket: usize, bra: usize },
}

impl OperatorWord {
    pub fn new(factors: Vec<TransitionOperator>) -> Self {
        Self { factors }
    }

    /// Word spelling the matrix unit `|ket><bra|` through ladder operators.
    pub fn unit(subsystem: Subsystem, ket: usize, bra: usize, dim: usize) -> Result<Self> {
        let a = |i| TransitionOperator::ladder(subsystem, i, dim);
        let factors = match (ket, bra) {
            _ if ket >= dim || bra >= dim => {
                return Err(Error::IndexOutOfRange {
                    index: ket.max(bra),
                    dim,
                })
            }
            (0, 0) => {
                let a1 = a(1)?;
                vec![a1, a1.dagger()]
            }
            (0, j) => vec![a(j)?],
            (i, 0) => vec![a(i)?.dagger()],
            (i, j) => vec![a(i)?.dagger(), a(j)?],
        };
        Ok(Self { factors })
    }

    /// `(|k1><b1| on 1) (|k2><b2| on 2)` spelled through ladder operators.
    pub fn bipartite_unit(dims: BipartiteDims, (k1, b1): (usize, usize), (k2, b2): (usize, usize)) -> Result<Self> {
        Ok(Self::unit(Subsystem::First, k1, b1, dims.d1())?.then(&Self::unit(Subsystem::Second, k2, b2, dims.d2())?))
    }

    /// Concatenation `self * other`.
    pub fn then(&self, other: &OperatorWord) -> OperatorWord {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        OperatorWord { factors }
    }

    pub fn factors(&self) -> &[TransitionOperator] {
        &self.factors
    }

    pub fn dagger(&self) -> Self {
        Self {
            factors: self.factors.iter().rev().map(|f| f.dagger()).collect(),
        }
    }

    /// Multiplies the factors of one subsystem: `|a><b| |c><d| = delta_bc |a><d|`.
    pub fn reduce(&self, subsystem: Subsystem) -> Reduced {
        self.factors
            .iter()
            .filter(|f| f.subsystem == subsystem)
            .fold(Reduced::Identity, |acc, f| match acc {
                Reduced::Identity => Reduced::Unit { ket: f.ket, bra: f.bra },
                Reduced::Zero => Reduced::Zero,
                Reduced::Unit { ket, bra } if bra == f.ket => Reduced::Unit { ket, bra: f.bra },
                Reduced::Unit { .. } => Reduced::Zero,
            })
    }

    fn check_dims(&self, dims: BipartiteDims) -> Result<()> {
        for f in &self.factors {
            let dim = dims.of(f.subsystem);
            if f.dim != dim {
                return Err(Error::DimMismatch(format!(
                    "operator {f} built for dimension {} on a subsystem of dimension {dim}",
                    f.dim
                )));
            }
        }
        Ok(())
    }

    /// Dense `d1*d2` matrix of the word; identity on a subsystem without factors.
    pub fn matrix(&self, dims: BipartiteDims) -> Result<ComplexMatrix> {
        self.check_dims(dims)?;
        let side = |s: Subsystem| {
            let d = dims.of(s);
            self.factors
                .iter()
                .filter(|f| f.subsystem == s)
                .fold(ComplexMatrix::identity(d), |acc, f| &acc * &f.matrix())
        };
        Ok(side(Subsystem::First).kron(&side(Subsystem::Second)))
    }
}

impl fmt::Display for OperatorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("I");
        }
        for (i, op) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{op}")?;
        }
        Ok(())
    }
}

/// `Tr(rho W)`, evaluated from the collapsed word without forming `W`.
pub fn expect(rho: &DensityMatrix, word: &OperatorWord) -> Result<Complex64> {
    let dims = rho.dims();
    word.check_dims(dims)?;
    // Tr(rho (|a><b| (x) |c><d|)) = rho[(b, d), (a, c)]; identity sums the diagonal.
    let pairs = |r: Reduced, d: usize| -> Vec<(usize, usize)> {
        match r {
            Reduced::Identity => (0..d).map(|i| (i, i)).collect(),
            Reduced::Zero => Vec::new(),
            Reduced::Unit { ket, bra } => vec![(ket, bra)],
        }
    };
    let first = pairs(word.reduce(Subsystem::First), dims.d1());
    let second = pairs(word.reduce(Subsystem::Second), dims.d2());
    let mut total = Complex64::new(0.0, 0.0);
    for &(a, b) in &first {
        for &(c, d) in &second {
            total += rho.get(dims.flat(b, d), dims.flat(a, c));
        }
    }
    Ok(total)
}

/// Density matrix written entry by entry as expectation values.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpectationValueMatrix {
    dims: BipartiteDims,
    entries: ComplexMatrix,
    words: Vec<OperatorWord>,
}

impl ExpectationValueMatrix {
    /// Word whose expectation value lands at `(row, col)`.
    pub fn word_at(dims: BipartiteDims, row: usize, col: usize) -> OperatorWord {
        let (r1, r2) = dims.split(row);
        let (c1, c2) = dims.split(col);
        OperatorWord::bipartite_unit(dims, (c1, r1), (c2, r2)).expect("indices within dims")
    }

    /// Evaluates every entry as `<W_(r,c)>`.
    pub fn build(rho: &DensityMatrix) -> Self {
        let dims = rho.dims();
        let n = dims.total();
        let mut entries = ComplexMatrix::zeros(n, n);
        let mut words = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                let w = Self::word_at(dims, r, c);
                entries[(r, c)] = expect(rho, &w).expect("word built for these dims");
                words.push(w);
            }
        }
        Self { dims, entries, words }
    }

    /// Pairs raw entries with the canonical word layout, e.g. after reading
    /// an exported file.
    pub fn from_entries(entries: ComplexMatrix, dims: BipartiteDims) -> Result<Self> {
        let n = dims.total();
        if entries.rows() != n || entries.cols() != n {
            return Err(Error::DimMismatch(format!(
                "{}x{} entries for dims ({}, {})",
                entries.rows(),
                entries.cols(),
                dims.d1(),
                dims.d2()
            )));
        }
        let words = (0..n * n).map(|k| Self::word_at(dims, k / n, k % n)).collect();
        Ok(Self { dims, entries, words })
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn entries(&self) -> &ComplexMatrix {
        &self.entries
    }

    pub fn word(&self, row: usize, col: usize) -> &OperatorWord {
        &self.words[row * self.dims.total() + col]
    }

    /// Row-major table of word labels such as `A1^2† A1^1 A2^1`.
    pub fn labels(&self) -> Vec<Vec<String>> {
        let n = self.dims.total();
        self.words
            .chunks(n)
            .map(|row| row.iter().map(ToString::to_string).collect())
            .collect()
    }

    /// Reads the state back, validating it at `tol`.
    pub fn to_density(&self, tol: f64) -> Result<DensityMatrix> {
        DensityMatrix::validate(self.entries.clone(), self.dims, tol)
    }
}

/// Reduced state of `keep`, assembled from expectation values of words that
/// act on `keep` only.
pub fn reduced_state(rho: &DensityMatrix, keep: Subsystem) -> ComplexMatrix {
    let dims = rho.dims();
    let d = dims.of(keep);
    let mut out = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let w = OperatorWord::unit(keep, j, i, d).expect("indices within dims");
            out[(i, j)] = expect(rho, &w).expect("word built for these dims");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use crate::states::Ket;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{rngs::StdRng, Rng, SeedableRng};

    const FIRST: Subsystem = Subsystem::First;
    const SECOND: Subsystem = Subsystem::Second;

    fn dims(d1: usize, d2: usize) -> BipartiteDims {
        BipartiteDims::new(d1, d2).unwrap()
    }

    fn a(s: Subsystem, i: usize, d: usize) -> TransitionOperator {
        TransitionOperator::ladder(s, i, d).unwrap()
    }

    fn bell(amp0: f64, amp1: f64) -> DensityMatrix {
        DensityMatrix::pure(&Ket::from_real(&[amp0, 0.0, 0.0, amp1]).unwrap(), dims(2, 2)).unwrap()
    }

    #[test]
    fn ladder_products_follow_the_unit_rules() {
        let a1 = a(FIRST, 1, 2);
        let w = OperatorWord::new(vec![a1, a1.dagger()]);
        assert_eq!(w.reduce(FIRST), Reduced::Unit { ket: 0, bra: 0 });
        let w = OperatorWord::new(vec![a1.dagger(), a1]);
        assert_eq!(w.reduce(FIRST), Reduced::Unit { ket: 1, bra: 1 });
        let w = OperatorWord::new(vec![a1, a1]);
        assert_eq!(w.reduce(FIRST), Reduced::Zero);
    }

    #[test]
    fn op_matrix_examples() {
        let d = dims(2, 2);
        let a1 = a(FIRST, 1, 2);
        let w = OperatorWord::new(vec![a1, a1.dagger()]);
        let expected = ComplexMatrix::unit(2, 0, 0).kron(&ComplexMatrix::identity(2));
        assert_eq!(w.matrix(d).unwrap(), expected);

        let w = OperatorWord::new(vec![a1.dagger(), a(SECOND, 1, 2).dagger()]);
        let expected = ComplexMatrix::unit(2, 1, 0).kron(&ComplexMatrix::unit(2, 1, 0));
        assert_eq!(w.matrix(d).unwrap(), expected);

        let d = dims(3, 3);
        let w = OperatorWord::new(vec![a(FIRST, 1, 3).dagger(), a(FIRST, 2, 3)]);
        let expected = ComplexMatrix::unit(3, 1, 2).kron(&ComplexMatrix::identity(3));
        assert_eq!(w.matrix(d).unwrap(), expected);
    }

    #[test]
    fn op_matrix_rejects_foreign_dimensions() {
        let w = OperatorWord::new(vec![a(FIRST, 2, 3)]);
        assert!(matches!(w.matrix(dims(2, 2)), Err(Error::DimMismatch(_))));
        assert!(matches!(
            TransitionOperator::ladder(FIRST, 3, 3),
            Err(Error::IndexOutOfRange { index: 3, dim: 3 })
        ));
        assert!(matches!(
            OperatorWord::unit(SECOND, 0, 4, 2),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn expect_examples() {
        let d = dims(2, 2);
        let rho = DensityMatrix::pure(&Ket::basis(4, 0), d).unwrap();
        let (a1, a2) = (a(FIRST, 1, 2), a(SECOND, 1, 2));
        let w = OperatorWord::new(vec![a1, a1.dagger(), a2, a2.dagger()]);
        assert_abs_diff_eq!(expect(&rho, &w).unwrap().re, 1.0);

        let (amp0, amp1) = (0.6, 0.8);
        let rho = bell(amp0, amp1);
        let w = OperatorWord::new(vec![a1.dagger(), a2.dagger()]);
        assert_abs_diff_eq!(expect(&rho, &w).unwrap().re, amp0 * amp1, epsilon = 1e-15);
        let w = OperatorWord::new(vec![a1, a2]);
        assert_abs_diff_eq!(expect(&rho, &w).unwrap().re, amp0 * amp1, epsilon = 1e-15);
        let w = OperatorWord::new(vec![a1.dagger(), a1, a2.dagger(), a2]);
        assert_abs_diff_eq!(expect(&rho, &w).unwrap().re, amp1 * amp1, epsilon = 1e-15);
        let w = OperatorWord::new(vec![a1, a1.dagger(), a2, a2.dagger()]);
        assert_abs_diff_eq!(expect(&rho, &w).unwrap().re, amp0 * amp0, epsilon = 1e-15);
    }

    #[test]
    fn expect_complex_amplitudes() {
        // a|00> + b|11> with complex b: <A1^1† A2^1†> = a b*.
        let amp0 = Complex64::new(0.6, 0.0);
        let amp1 = Complex64::new(0.0, 0.8);
        let v = Ket::new(vec![amp0, Complex64::default(), Complex64::default(), amp1]).unwrap();
        let rho = DensityMatrix::pure(&v, dims(2, 2)).unwrap();
        let w = OperatorWord::new(vec![a(FIRST, 1, 2).dagger(), a(SECOND, 1, 2).dagger()]);
        let got = expect(&rho, &w).unwrap();
        assert_abs_diff_eq!((got - amp0 * amp1.conj()).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn build_examples() {
        let d = dims(2, 2);
        let mixed = DensityMatrix::validate(ComplexMatrix::identity(4).scale(0.25), d, 1e-9).unwrap();
        assert_eq!(ExpectationValueMatrix::build(&mixed).entries(), mixed.matrix());

        let h = 0.5f64.sqrt();
        let evm = ExpectationValueMatrix::build(&bell(h, h));
        for (r, c) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            assert_abs_diff_eq!(evm.entries()[(r, c)].re, 0.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn word_labels_match_the_displayed_layout() {
        let evm = ExpectationValueMatrix::build(&bell(0.6, 0.8));
        let labels = evm.labels();
        assert_eq!(labels[0][0], "A1^1 A1^1† A2^1 A2^1†");
        assert_eq!(labels[0][3], "A1^1† A2^1†");
        assert_eq!(labels[3][0], "A1^1 A2^1");
        assert_eq!(labels[3][3], "A1^1† A1^1 A2^1† A2^1");
        assert_eq!(labels[1][0], "A1^1 A1^1† A2^1");

        let d = dims(3, 3);
        let rho = DensityMatrix::validate(ComplexMatrix::identity(9).scale(1.0 / 9.0), d, 1e-9).unwrap();
        let labels = ExpectationValueMatrix::build(&rho).labels();
        assert_eq!(labels[0][8], "A1^2† A2^2†");
        assert_eq!(labels[1][1], "A1^1 A1^1† A2^1† A2^1");
        assert_eq!(labels[3][8], "A1^2† A1^1 A2^2†");
        assert_eq!(labels[5][7], "A1^2† A1^1 A2^1† A2^2");
    }

    #[test]
    fn random_three_by_three_round_trip() {
        let mut rng = StdRng::seed_from_u64(11);
        let rho = random::density(&mut rng, dims(3, 3));
        let evm = ExpectationValueMatrix::build(&rho);
        assert!(evm.entries().max_abs_diff(rho.matrix()) < 1e-12);
        let back = evm.to_density(1e-9).unwrap();
        assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-12);
    }

    #[test]
    fn to_density_validates_hand_edited_entries() {
        let d = dims(2, 2);
        let mut m = ComplexMatrix::from_diag(&[1.0, 0.0, 0.0, 0.0]);
        m[(0, 1)] = Complex64::new(0.9, 0.0);
        m[(1, 0)] = Complex64::new(0.9, 0.0);
        let evm = ExpectationValueMatrix::from_entries(m, d).unwrap();
        assert!(matches!(evm.to_density(1e-9), Err(Error::NotPsd { .. })));
    }

    fn partial_trace_by_summation(rho: &DensityMatrix, keep: Subsystem) -> ComplexMatrix {
        let d = rho.dims();
        let (d1, d2) = (d.d1(), d.d2());
        match keep {
            Subsystem::First => {
                let mut out = ComplexMatrix::zeros(d1, d1);
                for i in 0..d1 {
                    for j in 0..d1 {
                        out[(i, j)] = (0..d2).map(|k| rho.get(i * d2 + k, j * d2 + k)).sum();
                    }
                }
                out
            }
            Subsystem::Second => {
                let mut out = ComplexMatrix::zeros(d2, d2);
                for i in 0..d2 {
                    for j in 0..d2 {
                        out[(i, j)] = (0..d1).map(|k| rho.get(k * d2 + i, k * d2 + j)).sum();
                    }
                }
                out
            }
        }
    }

    #[test]
    fn reduced_state_examples() {
        let rho1 = ComplexMatrix::from_real_rows(&[&[0.7, 0.2], &[0.2, 0.3]]).unwrap();
        let rho2 = ComplexMatrix::identity(3).scale(1.0 / 3.0);
        let prod = DensityMatrix::product(&rho1, &rho2, dims(2, 3)).unwrap();
        assert!(reduced_state(&prod, FIRST).max_abs_diff(&rho1) < 1e-15);
        assert!(reduced_state(&prod, SECOND).max_abs_diff(&rho2) < 1e-15);

        let h = 0.5f64.sqrt();
        let marginal = reduced_state(&bell(h, h), SECOND);
        assert!(marginal.max_abs_diff(&ComplexMatrix::identity(2).scale(0.5)) < 1e-15);
    }

    fn random_word<R: Rng>(rng: &mut R, d: BipartiteDims) -> OperatorWord {
        let len = rng.random_range(0..5);
        let factors = (0..len)
            .map(|_| {
                let s = if rng.random_bool(0.5) { FIRST } else { SECOND };
                let dim = d.of(s);
                TransitionOperator::new(s, rng.random_range(0..dim), rng.random_range(0..dim), dim).unwrap()
            })
            .collect();
        OperatorWord::new(factors)
    }

    proptest! {
        #[test]
        fn expect_matches_dense_trace(seed in any::<u64>(), d1 in 2usize..4, d2 in 2usize..5) {
            let mut rng = StdRng::seed_from_u64(seed);
            let d = dims(d1, d2);
            let rho = random::density(&mut rng, d);
            for _ in 0..10 {
                let w = random_word(&mut rng, d);
                let dense = (rho.matrix() * &w.matrix(d).unwrap()).trace().unwrap();
                let fast = expect(&rho, &w).unwrap();
                prop_assert!((dense - fast).norm() < 1e-12);
                let conj = expect(&rho, &w.dagger()).unwrap();
                prop_assert!((conj - fast.conj()).norm() < 1e-12);
            }
        }

        #[test]
        fn evm_equals_density_and_round_trips(seed in any::<u64>(), d1 in 2usize..4, d2 in 2usize..5) {
            let mut rng = StdRng::seed_from_u64(seed);
            let rho = random::density(&mut rng, dims(d1, d2));
            let evm = ExpectationValueMatrix::build(&rho);
            prop_assert!(evm.entries().max_abs_diff(rho.matrix()) < 1e-12);
            prop_assert!(evm.entries().hermitian_deviation().unwrap() < 1e-12);
            let back = evm.to_density(1e-9).unwrap();
            prop_assert!(ExpectationValueMatrix::build(&back).entries().max_abs_diff(evm.entries()) < 1e-12);
        }

        #[test]
        fn reduced_state_matches_summation(seed in any::<u64>(), d1 in 2usize..4, d2 in 2usize..5) {
            let mut rng = StdRng::seed_from_u64(seed);
            let rho = random::density(&mut rng, dims(d1, d2));
            for keep in [FIRST, SECOND] {
                let got = reduced_state(&rho, keep);
                prop_assert!(got.max_abs_diff(&partial_trace_by_summation(&rho, keep)) < 1e-12);
            }
        }
    }
}
