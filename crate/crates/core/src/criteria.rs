//! Purity, the pure-product diagonal test, the operational partial
//! transpose, and the `d x d` separability inequality with its closed-form
//! Werner (`p`) and isotropic (`q`) witnesses.
//!
//! Textbook-style 1-based indices `rho_{p,q}` are converted to 0-based flat
//! indices here and nowhere else.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evm::{expect, OperatorWord, Reduced, TransitionOperator};
use crate::linalg::ComplexMatrix;
use crate::states::{BipartiteDims, DensityMatrix, Subsystem};

/// `violated` requires `lhs > rhs + VIOLATION_TOL`.
pub const VIOLATION_TOL: f64 = 1e-9;

/// Tolerances used by [`analyze`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub purity: f64,
    pub product: f64,
    pub ppt: f64,
    pub violation: f64,
}

impl Tolerances {
    pub fn uniform(tol: f64) -> Self {
        Self {
            purity: tol,
            product: tol,
            ppt: tol,
            violation: tol,
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::uniform(crate::DEFAULT_TOL)
    }
}

/// `Tr(rho^2) = sum_i rho_ii^2 + 2 sum_{i<j} rho_ij rho_ji`.
pub fn purity_direct(rho: &DensityMatrix) -> f64 {
    let n = rho.dims().total();
    let mut total = Complex64::new(0.0, 0.0);
    for i in 0..n {
        total += rho.get(i, i) * rho.get(i, i);
        for j in i + 1..n {
            total += 2.0 * rho.get(i, j) * rho.get(j, i);
        }
    }
    debug_assert!(total.im.abs() < 1e-12);
    total.re
}

/// `Tr(rho^2)` written entirely in expectation values of ladder-operator
/// words: four groups of squared diagonal terms plus sixteen groups of
/// conjugate off-diagonal pairs, summed over ladder labels `1..d-1`.
pub fn purity_evm(rho: &DensityMatrix) -> f64 {
    let dims = rho.dims();
    let (d1, d2) = (dims.d1(), dims.d2());
    let a1 = |i: usize| TransitionOperator::ladder(Subsystem::First, i, d1).expect("label < d1");
    let a2 = |i: usize| TransitionOperator::ladder(Subsystem::Second, i, d2).expect("label < d2");
    let ev = |ops: &[TransitionOperator]| expect(rho, &OperatorWord::new(ops.to_vec())).expect("dims match");
    // |0><0| on each side.
    let (p1, p1d) = (a1(1), a1(1).dagger());
    let (p2, p2d) = (a2(1), a2(1).dagger());

    let mut sq = Complex64::new(0.0, 0.0);
    sq += ev(&[p1, p1d, p2, p2d]).powi(2);
    for m2 in 1..d2 {
        sq += ev(&[p1, p1d, a2(m2).dagger(), a2(m2)]).powi(2);
    }
    for m1 in 1..d1 {
        sq += ev(&[a1(m1).dagger(), a1(m1), p2, p2d]).powi(2);
    }
    for m1 in 1..d1 {
        for m2 in 1..d2 {
            sq += ev(&[a1(m1).dagger(), a1(m1), a2(m2).dagger(), a2(m2)]).powi(2);
        }
    }

    // Ordered label pairs (j, i) with j < i for one subsystem's range 1..d-1.
    let pairs = |d: usize| -> Vec<(usize, usize)> {
        (1..d.saturating_sub(1))
            .flat_map(|j| (j + 1..d).map(move |i| (j, i)))
            .collect()
    };

    let mut off = Complex64::new(0.0, 0.0);
    for m2 in 1..d2 {
        off += ev(&[p1, p1d, a2(m2).dagger()]) * ev(&[p1, p1d, a2(m2)]);
    }
    for &(j, i) in &pairs(d2) {
        off += ev(&[p1, p1d, a2(i).dagger(), a2(j)]) * ev(&[p1, p1d, a2(j).dagger(), a2(i)]);
    }
    for m1 in 1..d1 {
        off += ev(&[a1(m1).dagger(), p2, p2d]) * ev(&[a1(m1), p2, p2d]);
    }
    for m1 in 1..d1 {
        for m2 in 1..d2 {
            off += ev(&[a1(m1).dagger(), a1(m1), a2(m2).dagger()]) * ev(&[a1(m1).dagger(), a1(m1), a2(m2)]);
        }
    }
    for &(j, i) in &pairs(d1) {
        off += ev(&[a1(i).dagger(), a1(j), p2, p2d]) * ev(&[a1(j).dagger(), a1(i), p2, p2d]);
    }
    for m1 in 1..d1 {
        for &(j, i) in &pairs(d2) {
            off += ev(&[a1(m1).dagger(), a1(m1), a2(i).dagger(), a2(j)])
                * ev(&[a1(m1).dagger(), a1(m1), a2(j).dagger(), a2(i)]);
        }
    }
    for m2 in 1..d2 {
        for m1 in 1..d1 {
            off += ev(&[a1(m1).dagger(), a2(m2).dagger(), a2(m2)]) * ev(&[a1(m1), a2(m2).dagger(), a2(m2)]);
        }
    }
    for m2 in 1..d2 {
        for &(j, i) in &pairs(d1) {
            off += ev(&[a1(i).dagger(), a1(j), a2(m2).dagger(), a2(m2)])
                * ev(&[a1(j).dagger(), a1(i), a2(m2).dagger(), a2(m2)]);
        }
    }
    for m1 in 1..d1 {
        for m2 in 1..d2 {
            off += ev(&[a1(m1).dagger(), a2(m2).dagger()]) * ev(&[a1(m1), a2(m2)]);
        }
    }
    for m1 in 1..d1 {
        for m2 in 1..d2 {
            off += ev(&[a1(m1).dagger(), a2(m2)]) * ev(&[a1(m1), a2(m2).dagger()]);
        }
    }
    for m1 in 1..d1 {
        for &(j, i) in &pairs(d2) {
            off += ev(&[a1(m1).dagger(), a2(i).dagger(), a2(j)]) * ev(&[a1(m1), a2(j).dagger(), a2(i)]);
        }
    }
    for m1 in 1..d1 {
        for &(j, i) in &pairs(d2) {
            off += ev(&[a1(m1).dagger(), a2(j).dagger(), a2(i)]) * ev(&[a1(m1), a2(i).dagger(), a2(j)]);
        }
    }
    for m2 in 1..d2 {
        for &(j, i) in &pairs(d1) {
            off += ev(&[a1(i).dagger(), a1(j), a2(m2).dagger()]) * ev(&[a1(j).dagger(), a1(i), a2(m2)]);
        }
    }
    for m2 in 1..d2 {
        for &(j, i) in &pairs(d1) {
            off += ev(&[a1(i).dagger(), a1(j), a2(m2)]) * ev(&[a1(j).dagger(), a1(i), a2(m2).dagger()]);
        }
    }
    // Both subsystems off-diagonal within the ladder labels, in both orientations.
    for &(i1, j1) in &pairs(d1) {
        for &(i2, j2) in &pairs(d2) {
            off += ev(&[a1(j1).dagger(), a1(i1), a2(j2).dagger(), a2(i2)])
                * ev(&[a1(i1).dagger(), a1(j1), a2(i2).dagger(), a2(j2)]);
            off += ev(&[a1(j1).dagger(), a1(i1), a2(i2).dagger(), a2(j2)])
                * ev(&[a1(i1).dagger(), a1(j1), a2(j2).dagger(), a2(i2)]);
        }
    }

    (sq + 2.0 * off).re
}

/// Per-index outcome of the pure-product diagonal test.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductCheck {
    /// `passes[k]` for 0-based diagonal index `k`.
    pub passes: Vec<bool>,
    pub all: bool,
}

/// For a pure state, tests `rho_kk = P1(a) * P2(c)` for every diagonal index
/// `k = a*d2 + c`, where `P1(a)` sums the diagonal over block `a` and `P2(c)`
/// sums it over column offset `c` in every block.
pub fn pure_product_check(rho: &DensityMatrix, tol: f64) -> Result<ProductCheck> {
    let purity = purity_direct(rho);
    if (purity - 1.0).abs() > tol {
        return Err(Error::NotPure { purity });
    }
    let dims = rho.dims();
    let (d1, d2) = (dims.d1(), dims.d2());
    let block_sum = |a: usize| -> f64 { (a * d2..(a + 1) * d2).map(|i| rho.diag(i)).sum() };
    let column_sum = |c: usize| -> f64 { (0..d1).map(|j| rho.diag(j * d2 + c)).sum() };
    let passes: Vec<bool> = (0..dims.total())
        .map(|k| {
            let (a, c) = dims.split(k);
            (rho.diag(k) - block_sum(a) * column_sum(c)).abs() <= tol
        })
        .collect();
    let all = passes.iter().all(|&p| p);
    Ok(ProductCheck { passes, all })
}

/// `W rho W` for a word that collapses to matrix units or identities.
fn sandwich(rho: &ComplexMatrix, dims: BipartiteDims, word: &OperatorWord) -> ComplexMatrix {
    let units = |r: Reduced, d: usize| -> Vec<(usize, usize)> {
        match r {
            Reduced::Identity => (0..d).map(|i| (i, i)).collect(),
            Reduced::Zero => Vec::new(),
            Reduced::Unit { ket, bra } => vec![(ket, bra)],
        }
    };
    // W = sum over (ket, bra) flat pairs of |ket><bra|.
    let mut terms = Vec::new();
    for (k1, b1) in units(word.reduce(Subsystem::First), dims.d1()) {
        for (k2, b2) in units(word.reduce(Subsystem::Second), dims.d2()) {
            terms.push((dims.flat(k1, k2), dims.flat(b1, b2)));
        }
    }
    let n = dims.total();
    let mut out = ComplexMatrix::zeros(n, n);
    for &(ket_i, bra_i) in &terms {
        for &(ket_j, bra_j) in &terms {
            out[(ket_i, bra_j)] += rho[(bra_i, ket_j)];
        }
    }
    out
}

/// Operational partial transpose: `sum_O O rho O` over every matrix unit
/// `O = |p><q|` on `subsystem`, each spelled through ladder operators.
pub fn partial_transpose(rho: &DensityMatrix, subsystem: Subsystem) -> ComplexMatrix {
    let dims = rho.dims();
    let d = dims.of(subsystem);
    let n = dims.total();
    let mut out = ComplexMatrix::zeros(n, n);
    for p in 0..d {
        for q in 0..d {
            let word = OperatorWord::unit(subsystem, p, q, d).expect("indices within dims");
            out = &out + &sandwich(rho.matrix(), dims, &word);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PptOutcome {
    pub min_eig_first: f64,
    pub min_eig_second: f64,
    /// Either partial transpose has an eigenvalue below `-tol`; certifies entanglement.
    pub npt: bool,
}

pub fn ppt_test(rho: &DensityMatrix, tol: f64) -> PptOutcome {
    let min_eig = |s| {
        partial_transpose(rho, s)
            .min_eigenvalue(f64::INFINITY)
            .expect("partial transpose is square")
    };
    let min_eig_first = min_eig(Subsystem::First);
    let min_eig_second = min_eig(Subsystem::Second);
    PptOutcome {
        min_eig_first,
        min_eig_second,
        npt: min_eig_first < -tol || min_eig_second < -tol,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CondOutcome {
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs > rhs + tol`: entangled. `false` is inconclusive.
    pub violated: bool,
}

/// The `d x d` separability inequality
///
/// ```text
/// 2 max{ sum_{i<j} |rho[i(d+1), j(d+1)]|, sum_{i<j} |rho[id+j, jd+i]| }
///   <= (d-1)/2 sum_i rho[i(d+1), i(d+1)] + sum_{i<j} sqrt(rho[id+j, id+j] rho[jd+i, jd+i])
/// ```
///
/// with 0-based flat indices, checked at [`VIOLATION_TOL`].
pub fn cond_inequality(rho: &DensityMatrix) -> Result<CondOutcome> {
    cond_inequality_with_tol(rho, VIOLATION_TOL)
}

pub fn cond_inequality_with_tol(rho: &DensityMatrix, tol: f64) -> Result<CondOutcome> {
    let dims = rho.dims();
    let (d1, d2) = (dims.d1(), dims.d2());
    if d1 != d2 {
        return Err(Error::NotSquareBipartite { d1, d2 });
    }
    let d = d1;
    let mut same = 0.0;
    let mut swapped = 0.0;
    let mut geometric = 0.0;
    for i in 0..d {
        for j in i + 1..d {
            same += rho.get(i * (d + 1), j * (d + 1)).norm();
            swapped += rho.get(i * d + j, j * d + i).norm();
            let prod = rho.diag(i * d + j) * rho.diag(j * d + i);
            geometric += prod.max(0.0).sqrt();
        }
    }
    let diagonal: f64 = (0..d).map(|i| rho.diag(i * (d + 1))).sum();
    let lhs = 2.0 * f64::max(same, swapped);
    let rhs = (d as f64 - 1.0) / 2.0 * diagonal + geometric;
    Ok(CondOutcome {
        lhs,
        rhs,
        violated: lhs > rhs + tol,
    })
}

fn check_unit_interval(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            domain: "[0, 1]",
        })
    }
}

fn check_dimension(d: usize) -> Result<()> {
    if d >= 2 {
        Ok(())
    } else {
        Err(Error::Domain {
            name: "d",
            value: d as f64,
            domain: ">= 2",
        })
    }
}

/// `sum_{i=1}^{d} (d - i)`
fn pair_count(d: usize) -> f64 {
    (1..=d).map(|i| (d - i) as f64).sum()
}

/// The inequality's two sides on the Werner state `W_d^eta`, in closed form:
/// `rhs = (d-1+eta-eta d)/(2d) + S (d-1+eta)/((d-1) d^2)` and
/// `lhs = 2 S eta/((d-1) d)` with `S = sum_{i=1}^{d} (d-i)`.
pub fn werner_terms(d: usize, eta: f64) -> Result<CondOutcome> {
    check_dimension(d)?;
    check_unit_interval("eta", eta)?;
    let df = d as f64;
    let s = pair_count(d);
    let rhs = (df - 1.0 + eta - eta * df) / (2.0 * df) + s * (df - 1.0 + eta) / ((df - 1.0) * df * df);
    let lhs = 2.0 * s * eta / ((df - 1.0) * df);
    Ok(CondOutcome {
        lhs,
        rhs,
        violated: lhs > rhs + VIOLATION_TOL,
    })
}

/// Ratio `p = rhs / lhs` on the Werner state; `p < 1` detects
/// entanglement. `eta = 0` gives `+inf`.
pub fn werner_p(d: usize, eta: f64) -> Result<f64> {
    Ok(ratio(werner_terms(d, eta)?))
}

/// Closed-form sides on the isotropic state `rho_alpha`:
/// `rhs = (d(d-1)/2)((1-alpha)/d^2 + alpha/d) + S (1-alpha)/d^2`,
/// `lhs = 2 S alpha/d`.
pub fn isotropic_terms(d: usize, alpha: f64) -> Result<CondOutcome> {
    check_dimension(d)?;
    check_unit_interval("alpha", alpha)?;
    let df = d as f64;
    let s = pair_count(d);
    let rhs = (df - 1.0) * df / 2.0 * ((1.0 - alpha) / (df * df) + alpha / df) + s * (1.0 - alpha) / (df * df);
    let lhs = 2.0 * s * alpha / df;
    Ok(CondOutcome {
        lhs,
        rhs,
        violated: lhs > rhs + VIOLATION_TOL,
    })
}

/// Ratio `q = rhs / lhs` on the isotropic state; `q < 1` detects
/// entanglement. `alpha = 0` gives `+inf`.
pub fn isotropic_q(d: usize, alpha: f64) -> Result<f64> {
    Ok(ratio(isotropic_terms(d, alpha)?))
}

fn ratio(c: CondOutcome) -> f64 {
    if c.lhs == 0.0 {
        f64::INFINITY
    } else {
        c.rhs / c.lhs
    }
}

/// Witness verdict with the same absolute slack as [`VIOLATION_TOL`].
pub fn witness_detects(value: f64) -> bool {
    value < 1.0 - VIOLATION_TOL
}

/// Everything [`analyze`] measures on one state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub dims: [usize; 2],
    pub purity: f64,
    pub pure: bool,
    /// Only evaluated for pure states.
    pub pure_product: Option<bool>,
    pub ppt_min_eig_1: f64,
    pub ppt_min_eig_2: f64,
    pub ppt_npt: bool,
    /// `None` unless `d1 == d2`.
    pub cond_lhs: Option<f64>,
    pub cond_rhs: Option<f64>,
    pub cond_violated: Option<bool>,
    pub tolerances: Tolerances,
}

impl CriterionReport {
    /// True when at least one test certifies entanglement.
    pub fn entanglement_detected(&self) -> bool {
        self.ppt_npt || self.cond_violated == Some(true) || self.pure_product == Some(false)
    }
}

pub fn analyze(rho: &DensityMatrix, tolerances: Tolerances) -> CriterionReport {
    let purity = purity_direct(rho);
    let pure = (purity - 1.0).abs() <= tolerances.purity;
    let pure_product = if pure {
        pure_product_check(rho, tolerances.product.max(tolerances.purity)).ok().map(|c| c.all)
    } else {
        None
    };
    let ppt = ppt_test(rho, tolerances.ppt);
    let cond = cond_inequality_with_tol(rho, tolerances.violation).ok();
    CriterionReport {
        dims: rho.dims().into(),
        purity,
        pure,
        pure_product,
        ppt_min_eig_1: ppt.min_eig_first,
        ppt_min_eig_2: ppt.min_eig_second,
        ppt_npt: ppt.npt,
        cond_lhs: cond.map(|c| c.lhs),
        cond_rhs: cond.map(|c| c.rhs),
        cond_violated: cond.map(|c| c.violated),
        tolerances,
    }
}
