//! Parametrised state families: Werner, isotropic, the 3x3 Horodecki-type
//! mixture, the UPB-tiles mixture, and two-qubit Bell states.
//!
//! In the 3x3 families the kets `e1, e2, e3` are the computational basis
//! `|0>, |1>, |2>`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::states::{BipartiteDims, DensityMatrix, Ket};

const NORM_TOL: f64 = 1e-9;

fn unit_interval(name: &'static str, value: f64) -> Result<()> {
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

fn square_dims(d: usize) -> Result<BipartiteDims> {
    BipartiteDims::square(d).map_err(|_| Error::Domain {
        name: "d",
        value: d as f64,
        domain: ">= 2",
    })
}

/// Flip operator `V = sum_{i,j} |ij><ji|`, including `i = j`.
pub fn flip(d: usize) -> ComplexMatrix {
    let mut v = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            v[(i * d + j, j * d + i)] = Complex64::new(1.0, 0.0);
        }
    }
    v
}

/// `|psi+> = d^{-1/2} sum_i |ii>`.
pub fn max_entangled_ket(d: usize) -> Ket {
    let mut amps = vec![Complex64::new(0.0, 0.0); d * d];
    for i in 0..d {
        amps[i * d + i] = Complex64::new(1.0, 0.0);
    }
    Ket::new(amps).expect("non-zero")
}

/// `P+ = |psi+><psi+|`.
pub fn max_entangled(d: usize) -> Result<DensityMatrix> {
    DensityMatrix::pure(&max_entangled_ket(d), square_dims(d)?)
}

/// `W_d^eta = ((d-1+eta)/(d-1)) I/d^2 - (eta/(d-1)) V/d`.
pub fn werner(d: usize, eta: f64) -> Result<DensityMatrix> {
    let dims = square_dims(d)?;
    unit_interval("eta", eta)?;
    let df = d as f64;
    let identity = ComplexMatrix::identity(d * d).scale((df - 1.0 + eta) / ((df - 1.0) * df * df));
    let flip = flip(d).scale(eta / ((df - 1.0) * df));
    Ok(DensityMatrix::from_parts_unchecked(&identity - &flip, dims))
}

/// `(1-alpha)/d^2 I + alpha |psi+><psi+|`.
pub fn isotropic(d: usize, alpha: f64) -> Result<DensityMatrix> {
    let dims = square_dims(d)?;
    unit_interval("alpha", alpha)?;
    let df = d as f64;
    let noise = ComplexMatrix::identity(d * d).scale((1.0 - alpha) / (df * df));
    let pplus = max_entangled_ket(d).projector().scale(alpha);
    Ok(DensityMatrix::from_parts_unchecked(&noise + &pplus, dims))
}

fn basis3(i: usize) -> Ket {
    Ket::basis(3, i)
}

fn dims33() -> BipartiteDims {
    BipartiteDims::square(3).expect("3 >= 2")
}

/// `(3/8) P_Psi + (1/8) Q` with
/// `Q = I (x) I - (sum_i P_ei (x) P_ei + P_e3 (x) P_e1)` and
/// `Psi = (e1e1 + e2e2 + e3e3)/sqrt(3)`.
pub fn rho_insep() -> DensityMatrix {
    let proj = |i: usize, j: usize| basis3(i).tensor(&basis3(j)).projector();
    let mut removed = &(&proj(0, 0) + &proj(1, 1)) + &proj(2, 2);
    removed = &removed + &proj(2, 0);
    let q = &ComplexMatrix::identity(9) - &removed;
    let psi = max_entangled_ket(3).projector();
    let m = &psi.scale(3.0 / 8.0) + &q.scale(1.0 / 8.0);
    DensityMatrix::from_parts_unchecked(m, dims33())
}

/// `Phi_a = e3 (x) (sqrt((1+a)/2) e1 + sqrt((1-a)/2) e3)`.
fn phi_a(a: f64) -> Ket {
    let side = Ket::from_real(&[((1.0 + a) / 2.0).sqrt(), 0.0, ((1.0 - a) / 2.0).sqrt()]).expect("unit norm");
    basis3(2).tensor(&side)
}

/// `rho_a = 8a/(8a+1) rho_insep + 1/(8a+1) P_{Phi_a}`.
pub fn horodecki_rho_a(a: f64) -> Result<DensityMatrix> {
    unit_interval("a", a)?;
    let w = 8.0 * a / (8.0 * a + 1.0);
    let m = &rho_insep().matrix().scale(w) + &phi_a(a).projector().scale(1.0 / (8.0 * a + 1.0));
    Ok(DensityMatrix::from_parts_unchecked(m, dims33()))
}

/// `(1-p) rho_a + p P+` on `3 x 3`.
pub fn horodecki_mixture(a: f64, p: f64) -> Result<DensityMatrix> {
    unit_interval("p", p)?;
    let rho_a = horodecki_rho_a(a)?;
    let pplus = max_entangled_ket(3).projector();
    let m = &rho_a.matrix().scale(1.0 - p) + &pplus.scale(p);
    Ok(DensityMatrix::from_parts_unchecked(m, dims33()))
}

/// The five tiles product vectors `xi_0 .. xi_4`.
pub fn tiles_vectors() -> [Ket; 5] {
    let k = |v: &[f64]| Ket::from_real(v).expect("non-zero");
    let e = basis3;
    [
        e(0).tensor(&k(&[1.0, -1.0, 0.0])),
        k(&[1.0, -1.0, 0.0]).tensor(&e(2)),
        e(2).tensor(&k(&[0.0, 1.0, -1.0])),
        k(&[0.0, 1.0, -1.0]).tensor(&e(0)),
        k(&[1.0, 1.0, 1.0]).tensor(&k(&[1.0, 1.0, 1.0])),
    ]
}

/// `(1/4)(I - sum_i |xi_i><xi_i|)`: the PPT entangled tiles state.
pub fn upb_tiles() -> DensityMatrix {
    let mut m = ComplexMatrix::identity(9);
    for xi in tiles_vectors() {
        m = &m - &xi.projector();
    }
    DensityMatrix::from_parts_unchecked(m.scale(0.25), dims33())
}

/// `(1-p) rho_tiles + p P+`.
pub fn upb_mixture(p: f64) -> Result<DensityMatrix> {
    unit_interval("p", p)?;
    let m = &upb_tiles().matrix().scale(1.0 - p) + &max_entangled_ket(3).projector().scale(p);
    Ok(DensityMatrix::from_parts_unchecked(m, dims33()))
}

/// `a|00> + b|11>`.
pub fn bell(a: Complex64, b: Complex64) -> Result<DensityMatrix> {
    let norm_sqr = a.norm_sqr() + b.norm_sqr();
    if (norm_sqr - 1.0).abs() > NORM_TOL {
        return Err(Error::Norm(norm_sqr));
    }
    let zero = Complex64::new(0.0, 0.0);
    let v = Ket::new(vec![a, zero, zero, b])?;
    DensityMatrix::pure(&v, BipartiteDims::square(2)?)
}

/// A family member with its parameters, as recorded in state-file headers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilySpec {
    Werner { d: usize, eta: f64 },
    Isotropic { d: usize, alpha: f64 },
    HorodeckiMixture { a: f64, p: f64 },
    UpbMixture { p: f64 },
    Bell { a: [f64; 2], b: [f64; 2] },
    Product { left: Vec<[f64; 2]>, right: Vec<[f64; 2]> },
}

impl FamilySpec {
    pub fn build(&self) -> Result<DensityMatrix> {
        let c = |z: [f64; 2]| Complex64::new(z[0], z[1]);
        match self {
            Self::Werner { d, eta } => werner(*d, *eta),
            Self::Isotropic { d, alpha } => isotropic(*d, *alpha),
            Self::HorodeckiMixture { a, p } => horodecki_mixture(*a, *p),
            Self::UpbMixture { p } => upb_mixture(*p),
            Self::Bell { a, b } => bell(c(*a), c(*b)),
            Self::Product { left, right } => {
                let l = Ket::new(left.iter().copied().map(c).collect())?;
                let r = Ket::new(right.iter().copied().map(c).collect())?;
                DensityMatrix::pure(&l.tensor(&r), BipartiteDims::new(l.dim(), r.dim())?)
            }
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Werner { .. } => "werner",
            Self::Isotropic { .. } => "isotropic",
            Self::HorodeckiMixture { .. } => "horodecki_mixture",
            Self::UpbMixture { .. } => "upb_mixture",
            Self::Bell { .. } => "bell",
            Self::Product { .. } => "product",
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Werner { d, eta } => write!(f, "werner(d={d}, eta={eta})"),
            Self::Isotropic { d, alpha } => write!(f, "isotropic(d={d}, alpha={alpha})"),
            Self::HorodeckiMixture { a, p } => write!(f, "horodecki_mixture(a={a}, p={p})"),
            Self::UpbMixture { p } => write!(f, "upb_mixture(p={p})"),
            Self::Bell { a, b } => write!(f, "bell(a={}+{}i, b={}+{}i)", a[0], a[1], b[0], b[1]),
            Self::Product { .. } => f.write_str("product"),
        }
    }
}
