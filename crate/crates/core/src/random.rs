//! Random states for property tests and soundness checks.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::ComplexMatrix;
use crate::states::{BipartiteDims, DensityMatrix, Ket};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

/// Haar-random ket of dimension `dim`.
pub fn ket<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Ket {
    loop {
        let v: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
        if let Ok(k) = Ket::new(v) {
            return k;
        }
    }
}

/// Single-system state `G G^dagger / Tr` with a Ginibre `G` of random rank.
pub fn single_system<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let rank = rng.random_range(1..=dim);
    ginibre_state(rng, dim, rank)
}

fn ginibre_state<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> ComplexMatrix {
    let data = (0..dim * rank).map(|_| gaussian(rng)).collect();
    let g = ComplexMatrix::from_vec(dim, rank, data).expect("shape");
    let m = &g * &g.dagger();
    let tr = m.trace().expect("square").re;
    let mut m = m.scale(tr.recip());
    // Enforce exact Hermiticity against rounding.
    for i in 0..dim {
        m[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
        for j in i + 1..dim {
            m[(j, i)] = m[(i, j)].conj();
        }
    }
    m
}

/// Random bipartite state of random rank.
pub fn density<R: Rng + ?Sized>(rng: &mut R, dims: BipartiteDims) -> DensityMatrix {
    let m = single_system(rng, dims.total());
    DensityMatrix::from_parts_unchecked(m, dims)
}

/// `|a>|b>` with independent Haar-random factors.
pub fn pure_product<R: Rng + ?Sized>(rng: &mut R, dims: BipartiteDims) -> DensityMatrix {
    let v = ket(rng, dims.d1()).tensor(&ket(rng, dims.d2()));
    DensityMatrix::pure(&v, dims).expect("dimensions agree")
}

/// Convex mixture of between 1 and `max_terms` random product states
/// `rho1 (x) rho2`, each factor of random rank.
pub fn separable_mixture<R: Rng + ?Sized>(
    rng: &mut R,
    dims: BipartiteDims,
    max_terms: usize,
) -> DensityMatrix {
    let terms = rng.random_range(1..=max_terms.max(1));
    let raw: Vec<f64> = (0..terms).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut acc = ComplexMatrix::zeros(dims.total(), dims.total());
    for w in raw {
        let rho1 = single_system(rng, dims.d1());
        let rho2 = single_system(rng, dims.d2());
        acc = &acc + &rho1.kron(&rho2).scale(w / total);
    }
    DensityMatrix::from_parts_unchecked(acc, dims)
}
