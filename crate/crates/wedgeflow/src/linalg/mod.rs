//! Sparse and banded linear algebra used by the discretizations.
//!
//! The assembled operators live on a tensor grid with row-major node
//! ordering, so they are banded with bandwidth `n_phi + 1`. Factorizations
//! are therefore banded direct methods: an LLᵀ Cholesky for symmetric
//! positive definite systems (shift-invert eigensolves, symmetric
//! Crank–Nicolson steps) and an LU with partial pivoting for the
//! nonsymmetric steps that include the skew twist term.

mod band;
mod csr;
mod eig;

pub use band::{BandLu, SymBand};
pub use csr::CsrMatrix;
pub use eig::{
    dense_generalized_eigenvalues, smallest_eigenpairs, tridiagonal_smallest_eigenvalue,
    EigenPair, EigOptions,
};

/// Inner product ⟨u, v⟩_M with a diagonal mass matrix.
pub fn mass_dot(u: &[f64], mass: &[f64], v: &[f64]) -> f64 {
    debug_assert_eq!(u.len(), mass.len());
    debug_assert_eq!(v.len(), mass.len());
    let mut s = 0.0;
    for i in 0..u.len() {
        s += u[i] * mass[i] * v[i];
    }
    s
}

/// M-norm ‖v‖_M = √(vᵀ M v).
pub fn mass_norm(v: &[f64], mass: &[f64]) -> f64 {
    mass_dot(v, mass, v).sqrt()
}

/// Euclidean norm.
pub fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
