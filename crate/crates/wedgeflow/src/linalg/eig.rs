//! Eigenvalue solvers for the generalized symmetric problem A v = λ M v
//! with diagonal positive mass M.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};

use super::{mass_dot, norm2, CsrMatrix, SymBand};
use crate::error::{Result, WedgeError};

/// One converged eigenpair of A v = λ M v.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    /// M-normalized eigenvector: vᵀ M v = 1.
    pub vector: Vec<f64>,
    /// ‖A v − λ M v‖₂ / ‖v‖_M.
    pub residual: f64,
}

/// Options for [`smallest_eigenpairs`].
#[derive(Debug, Clone)]
pub struct EigOptions {
    /// Number of eigenpairs wanted.
    pub k: usize,
    /// Residual tolerance.
    pub tol: f64,
    /// Spectral shift σ: the iteration factors A + σ M, which must be
    /// positive definite. σ = 0 works for positive definite A; indefinite
    /// problems (the Hardy quotient) need σ > −λ_min.
    pub shift: f64,
    pub max_iter: usize,
    /// Seed for the random start block.
    pub seed: u64,
}

impl EigOptions {
    pub fn new(k: usize) -> Self {
        EigOptions {
            k,
            tol: 1e-9,
            shift: 0.0,
            max_iter: 400,
            seed: 7,
        }
    }

    pub fn with_shift(mut self, shift: f64) -> Self {
        self.shift = shift;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }
}

/// Shift-invert subspace iteration with Rayleigh–Ritz extraction.
///
/// Factors B = A + σM once (banded Cholesky), then iterates
/// X ← B⁻¹ M X followed by a Rayleigh–Ritz solve of the projected pencil
/// (XᵀAX, XᵀMX). The block is a few vectors wider than `k`, which both
/// accelerates convergence and handles the eigenvalue multiplicities of
/// the decoupled reference operator (deflation by block orthogonality).
pub fn smallest_eigenpairs(
    a: &CsrMatrix,
    mass: &[f64],
    opts: &EigOptions,
) -> Result<Vec<EigenPair>> {
    let n = a.n();
    if opts.k == 0 {
        return Err(WedgeError::validation("eigensolver: k must be >= 1"));
    }
    if opts.k > n {
        return Err(WedgeError::validation(format!(
            "eigensolver: k = {} exceeds problem size {}",
            opts.k, n
        )));
    }
    let block = (opts.k + 4).min(n);
    let mut factor = SymBand::from_csr(a, opts.shift, Some(mass));
    factor.cholesky().map_err(|e| {
        WedgeError::numerical(format!(
            "shift-invert factorization failed (shift = {}): {e}",
            opts.shift
        ))
    })?;

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut x: Vec<Vec<f64>> = (0..block)
        .map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    m_orthonormalize(&mut x, mass)?;

    let mut best_residual = f64::INFINITY;
    for _iter in 0..opts.max_iter {
        // Y = B^{-1} M X
        let mut y: Vec<Vec<f64>> = x
            .iter()
            .map(|col| {
                let mut rhs = col.clone();
                for i in 0..n {
                    rhs[i] *= mass[i];
                }
                factor.solve(&rhs)
            })
            .collect();
        // twice for numerical orthogonality; the RR Gram matrix is then I
        m_orthonormalize(&mut y, mass)?;
        m_orthonormalize(&mut y, mass)?;

        // Rayleigh-Ritz on span(Y) for the pencil (A, M)
        let ay: Vec<Vec<f64>> = y.iter().map(|col| a.apply(col)).collect();
        let mut h = DMatrix::<f64>::zeros(block, block);
        for i in 0..block {
            for j in i..block {
                let v = dot(&y[i], &ay[j]);
                h[(i, j)] = v;
                h[(j, i)] = v;
            }
        }
        let eig = nalgebra::SymmetricEigen::new(h);
        let mut order: Vec<usize> = (0..block).collect();
        order.sort_by(|&p, &q| {
            eig.eigenvalues[p]
                .partial_cmp(&eig.eigenvalues[q])
                .unwrap()
        });

        // rotate the block into Ritz vectors
        let mut xn: Vec<Vec<f64>> = Vec::with_capacity(block);
        let mut values = Vec::with_capacity(block);
        for &p in &order {
            let z: DVector<f64> = eig.eigenvectors.column(p).into();
            let mut col = vec![0.0; n];
            for (q, y_q) in y.iter().enumerate() {
                let w = z[q];
                if w != 0.0 {
                    for i in 0..n {
                        col[i] += w * y_q[i];
                    }
                }
            }
            values.push(eig.eigenvalues[p]);
            xn.push(col);
        }

        // residuals of the first k Ritz pairs
        let mut worst = 0.0f64;
        for i in 0..opts.k {
            let r = residual(a, mass, values[i], &xn[i]);
            worst = worst.max(r);
        }
        best_residual = best_residual.min(worst);
        x = xn;
        if worst <= opts.tol {
            let pairs = x
                .iter()
                .take(opts.k)
                .zip(values.iter())
                .map(|(v, &lam)| {
                    let mut vec = v.clone();
                    let nrm = mass_dot(&vec, mass, &vec).sqrt();
                    for q in vec.iter_mut() {
                        *q /= nrm;
                    }
                    EigenPair {
                        value: lam,
                        residual: residual(a, mass, lam, &vec),
                        vector: vec,
                    }
                })
                .collect();
            return Ok(pairs);
        }
    }
    Err(WedgeError::numerical(format!(
        "eigensolver did not reach tol {:.1e} in {} iterations (best residual {:.3e})",
        opts.tol, opts.max_iter, best_residual
    )))
}

fn dot(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

fn residual(a: &CsrMatrix, mass: &[f64], lam: f64, v: &[f64]) -> f64 {
    let mut r = a.apply(v);
    for i in 0..v.len() {
        r[i] -= lam * mass[i] * v[i];
    }
    norm2(&r) / mass_dot(v, mass, v).sqrt()
}

/// Modified Gram-Schmidt in the M inner product.
fn m_orthonormalize(cols: &mut [Vec<f64>], mass: &[f64]) -> Result<()> {
    for i in 0..cols.len() {
        for j in 0..i {
            let c = {
                let (head, tail) = cols.split_at(i);
                mass_dot(&head[j], mass, &tail[0])
            };
            let (head, tail) = cols.split_at_mut(i);
            for (q, h) in tail[0].iter_mut().zip(head[j].iter()) {
                *q -= c * h;
            }
        }
        let nrm = mass_dot(&cols[i], mass, &cols[i]).sqrt();
        if nrm < 1e-14 {
            return Err(WedgeError::numerical(
                "basis collapse during M-orthonormalization".to_string(),
            ));
        }
        for q in cols[i].iter_mut() {
            *q /= nrm;
        }
    }
    Ok(())
}

/// Smallest eigenvalue of a symmetric tridiagonal matrix (diagonal `d`,
/// off-diagonal `e`) by Sturm-sequence bisection. Independent of the
/// sparse machinery; serves as a 1D oracle.
pub fn tridiagonal_smallest_eigenvalue(d: &[f64], e: &[f64]) -> f64 {
    let n = d.len();
    assert_eq!(e.len() + 1, n);
    // Gershgorin bounds
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = (if i > 0 { e[i - 1].abs() } else { 0.0 })
            + (if i + 1 < n { e[i].abs() } else { 0.0 });
        lo = lo.min(d[i] - r);
        hi = hi.max(d[i] + r);
    }
    // count of eigenvalues < x via the LDLᵀ pivot signs
    let count_below = |x: f64| -> usize {
        let mut cnt = 0;
        let mut piv = d[0] - x;
        if piv < 0.0 {
            cnt += 1;
        }
        for i in 1..n {
            if piv == 0.0 {
                piv = 1e-300;
            }
            piv = d[i] - x - e[i - 1] * e[i - 1] / piv;
            if piv < 0.0 {
                cnt += 1;
            }
        }
        cnt
    };
    let mut a = lo;
    let mut b = hi;
    for _ in 0..110 {
        let mid = 0.5 * (a + b);
        if count_below(mid) >= 1 {
            b = mid;
        } else {
            a = mid;
        }
        if b - a <= f64::EPSILON * b.abs().max(a.abs()).max(1.0) {
            break;
        }
    }
    0.5 * (a + b)
}

/// All eigenvalues of A v = λ M v by a dense symmetric solve of
/// M^{-1/2} A M^{-1/2}, ascending. Reference oracle for coarse grids;
/// cost is O(n³).
pub fn dense_generalized_eigenvalues(a: &CsrMatrix, mass: &[f64]) -> Vec<f64> {
    let n = a.n();
    let mut dense = DMatrix::<f64>::zeros(n, n);
    for r in 0..n {
        let (cols, vals) = a.row(r);
        for (c, v) in cols.iter().zip(vals) {
            dense[(r, *c)] = v / (mass[r].sqrt() * mass[*c].sqrt());
        }
    }
    // symmetrize rounding noise
    for r in 0..n {
        for c in r + 1..n {
            let v = 0.5 * (dense[(r, c)] + dense[(c, r)]);
            dense[(r, c)] = v;
            dense[(c, r)] = v;
        }
    }
    let eig = nalgebra::SymmetricEigen::new(dense);
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    vals
}

#[cfg(test)]
mod tests {
    use super::*;

    /// 1D Dirichlet Laplacian on (0, L) with n interior nodes: eigenvalues
    /// (2/h²)(1 − cos(kπh/L)), a closed-form cross-check for both solvers.
    fn laplacian_1d(n: usize, l: f64) -> (CsrMatrix, Vec<f64>, f64) {
        let h = l / (n as f64 + 1.0);
        let mut trips = Vec::new();
        for i in 0..n {
            trips.push((i, i, 2.0 / (h * h)));
            if i + 1 < n {
                trips.push((i, i + 1, -1.0 / (h * h)));
                trips.push((i + 1, i, -1.0 / (h * h)));
            }
        }
        (CsrMatrix::from_triplets(n, trips), vec![1.0; n], h)
    }

    #[test]
    fn subspace_iteration_matches_closed_form() {
        let (a, m, h) = laplacian_1d(120, 1.0);
        let pairs = smallest_eigenpairs(&a, &m, &EigOptions::new(3)).unwrap();
        for (k, p) in pairs.iter().enumerate() {
            let exact = 2.0 / (h * h)
                * (1.0 - f64::cos((k as f64 + 1.0) * std::f64::consts::PI * h));
            assert!(
                (p.value - exact).abs() <= 1e-8 * exact,
                "k={k}: {} vs {exact}",
                p.value
            );
            assert!(p.residual <= 1e-9);
        }
        // M-orthogonality of distinct eigenvectors
        let d01 = mass_dot(&pairs[0].vector, &m, &pairs[1].vector).abs();
        assert!(d01 < 1e-10);
    }

    #[test]
    fn subspace_iteration_agrees_with_dense_oracle() {
        let (a, m, _) = laplacian_1d(60, 2.0);
        let dense = dense_generalized_eigenvalues(&a, &m);
        let pairs = smallest_eigenpairs(&a, &m, &EigOptions::new(4)).unwrap();
        for (k, p) in pairs.iter().enumerate() {
            assert!((p.value - dense[k]).abs() < 1e-7 * dense[k].abs());
        }
    }

    #[test]
    fn tridiagonal_bisection_matches_closed_form() {
        let n = 2000;
        let h = 1.0 / (n as f64 + 1.0);
        let d = vec![2.0 / (h * h); n];
        let e = vec![-1.0 / (h * h); n - 1];
        let lam = tridiagonal_smallest_eigenvalue(&d, &e);
        let exact = 2.0 / (h * h) * (1.0 - f64::cos(std::f64::consts::PI * h));
        assert!((lam - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn shifted_iteration_handles_indefinite_matrix() {
        // A = tridiagonal Laplacian minus a constant: smallest eigenvalue negative
        let (a0, m, h) = laplacian_1d(50, 1.0);
        let lam1 = 2.0 / (h * h) * (1.0 - f64::cos(std::f64::consts::PI * h));
        let shift_down: Vec<(usize, usize, f64)> =
            (0..50).map(|i| (i, i, -lam1 - 1.0)).collect();
        let a = a0.add(&CsrMatrix::from_triplets(50, shift_down), 1.0);
        let opts = EigOptions::new(1).with_shift(lam1 + 2.0);
        let pairs = smallest_eigenpairs(&a, &m, &opts).unwrap();
        assert!((pairs[0].value + 1.0).abs() < 1e-7);
    }
}
