//! Banded direct factorizations.

use super::CsrMatrix;
use crate::error::{Result, WedgeError};

/// Symmetric banded matrix, lower triangle stored column-major:
/// entry (i, j) with 0 ≤ i − j ≤ bw lives at `data[j * (bw + 1) + (i - j)]`.
#[derive(Debug, Clone)]
pub struct SymBand {
    n: usize,
    bw: usize,
    data: Vec<f64>,
    factored: bool,
}

impl SymBand {
    /// Capture the lower triangle of a symmetric CSR matrix, optionally
    /// adding `shift * mass` on the diagonal.
    pub fn from_csr(a: &CsrMatrix, shift: f64, mass: Option<&[f64]>) -> Self {
        let n = a.n();
        let bw = a.bandwidth();
        let mut data = vec![0.0; n * (bw + 1)];
        for r in 0..n {
            let (cols, vals) = a.row(r);
            for (c, v) in cols.iter().zip(vals) {
                if r >= *c {
                    data[c * (bw + 1) + (r - c)] = *v;
                }
            }
        }
        if shift != 0.0 {
            for j in 0..n {
                let m = mass.map_or(1.0, |m| m[j]);
                data[j * (bw + 1)] += shift * m;
            }
        }
        SymBand {
            n,
            bw,
            data,
            factored: false,
        }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[j * (self.bw + 1) + (i - j)]
    }

    #[inline]
    fn at_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        &mut self.data[j * (self.bw + 1) + (i - j)]
    }

    /// In-place LLᵀ factorization. Fails if the matrix is not positive
    /// definite (non-positive pivot).
    pub fn cholesky(&mut self) -> Result<()> {
        let n = self.n;
        let bw = self.bw;
        for j in 0..n {
            let kmin = j.saturating_sub(bw);
            let mut d = self.at(j, j);
            for k in kmin..j {
                let ljk = self.at(j, k);
                d -= ljk * ljk;
            }
            if d <= 0.0 || !d.is_finite() {
                return Err(WedgeError::numerical(format!(
                    "Cholesky breakdown at pivot {j}: d = {d:.3e} (matrix not positive definite)"
                )));
            }
            let ljj = d.sqrt();
            *self.at_mut(j, j) = ljj;
            let imax = (j + bw).min(n - 1);
            for i in j + 1..=imax {
                let kmin_i = i.saturating_sub(bw).max(kmin);
                let mut s = self.at(i, j);
                for k in kmin_i..j {
                    s -= self.at(i, k) * self.at(j, k);
                }
                *self.at_mut(i, j) = s / ljj;
            }
        }
        self.factored = true;
        Ok(())
    }

    /// Solve A x = b with the Cholesky factor (forward then back
    /// substitution). Panics if `cholesky` has not run.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        assert!(self.factored, "SymBand::solve before cholesky()");
        let n = self.n;
        let bw = self.bw;
        let mut x = b.to_vec();
        // L z = b
        for i in 0..n {
            let kmin = i.saturating_sub(bw);
            let mut s = x[i];
            for k in kmin..i {
                s -= self.at(i, k) * x[k];
            }
            x[i] = s / self.at(i, i);
        }
        // Lᵀ y = z
        for i in (0..n).rev() {
            let kmax = (i + bw).min(n - 1);
            let mut s = x[i];
            for k in i + 1..=kmax {
                s -= self.at(k, i) * x[k];
            }
            x[i] = s / self.at(i, i);
        }
        x
    }
}

/// General banded matrix with `kl` sub- and `ku` super-diagonals, stored
/// LAPACK-style with `kl` extra super-diagonals of fill for partial
/// pivoting: entry (i, j) lives at `ab[j * ldab + (kl + ku + i - j)]`.
#[derive(Debug, Clone)]
pub struct BandLu {
    n: usize,
    kl: usize,
    ku: usize,
    ab: Vec<f64>,
    ipiv: Vec<usize>,
    factored: bool,
}

impl BandLu {
    /// Capture `sym + skew` (both CSR, bandwidth ≤ max of the two) plus
    /// `diag` on the diagonal.
    pub fn from_parts(sym: &CsrMatrix, skew: Option<&CsrMatrix>, diag: Option<&[f64]>) -> Self {
        let n = sym.n();
        let mut bw = sym.bandwidth();
        if let Some(k) = skew {
            bw = bw.max(k.bandwidth());
        }
        let (kl, ku) = (bw, bw);
        let ldab = 2 * kl + ku + 1;
        let mut ab = vec![0.0; n * ldab];
        let put = |i: usize, j: usize, v: f64, ab: &mut Vec<f64>| {
            ab[j * ldab + (kl + ku + i - j)] += v;
        };
        for r in 0..n {
            let (cols, vals) = sym.row(r);
            for (c, v) in cols.iter().zip(vals) {
                put(r, *c, *v, &mut ab);
            }
            if let Some(k) = skew {
                let (cols, vals) = k.row(r);
                for (c, v) in cols.iter().zip(vals) {
                    put(r, *c, *v, &mut ab);
                }
            }
            if let Some(d) = diag {
                put(r, r, d[r], &mut ab);
            }
        }
        BandLu {
            n,
            kl,
            ku,
            ab,
            ipiv: Vec::new(),
            factored: false,
        }
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        j * (2 * self.kl + self.ku + 1) + (self.kl + self.ku + i - j)
    }

    /// In-place LU with partial pivoting (banded dgbtrf).
    pub fn factor(&mut self) -> Result<()> {
        let n = self.n;
        let kl = self.kl;
        let ku = self.ku;
        self.ipiv = (0..n).collect();
        for j in 0..n {
            // pivot search in column j, rows j..=j+kl
            let imax = (j + kl).min(n - 1);
            let mut p = j;
            let mut pmax = self.ab[self.idx(j, j)].abs();
            for i in j + 1..=imax {
                let v = self.ab[self.idx(i, j)].abs();
                if v > pmax {
                    pmax = v;
                    p = i;
                }
            }
            if pmax == 0.0 || !pmax.is_finite() {
                return Err(WedgeError::numerical(format!(
                    "banded LU breakdown at column {j}: pivot = {pmax:.3e}"
                )));
            }
            self.ipiv[j] = p;
            let cmax = (j + kl + ku).min(n - 1);
            if p != j {
                for c in j..=cmax {
                    let a = self.idx(j, c);
                    let b = self.idx(p, c);
                    self.ab.swap(a, b);
                }
            }
            let pivot = self.ab[self.idx(j, j)];
            for i in j + 1..=imax {
                let p = self.idx(i, j);
                self.ab[p] /= pivot;
            }
            // trailing update: A[i, c] -= m_i * A[j, c]
            for c in j + 1..=cmax {
                let ajc = self.ab[self.idx(j, c)];
                if ajc == 0.0 {
                    continue;
                }
                let base_j = self.idx(j, j);
                let base_c = self.idx(j, c);
                for i in j + 1..=imax {
                    let m = self.ab[base_j + (i - j)];
                    self.ab[base_c + (i - j)] -= m * ajc;
                }
            }
        }
        self.factored = true;
        Ok(())
    }

    /// Solve A x = b after `factor`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        assert!(self.factored, "BandLu::solve before factor()");
        let n = self.n;
        let kl = self.kl;
        let ku = self.ku;
        let mut x = b.to_vec();
        // forward: apply pivots and L
        for j in 0..n {
            let p = self.ipiv[j];
            if p != j {
                x.swap(j, p);
            }
            let imax = (j + kl).min(n - 1);
            let xj = x[j];
            if xj != 0.0 {
                let base = self.idx(j, j);
                for i in j + 1..=imax {
                    x[i] -= self.ab[base + (i - j)] * xj;
                }
            }
        }
        // back substitution with U (upper bandwidth kl + ku)
        for i in (0..n).rev() {
            let cmax = (i + kl + ku).min(n - 1);
            let mut s = x[i];
            for c in i + 1..=cmax {
                s -= self.ab[self.idx(i, c)] * x[c];
            }
            x[i] = s / self.ab[self.idx(i, i)];
        }
        x
    }
}
