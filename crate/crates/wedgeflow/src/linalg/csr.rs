//! Compressed sparse row matrices built from triplet streams.

use std::io::Write;

use crate::error::{Result, WedgeError};

/// Square sparse matrix in CSR format. Symmetric operators store both
/// triangles so that matrix-vector products need no branching.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    data: Vec<f64>,
}

impl CsrMatrix {
    /// Build from (row, col, value) triplets; duplicate entries are summed.
    /// Entries that sum to exactly zero are kept so that structurally
    /// identical assemblies compare equal.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        triplets.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut rows: Vec<usize> = Vec::with_capacity(triplets.len());
        let mut indices = Vec::with_capacity(triplets.len());
        let mut data: Vec<f64> = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            debug_assert!(r < n && c < n);
            if rows.last() == Some(&r) && indices.last() == Some(&c) {
                *data.last_mut().unwrap() += v;
            } else {
                rows.push(r);
                indices.push(c);
                data.push(v);
            }
        }
        let mut indptr = vec![0usize; n + 1];
        for &r in &rows {
            indptr[r + 1] += 1;
        }
        for i in 0..n {
            indptr[i + 1] += indptr[i];
        }
        CsrMatrix {
            n,
            indptr,
            indices,
            data,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.data.len()
    }

    /// Row slice access: (column indices, values).
    pub fn row(&self, r: usize) -> (&[usize], &[f64]) {
        let lo = self.indptr[r];
        let hi = self.indptr[r + 1];
        (&self.indices[lo..hi], &self.data[lo..hi])
    }

    /// y = A x.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        debug_assert_eq!(y.len(), self.n);
        for r in 0..self.n {
            let (cols, vals) = self.row(r);
            let mut s = 0.0;
            for (c, v) in cols.iter().zip(vals) {
                s += v * x[*c];
            }
            y[r] = s;
        }
    }

    /// Owned matrix-vector product.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.matvec(x, &mut y);
        y
    }

    /// Quadratic form vᵀ A v.
    pub fn quad_form(&self, v: &[f64]) -> f64 {
        let mut s = 0.0;
        for r in 0..self.n {
            let (cols, vals) = self.row(r);
            let mut row_sum = 0.0;
            for (c, a) in cols.iter().zip(vals) {
                row_sum += a * v[*c];
            }
            s += v[r] * row_sum;
        }
        s
    }

    /// Σ |a_ij v_i v_j|, the natural scale for relative skewness checks.
    pub fn abs_quad_form(&self, v: &[f64]) -> f64 {
        let mut s = 0.0;
        for r in 0..self.n {
            let (cols, vals) = self.row(r);
            let mut row_sum = 0.0;
            for (c, a) in cols.iter().zip(vals) {
                row_sum += (a * v[*c]).abs();
            }
            s += v[r].abs() * row_sum;
        }
        s
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// max |a_ij − a_ji| over all stored entries (0 for exactly symmetric).
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.n {
            let (cols, vals) = self.row(r);
            for (c, v) in cols.iter().zip(vals) {
                let vt = self.get(*c, r);
                worst = worst.max((v - vt).abs());
            }
        }
        worst
    }

    /// max |a_ij + a_ji| over all stored entries (0 for exactly skew).
    pub fn skew_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.n {
            let (cols, vals) = self.row(r);
            for (c, v) in cols.iter().zip(vals) {
                let vt = self.get(*c, r);
                worst = worst.max((v + vt).abs());
            }
        }
        worst
    }

    /// Entry lookup (binary search within the row).
    pub fn get(&self, r: usize, c: usize) -> f64 {
        let (cols, vals) = self.row(r);
        match cols.binary_search(&c) {
            Ok(p) => vals[p],
            Err(_) => 0.0,
        }
    }

    /// Half bandwidth: max |i − j| over stored entries.
    pub fn bandwidth(&self) -> usize {
        let mut bw = 0usize;
        for r in 0..self.n {
            let (cols, _) = self.row(r);
            for c in cols {
                bw = bw.max(r.abs_diff(*c));
            }
        }
        bw
    }

    /// Same sparsity pattern, every entry multiplied by `factor`.
    pub fn scale(&self, factor: f64) -> CsrMatrix {
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v *= factor;
        }
        out
    }

    /// A + B with identical dimensions.
    pub fn add(&self, other: &CsrMatrix, beta: f64) -> CsrMatrix {
        assert_eq!(self.n, other.n);
        let mut trips = Vec::with_capacity(self.nnz() + other.nnz());
        for r in 0..self.n {
            let (cols, vals) = self.row(r);
            for (c, v) in cols.iter().zip(vals) {
                trips.push((r, *c, *v));
            }
            let (cols, vals) = other.row(r);
            for (c, v) in cols.iter().zip(vals) {
                trips.push((r, *c, beta * *v));
            }
        }
        CsrMatrix::from_triplets(self.n, trips)
    }

    /// Write in coordinate text format: one `row col value` line per entry.
    pub fn write_coo<W: Write>(&self, mut w: W) -> Result<()> {
        for r in 0..self.n {
            let (cols, vals) = self.row(r);
            for (c, v) in cols.iter().zip(vals) {
                writeln!(w, "{} {} {:.16e}", r, c, v).map_err(WedgeError::Io)?;
            }
        }
        Ok(())
    }
}
