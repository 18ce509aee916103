//! Sparse complex matrices and dense vectors.
//!
//! Matrices are stored as a canonical coordinate list sorted by (row, col):
//! entries are deduplicated by construction and exact zeros are never stored,
//! so two equal matrices always have identical entry lists. Addition is a
//! linear two-pointer merge and Kronecker products emit their output already
//! sorted, which keeps construction time proportional to the entry count.
//! All operations are pure; nothing mutates its arguments.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const C_ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub const C_ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
pub const C_I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
pub const C_NEG_ONE: Complex64 = Complex64 { re: -1.0, im: 0.0 };

#[inline]
fn is_zero(z: Complex64) -> bool {
    z.re == 0.0 && z.im == 0.0
}

/// Complex matrix in sparse coordinate storage.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    n_rows: usize,
    n_cols: usize,
    /// (row, col, value), sorted by (row, col), no zeros, no duplicates.
    entries: Vec<(usize, usize, Complex64)>,
}

impl SparseMatrix {
    /// All-zero matrix of the given shape.
    pub fn zeros(n_rows: usize, n_cols: usize) -> Result<Self> {
        if n_rows == 0 || n_cols == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(SparseMatrix {
            n_rows,
            n_cols,
            entries: Vec::new(),
        })
    }

    /// Identity matrix with exactly `dim` stored entries.
    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = SparseMatrix::zeros(dim, dim)?;
        m.entries = (0..dim).map(|i| (i, i, C_ONE)).collect();
        Ok(m)
    }

    /// Canonical entries known to be sorted, in bounds, deduplicated, and
    /// zero-free.
    fn from_sorted(n_rows: usize, n_cols: usize, entries: Vec<(usize, usize, Complex64)>) -> Self {
        debug_assert!(entries
            .windows(2)
            .all(|w| (w[0].0, w[0].1) < (w[1].0, w[1].1)));
        debug_assert!(entries
            .iter()
            .all(|&(r, c, v)| r < n_rows && c < n_cols && !is_zero(v)));
        SparseMatrix {
            n_rows,
            n_cols,
            entries,
        }
    }

    /// Build from explicit entries. Rejects out-of-bounds, duplicate, and
    /// non-finite entries; exact zeros are dropped to keep storage canonical.
    pub fn from_entries<I>(n_rows: usize, n_cols: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Complex64)>,
    {
        let mut collected: Vec<(usize, usize, Complex64)> = Vec::new();
        for (row, col, value) in entries {
            if row >= n_rows || col >= n_cols {
                return Err(Error::EntryOutOfBounds {
                    row,
                    col,
                    rows: n_rows,
                    cols: n_cols,
                });
            }
            if !value.re.is_finite() || !value.im.is_finite() {
                return Err(Error::NonFinite { row, col });
            }
            if !is_zero(value) {
                collected.push((row, col, value));
            }
        }
        collected.sort_unstable_by_key(|&(r, c, _)| (r, c));
        for w in collected.windows(2) {
            if (w[0].0, w[0].1) == (w[1].0, w[1].1) {
                return Err(Error::DuplicateEntry {
                    row: w[1].0,
                    col: w[1].1,
                });
            }
        }
        if n_rows == 0 || n_cols == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(SparseMatrix::from_sorted(n_rows, n_cols, collected))
    }

    /// Diagonal matrix from the given values.
    pub fn from_diagonal(values: &[Complex64]) -> Result<Self> {
        SparseMatrix::from_entries(
            values.len(),
            values.len(),
            values.iter().enumerate().map(|(i, &v)| (i, i, v)),
        )
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    /// Number of stored (nonzero) entries.
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Entry at (row, col); zero if not stored.
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        match self
            .entries
            .binary_search_by_key(&(row, col), |&(r, c, _)| (r, c))
        {
            Ok(i) => self.entries[i].2,
            Err(_) => C_ZERO,
        }
    }

    /// Stored entries in (row, col) order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.entries.iter().copied()
    }

    /// Ranges of the entry list covering each nonempty row, ascending.
    fn row_runs(&self) -> Vec<(usize, std::ops::Range<usize>)> {
        let mut runs = Vec::new();
        let mut start = 0usize;
        while start < self.entries.len() {
            let row = self.entries[start].0;
            let mut end = start + 1;
            while end < self.entries.len() && self.entries[end].0 == row {
                end += 1;
            }
            runs.push((row, start..end));
            start = end;
        }
        runs
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut entries: Vec<_> = self.entries.iter().map(|&(r, c, v)| (c, r, v)).collect();
        entries.sort_unstable_by_key(|&(r, c, _)| (r, c));
        SparseMatrix::from_sorted(self.n_cols, self.n_rows, entries)
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> SparseMatrix {
        let mut entries: Vec<_> = self
            .entries
            .iter()
            .map(|&(r, c, v)| (c, r, v.conj()))
            .collect();
        entries.sort_unstable_by_key(|&(r, c, _)| (r, c));
        SparseMatrix::from_sorted(self.n_cols, self.n_rows, entries)
    }

    /// Kronecker product `self ⊗ other`, first factor most significant.
    pub fn kron(&self, other: &SparseMatrix) -> SparseMatrix {
        let mut entries = Vec::with_capacity(self.nnz() * other.nnz());
        // iterating row runs of both factors emits the output pre-sorted
        for (ar, a_run) in self.row_runs() {
            for (br, b_run) in other.row_runs() {
                let row = ar * other.n_rows + br;
                for &(_, ac, av) in &self.entries[a_run.clone()] {
                    let col_base = ac * other.n_cols;
                    for &(_, bc, bv) in &other.entries[b_run.clone()] {
                        let v = av * bv;
                        if !is_zero(v) {
                            entries.push((row, col_base + bc, v));
                        }
                    }
                }
            }
        }
        SparseMatrix::from_sorted(
            self.n_rows * other.n_rows,
            self.n_cols * other.n_cols,
            entries,
        )
    }

    /// Largest entry-wise |self - other| over the union of supports.
    pub fn max_diff(&self, other: &SparseMatrix) -> f64 {
        let mut max = 0.0f64;
        let (mut i, mut j) = (0usize, 0usize);
        while i < self.entries.len() || j < other.entries.len() {
            let ka = self.entries.get(i).map(|&(r, c, _)| (r, c));
            let kb = other.entries.get(j).map(|&(r, c, _)| (r, c));
            let d = match (ka, kb) {
                (Some(a), Some(b)) if a == b => {
                    let d = (self.entries[i].2 - other.entries[j].2).norm();
                    i += 1;
                    j += 1;
                    d
                }
                (Some(a), Some(b)) if a < b => {
                    let d = self.entries[i].2.norm();
                    i += 1;
                    d
                }
                (Some(_), Some(_)) => {
                    let d = other.entries[j].2.norm();
                    j += 1;
                    d
                }
                (Some(_), None) => {
                    let d = self.entries[i].2.norm();
                    i += 1;
                    d
                }
                (None, Some(_)) => {
                    let d = other.entries[j].2.norm();
                    j += 1;
                    d
                }
                (None, None) => unreachable!(),
            };
            max = max.max(d);
        }
        max
    }

    /// True when every row and every column holds exactly one entry equal to 1.
    pub fn is_permutation(&self, tol: f64) -> bool {
        if !self.is_square() || self.entries.len() != self.n_rows {
            return false;
        }
        let mut col_seen = vec![false; self.n_cols];
        let mut last_row = None;
        for &(r, c, v) in &self.entries {
            if (v - C_ONE).norm() > tol || col_seen[c] || last_row == Some(r) {
                return false;
            }
            col_seen[c] = true;
            last_row = Some(r);
        }
        true
    }
}

/// `dim x dim` identity.
pub fn identity(dim: usize) -> Result<SparseMatrix> {
    SparseMatrix::identity(dim)
}

/// Kronecker product of all factors in list order.
pub fn kron_all(factors: &[SparseMatrix]) -> Result<SparseMatrix> {
    let (first, rest) = factors
        .split_first()
        .ok_or(Error::InvalidArgument("kron_all requires at least one factor"))?;
    let mut acc = first.clone();
    for f in rest {
        acc = acc.kron(f);
    }
    Ok(acc)
}

/// `a + alpha * b`. Entries that cancel to exact zero are removed.
pub fn add_scaled(a: &SparseMatrix, b: &SparseMatrix, alpha: Complex64) -> Result<SparseMatrix> {
    if a.n_rows != b.n_rows || a.n_cols != b.n_cols {
        return Err(Error::ShapeMismatch {
            op: "add_scaled",
            left_rows: a.n_rows,
            left_cols: a.n_cols,
            right_rows: b.n_rows,
            right_cols: b.n_cols,
        });
    }
    let mut entries = Vec::with_capacity(a.nnz() + b.nnz());
    let (mut i, mut j) = (0usize, 0usize);
    while i < a.entries.len() && j < b.entries.len() {
        let (ar, ac, av) = a.entries[i];
        let (br, bc, bv) = b.entries[j];
        match (ar, ac).cmp(&(br, bc)) {
            std::cmp::Ordering::Less => {
                entries.push((ar, ac, av));
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                let v = alpha * bv;
                if !is_zero(v) {
                    entries.push((br, bc, v));
                }
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let v = av + alpha * bv;
                if !is_zero(v) {
                    entries.push((ar, ac, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    entries.extend_from_slice(&a.entries[i..]);
    for &(br, bc, bv) in &b.entries[j..] {
        let v = alpha * bv;
        if !is_zero(v) {
            entries.push((br, bc, v));
        }
    }
    Ok(SparseMatrix::from_sorted(a.n_rows, a.n_cols, entries))
}

/// Sparse matrix product `a · b`.
pub fn mat_mul(a: &SparseMatrix, b: &SparseMatrix) -> Result<SparseMatrix> {
    if a.n_cols != b.n_rows {
        return Err(Error::ShapeMismatch {
            op: "mat_mul",
            left_rows: a.n_rows,
            left_cols: a.n_cols,
            right_rows: b.n_rows,
            right_cols: b.n_cols,
        });
    }
    // row-start table for b
    let mut b_starts = vec![usize::MAX; b.n_rows + 1];
    for (idx, &(r, _, _)) in b.entries.iter().enumerate().rev() {
        b_starts[r] = idx;
    }
    b_starts[b.n_rows] = b.entries.len();
    let mut next = b.entries.len();
    for slot in b_starts.iter_mut().rev() {
        if *slot == usize::MAX {
            *slot = next;
        } else {
            next = *slot;
        }
    }

    let mut entries = Vec::new();
    let mut scratch: Vec<(usize, Complex64)> = Vec::new();
    for (_, a_run) in a.row_runs() {
        scratch.clear();
        let row = a.entries[a_run.start].0;
        for &(_, k, av) in &a.entries[a_run] {
            for &(_, j, bv) in &b.entries[b_starts[k]..b_starts[k + 1]] {
                scratch.push((j, av * bv));
            }
        }
        scratch.sort_unstable_by_key(|&(j, _)| j);
        let mut idx = 0usize;
        while idx < scratch.len() {
            let col = scratch[idx].0;
            let mut sum = scratch[idx].1;
            idx += 1;
            while idx < scratch.len() && scratch[idx].0 == col {
                sum += scratch[idx].1;
                idx += 1;
            }
            if !is_zero(sum) {
                entries.push((row, col, sum));
            }
        }
    }
    Ok(SparseMatrix::from_sorted(a.n_rows, b.n_cols, entries))
}

/// Matrix-vector product `m · v`.
pub fn mat_vec(m: &SparseMatrix, v: &DenseVector) -> Result<DenseVector> {
    if m.n_cols != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.n_cols,
            found: v.dim(),
        });
    }
    let mut out = vec![C_ZERO; m.n_rows];
    for &(r, c, mv) in &m.entries {
        out[r] += mv * v.amplitudes[c];
    }
    Ok(DenseVector { amplitudes: out })
}

/// Largest entry-wise deviation of `m† · m` from the identity.
pub fn unitarity_deviation(m: &SparseMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.n_rows,
            cols: m.n_cols,
        });
    }
    let p = mat_mul(&m.dagger(), m)?;
    let mut dev = 0.0f64;
    let mut diag_present = 0usize;
    for &(i, j, v) in &p.entries {
        if i == j {
            diag_present += 1;
            dev = dev.max((v - C_ONE).norm());
        } else {
            dev = dev.max(v.norm());
        }
    }
    if diag_present < m.n_rows {
        dev = dev.max(1.0);
    }
    Ok(dev)
}

/// True iff `m† · m` deviates from the identity by at most `tol`.
pub fn unitarity_check(m: &SparseMatrix, tol: f64) -> Result<bool> {
    Ok(unitarity_deviation(m)? <= tol)
}

/// Dense complex amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseVector {
    amplitudes: Vec<Complex64>,
}

impl DenseVector {
    pub fn zeros(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(DenseVector {
            amplitudes: vec![C_ZERO; dim],
        })
    }

    pub fn from_vec(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::ZeroDimension);
        }
        for (i, a) in amplitudes.iter().enumerate() {
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(Error::NonFinite { row: i, col: 0 });
            }
        }
        Ok(DenseVector { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn get(&self, i: usize) -> Complex64 {
        self.amplitudes[i]
    }

    pub fn set(&mut self, i: usize, v: Complex64) {
        self.amplitudes[i] = v;
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_diff(&self, other: &DenseVector) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}
