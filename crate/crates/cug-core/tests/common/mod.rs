//! Shared helpers for the integration suites: a dense brute-force oracle that
//! stays independent of the sparse implementation path, plus seeded random
//! generators.

use cug_core::{Complex64, DenseVector, SparseMatrix};
use rand::Rng;

/// Dense row-major complex matrix; the oracle side of every cross-check.
#[derive(Debug, Clone, PartialEq)]
pub struct DMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Complex64>,
}

#[allow(dead_code)]
impl DMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DMat {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = DMat::zeros(dim, dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn from_sparse(m: &SparseMatrix) -> Self {
        let mut d = DMat::zeros(m.n_rows(), m.n_cols());
        for (r, c, v) in m.entries() {
            d.set(r, c, v);
        }
        d
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        let entries = (0..self.rows).flat_map(|r| {
            (0..self.cols).map(move |c| (r, c, self.get(r, c)))
        });
        SparseMatrix::from_entries(self.rows, self.cols, entries).unwrap()
    }

    pub fn mul(&self, other: &DMat) -> DMat {
        assert_eq!(self.cols, other.rows);
        let mut out = DMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn kron(&self, other: &DMat) -> DMat {
        let mut out = DMat::zeros(self.rows * other.rows, self.cols * other.cols);
        for ar in 0..self.rows {
            for ac in 0..self.cols {
                let a = self.get(ar, ac);
                for br in 0..other.rows {
                    for bc in 0..other.cols {
                        out.set(
                            ar * other.rows + br,
                            ac * other.cols + bc,
                            a * other.get(br, bc),
                        );
                    }
                }
            }
        }
        out
    }

    pub fn add_scaled(&self, other: &DMat, alpha: Complex64) -> DMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + alpha * b)
            .collect();
        DMat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn dagger(&self) -> DMat {
        let mut out = DMat::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    pub fn mat_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c) * v[c]).sum())
            .collect()
    }

    pub fn max_diff(&self, other: &DMat) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_diff_sparse(&self, m: &SparseMatrix) -> f64 {
        self.max_diff(&DMat::from_sparse(m))
    }
}

#[allow(dead_code)]
pub fn dense_vec(v: &DenseVector) -> Vec<Complex64> {
    v.as_slice().to_vec()
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Box-Muller
    let u1: f64 = rng.random::<f64>().max(1e-12);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Haar-ish random unitary: complex Gaussian matrix orthonormalized by
/// modified Gram-Schmidt (two passes).
#[allow(dead_code)]
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> SparseMatrix {
    let mut cols: Vec<Vec<Complex64>> = (0..dim)
        .map(|_| {
            (0..dim)
                .map(|_| Complex64::new(gaussian(rng), gaussian(rng)))
                .collect()
        })
        .collect();
    for _pass in 0..2 {
        for j in 0..dim {
            for k in 0..j {
                let proj: Complex64 = (0..dim)
                    .map(|i| cols[k][i].conj() * cols[j][i])
                    .sum();
                for i in 0..dim {
                    let v = cols[j][i] - proj * cols[k][i];
                    cols[j][i] = v;
                }
            }
            let norm: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for i in 0..dim {
                cols[j][i] /= norm;
            }
        }
    }
    let mut entries = Vec::with_capacity(dim * dim);
    for r in 0..dim {
        for (c, col) in cols.iter().enumerate() {
            entries.push((r, c, col[r]));
        }
    }
    SparseMatrix::from_entries(dim, dim, entries).unwrap()
}

/// Random normalized complex amplitude vector.
#[allow(dead_code)]
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DenseVector {
    let mut amps: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(gaussian(rng), gaussian(rng)))
        .collect();
    let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    DenseVector::from_vec(amps).unwrap()
}
