use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::DMat;

/// Compressed sparse row matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Csr {
    nrows: usize,
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl Csr {
    /// Builds a matrix row by row; `row(i, push)` reports the entries of row
    /// `i` in any order, duplicates are summed and exact zeros dropped.
    pub fn from_rows<F>(nrows: usize, ncols: usize, mut row: F) -> Self
    where
        F: FnMut(usize, &mut dyn FnMut(usize, f64)),
    {
        let mut indptr = Vec::with_capacity(nrows + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        let mut scratch: Vec<(usize, f64)> = Vec::new();
        indptr.push(0);
        for i in 0..nrows {
            scratch.clear();
            row(i, &mut |j, v| scratch.push((j, v)));
            scratch.sort_by_key(|e| e.0);
            let mut k = 0;
            while k < scratch.len() {
                let j = scratch[k].0;
                let mut v = 0.0;
                while k < scratch.len() && scratch[k].0 == j {
                    v += scratch[k].1;
                    k += 1;
                }
                if v != 0.0 {
                    indices.push(j);
                    values.push(v);
                }
            }
            indptr.push(indices.len());
        }
        Self {
            nrows,
            ncols,
            indptr,
            indices,
            values,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_rows(n, n, |i, push| push(i, 1.0))
    }

    pub fn diagonal(d: &[f64]) -> Self {
        Self::from_rows(d.len(), d.len(), |i, push| push(i, d[i]))
    }

    pub fn from_dense(m: &DMat) -> Self {
        Self::from_rows(m.nrows(), m.ncols(), |i, push| {
            for j in 0..m.ncols() {
                push(j, m[(i, j)]);
            }
        })
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.indptr[i]..self.indptr[i + 1];
        self.indices[r.clone()].iter().copied().zip(self.values[r].iter().copied())
    }

    /// `(row, col, value)` in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.nrows).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.row(i).find(|e| e.0 == j).map_or(0.0, |e| e.1)
    }

    /// `y ← A x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate().take(self.nrows) {
            *yi = self.row(i).map(|(j, v)| v * x[j]).sum();
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.nrows];
        self.apply(x, &mut y);
        y
    }

    /// `y ← Aᵀ x`.
    pub fn apply_transpose(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        for (i, &xi) in x.iter().enumerate().take(self.nrows) {
            if xi == 0.0 {
                continue;
            }
            for (j, v) in self.row(i) {
                y[j] += v * xi;
            }
        }
    }

    pub fn transpose(&self) -> Self {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); self.ncols];
        for (i, j, v) in self.triplets() {
            rows[j].push((i, v));
        }
        Self::from_rows(self.ncols, self.nrows, |j, push| {
            for &(i, v) in &rows[j] {
                push(i, v);
            }
        })
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Self {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        Self::from_rows(self.nrows, self.ncols, |i, push| {
            for (j, v) in self.row(i) {
                push(j, a * v);
            }
            for (j, v) in other.row(i) {
                push(j, b * v);
            }
        })
    }

    /// `self + s·I`.
    pub fn shifted(&self, s: f64) -> Self {
        Self::from_rows(self.nrows, self.ncols, |i, push| {
            for (j, v) in self.row(i) {
                push(j, v);
            }
            push(i, s);
        })
    }

    pub fn to_dense(&self) -> DMat {
        let mut m = DMat::zeros(self.nrows, self.ncols);
        for (i, j, v) in self.triplets() {
            m[(i, j)] = v;
        }
        m
    }

    /// Dense `AᵀA`, accumulated from outer products of the sparse rows.
    pub fn gram_dense(&self) -> DMat {
        let n = self.ncols;
        let mut g = DMat::zeros(n, n);
        for i in 0..self.nrows {
            let r = self.indptr[i]..self.indptr[i + 1];
            let idx = &self.indices[r.clone()];
            let val = &self.values[r];
            for (&b, &vb) in idx.iter().zip(val) {
                let mut col = g.column_mut(b);
                for (&a, &va) in idx.iter().zip(val) {
                    col[a] += va * vb;
                }
            }
        }
        g
    }

    /// Largest absolute entry of `A + Aᵀ`.
    pub fn symmetric_part_max(&self) -> f64 {
        let t = self.transpose();
        self.combine(1.0, &t, 1.0)
            .values
            .iter()
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest absolute entry of `A − Aᵀ`.
    pub fn antisymmetric_part_max(&self) -> f64 {
        let t = self.transpose();
        self.combine(1.0, &t, -1.0)
            .values
            .iter()
            .fold(0.0, |m, v| m.max(v.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Csr {
        Csr::from_rows(3, 3, |i, push| {
            push(i, 2.0);
            if i > 0 {
                push(i - 1, -1.0);
            }
            if i == 2 {
                push(0, 0.5);
                push(0, 0.25);
            }
        })
    }

    #[test]
    fn duplicates_are_summed() {
        let a = sample();
        assert_eq!(a.get(2, 0), 0.75);
        assert_eq!(a.nnz(), 6);
    }

    #[test]
    fn transpose_and_products_agree_with_dense() {
        let a = sample();
        let d = a.to_dense();
        let x = [1.0, -2.0, 3.0];
        let y = a.matvec(&x);
        let yd = &d * nalgebra::DVector::from_column_slice(&x);
        for i in 0..3 {
            assert!((y[i] - yd[i]).abs() < 1e-15);
        }
        let mut yt = [0.0; 3];
        a.apply_transpose(&x, &mut yt);
        assert_eq!(a.transpose().matvec(&x), yt.to_vec());
        let g = a.gram_dense();
        let gd = d.transpose() * &d;
        assert!((g - gd).abs().max() < 1e-15);
    }
}
