use std::collections::BTreeMap;

use num_complex::Complex;

use crate::scalar::Real;

/// Compressed sparse row matrix with sorted column indices.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix<T> {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<T>,
}

impl<T: Real> CsrMatrix<T> {
    /// Builds from (row, col, value) triplets; duplicates are summed.
    pub fn from_triplets(n: usize, triplets: impl IntoIterator<Item = (usize, usize, T)>) -> Self {
        let mut map: BTreeMap<(usize, usize), T> = BTreeMap::new();
        for (r, c, v) in triplets {
            debug_assert!(r < n && c < n);
            let e = map.entry((r, c)).or_insert_with(T::zero);
            *e = *e + v;
        }
        let mut row_ptr = vec![0; n + 1];
        let mut cols = Vec::with_capacity(map.len());
        let mut vals = Vec::with_capacity(map.len());
        for (&(r, c), &v) in &map {
            row_ptr[r + 1] += 1;
            cols.push(c);
            vals.push(v);
        }
        for r in 0..n {
            row_ptr[r + 1] += row_ptr[r];
        }
        CsrMatrix { n, row_ptr, cols, vals }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Nonzeros of row `r` as (column, value).
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.cols[span.clone()].iter().copied().zip(self.vals[span].iter().copied())
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..self.n).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.cols[span.clone()].binary_search(&c) {
            Ok(i) => self.vals[span.start + i],
            Err(_) => T::zero(),
        }
    }

    pub fn max_abs(&self) -> T {
        self.vals.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        (0..self.n)
            .map(|r| self.row(r).fold(T::zero(), |acc, (c, v)| acc + v * x[c]))
            .collect()
    }

    pub fn mul_complex(&self, x: &[Complex<T>], out: &mut [Complex<T>]) {
        for (r, o) in out.iter_mut().enumerate() {
            *o = self
                .row(r)
                .fold(Complex::new(T::zero(), T::zero()), |acc, (c, v)| acc + x[c] * v);
        }
    }

    /// x^T A x for real x.
    pub fn quadratic_form(&self, x: &[T]) -> T {
        self.iter().fold(T::zero(), |acc, (r, c, v)| acc + x[r] * v * x[c])
    }

    /// Re(x^H A x) for complex x.
    pub fn hermitian_form(&self, x: &[Complex<T>]) -> T {
        self.iter()
            .fold(T::zero(), |acc, (r, c, v)| acc + (x[r].conj() * x[c]).re * v)
    }
}
