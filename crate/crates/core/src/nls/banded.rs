//! Direct LU factorization of complex banded systems.
//!
//! Periodic couplings are folded into the band by the interleaved ordering
//! `0, n-1, 1, n-2, ...`, which keeps any two unknowns within distance `d`
//! of each other on the ring within `2d` positions of each other.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone)]
pub struct BandedLu<T> {
    n: usize,
    bw: usize,
    /// position of unknown `j` in the band ordering
    pos: Vec<usize>,
    lu: Vec<Complex<T>>,
}

/// Permutation that makes a ring-coupled matrix banded.
pub fn interleaved_order(n: usize) -> Vec<usize> {
    let first = n.div_ceil(2);
    (0..n)
        .map(|j| if j < first { 2 * j } else { 2 * (n - 1 - j) + 1 })
        .collect()
}

impl<T: Real> BandedLu<T> {
    /// Factors the `n x n` matrix given by `entries` (duplicates summed)
    /// after reordering unknowns by `pos`. No pivoting is performed, which
    /// is stable for matrices with positive definite Hermitian part.
    pub fn factor(
        n: usize,
        pos: Vec<usize>,
        entries: impl IntoIterator<Item = (usize, usize, Complex<T>)> + Clone,
    ) -> Result<Self> {
        debug_assert_eq!(pos.len(), n);
        let bw = entries
            .clone()
            .into_iter()
            .map(|(r, c, _)| pos[r].abs_diff(pos[c]))
            .max()
            .unwrap_or(0);
        let width = 2 * bw + 1;
        let zero = Complex::new(T::zero(), T::zero());
        let mut lu = vec![zero; n * width];
        for (r, c, v) in entries {
            let (pr, pc) = (pos[r], pos[c]);
            lu[pr * width + pc + bw - pr] = lu[pr * width + pc + bw - pr] + v;
        }
        for i in 0..n {
            let pivot = lu[i * width + bw];
            if pivot.norm_sqr() == T::zero() || !pivot.re.is_finite() || !pivot.im.is_finite() {
                return Err(Error::SingularFactorization { row: i });
            }
            let last = (i + bw).min(n - 1);
            for r in i + 1..=last {
                let idx = r * width + i + bw - r;
                let l = lu[idx] / pivot;
                lu[idx] = l;
                if l == zero {
                    continue;
                }
                for c in i + 1..=last {
                    let u = lu[i * width + c + bw - i];
                    let t = r * width + c + bw - r;
                    lu[t] = lu[t] - l * u;
                }
            }
        }
        Ok(BandedLu { n, bw, pos, lu })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    /// Solves `A x = rhs`, writing `x` into `out`.
    pub fn solve(&self, rhs: &[Complex<T>], out: &mut [Complex<T>], work: &mut Vec<Complex<T>>) {
        let (n, bw) = (self.n, self.bw);
        let width = 2 * bw + 1;
        work.clear();
        work.resize(n, Complex::new(T::zero(), T::zero()));
        for (j, &p) in self.pos.iter().enumerate() {
            work[p] = rhs[j];
        }
        for i in 0..n {
            let mut s = work[i];
            for c in i.saturating_sub(bw)..i {
                s = s - self.lu[i * width + c + bw - i] * work[c];
            }
            work[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = work[i];
            for c in i + 1..=(i + bw).min(n - 1) {
                s = s - self.lu[i * width + c + bw - i] * work[c];
            }
            work[i] = s / self.lu[i * width + bw];
        }
        for (j, &p) in self.pos.iter().enumerate() {
            out[j] = work[p];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn dense_mul(a: &[Vec<C>], x: &[C]) -> Vec<C> {
        a.iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    #[test]
    fn interleaving_is_a_permutation_with_small_ring_distance() {
        for n in 2..40 {
            let p = interleaved_order(n);
            let mut seen = p.clone();
            seen.sort_unstable();
            assert_eq!(seen, (0..n).collect::<Vec<_>>());
            for j in 0..n {
                let k = (j + 1) % n;
                assert!(p[j].abs_diff(p[k]) <= 2);
            }
        }
    }

    #[test]
    fn cyclic_tridiagonal_solve_matches_dense_product() {
        let n = 11;
        let mut a = vec![vec![C::new(0.0, 0.0); n]; n];
        let mut entries = Vec::new();
        for i in 0..n {
            let j = (i + 1) % n;
            let d = C::new(2.0 + i as f64 * 0.1, 0.7);
            let o = C::new(0.0, -0.35);
            a[i][i] += d;
            a[i][j] += o;
            a[j][i] += o;
            entries.push((i, i, d));
            entries.push((i, j, o));
            entries.push((j, i, o));
        }
        let lu = BandedLu::factor(n, interleaved_order(n), entries).unwrap();
        assert_eq!(lu.bandwidth(), 2);
        let x: Vec<C> = (0..n).map(|i| C::new((i as f64).sin(), (i as f64 * 0.3).cos())).collect();
        let b = dense_mul(&a, &x);
        let mut out = vec![C::new(0.0, 0.0); n];
        lu.solve(&b, &mut out, &mut Vec::new());
        for (u, v) in out.iter().zip(&x) {
            assert!((u - v).norm() < 1e-13);
        }
    }

    #[test]
    fn zero_pivot_is_reported() {
        let entries = vec![(0, 0, C::new(0.0, 0.0)), (1, 1, C::new(1.0, 0.0))];
        assert!(matches!(
            BandedLu::factor(2, vec![0, 1], entries),
            Err(Error::SingularFactorization { row: 0 })
        ));
    }
}
