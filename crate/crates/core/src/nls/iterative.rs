//! Jacobi-preconditioned conjugate orthogonal CG for complex symmetric systems.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Solves `A x = b` where `apply(v, out)` computes `A v` and `diag` is the
/// diagonal of `A`. `x` holds the initial guess on entry.
pub fn cocg<T: Real>(
    apply: impl Fn(&[Complex<T>], &mut [Complex<T>]),
    diag: &[Complex<T>],
    b: &[Complex<T>],
    x: &mut [Complex<T>],
    tol: T,
    max_iter: usize,
) -> Result<usize> {
    let n = b.len();
    let zero = Complex::new(T::zero(), T::zero());
    let dot = |u: &[Complex<T>], v: &[Complex<T>]| u.iter().zip(v).fold(zero, |acc, (a, b)| acc + a * b);
    let norm = |u: &[Complex<T>]| u.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();

    let b_norm = norm(b);
    if b_norm == T::zero() {
        x.iter_mut().for_each(|v| *v = zero);
        return Ok(0);
    }
    let mut ax = vec![zero; n];
    apply(x, &mut ax);
    let mut r: Vec<_> = b.iter().zip(&ax).map(|(b, a)| b - a).collect();
    let mut z: Vec<_> = r.iter().zip(diag).map(|(r, d)| r / d).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![zero; n];
    for it in 0..max_iter {
        let res = norm(&r) / b_norm;
        if res <= tol {
            return Ok(it);
        }
        apply(&p, &mut ap);
        let pap = dot(&p, &ap);
        if pap.norm_sqr() == T::zero() {
            break;
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] = x[i] + alpha * p[i];
            r[i] = r[i] - alpha * ap[i];
            z[i] = r[i] / diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    let res = norm(&r) / b_norm;
    if res <= tol {
        return Ok(max_iter);
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual: res.to_f64_lossy(),
    })
}
