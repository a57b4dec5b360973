//! Gauss–Lobatto quadrature and the nodal Lagrange derivative matrix on [-1, 1].

use crate::error::{Error, Result};
use crate::scalar::Real;

pub const MAX_DEGREE: usize = 16;

/// (k+1)-point Gauss–Lobatto rule, exact for polynomials of degree 2k-1.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLobattoRule<T> {
    degree: usize,
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussLobattoRule<T> {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `d[i][j] = l_j'(x_i)` for the Lagrange basis on the rule's nodes.
    pub fn derivative_matrix(&self) -> Vec<Vec<T>> {
        let n = self.nodes.len();
        let x = &self.nodes;
        let bary: Vec<T> = (0..n)
            .map(|j| {
                let prod = (0..n)
                    .filter(|&m| m != j)
                    .fold(T::one(), |acc, m| acc * (x[j] - x[m]));
                prod.recip()
            })
            .collect();
        let mut d = vec![vec![T::zero(); n]; n];
        for i in 0..n {
            let mut diag = T::zero();
            for j in 0..n {
                if i != j {
                    let v = bary[j] / bary[i] / (x[i] - x[j]);
                    d[i][j] = v;
                    diag = diag - v;
                }
            }
            d[i][i] = diag;
        }
        d
    }
}

/// Nodes and weights of the (k+1)-point Gauss–Lobatto rule.
///
/// The interior nodes are the roots of P_k'; they are found by Newton
/// iteration on `x P_k - P_{k-1}` started from Chebyshev–Lobatto points,
/// carried out in `f64` and converted afterwards.
pub fn gauss_lobatto<T: Real>(k: usize) -> Result<GaussLobattoRule<T>> {
    if !(1..=MAX_DEGREE).contains(&k) {
        return Err(Error::UnsupportedDegree(k));
    }
    let n = k + 1;
    let mut x: Vec<f64> = (0..n)
        .map(|j| -(std::f64::consts::PI * j as f64 / k as f64).cos())
        .collect();
    let mut p_k = vec![0.0; n];
    for _ in 0..100 {
        let mut max_delta: f64 = 0.0;
        for (xi, pk) in x.iter_mut().zip(p_k.iter_mut()) {
            let (p, p_prev) = legendre_pair(k, *xi);
            *pk = p;
            let delta = (*xi * p - p_prev) / (n as f64 * p);
            *xi -= delta;
            max_delta = max_delta.max(delta.abs());
        }
        if max_delta < 1e-16 {
            break;
        }
    }
    x[0] = -1.0;
    x[k] = 1.0;
    for (xi, pk) in x.iter().zip(p_k.iter_mut()) {
        *pk = legendre_pair(k, *xi).0;
    }
    // enforce exact symmetry of the rule
    for j in 0..n / 2 {
        let m = 0.5 * (x[k - j] - x[j]);
        x[j] = -m;
        x[k - j] = m;
    }
    if n % 2 == 1 {
        x[k / 2] = 0.0;
    }
    let scale = 2.0 / (k as f64 * n as f64);
    let mut w: Vec<f64> = p_k.iter().map(|p| scale / (p * p)).collect();
    for j in 0..n / 2 {
        let m = 0.5 * (w[j] + w[k - j]);
        w[j] = m;
        w[k - j] = m;
    }
    Ok(GaussLobattoRule {
        degree: k,
        nodes: x.into_iter().map(T::lit).collect(),
        weights: w.into_iter().map(T::lit).collect(),
    })
}

/// Returns (P_k(x), P_{k-1}(x)) via the three-term recurrence.
fn legendre_pair(k: usize, x: f64) -> (f64, f64) {
    let (mut p_prev, mut p) = (1.0, x);
    for m in 2..=k {
        let m = m as f64;
        let next = ((2.0 * m - 1.0) * x * p - (m - 1.0) * p_prev) / m;
        p_prev = p;
        p = next;
    }
    (p, p_prev)
}
