//! One-dimensional spectral-element meshes on uniform partitions.
//!
//! Unknowns are numbered left to right with element-local nodes contiguous
//! and shared element endpoints stored once. On a periodic mesh the right
//! endpoint of the domain is identified with the left one.

mod quadrature;
mod sparse;

pub use quadrature::{gauss_lobatto, GaussLobattoRule, MAX_DEGREE};
pub use sparse::CsrMatrix;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    Periodic,
    Neumann,
}

#[derive(Debug, Clone)]
pub struct Mesh1D<T> {
    a: T,
    b: T,
    elements: usize,
    topology: Topology,
    rule: GaussLobattoRule<T>,
    derivative: Vec<Vec<T>>,
    coords: Vec<T>,
    mass: Vec<T>,
    stiffness: CsrMatrix<T>,
}

/// Assembles a uniform mesh of `elements` elements of degree `k` on `[a, b]`.
pub fn build_mesh<T: Real>(a: T, b: T, elements: usize, k: usize, topology: Topology) -> Result<Mesh1D<T>> {
    if !(a.is_finite() && b.is_finite()) || b <= a {
        return Err(Error::InvalidMesh(format!("degenerate domain [{a}, {b}]")));
    }
    if elements == 0 {
        return Err(Error::InvalidMesh("element count must be positive".into()));
    }
    if topology == Topology::Periodic && elements < 2 {
        return Err(Error::InvalidMesh("periodic mesh needs at least two elements".into()));
    }
    let rule = gauss_lobatto::<T>(k)?;
    let derivative = rule.derivative_matrix();
    let h = (b - a) / T::from_count(elements);
    let half = h / T::lit(2.0);
    let n = match topology {
        Topology::Periodic => elements * k,
        Topology::Neumann => elements * k + 1,
    };

    let mut coords = vec![T::zero(); n];
    let mut mass = vec![T::zero(); n];
    let mut triplets = Vec::with_capacity(elements * (k + 1) * (k + 1));

    // element stiffness on the reference element, scaled by 2/h
    let mut local_k = vec![vec![T::zero(); k + 1]; k + 1];
    for i in 0..=k {
        for j in i..=k {
            let s = (0..=k).fold(T::zero(), |acc, q| {
                acc + rule.weights()[q] * derivative[q][i] * derivative[q][j]
            });
            local_k[i][j] = s / half;
            local_k[j][i] = s / half;
        }
    }

    for e in 0..elements {
        let left = a + T::from_count(e) * h;
        for q in 0..=k {
            let g = (e * k + q) % n;
            if !(topology == Topology::Periodic && e + 1 == elements && q == k) {
                coords[g] = left + (T::one() + rule.nodes()[q]) * half;
            }
            mass[g] = mass[g] + rule.weights()[q] * half;
        }
        for i in 0..=k {
            for j in 0..=k {
                triplets.push(((e * k + i) % n, (e * k + j) % n, local_k[i][j]));
            }
        }
    }
    if topology == Topology::Neumann {
        coords[n - 1] = b;
    }
    coords[0] = a;

    Ok(Mesh1D {
        a,
        b,
        elements,
        topology,
        rule,
        derivative,
        coords,
        mass,
        stiffness: CsrMatrix::from_triplets(n, triplets),
    })
}

impl<T: Real> Mesh1D<T> {
    pub fn bounds(&self) -> (T, T) {
        (self.a, self.b)
    }

    pub fn length(&self) -> T {
        self.b - self.a
    }

    pub fn elements(&self) -> usize {
        self.elements
    }

    pub fn degree(&self) -> usize {
        self.rule.degree()
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn rule(&self) -> &GaussLobattoRule<T> {
        &self.rule
    }

    /// Reference-element derivative matrix `d[i][j] = l_j'(xi_i)`.
    pub fn reference_derivative(&self) -> &[Vec<T>] {
        &self.derivative
    }

    pub fn element_length(&self) -> T {
        self.length() / T::from_count(self.elements)
    }

    /// Number of unknowns (global nodes after periodic identification).
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Coordinates of the unknowns, strictly increasing.
    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    /// Diagonal of the lumped (Gauss–Lobatto) mass matrix.
    pub fn mass(&self) -> &[T] {
        &self.mass
    }

    pub fn stiffness(&self) -> &CsrMatrix<T> {
        &self.stiffness
    }

    /// Global unknown index of local node `q` of element `e`.
    pub fn dof(&self, e: usize, q: usize) -> usize {
        (e * self.degree() + q) % self.len()
    }

    /// Physical coordinate of local node `q` of element `e` (the periodic
    /// right endpoint is reported as `b`, not `a`).
    pub fn node_x(&self, e: usize, q: usize) -> T {
        let h = self.element_length();
        self.a + T::from_count(e) * h + (T::one() + self.rule.nodes()[q]) * h / T::lit(2.0)
    }

    pub fn check_len(&self, found: usize) -> Result<()> {
        if found != self.len() {
            return Err(Error::Dimension {
                expected: self.len(),
                found,
            });
        }
        Ok(())
    }

    /// Evaluates `f` at every unknown.
    pub fn sample(&self, f: impl Fn(T) -> T) -> Vec<T> {
        self.coords.iter().map(|&x| f(x)).collect()
    }

    /// Element-wise derivative of nodal values, one-sided values averaged
    /// at shared element endpoints.
    pub fn nodal_derivative<V>(&self, u: &[V]) -> Vec<V>
    where
        V: Copy + std::ops::Add<Output = V> + std::ops::Mul<T, Output = V> + num_traits::Zero,
    {
        let n = self.len();
        let k = self.degree();
        let scale = T::lit(2.0) / self.element_length();
        let mut acc = vec![V::zero(); n];
        let mut count = vec![0usize; n];
        for e in 0..self.elements {
            for i in 0..=k {
                let mut d = V::zero();
                for j in 0..=k {
                    d = d + u[self.dof(e, j)] * self.derivative[i][j];
                }
                let g = self.dof(e, i);
                acc[g] = acc[g] + d * scale;
                count[g] += 1;
            }
        }
        acc.into_iter()
            .zip(count)
            .map(|(v, c)| v * (T::one() / T::from_count(c)))
            .collect()
    }
}

/// Discrete L2 inner product `sum_j m_j conj(u_j) v_j`.
pub fn discrete_inner_product<T: Real>(mesh: &Mesh1D<T>, u: &[Complex<T>], v: &[Complex<T>]) -> Result<Complex<T>> {
    mesh.check_len(u.len())?;
    mesh.check_len(v.len())?;
    Ok(mesh
        .mass()
        .iter()
        .zip(u.iter().zip(v))
        .fold(Complex::new(T::zero(), T::zero()), |acc, (&m, (a, b))| acc + a.conj() * b * m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn linear_neumann_mesh() {
        let m = build_mesh::<f64>(-2.0, 2.0, 4, 1, Topology::Neumann).unwrap();
        assert_eq!(m.coords(), &[-2.0, -1.0, 0.0, 1.0, 2.0]);
        assert_eq!(m.mass(), &[0.5, 1.0, 1.0, 1.0, 0.5]);
    }

    #[test]
    fn linear_periodic_mesh() {
        let m = build_mesh::<f64>(-2.0, 2.0, 4, 1, Topology::Periodic).unwrap();
        assert_eq!(m.len(), 4);
        assert_eq!(m.coords(), &[-2.0, -1.0, 0.0, 1.0]);
        assert_eq!(m.mass(), &[1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn single_element_stiffness() {
        let m = build_mesh::<f64>(0.0, 0.25, 1, 1, Topology::Neumann).unwrap();
        let k = m.stiffness();
        assert!((k.get(0, 0) - 4.0).abs() < 1e-14);
        assert!((k.get(0, 1) + 4.0).abs() < 1e-14);
        assert!((k.get(1, 0) + 4.0).abs() < 1e-14);
        assert!((k.get(1, 1) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn two_element_periodic_mesh() {
        let m = build_mesh::<f64>(0.0, 1.0, 2, 1, Topology::Periodic).unwrap();
        assert_eq!(m.len(), 2);
        // both elements couple the same two unknowns
        assert!((m.stiffness().get(0, 1) + 4.0).abs() < 1e-14);
        let ones = vec![1.0; 2];
        assert!(m.stiffness().mul_vec(&ones).iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn stiffness_properties() {
        for topo in [Topology::Neumann, Topology::Periodic] {
            for k in 1..=5 {
                let m = build_mesh::<f64>(-1.0, 2.0, 7, k, topo).unwrap();
                let st = m.stiffness();
                let kmax = st.max_abs();
                let ones = vec![1.0; m.len()];
                let r = st.mul_vec(&ones);
                assert!(r.iter().all(|v| v.abs() <= 1e-12 * kmax), "k={k} {topo:?}");
                for (i, j, v) in st.iter() {
                    assert_eq!(v, st.get(j, i));
                }
                assert!(m.mass().iter().all(|&w| w > 0.0));
                // positive semidefinite on a few oscillatory vectors
                for f in 1..6 {
                    let v: Vec<f64> = m.coords().iter().map(|x| (f as f64 * x).sin() + 0.3 * x).collect();
                    assert!(st.quadratic_form(&v) >= -1e-12);
                }
            }
        }
    }

    #[test]
    fn coords_strictly_increasing_for_high_degree() {
        let m = build_mesh::<f64>(-2.0, 2.0, 5, 6, Topology::Periodic).unwrap();
        assert!(m.coords().windows(2).all(|p| p[0] < p[1]));
        let total: f64 = m.mass().iter().sum();
        assert!((total - 4.0).abs() < 1e-13);
    }

    #[test]
    fn rejects_bad_domains() {
        assert!(build_mesh::<f64>(1.0, 1.0, 4, 1, Topology::Neumann).is_err());
        assert!(build_mesh::<f64>(0.0, 1.0, 0, 1, Topology::Neumann).is_err());
        assert!(build_mesh::<f64>(0.0, 1.0, 1, 1, Topology::Periodic).is_err());
        assert!(matches!(
            build_mesh::<f64>(0.0, 1.0, 3, 20, Topology::Neumann),
            Err(Error::UnsupportedDegree(20))
        ));
    }

    #[test]
    fn inner_product_examples() {
        let m = build_mesh::<f64>(-2.0, 2.0, 4, 1, Topology::Neumann).unwrap();
        let ones = vec![c(1.0, 0.0); 5];
        let i = vec![c(0.0, 1.0); 5];
        assert_eq!(discrete_inner_product(&m, &ones, &ones).unwrap(), c(4.0, 0.0));
        assert_eq!(discrete_inner_product(&m, &ones, &i).unwrap(), c(0.0, 4.0));
        let x: Vec<_> = m.coords().iter().map(|&x| c(x, 0.0)).collect();
        assert_eq!(discrete_inner_product(&m, &x, &x).unwrap(), c(6.0, 0.0));
        assert!(matches!(
            discrete_inner_product(&m, &x[..3], &x),
            Err(Error::Dimension { expected: 5, found: 3 })
        ));
    }

    #[test]
    fn inner_product_converges_under_refinement() {
        // int_0^1 sin^2(x) dx
        let exact = 0.5 - (2.0f64).sin() / 4.0;
        let errs: Vec<f64> = [8, 16, 32]
            .iter()
            .map(|&n| {
                let m = build_mesh::<f64>(0.0, 1.0, n, 1, Topology::Neumann).unwrap();
                let u: Vec<_> = m.coords().iter().map(|&x| c(x.sin(), 0.0)).collect();
                (discrete_inner_product(&m, &u, &u).unwrap().re - exact).abs()
            })
            .collect();
        for p in errs.windows(2) {
            assert!((p[0] / p[1]).log2() >= 1.9);
        }
    }

    #[test]
    fn nodal_derivative_of_linear_function_is_exact() {
        let m = build_mesh::<f64>(-1.0, 3.0, 6, 3, Topology::Neumann).unwrap();
        let u: Vec<f64> = m.coords().iter().map(|x| 2.5 * x - 1.0).collect();
        let d = m.nodal_derivative(&u);
        assert!(d.iter().all(|v| (v - 2.5).abs() < 1e-12));
    }
}
