//! Gauss-Hermite quadrature scaled to the beam waist, and sampled profiles
//! for numerical overlap integrals.

use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::modes::hermite::{hermite_functions, hg_amplitudes};
use crate::modes::BeamGeometry;

/// Gauss-Hermite nodes and *modified* weights on the reduced coordinate `xi`:
/// `int f(xi) dxi ~ sum_i w_i f(xi_i)`, exact when `f` is a polynomial of
/// degree `< 2K` times `exp(-xi^2)`.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    /// Golub-Welsch for the node positions, one Newton polish on `psi_K`,
    /// then Christoffel weights `1 / sum_k psi_k(xi_i)^2` which already
    /// absorb the `exp(xi^2)` factor.
    pub fn new(n_nodes: usize) -> Self {
        assert!(n_nodes > 0, "Gauss-Hermite rule needs at least one node");
        let mut jacobi = DMatrix::<f64>::zeros(n_nodes, n_nodes);
        for k in 1..n_nodes {
            let b = (k as f64 / 2.0).sqrt();
            jacobi[(k - 1, k)] = b;
            jacobi[(k, k - 1)] = b;
        }
        let mut nodes: Vec<f64> = SymmetricEigen::new(jacobi)
            .eigenvalues
            .iter()
            .copied()
            .collect();
        nodes.sort_by(|a, b| a.total_cmp(b));

        let mut psi = vec![0.0; n_nodes + 1];
        for x in nodes.iter_mut() {
            for _ in 0..2 {
                hermite_functions(*x, &mut psi);
                let p = psi[n_nodes];
                let dp = (2.0 * n_nodes as f64).sqrt() * psi[n_nodes - 1] - *x * p;
                if dp != 0.0 {
                    *x -= p / dp;
                }
            }
        }
        // symmetrize
        let k = nodes.len();
        for i in 0..k / 2 {
            let m = 0.5 * (nodes[k - 1 - i] - nodes[i]);
            nodes[i] = -m;
            nodes[k - 1 - i] = m;
        }
        if k % 2 == 1 {
            nodes[k / 2] = 0.0;
        }

        let weights = nodes
            .iter()
            .map(|&x| {
                hermite_functions(x, &mut psi[..n_nodes]);
                1.0 / psi[..n_nodes].iter().map(|p| p * p).sum::<f64>()
            })
            .collect();
        GaussHermite { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Number of nodes used for a basis truncated at `n_max`.
pub fn default_node_count(n_max: usize) -> usize {
    4 * n_max + 64
}

/// A quadrature rule on the physical transverse coordinate `x` (metres),
/// scaled to a given waist.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    waist: f64,
    xi: Arc<[f64]>,
    xi_weights: Arc<[f64]>,
    x: Arc<[f64]>,
    weights: Arc<[f64]>,
}

impl QuadratureRule {
    /// Rule with `4 n_max + 64` nodes for the given geometry.
    pub fn for_basis(geom: &BeamGeometry, n_max: usize) -> Self {
        Self::with_nodes(geom, default_node_count(n_max))
    }

    pub fn with_nodes(geom: &BeamGeometry, n_nodes: usize) -> Self {
        let gh = GaussHermite::new(n_nodes);
        Self::from_reduced(geom.waist(), gh.nodes.into(), gh.weights.into())
    }

    fn from_reduced(waist: f64, xi: Arc<[f64]>, xi_weights: Arc<[f64]>) -> Self {
        let s = waist / std::f64::consts::SQRT_2;
        let x: Arc<[f64]> = xi.iter().map(|v| v * s).collect();
        let weights: Arc<[f64]> = xi_weights.iter().map(|w| w * s).collect();
        QuadratureRule {
            waist,
            xi,
            xi_weights,
            x,
            weights,
        }
    }

    /// The same reduced nodes rescaled to a new waist; avoids recomputing
    /// the eigendecomposition.
    pub fn rescaled(&self, geom: &BeamGeometry) -> Self {
        Self::from_reduced(geom.waist(), self.xi.clone(), self.xi_weights.clone())
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn waist(&self) -> f64 {
        self.waist
    }

    pub fn nodes(&self) -> &[f64] {
        &self.x
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `int f(x) dx` where `f` must decay like the beam intensity.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.x
            .iter()
            .zip(self.weights.iter())
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn sample(&self, f: impl Fn(f64) -> f64) -> SampledProfile {
        SampledProfile {
            weights: self.weights.clone(),
            values: self.x.iter().map(|&x| f(x)).collect(),
        }
    }

    /// Samples of `u_n` for this rule's waist.
    pub fn sample_mode(&self, n: usize) -> SampledProfile {
        self.sample_modes(n).pop().expect("at least one mode")
    }

    /// Samples of `u_0 ..= u_n_max`, computed in one recurrence sweep.
    pub fn sample_modes(&self, n_max: usize) -> Vec<SampledProfile> {
        let mut cols = vec![Vec::with_capacity(self.len()); n_max + 1];
        let mut buf = vec![0.0; n_max + 1];
        for &x in self.x.iter() {
            hg_amplitudes(x, self.waist, &mut buf);
            for (c, v) in cols.iter_mut().zip(&buf) {
                c.push(*v);
            }
        }
        cols.into_iter()
            .map(|values| SampledProfile {
                weights: self.weights.clone(),
                values,
            })
            .collect()
    }
}

/// A transverse profile sampled on the nodes of a [`QuadratureRule`].
#[derive(Debug, Clone)]
pub struct SampledProfile {
    weights: Arc<[f64]>,
    values: Vec<f64>,
}

impl SampledProfile {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn same_grid(&self, other: &SampledProfile) -> bool {
        Arc::ptr_eq(&self.weights, &other.weights) || self.weights[..] == other.weights[..]
    }

    /// Squared norm `int f^2 dx`.
    pub fn norm_sq(&self) -> f64 {
        self.values
            .iter()
            .zip(self.weights.iter())
            .map(|(v, w)| w * (v * v))
            .sum()
    }
}

/// Numerical inner product `int f(x) g(x) dx`.
///
/// Fails with a usage error when the two profiles were sampled on different
/// rules.
pub fn overlap(f: &SampledProfile, g: &SampledProfile) -> Result<f64> {
    if !f.same_grid(g) {
        return Err(Error::usage(
            "overlap of profiles sampled on different quadrature grids",
        ));
    }
    Ok(f.values
        .iter()
        .zip(&g.values)
        .zip(f.weights.iter())
        .map(|((a, b), w)| w * (a * b))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_point_rule() {
        let gh = GaussHermite::new(3);
        let x = 1.224_744_871_391_589;
        assert!((gh.nodes()[0] + x).abs() < 1e-14);
        assert_eq!(gh.nodes()[1], 0.0);
        // modified weights: w_i exp(x_i^2)
        let w_outer = std::f64::consts::PI.sqrt() / 6.0 * (x * x).exp();
        let w_mid = 2.0 * std::f64::consts::PI.sqrt() / 3.0;
        assert!((gh.weights()[0] - w_outer).abs() < 1e-13);
        assert!((gh.weights()[1] - w_mid).abs() < 1e-13);
    }

    #[test]
    fn gaussian_moments() {
        // int x^2 exp(-x^2) dx = sqrt(pi)/2
        let gh = GaussHermite::new(20);
        let v: f64 = gh
            .nodes()
            .iter()
            .zip(gh.weights())
            .map(|(x, w)| w * x * x * (-x * x).exp())
            .sum();
        assert!((v - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-14);
    }

    #[test]
    fn orthonormal_modes() {
        let g = BeamGeometry::new(1e-4, 1e-6).unwrap();
        let rule = QuadratureRule::for_basis(&g, 41);
        assert_eq!(rule.len(), 4 * 41 + 64);
        let modes = rule.sample_modes(41);
        for m in 0..=41 {
            for n in m..=41 {
                let o = overlap(&modes[m], &modes[n]).unwrap();
                let expect = if m == n { 1.0 } else { 0.0 };
                assert!((o - expect).abs() < 1e-10, "({m},{n}) -> {o}");
            }
        }
    }

    #[test]
    fn overlap_is_symmetric_and_rejects_other_grids() {
        let g = BeamGeometry::new(1e-4, 1e-6).unwrap();
        let rule = QuadratureRule::for_basis(&g, 5);
        let f = rule.sample(|x| (x / 1e-4).sin() * (-(x / 1e-4).powi(2)).exp());
        let h = rule.sample_mode(3);
        assert_eq!(overlap(&f, &h).unwrap(), overlap(&h, &f).unwrap());
        assert!((overlap(&f, &f).unwrap() - f.norm_sq()).abs() < 1e-18);
        let other = QuadratureRule::for_basis(&g, 6).sample_mode(3);
        assert!(overlap(&f, &other).is_err());
        let wider = rule.rescaled(&g.with_waist(2e-4).unwrap()).sample_mode(3);
        assert!(overlap(&h, &wider).is_err());
    }
}
