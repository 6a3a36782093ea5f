use std::f64::consts::PI;

use gauss_quad::GaussLegendre;

use crate::error::{config, Result};

/// Quadrature for the normalized surface measure of the unit sphere
/// `S^{n−1}`: unit directions with positive weights summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereQuadrature {
    dim: usize,
    directions: Vec<[f64; 3]>,
    weights: Vec<f64>,
}

impl SphereQuadrature {
    /// `order ≥ 8`.
    ///
    /// * 2-D: `order` equally spaced angles, equal weights (exact for
    ///   trigonometric polynomials of degree `< order`).
    /// * 3-D: Gauss–Legendre in `cos θ` with `order/2` nodes times `order`
    ///   equally spaced azimuths, exact for spherical polynomials of degree
    ///   `≤ order − 1`.
    pub fn new(dim: usize, order: usize) -> Result<Self> {
        if order < 8 {
            return config(format!("sphere quadrature order must be ≥ 8, got {order}"));
        }
        match dim {
            2 => {
                let w = 1.0 / order as f64;
                let directions = (0..order)
                    .map(|k| {
                        let t = 2.0 * PI * k as f64 / order as f64;
                        [t.cos(), t.sin(), 0.0]
                    })
                    .collect();
                Ok(Self {
                    dim,
                    directions,
                    weights: vec![w; order],
                })
            }
            3 => {
                let polar = GaussLegendre::new(order / 2)
                    .map_err(|e| crate::Error::Config(format!("Gauss–Legendre setup failed: {e}")))?;
                let azimuths = order;
                let mut directions = Vec::with_capacity(polar.degree() * azimuths);
                let mut weights = Vec::with_capacity(polar.degree() * azimuths);
                for &(mu, w) in polar.as_node_weight_pairs() {
                    let s = (1.0 - mu * mu).max(0.0).sqrt();
                    for k in 0..azimuths {
                        let phi = 2.0 * PI * (k as f64 + 0.5) / azimuths as f64;
                        directions.push([s * phi.cos(), s * phi.sin(), mu]);
                        weights.push(0.5 * w / azimuths as f64);
                    }
                }
                // Gauss–Legendre weights sum to 2 up to rounding; pin to 1.
                let total: f64 = weights.iter().sum();
                weights.iter_mut().for_each(|w| *w /= total);
                Ok(Self {
                    dim,
                    directions,
                    weights,
                })
            }
            _ => config(format!("sphere quadrature supports n = 2, 3, got {dim}")),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Unit direction `i` (only the first `dim` components are meaningful).
    pub fn direction(&self, i: usize) -> &[f64] {
        &self.directions[i][..self.dim]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `(direction, weight)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> + '_ {
        self.directions
            .iter()
            .zip(&self.weights)
            .map(move |(d, &w)| (&d[..self.dim], w))
    }

    /// `∫_{S^{n−1}} g dσ` with the normalized measure.
    pub fn integrate(&self, mut g: impl FnMut(&[f64]) -> f64) -> f64 {
        self.iter().map(|(d, w)| w * g(d)).sum()
    }
}

/// Gauss–Legendre nodes and weights mapped to `[0, 1]`.
pub(crate) fn unit_gauss_legendre(points: usize) -> Vec<(f64, f64)> {
    GaussLegendre::new(points.max(2))
        .expect("Gauss–Legendre with at least two nodes")
        .as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (0.5 * (x + 1.0), 0.5 * w))
        .collect()
}
