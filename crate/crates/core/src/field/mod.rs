//! Uniformly sampled scalar fields in two and three dimensions and the
//! machinery that works on them: FFTs, interpolation, sphere quadrature,
//! radialization, harmonic projection and radial convolution.

mod convolve;
mod fft;
mod harmonics;
mod interp;
pub mod io;
mod profile;
mod quadrature;
mod radial;

pub use convolve::{convolve_radial, good_size, spectral_multiply, PaddedSpectrum};
pub(crate) use convolve::wrapped_kernel;
pub use fft::{fft_forward, fft_inverse, frequency_axis, SpectralField};
pub use harmonics::{harmonic_count, harmonic_value};
pub use interp::{Interpolation, Sampler};
pub use profile::RadialProfile;
pub use quadrature::SphereQuadrature;
pub(crate) use quadrature::unit_gauss_legendre;
pub use radial::{harmonic_project, radialize, HarmonicCoefficients, Radialization};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{config, domain, Result};

/// Unnormalized forward DFT of row-major data, in place.
pub(crate) fn fft_in_place(data: &mut [Complex64], shape: &[usize]) {
    fft::fft_nd(data, shape, false);
}

/// Smallest number of samples allowed along any axis.
pub const MIN_AXIS: usize = 8;

/// Lattice geometry shared by fields, spectra and masks.
///
/// Samples are stored row-major: the last axis varies fastest. The physical
/// coordinate of index `i` along axis `a` is `origin[a] + i · spacing`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    dim: usize,
    shape: Vec<usize>,
    spacing: f64,
    origin: Vec<f64>,
}

impl Geometry {
    pub fn new(shape: Vec<usize>, spacing: f64, origin: Vec<f64>) -> Result<Self> {
        let dim = shape.len();
        if dim != 2 && dim != 3 {
            return config(format!("only 2-D and 3-D grids are supported, got {dim} axes"));
        }
        if origin.len() != dim {
            return config("origin length must match the number of axes");
        }
        if let Some(&n) = shape.iter().find(|&&n| n < MIN_AXIS) {
            return config(format!("every axis needs at least {MIN_AXIS} samples, got {n}"));
        }
        if !(spacing > 0.0) || !spacing.is_finite() {
            return config(format!("spacing must be positive, got {spacing}"));
        }
        if origin.iter().any(|o| !o.is_finite()) {
            return config("origin must be finite");
        }
        Ok(Self {
            dim,
            shape,
            spacing,
            origin,
        })
    }

    /// Cubic lattice with `n` samples per axis whose index `n/2` sits at the
    /// physical origin.
    pub fn centered(dim: usize, n: usize, spacing: f64) -> Result<Self> {
        let origin = vec![-((n / 2) as f64) * spacing; dim];
        Self::new(vec![n; dim], spacing, origin)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Volume of one cell, `spacing^dim`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing.powi(self.dim as i32)
    }

    pub fn strides(&self) -> Vec<usize> {
        let mut s = vec![1; self.dim];
        for a in (0..self.dim - 1).rev() {
            s[a] = s[a + 1] * self.shape[a + 1];
        }
        s
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter()
            .zip(self.shape.iter())
            .fold(0, |acc, (&i, &n)| acc * n + i)
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim];
        for a in (0..self.dim).rev() {
            idx[a] = flat % self.shape[a];
            flat /= self.shape[a];
        }
        idx
    }

    /// Physical position of a lattice point.
    pub fn point(&self, idx: &[usize]) -> Vec<f64> {
        idx.iter()
            .zip(&self.origin)
            .map(|(&i, &o)| o + i as f64 * self.spacing)
            .collect()
    }

    pub fn point_of_flat(&self, flat: usize) -> Vec<f64> {
        self.point(&self.multi_index(flat))
    }

    /// Continuous index coordinates of a physical point.
    pub fn continuous_index(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(&self.origin)
            .map(|(&xi, &o)| (xi - o) / self.spacing)
            .collect()
    }

    /// Nearest lattice index of a physical point, if it lies on the grid.
    pub fn nearest_index(&self, x: &[f64]) -> Option<Vec<usize>> {
        let c = self.continuous_index(x);
        let mut out = Vec::with_capacity(self.dim);
        for (ci, &n) in c.iter().zip(&self.shape) {
            let r = ci.round();
            if r < 0.0 || r > (n - 1) as f64 {
                return None;
            }
            out.push(r as usize);
        }
        Some(out)
    }

    /// Distance from a physical point to the nearest face of the sampled box
    /// (negative outside).
    pub fn distance_to_boundary(&self, x: &[f64]) -> f64 {
        let mut d = f64::INFINITY;
        for a in 0..self.dim {
            let lo = self.origin[a];
            let hi = lo + (self.shape[a] - 1) as f64 * self.spacing;
            d = d.min(x[a] - lo).min(hi - x[a]);
        }
        d
    }

    /// Physical point `0` must be inside the box for centred operations.
    pub fn contains_origin(&self) -> bool {
        self.distance_to_boundary(&vec![0.0; self.dim]) >= 0.0
    }

    pub fn same_lattice(&self, other: &Geometry) -> bool {
        self.shape == other.shape
            && (self.spacing - other.spacing).abs() <= 1e-12 * self.spacing
            && self
                .origin
                .iter()
                .zip(&other.origin)
                .all(|(a, b)| (a - b).abs() <= 1e-9 * self.spacing)
    }
}

/// Real scalar field sampled on a [`Geometry`].
#[derive(Clone, Debug, PartialEq)]
pub struct GridField {
    geom: Geometry,
    values: Vec<f64>,
}

impl GridField {
    pub fn new(geom: Geometry, values: Vec<f64>) -> Result<Self> {
        if values.len() != geom.len() {
            return config(format!(
                "value count {} does not match lattice size {}",
                values.len(),
                geom.len()
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return domain("field values must be finite");
        }
        Ok(Self { geom, values })
    }

    pub fn zeros(geom: Geometry) -> Self {
        let n = geom.len();
        Self {
            geom,
            values: vec![0.0; n],
        }
    }

    /// Samples `f` at every lattice point.
    pub fn from_fn(geom: Geometry, f: impl Fn(&[f64]) -> f64 + Sync) -> Result<Self> {
        use rayon::prelude::*;
        let values: Vec<f64> = (0..geom.len())
            .into_par_iter()
            .map(|i| f(&geom.point_of_flat(i)))
            .collect();
        Self::new(geom, values)
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geom
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn dim(&self) -> usize {
        self.geom.dim
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.values[self.geom.flat_index(idx)]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v * v).sum::<f64>() * self.geom.cell_volume()).sqrt()
    }

    pub fn l1_norm(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum::<f64>() * self.geom.cell_volume()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Pointwise map producing a field on the same lattice.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.geom.clone(), self.values.iter().map(|&v| f(v)).collect())
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &GridField, b: f64) -> Result<Self> {
        if !self.geom.same_lattice(&other.geom) {
            return config("fields live on different lattices");
        }
        Self::new(
            self.geom.clone(),
            self.values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        )
    }

    /// Largest `|value|` among samples closer than `band` to the box faces.
    pub fn max_abs_near_boundary(&self, band: f64) -> f64 {
        let mut m = 0.0_f64;
        for (i, v) in self.values.iter().enumerate() {
            if v.abs() > m && self.geom.distance_to_boundary(&self.geom.point_of_flat(i)) < band {
                m = v.abs();
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometry_validation() {
        assert!(Geometry::new(vec![8, 8], 0.1, vec![0.0, 0.0]).is_ok());
        assert!(Geometry::new(vec![8], 0.1, vec![0.0]).is_err());
        assert!(Geometry::new(vec![8, 4], 0.1, vec![0.0, 0.0]).is_err());
        assert!(Geometry::new(vec![8, 8], 0.0, vec![0.0, 0.0]).is_err());
        assert!(Geometry::new(vec![8, 8], 0.1, vec![0.0]).is_err());
    }

    #[test]
    fn centered_grid_has_origin_at_half_index() {
        let g = Geometry::centered(3, 16, 0.25).unwrap();
        assert_eq!(g.point(&[8, 8, 8]), vec![0.0, 0.0, 0.0]);
        assert!(g.contains_origin());
        let flat = g.flat_index(&[1, 2, 3]);
        assert_eq!(flat, 16 * 16 + 2 * 16 + 3);
        assert_eq!(g.multi_index(flat), vec![1, 2, 3]);
        assert_eq!(g.strides(), vec![256, 16, 1]);
    }

    #[test]
    fn rejects_non_finite_values() {
        let g = Geometry::centered(2, 8, 1.0).unwrap();
        let mut v = vec![0.0; 64];
        v[3] = f64::NAN;
        assert!(GridField::new(g, v).is_err());
    }
}
