use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use super::{Geometry, GridField};
use crate::error::{domain, Result};

/// Discrete spectrum of a [`GridField`].
///
/// Convention: the forward transform carries the `1/N` factor, so the
/// zero-frequency bin holds the mean of the field and the inverse is a
/// plain sum. Bin `k` along an axis of length `N` maps to the signed index
/// `k` for `k < ⌈N/2⌉` and `k − N` otherwise (the usual `fftfreq` layout),
/// and to the angular frequency `ξ = 2π k_signed / (N · spacing)`.
#[derive(Clone, Debug)]
pub struct SpectralField {
    geom: Geometry,
    values: Vec<Complex64>,
    magnitudes: Vec<f64>,
}

impl SpectralField {
    pub fn new(geom: Geometry, values: Vec<Complex64>) -> Self {
        assert_eq!(geom.len(), values.len());
        let magnitudes = frequency_magnitudes(&geom);
        Self {
            geom,
            values,
            magnitudes,
        }
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geom
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    /// `|ξ|` per bin, radians per unit length.
    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    /// Spacing between neighbouring bins along the coarsest axis.
    pub fn bin_spacing(&self) -> f64 {
        let n = *self.geom.shape().iter().max().unwrap();
        2.0 * PI / (n as f64 * self.geom.spacing())
    }

    /// Signed angular frequency vector of a flat bin index.
    pub fn frequency(&self, flat: usize) -> Vec<f64> {
        let idx = self.geom.multi_index(flat);
        idx.iter()
            .zip(self.geom.shape())
            .map(|(&k, &n)| frequency_axis(n, self.geom.spacing())[k])
            .collect()
    }
}

/// Signed angular frequencies of the bins along one axis.
pub fn frequency_axis(n: usize, spacing: f64) -> Vec<f64> {
    let step = 2.0 * PI / (n as f64 * spacing);
    (0..n)
        .map(|k| {
            let signed = if k < n.div_ceil(2) { k as i64 } else { k as i64 - n as i64 };
            signed as f64 * step
        })
        .collect()
}

pub(crate) fn frequency_magnitudes(geom: &Geometry) -> Vec<f64> {
    let axes: Vec<Vec<f64>> = geom
        .shape()
        .iter()
        .map(|&n| frequency_axis(n, geom.spacing()))
        .collect();
    (0..geom.len())
        .map(|flat| {
            geom.multi_index(flat)
                .iter()
                .enumerate()
                .map(|(a, &k)| axes[a][k] * axes[a][k])
                .sum::<f64>()
                .sqrt()
        })
        .collect()
}

/// In-place n-dimensional FFT of row-major data (unnormalized both ways).
pub(crate) fn fft_nd(data: &mut [Complex64], shape: &[usize], inverse: bool) {
    let mut planner = FftPlanner::<f64>::new();
    let total: usize = shape.iter().product();
    let dim = shape.len();
    for axis in 0..dim {
        let n = shape[axis];
        let fft = if inverse {
            planner.plan_fft_inverse(n)
        } else {
            planner.plan_fft_forward(n)
        };
        let stride: usize = shape[axis + 1..].iter().product();
        if stride == 1 {
            data.par_chunks_mut(n).for_each(|line| fft.process(line));
            continue;
        }
        // Lines along `axis`: base indices are all flat indices whose
        // coordinate along `axis` is zero.
        let outer = total / (n * stride);
        let bases: Vec<usize> = (0..outer)
            .flat_map(|o| (0..stride).map(move |s| o * n * stride + s))
            .collect();
        let lines: Vec<Vec<Complex64>> = bases
            .par_iter()
            .map(|&b| {
                let mut line: Vec<Complex64> = (0..n).map(|k| data[b + k * stride]).collect();
                fft.process(&mut line);
                line
            })
            .collect();
        for (b, line) in bases.iter().zip(lines) {
            for (k, v) in line.into_iter().enumerate() {
                data[b + k * stride] = v;
            }
        }
    }
}

pub fn fft_forward(field: &GridField) -> SpectralField {
    let geom = field.geometry().clone();
    let mut data: Vec<Complex64> = field.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft_nd(&mut data, geom.shape(), false);
    let scale = 1.0 / geom.len() as f64;
    data.iter_mut().for_each(|v| *v *= scale);
    SpectralField::new(geom, data)
}

/// Inverse transform; the imaginary residue is dropped, so the input
/// should carry the conjugate symmetry of a real field.
pub fn fft_inverse(spec: &SpectralField) -> Result<GridField> {
    let mut data = spec.values.clone();
    if data.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return domain("spectrum contains non-finite values");
    }
    fft_nd(&mut data, spec.geom.shape(), true);
    GridField::new(spec.geom.clone(), data.into_iter().map(|v| v.re).collect())
}
