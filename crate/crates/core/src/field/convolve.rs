use num_complex::Complex64;
use rayon::prelude::*;

use super::fft::{fft_nd, frequency_magnitudes};
use super::{Geometry, GridField, RadialProfile};
use crate::error::{config, Result};

/// Smallest `m ≥ n` whose only prime factors are 2, 3 and 5.
pub fn good_size(n: usize) -> usize {
    let mut m = n.max(1);
    loop {
        let mut k = m;
        for p in [2, 3, 5] {
            while k % p == 0 {
                k /= p;
            }
        }
        if k == 1 {
            return m;
        }
        m += 1;
    }
}

/// A field zero-padded by a guard band on every side, held in the frequency
/// domain (unnormalized forward DFT).
///
/// Multiplying by a radial symbol and cropping gives a linear convolution
/// on the original lattice as long as the symbol's kernel is supported
/// within the guard band.
#[derive(Clone, Debug)]
pub struct PaddedSpectrum {
    inner: Geometry,
    padded: Geometry,
    guard: usize,
    data: Vec<Complex64>,
    magnitudes: Vec<f64>,
}

impl PaddedSpectrum {
    /// `guard` is the physical width of the zero band on each side.
    pub fn new(field: &GridField, guard: f64) -> Result<Self> {
        let inner = field.geometry().clone();
        if !(guard >= 0.0) || !guard.is_finite() {
            return config(format!("guard band must be ≥ 0, got {guard}"));
        }
        let h = inner.spacing();
        let cells = (guard / h).ceil() as usize + 1;
        let shape: Vec<usize> = inner.shape().iter().map(|&n| good_size(n + 2 * cells)).collect();
        let origin: Vec<f64> = inner.origin().iter().map(|&o| o - cells as f64 * h).collect();
        let padded = Geometry::new(shape, h, origin)?;
        let mut data = vec![Complex64::new(0.0, 0.0); padded.len()];
        for (flat, &v) in field.values().iter().enumerate() {
            let idx: Vec<usize> = inner.multi_index(flat).iter().map(|i| i + cells).collect();
            data[padded.flat_index(&idx)] = Complex64::new(v, 0.0);
        }
        fft_nd(&mut data, padded.shape(), false);
        let magnitudes = frequency_magnitudes(&padded);
        Ok(Self {
            inner,
            padded,
            guard: cells,
            data,
            magnitudes,
        })
    }

    pub fn padded_geometry(&self) -> &Geometry {
        &self.padded
    }

    /// Unnormalized DFT coefficients of the padded field.
    pub fn values(&self) -> &[Complex64] {
        &self.data
    }

    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    /// Multiplies each bin by `symbol(|ξ|)`.
    pub fn multiply(&mut self, symbol: impl Fn(f64) -> f64 + Sync) {
        self.data
            .par_iter_mut()
            .zip(self.magnitudes.par_iter())
            .for_each(|(v, &k)| *v *= symbol(k));
    }

    /// Multiplies bin-wise by another spectrum on the same padded lattice.
    pub fn multiply_spectrum(&mut self, other: &[Complex64]) {
        self.data.par_iter_mut().zip(other.par_iter()).for_each(|(v, w)| *v *= w);
    }

    /// Inverse transform on the whole padded lattice.
    pub fn inverse_padded(&self) -> Result<GridField> {
        let mut data = self.data.clone();
        fft_nd(&mut data, self.padded.shape(), true);
        let scale = 1.0 / self.padded.len() as f64;
        GridField::new(self.padded.clone(), data.into_iter().map(|v| v.re * scale).collect())
    }

    /// Inverse transform cropped back to the original lattice.
    pub fn inverse(&self) -> Result<GridField> {
        let full = self.inverse_padded()?;
        let values = (0..self.inner.len())
            .into_par_iter()
            .map(|flat| {
                let idx: Vec<usize> = self.inner.multi_index(flat).iter().map(|i| i + self.guard).collect();
                full.values()[self.padded.flat_index(&idx)]
            })
            .collect();
        GridField::new(self.inner.clone(), values)
    }
}

/// Applies the radial Fourier symbol `symbol(|ξ|)` to a field with zero
/// padding of width `guard` on every side.
pub fn spectral_multiply(field: &GridField, guard: f64, symbol: impl Fn(f64) -> f64 + Sync) -> Result<GridField> {
    let mut spec = PaddedSpectrum::new(field, guard)?;
    spec.multiply(symbol);
    spec.inverse()
}

/// Lattice kernel `K(x_j) · h^n` for `|x_j| ≤ support`, wrapped onto a
/// periodic lattice so that index 0 is the kernel centre.
pub(crate) fn wrapped_kernel(padded: &Geometry, support: f64, k: impl Fn(f64) -> f64 + Sync) -> Vec<Complex64> {
    let h = padded.spacing();
    let shape = padded.shape().to_vec();
    let vol = padded.cell_volume();
    (0..padded.len())
        .into_par_iter()
        .map(|flat| {
            let idx = padded.multi_index(flat);
            let r2: f64 = idx
                .iter()
                .zip(&shape)
                .map(|(&i, &n)| {
                    let s = if i <= n / 2 { i as f64 } else { i as f64 - n as f64 };
                    (s * h).powi(2)
                })
                .sum();
            let r = r2.sqrt();
            if r <= support * (1.0 + 1e-12) {
                Complex64::new(k(r) * vol, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect()
}

/// `(f ∗ K)(x)` for a radial kernel `K(|x|)` supported in `[0, support]`,
/// by the lattice sum `Σ_j f(x − x_j) K(|x_j|) h^n` evaluated with zero-padded
/// FFTs.
pub fn convolve_radial(field: &GridField, kernel: &RadialProfile, support: f64) -> Result<GridField> {
    let geom = field.geometry();
    if !(support > 0.0) || support > kernel.r_max() * (1.0 + 1e-12) {
        return config(format!(
            "kernel support {support} must be positive and within the profile range {}",
            kernel.r_max()
        ));
    }
    let extent = geom.shape().iter().copied().max().unwrap() as f64 * geom.spacing();
    if support > extent {
        return config(format!("kernel support {support} exceeds the guard band the grid allows ({extent})"));
    }
    let mut spec = PaddedSpectrum::new(field, support)?;
    let mut k = wrapped_kernel(spec.padded_geometry(), support, |r| kernel.eval(r));
    fft_nd(&mut k, spec.padded_geometry().shape(), false);
    spec.multiply_spectrum(&k);
    spec.inverse()
}
