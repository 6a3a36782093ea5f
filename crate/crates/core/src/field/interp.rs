use std::borrow::Cow;

use super::{Geometry, GridField};
use crate::error::{Error, Result};

/// Interpolation scheme used to read a field between lattice points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Interpolation {
    /// Multilinear, `O(h²)`; exactly local (2 taps per axis).
    Linear,
    /// Interpolating cubic B-spline, `O(h⁴)`; 4 taps per axis on prefiltered
    /// coefficients.
    #[default]
    CubicSpline,
}

impl Interpolation {
    /// Lattice cells that must exist below and above a sample position.
    fn margins(self) -> (f64, f64) {
        match self {
            Interpolation::Linear => (0.0, 0.0),
            Interpolation::CubicSpline => (1.0, 2.0),
        }
    }
}

/// Reads a [`GridField`] at arbitrary physical positions.
pub struct Sampler<'a> {
    geom: &'a Geometry,
    coeffs: Cow<'a, [f64]>,
    kind: Interpolation,
    strides: Vec<usize>,
}

const POLE: f64 = -0.267_949_192_431_122_7; // √3 − 2

fn prefilter_line(c: &mut [f64]) {
    let n = c.len();
    let gain = (1.0 - POLE) * (1.0 - 1.0 / POLE);
    c.iter_mut().for_each(|v| *v *= gain);

    // Causal initialisation for mirror-symmetric extension.
    let horizon = ((1e-17_f64).ln() / POLE.abs().ln()).ceil() as usize;
    let mut zn = POLE;
    let mut sum = c[0];
    if horizon < n {
        for v in c.iter().take(horizon).skip(1) {
            sum += zn * v;
            zn *= POLE;
        }
    } else {
        let iz = 1.0 / POLE;
        let mut z2n = POLE.powi(n as i32 - 1);
        sum += z2n * c[n - 1];
        z2n *= z2n * iz;
        for v in c.iter().take(n - 1).skip(1) {
            sum += (zn + z2n) * v;
            zn *= POLE;
            z2n *= iz;
        }
        sum /= 1.0 - zn * zn;
    }
    c[0] = sum;
    for k in 1..n {
        c[k] += POLE * c[k - 1];
    }
    c[n - 1] = (POLE / (POLE * POLE - 1.0)) * (c[n - 1] + POLE * c[n - 2]);
    for k in (0..n - 1).rev() {
        c[k] = POLE * (c[k + 1] - c[k]);
    }
}

fn spline_coefficients(field: &GridField) -> Vec<f64> {
    use rayon::prelude::*;
    let geom = field.geometry();
    let shape = geom.shape().to_vec();
    let mut c = field.values().to_vec();
    let total = c.len();
    for axis in 0..shape.len() {
        let n = shape[axis];
        let stride: usize = shape[axis + 1..].iter().product();
        if stride == 1 {
            c.par_chunks_mut(n).for_each(prefilter_line);
            continue;
        }
        let outer = total / (n * stride);
        let bases: Vec<usize> = (0..outer)
            .flat_map(|o| (0..stride).map(move |s| o * n * stride + s))
            .collect();
        let lines: Vec<Vec<f64>> = bases
            .par_iter()
            .map(|&b| {
                let mut line: Vec<f64> = (0..n).map(|k| c[b + k * stride]).collect();
                prefilter_line(&mut line);
                line
            })
            .collect();
        for (b, line) in bases.iter().zip(lines) {
            for (k, v) in line.into_iter().enumerate() {
                c[b + k * stride] = v;
            }
        }
    }
    c
}

fn cubic_weights(t: f64) -> [f64; 4] {
    let s = 1.0 - t;
    [
        s * s * s / 6.0,
        (3.0 * t * t * t - 6.0 * t * t + 4.0) / 6.0,
        (-3.0 * t * t * t + 3.0 * t * t + 3.0 * t + 1.0) / 6.0,
        t * t * t / 6.0,
    ]
}

impl<'a> Sampler<'a> {
    pub fn new(field: &'a GridField, kind: Interpolation) -> Self {
        let coeffs = match kind {
            Interpolation::Linear => Cow::Borrowed(field.values()),
            Interpolation::CubicSpline => Cow::Owned(spline_coefficients(field)),
        };
        let geom = field.geometry();
        Self {
            geom,
            coeffs,
            kind,
            strides: geom.strides(),
        }
    }

    pub fn geometry(&self) -> &Geometry {
        self.geom
    }

    pub fn kind(&self) -> Interpolation {
        self.kind
    }

    /// Whether the whole ball `B(center, radius)` can be sampled.
    pub fn covers_ball(&self, center: &[f64], radius: f64) -> bool {
        let (lo, hi) = self.kind.margins();
        let h = self.geom.spacing();
        (0..self.geom.dim()).all(|a| {
            let min = self.geom.origin()[a] + lo * h;
            let max = self.geom.origin()[a] + ((self.geom.shape()[a] - 1) as f64 - hi) * h;
            center[a] - radius >= min - 1e-12 * h && center[a] + radius <= max + 1e-12 * h
        })
    }

    /// Interpolated value at a physical position.
    pub fn sample(&self, x: &[f64]) -> Result<f64> {
        self.try_sample(x).ok_or_else(|| {
            Error::OutOfGrid(format!("position {x:?} lies outside the interpolation domain"))
        })
    }

    pub fn try_sample(&self, x: &[f64]) -> Option<f64> {
        let dim = self.geom.dim();
        let h = self.geom.spacing();
        let (lo, hi) = self.kind.margins();
        let mut base = [0usize; 3];
        let mut frac = [0.0f64; 3];
        for a in 0..dim {
            let u = (x[a] - self.geom.origin()[a]) / h;
            let n = self.geom.shape()[a] as f64;
            if !(u >= lo - 1e-9) || !(u <= n - 1.0 - hi + 1e-9) {
                return None;
            }
            let u = u.clamp(lo, n - 1.0 - hi);
            let mut i = u.floor();
            if i > n - 2.0 - hi {
                i = n - 2.0 - hi;
            }
            base[a] = i as usize;
            frac[a] = u - i;
        }
        Some(match self.kind {
            Interpolation::Linear => self.linear(dim, &base, &frac),
            Interpolation::CubicSpline => self.cubic(dim, &base, &frac),
        })
    }

    fn linear(&self, dim: usize, base: &[usize; 3], frac: &[f64; 3]) -> f64 {
        let mut acc = 0.0;
        for corner in 0..(1usize << dim) {
            let mut w = 1.0;
            let mut flat = 0;
            for a in 0..dim {
                let bit = (corner >> a) & 1;
                w *= if bit == 1 { frac[a] } else { 1.0 - frac[a] };
                flat += (base[a] + bit) * self.strides[a];
            }
            if w != 0.0 {
                acc += w * self.coeffs[flat];
            }
        }
        acc
    }

    fn cubic(&self, dim: usize, base: &[usize; 3], frac: &[f64; 3]) -> f64 {
        let w: Vec<[f64; 4]> = (0..dim).map(|a| cubic_weights(frac[a])).collect();
        let c = &self.coeffs;
        let s = &self.strides;
        if dim == 2 {
            let mut acc = 0.0;
            for (i, wi) in w[0].iter().enumerate() {
                let row = (base[0] + i - 1) * s[0];
                let mut r = 0.0;
                for (j, wj) in w[1].iter().enumerate() {
                    r += wj * c[row + base[1] + j - 1];
                }
                acc += wi * r;
            }
            acc
        } else {
            let mut acc = 0.0;
            for (i, wi) in w[0].iter().enumerate() {
                let plane = (base[0] + i - 1) * s[0];
                let mut p = 0.0;
                for (j, wj) in w[1].iter().enumerate() {
                    let row = plane + (base[1] + j - 1) * s[1];
                    let mut r = 0.0;
                    for (k, wk) in w[2].iter().enumerate() {
                        r += wk * c[row + base[2] + k - 1];
                    }
                    p += wj * r;
                }
                acc += wi * p;
            }
            acc
        }
    }
}
