use std::fmt::Write as _;

use crate::error::{config, domain, Error, Result};

/// Smallest number of samples in a profile.
pub const MIN_COUNT: usize = 16;
const STENCIL: usize = 8;

/// A radial function sampled at `r_i = i · r_max / (count − 1)`.
///
/// Between samples the profile is read by 8-point Lagrange interpolation,
/// reflecting evenly through `r = 0`. Outside `[0, r_max]` it is zero.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialProfile {
    r_max: f64,
    values: Vec<f64>,
}

impl RadialProfile {
    pub fn new(r_max: f64, values: Vec<f64>) -> Result<Self> {
        if !(r_max > 0.0) || !r_max.is_finite() {
            return config(format!("profile r_max must be positive, got {r_max}"));
        }
        if values.len() < MIN_COUNT {
            return config(format!("profiles need at least {MIN_COUNT} samples, got {}", values.len()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return domain("profile values must be finite");
        }
        Ok(Self { r_max, values })
    }

    pub fn from_fn(r_max: f64, count: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let step = r_max / (count.max(2) - 1) as f64;
        Self::new(r_max, (0..count).map(|i| f(i as f64 * step)).collect())
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn count(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn step(&self) -> f64 {
        self.r_max / (self.values.len() - 1) as f64
    }

    pub fn radius(&self, i: usize) -> f64 {
        i as f64 * self.step()
    }

    pub fn radii(&self) -> Vec<f64> {
        (0..self.count()).map(|i| self.radius(i)).collect()
    }

    /// Interpolated value; the profile is even in `r` and zero beyond `r_max`.
    pub fn eval(&self, r: f64) -> f64 {
        let r = r.abs();
        let n = self.values.len();
        if r > self.r_max * (1.0 + 1e-12) {
            return 0.0;
        }
        let u = r / self.step();
        let nearest = u.round();
        if (u - nearest).abs() < 1e-13 {
            return self.values[(nearest as usize).min(n - 1)];
        }
        let start = (u.floor() as i64 - (STENCIL as i64 / 2 - 1)).min(n as i64 - STENCIL as i64);
        let mut acc = 0.0;
        for j in 0..STENCIL as i64 {
            let node = (start + j) as f64;
            let mut w = 1.0;
            for k in 0..STENCIL as i64 {
                if k != j {
                    w *= (u - (start + k) as f64) / (node - (start + k) as f64);
                }
            }
            acc += w * self.values[(start + j).unsigned_abs() as usize];
        }
        acc
    }

    /// `a·self + b·other` on a shared radius grid.
    pub fn combine(&self, a: f64, other: &RadialProfile, b: f64) -> Result<Self> {
        if self.count() != other.count() || (self.r_max - other.r_max).abs() > 1e-12 * self.r_max {
            return config("profiles live on different radius grids");
        }
        Self::new(
            self.r_max,
            self.values.iter().zip(&other.values).map(|(x, y)| a * x + b * y).collect(),
        )
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// `r,value` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,value\n");
        for (i, v) in self.values.iter().enumerate() {
            let _ = writeln!(out, "{:.17e},{:.17e}", self.radius(i), v);
        }
        out
    }

    /// Parses [`to_csv`](Self::to_csv) output. Radii must be uniform and
    /// start at zero.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut radii = Vec::new();
        let mut values = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (lineno == 0 && line.starts_with('r')) {
                continue;
            }
            let mut parts = line.split(',');
            let parse = |s: Option<&str>| -> Result<f64> {
                s.map(str::trim)
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| Error::Format(format!("line {}: expected `r,value`", lineno + 1)))
            };
            radii.push(parse(parts.next())?);
            values.push(parse(parts.next())?);
        }
        let Some(&r_max) = radii.last() else {
            return Err(Error::Format("profile CSV has no rows".into()));
        };
        let step = r_max / (radii.len().max(2) - 1) as f64;
        for (i, &r) in radii.iter().enumerate() {
            if (r - i as f64 * step).abs() > 1e-9 * r_max.max(1.0) {
                return Err(Error::Format(format!("radius {r} on row {} breaks the uniform grid", i + 1)));
            }
        }
        Self::new(r_max, values)
    }
}
