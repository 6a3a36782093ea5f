use rayon::prelude::*;

use super::harmonics::harmonic_count;
use super::{harmonic_value, RadialProfile, Sampler, SphereQuadrature};
use crate::error::{config, domain, Result};

/// Angular averages about the origin, one per radius.
///
/// Spheres that leave the interpolation domain are flagged invalid and carry
/// the value 0.
#[derive(Clone, Debug)]
pub struct Radialization {
    pub profile: RadialProfile,
    pub valid: Vec<bool>,
}

impl Radialization {
    /// Largest radius whose sphere was fully sampled.
    pub fn valid_radius(&self) -> f64 {
        self.valid
            .iter()
            .rposition(|&v| v)
            .map_or(0.0, |i| self.profile.radius(i))
    }
}

/// `f_{m,l}(r) = ∫ f(rθ) Y^m_l(θ) dσ(θ)` per radius.
#[derive(Clone, Debug)]
pub struct HarmonicCoefficients {
    pub degree: usize,
    pub index: usize,
    pub profile: RadialProfile,
    pub valid: Vec<bool>,
}

fn check_request(sampler: &Sampler, quad: &SphereQuadrature, r_max: f64, count: usize) -> Result<()> {
    let geom = sampler.geometry();
    if quad.dim() != geom.dim() {
        return config("quadrature and field dimensions differ");
    }
    if !geom.contains_origin() {
        return domain("the grid must contain the origin");
    }
    if count < super::profile::MIN_COUNT {
        return config(format!("profile_count must be ≥ 16, got {count}"));
    }
    // Largest distance from the origin to a grid corner.
    let extent = (0..geom.dim())
        .map(|a| {
            let lo = geom.origin()[a];
            let hi = lo + (geom.shape()[a] - 1) as f64 * geom.spacing();
            lo.abs().max(hi.abs()).powi(2)
        })
        .sum::<f64>()
        .sqrt();
    if !(r_max > 0.0) || r_max > extent {
        return domain(format!("profile radius {r_max} is beyond the grid extent {extent}"));
    }
    Ok(())
}

fn project(
    sampler: &Sampler,
    quad: &SphereQuadrature,
    r_max: f64,
    count: usize,
    weight: impl Fn(&[f64]) -> f64 + Sync,
) -> Result<(RadialProfile, Vec<bool>)> {
    check_request(sampler, quad, r_max, count)?;
    let dim = quad.dim();
    let w: Vec<f64> = quad.iter().map(|(d, w)| w * weight(d)).collect();
    let step = r_max / (count - 1) as f64;
    let zero = vec![0.0; dim];
    let rows: Vec<(f64, bool)> = (0..count)
        .into_par_iter()
        .map(|i| {
            let r = i as f64 * step;
            if !sampler.covers_ball(&zero, r) {
                return (0.0, false);
            }
            let mut x = vec![0.0; dim];
            let mut acc = 0.0;
            for (k, (d, _)) in quad.iter().enumerate() {
                for a in 0..dim {
                    x[a] = r * d[a];
                }
                acc += w[k] * sampler.try_sample(&x).unwrap_or(0.0);
            }
            (acc, true)
        })
        .collect();
    let (values, valid): (Vec<f64>, Vec<bool>) = rows.into_iter().unzip();
    Ok((RadialProfile::new(r_max, values)?, valid))
}

/// Radialization `u^#(r)`: the normalized angular average of the field over
/// the sphere of radius `r_i` about the origin.
pub fn radialize(sampler: &Sampler, quad: &SphereQuadrature, r_max: f64, count: usize) -> Result<Radialization> {
    let (profile, valid) = project(sampler, quad, r_max, count, |_| 1.0)?;
    Ok(Radialization { profile, valid })
}

/// Projection onto the real orthonormal harmonic `Y^m_l`.
pub fn harmonic_project(
    sampler: &Sampler,
    quad: &SphereQuadrature,
    degree: usize,
    index: usize,
    r_max: f64,
    count: usize,
) -> Result<HarmonicCoefficients> {
    let dim = quad.dim();
    if index == 0 || index > harmonic_count(dim, degree) || degree > super::harmonics::MAX_DEGREE {
        return domain(format!("(m, l) = ({degree}, {index}) outside the basis range for n = {dim}"));
    }
    let (profile, valid) = project(sampler, quad, r_max, count, |d| {
        harmonic_value(dim, degree, index, d).expect("validated above")
    })?;
    Ok(HarmonicCoefficients {
        degree,
        index,
        profile,
        valid,
    })
}
