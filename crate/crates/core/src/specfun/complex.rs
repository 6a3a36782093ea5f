use std::f64::consts::PI;

use num_complex::Complex64;

use super::{bessel_j, gamma, BesselOrder};
use crate::error::{domain, Result};

/// Largest modulus accepted by [`bessel_j_complex`].
const MAX_MODULUS: f64 = 60.0;
/// Below this modulus the ascending series is summed directly.
const SERIES_MODULUS: f64 = 17.0;

/// Disks excluded from the lower bound `|J_ν(z)| ≥ C e^{|Im z|} / √|z|`:
/// one disk around the origin plus disks of radius π/6 centred at
/// `π(k + (2ν+3)/4)`, `k = 0, 1, …`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExclusionRegion {
    order: BesselOrder,
    origin_disk_radius: f64,
}

impl ExclusionRegion {
    pub const DISK_RADIUS: f64 = PI / 6.0;

    /// The origin disk radius is not pinned down by the estimate; callers
    /// supply it.
    pub fn new(order: BesselOrder, origin_disk_radius: f64) -> Result<Self> {
        if !(origin_disk_radius >= 0.0) || !origin_disk_radius.is_finite() {
            return domain(format!("origin disk radius must be ≥ 0, got {origin_disk_radius}"));
        }
        Ok(Self {
            order,
            origin_disk_radius,
        })
    }

    pub fn center(&self, k: usize) -> f64 {
        PI * (k as f64 + (2.0 * self.order.value() + 3.0) / 4.0)
    }

    /// First `count` disk centres.
    pub fn centers(&self, count: usize) -> Vec<f64> {
        (0..count).map(|k| self.center(k)).collect()
    }

    pub fn origin_disk_radius(&self) -> f64 {
        self.origin_disk_radius
    }

    pub fn contains(&self, z: Complex64) -> bool {
        if z.norm() <= self.origin_disk_radius {
            return true;
        }
        let offset = (2.0 * self.order.value() + 3.0) / 4.0;
        let k = (z.re / PI - offset).round().max(0.0) as usize;
        [k.saturating_sub(1), k, k + 1]
            .iter()
            .any(|&j| (z - Complex64::new(self.center(j), 0.0)).norm() <= Self::DISK_RADIUS)
    }
}

/// Outcome of [`lower_bound_check`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LowerBound {
    InExclusion,
    Holds { value: f64, bound: f64 },
    Fails { value: f64, bound: f64 },
}

/// `J_ν(z)` for complex `z` with `|z| ≤ 60`.
///
/// Small moduli use the ascending series; larger ones use Hankel's
/// asymptotic expansion in the closed right half plane, which needs a
/// modest order (`ν ≤ 3`). Left-half-plane arguments are accepted only
/// through the modulus, see [`bessel_j_modulus`].
pub fn bessel_j_complex(order: BesselOrder, z: Complex64) -> Result<Complex64> {
    let r = z.norm();
    if !r.is_finite() || r == 0.0 {
        return domain(format!("complex argument must be finite and nonzero, got {z}"));
    }
    if r > MAX_MODULUS {
        return domain(format!("|z| = {r} exceeds the desk-scale limit {MAX_MODULUS}"));
    }
    let nu = order.value();
    if r <= SERIES_MODULUS {
        return Ok(complex_series(nu, z));
    }
    if nu > 3.0 {
        return domain(format!("order {nu} too large for the asymptotic branch at |z| = {r}"));
    }
    if z.re < 0.0 {
        return domain("asymptotic branch requires Re z ≥ 0");
    }
    Ok(hankel_asymptotic(nu, z))
}

/// `|J_ν(z)|`, using `|J_ν(−z)| = |J_ν(z̄)| = |J_ν(z)|` to fold any
/// argument into the first quadrant.
pub fn bessel_j_modulus(order: BesselOrder, z: Complex64) -> Result<f64> {
    if z.im == 0.0 {
        return Ok(bessel_j(order, z.re.abs())?.abs());
    }
    let folded = Complex64::new(z.re.abs(), z.im.abs());
    Ok(bessel_j_complex(order, folded)?.norm())
}

fn complex_series(nu: f64, z: Complex64) -> Complex64 {
    let q = -0.25 * z * z;
    let mut term = Complex64::new(1.0 / gamma(nu + 1.0), 0.0);
    let mut sum = term;
    for k in 1..400 {
        let kf = k as f64;
        term = term * q / (kf * (nu + kf));
        sum += term;
        if term.norm() <= 1e-18 * sum.norm() && kf > q.norm().sqrt() {
            break;
        }
    }
    (0.5 * z).powf(nu) * sum
}

fn hankel_asymptotic(nu: f64, z: Complex64) -> Complex64 {
    let mu = 4.0 * nu * nu;
    let mut p = Complex64::new(1.0, 0.0);
    let mut q = Complex64::new(0.0, 0.0);
    let mut a = 1.0_f64; // a_k(ν)
    let mut zpow = Complex64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        a *= (mu - odd * odd) / (k as f64 * 8.0);
        zpow *= z;
        let term = a / zpow;
        let size = term.norm();
        if size > last {
            break;
        }
        last = size;
        // P gets even k with sign (−1)^{k/2}, Q odd k with sign (−1)^{(k−1)/2}.
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        if size < 1e-17 {
            break;
        }
    }
    let chi = z - (0.5 * nu + 0.25) * PI;
    (2.0 / (PI * z)).sqrt() * (p * chi.cos() - q * chi.sin())
}

/// Compares `|J_ν(z)|` with `C e^{|Im z|} / √|z|` outside the exclusion
/// disks.
pub fn lower_bound_check(region: &ExclusionRegion, z: Complex64, c: f64) -> Result<LowerBound> {
    if z.norm() == 0.0 || !z.norm().is_finite() {
        return domain("lower bound check needs a finite nonzero z");
    }
    if !(c > 0.0) {
        return domain(format!("constant C must be positive, got {c}"));
    }
    if region.contains(z) {
        return Ok(LowerBound::InExclusion);
    }
    let value = bessel_j_modulus(region.order, z)?;
    let bound = c * z.im.abs().exp() / z.norm().sqrt();
    Ok(if value >= bound {
        LowerBound::Holds { value, bound }
    } else {
        LowerBound::Fails { value, bound }
    })
}

/// Calibrates the constant as half the minimum of `|J_ν(x)| √x` over real
/// samples that fall outside the exclusion disks.
pub fn calibrate_constant(region: &ExclusionRegion, samples: &[f64]) -> Result<f64> {
    let mut min = f64::INFINITY;
    for &x in samples {
        let z = Complex64::new(x, 0.0);
        if x <= 0.0 || region.contains(z) {
            continue;
        }
        min = min.min(bessel_j(region.order, x)?.abs() * x.sqrt());
    }
    if !min.is_finite() {
        return domain("no calibration sample outside the exclusion region");
    }
    Ok(0.5 * min)
}
