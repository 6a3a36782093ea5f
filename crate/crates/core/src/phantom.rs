//! Test fields and masks.

use crate::error::{domain, Result};
use crate::field::{Geometry, GridField};
use crate::geometry::DomainMask;

fn dist2(x: &[f64], c: &[f64]) -> f64 {
    x.iter().zip(c).map(|(a, b)| (a - b).powi(2)).sum()
}

fn check_center(geom: &Geometry, center: &[f64]) -> Result<()> {
    if center.len() != geom.dim() {
        return domain(format!("center has {} coordinates, grid has {}", center.len(), geom.dim()));
    }
    Ok(())
}

/// `exp(−|x − c|²/(2σ²))`.
pub fn gaussian(geom: &Geometry, sigma: f64, center: &[f64]) -> Result<GridField> {
    check_center(geom, center)?;
    if !(sigma > 0.0) {
        return domain(format!("σ must be positive, got {sigma}"));
    }
    let c = center.to_vec();
    GridField::from_fn(geom.clone(), move |x| (-dist2(x, &c) / (2.0 * sigma * sigma)).exp())
}

/// `(1 − |x − c|²/ρ²)₊⁴`, a `C³` bump supported in the closed ball of radius ρ.
pub fn bump(geom: &Geometry, radius: f64, center: &[f64]) -> Result<GridField> {
    check_center(geom, center)?;
    if !(radius > 0.0) {
        return domain(format!("bump radius must be positive, got {radius}"));
    }
    let c = center.to_vec();
    GridField::from_fn(geom.clone(), move |x| bump_value(dist2(x, &c) / (radius * radius)))
}

/// `(1 − s)₊⁴` for squared normalized distance `s`.
pub fn bump_value(s: f64) -> f64 {
    if s < 1.0 {
        (1.0 - s).powi(4)
    } else {
        0.0
    }
}

pub fn disk_mask(geom: &Geometry, radius: f64, center: &[f64]) -> Result<DomainMask> {
    check_center(geom, center)?;
    let c = center.to_vec();
    Ok(DomainMask::from_fn(geom.clone(), move |x| dist2(x, &c) <= radius * radius))
}

/// Axis-aligned cube `|x_a − c_a| ≤ half` for every axis.
pub fn square_mask(geom: &Geometry, half: f64, center: &[f64]) -> Result<DomainMask> {
    check_center(geom, center)?;
    let c = center.to_vec();
    Ok(DomainMask::from_fn(geom.clone(), move |x| {
        x.iter().zip(&c).all(|(a, b)| (a - b).abs() <= half)
    }))
}

/// Union of two disks of radius `radius` centred at `(±offset, 0, …)`.
pub fn two_disk_mask(geom: &Geometry, radius: f64, offset: f64) -> Result<DomainMask> {
    let mut a = vec![0.0; geom.dim()];
    let mut b = a.clone();
    a[0] = -offset;
    b[0] = offset;
    disk_mask(geom, radius, &a)?.or(&disk_mask(geom, radius, &b)?)
}

/// A planar L: the square `[−s, s]²` minus the open quadrant `x > 0, y > 0`
/// beyond the arm width `w` (so the arms are `w` thick), with the reentrant
/// corner at `(w − s, w − s)` filled by a concave fillet of radius `fillet`.
///
/// With `fillet ≥ R` the complement is a union of closed `R`-balls, so the
/// mask is `R`-convex although not convex. Only the first two axes are used.
#[derive(Clone, Copy, Debug)]
pub struct LShape {
    pub half: f64,
    pub arm: f64,
    pub fillet: f64,
}

impl LShape {
    pub fn contains(&self, x: &[f64]) -> bool {
        let (s, w, rho) = (self.half, self.arm, self.fillet);
        let (u, v) = (x[0], x[1]);
        if u.abs() > s || v.abs() > s {
            return false;
        }
        let corner = w - s;
        if u <= corner || v <= corner {
            return true;
        }
        // inside the notch: only the fillet region belongs to K
        let (cu, cv) = (corner + rho, corner + rho);
        u < cu && v < cv && (u - cu).powi(2) + (v - cv).powi(2) > rho * rho
    }

    pub fn mask(&self, geom: &Geometry) -> DomainMask {
        DomainMask::from_fn(geom.clone(), |x| self.contains(x))
    }

    /// Midpoint of the notch `[w − s, s]²`, in the complement.
    pub fn notch_point(&self) -> [f64; 2] {
        let c = 0.5 * ((self.arm - self.half) + self.half);
        [c, c]
    }
}
