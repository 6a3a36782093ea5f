//! Real spherical harmonics, orthonormal for the normalized surface measure.
//!
//! * 2-D: `Y^0_1 = 1`; for `m ≥ 1`, `Y^m_1 = √2 cos mθ` and `Y^m_2 = √2 sin mθ`.
//! * 3-D: `l = 1, …, 2m+1` maps to `μ = l − m − 1 ∈ [−m, m]` and
//!   `Y^m_l = √(2m+1) · √((m−|μ|)!/(m+|μ|)!) · P_m^{|μ|}(cos θ) · A_μ(φ)` with
//!   `A_0 = 1`, `A_μ = √2 cos μφ` for `μ > 0` and `√2 sin |μ|φ` for `μ < 0`.
//!   No Condon–Shortley phase.

use crate::error::{domain, Result};

/// Largest degree supported.
pub const MAX_DEGREE: usize = 8;

/// Dimension `d(m)` of the space of degree-`m` harmonics.
pub fn harmonic_count(dim: usize, degree: usize) -> usize {
    match (dim, degree) {
        (2, 0) => 1,
        (2, _) => 2,
        _ => 2 * degree + 1,
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Associated Legendre function `P_m^μ(x)` without the `(−1)^μ` phase.
fn legendre(m: usize, mu: usize, x: f64) -> f64 {
    let s = (1.0 - x * x).max(0.0).sqrt();
    let mut pmm = 1.0;
    for i in 0..mu {
        pmm *= (2 * i + 1) as f64 * s;
    }
    if m == mu {
        return pmm;
    }
    let mut prev = pmm;
    let mut cur = x * (2 * mu + 1) as f64 * pmm;
    for k in mu + 2..=m {
        let next = ((2 * k - 1) as f64 * x * cur - (k + mu - 1) as f64 * prev) / (k - mu) as f64;
        prev = cur;
        cur = next;
    }
    cur
}

/// `Y^m_l` at a unit direction.
pub fn harmonic_value(dim: usize, degree: usize, index: usize, direction: &[f64]) -> Result<f64> {
    if dim != 2 && dim != 3 {
        return domain(format!("harmonics exist for n = 2, 3 only, got {dim}"));
    }
    if degree > MAX_DEGREE || index == 0 || index > harmonic_count(dim, degree) {
        return domain(format!(
            "(m, l) = ({degree}, {index}) outside the basis range for n = {dim}"
        ));
    }
    let phi = direction[1].atan2(direction[0]);
    if dim == 2 {
        let m = degree as f64;
        return Ok(match (degree, index) {
            (0, _) => 1.0,
            (_, 1) => std::f64::consts::SQRT_2 * (m * phi).cos(),
            _ => std::f64::consts::SQRT_2 * (m * phi).sin(),
        });
    }
    let mu = index as i64 - degree as i64 - 1;
    let a = mu.unsigned_abs() as usize;
    let norm = ((2 * degree + 1) as f64 * factorial(degree - a) / factorial(degree + a)).sqrt();
    let p = legendre(degree, a, direction[2].clamp(-1.0, 1.0));
    let azimuth = match mu {
        0 => 1.0,
        m if m > 0 => std::f64::consts::SQRT_2 * (a as f64 * phi).cos(),
        _ => std::f64::consts::SQRT_2 * (a as f64 * phi).sin(),
    };
    Ok(norm * p * azimuth)
}
