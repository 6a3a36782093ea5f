use std::f64::consts::PI;

use super::{bessel_j, bessel_j_prime, BesselOrder};
use crate::error::{domain, Error, Result};

/// Ascending positive zeros of `J_ν`, each located to within `tol`.
///
/// For `ν > 0` these are also the zeros of `j_ν`, since `λ^{−ν}` never
/// vanishes on `(0, ∞)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BesselZeroTable {
    order: BesselOrder,
    zeros: Vec<f64>,
    tol: f64,
}

impl BesselZeroTable {
    pub fn order(&self) -> BesselOrder {
        self.order
    }

    pub fn zeros(&self) -> &[f64] {
        &self.zeros
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Zero `k` counted from 1.
    pub fn get(&self, k: usize) -> Option<f64> {
        k.checked_sub(1).and_then(|i| self.zeros.get(i).copied())
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    /// `index,zero` lines with 15 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,zero\n");
        for (i, z) in self.zeros.iter().enumerate() {
            out.push_str(&format!("{},{:.14e}\n", i + 1, z));
        }
        out
    }
}

/// First `count` positive zeros of `J_ν`.
///
/// Scans with stride π/4 from `x = ν` (there are no zeros of `J_ν` below
/// `ν`), bisects each sign change down to `tol` and polishes with Newton
/// steps that are kept inside the bracket.
pub fn bessel_zeros(order: BesselOrder, count: usize, tol: f64) -> Result<BesselZeroTable> {
    if count == 0 {
        return domain("zero count must be at least 1");
    }
    if !(tol > 0.0) || !tol.is_finite() {
        return domain(format!("tolerance must be positive, got {tol}"));
    }
    let stride = PI / 4.0;
    let nu = order.value();
    let mut zeros = Vec::with_capacity(count);
    let mut a = nu.max(1e-3);
    let mut fa = bessel_j(order, a)?;
    let limit = nu + (count as f64 + 2.0) * PI + 10.0;

    while zeros.len() < count {
        let b = a + stride;
        if b > limit {
            return Err(Error::Bracket {
                order: nu,
                index: zeros.len() + 1,
                near: a,
            });
        }
        let fb = bessel_j(order, b)?;
        if fa == 0.0 {
            zeros.push(a);
        } else if fa.signum() != fb.signum() {
            zeros.push(refine(order, a, b, fa, tol)?);
        }
        a = b;
        fa = fb;
    }
    Ok(BesselZeroTable { order, zeros, tol })
}

/// Positive zeros of the normalized function `j_p` (same as those of `J_p`).
pub fn normalized_zeros(p: BesselOrder, count: usize, tol: f64) -> Result<BesselZeroTable> {
    bessel_zeros(p, count, tol)
}

fn refine(order: BesselOrder, mut lo: f64, mut hi: f64, mut flo: f64, tol: f64) -> Result<f64> {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let fm = bessel_j(order, mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..4 {
        let f = bessel_j(order, x)?;
        let d = bessel_j_prime(order, x)?;
        if d == 0.0 {
            break;
        }
        let next = x - f / d;
        if !(next >= lo && next <= hi) {
            break;
        }
        if (next - x).abs() < 1e-16 * x {
            x = next;
            break;
        }
        x = next;
    }
    Ok(x)
}
