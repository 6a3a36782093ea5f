//! Bessel functions of the first kind on the nonnegative real axis, the
//! normalized Bessel function `j_p(λ) = 2^p Γ(p+1) J_p(λ) / λ^p`, its
//! derivative, zero tables and the complex lower-bound check.
//!
//! Real evaluation uses the ascending power series for small arguments and
//! Miller's backward recurrence, normalized with the Neumann-type sum
//! `(x/2)^ν = Σ_m (ν + 2m) Γ(ν + m) / m! · J_{ν+2m}(x)`, everywhere else.

mod complex;
mod zeros;

pub use complex::{bessel_j_complex, bessel_j_modulus, calibrate_constant, lower_bound_check, ExclusionRegion, LowerBound};
pub use zeros::{bessel_zeros, normalized_zeros, BesselZeroTable};

use crate::error::{domain, Result};

/// Arguments up to this value are summed directly from the power series.
const SERIES_LIMIT: f64 = 8.0;

/// Order `ν ≥ 0` of a Bessel function of the first kind.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct BesselOrder(f64);

impl BesselOrder {
    pub fn new(nu: f64) -> Result<Self> {
        if !nu.is_finite() || nu < 0.0 {
            return domain(format!("Bessel order must be finite and nonnegative, got {nu}"));
        }
        Ok(Self(nu))
    }

    /// Order `(n − 2)/2` of the multiplier of the normalized sphere measure in `R^n`.
    pub fn sphere_multiplier(dim: usize) -> Self {
        Self((dim as f64 - 2.0) / 2.0)
    }

    /// Order `n/2 + m − 1` attached to degree-`m` harmonics in `R^n`.
    pub fn harmonic(dim: usize, degree: usize) -> Self {
        Self(dim as f64 / 2.0 + degree as f64 - 1.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

fn check_argument(x: f64) -> Result<()> {
    if !x.is_finite() || x < 0.0 {
        return domain(format!("argument must be finite and nonnegative, got {x}"));
    }
    Ok(())
}

fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `Γ(x)` for `x > 0`.
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// `Σ_k (−x²/4)^k / (k! (ν+1)_k)`, i.e. `j_ν(x)` by its ascending series.
fn reduced_series(nu: f64, x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        let kf = k as f64;
        term *= q / (kf * (nu + kf));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// `J_ν(x)` by Miller's backward recurrence for `x > 0`.
fn miller(nu: f64, x: f64) -> f64 {
    let base = nu.floor();
    let frac = nu - base;
    let target = base as usize;
    let scale = x.max(nu);
    let mut start = (scale + 30.0 + (50.0 * scale).sqrt()).ceil() as usize;
    start = start.max(target + 2);
    if start % 2 == 1 {
        start += 1;
    }

    // Normalization weights b_m = (frac + 2m) Γ(frac + m) / (Γ(frac + 1) m!), b_0 = 1.
    let mut weights = Vec::with_capacity(start / 2 + 1);
    weights.push(1.0);
    let mut running = 1.0; // Π_{1≤i<m} (frac + i) / i
    for m in 1..=start / 2 {
        running *= if m == 1 { 1.0 } else { (frac + (m - 1) as f64) / (m - 1) as f64 };
        weights.push((frac + 2.0 * m as f64) * running / m as f64);
    }
    let weight = |m: usize| weights[m];

    let mut upper = 0.0_f64; // J_{frac+k+1}
    let mut current = 1e-280_f64; // J_{frac+k}
    let mut norm = 0.0_f64;
    let mut picked = 0.0_f64;
    let mut k = start;
    loop {
        if k == target {
            picked = current;
        }
        if k % 2 == 0 {
            norm += weight(k / 2) * current;
        }
        if k == 0 {
            break;
        }
        let lower = 2.0 * (frac + k as f64) / x * current - upper;
        upper = current;
        current = lower;
        k -= 1;
        if current.abs() > 1e250 {
            current *= 1e-250;
            upper *= 1e-250;
            norm *= 1e-250;
            picked *= 1e-250;
        }
    }
    // (x/2)^frac / Γ(frac + 1)
    let lhs = (frac * (0.5 * x).ln() - ln_gamma(frac + 1.0)).exp();
    picked * lhs / norm
}

/// `J_ν(x)` for `x ≥ 0`.
pub fn bessel_j(order: BesselOrder, x: f64) -> Result<f64> {
    check_argument(x)?;
    let nu = order.value();
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    if x <= SERIES_LIMIT {
        let prefactor = (nu * (0.5 * x).ln() - ln_gamma(nu + 1.0)).exp();
        return Ok(prefactor * reduced_series(nu, x));
    }
    Ok(miller(nu, x))
}

/// `j_p(λ) = 2^p Γ(p+1) J_p(λ) / λ^p`, equal to 1 at `λ = 0`.
pub fn normalized_j(p: BesselOrder, lam: f64) -> Result<f64> {
    check_argument(lam)?;
    let nu = p.value();
    if lam <= SERIES_LIMIT {
        return Ok(reduced_series(nu, lam));
    }
    let prefactor = (nu * std::f64::consts::LN_2 + ln_gamma(nu + 1.0) - nu * lam.ln()).exp();
    Ok(prefactor * miller(nu, lam))
}

/// `d j_p / dλ = −λ / (2(p+1)) · j_{p+1}(λ)`.
pub fn normalized_j_prime(p: BesselOrder, lam: f64) -> Result<f64> {
    check_argument(lam)?;
    let nu = p.value();
    let next = BesselOrder(nu + 1.0);
    Ok(-lam / (2.0 * (nu + 1.0)) * normalized_j(next, lam)?)
}

/// `J'_ν(x) = (ν/x) J_ν(x) − J_{ν+1}(x)`; at `x = 0` the limit is used.
pub fn bessel_j_prime(order: BesselOrder, x: f64) -> Result<f64> {
    check_argument(x)?;
    let nu = order.value();
    if x == 0.0 {
        return Ok(if nu == 1.0 { 0.5 } else if nu == 0.0 || nu > 1.0 { 0.0 } else { f64::INFINITY });
    }
    Ok(nu / x * bessel_j(order, x)? - bessel_j(BesselOrder(nu + 1.0), x)?)
}

/// Sampled supremum over `t ∈ [T, 2T]` of
/// `max(|j_q(t)|, |j'_q(t)|) · t^{(n+2m−1)/2}` with `q = n/2 + m − 1`.
///
/// The decay rate `t^{−(n+2m−1)/2}` of both `j_q` and `j'_q` means the
/// returned value stays bounded as `T` grows.
pub fn asymptotic_envelope(dim: usize, degree: usize, t_low: f64) -> Result<f64> {
    if !t_low.is_finite() || t_low < 1.0 {
        return domain(format!("envelope window start must be ≥ 1, got {t_low}"));
    }
    if dim < 2 {
        return domain(format!("dimension must be ≥ 2, got {dim}"));
    }
    let q = BesselOrder::harmonic(dim, degree);
    let exponent = (dim as f64 + 2.0 * degree as f64 - 1.0) / 2.0;
    let samples = ((64.0 * t_low).ceil() as usize).max(400);
    let mut sup = 0.0_f64;
    for i in 0..=samples {
        let t = t_low * (1.0 + i as f64 / samples as f64);
        let value = normalized_j(q, t)?.abs().max(normalized_j_prime(q, t)?.abs());
        sup = sup.max(value * t.powf(exponent));
    }
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn order(nu: f64) -> BesselOrder {
        BesselOrder::new(nu).unwrap()
    }

    /// Bessel's integral `J_n(x) = (1/π) ∫_0^π cos(nτ − x sin τ) dτ`,
    /// trapezoid rule (spectrally accurate for this periodic integrand).
    fn integral_oracle(n: u32, x: f64) -> f64 {
        let m = 4096;
        let h = PI / m as f64;
        let mut s = 0.0;
        for i in 0..=m {
            let tau = i as f64 * h;
            let w = if i == 0 || i == m { 0.5 } else { 1.0 };
            s += w * (n as f64 * tau - x * tau.sin()).cos();
        }
        s * h / PI
    }

    #[test]
    fn j0_at_origin_is_one() {
        assert_eq!(bessel_j(order(0.0), 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(order(2.5), 0.0).unwrap(), 0.0);
    }

    #[test]
    fn rejects_negative_and_nonfinite_arguments() {
        assert!(bessel_j(order(0.0), -1.0).is_err());
        assert!(bessel_j(order(0.0), f64::NAN).is_err());
        assert!(normalized_j(order(0.5), -0.1).is_err());
        assert!(normalized_j_prime(order(0.5), f64::INFINITY).is_err());
        assert!(BesselOrder::new(-0.5).is_err());
    }

    #[test]
    fn integer_orders_match_bessel_integral() {
        for n in [0u32, 1, 2, 5, 10] {
            for i in 1..=200 {
                let x = i as f64 * 0.25;
                let got = bessel_j(order(n as f64), x).unwrap();
                let want = integral_oracle(n, x);
                assert!((got - want).abs() < 1e-12, "J_{n}({x}): {got} vs {want}");
            }
        }
    }

    #[test]
    fn half_integer_closed_forms() {
        for i in 1..=5000 {
            let x = i as f64 * 0.01;
            let c = (2.0 / (PI * x)).sqrt();
            let j12 = bessel_j(order(0.5), x).unwrap();
            let j32 = bessel_j(order(1.5), x).unwrap();
            assert!((j12 - c * x.sin()).abs() < 1e-12, "x = {x}");
            assert!((j32 - c * (x.sin() / x - x.cos())).abs() < 1e-10, "x = {x}");
        }
    }

    #[test]
    fn first_zero_of_j0() {
        let v = bessel_j(order(0.0), 2.404825557695773).unwrap();
        assert!(v.abs() < 1e-10);
    }

    #[test]
    fn normalized_half_order_is_sinc() {
        assert_eq!(normalized_j(order(0.5), 0.0).unwrap(), 1.0);
        for i in 1..=5000 {
            let lam = i as f64 * 0.01;
            let got = normalized_j(order(0.5), lam).unwrap();
            assert!((got - lam.sin() / lam).abs() < 1e-12, "λ = {lam}");
        }
        assert!(normalized_j(order(0.5), PI).unwrap().abs() < 1e-12);
    }

    #[test]
    fn normalized_at_zero_is_one_for_every_order() {
        for p in [0.0, 0.5, 1.0, 3.5, 8.5] {
            assert_eq!(normalized_j(order(p), 0.0).unwrap(), 1.0);
            assert_eq!(normalized_j_prime(order(p), 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn derivative_closed_form_and_finite_differences() {
        let d = normalized_j_prime(order(0.5), PI).unwrap();
        assert!((d + 1.0 / PI).abs() < 1e-10);

        for p in [0.0, 0.5, 1.5, 4.0] {
            for lam in [0.3, 2.0, 7.9, 8.1, 15.0, 33.3] {
                let exact = normalized_j_prime(order(p), lam).unwrap();
                let mut errs = Vec::new();
                for h in [1e-2, 5e-3] {
                    let fd = (normalized_j(order(p), lam + h).unwrap()
                        - normalized_j(order(p), lam - h).unwrap())
                        / (2.0 * h);
                    errs.push((fd - exact).abs());
                }
                // O(h²): halving h divides the error by ~4.
                assert!(errs[0] < 1e-4, "p = {p}, λ = {lam}: {errs:?}");
                assert!(errs[1] < errs[0] / 3.0 || errs[1] < 1e-9, "p = {p}, λ = {lam}: {errs:?}");
            }
        }
    }

    #[test]
    fn series_and_recurrence_agree_at_the_switch() {
        for nu in [0.0, 0.5, 1.0, 2.5, 7.0, 10.0] {
            let x = SERIES_LIMIT;
            let series = (nu * (0.5 * x).ln() - ln_gamma(nu + 1.0)).exp() * reduced_series(nu, x);
            let rec = miller(nu, x);
            assert!((series - rec).abs() < 1e-13, "ν = {nu}: {series} vs {rec}");
        }
    }

    #[test]
    fn normalized_is_even_in_lambda() {
        // The series is a function of λ² only, so ±λ agree to the last bit.
        for lam in [0.1, 1.0, 3.7, 7.5] {
            let plus = reduced_series(0.5, lam);
            let minus = reduced_series(0.5, -lam);
            assert_eq!(plus, minus);
        }
    }

    #[test]
    fn envelope_for_three_dimensions_degree_zero_is_about_one() {
        // |sin t / t| · t ≤ 1 and |j'| · t ≤ 1 + 1/t.
        for t in [1.0, 4.0, 16.0] {
            let e = asymptotic_envelope(3, 0, t).unwrap();
            assert!(e <= 1.0 + 1.0 / t + 1e-9 && e > 0.9, "T = {t}: {e}");
        }
    }

    #[test]
    fn envelope_is_bounded_in_window_start() {
        for dim in [2, 3] {
            for degree in 0..=8 {
                let values: Vec<f64> = [4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0]
                    .iter()
                    .map(|&t| asymptotic_envelope(dim, degree, t).unwrap())
                    .collect();
                let hi = values.iter().cloned().fold(f64::MIN, f64::max);
                let lo = values.iter().cloned().fold(f64::MAX, f64::min);
                assert!(hi / lo < 4.0, "n = {dim}, m = {degree}: {values:?}");
            }
        }
        let a = asymptotic_envelope(2, 0, 1.0).unwrap();
        let b = asymptotic_envelope(2, 0, 64.0).unwrap();
        assert!(a / b < 3.0 && b / a < 3.0);
    }

    #[test]
    fn envelope_rejects_small_window() {
        assert!(asymptotic_envelope(2, 0, 0.5).is_err());
    }
}
