//! The fixed-radius spherical mean transform `h = f ∗ δ_R`.
//!
//! With the normalized sphere measure, `ĥ(ξ) = j_{(n−2)/2}(R|ξ|) f̂(ξ)`, so the
//! transform can be computed either by quadrature over spheres or by a
//! Fourier multiplier. Both are here, together with the volume representation
//! `f ∗ δ_R = c (Δ + λ₀²)(f ∗ Ψ)` and the check that `ĥ` vanishes on the real
//! zero rings `|ξ| = λ_k`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{config, domain, Error, Result};
use crate::field::{fft_forward, Geometry, GridField, PaddedSpectrum, Sampler, SphereQuadrature};
use crate::specfun::{normalized_j, normalized_j_prime, normalized_zeros, BesselOrder};

/// Zero tables are refined to this absolute accuracy.
pub const ZERO_TOL: f64 = 1e-13;

/// Surface area `ω_n` of the unit sphere in `R^n`.
pub fn sphere_area(dim: usize) -> f64 {
    match dim {
        1 => 2.0,
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        _ => 2.0 * PI.powf(dim as f64 / 2.0) / crate::specfun::gamma(dim as f64 / 2.0),
    }
}

/// Averaging over spheres of radius `R` in `R^n` with the normalized measure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphereKernel {
    dim: usize,
    radius: f64,
}

impl SphereKernel {
    pub fn new(dim: usize, radius: f64) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return config(format!("sphere kernels exist for n = 2, 3, got {dim}"));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return domain(format!("sphere radius must be positive, got {radius}"));
        }
        Ok(Self { dim, radius })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn multiplier_order(&self) -> BesselOrder {
        BesselOrder::sphere_multiplier(self.dim)
    }

    /// `j_{(n−2)/2}(R|ξ|)`; equals 1 at `ξ = 0`.
    pub fn multiplier(&self, xi: f64) -> f64 {
        normalized_j(self.multiplier_order(), (self.radius * xi).abs()).expect("finite nonnegative argument")
    }

    /// Radii `λ_k = z_k / R`, `k = 1..=count`, of the zero rings.
    pub fn zero_rings(&self, count: usize) -> Result<Vec<f64>> {
        let table = normalized_zeros(self.multiplier_order(), count, ZERO_TOL)?;
        Ok(table.zeros().iter().map(|z| z / self.radius).collect())
    }
}

/// `Σ_i w_i f(center + t θ_i)`, the discrete spherical mean `Mf(center, t)`.
pub fn spherical_mean(sampler: &Sampler, center: &[f64], t: f64, quad: &SphereQuadrature) -> Result<f64> {
    let dim = sampler.geometry().dim();
    if quad.dim() != dim || center.len() != dim {
        return config("dimension mismatch between field, center and quadrature");
    }
    if !(t >= 0.0) || !t.is_finite() {
        return domain(format!("sphere radius must be ≥ 0, got {t}"));
    }
    if !sampler.covers_ball(center, t) {
        return Err(Error::OutOfGrid(format!(
            "sphere of radius {t} about {center:?} leaves the interpolation domain"
        )));
    }
    let mut x = [0.0; 3];
    let mut acc = 0.0;
    for (d, w) in quad.iter() {
        for a in 0..dim {
            x[a] = center[a] + t * d[a];
        }
        acc += w * sampler.try_sample(&x[..dim]).unwrap_or(0.0);
    }
    Ok(acc)
}

/// Spherical means at many centers, in input order.
pub fn spherical_means(
    sampler: &Sampler,
    centers: &[Vec<f64>],
    t: f64,
    quad: &SphereQuadrature,
) -> Result<Vec<f64>> {
    centers
        .par_iter()
        .map(|c| spherical_mean(sampler, c, t, quad))
        .collect()
}

/// Flat indices of lattice points at least `margin` away from every face.
pub fn interior_indices(geom: &Geometry, margin: f64) -> Vec<usize> {
    (0..geom.len())
        .filter(|&i| geom.distance_to_boundary(&geom.point_of_flat(i)) >= margin - 1e-9 * geom.spacing())
        .collect()
}

/// How the transform treats fields that do not vanish near the grid faces.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum GuardPolicy {
    /// Reject fields with `|f| > GUARD_TOLERANCE · ‖f‖_∞` within `R` of a face.
    #[default]
    Strict,
    /// Treat the field as zero outside the grid. Values within `R` of a face
    /// are then affected by the truncation.
    Truncate,
}

pub const GUARD_TOLERANCE: f64 = 1e-6;

/// `h = f ∗ δ_R` through the Bessel multiplier, with zero padding by `R`.
pub fn fixed_radius_transform(field: &GridField, kernel: &SphereKernel) -> Result<GridField> {
    fixed_radius_transform_with(field, kernel, GuardPolicy::Strict)
}

pub fn fixed_radius_transform_with(field: &GridField, kernel: &SphereKernel, policy: GuardPolicy) -> Result<GridField> {
    check_field(field, kernel)?;
    if policy == GuardPolicy::Strict {
        let edge = field.max_abs_near_boundary(kernel.radius());
        if edge > GUARD_TOLERANCE * field.max_abs() {
            return Err(Error::GuardBand(format!(
                "field reaches {edge:.3e} within R = {} of the grid faces (‖f‖_∞ = {:.3e})",
                kernel.radius(),
                field.max_abs()
            )));
        }
    }
    let mut spec = PaddedSpectrum::new(field, kernel.radius())?;
    spec.multiply(|xi| kernel.multiplier(xi));
    spec.inverse()
}

fn check_field(field: &GridField, kernel: &SphereKernel) -> Result<()> {
    if field.dim() != kernel.dim() {
        return config(format!(
            "field is {}-dimensional but the kernel is {}-dimensional",
            field.dim(),
            kernel.dim()
        ));
    }
    Ok(())
}

/// `Ψ(x) = j_{(n−2)/2}(λ₀|x|) χ_{|x|≤R}` with `λ₀ R` the `k`-th zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RepresentationKernel {
    kernel: SphereKernel,
    zero_index: usize,
    lambda0: f64,
}

/// Width of the centred Gaussian used to calibrate the representation
/// constant.
pub const REFERENCE_WIDTH: f64 = 0.15;

impl RepresentationKernel {
    /// `zero_index` counts from 1.
    pub fn new(kernel: SphereKernel, zero_index: usize) -> Result<Self> {
        if zero_index == 0 {
            return domain("zero index counts from 1");
        }
        let lambda0 = kernel.zero_rings(zero_index)?[zero_index - 1];
        Ok(Self {
            kernel,
            zero_index,
            lambda0,
        })
    }

    pub fn kernel(&self) -> &SphereKernel {
        &self.kernel
    }

    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }

    pub fn zero_index(&self) -> usize {
        self.zero_index
    }

    pub fn psi(&self, r: f64) -> f64 {
        if r > self.kernel.radius() {
            return 0.0;
        }
        normalized_j(self.kernel.multiplier_order(), self.lambda0 * r).expect("nonnegative argument")
    }

    /// `c = −1 / (λ₀ j'(λ₀R) ω_n R^{n−1})` from Green's identity on the ball.
    pub fn analytic_constant(&self) -> f64 {
        let r = self.kernel.radius();
        let n = self.kernel.dim();
        let slope = normalized_j_prime(self.kernel.multiplier_order(), self.lambda0 * r).expect("valid");
        -1.0 / (self.lambda0 * slope * sphere_area(n) * r.powi(n as i32 - 1))
    }

    /// Left side `f ∗ δ_R`.
    pub fn lhs(&self, field: &GridField) -> Result<GridField> {
        fixed_radius_transform(field, &self.kernel)
    }

    /// Right side without the constant: `(Δ + λ₀²)(f ∗ Ψ)`, with `f ∗ Ψ` the
    /// lattice sum and the Laplacian applied as the symbol `−|ξ|²`.
    pub fn rhs(&self, field: &GridField) -> Result<GridField> {
        check_field(field, &self.kernel)?;
        let mut spec = PaddedSpectrum::new(field, self.kernel.radius())?;
        let geom = spec.padded_geometry().clone();
        let mut k = crate::field::wrapped_kernel(&geom, self.kernel.radius(), |r| self.psi(r));
        crate::field::fft_in_place(&mut k, geom.shape());
        spec.multiply_spectrum(&k);
        let l2 = self.lambda0 * self.lambda0;
        spec.multiply(|xi| l2 - xi * xi);
        spec.inverse()
    }

    /// The least-squares constant `⟨L, R⟩ / ‖R‖²` on a centred Gaussian of
    /// width [`REFERENCE_WIDTH`] sampled on `geom`.
    pub fn calibrate(&self, geom: &Geometry) -> Result<f64> {
        let s2 = REFERENCE_WIDTH * REFERENCE_WIDTH;
        let reference = GridField::from_fn(geom.clone(), |x| {
            (-x.iter().map(|v| v * v).sum::<f64>() / (2.0 * s2)).exp()
        })?;
        let l = self.lhs(&reference)?;
        let r = self.rhs(&reference)?;
        let rr: f64 = r.values().iter().map(|v| v * v).sum();
        if rr == 0.0 {
            return domain("calibration right-hand side vanishes");
        }
        Ok(l.values().iter().zip(r.values()).map(|(a, b)| a * b).sum::<f64>() / rr)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RepresentationReport {
    /// `‖LHS − c·RHS‖ / ‖LHS‖`, or the absolute residual when degenerate.
    pub residual: f64,
    pub constant: f64,
    pub lhs_norm: f64,
    /// Set when `‖LHS‖` is too small to divide through.
    pub degenerate: bool,
}

/// Compares `f ∗ δ_R` with `c (Δ + λ₀²)(f ∗ Ψ)` for a frozen constant `c`.
pub fn representation_check(field: &GridField, rep: &RepresentationKernel, constant: f64) -> Result<RepresentationReport> {
    let l = rep.lhs(field)?;
    let r = rep.rhs(field)?;
    let diff = l.combine(1.0, &r, -constant)?.l2_norm();
    let lhs_norm = l.l2_norm();
    let scale = field.l2_norm();
    let degenerate = lhs_norm <= 1e-12 * scale || lhs_norm < 1e-300;
    let residual = if degenerate { diff } else { diff / lhs_norm };
    Ok(RepresentationReport {
        residual,
        constant,
        lhs_norm,
        degenerate,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RingReport {
    /// `λ_k`, `k = 1..=k_max`.
    pub radii: Vec<f64>,
    /// `max |ĥ|` on ring `k` divided by the global spectral maximum.
    pub maxima: Vec<f64>,
    /// `max |ĥ|` over the FFT bins, in continuous-transform units.
    pub global_max: f64,
    /// `max |j(R|ξ|)|` over the sampled band around each ring.
    pub multiplier_bound: Vec<f64>,
}

/// Largest `|ĥ(ξ)|` over `||ξ| − λ_k| ≤ ring_width`, `k ≤ k_max`.
///
/// `ĥ` is the continuous-frequency transform `Σ_x h(x) e^{−iξ·x} h^n`,
/// evaluated directly on the ring (`ring_width = 0`) or on three concentric
/// circles spanning the band. Sampling bins of the FFT instead would mix in
/// values a fraction of a bin away from the ring, where the multiplier is
/// already of order one on desk-sized grids.
pub fn spectral_ring_check(h: &GridField, kernel: &SphereKernel, k_max: usize, ring_width: f64) -> Result<RingReport> {
    check_field(h, kernel)?;
    if !(ring_width >= 0.0) {
        return domain(format!("ring width must be ≥ 0, got {ring_width}"));
    }
    let geom = h.geometry();
    let vol = geom.cell_volume();
    let spec = fft_forward(h);
    let global_max = spec.values().iter().fold(0.0_f64, |m, v| m.max(v.norm())) * geom.len() as f64 * vol;
    let radii = kernel.zero_rings(k_max)?;
    let half_diag = (0..geom.dim())
        .map(|a| (geom.shape()[a] as f64 * geom.spacing()).powi(2))
        .sum::<f64>()
        .sqrt();
    let mut maxima = Vec::with_capacity(k_max);
    let mut bounds = Vec::with_capacity(k_max);
    for &lam in &radii {
        let band: Vec<f64> = if ring_width > 0.0 {
            vec![(lam - ring_width).max(0.0), lam, lam + ring_width]
        } else {
            vec![lam]
        };
        let directions = ring_directions(geom.dim(), lam * half_diag)?;
        let mut m = 0.0_f64;
        for &rho in &band {
            let values: Vec<f64> = directions
                .par_iter()
                .map(|d| {
                    let xi: Vec<f64> = d.iter().map(|c| rho * c).collect();
                    dtft(h, &xi).norm() * vol
                })
                .collect();
            m = values.into_iter().fold(m, f64::max);
        }
        maxima.push(if global_max > 0.0 { m / global_max } else { 0.0 });
        bounds.push(band.iter().map(|&r| kernel.multiplier(r).abs()).fold(0.0, f64::max));
    }
    Ok(RingReport {
        radii,
        maxima,
        global_max,
        multiplier_bound: bounds,
    })
}

/// Enough directions to resolve the oscillation of `ĥ` along a ring whose
/// phase varies by about `phase_span` radians.
fn ring_directions(dim: usize, phase_span: f64) -> Result<Vec<Vec<f64>>> {
    let count = ((2.0 * phase_span).ceil() as usize).clamp(64, 2048);
    if dim == 2 {
        return Ok((0..count)
            .map(|k| {
                let t = PI * k as f64 / count as f64; // half circle: |ĥ(−ξ)| = |ĥ(ξ)|
                vec![t.cos(), t.sin()]
            })
            .collect());
    }
    let order = ((count as f64).sqrt().ceil() as usize).clamp(16, 96);
    let q = SphereQuadrature::new(3, order)?;
    Ok(q.iter().map(|(d, _)| d.to_vec()).collect())
}

/// `Σ_x h(x) e^{−iξ·x}` over the lattice.
fn dtft(h: &GridField, xi: &[f64]) -> Complex64 {
    let geom = h.geometry();
    let phases: Vec<Vec<Complex64>> = (0..geom.dim())
        .map(|a| {
            (0..geom.shape()[a])
                .map(|i| {
                    let x = geom.origin()[a] + i as f64 * geom.spacing();
                    Complex64::from_polar(1.0, -xi[a] * x)
                })
                .collect()
        })
        .collect();
    let v = h.values();
    let last = geom.shape()[geom.dim() - 1];
    let rows = v.chunks_exact(last).map(|row| {
        row.iter()
            .zip(&phases[geom.dim() - 1])
            .map(|(&f, &p)| p * f)
            .sum::<Complex64>()
    });
    if geom.dim() == 2 {
        rows.zip(&phases[0]).map(|(s, &p)| s * p).sum()
    } else {
        let n1 = geom.shape()[1];
        let rows: Vec<Complex64> = rows.collect();
        rows.chunks_exact(n1)
            .zip(&phases[0])
            .map(|(plane, &p0)| p0 * plane.iter().zip(&phases[1]).map(|(&s, &p1)| s * p1).sum::<Complex64>())
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Interpolation;

    fn gaussian(geom: &Geometry, sigma: f64, center: &[f64]) -> GridField {
        let c = center.to_vec();
        GridField::from_fn(geom.clone(), move |x| {
            (-x.iter().zip(&c).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / (2.0 * sigma * sigma)).exp()
        })
        .unwrap()
    }

    #[test]
    fn multiplier_is_one_at_dc() {
        for dim in [2, 3] {
            let k = SphereKernel::new(dim, 0.7).unwrap();
            assert_eq!(k.multiplier(0.0), 1.0);
        }
        assert!(SphereKernel::new(2, -1.0).is_err());
        assert!(SphereKernel::new(4, 1.0).is_err());
    }

    #[test]
    fn constant_means() {
        let g = Geometry::centered(2, 32, 0.1).unwrap();
        let f = GridField::new(g, vec![2.5; 1024]).unwrap();
        let s = Sampler::new(&f, Interpolation::CubicSpline);
        let q = SphereQuadrature::new(2, 16).unwrap();
        let m = spherical_mean(&s, &[0.1, -0.2], 0.8, &q).unwrap();
        assert!((m - 2.5).abs() < 1e-12);
        assert!(matches!(spherical_mean(&s, &[0.0, 0.0], 1.5, &q), Err(Error::OutOfGrid(_))));
    }

    #[test]
    fn squared_norm_means() {
        let g = Geometry::centered(3, 32, 0.1).unwrap();
        let f = GridField::from_fn(g, |x| x.iter().map(|v| v * v).sum()).unwrap();
        let s = Sampler::new(&f, Interpolation::Linear);
        let q = SphereQuadrature::new(3, 24).unwrap();
        for t in [0.3, 0.77, 1.2] {
            let m = spherical_mean(&s, &[0.0; 3], t, &q).unwrap();
            // multilinear overshoot on a quadratic is at most n·h²/4
            assert!((m - t * t).abs() <= 3.0 * 0.01 / 4.0, "t = {t}: {m}");
        }
    }

    #[test]
    fn fft_transform_matches_quadrature() {
        let g = Geometry::centered(2, 128, 4.0 / 128.0).unwrap();
        let f = gaussian(&g, 0.15, &[0.1, -0.05]);
        let kernel = SphereKernel::new(2, 0.7).unwrap();
        let h = fixed_radius_transform(&f, &kernel).unwrap();
        let s = Sampler::new(&f, Interpolation::CubicSpline);
        let q = SphereQuadrature::new(2, 256).unwrap();
        let idx = interior_indices(&g, 0.7 + 3.0 * g.spacing());
        let mut err = 0.0_f64;
        for &i in idx.iter().step_by(7) {
            let m = spherical_mean(&s, &g.point_of_flat(i), 0.7, &q).unwrap();
            err = err.max((m - h.values()[i]).abs());
        }
        assert!(err < 1e-3 * h.max_abs(), "{err}");
    }

    #[test]
    fn transform_preserves_mean_and_constants() {
        let g = Geometry::centered(2, 64, 0.05).unwrap();
        let f = gaussian(&g, 0.1, &[0.0, 0.0]);
        let h = fixed_radius_transform(&f, &SphereKernel::new(2, 0.5).unwrap()).unwrap();
        let mf: f64 = f.values().iter().sum();
        let mh: f64 = h.values().iter().sum();
        assert!((mf - mh).abs() < 1e-12 * mf);

        let c = GridField::new(g.clone(), vec![1.5; g.len()]).unwrap();
        assert!(matches!(
            fixed_radius_transform(&c, &SphereKernel::new(2, 0.5).unwrap()),
            Err(Error::GuardBand(_))
        ));
    }

    #[test]
    fn translation_covariance() {
        let g = Geometry::centered(2, 96, 0.04).unwrap();
        let k = SphereKernel::new(2, 0.6).unwrap();
        let shift = 5usize;
        let a = gaussian(&g, 0.12, &[0.0, 0.0]);
        let b = gaussian(&g, 0.12, &[shift as f64 * 0.04, 0.0]);
        let ha = fixed_radius_transform(&a, &k).unwrap();
        let hb = fixed_radius_transform(&b, &k).unwrap();
        for i in 10..80 {
            for j in 10..80 {
                let d = (ha.get(&[i, j]) - hb.get(&[i + shift, j])).abs();
                assert!(d < 1e-12, "({i},{j}): {d}");
            }
        }
    }

    #[test]
    fn representation_constant_matches_green_identity() {
        let g = Geometry::centered(2, 128, 4.0 / 128.0).unwrap();
        for zero in [1, 2] {
            let rep = RepresentationKernel::new(SphereKernel::new(2, 0.7).unwrap(), zero).unwrap();
            let c = rep.calibrate(&g).unwrap();
            let a = rep.analytic_constant();
            assert!((c - a).abs() < 2e-2 * a.abs(), "zero {zero}: {c} vs {a}");
        }
    }

    #[test]
    fn zero_field_is_degenerate_with_zero_residual() {
        let g = Geometry::centered(2, 64, 0.0625).unwrap();
        let rep = RepresentationKernel::new(SphereKernel::new(2, 0.7).unwrap(), 1).unwrap();
        let r = representation_check(&GridField::zeros(g), &rep, 1.0).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.residual, 0.0);
    }

    #[test]
    fn rings_vanish_after_transform_only() {
        let g = Geometry::centered(2, 128, 4.0 / 128.0).unwrap();
        let f = gaussian(&g, 0.1, &[0.05, 0.0]);
        let k = SphereKernel::new(2, 0.7).unwrap();
        let h = fixed_radius_transform(&f, &k).unwrap();
        let rt = spectral_ring_check(&h, &k, 3, 0.0).unwrap();
        let rf = spectral_ring_check(&f, &k, 3, 0.0).unwrap();
        for i in 0..3 {
            assert!(rt.maxima[i] < 1e-2, "{:?}", rt.maxima);
            assert!(rf.maxima[i] > 1e-1, "{:?}", rf.maxima);
        }
        let z = spectral_ring_check(&GridField::zeros(g), &k, 3, 0.0).unwrap();
        assert!(z.maxima.iter().all(|&m| m == 0.0));
    }

    #[test]
    fn dtft_at_a_bin_matches_fft() {
        let g = Geometry::new(vec![16, 12], 0.2, vec![-1.0, 0.4]).unwrap();
        let f = GridField::from_fn(g.clone(), |x| (x[0] * 2.0).sin() * x[1]).unwrap();
        let spec = fft_forward(&f);
        let flat = g.flat_index(&[3, 10]);
        let xi = spec.frequency(flat);
        // the FFT references index 0, the DTFT physical coordinates
        let shift: f64 = xi.iter().zip(g.origin()).map(|(k, o)| k * o).sum();
        let want = spec.values()[flat] * g.len() as f64 * Complex64::from_polar(1.0, -shift);
        let got = dtft(&f, &xi);
        assert!((got - want).norm() < 1e-10 * want.norm().max(1.0));
    }
}
