//! Abel-type transforms between ridge profiles and radializations.
//!
//! For a ridge function `g(⟨x, e⟩)` on `R^n` the radialization is
//! `f = A g` with
//!
//! ```text
//! f(r) = 2 (ω_{n−1}/ω_n) r^{2−n} ∫₀^r (r² − p²)^{(n−3)/2} g(p) dp,
//! ```
//!
//! where `ω_n` is the area of the unit sphere in `R^n`. Substituting
//! `p = r sin φ` removes both the `r^{2−n}` factor and the endpoint
//! singularity of the `n = 2` kernel:
//! `f(r) = 2 (ω_{n−1}/ω_n) ∫₀^{π/2} cos^{n−2}φ g(r sin φ) dφ`.
//!
//! The inverse applies `(d/du)^{n−1}`, `u = p²`, to
//! `G(u) = ∫₀^p r^{n−1} (p² − r²)^{(n−3)/2} f(r) dr` by finite differences.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{config, domain, Error, Result};
use crate::field::{unit_gauss_legendre, Geometry, GridField, Interpolation, RadialProfile, Sampler, SphereQuadrature};
use crate::transform::{sphere_area, spherical_mean};

/// Smallest number of samples in an [`EvenProfile`].
pub const MIN_EVEN_COUNT: usize = 32;

/// Gauss–Legendre nodes per angular integral.
const ANGLE_NODES: usize = 48;

/// Relative disagreement between the two difference stencils that triggers
/// the conditioning warning.
pub const CONDITIONING_LIMIT: f64 = 1e-3;

/// A function of one variable sampled on `[0, p_max]` and extended evenly.
#[derive(Clone, Debug, PartialEq)]
pub struct EvenProfile(RadialProfile);

impl EvenProfile {
    pub fn new(p_max: f64, values: Vec<f64>) -> Result<Self> {
        if values.len() < MIN_EVEN_COUNT {
            return config(format!(
                "even profiles need at least {MIN_EVEN_COUNT} samples, got {}",
                values.len()
            ));
        }
        Ok(Self(RadialProfile::new(p_max, values)?))
    }

    pub fn from_fn(p_max: f64, count: usize, g: impl Fn(f64) -> f64) -> Result<Self> {
        let step = p_max / (count.max(2) - 1) as f64;
        Self::new(p_max, (0..count).map(|i| g(i as f64 * step)).collect())
    }

    pub fn p_max(&self) -> f64 {
        self.0.r_max()
    }

    pub fn count(&self) -> usize {
        self.0.count()
    }

    pub fn values(&self) -> &[f64] {
        self.0.values()
    }

    pub fn step(&self) -> f64 {
        self.0.step()
    }

    pub fn point(&self, i: usize) -> f64 {
        self.0.radius(i)
    }

    /// `g(p)`, even in `p` and zero for `|p| > p_max`.
    pub fn eval(&self, p: f64) -> f64 {
        self.0.eval(p)
    }

    pub fn as_profile(&self) -> &RadialProfile {
        &self.0
    }

    pub fn max_abs(&self) -> f64 {
        self.0.max_abs()
    }

    pub fn to_csv(&self) -> String {
        self.0.to_csv()
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let p = RadialProfile::from_csv(text)?;
        Self::new(p.r_max(), p.values().to_vec())
    }
}

impl From<EvenProfile> for RadialProfile {
    fn from(g: EvenProfile) -> Self {
        g.0
    }
}

/// Dimension of the transform pair. `n = 3` is the regular case; `n = 2` has
/// an inverse-square-root endpoint singularity and must be asked for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AbelParams {
    dim: usize,
    singular_quadrature: bool,
}

impl AbelParams {
    pub fn three() -> Self {
        Self {
            dim: 3,
            singular_quadrature: false,
        }
    }

    /// `n = 2` with `singular_quadrature` set is accepted; without it the
    /// transforms return [`Error::Unsupported`].
    pub fn new(dim: usize, singular_quadrature: bool) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return config(format!("Abel transforms are implemented for n = 2, 3, got {dim}"));
        }
        Ok(Self {
            dim,
            singular_quadrature,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `ω_{n−1}/ω_n` with `ω_n` the area of `S^{n−1} ⊂ R^n`.
    pub fn omega_ratio(&self) -> f64 {
        sphere_area(self.dim - 1) / sphere_area(self.dim)
    }

    fn check(&self) -> Result<()> {
        if self.dim == 2 && !self.singular_quadrature {
            return Err(Error::Unsupported(
                "n = 2 needs the endpoint-weighted quadrature; enable it explicitly".into(),
            ));
        }
        Ok(())
    }
}

impl Default for AbelParams {
    fn default() -> Self {
        Self::three()
    }
}

/// Gauss–Legendre nodes and weights on `[a, b]`.
fn gauss_on(a: f64, b: f64, nodes: &[(f64, f64)]) -> impl Iterator<Item = (f64, f64)> + '_ {
    nodes.iter().map(move |&(x, w)| (a + (b - a) * x, (b - a) * w))
}

/// `f = A g` on the sample grid of `g`.
pub fn abel_forward(g: &EvenProfile, params: &AbelParams) -> Result<RadialProfile> {
    params.check()?;
    let nodes = unit_gauss_legendre(ANGLE_NODES);
    let scale = 2.0 * params.omega_ratio();
    let cos_power = (params.dim - 2) as i32;
    let values = (0..g.count())
        .into_par_iter()
        .map(|i| {
            let r = g.point(i);
            scale
                * gauss_on(0.0, FRAC_PI_2, &nodes)
                    .map(|(phi, w)| w * phi.cos().powi(cos_power) * g.eval(r * phi.sin()))
                    .sum::<f64>()
        })
        .collect();
    RadialProfile::new(g.p_max(), values)
}

/// `G(u) = ∫₀^{√u} r^{n−1} (u − r²)^{(n−3)/2} f(r) dr`
/// `= u^{n−3/2} ∫₀^{π/2} sin^{n−1}φ cos^{n−2}φ f(√u sin φ) dφ`.
fn abel_potential(f: &RadialProfile, dim: usize, u: f64, nodes: &[(f64, f64)]) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    let p = u.sqrt();
    let s = dim as i32;
    let integral: f64 = gauss_on(0.0, FRAC_PI_2, nodes)
        .map(|(phi, w)| w * phi.sin().powi(s - 1) * phi.cos().powi(s - 2) * f.eval(p * phi.sin()))
        .sum();
    u.powf(dim as f64 - 1.5) * integral
}

/// Weights of the `order`-th derivative at 0 from samples at `offsets`
/// (Fornberg's recursion).
fn fd_weights(order: usize, offsets: &[f64]) -> Vec<f64> {
    let n = offsets.len();
    let mut c = vec![vec![0.0; order + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = offsets[0];
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = offsets[i];
        for j in 0..i {
            let c3 = offsets[i] - offsets[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}

/// Result of [`abel_inverse`].
#[derive(Clone, Debug)]
pub struct AbelInverse {
    pub profile: EvenProfile,
    /// Largest relative disagreement between the high- and low-order
    /// difference stencils, over points where `|g|` is not negligible.
    pub stencil_disagreement: f64,
    /// Set when `stencil_disagreement > CONDITIONING_LIMIT`.
    pub ill_conditioned: bool,
}

/// Relative step in `u` for the difference stencils.
const U_STEP: f64 = 0.02;

/// `g = A⁻¹ f` on the sample grid of `f`.
///
/// Derivatives in `u = p²` use 7-point stencils with step `0.02 u`, central
/// where the stencil fits below `r_max²` and one-sided with a quarter of the
/// step otherwise; a 5-point
/// stencil is evaluated alongside as a conditioning probe. `g(0) = f(0)`.
pub fn abel_inverse(f: &RadialProfile, params: &AbelParams) -> Result<AbelInverse> {
    params.check()?;
    if f.count() < MIN_EVEN_COUNT {
        return config(format!("abel_inverse needs at least {MIN_EVEN_COUNT} samples"));
    }
    let dim = params.dim;
    let order = dim - 1;
    // 2^{n−1}/(n−2)!, and (n−2)! = 1 for n = 2, 3
    let prefactor = (1u64 << order) as f64;
    let nodes = unit_gauss_legendre(ANGLE_NODES);
    let u_max = f.r_max() * f.r_max();
    let rows: Vec<(f64, f64)> = (0..f.count())
        .into_par_iter()
        .map(|i| {
            if i == 0 {
                return (f.values()[0], f.values()[0]);
            }
            let p = f.radius(i);
            let u = p * p;
            let central_fits = u * (1.0 + 3.0 * U_STEP) <= u_max * (1.0 + 1e-12);
            // one-sided stencils lose an order, so they take a finer step
            let du = if central_fits { U_STEP * u } else { 0.25 * U_STEP * u };
            let (hi, lo): (Vec<f64>, Vec<f64>) = if central_fits {
                ((-3..=3).map(f64::from).collect(), (-2..=2).map(f64::from).collect())
            } else {
                ((-6..=0).map(f64::from).collect(), (-4..=0).map(f64::from).collect())
            };
            let apply = |offsets: &[f64]| -> f64 {
                let w = fd_weights(order, offsets);
                let sum: f64 = offsets
                    .iter()
                    .zip(&w)
                    .map(|(&k, &wk)| wk * abel_potential(f, dim, u + k * du, &nodes))
                    .sum();
                prefactor * p * sum / du.powi(order as i32)
            };
            (apply(&hi), apply(&lo))
        })
        .collect();
    let values: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let disagreement = rows
        .iter()
        .filter(|(a, _)| a.abs() > 1e-6 * scale)
        .map(|(a, b)| (a - b).abs() / a.abs())
        .fold(0.0_f64, f64::max);
    Ok(AbelInverse {
        profile: EvenProfile::new(f.r_max(), values)?,
        stencil_disagreement: disagreement,
        ill_conditioned: disagreement > CONDITIONING_LIMIT,
    })
}

/// `(1 − p²)₊^{(n−3)/2}` sampled on `[0, 1]`.
///
/// For `n = 2` the sample at `p = 1` holds the mean of the kernel over the
/// last half cell, `(π/2 − asin(1 − d))/d`, which keeps it finite.
pub fn ridge_convolution_kernel(params: &AbelParams, count: usize) -> Result<EvenProfile> {
    params.check()?;
    let step = 1.0 / (count.max(2) - 1) as f64;
    EvenProfile::from_fn(1.0, count, |p| match params.dim {
        3 => 1.0,
        _ if p >= 1.0 - 0.5 * step => {
            let d = 0.5 * step;
            (FRAC_PI_2 - (1.0 - d).asin()) / d
        }
        _ => 1.0 / (1.0 - p * p).sqrt(),
    })
}

/// `(g ∗₁ k)(s) = ∫ g(s − t) (1 − t²)₊^{(n−3)/2} dt` on the sample grid of
/// `g`, with `t = sin φ`.
pub fn ridge_convolve(g: &EvenProfile, params: &AbelParams) -> Result<EvenProfile> {
    params.check()?;
    let nodes = unit_gauss_legendre(2 * ANGLE_NODES);
    let cos_power = (params.dim - 2) as i32;
    let values = (0..g.count())
        .into_par_iter()
        .map(|i| {
            let s = g.point(i);
            gauss_on(-FRAC_PI_2, FRAC_PI_2, &nodes)
                .map(|(phi, w)| w * phi.cos().powi(cos_power) * g.eval(s - phi.sin()))
                .sum()
        })
        .collect();
    EvenProfile::new(g.p_max(), values)
}

/// Outcome of [`convolution_identity_check`].
#[derive(Clone, Debug, Serialize)]
pub struct ConvolutionIdentityReport {
    pub radii: Vec<f64>,
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    /// `lhs/rhs` at the radii kept for the fit.
    pub ratios: Vec<f64>,
    /// Mean of `ratios`.
    pub constant: f64,
    /// `(max − min)/|constant|` over `ratios`.
    pub spread: f64,
    /// Radii where `|rhs|` is negligible and no ratio was formed.
    pub excluded: Vec<f64>,
}

/// Compares `(A g) ∗ δ_S` with `A(g ∗₁ (1 − p²)₊^{(n−3)/2})` at the given
/// radii, for the unit sphere.
///
/// The left side is computed on an `n`-dimensional grid of spacing `spacing`:
/// `A g` is sampled as a radial field and averaged over unit spheres centred
/// on the first axis. The right side is purely one-dimensional. `g` must be
/// sampled far enough that `A g` covers the grid corners.
pub fn convolution_identity_check(
    g: &EvenProfile,
    params: &AbelParams,
    radii: &[f64],
    spacing: f64,
) -> Result<ConvolutionIdentityReport> {
    params.check()?;
    let dim = params.dim;
    let Some(r_top) = radii.iter().copied().reduce(f64::max) else {
        return config("no sample radii");
    };
    if radii.iter().any(|r| !(*r >= 0.0)) {
        return domain("sample radii must be ≥ 0");
    }
    let half = r_top + 1.0 + 4.0 * spacing;
    if g.p_max() < half * (dim as f64).sqrt() {
        return domain(format!(
            "profile reaches {} but the grid corner sits at {}",
            g.p_max(),
            half * (dim as f64).sqrt()
        ));
    }
    let f = abel_forward(g, params)?;
    let n = 2 * (half / spacing).ceil() as usize + 1;
    let geom = Geometry::centered(dim, n, spacing)?;
    let field = GridField::from_fn(geom, |x| f.eval(x.iter().map(|v| v * v).sum::<f64>().sqrt()))?;
    let sampler = Sampler::new(&field, Interpolation::CubicSpline);
    let quad = SphereQuadrature::new(dim, if dim == 2 { 256 } else { 96 })?;
    let lhs = radii
        .par_iter()
        .map(|&r| {
            let mut c = vec![0.0; dim];
            c[0] = r;
            spherical_mean(&sampler, &c, 1.0, &quad)
        })
        .collect::<Result<Vec<f64>>>()?;
    let conv = ridge_convolve(g, params)?;
    let af = abel_forward(&conv, params)?;
    let rhs: Vec<f64> = radii.iter().map(|&r| af.eval(r)).collect();
    let rhs_scale = rhs.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let mut ratios = Vec::new();
    let mut excluded = Vec::new();
    for ((&r, &l), &q) in radii.iter().zip(&lhs).zip(&rhs) {
        if q.abs() <= 1e-9 * rhs_scale || rhs_scale == 0.0 {
            excluded.push(r);
        } else {
            ratios.push(l / q);
        }
    }
    let (constant, spread) = if ratios.is_empty() {
        (0.0, 0.0)
    } else {
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (mean, (hi - lo) / mean.abs())
    };
    Ok(ConvolutionIdentityReport {
        radii: radii.to_vec(),
        lhs,
        rhs,
        ratios,
        constant,
        spread,
        excluded,
    })
}

/// Outcome of [`titchmarsh_forward_check`].
#[derive(Clone, Debug, Serialize)]
pub struct TitchmarshReport {
    /// `inf supp g − 1`.
    pub expected: f64,
    /// First grid point with `|k(s)| > threshold · max|k|`.
    pub onset: Option<f64>,
    pub step: f64,
    /// `|onset − expected|` in grid steps.
    pub error_steps: Option<f64>,
    /// `k` vanished identically.
    pub degenerate: bool,
}

/// Relative threshold for the onset of `k`.
pub const ONSET_THRESHOLD: f64 = 1e-9;

/// Locates the onset of `k(s) = ∫ g(p) (1 − |p − s|²)₊^{(n−3)/2} dp` for `g`
/// supported in `[support.0, support.1]`, on `s = 0, step, 2·step, …` up to
/// `support.1 + 1`.
///
/// Integration runs over the declared support only, so interpolation
/// ringing of `g` outside it cannot move the onset.
pub fn titchmarsh_forward_check(
    g: &EvenProfile,
    support: (f64, f64),
    params: &AbelParams,
    step: f64,
) -> Result<TitchmarshReport> {
    params.check()?;
    let (a, b) = support;
    if !(a >= 0.0 && b > a && b <= g.p_max() * (1.0 + 1e-12)) {
        return domain(format!("declared support [{a}, {b}] is not inside [0, {}]", g.p_max()));
    }
    if !(step > 0.0) {
        return config("onset grid step must be positive");
    }
    let nodes = unit_gauss_legendre(ANGLE_NODES);
    let cos_power = (params.dim - 2) as i32;
    let count = ((b + 1.0) / step).ceil() as usize + 1;
    let k: Vec<f64> = (0..count)
        .into_par_iter()
        .map(|i| {
            let s = i as f64 * step;
            let lo = (a - s).max(-1.0);
            let hi = (b - s).min(1.0);
            if lo >= hi {
                return 0.0;
            }
            gauss_on(lo.asin(), hi.asin(), &nodes)
                .map(|(phi, w)| w * phi.cos().powi(cos_power) * g.eval(s + phi.sin()))
                .sum()
        })
        .collect();
    let peak = k.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let expected = a - 1.0;
    if peak == 0.0 {
        return Ok(TitchmarshReport {
            expected,
            onset: None,
            step,
            error_steps: None,
            degenerate: true,
        });
    }
    let onset = k
        .iter()
        .position(|v| v.abs() > ONSET_THRESHOLD * peak)
        .map(|i| i as f64 * step);
    Ok(TitchmarshReport {
        expected,
        onset,
        step,
        error_steps: onset.map(|s| (s - expected.max(0.0)).abs() / step),
        degenerate: false,
    })
}

/// Grid and tolerances for [`local_theorem_pipeline`].
#[derive(Clone, Debug, Serialize)]
pub struct LocalConfig {
    pub spacing: f64,
    /// Means below `mean_tol · ‖f‖_∞` count as vanishing.
    pub mean_tol: f64,
    /// Profiles below `support_tol · ‖f‖_∞` count as vanishing.
    pub support_tol: f64,
    /// The conclusion is checked on `[0, 1 + ε − margin]`.
    pub margin: f64,
    /// Centers are placed on shells of these fractions of `ε`.
    pub shells: Vec<f64>,
    pub quadrature_order: usize,
}

impl Default for LocalConfig {
    fn default() -> Self {
        Self {
            spacing: 0.025,
            mean_tol: 1e-10,
            support_tol: 1e-8,
            margin: 0.05,
            shells: vec![0.0, 0.25, 0.5, 0.75, 1.0],
            quadrature_order: 48,
        }
    }
}

/// Verdict of [`local_theorem_pipeline`].
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum LocalVerdict {
    /// Means vanish and so does `f` on `[0, 1 + ε − margin]`.
    Pass { max_mean: f64, max_g: f64, max_f: f64 },
    /// Some unit sphere centred in `B(0, ε)` carries a nonzero mean.
    HypothesisViolated { center: Vec<f64>, mean: f64 },
    /// Means vanish but `f` does not: a counterexample to the local theorem,
    /// which can only come from a numerical defect.
    ConclusionViolated { radius: f64, value: f64 },
}

/// Runs the local support-propagation argument forward on a radial profile
/// `f` that vanishes on `[0, 1]`, in `R^n` with `n = params.dim()`.
///
/// Spherical means of radius 1 are measured on a grid with multilinear
/// interpolation, which keeps vanishing exact where the sphere stays clear of
/// `supp f` by a lattice diagonal. If they vanish, `g = A⁻¹ f` is formed and
/// both `g` and `A g` are required to vanish on `[0, 1 + ε − margin]`.
pub fn local_theorem_pipeline(f: &RadialProfile, eps: f64, params: &AbelParams, cfg: &LocalConfig) -> Result<LocalVerdict> {
    params.check()?;
    let dim = params.dim;
    if !(eps > 0.0) {
        return domain(format!("ε must be positive, got {eps}"));
    }
    let norm = f.max_abs();
    let inner = f
        .radii()
        .iter()
        .zip(f.values())
        .filter(|(r, _)| **r <= 1.0)
        .fold(0.0_f64, |m, (_, v)| m.max(v.abs()));
    if inner > cfg.support_tol * norm {
        return domain("f must vanish on [0, 1]");
    }
    if norm == 0.0 {
        return Ok(LocalVerdict::Pass {
            max_mean: 0.0,
            max_g: 0.0,
            max_f: 0.0,
        });
    }
    let half = 1.0 + eps + 4.0 * cfg.spacing;
    let n = 2 * (half / cfg.spacing).ceil() as usize + 1;
    let geom = Geometry::centered(dim, n, cfg.spacing)?;
    let field = GridField::from_fn(geom, |x| f.eval(x.iter().map(|v| v * v).sum::<f64>().sqrt()))?;
    let sampler = Sampler::new(&field, Interpolation::Linear);
    let quad = SphereQuadrature::new(dim, cfg.quadrature_order)?;
    let centers = local_centers(dim, eps, &cfg.shells);
    let means = centers
        .par_iter()
        .map(|c| spherical_mean(&sampler, c, 1.0, &quad))
        .collect::<Result<Vec<f64>>>()?;
    let (worst, max_mean) = means
        .iter()
        .enumerate()
        .fold((0, 0.0_f64), |(wi, wm), (i, m)| if m.abs() > wm { (i, m.abs()) } else { (wi, wm) });
    if max_mean > cfg.mean_tol * norm {
        return Ok(LocalVerdict::HypothesisViolated {
            center: centers[worst].clone(),
            mean: means[worst],
        });
    }
    let reach = 1.0 + eps - cfg.margin;
    let g = abel_inverse(f, params)?.profile;
    let back = abel_forward(&g, params)?;
    let on_ball = |values: &[f64], step: f64| {
        values
            .iter()
            .enumerate()
            .take_while(|(i, _)| *i as f64 * step <= reach)
            .fold((0.0_f64, 0.0_f64), |(r, m), (i, v)| {
                if v.abs() > m {
                    (i as f64 * step, v.abs())
                } else {
                    (r, m)
                }
            })
    };
    let (_, max_g) = on_ball(g.values(), g.step());
    let (r_back, max_back) = on_ball(back.values(), back.step());
    let (r_f, max_f) = on_ball(f.values(), f.step());
    let limit = cfg.support_tol * norm;
    if max_g > limit || max_back > limit || max_f > limit {
        let (radius, value) = if max_f >= max_back { (r_f, max_f) } else { (r_back, max_back) };
        return Ok(LocalVerdict::ConclusionViolated { radius, value });
    }
    Ok(LocalVerdict::Pass { max_mean, max_g, max_f })
}

/// The origin plus axis and diagonal directions on each shell `s·ε`.
fn local_centers(dim: usize, eps: f64, shells: &[f64]) -> Vec<Vec<f64>> {
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    for a in 0..dim {
        for sign in [-1.0, 1.0] {
            let mut d = vec![0.0; dim];
            d[a] = sign;
            dirs.push(d);
        }
    }
    let corners = 1usize << dim;
    for m in 0..corners {
        let d: Vec<f64> = (0..dim)
            .map(|a| if m >> a & 1 == 1 { 1.0 } else { -1.0 } / (dim as f64).sqrt())
            .collect();
        dirs.push(d);
    }
    let mut out = vec![vec![0.0; dim]];
    for &s in shells.iter().filter(|&&s| s > 0.0) {
        for d in &dirs {
            out.push(d.iter().map(|v| v * s * eps).collect());
        }
    }
    out
}
