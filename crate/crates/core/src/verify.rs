//! Reproducible verification suites.
//!
//! Every suite is a pure function of its [`VerifyConfig`]; randomized
//! placements draw from a ChaCha stream seeded by `seed`, so identical
//! configurations give byte-identical reports.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::abel::{
    abel_forward, abel_inverse, convolution_identity_check, local_theorem_pipeline, titchmarsh_forward_check,
    AbelParams, EvenProfile, LocalConfig, LocalVerdict,
};
use crate::error::{config, Result};
use crate::field::{radialize, Geometry, GridField, Interpolation, RadialProfile, Sampler, SphereQuadrature};
use crate::geometry::{center_set, r_convex, BallElement, DomainMask, RConvexVerdict};
use crate::inversion::{
    deconvolve, lp_annulus_tails, rconvex_region_growing, support_theorem_harness, zalcman_field,
    CounterexampleSpec, HarnessConfig, RegularizationPolicy, SupportVerdict, WalkVerdict,
};
use crate::phantom::{bump, disk_mask, gaussian, square_mask, two_disk_mask, LShape};
use crate::report::{float, Report};
use crate::specfun::{bessel_j, bessel_zeros, normalized_j, BesselOrder};
use crate::transform::{
    fixed_radius_transform, interior_indices, representation_check, spectral_ring_check, spherical_mean,
    RepresentationKernel, SphereKernel,
};

/// Suites reachable from `verify <suite>`; `all` runs them in this order.
pub const SUITES: &[&str] = &[
    "specfun",
    "transform",
    "abel",
    "local",
    "zalcman",
    "support",
    "rconvex",
    "rconvex-walk",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Dimension of the transform suite; the others fix their own.
    pub dim: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { seed: 7, dim: 2 }
    }
}

fn rng_for(cfg: &VerifyConfig, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(cfg.seed);
    r.set_stream(stream);
    r
}

fn base_report(name: &str, cfg: &VerifyConfig) -> Report {
    let mut r = Report::new(name);
    r.config("seed", cfg.seed).config("dim", cfg.dim);
    r
}

pub fn run(name: &str, cfg: &VerifyConfig) -> Result<Report> {
    match name {
        "specfun" => specfun(cfg),
        "transform" => transform(cfg),
        "abel" => abel(cfg),
        "local" => local(cfg),
        "zalcman" => zalcman(cfg),
        "support" => support(cfg),
        "rconvex" => rconvex(cfg),
        "rconvex-walk" => rconvex_walk(cfg),
        "all" => all(cfg),
        other => config(format!("unknown suite `{other}`; expected one of {SUITES:?} or all")),
    }
}

pub fn all(cfg: &VerifyConfig) -> Result<Report> {
    let mut r = base_report("all", cfg);
    for name in SUITES {
        r.absorb(run(name, cfg)?);
    }
    Ok(r)
}

fn max_abs_diff(a: impl IntoIterator<Item = f64>, b: impl IntoIterator<Item = f64>) -> f64 {
    a.into_iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn specfun(cfg: &VerifyConfig) -> Result<Report> {
    let mut r = base_report("specfun", cfg);
    let half = BesselOrder::new(0.5)?;
    let xs: Vec<f64> = (1..=5000).map(|i| i as f64 * 0.01).collect();
    let mut err = 0.0_f64;
    for &x in &xs {
        err = err.max((normalized_j(half, x)? - x.sin() / x).abs());
    }
    r.metric("j_half_max_error", err);
    r.check("j_half_matches_sinc", err <= 1e-12);

    let zeros = bessel_zeros(half, 10, 1e-13)?;
    let zerr = max_abs_diff(zeros.zeros().iter().copied(), (1..=10).map(|k| k as f64 * PI));
    r.metric("half_order_zero_error", zerr);
    r.check("half_order_zeros_are_k_pi", zerr <= 1e-10);

    let j0 = BesselOrder::new(0.0)?;
    let oracle = bisect(|x| bessel_j(j0, x).unwrap(), 2.0, 3.0);
    let z0 = bessel_zeros(j0, 1, 1e-13)?.zeros()[0];
    r.metric("j0_first_zero", z0);
    r.metric("j0_first_zero_error", (z0 - oracle).abs());
    r.check("j0_first_zero_matches_bisection", (z0 - oracle).abs() <= 1e-10);
    Ok(r)
}

pub fn transform(cfg: &VerifyConfig) -> Result<Report> {
    let mut r = base_report("transform", cfg);
    let dim = cfg.dim;
    if dim != 2 && dim != 3 {
        return config(format!("the transform suite runs in 2 or 3 dimensions, got {dim}"));
    }
    let n = if dim == 2 { 128 } else { 48 };
    let radius = 0.7;
    let geom = Geometry::centered(dim, n, 4.0 / n as f64)?;
    let origin = vec![0.0; dim];
    let f = gaussian(&geom, 0.15, &origin)?;
    let kernel = SphereKernel::new(dim, radius)?;
    let h = fixed_radius_transform(&f, &kernel)?;

    // multiplier against direct quadrature on a sparse interior subset
    let sampler = Sampler::new(&f, Interpolation::CubicSpline);
    let quad = SphereQuadrature::new(dim, if dim == 2 { 256 } else { 64 })?;
    let idx = interior_indices(&geom, radius + 3.0 * geom.spacing());
    let stride = if dim == 2 { 3 } else { 97 };
    let mut dev = 0.0_f64;
    for &i in idx.iter().step_by(stride) {
        let m = spherical_mean(&sampler, &geom.point_of_flat(i), radius, &quad)?;
        dev = dev.max((m - h.values()[i]).abs());
    }
    let rel = dev / h.max_abs();
    r.metric("multiplier_vs_quadrature", rel);
    r.check("multiplier_matches_quadrature", rel <= 1e-3);

    // representation residual under refinement
    if dim == 2 {
        let mut residuals = Vec::new();
        for n in [128, 256] {
            let g = Geometry::centered(2, n, 4.0 / n as f64)?;
            let phantom = gaussian(&g, 0.1, &[0.13, -0.07])?;
            let mut row = Vec::new();
            for zero in [1, 2] {
                let rep = RepresentationKernel::new(kernel, zero)?;
                let c = rep.calibrate(&g)?;
                row.push(representation_check(&phantom, &rep, c)?.residual);
            }
            residuals.push(row);
        }
        r.metric("representation_residuals", &residuals);
        for z in 0..2 {
            r.check(&format!("representation_zero{}_small", z + 1), residuals[1][z] <= 1e-2);
            r.check(
                &format!("representation_zero{}_converges", z + 1),
                residuals[0][z] >= 2.0 * residuals[1][z],
            );
        }
    }

    let rings = spectral_ring_check(&h, &kernel, 3, 0.0)?;
    let control = spectral_ring_check(&f, &kernel, 3, 0.0)?;
    r.metric("ring_maxima", &rings.maxima);
    r.metric("ring_maxima_control", &control.maxima);
    r.check("rings_vanish", rings.maxima.iter().all(|&m| m <= 1e-2));
    r.check("control_rings_visible", control.maxima.iter().all(|&m| m >= 1e-1));
    Ok(r)
}

fn even_poly(coeffs: &[f64]) -> impl Fn(f64) -> f64 + '_ {
    move |p| coeffs.iter().enumerate().map(|(k, c)| c * p.powi(2 * k as i32)).sum()
}

fn profile_bump(lo: f64, hi: f64) -> impl Fn(f64) -> f64 {
    move |p| {
        let u = (2.0 * p - lo - hi) / (hi - lo);
        if u.abs() < 1.0 {
            (1.0 - u * u).powi(3)
        } else {
            0.0
        }
    }
}

pub fn abel(cfg: &VerifyConfig) -> Result<Report> {
    let mut r = base_report("abel", cfg);
    let params = AbelParams::three();

    let polys: [&[f64]; 4] = [
        &[1.0],
        &[0.0, 1.0],
        &[1.0, -0.5, 0.25],
        &[0.3, 1.0, -1.0, 0.5],
    ];
    let mut worst = 0.0_f64;
    for c in polys {
        let g = EvenProfile::from_fn(1.0, 81, even_poly(c))?;
        let back = abel_inverse(&abel_forward(&g, &params)?, &params)?.profile;
        let scale = g.max_abs();
        for i in 0..g.count() {
            if g.point(i) >= 0.1 {
                worst = worst.max((back.values()[i] - g.values()[i]).abs() / scale);
            }
        }
    }
    r.metric("round_trip_error", worst);
    r.check("inverse_undoes_forward", worst <= 1e-6);

    // forward transform against radialization of the ridge field
    let poly = [1.0, -0.5, 0.2, -0.05];
    let geom = Geometry::centered(3, 49, 1.0 / 16.0)?;
    let p = even_poly(&poly);
    let ridge = GridField::from_fn(geom, |x| p(x[2]))?;
    let sampler = Sampler::new(&ridge, Interpolation::CubicSpline);
    let quad = SphereQuadrature::new(3, 64)?;
    let rad = radialize(&sampler, &quad, 1.2, 25)?;
    let forward = abel_forward(&EvenProfile::from_fn(1.2, 49, even_poly(&poly))?, &params)?;
    let err = rad
        .profile
        .radii()
        .iter()
        .zip(rad.profile.values())
        .map(|(&rr, v)| (v - forward.eval(rr)).abs())
        .fold(0.0, f64::max);
    r.metric("forward_vs_radialization", err);
    r.check("forward_matches_radialization", err <= 1e-5);

    let radii: Vec<f64> = (0..19).map(|i| 0.2 + 0.1 * i as f64).collect();
    let g1 = EvenProfile::from_fn(6.0, 601, |p| (-p * p / 0.18).exp())?;
    let g2 = EvenProfile::from_fn(6.0, 601, |p| (1.0 + p * p) * (-p * p).exp())?;
    let c1 = convolution_identity_check(&g1, &params, &radii, 0.1)?;
    let c2 = convolution_identity_check(&g2, &params, &radii, 0.1)?;
    r.metric("convolution_constants", [c1.constant, c2.constant]);
    r.metric("convolution_spreads", [c1.spread, c2.spread]);
    r.check("convolution_ratio_flat", c1.spread <= 1e-3 && c2.spread <= 1e-3);
    r.check(
        "convolution_constant_reproducible",
        (c1.constant - c2.constant).abs() <= 1e-3 * c1.constant.abs(),
    );

    let mut rng = rng_for(cfg, 1);
    let mut worst_steps = 0.0_f64;
    for _ in 0..20 {
        let lo = rng.gen_range(1.0..1.3);
        let hi = lo + rng.gen_range(0.05..0.3);
        let g = EvenProfile::from_fn(2.0, 801, profile_bump(lo, hi))?;
        let rep = titchmarsh_forward_check(&g, (lo, hi), &params, 0.005)?;
        let steps = rep.error_steps.unwrap_or(f64::INFINITY);
        if steps > 2.0 {
            r.witness(json!({"support": [lo, hi], "onset": rep.onset, "expected": rep.expected}));
        }
        worst_steps = worst_steps.max(steps);
    }
    r.metric("titchmarsh_worst_steps", worst_steps);
    r.check("titchmarsh_onsets", worst_steps <= 2.0);
    Ok(r)
}

fn radial_bump(lo: f64, hi: f64) -> impl Fn(f64) -> f64 {
    move |rr| {
        let u = (2.0 * rr - lo - hi) / (hi - lo);
        if u.abs() < 1.0 {
            (1.0 - u * u).powi(4)
        } else {
            0.0
        }
    }
}

pub fn local(cfg: &VerifyConfig) -> Result<Report> {
    let mut r = base_report("local", cfg);
    let params = AbelParams::three();
    let lcfg = LocalConfig {
        spacing: 0.05,
        ..LocalConfig::default()
    };
    let eps = 0.2;
    r.config("eps", eps).config("spacing", lcfg.spacing);
    let cases: [(&str, RadialProfile, bool); 3] = [
        ("zero", RadialProfile::from_fn(2.0, 81, |_| 0.0)?, true),
        ("near_bump", RadialProfile::from_fn(2.0, 401, radial_bump(1.05, 1.1))?, false),
        ("far_bump", RadialProfile::from_fn(2.0, 401, radial_bump(1.35, 1.6))?, true),
    ];
    for (name, f, expect_pass) in cases {
        let v = local_theorem_pipeline(&f, eps, &params, &lcfg)?;
        let ok = match (&v, expect_pass) {
            (LocalVerdict::Pass { .. }, true) => true,
            (LocalVerdict::HypothesisViolated { .. }, false) => true,
            _ => false,
        };
        if let LocalVerdict::HypothesisViolated { center, .. } = &v {
            r.witness(json!({"case": name, "center": center}));
        }
        r.metric(name, &v);
        r.check(name, ok);
    }
    Ok(r)
}

pub fn zalcman(cfg: &VerifyConfig) -> Result<Report> {
    let mut r = base_report("zalcman", cfg);
    let geom = Geometry::centered(2, 512, 0.04)?;
    let spec = CounterexampleSpec::new(2, 1)?;
    let f = zalcman_field(&spec, &geom)?;
    let sampler = Sampler::new(&f, Interpolation::CubicSpline);
    let quad = SphereQuadrature::new(2, 256)?;
    let mut rng = rng_for(cfg, 2);
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let c = [rng.gen_range(-8.0..8.0), rng.gen_range(-8.0..8.0)];
        worst = worst.max(spherical_mean(&sampler, &c, 1.0, &quad)?.abs());
    }
    let worst = worst / f.max_abs();
    r.metric("unit_sphere_means", worst);
    r.check("unit_sphere_means_vanish", worst <= 1e-4);

    // Mf(x, t) = c f(x) f(t), c fitted at x = 0
    let ts: Vec<f64> = (0..14).map(|i| 0.2 + 0.1 * i as f64).collect();
    let ft: Vec<f64> = ts.iter().map(|&t| spec.value(t)).collect();
    let m0 = ts
        .iter()
        .map(|&t| spherical_mean(&sampler, &[0.0, 0.0], t, &quad))
        .collect::<Result<Vec<f64>>>()?;
    let c = m0.iter().zip(&ft).map(|(a, b)| a * b).sum::<f64>()
        / (spec.value(0.0) * ft.iter().map(|b| b * b).sum::<f64>());
    let scale = f.max_abs().powi(2);
    let mut err = 0.0_f64;
    for _ in 0..10 {
        let x = [rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)];
        let fx = spec.value(f64::hypot(x[0], x[1]));
        for (&t, &v) in ts.iter().zip(&ft) {
            err = err.max((spherical_mean(&sampler, &x, t, &quad)? - c * fx * v).abs() / scale);
        }
    }
    r.metric("product_constant", c);
    r.metric("product_identity_error", err);
    r.check("product_identity", err <= 1e-3);

    // tails around the critical exponent 4, on the second zero where the
    // Bessel asymptotics have set in by t = 2
    let spec2 = CounterexampleSpec::new(2, 2)?;
    let f2 = zalcman_field(&spec2, &geom)?;
    let s2 = Sampler::new(&f2, Interpolation::CubicSpline);
    let q2 = SphereQuadrature::new(2, 1024)?;
    let t0s = [2.0, 3.0, 4.0, 5.0];
    let above = lp_annulus_tails(&s2, &q2, 5.0, &t0s, 0.02)?;
    let below = lp_annulus_tails(&s2, &q2, 3.5, &t0s, 0.02)?;
    r.metric("tails_p5", &above);
    r.metric("tails_p3_5", &below);
    r.metric("critical_p", spec.critical_p);
    r.check("tails_decrease_above_critical", above.windows(2).all(|w| w[1] < w[0]));
    r.check("tails_increase_below_critical", below.windows(2).all(|w| w[1] > w[0]));
    Ok(r)
}

/// The support harness on a user field and mask.
pub fn support_on(f: &GridField, k: &DomainMask, radius: f64, cfg: &VerifyConfig) -> Result<Report> {
    let mut r = base_report("support", cfg);
    r.config("radius", radius);
    let hc = HarnessConfig {
        k: k.clone(),
        radius,
        mean_tol: 1e-3,
        support_tol: 1e-3,
        quad: SphereQuadrature::new(f.dim(), if f.dim() == 2 { 256 } else { 64 })?,
    };
    let rep = support_theorem_harness(f, &hc)?;
    r.metric("harness", &rep);
    if let SupportVerdict::HypothesisViolated { center, hotspot, mean } = &rep.verdict {
        r.witness(json!({"center": center, "hotspot": hotspot, "mean": float(*mean)}));
    }
    r.check("consistent", rep.passed());
    Ok(r)
}

pub fn support(cfg: &VerifyConfig) -> Result<Report> {
    let mut r = base_report("support", cfg);
    let geom = Geometry::centered(2, 256, 6.0 / 256.0)?;
    let radius = 0.7;
    let k = disk_mask(&geom, 1.0, &[0.0, 0.0])?;
    let hc = HarnessConfig {
        k: k.clone(),
        radius,
        mean_tol: 1e-3,
        support_tol: 1e-3,
        quad: SphereQuadrature::new(2, 256)?,
    };
    let inside = bump(&geom, 0.9, &[0.0, 0.0])?;
    let rep = support_theorem_harness(&inside, &hc)?;
    r.metric("inside_max_mean", rep.max_mean);
    r.metric("inside_exterior_mass", rep.exterior_mass);
    r.check("inside_passes", rep.passed());

    let mut rng = rng_for(cfg, 3);
    let angle = rng.gen_range(0.0..2.0 * PI);
    let dist = rng.gen_range(1.5..2.0);
    let spot = [dist * angle.cos(), dist * angle.sin()];
    let outside = inside.combine(1.0, &bump(&geom, 0.12, &spot)?, 0.2)?;
    let rep = support_theorem_harness(&outside, &hc)?;
    let located = match &rep.verdict {
        SupportVerdict::HypothesisViolated { hotspot, center, mean } => {
            r.witness(json!({"center": center, "hotspot": hotspot, "mean": float(*mean)}));
            let d = f64::hypot(hotspot[0] - spot[0], hotspot[1] - spot[1]);
            r.metric("bump_witness_distance_voxels", d / geom.spacing());
            d <= 2.0 * geom.spacing()
        }
        _ => false,
    };
    r.metric("bump_center", spot);
    r.check("exterior_bump_flagged", located);

    let kernel = SphereKernel::new(2, radius)?;
    let g2 = Geometry::centered(2, 256, 4.0 / 256.0)?;
    let f = gaussian(&g2, 0.15, &[0.0, 0.0])?;
    let dec = deconvolve(&fixed_radius_transform(&f, &kernel)?, &kernel, &RegularizationPolicy::default())?;
    let err = dec.field.combine(1.0, &f, -1.0)?.l2_norm() / f.l2_norm();
    r.metric("round_trip_error", err);
    r.metric("round_trip_discarded", dec.discarded_fraction);
    r.check("round_trip", err <= 5e-2);

    let gz = Geometry::centered(2, 256, 0.08)?;
    let z = zalcman_field(&CounterexampleSpec::new(2, 1)?, &gz)?;
    let hz = HarnessConfig {
        k: disk_mask(&gz, 1.0, &[0.0, 0.0])?,
        radius: 1.0,
        ..hc
    };
    let rep = support_theorem_harness(&z, &hz)?;
    r.metric("zalcman", &rep.verdict);
    r.check(
        "zalcman_is_non_compact_regime",
        matches!(rep.verdict, SupportVerdict::NonCompactRegime { .. }),
    );
    Ok(r)
}

/// Center set by direct enumeration of ball offsets, for cross-checking the
/// distance-transform morphology.
fn brute_center_set(k: &DomainMask, radius: f64) -> Result<DomainMask> {
    let geom = k.geometry();
    let ball = BallElement::for_mask(k, radius)?;
    let shape = geom.shape();
    let bits = (0..geom.len())
        .map(|i| {
            let idx = geom.multi_index(i);
            !ball.offsets().iter().any(|o| {
                let q: Option<Vec<usize>> = idx
                    .iter()
                    .zip(o)
                    .zip(shape)
                    .map(|((&a, &d), &n)| {
                        let v = a as i64 + d;
                        (v >= 0 && v < n as i64).then_some(v as usize)
                    })
                    .collect();
                q.is_some_and(|q| k.get(&q))
            })
        })
        .collect();
    DomainMask::new(geom.clone(), bits)
}

fn random_mask(geom: &Geometry, rng: &mut ChaCha8Rng) -> Result<DomainMask> {
    let mut k = DomainMask::empty(geom.clone());
    for _ in 0..rng.gen_range(1..=3) {
        let c = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let size = rng.gen_range(0.2..0.6);
        let piece = if rng.gen_bool(0.5) {
            disk_mask(geom, size, &c)?
        } else {
            square_mask(geom, size, &c)?
        };
        k = k.or(&piece)?;
    }
    Ok(k)
}

/// `r_convex` on a user mask.
pub fn rconvex_on(k: &DomainMask, radius: f64, cfg: &VerifyConfig) -> Result<Report> {
    let mut r = base_report("rconvex", cfg);
    r.config("radius", radius);
    let rep = r_convex(k, radius)?;
    r.metric("verdict", &rep.verdict);
    r.metric("uncovered", rep.uncovered);
    r.metric("center_components", rep.components.count());
    if let RConvexVerdict::CoverageFail { point, .. } = &rep.verdict {
        r.witness(json!({"uncovered": point}));
    }
    r.check("r_convex", rep.is_r_convex());
    Ok(r)
}

pub fn rconvex(cfg: &VerifyConfig) -> Result<Report> {
    let mut r = base_report("rconvex", cfg);
    let geom = Geometry::centered(2, 128, 6.0 / 128.0)?;
    let mut convex_ok = true;
    for radius in [0.2, 0.35, 0.5, 0.8] {
        for (name, k) in [
            ("disk", disk_mask(&geom, 1.0, &[0.1, -0.2])?),
            ("square", square_mask(&geom, 0.9, &[0.0, 0.0])?),
        ] {
            let v = r_convex(&k, radius)?;
            if !v.is_r_convex() {
                convex_ok = false;
                r.witness(json!({"phantom": name, "radius": radius, "verdict": v.verdict}));
            }
        }
    }
    r.check("convex_phantoms_pass", convex_ok);

    let two = two_disk_mask(&geom, 1.0, 1.25)?;
    let rep = r_convex(&two, 1.0)?;
    let in_gap = match &rep.verdict {
        RConvexVerdict::CoverageFail { point, .. } => {
            r.witness(json!({"phantom": "two_disks", "uncovered": point}));
            point[0].abs() < 0.25 && point[1].abs() < 1.0
        }
        _ => false,
    };
    r.metric("two_disk_verdict", &rep.verdict);
    r.check("two_disk_gap_fails_in_gap", in_gap);

    let small = Geometry::centered(2, 64, 4.0 / 64.0)?;
    let mut rng = rng_for(cfg, 4);
    let mut agree = true;
    let mut verdicts = Vec::new();
    for _ in 0..25 {
        let k = random_mask(&small, &mut rng)?;
        let radius = rng.gen_range(0.15..0.5);
        let fast = center_set(&k, radius)?;
        let slow = brute_center_set(&k, radius)?;
        if fast != slow {
            agree = false;
            r.witness(json!({"radius": radius, "center_set_mismatch": true}));
        }
        verdicts.push(r_convex(&k, radius)?.is_r_convex());
    }
    r.metric("random_mask_r_convex", &verdicts);
    r.check("center_sets_match_enumeration", agree);
    Ok(r)
}

/// The walk on a user field and mask.
pub fn walk_on(f: &GridField, k: &DomainMask, radius: f64, cfg: &VerifyConfig) -> Result<Report> {
    let mut r = base_report("rconvex-walk", cfg);
    r.config("radius", radius);
    let hc = HarnessConfig {
        k: k.clone(),
        radius,
        mean_tol: 1e-3,
        support_tol: 1e-6,
        quad: SphereQuadrature::new(f.dim(), 64)?,
    };
    let rep = rconvex_region_growing(f, &hc)?;
    r.metric("walk", &rep);
    if let WalkVerdict::Frontier { witnesses } = &rep.verdict {
        for w in witnesses {
            r.witness(json!({"frontier": w}));
        }
    }
    r.check("complete", rep.verdict == WalkVerdict::Complete);
    Ok(r)
}

pub fn rconvex_walk(cfg: &VerifyConfig) -> Result<Report> {
    let mut r = base_report("rconvex-walk", cfg);
    let geom = Geometry::centered(2, 128, 0.05)?;
    let shape = LShape {
        half: 1.0,
        arm: 0.8,
        fillet: 0.5,
    };
    let radius = 0.4;
    let k = shape.mask(&geom);
    let hc = HarnessConfig {
        k: k.clone(),
        radius,
        mean_tol: 1e-3,
        support_tol: 1e-6,
        quad: SphereQuadrature::new(2, 64)?,
    };
    let compliant = GridField::from_fn(geom.clone(), |x| if shape.contains(x) { 1.0 } else { 0.0 })?;
    let rep = rconvex_region_growing(&compliant, &hc)?;
    r.metric("compliant", &rep);
    r.check("compliant_covers_c", rep.verdict == WalkVerdict::Complete);

    let spot = shape.notch_point();
    let pocket = compliant.combine(1.0, &bump(&geom, 0.1, &spot)?, 1.0)?;
    let rep = rconvex_region_growing(&pocket, &hc)?;
    let adjacent = match &rep.verdict {
        WalkVerdict::Frontier { witnesses } => {
            for w in witnesses {
                r.witness(json!({"frontier": w}));
            }
            witnesses
                .iter()
                .all(|w| f64::hypot(w[0] - spot[0], w[1] - spot[1]) <= radius + 0.1 + 2.0 * geom.spacing())
        }
        _ => false,
    };
    r.metric("pocket_reached", rep.reached);
    r.metric("pocket_centers", rep.center_count);
    r.check("pocket_bump_blocks_walk", adjacent);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cheap_suites_pass() {
        let cfg = VerifyConfig::default();
        for name in ["specfun", "local", "rconvex-walk"] {
            let r = run(name, &cfg).unwrap();
            assert!(r.pass, "{}", r.to_json());
        }
        assert!(run("nope", &cfg).is_err());
    }
}
