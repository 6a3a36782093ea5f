use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use sphermean::abel::{abel_forward, abel_inverse, AbelParams, EvenProfile};
use sphermean::field::io::{read_field, write_field};
use sphermean::field::{Geometry, GridField, Interpolation, RadialProfile, Sampler, SphereQuadrature};
use sphermean::geometry::DomainMask;
use sphermean::inversion::{deconvolve, zalcman_field, CounterexampleSpec, RegularizationPolicy, DEFAULT_RING_HALF_WIDTH};
use sphermean::phantom::{bump, disk_mask, gaussian, square_mask, two_disk_mask, LShape};
use sphermean::report::{emit, float, Report};
use sphermean::specfun::{bessel_j, bessel_zeros, normalized_j, normalized_zeros, BesselOrder};
use sphermean::transform::{
    fixed_radius_transform_with, interior_indices, spectral_ring_check, spherical_mean, GuardPolicy, SphereKernel,
    GUARD_TOLERANCE, ZERO_TOL,
};
use sphermean::verify::{self, VerifyConfig};
use sphermean::Error;

use crate::{
    AbelArgs, AbelDirection, BesselArgs, Cli, Command, InvertArgs, Method, PhantomArgs, PhantomKind, Suite,
    TransformArgs, VerifyArgs,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum Outcome {
    Success = 0,
    Failed = 1,
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            // parameters outside a module's preconditions are usage errors
            Error::Config(_) | Error::Unsupported(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other),
        }
    }
}

type Run = Result<Outcome, Failure>;

fn usage<T>(msg: impl Into<String>) -> Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

struct Log(bool);

impl Log {
    fn line(&self, msg: impl AsRef<str>) {
        if self.0 {
            eprintln!("[sphermean] {}", msg.as_ref());
        }
    }
}

pub fn run(cli: &Cli) -> Run {
    let log = Log(cli.verbose);
    match &cli.command {
        Command::Bessel(a) => bessel(a),
        Command::Phantom(a) => phantom(a, &log),
        Command::Transform(a) => transform(a, &log),
        Command::Invert(a) => invert(a, &log),
        Command::Abel(a) => abel(a, &log),
        Command::Verify(a) => verify_cmd(a, &log),
    }
}

fn bessel(a: &BesselArgs) -> Run {
    let order = BesselOrder::new(a.order)?;
    let mut out = String::new();
    if let Some(count) = a.zeros {
        if count == 0 {
            return usage("--zeros must be at least 1");
        }
        let table = if a.normalized {
            normalized_zeros(order, count, ZERO_TOL)?
        } else {
            bessel_zeros(order, count, ZERO_TOL)?
        };
        out.push_str(&table.to_csv());
    }
    if !a.x.is_empty() {
        out.push_str("x,value\n");
        for &x in &a.x {
            let v = if a.normalized { normalized_j(order, x)? } else { bessel_j(order, x)? };
            out.push_str(&format!("{x:.16e},{v:.16e}\n"));
        }
    }
    print!("{out}");
    Ok(Outcome::Success)
}

fn phantom(a: &PhantomArgs, log: &Log) -> Run {
    if a.shape < sphermean::field::MIN_AXIS {
        return usage(format!("--shape must be at least {}", sphermean::field::MIN_AXIS));
    }
    let side = if a.kind == PhantomKind::Zalcman { 20.0 } else { 4.0 };
    let spacing = a.spacing.unwrap_or(side / a.shape as f64);
    let geom = Geometry::centered(a.dim, a.shape, spacing)?;
    let center = if a.random_center {
        let extent = 0.25 * (a.shape - 1) as f64 * spacing;
        let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
        (0..a.dim).map(|_| rng.gen_range(-extent..=extent)).collect()
    } else if a.center.is_empty() {
        vec![0.0; a.dim]
    } else if a.center.len() == a.dim {
        a.center.clone()
    } else {
        return usage(format!("--center has {} coordinates but --dim is {}", a.center.len(), a.dim));
    };
    log.line(format!("{:?} on {}^{} with h = {spacing}, center {center:?}", a.kind, a.shape, a.dim));
    let field = match a.kind {
        PhantomKind::Gaussian => gaussian(&geom, a.sigma, &center)?,
        PhantomKind::Bump => bump(&geom, a.size, &center)?,
        PhantomKind::Zalcman => zalcman_field(&CounterexampleSpec::new(a.dim, a.zero_index)?, &geom)?,
        PhantomKind::DiskMask => disk_mask(&geom, a.size, &center)?.to_field(),
        PhantomKind::SquareMask => square_mask(&geom, a.size, &center)?.to_field(),
        PhantomKind::TwoDiskMask => two_disk_mask(&geom, a.size, a.offset)?.to_field(),
        PhantomKind::LshapeMask => LShape {
            half: a.size,
            arm: 0.8 * a.size,
            fillet: a.fillet,
        }
        .mask(&geom)
        .to_field(),
    };
    write_field(&a.output, &field)?;
    log.line(format!("wrote {}", a.output.display()));
    Ok(Outcome::Success)
}

/// Direct sphere quadrature at every lattice point, treating the field as
/// zero where the interpolant is unavailable.
fn quadrature_transform(f: &GridField, radius: f64, order: usize) -> Result<GridField, Failure> {
    let sampler = Sampler::new(f, Interpolation::CubicSpline);
    let quad = SphereQuadrature::new(f.dim(), order)?;
    let geom = f.geometry();
    let values: Vec<f64> = (0..geom.len())
        .into_par_iter()
        .map(|i| {
            let c = geom.point_of_flat(i);
            let mut x = vec![0.0; c.len()];
            quad.iter()
                .map(|(d, w)| {
                    for (a, xa) in x.iter_mut().enumerate() {
                        *xa = c[a] + radius * d[a];
                    }
                    w * sampler.try_sample(&x).unwrap_or(0.0)
                })
                .sum()
        })
        .collect();
    Ok(GridField::new(geom.clone(), values)?)
}

fn transform(a: &TransformArgs, log: &Log) -> Run {
    let f = read_field(&a.input)?;
    let kernel = SphereKernel::new(f.dim(), a.radius)?;
    let policy = if a.truncate { GuardPolicy::Truncate } else { GuardPolicy::Strict };
    log.line(format!("{:?} transform of {} with R = {}", a.method, a.input.display(), a.radius));
    let h = match a.method {
        Method::Fft => fixed_radius_transform_with(&f, &kernel, policy)?,
        Method::Quadrature => {
            if policy == GuardPolicy::Strict {
                let edge = f.max_abs_near_boundary(a.radius);
                if edge > GUARD_TOLERANCE * f.max_abs() {
                    return Err(Failure::Runtime(Error::GuardBand(format!(
                        "field reaches {edge:.3e} within R = {} of the grid faces; pass --truncate to accept",
                        a.radius
                    ))));
                }
            }
            quadrature_transform(&f, a.radius, a.quadrature_order)?
        }
    };
    write_field(&a.output, &h)?;
    log.line(format!("wrote {}", a.output.display()));
    if !a.verify && a.report.is_none() {
        return Ok(Outcome::Success);
    }

    let mut r = Report::new("transform");
    r.config("method", if a.method == Method::Fft { "fft" } else { "quad" })
        .config("R", a.radius)
        .config("truncate", a.truncate);
    let rings = spectral_ring_check(&h, &kernel, 3, 0.0)?;
    r.metric("ring_maxima", rings.maxima.iter().map(|&m| float(m)).collect::<Vec<_>>());
    // sparse comparison against the other method, away from the faces
    let geom = f.geometry();
    let idx = interior_indices(geom, a.radius + 3.0 * geom.spacing());
    let stride = (idx.len() / 400).max(1);
    let subset: Vec<usize> = idx.into_iter().step_by(stride).collect();
    let mut dev = 0.0_f64;
    match a.method {
        Method::Fft => {
            let sampler = Sampler::new(&f, Interpolation::CubicSpline);
            let quad = SphereQuadrature::new(f.dim(), a.quadrature_order)?;
            for &i in &subset {
                let m = spherical_mean(&sampler, &geom.point_of_flat(i), a.radius, &quad)?;
                dev = dev.max((m - h.values()[i]).abs());
            }
        }
        Method::Quadrature => {
            let spectral = fixed_radius_transform_with(&f, &kernel, GuardPolicy::Truncate)?;
            for &i in &subset {
                dev = dev.max((spectral.values()[i] - h.values()[i]).abs());
            }
        }
    }
    let scale = h.max_abs();
    let rel = if scale > 0.0 { dev / scale } else { dev };
    r.metric("oracle_rel_err", rel).metric("oracle_points", subset.len());
    let ring_tol = if a.truncate { 1e-3 } else { 1e-6 };
    r.check("rings_vanish", rings.maxima.iter().all(|&m| m <= ring_tol));
    r.check("matches_quadrature", rel <= 1e-3);
    finish(&r, a.report.as_deref())
}

fn parse_policy(text: &str, width: f64) -> Result<RegularizationPolicy, Failure> {
    if text == "zero" {
        return Ok(RegularizationPolicy::zero_fill(width)?);
    }
    if let Some(eps) = text.strip_prefix("tikhonov:") {
        let eps: f64 = eps.parse().map_err(|_| Failure::Usage(format!("bad Tikhonov floor `{eps}`")))?;
        return Ok(RegularizationPolicy::tikhonov(width, eps)?);
    }
    usage(format!("--policy must be `zero` or `tikhonov:EPS`, got `{text}`"))
}

fn invert(a: &InvertArgs, log: &Log) -> Run {
    let policy = parse_policy(&a.policy, a.ring_width.unwrap_or(DEFAULT_RING_HALF_WIDTH))?;
    let h = read_field(&a.input)?;
    let kernel = SphereKernel::new(h.dim(), a.radius)?;
    log.line(format!("deconvolving {} with R = {}", a.input.display(), a.radius));
    let d = deconvolve(&h, &kernel, &policy)?;
    write_field(&a.output, &d.field)?;
    if d.warning {
        eprintln!(
            "warning: {:.1}% of the spectral energy lies on the zero rings and was not recovered",
            100.0 * d.discarded_fraction
        );
    }
    let mut r = Report::new("invert");
    r.config("R", a.radius).config("policy", policy);
    r.metric("discarded_fraction", d.discarded_fraction)
        .metric("ring_bins", d.ring_bins)
        .metric("warning", d.warning);
    finish(&r, a.report.as_deref())
}

fn abel(a: &AbelArgs, log: &Log) -> Run {
    let params = AbelParams::new(a.dim, a.singular_quadrature)?;
    let text = fs::read_to_string(&a.input).map_err(Error::from)?;
    let out = match a.direction {
        AbelDirection::Forward => {
            let g = EvenProfile::from_csv(&text)?;
            abel_forward(&g, &params)?.to_csv()
        }
        AbelDirection::Inverse => {
            let f = RadialProfile::from_csv(&text)?;
            let inv = abel_inverse(&f, &params)?;
            log.line(format!("stencil disagreement {:.3e}", inv.stencil_disagreement));
            if inv.ill_conditioned {
                eprintln!(
                    "warning: difference stencils disagree by {:.3e}; the inverse is ill conditioned",
                    inv.stencil_disagreement
                );
            }
            inv.profile.to_csv()
        }
    };
    fs::write(&a.output, out).map_err(Error::from)?;
    log.line(format!("wrote {}", a.output.display()));
    Ok(Outcome::Success)
}

fn read_mask(path: &Path) -> Result<DomainMask, Failure> {
    Ok(DomainMask::from_field(&read_field(path)?))
}

fn verify_cmd(a: &VerifyArgs, log: &Log) -> Run {
    let cfg = VerifyConfig {
        seed: a.seed,
        dim: a.dim,
    };
    let given = (a.field.is_some(), a.mask.is_some(), a.radius.is_some());
    let report = match (a.suite, given) {
        (_, (false, false, false)) => {
            log.line(format!("running suite {} (seed {})", a.suite.name(), a.seed));
            if a.suite == Suite::All {
                let mut all = Report::new("all");
                all.config("seed", cfg.seed).config("dim", cfg.dim);
                for name in verify::SUITES {
                    log.line(format!("suite {name}"));
                    all.absorb(verify::run(name, &cfg)?);
                }
                all
            } else {
                verify::run(a.suite.name(), &cfg)?
            }
        }
        (Suite::Support, (true, true, true)) => {
            let f = read_field(a.field.as_ref().unwrap())?;
            let k = read_mask(a.mask.as_ref().unwrap())?;
            verify::support_on(&f, &k, a.radius.unwrap(), &cfg)?
        }
        (Suite::Rconvex, (false, true, true)) => {
            let k = read_mask(a.mask.as_ref().unwrap())?;
            verify::rconvex_on(&k, a.radius.unwrap(), &cfg)?
        }
        (Suite::RconvexWalk, (true, true, true)) => {
            let f = read_field(a.field.as_ref().unwrap())?;
            let k = read_mask(a.mask.as_ref().unwrap())?;
            verify::walk_on(&f, &k, a.radius.unwrap(), &cfg)?
        }
        (Suite::Support | Suite::RconvexWalk, _) => {
            return usage("--field, --mask and --radius must be given together");
        }
        (Suite::Rconvex, _) => return usage("rconvex takes --mask and --radius (and no --field)"),
        (s, _) => return usage(format!("suite {} takes no --field, --mask or --radius", s.name())),
    };
    finish(&report, a.report.as_deref())
}

fn finish(report: &Report, path: Option<&Path>) -> Run {
    emit(report, path)?;
    if report.pass {
        Ok(Outcome::Success)
    } else {
        if let Some(p) = path {
            eprintln!("verification failed; see {}", p.display());
        }
        Ok(Outcome::Failed)
    }
}
