//! Regularized deconvolution, the Zalcman family and the support-theorem
//! harnesses.
//!
//! The transform multiplies `f̂` by `j_{(n−2)/2}(R|ξ|)`, which vanishes on the
//! zero rings. Division is therefore only attempted away from the rings;
//! what is done on them is set by a [`RegularizationPolicy`], and the
//! spectral energy given up there is reported.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{config, domain, Error, Result};
use crate::field::{fft_forward, fft_inverse, Geometry, GridField, Sampler, SphereQuadrature};
use crate::geometry::{center_set, r_convex, BallElement, DomainMask, RConvexVerdict};
use crate::specfun::{bessel_j, bessel_zeros, gamma, normalized_j, BesselOrder};
use crate::transform::{sphere_area, SphereKernel, ZERO_TOL};

/// Default half width of the excluded band around each zero ring, in `|ξ|`
/// units.
pub const DEFAULT_RING_HALF_WIDTH: f64 = 0.01;

/// Fraction of discarded spectral energy above which a deconvolution is
/// flagged as dominated by invisible components.
pub const DISCARD_WARNING: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Zero the bins on the rings.
    ZeroFill,
    /// `ĥ j/(j² + ε)` on the rings.
    Tikhonov { epsilon: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RegularizationPolicy {
    pub strategy: Strategy,
    /// Bins with `||ξ| − λ_k| ≤ ring_half_width` for some zero `λ_k` are
    /// treated by the strategy instead of divided.
    pub ring_half_width: f64,
}

impl RegularizationPolicy {
    pub fn zero_fill(ring_half_width: f64) -> Result<Self> {
        Self {
            strategy: Strategy::ZeroFill,
            ring_half_width,
        }
        .validated()
    }

    pub fn tikhonov(ring_half_width: f64, epsilon: f64) -> Result<Self> {
        Self {
            strategy: Strategy::Tikhonov { epsilon },
            ring_half_width,
        }
        .validated()
    }

    fn validated(self) -> Result<Self> {
        if !(self.ring_half_width > 0.0) || !self.ring_half_width.is_finite() {
            return config(format!("ring half width must be positive, got {}", self.ring_half_width));
        }
        if let Strategy::Tikhonov { epsilon } = self.strategy {
            if !(epsilon > 0.0) || !epsilon.is_finite() {
                return config(format!("Tikhonov floor must be positive, got {epsilon}"));
            }
        }
        Ok(self)
    }
}

impl Default for RegularizationPolicy {
    fn default() -> Self {
        Self {
            strategy: Strategy::ZeroFill,
            ring_half_width: DEFAULT_RING_HALF_WIDTH,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Deconvolution {
    pub field: GridField,
    /// `Σ_ring |ĥ|² / Σ |ĥ|²` over the FFT bins (0 when `h ≡ 0`).
    pub discarded_fraction: f64,
    pub ring_bins: usize,
    /// `discarded_fraction > DISCARD_WARNING`.
    pub warning: bool,
}

/// Estimates `f` from `h = f ∗ δ_R` by spectral division on the grid of `h`.
///
/// The grid is treated as periodic, which is exact when `h` vanishes near
/// its faces (as transforms of compactly supported phantoms with a guard band
/// do).
pub fn deconvolve(h: &GridField, kernel: &SphereKernel, policy: &RegularizationPolicy) -> Result<Deconvolution> {
    let policy = policy.validated()?;
    if h.dim() != kernel.dim() {
        return config("field and kernel dimensions differ");
    }
    let mut spec = fft_forward(h);
    let top = spec.magnitudes().iter().copied().fold(0.0, f64::max);
    // every ring that can come within the band of a bin
    let mut count = 1;
    let rings = loop {
        let r = kernel.zero_rings(count)?;
        if *r.last().unwrap() > top + policy.ring_half_width {
            break r;
        }
        count *= 2;
    };
    let near_ring = |xi: f64| {
        let k = rings.partition_point(|&l| l < xi);
        let below = if k > 0 { xi - rings[k - 1] } else { f64::INFINITY };
        let above = rings.get(k).map_or(f64::INFINITY, |&l| l - xi);
        below.min(above) <= policy.ring_half_width
    };
    let total: f64 = spec.values().iter().map(|v| v.norm_sqr()).sum();
    let magnitudes = spec.magnitudes().to_vec();
    // per-bin results are summed in bin order so the report is reproducible
    let discarded: Vec<Option<f64>> = spec
        .values_mut()
        .par_iter_mut()
        .zip(magnitudes.par_iter())
        .map(|(v, &xi)| {
            let j = kernel.multiplier(xi);
            if near_ring(xi) {
                let e = v.norm_sqr();
                *v = match policy.strategy {
                    Strategy::ZeroFill => 0.0 * *v,
                    Strategy::Tikhonov { epsilon } => *v * (j / (j * j + epsilon)),
                };
                Some(e)
            } else {
                *v /= j;
                None
            }
        })
        .collect();
    let ring_energy: f64 = discarded.iter().flatten().sum();
    let ring_bins = discarded.iter().flatten().count();
    let discarded_fraction = if total > 0.0 { ring_energy / total } else { 0.0 };
    Ok(Deconvolution {
        field: fft_inverse(&spec)?,
        discarded_fraction,
        ring_bins,
        warning: discarded_fraction > DISCARD_WARNING,
    })
}

/// `f(x) = |x|^{1−n/2} J_{n/2−1}(λ|x|)` with `J_{n/2−1}(λ) = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CounterexampleSpec {
    pub dim: usize,
    pub lam: f64,
    pub sphere_radius: f64,
    /// `2n/(n−1)`.
    pub critical_p: f64,
}

impl CounterexampleSpec {
    /// Uses the `zero_index`-th positive zero of `J_{n/2−1}` (1-based).
    pub fn new(dim: usize, zero_index: usize) -> Result<Self> {
        if zero_index == 0 {
            return config("zero indices start at 1");
        }
        let order = Self::order(dim)?;
        let table = bessel_zeros(order, zero_index, ZERO_TOL)?;
        Self::with_lambda(dim, table.zeros()[zero_index - 1])
    }

    /// Accepts `lam` only if it is a zero of `J_{n/2−1}` to table accuracy.
    pub fn with_lambda(dim: usize, lam: f64) -> Result<Self> {
        let order = Self::order(dim)?;
        if !(lam > 0.0) || !lam.is_finite() {
            return domain(format!("λ must be positive, got {lam}"));
        }
        let count = (lam / 3.0).ceil() as usize + 2;
        let table = bessel_zeros(order, count, ZERO_TOL)?;
        if !table.zeros().iter().any(|z| (z - lam).abs() <= 1e-10 * z.max(1.0)) {
            return domain(format!(
                "λ = {lam} is not a zero of J_{} (J = {:e})",
                order.value(),
                bessel_j(order, lam)?
            ));
        }
        Ok(Self {
            dim,
            lam,
            sphere_radius: 1.0,
            critical_p: 2.0 * dim as f64 / (dim as f64 - 1.0),
        })
    }

    fn order(dim: usize) -> Result<BesselOrder> {
        if dim != 2 && dim != 3 {
            return config(format!("the counterexample is built for n = 2, 3, got {dim}"));
        }
        BesselOrder::new(dim as f64 / 2.0 - 1.0)
    }

    /// `f` as a function of `r = |x|`; `r^{−p} J_p(λr) = λ^p j_p(λr)/(2^p Γ(p+1))`.
    pub fn value(&self, r: f64) -> f64 {
        let p = self.dim as f64 / 2.0 - 1.0;
        let order = BesselOrder::new(p).expect("valid order");
        let scale = self.lam.powf(p) / (2f64.powf(p) * gamma(p + 1.0));
        scale * normalized_j(order, self.lam * r.abs()).expect("finite argument")
    }
}

pub fn zalcman_field(spec: &CounterexampleSpec, geom: &Geometry) -> Result<GridField> {
    if geom.dim() != spec.dim {
        return config("grid and counterexample dimensions differ");
    }
    GridField::from_fn(geom.clone(), |x| spec.value(x.iter().map(|v| v * v).sum::<f64>().sqrt()))
}

/// `(∫_{t₀ ≤ |x| ≤ 2t₀} |f|^p dx)^{1/p}` for each `t₀`, by composite Simpson in
/// the radius times `quad` on each sphere.
///
/// `radial_step` bounds the Simpson step; the annulus must lie within the
/// interpolation domain of `sampler`.
pub fn lp_annulus_tails(
    sampler: &Sampler,
    quad: &SphereQuadrature,
    p: f64,
    t0_list: &[f64],
    radial_step: f64,
) -> Result<Vec<f64>> {
    let dim = sampler.geometry().dim();
    if !(p >= 1.0) {
        return domain(format!("p must be ≥ 1, got {p}"));
    }
    if !(radial_step > 0.0) {
        return config("radial step must be positive");
    }
    let origin = vec![0.0; dim];
    let area = sphere_area(dim);
    t0_list
        .iter()
        .map(|&t0| {
            if !(t0 > 0.0) {
                return domain(format!("t₀ must be positive, got {t0}"));
            }
            if !sampler.covers_ball(&origin, 2.0 * t0) {
                return Err(Error::OutOfGrid(format!("annulus [{t0}, {}] exits the grid", 2.0 * t0)));
            }
            let mut m = (t0 / radial_step).ceil() as usize;
            m += m % 2;
            let step = t0 / m as f64;
            let shells: Vec<f64> = (0..=m)
                .into_par_iter()
                .map(|i| {
                    let r = t0 + i as f64 * step;
                    let mut x = vec![0.0; dim];
                    let mean = quad.integrate(|d| {
                        for a in 0..dim {
                            x[a] = r * d[a];
                        }
                        sampler.try_sample(&x).unwrap_or(0.0).abs().powf(p)
                    });
                    area * r.powi(dim as i32 - 1) * mean
                })
                .collect();
            let simpson: f64 = shells
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    let w = if i == 0 || i == m {
                        1.0
                    } else if i % 2 == 1 {
                        4.0
                    } else {
                        2.0
                    };
                    w * v
                })
                .sum::<f64>()
                * step
                / 3.0;
            Ok(simpson.powf(1.0 / p))
        })
        .collect()
}

/// Data of the support theorem: `K`, `R` and the check tolerances.
#[derive(Clone, Debug)]
pub struct HarnessConfig {
    pub k: DomainMask,
    pub radius: f64,
    /// Means below `mean_tol · ‖f‖_∞` count as vanishing.
    pub mean_tol: f64,
    /// Allowed fraction of `‖f‖₁` outside `K`; for the walk, the level
    /// `support_tol · ‖f‖_∞` below which `f` counts as zero.
    pub support_tol: f64,
    pub quad: SphereQuadrature,
}

impl HarnessConfig {
    fn validate(&self, f: &GridField) -> Result<()> {
        if !(self.mean_tol > 0.0) || !(self.support_tol > 0.0) {
            return config("harness tolerances must be positive");
        }
        if !self.k.geometry().same_lattice(f.geometry()) {
            return config("mask and field live on different lattices");
        }
        if self.quad.dim() != f.dim() {
            return config("quadrature and field dimensions differ");
        }
        if self.k.is_empty() {
            return domain("K is empty");
        }
        if !self.k.is_bounded() {
            return domain("K touches the outer lattice layer");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SupportVerdict {
    ConsistentPass,
    /// A sphere avoiding `K` carries a nonzero mean. `hotspot` is the point of
    /// that sphere where `|f|` is largest.
    HypothesisViolated {
        center: Vec<f64>,
        mean: f64,
        hotspot: Vec<f64>,
    },
    /// Means vanish but `f` has mass outside `K` while decaying at the grid
    /// faces: forbidden by the theorem, so a numerical defect.
    ConclusionViolated { exterior_mass: f64 },
    /// Means vanish, `f` has mass outside `K` and does not decay at the
    /// faces: the non-integrable regime the theorem excludes.
    NonCompactRegime {
        exterior_mass: f64,
        edge_level: f64,
        tails: Vec<TailSample>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailSample {
    pub p: f64,
    pub t0: f64,
    pub norm: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SupportReport {
    pub verdict: SupportVerdict,
    /// `max |Mf(y, R)| / ‖f‖_∞` over the tested centers.
    pub max_mean: f64,
    /// `‖f‖_{L¹(¬K)} / ‖f‖₁`.
    pub exterior_mass: f64,
    pub centers_tested: usize,
    /// Centers of `C` whose sphere leaves the interpolation domain.
    pub centers_skipped: usize,
}

impl SupportReport {
    pub fn passed(&self) -> bool {
        matches!(self.verdict, SupportVerdict::ConsistentPass)
    }
}

/// Checks the hypothesis and conclusion of the support theorem on a grid
/// field.
///
/// The hypothesis is tested on every lattice center whose closed `R`-ball
/// avoids `K` and whose sphere stays in the interpolation domain; the
/// conclusion as the `L¹` mass fraction of `f` outside `K`.
pub fn support_theorem_harness(f: &GridField, cfg: &HarnessConfig) -> Result<SupportReport> {
    cfg.validate(f)?;
    let norm = f.max_abs();
    let sampler = Sampler::new(f, Default::default());
    let c = center_set(&cfg.k, cfg.radius)?;
    let geom = f.geometry();
    let candidates: Vec<usize> = (0..geom.len()).filter(|&i| c.bits()[i]).collect();
    let tested: Vec<(usize, f64)> = candidates
        .par_iter()
        .filter_map(|&i| {
            let y = geom.point_of_flat(i);
            if !sampler.covers_ball(&y, cfg.radius) {
                return None;
            }
            let m = crate::transform::spherical_mean(&sampler, &y, cfg.radius, &cfg.quad).ok()?;
            Some((i, m))
        })
        .collect();
    let skipped = candidates.len() - tested.len();
    let worst = tested
        .iter()
        .copied()
        .fold(None, |acc: Option<(usize, f64)>, (i, m)| match acc {
            Some((_, b)) if b >= m.abs() => acc,
            _ => Some((i, m.abs())),
        });
    let max_mean = match (worst, norm > 0.0) {
        (Some((_, m)), true) => m / norm,
        _ => 0.0,
    };
    let l1 = f.l1_norm();
    let exterior: f64 = f
        .values()
        .iter()
        .zip(cfg.k.bits())
        .filter(|(_, &inside)| !inside)
        .map(|(v, _)| v.abs())
        .sum::<f64>()
        * geom.cell_volume();
    let exterior_mass = if l1 > 0.0 { exterior / l1 } else { 0.0 };
    let verdict = if max_mean > cfg.mean_tol {
        let (i, _) = worst.expect("a tested center");
        let y = geom.point_of_flat(i);
        let mean = tested.iter().find(|(j, _)| *j == i).unwrap().1;
        SupportVerdict::HypothesisViolated {
            hotspot: hotspot(&sampler, &y, cfg.radius, &cfg.quad),
            center: y,
            mean,
        }
    } else if exterior_mass > cfg.support_tol {
        let edge_level = f.max_abs_near_boundary(cfg.radius) / norm;
        if edge_level > cfg.support_tol {
            SupportVerdict::NonCompactRegime {
                exterior_mass,
                edge_level,
                tails: tail_annotation(f, &sampler)?,
            }
        } else {
            SupportVerdict::ConclusionViolated { exterior_mass }
        }
    } else {
        SupportVerdict::ConsistentPass
    };
    Ok(SupportReport {
        verdict,
        max_mean,
        exterior_mass,
        centers_tested: tested.len(),
        centers_skipped: skipped,
    })
}

fn hotspot(sampler: &Sampler, y: &[f64], radius: f64, quad: &SphereQuadrature) -> Vec<f64> {
    let mut best = (f64::NEG_INFINITY, y.to_vec());
    for (d, _) in quad.iter() {
        let x: Vec<f64> = y.iter().zip(d).map(|(c, u)| c + radius * u).collect();
        let v = sampler.try_sample(&x).unwrap_or(0.0).abs();
        if v > best.0 {
            best = (v, x);
        }
    }
    best.1
}

/// Annulus tails at the critical exponent and one above it, on four
/// annuli that fit the grid about the origin.
fn tail_annotation(f: &GridField, sampler: &Sampler) -> Result<Vec<TailSample>> {
    let geom = f.geometry();
    let dim = geom.dim();
    if !geom.contains_origin() {
        return Ok(Vec::new());
    }
    let reach = geom.distance_to_boundary(&vec![0.0; dim]) - 3.0 * geom.spacing();
    if reach <= 0.0 {
        return Ok(Vec::new());
    }
    let quad = SphereQuadrature::new(dim, if dim == 2 { 512 } else { 64 })?;
    let critical = 2.0 * dim as f64 / (dim as f64 - 1.0);
    let t0s: Vec<f64> = [0.2, 0.275, 0.35, 0.425].iter().map(|s| s * reach).collect();
    let mut out = Vec::new();
    for p in [critical, critical + 1.0] {
        let norms = lp_annulus_tails(sampler, &quad, p, &t0s, 0.5 * geom.spacing())?;
        out.extend(t0s.iter().zip(norms).map(|(&t0, norm)| TailSample { p, t0, norm }));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum WalkVerdict {
    /// `C_f = C`.
    Complete,
    /// The walk stopped; `witnesses` are centers of `C ∖ C_f` adjacent to
    /// `C_f`, where `f` is nonzero on the ball.
    Frontier { witnesses: Vec<Vec<f64>> },
    /// No seed in the outer shell of `C` has a vanishing ball.
    NoSeed,
    /// `K` is not `R`-convex; the geometry witness is attached.
    NotRConvex { geometry: RConvexVerdict },
}

#[derive(Clone, Debug, Serialize)]
pub struct WalkReport {
    pub verdict: WalkVerdict,
    pub center_count: usize,
    pub reached: usize,
    pub seeds: usize,
}

/// Maximum number of frontier witnesses listed.
pub const MAX_WITNESSES: usize = 16;

/// Grows `C_f = {x ∈ C : |f| ≤ support_tol · ‖f‖_∞ on B(x, R)}` from the
/// outermost two-voxel shell of `C` through face-adjacent centers.
///
/// The ball test runs on the lattice: a center qualifies when no lattice
/// point of its ball carries a value above the level.
pub fn rconvex_region_growing(f: &GridField, cfg: &HarnessConfig) -> Result<WalkReport> {
    cfg.validate(f)?;
    let geometry = r_convex(&cfg.k, cfg.radius)?;
    if !geometry.is_r_convex() {
        return Ok(WalkReport {
            verdict: WalkVerdict::NotRConvex {
                geometry: geometry.verdict,
            },
            center_count: 0,
            reached: 0,
            seeds: 0,
        });
    }
    let c = center_set(&cfg.k, cfg.radius)?;
    let geom = f.geometry();
    let level = cfg.support_tol * f.max_abs();
    let loud = DomainMask::new(geom.clone(), f.values().iter().map(|v| v.abs() > level).collect())?;
    let ball = BallElement::for_mask(&c, cfg.radius)?;
    let d_loud = loud.squared_distance_map();
    let quiet = |i: usize| d_loud[i] > ball.threshold();
    let in_shell = |i: usize| {
        geom.multi_index(i)
            .iter()
            .zip(geom.shape())
            .any(|(&k, &n)| k < 2 || k + 2 >= n)
    };
    let mut reached = vec![false; geom.len()];
    let mut queue = VecDeque::new();
    for i in 0..geom.len() {
        if c.bits()[i] && in_shell(i) && quiet(i) {
            reached[i] = true;
            queue.push_back(i);
        }
    }
    let seeds = queue.len();
    let center_count = c.count();
    if seeds == 0 {
        return Ok(WalkReport {
            verdict: WalkVerdict::NoSeed,
            center_count,
            reached: 0,
            seeds,
        });
    }
    let strides = geom.strides();
    let mut frontier = Vec::new();
    let mut on_frontier = vec![false; geom.len()];
    while let Some(v) = queue.pop_front() {
        let idx = geom.multi_index(v);
        for a in 0..geom.dim() {
            let mut step = |w: usize| {
                if !c.bits()[w] || reached[w] {
                    return;
                }
                if quiet(w) {
                    reached[w] = true;
                    queue.push_back(w);
                } else if !on_frontier[w] {
                    on_frontier[w] = true;
                    frontier.push(w);
                }
            };
            if idx[a] > 0 {
                step(v - strides[a]);
            }
            if idx[a] + 1 < geom.shape()[a] {
                step(v + strides[a]);
            }
        }
    }
    let reached_count = reached.iter().filter(|&&r| r).count();
    let verdict = if reached_count == center_count {
        WalkVerdict::Complete
    } else {
        // loudest first, then row-major
        frontier.sort_by(|&a, &b| d_loud[a].cmp(&d_loud[b]).then(a.cmp(&b)));
        if frontier.is_empty() {
            // unreached centers in components the seeds never touch
            frontier = (0..geom.len()).filter(|&i| c.bits()[i] && !reached[i]).collect();
        }
        WalkVerdict::Frontier {
            witnesses: frontier
                .iter()
                .take(MAX_WITNESSES)
                .map(|&i| geom.point_of_flat(i))
                .collect(),
        }
    };
    Ok(WalkReport {
        verdict,
        center_count,
        reached: reached_count,
        seeds,
    })
}
