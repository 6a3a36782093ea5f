//! Voxel masks, ball morphology and the R-convexity predicate.
//!
//! Morphology runs on exact squared Euclidean distance maps (separable
//! lower-envelope transform), so a ball test is an integer comparison.
//! Lattice points outside the grid are ignored by both erosion and
//! dilation, which makes the duality `erode(M) = ¬dilate(¬M)` exact.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{config, domain, Result};
use crate::field::{Geometry, GridField};

/// Boolean voxel mask; `true` marks points of `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainMask {
    geom: Geometry,
    bits: Vec<bool>,
}

impl DomainMask {
    pub fn new(geom: Geometry, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != geom.len() {
            return config(format!("mask has {} voxels, lattice has {}", bits.len(), geom.len()));
        }
        Ok(Self { geom, bits })
    }

    pub fn empty(geom: Geometry) -> Self {
        let n = geom.len();
        Self {
            geom,
            bits: vec![false; n],
        }
    }

    pub fn from_fn(geom: Geometry, pred: impl Fn(&[f64]) -> bool) -> Self {
        let bits = (0..geom.len()).map(|i| pred(&geom.point_of_flat(i))).collect();
        Self { geom, bits }
    }

    /// Voxels with value `> 0.5`.
    pub fn from_field(field: &GridField) -> Self {
        Self {
            geom: field.geometry().clone(),
            bits: field.values().iter().map(|&v| v > 0.5).collect(),
        }
    }

    pub fn to_field(&self) -> GridField {
        GridField::new(self.geom.clone(), self.bits.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect())
            .expect("finite 0/1 values")
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geom
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, idx: &[usize]) -> bool {
        self.bits[self.geom.flat_index(idx)]
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }

    pub fn complement(&self) -> Self {
        Self {
            geom: self.geom.clone(),
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(bool, bool) -> bool) -> Result<Self> {
        if !self.geom.same_lattice(&other.geom) {
            return config("masks live on different lattices");
        }
        Ok(Self {
            geom: self.geom.clone(),
            bits: self.bits.iter().zip(&other.bits).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn and(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a && b)
    }

    pub fn or(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a || b)
    }

    /// `self ∖ other`.
    pub fn minus(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a && !b)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }

    /// No `true` voxel on the outermost lattice layer.
    pub fn is_bounded(&self) -> bool {
        self.bits.iter().enumerate().all(|(i, &b)| {
            !b || self
                .geom
                .multi_index(i)
                .iter()
                .zip(self.geom.shape())
                .all(|(&k, &n)| k > 0 && k + 1 < n)
        })
    }

    /// The mask embedded in a lattice extended by `cells` voxels of
    /// complement on every side.
    pub fn padded(&self, cells: usize) -> Self {
        let shape: Vec<usize> = self.geom.shape().iter().map(|n| n + 2 * cells).collect();
        let h = self.geom.spacing();
        let origin: Vec<f64> = self.geom.origin().iter().map(|o| o - cells as f64 * h).collect();
        let geom = Geometry::new(shape, h, origin).expect("extension of a valid lattice");
        let mut bits = vec![false; geom.len()];
        for (i, &b) in self.bits.iter().enumerate() {
            if b {
                let idx: Vec<usize> = self.geom.multi_index(i).iter().map(|k| k + cells).collect();
                bits[geom.flat_index(&idx)] = true;
            }
        }
        Self { geom, bits }
    }

    /// Inverse of [`padded`](Self::padded) onto `inner`.
    fn cropped(&self, inner: &Geometry, cells: usize) -> Self {
        let bits = (0..inner.len())
            .map(|i| {
                let idx: Vec<usize> = inner.multi_index(i).iter().map(|k| k + cells).collect();
                self.bits[self.geom.flat_index(&idx)]
            })
            .collect();
        Self {
            geom: inner.clone(),
            bits,
        }
    }

    /// Squared distance, in voxel units, from every voxel to the nearest
    /// `true` voxel (`u64::MAX` when the mask is empty).
    pub fn squared_distance_map(&self) -> Vec<u64> {
        squared_edt(&self.bits, self.geom.shape())
    }
}

const FAR: f64 = 1e18;

/// Lower envelope of parabolas along one line: `d[i] = min_j (i−j)² + f[j]`.
fn edt_line(f: &[f64], d: &mut [f64], v: &mut [usize], z: &mut [f64]) {
    let n = f.len();
    let mut k = 0usize;
    v[0] = 0;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    for q in 1..n {
        loop {
            let p = v[k];
            let s = ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64)) / (2.0 * (q as f64 - p as f64));
            if s <= z[k] && k > 0 {
                k -= 1;
                continue;
            }
            if s <= z[k] {
                // k == 0 and the new parabola dominates everywhere
                v[0] = q;
                z[0] = f64::NEG_INFINITY;
                z[1] = f64::INFINITY;
                break;
            }
            k += 1;
            v[k] = q;
            z[k] = s;
            z[k + 1] = f64::INFINITY;
            break;
        }
    }
    k = 0;
    for (q, out) in d.iter_mut().enumerate() {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let p = v[k];
        *out = (q as f64 - p as f64).powi(2) + f[p];
    }
}

fn squared_edt(bits: &[bool], shape: &[usize]) -> Vec<u64> {
    use rayon::prelude::*;
    let mut g: Vec<f64> = bits.iter().map(|&b| if b { 0.0 } else { FAR }).collect();
    let total = g.len();
    for axis in 0..shape.len() {
        let n = shape[axis];
        let stride: usize = shape[axis + 1..].iter().product();
        let outer = total / (n * stride);
        let bases: Vec<usize> = (0..outer)
            .flat_map(|o| (0..stride).map(move |s| o * n * stride + s))
            .collect();
        let lines: Vec<Vec<f64>> = bases
            .par_iter()
            .map(|&b| {
                let f: Vec<f64> = (0..n).map(|k| g[b + k * stride]).collect();
                let mut d = vec![0.0; n];
                let mut v = vec![0usize; n];
                let mut z = vec![0.0; n + 1];
                edt_line(&f, &mut d, &mut v, &mut z);
                d
            })
            .collect();
        for (b, line) in bases.iter().zip(lines) {
            for (k, val) in line.into_iter().enumerate() {
                g[b + k * stride] = val.min(FAR);
            }
        }
    }
    g.into_iter()
        .map(|v| if v >= FAR { u64::MAX } else { v.round() as u64 })
        .collect()
}

/// Closed lattice ball of physical radius `R`.
///
/// Holds the lattice offsets `p` with `|p|² ≤ (R/h)²` up to a relative tie
/// tolerance of `1e-9`, so lattice points exactly on the sphere belong to
/// the ball.
#[derive(Clone, Debug, PartialEq)]
pub struct BallElement {
    radius_voxels: f64,
    threshold: u64,
    offsets: Vec<Vec<i64>>,
}

const TIE: f64 = 1e-9;

impl BallElement {
    pub fn new(dim: usize, radius: f64, spacing: f64) -> Result<Self> {
        if !(radius > 0.0) || !(spacing > 0.0) || !radius.is_finite() {
            return domain(format!("ball radius and spacing must be positive, got {radius}, {spacing}"));
        }
        let rv = radius / spacing;
        let threshold = (rv * rv * (1.0 + TIE)).floor() as u64;
        let reach = rv.floor() as i64 + 1;
        let mut offsets = Vec::new();
        let mut p = vec![-reach; dim];
        loop {
            let d2: i64 = p.iter().map(|v| v * v).sum();
            if d2 as u64 <= threshold {
                offsets.push(p.clone());
            }
            let mut a = dim;
            loop {
                if a == 0 {
                    return Ok(Self {
                        radius_voxels: rv,
                        threshold,
                        offsets,
                    });
                }
                a -= 1;
                if p[a] < reach {
                    p[a] += 1;
                    break;
                }
                p[a] = -reach;
            }
        }
    }

    pub fn for_mask(mask: &DomainMask, radius: f64) -> Result<Self> {
        Self::new(mask.geom.dim(), radius, mask.geom.spacing())
    }

    pub fn radius_voxels(&self) -> f64 {
        self.radius_voxels
    }

    /// Largest squared lattice length inside the ball.
    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    pub fn offsets(&self) -> &[Vec<i64>] {
        &self.offsets
    }

    fn check(&self, mask: &DomainMask) -> Result<()> {
        let widest = *mask.geom.shape().iter().max().unwrap() as f64;
        if self.radius_voxels > widest {
            return domain(format!(
                "ball of {} voxels is larger than the grid ({widest} voxels)",
                self.radius_voxels
            ));
        }
        Ok(())
    }
}

/// Voxels whose whole in-grid ball lies in `mask`.
pub fn erode(mask: &DomainMask, ball: &BallElement) -> Result<DomainMask> {
    ball.check(mask)?;
    let d = mask.complement().squared_distance_map();
    Ok(DomainMask {
        geom: mask.geom.clone(),
        bits: d.iter().map(|&v| v > ball.threshold).collect(),
    })
}

/// Voxels whose ball meets `mask`.
pub fn dilate(mask: &DomainMask, ball: &BallElement) -> Result<DomainMask> {
    ball.check(mask)?;
    let d = mask.squared_distance_map();
    Ok(DomainMask {
        geom: mask.geom.clone(),
        bits: d.iter().map(|&v| v <= ball.threshold).collect(),
    })
}

/// `C`: voxels whose closed `R`-ball avoids `K`.
pub fn center_set(k: &DomainMask, radius: f64) -> Result<DomainMask> {
    let outside = k.complement();
    if outside.is_empty() {
        return domain("the complement of K is empty");
    }
    erode(&outside, &BallElement::for_mask(k, radius)?)
}

/// Face-adjacency labelling.
#[derive(Clone, Debug, PartialEq)]
pub struct Components {
    /// 0 for background, `1..=count` for components in order of first
    /// appearance (row-major).
    pub labels: Vec<u32>,
    pub sizes: Vec<usize>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }
}

fn face_neighbours(geom: &Geometry, idx: &[usize], mut visit: impl FnMut(usize)) {
    let strides = geom.strides();
    let flat = geom.flat_index(idx);
    for a in 0..geom.dim() {
        if idx[a] > 0 {
            visit(flat - strides[a]);
        }
        if idx[a] + 1 < geom.shape()[a] {
            visit(flat + strides[a]);
        }
    }
}

pub fn connected_components(mask: &DomainMask) -> Components {
    let geom = &mask.geom;
    let mut labels = vec![0u32; mask.bits.len()];
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..mask.bits.len() {
        if !mask.bits[start] || labels[start] != 0 {
            continue;
        }
        let label = sizes.len() as u32 + 1;
        labels[start] = label;
        queue.push_back(start);
        let mut size = 0;
        while let Some(v) = queue.pop_front() {
            size += 1;
            face_neighbours(geom, &geom.multi_index(v), |w| {
                if mask.bits[w] && labels[w] == 0 {
                    labels[w] = label;
                    queue.push_back(w);
                }
            });
        }
        sizes.push(size);
    }
    Components { labels, sizes }
}

/// Outcome of [`r_convex`].
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum RConvexVerdict {
    RConvex,
    /// A complement voxel outside the tolerance shell that no `R`-ball in the
    /// complement reaches. The witness is the uncovered voxel farthest from
    /// `K`.
    CoverageFail { index: Vec<usize>, point: Vec<f64> },
    /// The center set splits into several face-connected pieces.
    Disconnected { component_sizes: Vec<usize> },
}

#[derive(Clone, Debug)]
pub struct RConvexReport {
    pub verdict: RConvexVerdict,
    pub centers: DomainMask,
    /// Complement voxels outside the shell that are not covered.
    pub uncovered: usize,
    pub components: Components,
}

impl RConvexReport {
    pub fn is_r_convex(&self) -> bool {
        self.verdict == RConvexVerdict::RConvex
    }
}

/// Checks whether the complement of `K` is a union of closed `R`-balls whose
/// centers form a connected set.
///
/// `K` lives in all of space, so balls may be centred beyond the sampled box:
/// the lattice is extended by `R` plus two voxels of complement before the
/// center set is formed, and connectivity is judged on the extended lattice.
/// Complement voxels within one voxel diagonal of `K` (squared lattice
/// distance `≤ n`) are exempt from the coverage test. The returned center set
/// is cropped back to the original lattice.
pub fn r_convex(k: &DomainMask, radius: f64) -> Result<RConvexReport> {
    if !k.is_bounded() {
        return domain("K touches the outer lattice layer");
    }
    if radius < 2.0 * k.geom.spacing() * (1.0 - 1e-12) {
        return domain(format!("R = {radius} is below two lattice spacings"));
    }
    let cells = (radius / k.geom.spacing()).ceil() as usize + 2;
    let big = k.padded(cells);
    let ball = BallElement::for_mask(&big, radius)?;
    let centers = center_set(&big, radius)?;
    let covered = dilate(&centers, &ball)?;
    let dk = big.squared_distance_map();
    let shell = k.geom.dim() as u64;
    let mut uncovered = 0;
    let mut witness: Option<usize> = None;
    for i in 0..big.bits.len() {
        if big.bits[i] || covered.bits[i] || dk[i] <= shell {
            continue;
        }
        uncovered += 1;
        if witness.map_or(true, |w| dk[i] > dk[w]) {
            witness = Some(i);
        }
    }
    let components = connected_components(&centers);
    let verdict = if let Some(w) = witness {
        RConvexVerdict::CoverageFail {
            index: big
                .geom
                .multi_index(w)
                .iter()
                .map(|&i| i.saturating_sub(cells))
                .collect(),
            point: big.geom.point_of_flat(w),
        }
    } else if components.count() != 1 {
        RConvexVerdict::Disconnected {
            component_sizes: components.sizes.clone(),
        }
    } else {
        RConvexVerdict::RConvex
    };
    Ok(RConvexReport {
        verdict,
        centers: centers.cropped(&k.geom, cells),
        uncovered,
        components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid(n: usize) -> Geometry {
        Geometry::centered(2, n, 1.0).unwrap()
    }

    fn brute_d2(mask: &DomainMask) -> Vec<u64> {
        let g = &mask.geom;
        let on: Vec<Vec<usize>> = (0..g.len()).filter(|&i| mask.bits[i]).map(|i| g.multi_index(i)).collect();
        (0..g.len())
            .map(|i| {
                let p = g.multi_index(i);
                on.iter()
                    .map(|q| p.iter().zip(q).map(|(&a, &b)| (a as i64 - b as i64).pow(2) as u64).sum())
                    .min()
                    .unwrap_or(u64::MAX)
            })
            .collect()
    }

    fn random_mask(seed: u64, n: usize, density: f64) -> DomainMask {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let g = grid(n);
        let bits = (0..g.len()).map(|_| rng.gen_bool(density)).collect();
        DomainMask::new(g, bits).unwrap()
    }

    #[test]
    fn distance_map_matches_brute_force() {
        for seed in 0..5 {
            let m = random_mask(seed, 16, 0.05);
            assert_eq!(m.squared_distance_map(), brute_d2(&m));
        }
        let g3 = Geometry::centered(3, 9, 1.0).unwrap();
        let m3 = DomainMask::from_fn(g3, |x| x == [1.0, -2.0, 0.0] || x == [-3.0, 3.0, 2.0]);
        assert_eq!(m3.squared_distance_map(), brute_d2(&m3));
    }

    #[test]
    fn ball_offsets_include_the_sphere() {
        let b = BallElement::new(2, 5.0, 1.0).unwrap();
        assert!(b.offsets().contains(&vec![3, 4]));
        assert!(b.offsets().contains(&vec![0, -5]));
        assert!(!b.offsets().contains(&vec![4, 4]));
        assert_eq!(b.offsets().len(), 81);
    }

    #[test]
    fn dilating_a_voxel_gives_the_ball() {
        let g = grid(32);
        let m = DomainMask::from_fn(g.clone(), |x| x == [0.0, 0.0]);
        let ball = BallElement::new(2, 4.5, 1.0).unwrap();
        let d = dilate(&m, &ball).unwrap();
        assert_eq!(d.count(), ball.offsets().len());
        for o in ball.offsets() {
            assert!(d.get(&[(16 + o[0]) as usize, (16 + o[1]) as usize]));
        }
    }

    #[test]
    fn eroding_the_interior_shrinks_by_the_radius() {
        let g = grid(32);
        let m = DomainMask::from_fn(g.clone(), |x| x.iter().all(|v| v.abs() <= 12.0));
        let e = erode(&m, &BallElement::new(2, 3.0, 1.0).unwrap()).unwrap();
        let want = DomainMask::from_fn(g, |x| x.iter().all(|v| v.abs() <= 9.0));
        assert_eq!(e, want);
    }

    #[test]
    fn ball_larger_than_grid_is_rejected() {
        let m = DomainMask::empty(grid(8));
        assert!(erode(&m, &BallElement::new(2, 9.0, 1.0).unwrap()).is_err());
    }

    #[test]
    fn center_set_of_a_disk_is_an_outer_disk_complement() {
        let g = Geometry::centered(2, 96, 0.05).unwrap();
        let k = DomainMask::from_fn(g.clone(), |x| x[0].hypot(x[1]) <= 0.8);
        let c = center_set(&k, 0.5).unwrap();
        for i in 0..g.len() {
            let r = g.point_of_flat(i).iter().map(|v| v * v).sum::<f64>().sqrt();
            if r > 1.3 + 0.05 {
                assert!(c.bits()[i]);
            }
            if r < 1.3 - 0.05 {
                assert!(!c.bits()[i]);
            }
        }
        let everything = center_set(&DomainMask::empty(g.clone()), 0.5).unwrap();
        assert_eq!(everything.count(), g.len());
        let interior = DomainMask::from_fn(g.clone(), |x| x.iter().all(|v| v.abs() < 2.35));
        assert_eq!(center_set(&interior, 0.5).unwrap().count(), 0);
        assert!(center_set(&DomainMask::empty(g).complement(), 0.5).is_err());
    }

    #[test]
    fn components_of_blobs_and_rings() {
        let g = Geometry::centered(2, 48, 0.1).unwrap();
        let two = DomainMask::from_fn(g.clone(), |x| (x[0] - 1.0).hypot(x[1]) < 0.5 || (x[0] + 1.0).hypot(x[1]) < 0.5);
        assert_eq!(connected_components(&two).count(), 2);
        assert_eq!(connected_components(&DomainMask::empty(g.clone())).count(), 0);
        let ring = DomainMask::from_fn(g, |x| {
            let r = x[0].hypot(x[1]);
            (1.0..=1.4).contains(&r)
        });
        let outside = connected_components(&ring.complement());
        assert_eq!(outside.count(), 2);
    }

    #[test]
    fn disks_and_squares_are_r_convex() {
        let g = Geometry::centered(2, 128, 0.05).unwrap();
        let disk = DomainMask::from_fn(g.clone(), |x| x[0].hypot(x[1]) <= 1.0);
        let square = DomainMask::from_fn(g, |x| x[0].abs() <= 0.9 && x[1].abs() <= 0.9);
        for r in [0.1, 0.3, 0.7, 1.2] {
            assert!(r_convex(&disk, r).unwrap().is_r_convex(), "disk R = {r}");
            assert!(r_convex(&square, r).unwrap().is_r_convex(), "square R = {r}");
        }
    }

    #[test]
    fn two_disk_gap_is_not_coverable() {
        let g = Geometry::centered(2, 256, 6.0 / 256.0).unwrap();
        let k = DomainMask::from_fn(g, |x| (x[0] - 1.25).hypot(x[1]) <= 1.0 || (x[0] + 1.25).hypot(x[1]) <= 1.0);
        let rep = r_convex(&k, 1.0).unwrap();
        match rep.verdict {
            RConvexVerdict::CoverageFail { point, .. } => {
                assert!(point[0].abs() < 0.25 && point[1].abs() < 1.0, "{point:?}");
            }
            v => panic!("{v:?}"),
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn duality_and_adjunction(seed in 0u64..1000, r in 1.0f64..4.0, density in 0.1f64..0.9) {
            let m = random_mask(seed, 16, density);
            let b = BallElement::new(2, r, 1.0).unwrap();
            let e = erode(&m, &b).unwrap();
            let dual = dilate(&m.complement(), &b).unwrap().complement();
            prop_assert_eq!(&e, &dual);
            prop_assert!(dilate(&e, &b).unwrap().is_subset(&m));
            prop_assert!(m.is_subset(&erode(&dilate(&m, &b).unwrap(), &b).unwrap()));
        }

        #[test]
        fn center_set_is_antitone(seed in 0u64..1000, r in 1.0f64..3.0) {
            let small = random_mask(seed, 16, 0.05);
            let big = small.or(&random_mask(seed + 7, 16, 0.05)).unwrap();
            let cs = center_set(&small, r).unwrap();
            let cb = center_set(&big, r).unwrap();
            prop_assert!(cb.is_subset(&cs));
        }
    }
}
