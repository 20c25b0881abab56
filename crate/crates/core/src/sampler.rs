//! Monte Carlo sampling: process increments by inverse CDF over the exact
//! circle masses, grid paths as cumulative sums, and bridge marginals by
//! hierarchical ball refinement against the exact bridge ball
//! probabilities.
//!
//! Everything is driven by [`RandomStream`], a counter-based generator
//! keyed by `(seed, stream_id)`; fixing both reproduces draws exactly, and
//! distinct stream ids give independent streams for parallel workers.

use std::collections::HashMap;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::padic::{uniform_circle_sample, PAdic, RadiusExponent};
use crate::radial::{ball_mass, BridgeKernel, ProcessParams, SeriesTolerance};

/// Mass a truncated increment table may leave outside each end.
const TABLE_RESIDUAL: f64 = 1e-15;

/// Mass the bridge start ball may miss.
const BRIDGE_START_RESIDUAL: f64 = 1e-12;

/// Radius exponents to scan past the starting guess before giving up. The
/// tails thin by a factor `p^b` (upward) or `p` (downward) per step, so the
/// span stretches as `b` shrinks.
fn search_span(b: f64) -> i64 {
    200 + (1200.0 / b).ceil() as i64
}

/// Deterministic random stream: same `(seed, stream_id)` means identical
/// draws, and distinct stream ids are independent.
#[derive(Clone, Debug)]
pub struct RandomStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64, stream_id: u64) -> RandomStream {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        RandomStream { seed, stream_id, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }
}

/// A path skeleton on a time grid. `positions[0]` is `origin` and all
/// positions share the prime of `params`.
#[derive(Clone, Debug)]
pub struct PathSample {
    pub params: ProcessParams,
    pub times: Vec<f64>,
    pub positions: Vec<PAdic>,
    pub origin: PAdic,
}

impl PathSample {
    /// CSV dump: one row per grid point with the time, the valuation (`inf`
    /// for zero), and the digit string.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("time,valuation,digits\n");
        let sep = if self.params.prime >= 10 { "," } else { "" };
        for (t, x) in self.times.iter().zip(&self.positions) {
            let (val, digits) = match x.abs_exponent() {
                None => ("inf".to_string(), String::new()),
                Some(e) => {
                    let ds: Vec<String> = x.digits().iter().map(|d| d.to_string()).collect();
                    ((-e).to_string(), ds.join(sep))
                }
            };
            out.push_str(&format!("{t},{val},{digits}\n"));
        }
        out
    }
}

/// A bridge target: start at `x`, forced to reach `y` at time `t_pin`.
#[derive(Clone, Debug)]
pub struct BridgeSpec {
    pub t_pin: f64,
    pub x: PAdic,
    pub y: PAdic,
}

impl BridgeSpec {
    pub fn new(t_pin: f64, x: PAdic, y: PAdic) -> Result<BridgeSpec> {
        if !(t_pin > 0.0) {
            return Err(Error::NonPositive { what: "t_pin", value: t_pin });
        }
        if x.prime() != y.prime() {
            return Err(Error::PrimeMismatch(x.prime(), y.prime()));
        }
        Ok(BridgeSpec { t_pin, x, y })
    }
}

/// Inverse-CDF table for the radius of one increment: a contiguous block of
/// radius exponents whose cumulative masses leave less than
/// `TABLE_RESIDUAL` outside each end. Plain data, freely shared across
/// threads.
#[derive(Clone, Debug)]
pub struct IncrementSampler {
    prime: u32,
    r_lo: i64,
    cdf: Vec<f64>,
}

impl IncrementSampler {
    pub fn new(params: ProcessParams, t: f64, tol: SeriesTolerance) -> Result<IncrementSampler> {
        let bm = |r: i64| -> Result<f64> { Ok(ball_mass(params, t, r, tol)?.value) };
        let st = params.sigma * t;
        // The radius pmf peaks where sigma t p^(-r b) is near 1.
        let mode = (st.ln() / (params.b * (params.prime as f64).ln())).round() as i64;
        let span = search_span(params.b);
        let mut r_hi = mode;
        while 1.0 - bm(r_hi)? > TABLE_RESIDUAL {
            r_hi += 1;
            if r_hi > mode + span {
                return Err(Error::TailSearchFailure);
            }
        }
        let mut r_lo = r_hi.min(mode);
        while bm(r_lo - 1)? > TABLE_RESIDUAL {
            r_lo -= 1;
            if r_lo < mode - span {
                return Err(Error::TailSearchFailure);
            }
        }
        let mut cdf = Vec::with_capacity((r_hi - r_lo + 1) as usize);
        let mut run = 0.0f64;
        for r in r_lo..=r_hi {
            run = run.max(bm(r)?);
            cdf.push(run);
        }
        Ok(IncrementSampler { prime: params.prime, r_lo, cdf })
    }

    /// Draws a radius exponent by inverse CDF; the residual tails collapse
    /// onto the end bins.
    pub fn radius<R: Rng + ?Sized>(&self, rng: &mut R) -> RadiusExponent {
        let u: f64 = rng.random();
        let idx = self.cdf.partition_point(|&c| c < u).min(self.cdf.len() - 1);
        self.r_lo + idx as i64
    }

    /// Probability assigned to radius exponent `r` by the table.
    pub fn pmf(&self, r: RadiusExponent) -> f64 {
        let idx = r - self.r_lo;
        if idx < 0 || idx as usize >= self.cdf.len() {
            return 0.0;
        }
        let idx = idx as usize;
        if idx == 0 {
            self.cdf[0]
        } else {
            self.cdf[idx] - self.cdf[idx - 1]
        }
    }

    pub fn radius_range(&self) -> (RadiusExponent, RadiusExponent) {
        (self.r_lo, self.r_lo + self.cdf.len() as i64 - 1)
    }

    /// One increment: a radius from the table, then a uniform point of that
    /// circle resolved to `depth` digits.
    pub fn sample<R: Rng + ?Sized>(&self, depth: usize, rng: &mut R) -> Result<PAdic> {
        let r = self.radius(rng);
        uniform_circle_sample(r, &PAdic::zero(self.prime), depth, rng)
    }
}

/// One increment of the process over time `t`.
pub fn sample_increment(
    params: ProcessParams,
    t: f64,
    depth: usize,
    rng: &mut RandomStream,
    tol: SeriesTolerance,
) -> Result<PAdic> {
    IncrementSampler::new(params, t, tol)?.sample(depth, rng)
}

/// A path on the uniform grid `t_j = j T / m_points`, `j = 0..=m_points`,
/// as origin plus cumulative sums of independent increments.
pub fn sample_path(
    params: ProcessParams,
    t_end: f64,
    m_points: u32,
    origin: &PAdic,
    depth: usize,
    rng: &mut RandomStream,
    tol: SeriesTolerance,
) -> Result<PathSample> {
    if m_points == 0 {
        return Err(Error::InvalidGrid("path grid needs at least one step"));
    }
    if origin.prime() != params.prime {
        return Err(Error::PrimeMismatch(params.prime, origin.prime()));
    }
    let dt = t_end / m_points as f64;
    let sampler = IncrementSampler::new(params, dt, tol)?;
    let mut times = Vec::with_capacity(m_points as usize + 1);
    let mut positions = Vec::with_capacity(m_points as usize + 1);
    times.push(0.0);
    positions.push(origin.clone());
    let mut v = origin.clone();
    for j in 1..=m_points {
        v = v.add(&sampler.sample(depth, rng)?)?;
        times.push(j as f64 * dt);
        positions.push(v.clone());
    }
    Ok(PathSample { params, times, positions, origin: origin.clone() })
}

/// Largest distance exponent from `center` over the grid, `None` when every
/// position equals `center`.
pub fn sup_norm(path: &PathSample, center: &PAdic) -> Result<Option<RadiusExponent>> {
    let mut best: Option<i64> = None;
    for x in &path.positions {
        if let Some(e) = x.dist_exponent(center)? {
            best = Some(best.map_or(e, |b: i64| b.max(e)));
        }
    }
    Ok(best)
}

/// Smallest grid index whose position leaves `B_a(center)`, if any.
pub fn first_exit_index(
    path: &PathSample,
    center: &PAdic,
    a: RadiusExponent,
) -> Result<Option<usize>> {
    for (i, x) in path.positions.iter().enumerate() {
        if let Some(e) = x.dist_exponent(center)? {
            if e > a {
                return Ok(Some(i));
            }
        }
    }
    Ok(None)
}

/// Hierarchical refinement under a prepared kernel: find a starting ball
/// around the origin holding all but `BRIDGE_START_RESIDUAL` of the law,
/// then descend `depth` times, picking one of the `p` children of the
/// current ball with probability proportional to its exact unnormalized
/// mass.
fn refine_bridge_point(
    kernel: &BridgeKernel,
    params: ProcessParams,
    w: &PAdic,
    depth: usize,
    rng: &mut RandomStream,
) -> Result<PAdic> {
    if depth == 0 {
        return Err(Error::ZeroDepth);
    }
    let prime = params.prime;
    let w_ord = w.abs_exponent();
    let mut k = w_ord.unwrap_or(0).max(0);
    let start = k;
    while kernel.ball_prob(k, None, w_ord)? < 1.0 - BRIDGE_START_RESIDUAL {
        k += 1;
        if k > start + search_span(params.b) {
            return Err(Error::TailSearchFailure);
        }
    }
    let mut center = PAdic::zero(prime);
    // Refine until `depth` digits of the value are pinned: down to scale
    // `ord - depth` once the lineage commits to a leading digit at `ord`,
    // or to scale `-depth` while it hugs the origin. Commitment fixes the
    // radius, so this terminates within `start + 2 depth + 1` levels.
    let depth = depth as i64;
    loop {
        let resolved = match center.abs_exponent() {
            Some(e) => k <= e - depth,
            None => k <= -depth,
        };
        if resolved {
            break;
        }
        // Children of B_k(c): scale k-1, centers c + d p^{-k}.
        let mut children = Vec::with_capacity(prime as usize);
        let mut total = 0.0;
        for d in 0..prime {
            let child = if d == 0 {
                center.clone()
            } else {
                center.add(&PAdic::monomial(prime, d, -k)?)?
            };
            let ord_c = child.abs_exponent();
            let ord_cw = child.sub(w)?.abs_exponent();
            let weight = kernel.numerator(k - 1, ord_c, ord_cw)?;
            total += weight;
            children.push((child, weight));
        }
        if !(total > 0.0) {
            return Err(Error::TailSearchFailure);
        }
        let u: f64 = rng.random::<f64>() * total;
        let mut acc = 0.0;
        let mut pick = children.len() - 1;
        for (i, c) in children.iter().enumerate() {
            acc += c.1;
            if u < acc {
                pick = i;
                break;
            }
        }
        center = children.swap_remove(pick).0;
        k -= 1;
    }
    Ok(center)
}

/// One draw from the bridge law at the split `(t, t')`: the value `z` of the
/// process at time `t` given total displacement `w` at time `t + t'`,
/// resolved to `depth` digits.
pub fn sample_bridge_point(
    params: ProcessParams,
    t: f64,
    t_prime: f64,
    w: &PAdic,
    depth: usize,
    rng: &mut RandomStream,
    tol: SeriesTolerance,
) -> Result<PAdic> {
    if w.prime() != params.prime {
        return Err(Error::PrimeMismatch(params.prime, w.prime()));
    }
    let kernel = BridgeKernel::new(params, t, t_prime, w.abs_exponent(), tol)?;
    refine_bridge_point(&kernel, params, w, depth, rng)
}

/// Repeated bridge-path sampling with the exact kernels cached across
/// draws. Kernels depend on the owed displacement only through its radius
/// exponent, so one cache entry per (step, exponent) covers every path.
/// Holds interior mutability, so it is per-thread; clone one per worker.
pub struct BridgePathSampler {
    params: ProcessParams,
    spec: BridgeSpec,
    m_points: u32,
    depth: usize,
    tol: SeriesTolerance,
    kernels: std::cell::RefCell<HashMap<(u32, Option<i64>), BridgeKernel>>,
}

impl BridgePathSampler {
    pub fn new(
        spec: BridgeSpec,
        params: ProcessParams,
        m_points: u32,
        depth: usize,
        tol: SeriesTolerance,
    ) -> Result<BridgePathSampler> {
        if m_points == 0 {
            return Err(Error::InvalidGrid("bridge grid needs at least one step"));
        }
        if spec.x.prime() != params.prime {
            return Err(Error::PrimeMismatch(params.prime, spec.x.prime()));
        }
        if spec.y.prime() != params.prime {
            return Err(Error::PrimeMismatch(params.prime, spec.y.prime()));
        }
        if !(spec.t_pin > 0.0) {
            return Err(Error::NonPositive { what: "t_pin", value: spec.t_pin });
        }
        if depth == 0 {
            return Err(Error::ZeroDepth);
        }
        Ok(BridgePathSampler {
            params,
            spec,
            m_points,
            depth,
            tol,
            kernels: std::cell::RefCell::new(HashMap::new()),
        })
    }

    pub fn sample(&self, rng: &mut RandomStream) -> Result<PathSample> {
        let m = self.m_points as usize;
        let dt = self.spec.t_pin / self.m_points as f64;
        let mut times = Vec::with_capacity(m + 1);
        let mut positions = Vec::with_capacity(m + 1);
        times.push(0.0);
        positions.push(self.spec.x.clone());
        let mut v = self.spec.x.clone();
        for j in 1..self.m_points {
            let w_rem = self.spec.y.sub(&v)?;
            let t_after = self.spec.t_pin - j as f64 * dt;
            let key = (j, w_rem.abs_exponent());
            if !self.kernels.borrow().contains_key(&key) {
                let kernel =
                    BridgeKernel::new(self.params, dt, t_after, w_rem.abs_exponent(), self.tol)?;
                self.kernels.borrow_mut().insert(key, kernel);
            }
            let cache = self.kernels.borrow();
            let kernel = cache.get(&key).expect("kernel just inserted");
            let z = refine_bridge_point(kernel, self.params, &w_rem, self.depth, rng)?;
            drop(cache);
            v = v.add(&z)?;
            times.push(j as f64 * dt);
            positions.push(v.clone());
        }
        times.push(self.spec.t_pin);
        positions.push(self.spec.y.clone());
        Ok(PathSample {
            params: self.params,
            times,
            positions,
            origin: self.spec.x.clone(),
        })
    }
}

/// A bridge path on the uniform grid over `[0, spec.t_pin]`: each step draws
/// the next increment conditionally on the displacement still owed to the
/// endpoint, and the final position is `spec.y` exactly.
pub fn sample_bridge_path(
    spec: &BridgeSpec,
    params: ProcessParams,
    m_points: u32,
    depth: usize,
    rng: &mut RandomStream,
    tol: SeriesTolerance,
) -> Result<PathSample> {
    BridgePathSampler::new(spec.clone(), params, m_points, depth, tol)?.sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::{bridge_ball_prob, circle_mass};

    fn tol() -> SeriesTolerance {
        SeriesTolerance::default()
    }

    fn params221() -> ProcessParams {
        ProcessParams::new(2, 1.0, 1.0).unwrap()
    }

    #[test]
    fn streams_reproduce_and_separate() {
        let mut a = RandomStream::new(7, 3);
        let mut b = RandomStream::new(7, 3);
        let mut c = RandomStream::new(7, 4);
        let draws_a: Vec<u64> = (0..8).map(|_| a.next_u64()).collect();
        let draws_b: Vec<u64> = (0..8).map(|_| b.next_u64()).collect();
        let draws_c: Vec<u64> = (0..8).map(|_| c.next_u64()).collect();
        assert_eq!(draws_a, draws_b);
        assert_ne!(draws_a, draws_c);
    }

    #[test]
    fn increment_table_is_a_distribution() {
        let s = IncrementSampler::new(params221(), 1.0, tol()).unwrap();
        let (lo, hi) = s.radius_range();
        assert!(lo < 0 && hi > 0);
        let total: f64 = (lo..=hi).map(|r| s.pmf(r)).sum();
        assert!((total - 1.0).abs() < 1e-12, "pmf sums to {total}");
        // Bin masses equal the exact circle masses inside the table.
        for r in lo + 1..=hi {
            let exact = circle_mass(params221(), 1.0, r, tol()).unwrap().value;
            assert!((s.pmf(r) - exact).abs() < 1e-13, "r = {r}");
        }
    }

    #[test]
    fn increments_live_on_their_circle() {
        let params = params221();
        let s = IncrementSampler::new(params, 0.7, tol()).unwrap();
        let mut rng = RandomStream::new(11, 0);
        let (lo, hi) = s.radius_range();
        for _ in 0..200 {
            let x = s.sample(24, &mut rng).unwrap();
            let e = x.abs_exponent().expect("circle sample is never zero");
            assert!(e >= lo && e <= hi);
        }
    }

    #[test]
    fn tiny_time_keeps_increments_small() {
        let params = params221();
        let t = 1e-4;
        let escape = 1.0 - ball_mass(params, t, 0, tol()).unwrap().value;
        assert!(escape < 1e-3, "exact escape mass {escape}");
        let s = IncrementSampler::new(params, t, tol()).unwrap();
        let mut rng = RandomStream::new(5, 0);
        let big = (0..2000)
            .filter(|_| {
                let x = s.sample(8, &mut rng).unwrap();
                x.abs_exponent().is_some_and(|e| e > 0)
            })
            .count();
        assert!(big <= 4, "{big} of 2000 increments escaped B_0");
    }

    #[test]
    fn paths_start_at_the_origin_and_are_deterministic() {
        let params = params221();
        let origin = PAdic::from_integer(2, 3).unwrap();
        let mut rng1 = RandomStream::new(42, 9);
        let mut rng2 = RandomStream::new(42, 9);
        let p1 = sample_path(params, 2.0, 16, &origin, 24, &mut rng1, tol()).unwrap();
        let p2 = sample_path(params, 2.0, 16, &origin, 24, &mut rng2, tol()).unwrap();
        assert_eq!(p1.positions[0], origin);
        assert_eq!(p1.times.len(), 17);
        assert_eq!(p1.times[16], 2.0);
        let render: Vec<String> = p1.positions.iter().map(|x| x.to_string()).collect();
        let render2: Vec<String> = p2.positions.iter().map(|x| x.to_string()).collect();
        assert_eq!(render, render2);
    }

    #[test]
    fn sup_norm_and_exit_agree() {
        let params = params221();
        let origin = PAdic::zero(2);
        let mut rng = RandomStream::new(1, 1);
        for trial in 0..20 {
            let path = sample_path(params, 1.0, 8, &origin, 16, &mut rng, tol()).unwrap();
            let sup = sup_norm(&path, &origin).unwrap();
            for a in -2..=3 {
                let exited = first_exit_index(&path, &origin, a).unwrap();
                let should_exit = sup.is_some_and(|s| s > a);
                assert_eq!(exited.is_some(), should_exit, "trial {trial} a {a}");
            }
            // Exit index is nondecreasing as the ball grows.
            let mut prev = Some(0usize);
            for a in -2..=3 {
                let e = first_exit_index(&path, &origin, a).unwrap();
                match (prev, e) {
                    (Some(i), Some(j)) => assert!(j >= i),
                    (None, Some(_)) => panic!("exit reappeared at a = {a}"),
                    _ => {}
                }
                prev = e;
            }
        }
    }

    #[test]
    fn sup_norm_translation_invariance() {
        let params = params221();
        let origin = PAdic::zero(2);
        let mut rng = RandomStream::new(8, 0);
        let path = sample_path(params, 1.0, 6, &origin, 16, &mut rng, tol()).unwrap();
        let shift = PAdic::from_ratio(2, 7, 4).unwrap();
        let shifted = PathSample {
            params,
            times: path.times.clone(),
            positions: path.positions.iter().map(|x| x.add(&shift).unwrap()).collect(),
            origin: origin.add(&shift).unwrap(),
        };
        let center = PAdic::from_integer(2, 5).unwrap();
        let moved_center = center.add(&shift).unwrap();
        assert_eq!(
            sup_norm(&path, &center).unwrap(),
            sup_norm(&shifted, &moved_center).unwrap()
        );
    }

    #[test]
    fn constant_path_has_no_radius() {
        let params = params221();
        let c = PAdic::from_integer(2, 6).unwrap();
        let path = PathSample {
            params,
            times: vec![0.0, 1.0],
            positions: vec![c.clone(), c.clone()],
            origin: c.clone(),
        };
        assert_eq!(sup_norm(&path, &c).unwrap(), None);
        assert_eq!(first_exit_index(&path, &c, -5).unwrap(), None);
    }

    #[test]
    fn child_masses_partition_the_parent() {
        let params = params221();
        let kernel = BridgeKernel::new(params, 0.4, 0.6, Some(0), tol()).unwrap();
        let w = PAdic::from_integer(2, 1).unwrap();
        // Walk one lineage down from B_2(0) and check the categorical
        // weights at every level.
        let mut center = PAdic::zero(2);
        let mut k = 2i64;
        for _ in 0..6 {
            let parent = kernel
                .numerator(k, center.abs_exponent(), center.sub(&w).unwrap().abs_exponent())
                .unwrap();
            let mut total = 0.0;
            let mut heaviest = (center.clone(), f64::MIN);
            for d in 0..2u32 {
                let child = if d == 0 {
                    center.clone()
                } else {
                    center.add(&PAdic::monomial(2, d, -k).unwrap()).unwrap()
                };
                let wgt = kernel
                    .numerator(k - 1, child.abs_exponent(), child.sub(&w).unwrap().abs_exponent())
                    .unwrap();
                assert!(wgt >= 0.0);
                total += wgt;
                if wgt > heaviest.1 {
                    heaviest = (child, wgt);
                }
            }
            assert!(
                (total - parent).abs() <= 1e-12 * parent.max(1e-300),
                "children sum {total} vs parent {parent} at k = {k}"
            );
            center = heaviest.0;
            k -= 1;
        }
    }

    #[test]
    fn bridge_point_matches_exact_ball_probabilities() {
        let params = params221();
        let w = PAdic::from_integer(2, 1).unwrap();
        let mut rng = RandomStream::new(2024, 0);
        let n = 4000usize;
        let mut hits = [0usize; 3];
        let balls: [(PAdic, i64); 3] =
            [(PAdic::zero(2), -1), (PAdic::zero(2), 0), (w.clone(), -2)];
        for _ in 0..n {
            let z = sample_bridge_point(params, 0.4, 0.6, &w, 24, &mut rng, tol()).unwrap();
            for (i, (c, k)) in balls.iter().enumerate() {
                if z.dist_exponent(c).unwrap().map_or(true, |e| e <= *k) {
                    hits[i] += 1;
                }
            }
        }
        for (i, (c, k)) in balls.iter().enumerate() {
            let exact = bridge_ball_prob(params, 0.4, 0.6, &w, c, *k, tol()).unwrap();
            let est = hits[i] as f64 / n as f64;
            let se = (exact * (1.0 - exact) / n as f64).sqrt();
            assert!(
                (est - exact).abs() <= 4.0 * se,
                "ball {i}: est {est} exact {exact} se {se}"
            );
        }
    }

    #[test]
    fn bridge_symmetry_at_equal_splits() {
        // w = 0 and t = t' make the law symmetric under negation, so the
        // leading digit of a 3-adic draw is 1 or 2 with equal probability.
        let params = ProcessParams::new(3, 1.0, 1.0).unwrap();
        let w = PAdic::zero(3);
        let mut rng = RandomStream::new(31, 0);
        let n = 3000usize;
        let mut ones = 0usize;
        let mut nonzero = 0usize;
        for _ in 0..n {
            let z = sample_bridge_point(params, 0.5, 0.5, &w, 20, &mut rng, tol()).unwrap();
            if let Some(e) = z.abs_exponent() {
                nonzero += 1;
                if z.digit(-e) == 1 {
                    ones += 1;
                }
            }
        }
        assert!(nonzero > n * 9 / 10, "{nonzero} nonzero draws");
        let est = ones as f64 / nonzero as f64;
        let se = (0.25 / nonzero as f64).sqrt();
        assert!((est - 0.5).abs() <= 4.0 * se, "leading digit bias: {est}");
    }

    #[test]
    fn bridge_paths_pin_exactly() {
        let params = params221();
        let spec = BridgeSpec::new(
            1.0,
            PAdic::zero(2),
            PAdic::from_ratio(2, 3, 2).unwrap(),
        )
        .unwrap();
        let mut rng = RandomStream::new(77, 5);
        for m in [1u32, 2, 7] {
            let path = sample_bridge_path(&spec, params, m, 24, &mut rng, tol()).unwrap();
            assert_eq!(path.positions.len() as u32, m + 1);
            assert_eq!(path.positions[0], spec.x);
            assert_eq!(*path.positions.last().unwrap(), spec.y);
            assert_eq!(*path.times.last().unwrap(), 1.0);
        }
    }

    #[test]
    fn bridge_path_determinism() {
        let params = params221();
        let spec = BridgeSpec::new(2.0, PAdic::zero(2), PAdic::from_integer(2, 5).unwrap()).unwrap();
        let run = |seed| {
            let mut rng = RandomStream::new(seed, 1);
            let p = sample_bridge_path(&spec, params, 8, 24, &mut rng, tol()).unwrap();
            p.positions.iter().map(|x| x.to_string()).collect::<Vec<_>>()
        };
        assert_eq!(run(9), run(9));
        assert_ne!(run(9), run(10));
    }

    #[test]
    fn csv_dump_shape() {
        let params = params221();
        let path = PathSample {
            params,
            times: vec![0.0, 0.5],
            positions: vec![PAdic::zero(2), PAdic::from_integer(2, 2).unwrap()],
            origin: PAdic::zero(2),
        };
        let csv = path.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "time,valuation,digits");
        assert_eq!(lines[1], "0,inf,");
        assert_eq!(lines[2], "0.5,1,1");
        assert_eq!(lines.len(), 3);
    }

    #[test]
    fn flattening_split_approaches_free_increments() {
        // With t' enormous the pinning barely constrains the first leg, so
        // bridge radii should follow the free radius law.
        let params = params221();
        let w = PAdic::from_integer(2, 1).unwrap();
        let mut rng = RandomStream::new(13, 2);
        let n = 2000usize;
        let mut counts: HashMap<i64, usize> = HashMap::new();
        for _ in 0..n {
            let z = sample_bridge_point(params, 1.0, 5e5, &w, 24, &mut rng, tol()).unwrap();
            *counts.entry(z.abs_exponent().unwrap_or(i64::MIN)).or_default() += 1;
        }
        // The flattening is only approximate, so compare the heaviest bins
        // at a generous 5 SE.
        for r in [-1i64, 0, 1] {
            let exact = circle_mass(params, 1.0, r, tol()).unwrap().value;
            let est = *counts.get(&r).unwrap_or(&0) as f64 / n as f64;
            let se = (exact * (1.0 - exact) / n as f64).sqrt();
            assert!(
                (est - exact).abs() <= 5.0 * se,
                "radius {r}: est {est} vs free {exact}"
            );
        }
    }
}
