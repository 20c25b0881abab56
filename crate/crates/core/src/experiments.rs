//! Monte Carlo estimators with binomial confidence intervals, deterministic
//! inequality verification over parameter grids, and grid-refinement
//! convergence tables.
//!
//! Estimates are sharded into fixed-size chunks, each driven by its own
//! `(seed, stream)` pair, and reduced by integer counts; results are
//! bit-identical for a fixed seed no matter how many workers run the
//! chunks.

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::{PAdic, RadiusExponent};
use crate::radial::{
    ball_convolution, ball_mass, density_radial, endpoint_ball_mass, exact_exit_prob,
    grid_containment_with_endpoint, grid_sup_prob, ProcessParams, SeriesTolerance,
};
use crate::sampler::{BridgePathSampler, BridgeSpec, IncrementSampler, RandomStream};
use crate::stats::binomial_se;

/// Samples per stream chunk; fixed so that estimates do not depend on how
/// chunks are scheduled over workers.
const CHUNK: u64 = 4096;

/// Stream-id stride separating independent cases inside one experiment.
const CASE_STREAM_STRIDE: u64 = 1 << 40;

/// A binomial proportion estimate with its sampling metadata.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub n: u64,
    pub std_error: f64,
    pub ci95: (f64, f64),
    pub seed: u64,
    #[serde(skip)]
    pub wall_time_s: f64,
}

impl McEstimate {
    fn from_counts(hits: u64, n: u64, seed: u64, wall_time_s: f64) -> McEstimate {
        let estimate = hits as f64 / n as f64;
        let std_error = binomial_se(estimate, n);
        let half = 1.96 * std_error;
        McEstimate {
            estimate,
            n,
            std_error,
            ci95: (estimate - half, estimate + half),
            seed,
            wall_time_s,
        }
    }
}

/// One verified comparison: `lhs` against `rhs` with the achieved `margin`
/// (oriented so that nonnegative is passing) and its verdict.
#[derive(Clone, Debug, Serialize)]
pub struct IneqCase {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct InequalityReport {
    pub cases: Vec<IneqCase>,
    pub all_pass: bool,
}

impl InequalityReport {
    fn from_cases(cases: Vec<IneqCase>) -> InequalityReport {
        let all_pass = cases.iter().all(|c| c.pass);
        InequalityReport { cases, all_pass }
    }
}

/// One row of a grid-refinement table.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ConvergenceRow {
    pub m: u32,
    pub grid_prob: f64,
    pub exact: f64,
    pub abs_error: f64,
    /// Error of the previous row divided by this row's error.
    pub ratio: Option<f64>,
}

#[cfg(feature = "parallel")]
fn run_chunks<const K: usize, F>(chunks: u64, f: F) -> Result<[u64; K]>
where
    F: Fn(u64) -> Result<[u64; K]> + Sync + Send,
{
    use rayon::prelude::*;
    (0..chunks).into_par_iter().map(f).try_reduce(
        || [0u64; K],
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            Ok(a)
        },
    )
}

#[cfg(not(feature = "parallel"))]
fn run_chunks<const K: usize, F>(chunks: u64, f: F) -> Result<[u64; K]>
where
    F: Fn(u64) -> Result<[u64; K]> + Sync + Send,
{
    let mut total = [0u64; K];
    for c in 0..chunks {
        for (x, y) in total.iter_mut().zip(f(c)?) {
            *x += y;
        }
    }
    Ok(total)
}

/// Runs `n` samples in fixed chunks, each chunk on stream
/// `stream_base + chunk index`, and accumulates event counts.
fn mc_counts<const K: usize, F>(
    n: u64,
    seed: u64,
    stream_base: u64,
    per_chunk: F,
) -> Result<[u64; K]>
where
    F: Fn(&mut RandomStream, u64) -> Result<[u64; K]> + Sync + Send,
{
    if n == 0 {
        return Err(Error::ZeroSamples);
    }
    let chunks = n.div_ceil(CHUNK);
    run_chunks(chunks, |c| {
        let mut rng = RandomStream::new(seed, stream_base + c);
        let count = CHUNK.min(n - c * CHUNK);
        per_chunk(&mut rng, count)
    })
}

/// Exit estimate for paths started at `x`, measured around `center`: the
/// fraction whose every grid position stays in `B_a(center)`.
#[allow(clippy::too_many_arguments)]
fn mc_containment(
    params: ProcessParams,
    t_end: f64,
    a: RadiusExponent,
    x: &PAdic,
    center: &PAdic,
    m_points: u32,
    n: u64,
    seed: u64,
    stream_base: u64,
    depth: usize,
    tol: SeriesTolerance,
) -> Result<McEstimate> {
    if m_points == 0 {
        return Err(Error::InvalidGrid("grid must have at least one point"));
    }
    let start = Instant::now();
    let sampler = IncrementSampler::new(params, t_end / m_points as f64, tol)?;
    let [hits] = mc_counts(n, seed, stream_base, |rng, count| {
        let mut inside_count = 0u64;
        for _ in 0..count {
            let mut v = x.clone();
            let mut inside = v.dist_exponent(center)?.map_or(true, |e| e <= a);
            if inside {
                for _ in 0..m_points {
                    v = v.add(&sampler.sample(depth, rng)?)?;
                    if v.dist_exponent(center)?.is_some_and(|e| e > a) {
                        inside = false;
                        break;
                    }
                }
            }
            if inside {
                inside_count += 1;
            }
        }
        Ok([inside_count])
    })?;
    Ok(McEstimate::from_counts(hits, n, seed, start.elapsed().as_secs_f64()))
}

/// Fraction of sampled grid paths from the origin that stay inside `B_a(0)`
/// at every grid time `j T / m_points`.
#[allow(clippy::too_many_arguments)]
pub fn mc_exit_prob(
    params: ProcessParams,
    t_end: f64,
    a: RadiusExponent,
    m_points: u32,
    n: u64,
    seed: u64,
    depth: usize,
    tol: SeriesTolerance,
) -> Result<McEstimate> {
    if t_end < 0.0 {
        return Err(Error::NonPositive { what: "T", value: t_end });
    }
    if n == 0 {
        return Err(Error::ZeroSamples);
    }
    if t_end == 0.0 {
        // The path has not moved yet.
        return Ok(McEstimate::from_counts(n, n, seed, 0.0));
    }
    let zero = PAdic::zero(params.prime);
    mc_containment(params, t_end, a, &zero, &zero, m_points, n, seed, 0, depth, tol)
}

/// Checks that the containment probability is blind to translation and to
/// the choice of center: paths from `x` measured around `x`, and around
/// another center of the same ball, must both match the closed form within
/// 4 standard errors.
#[allow(clippy::too_many_arguments)]
pub fn mc_translation_check(
    params: ProcessParams,
    t_end: f64,
    a: RadiusExponent,
    x: &PAdic,
    m_points: u32,
    n: u64,
    seed: u64,
    depth: usize,
    tol: SeriesTolerance,
) -> Result<InequalityReport> {
    if x.prime() != params.prime {
        return Err(Error::PrimeMismatch(params.prime, x.prime()));
    }
    if !(t_end > 0.0) {
        return Err(Error::NonPositive { what: "T", value: t_end });
    }
    let closed = exact_exit_prob(params, t_end, a)?;
    // A different center of the same ball: offset by a boundary point.
    let center2 = x.add(&PAdic::monomial(params.prime, 1, -a)?)?;
    let est1 = mc_containment(params, t_end, a, x, x, m_points, n, seed, 0, depth, tol)?;
    let est2 = mc_containment(
        params,
        t_end,
        a,
        x,
        &center2,
        m_points,
        n,
        seed,
        CASE_STREAM_STRIDE,
        depth,
        tol,
    )?;
    let case = |label: &str, est: &McEstimate| {
        let margin = 4.0 * est.std_error - (est.estimate - closed).abs();
        IneqCase {
            label: label.to_string(),
            lhs: est.estimate,
            rhs: closed,
            margin,
            pass: margin >= 0.0,
        }
    };
    Ok(InequalityReport::from_cases(vec![
        case("centered at the start point", &est1),
        case("centered at another point of the ball", &est2),
    ]))
}

/// Bridge-then-free containment probability: paths pinned to `spec.y` at
/// `spec.t_pin`, released until `t_total`, counted as hits when every grid
/// position stays in `B_a(spec.x)`.
#[allow(clippy::too_many_arguments)]
pub fn mc_bridge_exit(
    params: ProcessParams,
    spec: &BridgeSpec,
    t_total: f64,
    a: RadiusExponent,
    m_points: u32,
    n: u64,
    seed: u64,
    depth: usize,
    tol: SeriesTolerance,
) -> Result<McEstimate> {
    mc_bridge_exit_streamed(params, spec, t_total, a, m_points, n, seed, 0, depth, tol)
}

#[allow(clippy::too_many_arguments)]
fn mc_bridge_exit_streamed(
    params: ProcessParams,
    spec: &BridgeSpec,
    t_total: f64,
    a: RadiusExponent,
    m_points: u32,
    n: u64,
    seed: u64,
    stream_base: u64,
    depth: usize,
    tol: SeriesTolerance,
) -> Result<McEstimate> {
    if spec.t_pin > t_total {
        return Err(Error::HypothesisViolation(format!(
            "pin time {} exceeds horizon {}",
            spec.t_pin, t_total
        )));
    }
    if m_points == 0 {
        return Err(Error::InvalidGrid("grid must have at least one point"));
    }
    if n == 0 {
        return Err(Error::ZeroSamples);
    }
    let displacement = spec.y.sub(&spec.x)?;
    if displacement.abs_exponent().is_some_and(|e| e > a) {
        return Err(Error::HypothesisViolation(
            "endpoint lies outside B_a around the start".to_string(),
        ));
    }
    let start = Instant::now();
    // Split the grid budget proportionally between the pinned and free legs.
    let frac = spec.t_pin / t_total;
    let m_bridge = ((m_points as f64 * frac).round() as u32).clamp(1, m_points);
    let m_free = m_points - m_bridge;
    let free_sampler = if m_free > 0 {
        Some(IncrementSampler::new(
            params,
            (t_total - spec.t_pin) / m_free as f64,
            tol,
        )?)
    } else {
        None
    };
    let [hits] = mc_counts(n, seed, stream_base, |rng, count| {
        // Exact-kernel caches are per-thread: one per chunk, warmed over
        // its paths.
        let bridge = BridgePathSampler::new(spec.clone(), params, m_bridge, depth, tol)?;
        let mut inside_count = 0u64;
        'paths: for _ in 0..count {
            let path = bridge.sample(rng)?;
            for pos in &path.positions {
                if pos.dist_exponent(&spec.x)?.is_some_and(|e| e > a) {
                    continue 'paths;
                }
            }
            if let Some(fs) = &free_sampler {
                let mut v = spec.y.clone();
                for _ in 0..m_free {
                    v = v.add(&fs.sample(depth, rng)?)?;
                    if v.dist_exponent(&spec.x)?.is_some_and(|e| e > a) {
                        continue 'paths;
                    }
                }
            }
            inside_count += 1;
        }
        Ok([inside_count])
    })?;
    Ok(McEstimate::from_counts(hits, n, seed, start.elapsed().as_secs_f64()))
}

/// The default 81-point verification grid: all combinations keep the
/// evaluation point inside the ball.
pub fn default_prop3_grid() -> Vec<(f64, f64, i64, i64)> {
    let mut grid = Vec::with_capacity(81);
    for &t in &[0.25, 1.0, 4.0] {
        for &tp in &[0.25, 1.0, 4.0] {
            for &z in &[-3i64, -2, -1] {
                for &a in &[-1i64, 0, 2] {
                    grid.push((t, tp, z, a));
                }
            }
        }
    }
    grid
}

/// Deterministic check that a convolution restricted to a ball strictly
/// beats its factored lower bounds: for each case,
/// `conv(t, t', z, a) > rho(t + t', z) * ball_mass(t, a)`, and when `z`
/// lies in the ball also the variant with `ball_mass(t', a)`.
pub fn verify_prop3(
    params: ProcessParams,
    grid: &[(f64, f64, i64, i64)],
    tol: SeriesTolerance,
) -> Result<InequalityReport> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("verification grid is empty"));
    }
    let mut cases = Vec::with_capacity(2 * grid.len());
    for &(t, tp, z, a) in grid {
        let conv = ball_convolution(params, t, tp, Some(z), a, tol)?;
        let dens = density_radial(params, t + tp, z, tol)?.value;
        let rhs = dens * ball_mass(params, t, a, tol)?.value;
        let margin = conv - rhs;
        cases.push(IneqCase {
            label: format!("t={t} t'={tp} |z|=p^{z} a={a}"),
            lhs: conv,
            rhs,
            margin,
            pass: margin > 10.0 * tol.eps,
        });
        if z <= a {
            // For points of the ball a change of variables swaps the two
            // time arguments, so the other factored bound holds too.
            let rhs2 = dens * ball_mass(params, tp, a, tol)?.value;
            let margin2 = conv - rhs2;
            cases.push(IneqCase {
                label: format!("variant t={t} t'={tp} |z|=p^{z} a={a}"),
                lhs: conv,
                rhs: rhs2,
                margin: margin2,
                pass: margin2 > 10.0 * tol.eps,
            });
        }
    }
    Ok(InequalityReport::from_cases(cases))
}

/// Exact strict-inequality check for one or two intermediate containment
/// steps: the joint probability of staying in `B_a` on the grid and ending
/// in `B_{-n}(y)` strictly exceeds the product of the endpoint mass and the
/// per-step ball masses.
pub fn verify_prop4_small_m(
    params: ProcessParams,
    t_list: &[f64],
    a: RadiusExponent,
    y_exp: Option<RadiusExponent>,
    n_cond: u32,
    tol: SeriesTolerance,
) -> Result<InequalityReport> {
    let lhs = grid_containment_with_endpoint(params, t_list, a, y_exp, n_cond, tol)?;
    let total: f64 = t_list.iter().sum();
    let mut rhs = endpoint_ball_mass(params, total, y_exp, n_cond, tol)?;
    for &t in &t_list[..t_list.len() - 1] {
        rhs *= ball_mass(params, t, a, tol)?.value;
    }
    let margin = lhs - rhs;
    let label = format!(
        "{} containment steps, endpoint ball p^{}",
        t_list.len() - 1,
        -(n_cond as i64)
    );
    Ok(InequalityReport::from_cases(vec![IneqCase {
        label,
        lhs,
        rhs,
        margin,
        pass: margin > 10.0 * tol.eps,
    }]))
}

/// Sampled conditional-probability checks on shared paths: conditioning on
/// grid containment raises the endpoint-ball probability, and conditioning
/// on the endpoint ball raises the containment probability. Each listed
/// grid size is read off the same sampled skeletons (sizes must divide the
/// largest); unconditional sides are exact. Passing requires a
/// 3-standard-error margin.
#[allow(clippy::too_many_arguments)]
pub fn verify_conditional_props(
    params: ProcessParams,
    t: f64,
    a: RadiusExponent,
    y_exp: Option<RadiusExponent>,
    n_cond: u32,
    m_list: &[u32],
    n: u64,
    seed: u64,
    depth: usize,
    tol: SeriesTolerance,
) -> Result<InequalityReport> {
    if m_list.is_empty() || m_list.len() > 2 {
        return Err(Error::InvalidGrid("one or two grid sizes are supported"));
    }
    let m_max = *m_list.iter().max().expect("nonempty");
    if m_list.iter().any(|&m| m == 0 || m_max % m != 0) {
        return Err(Error::InvalidGrid("grid sizes must divide the largest one"));
    }
    let n_ball = -(n_cond as i64);
    if n_ball > a {
        return Err(Error::HypothesisViolation(format!(
            "B_{n_ball}(y) is not contained in B_{a}"
        )));
    }
    if let Some(e) = y_exp {
        if e > a {
            return Err(Error::HypothesisViolation(format!(
                "y with |y| = p^{e} lies outside B_{a}"
            )));
        }
    }
    if !(t > 0.0) {
        return Err(Error::NonPositive { what: "t", value: t });
    }
    let y = match y_exp {
        None => PAdic::zero(params.prime),
        Some(e) => PAdic::monomial(params.prime, 1, -e)?,
    };
    let sampler = IncrementSampler::new(params, t / m_max as f64, tol)?;
    let strides: Vec<u32> = m_list.iter().map(|&m| m_max / m).collect();
    let grids = m_list.len();
    // Slots: [contained g0, both g0, contained g1, both g1, endpoint].
    let totals: [u64; 5] = mc_counts(n, seed, 0, |rng, count| {
        let mut acc = [0u64; 5];
        for _ in 0..count {
            let mut v = PAdic::zero(params.prime);
            let mut contained = [true; 2];
            for j in 1..=m_max {
                v = v.add(&sampler.sample(depth, rng)?)?;
                if v.abs_exponent().is_some_and(|e| e > a) {
                    for (g, &stride) in strides.iter().enumerate() {
                        // A coarse grid only observes multiples of its
                        // stride.
                        if j % stride == 0 {
                            contained[g] = false;
                        }
                    }
                }
            }
            let in_ball = v.dist_exponent(&y)?.map_or(true, |e| e <= n_ball);
            if in_ball {
                acc[4] += 1;
            }
            for g in 0..grids {
                if contained[g] {
                    acc[2 * g] += 1;
                    if in_ball {
                        acc[2 * g + 1] += 1;
                    }
                }
            }
        }
        Ok(acc)
    })?;
    let c_end = totals[4];
    if c_end == 0 {
        return Err(Error::ZeroConditionCount);
    }
    let p_end_exact = endpoint_ball_mass(params, t, y_exp, n_cond, tol)?;
    let mut cases = Vec::with_capacity(2 * grids);
    for (g, &m) in m_list.iter().enumerate() {
        let c_sup = totals[2 * g];
        let c_both = totals[2 * g + 1];
        if c_sup == 0 {
            return Err(Error::ZeroConditionCount);
        }
        let p_sup_exact = grid_sup_prob(params, t, a, m, tol)?;
        let q = c_both as f64 / c_sup as f64;
        let se_q = binomial_se(q, c_sup);
        let margin_a = q - p_end_exact - 3.0 * se_q;
        cases.push(IneqCase {
            label: format!("endpoint given containment, m={m}"),
            lhs: q,
            rhs: p_end_exact,
            margin: margin_a,
            pass: margin_a > 0.0,
        });
        let r = c_both as f64 / c_end as f64;
        let se_r = binomial_se(r, c_end);
        let margin_b = r - p_sup_exact - 3.0 * se_r;
        cases.push(IneqCase {
            label: format!("containment given endpoint, m={m}"),
            lhs: r,
            rhs: p_sup_exact,
            margin: margin_b,
            pass: margin_b > 0.0,
        });
    }
    Ok(InequalityReport::from_cases(cases))
}

/// The default 27-point composition grid.
pub fn default_semigroup_grid() -> Vec<(f64, f64, i64)> {
    let mut grid = Vec::with_capacity(27);
    for &t in &[0.25, 1.0, 4.0] {
        for &tp in &[0.25, 1.0, 4.0] {
            for &z in &[-2i64, 0, 1] {
                grid.push((t, tp, z));
            }
        }
    }
    grid
}

/// Checks the composition law of the kernel family: convolving over a ball
/// far larger than the evaluation radius reproduces the one-step density to
/// within 1e-8 absolute.
pub fn verify_semigroup(
    params: ProcessParams,
    grid: &[(f64, f64, i64)],
    tol: SeriesTolerance,
) -> Result<InequalityReport> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("verification grid is empty"));
    }
    const ALLOWANCE: f64 = 1e-8;
    let mut cases = Vec::with_capacity(grid.len());
    for &(t, tp, z) in grid {
        let conv = ball_convolution(params, t, tp, Some(z), z + 30, tol)?;
        let direct = density_radial(params, t + tp, z, tol)?.value;
        let margin = ALLOWANCE - (conv - direct).abs();
        cases.push(IneqCase {
            label: format!("t={t} t'={tp} |z|=p^{z}"),
            lhs: conv,
            rhs: direct,
            margin,
            pass: margin >= 0.0,
        });
    }
    Ok(InequalityReport::from_cases(cases))
}

/// Statistical check of the pinned-path containment inequality over six
/// cases: pin fraction in {1/4, 1/2, 1} and endpoint at the start or on the
/// boundary of the ball. Each bridge estimate must reach the closed form
/// minus 3 standard errors.
#[allow(clippy::too_many_arguments)]
pub fn verify_thm6(
    params: ProcessParams,
    t_total: f64,
    a: RadiusExponent,
    m_points: u32,
    n: u64,
    seed: u64,
    depth: usize,
    tol: SeriesTolerance,
) -> Result<InequalityReport> {
    let x = PAdic::zero(params.prime);
    let boundary = PAdic::monomial(params.prime, 1, -a)?;
    let closed = exact_exit_prob(params, t_total, a)?;
    let mut cases = Vec::with_capacity(6);
    let mut case_index = 0u64;
    for &frac in &[0.25, 0.5, 1.0] {
        for endpoint in [&x, &boundary] {
            let spec = BridgeSpec::new(frac * t_total, x.clone(), endpoint.clone())?;
            let est = mc_bridge_exit_streamed(
                params,
                &spec,
                t_total,
                a,
                m_points,
                n,
                seed,
                case_index * CASE_STREAM_STRIDE,
                depth,
                tol,
            )?;
            let margin = est.estimate - closed + 3.0 * est.std_error;
            let endpoint_desc =
                if endpoint.is_zero() { "return to start" } else { "boundary endpoint" };
            cases.push(IneqCase {
                label: format!("pin at {frac}T, {endpoint_desc}"),
                lhs: est.estimate,
                rhs: closed,
                margin,
                pass: margin >= 0.0,
            });
            case_index += 1;
        }
    }
    Ok(InequalityReport::from_cases(cases))
}

/// Grid probabilities against the closed form for each grid size, with the
/// error-shrink ratio between consecutive rows.
pub fn convergence_table(
    params: ProcessParams,
    t_total: f64,
    a: RadiusExponent,
    m_list: &[u32],
    tol: SeriesTolerance,
) -> Result<Vec<ConvergenceRow>> {
    if m_list.is_empty() {
        return Err(Error::InvalidGrid("m list is empty"));
    }
    if m_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidGrid("m list must be strictly increasing"));
    }
    let exact = exact_exit_prob(params, t_total, a)?;
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(m_list.len());
    for &m in m_list {
        let grid_prob = grid_sup_prob(params, t_total, a, m, tol)?;
        let abs_error = (grid_prob - exact).abs();
        let ratio = rows.last().map(|prev| prev.abs_error / abs_error);
        rows.push(ConvergenceRow { m, grid_prob, exact, abs_error, ratio });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> SeriesTolerance {
        SeriesTolerance::default()
    }

    fn params221() -> ProcessParams {
        ProcessParams::new(2, 1.0, 1.0).unwrap()
    }

    #[test]
    fn exit_estimates_are_reproducible_and_calibrated() {
        let params = params221();
        let e1 = mc_exit_prob(params, 1.0, 0, 8, 20_000, 5, 16, tol()).unwrap();
        let e2 = mc_exit_prob(params, 1.0, 0, 8, 20_000, 5, 16, tol()).unwrap();
        assert_eq!(e1.estimate, e2.estimate);
        assert_eq!(e1.n, 20_000);
        let target = grid_sup_prob(params, 1.0, 0, 8, tol()).unwrap();
        assert!(
            (e1.estimate - target).abs() <= 4.0 * e1.std_error,
            "est {} vs grid {target}",
            e1.estimate
        );
        // CI arithmetic.
        assert!((e1.ci95.1 - e1.ci95.0 - 2.0 * 1.96 * e1.std_error).abs() < 1e-15);
        assert!(e1.ci95.0 <= e1.estimate && e1.estimate <= e1.ci95.1);
    }

    #[test]
    fn zero_horizon_means_no_motion() {
        let est = mc_exit_prob(params221(), 0.0, -3, 4, 100, 1, 8, tol()).unwrap();
        assert_eq!(est.estimate, 1.0);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn sample_counts_are_validated() {
        assert!(matches!(
            mc_exit_prob(params221(), 1.0, 0, 8, 0, 1, 8, tol()),
            Err(Error::ZeroSamples)
        ));
    }

    #[test]
    fn huge_ball_traps_every_path() {
        let est = mc_exit_prob(params221(), 1.0, 40, 4, 2_000, 3, 8, tol()).unwrap();
        assert_eq!(est.estimate, 1.0);
    }

    #[test]
    fn translation_check_passes_off_origin() {
        let params = params221();
        let x = PAdic::from_ratio(2, 7, 2).unwrap();
        let report =
            mc_translation_check(params, 0.5, 0, &x, 8, 20_000, 11, 16, tol()).unwrap();
        assert_eq!(report.cases.len(), 2);
        assert!(report.all_pass, "cases: {:?}", report.cases);
    }

    #[test]
    fn bridge_exit_respects_the_lower_bound() {
        let params = params221();
        let spec = BridgeSpec::new(1.0, PAdic::zero(2), PAdic::zero(2)).unwrap();
        let est = mc_bridge_exit(params, &spec, 1.0, 0, 8, 5_000, 17, 16, tol()).unwrap();
        let closed = exact_exit_prob(params, 1.0, 0).unwrap();
        assert!(
            est.estimate >= closed - 3.0 * est.std_error,
            "bridge {} vs closed {closed}",
            est.estimate
        );
    }

    #[test]
    fn bridge_exit_validates_hypotheses() {
        let params = params221();
        let outside = PAdic::monomial(2, 1, -3).unwrap();
        let spec = BridgeSpec::new(1.0, PAdic::zero(2), outside).unwrap();
        assert!(matches!(
            mc_bridge_exit(params, &spec, 1.0, 0, 8, 100, 1, 8, tol()),
            Err(Error::HypothesisViolation(_))
        ));
        let ok = BridgeSpec::new(2.0, PAdic::zero(2), PAdic::zero(2)).unwrap();
        assert!(matches!(
            mc_bridge_exit(params, &ok, 1.0, 0, 8, 100, 1, 8, tol()),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn prop3_margins_are_strictly_positive() {
        let params = params221();
        let report = verify_prop3(params, &default_prop3_grid(), tol()).unwrap();
        assert!(report.all_pass);
        let min_margin =
            report.cases.iter().map(|c| c.margin).fold(f64::INFINITY, f64::min);
        assert!(min_margin > 1e-4, "min margin {min_margin}");
        assert!(verify_prop3(params, &[], tol()).is_err());
    }

    #[test]
    fn prop4_exact_cases_pass() {
        let params = params221();
        let one = verify_prop4_small_m(params, &[0.4, 0.6], 0, Some(-1), 2, tol()).unwrap();
        assert!(one.all_pass, "{:?}", one.cases);
        let two =
            verify_prop4_small_m(params, &[0.4, 0.6, 0.5], 0, Some(-1), 2, tol()).unwrap();
        assert!(two.all_pass, "{:?}", two.cases);
    }

    #[test]
    fn conditional_props_hold_on_a_small_run() {
        let params = params221();
        let report = verify_conditional_props(
            params,
            1.0,
            0,
            None,
            2,
            &[4, 16],
            60_000,
            23,
            16,
            tol(),
        )
        .unwrap();
        assert_eq!(report.cases.len(), 4);
        assert!(report.all_pass, "{:#?}", report.cases);
    }

    #[test]
    fn conditional_props_validate_grids() {
        let params = params221();
        assert!(verify_conditional_props(params, 1.0, 0, None, 2, &[], 100, 1, 8, tol())
            .is_err());
        assert!(verify_conditional_props(
            params,
            1.0,
            0,
            None,
            2,
            &[3, 16],
            100,
            1,
            8,
            tol()
        )
        .is_err());
        // Endpoint ball poking out of the containment ball.
        assert!(matches!(
            verify_conditional_props(params, 1.0, -3, None, 2, &[4], 100, 1, 8, tol()),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn semigroup_composition_holds() {
        let params = params221();
        let report = verify_semigroup(params, &default_semigroup_grid(), tol()).unwrap();
        assert!(report.all_pass);
    }

    #[test]
    fn thm6_small_run_passes() {
        let params = params221();
        let report = verify_thm6(params, 1.0, 0, 4, 3_000, 29, 16, tol()).unwrap();
        assert_eq!(report.cases.len(), 6);
        assert!(report.all_pass, "{:#?}", report.cases);
    }

    #[test]
    fn convergence_errors_shrink() {
        let params = params221();
        let rows = convergence_table(params, 1.0, 0, &[1, 2, 4, 8, 16], tol()).unwrap();
        assert_eq!(rows.len(), 5);
        assert!(rows.first().unwrap().abs_error > rows.last().unwrap().abs_error);
        assert!(rows[0].ratio.is_none());
        for row in &rows[1..] {
            assert!(row.ratio.unwrap() > 1.0, "{row:?}");
        }
        assert!(convergence_table(params, 1.0, 0, &[4, 4], tol()).is_err());
        assert!(convergence_table(params, 1.0, 0, &[], tol()).is_err());
    }
}
