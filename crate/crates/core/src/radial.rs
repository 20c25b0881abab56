//! Series evaluation of the radial heat kernel and everything derived from
//! it: ball and circle masses, the exit-rate constant `alpha`, the
//! closed-form exit probability, convolutions over balls, and the ball
//! probabilities of the bridge law.
//!
//! Every sum here is an infinite series over radius exponents with provable
//! geometric (or faster) tails in both directions. Truncation always carries
//! an analytic bound on the discarded tail, reported as
//! [`RadialValue::attained_tolerance`].

use std::cell::RefCell;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::padic::{is_prime, PAdic, RadiusExponent};

/// Parameters of the diffusion: prime `p`, radial exponent `b` of the
/// generator, diffusion constant `sigma`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProcessParams {
    pub prime: u32,
    pub b: f64,
    pub sigma: f64,
}

impl ProcessParams {
    pub fn new(prime: u32, b: f64, sigma: f64) -> Result<ProcessParams> {
        if !is_prime(prime) {
            return Err(Error::NotPrime(prime));
        }
        if !(b > 0.0) {
            return Err(Error::NonPositive { what: "b", value: b });
        }
        if !(sigma > 0.0) {
            return Err(Error::NonPositive { what: "sigma", value: sigma });
        }
        Ok(ProcessParams { prime, b, sigma })
    }

    /// The exit-rate constant `1 - (p^b - 1)/(p^(b+1) - 1)`, always in
    /// `(1 - 1/p, 1)`.
    pub fn alpha(&self) -> f64 {
        let p = self.prime as f64;
        1.0 - (p.powf(self.b) - 1.0) / (p.powf(self.b + 1.0) - 1.0)
    }
}

/// Absolute truncation tolerance for the radial series plus a term-count
/// guard against runaway loops.
#[derive(Clone, Copy, Debug)]
pub struct SeriesTolerance {
    pub eps: f64,
    pub max_terms: usize,
}

impl Default for SeriesTolerance {
    fn default() -> Self {
        SeriesTolerance { eps: 1e-14, max_terms: 1_000_000 }
    }
}

/// A nonnegative series value together with the analytic bound on the
/// discarded tail at the point the series was truncated.
#[derive(Clone, Copy, Debug)]
pub struct RadialValue {
    pub value: f64,
    pub attained_tolerance: f64,
}

/// `p^e` as a float.
fn powi(p: f64, e: i64) -> f64 {
    p.powi(e as i32)
}

/// Haar measure of the circle of radius `p^r`.
fn mu_circle(p: f64, r: i64) -> f64 {
    powi(p, r) * (1.0 - 1.0 / p)
}

/// Per-call series state for one `(params, t)`: evaluates
/// `E(r) = exp(-sigma t p^(r b))` with overflow guards.
#[derive(Clone, Copy)]
struct Series {
    p: f64,
    b: f64,
    ln_st: f64,
    sigma_t: f64,
}

impl Series {
    fn new(params: ProcessParams, t: f64) -> Result<Series> {
        if !(t > 0.0) {
            return Err(Error::NonPositive { what: "t", value: t });
        }
        let st = params.sigma * t;
        Ok(Series { p: params.prime as f64, b: params.b, ln_st: st.ln(), sigma_t: st })
    }

    /// `exp(-sigma t p^(r b))`, flushed to 0 once the inner exponent
    /// overflows the representable range.
    fn e(&self, r: i64) -> f64 {
        let l = self.ln_st + r as f64 * self.b * self.p.ln();
        if l > 709.0 {
            0.0
        } else {
            (-l.exp()).exp()
        }
    }

    /// `sigma t p^(r b)`, saturating at infinity.
    fn st_prb(&self, r: i64) -> f64 {
        let l = self.ln_st + r as f64 * self.b * self.p.ln();
        l.exp()
    }
}

/// Mass of the ball `B_a(0)` under the time-`t` law:
/// `E(-a) + sum_{r <= -a-1} p^(a+r) (E(r) - E(r+1))`.
pub fn ball_mass(
    params: ProcessParams,
    t: f64,
    a: RadiusExponent,
    tol: SeriesTolerance,
) -> Result<RadialValue> {
    let s = Series::new(params, t)?;
    let p = s.p;
    let pb = p.powf(s.b);
    let mut e_above = s.e(-a);
    let mut sum = e_above;
    let mut r = -a - 1;
    let mut terms = 0usize;
    loop {
        // Tail of sum_{s <= r}: each term is at most p^(a+s) (masses bound
        // the density factor by 1) and at most sigma t (p^b - 1) p^(a+s(1+b))
        // (from 1 - e^-x <= x).
        let geo_all = powi(p, a + r) / (1.0 - 1.0 / p);
        let geo_exp = s.sigma_t * (pb - 1.0) * powi(p, a)
            * (p.ln() * (r as f64) * (1.0 + s.b)).exp()
            / (1.0 - p.powf(-(1.0 + s.b)));
        let bound = geo_all.min(geo_exp);
        if bound <= tol.eps {
            return Ok(RadialValue { value: sum.min(1.0), attained_tolerance: bound });
        }
        if terms >= tol.max_terms {
            return Err(Error::ToleranceNotReached { eps: tol.eps, max_terms: tol.max_terms });
        }
        let e_here = s.e(r);
        sum += powi(p, a + r) * (e_here - e_above);
        e_above = e_here;
        r -= 1;
        terms += 1;
    }
}

/// The same ball mass through the alternative series
/// `p^a (1 - 1/p) sum_{r <= -a} p^r E(r)`; serves as an independent
/// cross-check of [`ball_mass`].
pub fn ball_mass_lemma1(
    params: ProcessParams,
    t: f64,
    a: RadiusExponent,
    tol: SeriesTolerance,
) -> Result<RadialValue> {
    let s = Series::new(params, t)?;
    let p = s.p;
    let scale = powi(p, a) * (1.0 - 1.0 / p);
    let mut sum = 0.0;
    let mut r = -a;
    let mut terms = 0usize;
    loop {
        sum += scale * powi(p, r) * s.e(r);
        r -= 1;
        terms += 1;
        // Tail: E <= 1, so sum_{s <= r} scale p^s <= p^(a+r).
        let bound = powi(p, a + r + 1);
        if bound <= tol.eps {
            return Ok(RadialValue { value: sum.min(1.0), attained_tolerance: bound });
        }
        if terms >= tol.max_terms {
            return Err(Error::ToleranceNotReached { eps: tol.eps, max_terms: tol.max_terms });
        }
    }
}

/// Mass of the circle of radius `p^r` under the time-`t` law, clamped
/// against rounding between the two near-equal ball masses.
pub fn circle_mass(
    params: ProcessParams,
    t: f64,
    r: RadiusExponent,
    tol: SeriesTolerance,
) -> Result<RadialValue> {
    let outer = ball_mass(params, t, r, tol)?;
    let inner = ball_mass(params, t, r - 1, tol)?;
    let mut v = outer.value - inner.value;
    if v < 0.0 {
        debug_assert!(v > -1e-12, "circle mass {v} too negative to be rounding");
        v = 0.0;
    }
    Ok(RadialValue {
        value: v,
        attained_tolerance: outer.attained_tolerance + inner.attained_tolerance,
    })
}

/// Density of the time-`t` law at any point with `|x| = p^m`:
/// `sum_{r <= -m} (E(r) - E(r+1)) p^r`.
pub fn density_radial(
    params: ProcessParams,
    t: f64,
    m: RadiusExponent,
    tol: SeriesTolerance,
) -> Result<RadialValue> {
    let s = Series::new(params, t)?;
    let p = s.p;
    let pb = p.powf(s.b);
    let mut e_above = s.e(-m + 1);
    let mut sum = 0.0;
    let mut r = -m;
    let mut terms = 0usize;
    loop {
        let e_here = s.e(r);
        sum += powi(p, r) * (e_here - e_above);
        e_above = e_here;
        r -= 1;
        terms += 1;
        let geo_all = powi(p, r + 1) / (1.0 - 1.0 / p);
        let geo_exp = s.sigma_t * (pb - 1.0)
            * (p.ln() * ((r + 1) as f64) * (1.0 + s.b)).exp()
            / (1.0 - p.powf(-(1.0 + s.b)));
        let bound = geo_all.min(geo_exp);
        if bound <= tol.eps {
            return Ok(RadialValue { value: sum.max(0.0), attained_tolerance: bound });
        }
        if terms >= tol.max_terms {
            return Err(Error::ToleranceNotReached { eps: tol.eps, max_terms: tol.max_terms });
        }
    }
}

/// Density of the time-`t` law at the origin, the supremum of the density:
/// the two-sided series `sum_{r in Z} (E(r) - E(r+1)) p^r`.
pub fn density_origin(params: ProcessParams, t: f64, tol: SeriesTolerance) -> Result<RadialValue> {
    let s = Series::new(params, t)?;
    let p = s.p;
    let pb = p.powf(s.b);
    // Downward half starting at the mode where sigma t p^(r b) is near 1.
    let mode = (-s.ln_st / (s.b * p.ln())).round() as i64;
    let down = density_radial(params, t, -mode, tol)?;
    // Upward half: terms (E(r) - E(r+1)) p^r <= p^r E(r) decay faster than
    // geometrically once sigma t p^(r b) >= ln(2p)/(p^b - 1).
    let c_star = (2.0 * p).ln() / (pb - 1.0);
    let mut sum = 0.0;
    let mut r = mode + 1;
    let mut e_here = s.e(r);
    let mut terms = 0usize;
    loop {
        let e_above = s.e(r + 1);
        sum += powi(p, r) * (e_here - e_above);
        let q_next = powi(p, r + 1) * e_above;
        if s.st_prb(r + 1) >= c_star && 2.0 * q_next <= tol.eps {
            return Ok(RadialValue {
                value: down.value + sum,
                attained_tolerance: down.attained_tolerance + 2.0 * q_next,
            });
        }
        if terms >= tol.max_terms {
            return Err(Error::ToleranceNotReached { eps: tol.eps, max_terms: tol.max_terms });
        }
        e_here = e_above;
        r += 1;
        terms += 1;
    }
}

/// Closed form `exp(-sigma alpha T p^(-a b))` for the probability that the
/// running supremum over `[0, T]` stays within `p^a`.
pub fn exact_exit_prob(params: ProcessParams, t_horizon: f64, a: RadiusExponent) -> Result<f64> {
    if t_horizon < 0.0 {
        return Err(Error::NonPositive { what: "T", value: t_horizon });
    }
    let p = params.prime as f64;
    let exponent = params.sigma * params.alpha() * t_horizon * (-(a as f64) * params.b * p.ln()).exp();
    Ok((-exponent).exp())
}

/// Exact probability that the path lies in `B_a` at all `m` uniform grid
/// times on `[0, T]`: `ball_mass(T/m, a)^m`.
pub fn grid_sup_prob(
    params: ProcessParams,
    t_horizon: f64,
    a: RadiusExponent,
    m: u32,
    tol: SeriesTolerance,
) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidGrid("grid must have at least one point"));
    }
    let step = ball_mass(params, t_horizon / m as f64, a, tol)?;
    Ok(step.value.powi(m as i32))
}

/// A radial function with enough structure to integrate against: point
/// values on circles, exact ball integrals, and a supremum for tail bounds.
pub(crate) trait RadialFn {
    /// Value at any point with `|x| = p^r`.
    fn density(&self, r: i64) -> Result<f64>;
    /// Integral over the ball `B_k(0)`.
    fn ball(&self, k: i64) -> Result<f64>;
    /// An upper bound for the function, used in geometric tail bounds.
    fn sup_density(&self) -> Result<f64>;
}

/// The heat kernel at a fixed time, with memoized circle values and ball
/// masses.
pub(crate) struct KernelProfile {
    params: ProcessParams,
    t: f64,
    tol: SeriesTolerance,
    dens: RefCell<HashMap<i64, f64>>,
    balls: RefCell<HashMap<i64, f64>>,
    sup: RefCell<Option<f64>>,
}

impl KernelProfile {
    pub(crate) fn new(params: ProcessParams, t: f64, tol: SeriesTolerance) -> KernelProfile {
        KernelProfile {
            params,
            t,
            tol,
            dens: RefCell::new(HashMap::new()),
            balls: RefCell::new(HashMap::new()),
            sup: RefCell::new(None),
        }
    }
}

impl RadialFn for KernelProfile {
    fn density(&self, r: i64) -> Result<f64> {
        if let Some(&v) = self.dens.borrow().get(&r) {
            return Ok(v);
        }
        let v = density_radial(self.params, self.t, r, self.tol)?.value;
        self.dens.borrow_mut().insert(r, v);
        Ok(v)
    }

    fn ball(&self, k: i64) -> Result<f64> {
        if let Some(&v) = self.balls.borrow().get(&k) {
            return Ok(v);
        }
        let v = ball_mass(self.params, self.t, k, self.tol)?.value;
        self.balls.borrow_mut().insert(k, v);
        Ok(v)
    }

    fn sup_density(&self) -> Result<f64> {
        if let Some(v) = *self.sup.borrow() {
            return Ok(v);
        }
        let v = density_origin(self.params, self.t, self.tol)?.value;
        *self.sup.borrow_mut() = Some(v);
        Ok(v)
    }
}

/// The kernel at time `t` averaged over the ball `B_{-n}(y)`, seen as a
/// radial function of the distance to `y`: constant `ball(-n)` inside the
/// averaging ball, `p^-n * density` outside it.
pub(crate) struct FlattenedProfile {
    inner: KernelProfile,
    n: i64,
    mass: f64,
    scale: f64,
}

impl FlattenedProfile {
    pub(crate) fn new(params: ProcessParams, t: f64, n: i64, tol: SeriesTolerance) -> Result<FlattenedProfile> {
        let inner = KernelProfile::new(params, t, tol);
        let mass = inner.ball(-n)?;
        let scale = powi(params.prime as f64, -n);
        Ok(FlattenedProfile { inner, n, mass, scale })
    }
}

impl RadialFn for FlattenedProfile {
    fn density(&self, r: i64) -> Result<f64> {
        if r <= -self.n {
            Ok(self.mass)
        } else {
            Ok(self.scale * self.inner.density(r)?)
        }
    }

    fn ball(&self, k: i64) -> Result<f64> {
        if k < -self.n {
            // Constant on B_k; the radial decomposition telescopes to p^k.
            Ok(powi(self.inner.params.prime as f64, k) * self.mass)
        } else {
            Ok(self.scale * self.inner.ball(k)?)
        }
    }

    fn sup_density(&self) -> Result<f64> {
        // The average over B_{-n} dominates p^-n times any density value
        // outside, because the density is radially nonincreasing.
        Ok(self.mass)
    }
}

/// `integral over B_a(0) of F(|u - w|) H(|u|) du` for radial `F`, `H` and
/// `|w| = p^(w_ord)` (`None` encodes `w = 0`). Decomposes `B_a` into circles
/// around 0 and, on the circle carrying `w`, into the sub-ball around `w`,
/// the sub-ball around 0, and the remainder where both distances are
/// constant.
pub(crate) fn pair_ball_integral(
    f: &dyn RadialFn,
    h: &dyn RadialFn,
    prime: u32,
    w_ord: Option<i64>,
    a: i64,
    tol: SeriesTolerance,
) -> Result<f64> {
    let p = prime as f64;
    match w_ord {
        None => {
            // Concentric: sum over circles with a geometric tail bounded by
            // sup F * sup H * p^r.
            let cap = f.sup_density()? * h.sup_density()?;
            let mut sum = 0.0;
            let mut r = a;
            let mut terms = 0usize;
            loop {
                sum += mu_circle(p, r) * f.density(r)? * h.density(r)?;
                r -= 1;
                terms += 1;
                if cap * powi(p, r + 1) <= tol.eps {
                    return Ok(sum);
                }
                if terms >= tol.max_terms {
                    return Err(Error::ToleranceNotReached {
                        eps: tol.eps,
                        max_terms: tol.max_terms,
                    });
                }
            }
        }
        Some(w) if w > a => Ok(f.density(w)? * h.ball(a)?),
        Some(w) => {
            if a - w > tol.max_terms as i64 {
                return Err(Error::ToleranceNotReached { eps: tol.eps, max_terms: tol.max_terms });
            }
            // Circles strictly between |w| and the boundary: both distances
            // equal the circle radius.
            let mut sum = 0.0;
            for r in (w + 1)..=a {
                sum += mu_circle(p, r) * f.density(r)? * h.density(r)?;
            }
            // Inside B_{w-1}(0): distance to w is constant p^w.
            sum += f.density(w)? * h.ball(w - 1)?;
            // Inside B_{w-1}(w): distance to 0 is constant p^w.
            sum += h.density(w)? * f.ball(w - 1)?;
            // Rest of the circle S_w(0): both distances are exactly p^w.
            // Its measure p^(w-1)(p-2) vanishes at p = 2.
            sum += powi(p, w - 1) * (p - 2.0) * f.density(w)? * h.density(w)?;
            Ok(sum)
        }
    }
}

/// A pair integral reused as a radial function of the offset between the two
/// centers; powers the exact nested (two-step) grid probabilities.
pub(crate) struct NestedProfile<'a> {
    pub(crate) f: &'a dyn RadialFn,
    pub(crate) h: &'a dyn RadialFn,
    pub(crate) prime: u32,
    pub(crate) a: i64,
    pub(crate) tol: SeriesTolerance,
    dens: RefCell<HashMap<i64, f64>>,
    balls: RefCell<HashMap<i64, f64>>,
}

impl<'a> NestedProfile<'a> {
    pub(crate) fn new(
        f: &'a dyn RadialFn,
        h: &'a dyn RadialFn,
        prime: u32,
        a: i64,
        tol: SeriesTolerance,
    ) -> NestedProfile<'a> {
        NestedProfile {
            f,
            h,
            prime,
            a,
            tol,
            dens: RefCell::new(HashMap::new()),
            balls: RefCell::new(HashMap::new()),
        }
    }
}

impl RadialFn for NestedProfile<'_> {
    fn density(&self, r: i64) -> Result<f64> {
        if let Some(&v) = self.dens.borrow().get(&r) {
            return Ok(v);
        }
        let v = pair_ball_integral(self.f, self.h, self.prime, Some(r), self.a, self.tol)?;
        self.dens.borrow_mut().insert(r, v);
        Ok(v)
    }

    fn ball(&self, k: i64) -> Result<f64> {
        if let Some(&v) = self.balls.borrow().get(&k) {
            return Ok(v);
        }
        // Circle decomposition of the ball integral with a geometric tail.
        let p = self.prime as f64;
        let cap = self.sup_density()?;
        let mut sum = 0.0;
        let mut r = k;
        let mut terms = 0usize;
        loop {
            sum += mu_circle(p, r) * self.density(r)?;
            r -= 1;
            terms += 1;
            if cap * powi(p, r + 1) <= self.tol.eps {
                break;
            }
            if terms >= self.tol.max_terms {
                return Err(Error::ToleranceNotReached {
                    eps: self.tol.eps,
                    max_terms: self.tol.max_terms,
                });
            }
        }
        self.balls.borrow_mut().insert(k, sum);
        Ok(sum)
    }

    fn sup_density(&self) -> Result<f64> {
        // F integrated against H over B_a is at most sup F times H's mass.
        Ok(self.f.sup_density()? * self.h.ball(self.a)?)
    }
}

/// `integral over B_a of rho(t, x) rho(t', z - x) dmu(x)` for `|z| = p^z_exp`
/// (`None` encodes `z = 0`).
pub fn ball_convolution(
    params: ProcessParams,
    t: f64,
    t_prime: f64,
    z_exp: Option<RadiusExponent>,
    a: RadiusExponent,
    tol: SeriesTolerance,
) -> Result<f64> {
    let h = KernelProfile::new(params, t, tol);
    let f = KernelProfile::new(params, t_prime, tol);
    pair_ball_integral(&f, &h, params.prime, z_exp, a, tol)
}

/// Mass that the time-`t` law assigns to `B_{-n}(y)` for `|y| = p^(y_exp)`:
/// the whole small-ball mass when `y` is within `p^-n` of the origin,
/// otherwise `p^-n` times the (constant) density on the ball.
pub fn endpoint_ball_mass(
    params: ProcessParams,
    t: f64,
    y_exp: Option<RadiusExponent>,
    n_cond: u32,
    tol: SeriesTolerance,
) -> Result<f64> {
    let n = n_cond as i64;
    match y_exp {
        Some(e) if e > -n => {
            Ok(powi(params.prime as f64, -n) * density_radial(params, t, e, tol)?.value)
        }
        _ => Ok(ball_mass(params, t, -n, tol)?.value),
    }
}

/// Exact joint probability that a path with independent increments over the
/// time steps `steps` lies in `B_a` at every intermediate step and lands in
/// `B_{-n}(y)` at the final one. Supported for one or two intermediate steps
/// (`steps.len()` of 2 or 3); deeper grids cost exponentially more and are
/// handled by Monte Carlo instead.
pub fn grid_containment_with_endpoint(
    params: ProcessParams,
    steps: &[f64],
    a: RadiusExponent,
    y_exp: Option<RadiusExponent>,
    n_cond: u32,
    tol: SeriesTolerance,
) -> Result<f64> {
    if steps.len() < 2 || steps.len() > 3 {
        return Err(Error::InvalidGrid("exact evaluation supports 2 or 3 time steps"));
    }
    for &t in steps {
        if !(t > 0.0) {
            return Err(Error::NonPositive { what: "time step", value: t });
        }
    }
    let n = n_cond as i64;
    if let Some(e) = y_exp {
        if e > a {
            return Err(Error::HypothesisViolation(format!(
                "y with |y| = p^{e} lies outside B_{a}"
            )));
        }
    }
    if -n > a {
        return Err(Error::HypothesisViolation(format!(
            "B_{}(y) is not contained in B_{a}",
            -n
        )));
    }
    let h1 = KernelProfile::new(params, steps[0], tol);
    if steps.len() == 2 {
        let f = FlattenedProfile::new(params, steps[1], n, tol)?;
        pair_ball_integral(&f, &h1, params.prime, y_exp, a, tol)
    } else {
        let k2 = KernelProfile::new(params, steps[1], tol);
        let flat = FlattenedProfile::new(params, steps[2], n, tol)?;
        let nested = NestedProfile::new(&k2, &flat, params.prime, a, tol);
        pair_ball_integral(&nested, &h1, params.prime, y_exp, a, tol)
    }
}

/// The bridge law at split times `(t, t')` with pinned displacement `w`:
/// exact ball probabilities `P(Z in B_k(c))` for the density proportional to
/// `rho(t, z) rho(t', w - z)`.
///
/// Values depend on the ball only through its scale `k`, `|c|`, and
/// `|c - w|`; all three enter the memo keys, so a kernel instance amortizes
/// across many queries with the same pinned displacement class.
pub(crate) struct BridgeKernel {
    prime: u32,
    w_ord: Option<i64>,
    /// Time-`t` factor, centered at the origin.
    kf: KernelProfile,
    /// Time-`t'` factor, centered at `w`.
    kp: KernelProfile,
    normalizer: f64,
    both: RefCell<HashMap<i64, f64>>,
    tol: SeriesTolerance,
}

impl BridgeKernel {
    pub(crate) fn new(
        params: ProcessParams,
        t: f64,
        t_prime: f64,
        w_ord: Option<i64>,
        tol: SeriesTolerance,
    ) -> Result<BridgeKernel> {
        let kf = KernelProfile::new(params, t, tol);
        let kp = KernelProfile::new(params, t_prime, tol);
        let normalizer = match w_ord {
            None => density_origin(params, t + t_prime, tol)?.value,
            Some(e) => density_radial(params, t + t_prime, e, tol)?.value,
        };
        Ok(BridgeKernel { prime: params.prime, w_ord, kf, kp, normalizer, both: RefCell::new(HashMap::new()), tol })
    }

    /// Unnormalized mass of `B_k(c)` where `|c| = p^(ord_c)` and
    /// `|c - w| = p^(ord_cw)` (`None` for exact coincidence).
    pub(crate) fn numerator(
        &self,
        k: i64,
        ord_c: Option<i64>,
        ord_cw: Option<i64>,
    ) -> Result<f64> {
        let zero_in = ord_c.map_or(true, |e| e <= k);
        let w_in = ord_cw.map_or(true, |e| e <= k);
        match (zero_in, w_in) {
            (true, true) => {
                if let Some(&v) = self.both.borrow().get(&k) {
                    return Ok(v);
                }
                let v = pair_ball_integral(&self.kp, &self.kf, self.prime, self.w_ord, k, self.tol)?;
                self.both.borrow_mut().insert(k, v);
                Ok(v)
            }
            (true, false) => {
                // w outside a ball around the origin: |w - z| is constant.
                let w = self.w_ord.expect("w inside and outside simultaneously");
                Ok(self.kp.density(w)? * self.kf.ball(k)?)
            }
            (false, true) => {
                // Origin outside a ball around w: |z| is constant p^(ord_c).
                let e = ord_c.expect("origin both inside and outside");
                Ok(self.kf.density(e)? * self.kp.ball(k)?)
            }
            (false, false) => {
                let e = ord_c.expect("origin outside yet coincident");
                let d = ord_cw.expect("w outside yet coincident");
                Ok(powi(self.prime as f64, k) * self.kf.density(e)? * self.kp.density(d)?)
            }
        }
    }

    /// Normalized probability of `B_k(c)`, clamped to `[0, 1]`.
    pub(crate) fn ball_prob(&self, k: i64, ord_c: Option<i64>, ord_cw: Option<i64>) -> Result<f64> {
        Ok((self.numerator(k, ord_c, ord_cw)? / self.normalizer).clamp(0.0, 1.0))
    }
}

/// Probability that the bridge value with split `(t, t')` and pinned
/// displacement `w` lies in `B_k(c)`.
pub fn bridge_ball_prob(
    params: ProcessParams,
    t: f64,
    t_prime: f64,
    w: &PAdic,
    c: &PAdic,
    k: RadiusExponent,
    tol: SeriesTolerance,
) -> Result<f64> {
    if w.prime() != params.prime {
        return Err(Error::PrimeMismatch(params.prime, w.prime()));
    }
    let kernel = BridgeKernel::new(params, t, t_prime, w.abs_exponent(), tol)?;
    let ord_c = c.abs_exponent();
    let ord_cw = c.sub(w)?.abs_exponent();
    kernel.ball_prob(k, ord_c, ord_cw)
}
