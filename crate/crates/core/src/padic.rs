//! Finite-precision p-adic numbers and the Haar-measure geometry of balls
//! and circles.
//!
//! A nonzero value is stored as a valuation `v` plus a digit window
//! `d[0..len)` representing `sum d[i] * p^(v+i)` with `d[0] != 0`. The
//! `exact` flag records whether every digit above the window is known to be
//! zero (terminating expansion) or merely unknown (truncated window).
//! Arithmetic is exact on all digit positions below the least known end of
//! the operands; windows are capped so long chains of operations do not grow
//! without bound.

use std::fmt;
use std::str::FromStr;

use num::complex::Complex64;
use num::{BigInt, BigRational, One, ToPrimitive, Zero as NumZero};
use rand::Rng;

use crate::error::{Error, Result};

/// Default digit-window length for values produced by arithmetic and
/// constructors that do not take an explicit precision.
pub const DEFAULT_PRECISION: usize = 32;

/// Ball and circle radii are always the exact integer exponent `a` of a
/// radius `p^a`, never a floating-point magnitude.
pub type RadiusExponent = i64;

/// Valuation of a p-adic number; `Infinite` is the valuation of zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use Valuation::*;
        match (self, other) {
            (Infinite, Infinite) => std::cmp::Ordering::Equal,
            (Infinite, Finite(_)) => std::cmp::Ordering::Greater,
            (Finite(_), Infinite) => std::cmp::Ordering::Less,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

#[derive(Clone, Debug)]
enum Repr {
    Zero,
    Nonzero {
        valuation: i64,
        /// Little-endian from the valuation; first digit nonzero.
        digits: Vec<u32>,
        /// True when all digits above the stored window are zero.
        exact: bool,
    },
}

/// A p-adic number with a finite digit window.
#[derive(Clone, Debug)]
pub struct PAdic {
    prime: u32,
    repr: Repr,
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn check_prime(p: u32) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

impl PAdic {
    /// The zero of `Q_p`; its valuation is `Infinite`.
    pub fn zero(prime: u32) -> PAdic {
        PAdic { prime, repr: Repr::Zero }
    }

    /// Builds a value from an explicit digit window. Digits are little-endian
    /// from `valuation`; the leading digit must be nonzero and all digits lie
    /// in `[0, p)`.
    pub fn from_digits(prime: u32, valuation: i64, digits: Vec<u32>, exact: bool) -> Result<PAdic> {
        check_prime(prime)?;
        if digits.is_empty() || digits[0] == 0 {
            return Err(Error::Parse(
                format!("{prime}:{valuation}:..."),
                "leading digit must be nonzero",
            ));
        }
        if digits.iter().any(|&d| d >= prime) {
            return Err(Error::Parse(
                format!("{prime}:{valuation}:..."),
                "digit out of range",
            ));
        }
        Ok(PAdic { prime, repr: Repr::Nonzero { valuation, digits, exact } })
    }

    /// The monomial `d * p^pos` with `d` in `[1, p)`.
    pub fn monomial(prime: u32, d: u32, pos: i64) -> Result<PAdic> {
        PAdic::from_digits(prime, pos, vec![d], true)
    }

    /// Embeds an integer with the default window.
    pub fn from_integer(prime: u32, n: i64) -> Result<PAdic> {
        PAdic::from_ratio_prec(prime, n, 1, DEFAULT_PRECISION)
    }

    /// Embeds a rational with the default window.
    pub fn from_ratio(prime: u32, num: i64, den: i64) -> Result<PAdic> {
        PAdic::from_ratio_prec(prime, num, den, DEFAULT_PRECISION)
    }

    /// Embeds `num/den` by digit-by-digit long division, producing at most
    /// `precision` digits. The expansion is exact when it terminates within
    /// the window.
    pub fn from_ratio_prec(prime: u32, num: i64, den: i64, precision: usize) -> Result<PAdic> {
        check_prime(prime)?;
        if den == 0 {
            return Err(Error::NonPositive { what: "denominator", value: 0.0 });
        }
        if precision == 0 {
            return Err(Error::ZeroDepth);
        }
        if num == 0 {
            return Ok(PAdic::zero(prime));
        }
        let p = prime as i128;
        let mut n = num as i128;
        let mut d = den as i128;
        let mut v: i64 = 0;
        while n % p == 0 {
            n /= p;
            v += 1;
        }
        while d % p == 0 {
            d /= p;
            v -= 1;
        }
        // d is now invertible mod p.
        let inv_d = mod_inverse(d.rem_euclid(p) as i64, prime as i64) as i128;
        let mut digits = Vec::with_capacity(precision);
        let mut exact = false;
        for _ in 0..precision {
            let dig = ((n.rem_euclid(p)) * inv_d).rem_euclid(p);
            digits.push(dig as u32);
            n = (n - dig * d) / p;
            if n == 0 {
                exact = true;
                break;
            }
        }
        Ok(normalize(prime, v, digits, exact))
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero)
    }

    /// `v` with `|x| = p^{-v}`; `Infinite` for zero.
    pub fn valuation(&self) -> Valuation {
        match &self.repr {
            Repr::Zero => Valuation::Infinite,
            Repr::Nonzero { valuation, .. } => Valuation::Finite(*valuation),
        }
    }

    /// The exponent `e` with `|x| = p^e`, or `None` for zero.
    pub fn abs_exponent(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero => None,
            Repr::Nonzero { valuation, .. } => Some(-valuation),
        }
    }

    /// `|x|` as a float; 0 for zero.
    pub fn norm(&self) -> f64 {
        match self.abs_exponent() {
            None => 0.0,
            Some(e) => (self.prime as f64).powi(e as i32),
        }
    }

    /// True when the stored digits describe the value exactly (terminating
    /// expansion), false when positions above the window are unknown.
    pub fn is_exact(&self) -> bool {
        match &self.repr {
            Repr::Zero => true,
            Repr::Nonzero { exact, .. } => *exact,
        }
    }

    /// The digit `a_x(k)`. Positions below the valuation are zero; positions
    /// above the stored window read as zero, which is exact only for
    /// terminating expansions.
    pub fn digit(&self, k: i64) -> u32 {
        match &self.repr {
            Repr::Zero => 0,
            Repr::Nonzero { valuation, digits, .. } => {
                if k < *valuation || k - *valuation >= digits.len() as i64 {
                    0
                } else {
                    digits[(k - *valuation) as usize]
                }
            }
        }
    }

    /// The stored digit window (empty for zero).
    pub fn digits(&self) -> &[u32] {
        match &self.repr {
            Repr::Zero => &[],
            Repr::Nonzero { digits, .. } => digits,
        }
    }

    fn check_same_prime(&self, other: &PAdic) -> Result<()> {
        if self.prime == other.prime {
            Ok(())
        } else {
            Err(Error::PrimeMismatch(self.prime, other.prime))
        }
    }

    pub fn add(&self, other: &PAdic) -> Result<PAdic> {
        self.check_same_prime(other)?;
        add_sub(self, other, false)
    }

    pub fn sub(&self, other: &PAdic) -> Result<PAdic> {
        self.check_same_prime(other)?;
        add_sub(self, other, true)
    }

    pub fn neg(&self) -> PAdic {
        PAdic::zero(self.prime).sub(self).expect("same prime")
    }

    pub fn mul(&self, other: &PAdic) -> Result<PAdic> {
        self.check_same_prime(other)?;
        mul(self, other)
    }

    /// The exponent of `|x - y|`, or `None` when the difference vanishes at
    /// window resolution.
    pub fn dist_exponent(&self, other: &PAdic) -> Result<Option<i64>> {
        Ok(self.sub(other)?.abs_exponent())
    }

    /// `{x} = sum_{k<0} a_x(k) p^k` as an exact rational in `[0, 1)`.
    pub fn fractional_part(&self) -> BigRational {
        let (v, digits) = match &self.repr {
            Repr::Zero => return BigRational::zero(),
            Repr::Nonzero { valuation, digits, .. } => (*valuation, digits),
        };
        if v >= 0 {
            return BigRational::zero();
        }
        let p = BigInt::from(self.prime);
        // {x} = (sum_{i < -v} d[i] p^i) / p^{-v}
        let mut num = BigInt::zero();
        let mut pow = BigInt::one();
        for &d in digits.iter().take((-v) as usize) {
            num += d * &pow;
            pow *= &p;
        }
        BigRational::new(num, p.pow((-v) as u32))
    }

    /// The rank-0 additive character `e^{2 pi i {x}}`, a unit complex number.
    pub fn character(&self) -> Complex64 {
        let q = self.fractional_part().to_f64().unwrap_or(0.0);
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * q)
    }
}

fn mod_inverse(a: i64, p: i64) -> i64 {
    // Extended Euclid; p prime, a not divisible by p.
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p, a.rem_euclid(p));
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1);
    t.rem_euclid(p)
}

/// Strips leading zeros (adjusting the valuation) and collapses all-zero
/// windows to the flagged zero.
fn normalize(prime: u32, valuation: i64, mut digits: Vec<u32>, exact: bool) -> PAdic {
    let lead = digits.iter().position(|&d| d != 0);
    match lead {
        None => PAdic::zero(prime),
        Some(0) => PAdic { prime, repr: Repr::Nonzero { valuation, digits, exact } },
        Some(i) => {
            digits.drain(..i);
            PAdic {
                prime,
                repr: Repr::Nonzero { valuation: valuation + i as i64, digits, exact },
            }
        }
    }
}

struct Window<'a> {
    valuation: i64,
    digits: &'a [u32],
    exact: bool,
}

fn window(x: &PAdic) -> Option<Window<'_>> {
    match &x.repr {
        Repr::Zero => None,
        Repr::Nonzero { valuation, digits, exact } => {
            Some(Window { valuation: *valuation, digits, exact: *exact })
        }
    }
}

fn add_sub(x: &PAdic, y: &PAdic, subtract: bool) -> Result<PAdic> {
    let p = x.prime;
    let (wx, wy) = (window(x), window(y));
    let (wx, wy) = match (wx, wy) {
        (None, None) => return Ok(PAdic::zero(p)),
        (Some(_), None) => return Ok(x.clone()),
        (None, Some(_)) => {
            if !subtract {
                return Ok(y.clone());
            }
            // 0 - y: run the general path with an empty left window.
            (Window { valuation: y_valuation(y), digits: &[], exact: true }, window(y).unwrap())
        }
        (Some(a), Some(b)) => (a, b),
    };

    let end = |w: &Window| w.valuation + w.digits.len() as i64;
    let lo = if wx.digits.is_empty() { wy.valuation } else { wx.valuation.min(wy.valuation) };
    let both_exact = wx.exact && wy.exact;
    let hi = if both_exact {
        end(&wx).max(end(&wy)) + if subtract { 0 } else { 1 }
    } else {
        let mut h = i64::MAX;
        if !wx.exact {
            h = h.min(end(&wx));
        }
        if !wy.exact {
            h = h.min(end(&wy));
        }
        h
    };
    let cap = DEFAULT_PRECISION.max(wx.digits.len()).max(wy.digits.len());
    let digit_of = |w: &Window, k: i64| -> u32 {
        if k < w.valuation || k - w.valuation >= w.digits.len() as i64 {
            0
        } else {
            w.digits[(k - w.valuation) as usize]
        }
    };

    let mut out = Vec::with_capacity((hi - lo).max(0) as usize);
    let mut carry: i64 = 0;
    for k in lo..hi {
        let a = digit_of(&wx, k) as i64;
        let b = digit_of(&wy, k) as i64;
        let s = if subtract { a - b + carry } else { a + b + carry };
        let (d, c) = if s < 0 {
            (s + p as i64, -1)
        } else {
            (s % p as i64, s / p as i64)
        };
        out.push(d as u32);
        carry = c;
    }

    let mut exact_out = both_exact && carry == 0;
    if subtract && carry == -1 && both_exact {
        // The difference has an infinite (p-1) tail; extend to the window cap
        // and mark inexact.
        let lead = out.iter().position(|&d| d != 0).unwrap_or(out.len());
        while out.len() - lead < cap {
            out.push(p - 1);
        }
        exact_out = false;
    }

    // Truncate the window to `cap` digits from the leading nonzero one.
    let lead = out.iter().position(|&d| d != 0);
    if let Some(i) = lead {
        if out.len() - i > cap {
            if out[i + cap..].iter().any(|&d| d != 0) {
                exact_out = false;
            }
            out.truncate(i + cap);
        }
    }
    Ok(normalize(p, lo, out, exact_out))
}

fn y_valuation(y: &PAdic) -> i64 {
    match &y.repr {
        Repr::Zero => 0,
        Repr::Nonzero { valuation, .. } => *valuation,
    }
}

fn mul(x: &PAdic, y: &PAdic) -> Result<PAdic> {
    let p = x.prime;
    let (wx, wy) = match (window(x), window(y)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Ok(PAdic::zero(p)),
    };
    // Leading digits are units mod p, so the valuation of a product is the
    // exact sum of valuations.
    let v = wx.valuation + wy.valuation;
    let cap = DEFAULT_PRECISION.max(wx.digits.len()).max(wy.digits.len());
    let full_len = wx.digits.len() + wy.digits.len();
    let both_exact = wx.exact && wy.exact;
    let known_len = if both_exact {
        full_len
    } else {
        // x known mod p^(vx+lx) makes x*y known mod p^(vx+lx+vy); same for y.
        let mut bound = i64::MAX;
        if !wx.exact {
            bound = bound.min(wx.digits.len() as i64);
        }
        if !wy.exact {
            bound = bound.min(wy.digits.len() as i64);
        }
        bound as usize
    };
    let n = known_len.min(full_len);
    let mut acc = vec![0u128; n];
    for (i, &a) in wx.digits.iter().enumerate() {
        if i >= n {
            break;
        }
        for (j, &b) in wy.digits.iter().enumerate() {
            if i + j >= n {
                break;
            }
            acc[i + j] += a as u128 * b as u128;
        }
    }
    let mut out = Vec::with_capacity(n);
    let mut carry: u128 = 0;
    for a in acc {
        let s = a + carry;
        out.push((s % p as u128) as u32);
        carry = s / p as u128;
    }
    let mut exact_out = both_exact;
    if both_exact {
        // Append remaining carry digits so terminating products stay exact.
        while carry > 0 {
            out.push((carry % p as u128) as u32);
            carry /= p as u128;
        }
    }
    if out.len() > cap {
        if out[cap..].iter().any(|&d| d != 0) {
            exact_out = false;
        }
        out.truncate(cap);
    }
    Ok(normalize(p, v, out, exact_out))
}

impl PartialEq for PAdic {
    /// Value equality on known digits; trailing zeros and the exactness flag
    /// do not participate.
    fn eq(&self, other: &Self) -> bool {
        if self.prime != other.prime {
            return false;
        }
        match (&self.repr, &other.repr) {
            (Repr::Zero, Repr::Zero) => true,
            (
                Repr::Nonzero { valuation: v1, digits: d1, .. },
                Repr::Nonzero { valuation: v2, digits: d2, .. },
            ) => {
                let strip = |d: &[u32]| {
                    let n = d.iter().rposition(|&x| x != 0).map_or(0, |i| i + 1);
                    d[..n].to_vec()
                };
                v1 == v2 && strip(d1) == strip(d2)
            }
            _ => false,
        }
    }
}

impl Eq for PAdic {}

// Text format: `p:v:d0d1d2...` little-endian from the valuation, digits
// comma-separated when p >= 10; `p:zero` for zero.
impl fmt::Display for PAdic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Zero => write!(f, "{}:zero", self.prime),
            Repr::Nonzero { valuation, digits, .. } => {
                write!(f, "{}:{}:", self.prime, valuation)?;
                if self.prime < 10 {
                    for d in digits {
                        write!(f, "{d}")?;
                    }
                } else {
                    for (i, d) in digits.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{d}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

impl FromStr for PAdic {
    type Err = Error;

    fn from_str(s: &str) -> Result<PAdic> {
        let bad = |why| Error::Parse(s.to_string(), why);
        let mut parts = s.splitn(3, ':');
        let p: u32 = parts
            .next()
            .ok_or_else(|| bad("missing prime"))?
            .parse()
            .map_err(|_| bad("invalid prime"))?;
        check_prime(p)?;
        let second = parts.next().ok_or_else(|| bad("missing valuation"))?;
        if second == "zero" {
            return Ok(PAdic::zero(p));
        }
        let v: i64 = second.parse().map_err(|_| bad("invalid valuation"))?;
        let digit_str = parts.next().ok_or_else(|| bad("missing digits"))?;
        let digits: Vec<u32> = if p < 10 && !digit_str.contains(',') {
            digit_str
                .chars()
                .map(|c| c.to_digit(10).ok_or_else(|| bad("invalid digit")))
                .collect::<Result<_>>()?
        } else {
            digit_str
                .split(',')
                .map(|t| t.parse().map_err(|_| bad("invalid digit")))
                .collect::<std::result::Result<_, _>>()?
        };
        if digits.is_empty() {
            return Err(bad("empty digit string"));
        }
        if digits[0] == 0 {
            return Err(bad("leading digit must be nonzero"));
        }
        if digits.iter().any(|&d| d >= p) {
            return Err(bad("digit out of range"));
        }
        // Parsed literals list their digits explicitly, so they are exact.
        Ok(PAdic { prime: p, repr: Repr::Nonzero { valuation: v, digits, exact: true } })
    }
}

/// Kind of a region: closed ball or circle (sphere) of radius `p^a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegionKind {
    Ball,
    Circle,
}

/// A ball `B_a(c)` or circle `S_a(c)` of radius `p^a`.
#[derive(Clone, Debug)]
pub struct Region {
    pub kind: RegionKind,
    pub center: PAdic,
    pub exponent: RadiusExponent,
}

impl Region {
    pub fn ball(center: PAdic, exponent: RadiusExponent) -> Region {
        Region { kind: RegionKind::Ball, center, exponent }
    }

    pub fn circle(center: PAdic, exponent: RadiusExponent) -> Region {
        Region { kind: RegionKind::Circle, center, exponent }
    }

    /// Membership of `x`: `|x - c| <= p^a` for balls, `= p^a` for circles.
    pub fn contains(&self, x: &PAdic) -> Result<bool> {
        let d = x.dist_exponent(&self.center)?;
        Ok(match self.kind {
            RegionKind::Ball => d.map_or(true, |e| e <= self.exponent),
            RegionKind::Circle => d == Some(self.exponent),
        })
    }

    /// Haar measure, normalized so the unit ball has measure 1: balls have
    /// measure `p^a`, circles `p^a (1 - 1/p)`.
    pub fn haar_measure(&self) -> BigRational {
        let p = BigInt::from(self.center.prime());
        let a = self.exponent;
        let pow = |e: i64| -> BigRational {
            if e >= 0 {
                BigRational::from_integer(p.pow(e as u32))
            } else {
                BigRational::new(BigInt::one(), p.pow((-e) as u32))
            }
        };
        match self.kind {
            RegionKind::Ball => pow(a),
            RegionKind::Circle => {
                pow(a) * BigRational::new(&p - BigInt::one(), p.clone())
            }
        }
    }
}

/// Haar-uniform sample from `B_a(center)`: the offset has i.i.d. uniform
/// digits at positions `-a, -a+1, ..., -a+depth-1`.
pub fn uniform_ball_sample<R: Rng + ?Sized>(
    a: RadiusExponent,
    center: &PAdic,
    depth: usize,
    rng: &mut R,
) -> Result<PAdic> {
    if depth == 0 {
        return Err(Error::ZeroDepth);
    }
    let p = center.prime();
    let digits: Vec<u32> = (0..depth).map(|_| rng.random_range(0..p)).collect();
    center.add(&normalize(p, -a, digits, true))
}

/// Uniform sample from the circle `S_r(center)`: leading digit uniform in
/// `[1, p)`, the remaining `depth - 1` digits uniform in `[0, p)`, so
/// `|sample - center| = p^r` exactly.
pub fn uniform_circle_sample<R: Rng + ?Sized>(
    r: RadiusExponent,
    center: &PAdic,
    depth: usize,
    rng: &mut R,
) -> Result<PAdic> {
    if depth == 0 {
        return Err(Error::ZeroDepth);
    }
    let p = center.prime();
    let mut digits = Vec::with_capacity(depth);
    digits.push(rng.random_range(1..p));
    for _ in 1..depth {
        digits.push(rng.random_range(0..p));
    }
    center.add(&normalize(p, -r, digits, true))
}
