//! Minimal statistics used by the experiments: binomial standard errors and
//! a chi-square goodness-of-fit test.
//!
//! The chi-square survival function is evaluated through the regularized
//! incomplete gamma function (series expansion below the shape parameter,
//! continued fraction above), which keeps the crate free of heavyweight
//! statistics dependencies and portable to wasm targets.

/// Standard error of a binomial proportion estimate.
pub fn binomial_se(estimate: f64, n: u64) -> f64 {
    if n == 0 {
        return f64::NAN;
    }
    (estimate * (1.0 - estimate) / n as f64).sqrt()
}

/// Survival function of the chi-square distribution with `dof` degrees of
/// freedom: `P(X > x) = Q(dof/2, x/2)`.
pub fn chi_square_sf(x: f64, dof: usize) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    upper_gamma_regularized(dof as f64 / 2.0, x / 2.0)
}

/// Regularized upper incomplete gamma function `Q(a, x)`.
fn upper_gamma_regularized(a: f64, x: f64) -> f64 {
    if x < a + 1.0 {
        1.0 - lower_gamma_series(a, x)
    } else {
        upper_gamma_cf(a, x)
    }
}

/// Series expansion of `P(a, x)`, accurate for `x < a + 1`.
fn lower_gamma_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut sum = 1.0 / a;
    let mut del = sum;
    for _ in 0..500 {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * 1e-16 {
            break;
        }
    }
    sum * (-x + a * x.ln() - ln_gamma(a)).exp()
}

/// Lentz continued fraction for `Q(a, x)`, accurate for `x >= a + 1`.
fn upper_gamma_cf(a: f64, x: f64) -> f64 {
    let tiny = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x + a * x.ln() - ln_gamma(a)).exp() * h
}

/// Lanczos approximation of `ln Gamma(z)` for positive `z`.
fn ln_gamma(z: f64) -> f64 {
    const G: [f64; 6] = [
        76.18009172947146,
        -86.50532032941677,
        24.01409824083091,
        -1.231739572450155,
        0.1208650973866179e-2,
        -0.5395239384953e-5,
    ];
    let x = z;
    let mut y = z;
    let tmp = x + 5.5;
    let tmp = tmp - (x + 0.5) * tmp.ln();
    let mut ser = 1.000000000190015;
    for g in G {
        y += 1.0;
        ser += g / y;
    }
    -tmp + (2.5066282746310005 * ser / x).ln()
}

/// Result of a chi-square goodness-of-fit test.
#[derive(Clone, Copy, Debug)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Chi-square test of observed counts against a discrete law given as
/// expected counts. Bins with expected count below 5 are pooled into a
/// single bin to keep the asymptotic distribution valid.
pub fn chi_square_test(observed: &[u64], expected: &[f64]) -> ChiSquare {
    assert_eq!(observed.len(), expected.len());
    let mut stat = 0.0;
    let mut bins = 0usize;
    let mut pooled_obs = 0.0;
    let mut pooled_exp = 0.0;
    for (&o, &e) in observed.iter().zip(expected) {
        if e < 5.0 {
            pooled_obs += o as f64;
            pooled_exp += e;
        } else {
            let d = o as f64 - e;
            stat += d * d / e;
            bins += 1;
        }
    }
    if pooled_exp > 0.0 {
        let d = pooled_obs - pooled_exp;
        stat += d * d / pooled_exp;
        bins += 1;
    }
    let dof = bins.saturating_sub(1).max(1);
    ChiSquare { statistic: stat, dof, p_value: chi_square_sf(stat, dof) }
}
