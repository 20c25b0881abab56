//! Browser-facing API for the `ultradiff` library.
//!
//! Every entry point is a pure function from primitive arguments to a JSON
//! string, so the whole surface is unit-testable on the native target; the
//! `wasm-bindgen` wrappers at the bottom only forward to these functions on
//! wasm32 builds.

// `!(x > 0.0)` guards are deliberate: unlike `x <= 0.0` they reject NaN too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::str::FromStr;

use serde_json::{json, Value};

use ultradiff::padic::PAdic;
use ultradiff::radial::{exact_exit_prob, ProcessParams, SeriesTolerance};
use ultradiff::sampler::{sample_path, BridgePathSampler, BridgeSpec, IncrementSampler, RandomStream};

fn params(p: u32, b: f64, sigma: f64) -> Result<ProcessParams, String> {
    ProcessParams::new(p, b, sigma).map_err(|e| e.to_string())
}

fn tol() -> SeriesTolerance {
    SeriesTolerance::default()
}

/// Closed-form probability of staying in `B_a(0)` as a function of the
/// horizon, sampled at `points` evenly spaced times up to `t_max`.
pub fn exit_curve(
    p: u32,
    b: f64,
    sigma: f64,
    a: i64,
    t_max: f64,
    points: u32,
) -> Result<String, String> {
    let pp = params(p, b, sigma)?;
    if !(t_max > 0.0) {
        return Err(format!("t_max must be positive, got {t_max}"));
    }
    if points == 0 {
        return Err("need at least one curve point".to_string());
    }
    let mut curve = Vec::with_capacity(points as usize);
    for i in 1..=points {
        let t = t_max * i as f64 / points as f64;
        let prob = exact_exit_prob(pp, t, a).map_err(|e| e.to_string())?;
        curve.push(json!({ "t": t, "prob": prob }));
    }
    let body = json!({ "alpha": pp.alpha(), "a": a, "curve": curve });
    Ok(body.to_string())
}

/// Distribution of the radius exponent of one increment over time `t`:
/// the sampler's exact inverse-CDF table, one row per radius.
pub fn radius_pmf(p: u32, b: f64, sigma: f64, t: f64) -> Result<String, String> {
    let pp = params(p, b, sigma)?;
    let sampler = IncrementSampler::new(pp, t, tol()).map_err(|e| e.to_string())?;
    let (r_lo, r_hi) = sampler.radius_range();
    let rows: Vec<Value> =
        (r_lo..=r_hi).map(|r| json!({ "r": r, "prob": sampler.pmf(r) })).collect();
    Ok(json!({ "t": t, "rows": rows }).to_string())
}

/// `n_paths` sampled skeletons on the uniform grid over `[0, t_end]`,
/// radius exponent per grid point (`null` while the path sits at zero).
/// With a pinned displacement literal the paths are bridges forced to
/// reach that point at `t_end`; otherwise they are free.
#[allow(clippy::too_many_arguments)]
pub fn sample_paths(
    p: u32,
    b: f64,
    sigma: f64,
    t_end: f64,
    m_points: u32,
    depth: usize,
    n_paths: u32,
    seed: u64,
    pinned: &str,
) -> Result<String, String> {
    let pp = params(p, b, sigma)?;
    let origin = PAdic::zero(p);
    let mut paths = Vec::with_capacity(n_paths as usize);
    let bridge = if pinned.is_empty() {
        None
    } else {
        let w = PAdic::from_str(pinned).map_err(|e| e.to_string())?;
        let spec = BridgeSpec::new(t_end, origin.clone(), w).map_err(|e| e.to_string())?;
        Some(BridgePathSampler::new(spec, pp, m_points, depth, tol()).map_err(|e| e.to_string())?)
    };
    for i in 0..n_paths {
        let mut rng = RandomStream::new(seed, i as u64);
        let path = match &bridge {
            Some(sampler) => sampler.sample(&mut rng).map_err(|e| e.to_string())?,
            None => sample_path(pp, t_end, m_points, &origin, depth, &mut rng, tol())
                .map_err(|e| e.to_string())?,
        };
        let points: Vec<Value> = path
            .times
            .iter()
            .zip(&path.positions)
            .map(|(t, x)| json!({ "t": t, "e": x.abs_exponent() }))
            .collect();
        paths.push(Value::Array(points));
    }
    Ok(json!({ "pinned": !pinned.is_empty(), "paths": paths }).to_string())
}

#[cfg(target_arch = "wasm32")]
mod bindings {
    use wasm_bindgen::prelude::*;

    #[wasm_bindgen]
    pub fn exit_curve(
        p: u32,
        b: f64,
        sigma: f64,
        a: i64,
        t_max: f64,
        points: u32,
    ) -> Result<String, String> {
        super::exit_curve(p, b, sigma, a, t_max, points)
    }

    #[wasm_bindgen]
    pub fn radius_pmf(p: u32, b: f64, sigma: f64, t: f64) -> Result<String, String> {
        super::radius_pmf(p, b, sigma, t)
    }

    #[wasm_bindgen]
    #[allow(clippy::too_many_arguments)]
    pub fn sample_paths(
        p: u32,
        b: f64,
        sigma: f64,
        t_end: f64,
        m_points: u32,
        depth: usize,
        n_paths: u32,
        seed: u64,
        pinned: &str,
    ) -> Result<String, String> {
        super::sample_paths(p, b, sigma, t_end, m_points, depth, n_paths, seed, pinned)
    }
}
