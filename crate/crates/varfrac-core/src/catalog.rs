//! Synthetic test functions.
//!
//! Functions are addressed by a catalog id plus a flat `key -> value`
//! parameter map, so callers (including the CLI) can forward user input
//! without per-function plumbing. Unknown ids and unknown parameter keys
//! are rejected.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::{Grid1D, SampledFn};

pub type Params = BTreeMap<String, f64>;

const TWO_PI: f64 = 2.0 * core::f64::consts::PI;

/// Builds a catalog function on `grid`.
///
/// Ids and parameters (all optional, shown with defaults):
///
/// * `constant`: `value = 1`.
/// * `monomial`: `degree = 1` (must be >= 0), evaluated in domain coords.
/// * `sine`: `freq = 1`, `sin(freq * pi * u)` with `u` normalized to `[0, 1]`.
/// * `cusp`: `|x - center|^exponent`, `center` defaulting to the midpoint,
///   `exponent = 0.5` in `(0, 1]`.
/// * `weierstrass_varh`: lacunary cosine sum with a prescribed local
///   exponent ramp `h0 -> h1` (`h0 = h1 = 0.5`, `levels = 12`); phases are
///   drawn from `seed`.
pub fn synth_function(name: &str, grid: Grid1D, params: &Params, seed: u64) -> Result<SampledFn> {
    match name {
        "constant" => {
            check_keys(name, params, &["value"])?;
            let c = get(params, "value", 1.0);
            SampledFn::new(grid, alloc::vec![c; grid.n])
        }
        "monomial" => {
            check_keys(name, params, &["degree"])?;
            let k = get(params, "degree", 1.0);
            if !(k >= 0.0) {
                return Err(Error::invalid(alloc::format!(
                    "monomial degree must be >= 0, got {k}"
                )));
            }
            SampledFn::from_fn(grid, |x| libm::pow(x, k))
        }
        "sine" => {
            check_keys(name, params, &["freq"])?;
            let k = get(params, "freq", 1.0);
            let span = grid.b - grid.a;
            SampledFn::from_fn(grid, |x| {
                libm::sin(k * core::f64::consts::PI * (x - grid.a) / span)
            })
        }
        "cusp" => {
            check_keys(name, params, &["center", "exponent"])?;
            let c = get(params, "center", 0.5 * (grid.a + grid.b));
            let e = get(params, "exponent", 0.5);
            if !(e > 0.0 && e <= 1.0) {
                return Err(Error::invalid(alloc::format!(
                    "cusp exponent must lie in (0, 1], got {e}"
                )));
            }
            SampledFn::from_fn(grid, |x| libm::pow((x - c).abs(), e))
        }
        "weierstrass_varh" => {
            check_keys(name, params, &["h0", "h1", "levels"])?;
            let h0 = get(params, "h0", 0.5);
            let h1 = get(params, "h1", h0);
            for h in [h0, h1] {
                if !(h > 0.0 && h < 1.0) {
                    return Err(Error::invalid(alloc::format!(
                        "weierstrass exponent must lie in (0, 1), got {h}"
                    )));
                }
            }
            let levels = get(params, "levels", 12.0);
            if !(levels >= 1.0 && levels <= 40.0) {
                return Err(Error::invalid(alloc::format!(
                    "weierstrass levels must lie in [1, 40], got {levels}"
                )));
            }
            let levels = levels as usize;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let phases: Vec<f64> = (0..=levels).map(|_| TWO_PI * rng.random::<f64>()).collect();
            let span = grid.b - grid.a;
            SampledFn::from_fn(grid, |x| {
                let u = (x - grid.a) / span;
                let h = h0 + (h1 - h0) * u;
                let mut acc = 0.0;
                for (j, &phi) in phases.iter().enumerate() {
                    let scale = libm::exp2(-(j as f64) * h);
                    acc += scale * libm::cos(libm::exp2(j as f64) * core::f64::consts::PI * u + phi);
                }
                acc
            })
        }
        other => Err(Error::invalid(alloc::format!(
            "unknown catalog function '{other}'"
        ))),
    }
}

fn get(params: &Params, key: &str, default: f64) -> f64 {
    params.get(key).copied().unwrap_or(default)
}

fn check_keys(name: &str, params: &Params, allowed: &[&str]) -> Result<()> {
    for key in params.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(Error::invalid(alloc::format!(
                "unknown parameter '{key}' for catalog function '{name}'"
            )));
        }
    }
    Ok(())
}

fn entry(name: &str, grid: Grid1D, kv: &[(&str, f64)], seed: u64) -> Result<(String, SampledFn)> {
    let mut params = Params::new();
    for (k, v) in kv {
        params.insert(String::from(*k), *v);
    }
    let f = synth_function(name, grid, &params, seed)?;
    let mut label = String::from(name);
    for (k, v) in kv {
        label.push_str(&alloc::format!(" {k}={v}"));
    }
    Ok((label, f))
}

/// A fixed 20-entry mix of smooth, cuspy, and multifractal samples used to
/// fit and stress norm constants. Deterministic given `seed`.
pub fn standard_catalog(grid: Grid1D, seed: u64) -> Result<Vec<(String, SampledFn)>> {
    let mut out = Vec::with_capacity(20);
    out.push(entry("constant", grid, &[("value", 1.0)], seed)?);
    out.push(entry("constant", grid, &[("value", 3.7)], seed)?);
    out.push(entry("monomial", grid, &[("degree", 1.0)], seed)?);
    out.push(entry("monomial", grid, &[("degree", 2.0)], seed)?);
    out.push(entry("monomial", grid, &[("degree", 3.0)], seed)?);
    out.push(entry("sine", grid, &[("freq", 1.0)], seed)?);
    out.push(entry("sine", grid, &[("freq", 2.0)], seed)?);
    out.push(entry("sine", grid, &[("freq", 3.0)], seed)?);
    out.push(entry("sine", grid, &[("freq", 5.0)], seed)?);
    out.push(entry("cusp", grid, &[("exponent", 0.3)], seed)?);
    out.push(entry("cusp", grid, &[("exponent", 0.5)], seed)?);
    let q = grid.a + 0.25 * (grid.b - grid.a);
    let p = grid.a + 0.75 * (grid.b - grid.a);
    out.push(entry("cusp", grid, &[("center", q), ("exponent", 0.7)], seed)?);
    out.push(entry("cusp", grid, &[("center", p), ("exponent", 0.4)], seed)?);
    out.push(entry("weierstrass_varh", grid, &[("h0", 0.3)], seed)?);
    out.push(entry("weierstrass_varh", grid, &[("h0", 0.5)], seed.wrapping_add(1))?);
    out.push(entry("weierstrass_varh", grid, &[("h0", 0.7)], seed.wrapping_add(2))?);
    out.push(entry(
        "weierstrass_varh",
        grid,
        &[("h0", 0.3), ("h1", 0.7)],
        seed.wrapping_add(3),
    )?);
    out.push(entry(
        "weierstrass_varh",
        grid,
        &[("h0", 0.7), ("h1", 0.3)],
        seed.wrapping_add(4),
    )?);

    // Two mixtures so the catalog is not purely single-feature.
    let (_, lin) = entry("monomial", grid, &[("degree", 1.0)], seed)?;
    let (_, s3) = entry("sine", grid, &[("freq", 3.0)], seed)?;
    let mix1: Vec<f64> = lin
        .values
        .iter()
        .zip(&s3.values)
        .map(|(a, b)| a + 0.2 * b)
        .collect();
    out.push((String::from("mix linear+sine"), SampledFn::new(grid, mix1)?));

    let (_, sq) = entry("monomial", grid, &[("degree", 2.0)], seed)?;
    let (_, cu) = entry("cusp", grid, &[("exponent", 0.5)], seed)?;
    let mix2: Vec<f64> = sq
        .values
        .iter()
        .zip(&cu.values)
        .map(|(a, b)| a + 0.5 * b)
        .collect();
    out.push((String::from("mix quadratic+cusp"), SampledFn::new(grid, mix2)?));
    Ok(out)
}
