//! Alpha-stable sampling, subordinator paths, and the log-regularized
//! kernel estimated by Monte Carlo.
//!
//! Randomness is counter-based: work is split into fixed chunks of
//! [`MC_CHUNK`] draws and chunk `i` runs on the ChaCha stream `(seed, i)`.
//! Partial sums are folded in chunk order, so results are bit-identical no
//! matter how many threads execute the chunks.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::stats::linear_fit;

/// Number of draws per counter chunk.
pub const MC_CHUNK: usize = 8192;

/// Floor applied to the subordinator value inside the kernel integrand.
pub const KERNEL_FLOOR: f64 = 1e-8;

const UNIFORM_CLAMP: f64 = 1e-12;

/// Parameters of a stable law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableParams {
    /// Stability index in (0, 2]; 2 is Gaussian and ignores the skew.
    pub stability: f64,
    /// Skewness in [-1, 1].
    pub skew: f64,
    /// Scale, strictly positive.
    pub scale: f64,
    /// Location shift.
    pub location: f64,
}

impl StableParams {
    pub fn new(stability: f64, skew: f64, scale: f64, location: f64) -> Result<StableParams> {
        if !(stability > 0.0 && stability <= 2.0) {
            return Err(Error::invalid(alloc::format!(
                "stability must lie in (0, 2], got {stability}"
            )));
        }
        if !(-1.0..=1.0).contains(&skew) || !skew.is_finite() {
            return Err(Error::invalid(alloc::format!(
                "skew must lie in [-1, 1], got {skew}"
            )));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::invalid(alloc::format!(
                "scale must be positive and finite, got {scale}"
            )));
        }
        if !location.is_finite() {
            return Err(Error::invalid("location must be finite"));
        }
        Ok(StableParams {
            stability,
            skew,
            scale,
            location,
        })
    }

    /// Unit scale, zero location.
    pub fn standard(stability: f64, skew: f64) -> Result<StableParams> {
        StableParams::new(stability, skew, 1.0, 0.0)
    }
}

/// A sampled nondecreasing subordinator path starting at (0, 0).
#[derive(Debug, Clone, PartialEq)]
pub struct SubordinatorPath {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n_samples: u64,
}

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

fn unit_open(rng: &mut ChaCha8Rng) -> f64 {
    rng.random::<f64>()
        .clamp(UNIFORM_CLAMP, 1.0 - UNIFORM_CLAMP)
}

/// One standard stable draw (unit scale, zero location) by the
/// Chambers-Mallows-Stuck transform. Consumes exactly two uniforms.
pub(crate) fn draw_standard(rng: &mut ChaCha8Rng, stability: f64, skew: f64) -> f64 {
    use core::f64::consts::{FRAC_PI_2, PI};
    let v = PI * (unit_open(rng) - 0.5);
    let w = -libm::log(unit_open(rng));
    if stability == 2.0 {
        return 2.0 * libm::sqrt(w) * libm::sin(v);
    }
    if stability == 1.0 {
        let xi = FRAC_PI_2 + skew * v;
        let z = (xi * libm::tan(v) - skew * libm::log(FRAC_PI_2 * w * libm::cos(v) / xi))
            / FRAC_PI_2;
        return z;
    }
    let ta = skew * libm::tan(FRAC_PI_2 * stability);
    let b = libm::atan(ta) / stability;
    let s = libm::pow(1.0 + ta * ta, 0.5 / stability);
    let a = stability * (v + b);
    s * libm::sin(a) / libm::pow(libm::cos(v), 1.0 / stability)
        * libm::pow(libm::cos(v - a) / w, (1.0 - stability) / stability)
}

fn shift_for(params: &StableParams) -> f64 {
    // The CMS alpha = 1 branch carries a scale-dependent drift.
    if params.stability == 1.0 {
        params.location
            + 2.0 / core::f64::consts::PI * params.skew * params.scale * libm::log(params.scale)
    } else {
        params.location
    }
}

/// Draws `n` i.i.d. samples of the stable law. Deterministic in `seed` and
/// independent of how chunks are later distributed over threads.
pub fn sample_stable(params: &StableParams, n: usize, seed: u64) -> Result<Vec<f64>> {
    StableParams::new(params.stability, params.skew, params.scale, params.location)?;
    if n == 0 {
        return Err(Error::invalid("sample count must be >= 1"));
    }
    let shift = shift_for(params);
    let mut out = Vec::with_capacity(n);
    let mut chunk = 0u64;
    while out.len() < n {
        let mut rng = chunk_rng(seed, chunk);
        let take = MC_CHUNK.min(n - out.len());
        for _ in 0..take {
            out.push(params.scale * draw_standard(&mut rng, params.stability, params.skew) + shift);
        }
        chunk += 1;
    }
    Ok(out)
}

/// Samples a one-sided stable subordinator on `n_steps` uniform steps of
/// `[0, t_end]`; increments scale like `dt^(1/gamma)`.
pub fn sample_subordinator(
    gamma: f64,
    t_end: f64,
    n_steps: usize,
    seed: u64,
) -> Result<SubordinatorPath> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::invalid(alloc::format!(
            "subordinator index must lie in (0, 1), got {gamma}"
        )));
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::invalid("t_end must be positive and finite"));
    }
    if n_steps == 0 {
        return Err(Error::invalid("need at least one step"));
    }
    let dt = t_end / n_steps as f64;
    let scale = libm::pow(dt, 1.0 / gamma);
    let mut times = Vec::with_capacity(n_steps + 1);
    let mut values = Vec::with_capacity(n_steps + 1);
    times.push(0.0);
    values.push(0.0);
    let mut level = 0.0;
    let mut chunk = 0u64;
    let mut drawn = 0usize;
    let mut rng = chunk_rng(seed, chunk);
    for k in 1..=n_steps {
        if drawn == MC_CHUNK {
            chunk += 1;
            rng = chunk_rng(seed, chunk);
            drawn = 0;
        }
        level += scale * draw_standard(&mut rng, gamma, 1.0);
        drawn += 1;
        times.push(k as f64 * dt);
        values.push(level);
    }
    Ok(SubordinatorPath { times, values })
}

fn check_kernel_args(z: f64, alpha: f64, gamma: f64, t: f64) -> Result<()> {
    if !z.is_finite() {
        return Err(Error::invalid("z must be finite"));
    }
    if !(0.0..=2.0).contains(&alpha) || !alpha.is_finite() {
        return Err(Error::invalid(alloc::format!(
            "kernel exponent must lie in [0, 2], got {alpha}"
        )));
    }
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::invalid(alloc::format!(
            "subordinator index must lie in (0, 1), got {gamma}"
        )));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::invalid("t must be positive and finite"));
    }
    Ok(())
}

/// Sum and sum-of-squares of the kernel integrand over one counter chunk.
///
/// Chunk `chunk_index` always consumes the stream `(seed, chunk_index)`
/// regardless of which thread runs it; callers fold the partials in index
/// order to stay bit-reproducible.
pub fn kernel_chunk_sums(
    z: f64,
    alpha: f64,
    gamma: f64,
    t: f64,
    seed: u64,
    chunk_index: u64,
    len: usize,
) -> (f64, f64) {
    let mut rng = chunk_rng(seed, chunk_index);
    let t_scale = libm::pow(t, 1.0 / gamma);
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..len {
        let lt = (t_scale * draw_standard(&mut rng, gamma, 1.0)).max(KERNEL_FLOOR);
        let v = libm::pow(libm::log(1.0 + libm::fabs(z) + lt), -alpha);
        sum += v;
        sum_sq += v * v;
    }
    (sum, sum_sq)
}

/// Folds per-chunk partial sums (in chunk order) into a mean / stderr pair.
pub fn kernel_from_partials(partials: &[(f64, f64)], n_samples: u64) -> Result<KernelEstimate> {
    if n_samples < 2 {
        return Err(Error::invalid("need at least two samples"));
    }
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for &(s, q) in partials {
        sum += s;
        sum_sq += q;
    }
    let n = n_samples as f64;
    let mean = sum / n;
    let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
    Ok(KernelEstimate {
        mean,
        stderr: libm::sqrt(var / n),
        n_samples,
    })
}

/// Monte Carlo estimate of `E[(ln(1 + |z| + L_t))^(-alpha)]` where `L_t`
/// is the subordinator value at time `t`, floored at [`KERNEL_FLOOR`].
///
/// At `alpha = 0` the integrand is identically one and the mean is exact.
pub fn hadamard_kernel(
    z: f64,
    alpha: f64,
    gamma: f64,
    t: f64,
    n_mc: usize,
    seed: u64,
) -> Result<KernelEstimate> {
    check_kernel_args(z, alpha, gamma, t)?;
    if n_mc < 100 {
        return Err(Error::invalid("n_mc must be >= 100"));
    }
    let n_chunks = n_mc.div_ceil(MC_CHUNK);
    let mut partials = Vec::with_capacity(n_chunks);
    for c in 0..n_chunks {
        let len = MC_CHUNK.min(n_mc - c * MC_CHUNK);
        partials.push(kernel_chunk_sums(z, alpha, gamma, t, seed, c as u64, len));
    }
    kernel_from_partials(&partials, n_mc as u64)
}

/// Deterministic quadrature of the plain Levy-measure integral
/// `int_{s_min}^{s_max} (ln(1 + |z| + s))^(-alpha) s^(-1-gamma) ds`
/// with `s_min = 1e-8`, `s_max = 1e3`.
///
/// This is the reading of the kernel without the subordinator substitution
/// (hence no time argument); the measure is non-integrable at the origin,
/// so the lower truncation is part of the definition.
pub fn hadamard_kernel_literal(z: f64, alpha: f64, gamma: f64) -> Result<f64> {
    check_kernel_args(z, alpha, gamma, 1.0)?;
    let s_min: f64 = 1e-8;
    let s_max: f64 = 1e3;
    // Substituting u = ln s turns the window into [-18.4, 6.9] with a
    // smooth integrand exp(-gamma u) (ln(1 + |z| + e^u))^(-alpha).
    let u_lo = libm::log(s_min);
    let u_hi = libm::log(s_max);
    let n = 20_000usize;
    let h = (u_hi - u_lo) / n as f64;
    let f = |u: f64| {
        let s = libm::exp(u);
        libm::exp(-gamma * u) * libm::pow(libm::log(1.0 + libm::fabs(z) + s), -alpha)
    };
    let mut acc = 0.5 * (f(u_lo) + f(u_hi));
    for k in 1..n {
        acc += f(u_lo + k as f64 * h);
    }
    Ok(acc * h)
}

/// Least-squares slope of `log variance` against `log t` for injected
/// per-time variances.
pub fn fit_variance_slope(t_grid: &[f64], variances: &[f64]) -> Result<f64> {
    if t_grid.len() != variances.len() {
        return Err(Error::invalid("t grid and variance lengths differ"));
    }
    if t_grid.len() < 4 {
        return Err(Error::invalid("need at least 4 time points"));
    }
    let mut prev = 0.0;
    for &t in t_grid {
        if !(t > prev && t.is_finite()) {
            return Err(Error::invalid("t grid must be increasing and positive"));
        }
        prev = t;
    }
    let lo = variances.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = variances.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !(lo > 0.0 && hi.is_finite()) {
        return Err(Error::DegenerateFit("variance must be positive and finite"));
    }
    if hi - lo == 0.0 {
        return Err(Error::DegenerateFit("variance is flat across t"));
    }
    let xs: Vec<f64> = t_grid.iter().map(|&t| libm::log(t)).collect();
    let ys: Vec<f64> = variances.iter().map(|&v| libm::log(v)).collect();
    Ok(linear_fit(&xs, &ys)?.0)
}

/// Estimates the kernel variance at `z = 1` for each time in `t_grid`
/// (common random numbers across times) and fits its log-log slope.
pub fn variance_scaling_fit(
    alpha: f64,
    gamma: f64,
    t_grid: &[f64],
    n_mc: usize,
    seed: u64,
) -> Result<f64> {
    let mut vars = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let est = hadamard_kernel(1.0, alpha, gamma, t, n_mc, seed)?;
        let n = est.n_samples as f64;
        vars.push(est.stderr * est.stderr * n);
    }
    fit_variance_slope(t_grid, &vars)
}
