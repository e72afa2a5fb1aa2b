//! Fractional gradient descent with stable noise, plus plain-GD and
//! fixed-order baselines.
//!
//! The fractional gradient uses the one-term per-coordinate Caputo model
//! `g_i = dL/dw_i * |w_i - c_i|^(1-alpha) / Gamma(2-alpha)` around a
//! reference point `c` (default: the initial iterate). Stochastic steps add
//! per-coordinate stable noise scaled by `sqrt(2 eta T)`; because stable
//! noise has unbounded support, the combined step is norm-clipped.

use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::levy::draw_standard;

/// Benchmark objectives with analytic gradients.
#[derive(Debug, Clone, PartialEq)]
pub enum LossSpec {
    /// `L(w) = curvature/2 * |w - center|^2`.
    Quadratic { center: Vec<f64>, curvature: f64 },
    /// Classic banana valley with global minimum at all-ones.
    Rosenbrock { dim: usize },
    /// Quadratic bowl plus separable cosine ripples
    /// `sum_i sum_m a_m cos(omega_m (w_i - center_i))`; requires
    /// `sum_m a_m omega_m^2 < curvature` so the bowl center stays the
    /// unique global minimum.
    MultiscaleRipple {
        center: Vec<f64>,
        curvature: f64,
        amplitudes: Vec<f64>,
        frequencies: Vec<f64>,
    },
}

impl LossSpec {
    pub fn dim(&self) -> usize {
        match self {
            LossSpec::Quadratic { center, .. } => center.len(),
            LossSpec::Rosenbrock { dim } => *dim,
            LossSpec::MultiscaleRipple { center, .. } => center.len(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            LossSpec::Quadratic { center, curvature } => {
                if center.is_empty() {
                    return Err(Error::invalid("dimension must be >= 1"));
                }
                if !(*curvature > 0.0 && curvature.is_finite()) {
                    return Err(Error::invalid("curvature must be positive"));
                }
            }
            LossSpec::Rosenbrock { dim } => {
                if *dim < 2 {
                    return Err(Error::invalid("Rosenbrock needs dimension >= 2"));
                }
            }
            LossSpec::MultiscaleRipple {
                center,
                curvature,
                amplitudes,
                frequencies,
            } => {
                if center.is_empty() {
                    return Err(Error::invalid("dimension must be >= 1"));
                }
                if !(*curvature > 0.0 && curvature.is_finite()) {
                    return Err(Error::invalid("curvature must be positive"));
                }
                if amplitudes.len() != frequencies.len() {
                    return Err(Error::invalid("amplitude and frequency counts differ"));
                }
                if !amplitudes.iter().all(|&a| a > 0.0 && a.is_finite()) {
                    return Err(Error::invalid("ripple amplitudes must be positive"));
                }
                let mass: f64 = amplitudes
                    .iter()
                    .zip(frequencies)
                    .map(|(a, w)| a * w * w)
                    .sum();
                if mass >= *curvature {
                    return Err(Error::invalid(alloc::format!(
                        "ripple curvature mass {mass} must stay below the bowl curvature {curvature}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn value(&self, w: &[f64]) -> f64 {
        match self {
            LossSpec::Quadratic { center, curvature } => {
                let mut acc = 0.0;
                for (x, c) in w.iter().zip(center) {
                    acc += (x - c) * (x - c);
                }
                0.5 * curvature * acc
            }
            LossSpec::Rosenbrock { .. } => {
                let mut acc = 0.0;
                for i in 0..w.len() - 1 {
                    let gap = w[i + 1] - w[i] * w[i];
                    acc += 100.0 * gap * gap + (1.0 - w[i]) * (1.0 - w[i]);
                }
                acc
            }
            LossSpec::MultiscaleRipple {
                center,
                curvature,
                amplitudes,
                frequencies,
            } => {
                let mut acc = 0.0;
                for (x, c) in w.iter().zip(center) {
                    let u = x - c;
                    acc += 0.5 * curvature * u * u;
                    for (a, om) in amplitudes.iter().zip(frequencies) {
                        acc += a * libm::cos(om * u);
                    }
                }
                acc
            }
        }
    }

    pub fn gradient(&self, w: &[f64]) -> Vec<f64> {
        match self {
            LossSpec::Quadratic { center, curvature } => w
                .iter()
                .zip(center)
                .map(|(x, c)| curvature * (x - c))
                .collect(),
            LossSpec::Rosenbrock { dim } => {
                let d = *dim;
                let mut g = vec![0.0; d];
                for i in 0..d - 1 {
                    let gap = w[i + 1] - w[i] * w[i];
                    g[i] += -400.0 * w[i] * gap - 2.0 * (1.0 - w[i]);
                    g[i + 1] += 200.0 * gap;
                }
                g
            }
            LossSpec::MultiscaleRipple {
                center,
                curvature,
                amplitudes,
                frequencies,
            } => w
                .iter()
                .zip(center)
                .map(|(x, c)| {
                    let u = x - c;
                    let mut g = curvature * u;
                    for (a, om) in amplitudes.iter().zip(frequencies) {
                        g -= a * om * libm::sin(om * u);
                    }
                    g
                })
                .collect(),
        }
    }

    /// Known global minimizer, available for every catalog loss.
    pub fn minimizer(&self) -> Vec<f64> {
        match self {
            LossSpec::Quadratic { center, .. } => center.clone(),
            LossSpec::Rosenbrock { dim } => vec![1.0; *dim],
            LossSpec::MultiscaleRipple { center, .. } => center.clone(),
        }
    }
}

/// Optimizer settings.
#[derive(Debug, Clone, PartialEq)]
pub struct OptConfig {
    /// Learning rate, positive.
    pub eta: f64,
    /// Noise temperature, nonnegative; zero disables noise draws entirely.
    pub temperature: f64,
    /// Fractional gradient order in (0, 1]; 1 recovers the plain gradient.
    pub alpha_order: f64,
    /// Stability index of the noise in (0, 2]; defaults to `alpha_order`.
    pub noise_index: Option<f64>,
    /// Skew of the stable noise in [-1, 1].
    pub stable_skew: f64,
    /// Reference point of the fractional gradient; defaults to the initial
    /// iterate of the run.
    pub ref_point: Option<Vec<f64>>,
    pub max_iter: usize,
    /// Stop once the fractional gradient norm falls below this.
    pub grad_tol: f64,
    pub seed: u64,
    /// Hard Euclidean cap on each combined step.
    pub step_clip: f64,
    /// Adds the divergent-at-`c` constant memory term
    /// `sign(w_i - c_i) L(c) |w_i - c_i|^(-alpha) / Gamma(1 - alpha)`
    /// to the gradient model. Off by default.
    pub rl_term: bool,
}

impl OptConfig {
    /// Deterministic noiseless baseline configuration.
    pub fn basic(eta: f64, alpha_order: f64, max_iter: usize, seed: u64, step_clip: f64) -> Self {
        OptConfig {
            eta,
            temperature: 0.0,
            alpha_order,
            noise_index: None,
            stable_skew: 0.0,
            ref_point: None,
            max_iter,
            grad_tol: 1e-12,
            seed,
            step_clip,
            rl_term: false,
        }
    }

    fn validate(&self, dim: usize) -> Result<()> {
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return Err(Error::invalid("learning rate must be positive"));
        }
        if !(self.temperature >= 0.0 && self.temperature.is_finite()) {
            return Err(Error::invalid("temperature must be >= 0"));
        }
        if !(self.alpha_order > 0.0 && self.alpha_order <= 1.0) {
            return Err(Error::invalid(alloc::format!(
                "gradient order must lie in (0, 1], got {}",
                self.alpha_order
            )));
        }
        if let Some(ni) = self.noise_index {
            if !(ni > 0.0 && ni <= 2.0) {
                return Err(Error::invalid(alloc::format!(
                    "noise index must lie in (0, 2], got {ni}"
                )));
            }
        }
        if !(-1.0..=1.0).contains(&self.stable_skew) {
            return Err(Error::invalid("skew must lie in [-1, 1]"));
        }
        if let Some(c) = &self.ref_point {
            if c.len() != dim {
                return Err(Error::invalid("reference point dimension mismatch"));
            }
        }
        if !(self.grad_tol >= 0.0) {
            return Err(Error::invalid("gradient tolerance must be >= 0"));
        }
        if !(self.step_clip > 0.0 && self.step_clip.is_finite()) {
            return Err(Error::invalid("step clip must be positive and finite"));
        }
        Ok(())
    }
}

/// One record per accepted iterate.
#[derive(Debug, Clone, PartialEq)]
pub struct OptRecord {
    pub w: Vec<f64>,
    pub loss: f64,
    pub grad_norm: f64,
    /// Distance to the known minimizer.
    pub error: f64,
}

/// Iterate history; the first record is the initial point.
#[derive(Debug, Clone, PartialEq)]
pub struct OptTrace {
    pub records: Vec<OptRecord>,
}

fn norm(v: &[f64]) -> f64 {
    libm::sqrt(v.iter().map(|x| x * x).sum())
}

/// One-term Caputo fractional gradient around `c`. At `alpha_order = 1`
/// this is exactly the analytic gradient; at `w_i = c_i` the fractional
/// factor vanishes for `alpha_order < 1`.
pub fn frac_gradient(loss: &LossSpec, w: &[f64], alpha_order: f64, c: &[f64]) -> Result<Vec<f64>> {
    loss.validate()?;
    if !(alpha_order > 0.0 && alpha_order <= 1.0) {
        return Err(Error::invalid(alloc::format!(
            "gradient order must lie in (0, 1], got {alpha_order}"
        )));
    }
    if w.len() != loss.dim() || c.len() != loss.dim() {
        return Err(Error::invalid("iterate dimension mismatch"));
    }
    let mut g = loss.gradient(w);
    if alpha_order == 1.0 {
        return Ok(g);
    }
    let inv_gamma = 1.0 / libm::tgamma(2.0 - alpha_order);
    for (gi, (x, ci)) in g.iter_mut().zip(w.iter().zip(c)) {
        *gi *= libm::pow(libm::fabs(x - ci), 1.0 - alpha_order) * inv_gamma;
    }
    Ok(g)
}

fn model_gradient(loss: &LossSpec, w: &[f64], cfg: &OptConfig, c: &[f64]) -> Result<Vec<f64>> {
    let mut g = frac_gradient(loss, w, cfg.alpha_order, c)?;
    if cfg.rl_term {
        let lc = loss.value(c);
        let inv_gamma = 1.0 / libm::tgamma(1.0 - cfg.alpha_order);
        for (gi, (x, ci)) in g.iter_mut().zip(w.iter().zip(c)) {
            let u = x - ci;
            *gi += libm::copysign(libm::pow(libm::fabs(u), -cfg.alpha_order), u) * lc * inv_gamma;
        }
    }
    Ok(g)
}

fn step_from_gradient(g: &[f64], cfg: &OptConfig, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut delta: Vec<f64> = g.iter().map(|gi| -cfg.eta * gi).collect();
    if cfg.temperature > 0.0 {
        let index = cfg.noise_index.unwrap_or(cfg.alpha_order);
        let scale = libm::sqrt(2.0 * cfg.eta * cfg.temperature);
        for d in delta.iter_mut() {
            *d += scale * draw_standard(rng, index, cfg.stable_skew);
        }
    }
    let len = norm(&delta);
    if len > cfg.step_clip {
        let shrink = cfg.step_clip / len;
        for d in delta.iter_mut() {
            *d *= shrink;
        }
    }
    delta
}

/// A single update `w' = w - eta g + sqrt(2 eta T) xi`, norm-clipped at
/// `cfg.step_clip`. Noise is drawn per coordinate (and only when the
/// temperature is positive), so rng consumption is reproducible.
pub fn qfgd_step(
    w: &[f64],
    loss: &LossSpec,
    cfg: &OptConfig,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<f64>> {
    loss.validate()?;
    cfg.validate(loss.dim())?;
    let c = cfg.ref_point.clone().unwrap_or_else(|| w.to_vec());
    let g = model_gradient(loss, w, cfg, &c)?;
    let delta = step_from_gradient(&g, cfg, rng);
    Ok(w.iter().zip(&delta).map(|(x, d)| x + d).collect())
}

/// Suggested step cap: ten nominal first steps measured by the plain
/// gradient at `w0` (falls back to 1 when `w0` is already stationary).
pub fn default_step_clip(loss: &LossSpec, w0: &[f64], eta: f64) -> f64 {
    let g0 = norm(&loss.gradient(w0));
    if g0 > 0.0 {
        10.0 * eta * g0
    } else {
        1.0
    }
}

fn record(loss: &LossSpec, w: &[f64], g: &[f64], target: &[f64]) -> OptRecord {
    let mut err = 0.0;
    for (x, t) in w.iter().zip(target) {
        err += (x - t) * (x - t);
    }
    OptRecord {
        w: w.to_vec(),
        loss: loss.value(w),
        grad_norm: norm(g),
        error: libm::sqrt(err),
    }
}

/// Runs the optimizer until the model-gradient norm drops below
/// `grad_tol` or `max_iter` steps have been taken. The first trace record
/// is the initial point.
pub fn run_qfgd(loss: &LossSpec, w0: &[f64], cfg: &OptConfig) -> Result<OptTrace> {
    loss.validate()?;
    cfg.validate(loss.dim())?;
    if w0.len() != loss.dim() {
        return Err(Error::invalid("initial point dimension mismatch"));
    }
    let c = cfg.ref_point.clone().unwrap_or_else(|| w0.to_vec());
    let target = loss.minimizer();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut w = w0.to_vec();
    let mut g = model_gradient(loss, &w, cfg, &c)?;
    let mut records = vec![record(loss, &w, &g, &target)];
    for _ in 0..cfg.max_iter {
        if norm(&g) < cfg.grad_tol {
            break;
        }
        let delta = step_from_gradient(&g, cfg, &mut rng);
        for (x, d) in w.iter_mut().zip(&delta) {
            *x += d;
        }
        g = model_gradient(loss, &w, cfg, &c)?;
        records.push(record(loss, &w, &g, &target));
    }
    Ok(OptTrace { records })
}

/// Plain gradient descent and fixed-order fractional descent with the same
/// budget, both noiseless.
pub fn run_baselines(loss: &LossSpec, w0: &[f64], cfg: &OptConfig) -> Result<(OptTrace, OptTrace)> {
    let mut gd_cfg = cfg.clone();
    gd_cfg.temperature = 0.0;
    gd_cfg.alpha_order = 1.0;
    let mut fno_cfg = cfg.clone();
    fno_cfg.temperature = 0.0;
    let gd = run_qfgd(loss, w0, &gd_cfg)?;
    let fno = run_qfgd(loss, w0, &fno_cfg)?;
    Ok((gd, fno))
}
