//! Orthonormal Haar analysis on power-of-two grids: decomposition and
//! reconstruction, regularity-adapted coefficient thresholds, nonlinear
//! approximation with exact discarded-energy accounting, truncation-error
//! bound evaluators, a regularity-driven domain partition, and a local
//! oscillation-slope estimator of pointwise order.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::{Grid1D, OrderField, SampledFn};
use crate::spaces::anisotropic_penalty;
use crate::stats::linear_fit;

/// Haar coefficients of a grid function. Level `j` holds `2^j` detail
/// coefficients; the input is pre-scaled by `sqrt(spacing)` so that the sum
/// of squared coefficients equals the discrete squared `L^2` norm.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletCoeffs {
    pub grid: Grid1D,
    /// Number of detail levels `J`; the grid has `2^J` samples.
    pub levels: u32,
    pub scaling_coeff: f64,
    pub detail: Vec<Vec<f64>>,
}

/// Per-coefficient threshold schedule derived from a spatial order field.
///
/// Entry `k` of level `j` describes the coefficient whose support is the
/// sample block `[k 2^(J-j), (k+1) 2^(J-j))`: `beta` is the minimum order
/// over that block, `n_order = ceil(1 / (2 beta))`, and
/// `tau = 2^(-j beta n_order)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdPlan {
    pub levels: u32,
    pub beta: Vec<Vec<f64>>,
    pub n_order: Vec<Vec<u32>>,
    /// Per-level slack exponent used by the bound evaluators.
    pub eps: Vec<f64>,
    pub tau: Vec<Vec<f64>>,
}

/// Thresholded reconstruction plus bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxResult {
    pub approx: SampledFn,
    /// Retained coefficient count (kept details plus the scaling term).
    pub retained: usize,
    /// Discrete `L^2` error, equal to the square root of the discarded
    /// coefficient energy.
    pub l2_error: f64,
}

fn levels_for(n: usize) -> Result<u32> {
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::invalid(alloc::format!(
            "Haar transform needs a power-of-two grid length >= 2, got {n}"
        )));
    }
    Ok(n.trailing_zeros())
}

/// Orthonormal Haar decomposition.
pub fn haar_decompose(f: &SampledFn) -> Result<WaveletCoeffs> {
    let n = f.len();
    let levels = levels_for(n)?;
    let root_h = libm::sqrt(f.grid.spacing);
    let mut work: Vec<f64> = f.values.iter().map(|v| v * root_h).collect();
    let inv_rt2 = 1.0 / libm::sqrt(2.0);
    let mut detail_rev: Vec<Vec<f64>> = Vec::with_capacity(levels as usize);
    let mut len = n;
    while len > 1 {
        let half = len / 2;
        let mut d = Vec::with_capacity(half);
        for i in 0..half {
            let (a0, a1) = (work[2 * i], work[2 * i + 1]);
            d.push((a0 - a1) * inv_rt2);
            work[i] = (a0 + a1) * inv_rt2;
        }
        detail_rev.push(d);
        len = half;
    }
    detail_rev.reverse();
    Ok(WaveletCoeffs {
        grid: f.grid,
        levels,
        scaling_coeff: work[0],
        detail: detail_rev,
    })
}

/// Inverse of [`haar_decompose`].
pub fn haar_reconstruct(c: &WaveletCoeffs) -> Result<SampledFn> {
    let n = 1usize << c.levels;
    if c.detail.len() != c.levels as usize {
        return Err(Error::invalid("detail level count does not match levels"));
    }
    for (j, d) in c.detail.iter().enumerate() {
        if d.len() != 1usize << j {
            return Err(Error::invalid("detail level has wrong length"));
        }
    }
    let inv_rt2 = 1.0 / libm::sqrt(2.0);
    let mut work = Vec::with_capacity(n);
    work.push(c.scaling_coeff);
    for d in &c.detail {
        let mut next = Vec::with_capacity(2 * work.len());
        for (s, dd) in work.iter().zip(d) {
            next.push((s + dd) * inv_rt2);
            next.push((s - dd) * inv_rt2);
        }
        work = next;
    }
    let root_h = libm::sqrt(c.grid.spacing);
    SampledFn::new(c.grid, work.iter().map(|v| v / root_h).collect())
}

fn order_from_beta(beta: f64) -> u32 {
    libm::ceil(1.0 / (2.0 * beta)) as u32
}

/// Builds the per-coefficient threshold schedule from a spatial order field
/// sampled on the same (power-of-two) grid. `eps` must lie in `[0, 2)` so
/// the slack stays below `2 n_order` for every coefficient.
pub fn threshold_plan(alpha: &OrderField, eps: f64) -> Result<ThresholdPlan> {
    let n = alpha.grid.n;
    let levels = levels_for(n)?;
    if !(0.0..2.0).contains(&eps) {
        return Err(Error::invalid(alloc::format!(
            "slack exponent must lie in [0, 2), got {eps}"
        )));
    }
    let mut beta = Vec::with_capacity(levels as usize);
    let mut n_order = Vec::with_capacity(levels as usize);
    let mut tau = Vec::with_capacity(levels as usize);
    for j in 0..levels {
        let count = 1usize << j;
        let block = n >> j;
        let mut bj = Vec::with_capacity(count);
        let mut nj = Vec::with_capacity(count);
        let mut tj = Vec::with_capacity(count);
        for k in 0..count {
            let lo = k * block;
            let b = alpha.alpha[lo..lo + block]
                .iter()
                .cloned()
                .fold(f64::INFINITY, f64::min);
            let ord = order_from_beta(b);
            bj.push(b);
            nj.push(ord);
            tj.push(libm::exp2(-(j as f64) * b * ord as f64));
        }
        beta.push(bj);
        n_order.push(nj);
        tau.push(tj);
    }
    Ok(ThresholdPlan {
        levels,
        beta,
        n_order,
        eps: vec![eps; levels as usize],
        tau,
    })
}

/// Zeroes every detail coefficient strictly below its threshold and
/// reconstructs; the reported error is the discarded coefficient energy.
pub fn adaptive_approx(f: &SampledFn, plan: &ThresholdPlan) -> Result<ApproxResult> {
    let mut coeffs = haar_decompose(f)?;
    if coeffs.levels != plan.levels || plan.tau.len() != plan.levels as usize {
        return Err(Error::invalid("plan shape does not match the grid"));
    }
    let mut kept = 0usize;
    let mut discarded = 0.0;
    for (level, taus) in coeffs.detail.iter_mut().zip(&plan.tau) {
        if level.len() != taus.len() {
            return Err(Error::invalid("plan level has wrong coefficient count"));
        }
        for (c, &t) in level.iter_mut().zip(taus) {
            if libm::fabs(*c) < t {
                discarded += *c * *c;
                *c = 0.0;
            } else {
                kept += 1;
            }
        }
    }
    Ok(ApproxResult {
        approx: haar_reconstruct(&coeffs)?,
        retained: kept + 1,
        l2_error: libm::sqrt(discarded),
    })
}

/// Multiscale truncation bound: sum over levels of
/// `2^(-j beta_j (2 N_j - eps_j))` with `beta_j` the level minimum,
/// plus the order-variation penalty.
pub fn error_bound_thm2(plan: &ThresholdPlan, alpha: &OrderField) -> Result<f64> {
    if levels_for(alpha.grid.n)? != plan.levels {
        return Err(Error::invalid("plan was built for a different grid size"));
    }
    let mut sum = 0.0;
    for j in 0..plan.levels as usize {
        let bj = plan.beta[j]
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        let nj = order_from_beta(bj) as f64;
        sum += libm::exp2(-(j as f64) * bj * (2.0 * nj - plan.eps[j]));
    }
    Ok(sum + anisotropic_penalty(alpha).value)
}

/// Single-scale truncation bound `n^(-beta (2 N - eps))` plus the
/// order-variation penalty.
pub fn error_bound_thm1(
    n: u64,
    beta: f64,
    n_order: u32,
    eps: f64,
    alpha: &OrderField,
) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("resolution must be >= 1"));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::invalid("beta must be positive"));
    }
    if n_order == 0 {
        return Err(Error::invalid("order must be >= 1"));
    }
    if !(0.0 <= eps && eps < 2.0 * n_order as f64) {
        return Err(Error::invalid("slack must lie in [0, 2 N)"));
    }
    let decay = libm::pow(n as f64, -beta * (2.0 * n_order as f64 - eps));
    Ok(decay + anisotropic_penalty(alpha).value)
}

/// Greedy left-to-right cover of the domain with cells whose width tracks
/// the local target `n^(-beta / alpha(left edge))`. A trailing remainder
/// shorter than half its target merges into the previous cell, so each
/// width stays within a factor of two of the target at its own left edge
/// for moderately varying orders.
pub fn partition_domain(alpha: &OrderField, n: u64, beta: f64) -> Result<Vec<(f64, f64)>> {
    if n < 2 {
        return Err(Error::invalid("resolution must be >= 2"));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::invalid("beta must be positive"));
    }
    let (a, b) = (alpha.grid.a, alpha.grid.b);
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let mut pos = a;
    loop {
        let rem = b - pos;
        let width = libm::pow(n as f64, -beta / alpha.value_at(pos));
        if rem <= width {
            match cells.last_mut() {
                Some(last) if rem < 0.5 * width => last.1 = b,
                _ => cells.push((pos, b)),
            }
            return Ok(cells);
        }
        cells.push((pos, pos + width));
        pos += width;
    }
}

/// Estimates a pointwise regularity order from the log-log slope of local
/// oscillation against dyadic radii up to `window` samples. Slopes clip to
/// `[0.05, 0.95]`; degenerate oscillation reads as maximal smoothness.
pub fn local_order_estimate(f: &SampledFn, window: usize) -> Result<OrderField> {
    let n = f.len();
    if window < 4 || window > n / 4 {
        return Err(Error::invalid(alloc::format!(
            "window must lie in [4, n/4] = [4, {}], got {window}",
            n / 4
        )));
    }
    let h = f.grid.spacing;
    let v = &f.values;
    let mut alpha = Vec::with_capacity(n);
    let mut xs: Vec<f64> = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    for i in 0..n {
        xs.clear();
        ys.clear();
        let mut r = 1usize;
        while r <= window {
            let lo = i.saturating_sub(r);
            let hi = (i + r).min(n - 1);
            let mut min = f64::INFINITY;
            let mut max = f64::NEG_INFINITY;
            for &x in &v[lo..=hi] {
                min = min.min(x);
                max = max.max(x);
            }
            let osc = max - min;
            if osc > 0.0 {
                // Fit against the realized window width: near the boundary
                // the window clips, and the nominal radius would bias the
                // slope downward.
                xs.push(libm::log((hi - lo) as f64 * h));
                ys.push(libm::log(osc));
            }
            r *= 2;
        }
        let slope = if xs.len() < 2 {
            0.95
        } else {
            match linear_fit(&xs, &ys) {
                Ok((s, _)) if s.is_finite() => s.clamp(0.05, 0.95),
                _ => 0.95,
            }
        };
        alpha.push(slope);
    }
    OrderField::new(f.grid, alpha)
}
