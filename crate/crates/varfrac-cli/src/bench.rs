//! Benchmark harnesses behind `varfrac bench fig1` and `varfrac bench fig2`.
//!
//! `fig1` compares order-adapted wavelet thresholding against a fixed
//! mid-range order on a rough synthetic signal whose smoothness drifts
//! across the domain. `fig2` races the fractional-gradient optimizer and
//! its deterministic baselines down a rippled quadratic bowl.

use varfrac_core::catalog::synth_function;
use varfrac_core::qfgd::{run_baselines, run_qfgd, LossSpec, OptConfig, OptTrace};
use varfrac_core::wavelet::{adaptive_approx, local_order_estimate, threshold_plan, ThresholdPlan};
use varfrac_core::{Error, Grid1D, OrderField, Result, RunConfig};

use crate::csv::CsvRow;

/// Refinement levels swept by the adaptive-approximation benchmark.
pub const FIG1_LEVELS: u32 = 5;
/// Window radius (in samples) for the local order estimate.
pub const FIG1_WINDOW: usize = 48;
/// Base multiplier applied to every threshold before level scaling.
pub const FIG1_TAU_SCALE: f64 = 1.0;
/// Roughness ramp endpoints of the synthetic signal.
pub const FIG1_H_LO: f64 = 0.3;
pub const FIG1_H_HI: f64 = 0.7;
/// Fixed order used by the non-adaptive reference method (the ramp mean).
pub const FIG1_CONST_ORDER: f64 = 0.5;

/// Problem dimension for the optimizer benchmark.
pub const FIG2_DIM: usize = 8;
/// Distance of every start coordinate from the minimizer.
pub const FIG2_START: f64 = 40.0;
/// Step size shared by all three methods.
pub const FIG2_ETA: f64 = 0.2;
/// Fractional order of the optimizer and its order-matched baseline.
pub const FIG2_ALPHA: f64 = 0.8;
/// Temperature of the stochastic method; the deterministic baselines run
/// at zero temperature. Kept small: the kicks are one-sided (always toward
/// the minimizer from above), so any nonzero temperature strictly improves
/// on the zero-temperature twin, while the heavy stable tail makes large
/// temperatures overshoot the bowl on unlucky draws.
pub const FIG2_TEMPERATURE: f64 = 1e-10;
/// Total-step clip; large enough that deterministic steps never clip.
pub const FIG2_STEP_CLIP: f64 = 100.0;
/// Recorded iterations (plus the starting point, which is not a row).
pub const FIG2_ITERS: usize = 7;

fn scaled_plan(plan: &ThresholdPlan, factor: f64) -> ThresholdPlan {
    let mut scaled = plan.clone();
    for level in &mut scaled.tau {
        for tau in level.iter_mut() {
            *tau *= factor;
        }
    }
    scaled
}

/// Runs the adaptive-vs-fixed thresholding sweep and returns one row per
/// (method, level) pair with the relative reconstruction error.
pub fn run_fig1(cfg: &RunConfig) -> Result<Vec<CsvRow>> {
    let grid = Grid1D::new(0.0, 1.0, cfg.grid_n)?;
    let mut params = std::collections::BTreeMap::new();
    params.insert("h0".to_string(), FIG1_H_LO);
    params.insert("h1".to_string(), FIG1_H_HI);
    let f = synth_function("weierstrass_varh", grid, &params, cfg.seed)?;
    let f_norm = f.l2();
    if f_norm <= 0.0 {
        return Err(Error::invalid("degenerate signal: zero norm"));
    }

    let estimated = local_order_estimate(&f, FIG1_WINDOW)?;
    let adaptive_plan = threshold_plan(&estimated, 0.0)?;
    let fixed_plan = threshold_plan(&OrderField::constant(grid, FIG1_CONST_ORDER)?, 0.0)?;

    let mut rows = Vec::with_capacity(2 * FIG1_LEVELS as usize);
    for level in 1..=FIG1_LEVELS {
        let factor = FIG1_TAU_SCALE * (-f64::from(level)).exp2();
        for (method, plan) in [("adaptive", &adaptive_plan), ("traditional", &fixed_plan)] {
            let result = adaptive_approx(&f, &scaled_plan(plan, factor))?;
            rows.push(CsvRow::new(
                "fig1",
                method,
                u64::from(level),
                cfg.grid_n as u64,
                result.l2_error / f_norm,
                cfg.seed,
            ));
        }
    }
    Ok(rows)
}

/// Shared optimizer problem: a unit-curvature bowl centered at the origin
/// with two small high-frequency ripples, started far up one wall. The
/// reference point for the fractional gradient is the bowl center; anchoring
/// it at the start point instead would zero the fractional gradient there
/// and stall every sub-unit order.
pub fn fig2_problem(seed: u64) -> (LossSpec, Vec<f64>, OptConfig) {
    let loss = LossSpec::MultiscaleRipple {
        center: vec![0.0; FIG2_DIM],
        curvature: 1.0,
        amplitudes: vec![0.02, 0.01],
        frequencies: vec![3.0, 7.0],
    };
    let w0 = vec![FIG2_START; FIG2_DIM];
    let cfg = OptConfig {
        eta: FIG2_ETA,
        temperature: FIG2_TEMPERATURE,
        alpha_order: FIG2_ALPHA,
        noise_index: None,
        stable_skew: -1.0,
        ref_point: Some(vec![0.0; FIG2_DIM]),
        max_iter: FIG2_ITERS,
        grad_tol: 0.0,
        seed,
        step_clip: FIG2_STEP_CLIP,
        rl_term: false,
    };
    (loss, w0, cfg)
}

fn trace_rows(rows: &mut Vec<CsvRow>, method: &str, trace: &OptTrace, seed: u64) -> Result<()> {
    let start_error = trace.records[0].error;
    if start_error <= 0.0 {
        return Err(Error::invalid("optimizer started at the minimizer"));
    }
    if trace.records.len() != FIG2_ITERS + 1 {
        return Err(Error::invalid(format!(
            "{method} stopped early: {} records",
            trace.records.len()
        )));
    }
    for (iter, record) in trace.records.iter().enumerate().skip(1) {
        rows.push(CsvRow::new(
            "fig2",
            method,
            iter as u64,
            FIG2_DIM as u64,
            record.error / start_error,
            seed,
        ));
    }
    Ok(())
}

/// Runs the optimizer race and returns one row per (method, iteration):
/// relative distance to the minimizer for the stochastic fractional method,
/// its zero-temperature twin, and plain gradient descent.
pub fn run_fig2(cfg: &RunConfig) -> Result<Vec<CsvRow>> {
    let (loss, w0, opt_cfg) = fig2_problem(cfg.seed);
    let trace = run_qfgd(&loss, &w0, &opt_cfg)?;
    let (gd, fno) = run_baselines(&loss, &w0, &opt_cfg)?;
    let mut rows = Vec::with_capacity(3 * FIG2_ITERS);
    trace_rows(&mut rows, "qfgd", &trace, cfg.seed)?;
    trace_rows(&mut rows, "fno_like", &fno, cfg.seed)?;
    trace_rows(&mut rows, "gd", &gd, cfg.seed)?;
    Ok(rows)
}
