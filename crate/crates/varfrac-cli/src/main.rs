//! `varfrac`: deterministic benchmark and diagnostic runs over the
//! fractional-calculus core, reporting everything as CSV.
//!
//! Exit codes: 0 on success, 1 for bad arguments or precondition failures,
//! 2 for output I/O failures.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use varfrac_cli::bench::{run_fig1, run_fig2};
use varfrac_cli::csv::{render_csv, CsvRow};
use varfrac_core::catalog::synth_function;
use varfrac_core::deriv::{
    adaptive_hybrid, caputo_left, caputo_right, rl_derivative, theta_weight, DerivVariant,
};
use varfrac_core::elliptic::{
    regularity_bound, regularity_ratio, solve_frac_poisson, spectral_residual, SpectralField,
};
use varfrac_core::levy::{hadamard_kernel_literal, kernel_chunk_sums, kernel_from_partials, MC_CHUNK};
use varfrac_core::prokhorov::{frac_prokhorov, DiscreteMeasure};
use varfrac_core::spaces::{
    anisotropic_penalty, besov_norm, gagliardo_seminorm, holder_seminorm, sobolev_norm_spectral,
};
use varfrac_core::wavelet::{adaptive_approx, local_order_estimate, threshold_plan};
use varfrac_core::{Error, Grid1D, OrderField, Result, RunConfig};

#[derive(Parser)]
#[command(
    name = "varfrac",
    version,
    about = "Variable-order fractional calculus benchmarks",
    after_help = "Every subcommand prints CSV with the header \
                  `experiment,method,iteration,n,error,seed`; floats use 17 \
                  significant digits so repeated runs are byte-identical."
)]
struct Cli {
    /// RNG seed shared by all stochastic sections.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Write the CSV here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Samples per grid (power of two where wavelets are involved).
    #[arg(long, global = true, default_value_t = 1024)]
    grid_n: usize,
    /// Numerical tolerance for bisection-style searches.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Worker threads for the Monte Carlo kernel section. Chunks are
    /// pre-assigned by index, so the output is identical for any count.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Variable-order derivatives of a synthetic signal (reported as norms).
    Deriv {
        /// Signal id: constant, monomial, sine, cusp, or weierstrass_varh.
        #[arg(long, default_value = "monomial")]
        function: String,
        /// Order-ramp endpoints across the domain.
        #[arg(long, default_value_t = 0.4)]
        alpha_lo: f64,
        #[arg(long, default_value_t = 0.8)]
        alpha_hi: f64,
        /// Memory-window length for the truncated variant.
        #[arg(long, default_value_t = 0.05)]
        epsilon: f64,
    },
    /// Monte Carlo estimate of the regularized logarithmic kernel.
    Kernel {
        #[arg(long, default_value_t = 1.0)]
        z: f64,
        /// Kernel exponent.
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        /// Subordinator stability index in (0, 1).
        #[arg(long, default_value_t = 0.5)]
        gamma: f64,
        /// Subordinator time.
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// Monte Carlo sample count (at least 100).
        #[arg(long, default_value_t = 100_000)]
        n_mc: usize,
    },
    /// Fractional function-space norms of a synthetic signal.
    Norms {
        #[arg(long, default_value = "sine")]
        function: String,
        /// Smoothness parameter shared by all the norms.
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
    },
    /// Threshold-refinement sweep of the adaptive wavelet approximation.
    Approx {
        #[arg(long, default_value = "weierstrass_varh")]
        function: String,
        /// Number of threshold-halving refinement levels.
        #[arg(long, default_value_t = 5)]
        levels: u32,
    },
    /// Distance between two discrete measures given as "pos:weight,...".
    Prokhorov {
        mu: String,
        nu: String,
        /// Distance order in (0, 1].
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
    },
    /// Fractional-gradient optimizer run on the rippled bowl objective.
    Qfgd {
        /// Fractional order of the gradient in (0, 1].
        #[arg(long, default_value_t = 0.8)]
        alpha_order: f64,
        #[arg(long, default_value_t = 0.2)]
        eta: f64,
        /// Stochastic kick temperature (0 disables noise).
        #[arg(long, default_value_t = 0.0)]
        temperature: f64,
        #[arg(long, default_value_t = 20)]
        iters: usize,
    },
    /// Spectral fractional Poisson solve diagnostics.
    Elliptic {
        /// Spectral exponent in [0, 1].
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        /// Number of random sine modes in the source term.
        #[arg(long, default_value_t = 8)]
        modes: usize,
    },
    /// Canned benchmark figure sweeps.
    Bench {
        #[command(subcommand)]
        which: BenchCmd,
    },
}

#[derive(Subcommand)]
enum BenchCmd {
    /// Adaptive vs fixed-order wavelet thresholding on a drifting-roughness
    /// signal.
    Fig1,
    /// Stochastic fractional optimizer vs deterministic baselines.
    Fig2,
}

fn synth_params(function: &str) -> BTreeMap<String, f64> {
    let mut params = BTreeMap::new();
    if function == "weierstrass_varh" {
        params.insert("h0".to_string(), 0.3);
        params.insert("h1".to_string(), 0.7);
    }
    params
}

fn deriv_rows(
    cli: &Cli,
    function: &str,
    alpha_lo: f64,
    alpha_hi: f64,
    epsilon: f64,
) -> Result<Vec<CsvRow>> {
    let grid = Grid1D::new(0.0, 1.0, cli.grid_n)?;
    let field = OrderField::ramp(grid, alpha_lo, alpha_hi)?;
    let f = synth_function(function, grid, &synth_params(function), cli.seed)?;
    let truncated = DerivVariant::RlTruncated { epsilon };
    let n = cli.grid_n as u64;
    let mut rows = Vec::new();
    let classical = rl_derivative(&f, &field, DerivVariant::RlClassical)?;
    rows.push(CsvRow::new("deriv", "rl_classical", 0, n, classical.values.l2(), cli.seed));
    let windowed = rl_derivative(&f, &field, truncated)?;
    rows.push(CsvRow::new("deriv", "rl_truncated", 0, n, windowed.values.l2(), cli.seed));
    rows.push(CsvRow::new("deriv", "caputo_left", 0, n, caputo_left(&f, &field)?.l2(), cli.seed));
    rows.push(CsvRow::new("deriv", "caputo_right", 0, n, caputo_right(&f, &field)?.l2(), cli.seed));
    let theta = theta_weight(&f, &field, truncated)?;
    rows.push(CsvRow::new("deriv", "theta", 0, n, theta.values[0], cli.seed));
    let hybrid = adaptive_hybrid(&f, &field, truncated)?;
    rows.push(CsvRow::new("deriv", "hybrid", 0, n, hybrid.l2(), cli.seed));
    Ok(rows)
}

/// Monte Carlo partials with chunks pre-assigned to workers by index; the
/// fold order is fixed, so any worker count gives bit-identical output.
fn kernel_partials(
    z: f64,
    alpha: f64,
    gamma: f64,
    t: f64,
    n_mc: usize,
    seed: u64,
    workers: usize,
) -> Vec<(f64, f64)> {
    let n_chunks = n_mc.div_ceil(MC_CHUNK);
    let mut partials = vec![(0.0, 0.0); n_chunks];
    let workers = workers.min(n_chunks).max(1);
    if workers == 1 {
        for (c, slot) in partials.iter_mut().enumerate() {
            let len = MC_CHUNK.min(n_mc - c * MC_CHUNK);
            *slot = kernel_chunk_sums(z, alpha, gamma, t, seed, c as u64, len);
        }
        return partials;
    }
    std::thread::scope(|scope| {
        let mut handles = Vec::with_capacity(workers);
        for worker in 0..workers {
            handles.push(scope.spawn(move || {
                let mut local = Vec::new();
                let mut c = worker;
                while c < n_chunks {
                    let len = MC_CHUNK.min(n_mc - c * MC_CHUNK);
                    local.push((c, kernel_chunk_sums(z, alpha, gamma, t, seed, c as u64, len)));
                    c += workers;
                }
                local
            }));
        }
        for handle in handles {
            for (c, partial) in handle.join().expect("kernel worker panicked") {
                partials[c] = partial;
            }
        }
    });
    partials
}

fn kernel_rows(cli: &Cli, z: f64, alpha: f64, gamma: f64, t: f64, n_mc: usize) -> Result<Vec<CsvRow>> {
    if cli.workers == 0 {
        return Err(Error::invalid("workers must be >= 1"));
    }
    if n_mc < 100 {
        return Err(Error::invalid("n_mc must be >= 100"));
    }
    // Validate the kernel arguments once up front via the deterministic
    // reading, which shares the same precondition set.
    let literal = hadamard_kernel_literal(z, alpha, gamma)?;
    let partials = kernel_partials(z, alpha, gamma, t, n_mc, cli.seed, cli.workers);
    let estimate = kernel_from_partials(&partials, n_mc as u64)?;
    let n = n_mc as u64;
    Ok(vec![
        CsvRow::new("kernel", "mc_mean", 0, n, estimate.mean, cli.seed),
        CsvRow::new("kernel", "mc_stderr", 0, n, estimate.stderr, cli.seed),
        CsvRow::new("kernel", "literal", 0, n, literal, cli.seed),
    ])
}

fn norms_rows(cli: &Cli, function: &str, alpha: f64) -> Result<Vec<CsvRow>> {
    let grid = Grid1D::new(0.0, 1.0, cli.grid_n)?;
    let f = synth_function(function, grid, &synth_params(function), cli.seed)?;
    let n = cli.grid_n as u64;
    let mut rows = vec![
        CsvRow::new("norms", "gagliardo", 0, n, gagliardo_seminorm(&f, alpha, 2.0)?.value, cli.seed),
        CsvRow::new("norms", "besov", 0, n, besov_norm(&f, alpha, 2.0)?.value, cli.seed),
        CsvRow::new("norms", "holder", 0, n, holder_seminorm(&f, alpha)?.value, cli.seed),
    ];
    // The spectral norm needs boundary-vanishing data; keep it when it applies.
    if let Ok(report) = sobolev_norm_spectral(&f, alpha) {
        rows.push(CsvRow::new("norms", "sobolev_spectral", 0, n, report.value, cli.seed));
    }
    let ramp = OrderField::ramp(grid, 0.4, 0.8)?;
    rows.push(CsvRow::new("norms", "order_penalty", 0, n, anisotropic_penalty(&ramp).value, cli.seed));
    Ok(rows)
}

fn approx_rows(cli: &Cli, function: &str, levels: u32) -> Result<Vec<CsvRow>> {
    if levels == 0 {
        return Err(Error::invalid("levels must be >= 1"));
    }
    let grid = Grid1D::new(0.0, 1.0, cli.grid_n)?;
    let f = synth_function(function, grid, &synth_params(function), cli.seed)?;
    let f_norm = f.l2();
    if f_norm <= 0.0 {
        return Err(Error::invalid("degenerate signal: zero norm"));
    }
    let estimated = local_order_estimate(&f, 16)?;
    let base = threshold_plan(&estimated, 0.0)?;
    let n = cli.grid_n as u64;
    let mut rows = Vec::with_capacity(2 * levels as usize);
    for level in 1..=levels {
        let mut plan = base.clone();
        let factor = (-f64::from(level)).exp2();
        for taus in &mut plan.tau {
            for tau in taus.iter_mut() {
                *tau *= factor;
            }
        }
        let result = adaptive_approx(&f, &plan)?;
        rows.push(CsvRow::new("approx", "adaptive", u64::from(level), n, result.l2_error / f_norm, cli.seed));
        rows.push(CsvRow::new(
            "approx",
            "retained_fraction",
            u64::from(level),
            n,
            result.retained as f64 / cli.grid_n as f64,
            cli.seed,
        ));
    }
    Ok(rows)
}

fn parse_measure(text: &str) -> Result<DiscreteMeasure> {
    let mut atoms = Vec::new();
    let mut weights = Vec::new();
    for part in text.split(',') {
        let (a, w) = part.split_once(':').ok_or_else(|| {
            Error::invalid(format!("bad atom spec {part:?}: want position:weight"))
        })?;
        atoms.push(
            a.trim()
                .parse::<f64>()
                .map_err(|_| Error::invalid(format!("bad atom position {a:?}")))?,
        );
        weights.push(
            w.trim()
                .parse::<f64>()
                .map_err(|_| Error::invalid(format!("bad atom weight {w:?}")))?,
        );
    }
    DiscreteMeasure::new(atoms, weights)
}

fn prokhorov_rows(cli: &Cli, mu: &str, nu: &str, alpha: f64) -> Result<Vec<CsvRow>> {
    let mu = parse_measure(mu)?;
    let nu = parse_measure(nu)?;
    let d = frac_prokhorov(&mu, &nu, alpha, cli.tol)?;
    Ok(vec![CsvRow::new(
        "prokhorov",
        "bisection",
        0,
        (mu.len() + nu.len()) as u64,
        d,
        cli.seed,
    )])
}

fn qfgd_rows(cli: &Cli, alpha_order: f64, eta: f64, temperature: f64, iters: usize) -> Result<Vec<CsvRow>> {
    let (loss, w0, mut cfg) = varfrac_cli::bench::fig2_problem(cli.seed);
    cfg.alpha_order = alpha_order;
    cfg.eta = eta;
    cfg.temperature = temperature;
    cfg.max_iter = iters;
    let trace = varfrac_core::qfgd::run_qfgd(&loss, &w0, &cfg)?;
    let start_error = trace.records[0].error;
    let mut rows = Vec::with_capacity(trace.records.len() - 1);
    for (iter, record) in trace.records.iter().enumerate().skip(1) {
        rows.push(CsvRow::new(
            "qfgd",
            "qfgd",
            iter as u64,
            loss.dim() as u64,
            record.error / start_error,
            cli.seed,
        ));
    }
    Ok(rows)
}

fn elliptic_rows(cli: &Cli, alpha: f64, modes: usize) -> Result<Vec<CsvRow>> {
    let grid = Grid1D::new(0.0, 1.0, cli.grid_n)?;
    if modes == 0 || modes + 2 > cli.grid_n {
        return Err(Error::invalid(format!(
            "modes must lie in [1, grid_n - 2], got {modes}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let mut coeffs = vec![0.0; cli.grid_n - 2];
    for c in coeffs.iter_mut().take(modes) {
        *c = 2.0 * rng.random::<f64>() - 1.0;
    }
    let f = SpectralField::new(grid, coeffs)?.synthesize()?;
    let u = solve_frac_poisson(&f, alpha)?;
    let n = cli.grid_n as u64;
    Ok(vec![
        CsvRow::new("elliptic", "residual", 0, n, spectral_residual(&f, &u, alpha)?, cli.seed),
        CsvRow::new("elliptic", "regularity_ratio", 0, n, regularity_ratio(&f, alpha)?, cli.seed),
        CsvRow::new("elliptic", "regularity_bound", 0, n, regularity_bound(alpha), cli.seed),
    ])
}

fn run(cli: &Cli) -> Result<Vec<CsvRow>> {
    match &cli.cmd {
        Cmd::Deriv { function, alpha_lo, alpha_hi, epsilon } => {
            deriv_rows(cli, function, *alpha_lo, *alpha_hi, *epsilon)
        }
        Cmd::Kernel { z, alpha, gamma, t, n_mc } => kernel_rows(cli, *z, *alpha, *gamma, *t, *n_mc),
        Cmd::Norms { function, alpha } => norms_rows(cli, function, *alpha),
        Cmd::Approx { function, levels } => approx_rows(cli, function, *levels),
        Cmd::Prokhorov { mu, nu, alpha } => prokhorov_rows(cli, mu, nu, *alpha),
        Cmd::Qfgd { alpha_order, eta, temperature, iters } => {
            qfgd_rows(cli, *alpha_order, *eta, *temperature, *iters)
        }
        Cmd::Elliptic { alpha, modes } => elliptic_rows(cli, *alpha, *modes),
        Cmd::Bench { which } => {
            let run_cfg = RunConfig {
                seed: cli.seed,
                grid_n: cli.grid_n,
                tolerance: cli.tol,
                output_path: cli.out.as_ref().map(|p| p.display().to_string()),
            };
            match which {
                BenchCmd::Fig1 => run_fig1(&run_cfg),
                BenchCmd::Fig2 => run_fig2(&run_cfg),
            }
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let clean_exit = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            std::process::exit(if clean_exit { 0 } else { 1 });
        }
    };
    let rows = match run(&cli) {
        Ok(rows) => rows,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    };
    let text = match render_csv(&rows) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: {}: {e}", path.display());
                std::process::exit(2);
            }
        }
        None => print!("{text}"),
    }
}
