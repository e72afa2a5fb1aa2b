//! Randomized invariants across the public API: exact transform
//! round trips, linearity, scaling laws, and metric symmetries.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use varfrac_core::deriv::{
    adaptive_hybrid, caputo_right, rl_derivative, theta_weight, DerivVariant,
};
use varfrac_core::elliptic::{solve_frac_poisson, SpectralField};
use varfrac_core::prokhorov::{frac_prokhorov, DiscreteMeasure};
use varfrac_core::qfgd::{frac_gradient, qfgd_step, LossSpec, OptConfig};
use varfrac_core::spaces::{anisotropic_penalty, sobolev_norm_spectral};
use varfrac_core::wavelet::{adaptive_approx, haar_decompose, haar_reconstruct, threshold_plan};
use varfrac_core::{Grid1D, OrderField, SampledFn};

fn dyadic_samples() -> impl Strategy<Value = Vec<f64>> {
    (3u32..=7).prop_flat_map(|k| prop::collection::vec(-100.0..100.0f64, 1usize << k))
}

fn sampled(values: Vec<f64>, a: f64, b: f64) -> SampledFn {
    let grid = Grid1D::new(a, b, values.len()).unwrap();
    SampledFn::new(grid, values).unwrap()
}

fn measure_strategy() -> impl Strategy<Value = DiscreteMeasure> {
    (1usize..=5).prop_flat_map(|k| {
        (
            prop::collection::vec(0.01f64..1.0, k),
            prop::collection::vec(0.05f64..1.0, k),
            -1.0f64..1.0,
        )
            .prop_map(|(gaps, raw, start)| {
                let mut atoms = Vec::with_capacity(gaps.len());
                let mut pos = start;
                for g in &gaps {
                    pos += g;
                    atoms.push(pos);
                }
                let total: f64 = raw.iter().sum();
                let mut weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
                let head: f64 = weights[..weights.len() - 1].iter().sum();
                let last = weights.len() - 1;
                weights[last] = 1.0 - head;
                DiscreteMeasure::new(atoms, weights).unwrap()
            })
    })
}

proptest! {
    #[test]
    fn haar_round_trip_and_parseval(values in dyadic_samples()) {
        let f = sampled(values, 0.0, 1.0);
        let c = haar_decompose(&f).unwrap();
        let back = haar_reconstruct(&c).unwrap();
        let scale = f.linf().max(1.0);
        for (x, y) in f.values.iter().zip(&back.values) {
            prop_assert!((x - y).abs() <= 1e-10 * scale);
        }
        let mut coeff_energy = c.scaling_coeff * c.scaling_coeff;
        for level in &c.detail {
            for d in level {
                coeff_energy += d * d;
            }
        }
        let sample_energy: f64 =
            f.grid.spacing * f.values.iter().map(|v| v * v).sum::<f64>();
        prop_assert!((coeff_energy - sample_energy).abs() <= 1e-9 * sample_energy.max(1.0));
    }

    #[test]
    fn zero_thresholds_reproduce_the_input(values in dyadic_samples()) {
        let f = sampled(values, 0.0, 1.0);
        let field = OrderField::constant(f.grid, 0.5).unwrap();
        let mut plan = threshold_plan(&field, 0.0).unwrap();
        for level in &mut plan.tau {
            for t in level {
                *t = 0.0;
            }
        }
        let r = adaptive_approx(&f, &plan).unwrap();
        prop_assert_eq!(r.retained, f.len());
        prop_assert!(r.l2_error == 0.0);
        let scale = f.linf().max(1.0);
        for (x, y) in f.values.iter().zip(&r.approx.values) {
            prop_assert!((x - y).abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn truncation_error_never_exceeds_total_energy(
        values in dyadic_samples(),
        eps in 0.0..1.9f64,
    ) {
        let f = sampled(values, 0.0, 1.0);
        let field = OrderField::constant(f.grid, 0.4).unwrap();
        let plan = threshold_plan(&field, eps).unwrap();
        let r = adaptive_approx(&f, &plan).unwrap();
        let total = f.l2();
        prop_assert!(r.l2_error <= total + 1e-9);
        prop_assert!(r.retained >= 1);
        prop_assert!(r.retained <= f.len());
    }

    #[test]
    fn fractional_derivatives_are_linear(
        fv in prop::collection::vec(-10.0..10.0f64, 48),
        gv in prop::collection::vec(-10.0..10.0f64, 48),
        a in -3.0..3.0f64,
        b in -3.0..3.0f64,
    ) {
        let grid = Grid1D::new(0.0, 2.0, 48).unwrap();
        let f = SampledFn::new(grid, fv.clone()).unwrap();
        let g = SampledFn::new(grid, gv.clone()).unwrap();
        let mix = SampledFn::new(
            grid,
            fv.iter().zip(&gv).map(|(x, y)| a * x + b * y).collect(),
        )
        .unwrap();
        let field = OrderField::ramp(grid, 0.3, 0.7).unwrap();
        let df = rl_derivative(&f, &field, DerivVariant::RlClassical).unwrap();
        let dg = rl_derivative(&g, &field, DerivVariant::RlClassical).unwrap();
        let dmix = rl_derivative(&mix, &field, DerivVariant::RlClassical).unwrap();
        let scale = a.abs() * df.values.linf() + b.abs() * dg.values.linf() + 1.0;
        for ((m, x), y) in dmix
            .values
            .values
            .iter()
            .zip(&df.values.values)
            .zip(&dg.values.values)
        {
            prop_assert!((m - (a * x + b * y)).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn caputo_annihilates_constants(level in -50.0..50.0f64) {
        let grid = Grid1D::new(0.0, 1.0, 65).unwrap();
        let f = SampledFn::from_fn(grid, |_| level).unwrap();
        let field = OrderField::ramp(grid, 0.2, 0.8).unwrap();
        let d = caputo_right(&f, &field).unwrap();
        prop_assert!(d.linf() <= 1e-10 * level.abs().max(1.0));
    }

    #[test]
    fn blend_weight_ignores_amplitude(
        values in prop::collection::vec(-5.0..5.0f64, 64),
        scale in prop_oneof![0.01..100.0f64, -100.0..-0.01f64],
    ) {
        let grid = Grid1D::new(0.0, 1.0, 64).unwrap();
        let f = SampledFn::new(grid, values.clone()).unwrap();
        let scaled = SampledFn::new(grid, values.iter().map(|v| v * scale).collect()).unwrap();
        let field = OrderField::ramp(grid, 0.3, 0.6).unwrap();
        let t1 = theta_weight(&f, &field, DerivVariant::RlClassical).unwrap();
        let t2 = theta_weight(&scaled, &field, DerivVariant::RlClassical).unwrap();
        prop_assert!((t1.values[0] - t2.values[0]).abs() <= 1e-9);
    }

    #[test]
    fn hybrid_interpolates_between_components(
        values in prop::collection::vec(-5.0..5.0f64, 32),
    ) {
        let grid = Grid1D::new(0.0, 1.0, 32).unwrap();
        let f = SampledFn::new(grid, values).unwrap();
        let field = OrderField::constant(grid, 0.5).unwrap();
        let variant = DerivVariant::RlClassical;
        let rl = rl_derivative(&f, &field, variant).unwrap();
        let cap = caputo_right(&f, &field).unwrap();
        let theta = theta_weight(&f, &field, variant).unwrap().values[0];
        let hybrid = adaptive_hybrid(&f, &field, variant).unwrap();
        prop_assert!((0.0..=1.0).contains(&theta));
        for ((h, r), c) in hybrid.values.iter().zip(&rl.values.values).zip(&cap.values) {
            let want = theta * r + (1.0 - theta) * c;
            prop_assert!((h - want).abs() <= 1e-10 * (r.abs() + c.abs() + 1.0));
        }
    }

    #[test]
    fn penalty_scales_with_inverse_square_root(
        a0 in 0.15..0.4f64,
        rise in 0.01..0.05f64,
        c in 0.5..2.0f64,
    ) {
        let grid = Grid1D::new(0.0, 1.0, 129).unwrap();
        let base = OrderField::ramp(grid, a0, a0 + rise).unwrap();
        let scaled = OrderField::ramp(grid, c * a0, c * (a0 + rise)).unwrap();
        let pb = anisotropic_penalty(&base).value;
        let ps = anisotropic_penalty(&scaled).value;
        prop_assert!((ps - pb / c.sqrt()).abs() <= 1e-9 * pb.max(1e-12));
    }

    #[test]
    fn prokhorov_is_symmetric_nonnegative_and_self_zero(
        mu in measure_strategy(),
        nu in measure_strategy(),
        alpha in 0.2..1.0f64,
    ) {
        let tol = 1e-5;
        let d1 = frac_prokhorov(&mu, &nu, alpha, tol).unwrap();
        let d2 = frac_prokhorov(&nu, &mu, alpha, tol).unwrap();
        prop_assert_eq!(d1.to_bits(), d2.to_bits());
        prop_assert!(d1 >= 0.0);
        prop_assert!(frac_prokhorov(&mu, &mu, alpha, tol).unwrap() <= tol);
    }

    #[test]
    fn sobolev_norm_is_monotone_in_smoothness(
        coeffs in prop::collection::vec(-1.0..1.0f64, 32),
        s1 in 0.0..1.0f64,
        gap in 0.0..1.0f64,
    ) {
        let grid = Grid1D::new(0.0, 1.0, 34).unwrap();
        let f = SpectralField::new(grid, coeffs).unwrap().synthesize().unwrap();
        let lo = sobolev_norm_spectral(&f, s1).unwrap().value;
        let hi = sobolev_norm_spectral(&f, s1 + gap).unwrap().value;
        prop_assert!(hi >= lo - 1e-9);
    }

    #[test]
    fn poisson_solution_energy_is_contracted(
        coeffs in prop::collection::vec(-1.0..1.0f64, 32),
        alpha in 0.0..1.0f64,
    ) {
        let grid = Grid1D::new(0.0, 1.0, 34).unwrap();
        let f = SpectralField::new(grid, coeffs).unwrap().synthesize().unwrap();
        let nf = sobolev_norm_spectral(&f, 0.0).unwrap().value;
        if nf > 1e-12 {
            let u = solve_frac_poisson(&f, alpha).unwrap();
            let nu = sobolev_norm_spectral(&u, 0.0).unwrap().value;
            let cap = (core::f64::consts::PI * core::f64::consts::PI).powf(-alpha);
            prop_assert!(nu <= cap * nf * (1.0 + 1e-10));
        }
    }

    #[test]
    fn unit_order_gradient_is_the_plain_gradient(
        w in prop::collection::vec(-5.0..5.0f64, 4),
        center in prop::collection::vec(-2.0..2.0f64, 4),
        curvature in 0.1..10.0f64,
    ) {
        let loss = LossSpec::Quadratic { center, curvature };
        let c = vec![0.0; 4];
        let frac = frac_gradient(&loss, &w, 1.0, &c).unwrap();
        prop_assert_eq!(frac, loss.gradient(&w));
    }

    #[test]
    fn optimizer_steps_respect_the_clip(
        w in prop::collection::vec(-5.0..5.0f64, 3),
        eta in 0.01..0.5f64,
        temperature in 0.0..2.0f64,
        noise in 0.3..2.0f64,
        clip in 0.05..1.0f64,
        seed in any::<u64>(),
    ) {
        let loss = LossSpec::Quadratic { center: vec![0.0; 3], curvature: 2.0 };
        let mut cfg = OptConfig::basic(eta, 0.7, 1, seed, clip);
        cfg.temperature = temperature;
        cfg.noise_index = Some(noise);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let next = qfgd_step(&w, &loss, &cfg, &mut rng).unwrap();
        let step: f64 = next
            .iter()
            .zip(&w)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        prop_assert!(step <= clip + 1e-12);
    }
}
