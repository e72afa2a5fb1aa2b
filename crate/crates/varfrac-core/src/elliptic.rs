//! Spectral fractional Poisson solver on the unit interval with
//! homogeneous boundary values, plus the regularity-ratio diagnostic.
//!
//! The operator is the spectral fractional Laplacian: the sine modes
//! `sqrt(2) sin(k pi x)` diagonalize it with eigenvalues `(k pi)^2`, and
//! `(-Laplace)^alpha` raises each eigenvalue to the power `alpha`. All
//! bookkeeping happens in [0, 1]-normalized coordinates, matching the
//! sine-basis conventions of the norm module.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::{Grid1D, SampledFn};
use crate::spaces::{sine_coefficients, sine_reconstruct, sobolev_norm_spectral};

/// A function expressed by its coefficients over the orthonormal sine
/// modes `k = 1..=n-2` of its grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    pub grid: Grid1D,
    pub coefficients: Vec<f64>,
}

impl SpectralField {
    pub fn new(grid: Grid1D, coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.len() != grid.n - 2 {
            return Err(Error::invalid("coefficient count must be n - 2"));
        }
        if !coefficients.iter().all(|c| c.is_finite()) {
            return Err(Error::invalid("coefficients must be finite"));
        }
        Ok(SpectralField { grid, coefficients })
    }

    /// Forward sine transform; requires boundary values below 1e-8.
    pub fn analyze(f: &SampledFn) -> Result<Self> {
        Ok(SpectralField {
            grid: f.grid.clone(),
            coefficients: sine_coefficients(f)?,
        })
    }

    /// Inverse transform back to grid samples (exactly zero boundaries).
    pub fn synthesize(&self) -> Result<SampledFn> {
        sine_reconstruct(self.grid.clone(), &self.coefficients)
    }

    pub fn mode_count(&self) -> usize {
        self.coefficients.len()
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha.is_finite() && (0.0..=1.0).contains(&alpha)) {
        return Err(Error::invalid(alloc::format!(
            "fractional power must lie in [0, 1], got {alpha}"
        )));
    }
    Ok(())
}

fn eigenvalue(mode_index: usize) -> f64 {
    let freq = (mode_index + 1) as f64 * PI;
    freq * freq
}

/// Solves `(-Laplace)^alpha u = f` with `u = 0` at the endpoints by
/// dividing each sine coefficient by its eigenvalue power:
/// `u_k = f_k / (k pi)^(2 alpha)`. `alpha = 1` is the classical Poisson
/// problem and `alpha = 0` the identity.
pub fn solve_frac_poisson(f: &SampledFn, alpha: f64) -> Result<SampledFn> {
    check_alpha(alpha)?;
    let field = SpectralField::analyze(f)?;
    let mut coeffs = field.coefficients;
    for (k, c) in coeffs.iter_mut().enumerate() {
        *c /= libm::pow(eigenvalue(k), alpha);
    }
    sine_reconstruct(f.grid.clone(), &coeffs)
}

/// Coefficient-space relative residual
/// `|(k pi)^(2 alpha) u_k - f_k|_2 / |f_k|_2` of a candidate solution.
pub fn spectral_residual(f: &SampledFn, u: &SampledFn, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if f.grid != u.grid {
        return Err(Error::GridMismatch);
    }
    let fk = sine_coefficients(f)?;
    let uk = sine_coefficients(u)?;
    let mut num = 0.0;
    let mut den = 0.0;
    for (k, (&fc, &uc)) in fk.iter().zip(&uk).enumerate() {
        let r = libm::pow(eigenvalue(k), alpha) * uc - fc;
        num += r * r;
        den += fc * fc;
    }
    if den == 0.0 {
        return Err(Error::invalid("residual of a zero right-hand side"));
    }
    Ok(libm::sqrt(num / den))
}

/// A priori estimate instance: smoothness gained by inverting the
/// operator, measured as `|u|_(H^(2 alpha)) / |f|_(L^2)`. For a single
/// mode `k` this equals `(1 + (k pi)^2)^alpha / (k pi)^(2 alpha)`.
pub fn regularity_ratio(f: &SampledFn, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let u = solve_frac_poisson(f, alpha)?;
    let num = sobolev_norm_spectral(&u, 2.0 * alpha)?.value;
    let den = sobolev_norm_spectral(f, 0.0)?.value;
    if !(den > 0.0) {
        return Err(Error::invalid("regularity ratio of a zero function"));
    }
    Ok(num / den)
}

/// Supremum of the single-mode regularity ratios, attained at the lowest
/// mode: `(1 + pi^2)^alpha / pi^(2 alpha)`. Every admissible right-hand
/// side satisfies `regularity_ratio <= regularity_bound`.
pub fn regularity_bound(alpha: f64) -> f64 {
    libm::pow(1.0 + PI * PI, alpha) / libm::pow(PI, 2.0 * alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unit_grid(n: usize) -> Grid1D {
        Grid1D::new(0.0, 1.0, n).unwrap()
    }

    fn mode(n: usize, k: usize) -> SampledFn {
        SampledFn::from_fn(unit_grid(n), |x| libm::sin(k as f64 * PI * x)).unwrap()
    }

    fn band_limited(n: usize, modes: usize, rng: &mut ChaCha8Rng) -> SampledFn {
        let grid = unit_grid(n);
        let mut coeffs = alloc::vec![0.0; n - 2];
        for c in coeffs.iter_mut().take(modes) {
            *c = rng.random::<f64>() * 2.0 - 1.0;
        }
        SpectralField::new(grid, coeffs)
            .unwrap()
            .synthesize()
            .unwrap()
    }

    #[test]
    fn analyze_synthesize_round_trip() {
        let f = SampledFn::from_fn(unit_grid(129), |x| x * (1.0 - x) * (2.0 + x)).unwrap();
        let field = SpectralField::analyze(&f).unwrap();
        assert_eq!(field.mode_count(), 127);
        let back = field.synthesize().unwrap();
        for (a, b) in f.values.iter().zip(&back.values) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn single_mode_solution_is_exact() {
        let f = mode(257, 1);
        for alpha in [0.25, 0.5, 0.75] {
            let u = solve_frac_poisson(&f, alpha).unwrap();
            let scale = libm::pow(PI * PI, -alpha);
            for (uv, fv) in u.values.iter().zip(&f.values) {
                assert!((uv - scale * fv).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn unit_power_recovers_the_classical_solution() {
        let f = mode(257, 1);
        let u = solve_frac_poisson(&f, 1.0).unwrap();
        for (uv, fv) in u.values.iter().zip(&f.values) {
            assert!((uv - fv / (PI * PI)).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_power_is_the_identity() {
        let f = mode(129, 3);
        let u = solve_frac_poisson(&f, 0.0).unwrap();
        for (uv, fv) in u.values.iter().zip(&f.values) {
            assert!((uv - fv).abs() < 1e-12);
        }
    }

    #[test]
    fn solver_is_linear_and_residual_vanishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let f = band_limited(257, 10, &mut rng);
        let g = band_limited(257, 10, &mut rng);
        let alpha = 0.5;
        let uf = solve_frac_poisson(&f, alpha).unwrap();
        let ug = solve_frac_poisson(&g, alpha).unwrap();
        let mix = SampledFn::new(
            f.grid.clone(),
            f.values
                .iter()
                .zip(&g.values)
                .map(|(a, b)| 2.0 * a - 0.5 * b)
                .collect(),
        )
        .unwrap();
        let umix = solve_frac_poisson(&mix, alpha).unwrap();
        for ((m, a), b) in umix.values.iter().zip(&uf.values).zip(&ug.values) {
            assert!((m - (2.0 * a - 0.5 * b)).abs() < 1e-10);
        }
        assert!(spectral_residual(&f, &uf, alpha).unwrap() < 1e-10);
        assert!(spectral_residual(&mix, &umix, alpha).unwrap() < 1e-10);
    }

    #[test]
    fn residual_detects_a_wrong_solution() {
        let f = mode(129, 1);
        let not_u = mode(129, 1);
        let r = spectral_residual(&f, &not_u, 0.5).unwrap();
        // pi * sin(pi x) is off by the factor pi from the true solution.
        assert!(r > 0.5);
    }

    #[test]
    fn single_mode_regularity_ratio_matches_the_eigenvalue_formula() {
        let ratio = regularity_ratio(&mode(257, 1), 0.5).unwrap();
        let want = libm::sqrt(1.0 + PI * PI) / PI;
        assert!((ratio - want).abs() < 1e-10);
        assert!((want - 1.0494385087475768).abs() < 1e-12);
        let k = 3.0 * PI;
        let ratio3 = regularity_ratio(&mode(257, 3), 0.7).unwrap();
        let want3 = libm::pow(1.0 + k * k, 0.7) / libm::pow(k, 1.4);
        assert!((ratio3 - want3).abs() < 1e-10);
    }

    #[test]
    fn regularity_ratio_is_bounded_by_the_lowest_mode() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let alpha = 0.5;
        let bound = regularity_bound(alpha);
        for _ in 0..10 {
            let f = band_limited(129, 20, &mut rng);
            let ratio = regularity_ratio(&f, alpha).unwrap();
            assert!(ratio <= bound + 1e-6, "{ratio} > {bound}");
        }
        // The bound is decreasing in the mode number.
        for k in 1..10usize {
            let x = k as f64 * PI;
            let y = (k + 1) as f64 * PI;
            let at = |z: f64| libm::pow(1.0 + z * z, alpha) / libm::pow(z, 2.0 * alpha);
            assert!(at(x) > at(y));
        }
    }

    #[test]
    fn ratio_tends_to_one_as_the_power_vanishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = band_limited(129, 15, &mut rng);
        assert!((regularity_ratio(&f, 0.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((regularity_ratio(&f, 1e-9).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn solution_energy_is_bounded_by_the_lowest_eigenvalue() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for alpha in [0.3, 0.6, 1.0] {
            let f = band_limited(129, 30, &mut rng);
            let u = solve_frac_poisson(&f, alpha).unwrap();
            let nu = sobolev_norm_spectral(&u, 0.0).unwrap().value;
            let nf = sobolev_norm_spectral(&f, 0.0).unwrap().value;
            assert!(nu <= libm::pow(PI * PI, -alpha) * nf * (1.0 + 1e-12));
        }
    }

    #[test]
    fn preconditions_are_enforced() {
        let f = mode(65, 1);
        assert!(solve_frac_poisson(&f, 1.5).is_err());
        assert!(solve_frac_poisson(&f, -0.1).is_err());
        let bad = SampledFn::from_fn(unit_grid(65), |x| libm::cos(PI * x)).unwrap();
        assert!(solve_frac_poisson(&bad, 0.5).is_err());
        let zero = SampledFn::from_fn(unit_grid(65), |_| 0.0).unwrap();
        assert!(regularity_ratio(&zero, 0.5).is_err());
        let grid = unit_grid(65);
        assert!(SpectralField::new(grid, alloc::vec![0.0; 10]).is_err());
    }
}
