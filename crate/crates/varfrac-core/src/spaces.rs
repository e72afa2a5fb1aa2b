//! Discrete estimators for fractional function-space norms: Gagliardo and
//! Besov seminorms, Hölder seminorms with the interpolation inequality,
//! the Sobolev embedding exponent, a spectral (sine-basis) Sobolev norm,
//! and the anisotropic order-variation penalty.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::{finite_diff, Grid1D, OrderField, SampledFn};

/// Which estimator produced a [`NormReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    Gagliardo,
    Besov,
    Holder,
    SobolevSpectral,
    Penalty,
}

impl core::fmt::Display for NormKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let name = match self {
            NormKind::Gagliardo => "gagliardo",
            NormKind::Besov => "besov",
            NormKind::Holder => "holder",
            NormKind::SobolevSpectral => "sobolev_spectral",
            NormKind::Penalty => "penalty",
        };
        f.write_str(name)
    }
}

/// A computed norm value together with the grid size it was estimated on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormReport {
    pub value: f64,
    pub grid_n: usize,
    pub kind: NormKind,
}

fn trapezoid_weight(i: usize, n: usize, h: f64) -> f64 {
    if i == 0 || i + 1 == n {
        0.5 * h
    } else {
        h
    }
}

/// Gagliardo (Sobolev-Slobodeckij) seminorm
/// `(sum_{i != j} |f_i - f_j|^p / |x_i - x_j|^(1+sp) w_i w_j)^(1/p)`.
pub fn gagliardo_seminorm(f: &SampledFn, s: f64, p: f64) -> Result<NormReport> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::invalid(alloc::format!(
            "smoothness must lie in (0, 1), got {s}"
        )));
    }
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::invalid(alloc::format!(
            "integrability p must lie in [1, inf), got {p}"
        )));
    }
    let n = f.len();
    let h = f.grid.spacing;
    let v = &f.values;
    let mut dpow = Vec::with_capacity(n);
    dpow.push(f64::NAN);
    for m in 1..n {
        dpow.push(libm::pow(m as f64 * h, 1.0 + s * p));
    }
    let mut acc = 0.0;
    for i in 0..n {
        let wi = trapezoid_weight(i, n, h);
        for j in i + 1..n {
            let wj = trapezoid_weight(j, n, h);
            let num = libm::pow(libm::fabs(v[j] - v[i]), p);
            acc += 2.0 * num / dpow[j - i] * wi * wj;
        }
    }
    Ok(NormReport {
        value: libm::pow(acc, 1.0 / p),
        grid_n: n,
        kind: NormKind::Gagliardo,
    })
}

fn lp_norm(f: &SampledFn, p: f64) -> f64 {
    let n = f.len();
    let h = f.grid.spacing;
    let mut acc = 0.0;
    for (i, &x) in f.values.iter().enumerate() {
        acc += trapezoid_weight(i, n, h) * libm::pow(libm::fabs(x), p);
    }
    libm::pow(acc, 1.0 / p)
}

/// Increment part of the Besov norm: the supremum over grid shifts.
pub fn besov_sup_term(f: &SampledFn, alpha: f64, p: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid(alloc::format!(
            "increment order must lie in (0, 1), got {alpha}"
        )));
    }
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::invalid(alloc::format!(
            "integrability p must lie in [1, inf), got {p}"
        )));
    }
    let n = f.len();
    let h = f.grid.spacing;
    let v = &f.values;
    let mut sup = 0.0_f64;
    for k in 1..n {
        let shift = k as f64 * h;
        let m = n - k;
        let mut acc = 0.0;
        for i in 0..m {
            let w = trapezoid_weight(i, m, h);
            acc += w * libm::pow(libm::fabs(v[i + k] - v[i]), p);
        }
        sup = sup.max(libm::pow(acc, 1.0 / p) / libm::pow(shift, alpha));
    }
    Ok(sup)
}

/// Besov norm: shift-supremum increment term plus the `L^p` norm.
pub fn besov_norm(f: &SampledFn, alpha: f64, p: f64) -> Result<NormReport> {
    let sup = besov_sup_term(f, alpha, p)?;
    Ok(NormReport {
        value: sup + lp_norm(f, p),
        grid_n: f.len(),
        kind: NormKind::Besov,
    })
}

/// Hölder seminorm: max over grid pairs of `|f_i - f_j| / |x_i - x_j|^alpha`.
pub fn holder_seminorm(f: &SampledFn, alpha: f64) -> Result<NormReport> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::invalid(alloc::format!(
            "Holder exponent must lie in (0, 1], got {alpha}"
        )));
    }
    let n = f.len();
    let h = f.grid.spacing;
    let v = &f.values;
    let mut dpow = Vec::with_capacity(n);
    dpow.push(f64::NAN);
    for m in 1..n {
        dpow.push(libm::pow(m as f64 * h, alpha));
    }
    let mut best = 0.0_f64;
    for i in 0..n {
        for j in i + 1..n {
            best = best.max(libm::fabs(v[j] - v[i]) / dpow[j - i]);
        }
    }
    Ok(NormReport {
        value: best,
        grid_n: n,
        kind: NormKind::Holder,
    })
}

/// Both sides of the Hölder interpolation inequality for `u = f - g`:
/// `lhs = [u]_{alpha-eps}` and `rhs = (2 ||u||_inf)^(1-l) [u]_alpha^l`
/// with `l = (alpha - eps) / alpha`.
///
/// Each grid pair satisfies `|du| / d^(alpha-eps) =
/// (|du| / d^alpha)^l |du|^(1-l) <= rhs`, so `lhs <= rhs` holds exactly;
/// callers comparing the two should still allow roundoff slack.
pub fn holder_interpolation_gap(
    f: &SampledFn,
    g: &SampledFn,
    alpha: f64,
    eps: f64,
) -> Result<(f64, f64)> {
    if f.grid != g.grid {
        return Err(Error::GridMismatch);
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::invalid(alloc::format!(
            "Holder exponent must lie in (0, 1], got {alpha}"
        )));
    }
    if !(eps > 0.0 && eps < alpha) {
        return Err(Error::invalid(alloc::format!(
            "eps must lie in (0, alpha), got {eps}"
        )));
    }
    let diff_values: Vec<f64> = f
        .values
        .iter()
        .zip(&g.values)
        .map(|(a, b)| a - b)
        .collect();
    let u = SampledFn::new(f.grid, diff_values)?;
    let lhs = holder_seminorm(&u, alpha - eps)?.value;
    let semi = holder_seminorm(&u, alpha)?.value;
    let lam = (alpha - eps) / alpha;
    let rhs = libm::pow(2.0 * u.linf(), 1.0 - lam) * libm::pow(semi, lam);
    Ok((lhs, rhs))
}

/// Critical Lebesgue exponent `q = d p / (d - s p)` of the fractional
/// Sobolev embedding; errors when `s p >= d` (no such exponent).
pub fn sobolev_embedding_q(d: u32, s: f64, p: f64) -> Result<f64> {
    if d == 0 {
        return Err(Error::invalid("dimension must be >= 1"));
    }
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::invalid(alloc::format!(
            "smoothness must lie in (0, 1), got {s}"
        )));
    }
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::invalid(alloc::format!(
            "integrability p must lie in [1, inf), got {p}"
        )));
    }
    let d = d as f64;
    if s * p >= d {
        return Err(Error::invalid(alloc::format!(
            "embedding exponent undefined: s*p = {} >= d = {d}",
            s * p
        )));
    }
    Ok(d * p / (d - s * p))
}

/// Trapezoid quadrature of `|alpha'(x)|^2 / alpha(x)^(5/2)`, penalizing
/// spatial variation of the fractional order.
pub fn anisotropic_penalty(alpha: &OrderField) -> NormReport {
    let field = SampledFn::new(alpha.grid, alpha.alpha.clone()).expect("order field is valid");
    let deriv = finite_diff(&field).expect("order field has n >= 3");
    let n = field.len();
    let h = alpha.grid.spacing;
    let mut acc = 0.0;
    for i in 0..n {
        let d = deriv.values[i];
        acc += trapezoid_weight(i, n, h) * d * d / libm::pow(alpha.alpha[i], 2.5);
    }
    NormReport {
        value: acc,
        grid_n: n,
        kind: NormKind::Penalty,
    }
}

/// Coefficients of `f` in the orthonormal sine basis `sqrt(2) sin(k pi x)`
/// on [0, 1]-normalized coordinates, via the type-I discrete sine transform.
/// Requires (numerically) vanishing boundary values.
pub(crate) fn sine_coefficients(f: &SampledFn) -> Result<Vec<f64>> {
    let n = f.len();
    if n < 3 {
        return Err(Error::invalid("spectral norm needs n >= 3"));
    }
    let scale = boundary_scale(f)?;
    let big_n = n - 1;
    // sin(k pi i / N) cycles with period 2N; one table serves every product.
    let table: Vec<f64> = (0..2 * big_n)
        .map(|m| libm::sin(core::f64::consts::PI * m as f64 / big_n as f64))
        .collect();
    let norm = libm::sqrt(2.0) / big_n as f64 * scale;
    let mut coeffs = Vec::with_capacity(big_n - 1);
    for k in 1..big_n {
        let mut acc = 0.0;
        for i in 1..big_n {
            acc += f.values[i] * table[(k * i) % (2 * big_n)];
        }
        coeffs.push(acc * norm);
    }
    Ok(coeffs)
}

/// Inverse of [`sine_coefficients`]: synthesizes grid samples from
/// orthonormal sine-basis coefficients.
pub(crate) fn sine_reconstruct(grid: Grid1D, coeffs: &[f64]) -> Result<SampledFn> {
    let n = grid.n;
    if coeffs.len() != n - 2 {
        return Err(Error::invalid("coefficient count must be n - 2"));
    }
    let big_n = n - 1;
    let table: Vec<f64> = (0..2 * big_n)
        .map(|m| libm::sin(core::f64::consts::PI * m as f64 / big_n as f64))
        .collect();
    let scale = libm::sqrt(2.0) / libm::sqrt(grid.b - grid.a);
    let mut values = Vec::with_capacity(n);
    values.push(0.0);
    for i in 1..big_n {
        let mut acc = 0.0;
        for (k, &c) in coeffs.iter().enumerate() {
            acc += c * table[((k + 1) * i) % (2 * big_n)];
        }
        values.push(acc * scale);
    }
    values.push(0.0);
    SampledFn::new(grid, values)
}

/// Scale factor mapping the physical domain onto [0, 1] for the sine
/// basis; rejects data that does not vanish at the boundary.
fn boundary_scale(f: &SampledFn) -> Result<f64> {
    let n = f.len();
    if f.values[0].abs() > 1e-8 || f.values[n - 1].abs() > 1e-8 {
        return Err(Error::invalid(
            "spectral norm requires boundary values below 1e-8",
        ));
    }
    Ok(libm::sqrt(f.grid.b - f.grid.a))
}

/// Spectral Sobolev norm `(sum_k (1 + (k pi)^2)^s c_k^2)^(1/2)` over the
/// orthonormal sine coefficients `c_k`; at `s = 0` it equals the discrete
/// `L^2` norm by Parseval.
pub fn sobolev_norm_spectral(f: &SampledFn, s: f64) -> Result<NormReport> {
    if !(s >= 0.0 && s.is_finite()) {
        return Err(Error::invalid(alloc::format!(
            "smoothness must be >= 0, got {s}"
        )));
    }
    let coeffs = sine_coefficients(f)?;
    let mut acc = 0.0;
    for (k, &c) in coeffs.iter().enumerate() {
        let freq = (k + 1) as f64 * core::f64::consts::PI;
        acc += libm::pow(1.0 + freq * freq, s) * c * c;
    }
    Ok(NormReport {
        value: libm::sqrt(acc),
        grid_n: f.len(),
        kind: NormKind::SobolevSpectral,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit_grid(n: usize) -> Grid1D {
        Grid1D::new(0.0, 1.0, n).unwrap()
    }

    #[test]
    fn gagliardo_zero_on_constants_and_one_on_identity() {
        let g = unit_grid(512);
        let c = SampledFn::from_fn(g, |_| 4.2).unwrap();
        assert_eq!(gagliardo_seminorm(&c, 0.5, 2.0).unwrap().value, 0.0);
        let f = SampledFn::from_fn(g, |x| x).unwrap();
        let r = gagliardo_seminorm(&f, 0.5, 2.0).unwrap();
        assert!((r.value - 1.0).abs() <= 0.02, "value {}", r.value);
        assert_eq!(r.kind, NormKind::Gagliardo);
    }

    #[test]
    fn gagliardo_is_stable_under_refinement() {
        let f = |n| {
            let g = unit_grid(n);
            let s = SampledFn::from_fn(g, |x| libm::sin(core::f64::consts::PI * x)).unwrap();
            gagliardo_seminorm(&s, 0.5, 2.0).unwrap().value
        };
        let (a, b) = (f(256), f(512));
        assert!((a - b).abs() / b < 0.02, "n=256: {a}, n=512: {b}");
    }

    #[test]
    fn gagliardo_rejects_bad_orders() {
        let g = unit_grid(16);
        let f = SampledFn::from_fn(g, |x| x).unwrap();
        assert!(gagliardo_seminorm(&f, 0.0, 2.0).is_err());
        assert!(gagliardo_seminorm(&f, 1.0, 2.0).is_err());
        assert!(gagliardo_seminorm(&f, 0.5, 0.5).is_err());
    }

    #[test]
    fn besov_of_identity_matches_analytic_maximum() {
        let g = unit_grid(513);
        let f = SampledFn::from_fn(g, |x| x).unwrap();
        let sup = besov_sup_term(&f, 0.5, 2.0).unwrap();
        assert!((sup - 0.5).abs() <= 0.01, "sup term {sup}");
        let full = besov_norm(&f, 0.5, 2.0).unwrap().value;
        let want = 0.5 + 1.0 / libm::sqrt(3.0);
        assert!((full - want).abs() / want <= 0.02, "norm {full}");
    }

    #[test]
    fn besov_of_constant_is_its_lp_norm() {
        let g = unit_grid(128);
        let c = SampledFn::from_fn(g, |_| 2.0).unwrap();
        let r = besov_norm(&c, 0.3, 2.0).unwrap();
        assert_relative_eq!(r.value, 2.0, epsilon = 1e-10);
    }

    #[test]
    fn holder_seminorm_examples() {
        let g = unit_grid(4096);
        let c = SampledFn::from_fn(g, |_| 1.0).unwrap();
        assert_eq!(holder_seminorm(&c, 0.5).unwrap().value, 0.0);
        let lin = SampledFn::from_fn(g, |x| x).unwrap();
        assert_relative_eq!(holder_seminorm(&lin, 0.5).unwrap().value, 1.0, epsilon = 1e-12);
        let root = SampledFn::from_fn(g, |x| libm::sqrt(x)).unwrap();
        let r = holder_seminorm(&root, 0.5).unwrap().value;
        assert!((r - 1.0).abs() <= 0.02, "sqrt seminorm {r}");
        assert!(holder_seminorm(&lin, 1.1).is_err());
    }

    #[test]
    fn interpolation_inequality_holds() {
        let g = unit_grid(512);
        let f = SampledFn::from_fn(g, |x| x * x).unwrap();
        let same = holder_interpolation_gap(&f, &f, 0.5, 0.1).unwrap();
        assert_eq!(same, (0.0, 0.0));
        let wiggly = SampledFn::from_fn(g, |x| {
            x * x + 0.01 * libm::sin(8.0 * core::f64::consts::PI * x)
        })
        .unwrap();
        let (lhs, rhs) = holder_interpolation_gap(&f, &wiggly, 0.5, 0.1).unwrap();
        assert!(lhs <= rhs * (1.0 + 1e-9) + 1e-12, "lhs {lhs} rhs {rhs}");
        assert!(lhs > 0.0);
        assert!(holder_interpolation_gap(&f, &wiggly, 0.5, 0.5).is_err());
    }

    #[test]
    fn embedding_exponent_cases() {
        assert_relative_eq!(sobolev_embedding_q(2, 0.5, 2.0).unwrap(), 4.0);
        assert_relative_eq!(sobolev_embedding_q(3, 0.5, 2.0).unwrap(), 3.0);
        assert!(sobolev_embedding_q(1, 0.5, 2.0).is_err());
    }

    #[test]
    fn penalty_examples() {
        let g = unit_grid(4097);
        let flat = OrderField::constant(g, 0.6).unwrap();
        // One-sided boundary stencils leave ~1e-16 rounding in the slope.
        assert!(anisotropic_penalty(&flat).value < 1e-24);
        let ramp = OrderField::ramp(g, 0.4, 0.8).unwrap();
        let got = anisotropic_penalty(&ramp).value;
        let want = 2.0 * 0.4 / 3.0 * (libm::pow(0.4, -1.5) - libm::pow(0.8, -1.5));
        assert!((got - want).abs() / want <= 0.005, "penalty {got} vs {want}");
    }

    #[test]
    fn penalty_is_homogeneous_of_degree_minus_half() {
        let g = unit_grid(257);
        let ramp = OrderField::ramp(g, 0.3, 0.6).unwrap();
        let c = 1.5;
        let scaled = OrderField::ramp(g, 0.3 * c, 0.6 * c).unwrap();
        let base = anisotropic_penalty(&ramp).value;
        let got = anisotropic_penalty(&scaled).value;
        assert_relative_eq!(got, base * libm::pow(c, -0.5), max_relative = 1e-10);
    }

    #[test]
    fn spectral_norm_single_mode_and_parseval() {
        let g = unit_grid(257);
        let f = SampledFn::from_fn(g, |x| libm::sin(3.0 * core::f64::consts::PI * x)).unwrap();
        let want = libm::sqrt(1.0 + 9.0 * core::f64::consts::PI * core::f64::consts::PI)
            / libm::sqrt(2.0);
        let got = sobolev_norm_spectral(&f, 1.0).unwrap().value;
        assert_relative_eq!(got, want, epsilon = 1e-8);
        let l2 = sobolev_norm_spectral(&f, 0.0).unwrap().value;
        assert_relative_eq!(l2, f.l2(), epsilon = 1e-10);
        let s_half = sobolev_norm_spectral(&f, 0.5).unwrap().value;
        let s_one = sobolev_norm_spectral(&f, 1.0).unwrap().value;
        assert!(s_one >= s_half);
    }

    #[test]
    fn spectral_norm_rejects_nonvanishing_boundary() {
        let g = unit_grid(64);
        let f = SampledFn::from_fn(g, |x| x + 1.0).unwrap();
        assert!(sobolev_norm_spectral(&f, 1.0).is_err());
    }

    #[test]
    fn sine_transform_round_trips() {
        let g = unit_grid(129);
        let f = SampledFn::from_fn(g, |x| x * (1.0 - x) * (2.0 + x)).unwrap();
        let coeffs = sine_coefficients(&f).unwrap();
        let back = sine_reconstruct(g, &coeffs).unwrap();
        for i in 0..g.n {
            assert_relative_eq!(back.values[i], f.values[i], epsilon = 1e-10);
        }
    }

    #[test]
    fn seminorms_are_absolutely_homogeneous() {
        let g = unit_grid(128);
        let f = SampledFn::from_fn(g, |x| libm::sin(5.0 * x) + x * x).unwrap();
        let scaled = SampledFn::new(g, f.values.iter().map(|v| -2.5 * v).collect()).unwrap();
        let pairs = [
            (
                gagliardo_seminorm(&f, 0.4, 2.0).unwrap().value,
                gagliardo_seminorm(&scaled, 0.4, 2.0).unwrap().value,
            ),
            (
                holder_seminorm(&f, 0.7).unwrap().value,
                holder_seminorm(&scaled, 0.7).unwrap().value,
            ),
            (
                besov_sup_term(&f, 0.5, 2.0).unwrap(),
                besov_sup_term(&scaled, 0.5, 2.0).unwrap(),
            ),
        ];
        for (base, scaled) in pairs {
            assert_relative_eq!(scaled, 2.5 * base, max_relative = 1e-10);
        }
    }
}
