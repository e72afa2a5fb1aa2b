//! Uniform 1-D grids, sampled functions, and variable order fields.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Uniform grid on `[a, b]` with `n` points including both endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub a: f64,
    pub b: f64,
    pub n: usize,
    /// Fixed at `(b - a) / (n - 1)`.
    pub spacing: f64,
}

impl Grid1D {
    pub fn new(a: f64, b: f64, n: usize) -> Result<Grid1D> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::invalid("grid endpoints must be finite"));
        }
        if n < 2 {
            return Err(Error::invalid(alloc::format!(
                "grid needs at least 2 points, got {n}"
            )));
        }
        if b <= a {
            return Err(Error::invalid(alloc::format!(
                "grid needs b > a, got [{a}, {b}]"
            )));
        }
        Ok(Grid1D {
            a,
            b,
            n,
            spacing: (b - a) / (n - 1) as f64,
        })
    }

    #[inline]
    pub fn point(&self, i: usize) -> f64 {
        self.a + self.spacing * i as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|i| self.point(i))
    }
}

/// Function samples attached to the grid they were taken on.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFn {
    pub grid: Grid1D,
    pub values: Vec<f64>,
}

impl SampledFn {
    pub fn new(grid: Grid1D, values: Vec<f64>) -> Result<SampledFn> {
        if values.len() != grid.n {
            return Err(Error::invalid(alloc::format!(
                "expected {} samples, got {}",
                grid.n,
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::invalid(alloc::format!(
                "sample values must be finite, found {v}"
            )));
        }
        Ok(SampledFn { grid, values })
    }

    /// Samples a closure on the grid.
    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Result<SampledFn> {
        let values = grid.points().map(f).collect();
        SampledFn::new(grid, values)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Trapezoid-weighted discrete L1 norm.
    pub fn l1(&self) -> f64 {
        weighted_sum(&self.values, self.grid.spacing, |v| v.abs())
    }

    /// Trapezoid-weighted discrete L2 norm.
    pub fn l2(&self) -> f64 {
        libm::sqrt(weighted_sum(&self.values, self.grid.spacing, |v| v * v))
    }

    pub fn linf(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

fn weighted_sum(values: &[f64], h: f64, f: impl Fn(f64) -> f64) -> f64 {
    let n = values.len();
    let mut acc = 0.0;
    for (i, &v) in values.iter().enumerate() {
        let w = if i == 0 || i + 1 == n { 0.5 * h } else { h };
        acc += w * f(v);
    }
    acc
}

/// Spatially varying differentiation order with cached range bounds.
///
/// Every entry stays strictly inside `(0, 1)`; `alpha0`/`alpha1` are the
/// attained minimum and maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderField {
    pub grid: Grid1D,
    pub alpha: Vec<f64>,
    pub alpha0: f64,
    pub alpha1: f64,
}

impl OrderField {
    pub fn new(grid: Grid1D, alpha: Vec<f64>) -> Result<OrderField> {
        if alpha.len() != grid.n {
            return Err(Error::invalid(alloc::format!(
                "expected {} order values, got {}",
                grid.n,
                alpha.len()
            )));
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &a in &alpha {
            if !(a > 0.0 && a < 1.0) {
                return Err(Error::invalid(alloc::format!(
                    "order values must lie strictly in (0, 1), got {a}"
                )));
            }
            lo = lo.min(a);
            hi = hi.max(a);
        }
        Ok(OrderField {
            grid,
            alpha,
            alpha0: lo,
            alpha1: hi,
        })
    }

    pub fn constant(grid: Grid1D, alpha: f64) -> Result<OrderField> {
        OrderField::new(grid, alloc::vec![alpha; grid.n])
    }

    /// Linear ramp from `lo` at the left endpoint to `hi` at the right.
    pub fn ramp(grid: Grid1D, lo: f64, hi: f64) -> Result<OrderField> {
        let span = grid.b - grid.a;
        let alpha = grid
            .points()
            .map(|x| lo + (hi - lo) * (x - grid.a) / span)
            .collect();
        OrderField::new(grid, alpha)
    }

    #[inline]
    pub fn value(&self, i: usize) -> f64 {
        self.alpha[i]
    }

    /// Order at the grid point nearest to `x` (clamped to the domain).
    pub fn value_at(&self, x: f64) -> f64 {
        let rel = (x - self.grid.a) / self.grid.spacing;
        let idx = libm::round(rel).max(0.0) as usize;
        self.alpha[idx.min(self.grid.n - 1)]
    }
}

/// Shared knobs for reproducible experiment drivers.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub grid_n: usize,
    pub tolerance: f64,
    pub output_path: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 42,
            grid_n: 1024,
            tolerance: 1e-9,
            output_path: None,
        }
    }
}

/// Second-order finite differences: central in the interior, one-sided
/// three-point stencils at the two endpoints.
pub fn finite_diff(f: &SampledFn) -> Result<SampledFn> {
    let n = f.len();
    if n < 3 {
        return Err(Error::invalid("finite_diff needs at least 3 samples"));
    }
    let h = f.grid.spacing;
    let v = &f.values;
    let mut d = Vec::with_capacity(n);
    d.push((-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h));
    for i in 1..n - 1 {
        d.push((v[i + 1] - v[i - 1]) / (2.0 * h));
    }
    d.push((3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h));
    SampledFn::new(f.grid, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn grid_hits_right_endpoint() {
        for n in [2, 7, 64, 1023] {
            let g = Grid1D::new(-1.5, 2.25, n).unwrap();
            assert!((g.point(n - 1) - g.b).abs() <= 1e-12);
            assert_eq!(g.points().count(), n);
        }
    }

    #[test]
    fn grid_rejects_bad_inputs() {
        assert!(Grid1D::new(0.0, 1.0, 1).is_err());
        assert!(Grid1D::new(1.0, 1.0, 8).is_err());
        assert!(Grid1D::new(2.0, 1.0, 8).is_err());
        assert!(Grid1D::new(f64::NAN, 1.0, 8).is_err());
    }

    #[test]
    fn sampled_fn_validates_length_and_finiteness() {
        let g = Grid1D::new(0.0, 1.0, 4).unwrap();
        assert!(SampledFn::new(g, alloc::vec![0.0; 3]).is_err());
        assert!(SampledFn::new(g, alloc::vec![0.0, 1.0, f64::NAN, 2.0]).is_err());
        assert!(SampledFn::new(g, alloc::vec![0.0; 4]).is_ok());
    }

    #[test]
    fn order_field_bounds_and_range_check() {
        let g = Grid1D::new(0.0, 1.0, 5).unwrap();
        let f = OrderField::ramp(g, 0.4, 0.8).unwrap();
        assert_relative_eq!(f.alpha0, 0.4);
        assert_relative_eq!(f.alpha1, 0.8);
        assert!(OrderField::constant(g, 1.0).is_err());
        assert!(OrderField::constant(g, 0.0).is_err());
        assert!(OrderField::constant(g, -0.2).is_err());
    }

    #[test]
    fn nearest_lookup_clamps() {
        let g = Grid1D::new(0.0, 1.0, 5).unwrap();
        let f = OrderField::ramp(g, 0.2, 0.6).unwrap();
        assert_relative_eq!(f.value_at(-3.0), 0.2);
        assert_relative_eq!(f.value_at(9.0), 0.6);
        assert_relative_eq!(f.value_at(0.26), 0.3);
    }

    #[test]
    fn finite_diff_is_exact_for_quadratics() {
        let g = Grid1D::new(0.0, 2.0, 41).unwrap();
        let f = SampledFn::from_fn(g, |x| 3.0 * x * x - x + 0.5).unwrap();
        let d = finite_diff(&f).unwrap();
        for (i, x) in g.points().enumerate() {
            assert_relative_eq!(d.values[i], 6.0 * x - 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn finite_diff_second_order_on_sine() {
        // Halving h should shrink the max error by roughly 4; demand >= 3.5.
        let err = |n: usize| {
            let g = Grid1D::new(0.0, 1.0, n).unwrap();
            let f = SampledFn::from_fn(g, |x| libm::sin(core::f64::consts::PI * x)).unwrap();
            let d = finite_diff(&f).unwrap();
            g.points()
                .enumerate()
                .map(|(i, x)| {
                    (d.values[i]
                        - core::f64::consts::PI * libm::cos(core::f64::consts::PI * x))
                    .abs()
                })
                .fold(0.0f64, f64::max)
        };
        let ratio = err(101) / err(201);
        assert!(ratio >= 3.5, "convergence ratio {ratio} below second order");
    }

    #[test]
    fn trapezoid_norms_match_closed_forms() {
        let g = Grid1D::new(0.0, 1.0, 2001).unwrap();
        let f = SampledFn::from_fn(g, |x| x).unwrap();
        assert_relative_eq!(f.l1(), 0.5, epsilon = 1e-6);
        assert_relative_eq!(f.l2(), libm::sqrt(1.0 / 3.0), epsilon = 1e-6);
        assert_relative_eq!(f.linf(), 1.0);
    }
}
