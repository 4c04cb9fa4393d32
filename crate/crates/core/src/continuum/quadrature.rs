//! One-dimensional rules on `(0, 1)` and tensor-product integration with a
//! two-level error estimate.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;

use crate::{Error, Result};

/// Quadrature family used on each axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    GaussLegendre,
    TanhSinh,
}

/// Scheme, nodes per axis and the convergence target.
///
/// The estimate compares `points` against `2 * points` nodes per axis and the
/// finer value is returned.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub scheme: Scheme,
    pub points: usize,
    pub target_abs_err: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            scheme: Scheme::GaussLegendre,
            points: 96,
            target_abs_err: 1e-10,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.points < 8 {
            return Err(Error::InvalidConfig("quadrature needs at least 8 points"));
        }
        if !(self.target_abs_err > 0.0) {
            return Err(Error::InvalidConfig("target_abs_err must be positive"));
        }
        Ok(())
    }
}

/// Nodes and weights on `(0, 1)`.
#[derive(Debug, Clone)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn new(scheme: Scheme, points: usize) -> Self {
        match scheme {
            Scheme::GaussLegendre => gauss_legendre(points),
            Scheme::TanhSinh => tanh_sinh(points),
        }
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Tensor-product rule on the unit square, parallel over the outer axis.
    pub fn integrate_2d(&self, f: impl Fn(f64, f64) -> f64 + Sync) -> f64 {
        let partial: Vec<f64> = self
            .nodes
            .par_iter()
            .zip(&self.weights)
            .map(|(&x, &wx)| {
                wx * self
                    .nodes
                    .iter()
                    .zip(&self.weights)
                    .map(|(&y, &wy)| wy * f(x, y))
                    .sum::<f64>()
            })
            .collect();
        // Summed sequentially so the result does not depend on scheduling.
        partial.iter().sum()
    }
}

/// Gauss-Legendre rule mapped to `(0, 1)`, nodes from Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> Rule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess for the i-th largest root.
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Map [-1, 1] -> [0, 1].
        nodes[i] = 0.5 * (1.0 - x);
        nodes[n - 1 - i] = 0.5 * (1.0 + x);
        weights[i] = 0.5 * w;
        weights[n - 1 - i] = 0.5 * w;
    }
    Rule { nodes, weights }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Half-width of the tanh-sinh abscissa range; endpoint distance ~ 1e-23.
const TANH_SINH_TMAX: f64 = 3.5;

/// Tanh-sinh rule with `n` equally spaced abscissae on `[-tmax, tmax]`.
pub fn tanh_sinh(n: usize) -> Rule {
    let h = 2.0 * TANH_SINH_TMAX / (n as f64 + 1.0);
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for j in 1..=n {
        let t = -TANH_SINH_TMAX + j as f64 * h;
        let u = FRAC_PI_2 * t.sinh();
        // x = (1 + tanh u) / 2 = 1 / (1 + e^{-2u})
        let x = 1.0 / (1.0 + (-2.0 * u).exp());
        let w = h * FRAC_PI_2 * t.cosh() / (2.0 * u.cosh().powi(2));
        if x > 0.0 && x < 1.0 {
            nodes.push(x);
            weights.push(w);
        }
    }
    Rule { nodes, weights }
}

/// Value and refinement error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Integrates `f` over the unit square at two refinement levels.
pub fn integrate_unit_square(
    spec: &QuadratureSpec,
    f: impl Fn(f64, f64) -> f64 + Sync,
) -> Result<Estimate> {
    spec.validate()?;
    let coarse = Rule::new(spec.scheme, spec.points).integrate_2d(&f);
    let fine = Rule::new(spec.scheme, 2 * spec.points).integrate_2d(&f);
    checked(spec, coarse, fine)
}

/// Integrates `f` over `(0, 1)` at two refinement levels.
pub fn integrate_unit_interval(spec: &QuadratureSpec, f: impl Fn(f64) -> f64) -> Result<Estimate> {
    spec.validate()?;
    let coarse = Rule::new(spec.scheme, spec.points).integrate(&f);
    let fine = Rule::new(spec.scheme, 2 * spec.points).integrate(&f);
    checked(spec, coarse, fine)
}

fn checked(spec: &QuadratureSpec, coarse: f64, fine: f64) -> Result<Estimate> {
    let error = (fine - coarse).abs();
    if !(error <= spec.target_abs_err) {
        return Err(Error::QuadratureNotConverged {
            estimate: error,
            target: spec.target_abs_err,
        });
    }
    Ok(Estimate { value: fine, error })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        for n in [8usize, 9, 64] {
            let r = gauss_legendre(n);
            assert!((r.weights.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            for deg in 0..(2 * n) as i32 {
                let got = r.integrate(|x| x.powi(deg));
                let want = 1.0 / (deg as f64 + 1.0);
                assert!((got - want).abs() < 1e-14, "n = {n}, deg = {deg}");
            }
        }
    }

    #[test]
    fn tanh_sinh_handles_endpoint_singularity() {
        let r = tanh_sinh(200);
        let got = r.integrate(|x| x.powf(-0.5));
        assert!((got - 2.0).abs() < 1e-10, "{got}");
        let got = r.integrate(|x| x.exp());
        assert!((got - (1f64.exp() - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn square_integration_and_failure_path() {
        let spec = QuadratureSpec::default();
        let e = integrate_unit_square(&spec, |x, y| x * y.exp()).unwrap();
        assert!((e.value - 0.5 * (1f64.exp() - 1.0)).abs() < 1e-13);

        let tight = QuadratureSpec {
            points: 8,
            target_abs_err: 1e-14,
            ..spec
        };
        assert!(matches!(
            integrate_unit_interval(&tight, |x| x.sqrt()),
            Err(Error::QuadratureNotConverged { .. })
        ));

        let bad = QuadratureSpec { points: 4, ..spec };
        assert!(bad.validate().is_err());
    }
}
