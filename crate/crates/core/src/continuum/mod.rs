//! The `d -> infinity` limit of the closed-form Bell value.
//!
//! With `lambda_k ≈ f(k/d) / sqrt(d)` the Bell value tends to `2 - M(f)`,
//!
//! ```text
//! M(f) = ∫∫ f(x) f(y) / cos(pi (x - y) / 2) dx dy,   ∫ f^2 = 1,
//! ```
//!
//! and the trial family `f_delta(x) ∝ (x (1 - x))^(delta - 1/2)` pushes `M`
//! towards its ceiling of 2 as `delta -> 0`.
//!
//! # Integration strategy
//!
//! Reflecting `y -> 1 - y` (the profiles are symmetric) turns the kernel into
//! `1 / sin(pi (x + y) / 2)`, singular only at the corners `(0, 0)` and
//! `(1, 1)`, which contribute equally. Near the corner the integrand behaves
//! like `(x y)^(delta - 1/2) / (x + y)`: a Duffy split `x = a s, y = a s t`
//! factors this into `s^(2 delta - 1) t^(delta - 1/2)` times a smooth function,
//! and graded power maps `s = sigma^(3/(2 delta))`, `t = tau^(3/(delta + 1/2))`
//! absorb both factors. The off-corner quadrants only carry the separable
//! endpoint factors and take the same kind of map per axis.

pub mod quadrature;

use std::f64::consts::PI;

use crate::special::{digamma, gamma_fn};
use crate::{Error, Result};

pub use quadrature::{Estimate, QuadratureSpec, Scheme};

/// `f_delta` with its normalization constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuumAnsatz {
    delta: f64,
    normalization: f64,
}

impl ContinuumAnsatz {
    /// `delta` must lie in `(0, 1/4)`.
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 0.25) {
            return Err(Error::DeltaOutOfRange(delta));
        }
        let denom =
            gamma_fn(0.5 - 2.0 * delta)? * gamma_fn(2.0 * delta)? * (2.0 * PI * delta).cos();
        let normalization = PI.powf(0.25) * 2f64.powf(2.0 * delta - 0.5) / denom.sqrt();
        Ok(Self {
            delta,
            normalization,
        })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// The prefactor `pi^(1/4) 2^(2 delta - 1/2) / sqrt(Gamma(1/2 - 2 delta) Gamma(2 delta) cos(2 pi delta))`.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(x > 0.0 && x < 1.0) {
            return Err(Error::XOutOfRange(x));
        }
        Ok(self.normalization * (x * (1.0 - x)).powf(self.delta - 0.5))
    }

    fn profile(&self) -> SingularProfile {
        SingularProfile {
            delta: self.delta,
            scale: self.normalization,
        }
    }
}

/// `f_delta(x)`.
pub fn f_delta(delta: f64, x: f64) -> Result<f64> {
    ContinuumAnsatz::new(delta)?.eval(x)
}

/// `scale * (x (1 - x))^(delta - 1/2)`, the shape shared by `f_delta` and the
/// integrand of `I_delta`.
#[derive(Debug, Clone, Copy)]
struct SingularProfile {
    delta: f64,
    scale: f64,
}

impl SingularProfile {
    /// Exponent `p` with `(x (1 - x))^(p - 1)`.
    fn p(&self) -> f64 {
        self.delta + 0.5
    }

    /// `∫∫_{[0,a]^2} f(x) f(y) / sin(pi (x + y) / 2)`, as twice one Duffy triangle.
    fn corner_square(&self, a: f64, spec: &QuadratureSpec) -> Result<Estimate> {
        let (delta, p) = (self.delta, self.p());
        let prefactor = 2.0 * self.scale.powi(2) * a.powf(2.0 * p);
        let est = quadrature::integrate_unit_square(spec, |sigma, tau| {
            let (s, ws) = graded(sigma, 2.0 * delta);
            let (t, wt) = graded(tau, p);
            let c = 0.5 * PI * a * (1.0 + t);
            ws * wt
                * s_over_sin(s, c)
                * (1.0 - a * s).powf(p - 1.0)
                * (1.0 - a * s * t).powf(p - 1.0)
        })?;
        Ok(scale_estimate(est, prefactor))
    }

    /// `∫_0^{1/2} ∫_{1/2}^1 f(x) f(y) / sin(pi (x + y) / 2)`.
    fn off_corner_quadrant(&self, spec: &QuadratureSpec) -> Result<Estimate> {
        let p = self.p();
        let prefactor = self.scale.powi(2) * 0.5f64.powf(2.0 * p);
        let est = quadrature::integrate_unit_square(spec, |sigma, tau| {
            let (u, wu) = graded(sigma, p);
            let (v, wv) = graded(tau, p);
            let (x, y) = (0.5 * u, 1.0 - 0.5 * v);
            wu * wv * (1.0 - x).powf(p - 1.0) * y.powf(p - 1.0) / (0.5 * PI * (x + y)).sin()
        })?;
        Ok(scale_estimate(est, prefactor))
    }

    fn m_functional(&self, spec: &QuadratureSpec) -> Result<Estimate> {
        let corner = self.corner_square(0.5, spec)?;
        let off = self.off_corner_quadrant(spec)?;
        Ok(Estimate {
            value: 2.0 * (corner.value + off.value),
            error: 2.0 * (corner.error + off.error),
        })
    }

    /// `∫_0^1 f^2`.
    fn norm_sqr(&self, spec: &QuadratureSpec) -> Result<Estimate> {
        // 2 ∫_0^{1/2} scale^2 x^{2 delta - 1} (1 - x)^{2 delta - 1}, x = u / 2.
        let delta = self.delta;
        let prefactor = 2.0 * self.scale.powi(2) * 0.5f64.powf(2.0 * delta);
        let est = quadrature::integrate_unit_interval(spec, |sigma| {
            let (u, w) = graded(sigma, 2.0 * delta);
            w * (1.0 - 0.5 * u).powf(2.0 * delta - 1.0)
        })?;
        Ok(scale_estimate(est, prefactor))
    }
}

/// Order of the graded maps below.
const GRADING: i32 = 3;

/// Maps `u in (0, 1)` to `t = u^(n / e)` and returns `(t, dt-weight)` such that
/// `∫_0^1 t^(e - 1) g(t) dt = ∫_0^1 weight * g(t) du`. With `n = GRADING` the
/// first non-analytic term in `u` is `u^(n - 1 + n / e)`, which keeps
/// Gauss-Legendre convergence fast.
fn graded(u: f64, e: f64) -> (f64, f64) {
    let n = GRADING as f64;
    (u.powf(n / e), n / e * u.powi(GRADING - 1))
}

fn scale_estimate(e: Estimate, factor: f64) -> Estimate {
    Estimate {
        value: e.value * factor,
        error: e.error * factor.abs(),
    }
}

/// `s / sin(c s)` with the `s -> 0` limit `1 / c`.
fn s_over_sin(s: f64, c: f64) -> f64 {
    let z = c * s;
    if z < 1e-8 {
        1.0 / c
    } else {
        s / z.sin()
    }
}

/// `M(f_delta)`.
pub fn m_functional(ansatz: &ContinuumAnsatz, quad: &QuadratureSpec) -> Result<f64> {
    Ok(m_functional_estimate(ansatz, quad)?.value)
}

pub fn m_functional_estimate(ansatz: &ContinuumAnsatz, quad: &QuadratureSpec) -> Result<Estimate> {
    ansatz.profile().m_functional(quad)
}

/// `∫_0^1 f_delta(x)^2 dx`, which should be 1.
pub fn ansatz_norm_sqr(ansatz: &ContinuumAnsatz, quad: &QuadratureSpec) -> Result<Estimate> {
    ansatz.profile().norm_sqr(quad)
}

/// `M(f)` for a trial function that is bounded and continuous on `[0, 1]`.
///
/// The caller is responsible for normalizing `f`.
pub fn m_functional_bounded(
    f: impl Fn(f64) -> f64 + Sync,
    quad: &QuadratureSpec,
) -> Result<Estimate> {
    // Reflected integrand g(x, y) = f(x) f(1 - y) / sin(pi (x + y) / 2).
    let reflected = |x: f64, y: f64| f(x) * f(1.0 - y);
    let mirrored = |x: f64, y: f64| f(1.0 - x) * f(y);

    // Corner squares: Duffy on both triangles; jacobian a^2 s with a = 1/2.
    let a = 0.5;
    let corner = |h: &(dyn Fn(f64, f64) -> f64 + Sync)| {
        quadrature::integrate_unit_square(quad, |s, t| {
            let w = a * a * s_over_sin(s, 0.5 * PI * a * (1.0 + t));
            w * (h(a * s, a * s * t) + h(a * s * t, a * s))
        })
    };
    let c00 = corner(&reflected)?;
    let c11 = corner(&mirrored)?;

    // Off-corner quadrants [0,1/2] x [1/2,1] and its transpose.
    let off = |h: &(dyn Fn(f64, f64) -> f64 + Sync)| {
        quadrature::integrate_unit_square(quad, |u, v| {
            let (x, y) = (0.5 * u, 0.5 + 0.5 * v);
            0.25 * (h(x, y) + h(y, x)) / (0.5 * PI * (x + y)).sin()
        })
    };
    let q = off(&reflected)?;

    let parts = [c00, c11, q];
    Ok(Estimate {
        value: parts.iter().map(|e| e.value).sum(),
        error: parts.iter().map(|e| e.error).sum(),
    })
}

fn check_chain_params(delta: f64, epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon <= 0.5) {
        return Err(Error::ParameterOutOfRange {
            name: "epsilon",
            value: epsilon,
        });
    }
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::ParameterOutOfRange {
            name: "delta",
            value: delta,
        });
    }
    Ok(())
}

/// Digamma expression for the corner lower bound on `I_delta`:
///
/// ```text
/// (eps^(2 delta) / pi) [psi(1/4 - delta/2) - psi(1/4 + delta/2)
///                       + psi(3/4 - delta/2) - psi(3/4 + delta/2) + 2 pi sec(pi delta)]
/// ```
pub fn i_delta_closed_form(delta: f64, epsilon: f64) -> Result<f64> {
    check_chain_params(delta, epsilon)?;
    let h = 0.5 * delta;
    let bracket = digamma(0.25 - h)? - digamma(0.25 + h)? + digamma(0.75 - h)? - digamma(0.75 + h)?
        + 2.0 * PI / (PI * delta).cos();
    Ok(epsilon.powf(2.0 * delta) / PI * bracket)
}

/// `I_delta = ∫∫ delta (x(1-x) y(1-y))^(delta - 1/2) / cos(pi (x - y) / 2)`.
pub fn i_delta(delta: f64, quad: &QuadratureSpec) -> Result<Estimate> {
    check_chain_params(delta, 0.5)?;
    SingularProfile {
        delta,
        scale: delta.sqrt(),
    }
    .m_functional(quad)
}

/// `2 ∫_0^eps ∫_{1-eps}^1` of the `I_delta` integrand.
pub fn i_delta_corner(delta: f64, epsilon: f64, quad: &QuadratureSpec) -> Result<Estimate> {
    check_chain_params(delta, epsilon)?;
    let e = SingularProfile {
        delta,
        scale: delta.sqrt(),
    }
    .corner_square(epsilon, quad)?;
    // After reflection each of the two corners is the square [0, eps]^2.
    Ok(scale_estimate(e, 2.0))
}

/// `(4/pi) ∫_0^eps ∫_0^eps delta (x y)^(delta - 1/2) / (x + y)` by 2D quadrature.
pub fn i_delta_middle_bound(delta: f64, epsilon: f64, quad: &QuadratureSpec) -> Result<Estimate> {
    check_chain_params(delta, epsilon)?;
    let p = delta + 0.5;
    // Two Duffy triangles; the s integral is exact, t^(p - 1) goes into the map.
    let prefactor = 4.0 / PI * delta * 2.0 * epsilon.powf(2.0 * delta) / (2.0 * delta);
    let est = quadrature::integrate_unit_interval(quad, |tau| {
        let (t, w) = graded(tau, p);
        w / (1.0 + t)
    })?;
    Ok(scale_estimate(est, prefactor))
}

/// The three stages of the lower-bound chain at one `(delta, epsilon)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainCheck {
    /// `I_delta` over the full square.
    pub lhs_integral: f64,
    /// `2 ∫_0^eps ∫_{1-eps}^1` of the same integrand.
    pub corner_integral: f64,
    /// `(4/pi) ∫_0^eps ∫_0^eps delta (xy)^(delta-1/2) / (x+y)`.
    pub middle_bound: f64,
    pub closed_form: f64,
    /// Sum of the quadrature error estimates involved.
    pub quadrature_error: f64,
}

impl ChainCheck {
    /// `I_delta >= corner >= middle >= 0`, up to the quadrature error.
    pub fn ordered(&self) -> bool {
        let e = self.quadrature_error;
        self.lhs_integral + e >= self.corner_integral
            && self.corner_integral + e >= self.middle_bound
            && self.middle_bound > 0.0
    }
}

pub fn i_delta_chain_check(delta: f64, epsilon: f64, quad: &QuadratureSpec) -> Result<ChainCheck> {
    let full = i_delta(delta, quad)?;
    let corner = i_delta_corner(delta, epsilon, quad)?;
    let middle = i_delta_middle_bound(delta, epsilon, quad)?;
    Ok(ChainCheck {
        lhs_integral: full.value,
        corner_integral: corner.value,
        middle_bound: middle.value,
        closed_form: i_delta_closed_form(delta, epsilon)?,
        quadrature_error: full.error + corner.error + middle.error,
    })
}

/// One row of the continuum sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuumPoint {
    pub delta: f64,
    pub m_f: f64,
    pub i_delta_closed: f64,
    pub epsilon: f64,
}

/// Default `delta` grid for sweeps.
pub const DEFAULT_DELTAS: [f64; 5] = [0.2, 0.1, 0.05, 0.02, 0.01];

pub fn continuum_sweep(
    deltas: &[f64],
    epsilon: f64,
    quad: &QuadratureSpec,
) -> Result<Vec<ContinuumPoint>> {
    deltas
        .iter()
        .map(|&delta| {
            let ansatz = ContinuumAnsatz::new(delta)?;
            Ok(ContinuumPoint {
                delta,
                m_f: m_functional(&ansatz, quad)?,
                i_delta_closed: i_delta_closed_form(delta, epsilon)?,
                epsilon,
            })
        })
        .collect()
}
