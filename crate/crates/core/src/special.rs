//! Gamma and digamma for positive real arguments.
//!
//! Digamma shifts its argument upward with `psi(z + 1) = psi(z) + 1/z` until it
//! passes a threshold and then applies the asymptotic expansion
//!
//! ```text
//! psi(x) ~ ln x - 1/(2x) - sum_k B_{2k} / (2k x^{2k})
//! ```
//!
//! Gamma uses the Lanczos approximation (g = 7, 9 coefficients) and the
//! recurrence `Gamma(z) = Gamma(z + 1) / z` below 1. Neither routine uses a
//! reflection or duplication formula, so those identities remain usable as
//! independent checks.

use std::f64::consts::PI;

use crate::{Error, Result};

/// `B_{2k} / (2k)` for k = 1..=10.
const ASYMPTOTIC_COEFFS: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
    43867.0 / 14364.0,
    -174611.0 / 6600.0,
];

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Evaluation strategy for [`digamma_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialFunctionConfig {
    /// Arguments at or above this value go straight to the asymptotic series.
    pub recurrence_threshold: f64,
    /// Number of Bernoulli terms kept in the series (4..=10).
    pub series_terms: usize,
}

impl Default for SpecialFunctionConfig {
    fn default() -> Self {
        Self {
            recurrence_threshold: 6.0,
            series_terms: 7,
        }
    }
}

impl SpecialFunctionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.recurrence_threshold >= 2.0) {
            return Err(Error::InvalidConfig("recurrence_threshold must be >= 2"));
        }
        if !(4..=ASYMPTOTIC_COEFFS.len()).contains(&self.series_terms) {
            return Err(Error::InvalidConfig("series_terms must be in 4..=10"));
        }
        Ok(())
    }
}

/// Digamma `psi(z) = Gamma'(z) / Gamma(z)` with the default configuration.
pub fn digamma(z: f64) -> Result<f64> {
    digamma_with(z, &SpecialFunctionConfig::default())
}

pub fn digamma_with(z: f64, config: &SpecialFunctionConfig) -> Result<f64> {
    config.validate()?;
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::NonPositiveArgument(z));
    }

    let mut x = z;
    let mut shift = 0.0;
    while x < config.recurrence_threshold {
        shift += 1.0 / x;
        x += 1.0;
    }

    let inv2 = 1.0 / (x * x);
    // Horner in 1/x^2, highest order first.
    let series = ASYMPTOTIC_COEFFS[..config.series_terms]
        .iter()
        .rev()
        .fold(0.0, |acc, &c| acc * inv2 + c)
        * inv2;

    Ok(x.ln() - 0.5 / x - series - shift)
}

/// Gamma function for `z > 0`.
pub fn gamma_fn(z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::NonPositiveArgument(z));
    }
    if z < 1.0 {
        return Ok(lanczos(z + 1.0) / z);
    }
    Ok(lanczos(z))
}

/// Lanczos approximation, valid for `z >= 1`.
fn lanczos(z: f64) -> f64 {
    let z = z - 1.0;
    let mut sum = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    // Split the power so that exp(-t) sits between the two halves.
    let half = t.powf(0.5 * (z + 0.5));
    (2.0 * PI).sqrt() * half * (-t).exp() * half * sum
}

#[cfg(test)]
mod tests {
    use super::*;

    // Euler-Mascheroni constant, 30-digit reference truncated to f64.
    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

    #[test]
    fn digamma_at_one_and_two() {
        assert!((digamma(1.0).unwrap() + EULER_GAMMA).abs() < 1e-12);
        assert!((digamma(2.0).unwrap() - (1.0 - EULER_GAMMA)).abs() < 1e-12);
    }

    #[test]
    fn digamma_at_half() {
        let expected = -EULER_GAMMA - 2.0 * std::f64::consts::LN_2;
        assert!((digamma(0.5).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn digamma_duplication() {
        // psi(2z) = psi(z)/2 + psi(z + 1/2)/2 + ln 2
        for &z in &[0.05, 0.3, 0.77, 2.4, 11.0, 24.5] {
            let lhs = digamma(2.0 * z).unwrap();
            let rhs = 0.5 * digamma(z).unwrap()
                + 0.5 * digamma(z + 0.5).unwrap()
                + std::f64::consts::LN_2;
            assert!((lhs - rhs).abs() < 1e-12, "z = {z}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn digamma_recurrence() {
        for &z in &[0.1, 0.5, 1.5, 7.3] {
            let r = digamma(z + 1.0).unwrap() - digamma(z).unwrap() - 1.0 / z;
            assert!(r.abs() <= 1e-13, "z = {z}: residual {r:e}");
        }
    }

    #[test]
    fn digamma_reflection() {
        // psi(1 - z) - psi(z) = pi cot(pi z)
        for &z in &[0.01, 0.1, 0.25, 0.4, 0.6, 0.93] {
            let lhs = digamma(1.0 - z).unwrap() - digamma(z).unwrap();
            let rhs = PI / (PI * z).tan();
            assert!((lhs - rhs).abs() < 1e-11, "z = {z}");
        }
    }

    #[test]
    fn digamma_pairwise_cancellation_is_linear() {
        // psi(1/4 - d/2) - psi(1/4 + d/2) ~ -d psi'(1/4) as d -> 0
        let slope =
            |d: f64| (digamma(0.25 - d / 2.0).unwrap() - digamma(0.25 + d / 2.0).unwrap()) / d;
        let s1 = slope(1e-3);
        let s2 = slope(1e-4);
        assert!(s1 < 0.0 && s2 < 0.0);
        assert!((s1 - s2).abs() < 1e-3 * s2.abs());
    }

    #[test]
    fn gamma_integers_and_half() {
        assert!((gamma_fn(1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((gamma_fn(2.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((gamma_fn(0.5).unwrap() - PI.sqrt()).abs() < 1e-14);
        let mut fact = 1.0;
        for n in 1..30 {
            let g = gamma_fn(n as f64 + 1.0).unwrap();
            fact *= n as f64;
            assert!(((g - fact) / fact).abs() < 1e-13, "n = {n}");
        }
    }

    #[test]
    fn gamma_reflection_grid() {
        for i in 1..20 {
            let z = i as f64 / 20.0;
            let prod = gamma_fn(z).unwrap() * gamma_fn(1.0 - z).unwrap();
            let expected = PI / (PI * z).sin();
            assert!(((prod - expected) / expected).abs() < 1e-12, "z = {z}");
        }
    }

    #[test]
    fn non_positive_arguments_rejected() {
        assert!(matches!(digamma(0.0), Err(Error::NonPositiveArgument(_))));
        assert!(matches!(gamma_fn(-1.5), Err(Error::NonPositiveArgument(_))));
        assert!(gamma_fn(f64::NAN).is_err());
    }

    #[test]
    fn config_bounds() {
        let bad = SpecialFunctionConfig {
            recurrence_threshold: 1.0,
            series_terms: 7,
        };
        assert!(digamma_with(1.0, &bad).is_err());
        let wide = SpecialFunctionConfig {
            recurrence_threshold: 12.0,
            series_terms: 10,
        };
        assert!((digamma_with(1.0, &wide).unwrap() + EULER_GAMMA).abs() < 1e-14);
    }
}
