//! Schmidt-decomposed bipartite pure states `sum_k lambda_k |kk>`.

use crate::{Error, Result};

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Non-negative, unit-norm Schmidt coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtState {
    coefficients: Vec<f64>,
}

impl SchmidtState {
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn dim(&self) -> usize {
        self.coefficients.len()
    }

    /// `sum_k lambda_k^2`, compensated.
    pub fn norm_sqr(&self) -> f64 {
        self.coefficients
            .iter()
            .map(|c| c * c)
            .collect::<CompensatedSum>()
            .value()
    }

    pub fn is_palindromic(&self, tol: f64) -> bool {
        let c = &self.coefficients;
        let d = c.len();
        (0..d / 2).all(|k| (c[k] - c[d - 1 - k]).abs() <= tol)
    }

    pub fn into_coefficients(self) -> Vec<f64> {
        self.coefficients
    }
}

/// Rescales `coefficients` to unit 2-norm.
pub fn make_state(coefficients: &[f64]) -> Result<SchmidtState> {
    if coefficients.is_empty() {
        return Err(Error::EmptyVector);
    }
    for (index, &value) in coefficients.iter().enumerate() {
        if !(value >= 0.0) || !value.is_finite() {
            return Err(Error::NegativeCoefficient { index, value });
        }
    }
    // Scale by the max first so tiny or huge inputs do not under/overflow.
    let max = coefficients.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return Err(Error::ZeroVector);
    }
    let norm = coefficients
        .iter()
        .map(|&c| (c / max) * (c / max))
        .collect::<CompensatedSum>()
        .value()
        .sqrt();
    let scale = 1.0 / (max * norm);
    Ok(SchmidtState {
        coefficients: coefficients.iter().map(|&c| c * scale).collect(),
    })
}

/// Uniform coefficients `1/sqrt(d)`.
pub fn maximally_entangled(d: usize) -> Result<SchmidtState> {
    if d == 0 {
        return Err(Error::InvalidDimension {
            d,
            reason: "need at least one outcome",
        });
    }
    Ok(SchmidtState {
        coefficients: vec![1.0 / (d as f64).sqrt(); d],
    })
}

/// Unnormalized squared weight `1 / ((k + 1)(d - k))` of the approximate state.
///
/// The integer product is symmetric under `k -> d - 1 - k`, so the weights are
/// exactly palindromic.
#[inline]
fn approximate_weight(d: usize, k: usize) -> f64 {
    1.0 / (((k as u64 + 1) * (d - k) as u64) as f64)
}

/// The approximate optimal state, `lambda_k ∝ 1 / sqrt((k + 1)(d - k))`.
pub fn approximate_state(d: usize) -> Result<SchmidtState> {
    if d == 0 {
        return Err(Error::InvalidDimension {
            d,
            reason: "need at least one outcome",
        });
    }
    let total = (0..d)
        .map(|k| approximate_weight(d, k))
        .collect::<CompensatedSum>()
        .value();
    Ok(SchmidtState {
        coefficients: (0..d)
            .map(|k| (approximate_weight(d, k) / total).sqrt())
            .collect(),
    })
}

/// Logarithm base used when reporting raw entropies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    #[default]
    Natural,
    Base2,
}

impl LogBase {
    /// Converts a value in nats into this base.
    pub fn from_nats(self, nats: f64) -> f64 {
        match self {
            LogBase::Natural => nats,
            LogBase::Base2 => nats / std::f64::consts::LN_2,
        }
    }
}

/// Entanglement entropy `-sum_k lambda_k^2 ln lambda_k^2` in nats, with `0 ln 0 = 0`.
pub fn entropy(state: &SchmidtState) -> f64 {
    let s = state
        .coefficients
        .iter()
        .filter(|&&c| c > 0.0)
        .map(|&c| {
            let p = c * c;
            -p * p.ln()
        })
        .collect::<CompensatedSum>()
        .value();
    // Rounding can push a pure product state to -0.0 or a hair below zero.
    s.max(0.0)
}

pub fn entropy_in(state: &SchmidtState, base: LogBase) -> f64 {
    base.from_nats(entropy(state))
}

/// Entropy of `approximate_state(d)` in nats, streamed in O(d) time and O(1) memory.
///
/// With weights `w_k = 1/((k+1)(d-k))` and `N = sum_k w_k`,
/// `E = ln N - (1/N) sum_k w_k ln w_k`.
pub fn approximate_entropy(d: usize) -> Result<f64> {
    if d == 0 {
        return Err(Error::InvalidDimension {
            d,
            reason: "need at least one outcome",
        });
    }
    let mut total = CompensatedSum::default();
    let mut weighted_log = CompensatedSum::default();
    for k in 0..d {
        let w = approximate_weight(d, k);
        total.add(w);
        // ln w_k = -ln(k+1) - ln(d-k)
        weighted_log.add(-w * (((k + 1) as f64).ln() + ((d - k) as f64).ln()));
    }
    let n = total.value();
    Ok((n.ln() - weighted_log.value() / n).max(0.0))
}

/// `(d, E(psi_d) / ln d)` for the approximate state at each `d`.
pub fn entropy_ratio_sweep(d_values: &[usize]) -> Result<Vec<(usize, f64)>> {
    use rayon::prelude::*;

    if let Some(&d) = d_values.iter().find(|&&d| d < 2) {
        return Err(Error::InvalidDimension {
            d,
            reason: "entropy ratio needs d >= 2",
        });
    }
    d_values
        .par_iter()
        .map(|&d| Ok((d, approximate_entropy(d)? / (d as f64).ln())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn make_state_examples() {
        assert_eq!(make_state(&[1.0, 0.0]).unwrap().coefficients(), &[1.0, 0.0]);
        let s = make_state(&[1.0, 1.0]).unwrap();
        for &c in s.coefficients() {
            assert!((c - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        }
        let s = make_state(&[3.0, 4.0]).unwrap();
        assert!((s.coefficients()[0] - 0.6).abs() < 1e-15);
        assert!((s.coefficients()[1] - 0.8).abs() < 1e-15);
    }

    #[test]
    fn make_state_errors() {
        assert!(matches!(make_state(&[]), Err(Error::EmptyVector)));
        assert!(matches!(
            make_state(&[1.0, -0.5]),
            Err(Error::NegativeCoefficient { index: 1, .. })
        ));
        assert!(matches!(make_state(&[0.0, 0.0]), Err(Error::ZeroVector)));
        assert!(make_state(&[f64::NAN]).is_err());
    }

    #[test]
    fn approximate_state_small_d() {
        assert_eq!(approximate_state(1).unwrap().coefficients(), &[1.0]);

        let s2 = approximate_state(2).unwrap();
        for &c in s2.coefficients() {
            assert!((c - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        }

        let s3 = approximate_state(3).unwrap();
        let n = (11.0f64 / 12.0).sqrt();
        let expected = [1.0 / 3f64.sqrt() / n, 0.5 / n, 1.0 / 3f64.sqrt() / n];
        for (c, e) in s3.coefficients().iter().zip(expected) {
            assert!((c - e).abs() < 1e-15);
        }

        assert!(matches!(
            approximate_state(0),
            Err(Error::InvalidDimension { .. })
        ));
    }

    #[test]
    fn approximate_state_large_d_normalized_and_palindromic() {
        let s = approximate_state(1_000_000).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() <= 1e-12);
        assert!(s.is_palindromic(0.0));
    }

    #[test]
    fn entropy_examples() {
        let product = make_state(&[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(entropy(&product), 0.0);

        for d in [2usize, 5, 64] {
            let e = entropy(&maximally_entangled(d).unwrap());
            assert!((e - (d as f64).ln()).abs() < 1e-13);
            let bits = entropy_in(&maximally_entangled(d).unwrap(), LogBase::Base2);
            assert!((bits - (d as f64).log2()).abs() < 1e-13);
        }
    }

    #[test]
    fn entropy_of_approximate_state_d3() {
        // p = (4/11, 3/11, 4/11); -sum p ln p evaluated with 30-digit arithmetic.
        let expected = 1.090_059_658_710_783_8;
        let e = entropy(&approximate_state(3).unwrap());
        assert!((e - expected).abs() < 1e-14, "{e}");
    }

    #[test]
    fn streamed_entropy_matches_direct_sum() {
        for d in [2usize, 3, 10, 1000, 100_000] {
            let direct = entropy(&approximate_state(d).unwrap());
            let streamed = approximate_entropy(d).unwrap();
            assert!((direct - streamed).abs() < 1e-12, "d = {d}");
        }
    }

    #[test]
    fn ratio_sweep() {
        let r = entropy_ratio_sweep(&[2]).unwrap();
        assert!((r[0].1 - 1.0).abs() < 1e-14);
        assert!(entropy_ratio_sweep(&[1]).is_err());

        let grid = [100, 1_000, 10_000, 100_000, 1_000_000];
        let r = entropy_ratio_sweep(&grid).unwrap();
        for w in r.windows(2) {
            assert!(w[1].1 < w[0].1);
        }
        assert!(r.iter().all(|&(_, x)| x > 0.5));
    }

    proptest! {
        #[test]
        fn constructor_output_is_normalized(v in prop::collection::vec(0.0f64..1e3, 1..64)) {
            prop_assume!(v.iter().any(|&x| x > 0.0));
            let s = make_state(&v).unwrap();
            prop_assert!((s.norm_sqr() - 1.0).abs() <= 1e-12);
            prop_assert!(s.coefficients().iter().all(|&c| c >= 0.0));
        }

        #[test]
        fn entropy_bounds(v in prop::collection::vec(0.0f64..1.0, 1..64)) {
            prop_assume!(v.iter().any(|&x| x > 0.0));
            let s = make_state(&v).unwrap();
            let e = entropy(&s);
            prop_assert!(e >= 0.0);
            prop_assert!(e <= (s.dim() as f64).ln() + 1e-12);
        }

        #[test]
        fn approximate_state_palindrome(d in 1usize..2000) {
            let s = approximate_state(d).unwrap();
            prop_assert!(s.is_palindromic(0.0));
            prop_assert!((s.norm_sqr() - 1.0).abs() <= 1e-12);
        }
    }
}
