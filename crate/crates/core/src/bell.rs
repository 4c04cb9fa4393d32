//! Joint outcome probabilities and the Bell functional
//!
//! ```text
//! P(A2 < B2) + P(B2 < A1) + P(A1 < B1) + P(B1 <= A2)
//! ```
//!
//! evaluated either from the four joint distributions or from the closed form
//! `2 - (1/d) sum_{k,l} lambda_k lambda_l / cos(pi (k - l) / (2d))` that holds
//! for the Fourier measurements.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::measurements::{BasisSet, MeasurementBasis, Party, Setting};
use crate::states::{CompensatedSum, SchmidtState};
use crate::{Error, Result};

/// Tolerated negative rounding in a probability entry.
pub const NEGATIVE_PROB_TOL: f64 = 1e-12;
/// Tolerated deviation of the total mass from 1.
pub const MASS_TOL: f64 = 1e-12;

/// `P(k, l | a, b)` for one setting pair; `k` is Alice's outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    d: usize,
    settings: (Setting, Setting),
    probs: Vec<f64>,
}

impl JointDistribution {
    /// Validates non-negativity (up to rounding) and unit mass; `probs` is row-major.
    pub fn new(d: usize, settings: (Setting, Setting), probs: Vec<f64>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDimension {
                d,
                reason: "need at least one outcome",
            });
        }
        if probs.len() != d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                found: probs.len(),
            });
        }
        if let Some(&p) = probs
            .iter()
            .find(|&&p| !(p >= -NEGATIVE_PROB_TOL) || !p.is_finite())
        {
            return Err(Error::ParameterOutOfRange {
                name: "probability",
                value: p,
            });
        }
        let mass = probs.iter().copied().collect::<CompensatedSum>().value();
        if (mass - 1.0).abs() > MASS_TOL {
            return Err(Error::ParameterOutOfRange {
                name: "total probability",
                value: mass,
            });
        }
        Ok(Self { d, settings, probs })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn settings(&self) -> (Setting, Setting) {
        self.settings
    }

    pub fn prob(&self, k: usize, l: usize) -> f64 {
        self.probs[k * self.d + l]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Entries clamped to `max(0, p)`, for reporting only.
    pub fn clamped(&self) -> Vec<f64> {
        self.probs.iter().map(|&p| p.max(0.0)).collect()
    }

    pub fn total(&self) -> f64 {
        self.probs
            .iter()
            .copied()
            .collect::<CompensatedSum>()
            .value()
    }

    pub fn alice_marginal(&self) -> Vec<f64> {
        (0..self.d)
            .map(|k| self.probs[k * self.d..(k + 1) * self.d].iter().sum())
            .collect()
    }

    pub fn bob_marginal(&self) -> Vec<f64> {
        (0..self.d)
            .map(|l| (0..self.d).map(|k| self.prob(k, l)).sum())
            .collect()
    }

    fn sum_where(&self, pred: impl Fn(usize, usize) -> bool) -> f64 {
        let d = self.d;
        let mut acc = CompensatedSum::default();
        for k in 0..d {
            for l in 0..d {
                if pred(k, l) {
                    acc.add(self.probs[k * d + l]);
                }
            }
        }
        acc.value()
    }

    /// `P(A < B) = sum_{k < l} P(k, l)`.
    pub fn prob_alice_less(&self) -> f64 {
        self.sum_where(|k, l| k < l)
    }

    /// `P(B < A) = sum_{k > l} P(k, l)`.
    pub fn prob_bob_less(&self) -> f64 {
        self.sum_where(|k, l| l < k)
    }

    /// `P(B <= A) = sum_{k >= l} P(k, l)`.
    pub fn prob_bob_less_eq(&self) -> f64 {
        self.sum_where(|k, l| l <= k)
    }
}

/// Distinct real outcome labels `x_0 .. x_{d-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeValues {
    values: Vec<f64>,
}

impl OutcomeValues {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyVector);
        }
        for (i, a) in values.iter().enumerate() {
            if !a.is_finite() || values[..i].contains(a) {
                return Err(Error::ParameterOutOfRange {
                    name: "outcome value",
                    value: *a,
                });
            }
        }
        Ok(Self { values })
    }

    /// The CHSH labelling `x_0 = -1`, `x_1 = +1`.
    pub fn plus_minus_one() -> Self {
        Self {
            values: vec![-1.0, 1.0],
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Value of the Bell functional, in `[0, 4]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BellValue(f64);

impl BellValue {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// The four joint distributions of a two-setting experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Behavior {
    d: usize,
    // [alice setting][bob setting]
    tables: [[JointDistribution; 2]; 2],
}

impl Behavior {
    pub fn new(tables: [[JointDistribution; 2]; 2]) -> Result<Self> {
        let d = tables[0][0].d();
        for a in Setting::BOTH {
            for b in Setting::BOTH {
                let t = &tables[a.index()][b.index()];
                if t.d() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        found: t.d(),
                    });
                }
                if t.settings() != (a, b) {
                    return Err(Error::InvalidConfig(
                        "table stored under the wrong setting pair",
                    ));
                }
            }
        }
        Ok(Self { d, tables })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn table(&self, alice: Setting, bob: Setting) -> &JointDistribution {
        &self.tables[alice.index()][bob.index()]
    }

    /// Largest change of any single-party marginal across the other party's setting.
    pub fn signalling_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in Setting::BOTH {
            let m1 = self.table(a, Setting::One).alice_marginal();
            let m2 = self.table(a, Setting::Two).alice_marginal();
            worst = m1
                .iter()
                .zip(&m2)
                .fold(worst, |w, (x, y)| w.max((x - y).abs()));
        }
        for b in Setting::BOTH {
            let m1 = self.table(Setting::One, b).bob_marginal();
            let m2 = self.table(Setting::Two, b).bob_marginal();
            worst = m1
                .iter()
                .zip(&m2)
                .fold(worst, |w, (x, y)| w.max((x - y).abs()));
        }
        worst
    }
}

/// `P(k, l | a, b) = |sum_m lambda_m <v_k|m> <w_l|m>|^2` for the Fourier bases.
///
/// The product of Alice's vector `k` and Bob's vector `l` depends only on
/// `(k - l) mod d`, so the `d` distinct amplitudes are computed once, O(d^2) in total.
pub fn joint_distribution(
    state: &SchmidtState,
    alice: &MeasurementBasis,
    bob: &MeasurementBasis,
) -> Result<JointDistribution> {
    let d = state.dim();
    if alice.party() != Party::Alice || bob.party() != Party::Bob {
        return Err(Error::InvalidConfig(
            "bases passed in the wrong party order",
        ));
    }
    for found in [alice.d(), bob.d()] {
        if found != d {
            return Err(Error::DimensionMismatch { expected: d, found });
        }
    }
    let lambda = state.coefficients();
    let bob0 = bob.vector(0);
    let probs_by_shift: Vec<f64> = (0..d)
        .map(|j| {
            let amp: Complex64 = alice
                .vector(j)
                .iter()
                .zip(bob0)
                .zip(lambda)
                .map(|((a, b), &lam)| (a * b).conj() * lam)
                .sum();
            amp.norm_sqr()
        })
        .collect();
    let mut probs = Vec::with_capacity(d * d);
    for k in 0..d {
        for l in 0..d {
            probs.push(probs_by_shift[(k + d - l) % d]);
        }
    }
    Ok(JointDistribution {
        d,
        settings: (alice.setting(), bob.setting()),
        probs,
    })
}

/// All four joint distributions for `state` under the Fourier measurements.
pub fn quantum_behavior(state: &SchmidtState) -> Result<Behavior> {
    let bases = BasisSet::new(state.dim())?;
    let table = |a: Setting, b: Setting| joint_distribution(state, bases.alice(a), bases.bob(b));
    Behavior::new([
        [
            table(Setting::One, Setting::One)?,
            table(Setting::One, Setting::Two)?,
        ],
        [
            table(Setting::Two, Setting::One)?,
            table(Setting::Two, Setting::Two)?,
        ],
    ])
}

/// The Bell functional on an arbitrary behavior. Probabilities are used
/// unclamped.
pub fn bell_functional(behavior: &Behavior) -> f64 {
    use Setting::{One, Two};
    let mut acc = CompensatedSum::default();
    acc.add(behavior.table(Two, Two).prob_alice_less());
    acc.add(behavior.table(One, Two).prob_bob_less());
    acc.add(behavior.table(One, One).prob_alice_less());
    acc.add(behavior.table(Two, One).prob_bob_less_eq());
    acc.value()
}

/// Bell value of `state` from the four joint distributions.
pub fn bell_value(state: &SchmidtState, d: usize) -> Result<BellValue> {
    if state.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: state.dim(),
        });
    }
    Ok(BellValue(bell_functional(&quantum_behavior(state)?)))
}

/// `1 / cos(pi j / (2d))` for `j = 0 .. d-1`.
fn secant_row(d: usize) -> Vec<f64> {
    (0..d)
        .map(|j| 1.0 / (PI * j as f64 / (2 * d) as f64).cos())
        .collect()
}

/// Closed form `2 - (1/d) sum_{k,l} lambda_k lambda_l / cos(pi (k - l) / (2d))`, O(d^2).
pub fn closed_form(state: &SchmidtState) -> BellValue {
    let lambda = state.coefficients();
    let d = lambda.len();
    let sec = secant_row(d);
    let mut acc = CompensatedSum::default();
    for (k, &lk) in lambda.iter().enumerate() {
        for (l, &ll) in lambda.iter().enumerate() {
            acc.add(lk * ll * sec[k.abs_diff(l)]);
        }
    }
    BellValue(2.0 - acc.value() / d as f64)
}

/// Closed form through the FFT Toeplitz product, O(d log d).
pub fn closed_form_fast(state: &SchmidtState) -> BellValue {
    let kernel = crate::optimize::kernel(state.dim());
    BellValue(2.0 - crate::optimize::quadratic_form(&kernel, state.coefficients()))
}

/// `<A B> = sum_{k,l} x_k x_l P(k, l)`.
pub fn expectation(dist: &JointDistribution, outcomes: &OutcomeValues) -> Result<f64> {
    let x = outcomes.values();
    if x.len() != dist.d() {
        return Err(Error::DimensionMismatch {
            expected: dist.d(),
            found: x.len(),
        });
    }
    let mut acc = CompensatedSum::default();
    for (k, xk) in x.iter().enumerate() {
        for (l, xl) in x.iter().enumerate() {
            acc.add(xk * xl * dist.prob(k, l));
        }
    }
    Ok(acc.value())
}

/// CHSH sum, Bell functional and the residual of `S = 6 - 4 * lhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshCheck {
    pub s: f64,
    pub lhs: f64,
    pub residual: f64,
}

/// Compares the CHSH sum `<A2B2> + <A1B2> + <A1B1> - <A2B1>` (outcomes -1, +1)
/// against the Bell functional.
///
/// `S = 6 - 4 * lhs` holds for every no-signalling behavior: the identity
/// needs `P(0,1) - P(1,0)` to equal the difference of the marginals, and those
/// differences cancel around the four setting pairs.
pub fn chsh_identity_check(behavior: &Behavior) -> Result<ChshCheck> {
    use Setting::{One, Two};
    if behavior.d() != 2 {
        return Err(Error::InvalidDimension {
            d: behavior.d(),
            reason: "CHSH correspondence needs two outcomes",
        });
    }
    let x = OutcomeValues::plus_minus_one();
    let e = |a, b| expectation(behavior.table(a, b), &x);
    let s = e(Two, Two)? + e(One, Two)? + e(One, One)? - e(Two, One)?;
    let lhs = bell_functional(behavior);
    Ok(ChshCheck {
        s,
        lhs,
        residual: s - (6.0 - 4.0 * lhs),
    })
}
