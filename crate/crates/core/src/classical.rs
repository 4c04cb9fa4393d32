//! Deterministic local hidden-variable strategies.
//!
//! The Bell functional is linear in the probabilities and every local model is
//! a convex mixture of deterministic outcome assignments, so the local minimum
//! is attained on one of the `d^4` assignments enumerated here.

use rayon::prelude::*;

use crate::bell::{Behavior, JointDistribution};
use crate::measurements::Setting;
use crate::{Error, Result};

/// Largest `d` accepted by [`lhv_minimum`].
pub const MAX_ENUMERATION_DIM: usize = 40;

/// Fixed outcomes for each of the four measurements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeterministicStrategy {
    pub a1: usize,
    pub a2: usize,
    pub b1: usize,
    pub b2: usize,
}

impl DeterministicStrategy {
    pub fn new(d: usize, a1: usize, a2: usize, b1: usize, b2: usize) -> Result<Self> {
        if let Some(&bad) = [a1, a2, b1, b2].iter().find(|&&x| x >= d) {
            return Err(Error::ParameterOutOfRange {
                name: "deterministic outcome",
                value: bad as f64,
            });
        }
        Ok(Self { a1, a2, b1, b2 })
    }

    /// Strategy number `index` in lexicographic `(a1, a2, b1, b2)` order.
    fn from_index(d: usize, index: usize) -> Self {
        Self {
            a1: index / (d * d * d),
            a2: (index / (d * d)) % d,
            b1: (index / d) % d,
            b2: index % d,
        }
    }

    fn alice(&self, s: Setting) -> usize {
        match s {
            Setting::One => self.a1,
            Setting::Two => self.a2,
        }
    }

    fn bob(&self, s: Setting) -> usize {
        match s {
            Setting::One => self.b1,
            Setting::Two => self.b2,
        }
    }

    /// The point-mass behavior this strategy produces.
    pub fn behavior(&self, d: usize) -> Result<Behavior> {
        let table = |a: Setting, b: Setting| {
            let mut probs = vec![0.0; d * d];
            probs[self.alice(a) * d + self.bob(b)] = 1.0;
            JointDistribution::new(d, (a, b), probs)
        };
        use Setting::{One, Two};
        Behavior::new([
            [table(One, One)?, table(One, Two)?],
            [table(Two, One)?, table(Two, Two)?],
        ])
    }
}

/// `[a2 < b2] + [b2 < a1] + [a1 < b1] + [b1 <= a2]`.
pub fn lhv_value(s: &DeterministicStrategy) -> u32 {
    (s.a2 < s.b2) as u32 + (s.b2 < s.a1) as u32 + (s.a1 < s.b1) as u32 + (s.b1 <= s.a2) as u32
}

/// Minimum of [`lhv_value`] over all `d^4` strategies, with the
/// lexicographically smallest minimizer.
pub fn lhv_minimum(d: usize) -> Result<(u32, DeterministicStrategy)> {
    if d == 0 {
        return Err(Error::InvalidDimension {
            d,
            reason: "need at least one outcome",
        });
    }
    if d > MAX_ENUMERATION_DIM {
        return Err(Error::BudgetExceeded {
            d,
            limit: MAX_ENUMERATION_DIM,
        });
    }
    let count = d.pow(4);
    // Ties resolve to the smallest index, which is the lexicographic order.
    let (value, index) = (0..count)
        .into_par_iter()
        .map(|i| (lhv_value(&DeterministicStrategy::from_index(d, i)), i))
        .min()
        .expect("at least one strategy");
    Ok((value, DeterministicStrategy::from_index(d, index)))
}
