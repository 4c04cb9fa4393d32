//! The Fourier-phase projective measurements for both parties.
//!
//! Alice's vector `k` for setting `a` has components
//! `exp(2 pi i m (k + alpha_a) / d) / sqrt(d)`, Bob's vector `l` for setting `b`
//! has components `exp(2 pi i n (-l + beta_b) / d) / sqrt(d)`, with
//! `alpha = (0, 1/2)` and `beta = (1/4, -1/4)`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::{Error, Result};

/// Bases with more outcomes than this are not materialized.
pub const MAX_DENSE_DIM: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Party {
    Alice,
    Bob,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Setting {
    One,
    Two,
}

impl Setting {
    pub const BOTH: [Setting; 2] = [Setting::One, Setting::Two];

    pub fn index(self) -> usize {
        match self {
            Setting::One => 0,
            Setting::Two => 1,
        }
    }

    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(Setting::One),
            2 => Some(Setting::Two),
            _ => None,
        }
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index() + 1)
    }
}

/// Phase offset in units of 1/4, so that every phase `m (k + offset)` is an
/// exact multiple of `1/4` and can be reduced modulo `d` in integers.
fn phase_quarters(party: Party, setting: Setting) -> i64 {
    match (party, setting) {
        (Party::Alice, Setting::One) => 0,
        (Party::Alice, Setting::Two) => 2,
        (Party::Bob, Setting::One) => 1,
        (Party::Bob, Setting::Two) => -1,
    }
}

/// `exp(2 pi i q / (4 d))` with `q` already reduced into `[0, 4d)`.
fn unit_phase(q: i64, d: usize) -> Complex64 {
    let angle = 2.0 * PI * q as f64 / (4 * d) as f64;
    Complex64::from_polar(1.0, angle)
}

/// `d` orthonormal vectors in `C^d`; `vectors[k][m] = <m|v_k>`.
#[derive(Debug, Clone)]
pub struct MeasurementBasis {
    d: usize,
    party: Party,
    setting: Setting,
    vectors: Vec<Vec<Complex64>>,
}

impl MeasurementBasis {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn party(&self) -> Party {
        self.party
    }

    pub fn setting(&self) -> Setting {
        self.setting
    }

    /// `alpha_a` for Alice, `beta_b` for Bob.
    pub fn phase(&self) -> f64 {
        phase_quarters(self.party, self.setting) as f64 / 4.0
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    pub fn vector(&self, k: usize) -> &[Complex64] {
        &self.vectors[k]
    }

    /// Max deviation of the Gram matrix from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (k, vk) in self.vectors.iter().enumerate() {
            for (l, vl) in self.vectors.iter().enumerate() {
                let ip: Complex64 = vk.iter().zip(vl).map(|(a, b)| a.conj() * b).sum();
                let target = if k == l { 1.0 } else { 0.0 };
                worst = worst.max((ip - target).norm());
            }
        }
        worst
    }

    /// Max deviation of `sum_k v_k v_k^dagger` from the identity.
    pub fn completeness_defect(&self) -> f64 {
        let d = self.d;
        let mut worst: f64 = 0.0;
        for m in 0..d {
            for n in 0..d {
                let s: Complex64 = self.vectors.iter().map(|v| v[m] * v[n].conj()).sum();
                let target = if m == n { 1.0 } else { 0.0 };
                worst = worst.max((s - target).norm());
            }
        }
        worst
    }
}

/// The conjectured-optimal basis for one party and setting.
pub fn best_basis(d: usize, party: Party, setting: Setting) -> Result<MeasurementBasis> {
    if d == 0 {
        return Err(Error::InvalidDimension {
            d,
            reason: "need at least one outcome",
        });
    }
    if d > MAX_DENSE_DIM {
        return Err(Error::BudgetExceeded {
            d,
            limit: MAX_DENSE_DIM,
        });
    }
    let offset = phase_quarters(party, setting);
    let modulus = 4 * d as i64;
    let norm = 1.0 / (d as f64).sqrt();
    let vectors = (0..d as i64)
        .map(|k| {
            // Alice: m (k + alpha); Bob: m (-k + beta). Both in quarter units.
            let per_m = match party {
                Party::Alice => 4 * k + offset,
                Party::Bob => -4 * k + offset,
            };
            (0..d as i64)
                .map(|m| unit_phase((m * per_m).rem_euclid(modulus), d) * norm)
                .collect()
        })
        .collect();
    Ok(MeasurementBasis {
        d,
        party,
        setting,
        vectors,
    })
}

/// All four bases for one `d`, indexed `[party][setting]`.
#[derive(Debug, Clone)]
pub struct BasisSet {
    alice: [MeasurementBasis; 2],
    bob: [MeasurementBasis; 2],
}

impl BasisSet {
    pub fn new(d: usize) -> Result<Self> {
        Ok(Self {
            alice: [
                best_basis(d, Party::Alice, Setting::One)?,
                best_basis(d, Party::Alice, Setting::Two)?,
            ],
            bob: [
                best_basis(d, Party::Bob, Setting::One)?,
                best_basis(d, Party::Bob, Setting::Two)?,
            ],
        })
    }

    pub fn alice(&self, setting: Setting) -> &MeasurementBasis {
        &self.alice[setting.index()]
    }

    pub fn bob(&self, setting: Setting) -> &MeasurementBasis {
        &self.bob[setting.index()]
    }
}
