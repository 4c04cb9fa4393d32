//! Seeded random inputs for the invariant checks.

use rand::Rng;

use crate::bell::{Behavior, JointDistribution};
use crate::measurements::Setting;
use crate::states::{make_state, SchmidtState};
use crate::Result;

/// `d` i.i.d. uniform `[0, 1)` entries, normalized.
pub fn random_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<SchmidtState> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.gen::<f64>()).collect();
        match make_state(&v) {
            Err(crate::Error::ZeroVector) => continue,
            other => return other,
        }
    }
}

/// The 24 vertices of the two-outcome no-signalling polytope: 16 deterministic
/// local boxes and 8 PR boxes. Each vertex is `P[x][y][k][l]`.
fn no_signalling_vertices() -> Vec<[[[[f64; 2]; 2]; 2]; 2]> {
    let mut out = Vec::with_capacity(24);
    for bits in 0..16u8 {
        let (a0, a1, b0, b1) = (bits & 1, (bits >> 1) & 1, (bits >> 2) & 1, (bits >> 3) & 1);
        let mut p = [[[[0.0; 2]; 2]; 2]; 2];
        for x in 0..2 {
            for y in 0..2 {
                let k = [a0, a1][x] as usize;
                let l = [b0, b1][y] as usize;
                p[x][y][k][l] = 1.0;
            }
        }
        out.push(p);
    }
    for bits in 0..8u8 {
        let (alpha, beta, gamma) = (bits & 1, (bits >> 1) & 1, (bits >> 2) & 1);
        let mut p = [[[[0.0; 2]; 2]; 2]; 2];
        for x in 0..2u8 {
            for y in 0..2u8 {
                let parity = (x & y) ^ (alpha & x) ^ (beta & y) ^ gamma;
                for k in 0..2u8 {
                    p[x as usize][y as usize][k as usize][(k ^ parity) as usize] = 0.5;
                }
            }
        }
        out.push(p);
    }
    out
}

/// A uniformly weighted (flat Dirichlet) mixture of the no-signalling vertices, `d = 2`.
pub fn random_no_signalling_behavior<R: Rng + ?Sized>(rng: &mut R) -> Behavior {
    let vertices = no_signalling_vertices();
    let weights: Vec<f64> = vertices
        .iter()
        .map(|_| -(1.0 - rng.gen::<f64>()).ln())
        .collect();
    let total: f64 = weights.iter().sum();

    let mut mix = [[[[0.0; 2]; 2]; 2]; 2];
    for (v, w) in vertices.iter().zip(&weights) {
        for x in 0..2 {
            for y in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        mix[x][y][k][l] += w / total * v[x][y][k][l];
                    }
                }
            }
        }
    }
    let table = |a: Setting, b: Setting| {
        let p = mix[a.index()][b.index()];
        JointDistribution::new(2, (a, b), vec![p[0][0], p[0][1], p[1][0], p[1][1]])
            .expect("convex mixture of normalized vertices is normalized")
    };
    use Setting::{One, Two};
    Behavior::new([
        [table(One, One), table(One, Two)],
        [table(Two, One), table(Two, Two)],
    ])
    .expect("tables built with matching settings")
}

/// Four independent uniformly distributed `d x d` tables. These are generally
/// signalling.
pub fn random_behavior<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<Behavior> {
    let mut table = |a: Setting, b: Setting| {
        let w: Vec<f64> = (0..d * d).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
        let total: f64 = w.iter().sum();
        JointDistribution::new(d, (a, b), w.iter().map(|x| x / total).collect())
    };
    use Setting::{One, Two};
    let t11 = table(One, One)?;
    let t12 = table(One, Two)?;
    let t21 = table(Two, One)?;
    let t22 = table(Two, Two)?;
    Behavior::new([[t11, t12], [t21, t22]])
}
