//! Maximal quantum violations of the generalized CGLMP Bell inequality in the
//! two-party, two-setting, `d`-outcome scenario.
//!
//! The Bell functional studied here is
//!
//! ```text
//! P(A2 < B2) + P(B2 < A1) + P(A1 < B1) + P(B1 <= A2)
//! ```
//!
//! which is bounded below by 1 for local hidden-variable models and by 0 for
//! quantum correlations as `d -> infinity`. The crate provides
//!
//! * Schmidt states, the approximate optimal state and entanglement entropy ([`states`]),
//! * the Fourier measurement bases ([`measurements`]),
//! * joint probabilities, the Bell functional and its closed form ([`bell`]),
//! * exhaustive enumeration of deterministic local strategies ([`classical`]),
//! * the optimal state as the Perron eigenvector of a Toeplitz kernel ([`optimize`]),
//! * the continuum functional and its lower bounds ([`continuum`]),
//! * gamma and digamma ([`special`]),
//! * a self-contained invariant suite ([`verify`]).

// `!(x > 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bell;
pub mod classical;
pub mod continuum;
mod error;
pub mod measurements;
pub mod optimize;
pub mod sampling;
pub mod special;
pub mod states;
pub mod verify;

pub use error::{Error, Result};
