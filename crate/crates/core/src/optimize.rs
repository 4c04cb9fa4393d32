//! Optimal Schmidt state for the Fourier measurements.
//!
//! Minimizing the closed-form Bell value over unit vectors is maximizing the
//! quadratic form `lambda^T K lambda` with the symmetric Toeplitz kernel
//! `K_{kl} = 1 / (d cos(pi (k - l) / (2d)))`. `K` is entrywise positive, so its
//! principal eigenvector is positive (Perron-Frobenius) and power iteration from
//! the uniform vector stays in the positive cone. The Bell value at the optimum
//! is `2 - mu` where `mu` is the top eigenvalue.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::states::{
    approximate_entropy, approximate_state, entropy, make_state, CompensatedSum, SchmidtState,
};
use crate::{Error, Result};

/// Largest `d` accepted by [`violation_sweep`].
pub const MAX_SWEEP_DIM: usize = 1 << 20;

/// Below this size [`MatvecStrategy::Auto`] uses the direct product.
const AUTO_FFT_THRESHOLD: usize = 128;

/// First row of the symmetric Toeplitz kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzKernel {
    first_row: Vec<f64>,
}

impl ToeplitzKernel {
    pub fn d(&self) -> usize {
        self.first_row.len()
    }

    pub fn first_row(&self) -> &[f64] {
        &self.first_row
    }

    /// `K_{kl}`.
    pub fn entry(&self, k: usize, l: usize) -> f64 {
        self.first_row[k.abs_diff(l)]
    }
}

/// `first_row[j] = 1 / (d cos(pi j / (2d)))`.
pub fn kernel(d: usize) -> ToeplitzKernel {
    let df = d as f64;
    ToeplitzKernel {
        first_row: (0..d)
            .map(|j| 1.0 / (df * (PI * j as f64 / (2.0 * df)).cos()))
            .collect(),
    }
}

fn check_len(kernel: &ToeplitzKernel, v: &[f64]) -> Result<()> {
    if v.len() != kernel.d() {
        return Err(Error::DimensionMismatch {
            expected: kernel.d(),
            found: v.len(),
        });
    }
    Ok(())
}

/// Direct O(d^2) product `(K v)_k = sum_l first_row[|k - l|] v_l`.
pub fn matvec_naive(kernel: &ToeplitzKernel, v: &[f64]) -> Result<Vec<f64>> {
    check_len(kernel, v)?;
    Ok(naive_product(&kernel.first_row, v))
}

fn naive_product(row: &[f64], v: &[f64]) -> Vec<f64> {
    let d = row.len();
    (0..d)
        .map(|k| (0..d).map(|l| row[k.abs_diff(l)] * v[l]).sum())
        .collect()
}

/// O(d log d) product through [`CirculantEmbedding`].
pub fn matvec_fft(kernel: &ToeplitzKernel, v: &[f64]) -> Result<Vec<f64>> {
    check_len(kernel, v)?;
    Ok(CirculantEmbedding::new(kernel).apply(v))
}

/// The Toeplitz kernel embedded in a circulant matrix of size `n`, the
/// smallest power of two with `n >= 2d - 1`, with its spectrum precomputed.
pub struct CirculantEmbedding {
    d: usize,
    n: usize,
    // Real because the embedded circulant is symmetric; already scaled by 1/n.
    spectrum: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl CirculantEmbedding {
    pub fn new(kernel: &ToeplitzKernel) -> Self {
        let d = kernel.d();
        let n = (2 * d - 1).next_power_of_two();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);

        let mut column = vec![Complex64::new(0.0, 0.0); n];
        for (j, &r) in kernel.first_row.iter().enumerate() {
            column[j].re = r;
            if j > 0 {
                column[n - j].re = r;
            }
        }
        forward.process(&mut column);
        let scale = 1.0 / n as f64;
        let spectrum = column.iter().map(|c| c.re * scale).collect();

        Self {
            d,
            n,
            spectrum,
            forward,
            inverse,
        }
    }

    pub fn embedding_size(&self) -> usize {
        self.n
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let mut buf = Vec::new();
        let mut out = vec![0.0; self.d];
        self.apply_into(v, &mut buf, &mut out);
        out
    }

    /// `out = K v`, reusing `buf` as FFT workspace.
    pub fn apply_into(&self, v: &[f64], buf: &mut Vec<Complex64>, out: &mut [f64]) {
        debug_assert_eq!(v.len(), self.d);
        buf.clear();
        buf.extend(v.iter().map(|&x| Complex64::new(x, 0.0)));
        buf.resize(self.n, Complex64::new(0.0, 0.0));
        self.forward.process(buf);
        for (b, &s) in buf.iter_mut().zip(&self.spectrum) {
            *b *= s;
        }
        self.inverse.process(buf);
        for (o, b) in out.iter_mut().zip(buf.iter()) {
            *o = b.re;
        }
    }
}

/// How [`optimal_state`] multiplies by the kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatvecStrategy {
    #[default]
    Auto,
    Naive,
    Fft,
}

enum Operator {
    Naive(Vec<f64>),
    Fft(CirculantEmbedding, Vec<Complex64>),
}

impl Operator {
    fn new(kernel: &ToeplitzKernel, strategy: MatvecStrategy) -> Self {
        let use_fft = match strategy {
            MatvecStrategy::Naive => false,
            MatvecStrategy::Fft => true,
            MatvecStrategy::Auto => kernel.d() > AUTO_FFT_THRESHOLD,
        };
        if use_fft {
            Operator::Fft(CirculantEmbedding::new(kernel), Vec::new())
        } else {
            Operator::Naive(kernel.first_row.clone())
        }
    }

    fn apply(&mut self, v: &[f64], out: &mut [f64]) {
        match self {
            Operator::Naive(row) => out.copy_from_slice(&naive_product(row, v)),
            Operator::Fft(emb, buf) => emb.apply_into(v, buf, out),
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x * y)
        .collect::<CompensatedSum>()
        .value()
}

/// `v^T K v`.
pub fn quadratic_form(kernel: &ToeplitzKernel, v: &[f64]) -> f64 {
    let mut op = Operator::new(kernel, MatvecStrategy::Auto);
    let mut kv = vec![0.0; v.len()];
    op.apply(v, &mut kv);
    dot(v, &kv)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerIterationConfig {
    /// Stop once `||K v - mu v|| <= tol * mu`.
    pub tol: f64,
    pub max_iter: usize,
    pub strategy: MatvecStrategy,
}

impl Default for PowerIterationConfig {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 100_000,
            strategy: MatvecStrategy::Auto,
        }
    }
}

/// Principal eigenpair of the kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    pub eigenvalue: f64,
    pub eigenvector: SchmidtState,
    pub iterations: usize,
    /// `||K v - mu v||_2`.
    pub residual: f64,
    pub converged: bool,
}

impl EigenResult {
    /// Bell value at this state, `2 - mu`.
    pub fn bell_value(&self) -> f64 {
        2.0 - self.eigenvalue
    }
}

/// Power iteration from the uniform vector with the default matvec strategy.
pub fn optimal_state(d: usize, tol: f64, max_iter: usize) -> Result<EigenResult> {
    optimal_state_with(
        d,
        &PowerIterationConfig {
            tol,
            max_iter,
            ..Default::default()
        },
    )
}

pub fn optimal_state_with(d: usize, config: &PowerIterationConfig) -> Result<EigenResult> {
    if d == 0 {
        return Err(Error::InvalidDimension {
            d,
            reason: "need at least one outcome",
        });
    }
    if !(config.tol > 0.0) {
        return Err(Error::ParameterOutOfRange {
            name: "tol",
            value: config.tol,
        });
    }
    if config.max_iter == 0 {
        return Err(Error::InvalidConfig("max_iter must be positive"));
    }

    let k = kernel(d);
    let mut op = Operator::new(&k, config.strategy);
    let mut v = vec![1.0 / (d as f64).sqrt(); d];
    let mut kv = vec![0.0; d];
    let mut mu = 0.0;
    let mut residual = f64::INFINITY;

    for iteration in 1..=config.max_iter {
        op.apply(&v, &mut kv);
        mu = dot(&v, &kv);
        residual = kv
            .iter()
            .zip(&v)
            .map(|(w, x)| (w - mu * x).powi(2))
            .collect::<CompensatedSum>()
            .value()
            .sqrt();
        if residual <= config.tol * mu {
            return Ok(EigenResult {
                eigenvalue: mu,
                eigenvector: make_state(&v)?,
                iterations: iteration,
                residual,
                converged: true,
            });
        }
        let norm = dot(&kv, &kv).sqrt();
        for (x, w) in v.iter_mut().zip(&kv) {
            *x = w / norm;
        }
    }

    Err(Error::MaxIterationsExceeded {
        best: Box::new(EigenResult {
            eigenvalue: mu,
            eigenvector: make_state(&v)?,
            iterations: config.max_iter,
            residual,
            converged: false,
        }),
    })
}

/// One row of a violation sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViolationPoint {
    pub d: usize,
    pub a_optimal: f64,
    pub a_approximate: f64,
    pub eigenvalue: f64,
    pub iterations: usize,
    pub residual: f64,
}

/// Minimal Bell value for the optimal and the approximate state at each `d`.
/// Results keep the input order.
pub fn violation_sweep(
    d_values: &[usize],
    config: &PowerIterationConfig,
) -> Result<Vec<ViolationPoint>> {
    if let Some(&d) = d_values.iter().find(|&&d| d > MAX_SWEEP_DIM) {
        return Err(Error::BudgetExceeded {
            d,
            limit: MAX_SWEEP_DIM,
        });
    }
    d_values
        .par_iter()
        .map(|&d| {
            let opt = optimal_state_with(d, config)?;
            let approx = approximate_state(d)?;
            let k = kernel(d);
            // Both values through the same quadratic form, so equal states compare equal.
            let a_optimal = 2.0 - quadratic_form(&k, opt.eigenvector.coefficients());
            let a_approximate = 2.0 - quadratic_form(&k, approx.coefficients());
            Ok(ViolationPoint {
                d,
                a_optimal,
                a_approximate,
                eigenvalue: opt.eigenvalue,
                iterations: opt.iterations,
                residual: opt.residual,
            })
        })
        .collect()
}

/// Entanglement entropies (nats) of the optimal and approximate states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyPoint {
    pub d: usize,
    pub entropy_optimal: f64,
    pub entropy_approx: f64,
    /// `entropy_optimal / ln d`.
    pub ratio_optimal: f64,
    pub ratio_approx: f64,
}

/// Entropy of the optimal and approximate states over `d_values`, each `d >= 2`.
pub fn entropy_sweep(
    d_values: &[usize],
    config: &PowerIterationConfig,
) -> Result<Vec<EntropyPoint>> {
    if let Some(&d) = d_values.iter().find(|&&d| d < 2) {
        return Err(Error::InvalidDimension {
            d,
            reason: "entropy ratio needs d >= 2",
        });
    }
    if let Some(&d) = d_values.iter().find(|&&d| d > MAX_SWEEP_DIM) {
        return Err(Error::BudgetExceeded {
            d,
            limit: MAX_SWEEP_DIM,
        });
    }
    d_values
        .par_iter()
        .map(|&d| {
            let opt = optimal_state_with(d, config)?;
            let e_opt = entropy(&opt.eigenvector);
            let e_approx = approximate_entropy(d)?;
            let ln_d = (d as f64).ln();
            Ok(EntropyPoint {
                d,
                entropy_optimal: e_opt,
                entropy_approx: e_approx,
                ratio_optimal: e_opt / ln_d,
                ratio_approx: e_approx / ln_d,
            })
        })
        .collect()
}
