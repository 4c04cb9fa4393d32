//! Seeded invariant suite. Output contains no timings, so two runs with the
//! same configuration produce identical reports.

use std::f64::consts::SQRT_2;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bell::{self, chsh_identity_check, quantum_behavior};
use crate::classical::{lhv_minimum, lhv_value};
use crate::continuum::{self, ContinuumAnsatz, QuadratureSpec};
use crate::measurements::{best_basis, Party, Setting};
use crate::optimize::{self, PowerIterationConfig};
use crate::sampling::{random_no_signalling_behavior, random_state};
use crate::special::{digamma, gamma_fn};
use crate::states::{self, approximate_state, maximally_entangled};
use crate::Result;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub states_per_dim: usize,
    pub chsh_samples: usize,
    /// Grid for the tightness trend; must be increasing.
    pub violation_grid: Vec<usize>,
    /// `d` at which the FFT power iteration must reach `large_d_residual`.
    pub large_d: usize,
    pub large_d_residual: f64,
    pub entropy_grid: Vec<usize>,
    pub continuum_deltas: Vec<f64>,
    pub quadrature: QuadratureSpec,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        let mut violation_grid: Vec<usize> = (1..=14).map(|k| 1usize << k).collect();
        violation_grid.push(100_000);
        Self {
            seed: 42,
            states_per_dim: 100,
            chsh_samples: 100,
            violation_grid,
            large_d: 100_000,
            large_d_residual: 1e-9,
            entropy_grid: vec![100, 1_000, 10_000, 100_000, 1_000_000, 10_000_000],
            continuum_deltas: vec![0.2, 0.1, 0.05, 0.02],
            quadrature: QuadratureSpec::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerificationReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    fn push(&mut self, name: &'static str, passed: bool, detail: String) {
        self.checks.push(CheckOutcome {
            name,
            passed,
            detail,
        });
    }

    /// Records a check whose computation itself failed.
    fn push_result(&mut self, name: &'static str, r: Result<(bool, String)>) {
        match r {
            Ok((passed, detail)) => self.push(name, passed, detail),
            Err(e) => self.push(name, false, format!("error: {e}")),
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        writeln!(
            f,
            "{} of {} checks passed",
            self.checks.len() - self.failures(),
            self.checks.len()
        )
    }
}

pub fn run(config: &VerifyConfig) -> VerificationReport {
    let mut report = VerificationReport::default();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    report.push_result("special functions", special_functions());
    report.push_result("measurement bases", measurement_bases());
    report.push_result("d=2 headline value", headline_d2());
    report.push_result(
        "closed form vs probabilities",
        oracle_equivalence(config, &mut rng),
    );
    report.push_result("local bound", local_bound());
    report.push_result("CHSH correspondence", chsh(config, &mut rng));
    report.push_result("toeplitz fft matvec", fft_equivalence(&mut rng));
    report.push_result("tightness trend", tightness(config));
    report.push_result("large-d power iteration", large_d(config));
    report.push_result("entropy asymptote", entropy_trend(config));
    report.push_result("continuum functional", continuum_trend(config));
    report.push_result("lower-bound chain", lower_bound_chain(config));
    report
}

fn special_functions() -> Result<(bool, String)> {
    let e1 = (digamma(1.0)? + EULER_GAMMA).abs();
    let ehalf = (digamma(0.5)? + EULER_GAMMA + 2.0 * std::f64::consts::LN_2).abs();
    let mut rec: f64 = 0.0;
    for z in [0.1, 0.5, 1.5, 7.3] {
        rec = rec.max((digamma(z + 1.0)? - digamma(z)? - 1.0 / z).abs());
    }
    let mut refl: f64 = 0.0;
    for i in 1..20 {
        let z = i as f64 / 20.0;
        let want = std::f64::consts::PI / (std::f64::consts::PI * z).sin();
        refl = refl.max(((gamma_fn(z)? * gamma_fn(1.0 - z)? - want) / want).abs());
    }
    let passed = e1 <= 1e-12 && ehalf <= 1e-12 && rec <= 1e-13 && refl <= 1e-12;
    Ok((
        passed,
        format!("psi(1) err {e1:.2e}, psi(1/2) err {ehalf:.2e}, recurrence {rec:.2e}, gamma reflection {refl:.2e}"),
    ))
}

fn measurement_bases() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for d in [1usize, 2, 3, 8, 31, 128] {
        for party in [Party::Alice, Party::Bob] {
            for s in Setting::BOTH {
                let b = best_basis(d, party, s)?;
                worst = worst
                    .max(b.orthonormality_defect())
                    .max(b.completeness_defect());
            }
        }
    }
    Ok((
        worst <= 1e-12,
        format!("max orthonormality/completeness defect {worst:.2e}"),
    ))
}

fn headline_d2() -> Result<(bool, String)> {
    let target = (3.0 - SQRT_2) / 2.0;
    let opt = optimize::optimal_state(2, 1e-12, 100_000)?;
    let me = bell::bell_value(&maximally_entangled(2)?, 2)?.value();
    let e_opt = (opt.bell_value() - target).abs();
    let e_me = (me - target).abs();
    Ok((
        e_opt <= 1e-10 && e_me <= 1e-10,
        format!(
            "A_2 = {:.15}, target {target:.15}, maximally entangled {me:.15}",
            opt.bell_value()
        ),
    ))
}

fn oracle_equivalence(config: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    let mut min_value = f64::INFINITY;
    for d in 2..=8 {
        for _ in 0..config.states_per_dim {
            let s = random_state(d, rng)?;
            let direct = bell::bell_value(&s, d)?.value();
            worst = worst.max((direct - bell::closed_form(&s).value()).abs());
            min_value = min_value.min(direct);
        }
    }
    Ok((
        worst <= 1e-10 && min_value >= 0.0,
        format!(
            "d = 2..8, {} states each, max |direct - closed| {worst:.2e}",
            config.states_per_dim
        ),
    ))
}

fn local_bound() -> Result<(bool, String)> {
    let mut parts = Vec::new();
    let mut ok = true;
    for d in [1usize, 2, 3, 4, 8] {
        let (min, w) = lhv_minimum(d)?;
        ok &= min == 1 && lhv_value(&w) == 1;
        parts.push(format!(
            "d={d}: min={min} at ({},{},{},{})",
            w.a1, w.a2, w.b1, w.b2
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn chsh(config: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for _ in 0..config.chsh_samples {
        let beh = random_no_signalling_behavior(rng);
        worst = worst.max(chsh_identity_check(&beh)?.residual.abs());
    }
    let q = chsh_identity_check(&quantum_behavior(&maximally_entangled(2)?)?)?;
    let s_err = (q.s - 2.0 * SQRT_2).abs();
    Ok((
        worst <= 1e-12 && s_err <= 1e-10 && q.residual.abs() <= 1e-12,
        format!(
            "{} no-signalling samples, max residual {worst:.2e}; quantum S = {:.15}",
            config.chsh_samples, q.s
        ),
    ))
}

fn fft_equivalence(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    use rand::Rng;
    let mut worst: f64 = 0.0;
    for d in [1usize, 2, 3, 64, 777, 2048, 4096] {
        let k = optimize::kernel(d);
        let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let a = optimize::matvec_naive(&k, &v)?;
        let b = optimize::matvec_fft(&k, &v)?;
        let dev = a
            .iter()
            .zip(&b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        worst = worst.max(dev / norm.max(f64::MIN_POSITIVE));
    }
    Ok((
        worst <= 1e-10,
        format!("max relative deviation {worst:.2e} for d <= 4096"),
    ))
}

fn tightness(config: &VerifyConfig) -> Result<(bool, String)> {
    let pts = optimize::violation_sweep(&config.violation_grid, &PowerIterationConfig::default())?;
    let decreasing = pts.windows(2).all(|w| w[1].a_optimal < w[0].a_optimal);
    let positive = pts.iter().all(|p| p.a_optimal > 0.0);
    let dominated = pts.iter().all(|p| p.a_approximate >= p.a_optimal - 1e-12);
    let last = pts.last().expect("non-empty grid");
    Ok((
        decreasing && positive && dominated,
        format!(
            "{} points, A_opt({}) = {:.12}, A_approx({}) = {:.12}",
            pts.len(),
            last.d,
            last.a_optimal,
            last.d,
            last.a_approximate
        ),
    ))
}

fn large_d(config: &VerifyConfig) -> Result<(bool, String)> {
    let r = optimize::optimal_state(config.large_d, 1e-12, 100_000)?;
    Ok((
        r.residual <= config.large_d_residual && r.eigenvector.is_palindromic(1e-8),
        format!(
            "d = {}: {} iterations, residual {:.2e}, A = {:.12}",
            config.large_d,
            r.iterations,
            r.residual,
            r.bell_value()
        ),
    ))
}

fn entropy_trend(config: &VerifyConfig) -> Result<(bool, String)> {
    let ratios = states::entropy_ratio_sweep(&config.entropy_grid)?;
    let decreasing = ratios.windows(2).all(|w| w[1].1 < w[0].1);
    let above = ratios.iter().all(|&(_, r)| r > 0.5);
    let d2 = states::entropy(&approximate_state(2)?) / 2f64.ln();
    let text: Vec<String> = ratios.iter().map(|(d, r)| format!("{d}:{r:.6}")).collect();
    Ok((
        decreasing && above && (d2 - 1.0).abs() < 1e-14,
        format!("ratios {}", text.join(" ")),
    ))
}

fn continuum_trend(config: &VerifyConfig) -> Result<(bool, String)> {
    let q = &config.quadrature;
    let mut values = Vec::new();
    let mut ok = true;
    for &delta in &config.continuum_deltas {
        let a = ContinuumAnsatz::new(delta)?;
        let norm = continuum::ansatz_norm_sqr(&a, q)?.value;
        let m = continuum::m_functional(&a, q)?;
        ok &= (norm - 1.0).abs() <= 1e-8 && m <= 2.0 + q.target_abs_err;
        values.push(m);
    }
    ok &= values.windows(2).all(|w| w[1] > w[0]);
    for eps in [0.1, 0.25, 0.5] {
        ok &= (continuum::i_delta_closed_form(1e-8, eps)? - 2.0).abs() <= 1e-6;
    }
    let text: Vec<String> = config
        .continuum_deltas
        .iter()
        .zip(&values)
        .map(|(d, m)| format!("{d}:{m:.10}"))
        .collect();
    Ok((ok, format!("M(f_delta) {}", text.join(" "))))
}

fn lower_bound_chain(config: &VerifyConfig) -> Result<(bool, String)> {
    let mut ok = true;
    let mut parts = Vec::new();
    for (delta, eps) in [(0.1, 0.25), (0.05, 0.5), (0.2, 0.1)] {
        let c = continuum::i_delta_chain_check(delta, eps, &config.quadrature)?;
        ok &= c.ordered() && c.closed_form <= c.lhs_integral + c.quadrature_error;
        parts.push(format!(
            "({delta},{eps}): I={:.10} corner={:.10} middle={:.10} closed={:.10}",
            c.lhs_integral, c.corner_integral, c.middle_bound, c.closed_form
        ));
    }
    Ok((ok, parts.join("; ")))
}
