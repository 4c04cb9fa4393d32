//! Acceptance criteria AC1-AC10. One summary line per criterion, with indented
//! sub-lines for multi-part criteria. Exits nonzero if any criterion fails.

use std::f64::consts::SQRT_2;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cglmp_core::bell::{self, chsh_identity_check, quantum_behavior};
use cglmp_core::classical::lhv_minimum;
use cglmp_core::continuum::{self, ContinuumAnsatz, QuadratureSpec};
use cglmp_core::optimize::{self, PowerIterationConfig};
use cglmp_core::sampling::{random_behavior, random_no_signalling_behavior, random_state};
use cglmp_core::special::{digamma, gamma_fn};
use cglmp_core::states::{approximate_entropy, maximally_entangled};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SEED: u64 = 20_240_601;

struct Line {
    passed: bool,
    text: String,
}

fn line(passed: bool, text: impl Into<String>) -> Line {
    Line {
        passed,
        text: text.into(),
    }
}

struct Criterion {
    id: &'static str,
    title: &'static str,
    budget: Option<Duration>,
    run: fn() -> Vec<Line>,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: "AC1",
            title: "d=2 headline value",
            budget: Some(Duration::from_secs(1)),
            run: ac1,
        },
        Criterion {
            id: "AC2",
            title: "oracle equivalence",
            budget: Some(Duration::from_secs(10)),
            run: ac2,
        },
        Criterion {
            id: "AC3",
            title: "classical bound",
            budget: Some(Duration::from_secs(5)),
            run: ac3,
        },
        Criterion {
            id: "AC4",
            title: "CHSH correspondence",
            budget: None,
            run: ac4,
        },
        Criterion {
            id: "AC5",
            title: "tightness trend",
            budget: Some(Duration::from_secs(300)),
            run: ac5,
        },
        Criterion {
            id: "AC6",
            title: "Toeplitz performance path",
            budget: Some(Duration::from_secs(300)),
            run: ac6,
        },
        Criterion {
            id: "AC7",
            title: "continuum limit",
            budget: None,
            run: ac7,
        },
        Criterion {
            id: "AC8",
            title: "entropy asymptote",
            budget: Some(Duration::from_secs(60)),
            run: ac8,
        },
        Criterion {
            id: "AC9",
            title: "special functions",
            budget: None,
            run: ac9,
        },
        Criterion {
            id: "AC10",
            title: "determinism of verify --seed 42",
            budget: None,
            run: ac10,
        },
    ];

    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let lines = (c.run)();
        let elapsed = start.elapsed();
        let in_budget = c.budget.is_none_or(|b| elapsed <= b);
        let passed = in_budget && lines.iter().all(|l| l.passed);
        if !passed {
            failed += 1;
        }
        let budget = match c.budget {
            Some(b) => format!(" (budget {:.0} s)", b.as_secs_f64()),
            None => String::new(),
        };
        println!(
            "{} {:<4} {} [{:.2} s{}]",
            if passed { "PASS" } else { "FAIL" },
            c.id,
            c.title,
            elapsed.as_secs_f64(),
            budget
        );
        for l in &lines {
            println!(
                "       {} {}",
                if l.passed { "ok  " } else { "FAIL" },
                l.text
            );
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn ac1() -> Vec<Line> {
    let target = (3.0 - SQRT_2) / 2.0;
    let opt = optimize::optimal_state(2, 1e-12, 100_000).expect("d = 2 converges");
    let me = bell::bell_value(&maximally_entangled(2).unwrap(), 2)
        .unwrap()
        .value();
    vec![
        line(
            (opt.bell_value() - target).abs() <= 1e-10,
            format!(
                "optimal_state(2): A = {:.15}, |A - (3 - sqrt 2)/2| = {:.1e} <= 1e-10",
                opt.bell_value(),
                (opt.bell_value() - target).abs()
            ),
        ),
        line(
            (me - target).abs() <= 1e-10,
            format!(
                "maximally entangled: A = {me:.15}, deviation {:.1e} <= 1e-10",
                (me - target).abs()
            ),
        ),
    ]
}

fn ac2() -> Vec<Line> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    for d in 2..=8 {
        for _ in 0..100 {
            let s = random_state(d, &mut rng).unwrap();
            let direct = bell::bell_value(&s, d).unwrap().value();
            worst = worst.max((direct - bell::closed_form(&s).value()).abs());
        }
    }
    vec![line(
        worst <= 1e-10,
        format!("d = 2..8 x 100 states: max |bell_value - closed_form| = {worst:.1e} <= 1e-10"),
    )]
}

fn ac3() -> Vec<Line> {
    [1usize, 2, 3, 4, 8]
        .iter()
        .map(|&d| {
            let (min, w) = lhv_minimum(d).unwrap();
            line(
                min == 1,
                format!(
                    "lhv_minimum({d}) = {min}, witness ({},{},{},{})",
                    w.a1, w.a2, w.b1, w.b2
                ),
            )
        })
        .collect()
}

fn ac4() -> Vec<Line> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    // Literal reading: four independent normalized tables. The affine identity
    // only holds when the marginals do not depend on the remote setting, so this
    // line is expected to fail.
    let mut generic: f64 = 0.0;
    for _ in 0..100 {
        let b = random_behavior(2, &mut rng).unwrap();
        generic = generic.max(chsh_identity_check(&b).unwrap().residual.abs());
    }
    let mut ns: f64 = 0.0;
    for _ in 0..100 {
        let b = random_no_signalling_behavior(&mut rng);
        ns = ns.max(chsh_identity_check(&b).unwrap().residual.abs());
    }
    let q =
        chsh_identity_check(&quantum_behavior(&maximally_entangled(2).unwrap()).unwrap()).unwrap();
    vec![
        line(
            generic <= 1e-12,
            format!(
                "100 independent normalized quadruples: max |residual| = {generic:.3e} <= 1e-12"
            ),
        ),
        line(
            ns <= 1e-12,
            format!("100 no-signalling quadruples: max |residual| = {ns:.1e} <= 1e-12"),
        ),
        line(
            (q.s - 2.0 * SQRT_2).abs() <= 1e-10 && q.residual.abs() <= 1e-12,
            format!(
                "quantum optimum: S = {:.15}, |S - 2 sqrt 2| = {:.1e} <= 1e-10",
                q.s,
                (q.s - 2.0 * SQRT_2).abs()
            ),
        ),
    ]
}

fn ac5() -> Vec<Line> {
    let mut grid: Vec<usize> = (1..=14).map(|k| 1usize << k).collect();
    grid.push(100_000);
    let pts = optimize::violation_sweep(&grid, &PowerIterationConfig::default()).unwrap();
    let decreasing = pts.windows(2).all(|w| w[1].a_optimal < w[0].a_optimal);
    let positive = pts.iter().all(|p| p.a_optimal > 0.0);
    // d = 2: both states are (1, 1)/sqrt 2 up to rounding of the normalization.
    let worst_gap = pts
        .iter()
        .map(|p| p.a_optimal - p.a_approximate)
        .fold(f64::NEG_INFINITY, f64::max);
    let first = &pts[0];
    let last = pts.last().unwrap();
    vec![
        line(
            decreasing,
            format!(
                "A_opt strictly decreasing over {} points: {:.10} (d=2) -> {:.10} (d={})",
                pts.len(),
                first.a_optimal,
                last.a_optimal,
                last.d
            ),
        ),
        line(
            positive,
            format!("A_opt > 0 everywhere, min {:.10}", last.a_optimal),
        ),
        line(
            worst_gap <= 1e-14,
            format!("A_approx >= A_opt: max (A_opt - A_approx) = {worst_gap:.1e} <= 1e-14"),
        ),
    ]
}

fn ac6() -> Vec<Line> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    for d in [1usize, 2, 3, 17, 64, 128, 129, 1000, 2048, 4095, 4096] {
        let k = optimize::kernel(d);
        let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let a = optimize::matvec_naive(&k, &v).unwrap();
        let b = optimize::matvec_fft(&k, &v).unwrap();
        worst = a
            .iter()
            .zip(&b)
            .fold(worst, |w, (x, y)| w.max((x - y).abs()));
    }
    let start = Instant::now();
    let r = optimize::optimal_state(100_000, 1e-12, 100_000);
    let elapsed = start.elapsed().as_secs_f64();
    let big = match r {
        Ok(r) => line(
            r.residual <= 1e-9,
            format!(
                "optimal_state(1e5): residual {:.2e} <= 1e-9 after {} iterations, {elapsed:.2} s",
                r.residual, r.iterations
            ),
        ),
        Err(e) => line(false, format!("optimal_state(1e5): {e}")),
    };
    vec![
        line(
            worst <= 1e-10,
            format!("matvec_fft vs matvec_naive, d <= 4096: max |diff| = {worst:.1e} <= 1e-10"),
        ),
        big,
    ]
}

fn ac7() -> Vec<Line> {
    let quad = QuadratureSpec::default();
    let mut out = Vec::new();

    let deltas = [0.2, 0.1, 0.05, 0.02, 0.01];
    let m: Vec<f64> = deltas
        .iter()
        .map(|&d| continuum::m_functional(&ContinuumAnsatz::new(d).unwrap(), &quad).unwrap())
        .collect();
    let ceiling = m.iter().all(|&v| v <= 2.0 + quad.target_abs_err);
    let text: Vec<String> = deltas
        .iter()
        .zip(&m)
        .map(|(d, v)| format!("{d}:{v:.10}"))
        .collect();
    out.push(line(
        ceiling,
        format!(
            "M(f_delta) <= 2 + {:.0e}: {}",
            quad.target_abs_err,
            text.join(" ")
        ),
    ));
    let increasing = m[..4].windows(2).all(|w| w[1] > w[0]);
    out.push(line(
        increasing,
        "M(f_delta) strictly increasing as delta decreases over {0.2, 0.1, 0.05, 0.02}",
    ));

    let mut worst: f64 = 0.0;
    for eps in [0.1, 0.25, 0.5] {
        worst = worst.max((continuum::i_delta_closed_form(1e-8, eps).unwrap() - 2.0).abs());
    }
    out.push(line(worst <= 1e-6, format!("closed form at delta = 1e-8, eps in {{0.1, 0.25, 0.5}}: max |value - 2| = {worst:.1e} <= 1e-6")));

    let middle = continuum::i_delta_middle_bound(0.1, 0.25, &quad)
        .unwrap()
        .value;
    let closed = continuum::i_delta_closed_form(0.1, 0.25).unwrap();
    out.push(line(
        (middle - closed).abs() <= 1e-6,
        format!("corner-bound quadrature {middle:.12} vs digamma closed form {closed:.12} at (0.1, 0.25): |diff| = {:.3e} <= 1e-6", (middle - closed).abs()),
    ));
    out
}

fn ac8() -> Vec<Line> {
    let grid = [100usize, 1_000, 10_000, 100_000, 1_000_000, 10_000_000];
    let ratios: Vec<f64> = grid
        .iter()
        .map(|&d| approximate_entropy(d).unwrap() / (d as f64).ln())
        .collect();
    let text: Vec<String> = grid
        .iter()
        .zip(&ratios)
        .map(|(d, r)| format!("{d}:{r:.8}"))
        .collect();
    vec![
        line(
            ratios.windows(2).all(|w| w[1] < w[0]),
            format!("E/ln d strictly decreasing: {}", text.join(" ")),
        ),
        line(
            ratios.iter().all(|&r| r > 0.5),
            format!("E/ln d > 1/2 everywhere, min {:.8}", ratios.last().unwrap()),
        ),
    ]
}

fn ac9() -> Vec<Line> {
    let e1 = (digamma(1.0).unwrap() + EULER_GAMMA).abs();
    let ehalf = (digamma(0.5).unwrap() + EULER_GAMMA + 2.0 * std::f64::consts::LN_2).abs();
    let mut rec: f64 = 0.0;
    for i in 1..=100 {
        let z = i as f64 * 0.173;
        rec = rec.max((digamma(z + 1.0).unwrap() - digamma(z).unwrap() - 1.0 / z).abs());
    }
    let mut refl: f64 = 0.0;
    for i in 1..100 {
        let z = i as f64 / 100.0;
        let want = std::f64::consts::PI / (std::f64::consts::PI * z).sin();
        refl = refl.max(((gamma_fn(z).unwrap() * gamma_fn(1.0 - z).unwrap() - want) / want).abs());
    }
    vec![
        line(e1 <= 1e-12, format!("|psi(1) + gamma| = {e1:.1e} <= 1e-12")),
        line(
            ehalf <= 1e-12,
            format!("|psi(1/2) + gamma + 2 ln 2| = {ehalf:.1e} <= 1e-12"),
        ),
        line(
            rec <= 1e-12,
            format!("max |psi(z+1) - psi(z) - 1/z| over 100 points = {rec:.1e} <= 1e-12"),
        ),
        line(
            refl <= 1e-12,
            format!("max relative Gamma(z) Gamma(1-z) - pi/sin(pi z) = {refl:.1e} <= 1e-12"),
        ),
    ]
}

fn ac10() -> Vec<Line> {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let csv = dir.path().join(name);
        let out = Command::new(env!("CARGO_BIN_EXE_cglmp"))
            .args(["verify", "--seed", "42", "--output"])
            .arg(&csv)
            .output()
            .expect("spawn cglmp");
        (
            out.status.code(),
            out.stdout,
            std::fs::read(&csv).unwrap_or_default(),
        )
    };
    let (code_a, log_a, csv_a) = run("a.csv");
    let (code_b, log_b, csv_b) = run("b.csv");
    vec![
        line(
            log_a == log_b && !log_a.is_empty(),
            format!("logs byte-identical ({} bytes)", log_a.len()),
        ),
        line(
            csv_a == csv_b && !csv_a.is_empty(),
            format!("CSVs byte-identical ({} bytes)", csv_a.len()),
        ),
        line(
            code_a == Some(0) && code_b == Some(0),
            format!("exit codes {code_a:?}, {code_b:?}"),
        ),
    ]
}
