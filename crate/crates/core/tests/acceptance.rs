//! Acceptance gate: one line per criterion, non-zero exit if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{phi_oracle, random_vec};
use dynwave::general::GeneralProblem;
use dynwave::harness::{convergence_study, run, ExperimentConfig, InitialData, Preset, Trajectory};
use dynwave::linsys::definiteness_check;
use dynwave::mesh::{norm_h1, norm_inf, norm_l2, sbp_defect, sobolev_constant};
use dynwave::quotients::{quotient_decomposition_defect, two_point_quotient};
use dynwave::{Error, Field, FluxDensity, Grid, Nonlinearity, SemilinearScheme, SolverParams, StatePair};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const DRIFT_SEMILINEAR: f64 = 1e-9;
const DRIFT_GENERAL: f64 = 1e-8;
const ORDER_WINDOW: (f64, f64) = (1.8, 2.2);
const SBP_TOL: f64 = 100.0 * f64::EPSILON;
const DECOMPOSITION_TOL: f64 = 1e-10;
const ORACLE_TOL: f64 = 1e-12;
const REDUCTION_TOL: f64 = 1e-10;
const MAX_ITERATIONS: usize = 20;
const TRIALS: usize = 1000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn reference_run(nonlinearity: &str, preset: Preset) -> (Result<Trajectory, Error>, Duration) {
    let config = ExperimentConfig::reference_grid(nonlinearity, InitialData::Preset(preset));
    let start = Instant::now();
    let result = run(&config);
    (result, start.elapsed())
}

fn criterion_1(iterations: &mut Vec<usize>) -> Outcome {
    let (result, elapsed) = reference_run("cubic", Preset::Case1);
    match result {
        Ok(t) => {
            iterations.push(t.max_iterations());
            let drift = t.energy_drift();
            let pass = drift <= DRIFT_SEMILINEAR && elapsed < Duration::from_secs(30);
            outcome(pass, format!("cubic case1 drift {drift:.3e} (<= {DRIFT_SEMILINEAR:e}), {elapsed:.2?} (< 30s)"))
        }
        Err(e) => outcome(false, format!("run failed: {e}")),
    }
}

fn criterion_2(iterations: &mut Vec<usize>) -> Outcome {
    let mut worst = 0.0f64;
    for preset in Preset::ALL {
        match reference_run("sine-gordon", preset).0 {
            Ok(t) => {
                iterations.push(t.max_iterations());
                worst = worst.max(t.energy_drift());
            }
            Err(e) => return outcome(false, format!("sine-gordon {preset} failed: {e}")),
        }
    }
    outcome(worst <= DRIFT_SEMILINEAR, format!("sine-gordon cases 1-3 worst drift {worst:.3e} (<= {DRIFT_SEMILINEAR:e})"))
}

fn criterion_3() -> Outcome {
    let mut config = ExperimentConfig::reference_grid("zero", InitialData::Preset(Preset::Case1));
    config.kind = dynwave::harness::ProblemKind::General;
    config.flux = "string".into();
    match run(&config) {
        Ok(t) => {
            let drift = t.energy_drift();
            outcome(drift <= DRIFT_GENERAL, format!("string case1 drift {drift:.3e} (<= {DRIFT_GENERAL:e})"))
        }
        Err(e) => outcome(false, format!("run failed: {e}")),
    }
}

fn criterion_4() -> Outcome {
    let mut config = ExperimentConfig::reference_grid("cubic", InitialData::Preset(Preset::Case1));
    config.final_time = 1.0;
    config.intervals = 25;
    config.steps = 100;
    let start = Instant::now();
    match convergence_study(&config, 4) {
        Ok(rows) => {
            let elapsed = start.elapsed();
            let order = rows.last().and_then(|r| r.observed_order).unwrap_or(f64::NAN);
            let pass = (ORDER_WINDOW.0..=ORDER_WINDOW.1).contains(&order) && elapsed < Duration::from_secs(120);
            let orders: Vec<String> = rows
                .iter()
                .filter_map(|r| r.observed_order.map(|o| format!("{o:.3}")))
                .collect();
            outcome(
                pass,
                format!("cubic case1 orders [{}], finest pair {order:.4} in [1.8, 2.2], {elapsed:.2?} (< 120s)", orders.join(", ")),
            )
        }
        Err(e) => outcome(false, format!("study failed: {e}")),
    }
}

fn criterion_5(rng: &mut StdRng) -> Outcome {
    let mut worst = 0.0f64;
    for _ in 0..TRIALS {
        let kk = rng.gen_range(2..=64);
        let grid = Grid::new(rng.gen_range(0.5..10.0), 1.0, kk, 2).unwrap();
        let scale = rng.gen_range(0.1..10.0);
        let f = random_vec(rng, kk + 2, scale);
        let g = random_vec(rng, kk + 1, scale);
        let magnitude = norm_inf(&f) * norm_inf(&g) * (grid.length() + 2.0 + 4.0 * grid.length() / grid.dx());
        worst = worst.max(sbp_defect(&f, &g, &grid).abs() / magnitude);
    }
    outcome(worst <= SBP_TOL, format!("{TRIALS} instances, worst scaled defect {worst:.3e} (<= 100 eps)"))
}

fn criterion_6(rng: &mut StdRng) -> Outcome {
    let mut worst = 0.0f64;
    let mut violations = 0;
    for nl in Nonlinearity::catalog() {
        for trial in 0..TRIALS {
            let mut t: Vec<f64> = random_vec(rng, 4, 3.0);
            if trial % 4 == 0 {
                t[1] = t[0] + rng.gen_range(-1e-9..1e-9);
            }
            let (xi, xit, eta, etat) = (t[0], t[1], t[2], t[3]);
            let scale = [
                two_point_quotient(&nl, xi, eta),
                two_point_quotient(&nl, xit, etat),
                (nl.derivative)(xi),
                (nl.derivative)(eta),
            ]
            .iter()
            .fold(1.0f64, |m, v| m.max(v.abs()));
            worst = worst.max(quotient_decomposition_defect(&nl, xi, xit, eta, etat).abs() / scale);

            let kk = rng.gen_range(2..=32);
            let grid = Grid::new(rng.gen_range(0.5..6.0), 1.0, kk, 2).unwrap();
            let amp = rng.gen_range(0.05..2.0);
            let u = random_vec(rng, kk + 1, amp);
            let v = random_vec(rng, kk + 1, amp);
            let ut = random_vec(rng, kk + 1, amp);
            let vt = random_vec(rng, kk + 1, amp);
            let r = [&u, &v, &ut, &vt].iter().map(|w| norm_h1(w, &grid)).fold(0.0, f64::max);
            let rho = sobolev_constant(grid.length()).unwrap() * r;
            let c1 = nl.derivative_bound(rho) * (1.0 + 1e-9);
            let c2 = nl.second_derivative_bound(rho) * (1.0 + 1e-9) + 1e-12;
            let q = |a: &[f64], b: &[f64]| -> Vec<f64> { a.iter().zip(b).map(|(&x, &y)| two_point_quotient(&nl, x, y)).collect() };
            let qa = q(&u, &v);
            let qb = q(&ut, &vt);
            let sqrt_l = grid.length().sqrt();
            let bound1 = (c1 * sqrt_l).min((nl.derivative)(0.0).abs() * sqrt_l + c2 * (norm_l2(&u, &grid) + norm_l2(&v, &grid)));
            let diff: Vec<f64> = qa.iter().zip(&qb).map(|(a, b)| a - b).collect();
            let du: Vec<f64> = u.iter().zip(&ut).map(|(a, b)| a - b).collect();
            let dv: Vec<f64> = v.iter().zip(&vt).map(|(a, b)| a - b).collect();
            let bound2 = 0.5 * c2 * (norm_l2(&du, &grid) + norm_l2(&dv, &grid));
            if norm_l2(&qa, &grid) > bound1 * (1.0 + 1e-12) + 1e-14 || norm_l2(&diff, &grid) > bound2 * (1.0 + 1e-12) + 1e-14 {
                violations += 1;
            }
        }
    }
    let pass = worst <= DECOMPOSITION_TOL && violations == 0;
    outcome(pass, format!("{TRIALS} tuples x 4 nonlinearities, worst scaled defect {worst:.3e} (<= 1e-10), bound violations {violations}"))
}

fn criterion_7(rng: &mut StdRng) -> Outcome {
    let mut violations = 0;
    let mut tightest = f64::INFINITY;
    for length in [0.5, 1.0, 6.0] {
        let cs = sobolev_constant(length).unwrap();
        for _ in 0..TRIALS {
            let kk = rng.gen_range(2..=64);
            let grid = Grid::new(length, 1.0, kk, 2).unwrap();
            let amp = rng.gen_range(0.01..100.0);
            let mut f = random_vec(rng, kk + 1, amp);
            if rng.gen_bool(0.3) {
                let c = rng.gen_range(-5.0..5.0);
                f.iter_mut().for_each(|v| *v = *v * 1e-3 + c);
            }
            let slack = cs * norm_h1(&f, &grid) - norm_inf(&f);
            tightest = tightest.min(slack / norm_inf(&f).max(1e-300));
            if slack < 0.0 {
                violations += 1;
            }
        }
    }
    outcome(violations == 0, format!("3 x {TRIALS} fields, violations {violations}, tightest relative slack {tightest:.3e}"))
}

fn criterion_8() -> Outcome {
    let mut max_form = f64::NEG_INFINITY;
    let mut min_margin = f64::INFINITY;
    let per_grid = TRIALS / 63 + 1;
    let mut total = 0;
    for kk in 2..=64 {
        let grid = Grid::new(6.0, 5.0, kk, 10 + kk).unwrap();
        let report = definiteness_check(&grid, per_grid, kk as u64);
        max_form = max_form.max(report.max_form);
        min_margin = min_margin.min(report.min_margin);
        total += report.trials;
    }
    outcome(
        max_form < 0.0 && min_margin > 0.0,
        format!("{total} vectors over K=2..64, max <AU,U> {max_form:.3e} (< 0), min margin {min_margin:.3e} (> 0)"),
    )
}

fn criterion_9(rng: &mut StdRng) -> Outcome {
    let mut worst_oracle = 0.0f64;
    for kk in 2..=8 {
        for nl in Nonlinearity::catalog() {
            for _ in 0..10 {
                let grid = Grid::new(rng.gen_range(0.5..6.0), rng.gen_range(0.5..5.0), kk, rng.gen_range(2..50)).unwrap();
                let scheme = SemilinearScheme::new(grid, nl);
                let prev = random_vec(rng, kk + 1, 1.0);
                let curr = random_vec(rng, kk + 1, 1.0);
                let guess = random_vec(rng, kk + 1, 1.0);
                let ghosts = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                let pair = StatePair::new(Field::new(&grid, prev.clone()).unwrap(), Field::new(&grid, curr.clone()).unwrap(), 1).unwrap();
                let fast = scheme.phi_apply(&guess, &pair).unwrap();
                let oracle = phi_oracle(&grid, &nl, &guess, &prev, &curr, ghosts);
                for (a, b) in fast.iter().zip(&oracle) {
                    worst_oracle = worst_oracle.max((a - b).abs() / b.abs().max(1.0));
                }
            }
        }
    }

    let mut worst_reduction = 0.0f64;
    let grid = Grid::new(6.0, 5.0, 100, 2000).unwrap();
    let params = SolverParams::default();
    for nl in Nonlinearity::catalog() {
        let scheme = SemilinearScheme::new(grid, nl);
        let general = GeneralProblem::new(grid, FluxDensity::quadratic(), nl);
        let (u0, v0) = Preset::Case2.sample(&grid);
        let u1 = scheme.first_step(&u0, &v0);
        let mut a = StatePair::new(u0, u1, 1).unwrap();
        let mut b = a.clone();
        for _ in 0..20 {
            let (na, _) = scheme.step(&a, &params).unwrap();
            let (nb, _) = general.general_step(&b, &params).unwrap();
            for (x, y) in na.iter().zip(nb.iter()) {
                worst_reduction = worst_reduction.max((x - y).abs());
            }
            a = a.advance(na);
            b = b.advance(nb);
        }
    }
    outcome(
        worst_oracle <= ORACLE_TOL && worst_reduction <= REDUCTION_TOL,
        format!("dense oracle K<=8 worst {worst_oracle:.3e} (<= 1e-12), quadratic-flux reduction worst {worst_reduction:.3e} (<= 1e-10)"),
    )
}

fn criterion_10(iterations: &[usize]) -> Outcome {
    let most = iterations.iter().copied().max().unwrap_or(usize::MAX);
    let mut config = ExperimentConfig::reference_grid("cubic", InitialData::Preset(Preset::Case3));
    config.steps = 5;
    let failure = match run(&config) {
        Err(Error::NoConvergence { step: Some(n), .. }) => Some(n),
        _ => None,
    };
    let pass = !iterations.is_empty() && most <= MAX_ITERATIONS && failure.is_some();
    outcome(
        pass,
        format!(
            "reference-grid runs max {most} iterations per step (<= {MAX_ITERATIONS}); dt = 1 case3 cubic -> {}",
            failure.map_or("no NoConvergence".to_string(), |n| format!("NoConvergence at step {n}"))
        ),
    )
}

fn main() -> ExitCode {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut iterations = Vec::new();
    let results = [
        ("energy conservation, cubic", criterion_1(&mut iterations)),
        ("energy conservation, sine-Gordon", criterion_2(&mut iterations)),
        ("energy conservation, string", criterion_3()),
        ("second-order convergence", criterion_4()),
        ("summation by parts", criterion_5(&mut rng)),
        ("quotient decomposition and bounds", criterion_6(&mut rng)),
        ("discrete Sobolev inequality", criterion_7(&mut rng)),
        ("matrix definiteness", criterion_8()),
        ("oracle equivalence", criterion_9(&mut rng)),
        ("fixed-point behaviour", criterion_10(&iterations)),
    ];
    let mut failed = 0;
    for (i, (name, o)) in results.iter().enumerate() {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {}: {name}: {}", i + 1, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
