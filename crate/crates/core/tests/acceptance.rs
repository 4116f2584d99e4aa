//! Acceptance suite. Natural units `m = ω = ħ = 1` throughout.
//!
//! Runs every criterion, prints one PASS/FAIL line each, and exits non-zero
//! if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use qfho_core::force::{BinaryOp, ExpressionNode, UnaryOp};
use qfho_core::grid::{self, expectation_p, expectation_q};
use qfho_core::kernel::evolve_composed;
use qfho_core::{
    closed_form_constant_force, evolution_params, evolve_by_kernel, forced_kernel, ho_kernel,
    integrate_trajectory, make_gaussian, overlap, parse_force_expression, symplectic_map,
    EvolutionParams, ForceProfile, Grid, ParseError, PhysicalParams, SymplecticMap, WaveFunction,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Criterion 1
const TRAJECTORY_TOL: f64 = 1e-8;
const TRAJECTORY_RUNTIME: Duration = Duration::from_secs(1);
// Criterion 2
const RK4_MIN_RATIO: f64 = 14.0;
// Criterion 3
const DET_TOL: f64 = 1e-12;
// Criterion 4
const REDUCTION_TOL: f64 = 1e-13;
// Criterion 5
const FIDELITY_TOL: f64 = 1e-6;
const PHASE_TOL: f64 = 1e-4;
const COMPARE_RUNTIME: Duration = Duration::from_secs(30);
// Criterion 6
const EHRENFEST_TOL: f64 = 1e-4;
// Criterion 7
const ORACLE_NORM_DRIFT_TOL: f64 = 1e-12;
const KERNEL_NORM_TOL: f64 = 1e-6;
// Criterion 8
const COMPOSITION_TOL: f64 = 1e-5;
// Criterion 9
const QUADRATIC_FIT_TOL: f64 = 1e-10;
// Criterion 10
const PARSER_TOL: f64 = 1e-12;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn natural() -> PhysicalParams {
    PhysicalParams::natural()
}

/// Reference scenario shared by criteria 5–8.
struct Reference {
    params: PhysicalParams,
    profile: ForceProfile,
    psi0: WaveFunction,
    q0: f64,
    p0: f64,
    t_end: f64,
    dt: f64,
}

fn reference() -> Reference {
    let grid = Grid::new(-20.0, 20.0, 2048).unwrap();
    let (q0, p0) = (1.0, 0.0);
    let psi0 = make_gaussian(&grid, q0, p0, 0.5f64.sqrt(), 1.0).unwrap();
    Reference {
        params: natural(),
        profile: ForceProfile::sinusoid(0.5, 0.8, 0.0),
        psi0,
        q0,
        p0,
        t_end: 0.8 * PI,
        dt: 1e-3,
    }
}

fn max_trajectory_error(h: f64) -> (f64, f64, f64) {
    let params = natural();
    let traj = integrate_trajectory(&params, &ForceProfile::constant(1.0), 10.0, h).unwrap();
    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    for s in traj.samples() {
        let exact = closed_form_constant_force(&params, 1.0, s.t);
        worst.0 = worst.0.max((s.lambda - exact.lambda).abs());
        worst.1 = worst.1.max((s.pi - exact.pi).abs());
        worst.2 = worst.2.max((s.action - exact.action).abs());
    }
    worst
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let (dl, dp, ds) = max_trajectory_error(1e-3);
    let elapsed = start.elapsed();
    check(
        dl < TRAJECTORY_TOL
            && dp < TRAJECTORY_TOL
            && ds < TRAJECTORY_TOL
            && elapsed < TRAJECTORY_RUNTIME,
        format!("max |Δλ| = {dl:.2e}, |Δπ| = {dp:.2e}, |ΔS| = {ds:.2e}, runtime {elapsed:?}"),
    )
}

fn criterion_2() -> Outcome {
    let coarse = max_trajectory_error(0.1);
    let fine = max_trajectory_error(0.05);
    let ratio_lambda = coarse.0 / fine.0;
    let ratio_pi = coarse.1 / fine.1;
    check(
        ratio_lambda >= RK4_MIN_RATIO && ratio_pi >= RK4_MIN_RATIO,
        format!("error ratio under h-halving: λ {ratio_lambda:.2}, π {ratio_pi:.2}"),
    )
}

fn criterion_3() -> Outcome {
    let params = natural();
    let traj =
        integrate_trajectory(&params, &ForceProfile::sinusoid(0.5, 0.8, 0.0), 10.0, 1e-3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let t = rng.gen_range(0.0..=10.0);
        let map = symplectic_map(&evolution_params(&params, &traj, t).unwrap());
        worst = worst.max((map.determinant() - 1.0).abs());
    }
    let at_zero = symplectic_map(&evolution_params(&params, &traj, 0.0).unwrap());
    check(
        worst < DET_TOL && at_zero == SymplecticMap::identity(),
        format!(
            "max |det M − 1| = {worst:.2e}; M(0) identity: {}",
            at_zero == SymplecticMap::identity()
        ),
    )
}

fn criterion_4() -> Outcome {
    let params = natural();
    let t = PI / 3.0;
    let traj = integrate_trajectory(&params, &ForceProfile::Zero, t, 1e-3).unwrap();
    let ep = evolution_params(&params, &traj, t).unwrap();
    let axis: Vec<f64> = (0..50).map(|i| -5.0 + 10.0 * i as f64 / 49.0).collect();
    let mut worst = 0.0f64;
    for &q in &axis {
        for &qp in &axis {
            let g = forced_kernel(&params, &ep, q, qp).unwrap();
            let k = ho_kernel(&params, q, qp, t, 1.0).unwrap();
            worst = worst.max((g - k).norm() / k.norm());
        }
    }
    check(
        worst < REDUCTION_TOL,
        format!("max relative error {worst:.2e} on 50×50 grid"),
    )
}

struct CompareRun {
    fidelity: f64,
    phase: f64,
    kernel_norm: f64,
    ehrenfest_q: f64,
    ehrenfest_p: f64,
    elapsed: Duration,
    kernel_state: WaveFunction,
}

fn compare_run(r: &Reference) -> CompareRun {
    let start = Instant::now();
    let traj = integrate_trajectory(&r.params, &r.profile, r.t_end, r.dt).unwrap();
    let ep = evolution_params(&r.params, &traj, r.t_end).unwrap();
    let kernel_state = evolve_by_kernel(&r.params, &ep, &r.psi0).unwrap();

    let mut ehrenfest_q = 0.0f64;
    let mut ehrenfest_p = 0.0f64;
    let oracle = grid::evolve(&r.params, &r.profile, &r.psi0, r.t_end, r.dt, |_, psi| {
        let map = symplectic_map(&evolution_params(&r.params, &traj, psi.t().min(r.t_end))?);
        let (q, p) = map.apply(r.q0, r.p0);
        ehrenfest_q = ehrenfest_q.max((expectation_q(psi)? - q).abs());
        ehrenfest_p = ehrenfest_p.max((expectation_p(psi, r.params.hbar())? - p).abs());
        Ok(())
    })
    .unwrap();
    let ov = overlap(&oracle, &kernel_state).unwrap();
    CompareRun {
        fidelity: ov.norm(),
        phase: ov.arg(),
        kernel_norm: kernel_state.norm_squared(),
        ehrenfest_q,
        ehrenfest_p,
        elapsed: start.elapsed(),
        kernel_state,
    }
}

fn criterion_5(run: &CompareRun) -> Outcome {
    check(
        run.fidelity >= 1.0 - FIDELITY_TOL
            && run.phase.abs() < PHASE_TOL
            && run.elapsed < COMPARE_RUNTIME,
        format!(
            "|⟨ψ_oracle|ψ_kernel⟩| = 1 − {:.2e}, arg = {:.2e} rad, runtime {:?}",
            1.0 - run.fidelity,
            run.phase,
            run.elapsed
        ),
    )
}

fn criterion_6(run: &CompareRun) -> Outcome {
    check(
        run.ehrenfest_q < EHRENFEST_TOL && run.ehrenfest_p < EHRENFEST_TOL,
        format!(
            "max |⟨q⟩ − (Mx₀+ξ)_q| = {:.2e}, max |⟨p⟩ − (Mx₀+ξ)_p| = {:.2e}",
            run.ehrenfest_q, run.ehrenfest_p
        ),
    )
}

fn criterion_7(r: &Reference, run: &CompareRun) -> Outcome {
    let steps = 10_000;
    let psi = grid::evolve(
        &r.params,
        &r.profile,
        &r.psi0,
        steps as f64 * r.dt,
        r.dt,
        |_, _| Ok(()),
    )
    .unwrap();
    let drift = (psi.norm_squared() - r.psi0.norm_squared()).abs();
    let kernel_dev = (run.kernel_norm.sqrt() - 1.0).abs();
    check(
        drift < ORACLE_NORM_DRIFT_TOL && kernel_dev < KERNEL_NORM_TOL,
        format!(
            "oracle norm drift {drift:.2e} over {steps} steps; kernel |‖ψ‖ − 1| = {kernel_dev:.2e}"
        ),
    )
}

fn criterion_8(r: &Reference, run: &CompareRun) -> Outcome {
    let half = 0.4 * PI;
    let two_step = evolve_composed(&r.params, &r.profile, &r.psi0, &[half, half], r.dt).unwrap();
    let fidelity = overlap(&run.kernel_state, &two_step).unwrap().norm();
    check(
        fidelity >= 1.0 - COMPOSITION_TOL,
        format!(
            "two-segment vs single-segment fidelity 1 − {:.2e}",
            1.0 - fidelity
        ),
    )
}

fn criterion_9(r: &Reference) -> Outcome {
    let traj = integrate_trajectory(&r.params, &r.profile, r.t_end, r.dt).unwrap();
    let ep: EvolutionParams = evolution_params(&r.params, &traj, r.t_end).unwrap();
    let n = 41;
    let axis: Vec<f64> = (0..n)
        .map(|i| -2.0 + 4.0 * i as f64 / (n - 1) as f64)
        .collect();
    let values: Vec<Vec<Complex64>> = axis
        .iter()
        .map(|&q| {
            axis.iter()
                .map(|&qp| forced_kernel(&r.params, &ep, q, qp).unwrap())
                .collect()
        })
        .collect();

    let unwrap_step = |prev: f64, raw: f64| {
        let mut v = raw;
        while v - prev > PI {
            v -= 2.0 * PI;
        }
        while v - prev < -PI {
            v += 2.0 * PI;
        }
        v
    };
    let mut phase = vec![vec![0.0; n]; n];
    phase[0][0] = values[0][0].arg();
    for i in 1..n {
        phase[i][0] = unwrap_step(phase[i - 1][0], values[i][0].arg());
    }
    for i in 0..n {
        for j in 1..n {
            phase[i][j] = unwrap_step(phase[i][j - 1], values[i][j].arg());
        }
    }

    let rows = n * n;
    let mut design = DMatrix::<f64>::zeros(rows, 6);
    let mut target = DVector::<f64>::zeros(rows);
    for i in 0..n {
        for j in 0..n {
            let (q, qp) = (axis[i], axis[j]);
            let row = i * n + j;
            for (col, v) in [1.0, q, qp, q * q, q * qp, qp * qp].into_iter().enumerate() {
                design[(row, col)] = v;
            }
            target[row] = phase[i][j];
        }
    }
    let coeffs = design
        .clone()
        .svd(true, true)
        .solve(&target, 1e-14)
        .unwrap();
    let residual = (&design * coeffs - &target).amax();
    let modulus: Vec<f64> = values.iter().flatten().map(|z| z.norm()).collect();
    let modulus_spread = modulus.iter().cloned().fold(f64::MIN, f64::max)
        - modulus.iter().cloned().fold(f64::MAX, f64::min);
    check(
        residual < QUADRATIC_FIT_TOL && modulus_spread < QUADRATIC_FIT_TOL,
        format!("quadratic phase fit residual {residual:.2e}; |G| spread {modulus_spread:.2e}"),
    )
}

fn random_tree(rng: &mut ChaCha8Rng, depth: usize) -> ExpressionNode {
    let leaf = depth == 0 || rng.gen_bool(0.25);
    if leaf {
        return if rng.gen_bool(0.5) {
            ExpressionNode::Time
        } else if rng.gen_bool(0.5) {
            ExpressionNode::constant(rng.gen_range(-5i32..=5) as f64)
        } else {
            ExpressionNode::constant(rng.gen_range(-5.0..5.0))
        };
    }
    if rng.gen_bool(0.35) {
        let op = [
            UnaryOp::Neg,
            UnaryOp::Sin,
            UnaryOp::Cos,
            UnaryOp::Exp,
            UnaryOp::Sqrt,
        ][rng.gen_range(0..5)];
        ExpressionNode::unary(op, random_tree(rng, depth - 1))
    } else {
        let op = [
            BinaryOp::Add,
            BinaryOp::Sub,
            BinaryOp::Mul,
            BinaryOp::Div,
            BinaryOp::Pow,
        ][rng.gen_range(0..5)];
        ExpressionNode::binary(op, random_tree(rng, depth - 1), random_tree(rng, depth - 1))
    }
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut mismatches = 0;
    let mut finite_points = 0usize;
    for _ in 0..200 {
        let tree = random_tree(&mut rng, 5);
        let text = tree.to_string();
        let parsed = match parse_force_expression(&text) {
            Ok(p) => p,
            Err(e) => return Err(format!("rendered tree failed to parse: {text:?}: {e}")),
        };
        for k in 0..1000 {
            let t = 10.0 * k as f64 / 999.0;
            match (tree.eval(t), parsed.eval(t)) {
                (Ok(a), Ok(b)) => {
                    finite_points += 1;
                    if (a - b).abs() > PARSER_TOL {
                        mismatches += 1;
                    }
                }
                (Err(_), Err(_)) => {}
                _ => mismatches += 1,
            }
        }
    }

    let corpus: &[(&str, usize)] = &[
        ("", 0),
        ("1+", 2),
        ("(1", 2),
        ("1)", 1),
        ("sin t", 4),
        ("2**3", 2),
        ("1 2", 2),
        ("3 $ 4", 2),
        ("1.2.3", 3),
        ("1e", 1),
        ("sin(t", 5),
        ("()", 1),
        ("t^", 2),
        ("*t", 0),
        ("cos()", 4),
        ("2*(t+1))", 7),
    ];
    let mut wrong_positions = Vec::new();
    for &(text, position) in corpus {
        match parse_force_expression(text) {
            Err(ParseError::SyntaxError { position: p, .. }) if p == position => {}
            other => wrong_positions.push(format!("{text:?} → {other:?}")),
        }
    }
    check(
        mismatches == 0 && wrong_positions.is_empty(),
        format!(
            "200 trees, {finite_points} finite evaluations, {mismatches} mismatches; \
             {} of {} malformed inputs with wrong/no SyntaxError {:?}",
            wrong_positions.len(),
            corpus.len(),
            wrong_positions
        ),
    )
}

fn main() -> ExitCode {
    let mut failures = 0;
    let mut report = |name: &str, outcome: Outcome| match outcome {
        Ok(detail) => println!("PASS  {name}: {detail}"),
        Err(detail) => {
            failures += 1;
            println!("FAIL  {name}: {detail}");
        }
    };

    report("1 trajectory vs analytic (constant force)", criterion_1());
    report("2 RK4 order", criterion_2());
    report("3 symplecticity", criterion_3());
    report("4 zero-force kernel reduction", criterion_4());
    let r = reference();
    let run = compare_run(&r);
    report("5 kernel vs grid oracle", criterion_5(&run));
    report("6 Ehrenfest agreement", criterion_6(&run));
    report("7 norm conservation", criterion_7(&r, &run));
    report("8 composition", criterion_8(&r, &run));
    report("9 quadratic phase structure", criterion_9(&r));
    report("10 parser round trip and errors", criterion_10());

    if failures == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} criteria failed");
        ExitCode::FAILURE
    }
}
