//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//! Every tolerance and runtime budget is pinned below.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use common::*;
use kcosym::output::read_csv;
use kcosym::{cmd_example, cmd_solve, load, load_str, Overrides, Problem};
use kcosym_core::*;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rand::Rng;

const HJ_IDENTITY_TOL: f64 = 1e-12;
const HJ_POINTS: usize = 1000;
const CLOSED_FORM_TOL: f64 = 1e-6;
const RK4_RATIO: (f64, f64) = (8.0, 24.0);
const HDW_RATIO: (f64, f64) = (3.0, 5.0);
const THEOREM_TOL: f64 = 1e-10;
const THEOREM_CASES: u32 = 200;
const THEOREM_POINTS: usize = 50;
const KERNEL_TOL: f64 = 1e-10;
const KERNEL_TRIALS: u32 = 100;
const KERNEL_POINTS: usize = 20;
const SINE_TOL: f64 = 1e-8;
const SPREAD_TOL: f64 = 1e-10;
const AD_CASES: u32 = 1000;
const AD_REL_TOL: f64 = 1e-6;
const PATH_REL_TOL: f64 = 1e-8;
const INCOMPATIBLE_MIN: f64 = 1e-3;

type Outcome = Result<String, String>;

fn example(name: &str) -> Problem {
    let text = kcosym::builtins::example(name).unwrap().render().unwrap();
    load_str(&text, name, name, Path::new("."), &Overrides::default()).unwrap()
}

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn random_base_point(r: &mut rand::rngs::StdRng, dims: Dimensions) -> BasePoint {
    BasePoint::new(
        dims,
        random_point(r, dims.k(), 1.0),
        random_point(r, dims.n(), 3.0),
    )
    .unwrap()
}

/// 1. Scalar-field Hamilton-Jacobi identity.
fn hj_identity() -> Outcome {
    let mut r = rng(1);
    let mut worst = 0.0_f64;
    for name in ["scalar-field-sqrt2", "scalar-field"] {
        let p = example(name);
        for _ in 0..HJ_POINTS {
            let pt = random_base_point(&mut r, p.dims);
            let res = hj_residual(&p.section, &p.system, &pt).unwrap();
            worst = worst.max(res[0].abs());
        }
    }
    let bad = example("scalar-field-bad");
    let pt = BasePoint::new(bad.dims, random_point(&mut r, 4, 1.0), vec![2.0]).unwrap();
    let at2 = hj_residual(&bad.section, &bad.system, &pt).unwrap()[0];
    check(
        worst <= HJ_IDENTITY_TOL && (at2 + 4.0).abs() <= HJ_IDENTITY_TOL,
        format!("max |residual| {worst:.2e} over {} points; C=(1,0,0,0) at q=2: {at2}", 2 * HJ_POINTS),
    )
}

fn closed_form(x: &[f64]) -> f64 {
    2.0 / (x[0] - x[1] + 1.0)
}

/// Integrates the "scalar-field" problem at half its spacing.
fn scalar_field_half() -> (Problem, GridSolution) {
    let p = example("scalar-field");
    let grid = p.grid.with_spacing(p.grid.max_spacing() / 2.0).unwrap();
    let z = reduce(&p.system, &p.section).unwrap();
    let psi = integrate_section(&z, &p.initial_q, &grid, &[0, 1, 2, 3], &p.integrator).unwrap();
    (p, psi)
}

fn max_closed_form_error(psi: &GridSolution) -> f64 {
    let grid = psi.grid();
    (0..grid.node_count())
        .map(|l| (psi.value(l)[0] - closed_form(&grid.node(&grid.multi_index(l)))).abs())
        .fold(0.0, f64::max)
}

/// Runs `solve` on the emitted "scalar-field" file and returns the report
/// and the solution read back from CSV.
fn solve_scalar_field(dir: &Path) -> (kcosym::RunReport, Vec<Vec<f64>>) {
    let file = cmd_example("scalar-field", None, Some(dir)).unwrap();
    let report = cmd_solve(&file, &Overrides::default(), Some(dir)).unwrap();
    let (header, rows) = read_csv(&dir.join("scalar-field.solution.csv")).unwrap();
    assert_eq!(header, ["x1", "x2", "x3", "x4", "q1"]);
    (report, rows)
}

/// 2. Closed-form reproduction and RK4 order.
fn closed_form_reproduction() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let (report, rows) = solve_scalar_field(dir.path());
    let coarse = rows
        .iter()
        .map(|r| (r[4] - closed_form(&r[..4])).abs())
        .fold(0.0, f64::max);
    let (_, psi) = scalar_field_half();
    let fine = max_closed_form_error(&psi);
    let ratio = coarse / fine;
    check(
        report.pass
            && coarse <= CLOSED_FORM_TOL
            && (RK4_RATIO.0..=RK4_RATIO.1).contains(&ratio),
        format!(
            "solve {}, max error {coarse:.3e} at h=0.05, {fine:.3e} at h=0.025, ratio {ratio:.2}",
            if report.pass { "PASS" } else { "FAIL" }
        ),
    )
}

/// 3. Second-order decay of the HDW residual of the lifted solution.
fn lifted_hdw_order() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let (report, _) = solve_scalar_field(dir.path());
    let coarse = report.checks.hdw.unwrap().value;
    let (p, psi) = scalar_field_half();
    let phi = lift(&p.section, &psi).unwrap();
    let fine = hdw_residual(&phi, &p.system).unwrap();
    let ratio = coarse / fine.max();
    check(
        (HDW_RATIO.0..=HDW_RATIO.1).contains(&ratio),
        format!(
            "max residual {coarse:.4e} at h=0.05, {:.4e} at h=0.025, ratio {ratio:.3} (need [{}, {}])",
            fine.max(),
            HDW_RATIO.0,
            HDW_RATIO.1
        ),
    )
}

fn run_property(
    cases: u32,
    test: impl Fn(u64) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&any::<u64>(), test).map_err(|e| e.to_string())
}

/// 4. `kernel_difference_residual = -hj_residual` for closed sections.
fn theorem_identity() -> Outcome {
    run_property(THEOREM_CASES, |seed| {
        let mut r = rng(seed);
        let dims = random_dims(&mut r, 3, 2);
        let sys = random_hamiltonian(&mut r, dims);
        let g = section_from_potentials(&random_potentials(&mut r, dims));
        let x = random_solution(&mut r, &sys);
        for _ in 0..THEOREM_POINTS {
            let pt = BasePoint::new(
                dims,
                random_point(&mut r, dims.k(), 1.0),
                random_point(&mut r, dims.n(), 1.0),
            )
            .unwrap();
            let kd = kernel_difference_residual(&x, &g, &pt).unwrap();
            let hj = hj_residual(&g, &sys, &pt).unwrap();
            for j in 0..dims.n() {
                prop_assert!((kd[j] + hj[j]).abs() <= THEOREM_TOL, "{:?} vs {:?}", kd, hj);
            }
        }
        Ok(())
    })
    .map(|_| format!("{THEOREM_CASES} systems x {THEOREM_POINTS} points within {THEOREM_TOL:e}"))
}

/// 5. Differences of solutions lie in the kernel.
fn kernel_property() -> Outcome {
    run_property(KERNEL_TRIALS, |seed| {
        let mut r = rng(seed);
        let dims = random_dims(&mut r, 3, 2);
        let sys = random_hamiltonian(&mut r, dims);
        let a = random_solution(&mut r, &sys);
        let b = random_solution(&mut r, &sys);
        let d = a.difference(&b).unwrap();
        for _ in 0..KERNEL_POINTS {
            let pt = PhasePoint::from_flat(dims, &random_point(&mut r, dims.coord_count(), 1.0))
                .unwrap();
            prop_assert!(is_solution(&a, &sys, &pt, KERNEL_TOL).unwrap().pass);
            prop_assert!(is_solution(&b, &sys, &pt, KERNEL_TOL).unwrap().pass);
            prop_assert!(kernel_check(&d, &pt, KERNEL_TOL).unwrap());
        }
        Ok(())
    })
    .map(|_| format!("{KERNEL_TRIALS} trials x {KERNEL_POINTS} points"))
}

/// 6. k = 1 oscillator.
fn oscillator() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let file = cmd_example("oscillator-k1", None, Some(dir.path())).unwrap();
    let report = cmd_solve(&file, &Overrides::default(), Some(dir.path())).unwrap();
    let (_, rows) = read_csv(&dir.path().join("oscillator-k1.solution.csv")).unwrap();
    let err = rows
        .iter()
        .map(|r| (r[1] - r[0].sin()).abs())
        .fold(0.0, f64::max);
    let t_max = rows.last().unwrap()[0];

    let p = load(&file, &Overrides::default()).unwrap();
    let w = p.potentials.as_ref().unwrap();
    let samples: Vec<Vec<f64>> = (0..=20).map(|i| vec![-0.95 + 0.095 * i as f64]).collect();
    let mut spread = 0.0_f64;
    for x in p.grid.nodes() {
        spread = spread.max(q_independence_check(w, &p.system, &x, &samples).unwrap().spread());
    }
    check(
        report.pass && err <= SINE_TOL && spread <= SPREAD_TOL && (t_max - 1.4).abs() < 1e-12,
        format!("max |psi - sin t| {err:.2e} on [0, {t_max}], residual spread {spread:.2e}"),
    )
}

/// 7. Exact partials against central differences.
fn ad_correctness() -> Outcome {
    run_property(AD_CASES, |seed| {
        let mut r = rng(seed);
        let dims = random_dims(&mut r, 2, 2);
        let vars = names(dims, &all_coords(dims));
        let f = field(&smooth_expr(&mut r, &vars, 4), dims);
        let env = random_point(&mut r, dims.coord_count(), 1.0);
        let c = r.gen_range(0..dims.coord_count());
        let exact = f.partial(&env, c).unwrap();
        let fd = fd_partial(&f, &env, c, DEFAULT_FD_STEP).unwrap();
        let v = f.value(&env).unwrap();
        prop_assert!((exact - fd).abs() <= AD_REL_TOL * (1.0 + v.abs()), "{} vs {}", exact, fd);
        Ok(())
    })
    .map(|_| format!("{AD_CASES} expressions within {AD_REL_TOL:e}*(1+|f|)"))
}

/// 8. Path independence: compatible and incompatible fields.
fn path_witness() -> Outcome {
    let p = example("scalar-field");
    let z = reduce(&p.system, &p.section).unwrap();
    let pi = path_independence(&z, &p.initial_q, &p.grid, &p.integrator).unwrap();
    let bound = PATH_REL_TOL * (1.0 + pi.sup_norm);

    let dims = Dimensions::new(2, 1).unwrap();
    let none = ParamSet::new();
    let bad = ReducedKVectorField::new(
        dims,
        vec![
            ScalarField::parse("q1", dims, &none).unwrap(),
            ScalarField::parse("x1", dims, &none).unwrap(),
        ],
    )
    .unwrap();
    let unit = GridSpec::uniform(2, 0.0, 0.1, 10).unwrap();
    let neg = path_independence(&bad, &[1.0], &unit, &IntegrateOptions::default()).unwrap();
    check(
        pi.deviation <= bound && neg.deviation > INCOMPATIBLE_MIN,
        format!(
            "scalar field {:.2e} <= {bound:.2e}; incompatible field {:.3e} > {INCOMPATIBLE_MIN:e}",
            pi.deviation, neg.deviation
        ),
    )
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 8] = [
        ("1 scalar-field HJ identity", Duration::from_secs(1), hj_identity),
        ("2 closed-form reproduction", Duration::from_secs(30), closed_form_reproduction),
        ("3 lifted HDW second order", Duration::from_secs(60), lifted_hdw_order),
        ("4 kernel-difference identity", Duration::from_secs(30), theorem_identity),
        ("5 kernel property", Duration::from_secs(30), kernel_property),
        ("6 k=1 oscillator", Duration::from_secs(5), oscillator),
        ("7 AD correctness", Duration::from_secs(30), ad_correctness),
        ("8 path independence", Duration::from_secs(30), path_witness),
    ];
    let quiet_panics = panic::take_hook();
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= budget => (true, d),
            Ok(d) => (false, format!("{d}; over the {budget:?} budget")),
            Err(d) => (false, d),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {name:<30} {} ({:.2}s) {detail}",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    panic::set_hook(quiet_panics);
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
