use std::f64::consts::{FRAC_PI_4, PI};

use rand::{RngExt, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::Serialize;
use serde_json::{json, Value};

use specwass::closedform::{barycenter_lower_bound, interpolate, product_upper_bound};
use specwass::ncgeom::{
    equatorial_distance, midpoint_defect, moyal_ball_distance, propsm_check, two_sheet_pure_distance, BlochState,
};
use specwass::solver::SOLVER_TOL;
use specwass::{
    build_grid_line, solve, CostMatrix, Distribution, ExactInstance, FiniteMetricSpace, Point, TwoSheetSpace,
};

use crate::report::{CliError, CliResult};
use crate::{tolerance, Suite, VerifyArgs};

const GRID_TOL: f64 = 0.02;
const MOYAL_TOL: f64 = 1e-12;
const MIDPOINT_GRID: usize = 10_000;

#[derive(Serialize)]
struct CaseLog {
    suite: &'static str,
    case: String,
    pass: bool,
    detail: Value,
}

/// Streams case logs and keeps the first failure.
struct Log {
    csv: Option<csv::Writer<std::io::Stdout>>,
    failed: usize,
    passed: usize,
    first_failure: Option<Value>,
}

impl Log {
    fn new(csv_out: bool) -> CliResult<Self> {
        let csv = if csv_out {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            w.write_record(["suite", "case", "pass", "detail"])?;
            Some(w)
        } else {
            None
        };
        Ok(Log { csv, failed: 0, passed: 0, first_failure: None })
    }

    fn write(&mut self, entry: &CaseLog) -> CliResult<()> {
        match self.csv.as_mut() {
            Some(w) => {
                w.write_record([entry.suite, &entry.case, &entry.pass.to_string(), &entry.detail.to_string()])?;
                w.flush()?;
            }
            None => crate::report::print_json(entry)?,
        }
        Ok(())
    }

    fn case(&mut self, suite: &'static str, case: impl ToString, pass: bool, detail: Value) -> CliResult<()> {
        if pass {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(json!({ "suite": suite, "case": case.to_string(), "detail": detail }));
            }
        }
        self.write(&CaseLog { suite, case: case.to_string(), pass, detail })
    }

    fn summary(&mut self, suite: &'static str, before: (usize, usize)) -> CliResult<()> {
        let (passed, failed) = (self.passed - before.0, self.failed - before.1);
        let detail = json!({ "passed": passed, "failed": failed, "total": passed + failed });
        self.write(&CaseLog { suite, case: "summary".into(), pass: failed == 0, detail })
    }
}

pub fn run(args: &VerifyArgs, csv_out: bool) -> CliResult<()> {
    let suites: &[Suite] = match args.suite {
        Suite::All => &[
            Suite::Duality,
            Suite::Oracle,
            Suite::Sandwich,
            Suite::Interp,
            Suite::Twosheet,
            Suite::Moyal,
            Suite::Midpoint,
        ],
        ref one => std::slice::from_ref(one),
    };
    let mut log = Log::new(csv_out)?;
    for &suite in suites {
        let before = (log.passed, log.failed);
        let mut rng = SplitMix64::seed_from_u64(args.seed);
        let name = match suite {
            Suite::Duality => duality(&mut log, &mut rng, args.cases.unwrap_or(100), tolerance(args.tol, SOLVER_TOL)?)?,
            Suite::Oracle => oracle(&mut log, &mut rng, args.cases.unwrap_or(200))?,
            Suite::Sandwich => {
                sandwich(&mut log, &mut rng, args.cases.unwrap_or(100), tolerance(args.tol, SOLVER_TOL)?)?
            }
            Suite::Interp => interp(&mut log, &mut rng, args.cases.unwrap_or(50), tolerance(args.tol, SOLVER_TOL)?)?,
            Suite::Twosheet => {
                twosheet(&mut log, &mut rng, args.cases.unwrap_or(50), args.refine, args.tol.unwrap_or(GRID_TOL))?
            }
            Suite::Moyal => moyal(&mut log, &mut rng, args.cases.unwrap_or(10_000), tolerance(args.tol, MOYAL_TOL)?)?,
            Suite::Midpoint => midpoint(&mut log)?,
            Suite::All => unreachable!("expanded above"),
        };
        log.summary(name, before)?;
    }
    match log.first_failure.take() {
        None => Ok(()),
        Some(counterexample) => {
            crate::report::print_json(&json!({ "counterexample": counterexample }))?;
            Err(CliError::Failure(format!("{} of {} cases failed", log.failed, log.failed + log.passed)))
        }
    }
}

fn random_space(rng: &mut SplitMix64, n: usize) -> (Vec<[f64; 2]>, FiniteMetricSpace) {
    let coords: Vec<[f64; 2]> = (0..n).map(|_| [rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)]).collect();
    let points = coords.iter().enumerate().map(|(i, c)| Point::with_coords(format!("p{i}"), c.to_vec())).collect();
    (coords, FiniteMetricSpace::euclidean(points).expect("finite coordinates"))
}

fn random_distribution(rng: &mut SplitMix64, n: usize, max_support: usize) -> Distribution {
    let k = rng.random_range(1..=max_support.min(n));
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.random_range(i..n);
        idx.swap(i, j);
    }
    let mut w = vec![0.0; n];
    for &i in &idx[..k] {
        w[i] = rng.random_range(0.05..1.0);
    }
    Distribution::normalized(w).expect("positive mass")
}

fn instance(coords: &[[f64; 2]], a: &Distribution, b: &Distribution) -> Value {
    json!({ "coords": coords, "mu": a.weights(), "nu": b.weights() })
}

fn w(space: &FiniteMetricSpace, a: &Distribution, b: &Distribution) -> CliResult<f64> {
    Ok(solve(&CostMatrix::from_metric(space), a, b)?.value())
}

fn duality(log: &mut Log, rng: &mut SplitMix64, cases: usize, tol: f64) -> CliResult<&'static str> {
    for case in 0..cases {
        let n = rng.random_range(2..=20);
        let (coords, space) = random_space(rng, n);
        let (a, b) = (random_distribution(rng, n, n), random_distribution(rng, n, n));
        let r = solve(&CostMatrix::from_metric(&space), &a, &b)?;
        let gap = (r.plan.value - r.potential.value).abs();
        let pass = gap <= tol * r.plan.value.max(1.0);
        let mut detail = json!({ "n": n, "primal": r.plan.value, "dual": r.potential.value, "gap": gap });
        if !pass {
            detail["instance"] = instance(&coords, &a, &b);
        }
        log.case("duality", case, pass, detail)?;
    }
    Ok("duality")
}

fn oracle(log: &mut Log, rng: &mut SplitMix64, cases: usize) -> CliResult<&'static str> {
    for case in 0..cases {
        let (coords, space) = random_space(rng, 4);
        let (a, b) = (random_distribution(rng, 4, 4), random_distribution(rng, 4, 4));
        let inst = ExactInstance::new(&CostMatrix::from_metric(&space), &a, &b)?;
        let sol = inst.solve();
        let reference = inst.oracle()?;
        let pass = sol.primal == reference && sol.dual == reference;
        let mut detail = json!({ "value": num_to_f64(&reference), "exact": pass });
        if !pass {
            detail["simplex"] = json!(sol.primal.to_string());
            detail["oracle"] = json!(reference.to_string());
            detail["instance"] = instance(&coords, &a, &b);
        }
        log.case("oracle", case, pass, detail)?;
    }
    Ok("oracle")
}

fn num_to_f64(r: &num_rational::BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

fn sandwich(log: &mut Log, rng: &mut SplitMix64, cases: usize, tol: f64) -> CliResult<&'static str> {
    let coords: Vec<[f64; 2]> = (0..25).map(|k| [(k % 5) as f64, (k / 5) as f64]).collect();
    let points = coords.iter().enumerate().map(|(i, c)| Point::with_coords(format!("g{i}"), c.to_vec())).collect();
    let grid = FiniteMetricSpace::euclidean(points)?;
    let (mut strict_low, mut strict_up) = (0usize, 0usize);
    for case in 0..cases {
        let (a, b) = (random_distribution(rng, 25, 6), random_distribution(rng, 25, 6));
        let lower = barycenter_lower_bound(&grid, &a, &b)?;
        let upper = product_upper_bound(&grid, &a, &b)?;
        let value = w(&grid, &a, &b)?;
        let pass = value - lower >= -tol && upper - value >= -tol;
        strict_low += usize::from(value - lower > tol);
        strict_up += usize::from(upper - value > tol);
        let mut detail = json!({ "lower": lower, "value": value, "upper": upper });
        if !pass {
            detail["instance"] = instance(&coords, &a, &b);
        }
        log.case("sandwich", case, pass, detail)?;
    }
    if cases > 0 {
        let pass = strict_low > 0 && strict_up > 0;
        log.case("sandwich", "strictness", pass, json!({ "strict_lower": strict_low, "strict_upper": strict_up }))?;
    }
    Ok("sandwich")
}

fn interp(log: &mut Log, rng: &mut SplitMix64, cases: usize, tol: f64) -> CliResult<&'static str> {
    for case in 0..cases {
        let n = rng.random_range(2..=12);
        let (coords, space) = random_space(rng, n);
        let (m0, m1) = (random_distribution(rng, n, n), random_distribution(rng, n, n));
        let (s, t): (f64, f64) = (rng.random(), rng.random());
        let lhs = w(&space, &interpolate(&m0, &m1, s)?, &interpolate(&m0, &m1, t)?)?;
        let rhs = (s - t).abs() * w(&space, &m0, &m1)?;
        let pass = (lhs - rhs).abs() <= tol;
        let mut detail = json!({ "s": s, "t": t, "w_st": lhs, "scaled": rhs });
        if !pass {
            detail["instance"] = instance(&coords, &m0, &m1);
        }
        log.case("interp", case, pass, detail)?;
    }
    Ok("interp")
}

fn twosheet(
    log: &mut Log,
    rng: &mut SplitMix64,
    cases: usize,
    refine: usize,
    grid_tol: f64,
) -> CliResult<&'static str> {
    // vertical jump on a dyadic fiber is exact
    let ts = TwoSheetSpace::new(build_grid_line(5, 0.0, 1.0)?, 2.0, 33, None)?;
    let jump = ts.distance(ts.node(0, 0), ts.node(0, ts.top_level()));
    log.case("twosheet", "jump", jump == 0.5, json!({ "norm_di": 2.0, "distance": jump, "expected": 0.5 }))?;

    let mut previous = f64::INFINITY;
    for level in 0..refine {
        let n = 16 * (1 << level) + 1;
        let y = 5 * (n - 1) / 16;
        let base = build_grid_line(n, 0.0, 1.0)?;
        let analytic = two_sheet_pure_distance(base.dist(0, y), 1.0)?;
        let ts = TwoSheetSpace::new(base, 1.0, n, None)?;
        let geodesic = ts.distance(ts.node(0, 0), ts.node(y, ts.top_level()));
        let error = (geodesic - analytic).abs() / analytic;
        // intermediate rows are informational; the finest one must improve and meet the tolerance
        let last = level + 1 == refine;
        let pass = !last || (error < previous && error <= grid_tol);
        let detail = json!({ "base": n, "fiber": n, "geodesic": geodesic, "analytic": analytic, "rel_error": error });
        log.case("twosheet", format!("refine{level}"), pass, detail)?;
        previous = error;
    }

    for case in 0..cases {
        let n = rng.random_range(2..=10);
        let (_, space) = random_space(rng, n);
        let norm_di = rng.random_range(0.1..10.0);
        let (x, y) = (rng.random_range(0..n), rng.random_range(0..n));
        let (pass, detail) = match propsm_check(&space, norm_di, x, y) {
            Ok(r) => (true, json!({ "w_i": r.w_i, "dprime": r.dprime, "residual": r.residual })),
            Err(e) => (false, json!({ "error": e.to_string(), "norm_di": norm_di, "x": x, "y": y })),
        };
        log.case("twosheet", format!("propsm{case}"), pass, detail)?;
    }
    Ok("twosheet")
}

fn random_ball(rng: &mut SplitMix64) -> BlochState {
    loop {
        let (x, y, z) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        if x * x + y * y + z * z <= 1.0 {
            return BlochState::new(x, y, z).expect("inside the ball");
        }
    }
}

fn moyal(log: &mut Log, rng: &mut SplitMix64, cases: usize, tol: f64) -> CliResult<&'static str> {
    let theta = 1.0;
    let origin = BlochState::new(0.0, 0.0, 0.0)?;
    let at = |alpha: f64| -> CliResult<f64> {
        let s = BlochState::new(0.5 * alpha.cos(), 0.0, 0.5 * alpha.sin())?;
        Ok(moyal_ball_distance(&origin, &s, theta)?)
    };
    let (below, above) = (at(FRAC_PI_4 - 1e-13)?, at(FRAC_PI_4 + 1e-13)?);
    log.case("moyal", "continuity", (below - above).abs() <= tol, json!({ "below": below, "above": above }))?;

    for case in 0..cases {
        let (a, b, c) = (random_ball(rng), random_ball(rng), random_ball(rng));
        let d = |p: &BlochState, q: &BlochState| moyal_ball_distance(p, q, theta);
        let slack = d(&a, &b)? + d(&b, &c)? - d(&a, &c)?;
        let mut detail = json!({ "slack": slack });
        let pass = slack >= -tol;
        if !pass {
            detail["states"] = json!([a, b, c]);
        }
        log.case("moyal", format!("triangle{case}"), pass, detail)?;
    }
    for case in 0..cases.min(1000) {
        let (t1, t2) = (rng.random_range(0.0..2.0 * PI), rng.random_range(0.0..2.0 * PI));
        let phi = rng.random_range(-10.0..10.0);
        let base = equatorial_distance(t1, t2, 1.0, 1.0)?;
        let rotated = equatorial_distance(t1 + phi, t2 + phi, 1.0, 1.0)?;
        let pass = (base - rotated).abs() <= tol;
        log.case("moyal", format!("rotation{case}"), pass, json!({ "theta1": t1, "theta2": t2, "phi": phi }))?;
    }
    Ok("moyal")
}

fn midpoint(log: &mut Log) -> CliResult<&'static str> {
    for dt in [0.1, 0.5, 1.0, 2.0, 3.0] {
        let defect = midpoint_defect(0.0, dt, MIDPOINT_GRID)?;
        log.case("midpoint", dt, defect > 0.0, json!({ "delta_theta": dt, "defect": defect, "grid": MIDPOINT_GRID }))?;
    }
    Ok("midpoint")
}
