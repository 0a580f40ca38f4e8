use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::json;

use specwass::closedform::{
    barycenter_lower_bound, distance_to_pure, optimal_potential, product_upper_bound, wasserstein_1d_on,
    wavepacket_distance,
};
use specwass::io::{load_bloch, load_distribution, load_space, parse_bloch};
use specwass::ncgeom::{equatorial_distance, jump_cost, moyal_ball_distance, BlochState, JumpCostParams, ShiftMode};
use specwass::shape::Shape;
use specwass::solver::SOLVER_TOL;
use specwass::{duality_gap, solve, solve_dual, solve_primal, CostMatrix, Distribution, Error, FiniteMetricSpace};

use crate::report::{usage, CliError, CliResult, RunReport};
use crate::{tolerance, DistArgs, Method, Shift};

pub fn run(args: &DistArgs, csv_out: bool) -> CliResult<()> {
    let start = Instant::now();
    let mut report = compute(args)?;
    if args.timing {
        report.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    report.emit(csv_out)
}

fn need<'a, T>(v: &'a Option<T>, flag: &str, method: &str) -> CliResult<&'a T> {
    v.as_ref().ok_or_else(|| CliError::Usage(format!("{method} requires --{flag}")))
}

struct Inputs {
    space: FiniteMetricSpace,
    mu: Distribution,
    nu: Distribution,
}

fn load_pair(args: &DistArgs, method: &str) -> CliResult<Inputs> {
    let space = load_space(need(&args.space, "space", method)?)?;
    let mu = load_distribution(need(&args.mu, "mu", method)?, &space)?;
    let nu = load_distribution(need(&args.nu, "nu", method)?, &space)?;
    Ok(Inputs { space, mu, nu })
}

fn bloch(arg: &Option<String>, flag: &str) -> CliResult<BlochState> {
    let text = need(arg, flag, "moyal")?;
    if text.trim_start().starts_with('[') {
        Ok(parse_bloch(text)?)
    } else {
        Ok(load_bloch(PathBuf::from(text))?)
    }
}

fn report(method: &str, value: f64, certificate: Option<serde_json::Value>) -> RunReport {
    RunReport { method: method.to_string(), value, certificate, wall_time_ms: None }
}

fn compute(args: &DistArgs) -> CliResult<RunReport> {
    let name = format!("{:?}", args.method).to_lowercase();
    match args.method {
        Method::Primal => {
            let p = load_pair(args, &name)?;
            let plan = solve_primal(&CostMatrix::from_metric(&p.space), &p.mu, &p.nu)?;
            Ok(report("primal", plan.value, None))
        }
        Method::Dual => {
            let p = load_pair(args, &name)?;
            let pot = solve_dual(&CostMatrix::from_metric(&p.space), &p.mu, &p.nu)?;
            Ok(report("dual", pot.value, None))
        }
        Method::Both => {
            let p = load_pair(args, &name)?;
            let tol = tolerance(args.tol, SOLVER_TOL)?;
            let r = solve(&CostMatrix::from_metric(&p.space), &p.mu, &p.nu)?;
            let gap = duality_gap(&r).or_else(|e| match e {
                Error::Gap { gap, .. } => Ok(gap),
                other => Err(other),
            })?;
            let cert = json!({ "primal": r.plan.value, "dual": r.potential.value, "gap": gap, "tol": tol });
            if gap > tol * r.value().max(1.0) {
                eprintln!("{}", serde_json::to_string(&cert).unwrap_or_default());
                return Err(CliError::Failure(format!("duality gap {gap:e} exceeds {tol:e}")));
            }
            Ok(report("primal+dual", r.value(), Some(cert)))
        }
        Method::Closed1d => {
            let p = load_pair(args, &name)?;
            Ok(report("closed1d", wasserstein_1d_on(&p.space, &p.mu, &p.nu)?, None))
        }
        Method::Expect => {
            let space = load_space(need(&args.space, "space", &name)?)?;
            let id = need(&args.point, "point", &name)?;
            let x = space.index_of(id).ok_or_else(|| CliError::Usage(format!("no point with id {id:?}")))?;
            let nu = load_distribution(need(&args.nu, "nu", &name)?, &space)?;
            Ok(report("expect", distance_to_pure(&space, x, &nu)?, None))
        }
        Method::Bounds => {
            let p = load_pair(args, &name)?;
            let lower = barycenter_lower_bound(&p.space, &p.mu, &p.nu)?;
            let upper = product_upper_bound(&p.space, &p.mu, &p.nu)?;
            let value = solve(&CostMatrix::from_metric(&p.space), &p.mu, &p.nu)?.value();
            Ok(report("bounds", value, Some(json!({ "lower": lower, "upper": upper }))))
        }
        Method::Wavepacket => wavepacket(args),
        Method::Moyal => {
            let theta = *need(&args.theta, "theta", &name)?;
            let d = moyal_ball_distance(&bloch(&args.a, "a")?, &bloch(&args.b, "b")?, theta)?;
            Ok(report("moyal", d, None))
        }
        Method::Equator => {
            let t1 = *need(&args.theta1, "theta1", &name)?;
            let t2 = *need(&args.theta2, "theta2", &name)?;
            Ok(report("equator", equatorial_distance(t1, t2, args.r, args.dd)?, None))
        }
        Method::Jump => {
            let p = load_pair(args, &name)?;
            let norm_di = *need(&args.norm_di, "norm-di", &name)?;
            let shift = match args.shift {
                Shift::None => ShiftMode::None,
                Shift::Linear => ShiftMode::Linear,
                Shift::Quadratic => ShiftMode::Quadratic,
            };
            let cost = jump_cost(&p.space, JumpCostParams::new(norm_di, shift)?)?;
            let r = solve(&cost, &p.mu, &p.nu)?;
            Ok(report("jump", r.value(), Some(json!({ "dual": r.potential.value, "gap": r.gap }))))
        }
    }
}

fn wavepacket(args: &DistArgs) -> CliResult<RunReport> {
    let sigma = *need(&args.sigma, "sigma", "wavepacket")?;
    let sigma_p = *need(&args.sigma_p, "sigma-p", "wavepacket")?;
    if args.x.is_empty() || args.y.is_empty() {
        return usage("wavepacket requires --x and --y");
    }
    let shape = match args.shape.strip_prefix("table:") {
        Some(path) if !Path::new(path).exists() => return usage(format!("no table file {path}")),
        _ => Shape::parse(&args.shape)?,
    };
    let value = wavepacket_distance(&shape, sigma, sigma_p, &args.x, &args.y, args.nodes)?;
    let cert = match optimal_potential(&args.x, &args.y, sigma, sigma_p) {
        Ok(pot) => {
            let pairing = pot.pairing(&shape, sigma, sigma_p, &args.x, &args.y, args.nodes);
            Some(json!({ "potential": pot, "pairing": pairing }))
        }
        Err(Error::Degenerate(_)) => None,
        Err(e) => return Err(e.into()),
    };
    Ok(report("wavepacket", value, cert))
}
