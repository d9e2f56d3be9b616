use anyhow::anyhow;
use robint::linalg::{eig_hermitian, eigenvalues};
use robint::model::moments;
use robint::oracle::exact_ground;
use robint::robustness::{bound_observable, interval, sdp_interval};
use robint::simulator::{minimize_energy, MinimizeOptions};
use robint::verify::{run_all, SuiteReport, SuiteSizes};
use robint::{
    Circuit, DensityOperator, FidelityBudget, FidelitySource, Method, MomentStats, NoiseModel,
    Observable, RobustnessInterval,
};
use serde::Serialize;

use crate::args::{BoundsArgs, CheckTablesArgs, SimulateArgs, SweepArgs, VerifyArgs};
use crate::certify::{budget, certify, sampling, BoundsReport};
use crate::error::{CliError, CliResult};
use crate::io::{emit, read_hamiltonian, read_state, state_json, SCHEMA_VERSION};
use crate::tables;

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

pub fn bounds(args: &BoundsArgs) -> CliResult<()> {
    let rho = read_state(&args.state)?;
    let n_qubits = rho.dim().trailing_zeros() as usize;
    if 1usize << n_qubits != rho.dim() {
        return Err(CliError::Parse(format!(
            "{}: dimension {} is not a power of two",
            args.state.display(),
            rho.dim()
        )));
    }
    let h = read_hamiltonian(&args.hamiltonian, Some(n_qubits))?;
    let dense = Observable::from_pauli(h.clone())?;
    let budget = budget(&args.budget, &dense, &rho)?;
    let report = certify(
        &h,
        &rho,
        budget,
        &args.method.methods(),
        sampling(&args.sampling, args.seed),
        args.strict,
    )?;
    emit(args.out.as_deref(), &to_json(&report))
}

/// `start:stop:count` with both endpoints.
pub fn parse_range(spec: &str) -> CliResult<Vec<f64>> {
    let bad = || CliError::Parse(format!("--eps-range {spec:?}: expected start:stop:count"));
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, stop, count] = parts.as_slice() else {
        return Err(bad());
    };
    let start: f64 = start.trim().parse().map_err(|_| bad())?;
    let stop: f64 = stop.trim().parse().map_err(|_| bad())?;
    let count: usize = count.trim().parse().map_err(|_| bad())?;
    Ok(match count {
        0 => Vec::new(),
        1 => vec![start],
        n => (0..n)
            .map(|k| start + (stop - start) * k as f64 / (n - 1) as f64)
            .collect(),
    })
}

fn applicability(r: &RobustnessInterval) -> &'static str {
    match (r.applicable.lower, r.applicable.upper) {
        (true, true) => "both",
        (true, false) => "lower",
        (false, true) => "upper",
        (false, false) => "none",
    }
}

fn cell(x: f64) -> String {
    if x.is_finite() {
        x.to_string()
    } else {
        String::new()
    }
}

enum SweepSource {
    Fixed(MomentStats),
    Observable(Observable, MomentStats),
}

/// Interval of a projection with `<P> = p`, on the `[0, 1]` scale.
fn projection_interval(p: f64, eps: f64, method: Method) -> robint::Result<RobustnessInterval> {
    match method {
        Method::Sdp => {
            let s = sdp_interval(2.0 * p - 1.0, eps)?;
            Ok(RobustnessInterval {
                lower: 0.5 * (s.lower + 1.0),
                upper: 0.5 * (s.upper + 1.0),
                ..s
            })
        }
        _ => interval(method, &MomentStats::from_projection(p)?, eps),
    }
}

pub fn sweep(args: &SweepArgs) -> CliResult<()> {
    let grid = match &args.eps_range {
        Some(spec) => parse_range(spec)?,
        None => args.eps.clone(),
    };
    let methods = args.method.methods();
    let projection = !args.projection.is_empty();

    let source = if projection {
        None
    } else if let (Some(h), Some(state)) = (&args.hamiltonian, &args.state) {
        let rho = read_state(state)?;
        let n_qubits = rho.dim().trailing_zeros() as usize;
        let a = Observable::from_pauli(read_hamiltonian(h, Some(n_qubits))?)?;
        let stats = moments(&a, &rho)?;
        Some(SweepSource::Observable(a, stats))
    } else {
        let first = args
            .first
            .ok_or_else(|| anyhow!("give --first, --projection, or -H with --state"))?;
        let variance = args.variance.unwrap_or(1.0 - first * first);
        Some(SweepSource::Fixed(MomentStats::from_mean_variance(
            first, variance,
        )?))
    };

    let mut out = csv::Writer::from_writer(Vec::new());
    let header: &[&str] = if projection {
        &["p", "eps", "method", "lower", "upper", "applicable"]
    } else {
        &["eps", "method", "lower", "upper", "applicable"]
    };
    out.write_record(header).map_err(anyhow::Error::from)?;

    let ps: Vec<Option<f64>> = if projection {
        args.projection.iter().map(|&p| Some(p)).collect()
    } else {
        vec![None]
    };
    for &eps in &grid {
        for &p in &ps {
            for &method in &methods {
                let result = match (&source, p) {
                    (_, Some(p)) => projection_interval(p, eps, method),
                    (Some(SweepSource::Observable(a, stats)), None) => {
                        bound_observable(a, stats, eps, method)
                    }
                    (Some(SweepSource::Fixed(stats)), None) => interval(method, stats, eps),
                    (None, None) => unreachable!("projection mode always carries p"),
                };
                let mut record: Vec<String> = p.map(|p| p.to_string()).into_iter().collect();
                record.push(eps.to_string());
                record.push(method.name().to_string());
                match result {
                    Ok(r) => {
                        let flags = applicability(&r);
                        let trivial = !r.applicable.lower
                            || (method != Method::GramianExpectation && !r.applicable.upper);
                        if args.strict && trivial {
                            return Err(CliError::Inapplicable(format!(
                                "{} bound is trivial at eps = {eps}",
                                method.name()
                            )));
                        }
                        record.extend([cell(r.lower), cell(r.upper), flags.to_string()]);
                    }
                    Err(e) => {
                        if args.strict {
                            return Err(e.into());
                        }
                        eprintln!("robint: {} at eps = {eps}: {e}", method.name());
                        record.extend([String::new(), String::new(), "none".to_string()]);
                    }
                }
                out.write_record(&record).map_err(anyhow::Error::from)?;
            }
        }
    }
    let bytes = out.into_inner().map_err(|e| anyhow!("{e}"))?;
    emit(
        args.out.as_deref(),
        &String::from_utf8(bytes).expect("CSV is UTF-8"),
    )
}

pub fn check_tables(args: &CheckTablesArgs) -> CliResult<()> {
    let text = tables::load(args.fixture.as_deref())?;
    let report = tables::check_tables(&text)?;
    match &args.out {
        Some(path) => {
            emit(Some(path), &to_json(&report))?;
            eprint!("{}", tables::render(&report));
        }
        None => print!("{}", tables::render(&report)),
    }
    if report.failures > 0 {
        return Err(CliError::ChecksFailed(format!(
            "{} of {} rows fail containment",
            report.failures,
            report.rows.len()
        )));
    }
    Ok(())
}

#[derive(Serialize, Debug)]
struct VqeRecord {
    energy: f64,
    params: Vec<f64>,
    sweeps: usize,
    layers: usize,
    p1: f64,
    p2: f64,
    seed: u64,
}

#[derive(Serialize, Debug)]
struct GroundRecord {
    lambda0: f64,
    lambda1: Option<f64>,
    degeneracy: usize,
}

#[derive(Serialize, Debug)]
struct SimulateReport {
    schema_version: u32,
    vqe: VqeRecord,
    ground: GroundRecord,
    /// Largest overlap of the state with a ground-space vector.
    fidelity: f64,
    bounds: BoundsReport,
}

/// `max <psi|rho|psi>` over unit vectors in the ground space of `h`.
fn ground_fidelity(h: &Observable, rho: &DensityOperator) -> f64 {
    let ground = exact_ground(h);
    let cut = match ground.lambda1 {
        Some(l1) => 0.5 * (ground.lambda0 + l1),
        None => f64::INFINITY,
    };
    let p = eig_hermitian(h.matrix()).projector(|l| l < cut);
    let inner = eigenvalues(&p.sandwich(rho.matrix()));
    inner[inner.len() - 1].clamp(0.0, 1.0)
}

pub fn simulate(args: &SimulateArgs) -> CliResult<()> {
    let h = read_hamiltonian(&args.hamiltonian, None)?;
    let template = Circuit::hardware_efficient(h.n_qubits(), args.layers)?;
    let noise = NoiseModel::new(args.p1, args.p2)?;
    let options = MinimizeOptions {
        max_sweeps: args.max_sweeps,
        ..MinimizeOptions::default()
    };
    let vqe = minimize_energy(&h, &template, &noise, args.seed, &options)?;

    let dense = Observable::from_pauli(h.clone())?;
    let ground = exact_ground(&dense);
    let fidelity = ground_fidelity(&dense, &vqe.state);
    let budget = FidelityBudget::new((1.0 - fidelity).max(0.0), FidelitySource::Exact)?;
    let bounds = certify(
        &h,
        &vqe.state,
        budget,
        &args.method.methods(),
        sampling(&args.sampling, args.seed),
        args.strict,
    )?;

    if let Some(path) = &args.state_out {
        emit(Some(path), &state_json(&vqe.state))?;
    }
    let report = SimulateReport {
        schema_version: SCHEMA_VERSION,
        vqe: VqeRecord {
            energy: vqe.energy,
            params: vqe.params,
            sweeps: vqe.sweeps,
            layers: args.layers,
            p1: args.p1,
            p2: args.p2,
            seed: args.seed,
        },
        ground: GroundRecord {
            lambda0: ground.lambda0,
            lambda1: ground.lambda1,
            degeneracy: ground.degeneracy,
        },
        fidelity,
        bounds,
    };
    emit(args.out.as_deref(), &to_json(&report))
}

#[derive(Serialize, Debug)]
struct SuiteRecord {
    name: &'static str,
    passed: bool,
    cases: usize,
    checks: usize,
    violations: usize,
    worst: f64,
    detail: String,
}

impl From<&SuiteReport> for SuiteRecord {
    fn from(r: &SuiteReport) -> Self {
        Self {
            name: r.name,
            passed: r.passed,
            cases: r.cases,
            checks: r.checks,
            violations: r.violations,
            worst: r.worst,
            detail: r.detail.clone(),
        }
    }
}

#[derive(Serialize, Debug)]
struct VerifyReport {
    schema_version: u32,
    seed: u64,
    quick: bool,
    suites: Vec<SuiteRecord>,
}

pub fn verify(args: &VerifyArgs) -> CliResult<()> {
    let sizes = if args.quick {
        SuiteSizes::QUICK
    } else {
        SuiteSizes::FULL
    };
    let mut reports = run_all(sizes, args.seed)?;
    let at = reports
        .iter()
        .position(|r| r.name == "fidelity")
        .map_or(reports.len(), |k| k + 1);
    reports.insert(at, crate::tables::table_suite()?);
    for r in &reports {
        println!(
            "{} {:<20} {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.detail
        );
    }
    if let Some(path) = &args.out {
        let report = VerifyReport {
            schema_version: SCHEMA_VERSION,
            seed: args.seed,
            quick: args.quick,
            suites: reports.iter().map(SuiteRecord::from).collect(),
        };
        emit(Some(path), &to_json(&report))?;
    }
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.name)
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::ChecksFailed(format!(
            "failing suites: {}",
            failed.join(", ")
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("0:0.2:3").unwrap(), vec![0.0, 0.1, 0.2]);
        assert!(parse_range("0:1:0").unwrap().is_empty());
        assert_eq!(parse_range("0.3:1:1").unwrap(), vec![0.3]);
        assert!(matches!(parse_range("0:1"), Err(CliError::Parse(_))));
    }

    #[test]
    fn projection_sdp_is_unscaled() {
        let r = projection_interval(0.5, 0.1, Method::Sdp).unwrap();
        assert!((r.lower - 0.2).abs() < 1e-12);
        let g = projection_interval(0.5, 0.1, Method::GramianExpectation).unwrap();
        assert!((g.lower - r.lower).abs() < 1e-12);
    }
}
