//! The certification pipeline behind `bounds` and `simulate`.

use anyhow::anyhow;
use robint::fidelity::{eckart_lb, gap_lb_simple, gap_lb_tight, half_rule};
use robint::model::{group_qubitwise_commuting, moments};
use robint::robustness::{bound_hamiltonian_with, bound_observable, group_moments, ShiftPolicy};
use robint::simulator::{sample_group_moments, sample_moments_with};
use robint::{
    DensityOperator, FidelityBudget, FidelitySource, Method, MomentStats, Observable, PauliSum,
    RobustnessInterval, SamplingConfig, SpectralInfo,
};
use serde::Serialize;

use crate::args::{BudgetArgs, FidelityArg, SamplingArgs};
use crate::error::{CliError, CliResult};
use crate::io::{finite, SCHEMA_VERSION};

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct Sides {
    pub lower: bool,
    pub upper: bool,
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct Moments {
    pub first: f64,
    pub second: f64,
    pub variance: f64,
    /// Confidence half-widths of the first and second moments when sampled.
    pub half_widths: Option<[f64; 2]>,
}

impl From<&MomentStats> for Moments {
    fn from(s: &MomentStats) -> Self {
        Self {
            first: s.first(),
            second: s.second(),
            variance: s.variance(),
            half_widths: s.half_widths().map(|h| [h.first, h.second]),
        }
    }
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct GroupRecord {
    pub terms: String,
    pub spectrum: [f64; 2],
    pub moments: Moments,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub applicable: Sides,
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct IntervalRecord {
    pub method: &'static str,
    /// `null` stands for an unbounded side.
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub applicable: Sides,
    /// Per-group contributions; empty for the eigenvalue interval, which uses
    /// the moments of the whole Hamiltonian.
    pub groups: Vec<GroupRecord>,
}

impl IntervalRecord {
    fn new(r: &RobustnessInterval, groups: Vec<GroupRecord>) -> Self {
        Self {
            method: r.method.name(),
            lower: finite(r.lower),
            upper: finite(r.upper),
            applicable: Sides {
                lower: r.applicable.lower,
                upper: r.applicable.upper,
            },
            groups,
        }
    }
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct EpsilonRecord {
    pub value: f64,
    pub source: &'static str,
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct StatisticsRecord {
    pub mode: &'static str,
    pub shots: Option<u64>,
    pub repetitions: Option<usize>,
    pub confidence: Option<f64>,
    pub seed: Option<u64>,
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub schema_version: u32,
    pub n_qubits: usize,
    pub hamiltonian: String,
    /// Exact energy moments of the state.
    pub energy: Moments,
    pub epsilon: EpsilonRecord,
    pub statistics: StatisticsRecord,
    pub intervals: Vec<IntervalRecord>,
}

/// Fidelity budget from `--eps` or from the selected spectral bound.
pub fn budget(
    args: &BudgetArgs,
    h: &Observable,
    rho: &DensityOperator,
) -> CliResult<FidelityBudget> {
    let Some(kind) = args.fidelity_from else {
        let eps = args
            .eps
            .ok_or_else(|| anyhow!("give either --eps or --fidelity-from"))?;
        return Ok(FidelityBudget::new(eps, FidelitySource::UserSupplied)?);
    };
    let mut info = SpectralInfo::from_state(h, rho)?
        .with_degenerate_ground(args.degenerate_ground)
        .with_closer_to_ground(args.closer_to_ground);
    if let (Some(l0), Some(l1)) = (args.lambda0, args.lambda1) {
        info = info.with_levels(l0, l1).with_gap(l1 - l0);
    }
    if let Some(gap) = args.gap {
        info = info.with_gap(gap);
    }
    let derived = match kind {
        FidelityArg::Eckart => eckart_lb(&info),
        FidelityArg::Half => half_rule(&info),
        FidelityArg::Gap => gap_lb_simple(&info),
        FidelityArg::GapTight => gap_lb_tight(&info),
    };
    Ok(derived?)
}

/// Sampling configuration when `--sample` is set.
pub fn sampling(args: &SamplingArgs, seed: u64) -> Option<SamplingConfig> {
    args.sample
        .then(|| SamplingConfig::new(args.shots, args.reps, seed).with_confidence(args.confidence))
}

fn group_records(
    h: &PauliSum,
    stats: &[MomentStats],
    eps: f64,
    method: Method,
) -> CliResult<(RobustnessInterval, Vec<GroupRecord>)> {
    let bound = bound_hamiltonian_with(h, stats, eps, method, &ShiftPolicy::ExactMinimum)?;
    let groups = bound
        .groups
        .iter()
        .zip(stats)
        .map(|(g, s)| GroupRecord {
            terms: g.group.to_string(),
            spectrum: [g.spectrum.0, g.spectrum.1],
            moments: s.into(),
            lower: finite(g.interval.lower),
            upper: finite(g.interval.upper),
            applicable: Sides {
                lower: g.interval.applicable.lower,
                upper: g.interval.applicable.upper,
            },
        })
        .collect();
    Ok((bound.interval, groups))
}

/// Bounds for every requested method on `h` and `rho` at the given budget.
pub fn certify(
    h: &PauliSum,
    rho: &DensityOperator,
    budget: FidelityBudget,
    methods: &[Method],
    sampling: Option<SamplingConfig>,
    strict: bool,
) -> CliResult<BoundsReport> {
    if h.dim() != rho.dim() {
        return Err(anyhow!(
            "Hamiltonian acts on dimension {} but the state has dimension {}",
            h.dim(),
            rho.dim()
        )
        .into());
    }
    let dense = Observable::from_pauli(h.clone())?;
    let eps = budget.epsilon();
    let exact_energy = moments(&dense, rho)?;

    let n_groups = group_qubitwise_commuting(h).len();
    let (group_stats, energy_stats) = match &sampling {
        None => (group_moments(h, rho)?, exact_energy),
        Some(config) => (
            sample_group_moments(h, rho, config)?,
            // a stream no group uses
            sample_moments_with(&dense, rho, config, n_groups as u64)?,
        ),
    };

    let mut intervals = Vec::with_capacity(methods.len());
    for &method in methods {
        let record = match method {
            Method::GramianEigenvalue => IntervalRecord::new(
                &bound_observable(&dense, &energy_stats, eps, method)?,
                Vec::new(),
            ),
            _ => {
                let (interval, groups) = group_records(h, &group_stats, eps, method)?;
                IntervalRecord::new(&interval, groups)
            }
        };
        let inapplicable = !record.applicable.lower
            || (method != Method::GramianExpectation && !record.applicable.upper);
        if strict && inapplicable {
            return Err(CliError::Inapplicable(format!(
                "{} bound falls back to its trivial value at eps = {eps}",
                method.name()
            )));
        }
        intervals.push(record);
    }

    Ok(BoundsReport {
        schema_version: SCHEMA_VERSION,
        n_qubits: h.n_qubits(),
        hamiltonian: h.to_string(),
        energy: (&exact_energy).into(),
        epsilon: EpsilonRecord {
            value: eps,
            source: budget.provenance().name(),
        },
        statistics: match sampling {
            None => StatisticsRecord {
                mode: "exact",
                shots: None,
                repetitions: None,
                confidence: None,
                seed: None,
            },
            Some(c) => StatisticsRecord {
                mode: "sampled",
                shots: Some(c.shots),
                repetitions: Some(c.repetitions),
                confidence: Some(c.confidence),
                seed: Some(c.seed),
            },
        },
        intervals,
    })
}
