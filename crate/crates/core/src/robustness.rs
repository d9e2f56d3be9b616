//! Closed-form robustness intervals.
//!
//! Given statistics of an observable on an approximate state `rho` and a
//! budget `eps` with `F(rho, sigma) >= 1 - eps`, each routine returns an
//! interval guaranteed to contain `<A>_sigma` (or an eigenvalue of `A` when
//! `sigma` is an eigenstate). Outside a bound's applicability region the
//! affected side falls back to the trivial bound and its flag is cleared.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::{
    group_qubitwise_commuting, group_spectrum, moments, DensityOperator, MomentStats, Observable,
    PauliSum,
};
use crate::scalar::{clamp, Real};

/// Tolerance on `|<A>| <= 1` for normalized observables.
const UNIT_RANGE_TOL: f64 = 1e-9;

/// `eps` this close to one is treated as one by the eigenvalue bound.
const EPS_ONE_TOL: f64 = 1e-12;

/// Where a fidelity budget came from.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum FidelitySource {
    Exact,
    Eckart,
    HalfRule,
    GapSimple,
    GapTight,
    UserSupplied,
}

impl FidelitySource {
    pub fn name(self) -> &'static str {
        match self {
            FidelitySource::Exact => "exact",
            FidelitySource::Eckart => "eckart",
            FidelitySource::HalfRule => "half-rule",
            FidelitySource::GapSimple => "gap-simple",
            FidelitySource::GapTight => "gap-tight",
            FidelitySource::UserSupplied => "user-supplied",
        }
    }
}

/// `eps` with `F(rho, sigma) >= 1 - eps`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct FidelityBudget<T> {
    epsilon: T,
    provenance: FidelitySource,
}

impl<T: Real> FidelityBudget<T> {
    pub fn new(epsilon: T, provenance: FidelitySource) -> Result<Self> {
        check_eps(epsilon)?;
        Ok(Self {
            epsilon,
            provenance,
        })
    }

    /// Budget from a fidelity lower bound, clipped into `[0, 1]` first.
    pub fn from_fidelity(fidelity_lb: T, provenance: FidelitySource) -> Self {
        Self {
            epsilon: T::one() - clamp(fidelity_lb, T::zero(), T::one()),
            provenance,
        }
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    pub fn fidelity_lower_bound(&self) -> T {
        T::one() - self.epsilon
    }

    pub fn provenance(&self) -> FidelitySource {
        self.provenance
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Sdp,
    GramianExpectation,
    GramianEigenvalue,
}

impl Method {
    pub const ALL: [Method; 3] = [
        Method::Sdp,
        Method::GramianExpectation,
        Method::GramianEigenvalue,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Sdp => "sdp",
            Method::GramianExpectation => "gramian-expectation",
            Method::GramianEigenvalue => "gramian-eigenvalue",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Per-side applicability of a closed form.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Applicability {
    pub lower: bool,
    pub upper: bool,
}

impl Applicability {
    pub const BOTH: Self = Self {
        lower: true,
        upper: true,
    };

    pub fn and(self, other: Self) -> Self {
        Self {
            lower: self.lower && other.lower,
            upper: self.upper && other.upper,
        }
    }
}

/// `[lower, upper]` with the method that produced it.
///
/// One-sided results carry `upper = +inf` with `applicable.upper = false`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct RobustnessInterval<T> {
    pub lower: T,
    pub upper: T,
    pub method: Method,
    pub applicable: Applicability,
    pub epsilon: T,
}

impl<T: Real> RobustnessInterval<T> {
    fn point(value: T, method: Method, upper_side: bool) -> Self {
        Self {
            lower: value,
            upper: if upper_side { value } else { T::infinity() },
            method,
            applicable: Applicability {
                lower: true,
                upper: upper_side,
            },
            epsilon: T::zero(),
        }
    }

    /// True if `lower - tol <= x <= upper + tol`.
    pub fn contains(&self, x: T, tol: T) -> bool {
        self.lower - tol <= x && x <= self.upper + tol
    }

    pub fn width(&self) -> T {
        self.upper - self.lower
    }

    /// Image under `x -> slope * x + intercept` with `slope > 0`.
    fn map(self, slope: T, intercept: T) -> Self {
        Self {
            lower: slope * self.lower + intercept,
            upper: slope * self.upper + intercept,
            ..self
        }
    }
}

fn check_eps<T: Real>(eps: T) -> Result<()> {
    if eps >= T::zero() && eps <= T::one() {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name: "eps",
            value: eps.as_f64(),
            range: "[0, 1]",
        })
    }
}

fn check_unit_mean<T: Real>(first: T) -> Result<T> {
    if first.abs() > T::one() + T::tol(UNIT_RANGE_TOL) || first.is_nan() {
        return Err(Error::OutOfRange {
            name: "first",
            value: first.as_f64(),
            range: "[-1, 1]",
        });
    }
    Ok(clamp(first, -T::one(), T::one()))
}

/// Interval for `-I <= A <= I` from `a = <A>_rho`.
///
/// `(1 - 2 eps) a -+ 2 sqrt(eps (1 - eps) (1 - a^2))`; the lower side holds
/// for `eps <= (1 + a) / 2`, the upper for `eps <= (1 - a) / 2`.
pub fn sdp_interval<T: Real>(first: T, eps: T) -> Result<RobustnessInterval<T>> {
    let a = check_unit_mean(first)?;
    check_eps(eps)?;
    if eps == T::zero() {
        return Ok(RobustnessInterval::point(a, Method::Sdp, true));
    }
    let one = T::one();
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let center = (one - two * eps) * a;
    let radius = two * (eps * (one - eps) * (one - a * a)).max(T::zero()).sqrt();
    // a few ulps of slack: on the boundary the formula already equals the trivial value
    let slack = T::epsilon() * T::lit(8.0);
    let applicable = Applicability {
        lower: eps <= half * (one + a) + slack,
        upper: eps <= half * (one - a) + slack,
    };
    Ok(RobustnessInterval {
        lower: if applicable.lower {
            (center - radius).max(-one)
        } else {
            -one
        },
        upper: if applicable.upper {
            (center + radius).min(one)
        } else {
            one
        },
        method: Method::Sdp,
        applicable,
        epsilon: eps,
    })
}

/// Lower bound for `A >= 0` with `<A>_rho > 0`.
///
/// `(1 - 2 eps) <A> - 2 sqrt(eps (1 - eps)) dA + eps <A^2> / <A>`, valid for
/// `sqrt((1 - eps) / eps) >= dA / <A>`; the trivial bound is 0.
pub fn gramian_expectation_lb<T: Real>(
    stats: &MomentStats<T>,
    eps: T,
) -> Result<RobustnessInterval<T>> {
    let a = stats.first();
    if !(a > T::zero()) {
        return Err(Error::NonPositiveMean { first: a.as_f64() });
    }
    check_eps(eps)?;
    if eps == T::zero() {
        return Ok(RobustnessInterval::point(
            a,
            Method::GramianExpectation,
            false,
        ));
    }
    let one = T::one();
    let two = T::lit(2.0);
    let delta = stats.std_dev();
    // squared form of sqrt((1 - eps) / eps) >= dA / <A>
    let applicable = (one - eps) * a * a >= eps * stats.variance();
    let lower = if applicable {
        (one - two * eps) * a - two * (eps * (one - eps)).sqrt() * delta + eps * stats.second() / a
    } else {
        T::zero()
    };
    Ok(RobustnessInterval {
        lower,
        upper: T::infinity(),
        method: Method::GramianExpectation,
        applicable: Applicability {
            lower: applicable,
            upper: false,
        },
        epsilon: eps,
    })
}

/// Interval for an eigenvalue `lambda` of `A` whose eigenstate `sigma` has
/// `F(rho, sigma) >= 1 - eps`: `<A> -+ dA sqrt(eps / (1 - eps))`.
pub fn gramian_eigenvalue_interval<T: Real>(
    stats: &MomentStats<T>,
    eps: T,
) -> Result<RobustnessInterval<T>> {
    check_eps(eps)?;
    if eps >= T::one() - T::tol(EPS_ONE_TOL) {
        return Err(Error::EpsilonIsOne { eps: eps.as_f64() });
    }
    let a = stats.first();
    if eps == T::zero() {
        return Ok(RobustnessInterval::point(
            a,
            Method::GramianEigenvalue,
            true,
        ));
    }
    let half_width = stats.std_dev() * (eps / (T::one() - eps)).sqrt();
    Ok(RobustnessInterval {
        lower: a - half_width,
        upper: a + half_width,
        method: Method::GramianEigenvalue,
        applicable: Applicability::BOTH,
        epsilon: eps,
    })
}

/// Dispatches to the closed form of `method`.
///
/// For [`Method::Sdp`] the stats must belong to a normalized observable; for
/// [`Method::GramianExpectation`] to a positive semidefinite one.
pub fn interval<T: Real>(
    method: Method,
    stats: &MomentStats<T>,
    eps: T,
) -> Result<RobustnessInterval<T>> {
    match method {
        Method::Sdp => sdp_interval(stats.first(), eps),
        Method::GramianExpectation => gramian_expectation_lb(stats, eps),
        Method::GramianEigenvalue => gramian_eigenvalue_interval(stats, eps),
    }
}

/// Minimal type-II error for pure states.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct BetaStar<T> {
    pub value: T,
    /// False when `1 - eps < alpha0`; the value is then 0.
    pub condition_met: bool,
}

/// `alpha0 (2 eps - 1) + (1 - eps) - 2 sqrt(eps alpha0 (1 - eps) (1 - alpha0))`.
///
/// A lower bound on the type-II error at type-I level `alpha0` for any pair
/// with `F >= 1 - eps`, with equality for pure states.
pub fn beta_star_pure<T: Real>(alpha0: T, eps: T) -> Result<BetaStar<T>> {
    if !(alpha0 >= T::zero() && alpha0 <= T::one()) {
        return Err(Error::OutOfRange {
            name: "alpha0",
            value: alpha0.as_f64(),
            range: "[0, 1]",
        });
    }
    check_eps(eps)?;
    let one = T::one();
    if one - eps < alpha0 - T::epsilon() * T::lit(4.0) {
        return Ok(BetaStar {
            value: T::zero(),
            condition_met: false,
        });
    }
    let two = T::lit(2.0);
    let radicand = (eps * alpha0 * (one - eps) * (one - alpha0)).max(T::zero());
    let value = alpha0 * (two * eps - one) + (one - eps) - two * radicand.sqrt();
    Ok(BetaStar {
        value: clamp(value, T::zero(), one),
        condition_met: true,
    })
}

/// Worst-case corner of the moment confidence box.
///
/// Every closed form is monotone in `<A>` on its applicability region (and the
/// region's edge meets the trivial bound), and the expectation lower bound is
/// decreasing in `dA`; so lower bounds are evaluated at `<A> - hw_first` and
/// the largest variance in the box, upper bounds at `<A> + hw_first`. Missing
/// half-widths are treated as zero.
pub fn sampling_adjusted_interval<T: Real>(
    stats: &MomentStats<T>,
    eps: T,
    method: Method,
) -> Result<RobustnessInterval<T>> {
    let Some(hw) = stats.half_widths() else {
        return interval(method, stats, eps);
    };
    let a = stats.first();
    let lo_mean = a - hw.first;
    let hi_mean = a + hw.first;
    let min_sq = if lo_mean <= T::zero() && hi_mean >= T::zero() {
        T::zero()
    } else {
        (lo_mean * lo_mean).min(hi_mean * hi_mean)
    };
    let var_hi = (stats.second() + hw.second - min_sq).max(stats.variance());

    match method {
        Method::Sdp => {
            let one = T::one();
            let lo = sdp_interval(clamp(lo_mean, -one, one), eps)?;
            let hi = sdp_interval(clamp(hi_mean, -one, one), eps)?;
            Ok(RobustnessInterval {
                lower: lo.lower,
                upper: hi.upper,
                applicable: Applicability {
                    lower: lo.applicable.lower,
                    upper: hi.applicable.upper,
                },
                ..lo
            })
        }
        Method::GramianExpectation => {
            check_eps(eps)?;
            if !(a > T::zero()) {
                return Err(Error::NonPositiveMean { first: a.as_f64() });
            }
            if lo_mean <= T::zero() {
                return Ok(RobustnessInterval {
                    lower: T::zero(),
                    upper: T::infinity(),
                    method,
                    applicable: Applicability {
                        lower: false,
                        upper: false,
                    },
                    epsilon: eps,
                });
            }
            let corner = MomentStats::from_mean_variance(lo_mean, var_hi)?;
            gramian_expectation_lb(&corner, eps)
        }
        Method::GramianEigenvalue => {
            let lo = gramian_eigenvalue_interval(
                &MomentStats::from_mean_variance(lo_mean, var_hi)?,
                eps,
            )?;
            let hi = gramian_eigenvalue_interval(
                &MomentStats::from_mean_variance(hi_mean, var_hi)?,
                eps,
            )?;
            Ok(RobustnessInterval {
                upper: hi.upper,
                ..lo
            })
        }
    }
}

/// Uses the sampling-adjusted form when half-widths are present.
fn interval_for<T: Real>(
    method: Method,
    stats: &MomentStats<T>,
    eps: T,
) -> Result<RobustnessInterval<T>> {
    if stats.half_widths().is_some() {
        sampling_adjusted_interval(stats, eps, method)
    } else {
        interval(method, stats, eps)
    }
}

/// Shift constants for the expectation lower bound.
#[derive(Clone, Debug, PartialEq, Default)]
pub enum ShiftPolicy<T> {
    /// `c = -lambda_min` of each group.
    #[default]
    ExactMinimum,
    /// One constant per group; each must satisfy `c >= -lambda_min`.
    PerGroup(Vec<T>),
}

/// Bound contribution of a single group.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupBound<T> {
    pub group: PauliSum<T>,
    pub spectrum: (T, T),
    /// On the group's original scale.
    pub interval: RobustnessInterval<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianBound<T> {
    pub interval: RobustnessInterval<T>,
    pub groups: Vec<GroupBound<T>>,
}

/// Exact moments of every qubit-wise commuting group of `h` on `rho`, in group order.
pub fn group_moments<T: Real>(
    h: &PauliSum<T>,
    rho: &DensityOperator<T>,
) -> Result<Vec<MomentStats<T>>> {
    group_qubitwise_commuting(h)
        .into_iter()
        .map(|g| moments(&Observable::from_pauli(g)?, rho))
        .collect()
}

/// Aggregate bound for `H = sum_k H_k` over its qubit-wise commuting groups.
///
/// `stats[k]` are the moments of group `k` of [`group_qubitwise_commuting`].
pub fn bound_hamiltonian<T: Real>(
    h: &PauliSum<T>,
    stats: &[MomentStats<T>],
    eps: T,
    method: Method,
) -> Result<RobustnessInterval<T>> {
    bound_hamiltonian_with(h, stats, eps, method, &ShiftPolicy::ExactMinimum).map(|b| b.interval)
}

/// [`bound_hamiltonian`] with an explicit shift policy and per-group detail.
pub fn bound_hamiltonian_with<T: Real>(
    h: &PauliSum<T>,
    stats: &[MomentStats<T>],
    eps: T,
    method: Method,
    shift: &ShiftPolicy<T>,
) -> Result<HamiltonianBound<T>> {
    if method == Method::GramianEigenvalue {
        return Err(Error::UnsupportedMethod(
            "the eigenvalue interval does not decompose over groups",
        ));
    }
    check_eps(eps)?;
    let groups = group_qubitwise_commuting(h);
    if groups.len() != stats.len() {
        return Err(Error::GroupMismatch {
            groups: groups.len(),
            stats: stats.len(),
        });
    }
    if let ShiftPolicy::PerGroup(c) = shift {
        if c.len() != groups.len() {
            return Err(Error::GroupMismatch {
                groups: groups.len(),
                stats: c.len(),
            });
        }
    }

    let mut total = RobustnessInterval {
        lower: T::zero(),
        upper: if method == Method::Sdp {
            T::zero()
        } else {
            T::infinity()
        },
        method,
        applicable: Applicability {
            lower: true,
            upper: method == Method::Sdp,
        },
        epsilon: eps,
    };
    let mut details = Vec::with_capacity(groups.len());
    for (k, (group, s)) in groups.into_iter().zip(stats).enumerate() {
        let spectrum = group_spectrum(&group);
        let c = match shift {
            ShiftPolicy::ExactMinimum => -spectrum.0,
            ShiftPolicy::PerGroup(c) => c[k],
        };
        let interval =
            group_interval(method, s, spectrum, c, eps).map_err(|e| Error::in_group(k, e))?;
        total.lower += interval.lower;
        total.upper += interval.upper;
        total.applicable = total.applicable.and(interval.applicable);
        details.push(GroupBound {
            group,
            spectrum,
            interval,
        });
    }
    if method != Method::Sdp {
        total.upper = T::infinity();
    }
    Ok(HamiltonianBound {
        interval: total,
        groups: details,
    })
}

fn group_interval<T: Real>(
    method: Method,
    stats: &MomentStats<T>,
    (lo, hi): (T, T),
    shift: T,
    eps: T,
) -> Result<RobustnessInterval<T>> {
    let scale = T::one().max(lo.abs()).max(hi.abs());
    if hi - lo <= T::tol(1e-12) * scale {
        // a constant group has the same value on every state
        let value = T::lit(0.5) * (lo + hi);
        return Ok(RobustnessInterval {
            epsilon: eps,
            ..RobustnessInterval::point(value, method, method == Method::Sdp)
        });
    }
    match method {
        Method::Sdp => {
            let two = T::lit(2.0);
            let slope = (hi - lo) / two;
            let intercept = (hi + lo) / two;
            let unit = stats.affine(T::one() / slope, -intercept / slope);
            Ok(interval_for(method, &unit, eps)?.map(slope, intercept))
        }
        Method::GramianExpectation => {
            if shift < -lo - T::tol(1e-12) * scale {
                return Err(Error::InvalidRange {
                    lo: lo.as_f64(),
                    hi: hi.as_f64(),
                    reason: format!("shift {shift} leaves the group indefinite"),
                });
            }
            let shifted = stats.affine(T::one(), shift);
            if shifted.first() <= T::zero() {
                // rho sits in the bottom eigenspace; only the trivial bound is available
                return Ok(RobustnessInterval {
                    lower: -shift,
                    upper: T::infinity(),
                    method,
                    applicable: Applicability {
                        lower: false,
                        upper: false,
                    },
                    epsilon: eps,
                });
            }
            Ok(interval_for(method, &shifted, eps)?.map(T::one(), -shift))
        }
        Method::GramianEigenvalue => unreachable!("rejected by the caller"),
    }
}

/// Bound for a dense observable, normalized or shifted with its exact spectrum.
///
/// `stats` are the moments of `a` itself.
pub fn bound_observable<T: Real>(
    a: &Observable<T>,
    stats: &MomentStats<T>,
    eps: T,
    method: Method,
) -> Result<RobustnessInterval<T>> {
    let spectrum = a.spectrum();
    let (lo, hi) = (spectrum[0], spectrum[spectrum.len() - 1]);
    match method {
        Method::GramianEigenvalue => interval_for(method, stats, eps),
        _ => group_interval(method, stats, (lo, hi), -lo, eps),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn sdp_examples() {
        let r = sdp_interval(0.3, 0.0).unwrap();
        assert_eq!((r.lower, r.upper), (0.3, 0.3));

        let r = sdp_interval(0.0, 0.5).unwrap();
        assert_eq!((r.lower, r.upper), (-1.0, 1.0));
        assert_eq!(r.applicable, Applicability::BOTH);

        // <Z> = 0.8 on sqrt(0.9)|0> + sqrt(0.1)|1>; target |0> has <Z> = 1
        let r = sdp_interval(0.8, 0.1).unwrap();
        assert!(r.lower <= 1.0 && 1.0 <= r.upper);
        assert!(close(r.lower, 0.64 - 2.0 * (0.09f64 * 0.36).sqrt(), 1e-15));
    }

    #[test]
    fn sdp_boundary_counts_as_applicable() {
        // eps = (1 - a) / 2 up to rounding
        let r = sdp_interval(0.8, 0.1).unwrap();
        assert!(r.applicable.upper);
        assert!(close(r.upper, 1.0, 1e-15));
    }

    #[test]
    fn sdp_inapplicable_sides_fall_back() {
        let r = sdp_interval(0.9, 0.2).unwrap();
        assert!(r.applicable.lower && !r.applicable.upper);
        assert_eq!(r.upper, 1.0);
        let r = sdp_interval(-0.9, 0.2).unwrap();
        assert!(!r.applicable.lower && r.applicable.upper);
        assert_eq!(r.lower, -1.0);
    }

    #[test]
    fn sdp_rejects_out_of_range() {
        assert!(sdp_interval(1.1, 0.1).is_err());
        assert!(sdp_interval(0.1, -0.1).is_err());
        assert!(sdp_interval(0.1, 1.5).is_err());
        assert!(sdp_interval(1.0 + 1e-12, 0.1).is_ok());
    }

    #[test]
    fn gramian_expectation_examples() {
        let s = MomentStats::new(0.7, 0.49).unwrap();
        assert_eq!(gramian_expectation_lb(&s, 0.0).unwrap().lower, 0.7);

        let p = MomentStats::from_projection(0.5).unwrap();
        let r = gramian_expectation_lb(&p, 0.1).unwrap();
        assert!(close(r.lower, 0.2, 1e-15));
        assert!(r.applicable.lower && !r.applicable.upper);

        let sdp = sdp_interval(2.0 * 0.5 - 1.0, 0.1).unwrap();
        assert!(close(r.lower, 0.5 * (sdp.lower + 1.0), 1e-12));
    }

    #[test]
    fn gramian_expectation_requires_positive_mean() {
        let s = MomentStats::new(0.0, 0.5).unwrap();
        assert!(matches!(
            gramian_expectation_lb(&s, 0.1),
            Err(Error::NonPositiveMean { .. })
        ));
    }

    #[test]
    fn gramian_expectation_fallback() {
        // dA / <A> = 3 exceeds sqrt((1 - eps) / eps) = 2 at eps = 0.2
        let s = MomentStats::from_mean_variance(0.1, 0.09).unwrap();
        let r = gramian_expectation_lb(&s, 0.2).unwrap();
        assert!(!r.applicable.lower);
        assert_eq!(r.lower, 0.0);
    }

    #[test]
    fn gramian_eigenvalue_examples() {
        let s = MomentStats::new(0.8, 1.0).unwrap();
        let r = gramian_eigenvalue_interval(&s, 0.1).unwrap();
        assert!(close(r.lower, 0.6, 1e-15) && close(r.upper, 1.0, 1e-15));

        let s = MomentStats::new(0.4, 0.16).unwrap();
        let r = gramian_eigenvalue_interval(&s, 0.7).unwrap();
        assert_eq!((r.lower, r.upper), (0.4, 0.4));

        let s = MomentStats::new(0.4, 0.5).unwrap();
        let r = gramian_eigenvalue_interval(&s, 0.0).unwrap();
        assert_eq!((r.lower, r.upper), (0.4, 0.4));

        assert!(matches!(
            gramian_eigenvalue_interval(&s, 1.0),
            Err(Error::EpsilonIsOne { .. })
        ));
    }

    #[test]
    fn weinstein_recovery() {
        let s = MomentStats::from_mean_variance(-1.3, 0.09).unwrap();
        let r = gramian_eigenvalue_interval(&s, 0.5).unwrap();
        assert_eq!(r.lower, -1.3 - 0.3);
    }

    #[test]
    fn beta_star_examples() {
        let b = beta_star_pure(0.9f64, 0.1).unwrap();
        assert!(b.condition_met && b.value.abs() < 1e-15);
        let b = beta_star_pure(0.3, 0.0).unwrap();
        assert!(close(b.value, 0.7, 1e-15));
        let b = beta_star_pure(0.95, 0.1).unwrap();
        assert!(!b.condition_met && b.value == 0.0);
        assert!(beta_star_pure(1.2, 0.1).is_err());
    }

    #[test]
    fn sampling_adjustment_widens() {
        let s = MomentStats::new(0.5, 0.3).unwrap();
        for method in [
            Method::Sdp,
            Method::GramianExpectation,
            Method::GramianEigenvalue,
        ] {
            let exact = interval(method, &s, 0.1).unwrap();
            let zero =
                sampling_adjusted_interval(&s.with_half_widths(0.0, 0.0).unwrap(), 0.1, method)
                    .unwrap();
            assert_eq!(exact, zero, "{method}");
            let wide = s.with_half_widths(0.01, 0.02).unwrap();
            let adj = sampling_adjusted_interval(&wide, 0.1, method).unwrap();
            assert!(
                adj.lower <= exact.lower && adj.upper >= exact.upper,
                "{method}"
            );
        }
    }

    #[test]
    fn aggregation_single_group_matches_direct() {
        let h = PauliSum::<f64>::parse("0.5 Z0").unwrap();
        let stats = MomentStats::new(0.2, 0.25).unwrap();
        let agg = bound_hamiltonian(&h, &[stats], 0.05, Method::Sdp).unwrap();
        let direct = sdp_interval(0.4, 0.05).unwrap();
        assert!(close(agg.lower, 0.5 * direct.lower, 1e-15));
        assert!(close(agg.upper, 0.5 * direct.upper, 1e-15));
    }

    #[test]
    fn aggregation_at_zero_eps_is_exact() {
        let h = PauliSum::<f64>::parse("Z0 + X0").unwrap();
        // rho = |0><0|: <Z> = 1, <X> = 0
        let stats = [
            MomentStats::new(1.0, 1.0).unwrap(),
            MomentStats::new(0.0, 1.0).unwrap(),
        ];
        for method in [Method::Sdp, Method::GramianExpectation] {
            let r = bound_hamiltonian(&h, &stats, 0.0, method).unwrap();
            assert!(close(r.lower, 1.0, 1e-15), "{method}: {}", r.lower);
        }
        let r = bound_hamiltonian(&h, &stats, 0.0, Method::Sdp).unwrap();
        assert!(close(r.upper, 1.0, 1e-15));
    }

    #[test]
    fn aggregation_errors() {
        let h = PauliSum::<f64>::parse("Z0 + X0").unwrap();
        let s = MomentStats::new(0.0, 1.0).unwrap();
        assert!(matches!(
            bound_hamiltonian(&h, &[s], 0.1, Method::Sdp),
            Err(Error::GroupMismatch { .. })
        ));
        assert!(matches!(
            bound_hamiltonian(&h, &[s, s], 0.1, Method::GramianEigenvalue),
            Err(Error::UnsupportedMethod(_))
        ));
        let bad = MomentStats::new(3.0, 9.0).unwrap();
        assert!(matches!(
            bound_hamiltonian(&h, &[s, bad], 0.1, Method::Sdp),
            Err(Error::InGroup { index: 1, .. })
        ));
    }

    #[test]
    fn constant_group_is_exact() {
        let h = PauliSum::<f64>::parse("2.5").unwrap();
        let s = MomentStats::new(2.5, 6.25).unwrap();
        for method in [Method::Sdp, Method::GramianExpectation] {
            let r = bound_hamiltonian(&h, &[s], 0.3, method).unwrap();
            assert_eq!(r.lower, 2.5);
            assert!(r.applicable.lower);
        }
    }
}
