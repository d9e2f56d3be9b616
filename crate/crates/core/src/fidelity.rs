//! Lower bounds on the ground-state fidelity `<psi_0| rho |psi_0>` from
//! spectral knowledge about `H` and the energy statistics of `rho`.
//!
//! All bounds assume a non-degenerate ground state unless `rho` is pure: with
//! a degenerate ground level and a mixed `rho` they can fail (the maximally
//! mixed state on a `(lambda, lambda, mu)` spectrum is a counterexample to
//! every one of them), so that combination is refused.

use crate::error::{Error, Result};
use crate::model::{moments, DensityOperator, Observable, PURITY_TOL};
use crate::robustness::{FidelityBudget, FidelitySource};
use crate::scalar::{clamp, Real};

/// Relative spacing below which the two lowest levels count as one.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Spectral facts and energy statistics feeding the fidelity bounds.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct SpectralInfo<T> {
    pub lambda0: Option<T>,
    pub lambda1: Option<T>,
    /// Lower bound on `lambda1 - lambda0`.
    pub gap: Option<T>,
    pub degenerate_ground: bool,
    pub energy_mean: T,
    pub energy_variance: T,
    /// The approximate state is known to be pure.
    pub state_pure: bool,
    /// Caller vouches for `<H> <= (lambda0 + lambda1) / 2` without supplying the levels.
    pub closer_to_ground: bool,
}

impl<T: Real> SpectralInfo<T> {
    pub fn new(energy_mean: T, energy_variance: T) -> Self {
        Self {
            lambda0: None,
            lambda1: None,
            gap: None,
            degenerate_ground: false,
            energy_mean,
            energy_variance: energy_variance.max(T::zero()),
            state_pure: false,
            closer_to_ground: false,
        }
    }

    /// Energy statistics of `rho`, with purity detected from `tr(rho^2)`.
    pub fn from_state(h: &Observable<T>, rho: &DensityOperator<T>) -> Result<Self> {
        let m = moments(h, rho)?;
        let mut info = Self::new(m.first(), m.variance());
        info.state_pure = rho.purity() > T::one() - T::tol(PURITY_TOL);
        Ok(info)
    }

    /// Sets the two lowest distinct levels; nearly equal levels mark the ground as degenerate.
    pub fn with_levels(mut self, lambda0: T, lambda1: T) -> Self {
        self.lambda0 = Some(lambda0);
        self.lambda1 = Some(lambda1);
        if lambda1 - lambda0 < T::tol(DEGENERACY_TOL) * T::one().max(lambda0.abs()) {
            self.degenerate_ground = true;
        }
        self
    }

    pub fn with_gap(mut self, gap: T) -> Self {
        self.gap = Some(gap);
        self
    }

    pub fn with_degenerate_ground(mut self, degenerate: bool) -> Self {
        self.degenerate_ground = degenerate;
        self
    }

    pub fn with_pure_state(mut self, pure: bool) -> Self {
        self.state_pure = pure;
        self
    }

    pub fn with_closer_to_ground(mut self, asserted: bool) -> Self {
        self.closer_to_ground = asserted;
        self
    }

    pub fn energy_std(&self) -> T {
        self.energy_variance.sqrt()
    }

    fn guard(&self) -> Result<()> {
        if self.degenerate_ground && !self.state_pure {
            Err(Error::DegenerateMixed)
        } else {
            Ok(())
        }
    }

    fn levels(&self) -> Result<(T, T)> {
        match (self.lambda0, self.lambda1) {
            (Some(l0), Some(l1)) => Ok((l0, l1)),
            (None, _) => Err(Error::MissingSpectrum("lambda0")),
            (_, None) => Err(Error::MissingSpectrum("lambda1")),
        }
    }

    fn half_rule_holds(&self) -> Result<()> {
        match (self.lambda0, self.lambda1) {
            (Some(l0), Some(l1)) => {
                if self.energy_mean <= T::lit(0.5) * (l0 + l1) {
                    Ok(())
                } else {
                    Err(Error::ConditionNotEstablished(
                        "energy is closer to lambda1 than to lambda0",
                    ))
                }
            }
            _ if self.closer_to_ground => Ok(()),
            _ => Err(Error::ConditionNotEstablished(
                "need lambda0 and lambda1, or an assertion that <H> <= (lambda0 + lambda1) / 2",
            )),
        }
    }

    fn positive_gap(&self) -> Result<T> {
        match self.gap {
            Some(d) if d > T::zero() => Ok(d),
            _ => Err(Error::MissingGap),
        }
    }
}

/// `(lambda1 - <H>) / (lambda1 - lambda0)` without any guard.
pub fn eckart_value<T: Real>(energy_mean: T, lambda0: T, lambda1: T) -> T {
    (lambda1 - energy_mean) / (lambda1 - lambda0)
}

/// `1 - dH / delta` without any guard.
pub fn gap_simple_value<T: Real>(energy_std: T, gap: T) -> T {
    T::one() - energy_std / gap
}

/// `(1 + sqrt(1 - (2 dH / delta)^2)) / 2` without any guard; requires `dH <= delta / 2`.
pub fn gap_tight_value<T: Real>(energy_std: T, gap: T) -> T {
    let r = T::lit(2.0) * energy_std / gap;
    T::lit(0.5) * (T::one() + (T::one() - r * r).max(T::zero()).sqrt())
}

/// Eckart's criterion.
pub fn eckart_lb<T: Real>(info: &SpectralInfo<T>) -> Result<FidelityBudget<T>> {
    let (l0, l1) = info.levels()?;
    info.guard()?;
    if !(l1 > l0) {
        return Err(Error::InvalidRange {
            lo: l0.as_f64(),
            hi: l1.as_f64(),
            reason: "Eckart's criterion needs lambda1 > lambda0".into(),
        });
    }
    Ok(FidelityBudget::from_fidelity(
        eckart_value(info.energy_mean, l0, l1),
        FidelitySource::Eckart,
    ))
}

/// Fidelity at least one half when the energy is closer to `lambda0` than to `lambda1`.
pub fn half_rule<T: Real>(info: &SpectralInfo<T>) -> Result<FidelityBudget<T>> {
    info.guard()?;
    info.half_rule_holds()?;
    Ok(FidelityBudget::from_fidelity(
        T::lit(0.5),
        FidelitySource::HalfRule,
    ))
}

/// `1 - dH / delta` from a gap lower bound `delta`.
///
/// The derivation goes through the half rule (otherwise an excited
/// eigenstate, with zero variance, would be certified), so that condition is
/// required here as well.
pub fn gap_lb_simple<T: Real>(info: &SpectralInfo<T>) -> Result<FidelityBudget<T>> {
    let gap = info.positive_gap()?;
    info.guard()?;
    info.half_rule_holds()?;
    Ok(FidelityBudget::from_fidelity(
        gap_simple_value(info.energy_std(), gap),
        FidelitySource::GapSimple,
    ))
}

/// Tightened gap bound, available for `dH <= delta / 2`.
pub fn gap_lb_tight<T: Real>(info: &SpectralInfo<T>) -> Result<FidelityBudget<T>> {
    let gap = info.positive_gap()?;
    info.guard()?;
    if info.energy_std() > T::lit(0.5) * gap {
        return Err(Error::Inapplicable("gap-tight bound needs dH <= delta / 2"));
    }
    info.half_rule_holds()?;
    Ok(FidelityBudget::from_fidelity(
        gap_tight_value(info.energy_std(), gap),
        FidelitySource::GapTight,
    ))
}

/// Smallest budget among the bounds that apply; the first error otherwise.
pub fn tightest_budget<T: Real>(info: &SpectralInfo<T>) -> Result<FidelityBudget<T>> {
    let candidates = [
        eckart_lb(info),
        half_rule(info),
        gap_lb_simple(info),
        gap_lb_tight(info),
    ];
    let mut first_err = None;
    let mut best: Option<FidelityBudget<T>> = None;
    for c in candidates {
        match c {
            Ok(b) if best.is_none_or(|x| b.epsilon() < x.epsilon()) => best = Some(b),
            Ok(_) => {}
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    best.ok_or_else(|| first_err.expect("at least one candidate failed"))
}

/// Clamps into `[0, 1]`.
pub fn clip_fidelity<T: Real>(f: T) -> T {
    clamp(f, T::zero(), T::one())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn info(mean: f64, var: f64) -> SpectralInfo<f64> {
        SpectralInfo::new(mean, var).with_levels(0.0, 1.0)
    }

    #[test]
    fn eckart_examples() {
        assert_eq!(eckart_lb(&info(0.0, 0.0)).unwrap().epsilon(), 0.0);
        assert_eq!(eckart_lb(&info(1.0, 0.0)).unwrap().epsilon(), 1.0);
        let b = eckart_lb(&info(0.25, 0.1)).unwrap();
        assert_eq!(b.epsilon(), 0.25);
        assert_eq!(b.provenance(), FidelitySource::Eckart);
    }

    #[test]
    fn eckart_needs_levels() {
        let i = SpectralInfo::new(0.1, 0.0);
        assert!(matches!(eckart_lb(&i), Err(Error::MissingSpectrum(_))));
    }

    #[test]
    fn half_rule_examples() {
        assert_eq!(half_rule(&info(0.3, 0.0)).unwrap().epsilon(), 0.5);
        assert!(matches!(
            half_rule(&info(0.6, 0.0)),
            Err(Error::ConditionNotEstablished(_))
        ));
        let asserted = SpectralInfo::new(0.3, 0.0).with_closer_to_ground(true);
        assert_eq!(half_rule(&asserted).unwrap().epsilon(), 0.5);
        assert!(half_rule(&SpectralInfo::new(0.3, 0.0)).is_err());
    }

    #[test]
    fn gap_examples() {
        let zero = info(0.0, 0.0).with_gap(1.0);
        assert_eq!(gap_lb_simple(&zero).unwrap().epsilon(), 0.0);
        assert_eq!(gap_lb_tight(&zero).unwrap().epsilon(), 0.0);

        let edge = info(0.3, 1.0).with_gap(1.0);
        assert_eq!(gap_lb_simple(&edge).unwrap().epsilon(), 1.0);

        let half = info(0.3, 0.25).with_gap(1.0);
        assert_eq!(gap_lb_tight(&half).unwrap().epsilon(), 0.5);

        let wide = info(0.3, 0.36).with_gap(1.0);
        assert!(matches!(gap_lb_tight(&wide), Err(Error::Inapplicable(_))));
        assert!(matches!(
            gap_lb_simple(&info(0.3, 0.0)),
            Err(Error::MissingGap)
        ));
    }

    #[test]
    fn gap_bounds_need_half_rule() {
        // an excited eigenstate has zero variance but zero ground overlap
        let excited = info(1.0, 0.0).with_gap(1.0);
        assert!(matches!(
            gap_lb_simple(&excited),
            Err(Error::ConditionNotEstablished(_))
        ));
        assert!(matches!(
            gap_lb_tight(&excited),
            Err(Error::ConditionNotEstablished(_))
        ));
    }

    #[test]
    fn tight_never_looser_than_simple() {
        for k in 0..=50 {
            let std = 0.5 * k as f64 / 50.0;
            let i = info(0.2, std * std).with_gap(1.0);
            let t = gap_lb_tight(&i).unwrap().epsilon();
            let s = gap_lb_simple(&i).unwrap().epsilon();
            assert!(t <= s + 1e-15, "std {std}: {t} > {s}");
        }
    }

    #[test]
    fn degenerate_mixed_is_refused() {
        // spectrum (0, 0, 1) with rho = I / 3
        let (lambda, mu) = (0.0f64, 1.0f64);
        let mean = (2.0 * lambda + mu) / 3.0;
        let var = 2.0 * (mu - lambda) * (mu - lambda) / 9.0;
        let i = SpectralInfo::new(mean, var)
            .with_levels(lambda, mu)
            .with_degenerate_ground(true)
            .with_gap(mu - lambda);
        assert_eq!(eckart_lb(&i), Err(Error::DegenerateMixed));
        assert_eq!(half_rule(&i), Err(Error::DegenerateMixed));
        assert_eq!(gap_lb_simple(&i), Err(Error::DegenerateMixed));
        assert_eq!(gap_lb_tight(&i), Err(Error::DegenerateMixed));

        assert!((eckart_value(mean, lambda, mu) - 2.0 / 3.0).abs() < 1e-12);
        let std = i.energy_std();
        assert!((gap_simple_value(std, mu - lambda) - (1.0 - 2f64.sqrt() / 3.0)).abs() < 1e-12);
        assert!((gap_tight_value(std, mu - lambda) - 2.0 / 3.0).abs() < 1e-12);

        let pure = i.with_pure_state(true);
        assert!(eckart_lb(&pure).is_ok());
    }

    #[test]
    fn near_equal_levels_mark_degeneracy() {
        let i = SpectralInfo::new(0.0, 0.0).with_levels(1.0, 1.0 + 1e-12);
        assert!(i.degenerate_ground);
    }

    #[test]
    fn tightest_picks_smallest_eps() {
        let i = info(0.1, 0.01).with_gap(1.0);
        let best = tightest_budget(&i).unwrap();
        assert_eq!(best.provenance(), FidelitySource::GapTight);
    }
}
