//! Observables, their moments on a state, and the shift/scale transforms used
//! to bring an operator into a bound's domain.

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, HermitianMatrix, MAX_DIM};
use crate::model::pauli::PauliSum;
use crate::model::state::DensityOperator;
use crate::scalar::Real;

/// Imaginary residue of `tr(A rho)` beyond which the input is rejected.
const IMAG_TOL: f64 = 1e-8;

/// Slack on moment consistency (`second >= first^2`).
const MOMENT_TOL: f64 = 1e-9;

/// Hermitian operator held densely, optionally with the Pauli sum it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable<T> {
    matrix: HermitianMatrix<T>,
    pauli: Option<PauliSum<T>>,
}

impl<T: Real> Observable<T> {
    pub fn from_matrix(matrix: HermitianMatrix<T>) -> Self {
        Self {
            matrix,
            pauli: None,
        }
    }

    pub fn from_pauli(sum: PauliSum<T>) -> Result<Self> {
        if sum.dim() > MAX_DIM {
            return Err(Error::TooLarge {
                dim: sum.dim(),
                max: MAX_DIM,
            });
        }
        Ok(Self {
            matrix: sum.to_matrix(),
            pauli: Some(sum),
        })
    }

    /// Diagonal observable with the given spectrum.
    pub fn diagonal(values: &[T]) -> Self {
        Self::from_matrix(HermitianMatrix::diagonal(values))
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &HermitianMatrix<T> {
        &self.matrix
    }

    pub fn pauli(&self) -> Option<&PauliSum<T>> {
        self.pauli.as_ref()
    }

    /// `A^2` as a dense observable.
    pub fn square(&self) -> Self {
        Self::from_matrix(self.matrix.square())
    }

    /// Ascending eigenvalues.
    pub fn spectrum(&self) -> Vec<T> {
        eigenvalues(&self.matrix)
    }
}

impl<T: Real> From<HermitianMatrix<T>> for Observable<T> {
    fn from(matrix: HermitianMatrix<T>) -> Self {
        Self::from_matrix(matrix)
    }
}

/// One-sided confidence half-widths on the sampled first and second moments.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct HalfWidths<T> {
    pub first: T,
    pub second: T,
}

/// `<A>`, `<A^2>` and the variance on a state, with optional sampling error.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct MomentStats<T> {
    first: T,
    second: T,
    variance: T,
    half_widths: Option<HalfWidths<T>>,
}

impl<T: Real> MomentStats<T> {
    /// Rejects `second < first^2 - 1e-9`; smaller negative variances are clipped to zero.
    pub fn new(first: T, second: T) -> Result<Self> {
        if !first.is_finite() || !second.is_finite() {
            return Err(Error::OutOfRange {
                name: "moments",
                value: if first.is_finite() { second } else { first }.as_f64(),
                range: "finite",
            });
        }
        let variance = second - first * first;
        if variance < -T::tol(MOMENT_TOL) {
            return Err(Error::OutOfRange {
                name: "variance",
                value: variance.as_f64(),
                range: "[0, inf)",
            });
        }
        Ok(Self {
            first,
            second,
            variance: variance.max(T::zero()),
            half_widths: None,
        })
    }

    /// Builds the stats from the mean and the variance instead of `<A^2>`.
    pub fn from_mean_variance(first: T, variance: T) -> Result<Self> {
        Self::new(first, variance + first * first)
    }

    /// Stats of a projector with `<P> = p`: `(p, p, p - p^2)`.
    pub fn from_projection(p: T) -> Result<Self> {
        Self::new(p, p)
    }

    pub fn with_half_widths(mut self, first: T, second: T) -> Result<Self> {
        for (name, v) in [("hw_first", first), ("hw_second", second)] {
            if !(v >= T::zero()) || !v.is_finite() {
                return Err(Error::OutOfRange {
                    name,
                    value: v.as_f64(),
                    range: "[0, inf)",
                });
            }
        }
        self.half_widths = Some(HalfWidths { first, second });
        Ok(self)
    }

    pub fn first(&self) -> T {
        self.first
    }

    pub fn second(&self) -> T {
        self.second
    }

    pub fn variance(&self) -> T {
        self.variance
    }

    pub fn std_dev(&self) -> T {
        self.variance.sqrt()
    }

    pub fn half_widths(&self) -> Option<HalfWidths<T>> {
        self.half_widths
    }

    /// Stats of `slope * A + intercept`.
    ///
    /// Half-widths are carried over conservatively: the second-moment width
    /// absorbs the cross term `2 slope intercept <A>`.
    pub fn affine(&self, slope: T, intercept: T) -> Self {
        let first = slope * self.first + intercept;
        let variance = slope * slope * self.variance;
        let two = T::lit(2.0);
        let half_widths = self.half_widths.map(|hw| HalfWidths {
            first: slope.abs() * hw.first,
            second: slope * slope * hw.second + two * (slope * intercept).abs() * hw.first,
        });
        Self {
            first,
            second: variance + first * first,
            variance,
            half_widths,
        }
    }
}

/// `x -> slope * x + intercept`, mapping normalized values back to the original scale.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct AffineMap<T> {
    pub slope: T,
    pub intercept: T,
}

impl<T: Real> AffineMap<T> {
    pub fn apply(&self, x: T) -> T {
        self.slope * x + self.intercept
    }

    pub fn invert(&self, y: T) -> T {
        (y - self.intercept) / self.slope
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: a,
            found: b,
        })
    }
}

/// `tr(A rho)`.
pub fn expectation<T: Real>(a: &Observable<T>, rho: &DensityOperator<T>) -> Result<T> {
    check_dims(a.dim(), rho.dim())?;
    let z = a.matrix.trace_product(rho.matrix());
    if z.im.abs() > T::tol(IMAG_TOL) {
        return Err(Error::NonRealExpectation {
            imag: z.im.as_f64(),
        });
    }
    Ok(z.re)
}

/// Exact first and second moments of `A` on `rho`.
pub fn moments<T: Real>(a: &Observable<T>, rho: &DensityOperator<T>) -> Result<MomentStats<T>> {
    let first = expectation(a, rho)?;
    let second = expectation(&a.square(), rho)?;
    // exact moments are consistent up to rounding, so clip rather than reject
    MomentStats::new(first, second.max(first * first))
}

/// `A + c I`.
pub fn shift_observable<T: Real>(a: &Observable<T>, c: T) -> Observable<T> {
    Observable {
        matrix: a.matrix.shift(c),
        pauli: a.pauli.as_ref().map(|p| p.shifted(c)),
    }
}

/// Maps `A` with spectrum inside `[lo, hi]` to `(2A - (hi + lo)) / (hi - lo)`.
///
/// Returns the normalized observable and the map taking normalized values
/// back to the original scale.
pub fn normalize_to_unit_spectrum<T: Real>(
    a: &Observable<T>,
    lo: T,
    hi: T,
) -> Result<(Observable<T>, AffineMap<T>)> {
    let range_err = |reason: &str| Error::InvalidRange {
        lo: lo.as_f64(),
        hi: hi.as_f64(),
        reason: reason.to_string(),
    };
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(range_err("requires finite lo < hi"));
    }
    let spectrum = a.spectrum();
    let slack = T::tol(1e-9) * T::one().max(lo.abs()).max(hi.abs());
    if spectrum[0] < lo - slack || spectrum[spectrum.len() - 1] > hi + slack {
        return Err(range_err(&format!(
            "spectrum [{}, {}] not contained",
            spectrum[0],
            spectrum[spectrum.len() - 1]
        )));
    }
    let two = T::lit(2.0);
    let map = AffineMap {
        slope: (hi - lo) / two,
        intercept: (hi + lo) / two,
    };
    let scale = T::one() / map.slope;
    let matrix = a.matrix.shift(-map.intercept).scale(scale);
    let pauli = a.pauli.as_ref().map(|p| {
        let terms = p.terms().iter().map(|t| {
            let mut t = t.clone();
            t.coefficient *= scale;
            t
        });
        PauliSum::new(p.n_qubits(), terms)
            .expect("rescaling keeps a valid sum")
            .shifted(-map.intercept * scale)
    });
    Ok((Observable { matrix, pauli }, map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::state::PureState;

    fn z() -> Observable<f64> {
        Observable::diagonal(&[1.0, -1.0])
    }

    fn phi(eps: f64) -> DensityOperator<f64> {
        PureState::from_real(&[(1.0 - eps).sqrt(), eps.sqrt()])
            .unwrap()
            .to_density()
    }

    #[test]
    fn expectation_examples() {
        let zero = PureState::<f64>::basis(2, 0).to_density();
        assert_eq!(expectation(&z(), &zero).unwrap(), 1.0);
        let mixed = DensityOperator::<f64>::maximally_mixed(2);
        assert_eq!(expectation(&z(), &mixed).unwrap(), 0.0);
        assert!((expectation(&z(), &phi(0.1)).unwrap() - 0.8).abs() < 1e-15);
    }

    #[test]
    fn expectation_dimension_mismatch() {
        let rho = DensityOperator::<f64>::maximally_mixed(4);
        assert!(matches!(
            expectation(&z(), &rho),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn moments_examples() {
        let zero = PureState::<f64>::basis(2, 0).to_density();
        let m = moments(&z(), &zero).unwrap();
        assert_eq!((m.first(), m.second(), m.variance()), (1.0, 1.0, 0.0));

        let m = moments(&z(), &DensityOperator::maximally_mixed(2)).unwrap();
        assert_eq!((m.first(), m.second(), m.variance()), (0.0, 1.0, 1.0));

        let m = moments(&z(), &phi(0.1)).unwrap();
        assert!((m.first() - 0.8).abs() < 1e-15);
        assert!((m.second() - 1.0).abs() < 1e-15);
        assert!((m.variance() - 0.36).abs() < 1e-14);
        assert!((m.std_dev() - 0.6).abs() < 1e-14);
    }

    #[test]
    fn moment_stats_validation() {
        assert!(MomentStats::new(0.5, 0.2).is_err());
        let m = MomentStats::new(0.5, 0.25 - 1e-12).unwrap();
        assert_eq!(m.variance(), 0.0);
        let p = MomentStats::from_projection(0.5).unwrap();
        assert_eq!(p.variance(), 0.25);
        assert!(p.with_half_widths(-0.1, 0.0).is_err());
    }

    #[test]
    fn shift_examples() {
        let s = shift_observable(&z(), 1.0);
        assert_eq!(s.spectrum(), vec![0.0, 2.0]);
        assert_eq!(shift_observable(&z(), 0.0), z());
    }

    #[test]
    fn normalize_examples() {
        let (a, map) = normalize_to_unit_spectrum(&z(), -1.0, 1.0).unwrap();
        assert_eq!(a.matrix(), z().matrix());
        assert_eq!((map.slope, map.intercept), (1.0, 0.0));

        let d = Observable::diagonal(&[0.0, 4.0]);
        let (a, map) = normalize_to_unit_spectrum(&d, 0.0, 4.0).unwrap();
        assert_eq!(a.spectrum(), vec![-1.0, 1.0]);
        assert_eq!(map.apply(1.0), 4.0);
        assert_eq!(map.invert(4.0), 1.0);
    }

    #[test]
    fn normalize_rejects_bad_ranges() {
        assert!(matches!(
            normalize_to_unit_spectrum(&z(), 1.0, 1.0),
            Err(Error::InvalidRange { .. })
        ));
        assert!(matches!(
            normalize_to_unit_spectrum(&z(), -0.5, 1.0),
            Err(Error::InvalidRange { .. })
        ));
    }

    #[test]
    fn normalize_keeps_pauli_form_in_sync() {
        let h = PauliSum::<f64>::parse("0.5 Z0 Z1 + 0.25 Z1 + 1.0").unwrap();
        let a = Observable::from_pauli(h).unwrap();
        let (n, _) = normalize_to_unit_spectrum(&a, 0.25, 1.75).unwrap();
        let dense = n.pauli().unwrap().to_matrix();
        assert!(dense.sub(n.matrix()).max_abs() < 1e-15);
    }
}
