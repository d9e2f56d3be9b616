//! State and observable data model.

mod observable;
mod pauli;
mod state;

pub use observable::{
    expectation, moments, normalize_to_unit_spectrum, shift_observable, AffineMap, HalfWidths,
    MomentStats, Observable,
};
pub use pauli::{
    group_qubitwise_commuting, group_spectrum, qubitwise_commute, Pauli, PauliSum, PauliTerm,
};
pub use state::{DensityOperator, PureState, PURITY_TOL, STATE_TOL};
