//! Hilbert polynomial, invariant tables of the base locus, its reduction,
//! and adjoint intersection numbers.

mod config;
mod engine;
mod hilbert;
mod table;

pub use config::{Mode, TransformationConfig};
pub use engine::{adjoint_power, chi_values, pluridegrees, reduction_table, solve_invariants, ReductionTable};
pub use hilbert::{hilbert_polynomial, interpolation_constraints, ChiValues, HilbertPolynomial};
pub use table::{InvariantTable, Symbol};
