//! Quiver mutation loops and their partition q-series, in exact arithmetic.
//!
//! A mutation loop is a quiver together with a sequence of mutations and
//! vertex relabelings that returns the quiver to its original labeled form.
//! Each loop determines a quadratic exponent form `F(k)` over the rationals,
//! and (when `F` is positive on the nonnegative orthant) a partition q-series
//!
//! ```text
//! Z = sum_{k in N^T} q^{F(k)} / ((q)_{k_1} ... (q)_{k_T})
//! ```
//!
//! living in `N[[q^{1/Delta}]]` for a grading denominator `Delta`. This crate
//! computes `Z` as a truncated series with unbounded integer coefficients,
//! together with the closed-form generators for alternating Dynkin quivers
//! and square products, and the identity checks relating them.
//!
//! Everything is exact: matrices are dense arbitrary-precision rationals,
//! series coefficients are big integers, and no floating point is used
//! anywhere. All values are immutable after construction and all operations
//! are pure functions, so everything can be shared freely across threads.
//!
//! The companion `qloop-cli` crate adds file formats and a command-line
//! interface on top of this library.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod dynkin;
pub mod lattice;
pub mod loops;
pub mod quiver;
pub mod ratmat;
pub mod series;
pub mod varsys;

pub use dynkin::{
    alternating_dynkin, cartan_data, dynkin_closed_form, dynkin_closed_form_exponent,
    dynkin_loop, square_closed_form, square_closed_form_exponent, square_loop, theta_a3,
    theta_check_a3, CartanData, DynkinError, DynkinFamily, DynkinType, SquareOrder,
};
pub use lattice::{
    count_lattice_points, enumerate_lattice, partition_series, sum_loop, sum_loop_opts,
    EngineError, Strategy, SumOptions,
};
pub use loops::{apply_steps, normalize, LoopError, MutationLoop, NormalForm, Step};
pub use quiver::{sign_classes, Permutation, Quiver, QuiverError, VertexSign};
pub use ratmat::RatMat;
pub use series::{inv_pochhammer, pochhammer, q_pentagon_check, QSeries};
pub use varsys::{
    build_system, certify_positive, exponent_form, ExponentForm, Positivity, VarSysError,
    VariableSystem,
};

/// Exact rational scalar used throughout the crate.
pub type Rat = num_rational::BigRational;
/// Unbounded integer used for series coefficients.
pub type Int = num_bigint::BigInt;
