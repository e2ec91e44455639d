//! Hamilton–Jacobi theory for first-order classical field theories, worked
//! in Darboux coordinates `(x^α, q^i, p^α_i)` on `R^k × (T¹_k)*Q`.
//!
//! The crate is `no_std` (it needs `alloc`). It covers:
//!
//! - [`model`]: dimensions, coordinate ordering, phase and base points.
//! - [`expr`]: a small expression language with forward-mode derivatives.
//! - [`field`]: composable scalar fields with exact partial derivatives.
//! - [`hdw`]: Hamiltonian k-vector fields and Hamilton–De Donder–Weyl residuals.
//! - [`hj`]: Hamilton–Jacobi sections, their residuals and the reduced k-vector field.
//! - [`integrate`]: integral sections on rectangular grids, lifting and the
//!   end-to-end verification pipeline.
//!
//! File formats and the command-line driver live in the `kcosym` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod expr;
pub mod field;
pub mod grid;
pub mod hdw;
pub mod hj;
pub mod integrate;
pub mod model;
pub mod real;

pub use error::{Error, EvalError, ParseError, ParseErrorKind, Result};
pub use expr::{Expr, ParamSet};
pub use field::{fd_partial, HamiltonianSystem, ScalarField, DEFAULT_FD_STEP};
pub use grid::GridSpec;
pub use hdw::{
    canonical_solution, hdw_residual, is_solution, kernel_check, kernel_residual, HdwResidual, KVectorFieldLocal,
    PhaseMapGrid, SolutionCheck,
};
pub use hj::{
    classical_hj_residual, closedness_residual, compatibility_residual,
    kernel_difference_residual, hj_residual, q_independence_check, reduce,
    section_from_potentials, HJSection, PotentialFamily, QSpread, ReducedKVectorField,
};
pub use integrate::{
    grid_base_points, integrate_section, lift, path_independence, section_maxima,
    verify_pipeline, Check, GridSolution, IntegrateOptions, PathIndependence, PipelineReport,
    SectionMaxima, Tolerances,
};
pub use model::{coordinate_names, reeb_component, BasePoint, Coord, Dimensions, PhasePoint};
