//! Independent oracles, manufactured solutions and convergence studies.

pub mod convergence;
pub mod manufactured;
pub mod oracle;
pub mod quadrature;

pub use convergence::{
    convergence_study_space, convergence_study_time, estimate_order, Axis, ConvergenceReport, Level,
};
pub use manufactured::{manufactured_forcing, ManufacturedSolution};
pub use oracle::{
    assemble_dense, dense_galerkin_apply, dense_galerkin_rhs, dense_step, max_operator_deviation,
    quadrature_inner_product, MAX_ORACLE_MODES,
};
pub use quadrature::GaussLegendre;
