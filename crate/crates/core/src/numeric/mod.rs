//! Numeric verification of `∫_{∂Ω} η = 0` for exact solutions.

pub mod catalog;
pub mod expr;
pub mod quadrature;
pub mod residual;

pub use catalog::{builtin_solutions, catalog_case, run_catalog, CaseReport, CatalogCase, PreparedCase, TAGS};
pub use expr::Expr;
pub use quadrature::{integrate_box, GaussLegendre, QuadratureSpec};
pub use residual::{
    adjoint_defect, boundary_residual, concrete_box, pde_defect, FaceIntegral, ManufacturedSolution, Residual,
    DEFAULT_TOLERANCE,
};
