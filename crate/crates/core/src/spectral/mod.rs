//! Exponential substitution, constraint varieties and global relations.

mod constraint;
mod param;
mod relation;
mod represent;
mod spinor;
mod substitute;

pub use substitute::{
    substitute_exponential, substituted_rhs, ExponentSign, ExponentialAnsatz, LinearExpr, LinearFluxDoc,
    LinearTermDoc, SubstitutedDoc, SubstitutedForm,
};
pub use constraint::{
    adjoint_constraint, clear_denominators, determinant, power, reduce_mod_quadric, ConstraintDoc, ConstraintVariety,
    QuadricRule, SolvedDoc,
};
pub use relation::{
    global_relation, BoxDoc, BoxDomain, End, Endpoint, GlobalRelation, KernelDoc, RelationDoc, RelationTerm,
    RelationTermDoc, TraceDoc,
};
pub use param::{check_parameterization, ParamOutcome, Parameterization, DEFAULT_SAMPLES};
pub use represent::{integral_representation, IntegralRepresentation, RepresentationDoc};
pub use spinor::{spinor_isotropic, verify_stokes_adjoint, SpinorTriple, SPINOR_VARS};
