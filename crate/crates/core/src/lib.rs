//! Fundamental (n−1)-forms for constant-coefficient linear partial differential
//! operators: divergence decompositions of the bilinear concomitant, their
//! enumeration, spectral substitution, global relations on boxes, and numeric
//! verification by boundary quadrature.

pub mod bilinear;
pub mod decomposition;
pub mod error;
pub mod fixtures;
pub mod forms;
pub mod gauss;
pub mod multi_index;
pub mod numeric;
pub mod operator;
pub mod parallel;
pub mod parse;
pub mod poly;
pub mod random;
pub mod render;
pub mod spectral;

pub use bilinear::{brace, bracket, divergence, partial, BilinearExpr, BilinearTerm, Pairing, TermKey};
pub use error::{Error, Result};
pub use gauss::GaussRational;
pub use multi_index::MultiIndex;
pub use operator::{parse_operator, parse_scalar, MatrixPDO, Operator, OperatorTerm, ScalarPDO, Space, SymbolMode};
pub use parallel::{par_map, Execution};
pub use poly::{Coeff, Monomial, Poly};
