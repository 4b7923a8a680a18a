//! Exact computations with Fermat-type point configurations and fat-point
//! linear systems.

pub mod constructions;
pub mod fermat;
pub mod field;
pub mod interpolation;
pub mod linalg;
pub mod poly;
mod text;

pub use field::{
    make_field, CycScalar, CyclotomicField, Field, FieldError, FieldHandle, FieldKind, FieldSpec,
    ModScalar, PrimeField,
};
pub use linalg::DenseMatrix;
pub use poly::{monomials_of_degree, Monomial, Poly, PolyError, ProjPoint};
