//! The guide's chapters as doc comments, so `cargo test` runs their code blocks.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/fields.md")]
pub mod fields {}
#[doc = include_str!("../../../book/src/polynomials.md")]
pub mod polynomials {}
#[doc = include_str!("../../../book/src/configurations.md")]
pub mod configurations {}
#[doc = include_str!("../../../book/src/fat-points.md")]
pub mod fat_points {}
#[doc = include_str!("../../../book/src/constructions.md")]
pub mod constructions {}
#[doc = include_str!("../../../book/src/tables.md")]
pub mod tables {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
