//! The universal affine vertex superalgebra of 𝔞 (and of gl(n)) on its vacuum
//! module: PBW normal form, mode action, translation and n-th products.

mod algebra;
mod engine;
pub mod props;
mod state;

pub use algebra::{Gen, LieTable};
pub use engine::{OpeTable, VertexAlgebra};
pub use state::{
    conformal_weight, depth_weight, is_odd_monomial, Factor, Monomial, State, StateDisplay,
};

#[cfg(test)]
mod tests;
