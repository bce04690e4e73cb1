//! Exact multilinear algebra over a based vector space.
//!
//! Wedge products are normalized as `x∧y = x⊗y − y⊗x`, so the coefficient of
//! `e_{i1}∧…∧e_{ik}` (strictly increasing indices) equals the component
//! `T^{i1…ik}` of the corresponding fully antisymmetric tensor.

mod brackets;
mod multivector;
mod space;
mod tensor;

pub use brackets::{ad_derivation, ce_differential, drinfeld_bracket, schouten, wedge};
pub use multivector::{permutation_sign, Multivector};
pub use space::{BasedSpace, Jacobiator, StructureConstants};
pub use tensor::{Tensor2, Tensor3};
