//! Numerical geometry of the group `G` and its quasi-Poisson spaces.

mod bivectors;
mod dressing;
mod frame;
mod kks;
mod model;
mod moment;
mod subspace;
mod suites;

pub use bivectors::*;
pub use dressing::*;
pub use frame::*;
pub use kks::*;
pub use model::*;
pub use moment::*;
pub use subspace::*;
pub use suites::*;
