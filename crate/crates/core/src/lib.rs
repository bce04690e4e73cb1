//! Exact algebra of Manin pairs, Lie quasi-bialgebras and canonical r-matrices,
//! together with the induced quasi-Poisson geometry on matrix-group models.
//!
//! The crate is split into four layers:
//!
//! * [`tensoralg`] – exterior and tensor algebra over a based vector space with
//!   exact rational coefficients (wedge, Schouten, Drinfeld bracket, `d_F`).
//! * [`quasilie`] – Manin quasi-triples, their doubles, twists and the exact
//!   identity checks.
//! * [`groupgeom`] – floating point evaluation of the bivectors `P_G`, `P_S`,
//!   dressing fields, hat-forms and moment map conditions on matrix groups.
//! * [`io`] / [`report`] – the algebra file format and verification reports.

pub mod error;
pub mod groupgeom;
pub mod io;
pub mod linalg;
pub mod models;
pub mod quasilie;
pub mod report;
pub mod scalar;
pub mod tensoralg;

pub use error::{Error, Result};
pub use scalar::Scalar;
