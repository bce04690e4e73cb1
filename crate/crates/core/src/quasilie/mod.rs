//! Manin pairs and quasi-triples, Lie quasi-bialgebras, twists and canonical r-matrices.

mod checks;
mod spec;
mod triple;

pub use checks::{check_identities, verify_manin_pair};
pub(crate) use checks::Worst;
pub use spec::{form_invariance_defect, LieAlgebraSpec};
pub use triple::{
    apply_twist, build_double, build_pair_from_metric, canonical_r, derive_quasibialgebra,
    standard_triple, QuasiBialgebraData, QuasiTriple, Twist,
};
