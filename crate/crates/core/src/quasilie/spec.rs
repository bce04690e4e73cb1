use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::scalar::{self, Scalar};
use crate::tensoralg::{BasedSpace, StructureConstants};

/// A Lie algebra given by structure constants, optionally with an invariant form `K`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebraSpec {
    name: String,
    f: StructureConstants,
    form: Option<RatMatrix>,
}

/// First basis triple where `K([e_i,e_j],e_k) + K(e_j,[e_i,e_k])` is nonzero.
pub fn form_invariance_defect(f: &StructureConstants, k: &RatMatrix) -> Option<(usize, usize, usize, Scalar)> {
    let n = f.dim();
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                let mut acc = Scalar::zero();
                for m in 0..n {
                    acc += f.get(i, j, m) * &k[(m, l)] + f.get(i, l, m) * &k[(j, m)];
                }
                if !acc.is_zero() {
                    return Some((i, j, l, acc));
                }
            }
        }
    }
    None
}

impl LieAlgebraSpec {
    /// Validates Jacobi and, when a form is given, symmetry, nondegeneracy and ad-invariance.
    pub fn new(name: impl Into<String>, f: StructureConstants, form: Option<RatMatrix>) -> Result<Self> {
        f.jacobi_defect().into_result()?;
        if let Some(k) = &form {
            let n = f.dim();
            if k.rows() != n || k.cols() != n {
                return Err(Error::Form(format!("expected a {n}x{n} matrix, got {}x{}", k.rows(), k.cols())));
            }
            if !k.is_symmetric() {
                return Err(Error::Form("not symmetric".into()));
            }
            if k.rank() < n {
                return Err(Error::Form(format!("degenerate (rank {} < {n})", k.rank())));
            }
            if let Some((i, j, l, v)) = form_invariance_defect(&f, k) {
                return Err(Error::Form(format!(
                    "not ad-invariant: K([e{i},e{j}],e{l}) + K(e{j},[e{i},e{l}]) = {}",
                    scalar::render(&v)
                )));
            }
        }
        Ok(LieAlgebraSpec { name: name.into(), f, form })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn structure(&self) -> &StructureConstants {
        &self.f
    }

    pub fn space(&self) -> &BasedSpace {
        self.f.space()
    }

    pub fn dim(&self) -> usize {
        self.f.dim()
    }

    pub fn form(&self) -> Option<&RatMatrix> {
        self.form.as_ref()
    }

    pub fn require_form(&self) -> Result<&RatMatrix> {
        self.form
            .as_ref()
            .ok_or_else(|| Error::Form(format!("{} carries no invariant form", self.name)))
    }

    /// `K(x, y)` for coordinate vectors.
    pub fn pair(&self, x: &[Scalar], y: &[Scalar]) -> Result<Scalar> {
        let k = self.require_form()?;
        Ok(dot(x, &k.mul_vec(y)))
    }
}

pub(crate) fn dot(x: &[Scalar], y: &[Scalar]) -> Scalar {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn su2_f() -> StructureConstants {
        StructureConstants::from_entries(
            BasedSpace::numbered("e", 3),
            &[(0, 1, 2, int(1)), (1, 2, 0, int(1)), (2, 0, 1, int(1))],
        )
        .unwrap()
    }

    fn diag(v: Scalar, n: usize) -> RatMatrix {
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = v.clone();
        }
        m
    }

    #[test]
    fn su2_half_identity_is_invariant() {
        let g = LieAlgebraSpec::new("su2", su2_f(), Some(diag(ratio(1, 2), 3))).unwrap();
        assert_eq!(g.pair(&[int(1), int(0), int(0)], &[int(2), int(0), int(0)]).unwrap(), int(1));
    }

    #[test]
    fn non_invariant_form_rejected() {
        let mut k = diag(int(1), 3);
        k[(0, 0)] = int(2);
        assert!(matches!(LieAlgebraSpec::new("x", su2_f(), Some(k)), Err(Error::Form(_))));
    }

    #[test]
    fn degenerate_form_rejected() {
        let mut k = diag(int(1), 3);
        k[(2, 2)] = int(0);
        assert!(LieAlgebraSpec::new("x", su2_f(), Some(k)).is_err());
    }

    #[test]
    fn missing_form_reported() {
        let g = LieAlgebraSpec::new("x", su2_f(), None).unwrap();
        assert!(g.require_form().is_err());
    }
}
