use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_traits::Zero;

use crate::error::Result;
use crate::scalar::{self, Scalar};
use crate::tensoralg::{permutation_sign, schouten, BasedSpace, Multivector, StructureConstants};

use super::model::GroupPoint;

/// The algebra of left- and right-invariant vector fields on a group with Lie algebra `g`:
/// generators `e_i^λ` (indices `0..n`) and `e_i^ρ` (indices `n..2n`) with
/// `[e^λ, e^λ] = f`, `[e^ρ, e^ρ] = −f` and `[e^λ, e^ρ] = 0`.
#[derive(Clone, Debug)]
pub struct FrameAlgebra {
    base: StructureConstants,
    frame: StructureConstants,
}

impl FrameAlgebra {
    pub fn new(f: &StructureConstants) -> Self {
        let n = f.dim();
        let mut labels: Vec<String> = f.space().labels().iter().map(|l| format!("{l}^L")).collect();
        labels.extend(f.space().labels().iter().map(|l| format!("{l}^R")));
        let space = BasedSpace::new(labels).expect("labels stay unique");
        let mut entries = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for (k, c) in f.bracket_basis(i, j) {
                    entries.push((i, j, k, c.clone()));
                    entries.push((n + i, n + j, n + k, -c.clone()));
                }
            }
        }
        let frame = StructureConstants::from_entries(space, &entries).expect("antisymmetric by construction");
        FrameAlgebra { base: f.clone(), frame }
    }

    pub fn n(&self) -> usize {
        self.base.dim()
    }

    pub fn base(&self) -> &StructureConstants {
        &self.base
    }

    pub fn structure(&self) -> &StructureConstants {
        &self.frame
    }

    pub fn space(&self) -> &BasedSpace {
        self.frame.space()
    }

    fn push(&self, u: &Multivector, offset: usize, sign: i64) -> InvariantField {
        let n = self.n();
        let images: Vec<Vec<Scalar>> = (0..n)
            .map(|i| {
                let mut v = vec![Scalar::zero(); 2 * n];
                v[offset + i] = Scalar::from_integer(sign.into());
                v
            })
            .collect();
        InvariantField(u.push_forward(self.space(), &images))
    }

    /// `u^λ`.
    pub fn lambda(&self, u: &Multivector) -> InvariantField {
        self.push(u, 0, 1)
    }

    /// `u^ρ`.
    pub fn rho(&self, u: &Multivector) -> InvariantField {
        self.push(u, self.n(), 1)
    }

    /// Image of `u` under `x ↦ x^λ − x^ρ`, the generator of conjugation on `G`.
    pub fn conjugation(&self, u: &Multivector) -> InvariantField {
        let n = self.n();
        let images: Vec<Vec<Scalar>> = (0..n)
            .map(|i| {
                let mut v = vec![Scalar::zero(); 2 * n];
                v[i] = Scalar::from_integer(1.into());
                v[n + i] = Scalar::from_integer((-1).into());
                v
            })
            .collect();
        InvariantField(u.push_forward(self.space(), &images))
    }

    pub fn schouten(&self, a: &InvariantField, b: &InvariantField) -> Result<InvariantField> {
        Ok(InvariantField(schouten(&a.0, &b.0, &self.frame)?))
    }
}

/// A multivector field with constant coefficients in the invariant frame.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantField(pub Multivector);

impl InvariantField {
    pub fn multivector(&self) -> &Multivector {
        &self.0
    }

    /// Value at `s` in the left trivialization: `e^λ ↦ e`, `e^ρ ↦ Ad_{s⁻¹} e`.
    pub fn evaluate(&self, s: &GroupPoint) -> FloatMultivector {
        let a = s.ad_inv();
        let n = a.nrows();
        let vectors: Vec<Vec<f64>> = (0..2 * n)
            .map(|g| {
                if g < n {
                    (0..n).map(|k| if k == g { 1.0 } else { 0.0 }).collect()
                } else {
                    a.column(g - n).iter().copied().collect()
                }
            })
            .collect();
        let mut out = FloatMultivector::zero(n, self.0.degree());
        for (idx, c) in self.0.terms() {
            let mut acc = FloatMultivector::scalar(n, scalar::to_f64(c));
            for &g in idx {
                acc = acc.wedge_vector(&vectors[g]);
            }
            out.add_assign(&acc);
        }
        out
    }
}

impl std::ops::Add for &InvariantField {
    type Output = InvariantField;
    fn add(self, o: &InvariantField) -> InvariantField {
        InvariantField(&self.0 + &o.0)
    }
}

impl std::ops::Sub for &InvariantField {
    type Output = InvariantField;
    fn sub(self, o: &InvariantField) -> InvariantField {
        InvariantField(&self.0 - &o.0)
    }
}

/// `[A, B]` computed in the frame algebra and evaluated at `s`.
pub fn schouten_pointwise(frame: &FrameAlgebra, a: &InvariantField, b: &InvariantField, s: &GroupPoint) -> Result<FloatMultivector> {
    Ok(frame.schouten(a, b)?.evaluate(s))
}

/// A floating-point multivector on `R^n`, keyed by increasing index tuples.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatMultivector {
    dim: usize,
    degree: usize,
    terms: BTreeMap<Vec<usize>, f64>,
}

impl FloatMultivector {
    pub fn zero(dim: usize, degree: usize) -> Self {
        FloatMultivector { dim, degree, terms: BTreeMap::new() }
    }

    pub fn scalar(dim: usize, c: f64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Vec::new(), c);
        FloatMultivector { dim, degree: 0, terms }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        match permutation_sign(idx) {
            Some((sorted, neg)) => {
                let v = self.terms.get(&sorted).copied().unwrap_or(0.0);
                if neg {
                    -v
                } else {
                    v
                }
            }
            None => 0.0,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &f64)> {
        self.terms.iter()
    }

    fn add_term(&mut self, key: Vec<usize>, c: f64) {
        *self.terms.entry(key).or_insert(0.0) += c;
    }

    pub fn add_assign(&mut self, other: &FloatMultivector) {
        for (k, c) in &other.terms {
            self.add_term(k.clone(), *c);
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out
    }

    pub fn sub(&self, other: &FloatMultivector) -> Self {
        let mut out = self.clone();
        out.add_assign(&other.scaled(-1.0));
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn wedge_vector(&self, v: &[f64]) -> Self {
        let mut out = FloatMultivector::zero(self.dim, self.degree + 1);
        for (idx, c) in &self.terms {
            for (j, vj) in v.iter().enumerate() {
                if *vj == 0.0 || idx.contains(&j) {
                    continue;
                }
                let mut key = idx.clone();
                key.push(j);
                let (sorted, neg) = permutation_sign(&key).expect("distinct");
                out.add_term(sorted, if neg { -c * vj } else { c * vj });
            }
        }
        out
    }

    /// Pushes `Σ c_I e_I` through the linear map whose columns are the images of `e_i`.
    pub fn from_exact(u: &Multivector, map: &DMatrix<f64>) -> Self {
        let dim = map.nrows();
        let mut out = FloatMultivector::zero(dim, u.degree());
        for (idx, c) in u.terms() {
            let mut acc = FloatMultivector::scalar(dim, scalar::to_f64(c));
            for &i in idx {
                let col: Vec<f64> = map.column(i).iter().copied().collect();
                acc = acc.wedge_vector(&col);
            }
            out.add_assign(&acc);
        }
        out
    }

    /// Antisymmetric matrix `P[a][b]` of a bivector `Σ_{a<b} P_ab e_a∧e_b`.
    pub fn to_matrix(&self) -> DMatrix<f64> {
        assert_eq!(self.degree, 2);
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (k, c) in &self.terms {
            m[(k[0], k[1])] += c;
            m[(k[1], k[0])] -= c;
        }
        m
    }

    pub fn from_matrix(m: &DMatrix<f64>) -> Self {
        let n = m.nrows();
        let mut out = FloatMultivector::zero(n, 2);
        for a in 0..n {
            for b in a + 1..n {
                out.add_term(vec![a, b], 0.5 * (m[(a, b)] - m[(b, a)]));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn su2() -> StructureConstants {
        StructureConstants::from_entries(
            BasedSpace::numbered("e", 3),
            &[(0, 1, 2, int(1)), (1, 2, 0, int(1)), (2, 0, 1, int(1))],
        )
        .unwrap()
    }

    #[test]
    fn frame_generator_brackets() {
        let fr = FrameAlgebra::new(&su2());
        let s = fr.base().space().clone();
        for i in 0..3 {
            for j in 0..3 {
                let (x, y) = (Multivector::basis(&s, i), Multivector::basis(&s, j));
                let br = crate::tensoralg::schouten(&x, &y, fr.base()).unwrap();
                assert_eq!(fr.schouten(&fr.lambda(&x), &fr.lambda(&y)).unwrap(), fr.lambda(&br));
                assert_eq!(fr.schouten(&fr.rho(&x), &fr.rho(&y)).unwrap(), fr.rho(&br.scale(&int(-1))));
                assert!(fr.schouten(&fr.lambda(&x), &fr.rho(&y)).unwrap().0.is_zero());
            }
        }
    }

    #[test]
    fn wedge_vector_signs() {
        let e = FloatMultivector::scalar(3, 2.0).wedge_vector(&[0.0, 1.0, 0.0]).wedge_vector(&[1.0, 0.0, 0.0]);
        assert_eq!(e.get(&[0, 1]), -2.0);
        let m = e.to_matrix();
        assert_eq!(m[(1, 0)], 2.0);
        assert_eq!(FloatMultivector::from_matrix(&m).sub(&e).max_abs(), 0.0);
    }
}
