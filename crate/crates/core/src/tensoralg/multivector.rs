use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::Result;
use crate::scalar::{render, Scalar};

use super::space::BasedSpace;

/// Sign of the permutation sorting `idx`, or `None` when an index repeats.
pub fn permutation_sign(idx: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut v = idx.to_vec();
    let mut negative = false;
    // insertion sort, counting transpositions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some((v, negative))
    }
}

/// Homogeneous element of the exterior algebra over a based space.
///
/// Keys are strictly increasing index tuples and only non-zero coefficients
/// are stored, so structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq)]
pub struct Multivector {
    space: BasedSpace,
    degree: usize,
    terms: BTreeMap<Vec<usize>, Scalar>,
}

impl Multivector {
    pub fn zero(space: &BasedSpace, degree: usize) -> Self {
        Multivector {
            space: space.clone(),
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(space: &BasedSpace, value: Scalar) -> Self {
        let mut m = Self::zero(space, 0);
        m.add_term(Vec::new(), value);
        m
    }

    pub fn basis(space: &BasedSpace, i: usize) -> Self {
        Self::monomial(space, &[i], Scalar::one())
    }

    /// `c · e_{idx[0]} ∧ … ∧ e_{idx[k-1]}` for indices in any order.
    pub fn monomial(space: &BasedSpace, idx: &[usize], c: Scalar) -> Self {
        assert!(idx.iter().all(|&i| i < space.dim()), "index out of range");
        let mut m = Self::zero(space, idx.len());
        if let Some((sorted, neg)) = permutation_sign(idx) {
            m.add_term(sorted, if neg { -c } else { c });
        }
        m
    }

    pub fn from_vector(space: &BasedSpace, v: &[Scalar]) -> Self {
        assert_eq!(v.len(), space.dim());
        let mut m = Self::zero(space, 1);
        for (i, c) in v.iter().enumerate() {
            m.add_term(vec![i], c.clone());
        }
        m
    }

    /// Builds from `(indices, coefficient)` pairs with indices in any order.
    pub fn from_terms(space: &BasedSpace, degree: usize, terms: impl IntoIterator<Item = (Vec<usize>, Scalar)>) -> Self {
        let mut m = Self::zero(space, degree);
        for (idx, c) in terms {
            assert_eq!(idx.len(), degree, "term degree mismatch");
            m = &m + &Self::monomial(space, &idx, c);
        }
        m
    }

    pub fn space(&self) -> &BasedSpace {
        &self.space
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Component for an arbitrary index tuple, applying the permutation sign.
    pub fn coeff(&self, idx: &[usize]) -> Scalar {
        match permutation_sign(idx) {
            None => Scalar::zero(),
            Some((sorted, neg)) => {
                let c = self.terms.get(&sorted).cloned().unwrap_or_default();
                if neg {
                    -c
                } else {
                    c
                }
            }
        }
    }

    /// Coefficients of a degree-1 element as a dense vector.
    pub fn to_vector(&self) -> Vec<Scalar> {
        assert_eq!(self.degree, 1, "to_vector needs a degree-1 element");
        (0..self.space.dim()).map(|i| self.coeff(&[i])).collect()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(&self.space, self.degree);
        if c.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect();
        out
    }

    pub fn max_abs(&self) -> Scalar {
        crate::scalar::max_abs(self.terms.values())
    }

    pub(crate) fn add_term(&mut self, key: Vec<usize>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Image under the linear map sending `e_i` to `images[i]` (vectors in `target`),
    /// extended to the exterior algebra.
    pub fn push_forward(&self, target: &BasedSpace, images: &[Vec<Scalar>]) -> Self {
        assert_eq!(images.len(), self.space.dim());
        let mut out = Self::scalar(target, Scalar::zero());
        out.degree = self.degree;
        for (idx, c) in &self.terms {
            let mut acc = Self::scalar(target, c.clone());
            for &i in idx {
                let v = Self::from_vector(target, &images[i]);
                acc = wedge_unchecked(&acc, &v);
            }
            out = &out + &acc;
        }
        out
    }

    /// Contraction of a covector (dual-basis coordinates) into the first slot.
    pub fn contract_first(&self, xi: &[Scalar]) -> Self {
        assert!(self.degree >= 1);
        let mut out = Self::zero(&self.space, self.degree - 1);
        for (idx, c) in &self.terms {
            for (p, &i) in idx.iter().enumerate() {
                if xi[i].is_zero() {
                    continue;
                }
                let mut rest = idx.clone();
                rest.remove(p);
                let v = c * &xi[i];
                out.add_term(rest, if p % 2 == 1 { -v } else { v });
            }
        }
        out
    }
}

pub(crate) fn wedge_unchecked(u: &Multivector, v: &Multivector) -> Multivector {
    let mut out = Multivector::zero(&u.space, u.degree + v.degree);
    for (a, ca) in &u.terms {
        for (b, cb) in &v.terms {
            let mut idx = a.clone();
            idx.extend_from_slice(b);
            if let Some((sorted, neg)) = permutation_sign(&idx) {
                let c = ca * cb;
                out.add_term(sorted, if neg { -c } else { c });
            }
        }
    }
    out
}

pub(crate) fn checked_sum(u: &Multivector, v: &Multivector) -> Result<Multivector> {
    u.space.check_same(&v.space)?;
    if u.degree != v.degree && !u.is_zero() && !v.is_zero() {
        return Err(crate::error::Error::Shape(format!(
            "cannot add degree {} and degree {} elements",
            u.degree, v.degree
        )));
    }
    let mut out = if u.is_zero() { v.clone() } else { u.clone() };
    if !u.is_zero() {
        for (k, c) in &v.terms {
            out.add_term(k.clone(), c.clone());
        }
    }
    Ok(out)
}

impl Add for &Multivector {
    type Output = Multivector;
    /// Panics on mismatched spaces or degrees (zero elements of any degree are neutral).
    fn add(self, rhs: &Multivector) -> Multivector {
        checked_sum(self, rhs).expect("multivector sum")
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = -v.clone();
        }
        out
    }
}

impl Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        self + &(-rhs)
    }
}

impl Mul<&Scalar> for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: &Scalar) -> Multivector {
        self.scale(rhs)
    }
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (idx, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let name = if idx.is_empty() {
                "1".to_string()
            } else {
                idx.iter().map(|&i| self.space.label(i)).collect::<Vec<_>>().join("^")
            };
            write!(f, "({}) {}", render(c), name)?;
        }
        Ok(())
    }
}
