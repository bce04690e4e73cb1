use std::ops::{Add, Sub};

use num_traits::Zero;

use crate::error::Result;
use crate::linalg::RatMatrix;
use crate::scalar::{ratio, Scalar};

use super::multivector::{permutation_sign, Multivector};
use super::space::BasedSpace;

/// Element `r = r^{ab} e_a ⊗ e_b` of `V ⊗ V`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor2 {
    space: BasedSpace,
    m: RatMatrix,
}

impl Tensor2 {
    pub fn new(space: &BasedSpace, m: RatMatrix) -> Self {
        assert_eq!((m.rows(), m.cols()), (space.dim(), space.dim()));
        Tensor2 {
            space: space.clone(),
            m,
        }
    }

    pub fn zero(space: &BasedSpace) -> Self {
        Self::new(space, RatMatrix::zeros(space.dim(), space.dim()))
    }

    /// `u ⊗ v`.
    pub fn outer(space: &BasedSpace, u: &[Scalar], v: &[Scalar]) -> Self {
        let n = space.dim();
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = &u[i] * &v[j];
            }
        }
        Self::new(space, m)
    }

    /// The antisymmetric tensor of a bivector (`x∧y ↦ x⊗y − y⊗x`).
    pub fn from_bivector(b: &Multivector) -> Self {
        assert_eq!(b.degree(), 2);
        let n = b.space().dim();
        let mut m = RatMatrix::zeros(n, n);
        for (idx, c) in b.terms() {
            m[(idx[0], idx[1])] += c;
            m[(idx[1], idx[0])] -= c;
        }
        Self::new(b.space(), m)
    }

    pub fn space(&self) -> &BasedSpace {
        &self.space
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.m
    }

    pub fn get(&self, a: usize, b: usize) -> &Scalar {
        &self.m[(a, b)]
    }

    pub fn transpose(&self) -> Self {
        Self::new(&self.space, self.m.transpose())
    }

    pub fn symmetric_part(&self) -> Self {
        self.combine(&self.transpose(), false)
    }

    pub fn antisymmetric_part(&self) -> Self {
        self.combine(&self.transpose(), true)
    }

    fn combine(&self, t: &Self, minus: bool) -> Self {
        let n = self.space.dim();
        let half = ratio(1, 2);
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let v = if minus {
                    &self.m[(i, j)] - &t.m[(i, j)]
                } else {
                    &self.m[(i, j)] + &t.m[(i, j)]
                };
                m[(i, j)] = v * &half;
            }
        }
        Self::new(&self.space, m)
    }

    /// Bivector of the antisymmetric part (`c_{ab} = a^{ab}` for `a < b`).
    pub fn to_bivector(&self) -> Multivector {
        let a = self.antisymmetric_part();
        let n = self.space.dim();
        let mut out = Multivector::zero(&self.space, 2);
        for i in 0..n {
            for j in i + 1..n {
                out.add_term(vec![i, j], a.m[(i, j)].clone());
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }
}

impl Add for &Tensor2 {
    type Output = Tensor2;
    fn add(self, rhs: &Tensor2) -> Tensor2 {
        let n = self.space.dim();
        let mut m = self.m.clone();
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] += &rhs.m[(i, j)];
            }
        }
        Tensor2::new(&self.space, m)
    }
}

impl Sub for &Tensor2 {
    type Output = Tensor2;
    fn sub(self, rhs: &Tensor2) -> Tensor2 {
        let n = self.space.dim();
        let mut m = self.m.clone();
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] -= &rhs.m[(i, j)];
            }
        }
        Tensor2::new(&self.space, m)
    }
}

/// Element of `V ⊗ V ⊗ V`, dense.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor3 {
    space: BasedSpace,
    data: Vec<Scalar>,
}

impl Tensor3 {
    pub fn zero(space: &BasedSpace) -> Self {
        let n = space.dim();
        Tensor3 {
            space: space.clone(),
            data: vec![Scalar::zero(); n * n * n],
        }
    }

    /// Fully antisymmetric tensor of a trivector.
    pub fn from_trivector(t: &Multivector) -> Self {
        assert_eq!(t.degree(), 3);
        let mut out = Self::zero(t.space());
        let perms = [
            ([0, 1, 2], false),
            ([1, 2, 0], false),
            ([2, 0, 1], false),
            ([1, 0, 2], true),
            ([0, 2, 1], true),
            ([2, 1, 0], true),
        ];
        for (idx, c) in t.terms() {
            for (p, neg) in perms {
                let v = if neg { -c.clone() } else { c.clone() };
                *out.get_mut(idx[p[0]], idx[p[1]], idx[p[2]]) += v;
            }
        }
        out
    }

    pub fn space(&self) -> &BasedSpace {
        &self.space
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> &Scalar {
        let n = self.space.dim();
        &self.data[(a * n + b) * n + c]
    }

    pub fn get_mut(&mut self, a: usize, b: usize, c: usize) -> &mut Scalar {
        let n = self.space.dim();
        &mut self.data[(a * n + b) * n + c]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn max_abs(&self) -> Scalar {
        crate::scalar::max_abs(&self.data)
    }

    pub fn is_totally_antisymmetric(&self) -> bool {
        let n = self.space.dim();
        (0..n).all(|a| {
            (0..n).all(|b| {
                (0..n).all(|c| {
                    let v = self.get(a, b, c);
                    *v == -self.get(b, a, c).clone() && *v == -self.get(a, c, b).clone()
                })
            })
        })
    }

    /// Projection onto `⋀³`: `c_{ijk} = (1/6) Σ_σ sgn(σ) T^{σ(ijk)}`.
    pub fn antisymmetrize(&self) -> Multivector {
        let n = self.space.dim();
        let sixth = ratio(1, 6);
        let mut out = Multivector::zero(&self.space, 3);
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let mut acc = Scalar::zero();
                    for p in [[i, j, k], [j, k, i], [k, i, j], [j, i, k], [i, k, j], [k, j, i]] {
                        let (_, neg) = permutation_sign(&p).expect("distinct");
                        let v = self.get(p[0], p[1], p[2]);
                        if neg {
                            acc -= v;
                        } else {
                            acc += v;
                        }
                    }
                    out.add_term(vec![i, j, k], acc * &sixth);
                }
            }
        }
        out
    }

    pub fn try_sub(&self, other: &Tensor3) -> Result<Tensor3> {
        self.space.check_same(&other.space)?;
        Ok(self - other)
    }
}

impl Add for &Tensor3 {
    type Output = Tensor3;
    fn add(self, rhs: &Tensor3) -> Tensor3 {
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
        out
    }
}

impl Sub for &Tensor3 {
    type Output = Tensor3;
    fn sub(self, rhs: &Tensor3) -> Tensor3 {
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a -= b;
        }
        out
    }
}
