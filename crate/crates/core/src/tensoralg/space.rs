use std::collections::HashSet;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{render, Scalar};

/// A finite-dimensional vector space with a labelled basis.
#[derive(Clone, Debug)]
pub struct BasedSpace {
    labels: Arc<Vec<String>>,
}

impl BasedSpace {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::Shape("a based space needs at least one basis vector".into()));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::Shape(format!("duplicate basis label {l:?}")));
            }
        }
        Ok(BasedSpace {
            labels: Arc::new(labels),
        })
    }

    /// Space with labels `prefix1, …, prefixN`.
    pub fn numbered(prefix: &str, dim: usize) -> Self {
        Self::new((1..=dim).map(|i| format!("{prefix}{i}")).collect())
            .expect("numbered labels are unique")
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub(crate) fn check_same(&self, other: &BasedSpace) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SpaceMismatch {
                left: self.dim(),
                right: other.dim(),
            })
        }
    }
}

impl PartialEq for BasedSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.labels, &other.labels) || self.labels == other.labels
    }
}

impl Eq for BasedSpace {}

/// Structure constants `f_{ij}^k` with `[e_i, e_j] = f_{ij}^k e_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants {
    space: BasedSpace,
    f: Vec<Scalar>,
}

impl StructureConstants {
    /// Builds from a dense `n³` array indexed `(i * n + j) * n + k`.
    /// Antisymmetry in `(i, j)` is enforced; Jacobi is not (see [`Self::jacobi_defect`]).
    pub fn new(space: BasedSpace, f: Vec<Scalar>) -> Result<Self> {
        let n = space.dim();
        if f.len() != n * n * n {
            return Err(Error::Shape(format!(
                "expected {} structure constants, got {}",
                n * n * n,
                f.len()
            )));
        }
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    let a = &f[(i * n + j) * n + k];
                    let b = &f[(j * n + i) * n + k];
                    if &(-b.clone()) != a {
                        return Err(Error::NotAntisymmetric { i, j, k });
                    }
                }
            }
        }
        Ok(StructureConstants { space, f })
    }

    pub fn abelian(space: BasedSpace) -> Self {
        let n = space.dim();
        StructureConstants {
            space,
            f: vec![Scalar::zero(); n * n * n],
        }
    }

    /// Builds from sparse entries `(i, j, k, value)`; the `(j, i)` entries are
    /// filled by antisymmetry, and conflicting entries are rejected.
    pub fn from_entries(space: BasedSpace, entries: &[(usize, usize, usize, Scalar)]) -> Result<Self> {
        let n = space.dim();
        let mut f: Vec<Option<Scalar>> = vec![None; n * n * n];
        for (i, j, k, v) in entries {
            let (i, j, k) = (*i, *j, *k);
            if i >= n || j >= n || k >= n {
                return Err(Error::Shape(format!("index ({i},{j},{k}) out of range for dim {n}")));
            }
            for (slot, val) in [((i * n + j) * n + k, v.clone()), ((j * n + i) * n + k, -v.clone())] {
                match &f[slot] {
                    Some(old) if *old != val => return Err(Error::NotAntisymmetric { i, j, k }),
                    _ => f[slot] = Some(val),
                }
            }
        }
        Self::new(space, f.into_iter().map(Option::unwrap_or_default).collect())
    }

    pub fn space(&self) -> &BasedSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> &Scalar {
        let n = self.dim();
        &self.f[(i * n + j) * n + k]
    }

    /// Non-zero components of `[e_i, e_j]`.
    pub fn bracket_basis(&self, i: usize, j: usize) -> impl Iterator<Item = (usize, &Scalar)> + '_ {
        let n = self.dim();
        let base = (i * n + j) * n;
        self.f[base..base + n]
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim();
        let mut out = vec![Scalar::zero(); n];
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                let c = xi * yj;
                for (k, f) in self.bracket_basis(i, j) {
                    out[k] += &c * f;
                }
            }
        }
        out
    }

    /// The Jacobiator `Σ_cyc [[e_i, e_j], e_k]`.
    pub fn jacobi_defect(&self) -> Jacobiator {
        let n = self.dim();
        let mut data = vec![Scalar::zero(); n * n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        for (m, fabm) in self.bracket_basis(a, b) {
                            for (l, fmcl) in self.bracket_basis(m, c) {
                                data[((i * n + j) * n + k) * n + l] += fabm * fmcl;
                            }
                        }
                    }
                }
            }
        }
        Jacobiator { n, data }
    }
}

/// Components `J_{ijk}^l` of `[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]`.
#[derive(Clone, Debug)]
pub struct Jacobiator {
    n: usize,
    data: Vec<Scalar>,
}

impl Jacobiator {
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> &Scalar {
        let n = self.n;
        &self.data[((i * n + j) * n + k) * n + l]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// First non-zero component in lexicographic order.
    pub fn first_violation(&self) -> Option<(usize, usize, usize, usize, Scalar)> {
        let n = self.n;
        self.data.iter().position(|v| !v.is_zero()).map(|p| {
            (p / (n * n * n), (p / (n * n)) % n, (p / n) % n, p % n, self.data[p].clone())
        })
    }

    pub fn max_abs(&self) -> Scalar {
        crate::scalar::max_abs(&self.data)
    }

    pub fn into_result(self) -> Result<()> {
        match self.first_violation() {
            None => Ok(()),
            Some((i, j, k, l, v)) => Err(Error::Jacobi {
                i,
                j,
                k,
                l,
                value: render(&v),
            }),
        }
    }
}
