//! The standard quasi-triple acting on `S ≅ g*`, in exact arithmetic.

use num_traits::{One, Signed, Zero};

use crate::linalg::RatMatrix;
use crate::quasilie::LieAlgebraSpec;
use crate::report::{CheckRecord, Report};
use crate::scalar::{self, Scalar};
use crate::tensoralg::{BasedSpace, Multivector};

/// Affine vector field `V^j(ξ) = c^j + Σ_k L[j][k] ξ_k` on `g*`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearField {
    pub constant: Vec<Scalar>,
    pub linear: RatMatrix,
}

impl LinearField {
    pub fn at(&self, xi: &[Scalar]) -> Vec<Scalar> {
        let lx = self.linear.mul_vec(xi);
        self.constant.iter().zip(lx).map(|(c, l)| c + l).collect()
    }

    /// Lie bracket of vector fields `[U, V]^j = U^m ∂_m V^j − V^m ∂_m U^j`.
    pub fn bracket(&self, other: &LinearField) -> LinearField {
        let n = self.constant.len();
        let mut constant = vec![Scalar::zero(); n];
        let mut linear = RatMatrix::zeros(n, n);
        for j in 0..n {
            for m in 0..n {
                constant[j] += &self.constant[m] * &other.linear[(j, m)] - &other.constant[m] * &self.linear[(j, m)];
                for k in 0..n {
                    linear[(j, k)] += &self.linear[(m, k)] * &other.linear[(j, m)] - &other.linear[(m, k)] * &self.linear[(j, m)];
                }
            }
        }
        LinearField { constant, linear }
    }

    fn combine(fields: &[LinearField], coeffs: &[Scalar]) -> LinearField {
        let n = fields[0].constant.len();
        let mut constant = vec![Scalar::zero(); n];
        let mut linear = RatMatrix::zeros(n, n);
        for (f, c) in fields.iter().zip(coeffs) {
            if c.is_zero() {
                continue;
            }
            for j in 0..n {
                constant[j] += &f.constant[j] * c;
                for k in 0..n {
                    linear[(j, k)] += &f.linear[(j, k)] * c;
                }
            }
        }
        LinearField { constant, linear }
    }
}

/// Dressing fields of the basis `(e_1..e_n, ε^1..ε^n)` of `g ⋉ g*` on `g*`:
/// `(e_i)_S = f_{ij}^k ξ_k ∂_j` and `ε^i_S = −∂_i`.
pub fn dressing_fields(g: &LieAlgebraSpec) -> Vec<LinearField> {
    let n = g.dim();
    let f = g.structure();
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        let mut linear = RatMatrix::zeros(n, n);
        for j in 0..n {
            for k in 0..n {
                linear[(j, k)] = f.get(i, j, k).clone();
            }
        }
        out.push(LinearField { constant: vec![Scalar::zero(); n], linear });
    }
    for i in 0..n {
        let mut constant = vec![Scalar::zero(); n];
        constant[i] = -Scalar::one();
        out.push(LinearField { constant, linear: RatMatrix::zeros(n, n) });
    }
    out
}

pub fn dual_space(g: &LieAlgebraSpec) -> BasedSpace {
    BasedSpace::new(g.space().labels().iter().map(|l| format!("xi.{l}")).collect()).expect("unique")
}

/// `P_S(ξ) = −Σ_i (e_i)_S ⊗ (ε^i)_S` as the matrix `P[a][b]`.
pub fn kks_matrix(xi: &[Scalar], g: &LieAlgebraSpec) -> RatMatrix {
    let n = g.dim();
    let fields = dressing_fields(g);
    let mut p = RatMatrix::zeros(n, n);
    for i in 0..n {
        let e = fields[i].at(xi);
        let eps = fields[n + i].at(xi);
        for a in 0..n {
            for b in 0..n {
                p[(a, b)] -= &e[a] * &eps[b];
            }
        }
    }
    p
}

/// The bivector `P_S` at `ξ ∈ g*`: components `P_ab = −f_ab^k ξ_k`.
pub fn kks_bivector(xi: &[Scalar], g: &LieAlgebraSpec) -> Multivector {
    let p = kks_matrix(xi, g);
    let n = g.dim();
    let terms = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).map(|(a, b)| (vec![a, b], p[(a, b)].clone()));
    Multivector::from_terms(&dual_space(g), 2, terms)
}

/// Exact checks of the standard triple on `g*` at the given points.
pub fn kks_suite(g: &LieAlgebraSpec, points: &[Vec<Scalar>]) -> Report {
    let n = g.dim();
    let f = g.structure();
    let fields = dressing_fields(g);
    let mut report = Report::new();

    // [X_S, Y_S] = [X, Y]_S, with [e_i, ε^j] = −f_{ik}^j ε^k and [ε, ε] = 0
    let mut worst = Scalar::zero();
    let mut witness = None;
    for a in 0..2 * n {
        for b in 0..2 * n {
            let lhs = fields[a].bracket(&fields[b]);
            let mut coeffs = vec![Scalar::zero(); 2 * n];
            match (a < n, b < n) {
                (true, true) => {
                    for (k, c) in f.bracket_basis(a, b) {
                        coeffs[k] = c.clone();
                    }
                }
                (true, false) => {
                    for k in 0..n {
                        coeffs[n + k] = -f.get(a, k, b - n).clone();
                    }
                }
                (false, true) => {
                    for k in 0..n {
                        coeffs[n + k] = f.get(b, k, a - n).clone();
                    }
                }
                (false, false) => {}
            }
            let rhs = LinearField::combine(&fields, &coeffs);
            let mut d = scalar::max_abs(lhs.constant.iter().zip(&rhs.constant).map(|(x, y)| x - y).collect::<Vec<_>>().iter());
            for j in 0..n {
                for k in 0..n {
                    let v = (&lhs.linear[(j, k)] - &rhs.linear[(j, k)]).abs();
                    if v > d {
                        d = v;
                    }
                }
            }
            if !d.is_zero() && witness.is_none() {
                witness = Some(format!("basis pair ({a}, {b})"));
            }
            if d > worst {
                worst = d;
            }
        }
    }
    report.push(CheckRecord::exact(
        "kks.dressing",
        "Eq. inf: X ↦ X_S is a Lie algebra morphism (ε^i_S = −∂/∂ξ_i, (e_i)_S = f_ij^k ξ_k ∂/∂ξ_j)",
        &worst,
        witness,
    ));

    let mut comp = Scalar::zero();
    let mut comp_w = None;
    let mut asym = Scalar::zero();
    let mut hat = Scalar::zero();
    let mut smom = Scalar::zero();
    let mut smom_w = None;
    for xi in points {
        let p = kks_matrix(xi, g);
        for a in 0..n {
            for b in 0..n {
                let a_b = (&p[(a, b)] + &p[(b, a)]).abs();
                if a_b > asym {
                    asym = a_b;
                }
                let mut lie = Scalar::zero();
                for k in 0..n {
                    lie += f.get(a, b, k) * &xi[k];
                }
                let d = (&p[(a, b)] + &lie).abs();
                if !d.is_zero() && comp_w.is_none() {
                    comp_w = Some(format!("ξ = {:?}, component ({a},{b})", xi.iter().map(scalar::render).collect::<Vec<_>>()));
                }
                if d > comp {
                    comp = d;
                }
            }
        }
        for i in 0..n {
            // ê_i = dξ_i: ⟨ê_i, ε^j_S⟩ = −δ_ij = −(e_i | ε^j)
            for j in 0..n {
                let pairing = fields[n + j].at(xi)[i].clone();
                let expect = if i == j { -Scalar::one() } else { Scalar::zero() };
                let d = (pairing - expect).abs();
                if d > hat {
                    hat = d;
                }
            }
            // P^♯(dξ_i) = (e_i)_S
            let e = fields[i].at(xi);
            for a in 0..n {
                let d = (&p[(a, i)] - &e[a]).abs();
                if !d.is_zero() && smom_w.is_none() {
                    smom_w = Some(format!("x = e{}", i + 1));
                }
                if d > smom {
                    smom = d;
                }
            }
        }
    }
    report.push(CheckRecord::exact("kks.antisymmetric", "Eq. KKS: P_S = −(r_d)_S is a bivector", &asym, None));
    report.push(CheckRecord::exact(
        "kks.components",
        "Eq. KKS: P_S = ½ f_ij^k ξ_k ∂/∂ξ_j ∧ ∂/∂ξ_i (Lie-Poisson bivector)",
        &comp,
        comp_w,
    ));
    report.push(CheckRecord::exact("kks.hat", "Example KKS: ê_i = dξ_i", &hat, None));
    report.push(CheckRecord::exact("kks.smom", "Eq. Smom: (P_S)^♯(x̂) = x_S", &smom, smom_w));
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use crate::scalar::int;

    #[test]
    fn su2_north_pole() {
        let g = models::spec("su2").unwrap();
        let p = kks_bivector(&[int(0), int(0), int(1)], &g);
        // P_12 = −f_12^3 = −1
        assert_eq!(p.coeff(&[0, 1]), int(-1));
        assert!(p.coeff(&[0, 2]).is_zero() && p.coeff(&[1, 2]).is_zero());
        assert!(kks_bivector(&[int(0), int(0), int(0)], &g).is_zero());
    }
}
