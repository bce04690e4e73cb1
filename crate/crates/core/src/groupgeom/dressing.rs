//! The pair `(G×G, G)` with `S = (G×G)/G ≅ G`, `[g1, g2] ↦ g1 g2⁻¹`.
//!
//! Vectors are left-trivialized and written in the basis of `g`; covectors use the dual basis.
//! Complements are `h_t = {½K^♯Δ₋(ξ) + Δ(t(ξ))}` where `Δx = (x,x)`, `Δ₋x = (x,−x)`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::quasilie::Twist;
use crate::scalar;

use super::model::{GroupPoint, MatrixGroupModel};

/// Points whose smallest dressing singular value falls below this are non-admissible.
pub const ADMISSIBILITY_TOL: f64 = 1e-7;
/// Eigenvalues within this distance of −1 are clustered into the −1 eigenspace.
pub const EIGEN_CLUSTER_TOL: f64 = 1e-7;

/// Floating-point twist `t^{ij}` (antisymmetric).
#[derive(Clone, Debug, PartialEq)]
pub struct NumericTwist {
    t: DMatrix<f64>,
}

impl NumericTwist {
    pub fn zero(n: usize) -> Self {
        NumericTwist { t: DMatrix::zeros(n, n) }
    }

    pub fn from_matrix(t: DMatrix<f64>) -> Result<Self> {
        if !t.is_square() {
            return Err(Error::Twist("twist matrix must be square".into()));
        }
        if (&t + t.transpose()).amax() > 1e-12 {
            return Err(Error::Twist("twist matrix is not antisymmetric".into()));
        }
        Ok(NumericTwist { t })
    }

    pub fn from_twist(t: &Twist) -> Self {
        let m = t.matrix();
        NumericTwist { t: DMatrix::from_fn(m.rows(), m.cols(), |i, j| scalar::to_f64(&m[(i, j)])) }
    }

    /// `t[(i, j)] = t^{ij}`.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.t
    }

    pub fn is_zero(&self) -> bool {
        self.t.amax() == 0.0
    }

    pub fn compose(&self, other: &NumericTwist) -> NumericTwist {
        NumericTwist { t: &self.t + &other.t }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Admissibility {
    pub admissible: bool,
    pub margin: f64,
}

fn identity(n: usize) -> DMatrix<f64> {
    DMatrix::identity(n, n)
}

/// `(x1, x2)_S(s) = x2 − Ad_{s⁻¹} x1`, the generator of `s ↦ exp(−τx1) s exp(τx2)`.
pub fn dressing_field(x1: &DVector<f64>, x2: &DVector<f64>, s: &GroupPoint) -> DVector<f64> {
    x2 - s.ad_inv() * x1
}

/// `x_S = (1 − Ad_{s⁻¹}) x` for `x ∈ g` embedded diagonally.
pub fn conjugation_matrix(s: &GroupPoint) -> DMatrix<f64> {
    identity(s.ad().nrows()) - s.ad_inv()
}

/// Columns `(j ε^i)_S(s)` for the complement twisted by `t` from `½Δ₋(g)`.
pub fn dressing_matrix(s: &GroupPoint, t: &NumericTwist, model: &MatrixGroupModel) -> Result<DMatrix<f64>> {
    let kinv = model.form_inv()?;
    let n = model.dim();
    let a = s.ad_inv();
    Ok(-0.5 * (identity(n) + a) * kinv + (identity(n) - a) * t.matrix().transpose())
}

pub fn admissibility(s: &GroupPoint, t: &NumericTwist, model: &MatrixGroupModel) -> Result<Admissibility> {
    let m = dressing_matrix(s, t, model)?;
    let margin = m.singular_values().min();
    Ok(Admissibility { admissible: margin >= ADMISSIBILITY_TOL, margin })
}

fn admissible_dressing(s: &GroupPoint, t: &NumericTwist, model: &MatrixGroupModel) -> Result<DMatrix<f64>> {
    let m = dressing_matrix(s, t, model)?;
    let margin = m.singular_values().min();
    if margin < ADMISSIBILITY_TOL {
        return Err(Error::NotAdmissible { margin });
    }
    Ok(m)
}

/// `x̂(s)`, defined by `⟨x̂, ξ_S⟩ = −(x | ξ)` on the complement.
pub fn hat_form(x: &DVector<f64>, s: &GroupPoint, t: &NumericTwist, model: &MatrixGroupModel) -> Result<DVector<f64>> {
    let m = admissible_dressing(s, t, model)?;
    let mt = m.transpose();
    let sol = mt.lu().solve(x).ok_or(Error::NotAdmissible { margin: 0.0 })?;
    Ok(-sol)
}

/// `2 K (1 + Ad_s)⁻¹ x`, the hat-form of the untwisted complement.
pub fn hat_closed_form(x: &DVector<f64>, s: &GroupPoint, model: &MatrixGroupModel) -> Result<DVector<f64>> {
    let k = model.form()?;
    let n = model.dim();
    let op = identity(n) + s.ad();
    let margin = op.singular_values().min();
    if margin < ADMISSIBILITY_TOL {
        return Err(Error::NotAdmissible { margin });
    }
    let y = op.lu().solve(x).ok_or(Error::NotAdmissible { margin })?;
    Ok(2.0 * k * y)
}

/// `τ_s` with `(e_i)_S = τ_{ik} (j ε^k)_S`; `tau[(i, k)] = τ_{ik}`.
pub fn tau_map(s: &GroupPoint, t: &NumericTwist, model: &MatrixGroupModel) -> Result<DMatrix<f64>> {
    let m = admissible_dressing(s, t, model)?;
    let tau_t = m.lu().solve(&conjugation_matrix(s)).ok_or(Error::NotAdmissible { margin: 0.0 })?;
    let tau = tau_t.transpose();
    let asym = (&tau + tau.transpose()).amax();
    if asym > 1e-9 * (1.0 + tau.amax()) {
        return Err(Error::Model(format!("τ_s is not antisymmetric (defect {asym:e})")));
    }
    Ok(tau)
}

/// `ν_s = (1 + t∘τ_s)⁻¹`, transporting hat-forms from `h` to `h` twisted by `extra`.
pub fn nu_map(s: &GroupPoint, base: &NumericTwist, extra: &NumericTwist, model: &MatrixGroupModel) -> Result<DMatrix<f64>> {
    let tau = tau_map(s, base, model)?;
    let n = model.dim();
    let sigma = identity(n) + extra.matrix() * &tau;
    let margin = sigma.singular_values().min();
    if margin < ADMISSIBILITY_TOL {
        return Err(Error::NotAdmissible { margin });
    }
    sigma.try_inverse().ok_or(Error::NotAdmissible { margin })
}

/// `x̂_{h'}(s) = (ν_s x)̂_h(s)` for `h'` the twist of `h` (itself twisted by `base`) by `extra`.
pub fn twisted_hat(
    x: &DVector<f64>,
    s: &GroupPoint,
    base: &NumericTwist,
    extra: &NumericTwist,
    model: &MatrixGroupModel,
) -> Result<DVector<f64>> {
    let nu = nu_map(s, base, extra, model)?;
    hat_form(&(nu * x), s, base, model)
}

/// Spanning vectors `(x1, x2) ∈ g ⊕ g` of the twisted complement.
pub fn complement_generators(t: &NumericTwist, model: &MatrixGroupModel) -> Result<Vec<(DVector<f64>, DVector<f64>)>> {
    let kinv = model.form_inv()?;
    let n = model.dim();
    Ok((0..n)
        .map(|i| {
            let anti = 0.5 * kinv.column(i).into_owned();
            let diag = t.matrix().row(i).transpose();
            (&anti + &diag, -anti + diag)
        })
        .collect())
}

/// Largest entry of the Gram matrix of the complement for `K ⊕ (−K)`.
pub fn complement_isotropy(t: &NumericTwist, model: &MatrixGroupModel) -> Result<f64> {
    let k = model.form()?;
    let gens = complement_generators(t, model)?;
    let mut worst = 0.0f64;
    for (a1, a2) in &gens {
        for (b1, b2) in &gens {
            let v = (a1.transpose() * k * b1)[0] - (a2.transpose() * k * b2)[0];
            worst = worst.max(v.abs());
        }
    }
    Ok(worst)
}

/// K-orthonormal pairs `(a_α, b_α)` spanning the −1 eigenspace of `Ad_s`.
pub fn minus_one_pairs(s: &GroupPoint, model: &MatrixGroupModel) -> Result<Vec<(DVector<f64>, DVector<f64>)>> {
    let k = model.form()?;
    let n = model.dim();
    let op = identity(n) + s.ad();
    let kernel = super::subspace::null_space(&op, EIGEN_CLUSTER_TOL);
    let basis: Vec<DVector<f64>> = kernel.column_iter().map(|c| c.into_owned()).collect();
    if basis.len() % 2 == 1 {
        return Err(Error::Model(format!(
            "the −1 eigenspace of Ad_s has odd dimension {}",
            basis.len()
        )));
    }
    let mut ortho: Vec<DVector<f64>> = Vec::new();
    for mut v in basis {
        for u in &ortho {
            let c = (u.transpose() * k * &v)[0];
            v -= c * u;
        }
        let norm2 = (v.transpose() * k * &v)[0];
        if norm2 <= 1e-12 {
            return Err(Error::Form("K is not positive definite on the −1 eigenspace".into()));
        }
        ortho.push(v / norm2.sqrt());
    }
    Ok(ortho.chunks(2).map(|p| (p[0].clone(), p[1].clone())).collect())
}

/// `t = ε Σ_α (a_α ⊗ b_α − b_α ⊗ a_α)` over the pairs of [`minus_one_pairs`].
pub fn find_admissible_twist(s: &GroupPoint, eps: f64, model: &MatrixGroupModel) -> Result<NumericTwist> {
    if eps == 0.0 || !eps.is_finite() {
        return Err(Error::Twist("ε must be a nonzero finite number".into()));
    }
    let n = model.dim();
    let mut t = DMatrix::zeros(n, n);
    for (a, b) in minus_one_pairs(s, model)? {
        t += eps * (&a * b.transpose() - &b * a.transpose());
    }
    NumericTwist::from_matrix(t)
}
