use nalgebra::DMatrix;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::quasilie::{canonical_r, QuasiTriple, Twist};
use crate::scalar::{self, ratio};
use crate::tensoralg::Multivector;

use super::dressing::{conjugation_matrix, dressing_matrix, NumericTwist};
use super::frame::{FloatMultivector, FrameAlgebra, InvariantField};
use super::model::{to_f64_matrix, GroupPoint, MatrixGroupModel};

/// `P_S = −(r_d)_S` as the matrix `P[a][b]`; `P^♯α = Pα` contracts the second slot.
pub fn p_s_matrix(s: &GroupPoint, t: &NumericTwist, model: &MatrixGroupModel) -> Result<DMatrix<f64>> {
    let m = dressing_matrix(s, t, model)?;
    Ok(-conjugation_matrix(s) * m.transpose())
}

pub fn bivector_p_s(s: &GroupPoint, t: &NumericTwist, model: &MatrixGroupModel) -> Result<FloatMultivector> {
    Ok(FloatMultivector::from_matrix(&p_s_matrix(s, t, model)?))
}

/// `t_S = (1 − A) t (1 − A)ᵀ` with `A = Ad_{s⁻¹}`.
pub fn t_s_matrix(s: &GroupPoint, t: &NumericTwist) -> DMatrix<f64> {
    let b = conjugation_matrix(s);
    &b * t.matrix() * b.transpose()
}

/// `φ_S`, the image of `φ ∈ ⋀³g` under `x ↦ x_S`.
pub fn phi_s(s: &GroupPoint, phi: &Multivector) -> FloatMultivector {
    FloatMultivector::from_exact(phi, &conjugation_matrix(s))
}

/// `P_S = ½ Σ K^{ij} e_i^λ ∧ e_j^ρ − t_S` in the invariant frame; needs a rational form.
pub fn p_s_frame(frame: &FrameAlgebra, model: &MatrixGroupModel, t: Option<&Twist>) -> Result<InvariantField> {
    let k = model.algebra().require_form()?;
    let kinv = k.inverse().ok_or_else(|| Error::Form("degenerate".into()))?;
    let n = model.dim();
    let half = ratio(1, 2);
    let mut terms = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if !kinv[(i, j)].is_zero() {
                terms.push((vec![i, n + j], &half * &kinv[(i, j)]));
            }
        }
    }
    let base = InvariantField(Multivector::from_terms(frame.space(), 2, terms));
    Ok(match t {
        Some(t) => &base - &frame.conjugation(t.bivector()),
        None => base,
    })
}

/// `φ_S` in the invariant frame, via `x_S = x^λ − x^ρ`.
pub fn phi_s_frame(frame: &FrameAlgebra, phi: &Multivector) -> InvariantField {
    frame.conjugation(phi)
}

/// `t_g = Ad_g r_d − r_d` at a point with known exponential coordinates.
#[derive(Clone, Debug)]
pub struct PoissonGroupValue {
    /// Right-trivialized value, the `g ⊗ g` block of `t_g`.
    pub right: DMatrix<f64>,
    /// Left-trivialized value `Ad_{g⁻¹} t_g`.
    pub left: DMatrix<f64>,
    /// Largest component of `t_g` outside `g ⊗ g`.
    pub off_g: f64,
    /// Largest entry of `t_g + t_gᵀ`.
    pub asymmetry: f64,
}

/// `Ad` on `d` of `exp(Σ c_i e_i)`, through `exp(ad^d)`.
pub fn ad_on_double(qt: &QuasiTriple, c: &[f64]) -> DMatrix<f64> {
    let m = qt.d().dim();
    let fd = qt.d().structure();
    let mut ad = DMatrix::zeros(m, m);
    for (i, ci) in c.iter().enumerate() {
        for j in 0..m {
            for (k, f) in fd.bracket_basis(i, j) {
                ad[(k, j)] += ci * scalar::to_f64(f);
            }
        }
    }
    ad.exp()
}

pub fn bivector_p_g(g: &GroupPoint, qt: &QuasiTriple) -> Result<PoissonGroupValue> {
    let c = g
        .coords()
        .ok_or_else(|| Error::Model("P_G needs exponential coordinates of the point".into()))?;
    let n = qt.n();
    if c.len() != n {
        return Err(Error::Shape(format!("point has {} coordinates, algebra dimension {n}", c.len())));
    }
    let ad = ad_on_double(qt, c.as_slice());
    let r = to_f64_matrix(canonical_r(qt).matrix());
    let tg = &ad * &r * ad.transpose() - &r;
    let mut off_g = 0.0f64;
    for a in 0..2 * n {
        for b in 0..2 * n {
            if a >= n || b >= n {
                off_g = off_g.max(tg[(a, b)].abs());
            }
        }
    }
    let asymmetry = (&tg + tg.transpose()).amax();
    let right = tg.view((0, 0), (n, n)).into_owned();
    let left = g.ad_inv() * &right * g.ad_inv().transpose();
    Ok(PoissonGroupValue { right, left, off_g, asymmetry })
}
