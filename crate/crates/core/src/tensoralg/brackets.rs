use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::multivector::{permutation_sign, wedge_unchecked, Multivector};
use super::space::StructureConstants;
use super::tensor::{Tensor2, Tensor3};

pub fn wedge(u: &Multivector, v: &Multivector) -> Result<Multivector> {
    u.space().check_same(v.space())?;
    Ok(wedge_unchecked(u, v))
}

fn push_signed(out: &mut Multivector, idx: &[usize], c: Scalar) {
    if let Some((sorted, neg)) = permutation_sign(idx) {
        out.add_term(sorted, if neg { -c } else { c });
    }
}

/// Algebraic Schouten bracket on `⋀a`.
///
/// On monomials
/// `[x_1∧…∧x_k, y_1∧…∧y_l] = Σ (−1)^{i+j} x_1∧…x̂_i…∧x_k ∧ [x_i, y_j] ∧ y_1∧…ŷ_j…∧y_l`,
/// i.e. the bracket term sits between the remaining factors. This is the sign
/// under which `⟨r, r⟩ = −½ [r, r]` holds for antisymmetric `r`; it agrees with
/// the Lie bracket in degree one and satisfies
/// `[u, v∧w] = [u,v]∧w + (−1)^{(|u|−1)|v|} v∧[u,w]`,
/// `[u, v] = (−1)^{|u||v|} [v, u]`.
pub fn schouten(u: &Multivector, v: &Multivector, f: &StructureConstants) -> Result<Multivector> {
    u.space().check_same(v.space())?;
    u.space().check_same(f.space())?;
    let (k, l) = (u.degree(), v.degree());
    let mut out = Multivector::zero(u.space(), (k + l).saturating_sub(1));
    if k == 0 || l == 0 {
        return Ok(out);
    }
    let mut idx = Vec::with_capacity(k + l - 1);
    for (a, ca) in u.terms() {
        for (b, cb) in v.terms() {
            let c = ca * cb;
            for p in 0..k {
                for q in 0..l {
                    for (m, fm) in f.bracket_basis(a[p], b[q]) {
                        idx.clear();
                        idx.extend(a.iter().enumerate().filter(|&(i, _)| i != p).map(|(_, &x)| x));
                        idx.push(m);
                        idx.extend(b.iter().enumerate().filter(|&(j, _)| j != q).map(|(_, &x)| x));
                        let term = &c * fm;
                        push_signed(&mut out, &idx, if (p + q) % 2 == 1 { -term } else { term });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `⟨r, r⟩ = [r₁₂, r₁₃] + [r₁₂, r₂₃] + [r₁₃, r₂₃]`.
pub fn drinfeld_bracket(r: &Tensor2, f: &StructureConstants) -> Result<Tensor3> {
    r.space().check_same(f.space())?;
    let n = r.space().dim();
    let nz: Vec<(usize, usize, Scalar)> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| !r.get(a, b).is_zero())
        .map(|(a, b)| (a, b, r.get(a, b).clone()))
        .collect();
    let mut out = Tensor3::zero(r.space());
    for (a, b, rab) in &nz {
        for (c, d, rcd) in &nz {
            let w = rab * rcd;
            // [r12, r13]: [e_a, e_c] ⊗ e_b ⊗ e_d
            for (m, fm) in f.bracket_basis(*a, *c) {
                *out.get_mut(m, *b, *d) += &w * fm;
            }
            // [r12, r23]: e_a ⊗ [e_b, e_c] ⊗ e_d
            for (m, fm) in f.bracket_basis(*b, *c) {
                *out.get_mut(*a, m, *d) += &w * fm;
            }
            // [r13, r23]: e_a ⊗ e_c ⊗ [e_b, e_d]
            for (m, fm) in f.bracket_basis(*b, *d) {
                *out.get_mut(*a, *c, m) += &w * fm;
            }
        }
    }
    Ok(out)
}

/// `ad_x` extended to `⋀a` as a derivation of degree zero.
pub fn ad_derivation(x: &Multivector, u: &Multivector, f: &StructureConstants) -> Result<Multivector> {
    if x.degree() != 1 {
        return Err(Error::Shape("ad_derivation expects a degree-1 element".into()));
    }
    x.space().check_same(u.space())?;
    x.space().check_same(f.space())?;
    let mut out = Multivector::zero(u.space(), u.degree());
    let mut idx = Vec::new();
    for (xi, cx) in x.terms() {
        for (a, ca) in u.terms() {
            let c = cx * ca;
            for p in 0..a.len() {
                for (m, fm) in f.bracket_basis(xi[0], a[p]) {
                    idx.clear();
                    idx.extend_from_slice(a);
                    idx[p] = m;
                    push_signed(&mut out, &idx, &c * fm);
                }
            }
        }
    }
    Ok(out)
}

/// Odd derivation `d_F` of `⋀g` with `d_F(e_i) = F(e_i)`.
///
/// `cobracket[i]` is the bivector `F(e_i) = Σ_{j<k} F_i^{jk} e_j∧e_k`.
pub fn ce_differential(cobracket: &[Multivector], u: &Multivector) -> Result<Multivector> {
    let space = u.space();
    if cobracket.len() != space.dim() {
        return Err(Error::Shape(format!(
            "cobracket has {} images for a {}-dimensional space",
            cobracket.len(),
            space.dim()
        )));
    }
    for img in cobracket {
        img.space().check_same(space)?;
        if img.degree() != 2 && !img.is_zero() {
            return Err(Error::Shape("cobracket images must be bivectors".into()));
        }
    }
    let mut out = Multivector::zero(space, u.degree() + 1);
    let mut idx = Vec::new();
    for (a, ca) in u.terms() {
        for p in 0..a.len() {
            for (jk, cf) in cobracket[a[p]].terms() {
                idx.clear();
                idx.extend_from_slice(&a[..p]);
                idx.extend_from_slice(jk);
                idx.extend_from_slice(&a[p + 1..]);
                let c = ca * cf;
                push_signed(&mut out, &idx, if p % 2 == 1 { -c } else { c });
            }
        }
    }
    Ok(out)
}
