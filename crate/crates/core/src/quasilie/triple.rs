use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::scalar::{self, ratio, Scalar};
use crate::tensoralg::{
    ad_derivation, drinfeld_bracket, BasedSpace, Multivector, StructureConstants, Tensor2, Tensor3,
};

use super::spec::{dot, LieAlgebraSpec};

/// Antisymmetric `t ∈ ⋀²g`, read as the map `g* → g`, `ε^i ↦ t^{ij} e_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct Twist {
    t: Multivector,
}

impl Twist {
    pub fn new(t: Multivector) -> Result<Self> {
        if t.degree() != 2 && !t.is_zero() {
            return Err(Error::Twist(format!("expected a bivector, got degree {}", t.degree())));
        }
        let t = if t.is_zero() { Multivector::zero(t.space(), 2) } else { t };
        Ok(Twist { t })
    }

    pub fn zero(space: &BasedSpace) -> Self {
        Twist { t: Multivector::zero(space, 2) }
    }

    pub fn from_matrix(space: &BasedSpace, m: &RatMatrix) -> Result<Self> {
        let n = space.dim();
        if m.rows() != n || m.cols() != n {
            return Err(Error::Twist(format!("expected a {n}x{n} matrix")));
        }
        let mut terms = Vec::new();
        for i in 0..n {
            if !m[(i, i)].is_zero() {
                return Err(Error::Twist(format!("nonzero diagonal entry at {i}")));
            }
            for j in i + 1..n {
                if m[(i, j)] != -m[(j, i)].clone() {
                    return Err(Error::Twist(format!("not antisymmetric at ({i},{j})")));
                }
                terms.push((vec![i, j], m[(i, j)].clone()));
            }
        }
        Ok(Twist { t: Multivector::from_terms(space, 2, terms) })
    }

    /// Random twist with entries `p/q`, `|p| ≤ 3`, `1 ≤ q ≤ 3`.
    pub fn random<R: rand::Rng>(space: &BasedSpace, rng: &mut R) -> Self {
        let n = space.dim();
        let mut terms = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                terms.push((vec![i, j], ratio(rng.gen_range(-3..=3), rng.gen_range(1..=3))));
            }
        }
        Twist { t: Multivector::from_terms(space, 2, terms) }
    }

    pub fn bivector(&self) -> &Multivector {
        &self.t
    }

    pub fn space(&self) -> &BasedSpace {
        self.t.space()
    }

    /// `t^{ij}`.
    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.t.coeff(&[i, j])
    }

    pub fn matrix(&self) -> RatMatrix {
        Tensor2::from_bivector(&self.t).matrix().clone()
    }

    pub fn is_zero(&self) -> bool {
        self.t.is_zero()
    }

    pub fn compose(&self, other: &Twist) -> Result<Twist> {
        self.space().check_same(other.space())?;
        Ok(Twist { t: &self.t + &other.t })
    }
}

/// A Lie quasi-bialgebra `(g, F, φ)`; `cobracket[k] = F(e_k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiBialgebraData {
    g: LieAlgebraSpec,
    cobracket: Vec<Multivector>,
    phi: Multivector,
}

impl QuasiBialgebraData {
    pub fn new(g: LieAlgebraSpec, cobracket: Vec<Multivector>, phi: Multivector) -> Result<Self> {
        let space = g.space().clone();
        if cobracket.len() != space.dim() {
            return Err(Error::Shape(format!("{} cobracket images for dimension {}", cobracket.len(), space.dim())));
        }
        let mut fixed = Vec::with_capacity(cobracket.len());
        for c in cobracket {
            c.space().check_same(&space)?;
            if c.is_zero() {
                fixed.push(Multivector::zero(&space, 2));
            } else if c.degree() == 2 {
                fixed.push(c);
            } else {
                return Err(Error::Shape("cobracket images must be bivectors".into()));
            }
        }
        phi.space().check_same(&space)?;
        let phi = match (phi.is_zero(), phi.degree()) {
            (true, _) => Multivector::zero(&space, 3),
            (false, 3) => phi,
            _ => return Err(Error::Shape("φ must be a trivector".into())),
        };
        Ok(QuasiBialgebraData { g, cobracket: fixed, phi })
    }

    pub fn zero(g: LieAlgebraSpec) -> Self {
        let s = g.space().clone();
        let cobracket = (0..s.dim()).map(|_| Multivector::zero(&s, 2)).collect();
        QuasiBialgebraData { g, cobracket, phi: Multivector::zero(&s, 3) }
    }

    pub fn g(&self) -> &LieAlgebraSpec {
        &self.g
    }

    pub fn cobracket(&self) -> &[Multivector] {
        &self.cobracket
    }

    pub fn phi(&self) -> &Multivector {
        &self.phi
    }

    /// `F^{ij}_k`, the coefficient of `e_i∧e_j` in `F(e_k)`.
    pub fn f_upper(&self, i: usize, j: usize, k: usize) -> Scalar {
        self.cobracket[k].coeff(&[i, j])
    }
}

/// A Manin quasi-triple `(d, g, h)` with `g` spanned by the first `n` basis vectors of `d`
/// and `h` the graph of `j = j_ref + t` over a reference complement.
#[derive(Clone, Debug)]
pub struct QuasiTriple {
    d: LieAlgebraSpec,
    g: LieAlgebraSpec,
    reference: RatMatrix,
    twist: Twist,
    j: RatMatrix,
    data: QuasiBialgebraData,
    r: Tensor2,
}

fn unit(n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    v[i] = Scalar::one();
    v
}

fn complement_error(reason: String, v: &[Scalar]) -> Error {
    Error::Complement { reason, witness: v.iter().map(scalar::render).collect() }
}

impl QuasiTriple {
    /// Validates the Manin pair and the complement, then derives `(F, φ)` and `r_d`.
    ///
    /// `reference` holds the `n` rows `j_ref(ε^i)` in `d`-coordinates.
    pub fn new(d: LieAlgebraSpec, g: LieAlgebraSpec, reference: RatMatrix, twist: Twist) -> Result<Self> {
        let n = g.dim();
        let kd = d.require_form()?.clone();
        if d.dim() != 2 * n {
            return Err(Error::Shape(format!("double has dimension {}, expected {}", d.dim(), 2 * n)));
        }
        if reference.rows() != n || reference.cols() != 2 * n {
            return Err(Error::Shape(format!("reference complement must be {n}x{}", 2 * n)));
        }
        twist.space().check_same(g.space())?;
        let fd = d.structure();
        for i in 0..n {
            for k in 0..n {
                if !kd[(i, k)].is_zero() {
                    return Err(Error::Form(format!("g is not isotropic: (e{i}|e{k}) ≠ 0")));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..2 * n {
                    let expect = if k < n { g.structure().get(i, j, k).clone() } else { Scalar::zero() };
                    if *fd.get(i, j, k) != expect {
                        return Err(Error::Shape(format!(
                            "bracket of d restricted to the first {n} basis vectors does not reproduce g at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        let mut j = reference.clone();
        for a in 0..n {
            for b in 0..n {
                j[(a, b)] += twist.get(a, b);
            }
        }
        for a in 0..n {
            let row = j.row(a);
            let kr = kd.mul_vec(&row);
            for k in 0..n {
                let expect = if a == k { Scalar::one() } else { Scalar::zero() };
                if kr[k] != expect {
                    return Err(complement_error(format!("(j ε^{a} | e{k}) = {}, expected {}", scalar::render(&kr[k]), scalar::render(&expect)), &row));
                }
            }
            for b in 0..n {
                let v = dot(&kr, &j.row(b));
                if !v.is_zero() {
                    return Err(complement_error(format!("complement not isotropic: (j ε^{a} | j ε^{b}) = {}", scalar::render(&v)), &row));
                }
            }
        }
        let data = derive(&d, &g, &j)?;
        let mut r = RatMatrix::zeros(2 * n, 2 * n);
        for a in 0..n {
            for b in 0..2 * n {
                r[(a, b)] = j[(a, b)].clone();
            }
        }
        let r = Tensor2::new(d.space(), r);
        Ok(QuasiTriple { d, g, reference, twist, j, data, r })
    }

    pub fn d(&self) -> &LieAlgebraSpec {
        &self.d
    }

    pub fn g(&self) -> &LieAlgebraSpec {
        &self.g
    }

    pub fn n(&self) -> usize {
        self.g.dim()
    }

    pub fn reference(&self) -> &RatMatrix {
        &self.reference
    }

    pub fn twist(&self) -> &Twist {
        &self.twist
    }

    /// Rows `j(ε^i)` spanning the complement `h`.
    pub fn j(&self) -> &RatMatrix {
        &self.j
    }

    pub fn data(&self) -> &QuasiBialgebraData {
        &self.data
    }

    /// The same pair and reference complement with the twist `self.twist + t`.
    pub fn twisted(&self, t: &Twist) -> Result<QuasiTriple> {
        QuasiTriple::new(self.d.clone(), self.g.clone(), self.reference.clone(), self.twist.compose(t)?)
    }

    /// Pushes an element of `⋀g` into `⋀d`.
    pub fn embed_g(&self, u: &Multivector) -> Multivector {
        let m = 2 * self.n();
        let images: Vec<Vec<Scalar>> = (0..self.n()).map(|i| unit(m, i)).collect();
        u.push_forward(self.d.space(), &images)
    }

    /// Pushes an element of `⋀g*` (given in the dual basis) into `⋀h ⊂ ⋀d`.
    pub fn embed_dual(&self, u: &Multivector) -> Multivector {
        let images: Vec<Vec<Scalar>> = (0..self.n()).map(|i| self.j.row(i)).collect();
        u.push_forward(self.d.space(), &images)
    }

    /// Witness-free summary used in reports.
    pub fn describe(&self) -> String {
        format!("{} (dim {}), twist {}", self.d.name(), self.d.dim(), self.twist.bivector())
    }
}

/// `F(ξ,η) = j⁻¹ p_h [jξ, jη]` and `φ(ξ,η) = p_g [jξ, jη]` on dual basis pairs.
fn derive(d: &LieAlgebraSpec, g: &LieAlgebraSpec, j: &RatMatrix) -> Result<QuasiBialgebraData> {
    let n = g.dim();
    let kd = d.require_form()?;
    let fd = d.structure();
    let gs = g.space().clone();
    let mut cob: Vec<Vec<(Vec<usize>, Scalar)>> = vec![Vec::new(); n];
    let mut phi = Tensor3::zero(&gs);
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let v = fd.bracket(&j.row(a), &j.row(b));
            let kv = kd.mul_vec(&v);
            let mut rest = v.clone();
            for m in 0..n {
                let bm = &kv[m];
                if !bm.is_zero() {
                    if a < b {
                        cob[m].push((vec![a, b], bm.clone()));
                    }
                    for (x, y) in rest.iter_mut().zip(j.row(m)) {
                        *x -= bm * &y;
                    }
                }
            }
            if rest[n..].iter().any(|x| !x.is_zero()) {
                return Err(complement_error(
                    format!("[j ε^{a}, j ε^{b}] does not split along g ⊕ h"),
                    &v,
                ));
            }
            for k in 0..n {
                *phi.get_mut(a, b, k) = rest[k].clone();
            }
        }
    }
    if !phi.is_totally_antisymmetric() {
        return Err(Error::Complement {
            reason: "derived φ is not totally antisymmetric".into(),
            witness: Vec::new(),
        });
    }
    let cobracket = cob.into_iter().map(|t| Multivector::from_terms(&gs, 2, t)).collect();
    QuasiBialgebraData::new(g.clone(), cobracket, phi.antisymmetrize())
}

pub fn derive_quasibialgebra(qt: &QuasiTriple) -> QuasiBialgebraData {
    qt.data.clone()
}

/// `r_d = Σ e_i ⊗ j(ε^i)` over `d`.
pub fn canonical_r(qt: &QuasiTriple) -> Tensor2 {
    qt.r.clone()
}

/// The double `g ⊕ g*` of a quasi-bialgebra with basis `(e_i, ε^i)`.
pub fn build_double(qb: &QuasiBialgebraData) -> Result<QuasiTriple> {
    let g = qb.g();
    let n = g.dim();
    let f = g.structure();
    let mut labels: Vec<String> = g.space().labels().to_vec();
    labels.extend(g.space().labels().iter().map(|l| format!("{l}*")));
    let ds = BasedSpace::new(labels)?;
    let mut entries = Vec::new();
    for i in 0..n {
        for jx in 0..n {
            for (k, c) in f.bracket_basis(i, jx) {
                entries.push((i, jx, k, c.clone()));
            }
            // [e_i, ε^j] = −f_{ik}^j ε^k + F^{jk}_i e_k
            let mut mixed = vec![Scalar::zero(); 2 * n];
            for k in 0..n {
                mixed[n + k] -= f.get(i, k, jx);
                mixed[k] += qb.f_upper(jx, k, i);
            }
            for (k, c) in mixed.into_iter().enumerate() {
                if !c.is_zero() {
                    entries.push((i, n + jx, k, c));
                }
            }
            if i < jx {
                // [ε^i, ε^j] = F^{ij}_k ε^k + φ^{ijk} e_k
                for k in 0..n {
                    let fk = qb.f_upper(i, jx, k);
                    if !fk.is_zero() {
                        entries.push((n + i, n + jx, n + k, fk));
                    }
                    let pk = qb.phi().coeff(&[i, jx, k]);
                    if !pk.is_zero() {
                        entries.push((n + i, n + jx, k, pk));
                    }
                }
            }
        }
    }
    let fd = StructureConstants::from_entries(ds, &entries)?;
    let mut form = RatMatrix::zeros(2 * n, 2 * n);
    let mut reference = RatMatrix::zeros(n, 2 * n);
    for i in 0..n {
        form[(i, n + i)] = Scalar::one();
        form[(n + i, i)] = Scalar::one();
        reference[(i, n + i)] = Scalar::one();
    }
    let d = LieAlgebraSpec::new(format!("double({})", g.name()), fd, Some(form))?;
    QuasiTriple::new(d, g.clone(), reference, Twist::zero(g.space()))
}

/// Standard Manin quasi-triple `(g ⋉ g*, g, g*)` with `F = 0`, `φ = 0`.
pub fn standard_triple(g: &LieAlgebraSpec) -> Result<QuasiTriple> {
    build_double(&QuasiBialgebraData::zero(g.clone()))
}

/// `d = g ⊕ g` with `((x1,x2)|(y1,y2)) = K(x1,y1) − K(x2,y2)`, basis `(Δe_i, Δ₋e_i)`
/// where `Δx = (x,x)` and `Δ₋x = (x,−x)`; reference complement `½Δ₋(g)`.
pub fn build_pair_from_metric(g: &LieAlgebraSpec) -> Result<QuasiTriple> {
    let k = g.require_form()?.clone();
    let kinv = k.inverse().ok_or_else(|| Error::Form("degenerate".into()))?;
    let n = g.dim();
    let f = g.structure();
    let mut labels: Vec<String> = g.space().labels().iter().map(|l| format!("diag.{l}")).collect();
    labels.extend(g.space().labels().iter().map(|l| format!("anti.{l}")));
    let ds = BasedSpace::new(labels)?;
    let mut entries = Vec::new();
    for i in 0..n {
        for jx in 0..n {
            for (m, c) in f.bracket_basis(i, jx) {
                entries.push((i, jx, m, c.clone()));
                entries.push((i, n + jx, n + m, c.clone()));
                entries.push((n + i, n + jx, m, c.clone()));
            }
        }
    }
    let fd = StructureConstants::from_entries(ds, &entries)?;
    let mut form = RatMatrix::zeros(2 * n, 2 * n);
    let mut reference = RatMatrix::zeros(n, 2 * n);
    let half = ratio(1, 2);
    for i in 0..n {
        for l in 0..n {
            let two_k = &k[(i, l)] * Scalar::from_integer(2.into());
            form[(i, n + l)] = two_k.clone();
            form[(n + i, l)] = two_k;
            reference[(i, n + l)] = &half * &kinv[(i, l)];
        }
    }
    let d = LieAlgebraSpec::new(format!("{}+{}", g.name(), g.name()), fd, Some(form))?;
    QuasiTriple::new(d, g.clone(), reference, Twist::zero(g.space()))
}

/// `F' = F + ad t`, `φ' = φ + ⟨t,t⟩ + φ₁` with
/// `φ₁^{ijk} = F^{jk}_l t^{il} + F^{ki}_l t^{jl} + F^{ij}_l t^{kl}`.
pub fn apply_twist(qb: &QuasiBialgebraData, t: &Twist) -> Result<QuasiBialgebraData> {
    let g = qb.g();
    let s = g.space();
    t.space().check_same(s)?;
    let n = s.dim();
    let tb = t.bivector();
    let mut cob = Vec::with_capacity(n);
    for k in 0..n {
        let adt = ad_derivation(&Multivector::basis(s, k), tb, g.structure())?;
        cob.push(&qb.cobracket()[k] + &adt);
    }
    let tt = drinfeld_bracket(&Tensor2::from_bivector(tb), g.structure())?.antisymmetrize();
    let mut phi1 = Vec::new();
    for i in 0..n {
        for jx in i + 1..n {
            for k in jx + 1..n {
                let mut acc = Scalar::zero();
                for l in 0..n {
                    acc += qb.f_upper(jx, k, l) * t.get(i, l)
                        + qb.f_upper(k, i, l) * t.get(jx, l)
                        + qb.f_upper(i, jx, l) * t.get(k, l);
                }
                phi1.push((vec![i, jx, k], acc));
            }
        }
    }
    let phi1 = Multivector::from_terms(s, 3, phi1);
    let phi = &(qb.phi() + &tt) + &phi1;
    QuasiBialgebraData::new(g.clone(), cob, phi)
}
