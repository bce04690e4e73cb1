use num_traits::{One, Signed, Zero};

use crate::linalg::RatMatrix;
use crate::report::{CheckRecord, Report};
use crate::scalar::{self, ratio, Scalar};
use crate::tensoralg::{
    ce_differential, drinfeld_bracket, schouten, Multivector, StructureConstants, Tensor2, Tensor3,
};

use super::spec::{dot, form_invariance_defect, LieAlgebraSpec};
use super::triple::{build_double, canonical_r, QuasiTriple};

/// Largest residual over a family of exact checks, keeping the first witness.
#[derive(Default)]
pub(crate) struct Worst {
    max: Scalar,
    witness: Option<String>,
}

impl Worst {
    pub(crate) fn note(&mut self, diff: &Multivector, label: impl FnOnce() -> String) {
        let m = diff.max_abs();
        if !m.is_zero() && self.witness.is_none() {
            let (idx, c) = diff.terms().next().expect("nonzero");
            self.witness = Some(format!("{}: coefficient {} at {:?}", label(), scalar::render(c), idx));
        }
        if m > self.max {
            self.max = m;
        }
    }

    pub(crate) fn note_scalar(&mut self, v: &Scalar, label: impl FnOnce() -> String) {
        if !v.is_zero() && self.witness.is_none() {
            self.witness = Some(format!("{} = {}", label(), scalar::render(v)));
        }
        if v.abs() > self.max {
            self.max = v.abs();
        }
    }

    pub(crate) fn record(self, id: &str, anchor: &str) -> CheckRecord {
        CheckRecord::exact(id, anchor, &self.max, self.witness)
    }
}

fn tensor3_diff(a: &Tensor3, b: &Tensor3) -> (Scalar, Option<String>) {
    let d = a - b;
    let n = d.space().dim();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if !d.get(x, y, z).is_zero() {
                    return (d.max_abs(), Some(format!("component ({x},{y},{z}) off by {}", scalar::render(d.get(x, y, z)))));
                }
            }
        }
    }
    (Scalar::zero(), None)
}

/// Checks the Manin pair axioms for the subspace spanned by `rows` (in `d`-coordinates).
pub fn verify_manin_pair(d: &LieAlgebraSpec, rows: &RatMatrix) -> Report {
    let mut report = Report::new();
    let dim = d.dim();
    let form = d.form();
    let mut iso = Worst::default();
    if let Some(k) = form {
        for a in 0..rows.rows() {
            let ka = k.mul_vec(&rows.row(a));
            for b in 0..rows.rows() {
                iso.note_scalar(&dot(&ka, &rows.row(b)), || format!("(g{a} | g{b})"));
            }
        }
    } else {
        iso.max = Scalar::one();
        iso.witness = Some("no scalar product".into());
    }
    report.push(iso.record("manin.isotropic", "Def. Manin pair: g is isotropic"));
    let rank = rows.rank();
    let ok_dim = dim.is_multiple_of(2) && rank == dim / 2 && rows.cols() == dim;
    report.push(CheckRecord::boolean(
        "manin.maximal",
        "Def. Manin pair: maximal isotropic iff dim g = dim d / 2",
        ok_dim,
        Some(format!("rank {rank}, dim d {dim}")),
    ));
    let f = d.structure();
    let mut closure = None;
    'outer: for a in 0..rows.rows() {
        for b in a + 1..rows.rows() {
            let br = f.bracket(&rows.row(a), &rows.row(b));
            if rows.solve_in_row_span(&br).is_none() {
                closure = Some(format!("[g{a}, g{b}] leaves the subspace"));
                break 'outer;
            }
        }
    }
    report.push(CheckRecord::boolean(
        "manin.subalgebra",
        "Def. Manin pair: g is a Lie subalgebra",
        closure.is_none(),
        closure,
    ));
    let inv = match form {
        Some(k) => form_invariance_defect(f, k).map(|(i, j, l, v)| {
            (v.abs(), format!("K([e{i},e{j}],e{l}) + K(e{j},[e{i},e{l}]) = {}", scalar::render(&v)))
        }),
        None => Some((Scalar::one(), "no scalar product".into())),
    };
    let (res, wit) = match inv {
        Some((r, w)) => (r, Some(w)),
        None => (Scalar::zero(), None),
    };
    report.push(CheckRecord::exact("manin.form_invariant", "Def. Manin pair: invariant scalar product", &res, wit));
    report
}

/// `ad_x s = 0` for every basis `x`.
fn tensor2_invariance(s: &Tensor2, f: &StructureConstants) -> Worst {
    let n = f.dim();
    let mut w = Worst::default();
    for x in 0..n {
        for a in 0..n {
            for b in 0..n {
                let mut acc = Scalar::zero();
                for m in 0..n {
                    acc += f.get(x, m, a) * s.get(m, b) + f.get(x, m, b) * s.get(a, m);
                }
                w.note_scalar(&acc, || format!("(ad_{x} s)^({a},{b})"));
            }
        }
    }
    w
}

fn basis_multivectors(space: &crate::tensoralg::BasedSpace, k: usize) -> Vec<Multivector> {
    let n = space.dim();
    let mut out = Vec::new();
    if k == 1 {
        for i in 0..n {
            out.push(Multivector::basis(space, i));
        }
    } else {
        for i in 0..n {
            for j in i + 1..n {
                out.push(Multivector::monomial(space, &[i, j], Scalar::one()));
            }
        }
    }
    out
}

/// Exact verification of the algebraic identities of a quasi-triple.
pub fn check_identities(qt: &QuasiTriple) -> Report {
    let mut report = Report::new();
    let n = qt.n();
    let fd = qt.d().structure();
    let gs = qt.g().space().clone();
    let data = qt.data();
    let r = canonical_r(qt);
    let a_t = r.antisymmetric_part();
    let s_t = r.symmetric_part();
    let a_d = a_t.to_bivector();
    let phi_d = qt.embed_g(data.phi());

    let mut w = Worst::default();
    for i in 0..n {
        let x = qt.embed_g(&Multivector::basis(&gs, i));
        let lhs = schouten(&x, &a_d, fd).expect("shared space");
        w.note(&(&lhs - &qt.embed_g(&data.cobracket()[i])), || format!("x = e{i}"));
    }
    report.push(w.record("algsch.x", "Prop. algSch: [x, a_d] = F(x)"));

    let mut w = Worst::default();
    let f = qt.g().structure();
    for i in 0..n {
        let xi = qt.embed_dual(&Multivector::basis(&gs, i));
        let lhs = schouten(&xi, &a_d, fd).expect("shared space");
        let mut terms = Vec::new();
        for k in 0..n {
            for m in k + 1..n {
                terms.push((vec![k, m], f.get(k, m, i).clone()));
            }
        }
        let f_xi = qt.embed_dual(&Multivector::from_terms(&gs, 2, terms));
        let mut e = vec![Scalar::zero(); n];
        e[i] = Scalar::one();
        let phi_xi = qt.embed_g(&data.phi().contract_first(&e));
        let rhs = &phi_xi - &f_xi;
        w.note(&(&lhs - &rhs), || format!("ξ = ε^{i}"));
    }
    report.push(w.record("algsch.xi", "Prop. algSch: [ξ, a_d] = −f(ξ) + φ(ξ)"));

    let mut w = Worst::default();
    w.note(&schouten(&a_d, &phi_d, fd).expect("shared space"), || "[a_d, φ]".into());
    report.push(w.record("algsch.phi", "Prop. algSch: [a_d, φ] = 0"));

    let rr = drinfeld_bracket(&r, fd).expect("shared space");
    let (res, wit) = tensor3_diff(&rr, &Tensor3::from_trivector(&phi_d));
    report.push(CheckRecord::exact("cyb", "Prop. cYB: ⟨r_d, r_d⟩ = φ", &res, wit));

    let aa = drinfeld_bracket(&a_t, fd).expect("shared space");
    let mut w = Worst::default();
    if !aa.is_totally_antisymmetric() {
        w.note_scalar(&Scalar::one(), || "⟨a_d, a_d⟩ not totally antisymmetric".into());
    }
    let half = ratio(-1, 2);
    w.note(&(&aa.antisymmetrize() - &schouten(&a_d, &a_d, fd).expect("shared space").scale(&half)), || {
        "⟨a_d,a_d⟩ + ½[a_d,a_d]".into()
    });
    report.push(w.record("skew", "Eq. skew: ⟨r, r⟩ = − ½ [r,r]"));

    let ss = drinfeld_bracket(&s_t, fd).expect("shared space");
    let (res, wit) = tensor3_diff(&rr, &(&aa + &ss));
    report.push(CheckRecord::exact("ras", "Eq. ras: ⟨r, r⟩ = ⟨a, a⟩ + ⟨s, s⟩", &res, wit));

    let mut w = tensor2_invariance(&s_t, fd);
    let gram_inv = qt.d().form().and_then(RatMatrix::inverse).expect("validated form");
    let two = Scalar::from_integer(2.into());
    let dim = 2 * n;
    for a in 0..dim {
        for b in 0..dim {
            w.note_scalar(&(&two * s_t.get(a, b) - &gram_inv[(a, b)]), || format!("2 s^({a},{b}) − K_d^({a},{b})"));
        }
    }
    report.push(w.record("rd.symmetric", "Eq. rd: symmetric part of r_d is half the scalar product, ad-invariant"));

    let cob = data.cobracket();
    for k in [1usize, 2] {
        let mut w = Worst::default();
        for u in basis_multivectors(&gs, k) {
            let d1 = ce_differential(cob, &u).expect("shape");
            let d2 = ce_differential(cob, &d1).expect("shape");
            let rhs = schouten(data.phi(), &u, f).expect("shared space");
            w.note(&(&d2 - &rhs), || format!("u = {u}"));
        }
        report.push(w.record(&format!("dF2.deg{k}"), "Remark comm: (d_F)² = [φ, ·]"));
    }

    let jac = match build_double(data) {
        Ok(_) => CheckRecord::exact("double.jacobi", "Eq. comd: the double of (g, F, φ) is a Lie algebra", &Scalar::zero(), None),
        Err(e) => CheckRecord::exact("double.jacobi", "Eq. comd: the double of (g, F, φ) is a Lie algebra", &Scalar::one(), Some(e.to_string())),
    };
    report.push(jac);
    report
}
