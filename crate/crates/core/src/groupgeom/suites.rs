//! Seeded verification suites over a matrix group model.

use nalgebra::DMatrix;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::quasilie::{build_pair_from_metric, canonical_r, standard_triple, QuasiTriple, Twist, Worst};
use crate::report::{CheckRecord, Report};
use crate::scalar::{self, ratio, Scalar};
use crate::tensoralg::{ad_derivation, drinfeld_bracket, schouten, Multivector};

use super::bivectors::{bivector_p_g, p_s_frame, p_s_matrix, phi_s_frame, t_s_matrix};
use super::dressing::{admissibility, conjugation_matrix, tau_map, NumericTwist};
use super::frame::{schouten_pointwise, FloatMultivector, FrameAlgebra, InvariantField};
use super::kks::kks_suite;
use super::model::{CMatrix, GroupPoint, MatrixGroupModel};
use super::moment::{distribution_check, invariant_bracket, moment_check_conjugacy, moment_check_s};

/// Samples whose dressing margin falls below this are drawn again.
pub const SAMPLE_MARGIN: f64 = 1e-3;
/// Samples with a larger `Ad` entry are drawn again (noncompact groups lose precision far out).
pub const SAMPLE_AD_BOUND: f64 = 50.0;
/// Conjugators are composed with each other and with sample points, so they stay closer in.
pub const CONJUGATOR_AD_BOUND: f64 = 3.0;
/// Tolerance for brackets computed from finite differences.
pub const BRACKET_TOL: f64 = 1e-6;
/// Tolerance for the `g`-valuedness of `t_g`.
pub const G_VALUED_TOL: f64 = 1e-12;

fn unit(n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); n];
    v[i] = Scalar::one();
    v
}

/// Exact identities of `P_D = a^λ − a^ρ` in the invariant frame of the double.
pub fn frame_identities(qt: &QuasiTriple) -> Result<Report> {
    let d = qt.d();
    let fd = d.structure();
    let frame = FrameAlgebra::new(fd);
    let n = qt.n();
    let r = canonical_r(qt);
    let a = r.antisymmetric_part().to_bivector();
    let p_d = &frame.lambda(&a) - &frame.rho(&a);
    let phi = qt.embed_g(qt.data().phi());
    let (phi_l, phi_r) = (frame.lambda(&phi), frame.rho(&phi));

    // the Casimir part s of r_d contributes ⟨s, s⟩, an invariant trivector
    let w = drinfeld_bracket(&r.symmetric_part(), fd)?.antisymmetrize();
    let mut inv = Worst::default();
    for i in 0..d.dim() {
        let x = Multivector::basis(d.space(), i);
        inv.note(&ad_derivation(&x, &w, fd)?, || format!("x = {}", d.space().label(i)));
    }

    let half = ratio(1, 2);
    let lhs = frame.schouten(&p_d, &p_d)?.0.scale(&half);
    let rhs = &(&phi_r - &phi_l) + &(&frame.lambda(&w) - &frame.rho(&w));
    let mut sch = Worst::default();
    sch.note(&(&lhs - &rhs.0), || "½[P_D, P_D]".into());

    let mut pd_x = Worst::default();
    let mut pd_xi = Worst::default();
    let gs = qt.g().space();
    let f = qt.g().structure();
    for i in 0..n {
        let x = qt.embed_g(&Multivector::basis(gs, i));
        let lhs = frame.schouten(&frame.lambda(&x), &p_d)?;
        let rhs = frame.lambda(&qt.embed_g(&qt.data().cobracket()[i]));
        pd_x.note(&(&lhs - &rhs).0, || format!("x = {}", gs.label(i)));

        let xi = qt.embed_dual(&Multivector::basis(gs, i));
        let lhs = frame.schouten(&frame.lambda(&xi), &p_d)?;
        let terms = (0..n).flat_map(|k| (k + 1..n).map(move |m| (k, m))).map(|(k, m)| (vec![k, m], f.get(k, m, i).clone()));
        let f_xi = qt.embed_dual(&Multivector::from_terms(gs, 2, terms));
        let phi_xi = qt.embed_g(&qt.data().phi().contract_first(&unit(n, i)));
        let rhs = frame.lambda(&(&phi_xi - &f_xi));
        pd_xi.note(&(&lhs - &rhs).0, || format!("ξ = ε^{}", i + 1));
    }

    let mut pent_l = Worst::default();
    pent_l.note(&frame.schouten(&p_d, &phi_l)?.0, || "[P_D, φ^λ]".into());
    let mut pent_r = Worst::default();
    pent_r.note(&frame.schouten(&p_d, &phi_r)?.0, || "[P_D, φ^ρ]".into());

    let mut report = Report::new();
    report.push(inv.record("schpd.casimir_invariant", "⟨s, s⟩ of the Casimir part of r_d is ad(d)-invariant"));
    report.push(sch.record(
        "schpd",
        "Eq. SchPD: ½[P_D, P_D] = φ^ρ − φ^λ (modulo w^λ − w^ρ for the invariant w = ⟨s, s⟩)",
    ));
    report.push(pd_x.record("proppd.x", "Prop. propPD: L_{x^λ} P_D = F(x)^λ"));
    report.push(pd_xi.record("proppd.xi", "Prop. propPD: L_{ξ^λ} P_D = −f(ξ)^λ + φ(ξ)^λ"));
    report.push(pent_l.record("pentagon.lambda", "Eq. pentagon: [P_D, φ^λ] = 0"));
    report.push(pent_r.record("pentagon.rho", "Eq. pentagon: [P_D, φ^ρ] = 0"));
    Ok(report)
}

/// Generator brackets of the frame algebra against `[x, y]^λ`, `−[x, y]^ρ` and `0`.
pub fn frame_soundness(frame: &FrameAlgebra) -> Result<Report> {
    let f = frame.base();
    let s = f.space();
    let mut w = Worst::default();
    for i in 0..frame.n() {
        for j in 0..frame.n() {
            let (x, y) = (Multivector::basis(s, i), Multivector::basis(s, j));
            let br = schouten(&x, &y, f)?;
            let ll = frame.schouten(&frame.lambda(&x), &frame.lambda(&y))?;
            w.note(&(&ll - &frame.lambda(&br)).0, || format!("[e{}^L, e{}^L]", i + 1, j + 1));
            let rr = frame.schouten(&frame.rho(&x), &frame.rho(&y))?;
            w.note(&(&rr + &frame.rho(&br)).0, || format!("[e{}^R, e{}^R]", i + 1, j + 1));
            let lr = frame.schouten(&frame.lambda(&x), &frame.rho(&y))?;
            w.note(&lr.0, || format!("[e{}^L, e{}^R]", i + 1, j + 1));
        }
    }
    let mut report = Report::new();
    report.push(w.record(
        "frame.brackets",
        "left- and right-invariant vector fields commute with each other",
    ));
    Ok(report)
}

/// `P_S` and `φ_S` in the invariant frame of `G` for the metric pair twisted by `t`.
pub struct FrameBivectors {
    pub frame: FrameAlgebra,
    pub p_s: InvariantField,
    pub phi_s: InvariantField,
    pub phi: Multivector,
}

impl FrameBivectors {
    pub fn new(model: &MatrixGroupModel, t: &Twist) -> Result<Self> {
        let g = model.algebra();
        let frame = FrameAlgebra::new(g.structure());
        let qt = build_pair_from_metric(g)?.twisted(t)?;
        let phi = qt.data().phi().clone();
        let p_s = p_s_frame(&frame, model, (!t.is_zero()).then_some(t))?;
        let phi_s = phi_s_frame(&frame, &phi);
        Ok(FrameBivectors { frame, p_s, phi_s, phi })
    }

    /// `½[P_S, P_S] + φ_S − (φ^λ − φ^ρ)`, exactly.
    pub fn schouten_defect(&self) -> Result<Multivector> {
        let half = ratio(1, 2);
        let sq = self.frame.schouten(&self.p_s, &self.p_s)?.0.scale(&half);
        let lr = &self.frame.lambda(&self.phi) - &self.frame.rho(&self.phi);
        Ok(&(&sq + &self.phi_s.0) - &lr.0)
    }

    /// Splits the defect as `u^λ − u^ρ + rest`, with `u` read off the pure-λ terms.
    pub fn split_defect(&self) -> Result<(Multivector, Multivector)> {
        let defect = self.schouten_defect()?;
        let n = self.frame.n();
        let base = self.frame.base().space();
        let u = Multivector::from_terms(
            base,
            defect.degree(),
            defect.terms().filter(|(idx, _)| idx.iter().all(|&i| i < n)).map(|(idx, c)| (idx.clone(), c.clone())),
        );
        let lr = &self.frame.lambda(&u) - &self.frame.rho(&u);
        Ok((u, &defect - &lr.0))
    }

    /// `½[P_S, P_S](s)` and `φ_S(s)`.
    pub fn at(&self, s: &GroupPoint) -> Result<(FloatMultivector, FloatMultivector)> {
        let sq = schouten_pointwise(&self.frame, &self.p_s, &self.p_s, s)?.scaled(0.5);
        Ok((sq, self.phi_s.evaluate(s)))
    }
}

/// A random rational twist with entries `p/q`, `|p| ≤ 3`, `1 ≤ q ≤ 3`.
pub fn random_twist<R: Rng>(model: &MatrixGroupModel, rng: &mut R) -> Twist {
    Twist::random(model.algebra().space(), rng)
}

/// Random points where every complement in `twists` is admissible with margin at least [`SAMPLE_MARGIN`].
pub fn admissible_samples<R: Rng>(
    model: &MatrixGroupModel,
    rng: &mut R,
    count: usize,
    twists: &[&NumericTwist],
) -> Result<Vec<GroupPoint>> {
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        if attempts > 1000 * (count + 1) {
            return Err(Error::Model("could not draw admissible sample points".into()));
        }
        let s = model.random_point(rng);
        let mut ok = s.ad().amax() <= SAMPLE_AD_BOUND && s.ad_inv().amax() <= SAMPLE_AD_BOUND;
        for t in twists {
            ok &= admissibility(&s, t, model)?.margin >= SAMPLE_MARGIN;
        }
        if ok {
            out.push(s);
        }
    }
    Ok(out)
}

/// A random point whose `Ad` and `Ad⁻¹` entries stay within `bound`.
pub fn bounded_point<R: Rng>(model: &MatrixGroupModel, rng: &mut R, bound: f64) -> GroupPoint {
    loop {
        let s = model.random_point(rng);
        if s.ad().amax() <= bound && s.ad_inv().amax() <= bound {
            return s;
        }
    }
}

fn random_rational_point<R: Rng>(n: usize, rng: &mut R) -> Vec<Scalar> {
    (0..n).map(|_| ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4))).collect()
}

fn small_point<R: Rng>(model: &MatrixGroupModel, rng: &mut R) -> GroupPoint {
    let c: Vec<f64> = (0..model.dim()).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    model.exp(&c)
}

/// Checks of `P_G` from `t_g = Ad_g r_d − r_d`: vanishing at `e`, `g`-valuedness, the cocycle
/// law, and vanishing for an invariant complement.
fn poisson_group_checks<R: Rng>(
    model: &MatrixGroupModel,
    qt: &QuasiTriple,
    vanishing: bool,
    rng: &mut R,
    samples: usize,
    tol: f64,
    id: &str,
) -> Result<Report> {
    let n = model.dim();
    let e = model.exp(&vec![0.0; n]);
    let at_e = bivector_p_g(&e, qt)?.right.amax();
    let (mut off_g, mut cocycle, mut size) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..samples {
        let g = small_point(model, rng);
        let h = small_point(model, rng);
        let gh = model.product(&g, &h)?;
        let (tg, th, tgh) = (bivector_p_g(&g, qt)?, bivector_p_g(&h, qt)?, bivector_p_g(&gh, qt)?);
        off_g = off_g.max(tg.off_g).max(tg.asymmetry);
        let expected = &tg.right + g.ad() * &th.right * g.ad().transpose();
        cocycle = cocycle.max((&tgh.right - expected).amax());
        size = size.max(tg.right.amax());
    }
    let mut report = Report::new();
    report.push(CheckRecord::numeric(format!("{id}.identity"), "At the identity, P_G vanishes", at_e, tol, None));
    report.push(CheckRecord::numeric(format!("{id}.g_valued"), "t takes values in g (antisymmetric, no complement components)", off_g, G_VALUED_TOL, None));
    report.push(CheckRecord::numeric(format!("{id}.cocycle"), "P_G is multiplicative: t_{gh} = t_g + Ad_g t_h", cocycle, tol, None));
    if vanishing {
        report.push(CheckRecord::numeric(
            format!("{id}.vanishes"),
            "P_G^{h} vanishes if the complement h is ad(g)-invariant",
            size,
            tol,
            None,
        ));
    }
    Ok(report)
}

fn max_diff(a: &FloatMultivector, b: &FloatMultivector) -> f64 {
    a.sub(b).max_abs()
}

/// The `group` suite: frame algebra, `P_D`, `P_G`, `P_S` and the KKS bivector.
pub fn group_suite(model: &MatrixGroupModel, samples: usize, seed: u64, tol: f64) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = model.algebra();
    let n = model.dim();
    let mut report = Report::new();
    report.extend(frame_soundness(&FrameAlgebra::new(g.structure()))?);

    let standard = standard_triple(g)?;
    report.extend(poisson_group_checks(model, &standard, true, &mut rng, samples, tol, "pg.standard")?);
    let points: Vec<Vec<Scalar>> = (0..samples).map(|_| random_rational_point(n, &mut rng)).collect();
    report.extend(kks_suite(g, &points));

    if g.form().is_none() {
        return Ok(report.sorted());
    }
    let pair = build_pair_from_metric(g)?;
    let t = random_twist(model, &mut rng);
    let twisted = pair.twisted(&t)?;
    report.extend(frame_identities(&pair)?);
    report.extend(frame_identities(&twisted)?.prefixed("twisted."));
    report.extend(poisson_group_checks(model, &pair, true, &mut rng, samples, tol, "pg.metric")?);
    report.extend(poisson_group_checks(model, &twisted, false, &mut rng, samples, tol, "pg.twisted")?);

    let zero = NumericTwist::zero(n);
    let nt = NumericTwist::from_twist(&t);
    let fb = FrameBivectors::new(model, &Twist::zero(g.space()))?;
    let fb_t = FrameBivectors::new(model, &t)?;
    for (prefix, bv) in [("", &fb), ("twisted.", &fb_t)] {
        let (u, rest) = bv.split_defect()?;
        report.push(CheckRecord::exact_zero(
            format!("{prefix}schps.frame"),
            "Eq. SchPS in the invariant frame: ½[P_S, P_S] + φ_S = φ^λ − φ^ρ + u^λ − u^ρ",
            &rest,
        ));
        let mut w = Worst::default();
        for i in 0..n {
            let x = Multivector::basis(g.space(), i);
            w.note(&ad_derivation(&x, &u, g.structure())?, || format!("x = {}", g.space().label(i)));
        }
        report.push(w.record(
            format!("{prefix}schps.frame_invariant").as_str(),
            "the correction u is ad(g)-invariant, so u^λ − u^ρ vanishes pointwise",
        ));
    }

    let pts = admissible_samples(model, &mut rng, samples, &[&zero, &nt])?;
    let (mut schps, mut schps_t, mut phi_max, mut frame_vs_matrix, mut smom, mut maptau, mut tau_asym) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for s in &pts {
        for (bv, tw, out) in [(&fb, &zero, &mut schps), (&fb_t, &nt, &mut schps_t)] {
            let (sq, phi) = bv.at(s)?;
            *out = out.max(max_diff(&sq, &phi.scaled(-1.0)));
            // φ_S is cubic in 1 − Ad_{s⁻¹}
            phi_max = phi_max.max(phi.max_abs() / conjugation_matrix(s).amax().max(1.0).powi(3));
            let p = p_s_matrix(s, tw, model)?;
            frame_vs_matrix = frame_vs_matrix.max((bv.p_s.evaluate(s).to_matrix() - &p).amax());
            let b = conjugation_matrix(s);
            for i in 0..n {
                let x = nalgebra::DVector::from_fn(n, |k, _| if k == i { 1.0 } else { 0.0 });
                let hat = super::dressing::hat_form(&x, s, tw, model)?;
                smom = smom.max((&p * hat - &b * &x).amax());
            }
            let tau = tau_map(s, tw, model)?;
            tau_asym = tau_asym.max((&tau + tau.transpose()).amax() / tau.amax().max(1.0));
            let m = super::dressing::dressing_matrix(s, tw, model)?;
            maptau = maptau.max((&m * tau.transpose() - &b).amax() / b.amax().max(1.0));
        }
    }
    let e = model.exp(&vec![0.0; n]);
    let at_e = p_s_matrix(&e, &zero, model)?.amax().max(p_s_matrix(&e, &nt, model)?.amax());
    report.push(CheckRecord::numeric("schps", "½[P_S, P_S] = φ_S with the orientation x_S = x^λ − x^ρ: ½[P_S, P_S](s) + φ_S(s) = 0", schps, tol, None));
    report.push(CheckRecord::numeric("twisted.schps", "½[P_S, P_S] + φ_S = 0 pointwise for a twisted complement", schps_t, tol, None));
    if n == 3 {
        report.push(CheckRecord::numeric("phis.vanishes", "Example exP: φ_S vanishes although φ ≠ 0", phi_max, tol, None));
    }
    report.push(CheckRecord::numeric("ps.frame", "Eq. lr: P_S = ½ Σ K^{ij} e_i^λ ∧ e_j^ρ − t_S agrees with −(r_d)_S", frame_vs_matrix, tol, None));
    report.push(CheckRecord::numeric("ps.identity", "P_S vanishes at the identity", at_e, tol, None));
    report.push(CheckRecord::numeric("smom", "Eq. Smom: (P_S^h)^♯(x̂_h) = x_S", smom, tol, None));
    report.push(CheckRecord::numeric("tau.antisymmetric", "τ_s is anti-symmetric", tau_asym, tol, None));
    report.push(CheckRecord::numeric("tau.maptau", "Eq. maptau: x_S(s) = ((j ∘ τ_s)(x))_S(s)", maptau, tol, None));
    Ok(report.sorted())
}

/// A direction `x` with `ad(x)` semisimple with imaginary spectrum, scaled so the largest
/// eigenvalue is `i`.
fn compact_direction(model: &MatrixGroupModel) -> Option<Vec<f64>> {
    let n = model.dim();
    let f = model.algebra().structure();
    let mut candidates: Vec<Vec<f64>> = Vec::new();
    for i in 0..n {
        candidates.push((0..n).map(|k| if k == i { 1.0 } else { 0.0 }).collect());
    }
    for i in 0..n {
        for j in i + 1..n {
            for sign in [1.0, -1.0] {
                candidates.push((0..n).map(|k| if k == i { 1.0 } else if k == j { sign } else { 0.0 }).collect());
            }
        }
    }
    for x in candidates {
        let ad = DMatrix::from_fn(n, n, |k, j| (0..n).map(|i| x[i] * scalar::to_f64(f.get(i, j, k))).sum::<f64>());
        let eig = ad.complex_eigenvalues();
        if eig.iter().any(|z| z.re.abs() > 1e-12) {
            continue;
        }
        let alpha = eig.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        if alpha > 1e-6 {
            return Some(x.iter().map(|v| v / alpha).collect());
        }
    }
    None
}

fn re_trace(m: &CMatrix) -> f64 {
    m.trace().re
}

fn weighted(m: &CMatrix, w: impl Fn(usize, usize) -> (f64, f64)) -> f64 {
    let mut acc = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let (a, b) = w(i, j);
            acc += a * m[(i, j)].re + b * m[(i, j)].im;
        }
    }
    acc
}

/// The `moment` suite: moment maps on `S`, on conjugacy classes and on `g*`, brackets of
/// invariant functions and the characteristic distribution.
pub fn moment_suite(model: &MatrixGroupModel, samples: usize, seed: u64, tol: f64) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = model.algebra();
    let n = model.dim();
    let mut report = Report::new();

    let points: Vec<Vec<Scalar>> = (0..samples).map(|_| random_rational_point(n, &mut rng)).collect();
    if let Some(rec) = kks_suite(g, &points).get("kks.smom") {
        let mut rec = rec.clone();
        rec.id = "moment.kks".into();
        rec.anchor = "Eq. moment on g* for the standard triple: (P_S)^♯(ê_i) = (e_i)_S".into();
        report.push(rec);
    }
    if g.form().is_none() {
        return Ok(report.sorted());
    }

    let zero = NumericTwist::zero(n);
    let nt = NumericTwist::from_twist(&random_twist(model, &mut rng));
    let pts = admissible_samples(model, &mut rng, samples, &[&zero, &nt])?;
    let conj: Vec<GroupPoint> = (0..samples.max(2)).map(|_| bounded_point(model, &mut rng, CONJUGATOR_AD_BOUND)).collect();
    report.extend(moment_check_s(model, &pts, &conj, &nt, tol)?);

    if let Some(x) = compact_direction(model) {
        let generic = model.exp(&x);
        let locus = model.exp(&x.iter().map(|v| v * std::f64::consts::PI).collect::<Vec<_>>());
        report.extend(moment_check_conjugacy(&generic, &conj, None, model, tol)?.prefixed("class.generic."));
        report.extend(moment_check_conjugacy(&locus, &conj, Some(0.5), model, tol)?.prefixed("class.locus."));
    }

    let f1 = |m: &CMatrix| re_trace(m);
    let f2 = |m: &CMatrix| re_trace(&(m * m));
    let f3 = |m: &CMatrix| weighted(m, |i, j| ((i + 2 * j + 1) as f64, (i as f64) - (j as f64)));
    let f4 = |m: &CMatrix| weighted(m, |i, j| ((2 * i + j) as f64 - 1.0, (i * j + 1) as f64));
    let (mut inv, mut inv_t, mut change) = (0.0f64, 0.0f64, 0.0f64);
    let mut dist = Vec::new();
    for s in &pts {
        let b0 = invariant_bracket(&f1, &f2, s, &zero, model)?;
        let bt = invariant_bracket(&f1, &f2, s, &nt, model)?;
        inv = inv.max(b0.abs()).max(bt.abs());
        inv_t = inv_t.max((bt - b0).abs());
        let d3 = super::moment::differential(&f3, s, model);
        let d4 = super::moment::differential(&f4, s, model);
        let t_s = (d3.transpose() * t_s_matrix(s, &nt) * d4)[0];
        let c0 = invariant_bracket(&f3, &f4, s, &zero, model)?;
        let ct = invariant_bracket(&f3, &f4, s, &nt, model)?;
        change = change.max((ct - (c0 - t_s)).abs());
        dist.push(distribution_check(s, &nt, model, tol)?);
    }
    report.push(CheckRecord::numeric(
        "bracket.class_functions",
        "Theorem red: {Re tr g, Re tr g²} = 0 for invariant functions",
        inv,
        BRACKET_TOL,
        None,
    ));
    report.push(CheckRecord::numeric(
        "bracket.twist_invariant",
        "Theorem red: the bracket of invariants is independent of the choice of h",
        inv_t,
        BRACKET_TOL,
        None,
    ));
    report.push(CheckRecord::numeric(
        "bracket.twist_change",
        "non-invariant functions: the bracket changes by −t_S(df1, df2)",
        change,
        BRACKET_TOL,
        None,
    ));
    report.extend(Report::worst_per_id(dist));
    Ok(report.sorted())
}
