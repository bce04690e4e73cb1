use manin_core::linalg::{same_row_space, RatMatrix};
use manin_core::models;
use manin_core::quasilie::{
    apply_twist, build_double, build_pair_from_metric, canonical_r, check_identities,
    derive_quasibialgebra, standard_triple, verify_manin_pair, LieAlgebraSpec, QuasiBialgebraData,
    QuasiTriple, Twist,
};
use manin_core::scalar::{int, ratio, Scalar};
use manin_core::tensoralg::{drinfeld_bracket, BasedSpace, Multivector, StructureConstants, Tensor2, Tensor3};
use manin_core::Error;
use num_traits::Zero;
use proptest::prelude::*;

fn su2() -> LieAlgebraSpec {
    models::spec("su2").unwrap()
}

fn twist(g: &LieAlgebraSpec, entries: &[(usize, usize, Scalar)]) -> Twist {
    let terms = entries.iter().map(|(i, j, c)| (vec![*i, *j], c.clone()));
    Twist::new(Multivector::from_terms(g.space(), 2, terms)).unwrap()
}

fn assert_all_pass(qt: &QuasiTriple) {
    let r = check_identities(qt);
    let bad: Vec<_> = r.failures().collect();
    assert!(bad.is_empty(), "{}: {bad:#?}", qt.describe());
}

/// `¼ K^{il} K^{jm} f_{lm}^k`, computed directly.
fn phi_from_metric(g: &LieAlgebraSpec) -> Tensor3 {
    let k = g.form().unwrap().inverse().unwrap();
    let f = g.structure();
    let n = g.dim();
    let mut out = Tensor3::zero(g.space());
    for i in 0..n {
        for j in 0..n {
            for c in 0..n {
                let mut acc = Scalar::zero();
                for l in 0..n {
                    for m in 0..n {
                        acc += &k[(i, l)] * &k[(j, m)] * f.get(l, m, c);
                    }
                }
                *out.get_mut(i, j, c) = acc * ratio(1, 4);
            }
        }
    }
    out
}

#[test]
fn su2_pair_has_structure_constant_phi() {
    let qt = build_pair_from_metric(&su2()).unwrap();
    let data = derive_quasibialgebra(&qt);
    assert!(data.cobracket().iter().all(Multivector::is_zero));
    // φ = Σ f_{jk}^i e_i⊗e_j⊗e_k, i.e. φ^{123} = 1
    assert_eq!(data.phi(), &Multivector::monomial(su2().space(), &[0, 1, 2], int(1)));
    assert_eq!(Tensor3::from_trivector(data.phi()), phi_from_metric(&su2()));
}

#[test]
fn general_metric_formula_on_sl2() {
    let g = models::spec("sl2").unwrap();
    let qt = build_pair_from_metric(&g).unwrap();
    assert_eq!(Tensor3::from_trivector(qt.data().phi()), phi_from_metric(&g));
    assert!(qt.data().cobracket().iter().all(Multivector::is_zero));
}

#[test]
fn abelian_pairs_are_trivial() {
    for name in ["u1", "t2"] {
        let qt = build_pair_from_metric(&models::spec(name).unwrap()).unwrap();
        assert!(qt.data().phi().is_zero());
        assert!(qt.data().cobracket().iter().all(Multivector::is_zero));
    }
}

#[test]
fn pair_requires_form() {
    let g = models::spec("nonabelian2").unwrap();
    assert!(matches!(build_pair_from_metric(&g), Err(Error::Form(_))));
}

#[test]
fn standard_triples_satisfy_classical_yang_baxter() {
    for name in models::NAMES {
        let qt = standard_triple(&models::spec(name).unwrap()).unwrap();
        let data = derive_quasibialgebra(&qt);
        assert!(data.phi().is_zero() && data.cobracket().iter().all(Multivector::is_zero));
        assert!(drinfeld_bracket(&canonical_r(&qt), qt.d().structure()).unwrap().is_zero());
        assert_all_pass(&qt);
    }
}

#[test]
fn standard_double_brackets() {
    // [x, ξ] = ad*_x ξ: [e1, ε^2] = −f_{1k}^2 ε^k = −f_{13}^2 ε^3 = ε^3
    let qt = standard_triple(&su2()).unwrap();
    let fd = qt.d().structure();
    assert_eq!(*fd.get(0, 4, 5), int(1));
    assert!((0..6).all(|k| fd.get(3, 4, k).is_zero()));
}

#[test]
fn cyb_on_pairs() {
    for name in ["su2", "sl2", "u1", "t2"] {
        let qt = build_pair_from_metric(&models::spec(name).unwrap()).unwrap();
        let rr = drinfeld_bracket(&canonical_r(&qt), qt.d().structure()).unwrap();
        assert_eq!(rr, Tensor3::from_trivector(&qt.embed_g(qt.data().phi())));
    }
}

#[test]
fn identities_on_bundled_triples() {
    for name in ["su2", "sl2", "u1", "t2"] {
        let g = models::spec(name).unwrap();
        let qt = build_pair_from_metric(&g).unwrap();
        assert_all_pass(&qt);
        if g.dim() >= 2 {
            let tw = qt.twisted(&twist(&g, &[(0, 1, ratio(3, 7))])).unwrap();
            assert_all_pass(&tw);
        }
    }
    let qt = build_pair_from_metric(&su2()).unwrap();
    assert_all_pass(&qt.twisted(&twist(&su2(), &[(1, 2, int(1))])).unwrap());
}

#[test]
fn double_round_trip() {
    let qt = build_pair_from_metric(&su2()).unwrap();
    let data = derive_quasibialgebra(&qt);
    let dbl = build_double(&data).unwrap();
    assert!(dbl.d().structure().jacobi_defect().is_zero());
    assert_eq!(derive_quasibialgebra(&dbl), data);
}

#[test]
fn non_invariant_phi_breaks_jacobi() {
    // every trivector of su(2) is invariant; on the non-unimodular x,y,z with [x,y] = y
    // the top form is not, so (F = 0, φ = x∧y∧z) must fail
    let s = BasedSpace::new(vec!["x".into(), "y".into(), "z".into()]).unwrap();
    let f = StructureConstants::from_entries(s.clone(), &[(0, 1, 1, int(1))]).unwrap();
    let g = LieAlgebraSpec::new("b", f, None).unwrap();
    let cob: Vec<Multivector> = (0..3).map(|_| Multivector::zero(&s, 2)).collect();
    let bad = QuasiBialgebraData::new(g.clone(), cob.clone(), Multivector::monomial(&s, &[0, 1, 2], int(1))).unwrap();
    assert!(matches!(build_double(&bad), Err(Error::Jacobi { .. })));
    let good = QuasiBialgebraData::new(g, cob, Multivector::zero(&s, 3)).unwrap();
    assert!(build_double(&good).is_ok());
}

#[test]
fn su2_invariant_phi_with_bad_cobracket_fails() {
    let g = su2();
    let mut cob: Vec<Multivector> = (0..3).map(|_| Multivector::zero(g.space(), 2)).collect();
    cob[2] = Multivector::monomial(g.space(), &[0, 1], int(1));
    let phi = Multivector::monomial(g.space(), &[0, 1, 2], int(3));
    let bad = QuasiBialgebraData::new(g, cob, phi).unwrap();
    assert!(matches!(build_double(&bad), Err(Error::Jacobi { .. })));
}

#[test]
fn twist_zero_is_identity() {
    let qt = build_pair_from_metric(&su2()).unwrap();
    let data = derive_quasibialgebra(&qt);
    assert_eq!(apply_twist(&data, &Twist::zero(su2().space())).unwrap(), data);
}

#[test]
fn twist_two_paths_e1_e2() {
    let qt = build_pair_from_metric(&su2()).unwrap();
    let t = twist(&su2(), &[(0, 1, int(1))]);
    let via_formula = apply_twist(qt.data(), &t).unwrap();
    let via_complement = derive_quasibialgebra(&qt.twisted(&t).unwrap());
    assert_eq!(via_formula, via_complement);
}

#[test]
fn twisted_r_matrix_and_dual_basis() {
    let qt = build_pair_from_metric(&su2()).unwrap();
    let t = twist(&su2(), &[(0, 1, ratio(1, 2)), (1, 2, int(-2))]);
    let tw = qt.twisted(&t).unwrap();
    let shifted = &canonical_r(&qt) + &Tensor2::from_bivector(&qt.embed_g(t.bivector()));
    assert_eq!(canonical_r(&tw), shifted);
    for i in 0..3 {
        for c in 0..6 {
            let expect = &qt.j()[(i, c)] + if c < 3 { t.get(i, c) } else { Scalar::zero() };
            assert_eq!(tw.j()[(i, c)], expect);
        }
    }
}

#[test]
fn twist_composition_on_complements() {
    let qt = build_pair_from_metric(&su2()).unwrap();
    let t = twist(&su2(), &[(0, 1, int(2))]);
    let u = twist(&su2(), &[(0, 2, ratio(-1, 3)), (1, 2, int(5))]);
    let stepwise = qt.twisted(&t).unwrap().twisted(&u).unwrap();
    let once = qt.twisted(&t.compose(&u).unwrap()).unwrap();
    assert!(same_row_space(stepwise.j(), once.j()));
}

#[test]
fn manin_pair_checks() {
    let qt = build_pair_from_metric(&su2()).unwrap();
    let d = qt.d();
    let rows = |r: &[[i64; 6]]| RatMatrix::from_rows(&r.iter().map(|row| row.iter().map(|&x| int(x)).collect()).collect::<Vec<_>>());
    let diag = rows(&[[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0]]);
    assert!(verify_manin_pair(d, &diag).all_pass());

    let anti = rows(&[[0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1]]);
    let r = verify_manin_pair(d, &anti);
    assert!(r.get("manin.isotropic").unwrap().passed());
    assert!(!r.get("manin.subalgebra").unwrap().passed());

    // (e1, 0) = ½(Δe1 + Δ₋e1)
    let first = rows(&[[1, 0, 0, 1, 0, 0]]);
    let r = verify_manin_pair(d, &first);
    let iso = r.get("manin.isotropic").unwrap();
    assert!(!iso.passed());
    assert!(iso.witness.is_some());
    assert!(!r.get("manin.maximal").unwrap().passed());
}

#[test]
fn non_isotropic_complement_rejected() {
    let qt = build_pair_from_metric(&su2()).unwrap();
    let mut bad = qt.reference().clone();
    bad[(0, 1)] = int(1);
    bad[(1, 0)] = int(2);
    let err = QuasiTriple::new(qt.d().clone(), qt.g().clone(), bad, Twist::zero(su2().space())).unwrap_err();
    match err {
        Error::Complement { witness, .. } => assert_eq!(witness.len(), 6),
        other => panic!("unexpected {other:?}"),
    }
}

fn rational() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=5).prop_map(|(p, q)| ratio(p, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn random_twists_two_paths(a in rational(), b in rational(), c in rational()) {
        let qt = build_pair_from_metric(&su2()).unwrap();
        let t = twist(&su2(), &[(0, 1, a), (0, 2, b), (1, 2, c)]);
        let tw = qt.twisted(&t).unwrap();
        prop_assert_eq!(apply_twist(qt.data(), &t).unwrap(), derive_quasibialgebra(&tw));
        prop_assert!(check_identities(&tw).all_pass());
    }

    #[test]
    fn twice_twisted_two_paths(a in rational(), b in rational(), c in rational()) {
        // twisting a quasi-bialgebra with F ≠ 0 exercises φ₁
        let qt = build_pair_from_metric(&models::spec("sl2").unwrap()).unwrap();
        let g = qt.g().clone();
        let t = twist(&g, &[(0, 1, a.clone()), (1, 2, b)]);
        let u = twist(&g, &[(0, 2, c), (0, 1, a)]);
        let once = qt.twisted(&t).unwrap();
        let twice = once.twisted(&u).unwrap();
        prop_assert_eq!(apply_twist(once.data(), &u).unwrap(), derive_quasibialgebra(&twice));
    }
}
