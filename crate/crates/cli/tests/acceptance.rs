//! Acceptance criteria A1–A11, one line each. Runs without the test harness so the lines
//! show in plain `cargo test` output; exits nonzero if any criterion fails.

use std::f64::consts::FRAC_PI_2;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::Parser;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use manin_cli::{run, validate, Cli};
use manin_core::groupgeom::*;
use manin_core::models;
use manin_core::quasilie::{apply_twist, build_pair_from_metric, canonical_r, check_identities, standard_triple, QuasiTriple, Twist};
use manin_core::report::{Report, Residual};
use manin_core::scalar::ratio;
use manin_core::tensoralg::{drinfeld_bracket, Tensor3};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let spent = start.elapsed();
    ensure(spent <= limit, format!("{what} took {spent:?}, limit {limit:?}"))
}

fn failures(r: &Report) -> String {
    r.failures().map(|c| c.id.clone()).collect::<Vec<_>>().join(", ")
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn a1() -> Outcome {
    for name in models::NAMES {
        let start = Instant::now();
        let report = validate(&models::file(name).map_err(err)?).map_err(err)?;
        ensure(report.all_pass(), format!("{name}: {}", failures(&report)))?;
        for id in ["jacobi", "form.invariant"] {
            if let Some(c) = report.get(id) {
                ensure(c.residual == Residual::Exact("0".into()), format!("{name}: {id} residual {:?}", c.residual))?;
            }
        }
        within(start, Duration::from_secs(1), name)?;
    }
    Ok(format!("{} bundled algebras validate with exact zero residuals", models::NAMES.len()))
}

fn cyb_holds(qt: &QuasiTriple) -> bool {
    let r = canonical_r(qt);
    let rr = drinfeld_bracket(&r, qt.d().structure()).expect("same space");
    let phi = Tensor3::from_trivector(&qt.embed_g(qt.data().phi()));
    rr == phi
}

fn a2() -> Outcome {
    let start = Instant::now();
    for name in models::NAMES {
        let qt = standard_triple(&models::spec(name).map_err(err)?).map_err(err)?;
        ensure(cyb_holds(&qt) && qt.data().phi().is_zero(), format!("standard triple of {name}"))?;
    }
    for name in ["su2", "sl2"] {
        let qt = build_pair_from_metric(&models::spec(name).map_err(err)?).map_err(err)?;
        ensure(!qt.data().phi().is_zero(), format!("{name} double has φ = 0"))?;
        ensure(cyb_holds(&qt), format!("{name} double"))?;
    }
    within(start, Duration::from_secs(1), "A2")?;
    Ok("⟨r_d, r_d⟩ = φ exactly for the standard triples and the su(2), sl(2,R) doubles".into())
}

fn a3() -> Outcome {
    let start = Instant::now();
    let g = models::spec("su2").map_err(err)?;
    let base = build_pair_from_metric(&g).map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in 0..20 {
        let t = Twist::random(g.space(), &mut rng);
        let direct = apply_twist(base.data(), &t).map_err(err)?;
        let rederived = base.twisted(&t).map_err(err)?;
        ensure(&direct == rederived.data(), format!("twist {k}: {}", t.bivector()))?;
    }
    within(start, Duration::from_secs(5), "A3")?;
    Ok("20 random twists of the su(2) double: apply_twist equals re-derivation".into())
}

fn a4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut count = 0;
    for name in models::NAMES {
        let g = models::spec(name).map_err(err)?;
        let mut triples = vec![standard_triple(&g).map_err(err)?];
        if g.form().is_some() {
            triples.push(build_pair_from_metric(&g).map_err(err)?);
        }
        for qt in triples {
            let twisted = qt.twisted(&Twist::random(g.space(), &mut rng)).map_err(err)?;
            for q in [&qt, &twisted] {
                let report = check_identities(q);
                ensure(report.all_pass(), format!("{}: {}", q.describe(), failures(&report)))?;
                for id in ["algsch.x", "algsch.xi", "algsch.phi", "skew", "ras", "dF2.deg1", "dF2.deg2"] {
                    ensure(report.get(id).is_some(), format!("{name}: {id} missing"))?;
                }
                count += 1;
            }
        }
    }
    Ok(format!("algSch, skew, ras and (d_F)² = [φ,·] exact on {count} quasi-triples (with twists)"))
}

fn a5() -> Outcome {
    let qt = build_pair_from_metric(&models::spec("su2").map_err(err)?).map_err(err)?;
    let report = frame_identities(&qt).map_err(err)?;
    ensure(report.all_pass(), failures(&report))?;
    for id in ["schpd", "pentagon.lambda", "pentagon.rho"] {
        ensure(report.get(id).is_some(), format!("{id} missing"))?;
    }
    Ok("½[P_D,P_D] = φ^ρ − φ^λ and the pentagon law hold exactly in the λ/ρ frame of the su(2) double".into())
}

fn a6() -> Outcome {
    let start = Instant::now();
    let model = MatrixGroupModel::bundled("su2").map_err(err)?;
    let fb = FrameBivectors::new(&model, &Twist::zero(model.algebra().space())).map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut diff, mut phi) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let s = model.random_point(&mut rng);
        let (sq, phi_s) = fb.at(&s).map_err(err)?;
        diff = diff.max(sq.sub(&phi_s).max_abs());
        phi = phi.max(phi_s.max_abs());
    }
    ensure(diff <= 1e-9 && phi <= 1e-9, format!("max |½[P,P] − φ_S| = {diff:e}, max |φ_S| = {phi:e}"))?;
    within(start, Duration::from_secs(5), "A6")?;
    Ok(format!("100 SU(2) points: max |½[P_S,P_S] − φ_S| = {diff:.1e}, max |φ_S| = {phi:.1e}"))
}

fn a7() -> Outcome {
    let g = models::spec("su2").map_err(err)?;
    let points = vec![
        vec![ratio(0, 1), ratio(0, 1), ratio(1, 1)],
        vec![ratio(1, 2), ratio(-3, 4), ratio(2, 1)],
        vec![ratio(-5, 3), ratio(7, 2), ratio(0, 1)],
    ];
    let report = kks_suite(&g, &points);
    ensure(report.all_pass(), failures(&report))?;
    for c in &report.checks {
        ensure(matches!(&c.residual, Residual::Exact(s) if s == "0"), format!("{} is not an exact zero", c.id))?;
    }
    Ok(format!("KKS on su(2)*: {} exact checks (components, dressing, hat-forms, Smom)", report.checks.len()))
}

fn a8() -> Outcome {
    let model = MatrixGroupModel::bundled("su2").map_err(err)?;
    let report = moment_suite(&model, 50, 0, 1e-8).map_err(err)?;
    ensure(report.all_pass(), failures(&report))?;
    for id in ["moment.S.reference", "class.generic.momentmc", "class.locus.momentmc", "class.generic.kernel", "class.locus.kernel"] {
        ensure(report.get(id).is_some(), format!("{id} missing"))?;
    }
    let mut worst = 0.0f64;
    for c in report.checks.iter().filter(|c| c.id.ends_with("equivariance")) {
        if let Residual::Float(x) = c.residual {
            worst = worst.max(x);
        }
    }
    ensure(worst < 1e-9, format!("equivariance residual {worst:e}"))?;
    Ok(format!("moment, momentMC and kernel checks on S and two classes within 1e-8; equivariance {worst:.1e}"))
}

fn a9() -> Outcome {
    let model = MatrixGroupModel::bundled("su2").map_err(err)?;
    let s = model.diag_torus(FRAC_PI_2).map_err(err)?;
    let base = admissibility(&s, &NumericTwist::zero(3), &model).map_err(err)?;
    ensure(!base.admissible && base.margin < 1e-7, format!("torus margin {:e}", base.margin))?;
    let eps = 0.5;
    let t = find_admissible_twist(&s, eps, &model).map_err(err)?;
    let fixed = admissibility(&s, &t, &model).map_err(err)?;
    ensure(fixed.margin > 0.1, format!("twisted margin {}", fixed.margin))?;
    let k = model.form().map_err(err)?;
    let mut worst = 0.0f64;
    for (a, b) in minus_one_pairs(&s, &model).map_err(err)? {
        let a_hat = hat_form(&a, &s, &t, &model).map_err(err)?;
        let b_hat = hat_form(&b, &s, &t, &model).map_err(err)?;
        worst = worst.max((a_hat + (1.0 / (2.0 * eps)) * k * &b).amax());
        worst = worst.max((b_hat - (1.0 / (2.0 * eps)) * k * &a).amax());
    }
    ensure(worst < 1e-9, format!("closed-form residual {worst:e}"))?;
    Ok(format!("θ = π/2 margin {:.1e}; ε = ½ twist margin {:.3}; closed forms within {worst:.1e}", base.margin, fixed.margin))
}

fn trace_power(k: usize) -> impl Fn(&CMatrix) -> f64 {
    move |m: &CMatrix| {
        let mut p = m.clone();
        for _ in 1..k {
            p = &p * m;
        }
        p.trace().re
    }
}

fn a10() -> Outcome {
    let model = MatrixGroupModel::bundled("su2").map_err(err)?;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let zero = NumericTwist::zero(3);
    let t = NumericTwist::from_twist(&random_twist(&model, &mut rng));
    let (f1, f2) = (trace_power(1), trace_power(2));
    let probe = |m: &CMatrix| m[(0, 1)].re + 0.3 * m[(1, 1)].im;
    let (mut class, mut change) = (0.0f64, 0.0f64);
    let points = admissible_samples(&model, &mut rng, 20, &[&zero, &t]).map_err(err)?;
    for s in &points {
        for tw in [&zero, &t] {
            class = class.max(invariant_bracket(&f1, &f2, s, tw, &model).map_err(err)?.abs());
        }
        let before = invariant_bracket(&f1, &probe, s, &zero, &model).map_err(err)?;
        let after = invariant_bracket(&f1, &probe, s, &t, &model).map_err(err)?;
        change = change.max((before - after).abs());
    }
    ensure(class < 1e-6 && change < 1e-6, format!("class bracket {class:e}, twist change {change:e}"))?;
    Ok(format!("{{Re tr g, Re tr g²}} ≤ {class:.1e} at 20 points; brackets with an invariant unchanged by a twist ({change:.1e})"))
}

fn cli(args: &[&str]) -> Result<manin_cli::Outcome, String> {
    let parsed = Cli::try_parse_from(std::iter::once("manin").chain(args.iter().copied())).map_err(err)?;
    Ok(run(&parsed))
}

fn a11() -> Outcome {
    let data = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data/su2.json");
    let su2 = data.to_str().unwrap();
    let runs: [&[&str]; 6] = [
        &["validate", su2, "--format", "json"],
        &["double", su2, "--complement", "e1^e2:1/2", "--format", "json"],
        &["verify", su2, "--suite", "algebra", "--format", "json"],
        &["verify", su2, "--suite", "group", "--samples", "100", "--seed", "7", "--format", "json"],
        &["verify", su2, "--suite", "moment", "--samples", "50", "--format", "json"],
        &["eval", su2, "--at", "exp(1.5708*e1)", "--object", "phiS", "--format", "json"],
    ];
    for args in runs {
        let (a, b) = (cli(args)?, cli(args)?);
        ensure(a.code == 0, format!("{args:?} exited {}: {}{}", a.code, a.stdout, a.stderr))?;
        ensure(a == b, format!("{args:?} is not reproducible"))?;
    }
    let unknown = Cli::try_parse_from(["manin", "verify", su2, "--suite", "bogus"]);
    ensure(unknown.map_err(|e| e.exit_code()).err() == Some(2), "unknown suite must exit 2")?;
    let torus = cli(&["eval", su2, "--at", "diag-torus(pi/2)", "--object", "tau"])?;
    ensure(torus.code == 1 && torus.stderr.contains("singular value"), format!("torus tau: {torus:?}"))?;

    let dir = std::env::temp_dir().join(format!("manin-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(err)?;
    let text = std::fs::read_to_string(&data).map_err(err)?;
    let corrupt = dir.join("corrupt.json");
    std::fs::write(&corrupt, text.replace(r#""k": 3, "value": "1""#, r#""k": 1, "value": "1""#)).map_err(err)?;
    let bad = cli(&["validate", corrupt.to_str().unwrap()])?;
    ensure(bad.code == 1 && bad.stdout.contains("FAIL  jacobi"), format!("corrupted file: {bad:?}"))?;
    let zero_den = dir.join("zero.json");
    std::fs::write(&zero_den, text.replacen(r#""value": "1""#, r#""value": "1/0""#, 1)).map_err(err)?;
    let parse = cli(&["validate", zero_den.to_str().unwrap()])?;
    ensure(parse.code == 2 && parse.stderr.contains("line 7"), format!("1/0: {parse:?}"))?;
    let doubled = dir.join("double.json");
    ensure(cli(&["double", su2, "--out", doubled.to_str().unwrap()])?.code == 0, "double --out")?;
    ensure(cli(&["validate", doubled.to_str().unwrap()])?.code == 0, "double output does not validate")?;
    let _ = std::fs::remove_dir_all(&dir);
    Ok("validate, double, verify ×3, eval reproducible byte for byte; exit codes 0/1/2 as documented".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("A1", a1),
        ("A2", a2),
        ("A3", a3),
        ("A4", a4),
        ("A5", a5),
        ("A6", a6),
        ("A7", a7),
        ("A8", a8),
        ("A9", a9),
        ("A10", a10),
        ("A11", a11),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        match check() {
            Ok(detail) => println!("{name:<4} PASS  {detail}  ({:.2?})", start.elapsed()),
            Err(detail) => {
                failed += 1;
                println!("{name:<4} FAIL  {detail}");
            }
        }
    }
    println!("{} of {} acceptance criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
