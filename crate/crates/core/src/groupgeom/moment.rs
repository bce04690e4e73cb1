//! Moment maps on `S ≅ G` and on conjugacy classes, brackets of invariant functions,
//! and the characteristic distribution.

use nalgebra::{DMatrix, DVector};

use crate::error::Result;
use crate::report::{CheckRecord, Report};

use super::bivectors::{p_s_matrix, t_s_matrix};
use super::dressing::{conjugation_matrix, find_admissible_twist, hat_form, tau_map, twisted_hat, NumericTwist};
use super::model::{CMatrix, GroupPoint, MatrixGroupModel};
use super::subspace::{column_space, null_space, outside_span};

/// Singular values below this count as zero when measuring ranks and images.
pub const RANK_TOL: f64 = 1e-9;

fn unit(n: usize, i: usize) -> DVector<f64> {
    let mut v = DVector::zeros(n);
    v[i] = 1.0;
    v
}

/// `P_S(h s h⁻¹)` against `Ad_h P_S(s) Ad_hᵀ`, relative to the size of `Ad` at `h s h⁻¹`.
fn covariance_residual(s: &GroupPoint, h: &GroupPoint, t: &NumericTwist, model: &MatrixGroupModel) -> Result<f64> {
    let moved = model.point(h.matrix() * s.matrix() * h.inverse_matrix())?;
    let lhs = p_s_matrix(&moved, t, model)?;
    let rhs = h.ad() * p_s_matrix(s, t, model)? * h.ad().transpose();
    let scale = rhs.amax().max(moved.ad().amax()).max(moved.ad_inv().amax()).max(1.0);
    Ok((&lhs - &rhs).amax() / scale)
}

/// Moment-map checks on `S ≅ G` with `μ = id`, for the reference complement and its twist by `t`.
///
/// Every sample must be admissible for both complements. Hat-forms grow like `1/margin` near
/// the non-admissible locus, so the transport and equivariance-lemma residuals are relative.
pub fn moment_check_s(
    model: &MatrixGroupModel,
    samples: &[GroupPoint],
    conjugators: &[GroupPoint],
    t: &NumericTwist,
    tol: f64,
) -> Result<Report> {
    let n = model.dim();
    let zero = NumericTwist::zero(n);
    let (mut reference, mut twisted, mut law, mut equiv, mut transport, mut covariance) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (idx, s) in samples.iter().enumerate() {
        let b = conjugation_matrix(s);
        let p = p_s_matrix(s, &zero, model)?;
        let p_t = p_s_matrix(s, t, model)?;
        let t_s = t_s_matrix(s, t);
        law = law.max((&p_t - (&p - &t_s)).amax());
        let tau = tau_map(s, &zero, model)?;
        for i in 0..n {
            let x = unit(n, i);
            let x_s = &b * &x;
            let hat = hat_form(&x, s, &zero, model)?;
            reference = reference.max((&p * &hat - &x_s).amax());
            let hat_t = hat_form(&x, s, t, model)?;
            twisted = twisted.max((&p_t * &hat_t - &x_s).amax());
            transport = transport.max((twisted_hat(&x, s, &zero, t, model)? - &hat_t).amax() / hat_t.amax().max(1.0));
            // t_S(ŷ) = −((t∘τ_s) y)_S
            let lhs = &t_s * &hat;
            equiv = equiv.max((&lhs + &b * t.matrix() * &tau * &x).amax() / lhs.amax().max(1.0));
        }
        if let Some(h) = conjugators.get(idx) {
            covariance = covariance.max(covariance_residual(s, h, &zero, model)?);
        }
    }
    let mut report = Report::new();
    report.push(CheckRecord::numeric("moment.S.reference", "Eq. moment: (P_S)^♯(μ* x̂) = x_S with μ = id", reference, tol, None));
    report.push(CheckRecord::numeric("moment.S.twisted", "Prop. indep: Eq. moment for the twisted complement h′", twisted, tol, None));
    report.push(CheckRecord::numeric("moment.S.twist_law", "P_S^{h′} = P_S^{h} − t_S", law, tol, None));
    report.push(CheckRecord::numeric("moment.S.twisthat", "Eq. twisthat: x̂_{h′} = (ν_s x)̂_h, ν_s = (1 + t∘τ_s)⁻¹", transport, tol, None));
    report.push(CheckRecord::numeric("moment.S.equiv", "Eq. equiv: t_M(μ* ŷ_h) = −((t∘τ_s)y)_M", equiv, tol, None));
    report.push(CheckRecord::numeric("moment.S.equivariance", "μ(h·m) = h·μ(m): P_S(hsh⁻¹) = Ad_h P_S(s)", covariance, tol, None));
    Ok(report)
}

/// Moment-map checks on the conjugacy class of `g0`, sampled at `h g0 h⁻¹` for the conjugators.
///
/// With `eps`, each sample also gets the twist of [`find_admissible_twist`] and Eq. moment is
/// checked for the twisted complement on the class.
pub fn moment_check_conjugacy(
    g0: &GroupPoint,
    conjugators: &[GroupPoint],
    eps: Option<f64>,
    model: &MatrixGroupModel,
    tol: f64,
) -> Result<Report> {
    let n = model.dim();
    let k = model.form()?.clone();
    let zero = NumericTwist::zero(n);
    let (mut mc, mut kernel, mut push, mut equiv, mut twisted) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut dims_ok = true;
    let mut dims_witness = None;
    for (idx, h) in conjugators.iter().enumerate() {
        let m = model.point(h.matrix() * g0.matrix() * h.inverse_matrix())?;
        let b = conjugation_matrix(&m);
        let q = column_space(&b, RANK_TOL);
        let p = p_s_matrix(&m, &zero, model)?;
        let p_m = q.transpose() * &p * &q;
        push = push.max((&q * &p_m * q.transpose() - &p).amax());

        // P^♯(μ* K x) = ½ ((1 + Ad_μ) x)_M
        let plus = DMatrix::identity(n, n) + m.ad();
        let lhs = &p_m * q.transpose() * &k;
        let rhs = 0.5 * q.transpose() * &b * &plus;
        mc = mc.max((lhs - rhs).amax());

        // ker P_M = μ* K (ker(1 + Ad_μ))
        let ker_p = null_space(&p_m, RANK_TOL);
        let ker_plus = null_space(&plus, super::dressing::EIGEN_CLUSTER_TOL);
        let image = q.transpose() * &k * &ker_plus;
        let image_basis = column_space(&image, RANK_TOL);
        if ker_p.ncols() != image_basis.ncols() {
            dims_ok = false;
            dims_witness.get_or_insert_with(|| format!("sample {idx}: dim ker P_M = {}, expected {}", ker_p.ncols(), image_basis.ncols()));
        }
        if image.ncols() > 0 {
            kernel = kernel.max((&p_m * &image).amax());
        }
        kernel = kernel.max(outside_span(&image_basis, &ker_p));

        // equivariance of the inclusion and of P
        let h2 = &conjugators[(idx + 1) % conjugators.len()];
        let direct = (h2.matrix() * h.matrix()) * g0.matrix() * (h.inverse_matrix() * h2.inverse_matrix());
        let acted = h2.matrix() * m.matrix() * h2.inverse_matrix();
        equiv = equiv.max(cmatrix_distance(&direct, &acted));
        equiv = equiv.max(covariance_residual(&m, h2, &zero, model)?);

        if let Some(eps) = eps {
            let t = find_admissible_twist(&m, eps, model)?;
            let p_t = q.transpose() * p_s_matrix(&m, &t, model)? * &q;
            for i in 0..n {
                let x = unit(n, i);
                let hat = hat_form(&x, &m, &t, model)?;
                let lhs = &p_t * q.transpose() * hat;
                twisted = twisted.max((lhs - q.transpose() * &b * &x).amax());
            }
        }
    }
    let mut report = Report::new();
    report.push(CheckRecord::numeric("momentmc", "Eq. momentMC: P^♯(μ* K(x, θ)) = ½ ((1_g + Ad_μ)x)_M", mc, tol, None));
    report.push(CheckRecord::numeric(
        "kernel",
        "ker(P^♯_m) = {μ* K(x, θ) : x ∈ ker(1_g + Ad_{μ(m)})}",
        kernel,
        tol,
        None,
    ));
    report.push(CheckRecord::boolean("kernel.dimension", "ker(P^♯_m) has the dimension of ker(1_g + Ad_{μ(m)})", dims_ok, dims_witness));
    report.push(CheckRecord::numeric("pushforward", "the moment map is a bivector map: μ_* P_M = P_S", push, tol, None));
    report.push(CheckRecord::numeric("equivariance", "μ(h·m) = h μ(m) h⁻¹", equiv, tol, None));
    if eps.is_some() {
        report.push(CheckRecord::numeric("moment.twisted", "Eq. moment on the class for the ε-twisted complement", twisted, tol, None));
    }
    Ok(report)
}

/// Entrywise distance relative to `max(1, |b|)`.
fn cmatrix_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    let size = b.iter().map(|z| z.norm()).fold(1.0, f64::max);
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max) / size
}

/// Step of the central differences in [`differential`].
pub const DIFF_STEP: f64 = 1e-5;

/// Left-trivialized differential `df_i = d/dτ f(s exp(τ e_i))` by central differences.
pub fn differential(f: &dyn Fn(&CMatrix) -> f64, s: &GroupPoint, model: &MatrixGroupModel) -> DVector<f64> {
    let n = model.dim();
    DVector::from_fn(n, |i, _| {
        let mut c = vec![0.0; n];
        c[i] = DIFF_STEP;
        let plus = model.element(&c).exp();
        c[i] = -DIFF_STEP;
        let minus = model.element(&c).exp();
        (f(&(s.matrix() * plus)) - f(&(s.matrix() * minus))) / (2.0 * DIFF_STEP)
    })
}

/// `{f1, f2}(s) = P_S(df1, df2)(s)` for the complement twisted by `t`.
pub fn invariant_bracket(
    f1: &dyn Fn(&CMatrix) -> f64,
    f2: &dyn Fn(&CMatrix) -> f64,
    s: &GroupPoint,
    t: &NumericTwist,
    model: &MatrixGroupModel,
) -> Result<f64> {
    let p = p_s_matrix(s, t, model)?;
    let d1 = differential(f1, s, model);
    let d2 = differential(f2, s, model);
    Ok((d1.transpose() * p * d2)[0])
}

/// Compares the images of `P_S^♯` for the reference complement and its twist by `t`.
pub fn distribution_check(s: &GroupPoint, t: &NumericTwist, model: &MatrixGroupModel, tol: f64) -> Result<Report> {
    let n = model.dim();
    let p = p_s_matrix(s, &NumericTwist::zero(n), model)?;
    let p_t = p_s_matrix(s, t, model)?;
    let im = column_space(&p, RANK_TOL);
    let im_t = column_space(&p_t, RANK_TOL);
    let orbit = conjugation_matrix(s);
    let mut report = Report::new();
    report.push(CheckRecord::boolean(
        "distribution.rank",
        "the image of (P_M^{h′})^♯ coincides with that of (P_M^h)^♯ (ranks)",
        im.ncols() == im_t.ncols(),
        Some(format!("ranks {} and {}", im.ncols(), im_t.ncols())),
    ));
    report.push(CheckRecord::numeric(
        "distribution.image",
        "the image of (P_M^{h′})^♯ coincides with that of (P_M^h)^♯",
        outside_span(&im, &p_t).max(outside_span(&im_t, &p)),
        tol,
        None,
    ));
    report.push(CheckRecord::numeric(
        "distribution.orbit",
        "the image of P_M^♯ contains the tangent space to the G-orbit",
        outside_span(&im, &orbit),
        tol,
        None,
    ));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_class_is_a_point() {
        let model = MatrixGroupModel::bundled("su2").unwrap();
        let e = model.exp(&[0.0; 3]);
        let hs = vec![model.exp(&[0.3, -0.2, 0.9]), model.exp(&[1.0, 0.5, 0.1])];
        let r = moment_check_conjugacy(&e, &hs, None, &model, 1e-9).unwrap();
        assert!(r.all_pass(), "{r:?}");
    }
}
