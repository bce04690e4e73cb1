use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::io::AlgebraFile;
use crate::linalg::RatMatrix;
use crate::models;
use crate::quasilie::LieAlgebraSpec;
use crate::scalar;

pub type CMatrix = DMatrix<Complex64>;

/// Structure-constant mismatch tolerated for representation matrices.
pub const REP_TOL: f64 = 1e-12;

pub(crate) fn to_f64_matrix(m: &RatMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| scalar::to_f64(&m[(i, j)]))
}

/// A Lie algebra with a faithful matrix representation.
#[derive(Clone, Debug)]
pub struct MatrixGroupModel {
    algebra: LieAlgebraSpec,
    rep: Vec<CMatrix>,
    /// Pseudo-inverse of the real coordinate map `c ↦ Σ c_i rep_i`.
    decompose: DMatrix<f64>,
    span: DMatrix<f64>,
    form: Option<DMatrix<f64>>,
    form_inv: Option<DMatrix<f64>>,
}

fn realify(m: &CMatrix) -> DVector<f64> {
    let k = m.len();
    DVector::from_fn(2 * k, |r, _| {
        let z = m[r % k];
        if r < k {
            z.re
        } else {
            z.im
        }
    })
}

impl MatrixGroupModel {
    pub fn new(algebra: LieAlgebraSpec, rep: Vec<CMatrix>) -> Result<Self> {
        let n = algebra.dim();
        if rep.len() != n {
            return Err(Error::Model(format!("{} representation matrices for dimension {n}", rep.len())));
        }
        let size = rep[0].nrows();
        if rep.iter().any(|m| m.nrows() != size || m.ncols() != size) {
            return Err(Error::Model("representation matrices must share one square shape".into()));
        }
        let cols: Vec<DVector<f64>> = rep.iter().map(realify).collect();
        let span = DMatrix::from_columns(&cols);
        // least squares through a thin QR: decompose = R⁻¹ Qᵀ
        let qr = span.clone().qr();
        let r = qr.r();
        let lead = r.diagonal().amax();
        if r.diagonal().iter().any(|d| d.abs() <= 1e-10 * lead) {
            return Err(Error::Model("representation matrices are linearly dependent".into()));
        }
        let r_inv = r.try_inverse().ok_or_else(|| Error::Model("representation matrices are linearly dependent".into()))?;
        let decompose = r_inv * qr.q().transpose();
        let form = algebra.form().map(to_f64_matrix);
        let form_inv = algebra.form().map(|k| to_f64_matrix(&k.inverse().expect("validated form")));
        let model = MatrixGroupModel { algebra, rep, decompose, span, form, form_inv };
        let res = model.structure_residual();
        if res.is_nan() || res > REP_TOL {
            return Err(Error::Model(format!(
                "commutators of the representation miss the structure constants by {res:e}"
            )));
        }
        Ok(model)
    }

    pub fn from_file(file: &AlgebraFile) -> Result<Self> {
        let rep = file
            .representation()?
            .ok_or_else(|| Error::Model(format!("{} has no representation matrices", file.name)))?;
        Self::new(file.to_spec()?, rep)
    }

    pub fn bundled(name: &str) -> Result<Self> {
        Self::from_file(&models::file(name)?)
    }

    pub fn algebra(&self) -> &LieAlgebraSpec {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn rep(&self) -> &[CMatrix] {
        &self.rep
    }

    pub fn matrix_size(&self) -> usize {
        self.rep[0].nrows()
    }

    pub fn form(&self) -> Result<&DMatrix<f64>> {
        self.form
            .as_ref()
            .ok_or_else(|| Error::Form(format!("{} carries no invariant form", self.algebra.name())))
    }

    pub fn form_inv(&self) -> Result<&DMatrix<f64>> {
        self.form_inv
            .as_ref()
            .ok_or_else(|| Error::Form(format!("{} carries no invariant form", self.algebra.name())))
    }

    /// Largest deviation of `[R_i, R_j] − f_ij^k R_k`.
    pub fn structure_residual(&self) -> f64 {
        let n = self.dim();
        let f = self.algebra.structure();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let mut d = &self.rep[i] * &self.rep[j] - &self.rep[j] * &self.rep[i];
                for (k, c) in f.bracket_basis(i, j) {
                    d -= &self.rep[k] * Complex64::new(scalar::to_f64(c), 0.0);
                }
                worst = worst.max(d.iter().map(|z| z.norm()).fold(0.0, f64::max));
            }
        }
        worst
    }

    /// `Σ c_i R_i`.
    pub fn element(&self, c: &[f64]) -> CMatrix {
        let size = self.matrix_size();
        let mut m = CMatrix::zeros(size, size);
        for (ci, r) in c.iter().zip(&self.rep) {
            m += r * Complex64::new(*ci, 0.0);
        }
        m
    }

    /// Coordinates of a Lie algebra matrix and the distance to the real span.
    pub fn coordinates(&self, x: &CMatrix) -> (DVector<f64>, f64) {
        let v = realify(x);
        let c = &self.decompose * &v;
        let res = (&self.span * &c - v).amax();
        (c, res)
    }

    pub fn exp(&self, c: &[f64]) -> GroupPoint {
        if c.len() != self.dim() {
            panic!("expected {} coordinates", self.dim());
        }
        let m = self.element(c).exp();
        self.point_with_coords(m, Some(DVector::from_column_slice(c)))
            .expect("exp of an algebra element is invertible")
    }

    /// A point from an explicit matrix; coordinates come from the matrix logarithm when it lands in the algebra.
    pub fn point(&self, m: CMatrix) -> Result<GroupPoint> {
        let coords = log(&m).ok().and_then(|l| {
            let (c, res) = self.coordinates(&l);
            (res < 1e-8).then_some(c)
        });
        self.point_with_coords(m, coords)
    }

    fn point_with_coords(&self, m: CMatrix, coords: Option<DVector<f64>>) -> Result<GroupPoint> {
        let size = self.matrix_size();
        if m.nrows() != size || m.ncols() != size {
            return Err(Error::Model(format!("expected a {size}x{size} matrix")));
        }
        let inv = m.clone().try_inverse().ok_or_else(|| Error::Model("matrix is singular".into()))?;
        let n = self.dim();
        let mut ad = DMatrix::zeros(n, n);
        let mut worst = 0.0f64;
        for j in 0..n {
            let (c, res) = self.coordinates(&(&m * &self.rep[j] * &inv));
            worst = worst.max(res);
            ad.set_column(j, &c);
        }
        if worst > 1e-8 {
            return Err(Error::Model(format!("conjugation leaves the algebra (residual {worst:e}); not a group element")));
        }
        let ad_inv = ad.clone().try_inverse().ok_or_else(|| Error::Model("singular adjoint".into()))?;
        Ok(GroupPoint { matrix: m, inverse: inv, ad, ad_inv, coords })
    }

    /// `exp(Σ c_i e_i)` with `c_i` uniform in `[−π, π]`.
    pub fn random_point<R: Rng>(&self, rng: &mut R) -> GroupPoint {
        let c: Vec<f64> = (0..self.dim()).map(|_| rng.gen_range(-std::f64::consts::PI..=std::f64::consts::PI)).collect();
        self.exp(&c)
    }

    /// `diag(e^{iθ}, e^{−iθ})` in a 2×2 representation.
    pub fn diag_torus(&self, theta: f64) -> Result<GroupPoint> {
        if self.matrix_size() != 2 {
            return Err(Error::Model("diag-torus needs a 2x2 representation".into()));
        }
        let z = Complex64::from_polar(1.0, theta);
        self.point(CMatrix::from_diagonal(&DVector::from_vec(vec![z, z.conj()])))
    }

    pub fn product(&self, a: &GroupPoint, b: &GroupPoint) -> Result<GroupPoint> {
        self.point(&a.matrix * &b.matrix)
    }

    pub fn inverse(&self, a: &GroupPoint) -> Result<GroupPoint> {
        self.point(a.inverse.clone())
    }
}

/// A group element with its adjoint action on `g`.
#[derive(Clone, Debug)]
pub struct GroupPoint {
    matrix: CMatrix,
    inverse: CMatrix,
    ad: DMatrix<f64>,
    ad_inv: DMatrix<f64>,
    coords: Option<DVector<f64>>,
}

impl GroupPoint {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn inverse_matrix(&self) -> &CMatrix {
        &self.inverse
    }

    /// `Ad_g` on `g` (columns are images of basis vectors).
    pub fn ad(&self) -> &DMatrix<f64> {
        &self.ad
    }

    /// `Ad_{g⁻¹}`.
    pub fn ad_inv(&self) -> &DMatrix<f64> {
        &self.ad_inv
    }

    /// Coordinates `c` with `g = exp(Σ c_i e_i)`, when known.
    pub fn coords(&self) -> Option<&DVector<f64>> {
        self.coords.as_ref()
    }

    /// Largest entry of `Adᵀ K Ad − K`.
    pub fn form_residual(&self, k: &DMatrix<f64>) -> f64 {
        (self.ad.transpose() * k * &self.ad - k).amax()
    }
}

/// Principal matrix logarithm by inverse scaling and squaring.
pub fn log(m: &CMatrix) -> Result<CMatrix> {
    let size = m.nrows();
    let id = CMatrix::identity(size, size);
    let mut x = m.clone();
    let mut squarings = 0;
    while (&x - &id).iter().map(|z| z.norm()).fold(0.0, f64::max) > 0.05 {
        if squarings > 60 {
            return Err(Error::Model("matrix logarithm did not converge".into()));
        }
        x = sqrt(&x)?;
        squarings += 1;
    }
    let y = &x - &id;
    let mut term = y.clone();
    let mut acc = CMatrix::zeros(size, size);
    for k in 1..60 {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        acc += &term * Complex64::new(sign / k as f64, 0.0);
        term = &term * &y;
        if term.iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-18 {
            break;
        }
    }
    Ok(acc * Complex64::new(2f64.powi(squarings), 0.0))
}

/// Denman–Beavers square root.
fn sqrt(m: &CMatrix) -> Result<CMatrix> {
    let size = m.nrows();
    let mut y = m.clone();
    let mut z = CMatrix::identity(size, size);
    let half = Complex64::new(0.5, 0.0);
    for _ in 0..100 {
        let yi = y.clone().try_inverse().ok_or_else(|| Error::Model("square root iteration hit a singular matrix".into()))?;
        let zi = z.clone().try_inverse().ok_or_else(|| Error::Model("square root iteration hit a singular matrix".into()))?;
        let ny = (&y + &zi) * half;
        let nz = (&z + &yi) * half;
        let delta = (&ny - &y).iter().map(|v| v.norm()).fold(0.0, f64::max);
        y = ny;
        z = nz;
        if delta < 1e-15 {
            return Ok(y);
        }
    }
    let err = (&y * &y - m).iter().map(|v| v.norm()).fold(0.0, f64::max);
    if err < 1e-12 {
        Ok(y)
    } else {
        Err(Error::Model("square root iteration did not converge".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bundled_representations_reproduce_brackets() {
        for name in models::NAMES {
            let m = MatrixGroupModel::bundled(name).unwrap();
            assert!(m.structure_residual() < REP_TOL, "{name}");
        }
    }

    #[test]
    fn log_inverts_exp_near_identity() {
        let m = MatrixGroupModel::bundled("su2").unwrap();
        let c = [0.3, -0.7, 1.1];
        let g = m.exp(&c);
        let l = log(g.matrix()).unwrap();
        let (back, res) = m.coordinates(&l);
        assert!(res < 1e-12);
        for i in 0..3 {
            assert!((back[i] - c[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn adjoint_preserves_form() {
        let m = MatrixGroupModel::bundled("sl2").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let c: Vec<f64> = (0..3).map(|_| rng.gen_range(-0.8..0.8)).collect();
            let g = m.exp(&c);
            assert!(g.form_residual(m.form().unwrap()) < 1e-9);
        }
    }

    #[test]
    fn torus_adjoint_eigenvalues() {
        // Ad of diag(e^{iθ}, e^{−iθ}) rotates the e1,e2 plane by 2θ
        let m = MatrixGroupModel::bundled("su2").unwrap();
        let s = m.diag_torus(std::f64::consts::FRAC_PI_2).unwrap();
        let expect = DMatrix::from_diagonal(&DVector::from_vec(vec![-1.0, -1.0, 1.0]));
        assert!((s.ad() - expect).amax() < 1e-12);
    }

    #[test]
    fn non_group_matrix_rejected() {
        let m = MatrixGroupModel::bundled("su2").unwrap();
        let bad = CMatrix::from_diagonal(&DVector::from_vec(vec![Complex64::new(2.0, 0.0), Complex64::new(1.0, 0.0)]));
        assert!(m.point(bad).is_err());
    }
}
