//! Images and kernels of small real matrices.
//!
//! These use Householder QR with column pivoting: SVD vectors are unreliable here when
//! singular values come in nearly equal pairs, as they do for every antisymmetric matrix.

use nalgebra::DMatrix;

/// Diagonal entries of `R` at most `tol · max(1, |R_00|)` count as zero.
fn rank_and_q(m: &DMatrix<f64>, tol: f64) -> (usize, DMatrix<f64>) {
    let rows = m.nrows();
    // pad with zero columns so Q is square
    let mut sq = DMatrix::zeros(rows, m.ncols().max(rows));
    sq.view_mut((0, 0), (rows, m.ncols())).copy_from(m);
    let qr = sq.col_piv_qr();
    let r = qr.r();
    let lead = r[(0, 0)].abs().max(1.0);
    let rank = (0..rows.min(r.ncols())).take_while(|&i| r[(i, i)].abs() > tol * lead).count();
    (rank, qr.q())
}

/// Orthonormal basis (columns) of the column space of `m`.
pub fn column_space(m: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return DMatrix::zeros(m.nrows(), 0);
    }
    let (rank, q) = rank_and_q(m, tol);
    q.columns(0, rank).into_owned()
}

/// Orthonormal basis (columns) of the kernel of `m`.
pub fn null_space(m: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let n = m.ncols();
    if n == 0 || m.nrows() == 0 {
        return DMatrix::identity(n, n);
    }
    let (rank, q) = rank_and_q(&m.transpose(), tol);
    q.columns(rank, n - rank).into_owned()
}

/// Largest component of `m` outside the span of the orthonormal columns of `q`,
/// relative to `max(1, |m|)`.
pub fn outside_span(q: &DMatrix<f64>, m: &DMatrix<f64>) -> f64 {
    if m.ncols() == 0 || m.nrows() == 0 {
        return 0.0;
    }
    let proj = if q.ncols() == 0 { DMatrix::zeros(m.nrows(), m.ncols()) } else { q * (q.transpose() * m) };
    (m - proj).amax() / m.amax().max(1.0)
}
