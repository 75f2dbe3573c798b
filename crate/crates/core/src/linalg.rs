//! Dense complex linear algebra: the square matrix type, the general
//! eigendecomposition with a biorthonormal left/right system, and the
//! Hermitian positive-definite square root.
//!
//! The heavy lifting (Schur/QR eigensolver, SVD, Hermitian eigensolver,
//! LU) is delegated to `faer`; this module fixes the conventions on top
//! of it: column normalization and phase, eigenvalue ordering, clustering
//! of degenerate eigenvalues, and the left system.

use std::ops::{Add, Index, Mul, Sub};

use faer::linalg::solvers::DenseSolveCore;
use faer::{c64, Mat, Side};

use crate::error::{Error, Result};

/// Default cutoff on [`Spectrum::diag_score`] above which a matrix is
/// treated as defective.
pub const DEFAULT_KAPPA_MAX: f64 = 1e8;

/// Eigenvalues closer than `tol * (1 + |λ|)` are grouped into one cluster.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;

/// Relative threshold on the smallest singular value used to declare a
/// matrix singular: `σ_min <= SINGULAR_RTOL * dim * σ_max`.
const SINGULAR_RTOL: f64 = 64.0 * f64::EPSILON;

/// Relative tolerance on self-adjointness accepted by [`herm_sqrt`].
pub const SELF_ADJOINT_TOL: f64 = 1e-10;

#[inline]
pub(crate) fn cx(re: f64, im: f64) -> c64 {
    c64::new(re, im)
}

/// Hermitian inner product `Σ conj(a_i) b_i`, conjugate-linear in `a`.
pub fn dot(a: &[c64], b: &[c64]) -> c64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(a: &[c64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// A dense square complex matrix with finite entries.
#[derive(Clone, Debug)]
pub struct ComplexMatrix(Mat<c64>);

impl ComplexMatrix {
    /// Wraps a `faer` matrix, checking that it is square and finite.
    pub fn from_mat(mat: Mat<c64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        if mat.nrows() == 0 {
            return Err(Error::EmptyMatrix);
        }
        let finite = (0..mat.ncols())
            .all(|j| (0..mat.nrows()).all(|i| mat[(i, j)].re.is_finite() && mat[(i, j)].im.is_finite()));
        if !finite {
            return Err(Error::NonFinite);
        }
        Ok(Self(mat))
    }

    /// Builds a `dim × dim` matrix from an entry function.
    ///
    /// Panics if `dim == 0`. Non-finite entries are not checked here; use
    /// [`ComplexMatrix::from_mat`] for untrusted input.
    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> c64) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        Self(Mat::from_fn(dim, dim, f))
    }

    /// Builds a matrix from row-major rows; every row must have `rows.len()` entries.
    pub fn from_rows(rows: &[Vec<c64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        Self::from_mat(Mat::from_fn(n, n, |i, j| rows[i][j]))
    }

    /// Builds a matrix from separate row-major real and imaginary parts.
    pub fn from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        let n = re.len();
        if im.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: im.len(),
            });
        }
        for row in re.iter().chain(im) {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
        }
        Self::from_mat(Mat::from_fn(n, n, |i, j| cx(re[i][j], im[i][j])))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { cx(1.0, 0.0) } else { cx(0.0, 0.0) })
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_fn(dim, |_, _| cx(0.0, 0.0))
    }

    pub fn diag(values: &[c64]) -> Self {
        Self::from_fn(values.len(), |i, j| if i == j { values[i] } else { cx(0.0, 0.0) })
    }

    pub fn real_diag(values: &[f64]) -> Self {
        Self::from_fn(
            values.len(),
            |i, j| if i == j { cx(values[i], 0.0) } else { cx(0.0, 0.0) },
        )
    }

    /// Block-diagonal direct sum of the given matrices.
    pub fn block_diag(blocks: &[&ComplexMatrix]) -> Self {
        let n: usize = blocks.iter().map(|b| b.dim()).sum();
        let mut out = Mat::<c64>::zeros(n, n);
        let mut off = 0;
        for b in blocks {
            for j in 0..b.dim() {
                for i in 0..b.dim() {
                    out[(off + i, off + j)] = b[(i, j)];
                }
            }
            off += b.dim();
        }
        Self(out)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &ComplexMatrix) -> Self {
        let (n, m) = (self.dim(), other.dim());
        Self::from_fn(n * m, |i, j| self[(i / m, j / m)] * other[(i % m, j % m)])
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_mat(&self) -> &Mat<c64> {
        &self.0
    }

    pub fn into_mat(self) -> Mat<c64> {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint().to_owned())
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self(self.0.conjugate().to_owned())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose().to_owned())
    }

    /// Spectral norm (largest singular value). Every relative residual in
    /// this crate is measured in this norm.
    pub fn norm(&self) -> f64 {
        if self.frobenius() == 0.0 {
            return 0.0;
        }
        singular_values(&self.0).map(|s| s[0]).unwrap_or(f64::NAN)
    }

    pub fn frobenius(&self) -> f64 {
        self.0.norm_l2()
    }

    pub fn scale(&self, factor: c64) -> Self {
        Self::from_fn(self.dim(), |i, j| self[(i, j)] * factor)
    }

    /// `‖M − M†‖ / ‖M‖`, or zero for the zero matrix.
    pub fn hermiticity_residual(&self) -> f64 {
        relative((self - &self.adjoint()).norm(), self.norm())
    }

    /// The Hermitian part `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        (self + &self.adjoint()).scale(cx(0.5, 0.0))
    }

    /// Column `j` as a vector.
    pub fn col(&self, j: usize) -> Vec<c64> {
        (0..self.dim()).map(|i| self[(i, j)]).collect()
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[c64]) -> Vec<c64> {
        assert_eq!(v.len(), self.dim(), "vector length must match matrix dimension");
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Singular values in nonincreasing order.
    pub fn singular_values(&self) -> Result<Vec<f64>> {
        singular_values(&self.0)
    }

    /// 2-norm condition number; infinite for a numerically singular matrix.
    pub fn cond(&self) -> Result<f64> {
        cond(&self.0)
    }

    pub fn inverse(&self) -> Result<Self> {
        inverse(&self.0).map(Self)
    }

    pub fn is_finite(&self) -> bool {
        (0..self.dim()).all(|j| (0..self.dim()).all(|i| self[(i, j)].re.is_finite() && self[(i, j)].im.is_finite()))
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.dim(), other.dim());
        let mut m = 0.0f64;
        for j in 0..self.dim() {
            for i in 0..self.dim() {
                m = m.max((self[(i, j)] - other[(i, j)]).norm());
            }
        }
        m
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = c64;
    fn index(&self, idx: (usize, usize)) -> &c64 {
        &self.0[idx]
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in product");
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in sum");
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch in difference");
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

pub(crate) fn relative(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        if num == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        num / den
    }
}

pub(crate) fn singular_values(m: &Mat<c64>) -> Result<Vec<f64>> {
    m.singular_values()
        .map_err(|e| Error::EigFailure(format!("svd: {e:?}")))
}

pub(crate) fn cond(m: &Mat<c64>) -> Result<f64> {
    let s = singular_values(m)?;
    let (max, min) = (s[0], s[s.len() - 1]);
    Ok(if min <= SINGULAR_RTOL * max {
        f64::INFINITY
    } else {
        max / min
    })
}

pub(crate) fn inverse(m: &Mat<c64>) -> Result<Mat<c64>> {
    let n = m.nrows();
    let s = singular_values(m)?;
    let (max, min) = (s[0], s[n - 1]);
    if max == 0.0 || min <= SINGULAR_RTOL * n as f64 * max {
        return Err(Error::NotInvertible {
            min_singular_value: min,
        });
    }
    let inv = m.partial_piv_lu().inverse();
    Ok(inv)
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let h = m.hermitian_part();
    let vals =
        h.0.self_adjoint_eigenvalues(Side::Lower)
            .map_err(|e| Error::EigFailure(format!("self-adjoint eigensolver: {e:?}")))?;
    Ok(vals)
}

/// Options for [`eig_full_with`].
#[derive(Clone, Copy, Debug)]
pub struct EigOptions {
    pub cluster_tol: f64,
    pub kappa_max: f64,
}

impl Default for EigOptions {
    fn default() -> Self {
        Self {
            cluster_tol: DEFAULT_CLUSTER_TOL,
            kappa_max: DEFAULT_KAPPA_MAX,
        }
    }
}

/// Eigenvalues with biorthonormal right and left eigenvector systems.
///
/// Right vectors are unit-norm columns, phase-fixed so that their
/// largest-modulus component is real and positive; within a degenerate
/// cluster they are orthonormal. Left vectors satisfy `φ_m† ψ_n = δ_mn`
/// and exist only when the matrix is numerically diagonalizable.
#[derive(Clone, Debug)]
pub struct Spectrum {
    eigenvalues: Vec<c64>,
    right: ComplexMatrix,
    left: Option<ComplexMatrix>,
    diag_score: f64,
    tol_used: f64,
    kappa_max: f64,
    clusters: Vec<Vec<usize>>,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[c64] {
        &self.eigenvalues
    }

    /// Right eigenvectors as columns.
    pub fn right(&self) -> &ComplexMatrix {
        &self.right
    }

    /// Left eigenvectors as columns; fails for a defective matrix.
    pub fn left(&self) -> Result<&ComplexMatrix> {
        self.left.as_ref().ok_or(Error::NonDiagonalizable {
            diag_score: self.diag_score,
        })
    }

    /// Condition number of the column-normalized right eigenvector matrix.
    pub fn diag_score(&self) -> f64 {
        self.diag_score
    }

    pub fn tol_used(&self) -> f64 {
        self.tol_used
    }

    pub fn kappa_max(&self) -> f64 {
        self.kappa_max
    }

    pub fn is_diagonalizable(&self) -> bool {
        self.left.is_some()
    }

    /// Index groups of (numerically) degenerate eigenvalues.
    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    /// `Σ_n λ_n ψ_n φ_n†`.
    pub fn reconstruct(&self) -> Result<ComplexMatrix> {
        let left = self.left()?;
        let lam = ComplexMatrix::diag(&self.eigenvalues);
        Ok(&(&self.right * &lam) * &left.adjoint())
    }

    /// Largest entry of `|L†R − I|`.
    pub fn gram_deviation(&self) -> Result<f64> {
        Ok(gram_deviation(&self.right, self.left()?))
    }
}

/// Largest entry of `|left† · right − I|`.
pub fn gram_deviation(right: &ComplexMatrix, left: &ComplexMatrix) -> f64 {
    let g = &left.adjoint() * right;
    g.max_abs_diff(&ComplexMatrix::identity(g.dim()))
}

/// Full eigendecomposition with default options.
pub fn eig_full(m: &ComplexMatrix) -> Result<Spectrum> {
    eig_full_with(m, &EigOptions::default())
}

pub fn eig_full_with(m: &ComplexMatrix, opts: &EigOptions) -> Result<Spectrum> {
    let n = m.dim();
    let evd = m.0.eigen().map_err(|e| Error::EigFailure(format!("{e:?}")))?;
    let raw_vals: Vec<c64> = evd.S().column_vector().iter().copied().collect();
    let raw_vecs = evd.U().to_owned();
    if raw_vals.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::EigFailure("non-finite eigenvalue".into()));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        raw_vals[a]
            .re
            .total_cmp(&raw_vals[b].re)
            .then(raw_vals[a].im.total_cmp(&raw_vals[b].im))
    });
    let eigenvalues: Vec<c64> = order.iter().map(|&k| raw_vals[k]).collect();
    let mut right = Mat::from_fn(n, n, |i, j| raw_vecs[(i, order[j])]);
    for j in 0..n {
        normalize_column(&mut right, j);
    }

    let diag_score = cond(&right)?;
    let clusters = cluster_indices(&eigenvalues, opts.cluster_tol);

    if diag_score > opts.kappa_max {
        return Ok(Spectrum {
            eigenvalues,
            right: ComplexMatrix(right),
            left: None,
            diag_score,
            tol_used: opts.cluster_tol,
            kappa_max: opts.kappa_max,
            clusters,
        });
    }

    for cluster in clusters.iter().filter(|c| c.len() > 1) {
        orthonormalize_columns(&mut right, cluster);
    }
    let right = ComplexMatrix(right);
    let left = right.inverse().map_err(|_| Error::DegenerateSystem)?.adjoint();
    let (right, left) = biorthonormalize(&right, &left)?;

    Ok(Spectrum {
        eigenvalues,
        right,
        left: Some(left),
        diag_score,
        tol_used: opts.cluster_tol,
        kappa_max: opts.kappa_max,
        clusters,
    })
}

/// Rescales `left` so that `left'† · right = I`; `right` is returned unchanged.
pub fn biorthonormalize(right: &ComplexMatrix, left: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if right.dim() != left.dim() {
        return Err(Error::DimensionMismatch {
            expected: right.dim(),
            found: left.dim(),
        });
    }
    let gram = &left.adjoint() * right;
    let ginv = gram.inverse().map_err(|_| Error::DegenerateSystem)?;
    let new_left = left * &ginv.adjoint();
    Ok((right.clone(), new_left))
}

/// Hermitian positive-definite square root.
pub fn herm_sqrt(p: &ComplexMatrix) -> Result<ComplexMatrix> {
    let residual = p.hermiticity_residual();
    if residual > SELF_ADJOINT_TOL {
        return Err(Error::NotSelfAdjoint { residual });
    }
    let sym = p.hermitian_part();
    let evd = sym
        .0
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::EigFailure(format!("self-adjoint eigensolver: {e:?}")))?;
    let n = p.dim();
    let vals: Vec<f64> = evd.S().column_vector().iter().map(|z| z.re).collect();
    let max = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
    if !(min > SINGULAR_RTOL * n as f64 * max) {
        return Err(Error::NotPositiveDefinite { min_eigenvalue: min });
    }
    let u = evd.U();
    let scaled = Mat::from_fn(n, n, |i, j| u[(i, j)] * vals[j].sqrt());
    let q = ComplexMatrix(&scaled * u.adjoint());
    Ok(q.hermitian_part())
}

/// Scales column `j` to unit norm and rotates its phase so that the
/// largest-modulus component is real and positive.
fn normalize_column(m: &mut Mat<c64>, j: usize) {
    let n = m.nrows();
    let norm = (0..n).map(|i| m[(i, j)].norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return;
    }
    let mut pivot = 0;
    for i in 1..n {
        if m[(i, j)].norm() > m[(pivot, j)].norm() * (1.0 + 1e-12) {
            pivot = i;
        }
    }
    let p = m[(pivot, j)];
    let phase = p.conj() / p.norm();
    for i in 0..n {
        m[(i, j)] = m[(i, j)] * phase / norm;
    }
}

/// Modified Gram-Schmidt (two passes) on the listed columns.
fn orthonormalize_columns(m: &mut Mat<c64>, cols: &[usize]) {
    let n = m.nrows();
    for (pos, &j) in cols.iter().enumerate() {
        for _ in 0..2 {
            for &k in &cols[..pos] {
                let proj: c64 = (0..n).map(|i| m[(i, k)].conj() * m[(i, j)]).sum();
                for i in 0..n {
                    let v = m[(i, k)];
                    m[(i, j)] -= proj * v;
                }
            }
        }
        normalize_column(m, j);
    }
}

/// Groups indices whose eigenvalues lie within `tol * (1 + |λ|)` of each
/// other, closed transitively. Groups are sorted by their first index.
fn cluster_indices(vals: &[c64], tol: f64) -> Vec<Vec<usize>> {
    let n = vals.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut c = x;
        while p[c] != r {
            let next = p[c];
            p[c] = r;
            c = next;
        }
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (vals[i] - vals[j]).norm() <= tol * (1.0 + vals[i].norm()) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b.max(a)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma1() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[vec![cx(0.0, 0.0), cx(1.0, 0.0)], vec![cx(1.0, 0.0), cx(0.0, 0.0)]]).unwrap()
    }

    #[test]
    fn identity_spectrum() {
        let s = eig_full(&ComplexMatrix::identity(2)).unwrap();
        for l in s.eigenvalues() {
            assert!((l - cx(1.0, 0.0)).norm() < 1e-15);
        }
        assert!((s.diag_score() - 1.0).abs() < 1e-12);
        assert_eq!(s.clusters().len(), 1);
    }

    #[test]
    fn pauli_x_eigenvectors() {
        let s = eig_full(&sigma1()).unwrap();
        assert!((s.eigenvalues()[0] - cx(-1.0, 0.0)).norm() < 1e-14);
        assert!((s.eigenvalues()[1] - cx(1.0, 0.0)).norm() < 1e-14);
        let r = 0.5f64.sqrt();
        let minus = s.right().col(0);
        let plus = s.right().col(1);
        // phase convention: the first maximal component is real positive
        assert!((plus[0] - cx(r, 0.0)).norm() < 1e-14 && (plus[1] - cx(r, 0.0)).norm() < 1e-14);
        assert!((minus[0] - cx(r, 0.0)).norm() < 1e-14 && (minus[1] + cx(r, 0.0)).norm() < 1e-14);
        assert!(s.gram_deviation().unwrap() < 1e-14);
    }

    #[test]
    fn jordan_block_is_flagged() {
        let j =
            ComplexMatrix::from_rows(&[vec![cx(0.0, 0.0), cx(1.0, 0.0)], vec![cx(0.0, 0.0), cx(0.0, 0.0)]]).unwrap();
        let s = eig_full(&j).unwrap();
        assert!(s.diag_score() > DEFAULT_KAPPA_MAX);
        assert!(!s.is_diagonalizable());
        assert!(matches!(s.left(), Err(Error::NonDiagonalizable { .. })));
    }

    #[test]
    fn degenerate_cluster_is_orthonormalized() {
        let h = ComplexMatrix::real_diag(&[2.0, 2.0, -1.0]);
        let s = eig_full(&h).unwrap();
        assert_eq!(s.clusters().iter().map(|c| c.len()).max(), Some(2));
        let r = s.right();
        let g = &r.adjoint() * r;
        assert!(g.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-14);
    }

    #[test]
    fn biorthonormalize_identity_unchanged() {
        let i = ComplexMatrix::identity(3);
        let (r, l) = biorthonormalize(&i, &i).unwrap();
        assert!(r.max_abs_diff(&i) == 0.0);
        assert!(l.max_abs_diff(&i) < 1e-15);
    }

    #[test]
    fn biorthonormalize_scaling() {
        let right = ComplexMatrix::identity(3).scale(cx(2.0, 0.0));
        let (_, l) = biorthonormalize(&right, &ComplexMatrix::identity(3)).unwrap();
        assert!(l.max_abs_diff(&ComplexMatrix::identity(3).scale(cx(0.5, 0.0))) < 1e-15);
    }

    #[test]
    fn biorthonormalize_rejects_singular_gram() {
        let right = ComplexMatrix::identity(2);
        let left = ComplexMatrix::real_diag(&[1.0, 0.0]);
        assert!(matches!(biorthonormalize(&right, &left), Err(Error::DegenerateSystem)));
    }

    #[test]
    fn sqrt_of_identity_and_diagonal() {
        let q = herm_sqrt(&ComplexMatrix::identity(3)).unwrap();
        assert!(q.max_abs_diff(&ComplexMatrix::identity(3)) < 1e-15);
        let q = herm_sqrt(&ComplexMatrix::real_diag(&[4.0, 9.0])).unwrap();
        assert!(q.max_abs_diff(&ComplexMatrix::real_diag(&[2.0, 3.0])) < 1e-14);
    }

    #[test]
    fn sqrt_rejects_indefinite_and_non_hermitian() {
        let e = herm_sqrt(&ComplexMatrix::real_diag(&[1.0, -1.0])).unwrap_err();
        assert!(matches!(e, Error::NotPositiveDefinite { .. }));
        let e = herm_sqrt(&ComplexMatrix::real_diag(&[1.0, 0.0])).unwrap_err();
        assert!(matches!(e, Error::NotPositiveDefinite { .. }));
        let nh =
            ComplexMatrix::from_rows(&[vec![cx(1.0, 0.0), cx(1.0, 0.0)], vec![cx(0.0, 0.0), cx(1.0, 0.0)]]).unwrap();
        assert!(matches!(herm_sqrt(&nh), Err(Error::NotSelfAdjoint { .. })));
    }

    #[test]
    fn from_mat_validates() {
        assert!(matches!(
            ComplexMatrix::from_mat(Mat::<c64>::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
        let mut m = Mat::<c64>::zeros(2, 2);
        m[(0, 1)] = cx(f64::NAN, 0.0);
        assert!(matches!(ComplexMatrix::from_mat(m), Err(Error::NonFinite)));
        assert!(matches!(
            ComplexMatrix::from_rows(&[vec![cx(1.0, 0.0)], vec![]]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn clusters_are_transitive() {
        let v = [cx(0.0, 0.0), cx(0.5e-8, 0.0), cx(1.0e-8, 0.0), cx(1.0, 0.0)];
        let c = cluster_indices(&v, 1e-8);
        assert_eq!(c, vec![vec![0, 1, 2], vec![3]]);
    }

    #[test]
    fn kron_of_identities() {
        let k = sigma1().kron(&ComplexMatrix::identity(2));
        assert_eq!(k.dim(), 4);
        assert_eq!(k[(0, 2)], cx(1.0, 0.0));
        assert_eq!(k[(0, 1)], cx(0.0, 0.0));
    }
}
