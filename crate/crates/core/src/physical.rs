//! Physical state spaces built from an auxiliary Hamiltonian `H′`.
//!
//! Two constructions are compared:
//!
//! * the pseudo-Hermitian one keeps the span `K` of all eigenvectors of
//!   `H′` with real eigenvalues, restricts `H′` to it and equips it with a
//!   positive metric `η₊`;
//! * the indefinite-metric one fixes a metric `η ∈ E(H′)` and keeps only
//!   the eigenvectors of positive `η`-norm.

use faer::{c64, Mat};

use crate::error::{Error, Result};
use crate::linalg::{eig_full, relative, vec_norm, ComplexMatrix, Spectrum};
use crate::pseudospec::{
    build_positive_metric, eta_inner, pair_spectrum, MetricOperator, PairingMap, DEFAULT_REALITY_TOL,
};

/// Norms with `|⟨ψ,ηψ⟩| <= ZERO_NORM_TOL * ‖ψ‖²` are treated as zero.
pub const ZERO_NORM_TOL: f64 = 1e-10;

/// Right eigenvectors with real eigenvalues, as columns.
pub fn real_span(s: &Spectrum, pairing: &PairingMap) -> Result<Mat<c64>> {
    if pairing.real_indices.is_empty() {
        return Err(Error::EmptyPhysicalSpace);
    }
    Ok(columns(s.right(), &pairing.real_indices))
}

/// The restriction of `H′` to the span of its real-eigenvalue eigenvectors.
#[derive(Clone, Debug)]
pub struct PhysicalSubspace {
    pub parent_dim: usize,
    /// Orthonormal columns spanning `K`.
    pub basis: Mat<c64>,
    /// `basis† H′ basis`.
    pub restricted_op: ComplexMatrix,
    pub eta_plus: MetricOperator,
}

impl PhysicalSubspace {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// `‖H′·basis − basis·K‖ / ‖H′‖`.
    pub fn invariance_residual(&self, parent: &ComplexMatrix) -> f64 {
        let lhs = parent.as_mat() * &self.basis;
        let rhs = &self.basis * self.restricted_op.as_mat();
        relative((&lhs - &rhs).norm_l2(), parent.frobenius())
    }
}

pub fn restrict_to_physical(parent: &ComplexMatrix) -> Result<PhysicalSubspace> {
    let s = eig_full(parent)?;
    if !s.is_diagonalizable() {
        return Err(Error::NonDiagonalizable {
            diag_score: s.diag_score(),
        });
    }
    let pairing = pair_spectrum(&s, DEFAULT_REALITY_TOL)?;
    let raw = real_span(&s, &pairing)?;
    let basis = raw.qr().compute_thin_Q();
    let restricted = ComplexMatrix::from_mat(basis.adjoint() * parent.as_mat() * &basis)?;
    let eta_plus = build_positive_metric(&eig_full(&restricted)?)?;
    Ok(PhysicalSubspace {
        parent_dim: parent.dim(),
        basis,
        restricted_op: restricted,
        eta_plus,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormSign {
    Positive,
    Zero,
    Negative,
}

/// Sign of `⟨ψ_n, η ψ_n⟩` for every right eigenvector of `s`.
pub fn indefinite_physical_set(s: &Spectrum, eta: &MetricOperator) -> Vec<(usize, NormSign)> {
    (0..s.dim())
        .map(|n| {
            let psi = s.right().col(n);
            let norm = eta_inner(eta, &psi, &psi).re;
            let scale = vec_norm(&psi).powi(2);
            let sign = if norm.abs() <= ZERO_NORM_TOL * scale {
                NormSign::Zero
            } else if norm > 0.0 {
                NormSign::Positive
            } else {
                NormSign::Negative
            };
            (n, sign)
        })
        .collect()
}

/// Span of the positive-`η`-norm eigenvectors: the physical space of the
/// indefinite-metric theory.
pub fn positive_norm_span(s: &Spectrum, eta: &MetricOperator) -> Mat<c64> {
    let idx: Vec<usize> = indefinite_physical_set(s, eta)
        .into_iter()
        .filter(|&(_, sign)| sign == NormSign::Positive)
        .map(|(n, _)| n)
        .collect();
    columns(s.right(), &idx)
}

/// Orthogonal projector onto the column span of `basis`.
pub fn projector(dim: usize, basis: &Mat<c64>) -> ComplexMatrix {
    if basis.ncols() == 0 {
        return ComplexMatrix::zeros(dim);
    }
    let q = basis.qr().compute_thin_Q();
    ComplexMatrix::from_mat(&q * q.adjoint()).expect("finite projector")
}

/// Selected columns of `m`.
pub fn columns(m: &ComplexMatrix, idx: &[usize]) -> Mat<c64> {
    Mat::from_fn(m.dim(), idx.len(), |i, j| m[(i, idx[j])])
}
