//! Classification of non-Hermitian matrices and construction of metric
//! operators.
//!
//! Everything here works on a diagonalizable matrix `H = Σ λ_n ψ_n φ_n†`
//! given through its [`Spectrum`]. A metric operator `η` is an invertible
//! self-adjoint matrix with `H† η = η H`; the set of all of them is `E(H)`.
//!
//! * the spectrum must be closed under complex conjugation for `E(H)` to
//!   be nonempty ([`pair_spectrum`]);
//! * `E(H)` contains a positive-definite element iff the spectrum is real
//!   ([`build_positive_metric`]);
//! * a positive metric `η₊ = ρ²` turns `H` into the Hermitian `ρ H ρ⁻¹`
//!   ([`hermitize`]).

use faer::c64;

use crate::error::{Error, Result};
use crate::linalg::{
    self, cx, dot, eig_full_with, herm_sqrt, hermitian_eigenvalues, relative, ComplexMatrix, EigOptions, Spectrum,
};

/// Default reality tolerance: `λ` is real iff `|Im λ| <= tol * (1 + |λ|)`.
pub const DEFAULT_REALITY_TOL: f64 = 1e-9;

/// Residual below which `η` is accepted as a member of `E(H)`.
pub const INTERTWINING_TOL: f64 = 1e-8;

/// Tolerance on the commutator `‖AH − HA‖ / (‖A‖‖H‖)` in [`transform_metric`].
pub const COMMUTATOR_TOL: f64 = 1e-8;

/// Eigenvalues of a metric below `METRIC_RTOL * dim * max|λ|` in modulus
/// make it singular.
const METRIC_RTOL: f64 = 64.0 * f64::EPSILON;

/// Split of the spectrum into real eigenvalues and complex-conjugate pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct PairingMap {
    /// Indices (into the spectrum) of eigenvalues deemed real.
    pub real_indices: Vec<usize>,
    /// Pairs `(n, n̄)` with `Im λ_n > 0` and `λ_n̄ ≈ conj(λ_n)`.
    pub pairs: Vec<(usize, usize)>,
    pub tol: f64,
}

impl PairingMap {
    pub fn is_all_real(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Partner index of `n` under complex conjugation (itself if real).
    pub fn partner(&self, n: usize) -> Option<usize> {
        if self.real_indices.contains(&n) {
            return Some(n);
        }
        self.pairs.iter().find_map(|&(a, b)| {
            if a == n {
                Some(b)
            } else if b == n {
                Some(a)
            } else {
                None
            }
        })
    }
}

pub fn is_real(lambda: c64, tol: f64) -> bool {
    lambda.im.abs() <= tol * (1.0 + lambda.norm())
}

/// Marks real eigenvalues and matches the rest into conjugate pairs.
///
/// Matching is greedy over all candidate (upper, lower) half-plane pairs
/// ordered by `|λ_lower − conj(λ_upper)|`; any eigenvalue left without a
/// partner within tolerance is reported instead of being forced.
pub fn pair_spectrum(s: &Spectrum, tol: f64) -> Result<PairingMap> {
    pair_eigenvalues(s.eigenvalues(), tol)
}

pub fn pair_eigenvalues(vals: &[c64], tol: f64) -> Result<PairingMap> {
    let mut real_indices = Vec::new();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for (n, &l) in vals.iter().enumerate() {
        if is_real(l, tol) {
            real_indices.push(n);
        } else if l.im > 0.0 {
            upper.push(n);
        } else {
            lower.push(n);
        }
    }

    let mut candidates: Vec<(f64, usize, usize)> = Vec::with_capacity(upper.len() * lower.len());
    for &u in &upper {
        for &d in &lower {
            let dist = (vals[d] - vals[u].conj()).norm();
            if dist <= tol * (1.0 + vals[u].norm()) {
                candidates.push((dist, u, d));
            }
        }
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut used = vec![false; vals.len()];
    let mut pairs = Vec::new();
    for (_, u, d) in candidates {
        if !used[u] && !used[d] {
            used[u] = true;
            used[d] = true;
            pairs.push((u, d));
        }
    }
    if let Some(&n) = upper.iter().chain(&lower).filter(|&&n| !used[n]).min() {
        return Err(Error::UnpairedEigenvalue(vals[n]));
    }
    pairs.sort();
    Ok(PairingMap {
        real_indices,
        pairs,
        tol,
    })
}

/// Position of a matrix in the chain Hermitian ⊂ quasi-Hermitian ⊂ pseudo-Hermitian.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassKind {
    Hermitian,
    QuasiHermitian,
    PseudoHermitianOnly,
    NotPseudoHermitian,
    NonDiagonalizable,
}

impl ClassKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ClassKind::Hermitian => "Hermitian",
            ClassKind::QuasiHermitian => "QuasiHermitian",
            ClassKind::PseudoHermitianOnly => "PseudoHermitianOnly",
            ClassKind::NotPseudoHermitian => "NotPseudoHermitian",
            ClassKind::NonDiagonalizable => "NonDiagonalizable",
        }
    }

    /// Whether a positive-definite metric exists.
    pub fn is_quasi_hermitian(&self) -> bool {
        matches!(self, ClassKind::Hermitian | ClassKind::QuasiHermitian)
    }

    /// Whether some metric exists (diagonalizable case only).
    pub fn is_pseudo_hermitian(&self) -> bool {
        matches!(
            self,
            ClassKind::Hermitian | ClassKind::QuasiHermitian | ClassKind::PseudoHermitianOnly
        )
    }
}

impl std::fmt::Display for ClassKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug)]
pub struct Diagnostics {
    /// `‖H − H†‖ / ‖H‖`.
    pub hermiticity_residual: f64,
    pub diag_score: f64,
    /// `max |Im λ| / (1 + |λ|)` over the spectrum.
    pub max_rel_imag: f64,
    pub pair_count: usize,
    pub unpaired: Option<c64>,
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub kind: ClassKind,
    pub diagnostics: Diagnostics,
    pub spectrum: Spectrum,
}

pub fn classify(h: &ComplexMatrix, tol: f64) -> Result<Classification> {
    classify_with(h, tol, &EigOptions::default())
}

pub fn classify_with(h: &ComplexMatrix, tol: f64, opts: &EigOptions) -> Result<Classification> {
    let spectrum = eig_full_with(h, opts)?;
    let hermiticity_residual = h.hermiticity_residual();
    let max_rel_imag = spectrum
        .eigenvalues()
        .iter()
        .map(|l| l.im.abs() / (1.0 + l.norm()))
        .fold(0.0, f64::max);
    let mut diagnostics = Diagnostics {
        hermiticity_residual,
        diag_score: spectrum.diag_score(),
        max_rel_imag,
        pair_count: 0,
        unpaired: None,
    };

    let kind = if spectrum.diag_score() > opts.kappa_max {
        ClassKind::NonDiagonalizable
    } else {
        match pair_spectrum(&spectrum, tol) {
            Err(Error::UnpairedEigenvalue(l)) => {
                diagnostics.unpaired = Some(l);
                ClassKind::NotPseudoHermitian
            }
            Err(e) => return Err(e),
            Ok(p) => {
                diagnostics.pair_count = p.pairs.len();
                if hermiticity_residual <= tol {
                    ClassKind::Hermitian
                } else if p.is_all_real() {
                    ClassKind::QuasiHermitian
                } else {
                    ClassKind::PseudoHermitianOnly
                }
            }
        }
    };
    Ok(Classification {
        kind,
        diagnostics,
        spectrum,
    })
}

/// Counts of positive and negative eigenvalues of a metric operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
}

impl Signature {
    pub fn is_indefinite(&self) -> bool {
        self.positive > 0 && self.negative > 0
    }

    pub fn is_positive_definite(&self) -> bool {
        self.negative == 0 && self.positive > 0
    }
}

/// An invertible self-adjoint matrix together with its signature.
#[derive(Clone, Debug)]
pub struct MetricOperator {
    matrix: ComplexMatrix,
    signature: Signature,
    selfadjoint_residual: f64,
    min_abs_eigenvalue: f64,
    eigenvalues: Vec<f64>,
}

impl MetricOperator {
    /// Validates `matrix` as a metric: self-adjoint to 1e-10 relative and
    /// invertible. The stored matrix is the exact Hermitian part.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let selfadjoint_residual = matrix.hermiticity_residual();
        if selfadjoint_residual > linalg::SELF_ADJOINT_TOL {
            return Err(Error::NotSelfAdjoint {
                residual: selfadjoint_residual,
            });
        }
        let matrix = matrix.hermitian_part();
        let eigenvalues = hermitian_eigenvalues(&matrix)?;
        let max_abs = eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let min_abs = eigenvalues.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
        if !(min_abs > METRIC_RTOL * matrix.dim() as f64 * max_abs) {
            return Err(Error::NotInvertible {
                min_singular_value: min_abs,
            });
        }
        let positive = eigenvalues.iter().filter(|&&v| v > 0.0).count();
        Ok(Self {
            signature: Signature {
                positive,
                negative: eigenvalues.len() - positive,
            },
            matrix,
            selfadjoint_residual,
            min_abs_eigenvalue: min_abs,
            eigenvalues,
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn selfadjoint_residual(&self) -> f64 {
        self.selfadjoint_residual
    }

    pub fn min_abs_eigenvalue(&self) -> f64 {
        self.min_abs_eigenvalue
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn is_positive_definite(&self) -> bool {
        self.signature.is_positive_definite()
    }
}

/// `(n₊, n₋)` of a metric operator.
pub fn metric_signature(eta: &MetricOperator) -> Signature {
    eta.signature()
}

/// `η₊ = Σ_n φ_n φ_n†` over the left eigenvectors of an all-real spectrum.
pub fn build_positive_metric(s: &Spectrum) -> Result<MetricOperator> {
    let left = s.left()?;
    let pairing = pair_spectrum(s, DEFAULT_REALITY_TOL);
    match pairing {
        Ok(p) if p.is_all_real() => {}
        _ => return Err(Error::NoPositiveMetric),
    }
    let eta = left * &left.adjoint();
    MetricOperator::new(eta).map_err(|e| match e {
        Error::NotInvertible { .. } => Error::DegenerateSystem,
        other => other,
    })
}

/// `η = Σ_real s_n φ_n φ_n† + Σ_pairs (φ_n φ_n̄† + φ_n̄ φ_n†)`.
///
/// `signs` holds one `±1` per entry of `pairing.real_indices`, in order.
pub fn build_general_metric(s: &Spectrum, pairing: &PairingMap, signs: &[i8]) -> Result<MetricOperator> {
    if signs.len() != pairing.real_indices.len() {
        return Err(Error::SignCountMismatch {
            expected: pairing.real_indices.len(),
            found: signs.len(),
        });
    }
    let left = s.left()?;
    let n = s.dim();
    let phi: Vec<Vec<c64>> = (0..n).map(|k| left.col(k)).collect();
    let eta = ComplexMatrix::from_fn(n, |i, j| {
        let mut acc = cx(0.0, 0.0);
        for (&k, &sign) in pairing.real_indices.iter().zip(signs) {
            acc += phi[k][i] * phi[k][j].conj() * f64::from(sign.signum());
        }
        for &(a, b) in &pairing.pairs {
            acc += phi[a][i] * phi[b][j].conj() + phi[b][i] * phi[a][j].conj();
        }
        acc
    });
    MetricOperator::new(eta).map_err(|e| match e {
        Error::NotInvertible { .. } => Error::DegenerateSystem,
        other => other,
    })
}

/// `‖H† η − η H‖ / (‖H‖ ‖η‖)`.
pub fn verify_intertwining(h: &ComplexMatrix, eta: &MetricOperator) -> f64 {
    intertwining_residual(h, eta.matrix())
}

/// Same as [`verify_intertwining`] for an unvalidated matrix.
pub fn intertwining_residual(h: &ComplexMatrix, eta: &ComplexMatrix) -> f64 {
    let lhs = &h.adjoint() * eta;
    let rhs = eta * h;
    relative((&lhs - &rhs).norm(), h.norm() * eta.norm())
}

/// `⟨ψ, η χ⟩`, conjugate-linear in `ψ`.
pub fn eta_inner(eta: &MetricOperator, psi: &[c64], chi: &[c64]) -> c64 {
    dot(psi, &eta.matrix().apply(chi))
}

/// Result of a similarity Hermitization.
#[derive(Clone, Debug)]
pub struct Hermitization {
    /// `ρ = η₊^{1/2}`.
    pub rho: ComplexMatrix,
    pub rho_inv: ComplexMatrix,
    /// `h = ρ H ρ⁻¹`.
    pub h: ComplexMatrix,
}

pub fn hermitize(h: &ComplexMatrix, eta_plus: &MetricOperator) -> Result<Hermitization> {
    let residual = verify_intertwining(h, eta_plus);
    if !(residual <= INTERTWINING_TOL) {
        return Err(Error::NotAMetric { residual });
    }
    let rho = herm_sqrt(eta_plus.matrix())?;
    let rho_inv = rho.inverse()?;
    let herm = &(&rho * h) * &rho_inv;
    Ok(Hermitization { rho, rho_inv, h: herm })
}

/// Matrix `τ` of an antilinear map `x ↦ τ·conj(x)` commuting with `H`,
/// i.e. `H τ = τ conj(H)`.
pub fn antilinear_symmetry(s: &Spectrum, pairing: &PairingMap) -> Result<ComplexMatrix> {
    let left = s.left()?;
    let right = s.right();
    let n = s.dim();
    let psi: Vec<Vec<c64>> = (0..n).map(|k| right.col(k)).collect();
    let phi: Vec<Vec<c64>> = (0..n).map(|k| left.col(k)).collect();
    let tau = ComplexMatrix::from_fn(n, |i, j| {
        let mut acc = cx(0.0, 0.0);
        for &k in &pairing.real_indices {
            acc += psi[k][i] * phi[k][j];
        }
        for &(a, b) in &pairing.pairs {
            acc += psi[a][i] * phi[b][j] + psi[b][i] * phi[a][j];
        }
        acc
    });
    tau.inverse()?;
    Ok(tau)
}

/// `‖H τ − τ conj(H)‖ / (‖H‖ ‖τ‖)`.
pub fn antilinear_residual(h: &ComplexMatrix, tau: &ComplexMatrix) -> f64 {
    let lhs = h * tau;
    let rhs = tau * &h.conj();
    relative((&lhs - &rhs).norm(), h.norm() * tau.norm())
}

/// `A† η A` for invertible `A` commuting with `H`.
pub fn transform_metric(eta: &MetricOperator, a: &ComplexMatrix, h: &ComplexMatrix) -> Result<MetricOperator> {
    let comm = relative((&(a * h) - &(h * a)).norm(), a.norm() * h.norm());
    if !(comm <= COMMUTATOR_TOL) {
        return Err(Error::NotCommuting { residual: comm });
    }
    a.inverse()?;
    let out = &(&a.adjoint() * eta.matrix()) * a;
    MetricOperator::new(out)
}

/// Greedy nearest-neighbour distance between two spectra, relative to
/// `max(1, spectral radius of a)`.
pub fn spectrum_distance(a: &[c64], b: &[c64]) -> f64 {
    assert_eq!(a.len(), b.len(), "spectra of different sizes");
    let scale = a.iter().fold(1.0f64, |m, l| m.max(l.norm()));
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("spectra of equal size");
        used[j] = true;
        worst = worst.max(d);
    }
    worst / scale
}
