//! Test operators with known ground truth.
//!
//! Every random instance is built by similarity from a planted spectrum,
//! so its classification is known by construction.

use std::f64::consts::FRAC_1_SQRT_2;

use faer::{c64, Mat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::linalg::{cx, ComplexMatrix};
use crate::pseudospec::ClassKind;

/// Default bound on the condition number of the planted similarity.
pub const DEFAULT_CONDITIONING_CAP: f64 = 1e3;

/// Minimum distance between planted eigenvalues.
pub const EIGENVALUE_GAP: f64 = 1e-3;

/// Smallest imaginary part of a planted complex-conjugate pair.
pub const MIN_PAIR_IMAG: f64 = 1e-2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EnsembleKind {
    Quasi,
    PseudoNonQuasi,
    Hermitian,
    Defective,
}

impl EnsembleKind {
    pub const ALL: [EnsembleKind; 4] = [
        EnsembleKind::Quasi,
        EnsembleKind::PseudoNonQuasi,
        EnsembleKind::Hermitian,
        EnsembleKind::Defective,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            EnsembleKind::Quasi => "quasi",
            EnsembleKind::PseudoNonQuasi => "pseudo_nonquasi",
            EnsembleKind::Hermitian => "hermitian",
            EnsembleKind::Defective => "defective",
        }
    }

    /// The classification every instance of this kind must receive.
    pub fn expected_class(&self) -> ClassKind {
        match self {
            EnsembleKind::Quasi => ClassKind::QuasiHermitian,
            EnsembleKind::PseudoNonQuasi => ClassKind::PseudoHermitianOnly,
            EnsembleKind::Hermitian => ClassKind::Hermitian,
            EnsembleKind::Defective => ClassKind::NonDiagonalizable,
        }
    }
}

impl std::str::FromStr for EnsembleKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        EnsembleKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown ensemble kind {s:?}"))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EnsembleSpec {
    pub dim: usize,
    pub seed: u64,
    pub kind: EnsembleKind,
    pub conditioning_cap: f64,
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, dim: usize, seed: u64) -> Self {
        Self {
            dim,
            seed,
            kind,
            conditioning_cap: DEFAULT_CONDITIONING_CAP,
        }
    }
}

/// A generated matrix with its planted spectrum and similarity.
#[derive(Clone, Debug)]
pub struct Planted {
    pub h: ComplexMatrix,
    pub spectrum: Vec<c64>,
    pub similarity: ComplexMatrix,
    pub kind: EnsembleKind,
}

/// `[[r e^{iθ}, s], [s, r e^{−iθ}]]`, with eigenvalues
/// `r cos θ ± √(s² − r² sin² θ)`.
pub fn pt2x2(r: f64, theta: f64, s: f64) -> ComplexMatrix {
    ComplexMatrix::from_fn(2, |i, j| match (i, j) {
        (0, 0) => c64::from_polar(r, theta),
        (1, 1) => c64::from_polar(r, -theta),
        _ => cx(s, 0.0),
    })
}

/// Upper Jordan block of size `n` with eigenvalue `lambda`.
pub fn jordan_block(n: usize, lambda: c64) -> ComplexMatrix {
    assert!(n >= 2, "a Jordan block needs n >= 2");
    ComplexMatrix::from_fn(n, |i, j| {
        if i == j {
            lambda
        } else if j == i + 1 {
            cx(1.0, 0.0)
        } else {
            cx(0.0, 0.0)
        }
    })
}

/// `S · diag(spectrum) · S⁻¹`.
pub fn plant(similarity: &ComplexMatrix, spectrum: &[c64]) -> Result<ComplexMatrix> {
    let inv = similarity.inverse()?;
    Ok(&(similarity * &ComplexMatrix::diag(spectrum)) * &inv)
}

/// Dispatches on `spec.kind`.
pub fn generate(spec: &EnsembleSpec) -> Planted {
    match spec.kind {
        EnsembleKind::Quasi => random_quasi(spec),
        EnsembleKind::PseudoNonQuasi => random_pseudo_nonquasi(spec),
        EnsembleKind::Hermitian => random_hermitian(spec),
        EnsembleKind::Defective => random_defective(spec),
    }
}

/// Diagonalizable matrix with a real planted spectrum in `[-1, 1]`.
pub fn random_quasi(spec: &EnsembleSpec) -> Planted {
    let mut rng = rng_for(spec, EnsembleKind::Quasi);
    let spectrum = loop {
        let vals: Vec<c64> = (0..spec.dim).map(|_| cx(rng.random_range(-1.0..=1.0), 0.0)).collect();
        if gap_ok(&vals) {
            break vals;
        }
    };
    let similarity = random_similarity(&mut rng, spec.dim, spec.conditioning_cap);
    let h = plant(&similarity, &spectrum).expect("similarity is well conditioned");
    Planted {
        h,
        spectrum,
        similarity,
        kind: EnsembleKind::Quasi,
    }
}

/// Diagonalizable matrix whose planted spectrum contains at least one
/// complex-conjugate pair, plus optional real eigenvalues.
pub fn random_pseudo_nonquasi(spec: &EnsembleSpec) -> Planted {
    assert!(spec.dim >= 2, "a conjugate pair needs dim >= 2");
    let mut rng = rng_for(spec, EnsembleKind::PseudoNonQuasi);
    let spectrum = loop {
        let pairs = rng.random_range(1..=spec.dim / 2);
        let mut vals = Vec::with_capacity(spec.dim);
        for _ in 0..pairs {
            let l = cx(rng.random_range(-1.0..=1.0), rng.random_range(0.05..=1.0));
            vals.push(l);
            vals.push(l.conj());
        }
        while vals.len() < spec.dim {
            vals.push(cx(rng.random_range(-1.0..=1.0), 0.0));
        }
        if gap_ok(&vals) && vals.iter().any(|l| l.im >= MIN_PAIR_IMAG) {
            break vals;
        }
    };
    let similarity = random_similarity(&mut rng, spec.dim, spec.conditioning_cap);
    let h = plant(&similarity, &spectrum).expect("similarity is well conditioned");
    Planted {
        h,
        spectrum,
        similarity,
        kind: EnsembleKind::PseudoNonQuasi,
    }
}

/// `U Λ U†` with a random unitary `U` and real `Λ`.
pub fn random_hermitian(spec: &EnsembleSpec) -> Planted {
    let mut rng = rng_for(spec, EnsembleKind::Hermitian);
    let spectrum = loop {
        let vals: Vec<c64> = (0..spec.dim).map(|_| cx(rng.random_range(-1.0..=1.0), 0.0)).collect();
        if gap_ok(&vals) {
            break vals;
        }
    };
    let u = random_unitary(&mut rng, spec.dim);
    let h = (&(&u * &ComplexMatrix::diag(&spectrum)) * &u.adjoint()).hermitian_part();
    Planted {
        h,
        spectrum,
        similarity: u,
        kind: EnsembleKind::Hermitian,
    }
}

/// Matrix with a nontrivial Jordan block.
///
/// For `dim >= 3` a size-3 block is hidden by a random unitary
/// similarity. A size-2 block would be split by rounding into two
/// eigenvectors only ~1e-8 apart, too close to the diagonalizability
/// cutoff, so `dim == 2` uses an exact upper-triangular form instead.
pub fn random_defective(spec: &EnsembleSpec) -> Planted {
    assert!(spec.dim >= 2, "a defective matrix needs dim >= 2");
    let mut rng = rng_for(spec, EnsembleKind::Defective);
    let lambda = cx(rng.random_range(-1.0..=1.0), 0.0);
    if spec.dim == 2 {
        let c = rng.random_range(0.5..=2.0);
        let h = ComplexMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 1) => cx(c, 0.0),
            (1, 0) => cx(0.0, 0.0),
            _ => lambda,
        });
        return Planted {
            h,
            spectrum: vec![lambda, lambda],
            similarity: ComplexMatrix::identity(2),
            kind: EnsembleKind::Defective,
        };
    }
    let mut spectrum = vec![lambda; 3];
    while spectrum.len() < spec.dim {
        let l = cx(rng.random_range(-1.0..=1.0), 0.0);
        if spectrum.iter().all(|m| (l - m).norm() >= 0.1) {
            spectrum.push(l);
        }
    }
    let j = ComplexMatrix::from_fn(spec.dim, |i, k| {
        if i == k {
            spectrum[i]
        } else if k == i + 1 && k < 3 {
            cx(1.0, 0.0)
        } else {
            cx(0.0, 0.0)
        }
    });
    let u = random_unitary(&mut rng, spec.dim);
    let h = &(&u * &j) * &u.adjoint();
    Planted {
        h,
        spectrum,
        similarity: u,
        kind: EnsembleKind::Defective,
    }
}

fn rng_for(spec: &EnsembleSpec, kind: EnsembleKind) -> ChaCha8Rng {
    // distinct streams per kind for the same seed
    let salt = match kind {
        EnsembleKind::Quasi => 0x51,
        EnsembleKind::PseudoNonQuasi => 0x52,
        EnsembleKind::Hermitian => 0x53,
        EnsembleKind::Defective => 0x54,
    };
    ChaCha8Rng::seed_from_u64(spec.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ salt ^ ((spec.dim as u64) << 32))
}

fn gap_ok(vals: &[c64]) -> bool {
    vals.iter()
        .enumerate()
        .all(|(i, a)| vals[i + 1..].iter().all(|b| (a - b).norm() >= EIGENVALUE_GAP))
}

fn gaussian(rng: &mut ChaCha8Rng) -> c64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    cx(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

/// Complex Gaussian matrix, resampled until its condition number is at most `cap`.
pub(crate) fn random_similarity(rng: &mut ChaCha8Rng, dim: usize, cap: f64) -> ComplexMatrix {
    loop {
        let s = ComplexMatrix::from_fn(dim, |_, _| gaussian(rng));
        match s.cond() {
            Ok(c) if c <= cap => return s,
            _ => continue,
        }
    }
}

pub(crate) fn random_unitary(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    let g = Mat::<c64>::from_fn(dim, dim, |_, _| gaussian(rng));
    let qr = g.qr();
    let q = qr.compute_Q();
    let r = qr.R();
    // fix the phases of R's diagonal so Q is Haar distributed
    let q = Mat::from_fn(dim, dim, |i, j| {
        let d = r[(j, j)];
        if d.norm() == 0.0 {
            q[(i, j)]
        } else {
            q[(i, j)] * (d / d.norm())
        }
    });
    ComplexMatrix::from_mat(q).expect("finite unitary")
}
