//! Equivalence suites run over generated ensembles, and the Klein-Gordon
//! pipeline checks.
//!
//! The legs of each equivalence are evaluated independently: the metric
//! and antilinear-symmetry legs do not consult the tolerance-based pairing
//! of the spectrum, they build their candidate from a forced
//! nearest-conjugate matching and let the residual decide.

use faer::c64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kleingordon::{self, FourierGrid, KGState};
use crate::linalg::{cx, eig_full, vec_norm, ComplexMatrix, Spectrum};
use crate::models::{self, EnsembleKind, EnsembleSpec};
use crate::physical::{positive_norm_span, projector, restrict_to_physical};
use crate::pseudospec::{
    antilinear_residual, antilinear_symmetry, build_general_metric, build_positive_metric, classify, eta_inner,
    hermitize, pair_spectrum, spectrum_distance, verify_intertwining, ClassKind, MetricOperator, PairingMap,
    DEFAULT_REALITY_TOL, INTERTWINING_TOL,
};

/// Tolerance for the antilinear-symmetry, Hermiticity and spectrum legs.
pub const LEG_TOL: f64 = 1e-8;

/// Number of random vector pairs used to test Hermiticity in the `η₊` product.
pub const HERMITICITY_PAIRS: usize = 20;

/// Matches every eigenvalue either with itself (cost `2|Im λ|`) or with the
/// closest conjugate partner (cost `|λ_j − conj(λ_i)|`), greedily by cost.
pub fn forced_pairing(vals: &[c64]) -> PairingMap {
    let n = vals.len();
    let mut options: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..n {
        options.push((2.0 * vals[i].im.abs(), i, i));
        for j in (i + 1)..n {
            options.push(((vals[j] - vals[i].conj()).norm(), i, j));
        }
    }
    options.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut used = vec![false; n];
    let mut real_indices = Vec::new();
    let mut pairs = Vec::new();
    for (_, i, j) in options {
        if used[i] || used[j] {
            continue;
        }
        used[i] = true;
        used[j] = true;
        if i == j {
            real_indices.push(i);
        } else if vals[i].im >= vals[j].im {
            pairs.push((i, j));
        } else {
            pairs.push((j, i));
        }
    }
    real_indices.sort();
    pairs.sort();
    PairingMap {
        real_indices,
        pairs,
        tol: f64::INFINITY,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PseudoLegs {
    /// Spectrum closed under conjugation within tolerance.
    pub paired: bool,
    /// A metric in `E(H)` was constructed.
    pub metric: bool,
    /// An invertible antilinear symmetry was constructed.
    pub symmetry: bool,
    pub metric_residual: Option<f64>,
    pub symmetry_residual: Option<f64>,
}

impl PseudoLegs {
    pub fn agree(&self) -> bool {
        self.paired == self.metric && self.metric == self.symmetry
    }
}

/// Evaluates the three pseudo-Hermiticity legs on a diagonalizable spectrum.
pub fn pseudo_legs(h: &ComplexMatrix, s: &Spectrum) -> PseudoLegs {
    let paired = pair_spectrum(s, DEFAULT_REALITY_TOL).is_ok();
    let forced = forced_pairing(s.eigenvalues());

    let signs = vec![1i8; forced.real_indices.len()];
    let metric_residual = build_general_metric(s, &forced, &signs)
        .ok()
        .map(|eta| verify_intertwining(h, &eta));
    let symmetry_residual = antilinear_symmetry(s, &forced)
        .ok()
        .map(|tau| antilinear_residual(h, &tau));
    PseudoLegs {
        paired,
        metric: metric_residual.is_some_and(|r| r <= INTERTWINING_TOL),
        symmetry: symmetry_residual.is_some_and(|r| r <= LEG_TOL),
        metric_residual,
        symmetry_residual,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct QuasiLegs {
    /// Classified Hermitian or quasi-Hermitian.
    pub quasi: bool,
    /// A positive-definite metric was constructed.
    pub positive_metric: bool,
    /// `ρ H ρ⁻¹` is Hermitian with the spectrum of `H`.
    pub hermitized: bool,
    /// `H` is Hermitian in a positive-definite `⟨·,·⟩_η`.
    pub eta_hermitian: bool,
    /// The positive-metric construction failed with `NoPositiveMetric`.
    pub no_positive_metric_error: bool,
    pub hermiticity_residual: Option<f64>,
    pub spectrum_residual: Option<f64>,
    pub eta_hermiticity_residual: Option<f64>,
}

impl QuasiLegs {
    pub fn agree(&self) -> bool {
        self.quasi == self.positive_metric
            && self.positive_metric == self.hermitized
            && self.hermitized == self.eta_hermitian
    }
}

pub fn quasi_legs(h: &ComplexMatrix, s: &Spectrum, kind: ClassKind, seed: u64) -> QuasiLegs {
    let quasi = kind.is_quasi_hermitian();
    let positive = build_positive_metric(s);
    let no_positive_metric_error = matches!(positive, Err(Error::NoPositiveMetric));
    let positive_metric = positive.as_ref().is_ok_and(|m| m.is_positive_definite());

    // without a positive metric, fall back to the forced general metric
    let candidate: Option<MetricOperator> = match positive {
        Ok(m) => Some(m),
        Err(_) => {
            let forced = forced_pairing(s.eigenvalues());
            let signs = vec![1i8; forced.real_indices.len()];
            build_general_metric(s, &forced, &signs).ok()
        }
    };

    let (mut hermitized, mut hermiticity_residual, mut spectrum_residual) = (false, None, None);
    let (mut eta_hermitian, mut eta_hermiticity_residual) = (false, None);
    if let Some(eta) = &candidate {
        if let Ok(out) = hermitize(h, eta) {
            let hr = out.h.hermiticity_residual();
            let sr = eig_full(&out.h)
                .map(|e| spectrum_distance(s.eigenvalues(), e.eigenvalues()))
                .unwrap_or(f64::INFINITY);
            hermitized = hr <= LEG_TOL && sr <= LEG_TOL;
            hermiticity_residual = Some(hr);
            spectrum_residual = Some(sr);
        }
        let r = eta_hermiticity(h, eta, seed);
        eta_hermitian = eta.is_positive_definite() && r <= LEG_TOL;
        eta_hermiticity_residual = Some(r);
    }
    QuasiLegs {
        quasi,
        positive_metric,
        hermitized,
        eta_hermitian,
        no_positive_metric_error,
        hermiticity_residual,
        spectrum_residual,
        eta_hermiticity_residual,
    }
}

/// Worst relative violation of `⟨ψ, Hχ⟩_η = conj⟨χ, Hψ⟩_η` over
/// [`HERMITICITY_PAIRS`] random vector pairs.
pub fn eta_hermiticity(h: &ComplexMatrix, eta: &MetricOperator, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = h.dim();
    let scale = eta.matrix().norm() * h.norm();
    let mut worst = 0.0f64;
    for _ in 0..HERMITICITY_PAIRS {
        let psi = random_vector(&mut rng, n);
        let chi = random_vector(&mut rng, n);
        let lhs = eta_inner(eta, &psi, &h.apply(&chi));
        let rhs = eta_inner(eta, &chi, &h.apply(&psi)).conj();
        let denom = scale * vec_norm(&psi) * vec_norm(&chi);
        worst = worst.max((lhs - rhs).norm() / denom);
    }
    worst
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<c64> {
    (0..n)
        .map(|_| cx(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect()
}

/// Outcome for one generated matrix.
#[derive(Clone, Debug, Serialize)]
pub struct InstanceOutcome {
    pub index: usize,
    pub kind: &'static str,
    pub dim: usize,
    pub seed: u64,
    pub classification: &'static str,
    pub classification_matches: bool,
    pub skipped: bool,
    pub pseudo: Option<PseudoLegs>,
    pub quasi: Option<QuasiLegs>,
}

pub fn evaluate_instance(index: usize, spec: &EnsembleSpec) -> Result<InstanceOutcome> {
    let planted = models::generate(spec);
    let c = classify(&planted.h, DEFAULT_REALITY_TOL)?;
    let skipped = c.kind == ClassKind::NonDiagonalizable;
    let (pseudo, quasi) = if skipped {
        (None, None)
    } else {
        (
            Some(pseudo_legs(&planted.h, &c.spectrum)),
            Some(quasi_legs(&planted.h, &c.spectrum, c.kind, spec.seed ^ 0xA5A5)),
        )
    };
    Ok(InstanceOutcome {
        index,
        kind: spec.kind.as_str(),
        dim: spec.dim,
        seed: spec.seed,
        classification: c.kind.as_str(),
        classification_matches: c.kind == spec.kind.expected_class(),
        skipped,
        pseudo,
        quasi,
    })
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct LegCounts {
    pub pass: usize,
    pub fail: usize,
}

impl LegCounts {
    fn add(&mut self, ok: bool) {
        if ok {
            self.pass += 1;
        } else {
            self.fail += 1;
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct EnsembleReport {
    pub instances: usize,
    pub skipped: usize,
    pub classification_mismatches: usize,
    pub pseudo_paired: LegCounts,
    pub pseudo_metric: LegCounts,
    pub pseudo_symmetry: LegCounts,
    pub pseudo_disagreements: usize,
    pub quasi_classified: LegCounts,
    pub quasi_positive_metric: LegCounts,
    pub quasi_hermitized: LegCounts,
    pub quasi_eta_hermitian: LegCounts,
    pub quasi_disagreements: usize,
    /// pseudo_nonquasi instances whose positive-metric construction did
    /// not fail with `NoPositiveMetric`.
    pub no_positive_metric_violations: usize,
    pub worst_metric_residual: f64,
    pub worst_symmetry_residual: f64,
    pub worst_hermiticity_residual: f64,
    pub worst_spectrum_residual: f64,
    pub worst_eta_hermiticity_residual: f64,
    #[serde(skip)]
    pub outcomes: Vec<InstanceOutcome>,
}

impl EnsembleReport {
    pub fn passed(&self) -> bool {
        self.classification_mismatches == 0
            && self.pseudo_disagreements == 0
            && self.quasi_disagreements == 0
            && self.no_positive_metric_violations == 0
    }

    /// Instances that broke an equivalence or were misclassified.
    pub fn failures(&self) -> Vec<&InstanceOutcome> {
        self.outcomes
            .iter()
            .filter(|o| {
                !o.classification_matches
                    || o.pseudo.as_ref().is_some_and(|t| !t.agree())
                    || o.quasi.as_ref().is_some_and(|t| {
                        !t.agree() || (o.kind == EnsembleKind::PseudoNonQuasi.as_str() && !t.no_positive_metric_error)
                    })
            })
            .collect()
    }

    fn absorb(&mut self, o: InstanceOutcome) {
        self.instances += 1;
        if !o.classification_matches {
            self.classification_mismatches += 1;
        }
        if o.skipped {
            self.skipped += 1;
        }
        if let Some(t) = &o.pseudo {
            self.pseudo_paired.add(t.paired);
            self.pseudo_metric.add(t.metric);
            self.pseudo_symmetry.add(t.symmetry);
            if !t.agree() {
                self.pseudo_disagreements += 1;
            }
            if t.paired {
                self.worst_metric_residual = self
                    .worst_metric_residual
                    .max(t.metric_residual.unwrap_or(f64::INFINITY));
                self.worst_symmetry_residual = self
                    .worst_symmetry_residual
                    .max(t.symmetry_residual.unwrap_or(f64::INFINITY));
            }
        }
        if let Some(t) = &o.quasi {
            self.quasi_classified.add(t.quasi);
            self.quasi_positive_metric.add(t.positive_metric);
            self.quasi_hermitized.add(t.hermitized);
            self.quasi_eta_hermitian.add(t.eta_hermitian);
            if !t.agree() {
                self.quasi_disagreements += 1;
            }
            if o.kind == EnsembleKind::PseudoNonQuasi.as_str() && !t.no_positive_metric_error {
                self.no_positive_metric_violations += 1;
            }
            if t.quasi {
                let worst = |acc: f64, r: Option<f64>| acc.max(r.unwrap_or(f64::INFINITY));
                self.worst_hermiticity_residual = worst(self.worst_hermiticity_residual, t.hermiticity_residual);
                self.worst_spectrum_residual = worst(self.worst_spectrum_residual, t.spectrum_residual);
                self.worst_eta_hermiticity_residual =
                    worst(self.worst_eta_hermiticity_residual, t.eta_hermiticity_residual);
            }
        }
        self.outcomes.push(o);
    }
}

/// Instance `i` uses kind `kinds[i % kinds.len()]`, dimension
/// `dims[(i / kinds.len()) % dims.len()]` and seed `seed + i`.
pub fn ensemble_specs(kinds: &[EnsembleKind], count: usize, dims: &[usize], seed: u64) -> Vec<EnsembleSpec> {
    assert!(
        !kinds.is_empty() && !dims.is_empty(),
        "need at least one kind and one dimension"
    );
    (0..count)
        .map(|i| {
            let kind = kinds[i % kinds.len()];
            let dim = dims[(i / kinds.len()) % dims.len()];
            EnsembleSpec::new(kind, dim, seed.wrapping_add(i as u64))
        })
        .collect()
}

pub fn run_ensemble(specs: &[EnsembleSpec]) -> Result<EnsembleReport> {
    let mut report = EnsembleReport::default();
    for (i, spec) in specs.iter().enumerate() {
        report.absorb(evaluate_instance(i, spec)?);
    }
    Ok(report)
}

/// Thresholds the Klein-Gordon checks are held to.
pub const KG_SIGMA3_TOL: f64 = 1e-12;
pub const KG_CONSERVATION_TOL: f64 = 1e-10;
pub const KG_MODE_SUM_TOL: f64 = 1e-10;
pub const KG_PROJECTOR_TOL: f64 = 1e-10;

#[derive(Clone, Debug, Serialize)]
pub struct KgReport {
    pub n: usize,
    pub length: f64,
    pub mass: f64,
    pub mu: f64,
    pub t_final: f64,
    pub samples: usize,
    pub sigma3_intertwining: f64,
    /// Largest `|(ψ,ψ)_t − (ψ,ψ)_0| / (ψ,ψ)_0` over samples and times.
    pub pd_drift: f64,
    /// Largest `|⟨ψ,ψ⟩_t − ⟨ψ,ψ⟩_0| / (2 Σ ω_k (|a_k|² + |b_k|²))`.
    pub kg_drift: f64,
    /// Smallest `(ψ,ψ) / Σ(|a_k|² + |b_k|²)` over the samples.
    pub pd_min_ratio: f64,
    /// Largest relative gap between the lattice sum and the mode sum.
    pub mode_sum_error: f64,
    pub indefinite_physical_dim: usize,
    pub pseudo_physical_dim: usize,
    /// `‖P_{+norm} − P_{+energy}‖`.
    pub positive_energy_projector_gap: f64,
}

impl KgReport {
    pub fn passed(&self) -> bool {
        self.sigma3_intertwining <= KG_SIGMA3_TOL
            && self.pd_drift <= KG_CONSERVATION_TOL
            && self.kg_drift <= KG_CONSERVATION_TOL
            && self.pd_min_ratio > 0.0
            && self.mode_sum_error <= KG_MODE_SUM_TOL
            && self.indefinite_physical_dim == self.n
            && self.pseudo_physical_dim == 2 * self.n
            && self.positive_energy_projector_gap <= KG_PROJECTOR_TOL
    }
}

/// Dimensions of the two physical spaces of the two-component Hamiltonian
/// and the gap between the positive-norm span and the positive-energy span.
#[derive(Clone, Debug)]
pub struct SectorContrast {
    pub indefinite_dim: usize,
    pub pseudo_dim: usize,
    pub projector_gap: f64,
}

pub fn sector_contrast(grid: &FourierGrid) -> Result<SectorContrast> {
    let h = kleingordon::fv_hamiltonian(grid);
    let s = eig_full(&h)?;
    let eta = kleingordon::sigma3_metric(grid);
    let positive_norm = positive_norm_span(&s, &eta);
    let energy_basis = kleingordon::positive_energy_basis(grid);
    let gap = (&projector(h.dim(), &positive_norm) - &projector(h.dim(), &energy_basis)).norm();
    let pseudo = restrict_to_physical(&h)?;
    Ok(SectorContrast {
        indefinite_dim: positive_norm.ncols(),
        pseudo_dim: pseudo.dim(),
        projector_gap: gap,
    })
}

pub fn kg_pipeline(grid: &FourierGrid, mu: f64, t_final: f64, samples: usize, seed: u64) -> Result<KgReport> {
    let h = kleingordon::fv_hamiltonian(grid);
    let sigma3 = verify_intertwining(&h, &kleingordon::sigma3_metric(grid));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let times: Vec<f64> = (0..=10).map(|i| t_final * i as f64 / 10.0).collect();
    let (mut pd_drift, mut kg_drift, mut pd_min, mut mode_err) = (0.0f64, 0.0f64, f64::INFINITY, 0.0f64);
    for _ in 0..samples {
        let psi = KGState::random(grid, &mut rng);
        let pd0 = kleingordon::pd_inner(&psi, &psi, mu)?;
        let kg0 = kleingordon::kg_inner(&psi, &psi)?;
        let kg_scale: f64 = psi
            .a()
            .iter()
            .zip(psi.b())
            .zip(grid.omega())
            .map(|((a, b), w)| 2.0 * w * (a.norm_sqr() + b.norm_sqr()))
            .sum();
        pd_min = pd_min.min(pd0.re / psi.amplitude_norm_sqr());
        for &t in &times {
            let later = kleingordon::evolve(&psi, t);
            let pd = kleingordon::pd_inner(&later, &later, mu)?;
            let kg = kleingordon::kg_inner(&later, &later)?;
            pd_drift = pd_drift.max((pd - pd0).norm() / pd0.norm());
            kg_drift = kg_drift.max((kg - kg0).norm() / kg_scale);
            let modes = kleingordon::pd_mode_sum(&later, &later, mu)?;
            mode_err = mode_err.max((pd - modes).norm() / modes.norm());
        }
    }
    let contrast = sector_contrast(grid)?;
    Ok(KgReport {
        n: grid.n(),
        length: grid.length(),
        mass: grid.mass(),
        mu,
        t_final,
        samples,
        sigma3_intertwining: sigma3,
        pd_drift,
        kg_drift,
        pd_min_ratio: pd_min,
        mode_sum_error: mode_err,
        indefinite_physical_dim: contrast.indefinite_dim,
        pseudo_physical_dim: contrast.pseudo_dim,
        positive_energy_projector_gap: contrast.projector_gap,
    })
}
