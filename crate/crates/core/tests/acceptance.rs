//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::f64::consts::PI;
use std::time::Instant;

use pseudoherm::kleingordon::{self, make_grid, FourierGrid, KGState};
use pseudoherm::models::{self, pt2x2, EnsembleKind, EnsembleSpec};
use pseudoherm::pseudospec::spectrum_distance;
use pseudoherm::suite::{self, ensemble_specs, forced_pairing, pseudo_legs, run_ensemble};
use pseudoherm::{
    build_general_metric, build_positive_metric, c64, classify, eig_full, transform_metric, verify_intertwining,
    ClassKind, ComplexMatrix,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MIXED: [EnsembleKind; 3] = [
    EnsembleKind::Quasi,
    EnsembleKind::PseudoNonQuasi,
    EnsembleKind::Hermitian,
];
const DIMS: [usize; 7] = [2, 3, 4, 5, 6, 7, 8];
const SEED: u64 = 9_001;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn criterion_pseudo() -> Outcome {
    let specs = ensemble_specs(&MIXED, 500, &DIMS, SEED);
    let r = run_ensemble(&specs).expect("ensemble runs");
    // generic complex matrices as controls where all three legs must fail
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut control_disagree = 0;
    let mut control_paired = 0;
    for i in 0..60 {
        let n = DIMS[i % DIMS.len()];
        let h =
            ComplexMatrix::from_rows(&(0..n).map(|_| suite::random_vector(&mut rng, n)).collect::<Vec<_>>()).unwrap();
        let legs = pseudo_legs(&h, &eig_full(&h).unwrap());
        control_paired += legs.paired as usize;
        control_disagree += !legs.agree() as usize;
    }
    let pass = r.instances == 500
        && r.skipped == 0
        && r.pseudo_disagreements == 0
        && r.pseudo_paired.pass == 500
        && r.worst_metric_residual <= 1e-8
        && r.worst_symmetry_residual <= 1e-8
        && control_disagree == 0
        && control_paired == 0;
    outcome(
        pass,
        format!(
            "500 instances, disagreements {}, worst metric {:.2e}, worst symmetry {:.2e}; 60 generic controls, disagreements {}",
            r.pseudo_disagreements, r.worst_metric_residual, r.worst_symmetry_residual, control_disagree
        ),
    )
}

fn criterion_quasi() -> Outcome {
    let specs = ensemble_specs(&MIXED, 500, &DIMS, SEED + 1);
    let r = run_ensemble(&specs).expect("ensemble runs");
    let mut contamination = 0;
    let mut min_eta_eig = f64::INFINITY;
    for (o, spec) in r.outcomes.iter().zip(&specs) {
        let t = o.quasi.as_ref().expect("diagonalizable");
        match spec.kind {
            EnsembleKind::PseudoNonQuasi => {
                if !t.no_positive_metric_error || t.positive_metric || t.quasi {
                    contamination += 1;
                }
            }
            _ => {
                if !(t.quasi && t.positive_metric && t.hermitized && t.eta_hermitian) {
                    contamination += 1;
                }
                let h = models::generate(spec).h;
                let eta = build_positive_metric(&eig_full(&h).unwrap()).unwrap();
                min_eta_eig = min_eta_eig.min(eta.eigenvalues()[0]);
            }
        }
    }
    let pass = contamination == 0
        && r.classification_mismatches == 0
        && min_eta_eig > 0.0
        && r.worst_hermiticity_residual <= 1e-8
        && r.worst_spectrum_residual <= 1e-8
        && r.worst_eta_hermiticity_residual <= 1e-8;
    outcome(
        pass,
        format!(
            "contamination {contamination}, min eta eigenvalue {min_eta_eig:.2e}, hermiticity {:.2e}, spectrum {:.2e}, eta-hermiticity {:.2e}",
            r.worst_hermiticity_residual, r.worst_spectrum_residual, r.worst_eta_hermiticity_residual
        ),
    )
}

fn criterion_pt_threshold() -> Outcome {
    let (r, theta, step) = (1.0, PI / 4.0, 1e-3);
    let threshold = r * theta.sin();
    let mut first_quasi = None;
    let mut oracle_violations = 0;
    let mut worst_spectrum = 0.0f64;
    for i in 0..=1500 {
        let s = i as f64 * step;
        let c = classify(&pt2x2(r, theta, s), 1e-9).unwrap();
        let disc = s * s - r * r * theta.sin().powi(2);
        let root = if disc >= 0.0 {
            c64::new(disc.sqrt(), 0.0)
        } else {
            c64::new(0.0, (-disc).sqrt())
        };
        let centre = c64::new(r * theta.cos(), 0.0);
        let exact = [centre - root, centre + root];
        if (s - threshold).abs() > step {
            worst_spectrum = worst_spectrum.max(spectrum_distance(&exact, c.spectrum.eigenvalues()));
            let expected = if s > threshold {
                ClassKind::QuasiHermitian
            } else {
                ClassKind::PseudoHermitianOnly
            };
            if c.kind != expected {
                oracle_violations += 1;
            }
        }
        if first_quasi.is_none() && c.kind == ClassKind::QuasiHermitian {
            first_quasi = Some(s);
        }
    }
    let s_star = first_quasi.unwrap_or(f64::NAN);
    let pass = (s_star - threshold).abs() <= step && oracle_violations == 0 && worst_spectrum <= 1e-8;
    outcome(
        pass,
        format!(
            "transition at s = {s_star:.4} (closed form {threshold:.5}), off-threshold mismatches {oracle_violations}, worst spectrum error {worst_spectrum:.2e}"
        ),
    )
}

fn criterion_metric_family() -> Outcome {
    let mut worst_transformed = 0.0f64;
    let mut worst_indefinite = 0.0f64;
    let mut failures = 0;
    for i in 0..100u64 {
        let dim = DIMS[i as usize % DIMS.len()];
        let h = models::generate(&EnsembleSpec::new(EnsembleKind::Quasi, dim, SEED + 1000 + i)).h;
        let s = eig_full(&h).unwrap();
        let eta = build_positive_metric(&s).unwrap();
        let a = &(&h * &h) + &ComplexMatrix::identity(dim);
        match transform_metric(&eta, &a, &h) {
            Ok(t) => {
                let res = verify_intertwining(&h, &t);
                worst_transformed = worst_transformed.max(res);
                if !(res <= 1e-8 && t.is_positive_definite()) {
                    failures += 1;
                }
            }
            Err(_) => failures += 1,
        }
        let pairing = forced_pairing(s.eigenvalues());
        let signs: Vec<i8> = (0..dim).map(|k| if k % 2 == 0 { 1 } else { -1 }).collect();
        match build_general_metric(&s, &pairing, &signs) {
            Ok(g) => {
                let res = verify_intertwining(&h, &g);
                worst_indefinite = worst_indefinite.max(res);
                let sig = g.signature();
                if !(res <= 1e-8 && sig.positive > 0 && sig.negative > 0) {
                    failures += 1;
                }
            }
            Err(_) => failures += 1,
        }
    }
    outcome(
        failures == 0,
        format!(
            "100 instances, failures {failures}, worst transformed {worst_transformed:.2e}, worst indefinite {worst_indefinite:.2e}"
        ),
    )
}

/// Lattice values of `Σ_k w_k f̂_k e^{ikx_j} / √L` by direct summation.
fn naive_synthesis(n: usize, length: f64, modes: &[c64], weight: &dyn Fn(f64) -> f64) -> Vec<c64> {
    (0..n)
        .map(|j| {
            let x = j as f64 * length / n as f64;
            (0..n)
                .map(|m| {
                    let signed = if m <= n / 2 { m as f64 } else { m as f64 - n as f64 };
                    let k = 2.0 * PI * signed / length;
                    modes[m] * weight(k) * c64::from_polar(1.0, k * x)
                })
                .sum::<c64>()
                / length.sqrt()
        })
        .collect()
}

/// Position-space quadrature of the positive-definite product, built from
/// the amplitudes alone.
fn pd_oracle(state: &KGState, mass: f64, mu: f64) -> f64 {
    let g = state.grid();
    let (n, length) = (g.n(), g.length());
    let omega = |k: f64| (k * k + mass * mass).sqrt();
    let (psi, dpsi) = state.modes();
    let f = naive_synthesis(n, length, &psi, &|_| 1.0);
    let df = naive_synthesis(n, length, &dpsi, &|_| 1.0);
    let d_half_f = naive_synthesis(n, length, &psi, &|k| omega(k));
    let d_mhalf_df = naive_synthesis(n, length, &dpsi, &|k| 1.0 / omega(k));
    let dx = length / n as f64;
    let sum: c64 = (0..n)
        .map(|j| f[j].conj() * d_half_f[j] + df[j].conj() * d_mhalf_df[j])
        .sum();
    sum.re * dx / (2.0 * mu)
}

fn criterion_kg(grid: &FourierGrid) -> Outcome {
    let (mass, mu) = (1.0, 1.0);
    let h = kleingordon::fv_hamiltonian(grid);
    let sigma3 = verify_intertwining(&h, &kleingordon::sigma3_metric(grid));
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut pd_drift, mut kg_drift, mut pd_min, mut oracle_err, mut mode_err) =
        (0.0f64, 0.0f64, f64::INFINITY, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let psi = KGState::random(grid, &mut rng);
        assert!(!psi.is_zero());
        let pd0 = kleingordon::pd_inner(&psi, &psi, mu).unwrap().re;
        let kg0 = kleingordon::kg_inner(&psi, &psi).unwrap().re;
        let kg_scale = kleingordon::pd_mode_sum(&psi, &psi, mu).unwrap().re * 2.0 * mu;
        pd_min = pd_min.min(pd0);
        for i in 0..=20 {
            let t = 10.0 * i as f64 / 20.0;
            let later = kleingordon::evolve(&psi, t);
            let pd = kleingordon::pd_inner(&later, &later, mu).unwrap();
            let kg = kleingordon::kg_inner(&later, &later).unwrap();
            pd_drift = pd_drift.max((pd.re - pd0).abs() / pd0);
            kg_drift = kg_drift.max((kg.re - kg0).abs() / kg_scale);
            let modes = kleingordon::pd_mode_sum(&later, &later, mu).unwrap().re;
            let oracle = pd_oracle(&later, mass, mu);
            oracle_err = oracle_err.max((pd.re - oracle).abs() / oracle);
            mode_err = mode_err.max((modes - oracle).abs() / oracle);
        }
    }

    let mut sign_failures = 0;
    for mode in 0..grid.n() {
        let pos = KGState::plane_wave(grid, mode, true);
        let neg = KGState::plane_wave(grid, mode, false);
        let null = KGState::new(grid.clone(), pos.a().to_vec(), pos.a().to_vec(), 0.0).unwrap();
        let kp = kleingordon::kg_inner(&pos, &pos).unwrap().re;
        let kn = kleingordon::kg_inner(&neg, &neg).unwrap().re;
        let k0 = kleingordon::kg_inner(&null, &null).unwrap().re;
        if !(kp > 0.0 && kn < 0.0 && k0.abs() <= 1e-12 * kp) {
            sign_failures += 1;
        }
    }

    let pass = sigma3 <= 1e-12
        && pd_drift <= 1e-10
        && kg_drift <= 1e-10
        && pd_min > 0.0
        && oracle_err <= 1e-10
        && mode_err <= 1e-10
        && sign_failures == 0;
    outcome(
        pass,
        format!(
            "sigma3 {sigma3:.2e}, pd drift {pd_drift:.2e}, kg drift {kg_drift:.2e}, pd min {pd_min:.3}, quadrature vs pd {oracle_err:.2e}, vs mode sum {mode_err:.2e}, sign failures {sign_failures}"
        ),
    )
}

fn criterion_sectors(grid: &FourierGrid) -> Outcome {
    let c = suite::sector_contrast(grid).unwrap();
    let n = grid.n();
    let pass = c.indefinite_dim == n && c.pseudo_dim == 2 * n && c.projector_gap <= 1e-10;
    outcome(
        pass,
        format!(
            "indefinite-metric dim {} (N = {n}), pseudo-Hermitian dim {}, projector gap {:.2e}",
            c.indefinite_dim, c.pseudo_dim, c.projector_gap
        ),
    )
}

fn main() {
    let grid = make_grid(64, 20.0 * PI, 1.0).unwrap();
    type Criterion<'a> = (&'a str, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Criterion> = vec![
        ("1 pseudo-Hermiticity equivalence", Box::new(criterion_pseudo)),
        ("2 quasi-Hermiticity equivalence", Box::new(criterion_quasi)),
        ("3 PT threshold", Box::new(criterion_pt_threshold)),
        ("4 metric family", Box::new(criterion_metric_family)),
        ("5 Klein-Gordon products", Box::new(|| criterion_kg(&grid))),
        ("6 sector contrast", Box::new(|| criterion_sectors(&grid))),
    ];
    let mut failed = 0;
    for (name, run) in &criteria {
        let start = Instant::now();
        let o = run();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {name}: {verdict} ({:.2} s) {}",
            start.elapsed().as_secs_f64(),
            o.detail
        );
        failed += !o.pass as usize;
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
