//! Free Klein-Gordon field `[∂_t² + D] ψ = 0`, `D = −∂_x² + m²`, on a
//! periodic 1D lattice with spectral discretization (`c = ħ = 1`).
//!
//! A solution is stored by its per-mode amplitudes,
//!
//! ```text
//! ψ(x, t) = L^{-1/2} Σ_k (a_k e^{−iω_k t} + b_k e^{+iω_k t}) e^{ikx},   ω_k = √(k² + m²),
//! ```
//!
//! so plane waves are orthonormal under the lattice quadrature `dx = L/N`
//! and time evolution is an exact phase rotation.

use std::f64::consts::PI;
use std::sync::Arc;

use faer::{c64, Mat};
use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{cx, ComplexMatrix};
use crate::pseudospec::MetricOperator;

/// Periodic lattice with its dispersion table.
#[derive(Clone, Debug)]
pub struct FourierGrid {
    n: usize,
    length: f64,
    mass: f64,
    k: Vec<f64>,
    omega: Vec<f64>,
}

impl PartialEq for FourierGrid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.length == other.length && self.mass == other.mass
    }
}

pub fn make_grid(n: usize, length: f64, mass: f64) -> Result<FourierGrid> {
    if n < 2 {
        return Err(Error::InvalidGrid(format!("need at least 2 sites, got {n}")));
    }
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::InvalidGrid(format!("period must be positive, got {length}")));
    }
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(Error::InvalidGrid(format!("mass must be positive, got {mass}")));
    }
    let k: Vec<f64> = (0..n).map(|j| 2.0 * PI * signed_index(j, n) as f64 / length).collect();
    let omega = k.iter().map(|k| (k * k + mass * mass).sqrt()).collect();
    Ok(FourierGrid {
        n,
        length,
        mass,
        k,
        omega,
    })
}

/// FFT ordering: `0, 1, …, ⌈N/2⌉−1, −⌊N/2⌋, …, −1`.
fn signed_index(j: usize, n: usize) -> i64 {
    if j < n.div_ceil(2) {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

impl FourierGrid {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    /// Momenta `2πj/L` in FFT ordering.
    pub fn k_values(&self) -> &[f64] {
        &self.k
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.n).map(|j| j as f64 * self.dx()).collect()
    }

    /// Lattice values of a per-mode field: `f(x_j) = L^{-1/2} Σ_k f̂_k e^{ikx_j}`.
    pub fn to_position(&self, modes: &[c64]) -> Vec<c64> {
        assert_eq!(modes.len(), self.n, "field length must match the grid");
        let mut buf = modes.to_vec();
        inverse_plan(self.n).process(&mut buf);
        let norm = self.length.sqrt().recip();
        buf.iter_mut().for_each(|z| *z *= norm);
        buf
    }

    /// Inverse of [`FourierGrid::to_position`].
    pub fn to_modes(&self, values: &[c64]) -> Vec<c64> {
        assert_eq!(values.len(), self.n, "field length must match the grid");
        let mut buf = values.to_vec();
        FftPlanner::new().plan_fft_forward(self.n).process(&mut buf);
        let norm = self.length.sqrt() / self.n as f64;
        buf.iter_mut().for_each(|z| *z *= norm);
        buf
    }
}

fn inverse_plan(n: usize) -> Arc<dyn Fft<f64>> {
    FftPlanner::new().plan_fft_inverse(n)
}

/// Multiplies mode `k` by `(k² + m²)^s`.
pub fn d_power(grid: &FourierGrid, s: f64, field: &[c64]) -> Vec<c64> {
    assert_eq!(field.len(), grid.n, "field length must match the grid");
    field
        .iter()
        .zip(&grid.omega)
        .map(|(f, w)| f * (w * w).powf(s))
        .collect()
}

/// Two-component Hamiltonian `(σ₃ + iσ₂) ⊗ p²/2m + m σ₃ ⊗ 1` in the Fourier
/// basis. Index `c·N + j` is component `c` of mode `j`.
pub fn fv_hamiltonian(grid: &FourierGrid) -> ComplexMatrix {
    let n = grid.n;
    let m = grid.mass;
    // σ₃ + iσ₂ = [[1, 1], [−1, −1]]
    let coupling = [[1.0, 1.0], [-1.0, -1.0]];
    let sigma3 = [1.0, -1.0];
    ComplexMatrix::from_fn(2 * n, |i, j| {
        let (ci, mi) = (i / n, i % n);
        let (cj, mj) = (j / n, j % n);
        if mi != mj {
            return cx(0.0, 0.0);
        }
        let kinetic = grid.k[mi] * grid.k[mi] / (2.0 * m);
        let mut v = coupling[ci][cj] * kinetic;
        if ci == cj {
            v += m * sigma3[ci];
        }
        cx(v, 0.0)
    })
}

/// Closed-form eigenvectors of [`fv_hamiltonian`] with eigenvalue `+ω_j`,
/// one column per mode: `(m + ω_j) e_j + (m − ω_j) e_{N+j}`, unnormalized.
pub fn positive_energy_basis(grid: &FourierGrid) -> Mat<c64> {
    let n = grid.n;
    let m = grid.mass;
    Mat::from_fn(2 * n, n, |i, j| {
        let w = grid.omega[j];
        match i {
            _ if i == j => cx(m + w, 0.0),
            _ if i == n + j => cx(m - w, 0.0),
            _ => cx(0.0, 0.0),
        }
    })
}

/// `σ₃ ⊗ 1_N`.
pub fn sigma3_metric(grid: &FourierGrid) -> MetricOperator {
    let n = grid.n;
    let diag: Vec<f64> = (0..2 * n).map(|i| if i < n { 1.0 } else { -1.0 }).collect();
    MetricOperator::new(ComplexMatrix::real_diag(&diag)).expect("σ₃ is a valid metric")
}

/// A Klein-Gordon solution given by positive- and negative-frequency
/// amplitudes, observed at time `t`.
#[derive(Clone, Debug)]
pub struct KGState {
    grid: FourierGrid,
    a: Vec<c64>,
    b: Vec<c64>,
    t: f64,
}

impl KGState {
    pub fn new(grid: FourierGrid, a: Vec<c64>, b: Vec<c64>, t: f64) -> Result<Self> {
        if a.len() != grid.n || b.len() != grid.n {
            return Err(Error::InvalidState(format!(
                "expected {} amplitudes per sector, got {} and {}",
                grid.n,
                a.len(),
                b.len()
            )));
        }
        let finite = a.iter().chain(&b).all(|z| z.re.is_finite() && z.im.is_finite());
        if !finite || !t.is_finite() {
            return Err(Error::InvalidState("non-finite amplitude or time".into()));
        }
        Ok(Self { grid, a, b, t })
    }

    pub fn zero(grid: &FourierGrid) -> Self {
        let n = grid.n;
        Self {
            grid: grid.clone(),
            a: vec![cx(0.0, 0.0); n],
            b: vec![cx(0.0, 0.0); n],
            t: 0.0,
        }
    }

    /// Single plane wave in one sector.
    pub fn plane_wave(grid: &FourierGrid, mode: usize, positive: bool) -> Self {
        let mut s = Self::zero(grid);
        if positive {
            s.a[mode] = cx(1.0, 0.0);
        } else {
            s.b[mode] = cx(1.0, 0.0);
        }
        s
    }

    /// Independent standard complex Gaussian amplitudes at `t = 0`.
    pub fn random<R: Rng + ?Sized>(grid: &FourierGrid, rng: &mut R) -> Self {
        let mut draw = || {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            cx(re, im)
        };
        let a = (0..grid.n).map(|_| draw()).collect();
        let b = (0..grid.n).map(|_| draw()).collect();
        Self {
            grid: grid.clone(),
            a,
            b,
            t: 0.0,
        }
    }

    pub fn grid(&self) -> &FourierGrid {
        &self.grid
    }

    pub fn a(&self) -> &[c64] {
        &self.a
    }

    pub fn b(&self) -> &[c64] {
        &self.b
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().chain(&self.b).all(|z| z.norm() == 0.0)
    }

    /// `Σ_k |a_k|² + |b_k|²`.
    pub fn amplitude_norm_sqr(&self) -> f64 {
        self.a.iter().chain(&self.b).map(|z| z.norm_sqr()).sum()
    }

    /// Per-mode field `ψ̂_k(t)` and its time derivative.
    pub fn modes(&self) -> (Vec<c64>, Vec<c64>) {
        let mut psi = Vec::with_capacity(self.grid.n);
        let mut dpsi = Vec::with_capacity(self.grid.n);
        for ((a, b), &w) in self.a.iter().zip(&self.b).zip(&self.grid.omega) {
            let fwd = a * c64::from_polar(1.0, -w * self.t);
            let bwd = b * c64::from_polar(1.0, w * self.t);
            psi.push(fwd + bwd);
            dpsi.push(cx(0.0, -w) * (fwd - bwd));
        }
        (psi, dpsi)
    }

    /// `ψ(x_j, t)` on the lattice.
    pub fn field(&self) -> Vec<c64> {
        self.grid.to_position(&self.modes().0)
    }

    /// `∂_t ψ(x_j, t)` on the lattice.
    pub fn time_derivative(&self) -> Vec<c64> {
        self.grid.to_position(&self.modes().1)
    }

    /// Two-component Fourier coefficients `(φ̂, χ̂)` with
    /// `φ = ½(ψ + (i/m)∂_tψ)`, `χ = ½(ψ − (i/m)∂_tψ)`; these solve
    /// `i ∂_t Φ = H Φ` for [`fv_hamiltonian`].
    pub fn two_component(&self) -> Vec<c64> {
        let (psi, dpsi) = self.modes();
        let im = cx(0.0, 1.0 / self.grid.mass);
        let upper = psi.iter().zip(&dpsi).map(|(p, d)| (p + im * d) * 0.5);
        let lower = psi.iter().zip(&dpsi).map(|(p, d)| (p - im * d) * 0.5);
        upper.chain(lower).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&KgStateFile::from(self)).expect("state serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: KgStateFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidState(format!("malformed state JSON: {e}")))?;
        file.into_state()
    }
}

/// On-disk form of a [`KGState`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KgStateFile {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "L")]
    pub length: f64,
    pub m: f64,
    pub t: f64,
    pub a_re: Vec<f64>,
    pub a_im: Vec<f64>,
    pub b_re: Vec<f64>,
    pub b_im: Vec<f64>,
}

impl From<&KGState> for KgStateFile {
    fn from(s: &KGState) -> Self {
        Self {
            n: s.grid.n,
            length: s.grid.length,
            m: s.grid.mass,
            t: s.t,
            a_re: s.a.iter().map(|z| z.re).collect(),
            a_im: s.a.iter().map(|z| z.im).collect(),
            b_re: s.b.iter().map(|z| z.re).collect(),
            b_im: s.b.iter().map(|z| z.im).collect(),
        }
    }
}

impl KgStateFile {
    pub fn into_state(self) -> Result<KGState> {
        let grid = make_grid(self.n, self.length, self.m)?;
        let lens = [self.a_re.len(), self.a_im.len(), self.b_re.len(), self.b_im.len()];
        if lens.iter().any(|&l| l != self.n) {
            return Err(Error::InvalidState(format!(
                "amplitude arrays must have length {}",
                self.n
            )));
        }
        let a = self.a_re.iter().zip(&self.a_im).map(|(&r, &i)| cx(r, i)).collect();
        let b = self.b_re.iter().zip(&self.b_im).map(|(&r, &i)| cx(r, i)).collect();
        KGState::new(grid, a, b, self.t)
    }
}

fn check_compatible(x: &KGState, y: &KGState) -> Result<()> {
    if x.grid != y.grid {
        return Err(Error::GridMismatch);
    }
    if x.t != y.t {
        return Err(Error::TimeMismatch(x.t, y.t));
    }
    Ok(())
}

/// Positive-definite inner product
/// `(1/2μ) ∫ [ψ₁* D^{1/2} ψ₂ + ∂_tψ₁* D^{−1/2} ∂_tψ₂] dx`,
/// evaluated as a lattice sum with `dx = L/N`.
pub fn pd_inner(x: &KGState, y: &KGState, mu: f64) -> Result<c64> {
    check_compatible(x, y)?;
    let g = &x.grid;
    let (psi2, dpsi2) = y.modes();
    let f1 = x.field();
    let d1 = x.time_derivative();
    let f2 = g.to_position(&d_power(g, 0.5, &psi2));
    let d2 = g.to_position(&d_power(g, -0.5, &dpsi2));
    let sum: c64 = (0..g.n).map(|j| f1[j].conj() * f2[j] + d1[j].conj() * d2[j]).sum();
    Ok(sum * (g.dx() / (2.0 * mu)))
}

/// Closed form of [`pd_inner`]: `(1/μ) Σ_k ω_k (a₁ₖ* a₂ₖ + b₁ₖ* b₂ₖ)`.
pub fn pd_mode_sum(x: &KGState, y: &KGState, mu: f64) -> Result<c64> {
    check_compatible(x, y)?;
    let sum: c64 = (0..x.grid.n)
        .map(|k| (x.a[k].conj() * y.a[k] + x.b[k].conj() * y.b[k]) * x.grid.omega[k])
        .sum();
    Ok(sum / mu)
}

/// Indefinite conserved current form `i ∫ [ψ₁* ∂_tψ₂ − (∂_tψ₁)* ψ₂] dx`.
pub fn kg_inner(x: &KGState, y: &KGState) -> Result<c64> {
    check_compatible(x, y)?;
    let (f1, d1) = (x.field(), x.time_derivative());
    let (f2, d2) = (y.field(), y.time_derivative());
    let sum: c64 = (0..x.grid.n).map(|j| f1[j].conj() * d2[j] - d1[j].conj() * f2[j]).sum();
    Ok(cx(0.0, x.grid.dx()) * sum)
}

/// Closed form of [`kg_inner`]: `2 Σ_k ω_k (a₁ₖ* a₂ₖ − b₁ₖ* b₂ₖ)`.
pub fn kg_mode_sum(x: &KGState, y: &KGState) -> Result<c64> {
    check_compatible(x, y)?;
    let sum: c64 = (0..x.grid.n)
        .map(|k| (x.a[k].conj() * y.a[k] - x.b[k].conj() * y.b[k]) * x.grid.omega[k])
        .sum();
    Ok(sum * 2.0)
}

/// Exact evolution by `dt`: amplitudes are constant, only `t` advances.
pub fn evolve(state: &KGState, dt: f64) -> KGState {
    KGState {
        t: state.t + dt,
        ..state.clone()
    }
}

/// Splits a state into its positive- and negative-frequency parts.
pub fn sector_decompose(state: &KGState) -> (KGState, KGState) {
    let zeros = vec![cx(0.0, 0.0); state.grid.n];
    let positive = KGState {
        b: zeros.clone(),
        ..state.clone()
    };
    let negative = KGState {
        a: zeros,
        ..state.clone()
    };
    (positive, negative)
}
