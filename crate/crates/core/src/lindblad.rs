//! Zero-temperature master equation for the two cavity modes, quantum
//! regression for multi-time correlators, and the analytic squeezing spectra
//! it is checked against.
//!
//! Hamiltonians are in angular-frequency units (already divided by ħ). The
//! generator is
//!
//! ```text
//! L(ρ) = −i[H, ρ] + Σᵢ (γᵢ/2)(2aᵢρaᵢ† − aᵢ†aᵢρ − ρaᵢ†aᵢ)
//! ```

use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::cavity::ModeSet;
use crate::error::{Error, Result};
use crate::fockspace::{Cutoff, FockOperator, FockVector, Mode, SparseOperator};
use crate::series::SpectrumSeries;
use crate::vertexcat::{vertex_closed_form, Convention, CouplingSet, VertexKind};

const TRACE_DRIFT_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    pub cutoff: Cutoff,
    /// Row-major `dim × dim`.
    pub data: Vec<C64>,
}

impl DensityMatrix {
    pub fn pure(v: &FockVector) -> Self {
        let d = v.cutoff.dim();
        let mut data = vec![C64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for j in 0..d {
                data[i * d + j] = v.amps[i] * v.amps[j].conj();
            }
        }
        DensityMatrix { cutoff: v.cutoff, data }
    }

    pub fn vacuum(cutoff: Cutoff) -> Self {
        Self::pure(&FockVector::vacuum(cutoff))
    }

    pub fn dim(&self) -> usize {
        self.cutoff.dim()
    }

    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim() + j]
    }

    pub fn trace(&self) -> C64 {
        let d = self.dim();
        (0..d).map(|i| self.data[i * d + i]).sum()
    }

    /// `Tr[op · ρ]`.
    pub fn expect(&self, op: &SparseOperator) -> C64 {
        let d = self.dim();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..d {
            for k in op.row_ptr[i]..op.row_ptr[i + 1] {
                acc += op.vals[k] * self.data[op.cols[k] * d + i];
            }
        }
        acc
    }

    pub fn mean_number(&self, mode: Mode) -> f64 {
        let d = self.dim();
        (0..d)
            .map(|i| {
                let (n1, n2) = self.cutoff.state(i);
                let n = if mode == Mode::One { n1 } else { n2 };
                n as f64 * self.data[i * d + i].re
            })
            .sum()
    }

    pub fn population(&self, n1: usize, n2: usize) -> f64 {
        let i = self.cutoff.index(n1, n2);
        self.at(i, i).re
    }

    pub fn hermiticity_error(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.data[i * d + j] - self.data[j * d + i].conj()).norm());
            }
        }
        worst
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let d = self.dim();
        let m = DMatrix::from_fn(d, d, |i, j| 0.5 * (self.data[i * d + j] + self.data[j * d + i].conj()));
        m.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone)]
pub struct MasterConfig {
    /// Loss rate of each mode (1/s).
    pub gamma: [f64; 2],
    /// Hamiltonian in rad/s.
    pub hamiltonian: FockOperator,
    pub dt: f64,
    pub t_end: f64,
    /// Store every n-th state; 0 keeps only the final one.
    pub record_every: usize,
    /// Positivity is checked every n-th step (and at the end).
    pub check_every: usize,
}

impl MasterConfig {
    pub fn new(gamma: [f64; 2], hamiltonian: FockOperator, dt: f64, t_end: f64) -> Self {
        MasterConfig { gamma, hamiltonian, dt, t_end, record_every: 0, check_every: 200 }
    }

    pub fn validate(&self) -> Result<()> {
        for (i, g) in self.gamma.iter().enumerate() {
            if !(*g >= 0.0 && g.is_finite()) {
                return Err(Error::config(format!("lindblad.gamma_{} must be >= 0, got {g}", i + 1)));
            }
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::config("lindblad.dt must be positive"));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::config("lindblad.t_end must be >= 0"));
        }
        let scale = self.hamiltonian.matrix.iter().map(|x| x.norm()).fold(0.0, f64::max).max(1e-300);
        let herr = self.hamiltonian.hermiticity_error();
        if herr > 1e-12 * scale {
            return Err(Error::config(format!("Hamiltonian is not Hermitian (error {herr:e})")));
        }
        Ok(())
    }
}

/// Precomputed Lindblad generator.
#[derive(Debug, Clone)]
pub struct Generator {
    pub cutoff: Cutoff,
    dim: usize,
    h: SparseOperator,
    gamma: [f64; 2],
    occ: Vec<[f64; 2]>,
    up: Vec<[Option<usize>; 2]>,
}

impl Generator {
    pub fn new(cfg: &MasterConfig) -> Self {
        let cutoff = cfg.hamiltonian.cutoff;
        let dim = cutoff.dim();
        let mut occ = Vec::with_capacity(dim);
        let mut up = Vec::with_capacity(dim);
        for (n1, n2) in cutoff.states() {
            occ.push([n1 as f64, n2 as f64]);
            up.push([
                (n1 < cutoff.n1_max).then(|| cutoff.index(n1 + 1, n2)),
                (n2 < cutoff.n2_max).then(|| cutoff.index(n1, n2 + 1)),
            ]);
        }
        Generator { cutoff, dim, h: cfg.hamiltonian.to_sparse(), gamma: cfg.gamma, occ, up }
    }

    /// `out = L(rho)`.
    pub fn apply(&self, rho: &[C64], out: &mut [C64]) {
        let d = self.dim;
        let h = &self.h;
        let minus_i = C64::new(0.0, -1.0);
        out.par_chunks_mut(d).enumerate().for_each(|(j, row)| {
            for x in row.iter_mut() {
                *x = C64::new(0.0, 0.0);
            }
            // H ρ
            for k in h.row_ptr[j]..h.row_ptr[j + 1] {
                let hv = h.vals[k];
                let src = &rho[h.cols[k] * d..h.cols[k] * d + d];
                for (o, s) in row.iter_mut().zip(src) {
                    *o += hv * s;
                }
            }
            // − ρ H
            for m in 0..d {
                let r = rho[j * d + m];
                if r == C64::new(0.0, 0.0) {
                    continue;
                }
                for k in h.row_ptr[m]..h.row_ptr[m + 1] {
                    row[h.cols[k]] -= r * h.vals[k];
                }
            }
            for x in row.iter_mut() {
                *x *= minus_i;
            }
            for mode in 0..2 {
                let g = self.gamma[mode];
                if g == 0.0 {
                    continue;
                }
                let nj = self.occ[j][mode];
                let upj = self.up[j][mode];
                for (k, o) in row.iter_mut().enumerate() {
                    let nk = self.occ[k][mode];
                    let mut v = -0.5 * g * (nj + nk) * rho[j * d + k];
                    if let (Some(uj), Some(uk)) = (upj, self.up[k][mode]) {
                        v += g * ((nj + 1.0) * (nk + 1.0)).sqrt() * rho[uj * d + uk];
                    }
                    *o += v;
                }
            }
        });
    }

    /// One classical RK4 step of size `dt`.
    pub fn rk4_step(&self, rho: &mut [C64], dt: f64, scratch: &mut Rk4Scratch) {
        let n = rho.len();
        let Rk4Scratch { k, tmp, acc } = scratch;
        acc.copy_from_slice(rho);
        let stages = [(0.5, 1.0 / 6.0), (0.5, 1.0 / 3.0), (1.0, 1.0 / 3.0), (0.0, 1.0 / 6.0)];
        tmp.copy_from_slice(rho);
        for (s, &(next_c, w)) in stages.iter().enumerate() {
            self.apply(tmp, k);
            for i in 0..n {
                acc[i] += k[i] * (w * dt);
            }
            if s < 3 {
                for i in 0..n {
                    tmp[i] = rho[i] + k[i] * (next_c * dt);
                }
            }
        }
        rho.copy_from_slice(acc);
    }

    pub fn scratch(&self) -> Rk4Scratch {
        let n = self.dim * self.dim;
        Rk4Scratch {
            k: vec![C64::new(0.0, 0.0); n],
            tmp: vec![C64::new(0.0, 0.0); n],
            acc: vec![C64::new(0.0, 0.0); n],
        }
    }

    /// Evolves `rho` forward by `t` using steps no longer than `dt`.
    pub fn propagate(&self, rho: &mut [C64], t: f64, dt: f64, scratch: &mut Rk4Scratch) {
        if t <= 0.0 {
            return;
        }
        let steps = (t / dt - 1e-9).ceil().max(1.0) as usize;
        let h = t / steps as f64;
        for _ in 0..steps {
            self.rk4_step(rho, h, scratch);
        }
    }

    /// Frobenius norm of `L(rho)`.
    pub fn residual(&self, rho: &DensityMatrix) -> f64 {
        let mut out = vec![C64::new(0.0, 0.0); rho.data.len()];
        self.apply(&rho.data, &mut out);
        out.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }
}

pub struct Rk4Scratch {
    k: Vec<C64>,
    tmp: Vec<C64>,
    acc: Vec<C64>,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    pub max_trace_drift: f64,
    pub max_hermiticity_error: f64,
    pub min_eigenvalue: f64,
}

impl Trajectory {
    pub fn last(&self) -> &DensityMatrix {
        self.states.last().expect("trajectory holds at least the initial state")
    }
}

/// Fixed-step RK4 integration from `rho0` to `cfg.t_end`.
pub fn evolve(rho0: &DensityMatrix, cfg: &MasterConfig) -> Result<Trajectory> {
    cfg.validate()?;
    if rho0.cutoff != cfg.hamiltonian.cutoff {
        return Err(Error::domain("initial state and Hamiltonian use different cutoffs"));
    }
    let gen = Generator::new(cfg);
    let mut scratch = gen.scratch();
    let steps = (cfg.t_end / cfg.dt).round() as usize;
    let mut rho = rho0.data.clone();
    let tr0 = rho0.trace();
    let mut traj = Trajectory {
        times: vec![0.0],
        states: vec![rho0.clone()],
        max_trace_drift: 0.0,
        max_hermiticity_error: rho0.hermiticity_error(),
        min_eigenvalue: rho0.min_eigenvalue(),
    };
    for s in 1..=steps {
        gen.rk4_step(&mut rho, cfg.dt, &mut scratch);
        let dm = DensityMatrix { cutoff: rho0.cutoff, data: rho.clone() };
        let drift = (dm.trace() - tr0).norm();
        traj.max_trace_drift = traj.max_trace_drift.max(drift);
        if !drift.is_finite() || drift > TRACE_DRIFT_LIMIT {
            return Err(Error::numerical(format!(
                "trace drifted by {drift:e} at t = {:e} s; reduce lindblad.dt (now {:e} s)",
                s as f64 * cfg.dt,
                cfg.dt
            )));
        }
        let check = cfg.check_every > 0 && s % cfg.check_every == 0;
        if check || s == steps {
            traj.max_hermiticity_error = traj.max_hermiticity_error.max(dm.hermiticity_error());
            traj.min_eigenvalue = traj.min_eigenvalue.min(dm.min_eigenvalue());
        }
        if (cfg.record_every > 0 && s % cfg.record_every == 0) || s == steps {
            traj.times.push(s as f64 * cfg.dt);
            traj.states.push(dm);
        }
    }
    Ok(traj)
}

/// Long-time state with the norm of `L(ρ)` as a stationarity measure.
#[derive(Debug, Clone)]
pub struct SteadyState {
    pub rho: DensityMatrix,
    pub residual: f64,
    /// Set when the residual exceeds the requested tolerance.
    pub warning: Option<String>,
}

pub fn steady_state(rho0: &DensityMatrix, cfg: &MasterConfig, tol: f64) -> Result<SteadyState> {
    let traj = evolve(rho0, cfg)?;
    let rho = traj.last().clone();
    let residual = Generator::new(cfg).residual(&rho);
    let warning = (residual > tol).then(|| format!("state is not stationary: |L(rho)| = {residual:e}"));
    Ok(SteadyState { rho, residual, warning })
}

/// Side on which an operator acts in the regression chain: annihilators
/// multiply from the left, creators from the right, which produces time-
/// and normally-ordered expectation values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone)]
pub struct RegressionEvent {
    pub time: f64,
    pub op: SparseOperator,
    pub side: Side,
}

/// `op·ρ` or `ρ·op` on a row-major density matrix.
pub fn apply_side(op: &SparseOperator, side: Side, rho: &[C64], d: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); d * d];
    match side {
        Side::Left => {
            for j in 0..d {
                for k in op.row_ptr[j]..op.row_ptr[j + 1] {
                    let v = op.vals[k];
                    let m = op.cols[k];
                    for c in 0..d {
                        out[j * d + c] += v * rho[m * d + c];
                    }
                }
            }
        }
        Side::Right => {
            for m in 0..d {
                for k in op.row_ptr[m]..op.row_ptr[m + 1] {
                    let v = op.vals[k];
                    let c = op.cols[k];
                    for j in 0..d {
                        out[j * d + c] += rho[j * d + m] * v;
                    }
                }
            }
        }
    }
    out
}

/// Time-ordered expectation from the quantum regression theorem. Events
/// must be sorted by nondecreasing time; the state is `rho` at the first
/// event time.
pub fn regression_chain(
    rho: &DensityMatrix,
    events: &[RegressionEvent],
    gen: &Generator,
    dt: f64,
) -> Result<C64> {
    if events.windows(2).any(|w| w[1].time < w[0].time) {
        return Err(Error::domain("regression events must be ordered by time"));
    }
    let d = rho.dim();
    let mut state = rho.data.clone();
    let mut scratch = gen.scratch();
    let mut t = events.first().map_or(0.0, |e| e.time);
    for e in events {
        gen.propagate(&mut state, e.time - t, dt, &mut scratch);
        t = e.time;
        state = apply_side(&e.op, e.side, &state, d);
    }
    Ok((0..d).map(|i| state[i * d + i]).sum())
}

/// `⟨A(t+τ) B(t)⟩` for each `τ` in a nondecreasing, nonnegative grid.
pub fn two_time(
    rho_ss: &DensityMatrix,
    op_a: &FockOperator,
    op_b: &FockOperator,
    tau_grid: &[f64],
    cfg: &MasterConfig,
) -> Result<Vec<C64>> {
    cfg.validate()?;
    if tau_grid.iter().any(|t| *t < 0.0) || tau_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::domain("tau grid must be nonnegative and nondecreasing"));
    }
    let gen = Generator::new(cfg);
    let d = rho_ss.dim();
    let a = op_a.to_sparse();
    let mut state = apply_side(&op_b.to_sparse(), Side::Left, &rho_ss.data, d);
    let mut scratch = gen.scratch();
    let mut t = 0.0;
    let mut out = Vec::with_capacity(tau_grid.len());
    for &tau in tau_grid {
        gen.propagate(&mut state, tau - t, cfg.dt, &mut scratch);
        t = tau;
        out.push(DensityMatrix { cutoff: rho_ss.cutoff, data: state.clone() }.expect(&a));
    }
    Ok(out)
}

/// The four normally ordered ladder correlators of one mode from which
/// every quadrature correlator follows.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureBasis {
    pub tau: Vec<f64>,
    /// `⟨a(τ)a(0)⟩`
    pub aa: Vec<C64>,
    /// `⟨a†(τ)a(0)⟩`
    pub ad_a: Vec<C64>,
    /// `⟨a†(0)a(τ)⟩`
    pub a_ad: Vec<C64>,
    /// `⟨a†(0)a†(τ)⟩`
    pub adad: Vec<C64>,
    /// `⟨a⟩` in the state the basis was built from.
    pub mean_a: C64,
}

impl QuadratureBasis {
    /// Connected `⟨:ΔX_θ(τ) ΔX_θ(0):⟩` with `X_θ = e^{−iθ}a + e^{iθ}a†`.
    pub fn correlation(&self, theta: f64) -> Vec<C64> {
        let ph = C64::from_polar(1.0, -theta);
        let mean = ph * self.mean_a + ph.conj() * self.mean_a.conj();
        (0..self.tau.len())
            .map(|i| {
                ph * ph * self.aa[i] + self.ad_a[i] + self.a_ad[i] + ph.conj() * ph.conj() * self.adad[i]
                    - mean * mean
            })
            .collect()
    }
}

pub fn quadrature_basis(
    rho_ss: &DensityMatrix,
    mode: Mode,
    tau_grid: &[f64],
    cfg: &MasterConfig,
) -> Result<QuadratureBasis> {
    cfg.validate()?;
    if tau_grid.iter().any(|t| *t < 0.0) || tau_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::domain("tau grid must be nonnegative and nondecreasing"));
    }
    let cut = rho_ss.cutoff;
    let a = FockOperator::annihilate(mode, cut).to_sparse();
    let ad = FockOperator::create(mode, cut).to_sparse();
    let gen = Generator::new(cfg);
    let d = rho_ss.dim();
    let seeds = [
        (apply_side(&a, Side::Left, &rho_ss.data, d), &a),
        (apply_side(&a, Side::Left, &rho_ss.data, d), &ad),
        (apply_side(&ad, Side::Right, &rho_ss.data, d), &a),
        (apply_side(&ad, Side::Right, &rho_ss.data, d), &ad),
    ];
    let mut columns: Vec<Vec<C64>> = seeds
        .into_par_iter()
        .map(|(mut state, probe)| {
            let mut scratch = gen.scratch();
            let mut t = 0.0;
            let mut col = Vec::with_capacity(tau_grid.len());
            for &tau in tau_grid {
                gen.propagate(&mut state, tau - t, cfg.dt, &mut scratch);
                t = tau;
                col.push(DensityMatrix { cutoff: cut, data: state.clone() }.expect(probe));
            }
            col
        })
        .collect();
    let adad = columns.pop().expect("four columns");
    let a_ad = columns.pop().expect("four columns");
    let ad_a = columns.pop().expect("four columns");
    let aa = columns.pop().expect("four columns");
    Ok(QuadratureBasis { tau: tau_grid.to_vec(), aa, ad_a, a_ad, adad, mean_a: rho_ss.expect(&a) })
}

/// Time- and normally-ordered connected correlator `⟨:ΔX_θ(τ) ΔX_θ(0):⟩` of
/// one mode, sampled on `tau_grid`.
pub fn quadrature_correlation(
    rho_ss: &DensityMatrix,
    mode: Mode,
    theta: f64,
    tau_grid: &[f64],
    cfg: &MasterConfig,
) -> Result<Vec<C64>> {
    Ok(quadrature_basis(rho_ss, mode, tau_grid, cfg)?.correlation(theta))
}

/// `S(ω) = 1 + γ∫dτ C(τ)e^{−iωτ}` over the whole line, using
/// `C(−τ) = C(τ)*` and a trapezoid rule on the one-sided samples.
pub fn output_spectrum_value(corr: &[C64], dtau: f64, gamma: f64, omega: f64) -> f64 {
    let n = corr.len();
    let mut acc = C64::new(0.0, 0.0);
    for (i, c) in corr.iter().enumerate() {
        let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        acc += c * C64::from_polar(w, -omega * i as f64 * dtau);
    }
    1.0 + 2.0 * gamma * (acc * dtau).re
}

/// Output quadrature spectrum on a grid, vacuum level included.
pub fn output_spectrum(
    corr: &[C64],
    dtau: f64,
    theta: f64,
    gamma: f64,
    omega_grid: &[f64],
) -> Result<SpectrumSeries> {
    if corr.len() < 2 || !(dtau > 0.0) {
        return Err(Error::domain("correlation series needs at least two uniformly spaced samples"));
    }
    let re: Vec<f64> = omega_grid.par_iter().map(|&w| output_spectrum_value(corr, dtau, gamma, w)).collect();
    Ok(SpectrumSeries::one_dim("S_theta", omega_grid.to_vec(), re, vec![0.0; omega_grid.len()])?
        .with_meta("theta", theta)
        .with_meta("gamma", gamma)
        .with_meta("window", "rectangular")
        .with_meta("ordering", "normal, time-ordered; vacuum term included"))
}

/// Frequency `ω > 0` at which `f(ω) − 1` falls to half of `f(0) − 1`.
pub fn half_width(f: impl Fn(f64) -> f64, mut hi: f64) -> Result<f64> {
    let base = f(0.0) - 1.0;
    if base == 0.0 || !base.is_finite() {
        return Err(Error::domain("spectrum has no peak or dip at zero detuning"));
    }
    let target = 0.5 * base;
    let above = |w: f64| (f(w) - 1.0 - target) * base.signum() > 0.0;
    let mut lo = 0.0;
    let mut grow = 0;
    while above(hi) {
        lo = hi;
        hi *= 2.0;
        grow += 1;
        if grow > 60 {
            return Err(Error::numerical("half-width search did not bracket"));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if above(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticSpectra {
    pub omega: Vec<f64>,
    pub s1: Vec<f64>,
    pub s2: Vec<f64>,
    pub threshold_warning: bool,
}

/// Anti-squeezed (`s1`) and squeezed (`s2`) output spectra with the
/// numerator `2γ|λ|²` exactly as printed.
pub fn analytic_spectra(lambda_mag: f64, gamma: f64, center: f64, omega_grid: &[f64]) -> AnalyticSpectra {
    analytic_with(lambda_mag * lambda_mag, lambda_mag, gamma, center, omega_grid)
}

/// Same Lorentzians with the standard numerator `2γ|λ|`.
pub fn analytic_spectra_standard(lambda_mag: f64, gamma: f64, center: f64, omega_grid: &[f64]) -> AnalyticSpectra {
    analytic_with(lambda_mag, lambda_mag, gamma, center, omega_grid)
}

fn analytic_with(num: f64, lam: f64, gamma: f64, center: f64, omega_grid: &[f64]) -> AnalyticSpectra {
    let (k1, k2) = (0.5 * gamma - lam, 0.5 * gamma + lam);
    let s1 = omega_grid
        .iter()
        .map(|w| 1.0 + 2.0 * gamma * num / (k1 * k1 + (w - center).powi(2)))
        .collect();
    let s2 = omega_grid
        .iter()
        .map(|w| 1.0 - 2.0 * gamma * num / (k2 * k2 + (w - center).powi(2)))
        .collect();
    AnalyticSpectra { omega: omega_grid.to_vec(), s1, s2, threshold_warning: lam >= 0.5 * gamma }
}

/// Drift and noise matrices of the degenerate squeezer.
pub fn squeeze_drift_noise(gamma: f64, lambda: C64) -> (Matrix2<C64>, Matrix2<C64>) {
    let g = C64::new(0.5 * gamma, 0.0);
    let a = Matrix2::new(g, -lambda, -lambda.conj(), g);
    let b = Matrix2::new(lambda, C64::new(0.0, 0.0), C64::new(0.0, 0.0), lambda.conj());
    (a, b)
}

/// `S(ω) = (1/2π)(A + iω)⁻¹ B Bᵀ (Aᵀ − iω)⁻¹`.
pub fn spectrum_matrix(a: &Matrix2<C64>, b: &Matrix2<C64>, omega_grid: &[f64]) -> Result<Vec<Matrix2<C64>>> {
    let bbt = b * b.transpose();
    omega_grid
        .iter()
        .map(|&w| {
            let iw = Matrix2::identity() * C64::new(0.0, w);
            let left = (a + iw)
                .try_inverse()
                .ok_or_else(|| Error::numerical(format!("A + iω is singular at ω = {w}")))?;
            let right = (a.transpose() - iw)
                .try_inverse()
                .ok_or_else(|| Error::numerical(format!("Aᵀ − iω is singular at ω = {w}")))?;
            Ok(left * bbt * right / C64::new(2.0 * PI, 0.0))
        })
        .collect()
}

/// Degenerate squeezing Hamiltonian `(i/2)(λa†² − λ*a²)` on one mode (rad/s).
pub fn squeeze_hamiltonian(lambda: C64, mode: Mode, cutoff: Cutoff) -> FockOperator {
    let a = FockOperator::annihilate(mode, cutoff);
    let a2 = a.dot(&a);
    let ad2 = a2.adjoint();
    ad2.scale(lambda).sub(&a2.scale(lambda.conj())).scale(C64::new(0.0, 0.5))
}

/// Rotating-frame Hamiltonian assembled from the closed-form vertices,
/// multiplied by `scale` and divided by ħ.
pub fn vertex_hamiltonian(
    couplings: &CouplingSet,
    modes: &ModeSet,
    cutoff: Cutoff,
    convention: Convention,
    scale: f64,
) -> FockOperator {
    let mut h = FockOperator::zeros(cutoff);
    for kind in VertexKind::ALL {
        for (b1, b2) in cutoff.states() {
            if let Some(ket) = kind.ket_of((b1, b2)) {
                if cutoff.contains(ket.0, ket.1) {
                    let v = vertex_closed_form(kind, b1, b2, couplings, modes, convention).value;
                    h.matrix[[cutoff.index(b1, b2), cutoff.index(ket.0, ket.1)]] += v * (scale / couplings.hbar);
                }
            }
        }
    }
    h
}

/// Round-trip-loss reading of a mirror product: `γ = (c/L)(1 − r²)`.
pub fn gamma_from_mirror(c: f64, length: f64, r: f64) -> f64 {
    c / length * (1.0 - r * r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(n: usize) -> Cutoff {
        Cutoff::new(0, n).unwrap()
    }

    #[test]
    fn free_evolution_is_constant() {
        let cut = Cutoff::new(2, 2).unwrap();
        let v = FockVector::from_amps(cut, (0..9).map(|k| C64::new(1.0, 0.1 * k as f64)).collect())
            .unwrap()
            .normalized()
            .unwrap();
        let rho = DensityMatrix::pure(&v);
        let cfg = MasterConfig::new([0.0, 0.0], FockOperator::zeros(cut), 0.1, 5.0);
        let traj = evolve(&rho, &cfg).unwrap();
        assert_eq!(traj.last(), &rho);
    }

    #[test]
    fn one_photon_decay() {
        let cut = single(3);
        let gamma = 2.0;
        let rho = DensityMatrix::pure(&FockVector::basis(cut, 0, 1).unwrap());
        let mut cfg = MasterConfig::new([0.0, gamma], FockOperator::zeros(cut), 1.0 / (64.0 * gamma), 3.0 / gamma);
        cfg.record_every = 16;
        let traj = evolve(&rho, &cfg).unwrap();
        for (t, s) in traj.times.iter().zip(&traj.states) {
            let n = s.mean_number(Mode::Two);
            let exact = (-gamma * t).exp();
            assert!((n - exact).abs() <= 1e-6 * exact, "t={t} n={n} exact={exact}");
        }
        assert!(traj.max_trace_drift < 1e-12);
    }

    #[test]
    fn squeezer_reaches_finite_steady_state() {
        let cut = single(16);
        let gamma = 1.0;
        let h = squeeze_hamiltonian(C64::new(0.25, 0.0), Mode::Two, cut);
        let cfg = MasterConfig::new([0.0, gamma], h, 1.0 / 32.0, 40.0);
        let ss = steady_state(&DensityMatrix::vacuum(cut), &cfg, 1e-8).unwrap();
        assert!(ss.warning.is_none(), "{:?}", ss.warning);
        // linear theory: ⟨n⟩ = 2λ²/(γ² − 4λ²) with γ=1, λ=0.25 gives 1/6
        let n = ss.rho.mean_number(Mode::Two);
        assert!((n - 1.0 / 6.0).abs() < 1e-4, "n = {n}");
        assert!(ss.rho.min_eigenvalue() > -1e-8);
    }

    #[test]
    fn two_time_basics() {
        let cut = single(6);
        let h = squeeze_hamiltonian(C64::new(0.2, 0.0), Mode::Two, cut);
        let cfg = MasterConfig::new([0.0, 1.0], h, 1.0 / 32.0, 30.0);
        let ss = steady_state(&DensityMatrix::vacuum(cut), &cfg, 1e-6).unwrap();
        let id = FockOperator::identity(cut);
        let taus = [0.0, 0.5, 1.0, 4.0];
        for v in two_time(&ss.rho, &id, &id, &taus, &cfg).unwrap() {
            assert!((v - C64::new(1.0, 0.0)).norm() < 1e-10);
        }
        let n = FockOperator::number(Mode::Two, cut);
        let at0 = two_time(&ss.rho, &n, &n, &[0.0], &cfg).unwrap()[0];
        let direct = ss.rho.expect(&n.dot(&n).to_sparse());
        assert!((at0 - direct).norm() < 1e-14);
    }

    #[test]
    fn loss_only_regression_decays_at_half_rate() {
        let cut = single(4);
        let gamma = 1.5;
        // coherent-ish mixture: start from |1⟩ with loss; use the state at t as "stationary" input
        let v = FockVector::from_amps(
            cut,
            vec![C64::new(0.8, 0.0), C64::new(0.6, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)],
        )
        .unwrap();
        let rho = DensityMatrix::pure(&v);
        let cfg = MasterConfig::new([0.0, gamma], FockOperator::zeros(cut), 1.0 / 256.0, 1.0);
        let a = FockOperator::annihilate(Mode::Two, cut);
        let ad = FockOperator::create(Mode::Two, cut);
        let taus: Vec<f64> = (0..5).map(|k| 0.5 * k as f64).collect();
        let g = two_time(&rho, &ad, &a, &taus, &cfg).unwrap();
        for (t, v) in taus.iter().zip(&g) {
            let exact = 0.36 * (-gamma * t / 2.0).exp();
            assert!((v.re - exact).abs() < 1e-9, "{t}: {v} vs {exact}");
        }
    }

    #[test]
    fn analytic_values() {
        let s = analytic_spectra(0.25, 1.0, 0.0, &[0.0, 1e9]);
        assert!((s.s2[0] - (1.0 - 2.0 * 0.0625 / 0.5625)).abs() < 1e-15);
        assert!((s.s1[1] - 1.0).abs() < 1e-15 && (s.s2[1] - 1.0).abs() < 1e-15);
        let z = analytic_spectra(0.0, 1.0, 0.0, &[0.0, 0.3]);
        assert!(z.s1.iter().chain(&z.s2).all(|x| *x == 1.0));
        assert!(analytic_spectra(0.6, 1.0, 0.0, &[0.0]).threshold_warning);
    }

    #[test]
    fn spectrum_matrix_properties() {
        let (a, b) = squeeze_drift_noise(1.0, C64::new(0.0, 0.0));
        for m in spectrum_matrix(&a, &b, &[0.0, 1.0]).unwrap() {
            assert!(m.iter().all(|x| x.norm() == 0.0));
        }
        let lam = 0.3;
        let (a, b) = squeeze_drift_noise(1.0, C64::new(lam, 0.0));
        let grid = [0.0, 0.7, 3.0];
        for (w, m) in grid.iter().zip(spectrum_matrix(&a, &b, &grid).unwrap()) {
            assert!((m - m.adjoint()).norm() < 1e-14);
            // projections onto the drift eigenvectors are Lorentzians
            let e = nalgebra::Vector2::new(C64::new(1.0, 0.0), C64::new(1.0, 0.0)) / C64::new(2f64.sqrt(), 0.0);
            let p = (e.adjoint() * m * e)[(0, 0)].re;
            let k = 0.5 - lam;
            assert!((p - lam * lam / (2.0 * PI) / (k * k + w * w)).abs() < 1e-14);
        }
        let far = spectrum_matrix(&a, &b, &[1e3, 2e3]).unwrap();
        let ratio = far[0].norm() / far[1].norm();
        assert!((ratio - 4.0).abs() < 1e-3);
    }

    #[test]
    fn exponential_correlation_gives_lorentzian() {
        let gamma = 1.0;
        let dt = 1.0 / 512.0;
        let corr: Vec<C64> = (0..(60.0 / dt) as usize).map(|i| C64::new((-0.5 * i as f64 * dt).exp(), 0.0)).collect();
        for w in [0.0, 0.5, 2.0] {
            let s = output_spectrum_value(&corr, dt, gamma, w);
            let exact = 1.0 + 2.0 * gamma * 0.5 / (0.25 + w * w);
            assert!((s - exact).abs() < 1e-5, "{w}: {s} vs {exact}");
        }
        let hw = half_width(|w| output_spectrum_value(&corr, dt, gamma, w), 0.1).unwrap();
        assert!((hw - 0.5).abs() < 1e-4);
    }

    #[test]
    fn vertex_hamiltonian_is_hermitian() {
        let c = CouplingSet {
            chi2: 1e-12,
            chi4: 1e-21,
            eps0: 8.854e-12,
            eps: 2.0 * 8.854e-12,
            e_laser: C64::from_polar(1e6, 0.7),
            a_crys: 5e-10,
            hbar: 1.0546e-34,
            length: 1.0,
            c_medium: 1.5e8,
        };
        let m = ModeSet::new(3e15, 3e15, 1e12).unwrap();
        for conv in [Convention::Derivation, Convention::Summary, Convention::Operator] {
            let h = vertex_hamiltonian(&c, &m, Cutoff::new(8, 8).unwrap(), conv, 0.01);
            assert_eq!(h.hermiticity_error(), 0.0);
        }
    }

    #[test]
    fn gamma_map() {
        assert_eq!(gamma_from_mirror(3e8, 1.5, 0.0), 2e8);
        assert_eq!(gamma_from_mirror(3e8, 1.5, 1.0), 0.0);
    }
}
