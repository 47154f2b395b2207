//! Photon statistics, the Husimi Q function and phase-shifted quadrature
//! correlators with their spectra.
//!
//! Photon statistics and the Q function read the amplitudes produced by
//! [`crate::smatrix`]. Multi-time correlators are evaluated on the
//! steady state of [`crate::lindblad`] by quantum regression and mapped to
//! output fields with a factor `√γᵢ` per field.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fockspace::{coherent_coefficients, Cutoff, FockOperator, FockVector, Mode, SparseOperator};
use crate::lindblad::{self, apply_side, DensityMatrix, Generator, MasterConfig, Side};
use crate::series::SpectrumSeries;
use crate::smatrix::{SMatrixResult, State};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhotonStats {
    pub mean_n1: f64,
    pub mean_n2: f64,
    /// `⟨n₁^m₁ n₂^m₂⟩` keyed by `(m₁, m₂)`.
    pub moments: BTreeMap<(u32, u32), f64>,
    /// The `Σ|amp|²` the probabilities were divided by.
    pub normalization: f64,
}

impl PhotonStats {
    pub fn moment(&self, m1: u32, m2: u32) -> Option<f64> {
        self.moments.get(&(m1, m2)).copied()
    }
}

/// Normalized final-state probabilities.
pub fn probabilities(amps: &BTreeMap<State, C64>) -> Result<(BTreeMap<State, f64>, f64)> {
    let norm: f64 = amps.values().map(|a| a.norm_sqr()).sum();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::domain("amplitudes have zero total weight"));
    }
    Ok((amps.iter().map(|(s, a)| (*s, a.norm_sqr() / norm)).collect(), norm))
}

pub fn photon_stats_from_amplitudes(amps: &BTreeMap<State, C64>, max_moment: u32) -> Result<PhotonStats> {
    let (p, normalization) = probabilities(amps)?;
    let mut moments = BTreeMap::new();
    for m1 in 0..=max_moment {
        for m2 in 0..=max_moment {
            let v = p
                .iter()
                .map(|(&(n1, n2), w)| w * (n1 as f64).powi(m1 as i32) * (n2 as f64).powi(m2 as i32))
                .sum();
            moments.insert((m1, m2), v);
        }
    }
    Ok(PhotonStats {
        mean_n1: first_moment(&p, 0),
        mean_n2: first_moment(&p, 1),
        moments,
        normalization,
    })
}

fn first_moment(p: &BTreeMap<State, f64>, which: usize) -> f64 {
    p.iter().map(|(&(a, b), w)| w * if which == 0 { a } else { b } as f64).sum()
}

pub fn photon_stats(result: &SMatrixResult, max_moment: u32) -> Result<PhotonStats> {
    photon_stats_from_amplitudes(&result.totals, max_moment)
}

/// `S|initial⟩` as a normalized vector on the result's cutoff.
pub fn final_state_vector(result: &SMatrixResult) -> Result<FockVector> {
    let cut = result.meta.cutoff;
    let mut v = FockVector::zeros(cut);
    for (&(n1, n2), a) in &result.totals {
        if cut.contains(n1, n2) {
            v.amps[cut.index(n1, n2)] = *a;
        }
    }
    v.normalized()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HusimiSpec {
    /// Half-width of each re/im axis.
    pub radius: f64,
    /// Points per axis (odd, so the origin is on the grid).
    pub points: usize,
}

impl Default for HusimiSpec {
    fn default() -> Self {
        HusimiSpec { radius: 4.0, points: 17 }
    }
}

impl HusimiSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::config("husimi.radius must be positive"));
        }
        if self.points < 2 || self.points > 101 {
            return Err(Error::config("husimi.points must lie in 2..=101"));
        }
        Ok(())
    }

    pub fn axis(&self) -> Vec<f64> {
        let h = 2.0 * self.radius / (self.points - 1) as f64;
        (0..self.points).map(|i| -self.radius + i as f64 * h).collect()
    }

    fn weights(&self) -> Vec<f64> {
        let h = 2.0 * self.radius / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| if i == 0 || i == self.points - 1 { 0.5 * h } else { h })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HusimiPoint {
    pub alpha1: (f64, f64),
    pub alpha2: (f64, f64),
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HusimiGrid {
    pub spec: HusimiSpec,
    /// Ordered with `Re α₁` slowest and `Im α₂` fastest.
    pub points: Vec<HusimiPoint>,
    pub integral_estimate: f64,
    pub warning: Option<String>,
}

/// `|⟨α₁,α₂|ψ⟩|²` on the product grid for a normalized `ψ`.
pub fn husimi_of_state(psi: &FockVector, spec: &HusimiSpec) -> Result<HusimiGrid> {
    spec.validate()?;
    let cut = psi.cutoff;
    let axis = spec.axis();
    let wts = spec.weights();
    let plane: Vec<(C64, f64)> = axis
        .iter()
        .zip(&wts)
        .flat_map(|(&x, &wx)| axis.iter().zip(&wts).map(move |(&y, &wy)| (C64::new(x, y), wx * wy)))
        .collect();
    let c2: Vec<Vec<C64>> = plane.iter().map(|(a, _)| coherent_coefficients(*a, cut.n2_max)).collect();

    let blocks: Vec<(Vec<HusimiPoint>, f64)> = plane
        .par_iter()
        .map(|&(a1, w1)| {
            let c1 = coherent_coefficients(a1, cut.n1_max);
            let mut row = vec![C64::new(0.0, 0.0); cut.n2_max + 1];
            for (n1, c) in c1.iter().enumerate() {
                for (n2, r) in row.iter_mut().enumerate() {
                    *r += c * psi.amps[cut.index(n1, n2)];
                }
            }
            let mut pts = Vec::with_capacity(plane.len());
            let mut acc = 0.0;
            for ((a2, w2), c) in plane.iter().zip(&c2) {
                let value: C64 = c.iter().zip(&row).map(|(x, y)| x * y).sum();
                let q = value.norm_sqr();
                acc += q * w1 * w2;
                pts.push(HusimiPoint { alpha1: (a1.re, a1.im), alpha2: (a2.re, a2.im), value: q });
            }
            (pts, acc)
        })
        .collect();

    let mut points = Vec::with_capacity(plane.len() * plane.len());
    let mut integral = 0.0;
    for (p, a) in blocks {
        points.extend(p);
        integral += a;
    }
    let reach = 2.0 * spec.radius * spec.radius;
    let n_min = cut.n1_max.min(cut.n2_max) as f64;
    let warning = (reach > n_min / 2.0).then(|| {
        format!(
            "grid reaches |alpha|^2 = {reach} beyond half the cutoff ({}, {}); values there are truncation-limited",
            cut.n1_max, cut.n2_max
        )
    });
    Ok(HusimiGrid { spec: *spec, points, integral_estimate: integral / (PI * PI), warning })
}

pub fn husimi(result: &SMatrixResult, spec: &HusimiSpec) -> Result<HusimiGrid> {
    husimi_of_state(&final_state_vector(result)?, spec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CorrelatorKind {
    C11,
    C22,
    C112,
    C121,
    C211,
}

impl CorrelatorKind {
    pub const ALL: [CorrelatorKind; 5] =
        [CorrelatorKind::C11, CorrelatorKind::C22, CorrelatorKind::C112, CorrelatorKind::C121, CorrelatorKind::C211];

    pub fn as_str(&self) -> &'static str {
        match self {
            CorrelatorKind::C11 => "C11",
            CorrelatorKind::C22 => "C22",
            CorrelatorKind::C112 => "C112",
            CorrelatorKind::C121 => "C121",
            CorrelatorKind::C211 => "C211",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::config(format!("spectra.kind: unknown correlator '{s}'")))
    }

    /// Modes of the fields, latest time first.
    pub fn modes(&self) -> &'static [Mode] {
        match self {
            CorrelatorKind::C11 => &[Mode::One, Mode::One],
            CorrelatorKind::C22 => &[Mode::Two, Mode::Two],
            CorrelatorKind::C112 => &[Mode::One, Mode::One, Mode::Two],
            CorrelatorKind::C121 => &[Mode::One, Mode::Two, Mode::One],
            CorrelatorKind::C211 => &[Mode::Two, Mode::One, Mode::One],
        }
    }

    pub fn is_three_point(&self) -> bool {
        self.modes().len() == 3
    }

    /// Checks absolute times given in field order (latest first) against
    /// the kind's ordering and returns the gaps `(τ, σ)`.
    pub fn gaps(&self, times: &[f64]) -> Result<(f64, f64)> {
        let n = self.modes().len();
        if times.len() != n {
            return Err(Error::domain(format!("{} takes {n} times, got {}", self.as_str(), times.len())));
        }
        if times.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::domain(format!(
                "{} requires nonincreasing times in field order, got {times:?}",
                self.as_str()
            )));
        }
        let tau = times[0] - times[1];
        let sigma = if n == 3 { times[1] - times[2] } else { 0.0 };
        Ok((tau, sigma))
    }
}

/// Steady state plus generator used for regression.
#[derive(Debug, Clone)]
pub struct CorrelatorSetup {
    pub cfg: MasterConfig,
    pub rho_ss: DensityMatrix,
    pub residual: f64,
    pub warning: Option<String>,
}

impl CorrelatorSetup {
    /// Evolves from vacuum for `cfg.t_end` and keeps the final state.
    pub fn steady(cfg: MasterConfig, tol: f64) -> Result<Self> {
        let ss = lindblad::steady_state(&DensityMatrix::vacuum(cfg.hamiltonian.cutoff), &cfg, tol)?;
        Ok(CorrelatorSetup { cfg, rho_ss: ss.rho, residual: ss.residual, warning: ss.warning })
    }

    pub fn from_state(cfg: MasterConfig, rho: DensityMatrix) -> Self {
        let residual = Generator::new(&cfg).residual(&rho);
        CorrelatorSetup { cfg, rho_ss: rho, residual, warning: None }
    }

    fn gamma(&self, m: Mode) -> f64 {
        self.cfg.gamma[if m == Mode::One { 0 } else { 1 }]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadCorrelator {
    pub kind: CorrelatorKind,
    pub theta: f64,
    /// Gap between the first and second fields.
    pub tau: Vec<f64>,
    /// Gap between the second and third fields; empty for two-point kinds.
    pub sigma: Vec<f64>,
    /// Row-major in `(τ, σ)`.
    pub values: Vec<C64>,
    /// `Π √γᵢ` already applied.
    pub output_scale: f64,
}

impl QuadCorrelator {
    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.values[i * self.sigma.len().max(1) + j]
    }
}

struct Ladder {
    a: SparseOperator,
    ad: SparseOperator,
}

fn ladders(cut: Cutoff) -> [Ladder; 2] {
    [Mode::One, Mode::Two].map(|m| Ladder {
        a: FockOperator::annihilate(m, cut).to_sparse(),
        ad: FockOperator::create(m, cut).to_sparse(),
    })
}

fn mode_ix(m: Mode) -> usize {
    if m == Mode::One {
        0
    } else {
        1
    }
}

/// Applies the normally ordered quadrature `e^{−iθ}a(·) + e^{iθ}(·)a†`.
fn apply_quadrature(l: &Ladder, theta: f64, rho: &[C64], d: usize) -> Vec<C64> {
    let left = apply_side(&l.a, Side::Left, rho, d);
    let right = apply_side(&l.ad, Side::Right, rho, d);
    let (p, q) = (C64::from_polar(1.0, -theta), C64::from_polar(1.0, theta));
    left.iter().zip(&right).map(|(x, y)| p * x + q * y).collect()
}

fn trace_quadrature(l: &Ladder, theta: f64, rho: &[C64], cut: Cutoff) -> C64 {
    let dm = DensityMatrix { cutoff: cut, data: rho.to_vec() };
    C64::from_polar(1.0, -theta) * dm.expect(&l.a) + C64::from_polar(1.0, theta) * dm.expect(&l.ad)
}

fn check_grid(name: &str, g: &[f64]) -> Result<()> {
    if g.is_empty() {
        return Err(Error::domain(format!("{name} grid is empty")));
    }
    if g.iter().any(|t| *t < 0.0 || !t.is_finite()) || g.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::domain(format!("{name} grid must be nonnegative and nondecreasing")));
    }
    Ok(())
}

/// Two-time normally ordered `⟨X_a(t+τ) X_b(t)⟩` for each `τ`, not connected.
fn pair_moments(setup: &CorrelatorSetup, late: Mode, early: Mode, theta: f64, taus: &[f64]) -> Vec<C64> {
    let cut = setup.rho_ss.cutoff;
    let d = cut.dim();
    let gen = Generator::new(&setup.cfg);
    let l = ladders(cut);
    let mut order: Vec<usize> = (0..taus.len()).collect();
    order.sort_by(|a, b| taus[*a].total_cmp(&taus[*b]));
    let mut state = apply_quadrature(&l[mode_ix(early)], theta, &setup.rho_ss.data, d);
    let mut scratch = gen.scratch();
    let mut t = 0.0;
    let mut out = vec![C64::new(0.0, 0.0); taus.len()];
    for i in order {
        gen.propagate(&mut state, taus[i] - t, setup.cfg.dt, &mut scratch);
        t = taus[i];
        out[i] = trace_quadrature(&l[mode_ix(late)], theta, &state, cut);
    }
    out
}

/// Connected, time- and normally-ordered quadrature correlator of the
/// output fields. `tau` separates the first two fields; `sigma` the last
/// two (ignored for two-point kinds).
pub fn quad_correlator(
    kind: CorrelatorKind,
    theta: f64,
    tau: &[f64],
    sigma: &[f64],
    setup: &CorrelatorSetup,
) -> Result<QuadCorrelator> {
    setup.cfg.validate()?;
    check_grid("tau", tau)?;
    let modes = kind.modes();
    let cut = setup.rho_ss.cutoff;
    let d = cut.dim();
    let l = ladders(cut);
    let mean: Vec<C64> = modes
        .iter()
        .map(|m| trace_quadrature(&l[mode_ix(*m)], theta, &setup.rho_ss.data, cut))
        .collect();
    let output_scale: f64 = modes.iter().map(|m| setup.gamma(*m).sqrt()).product();

    if !kind.is_three_point() {
        let raw = pair_moments(setup, modes[0], modes[1], theta, tau);
        let values = raw.iter().map(|v| (v - mean[0] * mean[1]) * output_scale).collect();
        return Ok(QuadCorrelator { kind, theta, tau: tau.to_vec(), sigma: Vec::new(), values, output_scale });
    }

    check_grid("sigma", sigma)?;
    let gen = Generator::new(&setup.cfg);
    let dt = setup.cfg.dt;
    // ρ after the earliest field, evolved to each σ
    let mut s3 = apply_quadrature(&l[mode_ix(modes[2])], theta, &setup.rho_ss.data, d);
    let mut scratch = gen.scratch();
    let mut t = 0.0;
    let mut seeds = Vec::with_capacity(sigma.len());
    for &s in sigma {
        gen.propagate(&mut s3, s - t, dt, &mut scratch);
        t = s;
        seeds.push(apply_quadrature(&l[mode_ix(modes[1])], theta, &s3, d));
    }
    let triple: Vec<Vec<C64>> = seeds
        .into_par_iter()
        .map(|mut state| {
            let mut scratch = gen.scratch();
            let mut t = 0.0;
            tau.iter()
                .map(|&x| {
                    gen.propagate(&mut state, x - t, dt, &mut scratch);
                    t = x;
                    trace_quadrature(&l[mode_ix(modes[0])], theta, &state, cut)
                })
                .collect()
        })
        .collect();
    let p01 = pair_moments(setup, modes[0], modes[1], theta, tau);
    let p12 = pair_moments(setup, modes[1], modes[2], theta, sigma);
    let mut values = Vec::with_capacity(tau.len() * sigma.len());
    for (i, &x) in tau.iter().enumerate() {
        let span: Vec<f64> = sigma.iter().map(|s| x + s).collect();
        let p02 = pair_moments(setup, modes[0], modes[2], theta, &span);
        for j in 0..sigma.len() {
            let c = triple[j][i] - mean[0] * p12[j] - mean[1] * p02[j] - mean[2] * p01[i]
                + 2.0 * mean[0] * mean[1] * mean[2];
            values.push(c * output_scale);
        }
    }
    Ok(QuadCorrelator { kind, theta, tau: tau.to_vec(), sigma: sigma.to_vec(), values, output_scale })
}

/// Same as [`quad_correlator`] at one set of absolute times, given latest
/// first in field order.
pub fn quad_correlator_at(kind: CorrelatorKind, theta: f64, times: &[f64], setup: &CorrelatorSetup) -> Result<C64> {
    let (tau, sigma) = kind.gaps(times)?;
    let c = quad_correlator(kind, theta, &[tau], &[sigma], setup)?;
    Ok(c.values[0])
}

fn uniform_step(name: &str, g: &[f64]) -> Result<f64> {
    if g.len() < 2 {
        return Err(Error::domain(format!("{name} grid needs at least two samples")));
    }
    let h = g[1] - g[0];
    let uneven = g.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h.abs().max(f64::MIN_POSITIVE));
    if !(h > 0.0) || uneven {
        return Err(Error::domain(format!("{name} grid is not uniformly sampled; resample before transforming")));
    }
    Ok(h)
}

fn trapezoid_weights(n: usize, h: f64) -> Vec<f64> {
    (0..n).map(|i| if i == 0 || i == n - 1 { 0.5 * h } else { h }).collect()
}

/// One-sided transform `∫₀^T dτ C(τ)e^{−iντ}` (and over `σ` with `e^{−iμ'σ}`
/// for three-point kinds; `mu` pairs with `τ`, `nu` with `σ`).
pub fn spectrum(corr: &QuadCorrelator, nu: &[f64], mu: &[f64]) -> Result<SpectrumSeries> {
    let ht = uniform_step("tau", &corr.tau)?;
    let wt = trapezoid_weights(corr.tau.len(), ht);
    let name = format!("S{}", &corr.kind.as_str()[1..]);
    if !corr.kind.is_three_point() {
        let vals: Vec<C64> = nu
            .par_iter()
            .map(|&v| {
                corr.tau.iter().zip(&wt).zip(&corr.values).map(|((t, w), c)| c * C64::from_polar(*w, -v * t)).sum()
            })
            .collect();
        return Ok(SpectrumSeries::one_dim(
            name,
            nu.to_vec(),
            vals.iter().map(|c| c.re).collect(),
            vals.iter().map(|c| c.im).collect(),
        )?
        .with_meta("theta", corr.theta)
        .with_meta("window", format!("rectangular, tau in [0, {:e}]", corr.tau.last().unwrap()))
        .with_meta("kernel", "exp(-i nu tau)"));
    }
    let hs = uniform_step("sigma", &corr.sigma)?;
    let ws = trapezoid_weights(corr.sigma.len(), hs);
    let ns = corr.sigma.len();
    let grid: Vec<(f64, f64)> = mu.iter().flat_map(|&m| nu.iter().map(move |&v| (m, v))).collect();
    let vals: Vec<C64> = grid
        .par_iter()
        .map(|&(m, v)| {
            let mut acc = C64::new(0.0, 0.0);
            for (i, (t, w1)) in corr.tau.iter().zip(&wt).enumerate() {
                let et = C64::from_polar(*w1, -m * t);
                let mut row = C64::new(0.0, 0.0);
                for (j, (s, w2)) in corr.sigma.iter().zip(&ws).enumerate() {
                    row += corr.values[i * ns + j] * C64::from_polar(*w2, -v * s);
                }
                acc += et * row;
            }
            acc
        })
        .collect();
    Ok(SpectrumSeries::two_dim(
        name,
        mu.to_vec(),
        nu.to_vec(),
        vals.iter().map(|c| c.re).collect(),
        vals.iter().map(|c| c.im).collect(),
    )?
    .with_meta("theta", corr.theta)
    .with_meta(
        "window",
        format!(
            "rectangular, tau in [0, {:e}], sigma in [0, {:e}]",
            corr.tau.last().unwrap(),
            corr.sigma.last().unwrap()
        ),
    )
    .with_meta("kernel", "exp(-i (mu tau + nu sigma))"))
}
