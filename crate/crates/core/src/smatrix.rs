//! Gaussian-averaged perturbative S-matrix as a sum over vertex paths.
//!
//! A path is stored chronologically: `vertices[0]` acts first on
//! `states[0]`. Its amplitude is
//!
//! ```text
//! (−2πi/ħ√(2π)δ)^N · Π V_k · K_L^{N−1}
//!   · ∫dz₁…dz_N K_C(z₁, z_entry) Π K_C(z_k, z_{k+1}) K_PD(z_N)
//! ```
//!
//! where each crystal leg carries the mode changed by the vertex that opens
//! it. The position integrals are independent Gauss-Legendre sums over the
//! crystal and are contracted leg by leg.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cavity::{CavityConfig, ModeLabel, ModeSet};
use crate::error::{Error, Result};
use crate::fockspace::{Cutoff, Mode};
use crate::quadrature::QuadratureGrid;
use crate::vertexcat::{vertex_from_ket, Convention, CouplingSet, VertexKind};

pub const HARD_ORDER_LIMIT: usize = 6;
pub const MAX_PATHS: usize = 10_000_000;

pub type State = (usize, usize);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagramPath {
    pub vertices: Vec<VertexKind>,
    pub states: Vec<State>,
    pub weight: Option<C64>,
}

impl DiagramPath {
    pub fn order(&self) -> usize {
        self.vertices.len()
    }

    pub fn initial(&self) -> State {
        self.states[0]
    }

    pub fn final_state(&self) -> State {
        *self.states.last().expect("a path always holds its initial state")
    }

    pub fn describe(&self) -> String {
        let kinds: Vec<&str> = self.vertices.iter().map(|k| k.label()).collect();
        format!("{:?} [{}]", self.initial(), kinds.join(" "))
    }
}

/// All vertex sequences of length `0..=order_max` from `initial` that stay
/// inside `cutoff`, shortest first and lexicographic in vertex kind within
/// each length.
pub fn enumerate_paths(initial: State, order_max: usize, cutoff: Cutoff) -> Result<Vec<DiagramPath>> {
    if order_max > HARD_ORDER_LIMIT {
        return Err(Error::Refused(format!(
            "order {order_max} exceeds the hard limit {HARD_ORDER_LIMIT}; path counts grow combinatorially"
        )));
    }
    if !cutoff.contains(initial.0, initial.1) {
        return Err(Error::domain(format!("initial state {initial:?} lies outside the cutoff")));
    }
    let mut all = vec![DiagramPath { vertices: Vec::new(), states: vec![initial], weight: None }];
    let mut frontier = all.clone();
    for _ in 0..order_max {
        let mut next = Vec::new();
        for p in &frontier {
            let cur = p.final_state();
            for kind in VertexKind::ALL {
                if let Some(b) = kind.bra_of(cur) {
                    if cutoff.contains(b.0, b.1) {
                        let mut q = p.clone();
                        q.vertices.push(kind);
                        q.states.push(b);
                        next.push(q);
                    }
                }
            }
            if all.len() + next.len() > MAX_PATHS {
                return Err(Error::Refused(format!("path count exceeds the guard {MAX_PATHS}")));
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(all)
}

/// `W(ΔE) = e^{−(|ΔE|−ω_R)²/2δ²} / (√(2π)δ)`.
pub fn gaussian_weight(delta_e: f64, modes: &ModeSet) -> f64 {
    let x = (delta_e.abs() - modes.omega_r) / modes.delta;
    (-0.5 * x * x).exp() / ((2.0 * PI).sqrt() * modes.delta)
}

/// Everything an amplitude evaluation needs besides the path.
#[derive(Debug, Clone)]
pub struct SMatrixContext {
    pub cavity: CavityConfig,
    pub couplings: CouplingSet,
    pub modes: ModeSet,
    pub grid: QuadratureGrid,
    pub convention: Convention,
    /// Multiply every vertex by the full Gaussian factor instead of taking
    /// the weight at its peak.
    pub full_gaussian: bool,
    /// Position where the incoming photons enter the crystal.
    pub z_entry: f64,
}

impl SMatrixContext {
    pub fn new(
        cavity: CavityConfig,
        couplings: CouplingSet,
        modes: ModeSet,
        m_points: usize,
        convention: Convention,
    ) -> Result<Self> {
        cavity.validate()?;
        couplings.validate()?;
        modes.validate()?;
        let grid = QuadratureGrid::new(m_points, cavity.crystal_length)?;
        let z_entry = -0.5 * cavity.crystal_length;
        Ok(SMatrixContext { cavity, couplings, modes, grid, convention, full_gaussian: false, z_entry })
    }

    /// Per-vertex factor `−2πi/(ħ√(2π)δ)`.
    pub fn vertex_prefactor(&self) -> C64 {
        C64::new(0.0, -2.0 * PI / (self.couplings.hbar * (2.0 * PI).sqrt() * self.modes.delta))
    }

    fn leg_label(kind: VertexKind) -> ModeLabel {
        match kind.changed_mode() {
            Mode::One => ModeLabel::One,
            Mode::Two => ModeLabel::Two,
        }
    }

    /// Position integral of the K-factor chain for the given vertex kinds.
    ///
    /// Crystal legs are convolutions with `e^{−γ|z−z'|}`; they use product
    /// weights from [`kink_weights`] on the same nodes.
    pub fn k_chain_integral(&self, kinds: &[VertexKind]) -> Result<C64> {
        if kinds.is_empty() {
            return Ok(C64::new(1.0, 0.0));
        }
        let ys = &self.grid.nodes;
        let ws = &self.grid.weights;
        let m = ys.len();
        let cav = &self.cavity;
        let first = Self::leg_label(kinds[0]);
        let w_first = self.modes.omega(first);
        let mut f: Vec<C64> =
            ys.iter().map(|&y| cav.k_crystal(first, w_first, y, self.z_entry)).collect::<Result<_>>()?;
        let mut cached: Vec<(f64, Vec<Vec<f64>>)> = Vec::new();
        for pair in kinds.windows(2) {
            let label = Self::leg_label(pair[0]);
            let omega = self.modes.omega(label);
            let g = cav.gamma_for(label);
            if !cached.iter().any(|(c, _)| *c == g) {
                cached.push((g, kink_weights(ys, 0.5 * cav.crystal_length, g)?));
            }
            let weights = &cached.iter().find(|(c, _)| *c == g).expect("cached").1;
            let mut next = vec![C64::new(0.0, 0.0); m];
            for (p, out) in next.iter_mut().enumerate() {
                let acc: C64 = f.iter().zip(&weights[p]).map(|(v, w)| v * w).sum();
                *out = acc * cav.k_crystal(label, omega, ys[p], ys[p])?;
            }
            f = next;
        }
        let last = Self::leg_label(*kinds.last().expect("nonempty"));
        let w_last = self.modes.omega(last);
        let mut total = C64::new(0.0, 0.0);
        for j in 0..m {
            total += f[j] * cav.k_to_detector(last, w_last, ys[j])? * ws[j];
        }
        Ok(total)
    }

    /// Amplitude of one path; order 0 gives 1.
    pub fn amplitude(&self, path: &DiagramPath) -> Result<C64> {
        let n = path.order();
        if n == 0 {
            return Ok(C64::new(1.0, 0.0));
        }
        let mut vertices = C64::new(1.0, 0.0);
        for (k, kind) in path.vertices.iter().enumerate() {
            let ket = path.states[k];
            if kind.bra_of(ket) != Some(path.states[k + 1]) {
                return Err(Error::domain(format!("inconsistent path {}", path.describe())));
            }
            vertices *= vertex_from_ket(*kind, ket, &self.couplings, &self.modes, self.convention);
        }
        if vertices == C64::new(0.0, 0.0) {
            return Ok(vertices);
        }
        let mut factor = self.vertex_prefactor().powi(n as i32) * vertices;
        if n > 1 {
            factor *= self.cavity.k_laser(self.modes.omega_l)?.powi(n as i32 - 1);
        }
        if self.full_gaussian {
            let g = gaussian_weight(self.modes.omega_l, &self.modes) * (2.0 * PI).sqrt() * self.modes.delta;
            factor *= g.powi(n as i32);
        }
        let value = factor * self.k_chain_integral(&path.vertices)?;
        if !value.is_finite() {
            return Err(Error::numerical(format!("non-finite amplitude on path {}", path.describe())));
        }
        Ok(value)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SMatrixMeta {
    pub order_max: usize,
    pub cutoff: Cutoff,
    pub convention: Convention,
    pub m_points: usize,
    pub full_gaussian: bool,
    pub path_count: usize,
    /// How the detector leg's mode is chosen.
    pub detector_leg: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SMatrixResult {
    pub initial: State,
    /// `per_order[N]` holds the order-N contribution per final state.
    pub per_order: Vec<BTreeMap<State, C64>>,
    pub totals: BTreeMap<State, C64>,
    /// `1 − Σ|amp|²`, evaluated without cancellation against the leading 1.
    pub norm_deficit: f64,
    pub meta: SMatrixMeta,
}

impl SMatrixResult {
    pub fn total(&self, state: State) -> C64 {
        self.totals.get(&state).copied().unwrap_or_default()
    }

    pub fn probability_sum(&self) -> f64 {
        self.totals.values().map(|a| a.norm_sqr()).sum()
    }
}

pub fn s_matrix(initial: State, order_max: usize, cutoff: Cutoff, ctx: &SMatrixContext) -> Result<SMatrixResult> {
    let paths = enumerate_paths(initial, order_max, cutoff)?;
    let weights: Vec<C64> = paths.par_iter().map(|p| ctx.amplitude(p)).collect::<Result<_>>()?;

    let mut per_order = vec![BTreeMap::new(); order_max + 1];
    let mut totals = BTreeMap::new();
    for (p, w) in paths.iter().zip(&weights) {
        *per_order[p.order()].entry(p.final_state()).or_insert(C64::new(0.0, 0.0)) += *w;
    }
    for level in &per_order {
        for (s, a) in level {
            *totals.entry(*s).or_insert(C64::new(0.0, 0.0)) += *a;
        }
    }
    let mut d = C64::new(0.0, 0.0);
    for level in per_order.iter().skip(1) {
        if let Some(a) = level.get(&initial) {
            d += *a;
        }
    }
    let others: f64 = totals.iter().filter(|(s, _)| **s != initial).map(|(_, a)| a.norm_sqr()).sum();
    let norm_deficit = -(2.0 * d.re + d.norm_sqr() + others);

    Ok(SMatrixResult {
        initial,
        per_order,
        totals,
        norm_deficit,
        meta: SMatrixMeta {
            order_max,
            cutoff,
            convention: ctx.convention,
            m_points: ctx.grid.m_points,
            full_gaussian: ctx.full_gaussian,
            path_count: paths.len(),
            detector_leg: "mode changed by the final vertex".to_string(),
        },
    })
}

/// `W[p][j] = ∫_{−h}^{h} L_j(z) e^{−γ|z−y_p|} dz` for the Lagrange basis `L_j`
/// on `nodes`, integrated separately on each side of the kink.
fn kink_weights(nodes: &[f64], h: f64, gamma: f64) -> Result<Vec<Vec<f64>>> {
    let m = nodes.len();
    let (xs, qw) = crate::quadrature::gauss_legendre(m + 24)?;
    let basis = |z: f64, j: usize| -> f64 {
        nodes.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, &y)| (z - y) / (nodes[j] - y)).product()
    };
    Ok(nodes
        .iter()
        .map(|&yp| {
            let mut row = vec![0.0; m];
            for (lo, hi) in [(-h, yp), (yp, h)] {
                let (mid, rad) = (0.5 * (lo + hi), 0.5 * (hi - lo));
                for (t, w) in xs.iter().zip(&qw) {
                    let z = mid + rad * t;
                    let k = (-gamma * (z - yp).abs()).exp() * w * rad;
                    for (j, r) in row.iter_mut().enumerate() {
                        *r += basis(z, j) * k;
                    }
                }
            }
            row
        })
        .collect())
}
