//! Generalized (k-photon) squeezing on a truncated single-mode space.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fockspace::{expm_apply_with, Cutoff, FockOperator, FockVector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSqueezeSpec {
    pub k: usize,
    pub z: C64,
    pub cutoff: usize,
    pub cutoff_ladder: Vec<usize>,
}

impl GenSqueezeSpec {
    pub fn validate(&self) -> Result<()> {
        if self.k < 1 {
            return Err(Error::config("genqueeze.k must be >= 1"));
        }
        if !self.z.is_finite() {
            return Err(Error::config("genqueeze.z must be finite"));
        }
        check_cutoff(self.k, self.cutoff)?;
        if self.cutoff_ladder.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::config("genqueeze.cutoff_ladder must be strictly increasing"));
        }
        for c in &self.cutoff_ladder {
            check_cutoff(self.k, *c)?;
        }
        Ok(())
    }
}

fn check_cutoff(k: usize, cutoff: usize) -> Result<()> {
    if cutoff < k {
        return Err(Error::domain(format!("cutoff {cutoff} is below k = {k}")));
    }
    Cutoff::single(cutoff)?;
    Ok(())
}

/// `√(n(n−1)…(n−k+1))`, the amplitude of `aᵏ|n⟩ ∝ |n−k⟩`.
fn lowering_coeffs(k: usize, n_max: usize) -> Vec<f64> {
    (0..=n_max)
        .map(|n| if n < k { 0.0 } else { (0..k).map(|j| ((n - j) as f64).sqrt()).product() })
        .collect()
}

/// Action of `p·L + q·L†` where `L|n⟩ = f[n]|n−k⟩`.
fn pair_apply(f: &[f64], k: usize, p: C64, q: C64, x: &[C64], y: &mut [C64]) {
    let n = x.len();
    for m in 0..n {
        let mut acc = C64::new(0.0, 0.0);
        if m + k < n {
            acc += p * f[m + k] * x[m + k];
        }
        if m >= k {
            acc += q * f[m] * x[m - k];
        }
        y[m] = acc;
    }
}

fn pair_norm(f: &[f64], p: C64, q: C64) -> f64 {
    let top = f.iter().cloned().fold(0.0, f64::max);
    (p.norm() + q.norm()) * top
}

fn vacuum(n_max: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); n_max + 1];
    v[0] = C64::new(1.0, 0.0);
    v
}

fn wrap(n_max: usize, amps: Vec<C64>) -> Result<FockVector> {
    FockVector::from_amps(Cutoff::single(n_max)?, amps)
}

/// `exp(z aᵏ − z* a†ᵏ)|0⟩`.
pub fn generalized_squeeze_state(k: usize, z: C64, cutoff: usize) -> Result<FockVector> {
    if k < 1 {
        return Err(Error::domain("k must be >= 1"));
    }
    check_cutoff(k, cutoff)?;
    let f = lowering_coeffs(k, cutoff);
    let (p, q) = (z, -z.conj());
    let amps = expm_apply_with(|x, y| pair_apply(&f, k, p, q, x, y), pair_norm(&f, p, q), &vacuum(cutoff), 1.0)?;
    wrap(cutoff, amps)
}

/// The non-unitary `exp(z aᵏ + z* a†ᵏ)|0⟩`, returned normalized together
/// with the natural log of its norm (the raw norm overflows at large
/// cutoffs for `k ≥ 3`).
pub fn literal_squeeze_state(k: usize, z: C64, cutoff: usize) -> Result<(FockVector, f64)> {
    if k < 1 {
        return Err(Error::domain("k must be >= 1"));
    }
    check_cutoff(k, cutoff)?;
    let f = lowering_coeffs(k, cutoff);
    let (p, q) = (z, z.conj());
    let norm = pair_norm(&f, p, q);
    let steps = (norm / 0.5).ceil().max(1.0) as usize;
    let h = 1.0 / steps as f64;
    let mut x = vacuum(cutoff);
    let mut log_norm = 0.0;
    for _ in 0..steps {
        x = expm_apply_with(|a, b| pair_apply(&f, k, p, q, a, b), norm, &x, h)?;
        let nrm = x.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(nrm > 0.0) || !nrm.is_finite() {
            return Err(Error::numerical("literal exponential lost its norm"));
        }
        log_norm += nrm.ln();
        x.iter_mut().for_each(|a| *a /= nrm);
    }
    Ok((wrap(cutoff, x)?, log_norm))
}

pub fn mean_number(v: &FockVector) -> f64 {
    let total = v.norm_sqr();
    v.amps.iter().enumerate().map(|(n, a)| n as f64 * a.norm_sqr()).sum::<f64>() / total
}

/// `⟨ψ|aᵐ|ψ⟩` for a single-mode vector.
pub fn lowering_moment(v: &FockVector, m: usize) -> C64 {
    let f = lowering_coeffs(m, v.amps.len() - 1);
    (m..v.amps.len()).map(|n| v.amps[n - m].conj() * f[n] * v.amps[n]).sum()
}

/// `|⟨a|b⟩|²` after padding the shorter vector with zeros.
pub fn fidelity(a: &FockVector, b: &FockVector) -> f64 {
    let s: C64 = a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y).sum();
    s.norm_sqr() / (a.norm_sqr() * b.norm_sqr())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderRow {
    pub cutoff: usize,
    /// Norm of the unitary-convention state.
    pub unitary_norm: f64,
    /// `⟨n⟩` of the unitary-convention state.
    pub mean_n: f64,
    /// `ln ‖exp(z aᵏ + z* a†ᵏ)|0⟩‖`.
    pub literal_log_norm: f64,
    /// `⟨n⟩` of the normalized literal state.
    pub literal_mean_n: f64,
    /// Fidelity of the unitary state with the next rung; `None` on the last.
    pub fidelity_to_next: Option<f64>,
}

/// Diagnostic table over `spec.cutoff_ladder`. Nothing here decides
/// whether the series converges.
pub fn convergence_report(spec: &GenSqueezeSpec) -> Result<Vec<LadderRow>> {
    spec.validate()?;
    let states: Vec<(FockVector, FockVector, f64)> = spec
        .cutoff_ladder
        .par_iter()
        .map(|&c| {
            let u = generalized_squeeze_state(spec.k, spec.z, c)?;
            let (l, ln) = literal_squeeze_state(spec.k, spec.z, c)?;
            Ok((u, l, ln))
        })
        .collect::<Result<_>>()?;
    Ok(states
        .iter()
        .enumerate()
        .map(|(i, (u, l, ln))| LadderRow {
            cutoff: spec.cutoff_ladder[i],
            unitary_norm: u.norm_sqr().sqrt(),
            mean_n: mean_number(u),
            literal_log_norm: *ln,
            literal_mean_n: mean_number(l),
            fidelity_to_next: states.get(i + 1).map(|(next, _, _)| fidelity(u, next)),
        })
        .collect())
}

/// `Â₍ₖ₎ = ([[n̂/k]] (n̂−k)!/n̂!)^{1/2} (â†)ᵏ`, so `Â₍ₖ₎|n⟩ = √(⌊n/k⌋+1)|n+k⟩`.
pub fn k_photon_operator(k: usize, cutoff: usize) -> Result<FockOperator> {
    if k < 1 {
        return Err(Error::domain("k must be >= 1"));
    }
    let cut = Cutoff::single(cutoff)?;
    let mut op = FockOperator::zeros(cut);
    for n in 0..=cutoff {
        if n + k <= cutoff {
            op.matrix[[n + k, n]] = C64::new(((n / k) as f64 + 1.0).sqrt(), 0.0);
        }
    }
    Ok(op)
}

/// `exp(zÂ₍ₖ₎† − z*Â₍ₖ₎)|0⟩`.
pub fn s_k_state(k: usize, z: C64, cutoff: usize) -> Result<FockVector> {
    let a = k_photon_operator(k, cutoff)?;
    check_cutoff(k, cutoff)?;
    let gen = a.adjoint().scale(z).sub(&a.scale(z.conj()));
    crate::fockspace::expm_apply(&gen, &FockVector::vacuum(a.cutoff), 1.0)
}
