//! Truncated two-mode number-state algebra.
//!
//! Basis states `|n₁, n₂⟩` are indexed row-major: `index = n₁·(n₂_max+1) + n₂`.
//! Ladder operators use hard truncation: `â†` maps the top state of a mode
//! to zero, so products are exact only on interior blocks.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on the basis dimension accepted by [`Cutoff::new`].
pub const MAX_DIM: usize = 1 << 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cutoff {
    pub n1_max: usize,
    pub n2_max: usize,
}

impl Default for Cutoff {
    fn default() -> Self {
        Cutoff { n1_max: 16, n2_max: 16 }
    }
}

impl Cutoff {
    pub fn new(n1_max: usize, n2_max: usize) -> Result<Self> {
        let c = Cutoff { n1_max, n2_max };
        c.validate()?;
        Ok(c)
    }

    /// Single-mode space, stored as mode 1 with `n₂_max = 0`.
    pub fn single(n_max: usize) -> Result<Self> {
        Self::new(n_max, 0)
    }

    pub fn validate(&self) -> Result<()> {
        let dim = (self.n1_max + 1)
            .checked_mul(self.n2_max + 1)
            .ok_or_else(|| Error::config("cutoff dimension overflows"))?;
        if dim > MAX_DIM {
            return Err(Error::config(format!(
                "cutoff ({}, {}) gives dimension {dim} above the limit {MAX_DIM}",
                self.n1_max, self.n2_max
            )));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        (self.n1_max + 1) * (self.n2_max + 1)
    }

    pub fn contains(&self, n1: usize, n2: usize) -> bool {
        n1 <= self.n1_max && n2 <= self.n2_max
    }

    pub fn index(&self, n1: usize, n2: usize) -> usize {
        debug_assert!(self.contains(n1, n2));
        n1 * (self.n2_max + 1) + n2
    }

    pub fn state(&self, index: usize) -> (usize, usize) {
        (index / (self.n2_max + 1), index % (self.n2_max + 1))
    }

    pub fn states(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.dim()).map(move |i| self.state(i))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    One,
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LadderKind {
    Create,
    Annihilate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FockVector {
    pub cutoff: Cutoff,
    pub amps: Vec<C64>,
}

impl FockVector {
    pub fn zeros(cutoff: Cutoff) -> Self {
        FockVector { cutoff, amps: vec![C64::new(0.0, 0.0); cutoff.dim()] }
    }

    pub fn basis(cutoff: Cutoff, n1: usize, n2: usize) -> Result<Self> {
        if !cutoff.contains(n1, n2) {
            return Err(Error::domain(format!("state ({n1}, {n2}) lies outside the cutoff")));
        }
        let mut v = Self::zeros(cutoff);
        v.amps[cutoff.index(n1, n2)] = C64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn vacuum(cutoff: Cutoff) -> Self {
        let mut v = Self::zeros(cutoff);
        v.amps[0] = C64::new(1.0, 0.0);
        v
    }

    pub fn from_amps(cutoff: Cutoff, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != cutoff.dim() {
            return Err(Error::domain("amplitude array does not match the cutoff dimension"));
        }
        if amps.iter().any(|a| !a.is_finite()) {
            return Err(Error::domain("amplitudes must be finite"));
        }
        Ok(FockVector { cutoff, amps })
    }

    pub fn get(&self, n1: usize, n2: usize) -> C64 {
        if self.cutoff.contains(n1, n2) {
            self.amps[self.cutoff.index(n1, n2)]
        } else {
            C64::new(0.0, 0.0)
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::domain("cannot normalize a zero or non-finite vector"));
        }
        Ok(FockVector { cutoff: self.cutoff, amps: self.amps.iter().map(|a| a / n).collect() })
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &FockVector) -> C64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }
}

/// Dense operator on the truncated basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    pub cutoff: Cutoff,
    pub matrix: Array2<C64>,
}

impl FockOperator {
    pub fn zeros(cutoff: Cutoff) -> Self {
        let d = cutoff.dim();
        FockOperator { cutoff, matrix: Array2::zeros((d, d)) }
    }

    pub fn identity(cutoff: Cutoff) -> Self {
        let d = cutoff.dim();
        FockOperator { cutoff, matrix: Array2::eye(d) }
    }

    pub fn from_matrix(cutoff: Cutoff, matrix: Array2<C64>) -> Result<Self> {
        let d = cutoff.dim();
        if matrix.dim() != (d, d) {
            return Err(Error::domain("matrix shape does not match the cutoff dimension"));
        }
        Ok(FockOperator { cutoff, matrix })
    }

    pub fn ladder(mode: Mode, kind: LadderKind, cutoff: Cutoff) -> Self {
        let mut op = Self::zeros(cutoff);
        for (n1, n2) in cutoff.states() {
            let ket = cutoff.index(n1, n2);
            let target = match (mode, kind) {
                (Mode::One, LadderKind::Annihilate) if n1 > 0 => Some((n1 - 1, n2, n1)),
                (Mode::Two, LadderKind::Annihilate) if n2 > 0 => Some((n1, n2 - 1, n2)),
                (Mode::One, LadderKind::Create) if n1 < cutoff.n1_max => Some((n1 + 1, n2, n1 + 1)),
                (Mode::Two, LadderKind::Create) if n2 < cutoff.n2_max => Some((n1, n2 + 1, n2 + 1)),
                _ => None,
            };
            if let Some((m1, m2, factor)) = target {
                op.matrix[[cutoff.index(m1, m2), ket]] = C64::new((factor as f64).sqrt(), 0.0);
            }
        }
        op
    }

    pub fn annihilate(mode: Mode, cutoff: Cutoff) -> Self {
        Self::ladder(mode, LadderKind::Annihilate, cutoff)
    }

    pub fn create(mode: Mode, cutoff: Cutoff) -> Self {
        Self::ladder(mode, LadderKind::Create, cutoff)
    }

    pub fn number(mode: Mode, cutoff: Cutoff) -> Self {
        let mut op = Self::zeros(cutoff);
        for (i, (n1, n2)) in cutoff.states().enumerate() {
            let n = match mode {
                Mode::One => n1,
                Mode::Two => n2,
            };
            op.matrix[[i, i]] = C64::new(n as f64, 0.0);
        }
        op
    }

    pub fn dim(&self) -> usize {
        self.cutoff.dim()
    }

    pub fn element(&self, bra: (usize, usize), ket: (usize, usize)) -> C64 {
        let c = &self.cutoff;
        if !c.contains(bra.0, bra.1) || !c.contains(ket.0, ket.1) {
            return C64::new(0.0, 0.0);
        }
        self.matrix[[c.index(bra.0, bra.1), c.index(ket.0, ket.1)]]
    }

    pub fn dot(&self, other: &FockOperator) -> FockOperator {
        FockOperator { cutoff: self.cutoff, matrix: self.matrix.dot(&other.matrix) }
    }

    pub fn add(&self, other: &FockOperator) -> FockOperator {
        FockOperator { cutoff: self.cutoff, matrix: &self.matrix + &other.matrix }
    }

    pub fn sub(&self, other: &FockOperator) -> FockOperator {
        FockOperator { cutoff: self.cutoff, matrix: &self.matrix - &other.matrix }
    }

    pub fn scale(&self, s: C64) -> FockOperator {
        FockOperator { cutoff: self.cutoff, matrix: self.matrix.mapv(|x| x * s) }
    }

    pub fn adjoint(&self) -> FockOperator {
        FockOperator { cutoff: self.cutoff, matrix: self.matrix.t().mapv(|x| x.conj()) }
    }

    pub fn commutator(&self, other: &FockOperator) -> FockOperator {
        self.dot(other).sub(&other.dot(self))
    }

    pub fn apply(&self, v: &FockVector) -> FockVector {
        let amps = self.matrix.dot(&ndarray::ArrayView1::from(&v.amps[..]));
        FockVector { cutoff: self.cutoff, amps: amps.to_vec() }
    }

    /// Largest entry of `self − self†`.
    pub fn hermiticity_error(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.matrix[[i, j]] - self.matrix[[j, i]].conj()).norm());
            }
        }
        worst
    }

    /// Maximum absolute column sum.
    pub fn one_norm(&self) -> f64 {
        self.matrix
            .columns()
            .into_iter()
            .map(|c| c.iter().map(|x| x.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn to_sparse(&self) -> SparseOperator {
        SparseOperator::from_dense(&self.matrix)
    }
}

/// Matrix power by repeated squaring. With hard truncation the result equals
/// the untruncated power only on states with `nᵢ ≤ nᵢ_max − n`.
pub fn op_power(op: &FockOperator, n: u32) -> FockOperator {
    let mut result = FockOperator::identity(op.cutoff);
    let mut base = op.clone();
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            result = result.dot(&base);
        }
        e >>= 1;
        if e > 0 {
            base = base.dot(&base);
        }
    }
    result
}

/// One term of a quantised field: prefactor `√(ħω/2Lε)` and complex phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldMode {
    pub mode: Mode,
    pub prefactor: f64,
    pub phase: C64,
}

/// `Ê = i Σ pref (phase·â − phase*·â†)`; Hermitian by construction.
pub fn quantized_field(modes: &[FieldMode], cutoff: Cutoff) -> Result<FockOperator> {
    let mut e = FockOperator::zeros(cutoff);
    let i = C64::new(0.0, 1.0);
    for m in modes {
        if !(m.prefactor > 0.0 && m.prefactor.is_finite()) {
            return Err(Error::domain(format!("field prefactor must be positive, got {}", m.prefactor)));
        }
        if !m.phase.is_finite() {
            return Err(Error::domain("field phase must be finite"));
        }
        let a = FockOperator::annihilate(m.mode, cutoff);
        let ad = FockOperator::create(m.mode, cutoff);
        let term = a.scale(m.phase).sub(&ad.scale(m.phase.conj()));
        e = e.add(&term.scale(i * m.prefactor));
    }
    Ok(e)
}

/// Compressed sparse row matrix used in the time-stepping kernels.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    pub dim: usize,
    pub row_ptr: Vec<usize>,
    pub cols: Vec<usize>,
    pub vals: Vec<C64>,
}

impl SparseOperator {
    pub fn from_dense(m: &Array2<C64>) -> Self {
        let dim = m.nrows();
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for i in 0..dim {
            for j in 0..m.ncols() {
                let x = m[[i, j]];
                if x != C64::new(0.0, 0.0) {
                    cols.push(j);
                    vals.push(x);
                }
            }
            row_ptr.push(cols.len());
        }
        SparseOperator { dim, row_ptr, cols, vals }
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// `y = self · x`.
    pub fn mul_vec(&self, x: &[C64], y: &mut [C64]) {
        for i in 0..self.dim {
            let mut acc = C64::new(0.0, 0.0);
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            y[i] = acc;
        }
    }

    pub fn one_norm(&self) -> f64 {
        let mut col = vec![0.0; self.dim];
        for (k, &j) in self.cols.iter().enumerate() {
            col[j] += self.vals[k].norm();
        }
        col.into_iter().fold(0.0, f64::max)
    }
}

/// Coherent-state amplitudes `e^{−|α|²/2} (α*)ⁿ/√n!` for `n = 0..=n_max`,
/// built by recurrence so no factorial is ever formed.
pub fn coherent_coefficients(alpha: C64, n_max: usize) -> Vec<C64> {
    let mut c = Vec::with_capacity(n_max + 1);
    let mut term = C64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    c.push(term);
    for n in 1..=n_max {
        term = term * alpha.conj() / (n as f64).sqrt();
        c.push(term);
    }
    c
}

/// Poisson weight of a coherent state lying above `n_max`.
pub fn coherent_tail(alpha: C64, n_max: usize) -> f64 {
    let mean = alpha.norm_sqr();
    let mut p = (-mean).exp();
    let mut sum = p;
    for n in 1..=n_max {
        p *= mean / n as f64;
        sum += p;
    }
    (1.0 - sum).max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Overlap {
    pub value: C64,
    /// Probability weight of the coherent state beyond the cutoff.
    pub tail: f64,
    pub truncation_warning: bool,
}

/// Default tail tolerance above which overlaps are flagged.
pub const OVERLAP_TAIL_TOL: f64 = 1e-8;

/// `⟨α₁, α₂|v⟩`.
pub fn coherent_overlap(alpha1: C64, alpha2: C64, v: &FockVector) -> Overlap {
    let c = v.cutoff;
    let c1 = coherent_coefficients(alpha1, c.n1_max);
    let c2 = coherent_coefficients(alpha2, c.n2_max);
    let mut value = C64::new(0.0, 0.0);
    for (n1, &a) in c1.iter().enumerate() {
        let mut row = C64::new(0.0, 0.0);
        for (n2, &b) in c2.iter().enumerate() {
            row += b * v.amps[c.index(n1, n2)];
        }
        value += a * row;
    }
    let t1 = coherent_tail(alpha1, c.n1_max);
    let t2 = coherent_tail(alpha2, c.n2_max);
    let tail = 1.0 - (1.0 - t1) * (1.0 - t2);
    Overlap { value, tail, truncation_warning: tail > OVERLAP_TAIL_TOL }
}

/// Applies `e^{t·A}` to `v` for an operator given by its action, via
/// substepped Taylor series. `one_norm` bounds `‖A‖₁` and fixes the number
/// of substeps so each has `‖tA/s‖ ≤ 1/2`.
pub fn expm_apply_with<F>(apply: F, one_norm: f64, v: &[C64], t: f64) -> Result<Vec<C64>>
where
    F: Fn(&[C64], &mut [C64]),
{
    if !t.is_finite() || !one_norm.is_finite() || v.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain("matrix exponential inputs must be finite"));
    }
    let dim = v.len();
    let mut x = v.to_vec();
    if t == 0.0 || one_norm == 0.0 {
        return Ok(x);
    }
    let steps = ((t.abs() * one_norm) / 0.5).ceil().max(1.0) as usize;
    let h = t / steps as f64;
    let mut term = vec![C64::new(0.0, 0.0); dim];
    let mut next = vec![C64::new(0.0, 0.0); dim];
    for _ in 0..steps {
        term.copy_from_slice(&x);
        let scale = x.iter().map(|a| a.norm()).fold(0.0, f64::max);
        for k in 1..=60 {
            apply(&term, &mut next);
            let f = h / k as f64;
            let mut big = 0.0f64;
            for i in 0..dim {
                term[i] = next[i] * f;
                x[i] += term[i];
                big = big.max(term[i].norm());
            }
            if big <= 1e-17 * scale.max(f64::MIN_POSITIVE) {
                break;
            }
        }
        if x.iter().any(|a| !a.is_finite()) {
            return Err(Error::numerical("matrix exponential overflowed"));
        }
    }
    Ok(x)
}

/// `e^{t·op} v`.
pub fn expm_apply(op: &FockOperator, v: &FockVector, t: f64) -> Result<FockVector> {
    if op.matrix.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain("operator entries must be finite"));
    }
    let sparse = op.to_sparse();
    let amps = expm_apply_with(|x, y| sparse.mul_vec(x, y), sparse.one_norm(), &v.amps, t)?;
    Ok(FockVector { cutoff: v.cutoff, amps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use proptest::prelude::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn index_roundtrip() {
        let cut = Cutoff::new(3, 5).unwrap();
        for i in 0..cut.dim() {
            let (a, b) = cut.state(i);
            assert_eq!(cut.index(a, b), i);
        }
        assert_eq!(cut.index(1, 0), 6);
        assert!(Cutoff::new(1000, 1000).is_err());
    }

    #[test]
    fn annihilate_vacuum_of_mode_one() {
        let cut = Cutoff::new(4, 4).unwrap();
        let a1 = FockOperator::annihilate(Mode::One, cut);
        for n2 in 0..=4 {
            let v = a1.apply(&FockVector::basis(cut, 0, n2).unwrap());
            assert!(v.norm_sqr() == 0.0);
        }
    }

    #[test]
    fn create_then_annihilate_is_number() {
        let cut = Cutoff::new(5, 5).unwrap();
        for mode in [Mode::One, Mode::Two] {
            let n = FockOperator::annihilate(mode, cut).dot(&FockOperator::create(mode, cut));
            let n_op = FockOperator::number(mode, cut);
            // â â† = n + 1 on interior states
            for (n1, n2) in cut.states() {
                let m = if mode == Mode::One { n1 } else { n2 };
                if m < 5 {
                    let i = cut.index(n1, n2);
                    assert!((n.matrix[[i, i]] - n_op.matrix[[i, i]] - 1.0).norm() < 1e-14);
                }
            }
            let n2 = FockOperator::create(mode, cut).dot(&FockOperator::annihilate(mode, cut));
            assert!((&n2.matrix - &n_op.matrix).iter().all(|x| x.norm() < 1e-14));
        }
    }

    #[test]
    fn canonical_commutators_on_interior() {
        let cut = Cutoff::new(6, 4).unwrap();
        let a = [FockOperator::annihilate(Mode::One, cut), FockOperator::annihilate(Mode::Two, cut)];
        let ad = [FockOperator::create(Mode::One, cut), FockOperator::create(Mode::Two, cut)];
        for i in 0..2 {
            for j in 0..2 {
                let comm = a[i].commutator(&ad[j]);
                for (n1, n2) in cut.states() {
                    if n1 >= 6 || n2 >= 4 {
                        continue;
                    }
                    for (m1, m2) in cut.states() {
                        let expect = if i == j && (n1, n2) == (m1, m2) { c(1.0) } else { c(0.0) };
                        assert!((comm.element((m1, m2), (n1, n2)) - expect).norm() < 1e-14);
                    }
                }
            }
        }
        let n1 = FockOperator::number(Mode::One, cut);
        let n2 = FockOperator::number(Mode::Two, cut);
        assert!(n1.commutator(&n2).matrix.iter().all(|x| *x == c(0.0)));
    }

    #[test]
    fn quantized_field_single_mode() {
        let cut = Cutoff::single(6).unwrap();
        let e = quantized_field(&[FieldMode { mode: Mode::One, prefactor: 1.0, phase: c(1.0) }], cut)
            .unwrap();
        let i = C64::new(0.0, 1.0);
        let expected = FockOperator::annihilate(Mode::One, cut)
            .sub(&FockOperator::create(Mode::One, cut))
            .scale(i);
        assert_eq!(e, expected);
        let vac = FockVector::vacuum(cut);
        assert_eq!(vac.inner(&e.apply(&vac)), c(0.0));
        assert!(quantized_field(&[FieldMode { mode: Mode::One, prefactor: 0.0, phase: c(1.0) }], cut)
            .is_err());
    }

    #[test]
    fn field_vacuum_second_moment() {
        let cut = Cutoff::new(4, 4).unwrap();
        let modes = [
            FieldMode { mode: Mode::One, prefactor: 0.7, phase: C64::from_polar(1.0, 0.3) },
            FieldMode { mode: Mode::Two, prefactor: 1.9, phase: C64::from_polar(1.0, -1.1) },
        ];
        let e = quantized_field(&modes, cut).unwrap();
        assert!(e.hermiticity_error() == 0.0);
        let vac = FockVector::vacuum(cut);
        let v = vac.inner(&op_power(&e, 2).apply(&vac));
        assert!((v - c(0.49 + 3.61)).norm() < 1e-14);
    }

    #[test]
    fn powers() {
        let cut = Cutoff::single(5).unwrap();
        let e = quantized_field(&[FieldMode { mode: Mode::One, prefactor: 1.3, phase: C64::from_polar(1.0, 0.4) }], cut)
            .unwrap();
        assert_eq!(op_power(&e, 0), FockOperator::identity(cut));
        let e4 = op_power(&e, 4);
        let rep = e.dot(&e).dot(&e).dot(&e);
        assert!((&e4.matrix - &rep.matrix).iter().all(|x| x.norm() < 1e-12));
        let a2 = op_power(&FockOperator::annihilate(Mode::One, cut), 2);
        let v = a2.apply(&FockVector::basis(cut, 2, 0).unwrap());
        assert!((v.get(0, 0) - c(2f64.sqrt())).norm() < 1e-15);
    }

    #[test]
    fn overlaps() {
        let cut = Cutoff::new(10, 10).unwrap();
        let vac = FockVector::vacuum(cut);
        assert_eq!(coherent_overlap(c(0.0), c(0.0), &vac).value, c(1.0));
        let a = C64::new(0.4, -0.7);
        let ov = coherent_overlap(a, c(0.2), &vac);
        assert!((ov.value.re - (-(a.norm_sqr() + 0.04) / 2.0).exp()).abs() < 1e-15);
        let one = FockVector::basis(cut, 1, 0).unwrap();
        let ov = coherent_overlap(c(0.3), c(0.0), &one);
        assert!((ov.value - c((-0.045f64).exp() * 0.3)).norm() < 1e-15);
        assert!(!ov.truncation_warning);
        assert!(coherent_overlap(c(3.0), c(0.0), &vac).truncation_warning);
    }

    #[test]
    fn coherent_coefficients_do_not_overflow() {
        let cc = coherent_coefficients(c(14.0), 400);
        assert!(cc.iter().all(|x| x.is_finite()));
        let norm: f64 = cc.iter().map(|x| x.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn expm_trivial_cases() {
        let cut = Cutoff::new(2, 1).unwrap();
        let v = FockVector::from_amps(cut, (0..6).map(|k| C64::new(k as f64, 1.0)).collect()).unwrap();
        let op = FockOperator::number(Mode::One, cut);
        assert_eq!(expm_apply(&op, &v, 0.0).unwrap(), v);
        let out = expm_apply(&op, &v, -0.7).unwrap();
        for (i, (n1, _)) in cut.states().enumerate() {
            let expected = v.amps[i] * (-0.7 * n1 as f64).exp();
            assert!((out.amps[i] - expected).norm() < 1e-13);
        }
    }

    #[test]
    fn expm_matches_eigendecomposition() {
        // deterministic pseudo-random Hermitian 6x6
        let cut = Cutoff::new(2, 1).unwrap();
        let mut h = Array2::<C64>::zeros((6, 6));
        let mut seed = 12345u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        for i in 0..6 {
            for j in i..6 {
                let z = if i == j { c(next()) } else { C64::new(next(), next()) };
                h[[i, j]] = z;
                h[[j, i]] = z.conj();
            }
        }
        let op = FockOperator::from_matrix(cut, h.mapv(|x| x * C64::new(0.0, -1.0))).unwrap();
        let v = FockVector::from_amps(cut, (0..6).map(|k| C64::new(1.0, k as f64 * 0.1)).collect()).unwrap();
        let t = 2.3;
        let out = expm_apply(&op, &v, t).unwrap();

        let hm = DMatrix::from_fn(6, 6, |i, j| h[[i, j]]);
        let eig = hm.symmetric_eigen();
        let u = &eig.eigenvectors;
        let vv = nalgebra::DVector::from_vec(v.amps.clone());
        let coeffs = u.adjoint() * vv;
        let phased = nalgebra::DVector::from_fn(6, |k, _| {
            coeffs[k] * C64::from_polar(1.0, -eig.eigenvalues[k] * t)
        });
        let expected = u * phased;
        for i in 0..6 {
            assert!((out.amps[i] - expected[i]).norm() < 1e-12);
        }
        assert!((out.norm_sqr() - v.norm_sqr()).abs() < 1e-12 * v.norm_sqr());
    }

    #[test]
    fn expm_rejects_non_finite() {
        let cut = Cutoff::single(2).unwrap();
        let op = FockOperator::identity(cut);
        assert!(expm_apply(&op, &FockVector::vacuum(cut), f64::NAN).is_err());
    }

    #[test]
    fn vector_json_layout() {
        let cut = Cutoff::new(0, 1).unwrap();
        let v = FockVector::from_amps(cut, vec![c(1.0), C64::new(0.0, -2.0)]).unwrap();
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"{"cutoff":{"n1_max":0,"n2_max":1},"amps":[[1.0,0.0],[0.0,-2.0]]}"#);
        let back: FockVector = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }

    proptest! {
        #[test]
        fn unitary_evolution_preserves_norm(re in -1.0f64..1.0, im in -1.0f64..1.0, t in 0.0f64..3.0) {
            let cut = Cutoff::new(3, 3).unwrap();
            let z = C64::new(re, im);
            let a = FockOperator::annihilate(Mode::One, cut).dot(&FockOperator::annihilate(Mode::Two, cut));
            // z a b − z* a† b†
            let gen = a.scale(z).sub(&a.adjoint().scale(z.conj()));
            let v = FockVector::vacuum(cut);
            let out = expm_apply(&gen, &v, t).unwrap();
            prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-10);
        }

        #[test]
        fn field_is_hermitian(p1 in 0.01f64..5.0, p2 in 0.01f64..5.0, th1 in 0.0f64..6.3, th2 in 0.0f64..6.3) {
            let cut = Cutoff::new(3, 2).unwrap();
            let e = quantized_field(&[
                FieldMode { mode: Mode::One, prefactor: p1, phase: C64::from_polar(1.0, th1) },
                FieldMode { mode: Mode::Two, prefactor: p2, phase: C64::from_polar(1.0, th2) },
            ], cut).unwrap();
            prop_assert!(e.hermiticity_error() == 0.0);
        }
    }
}
