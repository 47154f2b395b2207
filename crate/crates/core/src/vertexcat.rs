//! Vertex matrix elements of the χ⁽²⁾/χ⁽⁴⁾ interaction and an operator-level
//! oracle that rebuilds them from powers of the quantised field.
//!
//! All elements are taken at `t = 0` with the bra occupations `(n₁, n₂)` as
//! arguments; the ket is `(n₁ − Δn₁, n₂ − Δn₂)`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::cavity::ModeSet;
use crate::error::{Error, Result};
use crate::fockspace::{op_power, quantized_field, Cutoff, FieldMode, FockOperator, Mode};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingSet {
    /// χ⁽²⁾ (m/V).
    pub chi2: f64,
    /// χ⁽⁴⁾ (m/V)³.
    pub chi4: f64,
    pub eps0: f64,
    /// Crystal permittivity ε = ε₀(1 + χ⁽¹⁾).
    pub eps: f64,
    /// Complex classical pump amplitude (V/m).
    pub e_laser: C64,
    /// Lattice constant, the extent of one local interaction (m).
    pub a_crys: f64,
    pub hbar: f64,
    /// Round-trip length used in the mode normalisation (m).
    pub length: f64,
    /// Light velocity inside the crystal (m/s); only sets spatial phases.
    pub c_medium: f64,
}

impl CouplingSet {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.chi2, self.chi4, self.eps0, self.eps, self.a_crys, self.hbar, self.length, self.c_medium,
        ];
        if all.iter().any(|x| !x.is_finite()) || !self.e_laser.is_finite() {
            return Err(Error::config("couplings must be finite"));
        }
        for (name, v) in [
            ("eps", self.eps),
            ("eps0", self.eps0),
            ("a_crys", self.a_crys),
            ("hbar", self.hbar),
            ("length", self.length),
            ("c_medium", self.c_medium),
        ] {
            if v <= 0.0 {
                return Err(Error::config(format!("couplings.{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// `ħω/(2Lε)`, the squared field amplitude per photon.
    pub fn field_sq(&self, omega: f64) -> f64 {
        self.hbar * omega / (2.0 * self.length * self.eps)
    }

    pub fn with_chi(&self, chi2: f64, chi4: f64) -> Self {
        CouplingSet { chi2, chi4, ..*self }
    }

    pub fn laser_factor(&self, side: LaserSide) -> C64 {
        match side {
            LaserSide::Emit => self.e_laser,
            LaserSide::Absorb => self.e_laser.conj(),
        }
    }
}

/// Whether the pump gives a quantum `ω_L` to the photon modes or takes one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LaserSide {
    Emit,
    Absorb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VertexKind {
    /// (4)₊₄: pump → 4γ₁.
    Chi4Plus4,
    /// (4)₋₄: 4γ₁ → pump.
    Chi4Minus4,
    /// (4)₊₂: pump + γ₁ → 2γ₂ + γ₁.
    Chi4Plus2,
    /// (4)₋₂: 2γ₂ + γ₁ → pump + γ₁.
    Chi4Minus2,
    /// (2)₊₂: pump → 2γ₂.
    Chi2Plus2,
    /// (2)₋₂: 2γ₂ → pump.
    Chi2Minus2,
}

impl VertexKind {
    pub const ALL: [VertexKind; 6] = [
        VertexKind::Chi4Plus4,
        VertexKind::Chi4Minus4,
        VertexKind::Chi4Plus2,
        VertexKind::Chi4Minus2,
        VertexKind::Chi2Plus2,
        VertexKind::Chi2Minus2,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            VertexKind::Chi4Plus4 => "(4)+4",
            VertexKind::Chi4Minus4 => "(4)-4",
            VertexKind::Chi4Plus2 => "(4)+2",
            VertexKind::Chi4Minus2 => "(4)-2",
            VertexKind::Chi2Plus2 => "(2)+2",
            VertexKind::Chi2Minus2 => "(2)-2",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let t: String = s
            .trim()
            .chars()
            .map(|ch| match ch {
                '₊' => '+',
                '₋' => '-',
                '₂' => '2',
                '₄' => '4',
                other => other,
            })
            .collect();
        let t = match t.as_str() {
            "(4)4" => "(4)+4",
            "(4)2" => "(4)+2",
            "(2)2" => "(2)+2",
            other => other,
        };
        VertexKind::ALL
            .into_iter()
            .find(|k| k.label() == t)
            .ok_or_else(|| Error::domain(format!("unknown vertex kind '{s}'")))
    }

    /// Photon-number change (bra − ket).
    pub fn delta(&self) -> (i64, i64) {
        match self {
            VertexKind::Chi4Plus4 => (4, 0),
            VertexKind::Chi4Minus4 => (-4, 0),
            VertexKind::Chi4Plus2 | VertexKind::Chi2Plus2 => (0, 2),
            VertexKind::Chi4Minus2 | VertexKind::Chi2Minus2 => (0, -2),
        }
    }

    pub fn laser_side(&self) -> LaserSide {
        match self {
            VertexKind::Chi4Plus4 | VertexKind::Chi4Plus2 | VertexKind::Chi2Plus2 => LaserSide::Emit,
            _ => LaserSide::Absorb,
        }
    }

    /// Power of the field in the interaction term (2 or 4).
    pub fn chi_order(&self) -> u32 {
        match self {
            VertexKind::Chi2Plus2 | VertexKind::Chi2Minus2 => 2,
            _ => 4,
        }
    }

    /// The kind with the opposite pump side and the same modes.
    pub fn partner(&self) -> VertexKind {
        match self {
            VertexKind::Chi4Plus4 => VertexKind::Chi4Minus4,
            VertexKind::Chi4Minus4 => VertexKind::Chi4Plus4,
            VertexKind::Chi4Plus2 => VertexKind::Chi4Minus2,
            VertexKind::Chi4Minus2 => VertexKind::Chi4Plus2,
            VertexKind::Chi2Plus2 => VertexKind::Chi2Minus2,
            VertexKind::Chi2Minus2 => VertexKind::Chi2Plus2,
        }
    }

    /// Photon mode whose occupation the vertex changes.
    pub fn changed_mode(&self) -> Mode {
        match self {
            VertexKind::Chi4Plus4 | VertexKind::Chi4Minus4 => Mode::One,
            _ => Mode::Two,
        }
    }

    /// Ket reached backwards from `bra`, if nonnegative.
    pub fn ket_of(&self, bra: (usize, usize)) -> Option<(usize, usize)> {
        let (d1, d2) = self.delta();
        let k1 = bra.0 as i64 - d1;
        let k2 = bra.1 as i64 - d2;
        (k1 >= 0 && k2 >= 0).then_some((k1 as usize, k2 as usize))
    }

    /// Bra reached forwards from `ket`, if nonnegative.
    pub fn bra_of(&self, ket: (usize, usize)) -> Option<(usize, usize)> {
        let (d1, d2) = self.delta();
        let b1 = ket.0 as i64 + d1;
        let b2 = ket.1 as i64 + d2;
        (b1 >= 0 && b2 >= 0).then_some((b1 as usize, b2 as usize))
    }
}

/// Which closed-form prefactors to use.
///
/// `Derivation` and `Summary` are the two printed tables: they agree on every kind
/// except (4)±₂, where `Summary` is twice `Derivation` (at `ω_R = ω_L`). `Operator`
/// is the exact matrix element of the field-power Hamiltonian, signs
/// included; for (4)±₂ it also contains the pure mode-2 process
/// pump + γ₂ ↔ 3γ₂ that has the same photon-number change.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Convention {
    Derivation,
    Summary,
    Operator,
}

impl Convention {
    pub const PRINTED: [Convention; 2] = [Convention::Derivation, Convention::Summary];

    pub fn as_str(&self) -> &'static str {
        match self {
            Convention::Derivation => "derivation",
            Convention::Summary => "summary",
            Convention::Operator => "operator",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "derivation" => Ok(Convention::Derivation),
            "summary" => Ok(Convention::Summary),
            "operator" => Ok(Convention::Operator),
            _ => Err(Error::config(format!(
                "smatrix.convention must be one of derivation, summary, operator; got '{s}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VertexAmplitude {
    pub kind: VertexKind,
    pub bra: (usize, usize),
    pub value: C64,
}

fn sqrt_falling(top: usize, count: usize) -> f64 {
    // √(top (top−1) … (top−count+1))
    (0..count).map(|k| (top - k) as f64).product::<f64>().sqrt()
}

/// Closed-form vertex `⟨n₁,n₂|Ĥ₁(0)|ket⟩` for the selected convention.
pub fn vertex_closed_form(
    kind: VertexKind,
    n1: usize,
    n2: usize,
    couplings: &CouplingSet,
    modes: &ModeSet,
    convention: Convention,
) -> VertexAmplitude {
    let bra = (n1, n2);
    let zero = VertexAmplitude { kind, bra, value: C64::new(0.0, 0.0) };
    let Some(ket) = kind.ket_of(bra) else {
        return zero;
    };
    let c = couplings;
    let e = c.laser_factor(kind.laser_side());
    let base = c.eps0 * c.a_crys;
    let p1 = c.field_sq(modes.omega_1());
    let p2 = c.field_sq(modes.omega_2());
    let pr = |div: f64| c.hbar * modes.omega_r / (div * c.length * c.eps);
    // √ of the ladder factor connecting the larger to the smaller occupation
    let (hi1, hi2) = (n1.max(ket.0), n2.max(ket.1));
    let value = match kind {
        VertexKind::Chi4Plus4 | VertexKind::Chi4Minus4 => {
            let f = sqrt_falling(hi1, 4);
            let pref = match convention {
                Convention::Derivation | Convention::Operator => p1 * p1,
                Convention::Summary => pr(8.0).powi(2),
            };
            e * (10.0 * base * c.chi4 * pref * f)
        }
        VertexKind::Chi2Plus2 | VertexKind::Chi2Minus2 => {
            let f = sqrt_falling(hi2, 2);
            match convention {
                Convention::Derivation => e * (3.0 * base * c.chi2 * p2 * f),
                Convention::Summary => e * (3.0 * base * c.chi2 * pr(4.0) * f),
                Convention::Operator => e * (-3.0 * base * c.chi2 * p2 * f),
            }
        }
        VertexKind::Chi4Plus2 | VertexKind::Chi4Minus2 => {
            let f = sqrt_falling(hi2, 2);
            let mixed = (2 * n1 + 1) as f64;
            match convention {
                Convention::Derivation => e * (-10.0 * base * c.chi4 * p1 * p2 * mixed * f),
                Convention::Summary => e * (-10.0 * base * c.chi4 * pr(4.0).powi(2) * mixed * f),
                Convention::Operator => {
                    let pure = (2 * hi2 - 1) as f64;
                    let bracket = 6.0 * p1 * p2 * mixed + 2.0 * p2 * p2 * pure;
                    e * (-10.0 * base * c.chi4 * bracket * f)
                }
            }
        }
    };
    VertexAmplitude { kind, bra, value }
}

/// Vertex for a transition out of `ket`; zero when the bra would be negative.
pub fn vertex_from_ket(
    kind: VertexKind,
    ket: (usize, usize),
    couplings: &CouplingSet,
    modes: &ModeSet,
    convention: Convention,
) -> C64 {
    match kind.bra_of(ket) {
        Some((b1, b2)) => vertex_closed_form(kind, b1, b2, couplings, modes, convention).value,
        None => C64::new(0.0, 0.0),
    }
}

/// The two pieces of the exact (4)±₂ element: the mixed γ₁γ₂ part and the
/// pure mode-2 part. Their sum is the `Operator` convention value.
pub fn chi4_two_photon_parts(
    kind: VertexKind,
    n1: usize,
    n2: usize,
    couplings: &CouplingSet,
    modes: &ModeSet,
) -> Result<(C64, C64)> {
    if !matches!(kind, VertexKind::Chi4Plus2 | VertexKind::Chi4Minus2) {
        return Err(Error::domain("only (4)+2 and (4)-2 split into mixed and pure parts"));
    }
    let Some(ket) = kind.ket_of((n1, n2)) else {
        return Ok((C64::new(0.0, 0.0), C64::new(0.0, 0.0)));
    };
    let c = couplings;
    let e = c.laser_factor(kind.laser_side());
    let base = -10.0 * c.eps0 * c.a_crys * c.chi4;
    let p1 = c.field_sq(modes.omega_1());
    let p2 = c.field_sq(modes.omega_2());
    let hi2 = n2.max(ket.1);
    let f = sqrt_falling(hi2, 2);
    let mixed = e * (base * 6.0 * p1 * p2 * (2 * n1 + 1) as f64 * f);
    let pure = e * (base * 2.0 * p2 * p2 * (2 * hi2 - 1) as f64 * f);
    Ok((mixed, pure))
}

/// Energy-conserving block of the field-power Hamiltonian for one kind.
#[derive(Debug, Clone)]
pub struct BruteForceBlock {
    pub kind: VertexKind,
    pub z: f64,
    /// Operator restricted to the kind's `(Δn₁, Δn₂)` block.
    pub op: FockOperator,
    /// Occupations within `margin` of the cutoff are affected by truncation.
    pub margin: usize,
}

impl BruteForceBlock {
    /// Element at `bra`, or `None` when it is not reliable under truncation.
    pub fn element(&self, n1: usize, n2: usize) -> Option<C64> {
        let cut = self.op.cutoff;
        let ket = self.kind.ket_of((n1, n2))?;
        let ok = |a: usize, max: usize| a + self.margin <= max;
        if !(ok(n1, cut.n1_max) && ok(n2, cut.n2_max) && ok(ket.0, cut.n1_max) && ok(ket.1, cut.n2_max)) {
            return None;
        }
        Some(self.op.element((n1, n2), ket))
    }
}

/// Quantised field at position `z` for the two retained modes.
pub fn field_operator(couplings: &CouplingSet, modes: &ModeSet, z: f64, cutoff: Cutoff) -> Result<FockOperator> {
    let k = |w: f64| w * z / couplings.c_medium;
    quantized_field(
        &[
            FieldMode {
                mode: Mode::One,
                prefactor: couplings.field_sq(modes.omega_1()).sqrt(),
                phase: C64::from_polar(1.0, k(modes.omega_1())),
            },
            FieldMode {
                mode: Mode::Two,
                prefactor: couplings.field_sq(modes.omega_2()).sqrt(),
                phase: C64::from_polar(1.0, k(modes.omega_2())),
            },
        ],
        cutoff,
    )
}

/// Rebuilds the vertex of `kind` from `½ε₀ a_crys E_L(z) {6χ⁽²⁾Ê² + 20χ⁽⁴⁾Ê⁴}`.
///
/// The pump term `E_L e^{iω_L z/c'}` multiplies the photon-creating blocks
/// and `E_L† e^{−iω_L z/c'}` the annihilating ones. Only the field power
/// belonging to the kind enters, so (2)₂ and (4)₂, which share a block, are
/// separated.
pub fn vertex_bruteforce(
    kind: VertexKind,
    cutoff: Cutoff,
    couplings: &CouplingSet,
    modes: &ModeSet,
    z: f64,
) -> Result<BruteForceBlock> {
    couplings.validate()?;
    if !z.is_finite() {
        return Err(Error::domain("vertex position must be finite"));
    }
    let order = kind.chi_order();
    let margin = (order / 2) as usize;
    let (d1, d2) = kind.delta();
    let need1 = d1.unsigned_abs() as usize + margin;
    let need2 = d2.unsigned_abs() as usize + margin;
    if cutoff.n1_max < need1 || cutoff.n2_max < need2 {
        return Err(Error::domain(format!(
            "cutoff ({}, {}) too small for an interior comparison of {}",
            cutoff.n1_max,
            cutoff.n2_max,
            kind.label()
        )));
    }
    let e = field_operator(couplings, modes, z, cutoff)?;
    let power = op_power(&e, order);
    let coeff = match order {
        2 => 3.0 * couplings.chi2,
        _ => 10.0 * couplings.chi4,
    } * couplings.eps0
        * couplings.a_crys;
    let laser_phase = modes.omega_l * z / couplings.c_medium;
    let laser = match kind.laser_side() {
        LaserSide::Emit => couplings.e_laser * C64::from_polar(1.0, laser_phase),
        LaserSide::Absorb => couplings.e_laser.conj() * C64::from_polar(1.0, -laser_phase),
    };
    let mut block = FockOperator::zeros(cutoff);
    for (b1, b2) in cutoff.states() {
        if let Some(ket) = kind.ket_of((b1, b2)) {
            if cutoff.contains(ket.0, ket.1) {
                let bi = cutoff.index(b1, b2);
                let ki = cutoff.index(ket.0, ket.1);
                block.matrix[[bi, ki]] = power.matrix[[bi, ki]] * laser * coeff;
            }
        }
    }
    Ok(BruteForceBlock { kind, z, op: block, margin })
}

/// Keeps only elements whose photon energy changes by exactly `±ω_L`,
/// i.e. `Δ(n₁ + 2n₂) = ±4` in units of `ω₁ = ω_L/4`.
pub fn energy_conserving_part(op: &FockOperator) -> FockOperator {
    let cut = op.cutoff;
    let mut out = FockOperator::zeros(cut);
    for (i, (b1, b2)) in cut.states().enumerate() {
        for (j, (k1, k2)) in cut.states().enumerate() {
            let de = (b1 + 2 * b2) as i64 - (k1 + 2 * k2) as i64;
            if de.abs() == 4 {
                out.matrix[[i, j]] = op.matrix[[i, j]];
            }
        }
    }
    out
}

/// Kinds that can act on the ket `(n₁, n₂)` without producing a negative
/// occupation. No kind changes `n₁` by an odd number, so pump + γ₁ ↔ 3γ₁
/// never appears.
pub fn list_allowed_transitions(n1: usize, n2: usize, direction: LaserSide) -> Vec<VertexKind> {
    VertexKind::ALL
        .into_iter()
        .filter(|k| k.laser_side() == direction && k.bra_of((n1, n2)).is_some())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn couplings() -> CouplingSet {
        CouplingSet {
            chi2: 1.3e-12,
            chi4: 2.1e-22,
            eps0: 8.854e-12,
            eps: 2.5 * 8.854e-12,
            e_laser: C64::from_polar(3.0e5, 0.4),
            a_crys: 5e-10,
            hbar: 1.0546e-34,
            length: 1.5,
            c_medium: 299_792_458.0 / 2.2,
        }
    }

    fn modes() -> ModeSet {
        ModeSet::new(3.6e15, 3.6e15, 1e9).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn chi2_closed_form_example() {
        let c = couplings();
        let m = modes();
        let v = vertex_closed_form(VertexKind::Chi2Plus2, 0, 2, &c, &m, Convention::Summary);
        let expect = 3.0 * c.eps0 * c.chi2 * (c.hbar * m.omega_r / (4.0 * c.length * c.eps)) * c.a_crys * 2f64.sqrt();
        assert!((v.value - c.e_laser * expect).norm() < 1e-12 * v.value.norm());
        let v_derivation = vertex_closed_form(VertexKind::Chi2Plus2, 0, 2, &c, &m, Convention::Derivation);
        assert!(rel(v_derivation.value.norm(), v.value.norm()) < 1e-14);
    }

    #[test]
    fn closed_form_zero_for_negative_ket() {
        let v = vertex_closed_form(VertexKind::Chi4Plus4, 3, 0, &couplings(), &modes(), Convention::Derivation);
        assert_eq!(v.value, C64::new(0.0, 0.0));
    }

    #[test]
    fn chi4_minus2_example_combinatorics() {
        let c = couplings();
        let m = modes();
        let v = vertex_closed_form(VertexKind::Chi4Minus2, 1, 0, &c, &m, Convention::Derivation);
        let pref = 10.0 * c.eps0 * c.chi4 * c.a_crys * c.field_sq(m.omega_1()) * c.field_sq(m.omega_2());
        let expect = -c.e_laser.conj() * (pref * 3.0 * 2f64.sqrt());
        assert!((v.value - expect).norm() < 1e-12 * expect.norm());
        let v_summary = vertex_closed_form(VertexKind::Chi4Minus2, 1, 0, &c, &m, Convention::Summary);
        assert!(rel(v_summary.value.norm(), 2.0 * v.value.norm()) < 1e-12);
    }

    #[test]
    fn parse_labels() {
        for k in VertexKind::ALL {
            assert_eq!(VertexKind::parse(k.label()).unwrap(), k);
        }
        assert_eq!(VertexKind::parse("(4)₋₂").unwrap(), VertexKind::Chi4Minus2);
        assert!(VertexKind::parse("(3)+1").is_err());
    }

    #[test]
    fn bruteforce_zero_without_coupling() {
        let c = couplings().with_chi(0.0, 0.0);
        let cut = Cutoff::new(6, 6).unwrap();
        for k in VertexKind::ALL {
            let b = vertex_bruteforce(k, cut, &c, &modes(), 0.001).unwrap();
            assert!(b.op.matrix.iter().all(|x| *x == C64::new(0.0, 0.0)));
        }
    }

    #[test]
    fn bruteforce_matches_printed_where_tables_agree() {
        let c = couplings();
        let m = modes();
        let cut = Cutoff::new(10, 10).unwrap();
        for kind in [VertexKind::Chi4Plus4, VertexKind::Chi4Minus4, VertexKind::Chi2Plus2, VertexKind::Chi2Minus2] {
            let b = vertex_bruteforce(kind, cut, &c, &m, -0.0021).unwrap();
            for (n1, n2) in cut.states() {
                let Some(bf) = b.element(n1, n2) else { continue };
                for conv in Convention::PRINTED {
                    let cf = vertex_closed_form(kind, n1, n2, &c, &m, conv).value;
                    if cf.norm() == 0.0 {
                        assert!(bf.norm() <= 1e-30);
                    } else {
                        assert!(rel(bf.norm(), cf.norm()) < 1e-12, "{} {n1} {n2}", kind.label());
                    }
                }
            }
        }
    }

    #[test]
    fn bruteforce_equals_operator_convention_with_phase() {
        let c = couplings();
        let m = modes();
        let cut = Cutoff::new(9, 9).unwrap();
        for kind in VertexKind::ALL {
            let b = vertex_bruteforce(kind, cut, &c, &m, 0.0037).unwrap();
            for (n1, n2) in cut.states() {
                let Some(bf) = b.element(n1, n2) else { continue };
                let cf = vertex_closed_form(kind, n1, n2, &c, &m, Convention::Operator).value;
                assert!((bf - cf).norm() <= 1e-12 * cf.norm().max(1e-300), "{} {n1} {n2}", kind.label());
            }
        }
    }

    #[test]
    fn chi4_two_photon_parts_sum() {
        let c = couplings();
        let m = modes();
        let (mixed, pure) = chi4_two_photon_parts(VertexKind::Chi4Plus2, 3, 4, &c, &m).unwrap();
        let total = vertex_closed_form(VertexKind::Chi4Plus2, 3, 4, &c, &m, Convention::Operator).value;
        assert!((mixed + pure - total).norm() < 1e-13 * total.norm());
        let derivation = vertex_closed_form(VertexKind::Chi4Plus2, 3, 4, &c, &m, Convention::Derivation).value;
        assert!(rel(mixed.norm(), 6.0 * derivation.norm()) < 1e-12);
    }

    #[test]
    fn magnitudes_are_position_independent() {
        let c = couplings();
        let m = modes();
        let cut = Cutoff::new(8, 8).unwrap();
        let a = vertex_bruteforce(VertexKind::Chi4Plus2, cut, &c, &m, -0.004).unwrap();
        let b = vertex_bruteforce(VertexKind::Chi4Plus2, cut, &c, &m, 0.0031).unwrap();
        for (n1, n2) in cut.states() {
            if let (Some(x), Some(y)) = (a.element(n1, n2), b.element(n1, n2)) {
                assert!((x.norm() - y.norm()).abs() <= 1e-12 * x.norm().max(1e-300));
            }
        }
    }

    #[test]
    fn hermitian_pairing() {
        let c = couplings();
        let m = modes();
        for conv in [Convention::Derivation, Convention::Summary, Convention::Operator] {
            for kind in [VertexKind::Chi4Plus4, VertexKind::Chi4Plus2, VertexKind::Chi2Plus2] {
                for n1 in 0..9 {
                    for n2 in 0..9 {
                        let up = vertex_closed_form(kind, n1, n2, &c, &m, conv);
                        let Some(ket) = kind.ket_of((n1, n2)) else { continue };
                        let down = vertex_closed_form(kind.partner(), ket.0, ket.1, &c, &m, conv);
                        assert_eq!(down.value, up.value.conj(), "{} {:?}", kind.label(), conv);
                    }
                }
            }
        }
    }

    #[test]
    fn energy_rule_on_field_powers() {
        let c = couplings();
        let m = modes();
        let cut = Cutoff::new(6, 6).unwrap();
        let e = field_operator(&c, &m, 0.001, cut).unwrap();
        for power in [2u32, 4] {
            let ep = energy_conserving_part(&op_power(&e, power));
            for (i, (b1, b2)) in cut.states().enumerate() {
                for (j, (k1, k2)) in cut.states().enumerate() {
                    if ep.matrix[[i, j]].norm() > 0.0 {
                        let d = (b1 as i64 - k1 as i64, b2 as i64 - k2 as i64);
                        let allowed = if power == 2 {
                            d == (0, 2) || d == (0, -2)
                        } else {
                            matches!(d, (4, 0) | (-4, 0) | (0, 2) | (0, -2))
                        };
                        assert!(allowed, "power {power} delta {d:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn allowed_transitions() {
        use LaserSide::*;
        assert_eq!(
            list_allowed_transitions(0, 0, Emit),
            vec![VertexKind::Chi4Plus4, VertexKind::Chi4Plus2, VertexKind::Chi2Plus2]
        );
        assert!(list_allowed_transitions(0, 0, Absorb).is_empty());
        assert_eq!(list_allowed_transitions(0, 2, Absorb), vec![VertexKind::Chi4Minus2, VertexKind::Chi2Minus2]);
        assert_eq!(
            list_allowed_transitions(4, 2, Absorb),
            vec![VertexKind::Chi4Minus4, VertexKind::Chi4Minus2, VertexKind::Chi2Minus2]
        );
        assert_eq!(list_allowed_transitions(4, 2, Emit).len(), 3);
    }

    #[test]
    fn allowed_transitions_match_nonzero_bruteforce_blocks() {
        let c = couplings();
        let m = modes();
        let cut = Cutoff::new(10, 8).unwrap();
        for dir in [LaserSide::Emit, LaserSide::Absorb] {
            let listed = list_allowed_transitions(4, 2, dir);
            for kind in VertexKind::ALL.into_iter().filter(|k| k.laser_side() == dir) {
                let b = vertex_bruteforce(kind, cut, &c, &m, 0.0).unwrap();
                let bra = kind.bra_of((4, 2));
                let nonzero = bra.is_some_and(|(b1, b2)| b.op.element((b1, b2), (4, 2)).norm() > 0.0);
                assert_eq!(nonzero, listed.contains(&kind), "{}", kind.label());
            }
        }
    }
}
