//! Resonance analysis of the one-way ring cavity and the position-dependent
//! damping factors ("K-factors") carried by every propagator.
//!
//! Frequencies are angular (rad/s), lengths in metres. The crystal occupies
//! `z ∈ [−ℓ/2, ℓ/2]` with `z = 0` at its centre.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which field a K-factor refers to: the classical pump or one of the two
/// retained photon modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModeLabel {
    #[serde(rename = "L")]
    Laser,
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
}

impl ModeLabel {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "L" | "l" | "laser" => Some(ModeLabel::Laser),
            "1" => Some(ModeLabel::One),
            "2" => Some(ModeLabel::Two),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ModeLabel::Laser => "L",
            ModeLabel::One => "1",
            ModeLabel::Two => "2",
        }
    }
}

/// A value stored separately for the laser and the two photon modes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerMode<T> {
    pub laser: T,
    pub one: T,
    pub two: T,
}

impl<T: Copy> PerMode<T> {
    pub fn get(&self, label: ModeLabel) -> T {
        match label {
            ModeLabel::Laser => self.laser,
            ModeLabel::One => self.one,
            ModeLabel::Two => self.two,
        }
    }
}

/// Geometry and optical constants of the ring resonator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CavityConfig {
    /// Round-trip path length `L` (m).
    pub length: f64,
    /// Crystal length `ℓ` (m).
    pub crystal_length: f64,
    /// Refractive index of the crystal; `c' = c / n_crys`.
    pub n_crys: f64,
    /// Damping rate per unit length inside the crystal `γ'` (1/m).
    pub gamma_prime: f64,
    /// Optional per-mode overrides of `γ'` for the photon modes.
    pub gamma_prime_one: Option<f64>,
    pub gamma_prime_two: Option<f64>,
    /// Mirror products `r₁r₂r₃r₄` at each frequency.
    pub r: PerMode<f64>,
    /// Reflection coefficient of the output mirror M₂ alone.
    pub r2_single: f64,
    /// Speed of light in vacuum (m/s).
    pub c: f64,
}

impl CavityConfig {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.length,
            self.crystal_length,
            self.n_crys,
            self.gamma_prime,
            self.r2_single,
            self.c,
        ];
        if finite.iter().any(|x| !x.is_finite()) {
            return Err(Error::config("cavity parameters must be finite"));
        }
        if !(self.crystal_length > 0.0 && self.crystal_length < self.length) {
            return Err(Error::config(format!(
                "cavity.crystal_length must satisfy 0 < ell < L (ell = {}, L = {})",
                self.crystal_length, self.length
            )));
        }
        if self.n_crys < 1.0 {
            return Err(Error::config(format!("cavity.n_crys must be >= 1, got {}", self.n_crys)));
        }
        for (name, g) in [
            ("gamma_prime", Some(self.gamma_prime)),
            ("gamma_prime_1", self.gamma_prime_one),
            ("gamma_prime_2", self.gamma_prime_two),
        ] {
            if let Some(g) = g {
                if !(g >= 0.0 && g.is_finite()) {
                    return Err(Error::config(format!("cavity.{name} must be >= 0, got {g}")));
                }
            }
        }
        for (name, r) in [
            ("r_laser", self.r.laser),
            ("r_1", self.r.one),
            ("r_2", self.r.two),
            ("r2_single", self.r2_single),
        ] {
            if !(0.0..1.0).contains(&r) {
                return Err(Error::config(format!("cavity.{name} must lie in [0, 1), got {r}")));
            }
        }
        if self.c <= 0.0 {
            return Err(Error::config("cavity.c must be positive"));
        }
        Ok(())
    }

    /// Light velocity inside the crystal.
    pub fn c_medium(&self) -> f64 {
        self.c / self.n_crys
    }

    /// Free spectral range `2πc/L`.
    pub fn omega_fsr(&self) -> f64 {
        2.0 * PI * self.c / self.length
    }

    /// dφ/dω, the optical round-trip time.
    pub fn phase_slope(&self) -> f64 {
        ((self.length - self.crystal_length) + self.n_crys * self.crystal_length) / self.c
    }

    /// Crystal damping seen by a field. The pump ignores `γ'`.
    pub fn gamma_for(&self, label: ModeLabel) -> f64 {
        match label {
            ModeLabel::Laser => 0.0,
            ModeLabel::One => self.gamma_prime_one.unwrap_or(self.gamma_prime),
            ModeLabel::Two => self.gamma_prime_two.unwrap_or(self.gamma_prime),
        }
    }

    /// Round-trip amplitude loss `r e^{−γ'ℓ}`.
    pub fn loss_factor(&self, label: ModeLabel) -> f64 {
        self.r.get(label) * (-self.gamma_for(label) * self.crystal_length).exp()
    }

    /// Round-trip phase `(ω/c)(L−ℓ) + (ω/c')ℓ`.
    pub fn phase(&self, omega: f64) -> Result<f64> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::domain(format!("angular frequency must be positive, got {omega}")));
        }
        Ok(omega / self.c * (self.length - self.crystal_length)
            + omega / self.c_medium() * self.crystal_length)
    }

    fn checked_loss(&self, label: ModeLabel) -> Result<f64> {
        let x = self.loss_factor(label);
        if x >= 1.0 {
            return Err(Error::config(format!(
                "mirror product times crystal loss must be < 1 for mode {}, got {x}",
                label.as_str()
            )));
        }
        Ok(x)
    }

    /// Resonance enhancement `|K|²`.
    pub fn k_round_trip_mag2(&self, omega: f64, label: ModeLabel) -> Result<f64> {
        let x = self.checked_loss(label)?;
        let phi = self.phase(omega)?;
        let s = (0.5 * phi).sin();
        Ok(1.0 / ((1.0 - x).powi(2) + 4.0 * x * s * s))
    }

    /// Geometric round-trip factor `1/(1 − r e^{iφ−γ'ℓ})`.
    fn round_trip(&self, label: ModeLabel, omega: f64) -> Result<C64> {
        let x = self.checked_loss(label)?;
        let phi = self.phase(omega)?;
        let den = C64::new(1.0, 0.0) - C64::from_polar(x, phi);
        if den.norm() < 1e-15 {
            return Err(Error::config(format!(
                "singular round-trip factor for mode {} (perfect reflection on resonance)",
                label.as_str()
            )));
        }
        Ok(den.inv())
    }

    fn check_in_crystal(&self, z: f64, what: &str) -> Result<()> {
        let half = 0.5 * self.crystal_length;
        let slack = 1e-12 * self.crystal_length;
        if !z.is_finite() || z < -half - slack || z > half + slack {
            return Err(Error::domain(format!(
                "{what} = {z} m lies outside the crystal [-{half}, {half}]"
            )));
        }
        Ok(())
    }

    /// Phase-stripped crystal-to-crystal propagator factor.
    pub fn k_crystal(&self, label: ModeLabel, omega: f64, z: f64, z_prime: f64) -> Result<C64> {
        self.check_in_crystal(z, "z")?;
        self.check_in_crystal(z_prime, "z'")?;
        let att = (-self.gamma_for(label) * (z - z_prime).abs()).exp();
        Ok(self.round_trip(label, omega)? * att)
    }

    /// Pump propagator factor `1/(1 − r_L e^{iφ(ω_L)})`; no crystal damping.
    /// The positions only fix the legs it sits on and do not enter the value.
    pub fn k_laser(&self, omega_l: f64) -> Result<C64> {
        self.round_trip(ModeLabel::Laser, omega_l)
    }

    /// Factor from the last interaction point `z_f` out through M₂ to the detector.
    pub fn k_to_detector(&self, label: ModeLabel, omega: f64, z_f: f64) -> Result<C64> {
        self.check_in_crystal(z_f, "z_f")?;
        let g = self.gamma_for(label);
        let trans = (1.0 - self.r2_single * self.r2_single).sqrt();
        let att = (-g * (0.5 * self.crystal_length - z_f)).exp();
        Ok(self.round_trip(label, omega)? * (trans * att))
    }

    pub fn fwhm_estimate(&self, label: ModeLabel) -> Result<FwhmEstimate> {
        let mut est = fwhm_from_loss(self.loss_factor(label))?;
        est.omega_fsr = self.omega_fsr();
        Ok(est)
    }

    /// Samples `|K|²` over `omega_grid` and locates its interior maxima.
    pub fn resonance_scan(&self, label: ModeLabel, omega_grid: &[f64]) -> Result<ResonanceScan> {
        if omega_grid.is_empty() {
            return Err(Error::domain("resonance scan needs a non-empty frequency grid"));
        }
        if omega_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::domain("resonance scan grid must be strictly increasing"));
        }
        self.checked_loss(label)?;
        let values = omega_grid
            .par_iter()
            .map(|&w| self.k_round_trip_mag2(w, label))
            .collect::<Result<Vec<_>>>()?;
        let points: Vec<ScanPoint> = omega_grid
            .iter()
            .zip(&values)
            .map(|(&omega, &k_mag2)| ScanPoint { omega, k_mag2 })
            .collect();

        let mut peaks = Vec::new();
        for i in 1..points.len().saturating_sub(1) {
            let (l, m, r) = (&points[i - 1], &points[i], &points[i + 1]);
            if m.k_mag2 > l.k_mag2 && m.k_mag2 >= r.k_mag2 {
                let omega = parabolic_vertex(
                    (l.omega, l.k_mag2),
                    (m.omega, m.k_mag2),
                    (r.omega, r.k_mag2),
                );
                let k_mag2 = self.k_round_trip_mag2(omega, label)?;
                let phase_over_2pi = self.phase(omega)? / (2.0 * PI);
                peaks.push(ResonancePeak { grid_index: i, omega, k_mag2, phase_over_2pi });
            }
        }
        Ok(ResonanceScan { label, points, peaks })
    }
}

/// Width estimate `|1 − x|/√x` for round-trip loss `x = r e^{−γ'ℓ}`.
///
/// The value is a width in the half-phase variable φ/2; `valid` is false when
/// `x < 0.9`, outside the narrow-resonance regime the formula assumes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FwhmEstimate {
    pub width: f64,
    pub loss: f64,
    pub omega_fsr: f64,
    pub valid: bool,
}

pub fn fwhm_from_loss(x: f64) -> Result<FwhmEstimate> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::config(format!("round-trip loss factor must lie in (0, 1], got {x}")));
    }
    Ok(FwhmEstimate {
        width: (1.0 - x).abs() / x.sqrt(),
        loss: x,
        omega_fsr: f64::NAN,
        valid: x >= 0.9,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub omega: f64,
    pub k_mag2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonancePeak {
    pub grid_index: usize,
    /// Peak position after parabolic refinement.
    pub omega: f64,
    pub k_mag2: f64,
    pub phase_over_2pi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceScan {
    pub label: ModeLabel,
    pub points: Vec<ScanPoint>,
    pub peaks: Vec<ResonancePeak>,
}

impl ResonanceScan {
    /// Full width at half maximum (in ω) of a located peak, from linear
    /// interpolation of the sampled curve. `None` when a half-maximum
    /// crossing falls outside the grid.
    pub fn half_max_width(&self, peak: &ResonancePeak) -> Option<f64> {
        let half = 0.5 * peak.k_mag2;
        let pts = &self.points;
        let crossing = |a: &ScanPoint, b: &ScanPoint| {
            let t = (half - a.k_mag2) / (b.k_mag2 - a.k_mag2);
            a.omega + t * (b.omega - a.omega)
        };
        let mut left = None;
        for i in (0..peak.grid_index).rev() {
            if pts[i].k_mag2 <= half {
                left = Some(crossing(&pts[i], &pts[i + 1]));
                break;
            }
        }
        let mut right = None;
        for i in peak.grid_index + 1..pts.len() {
            if pts[i].k_mag2 <= half {
                right = Some(crossing(&pts[i - 1], &pts[i]));
                break;
            }
        }
        Some(right? - left?)
    }
}

fn parabolic_vertex(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    let (x1, y1) = a;
    let (x2, y2) = b;
    let (x3, y3) = c;
    let num = (x2 - x1).powi(2) * (y2 - y3) - (x2 - x3).powi(2) * (y2 - y1);
    let den = (x2 - x1) * (y2 - y3) - (x2 - x3) * (y2 - y1);
    if den == 0.0 {
        return x2;
    }
    let x = x2 - 0.5 * num / den;
    x.clamp(x1, x3)
}

/// Laser frequency, Gaussian averaging parameters and the two retained
/// photon modes `ω₁ = ω_L/4`, `ω₂ = ω_L/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeSet {
    pub omega_l: f64,
    pub omega_r: f64,
    pub delta: f64,
}

impl ModeSet {
    pub fn new(omega_l: f64, omega_r: f64, delta: f64) -> Result<Self> {
        let m = ModeSet { omega_l, omega_r, delta };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_l > 0.0 && self.omega_l.is_finite()) {
            return Err(Error::config("modes.omega_laser must be positive"));
        }
        if !(self.omega_r > 0.0 && self.omega_r.is_finite()) {
            return Err(Error::config("modes.omega_resonance must be positive"));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::config("modes.delta must be positive"));
        }
        Ok(())
    }

    pub fn omega_1(&self) -> f64 {
        self.omega_l / 4.0
    }

    pub fn omega_2(&self) -> f64 {
        self.omega_l / 2.0
    }

    pub fn omega(&self, label: ModeLabel) -> f64 {
        match label {
            ModeLabel::Laser => self.omega_l,
            ModeLabel::One => self.omega_1(),
            ModeLabel::Two => self.omega_2(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const C: f64 = 299_792_458.0;

    fn config(r: f64, gamma_prime: f64) -> CavityConfig {
        CavityConfig {
            length: 1.5,
            crystal_length: 0.01,
            n_crys: 2.2,
            gamma_prime,
            gamma_prime_one: None,
            gamma_prime_two: None,
            r: PerMode { laser: r, one: r, two: r },
            r2_single: 0.0,
            c: C,
        }
    }

    #[test]
    fn phase_one_wavelength_without_crystal() {
        let mut cfg = config(0.5, 0.0);
        cfg.length = 1.0;
        cfg.crystal_length = 1e-300;
        let phi = cfg.phase(2.0 * PI * C).unwrap();
        assert!((phi - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn phase_vacuum_like_crystal() {
        let mut cfg = config(0.5, 0.0);
        cfg.n_crys = 1.0;
        for ell in [0.001, 0.3, 1.2] {
            cfg.crystal_length = ell;
            let w = 3.7e15;
            let phi = cfg.phase(w).unwrap();
            assert!((phi - w * cfg.length / C).abs() < 1e-9 * phi);
        }
    }

    #[test]
    fn phase_generic_value() {
        // 50-digit decimal evaluation of (ω/c)(L−ℓ) + (ω n/c)ℓ
        let cfg = config(0.5, 0.0);
        let phi = cfg.phase(1.2e16).unwrap();
        let expected = 60_521_869.432_752_707_874_992_64;
        assert!((phi - expected).abs() <= 2e-16 * expected);
    }

    #[test]
    fn phase_rejects_nonpositive_frequency() {
        let cfg = config(0.5, 0.0);
        assert!(matches!(cfg.phase(0.0), Err(Error::Domain(_))));
        assert!(matches!(cfg.phase(-1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn k_mag2_on_resonance_and_without_feedback() {
        let cfg = config(0.9, 0.0);
        // φ = 2π·q exactly when ω = 2πq/phase_slope
        let w = 2.0 * PI * 1.0e6 / cfg.phase_slope();
        let k = cfg.k_round_trip_mag2(w, ModeLabel::One).unwrap();
        assert!((k - 100.0).abs() < 1e-6 * 100.0);

        let cfg0 = config(0.0, 0.0);
        for w in [1e14, 2.3e15, 7.77e15] {
            assert!((cfg0.k_round_trip_mag2(w, ModeLabel::Two).unwrap() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn k_mag2_off_resonance_matches_scan_minimum() {
        // x = 0.99 at φ = π: 1/((0.01)² + 4·0.99) = 1/3.9601
        let cfg = config(0.99, 0.0);
        let w = PI * (2.0 * 1.0e6 + 1.0) / cfg.phase_slope();
        let k = cfg.k_round_trip_mag2(w, ModeLabel::One).unwrap();
        let expected = 1.0 / 3.9601;
        assert!((k - expected).abs() < 1e-6 * expected);

        let fsr = 2.0 * PI / cfg.phase_slope();
        let grid: Vec<f64> = (0..2001).map(|i| w - 0.5 * fsr + fsr * i as f64 / 2000.0).collect();
        let scan = cfg.resonance_scan(ModeLabel::One, &grid).unwrap();
        let min = scan.points.iter().map(|p| p.k_mag2).fold(f64::INFINITY, f64::min);
        assert!((min - expected).abs() < 1e-6);
    }

    #[test]
    fn k_mag2_rejects_lossless_mirror_product() {
        let mut cfg = config(0.5, 0.0);
        cfg.r.one = 1.0;
        assert!(matches!(cfg.k_round_trip_mag2(1e15, ModeLabel::One), Err(Error::Config(_))));
    }

    #[test]
    fn fwhm_examples() {
        assert_eq!(fwhm_from_loss(1.0).unwrap().width, 0.0);
        let e = fwhm_from_loss(0.9).unwrap();
        assert!((e.width - 0.105_409_255_338_945_97).abs() < 1e-12);
        assert!(e.valid);
        let e = fwhm_from_loss(0.25).unwrap();
        assert!((e.width - 1.5).abs() < 1e-15);
        assert!(!e.valid);
        assert!(fwhm_from_loss(0.0).is_err());
        assert!(fwhm_from_loss(1.5).is_err());
    }

    #[test]
    fn scan_over_one_fsr_has_single_peak_at_integer_order() {
        let mut cfg = config(0.9, 0.0);
        cfg.n_crys = 1.0;
        let fsr = cfg.omega_fsr();
        let start = 1.0e6 * fsr + 0.3 * fsr;
        let n = 4001;
        let grid: Vec<f64> = (0..n).map(|i| start + fsr * i as f64 / (n - 1) as f64).collect();
        let scan = cfg.resonance_scan(ModeLabel::One, &grid).unwrap();
        assert_eq!(scan.peaks.len(), 1);
        let p = &scan.peaks[0];
        let step = fsr / (n - 1) as f64;
        let order = p.phase_over_2pi.round();
        let exact = order * fsr;
        assert!((p.omega - exact).abs() < step);
        let off = cfg.k_round_trip_mag2(grid[0], ModeLabel::One).unwrap();
        assert!((scan.points[0].k_mag2 - off).abs() < 1e-15);
    }

    #[test]
    fn scan_rejects_empty_grid() {
        let cfg = config(0.9, 0.0);
        assert!(matches!(cfg.resonance_scan(ModeLabel::One, &[]), Err(Error::Domain(_))));
    }

    #[test]
    fn k_crystal_trivial_limits() {
        let cfg = config(0.0, 3.0);
        assert_eq!(cfg.k_crystal(ModeLabel::One, 1e15, 0.001, 0.001).unwrap(), C64::new(1.0, 0.0));

        let cfg = config(0.7, 0.0);
        let w = 1.3e15;
        let phi = cfg.phase(w).unwrap();
        let expected = (C64::new(1.0, 0.0) - C64::from_polar(0.7, phi)).inv();
        for (z, zp) in [(-0.005, 0.005), (0.0, 0.002), (0.004, -0.001)] {
            let k = cfg.k_crystal(ModeLabel::Two, w, z, zp).unwrap();
            assert!((k - expected).norm() < 1e-12 * expected.norm());
        }
    }

    #[test]
    fn k_crystal_generic_and_symmetric() {
        let cfg = config(0.8, 5.0);
        let w = 9.1e14;
        let (z, zp) = (-0.0031, 0.0042);
        let k = cfg.k_crystal(ModeLabel::One, w, z, zp).unwrap();
        // independent evaluation in explicit real arithmetic
        let phi = w / C * (1.5 - 0.01) + w * 2.2 / C * 0.01;
        let x = 0.8 * (-5.0f64 * 0.01).exp();
        let (re, im) = (1.0 - x * phi.cos(), -x * phi.sin());
        let att = (-5.0f64 * 0.0073).exp();
        let d2 = re * re + im * im;
        let expected = C64::new(att * re / d2, -att * im / d2);
        assert!((k - expected).norm() < 1e-9 * expected.norm());
        let k_swapped = cfg.k_crystal(ModeLabel::One, w, zp, z).unwrap();
        assert_eq!(k, k_swapped);
        assert!(matches!(cfg.k_crystal(ModeLabel::One, w, 0.02, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn k_laser_values() {
        let cfg = config(0.0, 1.0);
        assert_eq!(cfg.k_laser(1e15).unwrap(), C64::new(1.0, 0.0));
        let cfg = config(0.5, 1.0);
        let w = PI * (2.0 * 1.0e6 + 1.0) / cfg.phase_slope();
        let k = cfg.k_laser(w).unwrap();
        assert!((k - C64::new(1.0 / 1.5, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn k_laser_singular_configuration() {
        let mut cfg = config(0.5, 0.0);
        cfg.r.laser = 1.0;
        let w = 2.0 * PI * 1.0e6 / cfg.phase_slope();
        assert!(cfg.k_laser(w).is_err());
    }

    #[test]
    fn k_to_detector_values() {
        let cfg = config(0.0, 0.0);
        assert_eq!(cfg.k_to_detector(ModeLabel::Two, 1e15, 0.0).unwrap(), C64::new(1.0, 0.0));

        let mut cfg = config(0.6, 4.0);
        cfg.r2_single = 0.3;
        let w = 7.0e14;
        let at_exit = cfg.k_to_detector(ModeLabel::One, w, 0.005).unwrap();
        let bare = cfg.k_crystal(ModeLabel::One, w, 0.0, 0.0).unwrap();
        assert!((at_exit - bare * (1.0 - 0.09f64).sqrt()).norm() < 1e-14);

        let z_f = -0.002;
        let k = cfg.k_to_detector(ModeLabel::One, w, z_f).unwrap();
        let expected = bare * (0.91f64.sqrt() * (-4.0f64 * (0.005 - z_f)).exp());
        assert!((k - expected).norm() < 1e-13 * expected.norm());
    }

    #[test]
    fn validation_names_the_key() {
        let mut cfg = config(0.5, 0.0);
        cfg.r.two = 1.0;
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("r_2"));
        let mut cfg = config(0.5, 0.0);
        cfg.crystal_length = 2.0;
        assert!(cfg.validate().unwrap_err().to_string().contains("crystal_length"));
    }

    #[test]
    fn mode_set_frequencies() {
        let m = ModeSet::new(4.0e15, 4.0e15, 1.0).unwrap();
        assert_eq!(m.omega_1(), 1.0e15);
        assert_eq!(m.omega_2(), 2.0e15);
        assert!(ModeSet::new(1.0, 1.0, 0.0).is_err());
    }
}
