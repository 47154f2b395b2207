//! TOML run configuration.
//!
//! Every section is optional except the three required keys
//! `cavity.length`, `cavity.crystal_length` and `modes.omega_laser`.
//! Keys left out are filled with defaults by [`RunConfig::resolve`], and the
//! resolved values are what the manifest records.

use std::path::Path;

use ringopo_core::cavity::{CavityConfig, ModeLabel, ModeSet, PerMode};
use ringopo_core::fockspace::Cutoff;
use ringopo_core::genqueeze::GenSqueezeSpec;
use ringopo_core::langevin::LaserRates;
use ringopo_core::lindblad::gamma_from_mirror;
use ringopo_core::observables::{CorrelatorKind, HusimiSpec};
use ringopo_core::vertexcat::{Convention, CouplingSet};
use ringopo_core::C64;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
pub const EPS0: f64 = 8.854_187_812_8e-12;
pub const HBAR: f64 = 1.054_571_817e-34;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub run: RunSection,
    pub cavity: CavitySection,
    pub modes: ModesSection,
    pub couplings: CouplingsSection,
    pub cutoff: CutoffSection,
    pub smatrix: SMatrixSection,
    pub scan: ScanSection,
    pub vertex_table: VertexTableSection,
    pub husimi: HusimiSection,
    pub lindblad: LindbladSection,
    pub spectra: SpectraSection,
    pub langevin: LangevinSection,
    pub genqueeze: GenqueezeSection,
    pub output: OutputSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            run: RunSection::default(),
            cavity: CavitySection::default(),
            modes: ModesSection::default(),
            couplings: CouplingsSection::default(),
            cutoff: CutoffSection::default(),
            smatrix: SMatrixSection::default(),
            scan: ScanSection::default(),
            vertex_table: VertexTableSection::default(),
            husimi: HusimiSection::default(),
            lindblad: LindbladSection::default(),
            spectra: SpectraSection::default(),
            langevin: LangevinSection::default(),
            genqueeze: GenqueezeSection::default(),
            output: OutputSection::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSection {
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CavitySection {
    pub length: Option<f64>,
    pub crystal_length: Option<f64>,
    pub n_crys: f64,
    pub gamma_prime: f64,
    pub gamma_prime_1: Option<f64>,
    pub gamma_prime_2: Option<f64>,
    pub r_laser: f64,
    pub r_1: f64,
    pub r_2: f64,
    pub r2_single: f64,
    pub c: f64,
}

impl Default for CavitySection {
    fn default() -> Self {
        CavitySection {
            length: None,
            crystal_length: None,
            n_crys: 2.2,
            gamma_prime: 0.1,
            gamma_prime_1: None,
            gamma_prime_2: None,
            r_laser: 0.3,
            r_1: 0.9,
            r_2: 0.9,
            r2_single: 0.95,
            c: SPEED_OF_LIGHT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModesSection {
    pub omega_laser: Option<f64>,
    /// Defaults to `omega_laser`.
    pub omega_resonance: Option<f64>,
    pub delta: f64,
}

impl Default for ModesSection {
    fn default() -> Self {
        ModesSection { omega_laser: None, omega_resonance: None, delta: 1.0e12 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CouplingsSection {
    pub chi2: f64,
    pub chi4: f64,
    /// Relative permittivity; defaults to `n_crys²`.
    pub eps_r: Option<f64>,
    pub e_laser: f64,
    pub e_laser_phase: f64,
    pub a_crys: f64,
    pub eps0: f64,
    pub hbar: f64,
}

impl Default for CouplingsSection {
    fn default() -> Self {
        CouplingsSection {
            chi2: 1.0e-12,
            chi4: 1.0e-21,
            eps_r: None,
            e_laser: 1.0e6,
            e_laser_phase: 0.0,
            a_crys: 5.0e-10,
            eps0: EPS0,
            hbar: HBAR,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CutoffSection {
    pub n1_max: usize,
    pub n2_max: usize,
}

impl Default for CutoffSection {
    fn default() -> Self {
        let c = Cutoff::default();
        CutoffSection { n1_max: c.n1_max, n2_max: c.n2_max }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SMatrixSection {
    pub order_max: usize,
    pub m_points: usize,
    pub convention: String,
    pub full_gaussian: bool,
    pub initial: [usize; 2],
    pub max_moment: u32,
}

impl Default for SMatrixSection {
    fn default() -> Self {
        SMatrixSection {
            order_max: 2,
            m_points: 8,
            convention: Convention::Operator.as_str().to_string(),
            full_gaussian: false,
            initial: [0, 0],
            max_moment: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScanSection {
    /// Any of "L", "1", "2".
    pub labels: Vec<String>,
    /// Scan width in free spectral ranges, centred on each mode frequency.
    pub span_fsr: f64,
    pub points: usize,
}

impl Default for ScanSection {
    fn default() -> Self {
        ScanSection { labels: vec!["L".into(), "1".into(), "2".into()], span_fsr: 3.0, points: 3001 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VertexTableSection {
    pub n_max: usize,
    /// Position of the brute-force evaluation inside the crystal (m).
    pub z: f64,
}

impl Default for VertexTableSection {
    fn default() -> Self {
        VertexTableSection { n_max: 8, z: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HusimiSection {
    pub radius: f64,
    pub points: usize,
}

impl Default for HusimiSection {
    fn default() -> Self {
        let d = HusimiSpec::default();
        HusimiSection { radius: d.radius, points: d.points }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LindbladSection {
    /// "squeeze" or "vertex".
    pub hamiltonian: String,
    /// Defaults to `(c/L)(1 − r_i²)`.
    pub gamma_1: Option<f64>,
    pub gamma_2: Option<f64>,
    /// Squeezing strength as a fraction of `gamma_2`.
    pub lambda_over_gamma: f64,
    pub lambda_phase: f64,
    /// Length multiplying the vertex elements; defaults to the crystal length.
    pub vertex_scale: Option<f64>,
    pub n1_max: usize,
    pub n2_max: usize,
    pub dt: Option<f64>,
    pub t_end: Option<f64>,
    pub steady_tol: f64,
}

impl Default for LindbladSection {
    fn default() -> Self {
        LindbladSection {
            hamiltonian: "squeeze".into(),
            gamma_1: None,
            gamma_2: None,
            lambda_over_gamma: 0.25,
            lambda_phase: 0.0,
            vertex_scale: None,
            n1_max: 0,
            n2_max: 12,
            dt: None,
            t_end: None,
            steady_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectraSection {
    pub kind: String,
    pub theta: f64,
    /// Correlator window in units of `1/gamma_2`.
    pub tau_max_over_gamma: f64,
    pub tau_points: usize,
    pub sigma_points: usize,
    /// Frequency grid half-width in units of `gamma_2`.
    pub nu_max_over_gamma: f64,
    pub nu_points: usize,
}

impl Default for SpectraSection {
    fn default() -> Self {
        SpectraSection {
            kind: "C22".into(),
            theta: 0.0,
            tau_max_over_gamma: 40.0,
            tau_points: 641,
            sigma_points: 33,
            nu_max_over_gamma: 3.0,
            nu_points: 121,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LangevinSection {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Phase-diffusion time (s).
    pub t: f64,
    pub walkers: usize,
    pub walk_steps: usize,
    /// Linear drift and noise matrices, row-major and square.
    pub drift: Vec<f64>,
    pub noise: Vec<f64>,
    pub trajectories: usize,
    pub dt: Option<f64>,
    pub t_end: Option<f64>,
    pub record_every: usize,
    pub distribution_points: usize,
}

impl Default for LangevinSection {
    fn default() -> Self {
        LangevinSection {
            a: 1.0e6,
            b: 0.1,
            c: 1.0e4,
            t: 1.0e-8,
            walkers: 10_000,
            walk_steps: 100,
            drift: vec![1.0],
            noise: vec![1.0],
            trajectories: 10_000,
            dt: None,
            t_end: None,
            record_every: 50,
            distribution_points: 801,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GenqueezeSection {
    pub k: usize,
    pub z_re: f64,
    pub z_im: f64,
    pub cutoff_ladder: Vec<usize>,
}

impl Default for GenqueezeSection {
    fn default() -> Self {
        GenqueezeSection { k: 3, z_re: 0.1, z_im: 0.0, cutoff_ladder: vec![25, 50, 100, 200, 400] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: String,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection { dir: "out".into() }
    }
}

fn required(v: Option<f64>, key: &str) -> Result<f64, CliError> {
    v.ok_or_else(|| CliError::Validation(format!("missing required key {key}")))
}

fn check(cond: bool, key: &str, constraint: &str) -> Result<(), CliError> {
    if cond {
        Ok(())
    } else {
        Err(CliError::Validation(format!("{key}: {constraint}")))
    }
}

/// Reads, parses and resolves a configuration file.
pub fn parse_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_str(&text)
}

pub fn parse_config_str(text: &str) -> Result<RunConfig, CliError> {
    let mut cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Validation(e.to_string()))?;
    cfg.resolve()?;
    Ok(cfg)
}

impl RunConfig {
    /// Fills derived defaults and validates every section.
    pub fn resolve(&mut self) -> Result<(), CliError> {
        let length = required(self.cavity.length, "cavity.length")?;
        required(self.cavity.crystal_length, "cavity.crystal_length")?;
        let omega_l = required(self.modes.omega_laser, "modes.omega_laser")?;
        self.modes.omega_resonance.get_or_insert(omega_l);
        self.couplings.eps_r.get_or_insert(self.cavity.n_crys * self.cavity.n_crys);

        let cavity = self.cavity_config()?;
        cavity.validate()?;
        self.mode_set()?;
        self.coupling_set()?.validate()?;
        self.smatrix_cutoff()?;
        Convention::parse(&self.smatrix.convention)?;
        check(self.smatrix.m_points >= 1, "smatrix.m_points", "must be >= 1")?;
        for l in &self.scan.labels {
            check(ModeLabel::parse(l).is_some(), "scan.labels", "entries must be \"L\", \"1\" or \"2\"")?;
        }
        check(self.scan.points >= 3, "scan.points", "must be >= 3")?;
        check(self.scan.span_fsr > 0.0, "scan.span_fsr", "must be positive")?;
        self.husimi_spec().validate()?;

        let c = self.cavity.c;
        self.lindblad.gamma_1.get_or_insert(gamma_from_mirror(c, length, self.cavity.r_1));
        self.lindblad.gamma_2.get_or_insert(gamma_from_mirror(c, length, self.cavity.r_2));
        self.lindblad.vertex_scale.get_or_insert(cavity.crystal_length);
        let (g1, g2) = self.gammas();
        check(g1 >= 0.0 && g2 >= 0.0, "lindblad.gamma_1/gamma_2", "must be >= 0")?;
        check(g2 > 0.0, "lindblad.gamma_2", "must be positive")?;
        check(
            matches!(self.lindblad.hamiltonian.as_str(), "squeeze" | "vertex"),
            "lindblad.hamiltonian",
            "must be \"squeeze\" or \"vertex\"",
        )?;
        check(self.lindblad.lambda_over_gamma >= 0.0, "lindblad.lambda_over_gamma", "must be >= 0")?;
        Cutoff::new(self.lindblad.n1_max, self.lindblad.n2_max)?;
        let gmax = g1.max(g2);
        let nmax = self.lindblad.n1_max.max(self.lindblad.n2_max) as f64;
        let lam = self.lindblad.lambda_over_gamma * g2;
        let stiff = gmax * (nmax + 1.0) + 2.0 * lam * (nmax + 1.0);
        self.lindblad.dt.get_or_insert((1.0 / (16.0 * gmax)).min(1.0 / stiff));
        let gmin = if g1 > 0.0 { g1.min(g2) } else { g2 };
        self.lindblad.t_end.get_or_insert(100.0 / gmin);
        check(self.lindblad.dt.unwrap() > 0.0, "lindblad.dt", "must be positive")?;
        check(self.lindblad.t_end.unwrap() > 0.0, "lindblad.t_end", "must be positive")?;

        CorrelatorKind::parse(&self.spectra.kind)?;
        check(self.spectra.tau_points >= 2, "spectra.tau_points", "must be >= 2")?;
        check(self.spectra.sigma_points >= 2, "spectra.sigma_points", "must be >= 2")?;
        check(self.spectra.nu_points >= 1, "spectra.nu_points", "must be >= 1")?;
        check(self.spectra.tau_max_over_gamma > 0.0, "spectra.tau_max_over_gamma", "must be positive")?;

        self.laser_rates().validate()?;
        let n = (self.langevin.drift.len() as f64).sqrt() as usize;
        check(n >= 1 && n * n == self.langevin.drift.len(), "langevin.drift", "must hold a square matrix")?;
        check(self.langevin.noise.len() == n * n, "langevin.noise", "must match the drift shape")?;
        check(self.langevin.trajectories >= 2, "langevin.trajectories", "must be >= 2")?;
        check(self.langevin.walkers >= 2, "langevin.walkers", "must be >= 2")?;
        check(self.langevin.walk_steps >= 1, "langevin.walk_steps", "must be >= 1")?;
        check(self.langevin.t >= 0.0, "langevin.t", "must be >= 0")?;
        check(self.langevin.distribution_points >= 3, "langevin.distribution_points", "must be >= 3")?;
        if self.langevin.dt.is_none() || self.langevin.t_end.is_none() {
            let a = nalgebra_free_spectral_bound(&self.langevin.drift, n);
            self.langevin.dt.get_or_insert(0.01 / a);
            self.langevin.t_end.get_or_insert(10.0 / a);
        }

        self.genqueeze_spec()?.validate()?;
        check(!self.output.dir.is_empty(), "output.dir", "must not be empty")?;
        Ok(())
    }

    pub fn cavity_config(&self) -> Result<CavityConfig, CliError> {
        let s = &self.cavity;
        Ok(CavityConfig {
            length: required(s.length, "cavity.length")?,
            crystal_length: required(s.crystal_length, "cavity.crystal_length")?,
            n_crys: s.n_crys,
            gamma_prime: s.gamma_prime,
            gamma_prime_one: s.gamma_prime_1,
            gamma_prime_two: s.gamma_prime_2,
            r: PerMode { laser: s.r_laser, one: s.r_1, two: s.r_2 },
            r2_single: s.r2_single,
            c: s.c,
        })
    }

    pub fn mode_set(&self) -> Result<ModeSet, CliError> {
        let omega_l = required(self.modes.omega_laser, "modes.omega_laser")?;
        Ok(ModeSet::new(omega_l, self.modes.omega_resonance.unwrap_or(omega_l), self.modes.delta)?)
    }

    pub fn coupling_set(&self) -> Result<CouplingSet, CliError> {
        let s = &self.couplings;
        let eps_r = s.eps_r.unwrap_or(self.cavity.n_crys * self.cavity.n_crys);
        Ok(CouplingSet {
            chi2: s.chi2,
            chi4: s.chi4,
            eps0: s.eps0,
            eps: eps_r * s.eps0,
            e_laser: C64::from_polar(s.e_laser, s.e_laser_phase),
            a_crys: s.a_crys,
            hbar: s.hbar,
            length: required(self.cavity.length, "cavity.length")?,
            c_medium: self.cavity.c / self.cavity.n_crys,
        })
    }

    pub fn smatrix_cutoff(&self) -> Result<Cutoff, CliError> {
        Ok(Cutoff::new(self.cutoff.n1_max, self.cutoff.n2_max)?)
    }

    pub fn convention(&self) -> Result<Convention, CliError> {
        Ok(Convention::parse(&self.smatrix.convention)?)
    }

    pub fn husimi_spec(&self) -> HusimiSpec {
        HusimiSpec { radius: self.husimi.radius, points: self.husimi.points }
    }

    pub fn gammas(&self) -> (f64, f64) {
        (self.lindblad.gamma_1.unwrap_or(0.0), self.lindblad.gamma_2.unwrap_or(0.0))
    }

    pub fn laser_rates(&self) -> LaserRates {
        LaserRates { a: self.langevin.a, b: self.langevin.b, c: self.langevin.c }
    }

    pub fn genqueeze_spec(&self) -> Result<GenSqueezeSpec, CliError> {
        let g = &self.genqueeze;
        let first = *g
            .cutoff_ladder
            .first()
            .ok_or_else(|| CliError::Validation("genqueeze.cutoff_ladder: must not be empty".into()))?;
        Ok(GenSqueezeSpec { k: g.k, z: C64::new(g.z_re, g.z_im), cutoff: first, cutoff_ladder: g.cutoff_ladder.clone() })
    }

    /// Applies command-line overrides and re-validates.
    pub fn apply_overrides(
        &mut self,
        seed: Option<u64>,
        order: Option<usize>,
        cutoff: Option<(usize, usize)>,
        out: Option<&Path>,
    ) -> Result<(), CliError> {
        if let Some(s) = seed {
            self.run.seed = s;
        }
        if let Some(o) = order {
            self.smatrix.order_max = o;
        }
        if let Some((a, b)) = cutoff {
            self.cutoff.n1_max = a;
            self.cutoff.n2_max = b;
        }
        if let Some(o) = out {
            self.output.dir = o.to_string_lossy().into_owned();
        }
        self.resolve()
    }
}

/// Row-sum bound on the drift eigenvalues, used for default step sizes.
fn nalgebra_free_spectral_bound(m: &[f64], n: usize) -> f64 {
    (0..n)
        .map(|i| (0..n).map(|j| m[i * n + j].abs()).sum::<f64>())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE)
}
