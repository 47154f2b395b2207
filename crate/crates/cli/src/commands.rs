//! Subcommand implementations. Each writes its artifacts through an
//! [`OutputDir`] and returns nothing else; the caller adds the manifest.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use ringopo_core::cavity::{FwhmEstimate, ModeLabel, ResonancePeak};
use ringopo_core::fockspace::{Cutoff, Mode};
use ringopo_core::genqueeze::convergence_report;
use ringopo_core::langevin::{
    langevin_linear, laser_number_stats, phase_diffusion, phase_walk, stationary_covariance,
    stationary_number_distribution, EnsembleSpec, LaserStats,
};
use ringopo_core::lindblad::{
    analytic_spectra, analytic_spectra_standard, half_width, output_spectrum_value, quadrature_basis,
    squeeze_hamiltonian, steady_state, vertex_hamiltonian, DensityMatrix, MasterConfig,
};
use ringopo_core::observables::{
    husimi, photon_stats, probabilities, quad_correlator, spectrum, CorrelatorKind, CorrelatorSetup,
};
use ringopo_core::series::SpectrumSeries;
use ringopo_core::smatrix::{s_matrix, SMatrixContext, SMatrixMeta, SMatrixResult};
use ringopo_core::vertexcat::{vertex_closed_form, VertexKind};
use ringopo_core::C64;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{num, OutputDir};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Subcommand {
    CavityScan,
    VertexTable,
    Smatrix,
    Observables,
    Husimi,
    Spectra,
    OracleSpectra,
    Langevin,
    Genqueeze,
}

impl Subcommand {
    pub const ALL: [Subcommand; 9] = [
        Subcommand::CavityScan,
        Subcommand::VertexTable,
        Subcommand::Smatrix,
        Subcommand::Observables,
        Subcommand::Husimi,
        Subcommand::Spectra,
        Subcommand::OracleSpectra,
        Subcommand::Langevin,
        Subcommand::Genqueeze,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Subcommand::CavityScan => "cavity-scan",
            Subcommand::VertexTable => "vertex-table",
            Subcommand::Smatrix => "smatrix",
            Subcommand::Observables => "observables",
            Subcommand::Husimi => "husimi",
            Subcommand::Spectra => "spectra",
            Subcommand::OracleSpectra => "oracle-spectra",
            Subcommand::Langevin => "langevin",
            Subcommand::Genqueeze => "genqueeze",
        }
    }
}

pub fn dispatch(cmd: Subcommand, cfg: &RunConfig, out: &mut OutputDir) -> Result<(), CliError> {
    match cmd {
        Subcommand::CavityScan => cavity_scan(cfg, out),
        Subcommand::VertexTable => vertex_table(cfg, out),
        Subcommand::Smatrix => smatrix(cfg, out),
        Subcommand::Observables => observables(cfg, out),
        Subcommand::Husimi => husimi_cmd(cfg, out),
        Subcommand::Spectra => spectra(cfg, out),
        Subcommand::OracleSpectra => oracle_spectra(cfg, out),
        Subcommand::Langevin => langevin(cfg, out),
        Subcommand::Genqueeze => genqueeze(cfg, out),
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let h = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| lo + i as f64 * h).collect()
}

#[derive(Serialize)]
struct PeakReport {
    label: ModeLabel,
    fwhm_estimate: FwhmEstimate,
    /// Estimate converted to rad/s through `Δω = 2·width/(dφ/dω)`.
    fwhm_estimate_omega: f64,
    peaks: Vec<PeakRow>,
}

#[derive(Serialize)]
struct PeakRow {
    #[serde(flatten)]
    peak: ResonancePeak,
    half_max_width: Option<f64>,
}

fn cavity_scan(cfg: &RunConfig, out: &mut OutputDir) -> Result<(), CliError> {
    let cav = cfg.cavity_config()?;
    let modes = cfg.mode_set()?;
    let fsr = cav.omega_fsr();
    let mut reports = Vec::new();
    for l in &cfg.scan.labels {
        let label = ModeLabel::parse(l).expect("validated label");
        let centre = modes.omega(label);
        let half = 0.5 * cfg.scan.span_fsr * fsr;
        let grid = linspace(centre - half, centre + half, cfg.scan.points);
        let scan = cav.resonance_scan(label, &grid)?;
        let rows: Vec<Vec<String>> = scan.points.iter().map(|p| vec![num(p.omega), num(p.k_mag2)]).collect();
        out.write_csv(&format!("cavity_scan_{}.csv", label.as_str()), &["omega_rad_per_s", "k_mag2"], &rows)?;
        let est = cav.fwhm_estimate(label)?;
        reports.push(PeakReport {
            label,
            fwhm_estimate: est,
            fwhm_estimate_omega: 2.0 * est.width / cav.phase_slope(),
            peaks: scan
                .peaks
                .iter()
                .map(|p| PeakRow { peak: *p, half_max_width: scan.half_max_width(p) })
                .collect(),
        });
    }
    out.write_json("cavity_peaks.json", &reports)
}

fn vertex_table(cfg: &RunConfig, out: &mut OutputDir) -> Result<(), CliError> {
    let coup = cfg.coupling_set()?;
    let modes = cfg.mode_set()?;
    let conv = cfg.convention()?;
    let n = cfg.vertex_table.n_max;
    let mut rows = Vec::new();
    for kind in VertexKind::ALL {
        for n1 in 0..=n {
            for n2 in 0..=n {
                if kind.ket_of((n1, n2)).is_none() {
                    continue;
                }
                let v = vertex_closed_form(kind, n1, n2, &coup, &modes, conv).value;
                rows.push(vec![
                    kind.label().to_string(),
                    n1.to_string(),
                    n2.to_string(),
                    num(v.re),
                    num(v.im),
                    conv.as_str().to_string(),
                ]);
            }
        }
    }
    out.write_csv("vertex_table.csv", &["kind", "n1", "n2", "re", "im", "convention"], &rows)
}

fn run_smatrix(cfg: &RunConfig) -> Result<SMatrixResult, CliError> {
    let mut ctx = SMatrixContext::new(
        cfg.cavity_config()?,
        cfg.coupling_set()?,
        cfg.mode_set()?,
        cfg.smatrix.m_points,
        cfg.convention()?,
    )?;
    ctx.full_gaussian = cfg.smatrix.full_gaussian;
    let [i1, i2] = cfg.smatrix.initial;
    let cut = cfg.smatrix_cutoff()?;
    if !cut.contains(i1, i2) {
        return Err(CliError::Validation(format!(
            "smatrix.initial: ({i1}, {i2}) lies outside the cutoff ({}, {})",
            cut.n1_max, cut.n2_max
        )));
    }
    Ok(s_matrix((i1, i2), cfg.smatrix.order_max, cut, &ctx)?)
}

#[derive(Serialize)]
struct AmplitudeRow {
    order: usize,
    final_state: [usize; 2],
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct TotalRow {
    final_state: [usize; 2],
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct SMatrixDump<'a> {
    params: &'a SMatrixMeta,
    initial: [usize; 2],
    per_order: Vec<AmplitudeRow>,
    totals: Vec<TotalRow>,
    norm_deficit: f64,
}

fn smatrix(cfg: &RunConfig, out: &mut OutputDir) -> Result<(), CliError> {
    let r = run_smatrix(cfg)?;
    let per_order = r
        .per_order
        .iter()
        .enumerate()
        .flat_map(|(order, m)| {
            m.iter().map(move |(s, a)| AmplitudeRow { order, final_state: [s.0, s.1], re: a.re, im: a.im })
        })
        .collect();
    let totals = r.totals.iter().map(|(s, a)| TotalRow { final_state: [s.0, s.1], re: a.re, im: a.im }).collect();
    out.write_json(
        "smatrix.json",
        &SMatrixDump {
            params: &r.meta,
            initial: [r.initial.0, r.initial.1],
            per_order,
            totals,
            norm_deficit: r.norm_deficit,
        },
    )
}

#[derive(Serialize)]
struct StatsDump {
    mean_n1: f64,
    mean_n2: f64,
    normalization: f64,
    norm_deficit: f64,
    moments: Vec<MomentRow>,
}

#[derive(Serialize)]
struct MomentRow {
    m1: u32,
    m2: u32,
    value: f64,
}

fn observables(cfg: &RunConfig, out: &mut OutputDir) -> Result<(), CliError> {
    let r = run_smatrix(cfg)?;
    let stats = photon_stats(&r, cfg.smatrix.max_moment)?;
    let (p, _) = probabilities(&r.totals)?;
    let rows: Vec<Vec<String>> =
        p.iter().map(|(s, w)| vec![s.0.to_string(), s.1.to_string(), num(*w)]).collect();
    out.write_csv("probabilities.csv", &["n1", "n2", "probability"], &rows)?;
    out.write_json(
        "photon_stats.json",
        &StatsDump {
            mean_n1: stats.mean_n1,
            mean_n2: stats.mean_n2,
            normalization: stats.normalization,
            norm_deficit: r.norm_deficit,
            moments: stats.moments.iter().map(|(&(m1, m2), &value)| MomentRow { m1, m2, value }).collect(),
        },
    )
}

#[derive(Serialize)]
struct HusimiSummary {
    radius: f64,
    points_per_axis: usize,
    integral_estimate: f64,
    min_value: f64,
    max_value: f64,
    warning: Option<String>,
}

fn husimi_cmd(cfg: &RunConfig, out: &mut OutputDir) -> Result<(), CliError> {
    let r = run_smatrix(cfg)?;
    let grid = husimi(&r, &cfg.husimi_spec())?;
    let rows: Vec<Vec<String>> = grid
        .points
        .iter()
        .map(|p| vec![num(p.alpha1.0), num(p.alpha1.1), num(p.alpha2.0), num(p.alpha2.1), num(p.value)])
        .collect();
    out.write_csv("husimi.csv", &["re_a1", "im_a1", "re_a2", "im_a2", "value"], &rows)?;
    let (lo, hi) = grid
        .points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.value), hi.max(p.value)));
    out.write_json(
        "husimi_summary.json",
        &HusimiSummary {
            radius: grid.spec.radius,
            points_per_axis: grid.spec.points,
            integral_estimate: grid.integral_estimate,
            min_value: lo,
            max_value: hi,
            warning: grid.warning.clone(),
        },
    )
}

/// Master-equation setup from the `[lindblad]` section.
pub fn master_config(cfg: &RunConfig, force_squeeze: bool) -> Result<MasterConfig, CliError> {
    let l = &cfg.lindblad;
    let cut = Cutoff::new(l.n1_max, l.n2_max)?;
    let (g1, g2) = cfg.gammas();
    let h = if force_squeeze || l.hamiltonian == "squeeze" {
        if l.n2_max < 2 {
            return Err(CliError::Validation("lindblad.n2_max: squeezing needs at least 2".into()));
        }
        squeeze_hamiltonian(C64::from_polar(l.lambda_over_gamma * g2, l.lambda_phase), Mode::Two, cut)
    } else {
        vertex_hamiltonian(
            &cfg.coupling_set()?,
            &cfg.mode_set()?,
            cut,
            cfg.convention()?,
            l.vertex_scale.expect("resolved"),
        )
    };
    let mc = MasterConfig::new([g1, g2], h, l.dt.expect("resolved"), l.t_end.expect("resolved"));
    mc.validate()?;
    Ok(mc)
}

fn write_series(out: &mut OutputDir, name: &str, s: &SpectrumSeries) -> Result<(), CliError> {
    if s.is_two_dim() {
        let mut rows = Vec::with_capacity(s.len());
        for (i, f) in s.freq.iter().enumerate() {
            for (j, f2) in s.freq2.iter().enumerate() {
                let (re, im) = s.at(i, j);
                rows.push(vec![num(*f), num(*f2), num(re), num(im)]);
            }
        }
        out.write_csv(name, &["mu", "nu", "re", "im"], &rows)
    } else {
        let rows: Vec<Vec<String>> =
            (0..s.freq.len()).map(|i| vec![num(s.freq[i]), num(s.re[i]), num(s.im[i])]).collect();
        out.write_csv(name, &["nu", "re", "im"], &rows)
    }
}

#[derive(Serialize)]
struct SpectraSummary<'a> {
    kind: &'a str,
    theta: f64,
    gamma: [f64; 2],
    steady_residual: f64,
    steady_warning: Option<String>,
    output_scale: f64,
    spectrum_metadata: &'a [(String, String)],
}

fn spectra(cfg: &RunConfig, out: &mut OutputDir) -> Result<(), CliError> {
    let s = &cfg.spectra;
    let kind = CorrelatorKind::parse(&s.kind)?;
    let mc = master_config(cfg, false)?;
    let tol = cfg.lindblad.steady_tol;
    let setup = CorrelatorSetup::steady(mc, tol)?;
    let g2 = cfg.gammas().1;
    let tau = linspace(0.0, s.tau_max_over_gamma / g2, s.tau_points);
    let sigma = if kind.is_three_point() { linspace(0.0, s.tau_max_over_gamma / g2, s.sigma_points) } else { vec![] };
    let corr = quad_correlator(kind, s.theta, &tau, &sigma, &setup)?;
    let tag = kind.as_str();
    let rows: Vec<Vec<String>> = if kind.is_three_point() {
        let mut rows = Vec::new();
        for (i, t) in corr.tau.iter().enumerate() {
            for (j, sg) in corr.sigma.iter().enumerate() {
                let c = corr.at(i, j);
                rows.push(vec![num(*t), num(*sg), num(c.re), num(c.im)]);
            }
        }
        rows
    } else {
        corr.tau.iter().zip(&corr.values).map(|(t, c)| vec![num(*t), num(c.re), num(c.im)]).collect()
    };
    let header: &[&str] = if kind.is_three_point() { &["tau", "sigma", "re", "im"] } else { &["tau", "re", "im"] };
    out.write_csv(&format!("correlator_{tag}.csv"), header, &rows)?;
    let nu = linspace(-s.nu_max_over_gamma * g2, s.nu_max_over_gamma * g2, s.nu_points);
    let spec = spectrum(&corr, &nu, &nu)?;
    write_series(out, &format!("spectrum_{}.csv", spec.name), &spec)?;
    out.write_json(
        "spectra.json",
        &SpectraSummary {
            kind: tag,
            theta: s.theta,
            gamma: setup.cfg.gamma,
            steady_residual: setup.residual,
            steady_warning: setup.warning.clone(),
            output_scale: corr.output_scale,
            spectrum_metadata: &spec.metadata,
        },
    )
}

/// Regression spectra of the degenerate squeezer next to the analytic forms.
#[derive(Debug, Clone, Serialize)]
pub struct OracleSpectra {
    pub gamma: f64,
    pub lambda: f64,
    pub theta_min: f64,
    pub omega: Vec<f64>,
    pub s_theta_min: Vec<f64>,
    pub s_theta_plus90: Vec<f64>,
    pub s1_analytic: Vec<f64>,
    pub s2_analytic: Vec<f64>,
    pub s1_standard: Vec<f64>,
    pub s2_standard: Vec<f64>,
    pub half_width_min: f64,
    pub half_width_plus90: f64,
    pub steady_residual: f64,
    pub threshold_warning: bool,
}

pub fn compute_oracle_spectra(cfg: &RunConfig) -> Result<OracleSpectra, CliError> {
    let mc = master_config(cfg, true)?;
    let g = mc.gamma[1];
    let lam = cfg.lindblad.lambda_over_gamma * g;
    let ss = steady_state(&DensityMatrix::vacuum(mc.hamiltonian.cutoff), &mc, cfg.lindblad.steady_tol)?;
    let slowest = (0.5 * g - lam).max(0.02 * g);
    let dt = mc.dt;
    let steps = (25.0 / slowest / dt).ceil() as usize;
    let tau: Vec<f64> = (0..=steps).map(|i| i as f64 * dt).collect();
    let basis = quadrature_basis(&ss.rho, Mode::Two, &tau, &mc)?;
    let theta_min = 0.5 * cfg.lindblad.lambda_phase + 0.5 * PI;
    let c_min = basis.correlation(theta_min);
    let c_plus = basis.correlation(theta_min + 0.5 * PI);
    let s_min = |w: f64| output_spectrum_value(&c_min, dt, g, w);
    let s_plus = |w: f64| output_spectrum_value(&c_plus, dt, g, w);
    let s = &cfg.spectra;
    let omega = linspace(-s.nu_max_over_gamma * g, s.nu_max_over_gamma * g, s.nu_points);
    let printed = analytic_spectra(lam, g, 0.0, &omega);
    let standard = analytic_spectra_standard(lam, g, 0.0, &omega);
    let (hw_min, hw_plus) = if lam > 0.0 {
        (half_width(s_min, 0.1 * g)?, half_width(s_plus, 0.1 * g)?)
    } else {
        (f64::NAN, f64::NAN)
    };
    Ok(OracleSpectra {
        gamma: g,
        lambda: lam,
        theta_min,
        s_theta_min: omega.iter().map(|&w| s_min(w)).collect(),
        s_theta_plus90: omega.iter().map(|&w| s_plus(w)).collect(),
        omega,
        s1_analytic: printed.s1,
        s2_analytic: printed.s2,
        s1_standard: standard.s1,
        s2_standard: standard.s2,
        half_width_min: hw_min,
        half_width_plus90: hw_plus,
        steady_residual: ss.residual,
        threshold_warning: printed.threshold_warning,
    })
}

#[derive(Serialize)]
struct OracleSummary {
    gamma: f64,
    lambda: f64,
    theta_min: f64,
    half_width_min: f64,
    half_width_plus90: f64,
    expected_half_width_min: f64,
    expected_half_width_plus90: f64,
    s_theta_min_at_zero: f64,
    s_theta_plus90_at_zero: f64,
    steady_residual: f64,
    threshold_warning: bool,
}

fn oracle_spectra(cfg: &RunConfig, out: &mut OutputDir) -> Result<(), CliError> {
    let o = compute_oracle_spectra(cfg)?;
    let rows: Vec<Vec<String>> = (0..o.omega.len())
        .map(|i| {
            vec![
                num(o.omega[i]),
                num(o.s_theta_min[i]),
                num(o.s_theta_plus90[i]),
                num(o.s1_analytic[i]),
                num(o.s2_analytic[i]),
                num(o.s1_standard[i]),
                num(o.s2_standard[i]),
            ]
        })
        .collect();
    out.write_csv(
        "oracle_spectra.csv",
        &["omega", "S_theta_min", "S_theta_plus90", "S1_analytic", "S2_analytic", "S1_standard", "S2_standard"],
        &rows,
    )?;
    let mid = o.omega.iter().position(|w| *w == 0.0);
    let at0 = |v: &[f64]| mid.map(|i| v[i]).unwrap_or(f64::NAN);
    out.write_json(
        "oracle_spectra.json",
        &OracleSummary {
            gamma: o.gamma,
            lambda: o.lambda,
            theta_min: o.theta_min,
            half_width_min: o.half_width_min,
            half_width_plus90: o.half_width_plus90,
            expected_half_width_min: 0.5 * o.gamma + o.lambda,
            expected_half_width_plus90: 0.5 * o.gamma - o.lambda,
            s_theta_min_at_zero: at0(&o.s_theta_min),
            s_theta_plus90_at_zero: at0(&o.s_theta_plus90),
            steady_residual: o.steady_residual,
            threshold_warning: o.threshold_warning,
        },
    )
}

#[derive(Serialize)]
struct LaserDump {
    stats: LaserStats,
    phase_time: f64,
    phase_variance: f64,
    phase_walk_slope: f64,
    phase_walk_final_variance: f64,
    distribution_mean: f64,
    distribution_variance: f64,
    ou: OuSummary,
}

#[derive(Serialize)]
struct OuSummary {
    dim: usize,
    trajectories: usize,
    seed: u64,
    dt: f64,
    t_end: f64,
    stationary_covariance: Vec<f64>,
    final_covariance: Vec<f64>,
    final_mean: Vec<f64>,
}

fn langevin(cfg: &RunConfig, out: &mut OutputDir) -> Result<(), CliError> {
    let l = &cfg.langevin;
    let rates = cfg.laser_rates();
    let stats = laser_number_stats(&rates)?;
    let var_phase = phase_diffusion(&rates, stats.mean_n, l.t)?;
    let d = rates.a / (2.0 * stats.mean_n);
    let walk = phase_walk(d, l.t.max(f64::MIN_POSITIVE), l.walk_steps, l.walkers, cfg.run.seed)?;
    let rows: Vec<Vec<String>> = walk.times.iter().zip(&walk.variance).map(|(t, v)| vec![num(*t), num(*v)]).collect();
    out.write_csv("phase_walk.csv", &["t", "variance"], &rows)?;

    let span = 6.0 * stats.sigma_n;
    let lo = (stats.mean_n - span).max(0.0);
    let grid = linspace(lo, stats.mean_n + span, l.distribution_points);
    let dist = stationary_number_distribution(&rates, &grid)?;
    let rows: Vec<Vec<String>> = dist.n.iter().zip(&dist.p).map(|(n, p)| vec![num(*n), num(*p)]).collect();
    out.write_csv("number_distribution.csv", &["n", "p"], &rows)?;

    let n = (l.drift.len() as f64).sqrt() as usize;
    let a = DMatrix::from_row_slice(n, n, &l.drift);
    let b = DMatrix::from_row_slice(n, n, &l.noise);
    let spec = EnsembleSpec {
        trajectories: l.trajectories,
        seed: cfg.run.seed,
        dt: l.dt.expect("resolved"),
        t_end: l.t_end.expect("resolved"),
        record_every: l.record_every.max(1),
        keep_paths: 0,
        x0: vec![0.0; n],
    };
    let ens = langevin_linear(&a, &b, &spec)?;
    let exact = stationary_covariance(&a, &b)?;
    let mut header = vec!["t".to_string()];
    header.extend((0..n).map(|i| format!("mean_{i}")));
    header.extend((0..n).flat_map(|i| (0..n).map(move |j| format!("cov_{i}{j}"))));
    let rows: Vec<Vec<String>> = ens
        .times
        .iter()
        .enumerate()
        .map(|(k, t)| {
            let mut r = vec![num(*t)];
            r.extend(ens.mean[k].iter().map(|x| num(*x)));
            r.extend(ens.covariance[k].iter().map(|x| num(*x)));
            r
        })
        .collect();
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    out.write_csv("ou_ensemble.csv", &header_refs, &rows)?;

    let row_major = |m: &DMatrix<f64>| (0..n).flat_map(|i| (0..n).map(move |j| m[(i, j)])).collect::<Vec<_>>();
    out.write_json(
        "laser.json",
        &LaserDump {
            stats,
            phase_time: l.t,
            phase_variance: var_phase,
            phase_walk_slope: walk.slope,
            phase_walk_final_variance: *walk.variance.last().expect("at least one step"),
            distribution_mean: dist.mean,
            distribution_variance: dist.variance,
            ou: OuSummary {
                dim: n,
                trajectories: ens.trajectories,
                seed: ens.seed,
                dt: ens.dt,
                t_end: spec.t_end,
                stationary_covariance: row_major(&exact),
                final_covariance: ens.covariance.last().cloned().unwrap_or_default(),
                final_mean: ens.mean.last().cloned().unwrap_or_default(),
            },
        },
    )
}

fn genqueeze(cfg: &RunConfig, out: &mut OutputDir) -> Result<(), CliError> {
    let spec = cfg.genqueeze_spec()?;
    let ladder = convergence_report(&spec)?;
    let rows: Vec<Vec<String>> = ladder
        .iter()
        .map(|r| {
            vec![
                r.cutoff.to_string(),
                num(r.unitary_norm),
                num(r.mean_n),
                num(r.literal_log_norm),
                num(r.literal_mean_n),
                r.fidelity_to_next.map(num).unwrap_or_default(),
            ]
        })
        .collect();
    out.write_csv(
        "genqueeze_ladder.csv",
        &["cutoff", "unitary_norm", "mean_n", "literal_log_norm", "literal_mean_n", "fidelity_to_next"],
        &rows,
    )?;
    let mut meta = BTreeMap::new();
    meta.insert("k", spec.k as f64);
    meta.insert("z_re", spec.z.re);
    meta.insert("z_im", spec.z.im);
    out.write_json("genqueeze.json", &serde_json::json!({ "spec": meta, "ladder": ladder }))
}
