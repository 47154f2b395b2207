//! Classical laser statistics from the Fokker-Planck description and an
//! Euler-Maruyama ensemble for linear Langevin equations.
//!
//! Every trajectory owns a ChaCha8 stream selected by its index, so results
//! do not depend on thread count or scheduling.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaserRates {
    /// Gain (1/s).
    pub a: f64,
    /// Saturation (1/s).
    pub b: f64,
    /// Loss (1/s).
    pub c: f64,
}

impl LaserRates {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("a", self.a), ("b", self.b), ("c", self.c)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::config(format!("langevin.{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaserStats {
    pub mean_n: f64,
    pub sigma_n: f64,
    pub fano: f64,
}

/// `⟨n⟩ = (A−C)/B`, `σₙ = √(A/B)`, Fano `= A/(A−C)`.
pub fn laser_number_stats(rates: &LaserRates) -> Result<LaserStats> {
    rates.validate()?;
    if rates.a <= rates.c {
        return Err(Error::domain(format!(
            "laser is below threshold: gain {} <= loss {}",
            rates.a, rates.c
        )));
    }
    Ok(LaserStats {
        mean_n: (rates.a - rates.c) / rates.b,
        sigma_n: (rates.a / rates.b).sqrt(),
        fano: rates.a / (rates.a - rates.c),
    })
}

/// `σ_θ²(t) = (A / 2⟨n⟩) t`.
pub fn phase_diffusion(rates: &LaserRates, mean_n: f64, t: f64) -> Result<f64> {
    rates.validate()?;
    if !(t >= 0.0) {
        return Err(Error::domain(format!("diffusion time must be >= 0, got {t}")));
    }
    if !(mean_n > 0.0) {
        return Err(Error::domain("mean photon number must be positive"));
    }
    Ok(rates.a / (2.0 * mean_n) * t)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseWalk {
    pub times: Vec<f64>,
    /// Ensemble variance of the phase at each time.
    pub variance: Vec<f64>,
    /// Least-squares slope of variance against time, through the origin.
    pub slope: f64,
}

/// Gaussian random walk with per-step variance `D·dt`.
pub fn phase_walk(d: f64, t_end: f64, steps: usize, walkers: usize, seed: u64) -> Result<PhaseWalk> {
    if !(d >= 0.0) || !(t_end > 0.0) || steps == 0 || walkers < 2 {
        return Err(Error::domain("phase walk needs D >= 0, t_end > 0, steps >= 1 and at least two walkers"));
    }
    let dt = t_end / steps as f64;
    let sd = (d * dt).sqrt();
    let paths: Vec<Vec<f64>> = (0..walkers)
        .into_par_iter()
        .map(|w| {
            let mut rng = rng_for(seed, w as u64);
            let mut theta = 0.0;
            (0..steps)
                .map(|_| {
                    theta += sd * normal(&mut rng);
                    theta
                })
                .collect()
        })
        .collect();
    let times: Vec<f64> = (1..=steps).map(|k| k as f64 * dt).collect();
    let variance: Vec<f64> = (0..steps)
        .map(|k| {
            let m = paths.iter().map(|p| p[k]).sum::<f64>() / walkers as f64;
            paths.iter().map(|p| (p[k] - m).powi(2)).sum::<f64>() / (walkers - 1) as f64
        })
        .collect();
    let slope = times.iter().zip(&variance).map(|(t, v)| t * v).sum::<f64>() / times.iter().map(|t| t * t).sum::<f64>();
    Ok(PhaseWalk { times, variance, slope })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumberDistribution {
    pub n: Vec<f64>,
    /// Normalized so the trapezoid sum over `n` is 1.
    pub p: Vec<f64>,
    pub mean: f64,
    pub variance: f64,
}

/// `P(n) ∝ exp(−(B/2A)(n − (A−C)/B)²)` on the given grid.
pub fn stationary_number_distribution(rates: &LaserRates, n_grid: &[f64]) -> Result<NumberDistribution> {
    rates.validate()?;
    if n_grid.len() < 3 || n_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("number grid must be increasing with at least three points"));
    }
    let peak = (rates.a - rates.c) / rates.b;
    let k = rates.b / (2.0 * rates.a);
    let raw: Vec<f64> = n_grid.iter().map(|n| (-k * (n - peak).powi(2)).exp()).collect();
    let integrate = |f: &dyn Fn(usize) -> f64| -> f64 {
        n_grid.windows(2).enumerate().map(|(i, w)| 0.5 * (w[1] - w[0]) * (f(i) + f(i + 1))).sum()
    };
    let z = integrate(&|i| raw[i]);
    if !(z > 0.0) {
        return Err(Error::numerical("number distribution has no weight on the grid"));
    }
    let p: Vec<f64> = raw.iter().map(|x| x / z).collect();
    let mean = integrate(&|i| n_grid[i] * p[i]);
    let variance = integrate(&|i| (n_grid[i] - mean).powi(2) * p[i]);
    Ok(NumberDistribution { n: n_grid.to_vec(), p, mean, variance })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub trajectories: usize,
    pub seed: u64,
    pub dt: f64,
    pub t_end: f64,
    /// Record every n-th step; the final step is always recorded.
    pub record_every: usize,
    /// Number of leading trajectories whose full paths are kept.
    pub keep_paths: usize,
    pub x0: Vec<f64>,
}

impl EnsembleSpec {
    pub fn validate(&self, dim: usize) -> Result<()> {
        if self.trajectories == 0 {
            return Err(Error::config("langevin.trajectories must be >= 1"));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::config("langevin.dt must be positive"));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::config("langevin.t_end must be positive"));
        }
        if self.x0.len() != dim {
            return Err(Error::config(format!("langevin.x0 needs {dim} components, got {}", self.x0.len())));
        }
        Ok(())
    }

    fn steps(&self) -> usize {
        (self.t_end / self.dt).round().max(1.0) as usize
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ensemble {
    pub trajectories: usize,
    pub seed: u64,
    pub dt: f64,
    pub times: Vec<f64>,
    /// Ensemble mean per recorded time.
    pub mean: Vec<Vec<f64>>,
    /// Row-major covariance per recorded time.
    pub covariance: Vec<Vec<f64>>,
    /// State of every trajectory at `t_end`.
    pub finals: Vec<Vec<f64>>,
    pub paths: Vec<Vec<Vec<f64>>>,
}

/// Largest eigenvalue modulus of the drift; errors unless every
/// eigenvalue has a positive real part.
pub fn check_stability(a: &DMatrix<f64>) -> Result<f64> {
    if !a.is_square() || a.nrows() == 0 {
        return Err(Error::domain("drift matrix must be square and nonempty"));
    }
    let eig = a.complex_eigenvalues();
    if let Some(bad) = eig.iter().find(|e| !(e.re > 0.0)) {
        return Err(Error::domain(format!(
            "drift is not stable: eigenvalue {bad} has nonpositive real part"
        )));
    }
    Ok(eig.iter().map(|e| e.norm()).fold(0.0, f64::max))
}

fn check_dt(a: &DMatrix<f64>, dt: f64) -> Result<()> {
    let lmax = check_stability(a)?;
    if dt > 0.01 / lmax * (1.0 + 1e-12) {
        return Err(Error::config(format!(
            "langevin.dt = {dt:e} exceeds 0.01/max|eig(A)| = {:e}",
            0.01 / lmax
        )));
    }
    Ok(())
}

struct Stepper<'a> {
    a: &'a DMatrix<f64>,
    b: &'a DMatrix<f64>,
    dt: f64,
    noise: Vec<f64>,
    drift: Vec<f64>,
}

impl<'a> Stepper<'a> {
    fn new(a: &'a DMatrix<f64>, b: &'a DMatrix<f64>, dt: f64) -> Self {
        Stepper { a, b, dt, noise: vec![0.0; b.ncols()], drift: vec![0.0; a.nrows()] }
    }

    fn step(&mut self, x: &mut [f64], rng: &mut ChaCha8Rng) {
        let n = x.len();
        let sq = self.dt.sqrt();
        for z in self.noise.iter_mut() {
            *z = normal(rng) * sq;
        }
        for i in 0..n {
            let mut d = 0.0;
            for j in 0..n {
                d -= self.a[(i, j)] * x[j];
            }
            let mut w = 0.0;
            for (k, z) in self.noise.iter().enumerate() {
                w += self.b[(i, k)] * z;
            }
            self.drift[i] = d * self.dt + w;
        }
        for (xi, d) in x.iter_mut().zip(&self.drift) {
            *xi += d;
        }
    }
}

/// Euler-Maruyama ensemble for `dx = −A x dt + B dW` with real components.
pub fn langevin_linear(a: &DMatrix<f64>, b: &DMatrix<f64>, spec: &EnsembleSpec) -> Result<Ensemble> {
    let n = a.nrows();
    if b.nrows() != n {
        return Err(Error::domain("noise matrix must have as many rows as the drift"));
    }
    spec.validate(n)?;
    check_dt(a, spec.dt)?;
    let steps = spec.steps();
    let every = spec.record_every.max(1);
    let record: Vec<usize> = (1..=steps).filter(|s| s % every == 0 || *s == steps).collect();
    let runs: Vec<Vec<Vec<f64>>> = (0..spec.trajectories)
        .into_par_iter()
        .map(|tr| {
            let mut rng = rng_for(spec.seed, tr as u64);
            let mut st = Stepper::new(a, b, spec.dt);
            let mut x = spec.x0.clone();
            let mut out = Vec::with_capacity(record.len());
            for s in 1..=steps {
                st.step(&mut x, &mut rng);
                if s % every == 0 || s == steps {
                    out.push(x.clone());
                }
            }
            out
        })
        .collect();
    let m = spec.trajectories as f64;
    let mut mean = Vec::with_capacity(record.len());
    let mut covariance = Vec::with_capacity(record.len());
    for r in 0..record.len() {
        let mu: Vec<f64> = (0..n).map(|i| runs.iter().map(|run| run[r][i]).sum::<f64>() / m).collect();
        let mut cov = vec![0.0; n * n];
        for run in &runs {
            for i in 0..n {
                for j in 0..n {
                    cov[i * n + j] += (run[r][i] - mu[i]) * (run[r][j] - mu[j]);
                }
            }
        }
        let denom = (m - 1.0).max(1.0);
        cov.iter_mut().for_each(|c| *c /= denom);
        mean.push(mu);
        covariance.push(cov);
    }
    Ok(Ensemble {
        trajectories: spec.trajectories,
        seed: spec.seed,
        dt: spec.dt,
        times: record.iter().map(|s| *s as f64 * spec.dt).collect(),
        mean,
        covariance,
        finals: runs.iter().map(|run| run.last().cloned().unwrap_or_default()).collect(),
        paths: runs.into_iter().take(spec.keep_paths).collect(),
    })
}

/// Solves `AΣ + ΣAᵀ = BBᵀ` for the stationary covariance.
pub fn stationary_covariance(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    check_stability(a)?;
    let n = a.nrows();
    let q = b * b.transpose();
    let id = DMatrix::<f64>::identity(n, n);
    let k = a.kronecker(&id) + id.kronecker(a);
    let rhs = DMatrix::from_iterator(n * n, 1, (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| q[(i, j)]));
    let sol = k.lu().solve(&rhs).ok_or_else(|| Error::numerical("Lyapunov system is singular"))?;
    Ok(DMatrix::from_fn(n, n, |i, j| sol[(i * n + j, 0)]))
}

/// Averaged periodogram `E[x̂(ω) x̂(ω)†] / (2πT)` of stationary segments of
/// length `window`, taken after a burn-in of `burn_in`.
pub fn sampled_spectrum(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    spec: &EnsembleSpec,
    burn_in: f64,
    window: f64,
    omega_grid: &[f64],
) -> Result<Vec<DMatrix<C64>>> {
    let n = a.nrows();
    spec.validate(n)?;
    check_dt(a, spec.dt)?;
    let burn = (burn_in / spec.dt).round() as usize;
    let len = (window / spec.dt).round().max(1.0) as usize;
    let t_win = len as f64 * spec.dt;
    let acc: Vec<Vec<DMatrix<C64>>> = (0..spec.trajectories)
        .into_par_iter()
        .map(|tr| {
            let mut rng = rng_for(spec.seed, tr as u64);
            let mut st = Stepper::new(a, b, spec.dt);
            let mut x = spec.x0.clone();
            for _ in 0..burn {
                st.step(&mut x, &mut rng);
            }
            let rot: Vec<C64> = omega_grid.iter().map(|w| C64::from_polar(1.0, -w * spec.dt)).collect();
            let mut phase = vec![C64::new(1.0, 0.0); omega_grid.len()];
            let mut xhat = vec![vec![C64::new(0.0, 0.0); n]; omega_grid.len()];
            for _ in 0..len {
                for (f, ph) in phase.iter_mut().enumerate() {
                    for i in 0..n {
                        xhat[f][i] += *ph * x[i] * spec.dt;
                    }
                    *ph *= rot[f];
                }
                st.step(&mut x, &mut rng);
            }
            xhat.iter()
                .map(|v| DMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj()))
                .collect()
        })
        .collect();
    let norm = C64::new(1.0 / (2.0 * std::f64::consts::PI * t_win * spec.trajectories as f64), 0.0);
    Ok((0..omega_grid.len())
        .map(|f| acc.iter().fold(DMatrix::zeros(n, n), |s, run| s + &run[f]) * norm)
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaserDiagnostic {
    pub mean_n: f64,
    pub var_n: f64,
    pub fano: f64,
    /// `Var[θ(t_end) − θ(0)] / t_end` over the ensemble.
    pub phase_diffusion: f64,
}

/// Transient run of `dα = ½(A−C−B|α|²)α dt + √(A/2)(dW₁ + i dW₂)`,
/// started on the stationary amplitude with zero phase.
pub fn laser_langevin(rates: &LaserRates, trajectories: usize, seed: u64, dt: f64, t_end: f64) -> Result<LaserDiagnostic> {
    let stats = laser_number_stats(rates)?;
    if trajectories < 2 || !(dt > 0.0) || !(t_end > dt) {
        return Err(Error::config("laser diagnostic needs >= 2 trajectories and 0 < dt < t_end"));
    }
    let steps = (t_end / dt).round() as usize;
    let sd = (0.5 * rates.a * dt).sqrt();
    let finals: Vec<(f64, f64)> = (0..trajectories)
        .into_par_iter()
        .map(|tr| {
            let mut rng = rng_for(seed, tr as u64);
            let mut al = C64::new(stats.mean_n.sqrt(), 0.0);
            let mut theta = 0.0;
            let mut last = 0.0;
            for _ in 0..steps {
                let drift = 0.5 * (rates.a - rates.c - rates.b * al.norm_sqr()) * al;
                al += drift * dt + C64::new(normal(&mut rng), normal(&mut rng)) * sd;
                let arg = al.arg();
                let mut d = arg - last;
                d -= (d / std::f64::consts::TAU).round() * std::f64::consts::TAU;
                theta += d;
                last = arg;
            }
            (al.norm_sqr(), theta)
        })
        .collect();
    let m = trajectories as f64;
    let mean_n = finals.iter().map(|f| f.0).sum::<f64>() / m;
    let var_n = finals.iter().map(|f| (f.0 - mean_n).powi(2)).sum::<f64>() / (m - 1.0);
    let mean_t = finals.iter().map(|f| f.1).sum::<f64>() / m;
    let var_t = finals.iter().map(|f| (f.1 - mean_t).powi(2)).sum::<f64>() / (m - 1.0);
    Ok(LaserDiagnostic { mean_n, var_n, fano: var_n / mean_n, phase_diffusion: var_t / t_end })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn scalar(v: f64) -> DMatrix<f64> {
        DMatrix::from_element(1, 1, v)
    }

    fn spec(trajectories: usize, dt: f64, t_end: f64, x0: Vec<f64>) -> EnsembleSpec {
        EnsembleSpec { trajectories, seed: 7, dt, t_end, record_every: 100, keep_paths: 2, x0 }
    }

    #[test]
    fn laser_anchor_values() {
        let r = LaserRates { a: 1e6, b: 0.1, c: 1.0 };
        let s = laser_number_stats(&r).unwrap();
        assert!((s.mean_n - 9_999_990.0).abs() < 1e-6);
        assert!((s.fano - 1.0).abs() < 1e-5);
        let v = phase_diffusion(&r, s.mean_n, 1e-8).unwrap();
        assert!((v - 1e6 / (2.0 * s.mean_n) * 1e-8).abs() < 1e-24);
        assert!(v > 1e-10 && v < 1e-8);
        assert_eq!(phase_diffusion(&r, s.mean_n, 0.0).unwrap(), 0.0);
        assert!(phase_diffusion(&r, s.mean_n, -1.0).is_err());
    }

    #[test]
    fn fano_two_at_double_loss() {
        let s = laser_number_stats(&LaserRates { a: 2.0, b: 0.5, c: 1.0 }).unwrap();
        assert!((s.fano - 2.0).abs() < 1e-15);
        assert!(laser_number_stats(&LaserRates { a: 1.0, b: 0.5, c: 1.0 }).is_err());
    }

    #[test]
    fn stationary_distribution_moments() {
        let r = LaserRates { a: 1e6, b: 0.1, c: 1e4 };
        let s = laser_number_stats(&r).unwrap();
        let sd = s.sigma_n;
        let grid: Vec<f64> = (0..=2000).map(|i| s.mean_n - 10.0 * sd + i as f64 * 0.01 * sd).collect();
        let d = stationary_number_distribution(&r, &grid).unwrap();
        assert!((d.mean - s.mean_n).abs() < 1e-6 * s.mean_n);
        assert!((d.variance / (r.a / r.b) - 1.0).abs() < 1e-6);
        let imax = d.p.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
        assert_eq!(imax, 1000);
        for k in 1..1000 {
            assert!((d.p[1000 - k] - d.p[1000 + k]).abs() <= 1e-12 * d.p[1000]);
        }
    }

    #[test]
    fn random_walk_slope() {
        let w = phase_walk(2.0, 1.0, 50, 10_000, 3).unwrap();
        assert!((w.slope / 2.0 - 1.0).abs() < 0.05, "slope {}", w.slope);
    }

    #[test]
    fn deterministic_decay_without_noise() {
        let e = langevin_linear(&scalar(1.0), &scalar(0.0), &spec(3, 0.01, 5.0, vec![1.0])).unwrap();
        let last = e.mean.last().unwrap()[0];
        let exact = (1.0f64 - 0.01).powi(500);
        assert!((last - exact).abs() < 1e-14);
        assert!(last < 0.01);
    }

    #[test]
    fn ou_stationary_variance() {
        let (a, b) = (2.0, 1.5);
        let e = langevin_linear(&scalar(a), &scalar(b), &spec(10_000, 0.005, 5.0, vec![0.0])).unwrap();
        let var = e.covariance.last().unwrap()[0];
        let exact = b * b / (2.0 * a);
        // standard error of a sample variance of a Gaussian
        let se = exact * (2.0 / 9_999.0f64).sqrt();
        assert!((var - exact).abs() < 3.0 * se, "{var} vs {exact} ± {se}");
        let cov = stationary_covariance(&scalar(a), &scalar(b)).unwrap();
        assert!((cov[(0, 0)] - exact).abs() < 1e-15);
    }

    #[test]
    fn reproducible_and_order_independent() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, -0.3, -0.3, 1.0]);
        let b = DMatrix::from_row_slice(2, 2, &[0.3, 0.0, 0.0, 0.3]);
        let s = spec(64, 0.005, 1.0, vec![0.1, -0.1]);
        let e1 = langevin_linear(&a, &b, &s).unwrap();
        let e2 = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| langevin_linear(&a, &b, &s).unwrap());
        assert_eq!(e1, e2);
        assert_eq!(e1.paths.len(), 2);
    }

    #[test]
    fn unstable_drift_is_rejected() {
        let s = spec(2, 0.001, 1.0, vec![0.0]);
        assert!(langevin_linear(&scalar(-1.0), &scalar(1.0), &s).is_err());
        assert!(langevin_linear(&scalar(0.0), &scalar(1.0), &s).is_err());
        assert!(matches!(langevin_linear(&scalar(100.0), &scalar(1.0), &s), Err(Error::Config(_))));
    }

    #[test]
    fn step_halving_converges() {
        // weak error of Euler-Maruyama on the mean is O(dt)
        let run = |dt: f64| {
            langevin_linear(&scalar(1.0), &scalar(0.0), &spec(1, dt, 1.0, vec![1.0])).unwrap().mean.last().unwrap()[0]
        };
        let exact = (-1.0f64).exp();
        let (e1, e2) = ((run(0.01) - exact).abs(), (run(0.005) - exact).abs());
        assert!((e1 / e2 - 2.0).abs() < 0.05);
    }

    #[test]
    fn sampled_spectrum_matches_lorentzian() {
        let (a, b) = (1.0, 1.0);
        let s = EnsembleSpec { trajectories: 2000, seed: 11, dt: 0.01, t_end: 1.0, record_every: 1, keep_paths: 0, x0: vec![0.0] };
        let grid = [0.0, 0.5, 1.0, 1.5, 2.0];
        let est = sampled_spectrum(&scalar(a), &scalar(b), &s, 10.0, 60.0, &grid).unwrap();
        for (w, m) in grid.iter().zip(&est) {
            let exact = b * b / (2.0 * std::f64::consts::PI * (a * a + w * w));
            assert!((m[(0, 0)].re / exact - 1.0).abs() < 0.1, "ω={w}: {} vs {exact}", m[(0, 0)].re);
        }
    }

    #[test]
    fn nonlinear_laser_diagnostic_is_near_stationary_values() {
        let r = LaserRates { a: 200.0, b: 1.0, c: 100.0 };
        let d = laser_langevin(&r, 2000, 5, 1e-4, 0.5).unwrap();
        let s = laser_number_stats(&r).unwrap();
        assert!((d.mean_n / s.mean_n - 1.0).abs() < 0.1);
        assert!((d.var_n / (s.sigma_n * s.sigma_n) - 1.0).abs() < 0.25);
    }

    proptest! {
        #[test]
        fn lyapunov_solution_satisfies_equation(d1 in 0.5f64..3.0, d2 in 0.5f64..3.0, off in -0.4f64..0.4, b0 in 0.1f64..2.0) {
            let a = DMatrix::from_row_slice(2, 2, &[d1, off, -off, d2]);
            let b = DMatrix::from_row_slice(2, 2, &[b0, 0.0, 0.3, b0]);
            let s = stationary_covariance(&a, &b).unwrap();
            let r = &a * &s + &s * a.transpose() - &b * b.transpose();
            prop_assert!(r.norm() < 1e-12);
        }
    }
}
