use std::f64::consts::PI;

use ringopo_core::fockspace::{Cutoff, Mode};
use ringopo_core::lindblad::{
    half_width, output_spectrum_value, quadrature_basis, squeeze_hamiltonian, steady_state, DensityMatrix,
    MasterConfig,
};
use ringopo_core::C64;

fn run(ratio: f64, n_max: usize) -> (f64, f64, f64, f64) {
    let gamma = 1.0;
    let lam = ratio * gamma;
    let cut = Cutoff::new(0, n_max).unwrap();
    let h = squeeze_hamiltonian(C64::new(lam, 0.0), Mode::Two, cut);
    let stiff = (gamma + 2.0 * lam) * (n_max as f64 + 1.0);
    let dt = (1.0 / (16.0 * gamma)).min(1.0 / stiff);
    let cfg = MasterConfig::new([gamma, gamma], h, dt, 100.0 / gamma);
    let ss = steady_state(&DensityMatrix::vacuum(cut), &cfg, 1e-6).unwrap();
    let tau_max = 25.0 / (0.5 * gamma - lam);
    let tau: Vec<f64> = (0..=(tau_max / dt).ceil() as usize).map(|i| i as f64 * dt).collect();
    let basis = quadrature_basis(&ss.rho, Mode::Two, &tau, &cfg).unwrap();
    let anti = basis.correlation(0.0);
    let sq = basis.correlation(PI / 2.0);
    let s_anti = |w: f64| output_spectrum_value(&anti, dt, gamma, w);
    let s_sq = |w: f64| output_spectrum_value(&sq, dt, gamma, w);
    let hw_anti = half_width(s_anti, 0.05).unwrap();
    let hw_sq = half_width(s_sq, 0.05).unwrap();
    (s_anti(0.0), s_sq(0.0), hw_anti, hw_sq)
}

#[test]
fn regression_spectra_match_linear_theory() {
    // near threshold the anti-squeezed quadrature needs a larger cutoff
    for (ratio, n_max) in [(0.1, 12), (0.25, 12), (0.4, 20)] {
        let (anti0, sq0, hw_anti, hw_sq) = run(ratio, n_max);
        let (k1, k2) = (0.5 - ratio, 0.5 + ratio);
        assert!(sq0 < 1.0 && anti0 > 1.0);
        assert!((hw_anti / k1 - 1.0).abs() < 0.02, "ratio {ratio}: {hw_anti} vs {k1}");
        assert!((hw_sq / k2 - 1.0).abs() < 0.02, "ratio {ratio}: {hw_sq} vs {k2}");
        // standard-form depth 1 ± 2γλ/κ²
        let depth = 1.0 - 2.0 * ratio / (k2 * k2);
        assert!((sq0 - depth).abs() < 0.02, "ratio {ratio}: {sq0} vs {depth}");
        eprintln!("ratio {ratio}: S+(0)={anti0} S-(0)={sq0} hw={hw_anti},{hw_sq}");
    }
}
