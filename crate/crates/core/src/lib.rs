//! Feynman-graphical quantum optics for a one-way ring cavity holding a
//! χ⁽²⁾/χ⁽⁴⁾ crystal.
//!
//! The crate is organised bottom-up:
//!
//! - [`cavity`]: resonance factors and the three propagator K-factors.
//! - [`fockspace`]: truncated two-mode number basis, ladder operators,
//!   matrix exponentials and coherent-state overlaps.
//! - [`vertexcat`]: the six vertex matrix elements and their brute-force
//!   operator counterparts.
//! - [`smatrix`]: Gaussian-averaged perturbative S-matrix as a sum over
//!   vertex paths with position quadrature.
//! - [`observables`]: photon statistics, Husimi function, quadrature
//!   correlators and their spectra.
//! - [`lindblad`]: T=0 master equation, quantum regression and the analytic
//!   squeezing spectra used as oracles.
//! - [`langevin`]: linear Langevin ensembles and the classical-laser
//!   statistics.
//! - [`genqueeze`]: generalised (k-photon) squeezing in a truncated space.

pub mod cavity;
pub mod error;
pub mod fockspace;
pub mod genqueeze;
pub mod langevin;
pub mod lindblad;
pub mod observables;
pub mod quadrature;
pub mod series;
pub mod smatrix;
pub mod vertexcat;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
