use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sampled spectrum: either one-dimensional `S(ν)` or two-dimensional
/// `S(μ, ν)` stored row-major with `μ` as the slow index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSeries {
    pub name: String,
    pub freq: Vec<f64>,
    /// Second frequency axis; empty for one-dimensional spectra.
    pub freq2: Vec<f64>,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    pub metadata: Vec<(String, String)>,
}

impl SpectrumSeries {
    pub fn one_dim(name: impl Into<String>, freq: Vec<f64>, re: Vec<f64>, im: Vec<f64>) -> Result<Self> {
        if freq.len() != re.len() || re.len() != im.len() {
            return Err(Error::domain("spectrum axes and values differ in length"));
        }
        Ok(SpectrumSeries {
            name: name.into(),
            freq,
            freq2: Vec::new(),
            re,
            im,
            metadata: Vec::new(),
        })
    }

    pub fn two_dim(
        name: impl Into<String>,
        freq: Vec<f64>,
        freq2: Vec<f64>,
        re: Vec<f64>,
        im: Vec<f64>,
    ) -> Result<Self> {
        let n = freq.len() * freq2.len();
        if re.len() != n || im.len() != n || freq2.is_empty() {
            return Err(Error::domain("two-dimensional spectrum has inconsistent shape"));
        }
        Ok(SpectrumSeries {
            name: name.into(),
            freq,
            freq2,
            re,
            im,
            metadata: Vec::new(),
        })
    }

    pub fn with_meta(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.metadata.push((key.into(), value.to_string()));
        self
    }

    pub fn is_two_dim(&self) -> bool {
        !self.freq2.is_empty()
    }

    pub fn len(&self) -> usize {
        self.re.len()
    }

    pub fn is_empty(&self) -> bool {
        self.re.is_empty()
    }

    pub fn at(&self, i: usize, j: usize) -> (f64, f64) {
        let k = i * self.freq2.len() + j;
        (self.re[k], self.im[k])
    }
}
