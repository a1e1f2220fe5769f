//! Right-hand sides: time-constant coefficient vectors or per-mode samples on
//! a time grid (piecewise-linear between nodes).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::TimeGrid;
use crate::spectral::SpectralVector;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SourceTerm {
    /// f_k(t) = c_k for all t.
    Constant(SpectralVector),
    /// Per-mode samples f_k(t_j); `samples[k][j]` pairs with `grid` node j.
    TimeDependent {
        grid: TimeGrid,
        samples: Vec<Vec<f64>>,
    },
}

impl SourceTerm {
    pub fn zero(n_modes: usize) -> Self {
        SourceTerm::Constant(SpectralVector::zeros(n_modes))
    }

    pub fn time_dependent(grid: TimeGrid, samples: Vec<Vec<f64>>) -> Result<Self> {
        for row in &samples {
            if row.len() != grid.len() {
                return Err(Error::LengthMismatch {
                    expected: grid.len(),
                    actual: row.len(),
                });
            }
        }
        Ok(SourceTerm::TimeDependent { grid, samples })
    }

    pub fn n_modes(&self) -> usize {
        match self {
            SourceTerm::Constant(v) => v.len(),
            SourceTerm::TimeDependent { samples, .. } => samples.len(),
        }
    }

    /// f_k(t).
    pub fn value(&self, k: usize, t: f64) -> Result<f64> {
        match self {
            SourceTerm::Constant(v) => Ok(v[k]),
            SourceTerm::TimeDependent { grid, samples } => grid.interpolate(&samples[k], t),
        }
    }

    /// The constant value of mode k, when the source is time-constant.
    pub fn constant_value(&self, k: usize) -> Option<f64> {
        match self {
            SourceTerm::Constant(v) => Some(v[k]),
            SourceTerm::TimeDependent { .. } => None,
        }
    }

    /// Largest |f_k| over all samples of mode k.
    pub fn mode_magnitude(&self, k: usize) -> f64 {
        match self {
            SourceTerm::Constant(v) => v[k].abs(),
            SourceTerm::TimeDependent { samples, .. } => {
                samples[k].iter().fold(0.0, |m, v| m.max(v.abs()))
            }
        }
    }

    /// Per-time-sample coefficient vectors do not outlive the check: the
    /// largest magnitude per mode is what orthogonality gates need.
    pub fn max_magnitudes(&self) -> Vec<f64> {
        (0..self.n_modes()).map(|k| self.mode_magnitude(k)).collect()
    }

    /// Last time the source can be evaluated at (infinite for constants).
    pub fn coverage(&self) -> f64 {
        match self {
            SourceTerm::Constant(_) => f64::INFINITY,
            SourceTerm::TimeDependent { grid, .. } => grid.last(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_source() {
        let f = SourceTerm::Constant(SpectralVector(vec![2.0, -1.0]));
        assert_eq!(f.n_modes(), 2);
        assert_eq!(f.value(0, 0.3).unwrap(), 2.0);
        assert_eq!(f.constant_value(1), Some(-1.0));
        assert_eq!(f.mode_magnitude(1), 1.0);
    }

    #[test]
    fn sampled_source_interpolates() {
        let g = TimeGrid::uniform(1.0, 2).unwrap();
        let f = SourceTerm::time_dependent(g, vec![vec![0.0, 2.0, 0.0]]).unwrap();
        assert_eq!(f.value(0, 0.25).unwrap(), 1.0);
        assert_eq!(f.constant_value(0), None);
        assert_eq!(f.mode_magnitude(0), 2.0);
    }

    #[test]
    fn ragged_samples_rejected() {
        let g = TimeGrid::uniform(1.0, 2).unwrap();
        assert!(SourceTerm::time_dependent(g, vec![vec![0.0, 1.0]]).is_err());
    }
}
