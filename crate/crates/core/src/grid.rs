//! Time grids for sampled sources and residual verification.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Strictly increasing time nodes starting at 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    nodes: Vec<f64>,
}

impl TimeGrid {
    /// Uniform grid of `steps + 1` nodes over [0, final_time].
    pub fn uniform(final_time: f64, steps: usize) -> Result<Self> {
        if !(final_time > 0.0) || !final_time.is_finite() {
            return Err(Error::InvalidParameter {
                name: "final_time",
                value: final_time,
                constraint: "positive and finite",
            });
        }
        if steps == 0 {
            return Err(Error::InvalidParameter {
                name: "steps",
                value: 0.0,
                constraint: "at least one step",
            });
        }
        let nodes = (0..=steps)
            .map(|i| final_time * i as f64 / steps as f64)
            .collect();
        Ok(Self { nodes })
    }

    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::InvalidParameter {
                name: "nodes",
                value: nodes.len() as f64,
                constraint: "at least two nodes",
            });
        }
        if nodes[0] != 0.0 {
            return Err(Error::InvalidParameter {
                name: "nodes",
                value: nodes[0],
                constraint: "first node must be 0",
            });
        }
        for pair in nodes.windows(2) {
            if !(pair[1] > pair[0]) {
                return Err(Error::InvalidParameter {
                    name: "nodes",
                    value: pair[1],
                    constraint: "strictly increasing nodes",
                });
            }
        }
        Ok(Self { nodes })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn last(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    /// The common step, if the grid is uniform to relative accuracy 1e-12.
    pub fn uniform_step(&self) -> Option<f64> {
        let dt = self.nodes[1] - self.nodes[0];
        for pair in self.nodes.windows(2) {
            if ((pair[1] - pair[0]) - dt).abs() > 1e-12 * dt.max(1.0) {
                return None;
            }
        }
        Some(dt)
    }

    /// Piecewise-linear interpolation of nodal samples at time t.
    pub fn interpolate(&self, samples: &[f64], t: f64) -> Result<f64> {
        if samples.len() != self.nodes.len() {
            return Err(Error::LengthMismatch {
                expected: self.nodes.len(),
                actual: samples.len(),
            });
        }
        let t_max = self.last();
        // tolerate rounding just past the ends
        if !t.is_finite() || t < -1e-12 || t > t_max * (1.0 + 1e-12) + 1e-300 {
            return Err(Error::TimeOutOfRange { t, t_max });
        }
        let t = t.clamp(0.0, t_max);
        let i = match self
            .nodes
            .binary_search_by(|probe| probe.partial_cmp(&t).unwrap())
        {
            Ok(exact) => return Ok(samples[exact]),
            Err(ins) => ins.clamp(1, self.nodes.len() - 1),
        };
        let (t0, t1) = (self.nodes[i - 1], self.nodes[i]);
        let w = (t - t0) / (t1 - t0);
        Ok(samples[i - 1] * (1.0 - w) + samples[i] * w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_grid_shape() {
        let g = TimeGrid::uniform(1.0, 4).unwrap();
        assert_eq!(g.nodes(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(g.uniform_step(), Some(0.25));
        assert_eq!(g.last(), 1.0);
    }

    #[test]
    fn non_uniform_detected() {
        let g = TimeGrid::from_nodes(vec![0.0, 0.1, 0.5, 1.0]).unwrap();
        assert_eq!(g.uniform_step(), None);
    }

    #[test]
    fn bad_node_lists_rejected() {
        assert!(TimeGrid::from_nodes(vec![0.0]).is_err());
        assert!(TimeGrid::from_nodes(vec![0.1, 0.5]).is_err());
        assert!(TimeGrid::from_nodes(vec![0.0, 0.5, 0.5]).is_err());
    }

    #[test]
    fn interpolation() {
        let g = TimeGrid::uniform(2.0, 2).unwrap();
        let s = [0.0, 1.0, 0.0];
        assert_eq!(g.interpolate(&s, 0.5).unwrap(), 0.5);
        assert_eq!(g.interpolate(&s, 1.0).unwrap(), 1.0);
        assert_eq!(g.interpolate(&s, 2.0).unwrap(), 0.0);
        assert!(g.interpolate(&s, 2.5).is_err());
        assert!(g.interpolate(&s[..2], 0.5).is_err());
    }
}
