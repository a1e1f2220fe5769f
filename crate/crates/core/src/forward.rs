//! Forward solver for the non-local problem: mode-wise closed forms built
//! from the decay factor b(t) = E_rho(-lambda t^rho), the accumulation
//! factor a(t) = t^rho E_{rho,rho+1}(-lambda t^rho) and the convolution
//! omega_k(t) of the source against the singular kernel.
//!
//! Each mode solves D^rho u_k + lambda_k u_k = f_k(t) with
//! u_k(coupling_time) = alpha u_k(0) + phi_k. For non-critical modes the
//! homogeneous amplitude is pinned by the non-local condition; for critical
//! modes (b(xi0) = alpha) the condition holds for every amplitude and the
//! caller may choose one per mode, zero by default.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::ml::{eval_neg, ml_a, ml_b};
use crate::source::SourceTerm;
use crate::spectral::{critical_set, CriticalSet, FractionalModel, SpectralVector, Spectrum};

/// Numerical knobs shared by the forward and inverse solvers.
#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    /// Critical-mode tolerance, relative to the coupling weight.
    pub eps_crit: f64,
    /// Uniqueness-margin floor, relative to the scale of its terms.
    pub eps_den: f64,
    /// Orthogonality tolerance on data coefficients at critical modes.
    pub orth_tol: f64,
    /// Simpson intervals for the convolution quadrature.
    pub quad_intervals: usize,
    /// Permit an observation time at or past the coupling time in source
    /// recovery (the uniqueness margin may then legitimately degenerate).
    pub allow_reversed_observation: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            eps_crit: 1e-9,
            eps_den: 1e-10,
            orth_tol: 1e-12,
            quad_intervals: 512,
            allow_reversed_observation: false,
        }
    }
}

/// Particular solution with zero initial value:
/// omega_k(t) = int_0^t eta^{rho-1} E_{rho,rho}(-lambda eta^rho) f_k(t-eta) d eta.
///
/// Time-constant sources use the closed form f_k * a(t). Sampled sources are
/// integrated after the substitution s = eta^rho, which absorbs the endpoint
/// singularity exactly:
/// omega_k(t) = (1/rho) int_0^{t^rho} E_{rho,rho}(-lambda s) f_k(t - s^{1/rho}) ds,
/// by composite Simpson with the source interpolated linearly between samples.
pub fn omega(
    rho: f64,
    lambda: f64,
    source: &SourceTerm,
    mode: usize,
    t: f64,
    quad_intervals: usize,
) -> Result<f64> {
    if t == 0.0 {
        return Ok(0.0);
    }
    if let Some(c) = source.constant_value(mode) {
        return Ok(c * ml_a(rho, lambda, t)?);
    }
    let n = quad_intervals.max(2).next_multiple_of(2);
    let s_max = t.powf(rho);
    let h = s_max / n as f64;
    let mut acc = 0.0;
    for i in 0..=n {
        let s = i as f64 * h;
        let tau = if i == 0 {
            t
        } else if i == n {
            0.0
        } else {
            t - s.powf(1.0 / rho)
        };
        let w = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += w * eval_neg(rho, rho, lambda * s) * source.value(mode, tau.max(0.0))?;
    }
    Ok(acc * h / (3.0 * rho))
}

/// Per-mode closed-form descriptors of a solution, evaluable anywhere in
/// [0, final_time]: u_k(t) = amplitude_k * b_k(t) + omega_k(t).
#[derive(Debug, Clone)]
pub struct SpectralSolution {
    model: FractionalModel,
    eigenvalues: Vec<f64>,
    amplitudes: Vec<f64>,
    source: SourceTerm,
    critical: CriticalSet,
    quad_intervals: usize,
}

impl SpectralSolution {
    pub(crate) fn new(
        model: FractionalModel,
        eigenvalues: Vec<f64>,
        amplitudes: Vec<f64>,
        source: SourceTerm,
        critical: CriticalSet,
        quad_intervals: usize,
    ) -> Self {
        Self {
            model,
            eigenvalues,
            amplitudes,
            source,
            critical,
            quad_intervals,
        }
    }

    pub fn model(&self) -> &FractionalModel {
        &self.model
    }

    pub fn n_modes(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Homogeneous amplitudes c_k = u_k(0).
    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn source(&self) -> &SourceTerm {
        &self.source
    }

    pub fn critical(&self) -> &CriticalSet {
        &self.critical
    }

    pub fn eval_mode(&self, k: usize, t: f64) -> Result<f64> {
        if !(0.0..=self.model.final_time * (1.0 + 1e-12)).contains(&t) {
            return Err(Error::TimeOutOfRange {
                t,
                t_max: self.model.final_time,
            });
        }
        let rho = self.model.order;
        let lambda = self.eigenvalues[k];
        let hom = self.amplitudes[k] * ml_b(rho, lambda, t)?;
        let part = omega(rho, lambda, &self.source, k, t, self.quad_intervals)?;
        Ok(hom + part)
    }

    /// All mode values at time t.
    pub fn eval(&self, t: f64) -> Result<SpectralVector> {
        (0..self.n_modes())
            .map(|k| self.eval_mode(k, t))
            .collect::<Result<Vec<f64>>>()
            .map(SpectralVector)
    }
}

/// Solve the forward non-local problem mode by mode.
///
/// `free_amplitudes` selects u_k(0) for critical modes (default 0); keys
/// outside the critical set are rejected. Existence at critical modes
/// requires the data to vanish there, which is checked up front.
pub fn solve_forward(
    model: &FractionalModel,
    spectrum: &Spectrum,
    source: &SourceTerm,
    phi: &SpectralVector,
    free_amplitudes: Option<&BTreeMap<usize, f64>>,
    opts: &SolverOptions,
) -> Result<SpectralSolution> {
    model.validate()?;
    phi.check_aligned(spectrum)?;
    if source.n_modes() != spectrum.len() {
        return Err(Error::LengthMismatch {
            expected: spectrum.len(),
            actual: source.n_modes(),
        });
    }
    if source.coverage() < model.final_time * (1.0 - 1e-12) {
        return Err(Error::TimeOutOfRange {
            t: model.final_time,
            t_max: source.coverage(),
        });
    }

    let critical = critical_set(model, spectrum, opts.eps_crit)?;
    for &k in &critical.indices {
        let phi_mag = phi[k].abs();
        if phi_mag > opts.orth_tol {
            return Err(Error::OrthogonalityViolation {
                index: k,
                magnitude: phi_mag,
                tolerance: opts.orth_tol,
            });
        }
        let f_mag = source.mode_magnitude(k);
        if f_mag > opts.orth_tol {
            return Err(Error::OrthogonalityViolation {
                index: k,
                magnitude: f_mag,
                tolerance: opts.orth_tol,
            });
        }
    }
    if let Some(free) = free_amplitudes {
        for k in free.keys() {
            if !critical.contains(*k) {
                return Err(Error::InvalidParameter {
                    name: "free_amplitudes",
                    value: *k as f64,
                    constraint: "keys must be critical mode indices",
                });
            }
        }
    }

    let rho = model.order;
    let alpha = model.coupling_weight;
    let xi0 = model.coupling_time;
    // the near-critical guard is wider than the classification band so that
    // an unclassified index cannot slip through with an amplified amplitude
    let guard = opts.eps_crit * alpha.abs().max(1.0);

    let mut amplitudes = Vec::with_capacity(spectrum.len());
    for (k, &lambda) in spectrum.eigenvalues().iter().enumerate() {
        if critical.contains(k) {
            let b_k = free_amplitudes.and_then(|m| m.get(&k)).copied().unwrap_or(0.0);
            amplitudes.push(b_k);
            continue;
        }
        let b0 = ml_b(rho, lambda, xi0)?;
        let den = b0 - alpha;
        if den.abs() <= guard {
            return Err(Error::NearCriticalDenominator {
                index: k,
                denominator: den,
            });
        }
        let w0 = omega(rho, lambda, source, k, xi0, opts.quad_intervals)?;
        amplitudes.push((phi[k] - w0) / den);
    }

    Ok(SpectralSolution::new(
        *model,
        spectrum.eigenvalues().to_vec(),
        amplitudes,
        source.clone(),
        critical,
        opts.quad_intervals,
    ))
}
