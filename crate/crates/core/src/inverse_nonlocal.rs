//! Recovery of the non-local datum from the source and one observation
//! u(xi2) = W with xi2 in (0, T], xi2 != xi0.
//!
//! Mode-wise: phi_k = (b(xi0) - alpha) / b(xi2) * [W_k - omega_k(xi2)] plus
//! omega_k(xi0) for non-critical modes; critical modes carry phi_k = 0 and
//! the observation pins their amplitude W_k / b(xi2), which is the uniqueness
//! mechanism in the critical regime.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::forward::{omega, SolverOptions, SpectralSolution};
use crate::ml::ml_b;
use crate::source::SourceTerm;
use crate::spectral::{critical_set, sobolev_norm, FractionalModel, SpectralVector, Spectrum};

/// Input of the non-local-datum recovery problem.
#[derive(Debug, Clone)]
pub struct PhiRecoveryInput {
    pub model: FractionalModel,
    /// Observation time xi2 in (0, T], distinct from the coupling time.
    pub observation_time: f64,
    pub source: SourceTerm,
    /// Observed state coefficients u(xi2).
    pub observed: SpectralVector,
}

/// Recover the non-local datum and the state from (f, W).
pub fn recover_phi(
    input: &PhiRecoveryInput,
    spectrum: &Spectrum,
    opts: &SolverOptions,
) -> Result<(SpectralVector, SpectralSolution)> {
    let model = &input.model;
    model.validate()?;
    input.observed.check_aligned(spectrum)?;
    if input.source.n_modes() != spectrum.len() {
        return Err(Error::LengthMismatch {
            expected: spectrum.len(),
            actual: input.source.n_modes(),
        });
    }
    let xi2 = input.observation_time;
    let xi0 = model.coupling_time;
    if !(xi2 > 0.0 && xi2 <= model.final_time) {
        return Err(Error::InvalidParameter {
            name: "xi2",
            value: xi2,
            constraint: "0 < xi2 <= T",
        });
    }
    if input.source.coverage() < model.final_time * (1.0 - 1e-12) {
        return Err(Error::TimeOutOfRange {
            t: model.final_time,
            t_max: input.source.coverage(),
        });
    }
    if xi2 == xi0 {
        return Err(Error::BadGeometry {
            detail: format!(
                "observation time xi2 = {xi2} coincides with the coupling time; the problem \
                 degenerates to the backward problem"
            ),
        });
    }

    let critical = critical_set(model, spectrum, opts.eps_crit)?;
    for &k in &critical.indices {
        let mag = input.source.mode_magnitude(k);
        if mag > opts.orth_tol {
            return Err(Error::OrthogonalityViolation {
                index: k,
                magnitude: mag,
                tolerance: opts.orth_tol,
            });
        }
    }

    let rho = model.order;
    let alpha = model.coupling_weight;
    let n = spectrum.len();
    let mut phi = Vec::with_capacity(n);
    let mut amplitudes = Vec::with_capacity(n);
    for (k, &lambda) in spectrum.eigenvalues().iter().enumerate() {
        let b2 = ml_b(rho, lambda, xi2)?;
        if !b2.is_normal() {
            return Err(Error::UnderflowDecay { index: k });
        }
        let w_k = input.observed[k];
        if critical.contains(k) {
            phi.push(0.0);
            amplitudes.push(w_k / b2);
            continue;
        }
        let b0 = ml_b(rho, lambda, xi0)?;
        let w_xi2 = omega(rho, lambda, &input.source, k, xi2, opts.quad_intervals)?;
        let w_xi0 = omega(rho, lambda, &input.source, k, xi0, opts.quad_intervals)?;
        phi.push((b0 - alpha) / b2 * (w_k - w_xi2) + w_xi0);
        // cancelled form of (phi_k - omega_k(xi0)) / (b(xi0) - alpha)
        amplitudes.push((w_k - w_xi2) / b2);
    }

    let phi = SpectralVector(phi);
    let solution = SpectralSolution::new(
        *model,
        spectrum.eigenvalues().to_vec(),
        amplitudes,
        input.source.clone(),
        critical,
        opts.quad_intervals,
    );
    Ok((phi, solution))
}

/// Largest fractional-power norm of the source over its time samples; a
/// diagnostic proxy for the regularity hypothesis of the recovery theorem,
/// reported rather than enforced at finite truncation.
pub fn source_regularity_diagnostic(
    source: &SourceTerm,
    spectrum: &Spectrum,
    epsilon: f64,
) -> Result<f64> {
    match source {
        SourceTerm::Constant(v) => sobolev_norm(v, spectrum, epsilon),
        SourceTerm::TimeDependent { grid, samples } => {
            let mut worst = 0.0f64;
            for j in 0..grid.len() {
                let snap = SpectralVector(samples.iter().map(|row| row[j]).collect());
                worst = worst.max(sobolev_norm(&snap, spectrum, epsilon)?);
            }
            Ok(worst)
        }
    }
}

/// Per-mode amplification factors |(b(xi0) - alpha) / b(xi2)| of the datum
/// recovery; a conditioning table, no pass/fail. The canonical use sets the
/// coupling weight to zero, where the factors describe the classical backward
/// problem as xi2 approaches the coupling time.
#[derive(Debug, Clone, Serialize)]
pub struct BackwardReport {
    pub factors: Vec<f64>,
    /// Indices whose factor exceeds 1e6 (severe amplification).
    pub flagged: Vec<usize>,
}

pub fn backward_limit_check(
    model: &FractionalModel,
    spectrum: &Spectrum,
    xi2: f64,
) -> Result<BackwardReport> {
    model.validate()?;
    if !(xi2 > 0.0 && xi2 <= model.final_time) {
        return Err(Error::InvalidParameter {
            name: "xi2",
            value: xi2,
            constraint: "0 < xi2 <= T",
        });
    }
    let mut factors = Vec::with_capacity(spectrum.len());
    let mut flagged = Vec::new();
    for (k, &lambda) in spectrum.eigenvalues().iter().enumerate() {
        let b0 = ml_b(model.order, lambda, model.coupling_time)?;
        let b2 = ml_b(model.order, lambda, xi2)?;
        let factor = ((b0 - model.coupling_weight) / b2).abs();
        if factor > 1e6 {
            flagged.push(k);
        }
        factors.push(factor);
    }
    Ok(BackwardReport { factors, flagged })
}
