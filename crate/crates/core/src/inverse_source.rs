//! Recovery of a time-independent source from the non-local datum and one
//! interior observation u(xi1) = V with 0 < xi1 < xi0.
//!
//! Mode-wise, with b = decay factor and a = accumulation factor, the
//! observation pins both unknowns through the margin
//! D(lambda) = b(xi1) a(xi0) + a(xi1) (alpha - b(xi0)),
//! which is strictly positive whenever xi1 < xi0 and alpha is in (0, 1).
//! Critical modes carry no source component; their state is pinned by the
//! observation alone, which is what restores uniqueness of u there.

use crate::error::{Error, Result};
use crate::forward::{SolverOptions, SpectralSolution};
use crate::ml::{ml_a, ml_b};
use crate::source::SourceTerm;
use crate::spectral::{critical_set, FractionalModel, SpectralVector, Spectrum};

/// Input of the source-recovery problem.
#[derive(Debug, Clone)]
pub struct SourceRecoveryInput {
    pub model: FractionalModel,
    /// Observation time xi1; the theory requires 0 < xi1 < xi0.
    pub observation_time: f64,
    /// Non-local datum coefficients.
    pub phi: SpectralVector,
    /// Observed state coefficients u(xi1).
    pub observed: SpectralVector,
}

/// The uniqueness margin D(lambda) at one eigenvalue.
pub fn uniqueness_margin(model: &FractionalModel, lambda: f64, xi1: f64) -> Result<f64> {
    model.validate()?;
    let rho = model.order;
    let alpha = model.coupling_weight;
    let xi0 = model.coupling_time;
    let b0 = ml_b(rho, lambda, xi0)?;
    let b1 = ml_b(rho, lambda, xi1)?;
    let a0 = ml_a(rho, lambda, xi0)?;
    let a1 = ml_a(rho, lambda, xi1)?;
    Ok(b1 * a0 + a1 * (alpha - b0))
}

/// The coupling weight in (0, 1) that collapses the margin to zero for the
/// given eigenvalue, if one exists. Only reachable when xi1 > xi0; for
/// xi1 <= xi0 the margin stays positive on the whole interval and `None`
/// is returned.
pub fn find_degenerate_alpha(
    model: &FractionalModel,
    lambda: f64,
    xi1: f64,
) -> Result<Option<f64>> {
    model.validate()?;
    if !(lambda > 0.0) || !(xi1 > 0.0) {
        return Err(Error::InvalidParameter {
            name: "lambda/xi1",
            value: lambda.min(xi1),
            constraint: "positive",
        });
    }
    let rho = model.order;
    let xi0 = model.coupling_time;
    let b0 = ml_b(rho, lambda, xi0)?;
    let b1 = ml_b(rho, lambda, xi1)?;
    let a0 = ml_a(rho, lambda, xi0)?;
    let a1 = ml_a(rho, lambda, xi1)?;
    let alpha_star = (a1 * b0 - a0 * b1) / a1;
    if alpha_star > 0.0 && alpha_star < 1.0 {
        Ok(Some(alpha_star))
    } else {
        Ok(None)
    }
}

/// Recover the time-independent source and the state from (phi, V).
pub fn recover_source(
    input: &SourceRecoveryInput,
    spectrum: &Spectrum,
    opts: &SolverOptions,
) -> Result<(SpectralVector, SpectralSolution)> {
    let model = &input.model;
    model.validate()?;
    input.phi.check_aligned(spectrum)?;
    input.observed.check_aligned(spectrum)?;
    let xi1 = input.observation_time;
    let xi0 = model.coupling_time;
    if !(xi1 > 0.0) || !xi1.is_finite() {
        return Err(Error::InvalidParameter {
            name: "xi1",
            value: xi1,
            constraint: "0 < xi1",
        });
    }
    if xi1 >= xi0 && !opts.allow_reversed_observation {
        return Err(Error::BadGeometry {
            detail: format!(
                "observation time xi1 = {xi1} must precede the coupling time xi0 = {xi0} \
                 (override to study the degenerate regime)"
            ),
        });
    }

    let critical = critical_set(model, spectrum, opts.eps_crit)?;
    for &k in &critical.indices {
        let mag = input.phi[k].abs();
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
    let mut f = Vec::with_capacity(n);
    let mut amplitudes = Vec::with_capacity(n);
    for (k, &lambda) in spectrum.eigenvalues().iter().enumerate() {
        if critical.contains(k) {
            // source vanishes; the observation pins the free amplitude
            let b1 = ml_b(rho, lambda, xi1)?;
            if !b1.is_normal() {
                return Err(Error::UnderflowDecay { index: k });
            }
            f.push(0.0);
            amplitudes.push(input.observed[k] / b1);
            continue;
        }
        let b0 = ml_b(rho, lambda, xi0)?;
        let b1 = ml_b(rho, lambda, xi1)?;
        let a0 = ml_a(rho, lambda, xi0)?;
        let a1 = ml_a(rho, lambda, xi1)?;
        let margin = b1 * a0 + a1 * (alpha - b0);
        // floored relative to the scale of its terms
        let floor = opts.eps_den * ((b1 * a0).abs() + a1.abs() * (alpha.abs() + b0.abs()));
        if margin.abs() <= floor {
            return Err(Error::DegenerateDenominator {
                index: k,
                margin,
            });
        }
        let v_k = input.observed[k];
        let phi_k = input.phi[k];
        f.push(((alpha - b0) * v_k + b1 * phi_k) / margin);
        // the homogeneous amplitude in the cancelled form, stable near
        // critical weights: c_k = (a(xi0) V_k - a(xi1) phi_k) / D
        amplitudes.push((a0 * v_k - a1 * phi_k) / margin);
    }

    let f = SpectralVector(f);
    let solution = SpectralSolution::new(
        *model,
        spectrum.eigenvalues().to_vec(),
        amplitudes,
        SourceTerm::Constant(f.clone()),
        critical,
        opts.quad_intervals,
    );
    Ok((f, solution))
}
