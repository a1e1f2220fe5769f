//! Spectral representation of the operator: eigenpairs, Fourier coefficients,
//! fractional-power norms, critical-mode detection and orthogonality checks.
//!
//! The operator is held as an explicit, non-decreasing list of positive
//! eigenvalues; a repeated eigenvalue encodes multiplicity. An optional
//! concrete realization (the Dirichlet sine basis on an interval) enables
//! pointwise synthesis and projection. Mode indices are zero-based.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ml::ml_b;

/// Concrete basis realization backing a spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Realization {
    /// Dirichlet sine basis on (0, L): v_k(x) = sqrt(2/L) sin((k+1) pi x / L).
    DirichletInterval { length: f64 },
}

/// Eigenvalues of the operator, sorted non-decreasing; repeats encode
/// multiplicity. The truncation level is the list length.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    realization: Option<Realization>,
}

impl Spectrum {
    /// Spectrum from an explicit eigenvalue list (no pointwise realization).
    pub fn from_eigenvalues(eigenvalues: Vec<f64>) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::InvalidParameter {
                name: "eigenvalues",
                value: 0.0,
                constraint: "at least one eigenvalue",
            });
        }
        for pair in eigenvalues.windows(2) {
            if !(pair[1] >= pair[0]) {
                return Err(Error::InvalidParameter {
                    name: "eigenvalues",
                    value: pair[1],
                    constraint: "non-decreasing order",
                });
            }
        }
        if !(eigenvalues[0] > 0.0) || eigenvalues.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "eigenvalues",
                value: eigenvalues[0],
                constraint: "all eigenvalues positive and finite",
            });
        }
        Ok(Self {
            eigenvalues,
            realization: None,
        })
    }

    /// Dirichlet Laplacian on (0, L): lambda_k = ((k+1) pi / L)^2, all simple.
    pub fn dirichlet(modes: usize, length: f64) -> Result<Self> {
        if modes == 0 {
            return Err(Error::InvalidParameter {
                name: "modes",
                value: 0.0,
                constraint: "at least one mode",
            });
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::InvalidParameter {
                name: "length",
                value: length,
                constraint: "positive interval length",
            });
        }
        let eigenvalues = (1..=modes)
            .map(|k| {
                let w = k as f64 * std::f64::consts::PI / length;
                w * w
            })
            .collect();
        Ok(Self {
            eigenvalues,
            realization: Some(Realization::DirichletInterval { length }),
        })
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvalue(&self, k: usize) -> f64 {
        self.eigenvalues[k]
    }

    pub fn realization(&self) -> Option<&Realization> {
        self.realization.as_ref()
    }

    /// Value of the k-th basis function at x. Requires a realization.
    pub fn basis_value(&self, k: usize, x: f64) -> Result<f64> {
        match &self.realization {
            Some(Realization::DirichletInterval { length }) => {
                let l = *length;
                Ok((2.0 / l).sqrt() * ((k as f64 + 1.0) * std::f64::consts::PI * x / l).sin())
            }
            None => Err(Error::MissingRealization),
        }
    }

    fn interval_length(&self) -> Result<f64> {
        match &self.realization {
            Some(Realization::DirichletInterval { length }) => Ok(*length),
            None => Err(Error::MissingRealization),
        }
    }
}

/// Coefficients of an element of the state space in the eigenbasis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralVector(pub Vec<f64>);

impl SpectralVector {
    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn check_aligned(&self, spectrum: &Spectrum) -> Result<()> {
        if self.len() != spectrum.len() {
            return Err(Error::LengthMismatch {
                expected: spectrum.len(),
                actual: self.len(),
            });
        }
        Ok(())
    }
}

impl std::ops::Index<usize> for SpectralVector {
    type Output = f64;
    fn index(&self, k: usize) -> &f64 {
        &self.0[k]
    }
}

/// Combined on-disk form of a spectrum and a coefficient vector.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralDocument {
    pub eigenvalues: Vec<f64>,
    pub coeffs: Vec<f64>,
}

impl SpectralDocument {
    pub fn new(spectrum: &Spectrum, coeffs: &SpectralVector) -> Self {
        Self {
            eigenvalues: spectrum.eigenvalues().to_vec(),
            coeffs: coeffs.0.clone(),
        }
    }

    pub fn split(self) -> Result<(Spectrum, SpectralVector)> {
        let spectrum = Spectrum::from_eigenvalues(self.eigenvalues)?;
        let coeffs = SpectralVector(self.coeffs);
        coeffs.check_aligned(&spectrum)?;
        Ok((spectrum, coeffs))
    }
}

/// Scalar data of the non-local problem: fractional order, coupling weight
/// and coupling time of the condition u(coupling_time) = weight * u(0) + phi.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FractionalModel {
    /// Fractional order of the time derivative, in (0, 1).
    pub order: f64,
    /// Weight of u(0) in the non-local condition.
    pub coupling_weight: f64,
    /// Final time T of the evolution interval.
    pub final_time: f64,
    /// Time at which the non-local condition couples to u(0); in (0, T].
    pub coupling_time: f64,
}

impl FractionalModel {
    pub fn new(order: f64, coupling_weight: f64, final_time: f64, coupling_time: f64) -> Result<Self> {
        let m = Self {
            order,
            coupling_weight,
            final_time,
            coupling_time,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.order > 0.0 && self.order < 1.0) {
            return Err(Error::InvalidParameter {
                name: "rho",
                value: self.order,
                constraint: "0 < rho < 1",
            });
        }
        if !self.coupling_weight.is_finite() {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: self.coupling_weight,
                constraint: "finite",
            });
        }
        if !(self.final_time > 0.0) || !self.final_time.is_finite() {
            return Err(Error::InvalidParameter {
                name: "t_final",
                value: self.final_time,
                constraint: "T > 0",
            });
        }
        if !(self.coupling_time > 0.0 && self.coupling_time <= self.final_time) {
            return Err(Error::InvalidParameter {
                name: "xi0",
                value: self.coupling_time,
                constraint: "0 < xi0 <= T",
            });
        }
        Ok(())
    }
}

/// Modes at which the decay factor at the coupling time equals the coupling
/// weight (within tolerance). At these modes the forward problem loses
/// uniqueness and existence requires data orthogonality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalSet {
    /// Critical mode indices, ascending and zero-based.
    pub indices: Vec<usize>,
    /// The coupling weight the set was computed for.
    pub alpha: f64,
    /// Absolute tolerance that was applied to |b(xi0) - alpha|.
    pub tolerance: f64,
}

impl CriticalSet {
    pub fn empty(alpha: f64, tolerance: f64) -> Self {
        Self {
            indices: Vec::new(),
            alpha,
            tolerance,
        }
    }

    pub fn contains(&self, k: usize) -> bool {
        self.indices.binary_search(&k).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// All modes k with |E_rho(-lambda_k xi0^rho) - alpha| within tolerance.
/// `eps_crit` is relative to |alpha|. Weights outside (0, 1) can never be
/// attained by the decay factor, so the set is empty for them.
pub fn critical_set(model: &FractionalModel, spectrum: &Spectrum, eps_crit: f64) -> Result<CriticalSet> {
    model.validate()?;
    let alpha = model.coupling_weight;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Ok(CriticalSet::empty(alpha, 0.0));
    }
    let tolerance = eps_crit * alpha.abs();
    let mut indices = Vec::new();
    for (k, &lambda) in spectrum.eigenvalues().iter().enumerate() {
        let b = ml_b(model.order, lambda, model.coupling_time)?;
        if (b - alpha).abs() <= tolerance {
            indices.push(k);
        }
    }
    Ok(CriticalSet {
        indices,
        alpha,
        tolerance,
    })
}

/// True iff the coefficients vanish (within `tol`) on every critical mode;
/// also reports the violating indices.
pub fn check_orthogonality(h: &SpectralVector, critical: &CriticalSet, tol: f64) -> (bool, Vec<usize>) {
    let violators: Vec<usize> = critical
        .indices
        .iter()
        .copied()
        .filter(|&k| k < h.len() && h[k].abs() > tol)
        .collect();
    (violators.is_empty(), violators)
}

/// Fractional-power norm (sum lambda_k^{2 tau} |h_k|^2)^{1/2}; tau = 0 is the
/// plain Euclidean norm.
pub fn sobolev_norm(h: &SpectralVector, spectrum: &Spectrum, tau: f64) -> Result<f64> {
    h.check_aligned(spectrum)?;
    let mut acc = 0.0;
    for (hk, &lambda) in h.0.iter().zip(spectrum.eigenvalues()) {
        acc += lambda.powf(2.0 * tau) * hk * hk;
    }
    Ok(acc.sqrt())
}

/// Project samples of a function on the uniform grid over [0, L] (endpoints
/// included) onto the basis by composite trapezoid quadrature. The grid must
/// hold at least 4N points for an N-mode spectrum.
pub fn fourier_coeffs(values: &[f64], spectrum: &Spectrum) -> Result<SpectralVector> {
    let length = spectrum.interval_length()?;
    let n = spectrum.len();
    let points = values.len();
    if points < 4 * n {
        return Err(Error::UnderResolvedGrid {
            points,
            modes: n,
            required: 4 * n,
        });
    }
    let h = length / (points - 1) as f64;
    let mut coeffs = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = 0.0;
        for (i, &v) in values.iter().enumerate() {
            let x = i as f64 * h;
            let w = if i == 0 || i == points - 1 { 0.5 } else { 1.0 };
            acc += w * v * spectrum.basis_value(k, x)?;
        }
        coeffs.push(acc * h);
    }
    Ok(SpectralVector(coeffs))
}

/// Evaluate sum_k coeffs_k v_k(x) on a uniform grid of `points` nodes over
/// [0, L], endpoints included.
pub fn synthesize(spectrum: &Spectrum, coeffs: &SpectralVector, points: usize) -> Result<Vec<f64>> {
    coeffs.check_aligned(spectrum)?;
    let length = spectrum.interval_length()?;
    if points < 2 {
        return Err(Error::InvalidParameter {
            name: "points",
            value: points as f64,
            constraint: "at least two grid points",
        });
    }
    let h = length / (points - 1) as f64;
    let mut out = Vec::with_capacity(points);
    for i in 0..points {
        let x = i as f64 * h;
        let mut acc = 0.0;
        for (k, c) in coeffs.0.iter().enumerate() {
            acc += c * spectrum.basis_value(k, x)?;
        }
        out.push(acc);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn model(rho: f64, alpha: f64, t: f64, xi0: f64) -> FractionalModel {
        FractionalModel::new(rho, alpha, t, xi0).unwrap()
    }

    #[test]
    fn dirichlet_eigenvalues() {
        let s = Spectrum::dirichlet(3, std::f64::consts::PI).unwrap();
        for (k, want) in [(0usize, 1.0), (1, 4.0), (2, 9.0)] {
            assert!((s.eigenvalue(k) - want).abs() < 1e-12);
        }
        let s1 = Spectrum::dirichlet(1, 1.0).unwrap();
        assert!((s1.eigenvalue(0) - std::f64::consts::PI.powi(2)).abs() < 1e-12);
        let s64 = Spectrum::dirichlet(64, 1.0).unwrap();
        assert!((s64.eigenvalue(63) / s64.eigenvalue(0) - 4096.0).abs() < 1e-9);
        assert!(Spectrum::dirichlet(0, 1.0).is_err());
        assert!(Spectrum::dirichlet(4, -1.0).is_err());
    }

    #[test]
    fn eigenvalue_list_validation() {
        assert!(Spectrum::from_eigenvalues(vec![]).is_err());
        assert!(Spectrum::from_eigenvalues(vec![2.0, 1.0]).is_err());
        assert!(Spectrum::from_eigenvalues(vec![-1.0, 2.0]).is_err());
        assert!(Spectrum::from_eigenvalues(vec![1.0, 1.0, 4.0]).is_ok());
    }

    #[test]
    fn projection_of_pure_mode_is_a_unit_vector() {
        let s = Spectrum::dirichlet(4, 1.0).unwrap();
        let samples = synthesize(&s, &SpectralVector(vec![0.0, 1.0, 0.0, 0.0]), 64).unwrap();
        let c = fourier_coeffs(&samples, &s).unwrap();
        for (k, &v) in c.as_slice().iter().enumerate() {
            let want = if k == 1 { 1.0 } else { 0.0 };
            assert!((v - want).abs() < 1e-12, "k={k}: {v}");
        }
    }

    #[test]
    fn projection_of_zero_is_zero() {
        let s = Spectrum::dirichlet(3, 1.0).unwrap();
        let c = fourier_coeffs(&vec![0.0; 32], &s).unwrap();
        assert!(c.as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn projection_matches_symbolic_integrals() {
        // sin(pi x) + 0.5 sin(3 pi x) on (0,1): coefficients 1/sqrt(2) and
        // 0.5/sqrt(2) against the orthonormal basis sqrt(2) sin(k pi x)
        let s = Spectrum::dirichlet(4, 1.0).unwrap();
        let p = 257;
        let values: Vec<f64> = (0..p)
            .map(|i| {
                let x = i as f64 / (p - 1) as f64;
                (std::f64::consts::PI * x).sin() + 0.5 * (3.0 * std::f64::consts::PI * x).sin()
            })
            .collect();
        let c = fourier_coeffs(&values, &s).unwrap();
        let r = 0.5f64.sqrt();
        let want = [r, 0.0, 0.5 * r, 0.0];
        for k in 0..4 {
            assert!((c[k] - want[k]).abs() < 1e-12, "k={k}: {} vs {}", c[k], want[k]);
        }
    }

    #[test]
    fn under_resolved_grid_is_rejected() {
        let s = Spectrum::dirichlet(8, 1.0).unwrap();
        let r = fourier_coeffs(&vec![0.0; 31], &s);
        assert!(matches!(r, Err(Error::UnderResolvedGrid { .. })));
        let bare = Spectrum::from_eigenvalues(vec![1.0]).unwrap();
        assert!(matches!(
            fourier_coeffs(&[0.0; 8], &bare),
            Err(Error::MissingRealization)
        ));
    }

    #[test]
    fn sobolev_norm_examples() {
        let s = Spectrum::from_eigenvalues(vec![1.0, 4.0]).unwrap();
        let h = SpectralVector(vec![1.0, 0.0]);
        assert!((sobolev_norm(&h, &s, 1.0).unwrap() - 1.0).abs() < 1e-15);
        let z = SpectralVector::zeros(2);
        assert_eq!(sobolev_norm(&z, &s, 0.7).unwrap(), 0.0);
        let h = SpectralVector(vec![1.0, 1.0]);
        let got = sobolev_norm(&h, &s, 0.5).unwrap();
        assert!((got - 5.0f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn critical_set_outside_unit_interval_is_empty() {
        let s = Spectrum::dirichlet(6, 1.0).unwrap();
        for alpha in [1.5, -1.0, 0.0, 1.0, 7.3] {
            let m = model(0.5, alpha, 1.0, 1.0);
            assert!(critical_set(&m, &s, 1e-9).unwrap().is_empty());
        }
    }

    #[test]
    fn constructed_critical_mode_is_detected() {
        let s = Spectrum::dirichlet(6, std::f64::consts::PI).unwrap();
        let m0 = model(0.5, 0.5, 1.0, 0.8);
        let alpha = ml_b(m0.order, s.eigenvalue(2), m0.coupling_time).unwrap();
        let m = model(0.5, alpha, 1.0, 0.8);
        let c = critical_set(&m, &s, 1e-9).unwrap();
        assert_eq!(c.indices, vec![2]);
        assert!(c.contains(2) && !c.contains(1));
    }

    #[test]
    fn repeated_eigenvalue_gives_both_indices() {
        let s = Spectrum::from_eigenvalues(vec![1.0, 4.0, 4.0, 9.0]).unwrap();
        let m0 = model(0.4, 0.5, 1.0, 1.0);
        let alpha = ml_b(m0.order, 4.0, m0.coupling_time).unwrap();
        let m = model(0.4, alpha, 1.0, 1.0);
        let c = critical_set(&m, &s, 1e-9).unwrap();
        assert_eq!(c.indices, vec![1, 2]);
    }

    #[test]
    fn orthogonality_check_reports_violators() {
        let c = CriticalSet {
            indices: vec![2],
            alpha: 0.3,
            tolerance: 1e-10,
        };
        let empty = CriticalSet::empty(0.3, 1e-10);
        let h = SpectralVector(vec![1.0, 2.0, 3.0]);
        assert!(check_orthogonality(&h, &empty, 1e-12).0);
        let (ok, bad) = check_orthogonality(&h, &c, 1e-12);
        assert!(!ok);
        assert_eq!(bad, vec![2]);
        let tiny = SpectralVector(vec![1.0, 2.0, 1e-15]);
        assert!(check_orthogonality(&tiny, &c, 1e-12).0);
    }

    #[test]
    fn spectral_document_round_trip() {
        let s = Spectrum::dirichlet(3, 1.0).unwrap();
        let v = SpectralVector(vec![1.0, -0.5, 0.25]);
        let doc = SpectralDocument::new(&s, &v);
        let text = serde_json::to_string(&doc).unwrap();
        let back: SpectralDocument = serde_json::from_str(&text).unwrap();
        let (s2, v2) = back.split().unwrap();
        assert_eq!(s2.eigenvalues(), s.eigenvalues());
        assert_eq!(v2, v);
    }

    proptest! {
        #[test]
        fn critical_closure_over_equal_eigenvalues(rep in 2usize..4, alpha_seed in 0.1f64..0.9) {
            let mut eig = vec![1.0];
            eig.extend(std::iter::repeat_n(6.25, rep));
            eig.push(30.0);
            let s = Spectrum::from_eigenvalues(eig).unwrap();
            let alpha = ml_b(0.6, 6.25, 0.9).unwrap() * (alpha_seed / alpha_seed); // constructed fixed point
            let m = model(0.6, alpha, 1.0, 0.9);
            let c = critical_set(&m, &s, 1e-9).unwrap();
            // every index sharing the eigenvalue is in or out together
            for (k, &l) in s.eigenvalues().iter().enumerate() {
                if l == 6.25 {
                    prop_assert!(c.contains(k));
                } else {
                    prop_assert!(!c.contains(k));
                }
            }
        }

        #[test]
        fn sobolev_tau_zero_is_euclidean(v in proptest::collection::vec(-10.0f64..10.0, 1..12)) {
            let n = v.len();
            let eig: Vec<f64> = (1..=n).map(|k| (k * k) as f64).collect();
            let s = Spectrum::from_eigenvalues(eig).unwrap();
            let h = SpectralVector(v.clone());
            let norm = sobolev_norm(&h, &s, 0.0).unwrap();
            let plain = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            prop_assert_eq!(norm, plain);
        }

        #[test]
        fn projection_synthesis_identity(coeffs in proptest::collection::vec(-2.0f64..2.0, 1..6)) {
            let n = coeffs.len();
            let s = Spectrum::dirichlet(n, 1.0).unwrap();
            let v = SpectralVector(coeffs.clone());
            let samples = synthesize(&s, &v, (8 * n).max(16) + 1).unwrap();
            let back = fourier_coeffs(&samples, &s).unwrap();
            for k in 0..n {
                prop_assert!((back[k] - coeffs[k]).abs() < 1e-10,
                             "mode {}: {} vs {}", k, back[k], coeffs[k]);
            }
        }
    }
}
