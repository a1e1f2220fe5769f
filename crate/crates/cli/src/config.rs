//! Run configuration: a JSON document validated into solver inputs.
//! Unknown keys are rejected; range violations name the offending key.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use subdiff_core::{
    ml_b, FractionalModel, SourceTerm, SpectralDocument, SpectralVector, Spectrum, TimeGrid,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum Problem {
    #[serde(rename = "forward")]
    Forward,
    #[serde(rename = "invert-source")]
    InvertSource,
    #[serde(rename = "invert-phi")]
    InvertPhi,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum AlphaSpec {
    Value(f64),
    /// Pin the weight to the decay factor of the given mode at the coupling
    /// time, producing an exactly critical configuration.
    CriticalOf { critical_mode: usize },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelSpec {
    rho: f64,
    alpha: AlphaSpec,
    t_final: f64,
    xi0: f64,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
enum SpectrumSpec {
    #[serde(rename = "dirichlet")]
    Dirichlet { modes: usize, length: f64 },
    #[serde(rename = "explicit")]
    Explicit { eigenvalues: Vec<f64> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum DataSpec {
    #[serde(rename = "zero")]
    Zero,
    #[serde(rename = "coeffs")]
    Coeffs { values: Vec<f64> },
    /// amplitude on one basis mode
    #[serde(rename = "basis")]
    Basis { index: usize, amplitude: f64 },
    /// amplitude / (k+1)^exponent
    #[serde(rename = "powerlaw")]
    Powerlaw { exponent: f64, amplitude: f64 },
    /// seeded uniform draw in [-amplitude, amplitude] scaled by (k+1)^-2
    #[serde(rename = "random")]
    Random { amplitude: f64 },
    /// a spectral JSON document `{"eigenvalues": [...], "coeffs": [...]}`
    #[serde(rename = "file")]
    File { path: String },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum TimeProfile {
    #[serde(rename = "one")]
    One,
    #[serde(rename = "sin")]
    Sin { omega: f64 },
    #[serde(rename = "exp")]
    Exp { rate: f64 },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum SourceSpec {
    #[serde(rename = "constant")]
    Constant { coeffs: DataSpec },
    /// separable source coeffs_k * g(t) sampled on a uniform grid
    #[serde(rename = "sampled")]
    Sampled {
        coeffs: DataSpec,
        time: TimeProfile,
        #[serde(default = "default_source_steps")]
        steps: usize,
    },
}

fn default_source_steps() -> usize {
    512
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub eps_crit: f64,
    pub eps_den: f64,
    pub orth: f64,
    pub nonlocal: f64,
    pub overdet: f64,
    pub equation: f64,
    pub recovery: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eps_crit: 1e-9,
            eps_den: 1e-10,
            orth: 1e-12,
            nonlocal: 1e-8,
            overdet: 1e-8,
            equation: 5e-2,
            recovery: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoundtripSpec {
    pub target: RoundtripTarget,
    #[serde(default = "default_instances")]
    pub instances: usize,
    /// Observation time as a fraction of the coupling time.
    #[serde(default = "default_xi_ratio")]
    pub xi_ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum RoundtripTarget {
    #[serde(rename = "source")]
    Source,
    #[serde(rename = "phi")]
    Phi,
}

fn default_instances() -> usize {
    1
}

fn default_xi_ratio() -> f64 {
    0.5
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    problem: Option<Problem>,
    model: ModelSpec,
    spectrum: SpectrumSpec,
    #[serde(default)]
    xi1: Option<f64>,
    #[serde(default)]
    xi2: Option<f64>,
    #[serde(default)]
    phi: Option<DataSpec>,
    #[serde(default)]
    source: Option<SourceSpec>,
    #[serde(default)]
    observed: Option<DataSpec>,
    #[serde(default)]
    b_free: Option<BTreeMap<String, f64>>,
    #[serde(default)]
    tolerances: Tolerances,
    #[serde(default)]
    quad_intervals: Option<usize>,
    #[serde(default)]
    verify_nodes: Option<usize>,
    #[serde(default)]
    verify_t_min: Option<f64>,
    #[serde(default)]
    output_points: Option<usize>,
    #[serde(default)]
    out_dir: Option<String>,
    #[serde(default)]
    roundtrip: Option<RoundtripSpec>,
    #[serde(default)]
    scan_steps: Option<usize>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    allow_reversed_observation: Option<bool>,
}

/// Fully validated run configuration.
#[derive(Debug)]
pub struct RunConfig {
    pub problem: Option<Problem>,
    pub model: FractionalModel,
    pub spectrum: Spectrum,
    pub xi1: Option<f64>,
    pub xi2: Option<f64>,
    pub phi: Option<DataSpec>,
    pub source: Option<SourceSpec>,
    pub observed: Option<DataSpec>,
    pub b_free: BTreeMap<usize, f64>,
    pub tolerances: Tolerances,
    pub quad_intervals: usize,
    pub verify_nodes: usize,
    pub verify_t_min: Option<f64>,
    pub output_points: usize,
    pub out_dir: String,
    pub roundtrip: Option<RoundtripSpec>,
    pub scan_steps: usize,
    pub seed: u64,
    pub allow_reversed_observation: bool,
}

pub fn parse_config(text: &str, base_dir: &Path) -> anyhow::Result<RunConfig> {
    let raw: ConfigFile = serde_json::from_str(text).context("malformed configuration")?;

    let spectrum = match raw.spectrum {
        SpectrumSpec::Dirichlet { modes, length } => Spectrum::dirichlet(modes, length)?,
        SpectrumSpec::Explicit { eigenvalues } => Spectrum::from_eigenvalues(eigenvalues)?,
    };

    let alpha = match raw.model.alpha {
        AlphaSpec::Value(a) => a,
        AlphaSpec::CriticalOf { critical_mode } => {
            if critical_mode >= spectrum.len() {
                bail!(
                    "model.alpha.critical_mode = {critical_mode} exceeds the {}-mode spectrum",
                    spectrum.len()
                );
            }
            // a provisional model only validates rho/t_final/xi0 ranges
            FractionalModel::new(raw.model.rho, 0.5, raw.model.t_final, raw.model.xi0)?;
            ml_b(raw.model.rho, spectrum.eigenvalue(critical_mode), raw.model.xi0)?
        }
    };
    let model = FractionalModel::new(raw.model.rho, alpha, raw.model.t_final, raw.model.xi0)?;

    let mut b_free = BTreeMap::new();
    if let Some(map) = raw.b_free {
        for (key, value) in map {
            let index: usize = key
                .parse()
                .map_err(|_| anyhow!("b_free key `{key}` is not a mode index"))?;
            b_free.insert(index, value);
        }
    }

    let allow_reversed = raw.allow_reversed_observation.unwrap_or(false);
    if let Some(xi1) = raw.xi1 {
        if xi1.is_nan() || xi1 <= 0.0 {
            bail!("range error: xi1 = {xi1} must be positive");
        }
        if xi1 >= model.coupling_time && !allow_reversed {
            return Err(subdiff_core::Error::BadGeometry {
                detail: format!(
                    "xi1 = {xi1} must lie strictly before the coupling time xi0 = {} \
                     (set allow_reversed_observation to study the degenerate regime)",
                    model.coupling_time
                ),
            }
            .into());
        }
    }
    if let Some(xi2) = raw.xi2 {
        if !(xi2 > 0.0 && xi2 <= model.final_time) {
            bail!("range error: xi2 = {xi2} must lie in (0, t_final]");
        }
        if xi2 == model.coupling_time {
            return Err(subdiff_core::Error::BadGeometry {
                detail: format!("xi2 = {xi2} coincides with the coupling time"),
            }
            .into());
        }
    }
    if raw.problem == Some(Problem::InvertSource) && raw.xi1.is_none() {
        bail!("invert-source requires xi1");
    }
    if raw.problem == Some(Problem::InvertPhi) && raw.xi2.is_none() {
        bail!("invert-phi requires xi2");
    }

    Ok(RunConfig {
        problem: raw.problem,
        model,
        spectrum,
        xi1: raw.xi1,
        xi2: raw.xi2,
        phi: raw.phi,
        source: raw.source,
        observed: raw.observed,
        b_free,
        tolerances: raw.tolerances,
        quad_intervals: raw.quad_intervals.unwrap_or(512),
        verify_nodes: raw.verify_nodes.unwrap_or(512),
        verify_t_min: raw.verify_t_min,
        output_points: raw.output_points.unwrap_or(33),
        out_dir: raw
            .out_dir
            .unwrap_or_else(|| base_dir.join("out").to_string_lossy().into_owned()),
        roundtrip: raw.roundtrip,
        scan_steps: raw.scan_steps.unwrap_or(999),
        seed: raw.seed.unwrap_or(0),
        allow_reversed_observation: allow_reversed,
    })
}

impl RunConfig {
    pub fn solver_options(&self) -> subdiff_core::SolverOptions {
        subdiff_core::SolverOptions {
            eps_crit: self.tolerances.eps_crit,
            eps_den: self.tolerances.eps_den,
            orth_tol: self.tolerances.orth,
            quad_intervals: self.quad_intervals,
            allow_reversed_observation: self.allow_reversed_observation,
        }
    }

    /// Materialize a coefficient vector; `rng` drives `random` specs.
    pub fn build_data(
        &self,
        spec: &DataSpec,
        base_dir: &Path,
        rng: &mut ChaCha8Rng,
    ) -> anyhow::Result<SpectralVector> {
        let n = self.spectrum.len();
        Ok(match spec {
            DataSpec::Zero => SpectralVector::zeros(n),
            DataSpec::Coeffs { values } => {
                if values.len() != n {
                    bail!("coefficient list has {} entries, spectrum has {n}", values.len());
                }
                SpectralVector(values.clone())
            }
            DataSpec::Basis { index, amplitude } => {
                if *index >= n {
                    bail!("basis index {index} exceeds the {n}-mode spectrum");
                }
                let mut v = vec![0.0; n];
                v[*index] = *amplitude;
                SpectralVector(v)
            }
            DataSpec::Powerlaw { exponent, amplitude } => SpectralVector(
                (0..n)
                    .map(|k| amplitude / ((k + 1) as f64).powf(*exponent))
                    .collect(),
            ),
            DataSpec::Random { amplitude } => SpectralVector(
                (0..n)
                    .map(|k| {
                        rng.gen_range(-amplitude..*amplitude) / ((k + 1) * (k + 1)) as f64
                    })
                    .collect(),
            ),
            DataSpec::File { path } => {
                let full = base_dir.join(path);
                let text = std::fs::read_to_string(&full)
                    .with_context(|| format!("reading {}", full.display()))?;
                let doc: SpectralDocument =
                    serde_json::from_str(&text).context("malformed spectral document")?;
                let (file_spectrum, coeffs) = doc.split()?;
                if file_spectrum.eigenvalues() != self.spectrum.eigenvalues() {
                    bail!("eigenvalues in {} do not match the configured spectrum", full.display());
                }
                coeffs
            }
        })
    }

    pub fn build_source(
        &self,
        spec: &SourceSpec,
        base_dir: &Path,
        rng: &mut ChaCha8Rng,
    ) -> anyhow::Result<SourceTerm> {
        Ok(match spec {
            SourceSpec::Constant { coeffs } => {
                SourceTerm::Constant(self.build_data(coeffs, base_dir, rng)?)
            }
            SourceSpec::Sampled { coeffs, time, steps } => {
                let c = self.build_data(coeffs, base_dir, rng)?;
                let grid = TimeGrid::uniform(self.model.final_time, (*steps).max(2))?;
                let profile = |t: f64| -> f64 {
                    match time {
                        TimeProfile::One => 1.0,
                        TimeProfile::Sin { omega } => (omega * t).sin(),
                        TimeProfile::Exp { rate } => (-rate * t).exp(),
                    }
                };
                let samples: Vec<Vec<f64>> = (0..self.spectrum.len())
                    .map(|k| grid.nodes().iter().map(|&t| c[k] * profile(t)).collect())
                    .collect();
                SourceTerm::time_dependent(grid, samples)?
            }
        })
    }
}
