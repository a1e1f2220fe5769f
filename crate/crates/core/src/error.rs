use thiserror::Error;

/// Errors produced by the solver library.
///
/// The three variants `BadGeometry`, `OrthogonalityViolation` and
/// `DegenerateDenominator` correspond to structural failures of the
/// underlying problems (wrong observation geometry, missing existence
/// condition, lost uniqueness) and are worth distinguishing in callers;
/// everything else is input validation or numerical guard-rails.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: must satisfy {constraint}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    #[error("Mittag-Leffler argument z = {z} is positive; only z <= 0 is supported")]
    PositiveArgument { z: f64 },

    #[error("spectrum has no concrete basis realization; pointwise synthesis is unavailable")]
    MissingRealization,

    #[error("grid of {points} points cannot resolve {modes} modes (need at least {required})")]
    UnderResolvedGrid {
        points: usize,
        modes: usize,
        required: usize,
    },

    #[error("length mismatch: expected {expected} entries, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("time grid is not uniform; the L1 differentiator requires uniform spacing")]
    NonUniformGrid,

    #[error("time t = {t} lies outside the covered interval [0, {t_max}]")]
    TimeOutOfRange { t: f64, t_max: f64 },

    #[error("bad observation geometry: {detail}")]
    BadGeometry { detail: String },

    #[error(
        "orthogonality violated at critical mode {index}: |coefficient| = {magnitude:.3e} \
         exceeds {tolerance:.3e}; no solution exists for this data"
    )]
    OrthogonalityViolation {
        index: usize,
        magnitude: f64,
        tolerance: f64,
    },

    #[error(
        "denominator at mode {index} is {denominator:.3e}, inside the critical band but the \
         mode is not classified critical; tighten or loosen the critical tolerance"
    )]
    NearCriticalDenominator { index: usize, denominator: f64 },

    #[error("uniqueness margin at mode {index} degenerated to {margin:.3e}; recovery is not unique")]
    DegenerateDenominator { index: usize, margin: f64 },

    #[error("decay factor at mode {index} underflowed; truncation level is too aggressive")]
    UnderflowDecay { index: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
