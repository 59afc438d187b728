use thiserror::Error;

use crate::sphere::SphereError;

/// Errors raised by the regluing pipeline.
///
/// Messages name the hypothesis that failed so a CLI user can tell an input
/// problem from a numerical one.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sphere arithmetic: {0}")]
    Sphere(#[from] SphereError),

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("critical value lies on the curve (preimage components merge; disjoint-pullback hypothesis violated)")]
    CriticalValueOnCurve,

    #[error("square-root argument vanishes along the path (branch point within {0:e})")]
    ZeroCrossing(f64),

    #[error("ambiguous square-root continuation step (candidate ratio {0:.4}); sampling too coarse")]
    AmbiguousStep(f64),

    #[error("no route avoiding the cut curves was found")]
    Unroutable,

    #[error("point lies on a cut curve of stage {stage} (outside the domain of the tower functions)")]
    OnCutCurve { stage: usize },

    #[error("cut set of stage {stage} was not materialized")]
    CutsNotMaterialized { stage: usize },

    #[error("forward orbit of alpha0(1) meets the curve at n={n} (chordal distance {distance:e}); admissibility hypothesis violated")]
    Inadmissible { n: usize, distance: f64 },

    #[error("normalizer 1 - alpha0(1)^2 vanishes (|1 - alpha0(1)^2| = {0:e})")]
    DegenerateNormalizer(f64),

    #[error("critical orbit exhausted; increase the orbit length")]
    OrbitExhausted,

    #[error("pulled-back cut curves are not pairwise disjoint at stage {stage}; regluing hypotheses break down")]
    CutCollision { stage: usize },

    #[error("orbit value collides with a critical value or pole ({0})")]
    Degeneracy(String),

    #[error("traced rays do not meet the critical point (closest approach {0:e})")]
    RaysDontMeetCritical(f64),

    #[error("ray pair is not symmetric under z -> -z (mismatch {0:e})")]
    AsymmetryTooLarge(f64),

    #[error("at stage {stage}: {source}")]
    AtStage {
        stage: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn at_stage(self, stage: usize) -> Error {
        match self {
            e @ Error::AtStage { .. } => e,
            e => Error::AtStage {
                stage,
                source: Box::new(e),
            },
        }
    }

    /// Strips any stage annotation.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtStage { source, .. } => source.root(),
            e => e,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
