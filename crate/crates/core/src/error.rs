use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point cloud is empty")]
    EmptyPointCloud,

    #[error("invalid set: {0}")]
    InvalidSet(String),

    #[error("non-finite coordinate in input")]
    NonFinite,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The Green function of the complement is undefined because the set is polar.
    #[error("GreenUndefinedPolarSet: capacity estimate {capacity:e} is at or below the polar threshold")]
    GreenUndefinedPolarSet { capacity: f64 },

    #[error("UnboundedSet: bounding box is not finite")]
    UnboundedSet,

    #[error("dimension {0} exceeds the supported maximum of 3")]
    DimensionTooLarge(usize),

    #[error("GammaPolar: gamma-capacity estimate {value:e} is at or below {threshold:e}")]
    GammaPolar { value: f64, threshold: f64 },

    #[error("DegreeGrowthViolated: deg P_{index:?} = {degree} exceeds {c0} + {c1} * {norm}")]
    DegreeGrowthViolated {
        index: Vec<u32>,
        degree: usize,
        norm: u32,
        c0: f64,
        c1: f64,
    },

    #[error("WindowEmpty: no multi-index with norm in ({lo}, {hi}]")]
    WindowEmpty { lo: u32, hi: u32 },

    #[error("AllStrataPolar: no stratum K_i with i <= {i_max} has positive capacity")]
    AllStrataPolar { i_max: u32 },

    #[error("NoUniformStratum: no sublevel set of the growth function has positive capacity")]
    NoUniformStratum,

    #[error("NotSublinear: residual tail slope {slope} is not below {tolerance}")]
    NotSublinear { slope: f64, tolerance: f64 },

    #[error("OutsideCertifiedDomain: geometric ratio q = {q} >= 1")]
    OutsideCertifiedDomain { q: f64 },

    #[error("InsufficientData: N_max = {n_max} only reaches tail bound {achievable:e}")]
    InsufficientData { n_max: u32, achievable: f64 },

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn in_stage(self, stage: &'static str) -> Error {
        match self {
            e @ Error::Stage { .. } => e,
            e => Error::Stage {
                stage,
                source: Box::new(e),
            },
        }
    }

    /// Innermost error, skipping stage wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            e => e,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
