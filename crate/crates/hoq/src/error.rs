pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] hoq_core::Error),

    #[error("grid resolution must be at least 2, got {0}")]
    Resolution(usize),

    #[error("empty {axis} range [{lo}, {hi})")]
    EmptyRange { axis: &'static str, lo: f64, hi: f64 },

    #[error("at least one QAOA layer required")]
    NoLayers,

    #[error("evaluation budget must be at least 1")]
    ZeroBudget,

    #[error("outlier filter needs at least 4 samples, got {0}")]
    TooFewSamples(usize),

    #[error("at least one sample per cell required")]
    NoSamples,

    #[error("invalid {what}: {detail}")]
    Format { what: &'static str, detail: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn format(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Format {
            what,
            detail: detail.into(),
        }
    }
}
