use thiserror::Error;

/// Unified error type for the extraction and knowledge pipeline.
///
/// Every variant carries a stable machine-parsable code (see [`Error::code`])
/// that the CLI prints on its single-line error output.
#[derive(Debug, Error)]
pub enum Error {
    #[error("point cloud is empty")]
    EmptyCloud,

    #[error("point cloud is degenerate: {0}")]
    DegenerateCloud(String),

    #[error("no support plane found: {0}")]
    SegmentationFailed(String),

    #[error("no points above the support plane")]
    EmptyObjectSegment,

    #[error("inconsistent marker measurement: {0}")]
    InconsistentMarker(String),

    #[error("invalid interaction log: {0}")]
    InvalidLog(String),

    #[error("press log ends before the effort cutoff is reached")]
    PressIncomplete,

    #[error("no slide event recorded in ramp log")]
    SlideNotObserved,

    #[error("invalid scale reading: {0}")]
    InvalidScale(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid synthetic object: {0}")]
    InvalidObject(String),

    #[error("dataset validation failed:\n{}", .0.join("\n"))]
    DatasetValidation(Vec<String>),

    #[error("k-means failed: {0}")]
    Clustering(String),

    #[error("conflicting quality attribution: {0}")]
    AttributionConflict(String),

    #[error("unknown class: {0}")]
    UnknownClass(String),

    #[error("knowledge base is inconsistent: {0}")]
    InvalidKnowledgeBase(String),

    #[error("parse error in {path} line {line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-parsable code for CLI error lines.
    pub fn code(&self) -> &'static str {
        match self {
            Error::EmptyCloud => "E_EMPTY_CLOUD",
            Error::DegenerateCloud(_) => "E_DEGENERATE_CLOUD",
            Error::SegmentationFailed(_) => "E_SEGMENTATION",
            Error::EmptyObjectSegment => "E_EMPTY_SEGMENT",
            Error::InconsistentMarker(_) => "E_MARKER",
            Error::InvalidLog(_) => "E_LOG",
            Error::PressIncomplete => "E_PRESS_INCOMPLETE",
            Error::SlideNotObserved => "E_NO_SLIDE",
            Error::InvalidScale(_) => "E_SCALE",
            Error::InvalidParameter(_) => "E_PARAM",
            Error::InvalidObject(_) => "E_OBJECT",
            Error::DatasetValidation(_) => "E_DATASET",
            Error::Clustering(_) => "E_CLUSTER",
            Error::AttributionConflict(_) => "E_ATTRIBUTION",
            Error::UnknownClass(_) => "E_UNKNOWN_CLASS",
            Error::InvalidKnowledgeBase(_) => "E_KB",
            Error::Parse { .. } => "E_PARSE",
            Error::Io { .. } => "E_IO",
            Error::Csv(_) => "E_CSV",
            Error::Json(_) => "E_JSON",
        }
    }

    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
