use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error("class index {index} out of range for a frame of {n} classes")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("frame mismatch: {0}")]
    FrameMismatch(String),
    #[error("frame of {n} classes is too large for full enumeration (max {max})")]
    EnumerationTooLarge { n: usize, max: usize },
    #[error("empty element is not allowed here")]
    EmptyElement,
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("unknown label `{label}` at position {pos}")]
    UnknownLabel { label: String, pos: usize },
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("invalid specificity window [{min}, {max}]")]
    InvalidWindow { min: usize, max: usize },

    #[error("invalid mass function: {0}")]
    InvalidMass(String),
    #[error("masses sum to {sum}, expected 1")]
    NotNormalized { sum: f64 },
    #[error("mass function carries {0} on the empty set; normalize first")]
    MassOnEmpty(f64),
    #[error("total conflict between sources, Dempster normalization undefined")]
    TotalConflict,

    #[error("plausibility cannot be the decision function on the free hyper-power set")]
    PlausibilityOnHyper,
    #[error("empty candidate set")]
    EmptyCandidates,
    #[error("invalid decision config: {0}")]
    InvalidDecisionConfig(String),

    #[error("invalid quantization level count {0}, expected one of 4, 8, 16, 32")]
    InvalidLevels(usize),
    #[error("co-occurrence distance {distance} invalid for side {side}")]
    InvalidDistance { distance: usize, side: usize },
    #[error("invalid angle {0}, expected 0, 45, 90 or 135")]
    InvalidAngle(u32),
    #[error("co-occurrence matrices disagree on level count")]
    MismatchedLevels,
    #[error("invalid imagette: {0}")]
    InvalidImagette(String),

    #[error("scores for pair ({i},{j}) are all of one sign")]
    OneSidedScores { i: usize, j: usize },
    #[error("invalid mass model parameters: {0}")]
    InvalidParams(String),
    #[error("degenerate class `{0}`")]
    DegenerateClass(String),
    #[error("incomplete score set: {0}")]
    IncompleteScores(String),

    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Image(#[from] image::ImageError),
}

impl Error {
    /// Process exit code for the CLI: 2 for configuration or input errors,
    /// 3 for numeric failures, 1 for anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::TotalConflict
            | Error::NotNormalized { .. }
            | Error::MassOnEmpty(_)
            | Error::OneSidedScores { .. }
            | Error::DegenerateClass(_) => 3,
            Error::Io(_) | Error::Image(_) => 1,
            _ => 2,
        }
    }
}
