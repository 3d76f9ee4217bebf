use thiserror::Error;

/// Errors surfaced by measure construction and the numerical operations.
///
/// The edge-safety variants (`SupportOutsideTruncation`, `WindowOutsideTruncation`,
/// `ScanExceedsTruncation`, `EdgeContamination`, `TruncationTooSmall`) all mean the
/// same thing at heart: the requested computation depends on parts of a measure
/// that lie outside the region where it is faithfully realized, so the result
/// would be contaminated by the cutoff and is refused.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid window: lo={lo} must be strictly below hi={hi}")]
    InvalidWindow { lo: f64, hi: f64 },

    #[error("invalid test function: {0}")]
    InvalidTestFunction(String),

    #[error("test function support escapes the truncation window of the measure")]
    SupportOutsideTruncation,

    #[error("query window is not contained in the truncation window")]
    WindowOutsideTruncation,

    #[error("no translate of the window fits inside the truncation region")]
    EmptyScanRange,

    #[error("family member {index} is not in F_U (support in U, sup-norm <= 1)")]
    FamilyNotInFU { index: usize },

    #[error("family member {index} is not supported inside -U")]
    FamilyNotInMinusU { index: usize },

    #[error("family member {index} is identically zero")]
    ZeroFunctionInFamily { index: usize },

    #[error("family member {index} does not dominate the indicator of K")]
    FamilyNotDominating { index: usize },

    #[error("scan range requires translates outside the truncation window")]
    ScanExceedsTruncation,

    #[error("sampled grids are incompatible: {0}")]
    GridMismatch(String),

    #[error("requested grid point depends on data outside the truncation window")]
    EdgeContamination,

    #[error("averaging region A_n does not fit inside the truncation window")]
    TruncationTooSmall,

    #[error("convolver must be a finite measure realized without truncation")]
    NonFiniteConvolver,

    #[error("unknown gallery name: {0}")]
    UnknownGalleryName(String),

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("component measure support escapes the unit block: hull [{lo}, {hi}]")]
    ComponentSupportViolation { lo: f64, hi: f64 },

    #[error("lattice generation range too small to cover the requested window")]
    GenerationRangeTooSmall,

    #[error("cut-and-project scheme is degenerate: {0}")]
    DegenerateScheme(String),

    #[error("van Hove index {0} outside the realized sequence")]
    VanHoveIndex(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
