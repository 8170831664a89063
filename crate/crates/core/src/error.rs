use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("attribute `{0}` needs at least two distinct symbols")]
    DomainTooSmall(String),
    #[error("duplicate attribute name `{0}`")]
    DuplicateAttribute(String),
    #[error("symbol `{symbol}` is not in the domain of `{attribute}`")]
    UnknownSymbol { attribute: String, symbol: String },
    #[error("values come from different domains")]
    DomainMismatch,
    #[error("expected {expected} values, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("code {code} out of range for attribute `{attribute}`")]
    CodeOutOfRange { attribute: String, code: usize },
    #[error("inverse paralogy is only defined on Boolean domains")]
    NonBoolean,
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("need at least {needed} examples, found {found}")]
    TooFewExamples { needed: usize, found: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("competent pair list is empty")]
    NoCompetentPairs,
    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),
    #[error("schema has {arity} attributes; exhaustive mode supports at most {limit}")]
    SchemaTooLarge { arity: usize, limit: usize },
    #[error("query already has result value `{0}`")]
    VacuousQuestion(String),
    #[error("context split has an empty change set")]
    DegenerateSplit,
    #[error("inconsistent generator spec: {0}")]
    InconsistentSpec(String),
    #[error("requested {requested} tuples but the space only holds {available}")]
    SpaceExceeded { requested: u128, available: u128 },
    #[error("line {line}: expected {expected} fields, found {found}")]
    RaggedRow { line: u64, expected: usize, found: usize },
    #[error("file has no data rows")]
    EmptyFile,
    #[error("class column `{0}` not found")]
    MissingClassColumn(String),
    #[error("line {line}: missing value in column `{column}`")]
    MissingValue { line: u64, column: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
