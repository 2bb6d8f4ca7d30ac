use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("row {row} is not covered by any column")]
    EmptyRow { row: usize },
    #[error("column {col} has non-positive cost {cost}")]
    NonPositiveCost { col: usize, cost: f64 },
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("row {row} lists column {col} more than once")]
    DuplicateIndex { row: usize, col: usize },
    #[error("column {col} is fixed to both 0 and 1")]
    OverlappingFixings { col: usize },
    #[error("row {row} lost all of its covering columns")]
    InfeasibleReduction { row: usize },

    #[error("input ended early while reading {what}")]
    Truncated { what: &'static str },
    #[error("unexpected trailing token {token:?}")]
    TrailingGarbage { token: String },
    #[error("cannot parse {token:?} as {what}")]
    InvalidToken { token: String, what: &'static str },
    #[error("duplicate instance name {0:?} in bound table")]
    DuplicateName(String),
    #[error("bound for {name:?} must be positive, got {value}")]
    NonPositiveUb { name: String, value: f64 },
    #[error("line {line}: malformed bound entry {text:?}")]
    MalformedLine { line: usize, text: String },
    #[error("no upper bound supplied for instance {0:?}")]
    MissingUb(String),

    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
    #[error("generator produced no coverable demand points")]
    Degenerate,

    #[error("basis became numerically singular at iteration {iteration}")]
    NumericalBreakdown { iteration: usize },
    #[error("objective is unbounded along variable {var}")]
    Unbounded { var: usize },
    #[error("upper bound {ub} is below the dual bound {zeta}")]
    InvalidBound { ub: f64, zeta: f64 },
    #[error("reduced-cost fixing needs an optimal dual solution")]
    NotOptimal,

    #[error("{what} exceeds the oracle limit of {limit}")]
    TooLarge { what: &'static str, limit: usize },
    #[error("instance has no feasible cover")]
    Infeasible,

    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
