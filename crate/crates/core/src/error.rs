use thiserror::Error;

/// Errors raised by market construction, solvers and file parsing.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch for {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid market: {0}")]
    InvalidMarket(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid portfolio: {0}")]
    InvalidPortfolio(String),

    #[error("invalid odds: {0}")]
    InvalidOdds(String),

    #[error("empty outcome sequence")]
    EmptySequence,

    #[error("outcome index {index} out of range for {outcomes} outcomes")]
    OutcomeOutOfRange { index: usize, outcomes: usize },

    #[error("portfolio infeasible for p: zero payoff on an outcome with positive probability")]
    PortfolioInfeasible,

    #[error("infeasible constraints: {0}")]
    InfeasibleConstraints(String),

    #[error("every feasible portfolio has growth rate -inf for this distribution")]
    NoFiniteGrowth,

    #[error("no convergence after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("indeterminate gap: divergence and regret are both infinite")]
    IndeterminateGap,

    #[error("infinite regret in {0}")]
    InfiniteRegret(&'static str),

    #[error("no exact embedding into ideal gambling assets (least-squares residual {residual:e})")]
    NoExactEmbedding { residual: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("linear program failed: {0}")]
    LinearProgram(String),

    #[error("parse error at line {line}{}: {message}", column.as_ref().map(|c| format!(", column {c}")).unwrap_or_default())]
    Parse {
        line: usize,
        column: Option<String>,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by unreadable or malformed input files.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Parse { .. } | Error::Io(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
