use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("no targets")]
    NoTargets,
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("algebraic connectivity undefined for fewer than 2 robots")]
    Undefined,
    #[error("triangle inequality violated between nodes {0}, {1} and {2}")]
    NonMetric(usize, usize, usize),
    #[error("odd vertex count {0} has no perfect matching")]
    OddVertexCount(usize),
    #[error("oracle guard: {0}")]
    OracleGuard(String),
    #[error("unknown target id {0}")]
    UnknownTarget(usize),
    #[error("malformed chromosome: {0}")]
    MalformedChromosome(String),
    #[error("nothing to assign")]
    NothingToAssign,
    #[error("non-termination guard tripped at t = {0} s")]
    NonTermination(f64),
    #[error("invariant violated at t = {time} s: {message}")]
    InvariantViolation { time: f64, message: String },
    #[error("degenerate bound: f_MST is zero")]
    DegenerateBound,
    #[error("run failed for scenario seed {seed} (r = {range}, {strategy}): {source}")]
    RunFailed {
        seed: u64,
        range: f64,
        strategy: String,
        #[source]
        source: Box<Error>,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
