use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty tract list")]
    EmptyTracts,
    #[error("hurricane category {0} out of range 1..=4")]
    CategoryOutOfRange(u8),
    #[error("malformed row {line}: {reason}")]
    MalformedRow { line: usize, reason: String },
    #[error("negative wind speed {speed} for tract {tract} hour {hour}")]
    NegativeSpeed {
        tract: String,
        hour: usize,
        speed: f64,
    },
    #[error("wind field missing cell for tract {tract} hour {hour}")]
    IncompleteGrid { tract: String, hour: usize },
    #[error("unknown tract {0}")]
    UnknownTract(String),
    #[error("sigma must be positive, got {0}")]
    NonPositiveSigma(f64),
    #[error("fragility thresholds out of order: critical {critical} >= collapse {collapse}")]
    ThresholdsOutOfOrder { critical: f64, collapse: f64 },
    #[error("transmission element needs at least one tower")]
    ZeroTowers,
    #[error("{needed} transmission edges cannot connect {nodes} backbone nodes")]
    CannotConnect { needed: usize, nodes: usize },
    #[error("wind field covers {field} tracts but grid was built over {grid}")]
    TractMismatch { field: usize, grid: usize },
    #[error("task for {component} needs {needed} teams but the pool never exceeds {cap}")]
    InfeasibleTask {
        component: String,
        needed: u64,
        cap: u64,
    },
    #[error("marginal proportion {value} for {name} outside [0,1]")]
    MarginalOutOfRange { name: String, value: f64 },
    #[error("coefficient/covariate arity mismatch: {coeffs} vs {covariates}")]
    ArityMismatch { coeffs: usize, covariates: usize },
    #[error("ordinal intercepts must be strictly increasing")]
    NonIncreasingIntercepts,
    #[error("network parameters invalid: {0}")]
    InvalidNetwork(String),
    #[error("information parameters must satisfy 1 >= P_o >= P_i >= P_n >= 0")]
    InvalidInfoParams,
    #[error("population is empty")]
    EmptyPopulation,
    #[error("unknown restoration strategy {0}")]
    UnknownStrategy(String),
    #[error("unknown baseline scenario {0}")]
    UnknownBaseline(String),
    #[error("aggregates have mismatched population specs: {0} vs {1}")]
    MismatchedPopulations(usize, usize),
    #[error("group attribute {0} not recorded")]
    UnknownGroup(String),
    #[error("unknown export format {0}")]
    UnknownFormat(String),
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
