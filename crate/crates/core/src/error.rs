use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("zero polynomial is not allowed here")]
    ZeroPolynomial,
    #[error("coefficient of x^{0} vanishes; only polynomials with all non-vanishing coefficients are admitted")]
    ZeroCoefficient(usize),
    #[error("leading coefficient is negative; normalize the polynomial first")]
    NegativeLeading,
    #[error("scaling parameter must be positive")]
    NonPositiveParameter,
    #[error("interval endpoint {0} is a root; perturb the endpoint")]
    EndpointIsRoot(String),
    #[error("interval is empty or reversed")]
    EmptyInterval,
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("malformed sign pattern {0:?}: {1}")]
    Parse(String, &'static str),
    #[error("degree {0} is out of range ({1}..={2})")]
    DegreeOutOfRange(usize, usize, usize),
    #[error("pair ({pos},{neg}) is not admissible for {pattern}: {reason}")]
    Inadmissible {
        pattern: String,
        pos: u32,
        neg: u32,
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("{0}")]
    Precondition(String),
    #[error("parameter schedule exhausted after {0} halvings")]
    ScheduleExhausted(u32),
    #[error("search exhausted: {0}")]
    Exhausted(String),
    #[error("witness check failed: {0}")]
    Verification(String),
}

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("store {path} line {line}: {message}")]
    Corrupt {
        path: String,
        line: usize,
        message: String,
    },
    #[error("store {0} is locked by another process (remove {0}.lock if stale)")]
    Locked(String),
}

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error("degree {0} needs the long-run flag")]
    LongRunRequired(usize),
    #[error("store is incomplete for degree {degree}: {missing} of {total} orbits missing")]
    Incomplete {
        degree: usize,
        missing: usize,
        total: usize,
    },
    #[error("no reference table for degree {0}")]
    NoReferenceTable(usize),
}
