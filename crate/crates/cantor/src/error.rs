use thiserror::Error;

/// Every failure the library reports. Diagnostic outcomes that are part of a
/// normal answer (an undecided comparison, a non-converged probe) are values,
/// not errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("step leaves the ambient interval: {0}")]
    DomainExceeded(String),
    #[error("function handle carries no modulus of continuity")]
    NoModulus,
    #[error("tolerance not met: {0}")]
    ToleranceNotMet(String),
    #[error("decay hypothesis fails at selected index {0}")]
    HypothesisFailed(usize),
    #[error("ambient interval is empty or inverted")]
    BadAmbient,
    #[error("open sets live in different ambient intervals")]
    AmbientMismatch,
    #[error("depth cap exceeded at path {}", fmt_path(.0))]
    DepthCapExceeded(Vec<u8>),
    #[error("node interval provably misses the closed set: {0}")]
    EmptyIntervalInvariantBroken(String),
    #[error("comparison stuck at step {0}")]
    ComparisonStuck(usize),
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("gap between children not certified positive at step {0}")]
    GapTooSmall(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("resource cap reached: {0}")]
    ResourceCap(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

fn fmt_path(p: &[u8]) -> String {
    if p.is_empty() {
        return "()".to_string();
    }
    p.iter().map(|b| char::from(b'0' + b)).collect()
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_)
            | Error::BadAmbient
            | Error::AmbientMismatch
            | Error::Precondition(_)
            | Error::InvalidWitness(_)
            | Error::DomainExceeded(_)
            | Error::NoModulus
            | Error::GapTooSmall(_) => 2,
            Error::DepthCapExceeded(_) | Error::ResourceCap(_) => 4,
            _ => 3,
        }
    }
}
