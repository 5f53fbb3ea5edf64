use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid ring parameters: {0}")]
    InvalidParams(String),
    #[error("Hensel lifting of the Frobenius image did not converge")]
    HenselFailure,
    #[error("operands belong to different rings")]
    RingMismatch,
    #[error("element is not a unit")]
    NotAUnit,
    #[error("not a Dieudonne module: {0}")]
    NotADieudonneModule(String),
    #[error("matrix is not invertible over the ring")]
    NotInvertible,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("polygons have different endpoints")]
    EndpointMismatch,
    #[error("no witness for (c, d) = ({c}, {d}): the cutoff bound is 1")]
    JTooSmall { c: u32, d: u32 },
    #[error("no cyclic vector found within a budget of {budget} candidates")]
    NotFound { budget: usize },
    #[error("degenerate annihilating relation: {0}")]
    DegenerateKernel(String),
    #[error("perturbation level must be at least 1")]
    InvalidLevel,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
