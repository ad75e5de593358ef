use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("n = {0} is out of range (need 4 <= n < 2^62)")]
    CityCountOutOfRange(u64),

    #[error("stripe length {stripe} is out of range for n = {n} (need 1 <= stripe <= n/2)")]
    StripeOutOfRange { n: u64, stripe: u64 },

    #[error("stripe lengths must be distinct, both are {0}")]
    EqualStripes(u64),

    #[error("instance is infeasible: gcd(n, a1, a2) = {g2} > 1")]
    Infeasible { g2: u64 },

    #[error("operation needs a decomposition with more than one column")]
    SingleColumn,

    #[error("label {label} is not a vertex of an instance with n = {n}")]
    LabelOutOfRange { n: u64, label: u64 },

    #[error("cylinder coordinate ({row}, {col}) outside a {r}x{c} grid")]
    CoordOutOfRange { row: u64, col: u64, r: u64, c: u64 },

    #[error("invalid GG path parameters: {0}")]
    InvalidGgParams(String),

    #[error("row {x} is not reachable on a {r}x{c} cylinder with {m} extra pairs")]
    RowNotReachable { x: u64, r: u64, c: u64, m: u64 },

    #[error("y = {y} does not satisfy the lower-bound tour congruence")]
    InvalidLowerBoundColumnCount { y: u64 },

    #[error("{what} limit exceeded: {value} > {limit}")]
    TooLarge {
        what: &'static str,
        value: u64,
        limit: u64,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
