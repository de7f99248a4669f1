use thiserror::Error;

pub type Result<T> = std::result::Result<T, FsiError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FsiError {
    /// Projection labels do not belong to the given spin, e.g. |mu| > j or
    /// j - mu not an integer.
    #[error("inconsistent spin labels: 2j = {two_j}, 2mu' = {two_mu_p}, 2mu = {two_mu}")]
    InvalidProjection { two_j: u32, two_mu_p: i32, two_mu: i32 },

    #[error("2j = {two_j} exceeds the supported maximum of {max}")]
    TooManyPhotons { two_j: u32, max: u32 },

    #[error("phase error is undefined for a balanced input (n_a = n_b)")]
    BalancedInput,

    #[error("error probability has no zero in (0, pi]")]
    NoZero,

    #[error("phases {first} and {second} coincide modulo 2pi")]
    DuplicatePhase { first: f64, second: f64 },

    #[error("at least two hypotheses are required, got {0}")]
    TooFewHypotheses(usize),

    #[error("invalid priors: {0}")]
    InvalidPriors(String),

    #[error("non-finite phase {0}")]
    NonFinitePhase(f64),

    #[error("degenerate fit input: {0}")]
    DegenerateFit(String),

    #[error("{what} = {value} is outside the domain {domain}")]
    OutOfDomain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },
}

impl FsiError {
    pub(crate) fn out_of_domain(what: &'static str, value: f64, domain: &'static str) -> Self {
        FsiError::OutOfDomain { what, value, domain }
    }
}
