use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },

    #[error(
        "spline would need {projected} breakpoints (cap {cap}); use pruned point evaluation instead"
    )]
    SizeGuard { projected: usize, cap: usize },

    #[error("pruned enumeration exceeded its node budget of {budget} with {surviving} branches still open")]
    NodeBudget { budget: u64, surviving: usize },

    #[error("exact path unavailable: {0}; use the numeric oracle instead")]
    ExactPathUnavailable(String),

    #[error("no unit identity applies: no scale factor is a positive integer")]
    NoUnitIdentity,

    #[error("no index satisfies the strict partial-sum bound")]
    EmptyRange,

    #[error("family partial sums never reach the threshold (stopped after {terms} terms)")]
    ThresholdNeverReached { terms: u64 },

    #[error("comparison with the threshold stayed undecided up to {max_bits} bits at index {index}")]
    Undecided { index: u64, max_bits: u32 },

    #[error("integrand is not absolutely integrable: {0}")]
    NotAbsolutelyIntegrable(String),

    #[error("tail bound needs truncation at {needed} terms, above the cap of {cap}")]
    TailUnreachable { needed: u64, cap: u64 },

    #[error("quadrature would need {panels} panels, above the cap of {cap}")]
    SlowConvergence { panels: u64, cap: u64 },
}

impl Error {
    /// True for failures of the exact path that the numeric oracle can stand in for.
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::SizeGuard { .. } | Error::NodeBudget { .. } | Error::ExactPathUnavailable(_)
        )
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid_input",
            Error::Parse { .. } => "parse",
            Error::SizeGuard { .. } => "size_guard",
            Error::NodeBudget { .. } => "node_budget",
            Error::ExactPathUnavailable(_) => "exact_path_unavailable",
            Error::NoUnitIdentity => "no_unit_identity",
            Error::EmptyRange => "empty_range",
            Error::ThresholdNeverReached { .. } => "threshold_never_reached",
            Error::Undecided { .. } => "undecided",
            Error::NotAbsolutelyIntegrable(_) => "not_absolutely_integrable",
            Error::TailUnreachable { .. } => "tail_unreachable",
            Error::SlowConvergence { .. } => "slow_convergence",
        }
    }
}
