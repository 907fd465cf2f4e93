//! Floating-point oracle at MPFR precision.
//!
//! Everything here is computed independently of the exact engine: integrals
//! by adaptive Gauss-Legendre quadrature with an analytic tail, lattice sums
//! by direct summation with a majorant tail bound. Tail bounds are rigorous;
//! quadrature error is estimated from refinement differences.

mod integral;
mod kernel;
mod quad;
mod scale;
mod sum;

pub use rug::Float;
pub use integral::{numeric_integral, IntegralResult, TailMethod};
pub use kernel::{
    kernel_factor, kernel_integral, kernel_transform_closed_form, verify_kernel_transform, KernelIntegralResult,
    TransformSample,
};
pub use scale::{parse_scale_list, Scale};
pub use sum::{
    lower_bound_check, numeric_sum, verify_sum_integral, IdentityReport, LowerBoundReport, Sidedness, SumResult,
};

use crate::engine::CosineWeightSpec;
use crate::error::{Error, Result};

/// Environment variable overriding [`DEFAULT_PRECISION`].
pub const PRECISION_ENV: &str = "BORWEIN_PRECISION";
pub const DEFAULT_PRECISION: u32 = 128;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub precision_bits: u32,
    pub panel_cap: u64,
    /// Cap on the truncation index of lattice sums.
    pub term_cap: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            precision_bits: DEFAULT_PRECISION,
            panel_cap: 1 << 20,
            term_cap: 100_000_000,
        }
    }
}

impl OracleConfig {
    /// Defaults, with the precision taken from `BORWEIN_PRECISION` when set.
    pub fn from_env() -> Result<Self> {
        let mut config = OracleConfig::default();
        if let Ok(text) = std::env::var(PRECISION_ENV) {
            config.precision_bits = parse_precision(&text)?;
        }
        Ok(config)
    }
}

/// Smallest accepted working precision; ten certified digits need headroom.
pub const MIN_PRECISION: u32 = 80;

pub fn parse_precision(text: &str) -> Result<u32> {
    match text.trim().parse::<u32>() {
        Ok(bits) if bits >= MIN_PRECISION => Ok(bits),
        _ => Err(Error::InvalidInput(format!(
            "precision must be an integer number of bits >= {MIN_PRECISION}, got {text:?}"
        ))),
    }
}

/// Scales `a_k` of `prod_k sinc(a_k t)` with an optional odd-cosine weight.
#[derive(Clone, Debug, PartialEq)]
pub struct RealScales {
    pub scales: Vec<Scale>,
    pub weight: Option<CosineWeightSpec>,
}

impl RealScales {
    pub fn new(scales: Vec<Scale>) -> Self {
        RealScales { scales, weight: None }
    }

    pub fn with_weight(mut self, weight: CosineWeightSpec) -> Self {
        self.weight = Some(weight);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.scales.is_empty() {
            return Err(Error::InvalidInput("at least one scale is required".into()));
        }
        Ok(())
    }

    pub fn sum_f64(&self) -> f64 {
        self.scales.iter().map(Scale::to_f64).sum()
    }
}
