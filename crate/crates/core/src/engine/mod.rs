//! Exact integrals, cosine-weighted integrals and deficits of sinc products.
//!
//! The normalized transform `F(x) = f^(pi x)` of `f(t) = prod_k sinc(beta_k pi t)`
//! is a box-spline with support `[-R, R]`, `R = sum_k beta_k`. The plain
//! integral of `f` is `F(0)`, and the integral against
//! `2 sum_{k<=m} cos((2k+1) pi t)` is `2 sum_{k<=m} F(2k+1)`. When a factor has
//! integer scale, Poisson summation gives
//!
//! ```text
//! F(0) + 2 sum_{k>=1} F(2k) = 1,        2 sum_{k>=0} F(2k+1) = 1,
//! ```
//!
//! so a value is `1` minus the samples of `F` that fall outside the weight set.
//! Those samples sit near the edge of the support, where the pruned
//! evaluator only has to visit a handful of sign vectors.

mod pruned;
mod spec;

use rug::{Integer, Rational};

pub use pruned::{edge_polynomial, leading_constant, point_eval_pruned, EdgePolynomial, DEFAULT_NODE_BUDGET};
pub use spec::{CosineWeightSpec, SincProductSpec};

use crate::error::{Error, Result};
use crate::exact::to_decimal;
use crate::spline::{JumpConvention, PiecewisePolynomial, DEFAULT_BREAKPOINT_CAP};

/// Splines up to this many projected breakpoints are built eagerly; above it
/// single points go through the pruned evaluator first.
const EAGER_SPLINE_BREAKPOINTS: usize = 1 << 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    pub breakpoint_cap: usize,
    pub node_budget: u64,
    /// Significant digits in report decimals.
    pub digits: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            breakpoint_cap: DEFAULT_BREAKPOINT_CAP,
            node_budget: DEFAULT_NODE_BUDGET,
            digits: 10,
        }
    }
}

/// Outcome of one exact integral computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalReport {
    pub exact_value: Rational,
    pub decimal: String,
    pub support_radius: Rational,
    /// `1 - exact_value`, present only when a unit identity applies.
    pub deficit: Option<Rational>,
    /// Nonzero samples `(x, F(x))` making up the deficit as `2 * sum F(x)`.
    pub deficit_terms: Vec<(Rational, Rational)>,
}

/// Upper bound on the breakpoint count of the full transform: every
/// breakpoint is a signed subset sum, and all of them are multiples of
/// `1/L` in `[-R, R]` for `L` the common denominator.
pub fn projected_breakpoints(spec: &SincProductSpec) -> usize {
    let subsets = 1usize.checked_shl(spec.factor_count() as u32).unwrap_or(usize::MAX);
    let lattice = spec.support_radius() * 2u32 * spec.common_denominator();
    let lattice = Integer::from(lattice.ceil_ref()) + 1u32;
    subsets.min(lattice.to_usize().unwrap_or(usize::MAX))
}

/// The full transform `F` as a piecewise polynomial in `x = omega / pi`.
///
/// `F_0 = box(beta_0)` and `F_j = conv(F_{j-1}, box(beta_j)) / (2 beta_j)`.
pub fn fourier_spline(spec: &SincProductSpec, breakpoint_cap: usize) -> Result<PiecewisePolynomial> {
    let projected = projected_breakpoints(spec);
    if projected > breakpoint_cap {
        return Err(Error::SizeGuard {
            projected,
            cap: breakpoint_cap,
        });
    }
    let betas = spec.betas();
    let mut f = PiecewisePolynomial::box_function(&betas[0])?;
    for beta in &betas[1..] {
        let norm = Rational::from(beta * 2u32).recip();
        f = f.convolve_with_box(beta, breakpoint_cap)?.scale(&norm);
    }
    Ok(f)
}

/// Evaluates `F` through the full spline when it is small, otherwise by
/// pruned enumeration, falling back to the other path when the first one is
/// infeasible.
pub struct Transform<'a> {
    spec: &'a SincProductSpec,
    config: &'a EngineConfig,
    spline: Option<PiecewisePolynomial>,
}

impl<'a> Transform<'a> {
    pub fn new(spec: &'a SincProductSpec, config: &'a EngineConfig) -> Result<Self> {
        let projected = projected_breakpoints(spec);
        let spline = if projected <= EAGER_SPLINE_BREAKPOINTS.min(config.breakpoint_cap) {
            Some(fourier_spline(spec, config.breakpoint_cap)?)
        } else {
            None
        };
        Ok(Transform { spec, config, spline })
    }

    pub fn uses_spline(&self) -> bool {
        self.spline.is_some()
    }

    pub fn eval(&mut self, x: &Rational) -> Result<Rational> {
        if let Some(spline) = &self.spline {
            return Ok(spline.evaluate(x, JumpConvention::HalfSum));
        }
        match point_eval_pruned(self.spec, x, self.config.node_budget) {
            Err(Error::NodeBudget { budget, surviving }) => {
                match fourier_spline(self.spec, self.config.breakpoint_cap) {
                    Ok(spline) => {
                        let value = spline.evaluate(x, JumpConvention::HalfSum);
                        self.spline = Some(spline);
                        Ok(value)
                    }
                    Err(_) => Err(Error::ExactPathUnavailable(format!(
                        "F({x}) exceeds the node budget of {budget} ({surviving} branches open) \
                         and the full spline is over its size cap"
                    ))),
                }
            }
            other => other,
        }
    }
}

/// Exact `F(x)` through whichever path is feasible.
pub fn transform_value(spec: &SincProductSpec, x: &Rational, config: &EngineConfig) -> Result<Rational> {
    Transform::new(spec, config)?.eval(x)
}

fn report(value: Rational, spec: &SincProductSpec, config: &EngineConfig) -> EvalReport {
    EvalReport {
        decimal: to_decimal(&value, config.digits),
        exact_value: value,
        support_radius: spec.support_radius(),
        deficit: None,
        deficit_terms: Vec::new(),
    }
}

/// `1 - 2 sum F(x)` over `x = first, first + 2, ...` up to the support radius.
fn unit_identity_report(spec: &SincProductSpec, first: u64, config: &EngineConfig) -> Result<EvalReport> {
    let radius = spec.support_radius();
    let mut transform = Transform::new(spec, config)?;
    let mut terms = Vec::new();
    let mut total = Rational::new();
    let mut x = Rational::from(first);
    while x <= radius {
        let value = transform.eval(&x)?;
        if value != 0 {
            total += &value;
            terms.push((x.clone(), value));
        }
        x += 2u32;
    }
    let deficit = total * 2u32;
    let mut out = report(Rational::from(1) - &deficit, spec, config);
    out.deficit = Some(deficit);
    out.deficit_terms = terms;
    Ok(out)
}

/// `integral f(t) dt = F(0)`.
///
/// With an integer scale present the value is `1 - 2 sum_{k>=1} F(2k)`, which
/// only needs samples near the support edge and is exactly `1` when `R < 2`.
pub fn integral_exact(spec: &SincProductSpec, config: &EngineConfig) -> Result<EvalReport> {
    if spec.has_unit_factor() {
        return unit_identity_report(spec, 2, config);
    }
    let value = transform_value(spec, &Rational::new(), config)?;
    Ok(report(value, spec, config))
}

/// `integral 2 sum_{k<=m} cos((2k+1) pi t) f(t) dt = 2 sum_{k<=m} F(2k+1)`.
pub fn weighted_integral_exact(
    spec: &SincProductSpec,
    weights: CosineWeightSpec,
    config: &EngineConfig,
) -> Result<EvalReport> {
    if spec.has_unit_factor() {
        return unit_identity_report(spec, 2 * weights.m + 3, config);
    }
    let mut transform = Transform::new(spec, config)?;
    let mut total = Rational::new();
    for j in weights.multipliers() {
        total += transform.eval(&Rational::from(j))?;
    }
    Ok(report(total * 2u32, spec, config))
}

/// The deficit below the unit value, for the plain integral or a weighted one.
pub fn deficit_report(
    spec: &SincProductSpec,
    weights: Option<CosineWeightSpec>,
    config: &EngineConfig,
) -> Result<EvalReport> {
    if !spec.has_unit_factor() {
        return Err(Error::NoUnitIdentity);
    }
    match weights {
        None => integral_exact(spec, config),
        Some(w) => weighted_integral_exact(spec, w, config),
    }
}

/// For `f = sinc^n(pi t)`, whether the weighted integral with weight count
/// `m + 1` equals `1` exactly, for `n = 1..=n_max`.
pub fn sinc_power_breaking(m: u64, n_max: u64, config: &EngineConfig) -> Result<Vec<(u64, bool)>> {
    (1..=n_max)
        .map(|n| {
            let spec = SincProductSpec::constant(Rational::from(1), n as usize)?;
            let r = weighted_integral_exact(&spec, CosineWeightSpec::new(m), config)?;
            Ok((n, r.exact_value == 1))
        })
        .collect()
}

/// Which support bound makes the sum over integers equal the integral.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SupportMode {
    /// `sum_k beta_k < 2`.
    Plain,
    /// `sum_k beta_k < 3`, for the sign-alternating sum.
    Alternating,
}

impl SupportMode {
    pub fn threshold(self) -> u32 {
        match self {
            SupportMode::Plain => 2,
            SupportMode::Alternating => 3,
        }
    }
}

pub fn support_condition(spec: &SincProductSpec, mode: SupportMode) -> bool {
    spec.support_radius() < mode.threshold()
}
