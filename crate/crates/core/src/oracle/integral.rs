use rug::ops::Pow;
use rug::Float;

use super::quad::{oscillatory_tail, pi, uniform_edges, Complex, GaussLegendre, Tolerance};
use super::{OracleConfig, RealScales};
use crate::error::{Error, Result};

/// Above this many panels the bound-based cutoff gives way to the
/// exponential expansion of the tail.
const DIRECT_PANEL_LIMIT: u64 = 4096;
/// Largest exponential expansion of the tail that is evaluated term by term.
const EXPANSION_TERM_LIMIT: usize = 1 << 14;
/// Panels used in front of an expanded tail.
const EXPANSION_PANELS: u64 = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailMethod {
    /// Integrand cut at `T` with `|g| <= W K t^{-r}` bounding what is dropped.
    Bound,
    /// Tail integrated term by term after expanding the sines into exponentials.
    Expansion,
}

#[derive(Clone, Debug)]
pub struct IntegralResult {
    pub value: Float,
    /// Quadrature runs over `[-T, T]`.
    pub truncation: Float,
    /// Bound on the part of the tail not accounted for.
    pub tail_bound: Float,
    /// Sum of adaptive refinement differences.
    pub quadrature_error: Float,
    pub panels: u64,
    pub tail_method: TailMethod,
}

impl IntegralResult {
    pub fn error_estimate(&self) -> Float {
        Float::with_val(self.value.prec(), &self.tail_bound + &self.quadrature_error)
    }
}

/// Resolved integrand `W(t) prod_k sin(a_k t) / (a_k t)`.
struct Integrand {
    scales: Vec<Float>,
    weight_freqs: Vec<Float>,
    prec: u32,
}

impl Integrand {
    fn new(spec: &RealScales, prec: u32) -> Self {
        let p = pi(prec);
        Integrand {
            scales: spec.scales.iter().map(|s| s.to_float(prec)).collect(),
            weight_freqs: spec
                .weight
                .map(|w| w.multipliers().map(|j| Float::with_val(prec, &p * j)).collect())
                .unwrap_or_default(),
            prec,
        }
    }

    fn eval(&self, t: &Float) -> Float {
        let prec = self.prec;
        let mut acc = Float::with_val(prec, 1);
        if !t.is_zero() {
            for a in &self.scales {
                let x = Float::with_val(prec, a * t);
                acc *= Float::with_val(prec, x.sin_ref()) / x;
            }
        }
        if !self.weight_freqs.is_empty() {
            let mut w = Float::new(prec);
            for f in &self.weight_freqs {
                w += Float::with_val(prec, Float::with_val(prec, f * t).cos());
            }
            acc *= w * 2u32;
        }
        acc
    }

    fn weight_max(&self) -> Float {
        if self.weight_freqs.is_empty() {
            Float::with_val(self.prec, 1)
        } else {
            Float::with_val(self.prec, 2 * self.weight_freqs.len())
        }
    }

    fn max_frequency(&self) -> Float {
        let sum = self.scales.iter().fold(Float::new(self.prec), |acc, a| acc + a);
        let w = self.weight_freqs.last().cloned().unwrap_or_else(|| Float::new(self.prec));
        sum + w
    }

    /// `K = 1 / prod_k a_k`.
    fn envelope(&self) -> Float {
        let prod = self.scales.iter().fold(Float::with_val(self.prec, 1), |acc, a| acc * a);
        prod.recip()
    }

    fn expansion_terms(&self) -> usize {
        let weights = if self.weight_freqs.is_empty() { 1 } else { 2 * self.weight_freqs.len() };
        1usize
            .checked_shl(self.scales.len() as u32)
            .map_or(usize::MAX, |n| n.saturating_mul(weights))
    }

    /// `int_{|t|>T} g(t) dt` from the exponential expansion
    /// `prod_k sin(a_k t) = (2i)^{-r} sum_eps (prod eps) e^{i (sum eps a) t}`.
    fn expanded_tail(&self, t: &Float, gl: &GaussLegendre) -> Result<(Float, Float)> {
        let prec = self.prec;
        let r = self.scales.len() as u32;
        let mut freqs: Vec<(Float, bool)> = vec![(Float::new(prec), false)];
        for a in &self.scales {
            freqs = freqs
                .into_iter()
                .flat_map(|(d, neg)| {
                    [
                        (Float::with_val(prec, &d + a), neg),
                        (Float::with_val(prec, &d - a), !neg),
                    ]
                })
                .collect();
        }
        if !self.weight_freqs.is_empty() {
            freqs = freqs
                .into_iter()
                .flat_map(|(d, neg)| {
                    self.weight_freqs.iter().flat_map(move |w| {
                        [
                            (Float::with_val(prec, &d + w), neg),
                            (Float::with_val(prec, &d - w), neg),
                        ]
                    })
                })
                .collect::<Vec<_>>();
        }
        let mut sum = Complex::zero(prec);
        let mut err = Float::new(prec);
        for (d, neg) in &freqs {
            let (mut e, bound) = oscillatory_tail(d, r, t, gl)?;
            if *neg {
                e = e.scale(&Float::with_val(prec, -1));
            }
            sum.add_assign(&e);
            err += bound;
        }
        // (2i)^{-r} = 2^{-r} i^{3r}; both tails together double the real part.
        let scale = Float::with_val(prec, Float::i_exp(1, 1 - r as i32)) * self.envelope();
        let value = sum.rotate(3 * r).re * &scale;
        let bound = err * scale.abs();
        Ok((value, bound))
    }
}

/// `int_{-inf}^{inf} W(t) prod_k sinc(a_k t) dt` to relative accuracy `rel_tol`.
pub fn numeric_integral(spec: &RealScales, rel_tol: f64, config: &OracleConfig) -> Result<IntegralResult> {
    spec.validate()?;
    if spec.scales.len() < 2 {
        return Err(Error::NotAbsolutelyIntegrable(
            "a single sinc factor decays like 1/t; use the exact engine".into(),
        ));
    }
    if rel_tol.is_nan() || rel_tol <= 0.0 {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let prec = config.precision_bits;
    let integrand = Integrand::new(spec, prec);
    let gl = GaussLegendre::new(prec);
    let mut abs_tol = rel_tol;
    let mut result = integrate_to(&integrand, &gl, abs_tol, config)?;
    // The target is relative; tighten once the magnitude is known.
    for _ in 0..3 {
        let magnitude = result.value.to_f64().abs();
        if magnitude >= 1.0 || magnitude == 0.0 || abs_tol <= rel_tol * magnitude {
            break;
        }
        abs_tol = 0.5 * rel_tol * magnitude;
        result = integrate_to(&integrand, &gl, abs_tol, config)?;
    }
    Ok(result)
}

fn integrate_to(g: &Integrand, gl: &GaussLegendre, abs_tol: f64, config: &OracleConfig) -> Result<IntegralResult> {
    let prec = g.prec;
    let r = g.scales.len() as i32;
    let width = pi(prec) / g.max_frequency();
    let k = g.envelope();
    let wmax = g.weight_max();

    // Two-sided tail of W K t^{-r}: 2 W K T^{1-r} / (r-1) <= abs_tol / 2.
    let tail_budget = abs_tol / 2.0;
    let log_t = ((4.0 * wmax.to_f64() * k.to_f64()) / ((r - 1) as f64 * tail_budget)).ln() / (r - 1) as f64;
    let bound_panels = (log_t.exp() / width.to_f64()).ceil();
    let bound_panels = if bound_panels.is_finite() { bound_panels.max(1.0) } else { f64::MAX };

    let (panels, method) = if bound_panels <= DIRECT_PANEL_LIMIT as f64 {
        (bound_panels as u64, TailMethod::Bound)
    } else if g.expansion_terms() <= EXPANSION_TERM_LIMIT {
        (EXPANSION_PANELS, TailMethod::Expansion)
    } else if bound_panels <= config.panel_cap as f64 {
        (bound_panels as u64, TailMethod::Bound)
    } else {
        return Err(Error::SlowConvergence {
            panels: bound_panels.min(u64::MAX as f64) as u64,
            cap: config.panel_cap,
        });
    };

    let t = Float::with_val(prec, &width * panels);
    let (tail, tail_bound) = match method {
        TailMethod::Bound => {
            let bound = Float::with_val(prec, (&t).pow(1 - r)) * &k * &wmax * 2u32 / (r - 1) as u32;
            (Float::new(prec), bound)
        }
        TailMethod::Expansion => g.expanded_tail(&t, gl)?,
    };

    let edges = uniform_edges(&Float::new(prec), &t, panels);
    let tol = Tolerance {
        abs: Float::with_val(prec, abs_tol / 4.0),
        rel: Float::new(prec),
    };
    let (half, quadrature_error) = gl.integrate(&|x: &Float| g.eval(x), &edges, tol);
    Ok(IntegralResult {
        value: half * 2u32 + tail,
        truncation: t,
        tail_bound,
        quadrature_error: quadrature_error * 2u32,
        panels,
        tail_method: method,
    })
}
