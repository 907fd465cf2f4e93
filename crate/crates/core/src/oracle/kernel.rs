//! The band-limited factor `f(t) = (t sin t - cos t + e) / ((1 + t^2)(e - 1))`,
//! whose transform is `pi/(1 - 1/e) e^{-|omega|}` on `|omega| < 1` and zero
//! outside, so `int prod_k f(a_k t) sin(bt)/t dt = pi` once `sum a_k < b`.

use rug::ops::Pow;
use rug::Float;

use super::quad::{oscillatory_tail, pi, uniform_edges, GaussLegendre, Tolerance};
use super::{OracleConfig, Scale};
use crate::error::{Error, Result};

fn e_const(prec: u32) -> Float {
    Float::with_val(prec, 1).exp()
}

/// `f(s)`, with `f(0) = 1`.
pub fn kernel_factor(s: &Float) -> Float {
    Kernel::new(s.prec()).eval(s)
}

struct Kernel {
    e: Float,
    e_minus_one: Float,
}

impl Kernel {
    fn new(prec: u32) -> Self {
        let e = e_const(prec);
        let e_minus_one = Float::with_val(prec, &e - 1u32);
        Kernel { e, e_minus_one }
    }

    fn eval(&self, s: &Float) -> Float {
        let prec = s.prec();
        let (sin, cos) = Float::with_val(prec, s).sin_cos(Float::new(prec));
        let num = Float::with_val(prec, s * &sin) - cos + &self.e;
        let den = (Float::with_val(prec, s.square_ref()) + 1u32) * &self.e_minus_one;
        num / den
    }
}

#[derive(Clone, Debug)]
pub struct KernelIntegralResult {
    pub value: Float,
    pub truncation: Float,
    pub tail_bound: Float,
    pub quadrature_error: Float,
    pub panels: u64,
    /// `sum_k a_k < b`, under which the value is `pi`.
    pub hypothesis_holds: bool,
}

/// `int_{-inf}^{inf} prod_k f(a_k t) sin(bt)/t dt` to absolute accuracy `tol`.
///
/// For `s > 0`, `|f(s)| <= (1 + (1+e)/s) / (s (e-1))`, so past `T` the integrand
/// is at most `K_T t^{-(r+1)}` and the two tails sum to `2 K_T T^{-r} / r`.
pub fn kernel_integral(a: &[Scale], b: &Scale, tol: f64, config: &OracleConfig) -> Result<KernelIntegralResult> {
    if a.is_empty() {
        return Err(Error::InvalidInput("at least one scale is required".into()));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let prec = config.precision_bits;
    let scales: Vec<Float> = a.iter().map(|s| s.to_float(prec)).collect();
    let b = b.to_float(prec);
    let r = scales.len() as i32;
    let total = scales.iter().fold(Float::new(prec), |acc, x| acc + x);
    let hypothesis_holds = total < b;
    let prod = scales.iter().fold(Float::with_val(prec, 1), |acc, x| acc * x);
    let a_min = scales.iter().map(Float::to_f64).fold(f64::INFINITY, f64::min);
    let e = std::f64::consts::E;

    let tail_at = |t: f64| -> f64 {
        let c = (1.0 + (1.0 + e) / (a_min * t)) / (e - 1.0);
        2.0 * c.powi(r) / prod.to_f64() * t.powi(-r) / r as f64
    };
    let budget = tol / 2.0;
    let mut t = ((2.0 / (e - 1.0).powi(r) / prod.to_f64()) / (r as f64 * budget)).powf(1.0 / r as f64);
    while tail_at(t) > budget {
        t *= 1.25;
    }
    let width = pi(prec) / Float::with_val(prec, &total + &b);
    let panels = (t / width.to_f64()).ceil().max(1.0);
    if panels > config.panel_cap as f64 {
        return Err(Error::SlowConvergence {
            panels: panels as u64,
            cap: config.panel_cap,
        });
    }
    let panels = panels as u64;
    let t = Float::with_val(prec, &width * panels);

    let e_big = e_const(prec);
    let c_t = (Float::with_val(prec, &e_big + 1u32) / (Float::with_val(prec, a_min) * &t) + 1u32)
        / Float::with_val(prec, &e_big - 1u32);
    let tail_bound = Float::with_val(prec, (&c_t).pow(r)) / &prod * Float::with_val(prec, (&t).pow(-r)) * 2u32 / r as u32;

    let kernel = Kernel::new(prec);
    let integrand = |x: &Float| -> Float {
        if x.is_zero() {
            return b.clone();
        }
        let mut acc = Float::with_val(prec, Float::with_val(prec, &b * x).sin()) / x;
        for a in &scales {
            acc *= kernel.eval(&Float::with_val(prec, a * x));
        }
        acc
    };
    let gl = GaussLegendre::new(prec);
    let edges = uniform_edges(&Float::new(prec), &t, panels);
    let tol = Tolerance {
        abs: Float::with_val(prec, tol / 8.0),
        rel: Float::new(prec),
    };
    let (half, err) = gl.integrate(&integrand, &edges, tol);
    Ok(KernelIntegralResult {
        value: half * 2u32,
        truncation: t,
        tail_bound,
        quadrature_error: err * 2u32,
        panels,
        hypothesis_holds,
    })
}

/// `pi/(1 - 1/e) e^{-|omega|}` inside `(-1, 1)`, zero outside, and the
/// half-sum at `|omega| = 1`.
pub fn kernel_transform_closed_form(omega: f64, prec: u32) -> Float {
    let w = Float::with_val(prec, omega.abs());
    let e_inv = Float::with_val(prec, -1).exp();
    let peak = pi(prec) / (Float::with_val(prec, 1) - e_inv);
    if w < 1 {
        peak * Float::with_val(prec, -w).exp()
    } else if w == 1 {
        peak * Float::with_val(prec, -1).exp() / 2u32
    } else {
        Float::new(prec)
    }
}

#[derive(Clone, Debug)]
pub struct TransformSample {
    pub omega: f64,
    pub numeric: Float,
    pub closed_form: Float,
    pub difference: Float,
    pub error_estimate: Float,
    pub within_tol: bool,
}

/// Numerical `int e^{-i omega t} f(t) dt` against the closed form.
///
/// `f` decays only like `1/t`, so the tail uses
/// `(e-1) f = sin t/t + (e - cos t)/t^2 - sin t/(t(1+t^2)) - (e - cos t)/(t^2 (1+t^2))`:
/// the first two terms are integrated exactly against `cos(omega t)` and the
/// last two are bounded by `1/t^3 + (e+1)/t^4`.
pub fn verify_kernel_transform(omegas: &[f64], tol: f64, config: &OracleConfig) -> Result<Vec<TransformSample>> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let prec = config.precision_bits;
    let gl = GaussLegendre::new(prec);
    omegas
        .iter()
        .map(|&omega| {
            if !omega.is_finite() {
                return Err(Error::InvalidInput(format!("frequency {omega} is not finite")));
            }
            let numeric = transform_at(omega, tol, prec, &gl, config)?;
            let closed_form = kernel_transform_closed_form(omega, prec);
            let difference = Float::with_val(prec, &numeric.0 - &closed_form);
            let within_tol = Float::with_val(prec, difference.abs_ref()) <= tol;
            Ok(TransformSample {
                omega,
                numeric: numeric.0,
                closed_form,
                difference,
                error_estimate: numeric.1,
                within_tol,
            })
        })
        .collect()
}

fn transform_at(omega: f64, tol: f64, prec: u32, gl: &GaussLegendre, config: &OracleConfig) -> Result<(Float, Float)> {
    let e = std::f64::consts::E;
    let remainder = |t: f64| 2.0 * (0.5 / (t * t) + (e + 1.0) / (3.0 * t * t * t)) / (e - 1.0);
    let mut t = (4.0 / (tol * (e - 1.0))).sqrt().max(16.0);
    while remainder(t) > tol / 4.0 {
        t *= 1.25;
    }
    let w = Float::with_val(prec, omega);
    let width = pi(prec) / (Float::with_val(prec, w.abs_ref()) + 1u32);
    let panels = (t / width.to_f64()).ceil().max(1.0);
    if panels > config.panel_cap as f64 {
        return Err(Error::SlowConvergence {
            panels: panels as u64,
            cap: config.panel_cap,
        });
    }
    let panels = panels as u64;
    let t = Float::with_val(prec, &width * panels);

    let kernel = Kernel::new(prec);
    let integrand = |x: &Float| Float::with_val(prec, Float::with_val(prec, &w * x).cos()) * kernel.eval(x);
    let edges = uniform_edges(&Float::new(prec), &t, panels);
    let quad_tol = Tolerance {
        abs: Float::with_val(prec, tol / 8.0),
        rel: Float::new(prec),
    };
    let (body, quad_err) = gl.integrate(&integrand, &edges, quad_tol);

    let e_big = e_const(prec);
    let mut leading = Float::new(prec);
    let mut tail_err = Float::new(prec);
    for d in [Float::with_val(prec, 1 + &w), Float::with_val(prec, 1 - &w)] {
        if !d.is_zero() {
            let (v, err) = oscillatory_tail(&d, 1, &t, gl)?;
            leading += v.im / 2u32;
            tail_err += err / 2u32;
        }
        let (v, err) = oscillatory_tail(&d, 2, &t, gl)?;
        leading -= v.re / 2u32;
        tail_err += err / 2u32;
    }
    let (v, err) = oscillatory_tail(&w, 2, &t, gl)?;
    leading += Float::with_val(prec, &v.re * &e_big);
    tail_err += err * &e_big;

    let scale = Float::with_val(prec, &e_big - 1u32);
    let value = (body + leading / &scale) * 2u32;
    let error = (quad_err + tail_err / &scale) * 2u32 + Float::with_val(prec, remainder(t.to_f64()));
    Ok((value, error))
}
