//! Gauss-Legendre quadrature at MPFR precision, and the oscillatory tail
//! `int_T^inf e^{idt} t^{-r} dt`.

use rayon::prelude::*;
use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};

const ORDER: usize = 16;
const MAX_DEPTH: u32 = 16;

/// Nodes and weights of the 16-point rule on `[-1, 1]`.
#[derive(Clone, Debug)]
pub(crate) struct GaussLegendre {
    nodes: Vec<Float>,
    weights: Vec<Float>,
    prec: u32,
}

impl GaussLegendre {
    pub(crate) fn new(prec: u32) -> Self {
        let work = prec + 32;
        let mut nodes = Vec::with_capacity(ORDER);
        let mut weights = Vec::with_capacity(ORDER);
        let tolerance = Float::with_val(work, Float::i_exp(1, -(prec as i32) - 8));
        for i in 1..=ORDER {
            let guess = (std::f64::consts::PI * (i as f64 - 0.25) / (ORDER as f64 + 0.5)).cos();
            let mut x = Float::with_val(work, guess);
            let mut derivative = Float::new(work);
            for _ in 0..100 {
                let (p, dp) = legendre(ORDER, &x);
                let step = Float::with_val(work, &p / &dp);
                x -= &step;
                derivative = dp;
                if step.abs() < tolerance {
                    break;
                }
            }
            let (_, dp) = legendre(ORDER, &x);
            if dp != 0 {
                derivative = dp;
            }
            let one_minus = Float::with_val(work, 1) - Float::with_val(work, x.square_ref());
            let w = Float::with_val(work, 2) / (one_minus * derivative.square());
            nodes.push(Float::with_val(prec, &x));
            weights.push(Float::with_val(prec, &w));
        }
        GaussLegendre {
            nodes,
            weights,
            prec,
        }
    }

    pub(crate) fn prec(&self) -> u32 {
        self.prec
    }

    /// The rule applied on `[a, b]`.
    pub(crate) fn panel<F>(&self, f: &F, a: &Float, b: &Float) -> Float
    where
        F: Fn(&Float) -> Float,
    {
        let prec = self.prec;
        let half = Float::with_val(prec, b - a) / 2u32;
        let mid = Float::with_val(prec, a + b) / 2u32;
        let mut acc = Float::new(prec);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let t = Float::with_val(prec, &half * x) + &mid;
            acc += f(&t) * w;
        }
        acc * half
    }

    fn adapt<F>(&self, f: &F, a: &Float, b: &Float, whole: Float, tol: &Tolerance, depth: u32) -> (Float, Float)
    where
        F: Fn(&Float) -> Float,
    {
        let mid = Float::with_val(self.prec, a + b) / 2u32;
        let left = self.panel(f, a, &mid);
        let right = self.panel(f, &mid, b);
        let refined = Float::with_val(self.prec, &left + &right);
        let diff = Float::with_val(self.prec, &refined - &whole).abs();
        // Differences at the rounding level of the panel sums cannot shrink further.
        let noise = (Float::with_val(self.prec, left.abs_ref()) + Float::with_val(self.prec, right.abs_ref()))
            * Float::with_val(self.prec, Float::i_exp(1, 12 - self.prec as i32));
        if depth == 0 || diff <= noise || tol.accepts(&diff, &refined) {
            return (refined, diff);
        }
        let sub = tol.halved();
        let (lv, le) = self.adapt(f, a, &mid, left, &sub, depth - 1);
        let (rv, re) = self.adapt(f, &mid, b, right, &sub, depth - 1);
        (lv + rv, le + re)
    }

    /// Adaptive integral over consecutive panels with the given edges. Panels
    /// run in parallel; the reduction order is fixed. Returns the value and
    /// the summed refinement differences as an error estimate.
    pub(crate) fn integrate<F>(&self, f: &F, edges: &[Float], tol: Tolerance) -> (Float, Float)
    where
        F: Fn(&Float) -> Float + Sync,
    {
        let panels = edges.len().saturating_sub(1).max(1) as u32;
        let per_panel = Tolerance {
            abs: tol.abs / panels,
            rel: tol.rel,
        };
        let parts: Vec<(Float, Float)> = edges
            .par_windows(2)
            .map(|w| {
                let whole = self.panel(f, &w[0], &w[1]);
                self.adapt(f, &w[0], &w[1], whole, &per_panel, MAX_DEPTH)
            })
            .collect();
        let mut value = Float::new(self.prec);
        let mut error = Float::new(self.prec);
        for (v, e) in parts {
            value += v;
            error += e;
        }
        (value, error)
    }
}

/// Acceptance test for a refined panel: `|diff| <= max(abs, rel * |value|)`.
#[derive(Clone, Debug)]
pub(crate) struct Tolerance {
    pub abs: Float,
    pub rel: Float,
}

impl Tolerance {
    fn accepts(&self, diff: &Float, value: &Float) -> bool {
        *diff <= self.abs || *diff <= Float::with_val(diff.prec(), &self.rel * value).abs()
    }

    fn halved(&self) -> Self {
        Tolerance {
            abs: Float::with_val(self.abs.prec(), &self.abs / 2u32),
            rel: self.rel.clone(),
        }
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: &Float) -> (Float, Float) {
    let prec = x.prec();
    let mut p0 = Float::with_val(prec, 1);
    let mut p1 = x.clone();
    for k in 2..=n {
        let k = k as u32;
        let p2 = (Float::with_val(prec, x * &p1) * (2 * k - 1) - Float::with_val(prec, &p0 * (k - 1))) / k;
        p0 = p1;
        p1 = p2;
    }
    let denom = Float::with_val(prec, x.square_ref()) - 1u32;
    let dp = (Float::with_val(prec, x * &p1) - &p0) * n as u32 / denom;
    (p1, dp)
}

/// Equally spaced edges `a, a + h, ..., b` with `count` panels.
pub(crate) fn uniform_edges(a: &Float, b: &Float, count: u64) -> Vec<Float> {
    let prec = a.prec().max(b.prec());
    let count = count.max(1);
    let h = Float::with_val(prec, b - a) / count;
    let mut edges: Vec<Float> = (0..count).map(|i| Float::with_val(prec, &h * i) + a).collect();
    edges.push(b.clone());
    edges
}

/// A complex number as a pair of floats.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Complex {
    pub re: Float,
    pub im: Float,
}

impl Complex {
    pub(crate) fn zero(prec: u32) -> Self {
        Complex {
            re: Float::new(prec),
            im: Float::new(prec),
        }
    }

    pub(crate) fn conj(self) -> Self {
        Complex {
            re: self.re,
            im: -self.im,
        }
    }

    pub(crate) fn scale(self, c: &Float) -> Self {
        Complex {
            re: self.re * c,
            im: self.im * c,
        }
    }

    /// Multiplies by `i^k`.
    pub(crate) fn rotate(self, k: u32) -> Self {
        match k % 4 {
            0 => self,
            1 => Complex { re: -self.im, im: self.re },
            2 => Complex { re: -self.re, im: -self.im },
            _ => Complex { re: self.im, im: -self.re },
        }
    }

    pub(crate) fn add_assign(&mut self, other: &Complex) {
        self.re += &other.re;
        self.im += &other.im;
    }
}

/// `int_T^inf e^{idt} t^{-r} dt` together with a bound on its evaluation error.
///
/// For `d = 0` this is `T^{1-r}/(r-1)` and needs `r >= 2`.
pub(crate) fn oscillatory_tail(d: &Float, r: u32, t: &Float, gl: &GaussLegendre) -> Result<(Complex, Float)> {
    let prec = gl.prec();
    if r == 0 {
        return Err(Error::InvalidInput("oscillatory tail needs r >= 1".into()));
    }
    if d.is_zero() {
        if r < 2 {
            return Err(Error::NotAbsolutelyIntegrable(
                "non-oscillating 1/t tail diverges".into(),
            ));
        }
        let value = Float::with_val(prec, t.pow(1 - r as i32)) / (r - 1);
        return Ok((
            Complex {
                re: value,
                im: Float::new(prec),
            },
            Float::new(prec),
        ));
    }
    let magnitude = Float::with_val(prec, d.abs_ref());
    let x = Float::with_val(prec, &magnitude * t);
    let (j, err) = oscillatory_unit_tail(&x, r, gl);
    let factor = Float::with_val(prec, (&magnitude).pow(r as i32 - 1));
    let err = err * &factor;
    let value = j.scale(&factor);
    Ok((if d.is_sign_negative() { value.conj() } else { value }, err))
}

/// `J_r(x) = int_x^inf e^{iu} u^{-r} du` for `x > 0`.
fn oscillatory_unit_tail(x: &Float, r: u32, gl: &GaussLegendre) -> (Complex, Float) {
    let prec = gl.prec();
    // Beyond this point the asymptotic series reaches 2^-prec before it diverges.
    let switch = Float::with_val(prec, 0.7 * prec as f64 + 2.0 * r as f64 + 20.0);
    if *x >= switch {
        return asymptotic_tail(x, r);
    }
    let (far, far_err) = asymptotic_tail(&switch, r);

    let mut edges = Vec::new();
    let one = Float::with_val(prec, 1);
    let mut lo = x.clone();
    while lo < one {
        edges.push(lo.clone());
        lo *= 1.5f64;
    }
    let start = if *x < one { one } else { x.clone() };
    let span = Float::with_val(prec, &switch - &start);
    let count = span.ceil().to_f64().max(1.0) as u64;
    edges.extend(uniform_edges(&start, &switch, count));
    edges.dedup();

    let tol = Tolerance {
        abs: Float::with_val(prec, Float::i_exp(1, -(prec as i32))),
        rel: Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 8)),
    };
    let power = |u: &Float| Float::with_val(prec, u.pow(-(r as i32)));
    let (re, re_err) = gl.integrate(&|u: &Float| Float::with_val(prec, u.cos_ref()) * power(u), &edges, tol.clone());
    let (im, im_err) = gl.integrate(&|u: &Float| Float::with_val(prec, u.sin_ref()) * power(u), &edges, tol);
    let value = Complex {
        re: re + far.re,
        im: im + far.im,
    };
    (value, far_err + re_err + im_err)
}

/// `J_r(x) ~ i e^{ix} sum_k (-i)^k (r)_k x^{-r-k}`, truncated before the terms
/// stop shrinking. The remainder is `(-i)^K (r)_K J_{r+K}(x)`, bounded by
/// `(r)_K x^{1-r-K} / (r+K-1)`.
fn asymptotic_tail(x: &Float, r: u32) -> (Complex, Float) {
    let prec = x.prec();
    let mut term = Float::with_val(prec, x.pow(-(r as i32)));
    let floor = Float::with_val(prec, &term * Float::with_val(prec, Float::i_exp(1, -(prec as i32) - 4)));
    let mut sum = Complex::zero(prec);
    let mut k = 0u32;
    loop {
        let signed = Complex {
            re: term.clone(),
            im: Float::new(prec),
        }
        .rotate(3 * k);
        sum.add_assign(&signed);
        let ratio = Float::with_val(prec, Float::with_val(prec, r + k) / x);
        term *= &ratio;
        k += 1;
        if term < floor || ratio >= 1 {
            break;
        }
    }
    let remainder = Float::with_val(prec, &term * x) / (r + k - 1);
    let (sin, cos) = Float::with_val(prec, x).sin_cos(Float::new(prec));
    // i e^{ix} (s_re + i s_im)
    let re = -Float::with_val(prec, &cos * &sum.im) - Float::with_val(prec, &sin * &sum.re);
    let im = Float::with_val(prec, &cos * &sum.re) - Float::with_val(prec, &sin * &sum.im);
    (Complex { re, im }, remainder)
}

pub(crate) fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}
