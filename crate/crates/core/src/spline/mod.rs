//! Compactly supported piecewise polynomials with rational breakpoints and
//! coefficients.
//!
//! The Fourier transform of a product of sincs is a convolution of boxes. In
//! normalized frequency every such convolution is a piecewise polynomial whose
//! breakpoints are signed subset sums of the scales, so this module represents
//! it exactly and supports the few operations the engine needs: box
//! convolution, point evaluation, integration and piecewise calculus.

mod poly;

use std::fmt::Write as _;

use rayon::prelude::*;
use rug::Rational;

pub use poly::Polynomial;

use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational};

/// Default ceiling on the number of breakpoints a convolution may produce.
pub const DEFAULT_BREAKPOINT_CAP: usize = 1 << 20;

/// Value assigned at a breakpoint where the one-sided limits may differ.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum JumpConvention {
    /// Average of the two one-sided limits.
    #[default]
    HalfSum,
    Left,
    Right,
}

/// A function that is polynomial on each open interval between consecutive
/// breakpoints and identically zero outside `[x_0, x_M]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PiecewisePolynomial {
    breakpoints: Vec<Rational>,
    pieces: Vec<Polynomial>,
}

enum Location {
    Outside,
    Interior(usize),
    Breakpoint(usize),
}

impl PiecewisePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds from `M + 1` strictly increasing breakpoints and `M` pieces.
    pub fn new(breakpoints: Vec<Rational>, pieces: Vec<Polynomial>) -> Result<Self> {
        if breakpoints.is_empty() && pieces.is_empty() {
            return Ok(Self::zero());
        }
        if breakpoints.len() != pieces.len() + 1 || pieces.is_empty() {
            return Err(Error::InvalidInput(format!(
                "{} breakpoints cannot bound {} pieces",
                breakpoints.len(),
                pieces.len()
            )));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        Ok(PiecewisePolynomial {
            breakpoints,
            pieces,
        })
    }

    /// The box of height `1/h` on `[-h, h]`, i.e. the normalized transform of
    /// `sinc(h * pi * t)`.
    pub fn box_function(halfwidth: &Rational) -> Result<Self> {
        if *halfwidth <= 0 {
            return Err(Error::InvalidInput("box halfwidth must be positive".into()));
        }
        Ok(PiecewisePolynomial {
            breakpoints: vec![Rational::from(-halfwidth), halfwidth.clone()],
            pieces: vec![Polynomial::constant(Rational::from(halfwidth.recip_ref()))],
        })
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Polynomial] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.iter().all(Polynomial::is_zero)
    }

    /// `[x_0, x_M]`, or `None` for the empty representation.
    pub fn support(&self) -> Option<(&Rational, &Rational)> {
        Some((self.breakpoints.first()?, self.breakpoints.last()?))
    }

    /// Largest piece degree; `None` when every piece is zero.
    pub fn degree(&self) -> Option<usize> {
        self.pieces.iter().filter_map(Polynomial::degree).max()
    }

    fn locate(&self, x: &Rational) -> Location {
        let Some((lo, hi)) = self.support() else {
            return Location::Outside;
        };
        if x < lo || x > hi {
            return Location::Outside;
        }
        let idx = self.breakpoints.partition_point(|b| b < x);
        if self.breakpoints[idx] == *x {
            Location::Breakpoint(idx)
        } else {
            Location::Interior(idx - 1)
        }
    }

    fn piece_or_zero(&self, j: Option<usize>, x: &Rational) -> Rational {
        match j.and_then(|j| self.pieces.get(j)) {
            Some(p) => p.eval(x),
            None => Rational::new(),
        }
    }

    pub fn evaluate(&self, x: &Rational, convention: JumpConvention) -> Rational {
        match self.locate(x) {
            Location::Outside => Rational::new(),
            Location::Interior(j) => self.pieces[j].eval(x),
            Location::Breakpoint(i) => {
                let left = || self.piece_or_zero(i.checked_sub(1), x);
                let right = || self.piece_or_zero(Some(i), x);
                match convention {
                    JumpConvention::Left => left(),
                    JumpConvention::Right => right(),
                    JumpConvention::HalfSum => (left() + right()) / 2u32,
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PiecewisePolynomial {
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// Exact integral over the support.
    pub fn integral(&self) -> Rational {
        self.pieces
            .iter()
            .zip(self.breakpoints.windows(2))
            .map(|(p, w)| {
                let anti = p.antiderivative();
                anti.eval(&w[1]) - anti.eval(&w[0])
            })
            .fold(Rational::new(), |acc, v| acc + v)
    }

    pub fn differentiate(&self) -> Self {
        PiecewisePolynomial {
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().map(Polynomial::derivative).collect(),
        }
    }

    /// The continuous antiderivative vanishing at `x_0`, restricted to the
    /// support (the representation is zero outside it, so the result jumps at
    /// `x_M` by the total mass).
    pub fn antiderivative(&self) -> Self {
        let mut pieces = Vec::with_capacity(self.pieces.len());
        let mut running = Rational::new();
        for (p, w) in self.pieces.iter().zip(self.breakpoints.windows(2)) {
            let anti = p.antiderivative();
            let offset = &running - anti.eval(&w[0]);
            let piece = &anti + &Polynomial::constant(offset);
            running = piece.eval(&w[1]);
            pieces.push(piece);
        }
        PiecewisePolynomial {
            breakpoints: self.breakpoints.clone(),
            pieces,
        }
    }

    /// Largest `m` such that derivatives of order `0..=m` agree from both sides
    /// at every breakpoint (the support ends included); `-1` when the function
    /// itself jumps. The zero function reports `i64::MAX`.
    pub fn smoothness_order(&self) -> i64 {
        let Some(max_degree) = self.degree() else {
            return i64::MAX;
        };
        let mut current = self.clone();
        for order in 0..=max_degree + 1 {
            let matches = current.breakpoints.iter().enumerate().all(|(i, x)| {
                current.piece_or_zero(i.checked_sub(1), x) == current.piece_or_zero(Some(i), x)
            });
            if !matches {
                return order as i64 - 1;
            }
            current = current.differentiate();
        }
        max_degree as i64 + 1
    }

    /// `x -> integral of self over [x - h, x + h]`, exactly.
    ///
    /// Computed as `G(x + h) - G(x - h)` with `G` the continuous antiderivative.
    /// Fails with [`Error::SizeGuard`] when the result could hold more than
    /// `breakpoint_cap` breakpoints.
    pub fn convolve_with_box(&self, halfwidth: &Rational, breakpoint_cap: usize) -> Result<Self> {
        if *halfwidth <= 0 {
            return Err(Error::InvalidInput("box halfwidth must be positive".into()));
        }
        if self.breakpoints.is_empty() {
            return Ok(Self::zero());
        }
        let projected = 2 * self.breakpoints.len();
        if projected > breakpoint_cap {
            return Err(Error::SizeGuard {
                projected,
                cap: breakpoint_cap,
            });
        }

        let anti = self.antiderivative();
        let total = anti.pieces.last().expect("nonempty").eval(self.breakpoints.last().expect("nonempty"));
        let neg_h = Rational::from(-halfwidth);
        let upper: Vec<Polynomial> = anti.pieces.par_iter().map(|g| g.shift(halfwidth)).collect();
        let lower: Vec<Polynomial> = anti.pieces.par_iter().map(|g| g.shift(&neg_h)).collect();

        let mut breakpoints: Vec<Rational> = self
            .breakpoints
            .iter()
            .flat_map(|b| [Rational::from(b - halfwidth), Rational::from(b + halfwidth)])
            .collect();
        breakpoints.sort();
        breakpoints.dedup();

        let total_poly = Polynomial::constant(total);
        let zero = Polynomial::zero();
        let select = |arg: &Rational, shifted: &'_ [Polynomial]| -> Polynomial {
            let (lo, hi) = self.support().expect("nonempty");
            if arg < lo {
                zero.clone()
            } else if arg > hi {
                total_poly.clone()
            } else {
                let idx = self.breakpoints.partition_point(|b| b < arg);
                shifted[idx - 1].clone()
            }
        };

        let pieces: Vec<Polynomial> = breakpoints
            .par_windows(2)
            .map(|w| {
                let mid = Rational::from(&w[0] + &w[1]) / 2u32;
                let hi = select(&Rational::from(&mid + halfwidth), &upper);
                let lo = select(&Rational::from(&mid - halfwidth), &lower);
                &hi - &lo
            })
            .collect();

        Ok(PiecewisePolynomial {
            breakpoints,
            pieces,
        })
    }

    /// One row per piece: `x_lo,x_hi,c0,c1,...,c_d`, every rational as `p/q`.
    /// A zero piece is written with the single coefficient `0/1`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (p, w) in self.pieces.iter().zip(self.breakpoints.windows(2)) {
            out.push_str(&format_rational(&w[0]));
            out.push(',');
            out.push_str(&format_rational(&w[1]));
            if p.is_zero() {
                out.push_str(",0/1");
            }
            for c in p.coeffs() {
                let _ = write!(out, ",{}", format_rational(c));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut breakpoints: Vec<Rational> = Vec::new();
        let mut pieces = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<Rational> = line.split(',').map(parse_rational).collect::<Result<_>>()?;
            if fields.len() < 3 {
                return Err(Error::InvalidInput(format!(
                    "line {}: expected x_lo, x_hi and at least one coefficient",
                    lineno + 1
                )));
            }
            match breakpoints.last() {
                None => breakpoints.push(fields[0].clone()),
                Some(prev) if *prev == fields[0] => {}
                Some(_) => {
                    return Err(Error::InvalidInput(format!(
                        "line {}: pieces are not contiguous",
                        lineno + 1
                    )))
                }
            }
            breakpoints.push(fields[1].clone());
            pieces.push(Polynomial::new(fields[2..].to_vec()));
        }
        Self::new(breakpoints, pieces)
    }
}
