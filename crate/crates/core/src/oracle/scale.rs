use std::fmt;
use std::str::FromStr;

use rug::{Float, Rational};

use super::quad::pi;
use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational};

/// A positive real scale, kept symbolic so it can be rendered at any precision.
#[derive(Clone, Debug, PartialEq)]
pub enum Scale {
    Rational(Rational),
    /// `q * pi`.
    PiRational(Rational),
    Float(f64),
}

impl Scale {
    pub fn pi_times(q: Rational) -> Self {
        Scale::PiRational(q)
    }

    pub fn to_float(&self, prec: u32) -> Float {
        match self {
            Scale::Rational(q) => Float::with_val(prec, q),
            Scale::PiRational(q) => pi(prec) * q,
            Scale::Float(v) => Float::with_val(prec, *v),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_float(64).to_f64()
    }

    fn is_positive(&self) -> bool {
        match self {
            Scale::Rational(q) | Scale::PiRational(q) => *q > 0,
            Scale::Float(v) => v.is_finite() && *v > 0.0,
        }
    }

    /// The odd-harmonic scales `pi/(2k+1)` for `k = 0..=n`.
    pub fn odd_harmonic(n: u64) -> Vec<Scale> {
        (0..=n)
            .map(|k| Scale::PiRational(Rational::from((1, 2 * k + 1))))
            .collect()
    }
}

/// Accepts `"3/2"`, `"2"`, `"1.5"`, `"pi"`, `"5pi/4"`, `"pi/3"` and `"2*pi"`.
impl FromStr for Scale {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let err = || Error::Parse {
            what: "scale",
            input: input.to_string(),
        };
        let text: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let scale = if let Some((coef, rest)) = text.split_once("pi") {
            let coef = coef.trim_end_matches('*');
            let num = if coef.is_empty() {
                Rational::from(1)
            } else {
                parse_rational(coef).map_err(|_| err())?
            };
            let den = match rest {
                "" => Rational::from(1),
                _ => rest
                    .strip_prefix('/')
                    .ok_or_else(err)
                    .and_then(|d| parse_rational(d).map_err(|_| err()))?,
            };
            if den == 0 {
                return Err(err());
            }
            Scale::PiRational(num / den)
        } else if let Ok(q) = parse_rational(&text) {
            Scale::Rational(q)
        } else {
            Scale::Float(text.parse::<f64>().map_err(|_| err())?)
        };
        if !scale.is_positive() {
            return Err(Error::InvalidInput(format!("scale {input:?} must be positive")));
        }
        Ok(scale)
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scale::Rational(q) => write!(f, "{}", format_rational(q)),
            Scale::PiRational(q) => {
                if *q.numer() != 1 {
                    write!(f, "{}", q.numer())?;
                }
                write!(f, "pi")?;
                if *q.denom() != 1 {
                    write!(f, "/{}", q.denom())?;
                }
                Ok(())
            }
            Scale::Float(v) => write!(f, "{v}"),
        }
    }
}

pub fn parse_scale_list(input: &str) -> Result<Vec<Scale>> {
    input.split(',').map(str::parse).collect()
}
