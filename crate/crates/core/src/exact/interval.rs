//! Outward-rounded interval arithmetic on MPFR floats.
//!
//! Every endpoint is a `P`-bit float; lower endpoints are rounded toward
//! negative infinity and upper endpoints toward positive infinity, so each
//! operation returns an enclosure of the exact result.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::float::{Constant, Round};
use rug::{Float, Rational};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Interval {
    lo: Float,
    hi: Float,
    precision_bits: u32,
}

impl Interval {
    pub const MIN_PRECISION: u32 = 53;

    fn check_precision(precision_bits: u32) -> u32 {
        assert!(
            precision_bits >= Self::MIN_PRECISION,
            "interval precision must be at least {} bits",
            Self::MIN_PRECISION
        );
        precision_bits
    }

    /// Tightest enclosure of an exact rational.
    pub fn from_rational(value: &Rational, precision_bits: u32) -> Self {
        Self::from_bounds(value, value, precision_bits)
    }

    pub fn from_bounds(lo: &Rational, hi: &Rational, precision_bits: u32) -> Self {
        let prec = Self::check_precision(precision_bits);
        assert!(lo <= hi, "interval bounds out of order");
        Interval {
            lo: Float::with_val_round(prec, lo, Round::Down).0,
            hi: Float::with_val_round(prec, hi, Round::Up).0,
            precision_bits: prec,
        }
    }

    pub fn pi(precision_bits: u32) -> Self {
        let prec = Self::check_precision(precision_bits);
        Interval {
            lo: Float::with_val_round(prec, Constant::Pi, Round::Down).0,
            hi: Float::with_val_round(prec, Constant::Pi, Round::Up).0,
            precision_bits: prec,
        }
    }

    pub fn lo(&self) -> &Float {
        &self.lo
    }

    pub fn hi(&self) -> &Float {
        &self.hi
    }

    pub fn precision_bits(&self) -> u32 {
        self.precision_bits
    }

    /// Upper bound on `hi - lo`.
    pub fn width(&self) -> Float {
        Float::with_val_round(self.precision_bits, &self.hi - &self.lo, Round::Up).0
    }

    pub fn contains(&self, value: &Rational) -> bool {
        self.lo <= *value && self.hi >= *value
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && self.hi >= other.hi
    }

    /// Rigorous comparison against an exact rational: `Some(Less)` only when
    /// the whole enclosure lies strictly below `value`, `Some(Greater)` only when
    /// it lies strictly above, `Some(Equal)` for a degenerate point equal to it,
    /// and `None` while undecided.
    pub fn cmp_rational(&self, value: &Rational) -> Option<Ordering> {
        if self.hi < *value {
            Some(Ordering::Less)
        } else if self.lo > *value {
            Some(Ordering::Greater)
        } else if self.lo == *value && self.hi == *value {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Re-rounds the endpoints outward to a new precision.
    pub fn with_precision(&self, precision_bits: u32) -> Self {
        let prec = Self::check_precision(precision_bits);
        Interval {
            lo: Float::with_val_round(prec, &self.lo, Round::Down).0,
            hi: Float::with_val_round(prec, &self.hi, Round::Up).0,
            precision_bits: prec,
        }
    }

    /// Division; rejects divisors whose enclosure contains zero.
    pub fn checked_div(&self, rhs: &Interval) -> Result<Interval> {
        if rhs.lo <= 0 && rhs.hi >= 0 {
            return Err(Error::InvalidInput(
                "interval divisor contains zero".to_string(),
            ));
        }
        let prec = self.precision_bits.max(rhs.precision_bits);
        Ok(corner_hull(
            prec,
            [
                (&self.lo, &rhs.lo),
                (&self.lo, &rhs.hi),
                (&self.hi, &rhs.lo),
                (&self.hi, &rhs.hi),
            ],
            |a, b, round| Float::with_val_round(prec, a / b, round).0,
        ))
    }

    /// Midpoint as an `f64`; for display only.
    pub fn midpoint_f64(&self) -> f64 {
        let mid = Float::with_val(self.precision_bits + 1, &self.lo + &self.hi) / 2u32;
        mid.to_f64()
    }
}

fn corner_hull(
    prec: u32,
    corners: [(&Float, &Float); 4],
    op: impl Fn(&Float, &Float, Round) -> Float,
) -> Interval {
    let mut lo: Option<Float> = None;
    let mut hi: Option<Float> = None;
    for (a, b) in corners {
        let down = op(a, b, Round::Down);
        let up = op(a, b, Round::Up);
        if lo.as_ref().is_none_or(|l| down < *l) {
            lo = Some(down);
        }
        if hi.as_ref().is_none_or(|h| up > *h) {
            hi = Some(up);
        }
    }
    Interval {
        lo: lo.expect("four corners"),
        hi: hi.expect("four corners"),
        precision_bits: prec,
    }
}

impl Add for &Interval {
    type Output = Interval;

    fn add(self, rhs: &Interval) -> Interval {
        let prec = self.precision_bits.max(rhs.precision_bits);
        Interval {
            lo: Float::with_val_round(prec, &self.lo + &rhs.lo, Round::Down).0,
            hi: Float::with_val_round(prec, &self.hi + &rhs.hi, Round::Up).0,
            precision_bits: prec,
        }
    }
}

impl Sub for &Interval {
    type Output = Interval;

    fn sub(self, rhs: &Interval) -> Interval {
        let prec = self.precision_bits.max(rhs.precision_bits);
        Interval {
            lo: Float::with_val_round(prec, &self.lo - &rhs.hi, Round::Down).0,
            hi: Float::with_val_round(prec, &self.hi - &rhs.lo, Round::Up).0,
            precision_bits: prec,
        }
    }
}

impl Mul for &Interval {
    type Output = Interval;

    fn mul(self, rhs: &Interval) -> Interval {
        let prec = self.precision_bits.max(rhs.precision_bits);
        corner_hull(
            prec,
            [
                (&self.lo, &rhs.lo),
                (&self.lo, &rhs.hi),
                (&self.hi, &rhs.lo),
                (&self.hi, &rhs.hi),
            ],
            |a, b, round| Float::with_val_round(prec, a * b, round).0,
        )
    }
}

impl Neg for &Interval {
    type Output = Interval;

    fn neg(self) -> Interval {
        Interval {
            lo: Float::with_val(self.precision_bits, -&self.hi),
            hi: Float::with_val(self.precision_bits, -&self.lo),
            precision_bits: self.precision_bits,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = Some((self.precision_bits as f64 * std::f64::consts::LOG10_2) as usize + 2);
        write!(
            f,
            "[{}, {}]",
            self.lo.to_string_radix_round(10, digits, Round::Down),
            self.hi.to_string_radix_round(10, digits, Round::Up)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn rational_enclosure_is_tight() {
        let third = Interval::from_rational(&q(1, 3), 128);
        assert!(third.contains(&q(1, 3)));
        assert!(third.width() <= Float::with_val(128, Float::i_exp(1, -128)));
        let one = Interval::from_rational(&q(1, 1), 64);
        assert_eq!(one.cmp_rational(&q(1, 1)), Some(Ordering::Equal));
    }

    #[test]
    fn arithmetic_encloses_exact_results() {
        let a = Interval::from_rational(&q(1, 3), 64);
        let b = Interval::from_rational(&q(-2, 7), 64);
        assert!((&a + &b).contains(&q(1, 21)));
        assert!((&a - &b).contains(&q(13, 21)));
        assert!((&a * &b).contains(&q(-2, 21)));
        assert!(a.checked_div(&b).unwrap().contains(&q(-7, 6)));
        assert!((-&a).contains(&q(-1, 3)));
    }

    #[test]
    fn division_by_zero_straddle_rejected() {
        let a = Interval::from_rational(&q(1, 1), 64);
        let z = Interval::from_bounds(&q(-1, 10), &q(1, 10), 64);
        assert!(a.checked_div(&z).is_err());
    }

    #[test]
    fn undecided_comparison() {
        let a = Interval::from_bounds(&q(1, 3), &q(1, 2), 64);
        assert_eq!(a.cmp_rational(&q(2, 5)), None);
        assert_eq!(a.cmp_rational(&q(1, 1)), Some(Ordering::Less));
        assert_eq!(a.cmp_rational(&q(0, 1)), Some(Ordering::Greater));
    }

    #[test]
    fn pi_bracket() {
        let pi = Interval::pi(128);
        assert!(!pi.contains(&q(314159265358979, 100000000000000)));
        assert!(pi.lo() < pi.hi());
        assert_eq!(pi.cmp_rational(&q(355, 113)), Some(Ordering::Less));
        assert_eq!(pi.cmp_rational(&q(333, 106)), Some(Ordering::Greater));
    }

    #[test]
    fn repeated_sum_contains_exact() {
        let tenth = Interval::from_rational(&q(1, 10), 60);
        let mut acc = Interval::from_rational(&q(0, 1), 60);
        for _ in 0..10 {
            acc = &acc + &tenth;
        }
        assert!(acc.contains(&q(1, 1)));
    }

    #[test]
    #[should_panic]
    fn low_precision_rejected() {
        let _ = Interval::from_rational(&q(1, 3), 24);
    }
}
