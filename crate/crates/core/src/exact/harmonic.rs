//! Partial sums of scale families and their breaking points.
//!
//! All scales are in normalized units: a factor `sinc(a t)` with `a = beta * pi`
//! is recorded by `beta`, so the support thresholds `2 pi`, `3 pi`, ... become the
//! integers `2`, `3`, ...

use std::cmp::Ordering;

use rug::{Integer, Rational};

use super::interval::Interval;
use crate::error::{Error, Result};

/// Number of terms decided with exact rationals before switching to intervals.
pub const EXACT_TERM_LIMIT: u64 = 10_000;
/// Starting precision for the interval phase of [`breaking_point`].
pub const START_PRECISION: u32 = 128;
/// Precision ceiling for the interval phase.
pub const MAX_PRECISION: u32 = 1 << 16;

/// A sequence of positive scales `beta_0, beta_1, ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HarmonicFamily {
    /// `beta_k = 1/(2k+1)`.
    OddHarmonic,
    /// `beta_k = beta` for every `k`.
    Constant(Rational),
    /// An explicit, finite list.
    Custom(Vec<Rational>),
}

impl HarmonicFamily {
    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            HarmonicFamily::OddHarmonic => true,
            HarmonicFamily::Constant(beta) => *beta > 0,
            HarmonicFamily::Custom(betas) => betas.iter().all(|b| *b > 0),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput("family scales must be strictly positive".into()))
        }
    }

    /// The `k`-th scale, or `None` past the end of a finite family.
    pub fn term(&self, k: u64) -> Option<Rational> {
        match self {
            HarmonicFamily::OddHarmonic => Some(Rational::from((1, 2 * Integer::from(k) + 1u32))),
            HarmonicFamily::Constant(beta) => Some(beta.clone()),
            HarmonicFamily::Custom(betas) => usize::try_from(k).ok().and_then(|i| betas.get(i)).cloned(),
        }
    }

    /// The first `count` scales.
    pub fn scales(&self, count: u64) -> Vec<Rational> {
        (0..count).map_while(|k| self.term(k)).collect()
    }
}

/// `sum_{k=0}^{n} 1/(2k+1)` in lowest terms.
pub fn odd_harmonic_sum(n: u64) -> Rational {
    let mut acc = LazySum::default();
    for k in 0..=n {
        acc.add_unit_fraction(&(2 * Integer::from(k) + 1u32));
    }
    acc.into_rational()
}

/// Enclosure of `sum_{k=0}^{n} 1/(2k+1)` with endpoints at `precision_bits` bits.
///
/// The accumulation runs with `ceil(log2(n+1)) + 2` guard bits, so the returned
/// width stays below `(n+1) * 2^(1-P) * value`.
pub fn interval_odd_harmonic_sum(n: u64, precision_bits: u32) -> Interval {
    assert!(precision_bits >= Interval::MIN_PRECISION);
    let guard = 64 - (n + 1).leading_zeros() + 2;
    let working = precision_bits + guard;
    let mut acc = Interval::from_rational(&Rational::new(), working);
    for k in 0..=n {
        let term = Interval::from_rational(&Rational::from((1, 2 * Integer::from(k) + 1u32)), working);
        acc = &acc + &term;
    }
    acc.with_precision(precision_bits)
}

/// Largest `n` with `sum_{k=0}^{n} beta_k < threshold`.
///
/// The first [`EXACT_TERM_LIMIT`] partial sums are compared exactly. Past that,
/// the running sum is carried as an [`Interval`] starting at
/// [`START_PRECISION`] bits; whenever a comparison with the threshold is
/// undecided the precision doubles and the interval phase restarts.
pub fn breaking_point(family: &HarmonicFamily, threshold: &Rational) -> Result<u64> {
    family.validate()?;
    if *threshold <= 0 {
        return Err(Error::InvalidInput("threshold must be positive".into()));
    }

    let mut acc = LazySum::default();
    let mut k = 0u64;
    while k < EXACT_TERM_LIMIT {
        let Some(term) = family.term(k) else {
            return Err(Error::ThresholdNeverReached { terms: k });
        };
        acc.add(&term);
        if acc.cmp_threshold(threshold) != Ordering::Less {
            return k.checked_sub(1).ok_or(Error::EmptyRange);
        }
        k += 1;
    }

    let prefix = acc.into_rational();
    let mut precision = START_PRECISION;
    loop {
        match interval_phase(family, threshold, &prefix, EXACT_TERM_LIMIT, precision)? {
            Some(n) => return Ok(n),
            None if precision >= MAX_PRECISION => {
                return Err(Error::Undecided {
                    index: EXACT_TERM_LIMIT,
                    max_bits: precision,
                })
            }
            None => precision *= 2,
        }
    }
}

/// Continues from an exact prefix sum of `start` terms. `Ok(None)` means a
/// comparison could not be decided at this precision.
fn interval_phase(
    family: &HarmonicFamily,
    threshold: &Rational,
    prefix: &Rational,
    start: u64,
    precision: u32,
) -> Result<Option<u64>> {
    let mut acc = Interval::from_rational(prefix, precision);
    let mut k = start;
    loop {
        let Some(term) = family.term(k) else {
            return Err(Error::ThresholdNeverReached { terms: k });
        };
        acc = &acc + &Interval::from_rational(&term, precision);
        match acc.cmp_rational(threshold) {
            Some(Ordering::Less) => k += 1,
            Some(_) => return Ok(Some(k - 1)),
            None => return Ok(None),
        }
    }
}

/// Running sum of rationals kept as an unreduced fraction; reduced only when the
/// denominator has doubled in size since the last reduction.
#[derive(Debug)]
struct LazySum {
    num: Integer,
    den: Integer,
    reduced_bits: u32,
}

impl Default for LazySum {
    fn default() -> Self {
        LazySum {
            num: Integer::new(),
            den: Integer::from(1),
            reduced_bits: 1,
        }
    }
}

impl LazySum {
    fn add_unit_fraction(&mut self, den: &Integer) {
        self.num *= den;
        self.num += &self.den;
        self.den *= den;
        self.maybe_reduce();
    }

    fn add(&mut self, term: &Rational) {
        self.num *= term.denom();
        self.num += Integer::from(term.numer() * &self.den);
        self.den *= term.denom();
        self.maybe_reduce();
    }

    fn maybe_reduce(&mut self) {
        if self.den.significant_bits() > 2 * self.reduced_bits + 64 {
            let g = Integer::from(self.num.gcd_ref(&self.den));
            if g != 1 {
                self.num.div_exact_mut(&g);
                self.den.div_exact_mut(&g);
            }
            self.reduced_bits = self.den.significant_bits();
        }
    }

    fn cmp_threshold(&self, threshold: &Rational) -> Ordering {
        let lhs = Integer::from(&self.num * threshold.denom());
        let rhs = Integer::from(threshold.numer() * &self.den);
        lhs.cmp(&rhs)
    }

    fn into_rational(self) -> Rational {
        Rational::from((self.num, self.den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn small_odd_harmonic_sums() {
        assert_eq!(odd_harmonic_sum(0), q(1, 1));
        assert_eq!(odd_harmonic_sum(1), q(4, 3));
        assert_eq!(odd_harmonic_sum(6), q(88069, 45045));
        assert_eq!(odd_harmonic_sum(7), q(91072, 45045));
    }

    #[test]
    fn consecutive_difference() {
        let mut prev = odd_harmonic_sum(0);
        for n in 0..200u64 {
            let next = odd_harmonic_sum(n + 1);
            let diff = Rational::from(&next - &prev);
            assert_eq!(diff, Rational::from((1, 2 * n + 3)), "n = {n}");
            prev = next;
        }
    }

    #[test]
    fn interval_sum_of_single_term_is_exact() {
        let iv = interval_odd_harmonic_sum(0, 128);
        assert!(iv.contains(&q(1, 1)));
        assert_eq!(iv.width(), 0);
    }

    #[test]
    fn interval_sum_encloses_and_is_narrow() {
        for &n in &[1u64, 2, 3, 10, 55, 300, 2000] {
            let exact = odd_harmonic_sum(n);
            for &p in &[53u32, 128, 256] {
                let iv = interval_odd_harmonic_sum(n, p);
                assert!(iv.contains(&exact), "n = {n}, P = {p}");
                let bound = rug::Float::with_val(p + 64, &exact)
                    * rug::Float::with_val(64, n + 1)
                    * rug::Float::with_val(64, rug::Float::i_exp(1, 1 - p as i32));
                assert!(iv.width() <= bound, "n = {n}, P = {p}: width {}", iv.width());
            }
        }
    }

    #[test]
    fn small_breaking_points() {
        assert_eq!(breaking_point(&HarmonicFamily::OddHarmonic, &q(2, 1)).unwrap(), 6);
        assert_eq!(breaking_point(&HarmonicFamily::OddHarmonic, &q(3, 1)).unwrap(), 55);
    }

    #[test]
    fn equality_is_not_below_threshold() {
        // sums 1/2, 1, 3/2, 2: the partial sum at n = 3 equals 2, so 2 is the answer.
        let fam = HarmonicFamily::Constant(q(1, 2));
        assert_eq!(breaking_point(&fam, &q(2, 1)).unwrap(), 2);
        assert_eq!(breaking_point(&fam, &q(21, 10)).unwrap(), 3);
    }

    #[test]
    fn finite_family_that_never_reaches() {
        let fam = HarmonicFamily::Custom(vec![q(1, 2), q(1, 3)]);
        assert_eq!(
            breaking_point(&fam, &q(5, 1)),
            Err(Error::ThresholdNeverReached { terms: 2 })
        );
    }

    #[test]
    fn first_term_already_too_large() {
        let fam = HarmonicFamily::Custom(vec![q(3, 1), q(1, 3)]);
        assert_eq!(breaking_point(&fam, &q(2, 1)), Err(Error::EmptyRange));
    }

    #[test]
    fn rejects_nonpositive_inputs() {
        assert!(breaking_point(&HarmonicFamily::OddHarmonic, &q(0, 1)).is_err());
        assert!(breaking_point(&HarmonicFamily::Constant(q(-1, 2)), &q(2, 1)).is_err());
    }

    #[test]
    fn interval_phase_handles_long_constant_family() {
        // Partial sums are (n+1)/1000; n = 19 999 gives exactly 20, just below
        // the threshold, and the exact phase hands over at 10 000 terms.
        let fam = HarmonicFamily::Constant(q(1, 1000));
        let threshold = Rational::from(20) + q(1, 3000);
        assert_eq!(breaking_point(&fam, &threshold).unwrap(), 19_999);
    }
}
