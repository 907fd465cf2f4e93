use borwein::exact::{
    breaking_point, format_rational, interval_odd_harmonic_sum, odd_harmonic_sum, parse_rational, to_decimal,
    HarmonicFamily, Interval, Rational,
};
use proptest::prelude::*;
use rug::ops::Pow;

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

/// Parses a `to_decimal` rendering back into an exact rational.
fn parse_decimal(text: &str) -> Rational {
    let (mantissa, exponent) = match text.split_once('e') {
        Some((m, e)) => (m, e.parse::<i32>().unwrap()),
        None => (text, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits: rug::Integer = format!("{int}{frac}").parse().unwrap();
    let shift = exponent - frac.len() as i32;
    let ten = rug::Integer::from(10);
    if shift >= 0 {
        Rational::from(digits * ten.pow(shift as u32))
    } else {
        Rational::from((digits, ten.pow((-shift) as u32)))
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn consecutive_sums_differ_by_next_term(n in 0u64..3000) {
        let diff = odd_harmonic_sum(n + 1) - odd_harmonic_sum(n);
        prop_assert_eq!(diff, q(1, 2 * n as i64 + 3));
    }

    #[test]
    fn interval_sum_encloses_exact(n in 0u64..=2000, p in 53u32..=512) {
        prop_assert!(interval_odd_harmonic_sum(n, p).contains(&odd_harmonic_sum(n)));
    }

    #[test]
    fn more_precision_never_widens(n in 0u64..=500, p in 53u32..=256, extra in 1u32..=256) {
        let coarse = interval_odd_harmonic_sum(n, p);
        let fine = interval_odd_harmonic_sum(n, p + extra);
        prop_assert!(coarse.contains_interval(&fine));
    }

    #[test]
    fn interval_ops_are_isotone(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000, p in 53u32..200) {
        let (x, y) = (q(a, b), q(c, d));
        let at = |prec: u32| {
            let ix = Interval::from_rational(&x, prec);
            let iy = Interval::from_rational(&y, prec);
            &(&(&ix + &iy) * &ix) - &iy
        };
        prop_assert!(at(p).contains_interval(&at(p + 40)));
        prop_assert!(at(p + 40).contains(&((Rational::from(&x + &y) * &x) - &y)));
    }

    #[test]
    fn decimal_is_within_half_unit(num in -10i64.pow(12)..10i64.pow(12), den in 1i64..10i64.pow(9), digits in 1usize..=15) {
        prop_assume!(num != 0);
        let value = q(num, den);
        let text = to_decimal(&value, digits);
        let back = parse_decimal(&text);
        // Half a unit in the last kept digit, relative to the magnitude.
        let err = Rational::from((back - &value).abs_ref());
        let bound = Rational::from(value.abs_ref()) * q(1, 10).pow(digits as u32 - 1) * q(1, 2);
        prop_assert!(err <= bound, "{} -> {}", value, text);
    }

    #[test]
    fn rational_text_round_trip(num in any::<i64>(), den in 1i64..i64::MAX) {
        let value = q(num, den);
        prop_assert_eq!(parse_rational(&format_rational(&value)).unwrap(), value);
    }
}

#[test]
fn breaking_points_sit_on_the_threshold_boundary() {
    for (threshold, digits_ok) in [(2u32, true), (3, true)] {
        let t = Rational::from(threshold);
        let n = breaking_point(&HarmonicFamily::OddHarmonic, &t).unwrap();
        assert!(odd_harmonic_sum(n) < t && odd_harmonic_sum(n + 1) >= t && digits_ok);
    }
    for threshold in [5u32, 7] {
        let t = Rational::from(threshold);
        let n = breaking_point(&HarmonicFamily::OddHarmonic, &t).unwrap();
        assert_eq!(interval_odd_harmonic_sum(n, 512).cmp_rational(&t), Some(std::cmp::Ordering::Less));
        assert_eq!(interval_odd_harmonic_sum(n + 1, 512).cmp_rational(&t), Some(std::cmp::Ordering::Greater));
    }
}
