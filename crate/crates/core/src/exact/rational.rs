//! Helpers around the GMP-backed [`Rational`], which is kept in lowest terms
//! with a positive denominator by construction.

use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// Parses `"p/q"` or a bare integer. Whitespace around the value is ignored.
pub fn parse_rational(input: &str) -> Result<Rational> {
    let trimmed = input.trim();
    let err = || Error::Parse {
        what: "rational",
        input: input.to_string(),
    };
    if trimmed.is_empty() {
        return Err(err());
    }
    match trimmed.split_once('/') {
        Some((num, den)) => {
            let num: Integer = num.trim().parse().map_err(|_| err())?;
            let den: Integer = den.trim().parse().map_err(|_| err())?;
            if den == 0 {
                return Err(err());
            }
            Ok(Rational::from((num, den)))
        }
        None => {
            let num: Integer = trimmed.parse().map_err(|_| err())?;
            Ok(Rational::from(num))
        }
    }
}

/// Parses a comma-separated list of rationals, e.g. `"1,1/3,1/5"`.
pub fn parse_rational_list(input: &str) -> Result<Vec<Rational>> {
    input.split(',').map(parse_rational).collect()
}

/// Serializes as `"p/q"`, always with an explicit denominator (`"1/1"`).
pub fn format_rational(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

pub fn is_positive_integer(value: &Rational) -> bool {
    *value.denom() == 1 && *value.numer() > 0
}

/// `n!` as an exact integer.
pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("1/3").unwrap(), Rational::from((1, 3)));
        assert_eq!(parse_rational(" 6/4 ").unwrap(), Rational::from((3, 2)));
        assert_eq!(parse_rational("-7").unwrap(), Rational::from(-7));
        assert_eq!(
            parse_rational_list("1,1/3,1/5").unwrap(),
            vec![Rational::from(1), Rational::from((1, 3)), Rational::from((1, 5))]
        );
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "1/0", "x", "1/2/3", "0.5", "1/"] {
            assert!(parse_rational(bad).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn formats_with_denominator() {
        assert_eq!(format_rational(&Rational::from(1)), "1/1");
        assert_eq!(format_rational(&Rational::from((-88069, 45045))), "-88069/45045");
    }

    #[test]
    fn factorial_small() {
        assert_eq!(factorial(0), 1);
        assert_eq!(factorial(7), 5040);
    }
}
