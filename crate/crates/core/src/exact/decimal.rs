use rug::ops::Pow;
use rug::{Integer, Rational};

/// Correctly rounded decimal rendering with `significant_digits` digits,
/// ties broken to even.
///
/// Trailing zeros are dropped. Magnitudes in `[1e-4, 10^digits)` are written in
/// positional form (`"1.9551"`), everything else in exponent form
/// (`"1.484870809e-138"`).
pub fn to_decimal(value: &Rational, significant_digits: usize) -> String {
    assert!(significant_digits >= 1, "need at least one significant digit");
    if *value == 0 {
        return "0".to_string();
    }
    let negative = *value < 0;
    let magnitude = Rational::from(value.abs_ref());
    let digits = significant_digits as i64;

    let mut exponent = estimate_log10(&magnitude);
    while pow10(exponent) > magnitude {
        exponent -= 1;
    }
    while pow10(exponent + 1) <= magnitude {
        exponent += 1;
    }

    let scaled = magnitude * pow10(digits - 1 - exponent);
    let mut mantissa = round_half_even(&scaled);
    let limit = Integer::from(10).pow(significant_digits as u32);
    if mantissa >= limit {
        mantissa /= 10;
        exponent += 1;
    }

    let text = mantissa.to_string();
    let trimmed = text.trim_end_matches('0');
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if exponent < -4 || exponent >= digits {
        out.push_str(&trimmed[..1]);
        if trimmed.len() > 1 {
            out.push('.');
            out.push_str(&trimmed[1..]);
        }
        out.push_str(&format!("e{exponent}"));
    } else if exponent >= 0 {
        let int_len = exponent as usize + 1;
        if trimmed.len() <= int_len {
            out.push_str(trimmed);
            out.extend(std::iter::repeat_n('0', int_len - trimmed.len()));
        } else {
            out.push_str(&trimmed[..int_len]);
            out.push('.');
            out.push_str(&trimmed[int_len..]);
        }
    } else {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-exponent - 1) as usize));
        out.push_str(trimmed);
    }
    out
}

fn pow10(exponent: i64) -> Rational {
    let power = Integer::from(10).pow(exponent.unsigned_abs() as u32);
    if exponent >= 0 {
        Rational::from(power)
    } else {
        Rational::from((Integer::from(1), power))
    }
}

fn estimate_log10(positive: &Rational) -> i64 {
    let bits = positive.numer().significant_bits() as f64 - positive.denom().significant_bits() as f64;
    (bits * std::f64::consts::LOG10_2).floor() as i64
}

fn round_half_even(positive: &Rational) -> Integer {
    let (quotient, remainder) = positive.numer().clone().div_rem_floor(positive.denom().clone());
    let twice = remainder * 2u32;
    match twice.cmp(positive.denom()) {
        std::cmp::Ordering::Less => quotient,
        std::cmp::Ordering::Greater => quotient + 1u32,
        std::cmp::Ordering::Equal => {
            if quotient.is_even() {
                quotient
            } else {
                quotient + 1u32
            }
        }
    }
}
