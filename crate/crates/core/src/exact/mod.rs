//! Exact scalars: rationals, outward-rounded intervals, odd-harmonic partial
//! sums and breaking-point searches.

mod decimal;
mod harmonic;
mod interval;
mod rational;

pub use decimal::to_decimal;
pub use harmonic::{
    breaking_point, interval_odd_harmonic_sum, odd_harmonic_sum, HarmonicFamily, EXACT_TERM_LIMIT,
    MAX_PRECISION, START_PRECISION,
};
pub use interval::Interval;
pub use rational::{factorial, format_rational, is_positive_integer, parse_rational, parse_rational_list};
pub use rug::{Integer, Rational};
