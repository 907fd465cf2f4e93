//! Single-point evaluation of the transform by signed subset sums, and the
//! closed form on the outermost piece.

use rug::ops::Pow;
use rug::{Integer, Rational};

use super::spec::SincProductSpec;
use crate::error::{Error, Result};
use crate::exact::factorial;
use crate::spline::Polynomial;

/// Default cap on visited enumeration nodes.
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

/// `C = 1 / (n! * 2^n * prod_k beta_k)`, the common factor of every term.
pub fn leading_constant(spec: &SincProductSpec) -> Rational {
    let n = spec.degree();
    let denom = Rational::from(factorial(n) << n) * spec.beta_product();
    denom.recip()
}

/// Exact `F(x)` as `C * sum (-1)^{#minus} (s_eps - x)^n` over sign vectors whose
/// signed sum `s_eps` exceeds `|x|`.
///
/// Scales are visited in descending order and a branch is dropped as soon as
/// its largest reachable signed sum cannot exceed `x`. With a single factor a
/// signed sum equal to `x` counts with weight `1/2`.
pub fn point_eval_pruned(spec: &SincProductSpec, x: &Rational, node_budget: u64) -> Result<Rational> {
    // Signed sums live on the lattice (1/L)Z, so the walk runs on integers.
    let x = Rational::from(x.abs_ref());
    let scale = spec.common_denominator().lcm(x.denom());
    let target = x.numer() * Integer::from(&scale / x.denom());
    let n = spec.degree();
    let mut betas: Vec<Integer> = spec
        .betas()
        .iter()
        .map(|b| b.numer() * Integer::from(&scale / b.denom()))
        .collect();
    betas.sort_by(|a, b| b.cmp(a));
    let mut suffix = vec![Integer::new(); betas.len() + 1];
    for i in (0..betas.len()).rev() {
        suffix[i] = Integer::from(&suffix[i + 1] + &betas[i]);
    }

    let mut total = Integer::new();
    let mut half_terms = Integer::new();
    let mut visited = 0u64;
    let mut stack: Vec<(usize, Integer, bool)> = vec![(0, Integer::new(), false)];
    while let Some((depth, partial, odd)) = stack.pop() {
        visited += 1;
        if visited > node_budget {
            return Err(Error::NodeBudget {
                budget: node_budget,
                surviving: stack.len() + 1,
            });
        }
        let reach = Integer::from(&partial + &suffix[depth]);
        if reach < target || (reach == target && n > 0) {
            continue;
        }
        if depth == betas.len() {
            if partial == target {
                // Only reachable with a single factor: the half-sum at a jump.
                half_terms += if odd { -1 } else { 1 };
            } else {
                let term = (partial - &target).pow(n);
                if odd {
                    total -= term;
                } else {
                    total += term;
                }
            }
            continue;
        }
        // Minus branch pushed first so the all-plus path is explored first.
        stack.push((depth + 1, Integer::from(&partial - &betas[depth]), !odd));
        stack.push((depth + 1, partial + &betas[depth], odd));
    }
    let sum = Rational::from(total) + Rational::from((half_terms, 2));
    Ok(sum / Rational::from(scale).pow(n) * leading_constant(spec))
}

/// `F(x) = coefficient * (radius - x)^exponent` for `x` in `(valid_from, radius)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgePolynomial {
    pub coefficient: Rational,
    pub exponent: u32,
    pub radius: Rational,
    pub valid_from: Rational,
}

impl EdgePolynomial {
    pub fn eval(&self, x: &Rational) -> Rational {
        Rational::from(&self.radius - x).pow(self.exponent) * &self.coefficient
    }

    /// The same function in the monomial basis.
    pub fn expand(&self) -> Polynomial {
        Polynomial::scaled_power_of_reflection(&self.coefficient, &self.radius, self.exponent)
    }
}

/// Past `radius - 2 * min beta` only the all-plus sign vector exceeds `x`.
pub fn edge_polynomial(spec: &SincProductSpec) -> EdgePolynomial {
    let radius = spec.support_radius();
    let valid_from = &radius - Rational::from(spec.min_beta() * 2u32);
    EdgePolynomial {
        coefficient: leading_constant(spec),
        exponent: spec.degree(),
        radius,
        valid_from,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn spec(betas: &[(i64, i64)]) -> SincProductSpec {
        SincProductSpec::new(betas.iter().map(|&(n, d)| q(n, d)).collect()).unwrap()
    }

    #[test]
    fn unit_box_values() {
        let s = spec(&[(1, 1)]);
        assert_eq!(point_eval_pruned(&s, &q(1, 2), 100).unwrap(), q(1, 1));
        assert_eq!(point_eval_pruned(&s, &q(1, 1), 100).unwrap(), q(1, 2));
        assert_eq!(point_eval_pruned(&s, &q(3, 2), 100).unwrap(), q(0, 1));
        assert_eq!(point_eval_pruned(&s, &q(-1, 2), 100).unwrap(), q(1, 1));
    }

    #[test]
    fn triangle_values() {
        let s = spec(&[(1, 1), (1, 1)]);
        assert_eq!(point_eval_pruned(&s, &q(0, 1), 100).unwrap(), q(1, 1));
        assert_eq!(point_eval_pruned(&s, &q(1, 1), 100).unwrap(), q(1, 2));
        assert_eq!(point_eval_pruned(&s, &q(2, 1), 100).unwrap(), q(0, 1));
    }

    #[test]
    fn two_scale_origin() {
        let s = spec(&[(1, 1), (1, 3)]);
        assert_eq!(point_eval_pruned(&s, &q(0, 1), 100).unwrap(), q(1, 1));
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let s = SincProductSpec::odd_harmonic(30);
        match point_eval_pruned(&s, &q(0, 1), 1000) {
            Err(Error::NodeBudget { budget: 1000, surviving }) => assert!(surviving > 0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn edge_polynomial_small_cases() {
        let e = edge_polynomial(&spec(&[(1, 1)]));
        assert_eq!((e.coefficient.clone(), e.exponent, e.valid_from.clone()), (q(1, 1), 0, q(-1, 1)));

        let e = edge_polynomial(&spec(&[(1, 1), (1, 1)]));
        assert_eq!((e.coefficient.clone(), e.exponent, e.valid_from.clone()), (q(1, 2), 1, q(0, 1)));
        assert_eq!(e.eval(&q(1, 1)), q(1, 2));
    }

    #[test]
    fn edge_polynomial_matches_pruned_near_edge() {
        let s = SincProductSpec::odd_harmonic(10);
        let e = edge_polynomial(&s);
        let x = Rational::from(&e.valid_from + &e.radius) / 2u32;
        assert_eq!(e.eval(&x), point_eval_pruned(&s, &x, 1_000).unwrap());
        assert_eq!(e.expand().eval(&x), e.eval(&x));
    }
}
