use borwein::engine::{
    edge_polynomial, fourier_spline, integral_exact, point_eval_pruned, transform_value, EngineConfig,
    SincProductSpec, DEFAULT_NODE_BUDGET,
};
use borwein::exact::{factorial, Rational};
use borwein::spline::JumpConvention;
use proptest::prelude::*;
use rug::ops::Pow;

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

/// Sum over all sign vectors of `prod(eps) (S_eps - x)_+^n / (n! 2^n prod beta)`,
/// with no pruning and no lattice scaling; `(0)_+^0` counts `1/2`.
fn brute_force(betas: &[Rational], x: &Rational) -> Rational {
    let n = betas.len() as u32 - 1;
    let mut total = Rational::new();
    for mask in 0u32..(1 << betas.len()) {
        let mut s = Rational::new();
        let mut sign = 1i32;
        for (k, b) in betas.iter().enumerate() {
            if mask & (1 << k) == 0 {
                s += b;
            } else {
                s -= b;
                sign = -sign;
            }
        }
        let gap = s - x;
        let term = if gap < 0 {
            Rational::new()
        } else if n == 0 {
            if gap == 0 { q(1, 2) } else { q(1, 1) }
        } else {
            gap.pow(n)
        };
        if sign > 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    let product = betas.iter().fold(Rational::from(1), |acc, b| acc * b);
    total / (Rational::from(factorial(n)) * Rational::from(1u32 << n) * product)
}

fn beta() -> impl Strategy<Value = Rational> {
    (1i64..=3, 1i64..=9).prop_map(|(n, d)| q(n, d))
}

fn spec() -> impl Strategy<Value = SincProductSpec> {
    prop::collection::vec(beta(), 1..=11).prop_map(|b| SincProductSpec::new(b).unwrap())
}

fn point() -> impl Strategy<Value = Rational> {
    (-60i64..=60, 1i64..=12).prop_map(|(n, d)| q(n, d))
}

fn spline(spec: &SincProductSpec) -> borwein::spline::PiecewisePolynomial {
    fourier_spline(spec, 1 << 20).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn normalization(s in spec()) {
        prop_assert_eq!(spline(&s).integral(), Rational::from(2));
    }

    #[test]
    fn pruned_spline_and_brute_force_agree(s in spec(), x in point()) {
        let expected = brute_force(s.betas(), &x);
        prop_assert_eq!(point_eval_pruned(&s, &x, DEFAULT_NODE_BUDGET).unwrap(), expected.clone());
        prop_assert_eq!(spline(&s).evaluate(&x, JumpConvention::HalfSum), expected);
    }

    #[test]
    fn outermost_piece_is_the_edge_polynomial(s in spec(), t in 1i64..=99) {
        let sp = spline(&s);
        let edge = edge_polynomial(&s);
        prop_assert_eq!(sp.pieces().last().unwrap(), &edge.expand());
        // A point strictly inside (valid_from, R).
        let x = (&edge.valid_from * q(100 - t, 100)) + (&edge.radius * q(t, 100));
        prop_assert_eq!(edge.eval(&x), sp.evaluate(&x, JumpConvention::HalfSum));
    }

    #[test]
    fn poisson_consistency(rest in prop::collection::vec(beta(), 0..=6), unit in 1i64..=2) {
        let mut betas = rest;
        betas.push(q(unit, 1));
        let s = SincProductSpec::new(betas).unwrap();
        let sp = spline(&s);
        let radius = s.support_radius();
        let mut even = sp.evaluate(&Rational::new(), JumpConvention::HalfSum);
        let mut odd = Rational::new();
        let mut k = 1u32;
        while k <= radius {
            let f = sp.evaluate(&Rational::from(k), JumpConvention::HalfSum) * 2u32;
            if k.is_multiple_of(2) { even += f } else { odd += f }
            k += 1;
        }
        prop_assert_eq!(even, Rational::from(1));
        prop_assert_eq!(odd, Rational::from(1));
    }

    #[test]
    fn scaling_covariance(s in spec(), lambda in beta(), x in point()) {
        let scaled = s.scaled(&lambda).unwrap();
        let config = EngineConfig::default();
        let lhs = transform_value(&scaled, &x, &config).unwrap();
        let inner = Rational::from(&x / &lambda);
        let rhs = transform_value(&s, &inner, &config).unwrap() / &lambda;
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn odd_harmonic_deficit_is_monotone() {
    let config = EngineConfig::default();
    let deficits: Vec<Rational> = (0..=16)
        .map(|n| {
            let r = integral_exact(&SincProductSpec::odd_harmonic(n), &config).unwrap();
            r.deficit.unwrap()
        })
        .collect();
    for (n, d) in deficits.iter().enumerate() {
        if n <= 6 {
            assert_eq!(*d, 0, "n = {n}");
        } else {
            assert!(*d > deficits[n - 1], "n = {n}");
        }
    }
}

#[test]
fn brute_force_base_cases() {
    // Single box of height 1/beta; two unit boxes give the triangle with F(0) = 1.
    assert_eq!(brute_force(&[q(1, 2)], &q(0, 1)), q(2, 1));
    assert_eq!(brute_force(&[q(1, 2)], &q(1, 2)), q(1, 1));
    assert_eq!(brute_force(&[q(1, 1), q(1, 1)], &q(0, 1)), q(1, 1));
    assert_eq!(brute_force(&[q(1, 1), q(1, 1)], &q(1, 1)), q(1, 2));
}
