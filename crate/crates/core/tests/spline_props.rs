use borwein::exact::Rational;
use borwein::spline::{JumpConvention, PiecewisePolynomial, Polynomial};
use proptest::prelude::*;

const CAP: usize = 1 << 20;

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

fn halfwidth() -> impl Strategy<Value = Rational> {
    (1i64..=4, 1i64..=6).prop_map(|(n, d)| q(n, d))
}

/// A box followed by up to four box convolutions, plus the halfwidths used.
fn box_chain() -> impl Strategy<Value = (PiecewisePolynomial, Vec<Rational>)> {
    prop::collection::vec(halfwidth(), 1..=5).prop_map(|hs| {
        let mut s = PiecewisePolynomial::box_function(&hs[0]).unwrap();
        for h in &hs[1..] {
            s = s.convolve_with_box(h, CAP).unwrap();
        }
        (s, hs)
    })
}

/// A spline with random polynomial pieces on random breakpoints.
fn random_spline() -> impl Strategy<Value = PiecewisePolynomial> {
    (1usize..=4, 0usize..=3).prop_flat_map(|(pieces, degree)| {
        (
            prop::collection::vec(1i64..=5, pieces),
            prop::collection::vec(prop::collection::vec(-6i64..=6, degree + 1), pieces),
            -4i64..=4,
        )
            .prop_map(|(gaps, coeffs, start)| {
                let mut x = q(start, 1);
                let mut breakpoints = vec![x.clone()];
                for g in gaps {
                    x += q(g, 2);
                    breakpoints.push(x.clone());
                }
                let pieces = coeffs
                    .into_iter()
                    .map(|cs| Polynomial::new(cs.into_iter().map(|c| q(c, 3)).collect()))
                    .collect();
                PiecewisePolynomial::new(breakpoints, pieces).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn support_grows_by_the_box((s, _) in box_chain(), h in halfwidth()) {
        let c = s.convolve_with_box(&h, CAP).unwrap();
        let (lo, hi) = s.support().unwrap();
        let (clo, chi) = c.support().unwrap();
        prop_assert_eq!(clo.clone(), Rational::from(lo - &h));
        prop_assert_eq!(chi.clone(), Rational::from(hi + &h));
    }

    #[test]
    fn degree_rises_by_one(s in random_spline(), h in halfwidth()) {
        prop_assume!(!s.is_zero());
        let c = s.convolve_with_box(&h, CAP).unwrap();
        prop_assert_eq!(c.degree(), s.degree().map(|d| d + 1));
    }

    #[test]
    fn mass_scales_by_box_width(s in random_spline(), h in halfwidth()) {
        let c = s.convolve_with_box(&h, CAP).unwrap();
        prop_assert_eq!(c.integral(), s.integral() * Rational::from(&h * 2u32));
    }

    #[test]
    fn box_chains_stay_even((s, _) in box_chain(), n in -40i64..=40, d in 1i64..=7) {
        let x = q(n, d);
        let y = Rational::from(-&x);
        prop_assert_eq!(
            s.evaluate(&x, JumpConvention::HalfSum),
            s.evaluate(&y, JumpConvention::HalfSum)
        );
    }

    #[test]
    fn box_chain_smoothness((s, hs) in box_chain()) {
        prop_assert!(s.smoothness_order() >= hs.len() as i64 - 2);
    }

    #[test]
    fn convolution_gains_smoothness(s in random_spline(), h in halfwidth()) {
        prop_assume!(!s.is_zero());
        let c = s.convolve_with_box(&h, CAP).unwrap();
        prop_assert!(c.smoothness_order() > s.smoothness_order());
    }

    #[test]
    fn derivative_inverts_antiderivative(s in random_spline()) {
        prop_assert_eq!(s.antiderivative().differentiate(), s);
    }

    #[test]
    fn csv_round_trip(s in random_spline()) {
        prop_assert_eq!(PiecewisePolynomial::from_csv(&s.to_csv()).unwrap(), s);
    }

    #[test]
    fn convolution_matches_pointwise_box_average(
        s in random_spline(),
        h in halfwidth(),
        n in -30i64..=30,
    ) {
        // (s * box_h)(x) = G(x + h) - G(x - h), G the running integral of s.
        prop_assume!(!s.is_zero());
        let x = q(n, 4);
        let g = s.antiderivative();
        let (lo, hi) = s.support().unwrap();
        let at = |t: Rational| {
            if t <= *lo {
                Rational::new()
            } else if t >= *hi {
                s.integral()
            } else {
                g.evaluate(&t, JumpConvention::HalfSum)
            }
        };
        let expected = at(Rational::from(&x + &h)) - at(Rational::from(&x - &h));
        let c = s.convolve_with_box(&h, CAP).unwrap();
        prop_assert_eq!(c.evaluate(&x, JumpConvention::HalfSum), expected);
    }
}
