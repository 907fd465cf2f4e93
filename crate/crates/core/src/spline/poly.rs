use std::ops::{Add, Mul, Neg, Sub};

use rug::ops::Pow;
use rug::Rational;

/// Dense polynomial over the rationals, coefficients in ascending degree.
/// Trailing zero coefficients are never stored, so the zero polynomial is empty.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        let mut p = Polynomial { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::new(vec![c])
    }

    /// `c * (a - x)^n`, expanded in the monomial basis.
    pub fn scaled_power_of_reflection(c: &Rational, a: &Rational, n: u32) -> Self {
        // (a - x)^n = sum_j binom(n, j) a^(n-j) (-x)^j
        let mut coeffs = Vec::with_capacity(n as usize + 1);
        let mut binom = rug::Integer::from(1);
        for j in 0..=n {
            let mut term = a.clone().pow(n - j) * &binom * c;
            if j % 2 == 1 {
                term = -term;
            }
            coeffs.push(term);
            binom *= n - j;
            binom /= j + 1;
        }
        Polynomial::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| *c == 0) {
            self.coeffs.pop();
        }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| Rational::from(c * i as u32))
                .collect(),
        )
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Self {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::new());
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| Rational::from(c / (i as u32 + 1))),
        );
        Polynomial::new(coeffs)
    }

    /// `x -> p(x + h)`.
    pub fn shift(&self, h: &Rational) -> Self {
        if *h == 0 || self.coeffs.len() <= 1 {
            return self.clone();
        }
        // Horner in the shifted variable: acc <- acc * (x + h) + c.
        let mut acc: Vec<Rational> = Vec::with_capacity(self.coeffs.len());
        for c in self.coeffs.iter().rev() {
            acc.push(Rational::new());
            for i in (1..acc.len()).rev() {
                let carry = Rational::from(&acc[i] * h);
                acc[i] = &acc[i - 1] + carry;
            }
            acc[0] = Rational::from(&acc[0] * h) + c;
        }
        Polynomial::new(acc)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if *c == 0 {
            return Polynomial::zero();
        }
        Polynomial {
            coeffs: self.coeffs.iter().map(|a| Rational::from(a * c)).collect(),
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Rational::new();
        Polynomial::new(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).unwrap_or(&zero);
                    let b = rhs.coeffs.get(i).unwrap_or(&zero);
                    Rational::from(a + b)
                })
                .collect(),
        )
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| Rational::from(-c)).collect(),
        }
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![Rational::new(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += Rational::from(a * b);
            }
        }
        Polynomial::new(coeffs)
    }
}
