use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::exact::{is_positive_integer, HarmonicFamily};

/// The scales `beta_0, ..., beta_n` of `f(t) = prod_k sinc(beta_k * pi * t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SincProductSpec {
    betas: Vec<Rational>,
}

impl SincProductSpec {
    pub fn new(betas: Vec<Rational>) -> Result<Self> {
        if betas.is_empty() {
            return Err(Error::InvalidInput("a sinc product needs at least one factor".into()));
        }
        if betas.iter().any(|b| *b <= 0) {
            return Err(Error::InvalidInput("scale factors must be strictly positive".into()));
        }
        Ok(SincProductSpec { betas })
    }

    /// `beta_k = 1/(2k+1)` for `k = 0..=n`.
    pub fn odd_harmonic(n: u64) -> Self {
        SincProductSpec {
            betas: HarmonicFamily::OddHarmonic.scales(n + 1),
        }
    }

    /// `count` copies of `beta`.
    pub fn constant(beta: Rational, count: usize) -> Result<Self> {
        Self::new(vec![beta; count])
    }

    pub fn betas(&self) -> &[Rational] {
        &self.betas
    }

    pub fn factor_count(&self) -> usize {
        self.betas.len()
    }

    /// Polynomial degree `n` of the transform pieces: one less than the factor count.
    pub fn degree(&self) -> u32 {
        u32::try_from(self.betas.len() - 1).expect("factor count fits in u32")
    }

    /// `sum_k beta_k`; the transform vanishes for `|x|` beyond it.
    pub fn support_radius(&self) -> Rational {
        self.betas.iter().fold(Rational::new(), |acc, b| acc + b)
    }

    pub fn min_beta(&self) -> &Rational {
        self.betas.iter().min().expect("nonempty")
    }

    pub fn beta_product(&self) -> Rational {
        self.betas.iter().fold(Rational::from(1), |acc, b| acc * b)
    }

    /// True when some factor is `sinc(j * pi * t)` with `j` a positive
    /// integer, so `f` vanishes at every nonzero integer.
    pub fn has_unit_factor(&self) -> bool {
        self.betas.iter().any(is_positive_integer)
    }

    /// Least common multiple of the scale denominators.
    pub(crate) fn common_denominator(&self) -> Integer {
        self.betas
            .iter()
            .fold(Integer::from(1), |acc, b| acc.lcm(b.denom()))
    }

    /// `{beta_k * lambda}`.
    pub fn scaled(&self, lambda: &Rational) -> Result<Self> {
        Self::new(self.betas.iter().map(|b| Rational::from(b * lambda)).collect())
    }
}

/// The weight `W(t) = 2 * sum_{k=0}^{m} cos((2k+1) * pi * t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CosineWeightSpec {
    pub m: u64,
}

impl CosineWeightSpec {
    pub fn new(m: u64) -> Self {
        CosineWeightSpec { m }
    }

    /// From the number of cosine terms `m + 1`.
    pub fn from_count(count: u64) -> Result<Self> {
        count
            .checked_sub(1)
            .map(Self::new)
            .ok_or_else(|| Error::InvalidInput("a cosine weight needs at least one term".into()))
    }

    pub fn count(&self) -> u64 {
        self.m + 1
    }

    /// The odd multipliers `1, 3, ..., 2m+1`.
    pub fn multipliers(&self) -> impl Iterator<Item = u64> {
        (0..=self.m).map(|k| 2 * k + 1)
    }
}
