//! Truncated formal power series in the deformation parameter `z`.

use std::collections::BTreeMap;
use std::fmt;

use super::AlgebraicScalar;
use crate::error::{Error, Result};

/// `Σ_{k ≤ K} c_k z^k` with coefficients in Q(i, √2).
///
/// Zero coefficients are never stored and nothing lives above the
/// truncation order, so derived equality is series equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ZSeries {
    truncation: u32,
    coeffs: BTreeMap<u32, AlgebraicScalar>,
}

/// Reference series shapes used for closed-form recognition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SeriesPattern {
    /// `exp(rate·z)`
    Exp,
    /// `sinh(rate·z)/(rate·z)`
    SinhOverArg,
    /// `cosh(rate·z)`
    Cosh,
    /// the constant `rate`
    Poly,
}

impl SeriesPattern {
    pub fn name(self) -> &'static str {
        match self {
            SeriesPattern::Exp => "exp",
            SeriesPattern::SinhOverArg => "sinh_over_arg",
            SeriesPattern::Cosh => "cosh",
            SeriesPattern::Poly => "poly",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "exp" => Ok(SeriesPattern::Exp),
            "sinh_over_arg" => Ok(SeriesPattern::SinhOverArg),
            "cosh" => Ok(SeriesPattern::Cosh),
            "poly" | "polynomial" => Ok(SeriesPattern::Poly),
            other => Err(Error::UnknownPattern(other.to_string())),
        }
    }
}

fn factorial(n: u32) -> AlgebraicScalar {
    let mut acc = num_bigint::BigInt::from(1);
    for k in 2..=n {
        acc *= k;
    }
    AlgebraicScalar::from_rational(num_rational::BigRational::from_integer(acc))
}

impl ZSeries {
    pub fn zero(truncation: u32) -> Self {
        Self {
            truncation,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(value: AlgebraicScalar, truncation: u32) -> Self {
        Self::monomial(value, 0, truncation)
    }

    pub fn one(truncation: u32) -> Self {
        Self::constant(AlgebraicScalar::one(), truncation)
    }

    /// `value · z^order`, or zero when `order` exceeds the truncation.
    pub fn monomial(value: AlgebraicScalar, order: u32, truncation: u32) -> Self {
        let mut s = Self::zero(truncation);
        s.add_term(order, &value);
        s
    }

    pub fn from_coeffs<I>(coeffs: I, truncation: u32) -> Self
    where
        I: IntoIterator<Item = (u32, AlgebraicScalar)>,
    {
        let mut s = Self::zero(truncation);
        for (k, c) in coeffs {
            s.add_term(k, &c);
        }
        s
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, order: u32) -> AlgebraicScalar {
        self.coeffs.get(&order).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &AlgebraicScalar)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn min_order(&self) -> Option<u32> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_order(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn add_term(&mut self, order: u32, value: &AlgebraicScalar) {
        if order > self.truncation || value.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(order).or_default();
        *slot += value;
        if slot.is_zero() {
            self.coeffs.remove(&order);
        }
    }

    /// Lowers the truncation order, discarding higher coefficients.
    pub fn truncate(&self, truncation: u32) -> Self {
        let t = truncation.min(self.truncation);
        Self {
            truncation: t,
            coeffs: self.coeffs.range(..=t).map(|(k, c)| (*k, c.clone())).collect(),
        }
    }

    /// Keeps only the coefficient of `z^order`.
    pub fn part(&self, order: u32) -> Self {
        Self::monomial(self.coeff(order), order, self.truncation)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.truncate(other.truncation);
        for (k, c) in other.terms() {
            out.add_term(k, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            truncation: self.truncation,
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    pub fn scale(&self, factor: &AlgebraicScalar) -> Self {
        let mut out = Self::zero(self.truncation);
        for (k, c) in self.terms() {
            out.add_term(k, &(c * factor));
        }
        out
    }

    /// Multiplies by `z^shift`, dropping whatever moves past the truncation.
    pub fn shift(&self, shift: u32) -> Self {
        let mut out = Self::zero(self.truncation);
        for (k, c) in self.terms() {
            out.add_term(k + shift, c);
        }
        out
    }

    /// Cauchy product truncated at the smaller of the two orders.
    pub fn mul(&self, other: &Self) -> Self {
        self.mul_truncated(other, self.truncation.min(other.truncation))
    }

    /// Cauchy product truncated at `truncation`, ignoring the operands' own
    /// truncation orders. Only meaningful when the caller knows every
    /// coefficient that can reach `truncation` is present.
    pub fn mul_truncated(&self, other: &Self, truncation: u32) -> Self {
        let mut out = Self::zero(truncation);
        for (i, x) in self.terms() {
            if i > truncation {
                break;
            }
            for (j, y) in other.terms() {
                if i + j > truncation {
                    break;
                }
                out.add_term(i + j, &(x * y));
            }
        }
        out
    }

    /// Same coefficients under a different truncation order. Raising the
    /// order asserts that the missing coefficients are zero.
    pub fn with_truncation(&self, truncation: u32) -> Self {
        Self {
            truncation,
            coeffs: self
                .coeffs
                .range(..=truncation)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    /// Taylor truncation of one of the reference shapes.
    pub fn pattern(pattern: SeriesPattern, rate: &AlgebraicScalar, truncation: u32) -> Self {
        let mut out = Self::zero(truncation);
        match pattern {
            SeriesPattern::Exp => {
                for k in 0..=truncation {
                    let c = rate.pow(k).checked_div(&factorial(k)).expect("k! != 0");
                    out.add_term(k, &c);
                }
            }
            SeriesPattern::SinhOverArg | SeriesPattern::Cosh => {
                let offset = u32::from(pattern == SeriesPattern::SinhOverArg);
                for k in (0..=truncation).step_by(2) {
                    let c = rate
                        .pow(k)
                        .checked_div(&factorial(k + offset))
                        .expect("k! != 0");
                    out.add_term(k, &c);
                }
            }
            SeriesPattern::Poly => out.add_term(0, rate),
        }
        out
    }

    pub fn eval_pattern(name: &str, rate: &AlgebraicScalar, truncation: u32) -> Result<Self> {
        Ok(Self::pattern(SeriesPattern::from_name(name)?, rate, truncation))
    }
}

impl fmt::Display for ZSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (k, c)) in self.terms().enumerate() {
            if idx > 0 {
                f.write_str(" + ")?;
            }
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c}) z")?,
                _ => write!(f, "({c}) z^{k}")?,
            }
        }
        Ok(())
    }
}
