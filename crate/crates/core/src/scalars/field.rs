//! Exact arithmetic in the field Q(i, √2).
//!
//! An element is `a + b·√2 + c·i + d·i·√2` with rational components.
//! `num_rational::BigRational` keeps every component in lowest terms with a
//! positive denominator, so structural equality is field equality.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct AlgebraicScalar {
    /// rational part
    pub a: BigRational,
    /// coefficient of √2
    pub b: BigRational,
    /// coefficient of i
    pub c: BigRational,
    /// coefficient of i·√2
    pub d: BigRational,
}

fn q(n: i64, m: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(m))
}

/// Multiplication in Q(√2): (x0 + x1√2)(y0 + y1√2).
fn mul_r2(
    x0: &BigRational,
    x1: &BigRational,
    y0: &BigRational,
    y1: &BigRational,
) -> (BigRational, BigRational) {
    let mut r0 = BigRational::zero();
    let mut r1 = BigRational::zero();
    if !x0.is_zero() {
        if !y0.is_zero() {
            r0 += x0 * y0;
        }
        if !y1.is_zero() {
            r1 += x0 * y1;
        }
    }
    if !x1.is_zero() {
        if !y0.is_zero() {
            r1 += x1 * y0;
        }
        if !y1.is_zero() {
            r0 += x1 * y1 * BigRational::from_integer(BigInt::from(2));
        }
    }
    (r0, r1)
}

impl AlgebraicScalar {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Self {
        Self { a, b, c, d }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(a: BigRational) -> Self {
        Self {
            a,
            ..Self::default()
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(q(n, 1))
    }

    /// The rational `n/m`. Panics when `m == 0`.
    pub fn frac(n: i64, m: i64) -> Self {
        Self::from_rational(q(n, m))
    }

    pub fn sqrt2() -> Self {
        Self {
            b: BigRational::one(),
            ..Self::default()
        }
    }

    pub fn i() -> Self {
        Self {
            c: BigRational::one(),
            ..Self::default()
        }
    }

    /// `1/√2 = √2/2`
    pub fn inv_sqrt2() -> Self {
        Self {
            b: q(1, 2),
            ..Self::default()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    /// Returns the rational value when the element lies in Q.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.a)
    }

    /// Complex conjugation `i -> -i`.
    pub fn conj_i(&self) -> Self {
        Self {
            a: self.a.clone(),
            b: self.b.clone(),
            c: -&self.c,
            d: -&self.d,
        }
    }

    /// Galois conjugation `√2 -> -√2`.
    pub fn conj_r2(&self) -> Self {
        Self {
            a: self.a.clone(),
            b: -&self.b,
            c: self.c.clone(),
            d: -&self.d,
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // x = u + v i with u, v in Q(√2); 1/x = (u - v i) / (u² + v²).
        let (u0, u1) = (&self.a, &self.b);
        let (v0, v1) = (&self.c, &self.d);
        let (uu0, uu1) = mul_r2(u0, u1, u0, u1);
        let (vv0, vv1) = mul_r2(v0, v1, v0, v1);
        let n0 = uu0 + vv0;
        let n1 = uu1 + vv1;
        // 1/(n0 + n1√2) = (n0 - n1√2)/(n0² - 2 n1²)
        let norm = &n0 * &n0 - &n1 * &n1 * BigRational::from_integer(BigInt::from(2));
        if norm.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let m0 = &n0 / &norm;
        let m1 = -(&n1 / &norm);
        let (a, b) = mul_r2(u0, u1, &m0, &m1);
        let (c, d) = mul_r2(&(-v0), &(-v1), &m0, &m1);
        Ok(Self { a, b, c, d })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Square root inside the field, when one exists among `±r`, `±r·i`,
    /// `r·√2`-type candidates for rational input. Non-rational input is
    /// not supported and yields `None`.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        let r = self.as_rational()?;
        let candidates = [
            (r.clone(), Self::one()),
            (-r.clone(), Self::i()),
            // x = s/√2 with s² = 2r
            (r * BigRational::from_integer(BigInt::from(2)), Self::inv_sqrt2()),
            (
                -r * BigRational::from_integer(BigInt::from(2)),
                &Self::inv_sqrt2() * &Self::i(),
            ),
        ];
        for (radicand, unit) in candidates {
            if let Some(s) = rational_sqrt(&radicand) {
                let root = &Self::from_rational(s) * &unit;
                debug_assert_eq!(&(&root * &root), self);
                return Some(root);
            }
        }
        None
    }
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| BigRational::new(n, d))
}

impl From<i64> for AlgebraicScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigRational> for AlgebraicScalar {
    fn from(r: BigRational) -> Self {
        Self::from_rational(r)
    }
}

impl<'a> Add<&'a AlgebraicScalar> for &'a AlgebraicScalar {
    type Output = AlgebraicScalar;
    fn add(self, rhs: &AlgebraicScalar) -> AlgebraicScalar {
        AlgebraicScalar {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
            c: &self.c + &rhs.c,
            d: &self.d + &rhs.d,
        }
    }
}

impl<'a> Sub<&'a AlgebraicScalar> for &'a AlgebraicScalar {
    type Output = AlgebraicScalar;
    fn sub(self, rhs: &AlgebraicScalar) -> AlgebraicScalar {
        AlgebraicScalar {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
            c: &self.c - &rhs.c,
            d: &self.d - &rhs.d,
        }
    }
}

impl<'a> Mul<&'a AlgebraicScalar> for &'a AlgebraicScalar {
    type Output = AlgebraicScalar;
    fn mul(self, rhs: &AlgebraicScalar) -> AlgebraicScalar {
        // (u + v i)(w + x i) = (uw - vx) + (ux + vw) i over Q(√2)
        if self.is_rational() && rhs.is_rational() {
            return AlgebraicScalar::from_rational(&self.a * &rhs.a);
        }
        let (uw0, uw1) = mul_r2(&self.a, &self.b, &rhs.a, &rhs.b);
        let (vx0, vx1) = mul_r2(&self.c, &self.d, &rhs.c, &rhs.d);
        let (ux0, ux1) = mul_r2(&self.a, &self.b, &rhs.c, &rhs.d);
        let (vw0, vw1) = mul_r2(&self.c, &self.d, &rhs.a, &rhs.b);
        AlgebraicScalar {
            a: uw0 - vx0,
            b: uw1 - vx1,
            c: ux0 + vw0,
            d: ux1 + vw1,
        }
    }
}

impl<'a> Neg for &'a AlgebraicScalar {
    type Output = AlgebraicScalar;
    fn neg(self) -> AlgebraicScalar {
        AlgebraicScalar {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }
}

impl Neg for AlgebraicScalar {
    type Output = AlgebraicScalar;
    fn neg(self) -> AlgebraicScalar {
        -&self
    }
}

impl Add for AlgebraicScalar {
    type Output = AlgebraicScalar;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl Sub for AlgebraicScalar {
    type Output = AlgebraicScalar;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl Mul for AlgebraicScalar {
    type Output = AlgebraicScalar;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

/// Panics on division by zero; use [`AlgebraicScalar::checked_div`] for a `Result`.
impl Div for AlgebraicScalar {
    type Output = AlgebraicScalar;
    fn div(self, rhs: Self) -> Self {
        self.checked_div(&rhs).expect("division by zero")
    }
}

impl AddAssign<&AlgebraicScalar> for AlgebraicScalar {
    fn add_assign(&mut self, rhs: &AlgebraicScalar) {
        self.a += &rhs.a;
        self.b += &rhs.b;
        self.c += &rhs.c;
        self.d += &rhs.d;
    }
}

impl SubAssign<&AlgebraicScalar> for AlgebraicScalar {
    fn sub_assign(&mut self, rhs: &AlgebraicScalar) {
        self.a -= &rhs.a;
        self.b -= &rhs.b;
        self.c -= &rhs.c;
        self.d -= &rhs.d;
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for AlgebraicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts = [
            (&self.a, ""),
            (&self.b, "r2"),
            (&self.c, "i"),
            (&self.d, "i*r2"),
        ];
        let mut first = true;
        for (coeff, unit) in parts {
            if coeff.is_zero() {
                continue;
            }
            let negative = coeff.is_negative();
            let magnitude = coeff.abs();
            let body = match (unit.is_empty(), magnitude.is_one()) {
                (true, _) => fmt_rational(&magnitude),
                (false, true) => unit.to_string(),
                (false, false) => format!("{}*{}", fmt_rational(&magnitude), unit),
            };
            match (first, negative) {
                (true, false) => f.write_str(&body)?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for AlgebraicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgebraicScalar({self})")
    }
}

fn parse_err(input: &str, reason: &str) -> Error {
    Error::ScalarParse {
        input: input.to_string(),
        reason: reason.to_string(),
    }
}

fn parse_factor(input: &str, token: &str) -> Result<AlgebraicScalar> {
    match token {
        "r2" => Ok(AlgebraicScalar::sqrt2()),
        "i" => Ok(AlgebraicScalar::i()),
        _ => {
            let (num, den) = match token.split_once('/') {
                Some((n, d)) => (n, d),
                None => (token, "1"),
            };
            let num: BigInt = num
                .parse()
                .map_err(|_| parse_err(input, &format!("bad numerator `{num}`")))?;
            let den: BigInt = den
                .parse()
                .map_err(|_| parse_err(input, &format!("bad denominator `{den}`")))?;
            if den.is_zero() {
                return Err(parse_err(input, "zero denominator"));
            }
            Ok(AlgebraicScalar::from_rational(BigRational::new(num, den)))
        }
    }
}

impl FromStr for AlgebraicScalar {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(parse_err(input, "empty"));
        }
        // split into signed terms; a sign directly after '/' or '*' is not a separator
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut negative = false;
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && !current.ends_with(['/', '*']) {
                if !current.is_empty() {
                    terms.push((negative, std::mem::take(&mut current)));
                } else if !terms.is_empty() || negative {
                    return Err(parse_err(input, "dangling sign"));
                }
                negative = ch == '-';
            } else {
                current.push(ch);
            }
        }
        if current.is_empty() {
            return Err(parse_err(input, "trailing sign"));
        }
        terms.push((negative, current));

        let mut total = AlgebraicScalar::zero();
        for (neg, term) in terms {
            let mut value = AlgebraicScalar::one();
            for token in term.split('*') {
                if token.is_empty() {
                    return Err(parse_err(input, "empty factor"));
                }
                value = &value * &parse_factor(input, token)?;
            }
            if neg {
                total -= &value;
            } else {
                total += &value;
            }
        }
        Ok(total)
    }
}

impl serde::Serialize for AlgebraicScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> AlgebraicScalar {
        text.parse().unwrap()
    }

    #[test]
    fn inv_sqrt2_squared_is_half() {
        let x = AlgebraicScalar::inv_sqrt2();
        assert_eq!(&x * &x, AlgebraicScalar::frac(1, 2));
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = AlgebraicScalar::i();
        assert_eq!(&i * &i, AlgebraicScalar::from_int(-1));
    }

    #[test]
    fn one_plus_i_over_one_minus_i() {
        let num = s("1 + i");
        let den = s("1 - i");
        let quotient = num.checked_div(&den).unwrap();
        assert_eq!(quotient, AlgebraicScalar::i());
        assert_eq!(&quotient * &den, num);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(
            AlgebraicScalar::one().checked_div(&AlgebraicScalar::zero()),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn text_encoding() {
        assert_eq!(s("1/2 + 1/2*r2").to_string(), "1/2 + 1/2*r2");
        assert_eq!(s("-1/2*i*r2").to_string(), "-1/2*i*r2");
        assert_eq!(s("2/4").to_string(), "1/2");
        assert_eq!(s("r2*i").to_string(), "i*r2");
        assert_eq!(s("1*r2").to_string(), "r2");
        assert_eq!(s("-1/-2").to_string(), "1/2");
        assert_eq!(s("3 - i").to_string(), "3 - i");
        assert_eq!(AlgebraicScalar::zero().to_string(), "0");
        assert!("1/0".parse::<AlgebraicScalar>().is_err());
        assert!("1 +".parse::<AlgebraicScalar>().is_err());
        assert!("x".parse::<AlgebraicScalar>().is_err());
    }

    #[test]
    fn sqrt_of_rationals() {
        assert_eq!(s("1/4").sqrt(), Some(s("1/2")));
        assert_eq!(s("-1").sqrt(), Some(s("i")));
        assert_eq!(s("1/2").sqrt(), Some(s("1/2*r2")));
        assert_eq!(s("3").sqrt(), None);
    }
}
