use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// An exact rational number in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse {input:?} as an exact rational")]
pub struct ParseRationalError {
    input: String,
}

impl Rational {
    /// `numer / denom`; panics if `denom == 0`.
    pub fn new(numer: i64, denom: i64) -> Self {
        Rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_integer(value: i64) -> Self {
        Rational(BigRational::from_integer(value.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    /// Nearest `f64`, for display only.
    pub fn to_f64_lossy(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl From<BigRational> for Rational {
    fn from(value: BigRational) -> Self {
        Rational(value)
    }
}

impl From<i64> for Rational {
    fn from(value: i64) -> Self {
        Rational::from_integer(value)
    }
}

/// Accepts integers (`"3"`, `"-2"`), fractions (`"7/4"`) and finite
/// decimals (`"1.25"`, `".5"`), all converted exactly.
impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalError { input: s.to_owned() };
        let text = s.trim();
        if let Some((num, den)) = text.split_once('/') {
            let num: BigInt = num.trim().parse().map_err(|_| err())?;
            let den: BigInt = den.trim().parse().map_err(|_| err())?;
            if den.is_zero() {
                return Err(err());
            }
            return Ok(Rational(BigRational::new(num, den)));
        }
        let (negative, body) = match text.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, text.strip_prefix('+').unwrap_or(text)),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        let digits_ok = |d: &str| d.bytes().all(|b| b.is_ascii_digit());
        if (int_part.is_empty() && frac_part.is_empty()) || !digits_ok(int_part) || !digits_ok(frac_part)
        {
            return Err(err());
        }
        let mut digits = String::with_capacity(int_part.len() + frac_part.len());
        digits.push_str(int_part);
        digits.push_str(frac_part);
        let mut numer: BigInt = digits.parse().map_err(|_| err())?;
        if negative {
            numer = -numer;
        }
        let denom = num_traits::pow(BigInt::from(10), frac_part.len());
        Ok(Rational(BigRational::new(numer, denom)))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn add(self, rhs: &'a Rational) -> Rational {
        Rational(&self.0 + &rhs.0)
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        Rational(self.0 - rhs.0)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        Rational(self.0 * rhs.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        Rational(iter.fold(BigRational::zero(), |acc, x| acc + x.0))
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        Rational(iter.fold(BigRational::zero(), |acc, x| acc + &x.0))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct RationalVisitor;

        impl Visitor<'_> for RationalVisitor {
            type Value = Rational;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a decimal / fraction string")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
                v.parse().map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rational, E> {
                Ok(Rational::from_integer(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rational, E> {
                Ok(Rational(BigRational::from_integer(v.into())))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Rational, E> {
                Err(E::custom(format!(
                    "binary float {v} is not accepted; quote the weight as a decimal string"
                )))
            }
        }

        deserializer.deserialize_any(RationalVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn parsing() {
        assert_eq!(r("3"), Rational::from_integer(3));
        assert_eq!(r("-2"), Rational::from_integer(-2));
        assert_eq!(r("7/4"), Rational::new(7, 4));
        assert_eq!(r("14/8"), Rational::new(7, 4));
        assert_eq!(r("1.25"), Rational::new(5, 4));
        assert_eq!(r(".5"), Rational::new(1, 2));
        assert_eq!(r("-0.1"), Rational::new(-1, 10));
        assert_eq!(r("0.1") + r("0.2"), r("0.3"));
        for bad in ["", ".", "1/0", "abc", "1.2.3", "1e3", "--1"] {
            assert!(bad.parse::<Rational>().is_err(), "{bad}");
        }
    }

    #[test]
    fn display_is_canonical() {
        assert_eq!(r("2").to_string(), "2");
        assert_eq!(r("6/8").to_string(), "3/4");
        assert_eq!(r("1.50").to_string(), "3/2");
    }

    #[test]
    fn serde_forms() {
        let x: Rational = serde_json::from_str("\"7/4\"").unwrap();
        assert_eq!(x, Rational::new(7, 4));
        let y: Rational = serde_json::from_str("3").unwrap();
        assert_eq!(y, Rational::from_integer(3));
        assert!(serde_json::from_str::<Rational>("0.5").is_err());
        assert_eq!(serde_json::to_string(&Rational::new(3, 2)).unwrap(), "\"3/2\"");
    }

    #[test]
    fn ordering_and_sum() {
        assert!(Rational::new(7, 4) < Rational::from_integer(2));
        let total: Rational = [r("1/3"), r("1/3"), r("1/3")].iter().sum();
        assert_eq!(total, Rational::one());
    }
}
