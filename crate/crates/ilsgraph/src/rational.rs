use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::{BigInt, Sign};
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational scalar.
///
/// Always held in canonical reduced form with a positive denominator, so
/// equality and ordering are value equality and value ordering. All
/// coefficient arithmetic in this crate goes through this type; nothing is
/// ever rounded.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numerator: i64, denominator: i64) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::input("rational denominator must be nonzero"));
        }
        Ok(Rational(BigRational::new(
            BigInt::from(numerator),
            BigInt::from(denominator),
        )))
    }

    pub fn from_big(numerator: BigInt, denominator: BigInt) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::input("rational denominator must be nonzero"));
        }
        Ok(Rational(BigRational::new(numerator, denominator)))
    }

    pub fn integer(value: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(value)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Rational {
        Rational(self.0.abs())
    }

    /// Sign of the value: -1, 0, or 1.
    pub fn sgn(&self) -> i8 {
        match self.0.numer().sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Shifted sign `(1 + sgn(r)) / 2`, taking values in {0, 1/2, 1}.
    pub fn sf(&self) -> Rational {
        Rational(BigRational::new(
            BigInt::from(1 + i64::from(self.sgn())),
            BigInt::from(2),
        ))
    }

    /// Multiply by an unsigned integer (used for scaling by the domain bound).
    pub fn scaled(&self, factor: u32) -> Rational {
        Rational(&self.0 * BigRational::from_integer(BigInt::from(factor)))
    }
}

/// Sign of a rational: -1 if negative, 0 if zero, 1 if positive.
pub fn sgn(r: &Rational) -> i8 {
    r.sgn()
}

/// Shifted sign `(1 + sgn(r)) / 2`.
pub fn sf(r: &Rational) -> Rational {
    r.sf()
}

impl From<i64> for Rational {
    fn from(value: i64) -> Self {
        Rational::integer(value)
    }
}

impl From<u32> for Rational {
    fn from(value: u32) -> Self {
        Rational(BigRational::from_integer(BigInt::from(value)))
    }
}

impl Add for &Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        Rational(&self.0 + &rhs.0)
    }
}

impl Sub for &Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        Rational(&self.0 - &rhs.0)
    }
}

impl Mul for &Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        Rational(&self.0 * &rhs.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
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
        write!(f, "{self}")
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts an integer (`"-7"`), a fraction (`"3/4"`), or a finite decimal
    /// (`"-3.25"`). Every form converts exactly.
    fn from_str(s: &str) -> Result<Self> {
        let text = s.trim();
        if text.is_empty() {
            return Err(Error::input("empty number"));
        }
        if let Some((num, den)) = text.split_once('/') {
            let numerator = parse_bigint(num)?;
            let denominator = parse_bigint(den)?;
            if denominator.is_zero() {
                return Err(Error::input(format!("zero denominator in {text:?}")));
            }
            return Rational::from_big(numerator, denominator);
        }
        if let Some((whole, frac)) = text.split_once('.') {
            let negative = whole.starts_with('-');
            let whole_digits = whole.trim_start_matches(['-', '+']);
            if !whole_digits.chars().all(|c| c.is_ascii_digit())
                || !frac.chars().all(|c| c.is_ascii_digit())
                || (whole_digits.is_empty() && frac.is_empty())
            {
                return Err(Error::input(format!("malformed decimal {text:?}")));
            }
            let scale = BigInt::from(10u32).pow(frac.len() as u32);
            let whole_part = if whole_digits.is_empty() {
                BigInt::zero()
            } else {
                BigInt::from_str(whole_digits)
                    .map_err(|_| Error::input(format!("malformed decimal {text:?}")))?
            };
            let frac_part = if frac.is_empty() {
                BigInt::zero()
            } else {
                BigInt::from_str(frac)
                    .map_err(|_| Error::input(format!("malformed decimal {text:?}")))?
            };
            let mut numerator = whole_part * &scale + frac_part;
            if negative {
                numerator = -numerator;
            }
            return Rational::from_big(numerator, scale);
        }
        let value = parse_bigint(text)?;
        Ok(Rational(BigRational::from_integer(value)))
    }
}

fn parse_bigint(s: &str) -> Result<BigInt> {
    let text = s.trim();
    BigInt::from_str(text).map_err(|_| Error::input(format!("malformed integer {text:?}")))
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_integer() {
            if let Ok(small) = i64::try_from(self.0.numer().clone()) {
                return serializer.serialize_i64(small);
            }
        }
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        deserializer.deserialize_any(RationalVisitor)
    }
}

struct RationalVisitor;

impl Visitor<'_> for RationalVisitor {
    type Value = Rational;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("an integer or a string like \"3/4\" or \"-3.25\"")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Rational, E> {
        Ok(Rational::integer(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Rational, E> {
        Ok(Rational(BigRational::from_integer(BigInt::from(v))))
    }

    fn visit_f64<E: de::Error>(self, _: f64) -> std::result::Result<Rational, E> {
        Err(E::custom(
            "floating-point literals are not accepted; write decimals as strings (\"-3.25\")",
        ))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Rational, E> {
        v.parse().map_err(|e: Error| E::custom(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn sgn_matches_definition() {
        assert_eq!(q("-3/2").sgn(), -1);
        assert_eq!(q("0").sgn(), 0);
        assert_eq!(q("7").sgn(), 1);
    }

    #[test]
    fn sf_matches_definition() {
        assert_eq!(q("5").sf(), Rational::one());
        assert_eq!(q("0").sf(), Rational::new(1, 2).unwrap());
        assert_eq!(q("-1/3").sf(), Rational::zero());
    }

    #[test]
    fn parse_forms_are_exact() {
        assert_eq!(q("-3.25"), Rational::new(-13, 4).unwrap());
        assert_eq!(q("2/4"), Rational::new(1, 2).unwrap());
        assert_eq!(q("1/-2"), Rational::new(-1, 2).unwrap());
        assert_eq!(q("0.5"), Rational::new(1, 2).unwrap());
        assert_eq!(q("-0.1"), Rational::new(-1, 10).unwrap());
        assert_eq!(q("42"), Rational::integer(42));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("".parse::<Rational>().is_err());
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
        assert!("1.2.3".parse::<Rational>().is_err());
    }

    #[test]
    fn canonical_form_gives_value_equality() {
        assert_eq!(Rational::new(2, 4).unwrap(), Rational::new(1, 2).unwrap());
        assert_eq!(Rational::new(-1, -2).unwrap(), Rational::new(1, 2).unwrap());
        assert!(Rational::new(-1, 2).unwrap().denominator() > &BigInt::zero());
    }

    #[test]
    fn json_numbers_and_strings_round_trip() {
        let values = ["-3.25", "7", "1/3", "-2/7"];
        for v in values {
            let r = q(v);
            let encoded = serde_json::to_string(&r).unwrap();
            let back: Rational = serde_json::from_str(&encoded).unwrap();
            assert_eq!(r, back, "round trip through {encoded}");
        }
        let from_int: Rational = serde_json::from_str("-4").unwrap();
        assert_eq!(from_int, Rational::integer(-4));
        assert!(serde_json::from_str::<Rational>("3.25").is_err());
    }
}
