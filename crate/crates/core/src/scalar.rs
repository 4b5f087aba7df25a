//! Exact scalar fields.
//!
//! Two instances exist: [`Rational`] (an alias for `BigRational`, always kept in
//! lowest terms with a positive denominator) and [`GaussianRational`], the field
//! `Q(i)` used when a point needs genuinely complex coordinates.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Exact field arithmetic shared by every routine that is generic over the
/// coordinate field.
pub trait Scalar:
    Clone
    + PartialEq
    + Eq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    fn from_rational(r: &Rational) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(v)))
    }

    /// Least common multiple of every denominator appearing in the value.
    fn denominator_lcm(&self) -> BigInt;

    fn mul_int(&self, m: &BigInt) -> Self;

    /// Square root of -1 when the field has one.
    fn imaginary_unit() -> Option<Self>;

    /// Rational value if the scalar lies in Q.
    fn as_rational(&self) -> Option<Rational>;

    fn to_json(&self) -> Value;

    fn from_json(v: &Value) -> Result<Self>;

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * &base;
            }
        }
        acc
    }
}

/// Parses `"p/q"` or an integer string.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(
            BigInt::from_str(s).map_err(|_| bad())?,
        )),
    }
}

/// Canonical string form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(BigInt::from(
            n.as_i64().unwrap_or_default(),
        ))),
        other => Err(Error::Parse(format!(
            "expected a rational string, got {other}"
        ))),
    }
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn denominator_lcm(&self) -> BigInt {
        self.denom().clone()
    }

    fn mul_int(&self, m: &BigInt) -> Self {
        self * Rational::from_integer(m.clone())
    }

    fn imaginary_unit() -> Option<Self> {
        None
    }

    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn to_json(&self) -> Value {
        Value::String(format_rational(self))
    }

    fn from_json(v: &Value) -> Result<Self> {
        rational_from_json(v)
    }
}

/// An element `re + im·i` of the Gaussian rationals.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn i() -> Self {
        Self::new(Rational::zero(), Rational::one())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl From<Rational> for GaussianRational {
    fn from(re: Rational) -> Self {
        Self::new(re, Rational::zero())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", format_rational(&self.re))
        } else if self.re.is_zero() {
            write!(f, "{}i", format_rational(&self.im))
        } else if self.im.is_negative() {
            write!(
                f,
                "{}-{}i",
                format_rational(&self.re),
                format_rational(&-self.im.clone())
            )
        } else {
            write!(
                f,
                "{}+{}i",
                format_rational(&self.re),
                format_rational(&self.im)
            )
        }
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::new(Rational::zero(), Rational::zero())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::new(Rational::one(), Rational::zero())
    }
}

impl<'a> Add<&'a GaussianRational> for GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &'a GaussianRational) -> GaussianRational {
        GaussianRational::new(self.re + &rhs.re, self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a GaussianRational> for GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &'a GaussianRational) -> GaussianRational {
        GaussianRational::new(self.re - &rhs.re, self.im - &rhs.im)
    }
}

impl<'a> Mul<&'a GaussianRational> for GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &'a GaussianRational) -> GaussianRational {
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        GaussianRational::new(re, im)
    }
}

impl<'a> Div<&'a GaussianRational> for GaussianRational {
    type Output = GaussianRational;
    fn div(self, rhs: &'a GaussianRational) -> GaussianRational {
        let n = rhs.norm();
        assert!(!n.is_zero(), "division by zero");
        let p = self * &rhs.conj();
        GaussianRational::new(p.re / &n, p.im / &n)
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, rhs: GaussianRational) -> GaussianRational {
                $tr::$m(self, &rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);
forward_owned_binop!(Div, div);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl Scalar for GaussianRational {
    fn from_rational(r: &Rational) -> Self {
        Self::from(r.clone())
    }

    fn denominator_lcm(&self) -> BigInt {
        self.re.denom().lcm(self.im.denom())
    }

    fn mul_int(&self, m: &BigInt) -> Self {
        let m = Rational::from_integer(m.clone());
        Self::new(&self.re * &m, &self.im * &m)
    }

    fn imaginary_unit() -> Option<Self> {
        Some(Self::i())
    }

    fn as_rational(&self) -> Option<Rational> {
        self.im.is_zero().then(|| self.re.clone())
    }

    fn to_json(&self) -> Value {
        json!({ "re": format_rational(&self.re), "im": format_rational(&self.im) })
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Object(o) => {
                let re = o.get("re").map(rational_from_json).transpose()?;
                let im = o.get("im").map(rational_from_json).transpose()?;
                Ok(Self::new(
                    re.unwrap_or_else(Rational::zero),
                    im.unwrap_or_else(Rational::zero),
                ))
            }
            other => Ok(Self::from(rational_from_json(other)?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn parse_and_format_canonical() {
        assert_eq!(format_rational(&q("6/4")), "3/2");
        assert_eq!(format_rational(&q("4/-2")), "-2");
        assert_eq!(format_rational(&q("0/7")), "0");
        assert_eq!(*q("0/7").denom(), BigInt::one());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn gaussian_field_ops() {
        let i = GaussianRational::i();
        assert_eq!(i.clone() * &i, -GaussianRational::one());
        let a = GaussianRational::new(q("1"), q("2"));
        let b = GaussianRational::new(q("3"), q("-1/2"));
        let c = a.clone() / &b;
        assert_eq!(c * &b, a);
        assert_eq!(a.to_string(), "1+2i");
        let back = GaussianRational::from_json(&a.to_json()).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn pow_matches_repeated_product() {
        let x = q("-3/2");
        assert_eq!(x.pow(5), q("-243/32"));
        assert_eq!(x.pow(0), Rational::one());
    }
}
