//! Scalar traits and rational helpers shared by the polynomial and LP code.

use std::fmt::Debug;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficient ring of a dense polynomial.
///
/// Blanket-implemented for every signed numeric type, so `BigInt`,
/// `BigRational`, `i64`, `f64` and `f32` all qualify.
pub trait Coeff: Clone + Debug + PartialEq + Num + Signed + FromPrimitive {}

impl<T> Coeff for T where T: Clone + Debug + PartialEq + Num + Signed + FromPrimitive {}

/// An ordered field, as required by pivoting algorithms.
pub trait OrderedField: Coeff + PartialOrd {
    /// Tolerance below which a value is treated as zero (zero for exact types).
    fn eps() -> Self;

    fn is_negligible(&self) -> bool {
        self.abs() <= Self::eps()
    }
}

impl OrderedField for f64 {
    fn eps() -> Self {
        1e-11
    }
}

impl OrderedField for f32 {
    fn eps() -> Self {
        1e-5
    }
}

impl OrderedField for BigRational {
    fn eps() -> Self {
        BigRational::zero()
    }
}

/// Closed interval with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalInterval {
    #[serde(with = "serde_num::rational")]
    pub lo: BigRational,
    #[serde(with = "serde_num::rational")]
    pub hi: BigRational,
}

impl RationalInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        RationalInterval { lo, hi }
    }

    pub fn point(x: BigRational) -> Self {
        RationalInterval { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> BigRational {
        (&self.lo + &self.hi) / BigInt::from(2)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }
}

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(v: BigInt) -> BigRational {
    BigRational::from_integer(v)
}

/// Parses `"p/q"`, `"p"`, or a finite decimal such as `"-1.25e-3"` exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|e| Error::Parse(format!("{s}: {e}")))?;
        let d = BigInt::from_str(d.trim()).map_err(|e| Error::Parse(format!("{s}: {e}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("{s}: zero denominator")));
        }
        return Ok(BigRational::new(n, d));
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (ip, fp) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{ip}{fp}");
    let mut num = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
    if neg {
        num = -num;
    }
    let scale = exp - fp.len() as i64;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    })
}

pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Lossy conversion for display and float-side heuristics.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Large operands: shift both into range first.
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = nb.max(db) - 60;
    let n = (r.numer() >> shift.max(0) as usize).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift.max(0) as usize).to_f64().unwrap_or(1.0);
    if d == 0.0 {
        return if n == 0.0 { 0.0 } else { f64::INFINITY.copysign(n) };
    }
    n / d
}

/// Exact rational value of a finite `f64`.
pub fn f64_to_rational(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap_or_else(BigRational::zero)
}

/// Floor of a rational as an integer.
pub fn floor_rational(r: &BigRational) -> BigInt {
    r.numer().div_floor(r.denom())
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Serde adapters: integers as JSON numbers when they fit, otherwise strings;
/// rationals as `"p/q"` strings.
pub mod serde_num {
    use super::*;
    use serde::de::{self, Deserializer, Visitor};
    use serde::Serializer;
    use std::fmt;

    struct BigIntVisitor;

    impl<'de> Visitor<'de> for BigIntVisitor {
        type Value = BigInt;
        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("an integer or an integer string")
        }
        fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<BigInt, E> {
            Ok(BigInt::from(v))
        }
        fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<BigInt, E> {
            Ok(BigInt::from(v))
        }
        fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<BigInt, E> {
            BigInt::from_str(v.trim()).map_err(E::custom)
        }
    }

    struct RationalVisitor;

    impl<'de> Visitor<'de> for RationalVisitor {
        type Value = BigRational;
        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("a rational as \"p/q\", a decimal string, or an integer")
        }
        fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<BigRational, E> {
            Ok(BigRational::from_integer(BigInt::from(v)))
        }
        fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<BigRational, E> {
            Ok(BigRational::from_integer(BigInt::from(v)))
        }
        fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<BigRational, E> {
            parse_rational(&v.to_string()).map_err(E::custom)
        }
        fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<BigRational, E> {
            parse_rational(v).map_err(E::custom)
        }
    }

    pub fn deserialize_bigint<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
        d.deserialize_any(BigIntVisitor)
    }

    pub fn serialize_bigint<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v.to_i64() {
            Some(x) => s.serialize_i64(x),
            None => s.serialize_str(&v.to_string()),
        }
    }

    pub fn deserialize_rational<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BigRational, D::Error> {
        d.deserialize_any(RationalVisitor)
    }

    pub fn serialize_rational<S: Serializer>(
        v: &BigRational,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(v))
    }

    pub mod bigint {
        pub use super::deserialize_bigint as deserialize;
        pub use super::serialize_bigint as serialize;
    }

    pub mod rational {
        pub use super::deserialize_rational as deserialize;
        pub use super::serialize_rational as serialize;
    }

    pub mod rational_vec {
        use super::*;
        use serde::{Deserialize, Serialize};

        #[derive(Serialize, Deserialize)]
        struct Wrap(#[serde(with = "super::rational")] BigRational);

        pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
            let w: Vec<Wrap> = v.iter().cloned().map(Wrap).collect();
            w.serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<BigRational>, D::Error> {
            let w: Vec<Wrap> = Vec::deserialize(d)?;
            Ok(w.into_iter().map(|x| x.0).collect())
        }
    }

    pub mod rational_opt {
        use super::*;
        use serde::{Deserialize, Serialize};

        #[derive(Serialize, Deserialize)]
        struct Wrap(#[serde(with = "super::rational")] BigRational);

        pub fn serialize<S: Serializer>(
            v: &Option<BigRational>,
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            v.clone().map(Wrap).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Option<BigRational>, D::Error> {
            let w: Option<Wrap> = Option::deserialize(d)?;
            Ok(w.map(|x| x.0))
        }
    }

    pub mod bigint_opt {
        use super::*;
        use serde::{Deserialize, Serialize};

        #[derive(Serialize, Deserialize)]
        struct Wrap(#[serde(with = "super::bigint")] BigInt);

        pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
            v.clone().map(Wrap).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<BigInt>, D::Error> {
            let w: Option<Wrap> = Option::deserialize(d)?;
            Ok(w.map(|x| x.0))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("3/2").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("1.25").unwrap(), rat(5, 4));
        assert_eq!(parse_rational("1e-11").unwrap(), BigRational::new(int(1), num_traits::pow(int(10), 11)));
        assert_eq!(parse_rational("-0.5E1").unwrap(), rat(-5, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn floor_of_negative_rational() {
        assert_eq!(floor_rational(&rat(-1, 2)), int(-1));
        assert_eq!(floor_rational(&rat(7, 2)), int(3));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), int(10));
        assert_eq!(binomial(3, 5), int(0));
        assert_eq!(binomial(0, 0), int(1));
    }
}
