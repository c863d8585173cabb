//! Dense univariate polynomials with coefficients stored in ascending degree.

mod cyclotomic;
mod factor;
pub mod modp;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{serde_num, Coeff};

pub use cyclotomic::{cyclotomic, cyclotomic_index, euler_phi};
pub use factor::{factor_over_integers, squarefree_decomposition, FactorConfig, Factorization};

/// Dense polynomial; `coeffs[i]` is the coefficient of `x^i`.
///
/// The highest stored coefficient is always nonzero; the zero polynomial
/// stores no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

/// Marker for coefficient types that form a field.
pub trait Field: Coeff {}
impl Field for BigRational {}
impl Field for f64 {}
impl Field for f32 {}

impl<T: Coeff> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// `c * x^n`.
    pub fn monomial(c: T, n: usize) -> Self {
        let mut coeffs = vec![T::zero(); n];
        coeffs.push(c);
        Poly::new(coeffs)
    }

    pub fn x() -> Self {
        Poly::monomial(T::one(), 1)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the convention `deg(0) = -1`.
    pub fn degree_i(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    /// Sum of the absolute values of the coefficients.
    pub fn length(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, c| acc + c.abs())
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn scale(&self, c: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Multiplication by `x^n`.
    pub fn shift(&self, n: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![T::zero(); n];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * T::from_usize(i).expect("index fits the scalar type"))
                .collect(),
        )
    }

    /// `x^deg(P) * P(1/x)`.
    pub fn reverse(&self) -> Self {
        Poly::new(self.coeffs.iter().rev().cloned().collect())
    }

    /// Applies `x * d/dx` the given number of times.
    pub fn theta(&self, power: usize) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let i = T::from_usize(i).expect("index fits the scalar type");
                    let mut f = T::one();
                    for _ in 0..power {
                        f = f * i.clone();
                    }
                    c.clone() * f
                })
                .collect(),
        )
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `P(-x)`.
    pub fn negate_variable(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        )
    }

    pub fn map<U: Coeff>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// Equal to its reversal up to sign.
    pub fn is_self_reciprocal(&self) -> bool {
        let r = self.reverse();
        r == *self || r == -self.clone()
    }
}

impl<T: Field> Poly<T> {
    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lc = d.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![T::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = rem[i + dd].clone() / lc.clone();
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[i + j] = rem[i + j].clone() - c.clone() * dc.clone();
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    pub fn exact_div(&self, d: &Self) -> Result<Self> {
        if d.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let (q, r) = self.div_rem(d);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NotDivisible)
        }
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lc) => {
                let inv = T::one() / lc.clone();
                self.scale(&inv)
            }
            None => Poly::zero(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
}

impl Poly<BigInt> {
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Gcd of the coefficients, nonnegative; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = self.content();
        if self.leading().unwrap().is_negative() {
            c = -c;
        }
        Poly::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    pub fn to_rat(&self) -> Poly<BigRational> {
        self.map(|c| BigRational::from_integer(c.clone()))
    }

    /// Exact division with an integral quotient.
    pub fn exact_div(&self, d: &Self) -> Result<Self> {
        let q = self.to_rat().exact_div(&d.to_rat())?;
        Poly::<BigInt>::from_rat(&q).ok_or(Error::NotDivisible)
    }

    /// Whether `self` divides `p` over the rationals.
    pub fn divides(&self, p: &Self) -> bool {
        !self.is_zero() && p.to_rat().rem(&self.to_rat()).is_zero()
    }

    /// Integer polynomial if every coefficient is integral.
    pub fn from_rat(p: &Poly<BigRational>) -> Option<Self> {
        if p.coeffs.iter().all(|c| c.is_integer()) {
            Some(Poly::new(p.coeffs.iter().map(|c| c.to_integer()).collect()))
        } else {
            None
        }
    }

    /// Primitive greatest common divisor with positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        let g = self.to_rat().gcd(&other.to_rat());
        Poly::<BigRational>::clear_denominators(&g).primitive_part()
    }

    /// Largest `v` with `(x - 1)^v` dividing the polynomial.
    pub fn order_at_one(&self) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut p = self.coeffs.clone();
        let mut order = 0;
        loop {
            // Synthetic division by (x - 1).
            let n = p.len();
            if n < 2 {
                return Ok(order);
            }
            let mut q = vec![BigInt::zero(); n - 1];
            let mut carry = BigInt::zero();
            for i in (1..n).rev() {
                carry += &p[i];
                q[i - 1] = carry.clone();
            }
            carry += &p[0];
            if !carry.is_zero() {
                return Ok(order);
            }
            order += 1;
            p = q;
        }
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }
}

impl Poly<BigRational> {
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect())
    }

    /// Positive multiple with integer coefficients (lcm of denominators).
    pub fn clear_denominators(p: &Self) -> Poly<BigInt> {
        let l = p.coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        Poly::new(p.coeffs.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect())
    }
}

impl<T: Coeff> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<T: Coeff> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<T: Coeff> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<T: Coeff> Neg for Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl<T: Coeff> $tr for Poly<T> {
            type Output = Poly<T>;
            fn $m(self, rhs: Poly<T>) -> Poly<T> {
                (&self).$m(&rhs)
            }
        }
        impl<T: Coeff> $tr<&Poly<T>> for Poly<T> {
            type Output = Poly<T>;
            fn $m(self, rhs: &Poly<T>) -> Poly<T> {
                (&self).$m(rhs)
            }
        }
    };
}
forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl<T: Coeff + fmt::Display> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let unit = abs.is_one();
            match i {
                0 => write!(f, "{abs}")?,
                1 if unit => write!(f, "x")?,
                1 => write!(f, "{abs}*x")?,
                _ if unit => write!(f, "x^{i}")?,
                _ => write!(f, "{abs}*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for Poly<BigInt> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&IntRef(c))?;
        }
        seq.end()
    }
}

struct IntRef<'a>(&'a BigInt);

impl Serialize for IntRef<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_num::serialize_bigint(self.0, s)
    }
}

#[derive(Deserialize)]
struct IntOwned(#[serde(with = "serde_num::bigint")] BigInt);

impl<'de> Deserialize<'de> for Poly<BigInt> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<IntOwned> = Vec::deserialize(d)?;
        Ok(Poly::new(v.into_iter().map(|x| x.0).collect()))
    }
}

impl Serialize for Poly<BigRational> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_num::rational_vec::serialize(&self.coeffs, s)
    }
}

impl<'de> Deserialize<'de> for Poly<BigRational> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Poly::new(serde_num::rational_vec::deserialize(d)?))
    }
}

/// Parses an ascending coefficient list such as `[-3, 2]`.
pub fn parse_int_poly(s: &str) -> Result<Poly<BigInt>> {
    serde_json::from_str(s).map_err(|e| Error::Parse(format!("polynomial {s:?}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use crate::{IntPoly, RatPoly};
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn normalizes_trailing_zeros() {
        assert_eq!(p(&[1, 2, 0, 0]).coeffs().len(), 2);
        assert!(p(&[0, 0]).is_zero());
        assert_eq!(p(&[]).degree(), None);
    }

    #[test]
    fn lengths() {
        assert_eq!(p(&[-3, 2]).length(), int(5));
        assert_eq!(IntPoly::zero().length(), int(0));
        assert_eq!(p(&[1, -2, 1]).length(), int(4));
        let r = RatPoly::new(vec![rat(-1, 2), rat(2, 3)]);
        assert_eq!(r.length(), rat(7, 6));
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&p(&[-1, 1]) * &p(&[1, 1]), p(&[-1, 0, 1]));
        assert_eq!(p(&[-3, 2]).reverse(), p(&[2, -3]));
        assert_eq!(p(&[-1, 0, 1]).exact_div(&p(&[-1, 1])).unwrap(), p(&[1, 1]));
        assert_eq!(p(&[-1, 0, 1]).exact_div(&p(&[2, 1])), Err(Error::NotDivisible));
        assert_eq!(p(&[1, 2, 3]).derivative(), p(&[2, 6]));
        assert_eq!(&p(&[1, 2]) - &p(&[1, 2]), IntPoly::zero());
    }

    #[test]
    fn theta_examples() {
        let x2 = RatPoly::from_i64(&[0, 0, 1]);
        assert_eq!(x2.theta(1), RatPoly::from_i64(&[0, 0, 2]));
        assert_eq!(RatPoly::from_i64(&[-1, 1]).theta(1), RatPoly::from_i64(&[0, 1]));
        let q = RatPoly::from_i64(&[4, -1, 7]);
        assert_eq!(q.theta(0), q);
        assert_eq!(q.theta(2), RatPoly::from_i64(&[0, -1, 28]));
    }

    #[test]
    fn order_at_one_examples() {
        let r = &p(&[-1, 1]).pow(2) * &p(&[-3, 2]);
        assert_eq!(r.order_at_one().unwrap(), 2);
        assert_eq!(p(&[-3, 2]).order_at_one().unwrap(), 0);
        assert_eq!(p(&[-1, 0, 1]).order_at_one().unwrap(), 1);
        assert_eq!(IntPoly::zero().order_at_one(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn gcd_and_content() {
        let a = &p(&[-1, 1]) * &p(&[2, 3]);
        let b = &p(&[-1, 1]) * &p(&[5, 1]);
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
        assert_eq!(p(&[4, -6, 8]).content(), int(2));
        assert_eq!(p(&[4, -6, -8]).primitive_part(), p(&[-2, 3, 4]));
    }

    #[test]
    fn self_reciprocal() {
        assert!(p(&[1, 1, 1]).is_self_reciprocal());
        assert!(p(&[-1, 1]).is_self_reciprocal());
        assert!(!p(&[-1, -1, 1]).is_self_reciprocal());
    }

    #[test]
    fn serde_roundtrip() {
        let q = parse_int_poly("[-3, 2]").unwrap();
        assert_eq!(q, p(&[-3, 2]));
        assert_eq!(serde_json::to_string(&q).unwrap(), "[-3,2]");
        let big = IntPoly::new(vec![num_traits::pow(int(10), 30)]);
        let s = serde_json::to_string(&big).unwrap();
        assert_eq!(serde_json::from_str::<IntPoly>(&s).unwrap(), big);
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-3, 2]).to_string(), "2*x - 3");
        assert_eq!(p(&[1, 0, -1]).to_string(), "-x^2 + 1");
    }

    #[test]
    fn float_polys_share_the_generic_code() {
        let f = Poly::<f64>::new(vec![-2.0, 0.0, 1.0]);
        assert!((f.eval(&2f64.sqrt())).abs() < 1e-12);
        let (q, r) = f.div_rem(&Poly::new(vec![-1.0, 1.0]));
        assert_eq!(q.coeffs(), &[1.0, 1.0]);
        assert_eq!(r.coeffs(), &[-1.0]);
    }

    fn small_poly() -> impl Strategy<Value = IntPoly> {
        prop::collection::vec(-9i64..=9, 0..8).prop_map(|v| IntPoly::from_i64(&v))
    }

    proptest! {
        #[test]
        fn length_is_submultiplicative(a in small_poly(), b in small_poly()) {
            prop_assert!((&a * &b).length() <= a.length() * b.length());
        }

        #[test]
        fn degree_of_product_adds(a in small_poly(), b in small_poly()) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            prop_assert_eq!((&a * &b).degree().unwrap(), a.degree().unwrap() + b.degree().unwrap());
        }

        #[test]
        fn exact_division_inverts_multiplication(a in small_poly(), b in small_poly()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).exact_div(&b).unwrap(), a);
        }
    }
}
