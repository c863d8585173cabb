//! Dyadic interval arithmetic with outward rounding.
//!
//! Every operation takes a precision in bits; results are rounded outward so
//! that the true value always stays inside the returned interval.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Precision escalation starts here and doubles up to [`PRECISION_CAP`].
pub const START_PRECISION: u64 = 64;
pub const PRECISION_CAP: u64 = 65536;

/// `m * 2^e`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    m: BigInt,
    e: i64,
}

fn shr_floor(m: &BigInt, s: u64) -> BigInt {
    if m.sign() == Sign::Minus {
        -((-m - 1u32) >> s) - 1u32
    } else {
        m >> s
    }
}

fn shr_ceil(m: &BigInt, s: u64) -> BigInt {
    -shr_floor(&-m, s)
}

impl Dyadic {
    pub fn new(m: BigInt, e: i64) -> Self {
        Dyadic { m, e }
    }

    pub fn zero() -> Self {
        Dyadic { m: BigInt::zero(), e: 0 }
    }

    pub fn from_int(m: BigInt) -> Self {
        Dyadic { m, e: 0 }
    }

    pub fn from_i64(v: i64) -> Self {
        Dyadic::from_int(BigInt::from(v))
    }

    /// Exact value of a finite float.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite float");
        if x == 0.0 {
            return Dyadic::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
        Dyadic::new(BigInt::from(m) * sign, e)
    }

    pub fn pow2(e: i64) -> Self {
        Dyadic::new(BigInt::one(), e)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.m
    }

    pub fn exponent(&self) -> i64 {
        self.e
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.m.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic::new(self.m.abs(), self.e)
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        match self.e.cmp(&o.e) {
            Ordering::Equal => Dyadic::new(&self.m + &o.m, self.e),
            Ordering::Less => Dyadic::new(&self.m + (&o.m << (o.e - self.e) as usize), self.e),
            Ordering::Greater => Dyadic::new((&self.m << (self.e - o.e) as usize) + &o.m, o.e),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Dyadic::new(-&self.m, self.e)
    }

    pub fn mul(&self, o: &Self) -> Self {
        Dyadic::new(&self.m * &o.m, self.e + o.e)
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        Dyadic::new(self.m.clone(), self.e + k)
    }

    /// Position of the most significant bit: `|self| < 2^magnitude_bits`.
    pub fn magnitude_bits(&self) -> i64 {
        if self.is_zero() {
            i64::MIN / 4
        } else {
            self.m.bits() as i64 + self.e
        }
    }

    pub fn round_floor(&self, prec: u64) -> Self {
        let bits = self.m.bits();
        if bits <= prec {
            return self.clone();
        }
        let s = bits - prec;
        Dyadic::new(shr_floor(&self.m, s), self.e + s as i64)
    }

    pub fn round_ceil(&self, prec: u64) -> Self {
        let bits = self.m.bits();
        if bits <= prec {
            return self.clone();
        }
        let s = bits - prec;
        Dyadic::new(shr_ceil(&self.m, s), self.e + s as i64)
    }

    /// Round to nearest-ish (floor of value plus half an ulp); used for
    /// non-rigorous iteration only.
    pub fn round(&self, prec: u64) -> Self {
        let bits = self.m.bits();
        if bits <= prec {
            return self.clone();
        }
        let s = bits - prec;
        let half = BigInt::one() << (s - 1);
        Dyadic::new(shr_floor(&(&self.m + half), s), self.e + s as i64)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.e >= 0 {
            BigRational::from_integer(&self.m << self.e as usize)
        } else {
            BigRational::new(self.m.clone(), BigInt::one() << (-self.e) as usize)
        }
    }

    /// `floor(r * 2^k) * 2^-k` with `k` chosen to give about `prec` significant bits.
    pub fn from_rational_floor(r: &BigRational, prec: u64) -> Self {
        let k = Self::rational_scale(r, prec);
        Dyadic::new(Self::scaled(r, k).div_floor(r.denom()), -k)
    }

    pub fn from_rational_ceil(r: &BigRational, prec: u64) -> Self {
        let k = Self::rational_scale(r, prec);
        Dyadic::new(-(-Self::scaled(r, k)).div_floor(r.denom()), -k)
    }

    fn rational_scale(r: &BigRational, prec: u64) -> i64 {
        prec as i64 + 2 - (r.numer().bits() as i64 - r.denom().bits() as i64)
    }

    fn scaled(r: &BigRational, k: i64) -> BigInt {
        if k >= 0 {
            r.numer() << k as usize
        } else {
            r.numer() >> (-k) as usize
        }
    }

    /// Quotient rounded toward minus infinity (`ceil = false`) or plus infinity.
    pub fn div(&self, o: &Self, prec: u64, ceil: bool) -> Self {
        assert!(!o.is_zero(), "dyadic division by zero");
        let k = (prec as i64 + 2 + o.m.bits() as i64 - self.m.bits() as i64).max(0);
        let num = &self.m << k as usize;
        let q = if ceil { -(-num).div_floor(&o.m) } else { num.div_floor(&o.m) };
        Dyadic::new(q, self.e - o.e - k)
    }

    /// Square root of a nonnegative value, rounded down or up.
    pub fn sqrt(&self, prec: u64, ceil: bool) -> Self {
        assert!(self.signum() >= 0, "square root of a negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        // Scale so the integer square root carries about `prec` bits.
        let mut k = (2 * prec as i64 + 4 - self.m.bits() as i64).max(0);
        if (self.e - k) % 2 != 0 {
            k += 1;
        }
        let scaled = &self.m << k as usize;
        let mut s = scaled.sqrt();
        if ceil && &s * &s != scaled {
            s += 1u32;
        }
        Dyadic::new(s, (self.e - k) / 2)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.m.bits() as i64;
        let shift = (bits - 62).max(0);
        let top = shr_floor(&self.m, shift as u64).to_i64().unwrap_or(0) as f64;
        let exp = self.e + shift;
        if exp > 2000 {
            return f64::INFINITY.copysign(top);
        }
        if exp < -2200 {
            return 0.0;
        }
        // Split the scaling to avoid intermediate overflow/underflow.
        let half = exp / 2;
        top * 2f64.powi(half as i32) * 2f64.powi((exp - half) as i32)
    }

    pub fn floor_int(&self) -> BigInt {
        if self.e >= 0 {
            &self.m << self.e as usize
        } else {
            shr_floor(&self.m, (-self.e) as u64)
        }
    }

    pub fn ceil_int(&self) -> BigInt {
        -self.neg().floor_int()
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sub(other).signum().cmp(&0)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

/// Closed real interval `[lo, hi]` with dyadic endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        Interval { lo, hi }
    }

    pub fn point(x: Dyadic) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn zero() -> Self {
        Interval::point(Dyadic::zero())
    }

    pub fn from_i64(v: i64) -> Self {
        Interval::point(Dyadic::from_i64(v))
    }

    pub fn from_int(v: &BigInt) -> Self {
        Interval::point(Dyadic::from_int(v.clone()))
    }

    pub fn from_rational(r: &BigRational, prec: u64) -> Self {
        if r.denom().is_one() {
            return Interval::from_int(r.numer());
        }
        Interval::new(Dyadic::from_rational_floor(r, prec), Dyadic::from_rational_ceil(r, prec))
    }

    /// `[mid - rad, mid + rad]`.
    pub fn ball(mid: Dyadic, rad: &Dyadic) -> Self {
        let rad = rad.abs();
        Interval::new(mid.sub(&rad), mid.add(&rad))
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn mid(&self) -> Dyadic {
        self.lo.add(&self.hi).mul_pow2(-1)
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    /// Upper bound on `|x|` over the interval.
    pub fn mag(&self) -> Dyadic {
        self.lo.abs().max(self.hi.abs())
    }

    /// Lower bound on `|x|` over the interval.
    pub fn mig(&self) -> Dyadic {
        if self.contains_zero() {
            Dyadic::zero()
        } else {
            self.lo.abs().min(self.hi.abs())
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, o: &Interval) -> bool {
        self.lo <= o.lo && o.hi <= self.hi
    }

    /// `o` lies in the open interior of `self`.
    pub fn strictly_contains(&self, o: &Interval) -> bool {
        self.lo < o.lo && o.hi < self.hi
    }

    pub fn intersects(&self, o: &Interval) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    pub fn is_positive(&self) -> bool {
        self.lo.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.hi.signum() < 0
    }

    pub fn round(&self, prec: u64) -> Self {
        Interval::new(self.lo.round_floor(prec), self.hi.round_ceil(prec))
    }

    pub fn add(&self, o: &Self, prec: u64) -> Self {
        Interval::new(self.lo.add(&o.lo).round_floor(prec), self.hi.add(&o.hi).round_ceil(prec))
    }

    pub fn sub(&self, o: &Self, prec: u64) -> Self {
        Interval::new(self.lo.sub(&o.hi).round_floor(prec), self.hi.sub(&o.lo).round_ceil(prec))
    }

    pub fn neg(&self) -> Self {
        Interval::new(self.hi.neg(), self.lo.neg())
    }

    pub fn abs(&self) -> Self {
        Interval::new(self.mig(), self.mag())
    }

    pub fn mul(&self, o: &Self, prec: u64) -> Self {
        let p = [self.lo.mul(&o.lo), self.lo.mul(&o.hi), self.hi.mul(&o.lo), self.hi.mul(&o.hi)];
        let lo = p.iter().min().unwrap().round_floor(prec);
        let hi = p.iter().max().unwrap().round_ceil(prec);
        Interval::new(lo, hi)
    }

    pub fn sqr(&self, prec: u64) -> Self {
        let a = self.lo.mul(&self.lo);
        let b = self.hi.mul(&self.hi);
        let hi = a.clone().max(b.clone()).round_ceil(prec);
        let lo = if self.contains_zero() { Dyadic::zero() } else { a.min(b).round_floor(prec) };
        Interval::new(lo, hi)
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        Interval::new(self.lo.mul_pow2(k), self.hi.mul_pow2(k))
    }

    pub fn recip(&self, prec: u64) -> Result<Self> {
        if self.contains_zero() {
            return Err(Error::Invariant("interval reciprocal of a set containing zero".into()));
        }
        let one = Dyadic::from_i64(1);
        Ok(Interval::new(one.div(&self.hi, prec, false), one.div(&self.lo, prec, true)))
    }

    pub fn div(&self, o: &Self, prec: u64) -> Result<Self> {
        Ok(self.mul(&o.recip(prec)?, prec))
    }

    /// Square root of the nonnegative part of the interval.
    pub fn sqrt(&self, prec: u64) -> Result<Self> {
        if self.hi.signum() < 0 {
            return Err(Error::Invariant("square root of a negative interval".into()));
        }
        let lo = if self.lo.signum() <= 0 { Dyadic::zero() } else { self.lo.sqrt(prec, false) };
        Ok(Interval::new(lo, self.hi.sqrt(prec, true)))
    }

    pub fn pow(&self, n: u64, prec: u64) -> Self {
        let mut acc = Interval::from_i64(1);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base, prec);
            }
            n >>= 1;
            if n > 0 {
                base = base.sqr(prec);
            }
        }
        acc
    }

    pub fn hull(&self, o: &Self) -> Self {
        Interval::new(self.lo.clone().min(o.lo.clone()), self.hi.clone().max(o.hi.clone()))
    }

    /// Integer floor if it is the same at both endpoints.
    pub fn floor_if_decided(&self) -> Option<BigInt> {
        let a = self.lo.floor_int();
        if a == self.hi.floor_int() {
            Some(a)
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64()
    }

    /// Compares against a dyadic constant: `Some(Less)` if the whole interval
    /// is below, `Some(Greater)` if above, `None` if it straddles.
    pub fn compare(&self, x: &Dyadic) -> Option<Ordering> {
        if &self.hi < x {
            Some(Ordering::Less)
        } else if &self.lo > x {
            Some(Ordering::Greater)
        } else {
            None
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// Rectangular complex interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexInterval {
    pub re: Interval,
    pub im: Interval,
}

impl ComplexInterval {
    pub fn new(re: Interval, im: Interval) -> Self {
        ComplexInterval { re, im }
    }

    pub fn real(re: Interval) -> Self {
        ComplexInterval { re, im: Interval::zero() }
    }

    pub fn point(re: Dyadic, im: Dyadic) -> Self {
        ComplexInterval { re: Interval::point(re), im: Interval::point(im) }
    }

    pub fn zero() -> Self {
        ComplexInterval::real(Interval::zero())
    }

    pub fn one() -> Self {
        ComplexInterval::real(Interval::from_i64(1))
    }

    pub fn mid(&self) -> (Dyadic, Dyadic) {
        (self.re.mid(), self.im.mid())
    }

    pub fn conj(&self) -> Self {
        ComplexInterval { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn add(&self, o: &Self, prec: u64) -> Self {
        ComplexInterval { re: self.re.add(&o.re, prec), im: self.im.add(&o.im, prec) }
    }

    pub fn sub(&self, o: &Self, prec: u64) -> Self {
        ComplexInterval { re: self.re.sub(&o.re, prec), im: self.im.sub(&o.im, prec) }
    }

    pub fn neg(&self) -> Self {
        ComplexInterval { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn mul(&self, o: &Self, prec: u64) -> Self {
        let rr = self.re.mul(&o.re, prec);
        let ii = self.im.mul(&o.im, prec);
        let ri = self.re.mul(&o.im, prec);
        let ir = self.im.mul(&o.re, prec);
        ComplexInterval { re: rr.sub(&ii, prec), im: ri.add(&ir, prec) }
    }

    pub fn scale(&self, s: &Interval, prec: u64) -> Self {
        ComplexInterval { re: self.re.mul(s, prec), im: self.im.mul(s, prec) }
    }

    pub fn norm_sqr(&self, prec: u64) -> Interval {
        self.re.sqr(prec).add(&self.im.sqr(prec), prec)
    }

    pub fn abs(&self, prec: u64) -> Result<Interval> {
        self.norm_sqr(prec).sqrt(prec)
    }

    pub fn recip(&self, prec: u64) -> Result<Self> {
        let n = self.norm_sqr(prec);
        let inv = n.recip(prec)?;
        Ok(self.conj().scale(&inv, prec))
    }

    pub fn pow(&self, n: u64, prec: u64) -> Self {
        let mut acc = ComplexInterval::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base, prec);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base, prec);
            }
        }
        acc
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn strictly_contains(&self, o: &Self) -> bool {
        self.re.strictly_contains(&o.re) && self.im.strictly_contains(&o.im)
    }

    pub fn contains(&self, o: &Self) -> bool {
        self.re.contains_interval(&o.re) && self.im.contains_interval(&o.im)
    }

    pub fn intersects(&self, o: &Self) -> bool {
        self.re.intersects(&o.re) && self.im.intersects(&o.im)
    }

    /// Largest side length.
    pub fn width(&self) -> Dyadic {
        self.re.width().max(self.im.width())
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for ComplexInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i", self.re, self.im)
    }
}

/// Doubling precision schedule from [`START_PRECISION`] to [`PRECISION_CAP`].
pub fn precision_schedule(start: u64) -> impl Iterator<Item = u64> {
    let start = start.clamp(START_PRECISION, PRECISION_CAP).next_power_of_two().min(PRECISION_CAP);
    std::iter::successors(Some(start), |&p| if p < PRECISION_CAP { Some(p * 2) } else { None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use proptest::prelude::*;

    #[test]
    fn rational_enclosure() {
        let third = Interval::from_rational(&rat(1, 3), 64);
        let r = rat(1, 3);
        assert!(third.lo().to_rational() < r && r < third.hi().to_rational());
        assert!(third.width() < Dyadic::pow2(-60));
        let half = Interval::from_rational(&rat(-1, 2), 64);
        assert_eq!(half.lo(), half.hi());
    }

    #[test]
    fn sqrt_two_encloses() {
        let s = Interval::from_i64(2).sqrt(128).unwrap();
        let lo = s.lo().to_rational();
        let hi = s.hi().to_rational();
        let two = rat(2, 1);
        assert!(&lo * &lo <= two && two <= &hi * &hi);
        assert!((s.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn floor_shift_of_negatives() {
        let d = Dyadic::new(BigInt::from(-5), 0);
        assert_eq!(d.round_floor(1), Dyadic::new(BigInt::from(-2), 2));
        assert_eq!(d.round_ceil(1), Dyadic::new(BigInt::from(-1), 2));
        assert_eq!(Dyadic::new(BigInt::from(-3), -1).floor_int(), BigInt::from(-2));
    }

    #[test]
    fn f64_roundtrip() {
        for x in [1.0, -0.1, 3.5e-300, 1e300, 123.456] {
            assert_eq!(Dyadic::from_f64(x).to_f64(), x);
        }
    }

    #[test]
    fn complex_power() {
        let i = ComplexInterval::point(Dyadic::zero(), Dyadic::from_i64(1));
        let p = i.pow(4, 64);
        assert_eq!(p, ComplexInterval::one());
    }

    #[test]
    fn schedule_doubles_to_cap() {
        let v: Vec<u64> = precision_schedule(100).collect();
        assert_eq!(v.first(), Some(&128));
        assert_eq!(v.last(), Some(&PRECISION_CAP));
    }

    fn enclose(x: f64, y: f64) -> (Interval, BigRational, Interval, BigRational) {
        let a = Interval::point(Dyadic::from_f64(x));
        let b = Interval::point(Dyadic::from_f64(y));
        (a, Dyadic::from_f64(x).to_rational(), b, Dyadic::from_f64(y).to_rational())
    }

    proptest! {
        #[test]
        fn operations_enclose_exact_results(x in -1e6f64..1e6, y in -1e6f64..1e6) {
            let (a, ra, b, rb) = enclose(x, y);
            for (iv, exact) in [
                (a.add(&b, 20), &ra + &rb),
                (a.sub(&b, 20), &ra - &rb),
                (a.mul(&b, 20), &ra * &rb),
            ] {
                prop_assert!(iv.lo().to_rational() <= exact && exact <= iv.hi().to_rational());
            }
            if y != 0.0 {
                let q = a.div(&b, 20).unwrap();
                let exact = &ra / &rb;
                prop_assert!(q.lo().to_rational() <= exact && exact <= q.hi().to_rational());
            }
        }

        #[test]
        fn sqrt_encloses(x in 0.0f64..1e9) {
            let s = Interval::point(Dyadic::from_f64(x)).sqrt(40).unwrap();
            let r = Dyadic::from_f64(x).to_rational();
            let lo = s.lo().to_rational();
            let hi = s.hi().to_rational();
            prop_assert!(&lo * &lo <= r && r <= &hi * &hi);
        }
    }
}
