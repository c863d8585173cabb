//! Algebraic numbers given by a minimal polynomial and an isolating box.

use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::ball::{precision_schedule, ComplexInterval, Dyadic, Interval, PRECISION_CAP, START_PRECISION};
use crate::error::{Error, Result};
use crate::poly::{cyclotomic_index, factor_over_integers, squarefree_decomposition, FactorConfig};
use crate::roots::{isolate_roots, RootBox};
use crate::IntPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModulusClass {
    LT1,
    EQ1,
    GT1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PisotSalemClass {
    Pisot,
    Salem,
    NeitherPisotNorSalem,
    NotRealGreaterThanOne,
    NotAlgebraicInteger,
}

/// A root of an irreducible integer polynomial, designated by its index in the
/// canonical box ordering of [`isolate_roots`] at 64 bits.
#[derive(Clone)]
pub struct AlgebraicNumber {
    minpoly: IntPoly,
    root_index: usize,
    root_box: RootBox,
    modulus: OnceLock<ModulusClass>,
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, other: &Self) -> bool {
        self.minpoly == other.minpoly && self.root_index == other.root_index
    }
}

impl Eq for AlgebraicNumber {}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = self.to_complex();
        write!(f, "AlgebraicNumber({}, #{} ≈ {:.6}{:+.6}i)", self.minpoly, self.root_index, z.re, z.im)
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{}", crate::scalar::format_rational(&r));
        }
        let z = self.to_complex();
        if self.is_real() {
            write!(f, "root of {} ≈ {:.10}", self.minpoly, z.re)
        } else {
            write!(f, "root of {} ≈ {:.10}{:+.10}i", self.minpoly, z.re, z.im)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct AlgebraicRepr {
    minpoly: IntPoly,
    root_index: usize,
}

impl Serialize for AlgebraicNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AlgebraicRepr { minpoly: self.minpoly.clone(), root_index: self.root_index }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for AlgebraicNumber {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = AlgebraicRepr::deserialize(d)?;
        AlgebraicNumber::new(r.minpoly, r.root_index).map_err(serde::de::Error::custom)
    }
}

fn normalize_minpoly(p: &IntPoly) -> Result<IntPoly> {
    match p.degree() {
        None => Err(Error::ZeroPolynomial),
        Some(0) => Err(Error::NotIrreducible),
        Some(_) => Ok(p.primitive_part()),
    }
}

impl AlgebraicNumber {
    /// Root number `root_index` of `minpoly`, which must be irreducible.
    pub fn new(minpoly: IntPoly, root_index: usize) -> Result<Self> {
        let minpoly = normalize_minpoly(&minpoly)?;
        if minpoly.degree().unwrap() > 1 && !factor_over_integers(&minpoly, &FactorConfig::default())?.is_irreducible() {
            return Err(Error::NotIrreducible);
        }
        Self::new_unchecked(minpoly, root_index)
    }

    fn new_unchecked(minpoly: IntPoly, root_index: usize) -> Result<Self> {
        let boxes = isolate_roots(&minpoly, START_PRECISION)?;
        let count = boxes.len();
        let root_box = boxes.into_iter().nth(root_index).ok_or(Error::RootIndexOutOfRange { index: root_index, count })?;
        Ok(AlgebraicNumber { minpoly, root_index, root_box, modulus: OnceLock::new() })
    }

    pub fn from_rational(r: &BigRational) -> Self {
        let p = IntPoly::new(vec![-r.numer().clone(), r.denom().clone()]);
        Self::new_unchecked(p, 0).expect("linear polynomials have one root")
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(n)))
    }

    /// All roots of an irreducible polynomial, in canonical order.
    pub fn roots_of(minpoly: &IntPoly) -> Result<Vec<Self>> {
        let first = Self::new(minpoly.clone(), 0)?;
        Ok(first.conjugates())
    }

    fn all_roots_unchecked(minpoly: &IntPoly) -> Result<Vec<Self>> {
        let boxes = isolate_roots(minpoly, START_PRECISION)?;
        Ok(boxes
            .into_iter()
            .enumerate()
            .map(|(root_index, root_box)| AlgebraicNumber {
                minpoly: minpoly.clone(),
                root_index,
                root_box,
                modulus: OnceLock::new(),
            })
            .collect())
    }

    /// The root of `minpoly` closest to `z`.
    pub fn nearest_root(minpoly: &IntPoly, z: Complex64) -> Result<Self> {
        Self::roots_of(minpoly)?
            .into_iter()
            .min_by(|a, b| (a.to_complex() - z).norm().total_cmp(&(b.to_complex() - z).norm()))
            .ok_or(Error::ZeroPolynomial)
    }

    pub fn minpoly(&self) -> &IntPoly {
        &self.minpoly
    }

    pub fn root_index(&self) -> usize {
        self.root_index
    }

    pub fn root_box(&self) -> &RootBox {
        &self.root_box
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree().unwrap()
    }

    pub fn is_real(&self) -> bool {
        self.root_box.real
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        (self.degree() == 1).then(|| BigRational::new(-self.minpoly.coeff(0), self.minpoly.coeff(1)))
    }

    pub fn to_complex(&self) -> Complex64 {
        let (re, im) = self.root_box.to_f64();
        Complex64::new(re, im)
    }

    /// Isolating box of width at most `2^-prec` around the designated root.
    pub fn box_at(&self, prec: u64) -> Result<ComplexInterval> {
        if let Some(r) = self.as_rational() {
            return Ok(ComplexInterval::real(Interval::from_rational(&r, prec + 2)));
        }
        if prec <= START_PRECISION {
            return Ok(self.root_box.bx.clone());
        }
        for p in precision_schedule(prec) {
            let boxes = isolate_roots(&self.minpoly, p)?;
            let inside: Vec<&RootBox> = boxes.iter().filter(|b| self.root_box.bx.contains(&b.bx)).collect();
            if inside.len() == 1 {
                return Ok(inside[0].bx.clone());
            }
        }
        Err(Error::PrecisionCapExceeded(PRECISION_CAP))
    }

    /// All conjugates, including `self`.
    pub fn conjugates(&self) -> Vec<AlgebraicNumber> {
        let mut all = Self::all_roots_unchecked(&self.minpoly).expect("minpoly already isolated");
        all[self.root_index] = self.clone();
        all
    }

    pub fn complex_conjugate(&self) -> AlgebraicNumber {
        if self.is_real() {
            return self.clone();
        }
        let mirror = self.root_box.bx.conj();
        self.conjugates().into_iter().find(|c| c.root_box.bx == mirror).expect("boxes of non-real roots are mirrored")
    }

    pub fn is_algebraic_integer(&self) -> bool {
        self.minpoly.is_monic()
    }

    pub fn root_of_unity_order(&self) -> Option<u64> {
        cyclotomic_index(&self.minpoly)
    }

    pub fn modulus_class(&self) -> Result<ModulusClass> {
        if let Some(c) = self.modulus.get() {
            return Ok(*c);
        }
        let c = self.compute_modulus_class()?;
        Ok(*self.modulus.get_or_init(|| c))
    }

    fn compute_modulus_class(&self) -> Result<ModulusClass> {
        if let Some(r) = self.as_rational() {
            let a = r.abs();
            return Ok(match a.cmp(&BigRational::one()) {
                Ordering::Less => ModulusClass::LT1,
                Ordering::Equal => ModulusClass::EQ1,
                Ordering::Greater => ModulusClass::GT1,
            });
        }
        // A unit-modulus root forces the irreducible minpoly to be
        // self-reciprocal; of degree >= 2 it is then palindromic of even degree.
        let trace = self.minpoly.is_self_reciprocal().then(|| trace_polynomial(&self.minpoly));
        for prec in precision_schedule(START_PRECISION) {
            let z = self.box_at(prec)?;
            let wp = prec + 32;
            let n = z.norm_sqr(wp);
            match n.compare(&Dyadic::from_i64(1)) {
                Some(Ordering::Less) => return Ok(ModulusClass::LT1),
                Some(Ordering::Greater) => return Ok(ModulusClass::GT1),
                _ => {}
            }
            if let Some(t_poly) = &trace {
                if let Some(on_circle) = trace_root_on_circle(t_poly, &z, prec, wp)? {
                    if on_circle {
                        return Ok(ModulusClass::EQ1);
                    }
                }
            }
        }
        Err(Error::PrecisionCapExceeded(PRECISION_CAP))
    }

    /// Interval enclosing `|self|`.
    pub fn modulus_interval(&self, prec: u64) -> Result<Interval> {
        self.box_at(prec)?.abs(prec + 16)
    }

    pub fn classify_pisot_salem(&self) -> Result<PisotSalemClass> {
        if !self.is_algebraic_integer() {
            return Ok(PisotSalemClass::NotAlgebraicInteger);
        }
        if !self.is_real() || !self.real_greater_than_one()? {
            return Ok(PisotSalemClass::NotRealGreaterThanOne);
        }
        let mut on_circle = 0;
        for c in self.conjugates() {
            if c.root_index == self.root_index {
                continue;
            }
            match c.modulus_class()? {
                ModulusClass::LT1 => {}
                ModulusClass::EQ1 => on_circle += 1,
                ModulusClass::GT1 => return Ok(PisotSalemClass::NeitherPisotNorSalem),
            }
        }
        Ok(if on_circle == 0 { PisotSalemClass::Pisot } else { PisotSalemClass::Salem })
    }

    fn real_greater_than_one(&self) -> Result<bool> {
        if let Some(r) = self.as_rational() {
            return Ok(r > BigRational::one());
        }
        // An irreducible polynomial of degree >= 2 does not vanish at 1.
        for prec in precision_schedule(START_PRECISION) {
            match self.box_at(prec)?.re.compare(&Dyadic::from_i64(1)) {
                Some(Ordering::Greater) => return Ok(true),
                Some(Ordering::Less) => return Ok(false),
                _ => {}
            }
        }
        Err(Error::PrecisionCapExceeded(PRECISION_CAP))
    }

    /// `-self`, as a root of `P(-x)`.
    pub fn negated(&self) -> AlgebraicNumber {
        let p = self.minpoly.negate_variable().primitive_part();
        let target = self.root_box.bx.neg();
        let roots = AlgebraicNumber::all_roots_unchecked(&p).expect("reflected minpoly is squarefree");
        roots.into_iter().find(|r| r.root_box.bx.intersects(&target)).expect("negated root is isolated")
    }
}

/// `T` with `P(z) = z^m T(z + 1/z)` for a palindromic `P` of degree `2m`.
pub fn trace_polynomial(p: &IntPoly) -> IntPoly {
    let n = p.degree().unwrap();
    let m = n / 2;
    let t = IntPoly::x();
    let mut d_prev = IntPoly::constant(BigInt::from(2));
    let mut d = t.clone();
    let mut out = IntPoly::constant(p.coeff(m));
    for j in 1..=m {
        out = &out + &d.scale(&p.coeff(m + j));
        let next = &(&t * &d) - &d_prev;
        d_prev = std::mem::replace(&mut d, next);
    }
    out
}

/// `Some(true)` if the trace value of the root in `z` is certified to be a
/// real root of `t_poly` in `(-2, 2)`, `Some(false)` if certified otherwise,
/// `None` if undecided at this precision.
fn trace_root_on_circle(t_poly: &IntPoly, z: &ComplexInterval, prec: u64, wp: u64) -> Result<Option<bool>> {
    let t = z.add(&z.recip(wp)?, wp);
    let roots = isolate_roots(t_poly, prec)?;
    let hits: Vec<&RootBox> = roots.iter().filter(|r| r.bx.intersects(&t)).collect();
    if hits.len() != 1 {
        return Ok(None);
    }
    let r = hits[0];
    if !r.real {
        return Ok(Some(false));
    }
    let two = Interval::new(Dyadic::from_i64(-2), Dyadic::from_i64(2));
    if two.strictly_contains(&r.bx.re) {
        Ok(Some(true))
    } else if !two.intersects(&r.bx.re) {
        Ok(Some(false))
    } else {
        Ok(None)
    }
}

/// Interval of width at most `tol` containing the Mahler measure of `p`.
pub fn mahler_measure(p: &IntPoly, tol: &BigRational) -> Result<Interval> {
    let lc = p.leading().ok_or(Error::ZeroPolynomial)?.abs();
    let parts = squarefree_decomposition(p)?;
    let tol_d = Dyadic::from_rational_floor(tol, 64);
    let one = Dyadic::from_i64(1);
    for prec in precision_schedule(START_PRECISION) {
        let wp = prec + 32;
        let mut acc = Interval::from_int(&lc);
        for (part, mult) in &parts {
            for r in isolate_roots(part, prec)? {
                let m = r.bx.abs(wp)?;
                let m = Interval::new(m.lo().clone().max(one.clone()), m.hi().clone().max(one.clone()));
                acc = acc.mul(&m.pow(*mult as u64, wp), wp);
            }
        }
        if acc.width() <= tol_d {
            return Ok(acc);
        }
    }
    Err(Error::PrecisionCapExceeded(PRECISION_CAP))
}

/// Classification of `|alpha|` for a real algebraic `alpha`.
pub fn classify_abs_pisot_salem(a: &AlgebraicNumber) -> Result<PisotSalemClass> {
    if a.is_real() && a.to_complex().re < 0.0 {
        a.negated().classify_pisot_salem()
    } else {
        a.classify_pisot_salem()
    }
}

/// Whether `x^d ≡ 1` modulo the minimal polynomial, in exact arithmetic.
pub fn power_is_one(minpoly: &IntPoly, d: u64) -> bool {
    let m = minpoly.to_rat();
    let mut acc = crate::RatPoly::one();
    let mut base = crate::RatPoly::x().rem(&m);
    let mut e = d;
    while e > 0 {
        if e & 1 == 1 {
            acc = (&acc * &base).rem(&m);
        }
        base = (&base * &base).rem(&m);
        e >>= 1;
    }
    acc == crate::RatPoly::one()
}
