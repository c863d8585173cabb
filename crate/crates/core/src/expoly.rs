//! Exponential polynomials `x_k = sum_i F_i(k) alpha_i^k`.
//!
//! Coefficients of `F_i` live in `Q(alpha_i)` and are stored as rational
//! polynomials in `alpha_i`, reduced modulo its minimal polynomial. Symbolic
//! irrationals (inputs like `sqrt 2`) are carried as rigorous rational
//! enclosures and are only allowed on real bases.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebraic::AlgebraicNumber;
use crate::ball::{ComplexInterval, Interval, PRECISION_CAP};
use crate::error::{Error, Result};
use crate::roots::power_sums;
use crate::scalar::{binomial, format_rational, serde_num, RationalInterval};
use crate::{IntPoly, RatPoly};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicIrrational {
    pub label: String,
    #[serde(with = "serde_num::rational")]
    pub approx: BigRational,
    #[serde(with = "serde_num::rational")]
    pub err: BigRational,
    /// Asserted to lie outside the field generated by the term's base.
    pub known_irrational: bool,
}

impl SymbolicIrrational {
    pub fn enclosure(&self) -> RationalInterval {
        RationalInterval::new(&self.approx - &self.err, &self.approx + &self.err)
    }

    fn interval(&self, prec: u64) -> Interval {
        let e = self.enclosure();
        Interval::new(Interval::from_rational(&e.lo, prec).lo().clone(), Interval::from_rational(&e.hi, prec).hi().clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExpolyCoefficient {
    Rational(BigRational),
    /// `g(alpha)` for the term's base `alpha`.
    InAlpha(RatPoly),
    Symbolic(SymbolicIrrational),
}

impl ExpolyCoefficient {
    pub fn rational(n: i64, d: i64) -> Self {
        ExpolyCoefficient::Rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// Representing polynomial for coefficients in the base field.
    pub fn field_element(&self) -> Option<RatPoly> {
        match self {
            ExpolyCoefficient::Rational(r) => Some(RatPoly::constant(r.clone())),
            ExpolyCoefficient::InAlpha(g) => Some(g.clone()),
            ExpolyCoefficient::Symbolic(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ExpolyCoefficient::Rational(r) => r.is_zero(),
            ExpolyCoefficient::InAlpha(g) => g.is_zero(),
            ExpolyCoefficient::Symbolic(_) => false,
        }
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self, ExpolyCoefficient::Symbolic(_))
    }

    fn from_field(g: RatPoly) -> Self {
        match g.degree() {
            None => ExpolyCoefficient::Rational(BigRational::zero()),
            Some(0) => ExpolyCoefficient::Rational(g.coeff(0)),
            _ => ExpolyCoefficient::InAlpha(g),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CoeffRepr {
    Rational(#[serde(with = "serde_num::rational")] BigRational),
    InAlpha {
        in_alpha: RatPoly,
    },
    Symbol {
        symbol: String,
        #[serde(with = "serde_num::rational")]
        approx: BigRational,
        #[serde(with = "serde_num::rational")]
        err: BigRational,
        #[serde(default)]
        irrational: bool,
    },
}

impl Serialize for ExpolyCoefficient {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExpolyCoefficient::Rational(r) => CoeffRepr::Rational(r.clone()),
            ExpolyCoefficient::InAlpha(g) => CoeffRepr::InAlpha { in_alpha: g.clone() },
            ExpolyCoefficient::Symbolic(x) => CoeffRepr::Symbol {
                symbol: x.label.clone(),
                approx: x.approx.clone(),
                err: x.err.clone(),
                irrational: x.known_irrational,
            },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExpolyCoefficient {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(match CoeffRepr::deserialize(d)? {
            CoeffRepr::Rational(r) => ExpolyCoefficient::Rational(r),
            CoeffRepr::InAlpha { in_alpha } => ExpolyCoefficient::InAlpha(in_alpha),
            CoeffRepr::Symbol { symbol, approx, err, irrational } => {
                if err.is_negative() {
                    return Err(serde::de::Error::custom("negative error bound"));
                }
                ExpolyCoefficient::Symbolic(SymbolicIrrational { label: symbol, approx, err, known_irrational: irrational })
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub base: AlgebraicNumber,
    /// Coefficients of `F`, ascending in the power of `k`.
    pub coeffs: Vec<ExpolyCoefficient>,
}

impl Term {
    pub fn new(base: AlgebraicNumber, coeffs: Vec<ExpolyCoefficient>) -> Self {
        Term { base, coeffs }
    }

    /// `c * r^k` with rational `r` and `c`.
    pub fn geometric(c: BigRational, r: BigRational) -> Self {
        Term { base: AlgebraicNumber::from_rational(&r), coeffs: vec![ExpolyCoefficient::Rational(c)] }
    }

    /// Degree of `F`; `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.coeffs.iter().rposition(|c| !c.is_zero()).map_or(-1, |i| i as i64)
    }

    pub fn has_symbolic(&self) -> bool {
        self.coeffs.iter().any(ExpolyCoefficient::is_symbolic)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum BaseRepr {
    Rational(#[serde(with = "serde_num::rational")] BigRational),
    Algebraic { minpoly: IntPoly, root_index: usize },
    /// Input convenience: the root nearest to `[re]` or `[re, im]`.
    Nearest { minpoly: IntPoly, near: Vec<f64> },
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    base: BaseRepr,
    coeffs: Vec<ExpolyCoefficient>,
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let base = match self.base.as_rational() {
            Some(r) => BaseRepr::Rational(r),
            None => BaseRepr::Algebraic { minpoly: self.base.minpoly().clone(), root_index: self.base.root_index() },
        };
        TermRepr { base, coeffs: self.coeffs.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let t = TermRepr::deserialize(d)?;
        let base = match t.base {
            BaseRepr::Rational(r) => AlgebraicNumber::from_rational(&r),
            BaseRepr::Algebraic { minpoly, root_index } => {
                AlgebraicNumber::new(minpoly, root_index).map_err(serde::de::Error::custom)?
            }
            BaseRepr::Nearest { minpoly, near } => {
                let z = match near[..] {
                    [re] => Complex64::new(re, 0.0),
                    [re, im] => Complex64::new(re, im),
                    _ => return Err(serde::de::Error::custom("near must be [re] or [re, im]")),
                };
                AlgebraicNumber::nearest_root(&minpoly, z).map_err(serde::de::Error::custom)?
            }
        };
        Ok(Term { base, coeffs: t.coeffs })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RealnessCertificate {
    AllRealTerms,
    ConjugateClosed,
    Unverified,
}

/// A validated exponential polynomial with pairwise distinct bases and
/// nonzero coefficient polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expoly {
    terms: Vec<Term>,
    realness: RealnessCertificate,
}

impl Serialize for Expoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Expoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Expoly::new(Vec::<Term>::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

fn minpoly_rat(a: &AlgebraicNumber) -> RatPoly {
    a.minpoly().to_rat()
}

fn normalize_term(t: Term) -> Result<Term> {
    let m = minpoly_rat(&t.base);
    let real = t.base.is_real();
    let mut coeffs = Vec::with_capacity(t.coeffs.len());
    for c in t.coeffs {
        coeffs.push(match c {
            ExpolyCoefficient::InAlpha(g) => ExpolyCoefficient::from_field(g.rem(&m)),
            ExpolyCoefficient::Symbolic(s) if !real => {
                return Err(Error::UnsupportedCoefficient(format!(
                    "symbolic coefficient {} on the non-real base {}",
                    s.label, t.base
                )))
            }
            other => other,
        });
    }
    while coeffs.last().is_some_and(ExpolyCoefficient::is_zero) {
        coeffs.pop();
    }
    Ok(Term { base: t.base, coeffs })
}

/// Realness certificate of a term list; bases must be pairwise distinct.
pub fn validate(terms: &[Term]) -> Result<RealnessCertificate> {
    for i in 0..terms.len() {
        for j in i + 1..terms.len() {
            if terms[i].base == terms[j].base {
                return Err(Error::DuplicateBase(i, j));
            }
        }
    }
    if terms.iter().all(|t| t.base.is_real()) {
        return Ok(RealnessCertificate::AllRealTerms);
    }
    // conj(g(alpha)) = g(conj alpha) for rational g, so a conjugate term
    // carries the same representing polynomials.
    let closed = terms.iter().filter(|t| !t.base.is_real()).all(|t| {
        let c = t.base.complex_conjugate();
        terms.iter().any(|u| u.base == c && u.coeffs == t.coeffs)
    });
    Ok(if closed { RealnessCertificate::ConjugateClosed } else { RealnessCertificate::Unverified })
}

impl Expoly {
    /// Normalizes coefficients, prunes zero terms and validates.
    pub fn new(terms: Vec<Term>) -> Result<Self> {
        let terms: Vec<Term> =
            terms.into_iter().map(normalize_term).filter(|t| t.as_ref().map_or(true, |t| !t.coeffs.is_empty())).collect::<Result<_>>()?;
        let realness = validate(&terms)?;
        Ok(Expoly { terms, realness })
    }

    pub fn zero() -> Self {
        Expoly { terms: Vec::new(), realness: RealnessCertificate::AllRealTerms }
    }

    /// `sum_i c_i r_i^k` with rational data.
    pub fn rational_geometric(pairs: &[(BigRational, BigRational)]) -> Result<Self> {
        Expoly::new(pairs.iter().map(|(c, r)| Term::geometric(c.clone(), r.clone())).collect())
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn realness(&self) -> RealnessCertificate {
        self.realness
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn has_symbolic(&self) -> bool {
        self.terms.iter().any(Term::has_symbolic)
    }

    /// `prod (primitive minpoly of alpha_i)^(deg F_i + 1)`, grouping conjugate bases.
    pub fn annihilator(&self) -> IntPoly {
        let mut groups: Vec<(IntPoly, usize)> = Vec::new();
        for t in &self.terms {
            let e = t.degree() as usize + 1;
            match groups.iter_mut().find(|(m, _)| m == t.base.minpoly()) {
                Some((_, k)) => *k = (*k).max(e),
                None => groups.push((t.base.minpoly().clone(), e)),
            }
        }
        groups.iter().fold(IntPoly::one(), |acc, (m, e)| &acc * &m.pow(*e as u32))
    }

    /// Expoly of `sum_s b_s x_(k+s)` for `Q = sum_s b_s x^s`.
    pub fn apply_q_transform(&self, q: &IntPoly) -> Result<Expoly> {
        if q.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let qr = q.to_rat();
        let mut out = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let m = minpoly_rat(&t.base);
            let d = t.coeffs.len();
            // w[j] = (Theta^j Q)(alpha) in Q(alpha).
            let w: Vec<RatPoly> = (0..d).map(|j| qr.theta(j).rem(&m)).collect();
            let mut coeffs = Vec::with_capacity(d);
            for g in 0..d {
                let mut field = RatPoly::zero();
                let mut symbolic: Vec<(&SymbolicIrrational, RatPoly)> = Vec::new();
                for i in g..d {
                    let mult = w[i - g].scale(&BigRational::from_integer(binomial(i as u64, g as u64)));
                    if mult.is_zero() {
                        continue;
                    }
                    match &t.coeffs[i] {
                        ExpolyCoefficient::Symbolic(s) => symbolic.push((s, mult)),
                        c => {
                            let f = c.field_element().expect("non-symbolic coefficient");
                            field = &field + &(&f * &mult).rem(&m);
                        }
                    }
                }
                coeffs.push(if symbolic.is_empty() {
                    ExpolyCoefficient::from_field(field)
                } else {
                    ExpolyCoefficient::Symbolic(combine_symbolic(&t.base, &field, &symbolic)?)
                });
            }
            out.push(Term { base: t.base.clone(), coeffs });
        }
        Expoly::new(out)
    }

    /// Exact value at `k` when no ball evaluation is needed.
    pub fn eval_exact(&self, k: u64) -> Option<BigRational> {
        let ev = ExpolyEvaluator::new(self).ok()?;
        ev.is_exact().then(|| ev.exact_part(k))
    }
}

impl fmt::Display for Expoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let cs: Vec<String> = t
                .coeffs
                .iter()
                .map(|c| match c {
                    ExpolyCoefficient::Rational(r) => format_rational(r),
                    ExpolyCoefficient::InAlpha(g) => format!("({g})(a)"),
                    ExpolyCoefficient::Symbolic(s) => s.label.clone(),
                })
                .collect();
            write!(f, "[{}]*({})^k", cs.join(", "), t.base)?;
        }
        Ok(())
    }
}

/// `field(alpha) + sum s_j * mult_j(alpha)` as a new symbolic coefficient.
fn combine_symbolic(alpha: &AlgebraicNumber, field: &RatPoly, parts: &[(&SymbolicIrrational, RatPoly)]) -> Result<SymbolicIrrational> {
    const PREC: u64 = 256;
    let a = alpha.box_at(PREC)?.re;
    let eval = |g: &RatPoly| -> Interval {
        g.coeffs().iter().rev().fold(Interval::zero(), |acc, c| acc.mul(&a, PREC).add(&Interval::from_rational(c, PREC), PREC))
    };
    let mut total = eval(field);
    let mut labels = Vec::new();
    if !field.is_zero() {
        labels.push(format!("({field})(a)"));
    }
    for (s, mult) in parts {
        total = total.add(&s.interval(PREC).mul(&eval(mult), PREC), PREC);
        labels.push(format!("{}*({mult})(a)", s.label));
    }
    let lo = total.lo().to_rational();
    let hi = total.hi().to_rational();
    let two = BigRational::from_integer(BigInt::from(2));
    // Irrational times a nonzero rational plus a rational stays irrational.
    let known_irrational = parts.len() == 1
        && parts[0].0.known_irrational
        && parts[0].1.degree() == Some(0)
        && field.degree().is_none_or(|d| d == 0);
    Ok(SymbolicIrrational {
        label: labels.join(" + "),
        approx: (&lo + &hi) / &two,
        err: (&hi - &lo) / &two,
        known_irrational,
    })
}

/// Complete conjugate set with identical coefficient polynomials: its sum is a
/// trace and therefore rational.
struct TraceGroup {
    m: RatPoly,
    coeffs: Vec<RatPoly>,
    sums: Vec<BigRational>,
}

impl TraceGroup {
    fn trace(&self, g: &RatPoly) -> BigRational {
        g.coeffs().iter().zip(&self.sums).fold(BigRational::zero(), |acc, (c, s)| acc + c * s)
    }

    fn value(&self, k: u64, xk: &RatPoly) -> BigRational {
        let kk = BigRational::from_integer(BigInt::from(k));
        let mut f = RatPoly::zero();
        for c in self.coeffs.iter().rev() {
            f = &f.scale(&kk) + c;
        }
        self.trace(&(&f * xk).rem(&self.m))
    }

    fn x_pow(&self, k: u64) -> RatPoly {
        let mut acc = RatPoly::one().rem(&self.m);
        let mut base = RatPoly::x().rem(&self.m);
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = (&acc * &base).rem(&self.m);
            }
            e >>= 1;
            if e > 0 {
                base = (&base * &base).rem(&self.m);
            }
        }
        acc
    }
}

struct TermBoxes {
    alpha: ComplexInterval,
    coeffs: Vec<ComplexInterval>,
}

/// Evaluates an expoly as an exact rational part plus a ball part.
pub struct ExpolyEvaluator<'a> {
    x: &'a Expoly,
    groups: Vec<TraceGroup>,
    ball_terms: Vec<usize>,
    log2_modulus: Vec<f64>,
    cache: Mutex<HashMap<(usize, u64), Arc<OnceLock<Result<TermBoxes>>>>>,
}

impl<'a> ExpolyEvaluator<'a> {
    pub fn new(x: &'a Expoly) -> Result<Self> {
        let mut groups = Vec::new();
        let mut ball_terms = Vec::new();
        let mut seen = vec![false; x.terms.len()];
        for i in 0..x.terms.len() {
            if seen[i] {
                continue;
            }
            let m = x.terms[i].base.minpoly();
            let members: Vec<usize> = (i..x.terms.len()).filter(|&j| x.terms[j].base.minpoly() == m).collect();
            for &j in &members {
                seen[j] = true;
            }
            let first = &x.terms[i];
            let complete = members.len() == first.base.degree()
                && !first.has_symbolic()
                && members.iter().all(|&j| x.terms[j].coeffs == first.coeffs);
            if complete {
                groups.push(TraceGroup {
                    m: m.to_rat(),
                    coeffs: first.coeffs.iter().map(|c| c.field_element().expect("checked")).collect(),
                    sums: power_sums(m, m.degree().unwrap()),
                });
            } else {
                ball_terms.extend(members);
            }
        }
        ball_terms.sort_unstable();
        let log2_modulus = x.terms.iter().map(|t| t.base.to_complex().norm().log2()).collect();
        Ok(ExpolyEvaluator { x, groups, ball_terms, log2_modulus, cache: Mutex::new(HashMap::new()) })
    }

    pub fn expoly(&self) -> &Expoly {
        self.x
    }

    pub fn is_exact(&self) -> bool {
        self.ball_terms.is_empty()
    }

    pub fn exact_part(&self, k: u64) -> BigRational {
        self.groups.iter().fold(BigRational::zero(), |acc, g| acc + g.value(k, &g.x_pow(k)))
    }

    /// Exact parts for `k = k_min..=k_max`, stepping `x^k mod m` incrementally.
    pub fn exact_parts(&self, k_min: u64, k_max: u64) -> Vec<BigRational> {
        let n = (k_max + 1).saturating_sub(k_min) as usize;
        let mut out = vec![BigRational::zero(); n];
        for g in &self.groups {
            let mut xk = g.x_pow(k_min);
            for (idx, slot) in out.iter_mut().enumerate() {
                *slot += g.value(k_min + idx as u64, &xk);
                xk = xk.shift(1).rem(&g.m);
            }
        }
        out
    }

    /// Extra bits lost to the growth of `alpha^k` and `k^deg`.
    pub fn growth_bits(&self, k: u64) -> u64 {
        let kb = 64 - k.max(1).leading_zeros() as u64;
        self.ball_terms
            .iter()
            .map(|&i| {
                let deg = self.x.terms[i].coeffs.len() as u64;
                let g = (k as f64 * self.log2_modulus[i].max(0.0)).ceil() as u64;
                g + kb * deg + 16
            })
            .max()
            .unwrap_or(0)
    }

    fn boxes(&self, term: usize, level: u64) -> Result<Arc<OnceLock<Result<TermBoxes>>>> {
        let cell = {
            let mut cache = self.cache.lock().expect("cache lock");
            cache.entry((term, level)).or_default().clone()
        };
        cell.get_or_init(|| {
            let t = &self.x.terms[term];
            let alpha = t.base.box_at(level)?;
            let wp = level + 32;
            let coeffs = t
                .coeffs
                .iter()
                .map(|c| match c {
                    ExpolyCoefficient::Symbolic(s) => ComplexInterval::real(s.interval(wp)),
                    other => {
                        let g = other.field_element().expect("non-symbolic");
                        g.coeffs().iter().rev().fold(ComplexInterval::zero(), |acc, c| {
                            acc.mul(&alpha, wp).add(&ComplexInterval::real(Interval::from_rational(c, wp)), wp)
                        })
                    }
                })
                .collect();
            Ok(TermBoxes { alpha, coeffs })
        });
        Ok(cell)
    }

    /// Enclosure of the ball part at `k`, aiming at about `prec` bits after the binary point.
    pub fn ball_part(&self, k: u64, prec: u64) -> Result<ComplexInterval> {
        let mut total = ComplexInterval::zero();
        let level = (prec + self.growth_bits(k)).next_power_of_two();
        if level > PRECISION_CAP {
            return Err(Error::PrecisionCapExceeded(PRECISION_CAP));
        }
        let wp = level + 32;
        for &i in &self.ball_terms {
            let cell = self.boxes(i, level)?;
            let b = match cell.get().expect("initialized") {
                Ok(b) => b,
                Err(e) => return Err(e.clone()),
            };
            let ak = b.alpha.pow(k, wp);
            let kk = ComplexInterval::real(Interval::from_int(&BigInt::from(k)));
            let f = b.coeffs.iter().rev().fold(ComplexInterval::zero(), |acc, c| acc.mul(&kk, wp).add(c, wp));
            total = total.add(&f.mul(&ak, wp), wp);
        }
        Ok(total)
    }

    /// Real enclosure of `x_k - shift` at about `prec` fractional bits.
    pub fn value_interval(&self, k: u64, exact: &BigRational, shift: &BigRational, prec: u64) -> Result<Interval> {
        let r = exact - shift;
        let mag = (r.numer().bits() as i64 - r.denom().bits() as i64).max(0) as u64;
        let ex = Interval::from_rational(&r, prec + mag + 16);
        if self.ball_terms.is_empty() {
            return Ok(ex);
        }
        let b = self.ball_part(k, prec)?;
        if !b.im.contains_zero() {
            return Err(Error::NotReal(k));
        }
        let wp = prec + mag.max(self.growth_bits(k)) + 32;
        Ok(b.re.add(&ex, wp))
    }
}

/// Approximate complex value, for diagnostics and plots only.
pub fn approx_value(x: &Expoly, k: u64) -> Complex64 {
    x.terms
        .iter()
        .map(|t| {
            let a = t.base.to_complex();
            let f = t.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| {
                let cv = match c {
                    ExpolyCoefficient::Rational(r) => Complex64::new(crate::scalar::rational_to_f64(r), 0.0),
                    ExpolyCoefficient::InAlpha(g) => g.coeffs().iter().rev().fold(Complex64::new(0.0, 0.0), |s, c| {
                        s * a + crate::scalar::rational_to_f64(c)
                    }),
                    ExpolyCoefficient::Symbolic(s) => Complex64::new(crate::scalar::rational_to_f64(&s.approx), 0.0),
                };
                acc * k as f64 + cv
            });
            f * a.powu(k.to_u32().unwrap_or(u32::MAX))
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::Dyadic;
    use crate::scalar::rat;
    use proptest::prelude::*;

    fn geo(c: BigRational, r: BigRational) -> Term {
        Term::geometric(c, r)
    }

    fn golden() -> AlgebraicNumber {
        AlgebraicNumber::nearest_root(&IntPoly::from_i64(&[-1, -1, 1]), Complex64::new(1.6, 0.0)).unwrap()
    }

    fn ibase(re: f64, im: f64) -> AlgebraicNumber {
        AlgebraicNumber::nearest_root(&IntPoly::from_i64(&[1, 0, 1]), Complex64::new(re, im)).unwrap()
    }

    #[test]
    fn validation() {
        let x = Expoly::new(vec![geo(rat(1, 1), rat(3, 2))]).unwrap();
        assert_eq!(x.realness(), RealnessCertificate::AllRealTerms);
        let half = ExpolyCoefficient::rational(1, 2);
        let x = Expoly::new(vec![Term::new(ibase(0.0, 1.0), vec![half.clone()]), Term::new(ibase(0.0, -1.0), vec![half])]).unwrap();
        assert_eq!(x.realness(), RealnessCertificate::ConjugateClosed);
        let x = Expoly::new(vec![Term::new(ibase(0.0, 1.0), vec![ExpolyCoefficient::rational(1, 1)])]).unwrap();
        assert_eq!(x.realness(), RealnessCertificate::Unverified);
        let dup = Expoly::new(vec![geo(rat(1, 1), rat(3, 2)), geo(rat(2, 1), rat(3, 2))]);
        assert_eq!(dup, Err(Error::DuplicateBase(0, 1)));
        let zero = Expoly::new(vec![geo(rat(0, 1), rat(3, 2))]).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn annihilators() {
        let x = Expoly::new(vec![geo(rat(1, 1), rat(3, 2))]).unwrap();
        assert_eq!(x.annihilator(), IntPoly::from_i64(&[-3, 2]));
        let two = AlgebraicNumber::from_i64(2);
        let x = Expoly::new(vec![Term::new(two, vec![ExpolyCoefficient::rational(0, 1), ExpolyCoefficient::rational(1, 1)])]).unwrap();
        assert_eq!(x.annihilator(), IntPoly::from_i64(&[4, -4, 1]));
        let phi = golden();
        let one = vec![ExpolyCoefficient::rational(1, 1)];
        let lucas = Expoly::new(phi.conjugates().into_iter().map(|b| Term::new(b, one.clone())).collect()).unwrap();
        assert_eq!(lucas.annihilator(), IntPoly::from_i64(&[-1, -1, 1]));
        assert_eq!(lucas.eval_exact(10), Some(rat(123, 1)));
    }

    #[test]
    fn q_transform_examples() {
        let two = AlgebraicNumber::from_i64(2);
        let x = Expoly::new(vec![Term::new(two.clone(), vec![ExpolyCoefficient::rational(0, 1), ExpolyCoefficient::rational(1, 1)])]).unwrap();
        let y = x.apply_q_transform(&IntPoly::from_i64(&[-1, 1])).unwrap();
        let expect = Expoly::new(vec![Term::new(two, vec![ExpolyCoefficient::rational(2, 1), ExpolyCoefficient::rational(1, 1)])]).unwrap();
        assert_eq!(y, expect);
        let g = Expoly::new(vec![geo(rat(1, 1), rat(3, 2))]).unwrap();
        assert!(g.apply_q_transform(&IntPoly::from_i64(&[-3, 2])).unwrap().is_zero());
        assert_eq!(g.apply_q_transform(&IntPoly::one()).unwrap(), g);
    }

    #[test]
    fn in_alpha_reduction_and_serde() {
        let phi = golden();
        // alpha^2 reduces to alpha + 1.
        let t = Term::new(phi.clone(), vec![ExpolyCoefficient::InAlpha(RatPoly::from_i64(&[0, 0, 1]))]);
        let x = Expoly::new(vec![t]).unwrap();
        assert_eq!(x.terms()[0].coeffs[0], ExpolyCoefficient::InAlpha(RatPoly::from_i64(&[1, 1])));
        let s = serde_json::to_string(&x).unwrap();
        let back: Expoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        let input = r#"[{"base": "3/2", "coeffs": ["1"]},
                        {"base": {"minpoly": [-1, -1, 1], "root_index": 1},
                         "coeffs": [{"symbol": "sqrt2", "approx": "1.41421356237", "err": "1e-11", "irrational": true}]}]"#;
        let y: Expoly = serde_json::from_str(input).unwrap();
        assert!(y.has_symbolic());
        let again: Expoly = serde_json::from_str(&serde_json::to_string(&y).unwrap()).unwrap();
        assert_eq!(again, y);
    }

    #[test]
    fn symbolic_rejected_on_complex_base() {
        let s = ExpolyCoefficient::Symbolic(SymbolicIrrational {
            label: "c".into(),
            approx: rat(1, 1),
            err: rat(0, 1),
            known_irrational: false,
        });
        assert!(matches!(Expoly::new(vec![Term::new(ibase(0.0, 1.0), vec![s])]), Err(Error::UnsupportedCoefficient(_))));
    }

    #[test]
    fn ball_part_encloses_golden_powers() {
        let x = Expoly::new(vec![Term::new(golden(), vec![ExpolyCoefficient::rational(1, 1)])]).unwrap();
        let ev = ExpolyEvaluator::new(&x).unwrap();
        assert!(!ev.is_exact());
        let v = ev.value_interval(10, &BigRational::zero(), &BigRational::zero(), 64).unwrap();
        // phi^10 = 123 - phibar^10, so it lies in (122.99, 123).
        assert!(v.compare(&Dyadic::from_i64(123)) == Some(std::cmp::Ordering::Less));
        assert!((v.to_f64() - 122.991869381).abs() < 1e-8);
    }

    fn direct_transform(x: &Expoly, q: &IntPoly, k: u64) -> BigRational {
        q.coeffs()
            .iter()
            .enumerate()
            .fold(BigRational::zero(), |acc, (s, b)| acc + BigRational::from_integer(b.clone()) * x.eval_exact(k + s as u64).unwrap())
    }

    fn rational_expoly() -> impl Strategy<Value = Expoly> {
        let term = (
            (-6i64..=6, 1i64..=4).prop_filter("nonzero base", |(n, _)| *n != 0),
            prop::collection::vec((-5i64..=5, 1i64..=3), 1..=3),
        );
        prop::collection::vec(term, 1..=3).prop_filter_map("distinct bases", |ts| {
            let terms = ts
                .into_iter()
                .map(|((n, d), cs)| Term::new(AlgebraicNumber::from_rational(&rat(n, d)), cs.into_iter().map(|(a, b)| ExpolyCoefficient::rational(a, b)).collect()))
                .collect();
            Expoly::new(terms).ok()
        })
    }

    fn small_q() -> impl Strategy<Value = IntPoly> {
        prop::collection::vec(-4i64..=4, 1..=5).prop_map(|c| IntPoly::from_i64(&c)).prop_filter("nonzero", |q| !q.is_zero())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(30))]
        #[test]
        fn transform_matches_direct_sum(x in rational_expoly(), q in small_q()) {
            let y = x.apply_q_transform(&q).unwrap();
            for k in 1..=50u64 {
                let lhs = y.eval_exact(k).unwrap_or_else(BigRational::zero);
                prop_assert_eq!(lhs, direct_transform(&x, &q, k));
            }
            prop_assert!(x.apply_q_transform(&x.annihilator()).unwrap().is_zero());
        }

        #[test]
        fn transform_composes(x in rational_expoly(), q1 in small_q(), q2 in small_q()) {
            let both = x.apply_q_transform(&(&q1 * &q2)).unwrap();
            let seq = x.apply_q_transform(&q1).unwrap().apply_q_transform(&q2).unwrap();
            prop_assert_eq!(both, seq);
        }
    }
}
