//! Certified isolation of the complex roots of a squarefree integer polynomial.
//!
//! Approximations come from the Aberth iteration (first in `f64`, then polished
//! at the working precision); every box is then certified by the Krawczyk test
//! `K(B) = c - y P(c) + (1 - y P'(B)) (B - c) ⊂ int B`, which proves that `B`
//! holds exactly one root. Real roots get boxes symmetric about the real axis,
//! so uniqueness also proves realness; non-real roots come in mirrored pairs.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, Zero};

use crate::ball::{precision_schedule, ComplexInterval, Dyadic, Interval, PRECISION_CAP};
use crate::error::{Error, Result};
use crate::{IntPoly, RatPoly};

/// A certified isolating box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootBox {
    pub bx: ComplexInterval,
    /// The root is provably real.
    pub real: bool,
}

impl RootBox {
    pub fn center(&self) -> (Dyadic, Dyadic) {
        self.bx.mid()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        self.bx.to_f64()
    }
}

/// Isolates all roots of a squarefree polynomial with boxes of width at most
/// `2^-precision`, ordered by real part, then imaginary part, of the centers.
pub fn isolate_roots(p: &IntPoly, precision: u64) -> Result<Vec<RootBox>> {
    let n = p.degree().ok_or(Error::ZeroPolynomial)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    if p.gcd(&p.derivative()).degree() != Some(0) {
        return Err(Error::NotSquarefree);
    }
    if n == 1 {
        let r = num_rational::BigRational::new(-p.coeff(0), p.coeff(1));
        let re = Interval::from_rational(&r, precision + 2);
        return Ok(vec![RootBox { bx: ComplexInterval::real(re), real: true }]);
    }
    let real_count = count_real_roots(p);
    let approx = aberth_f64(p);
    let mut start: Vec<Cf> = approx.iter().map(|z| Cf::from_c64(*z)).collect();
    for wp in precision_schedule(precision + 64) {
        start = aberth_polish(p, start, wp);
        if let Some(boxes) = certify(p, &start, real_count, precision, wp) {
            return Ok(boxes);
        }
    }
    Err(Error::PrecisionCapExceeded(PRECISION_CAP))
}

/// Number of distinct real roots, by a Sturm sequence.
pub fn count_real_roots(p: &IntPoly) -> usize {
    let mut seq: Vec<IntPoly> = vec![p.clone(), p.derivative()];
    loop {
        let a = seq[seq.len() - 2].to_rat();
        let b = seq[seq.len() - 1].to_rat();
        if b.is_zero() {
            seq.pop();
            break;
        }
        let r = -a.rem(&b);
        if r.is_zero() {
            break;
        }
        seq.push(positive_multiple(&r));
    }
    let signs_at = |neg_inf: bool| -> usize {
        let signs: Vec<i32> = seq
            .iter()
            .filter(|q| !q.is_zero())
            .map(|q| {
                let s = if q.leading().unwrap().is_positive() { 1 } else { -1 };
                if neg_inf && q.degree().unwrap() % 2 == 1 {
                    -s
                } else {
                    s
                }
            })
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    signs_at(true) - signs_at(false)
}

/// Integer polynomial differing from `r` by a positive factor.
fn positive_multiple(r: &RatPoly) -> IntPoly {
    let c = RatPoly::clear_denominators(r);
    let g = c.content();
    c.map(|a| a / &g)
}

fn aberth_f64(p: &IntPoly) -> Vec<Complex64> {
    let n = p.degree().unwrap();
    let lc = p.leading().unwrap();
    // Coefficients scaled by the leading coefficient; huge ratios saturate.
    let coeffs: Vec<f64> = p
        .coeffs()
        .iter()
        .map(|c| crate::scalar::rational_to_f64(&num_rational::BigRational::new(c.clone(), lc.clone())))
        .collect();
    let radius = (1..=n)
        .map(|k| coeffs[n - k].abs().powf(1.0 / k as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3)
        * 2.0;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64 + 0.4))
        .collect();
    let eval = |x: Complex64| -> (Complex64, Complex64) {
        let mut v = Complex64::zero();
        let mut d = Complex64::zero();
        for &c in coeffs.iter().rev() {
            d = d * x + v;
            v = v * x + c;
        }
        (v, d)
    };
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (v, d) = eval(z[i]);
            if v == Complex64::zero() {
                continue;
            }
            let ratio = v / d;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (1.0 - ratio * s);
            if w.re.is_finite() && w.im.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Complex dyadic float for non-rigorous iteration.
#[derive(Clone, Debug)]
struct Cf {
    re: Dyadic,
    im: Dyadic,
}

impl Cf {
    fn from_c64(z: Complex64) -> Self {
        let f = |x: f64| if x.is_finite() { Dyadic::from_f64(x) } else { Dyadic::zero() };
        Cf { re: f(z.re), im: f(z.im) }
    }

    fn zero() -> Self {
        Cf { re: Dyadic::zero(), im: Dyadic::zero() }
    }

    fn add(&self, o: &Cf, p: u64) -> Cf {
        Cf { re: self.re.add(&o.re).round(p), im: self.im.add(&o.im).round(p) }
    }

    fn sub(&self, o: &Cf, p: u64) -> Cf {
        Cf { re: self.re.sub(&o.re).round(p), im: self.im.sub(&o.im).round(p) }
    }

    fn mul(&self, o: &Cf, p: u64) -> Cf {
        Cf {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)).round(p),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)).round(p),
        }
    }

    fn norm_sqr(&self, p: u64) -> Dyadic {
        self.re.mul(&self.re).add(&self.im.mul(&self.im)).round(p)
    }

    fn div(&self, o: &Cf, p: u64) -> Option<Cf> {
        let n = o.norm_sqr(p);
        if n.is_zero() {
            return None;
        }
        let num = Cf { re: o.re.clone(), im: o.im.neg() };
        let t = self.mul(&num, p);
        Some(Cf { re: t.re.div(&n, p, false), im: t.im.div(&n, p, false) })
    }

    fn one() -> Self {
        Cf { re: Dyadic::from_i64(1), im: Dyadic::zero() }
    }

    fn magnitude_bits(&self) -> i64 {
        self.re.magnitude_bits().max(self.im.magnitude_bits())
    }
}

fn eval_cf(p: &IntPoly, x: &Cf, prec: u64) -> (Cf, Cf) {
    let mut v = Cf::zero();
    let mut d = Cf::zero();
    for c in p.coeffs().iter().rev() {
        d = d.mul(x, prec).add(&v, prec);
        v = v.mul(x, prec).add(&Cf { re: Dyadic::from_int(c.clone()), im: Dyadic::zero() }, prec);
    }
    (v, d)
}

fn aberth_polish(p: &IntPoly, mut z: Vec<Cf>, prec: u64) -> Vec<Cf> {
    let n = z.len();
    let target = -(prec as i64) + 8;
    for _ in 0..(64 + 4 * (prec as f64).log2() as usize) {
        let mut worst = i64::MIN;
        for i in 0..n {
            let (v, d) = eval_cf(p, &z[i], prec);
            if v.re.is_zero() && v.im.is_zero() {
                continue;
            }
            let Some(ratio) = v.div(&d, prec) else { continue };
            let mut s = Cf::zero();
            for j in 0..n {
                if j != i {
                    if let Some(t) = Cf::one().div(&z[i].sub(&z[j], prec), prec) {
                        s = s.add(&t, prec);
                    }
                }
            }
            let denom = Cf::one().sub(&ratio.mul(&s, prec), prec);
            let Some(w) = ratio.div(&denom, prec) else { continue };
            z[i] = z[i].sub(&w, prec);
            worst = worst.max(w.magnitude_bits() - z[i].magnitude_bits().max(0));
        }
        if worst < target {
            break;
        }
    }
    z
}

fn eval_interval(p: &IntPoly, x: &ComplexInterval, prec: u64) -> (ComplexInterval, ComplexInterval) {
    let mut v = ComplexInterval::zero();
    let mut d = ComplexInterval::zero();
    for c in p.coeffs().iter().rev() {
        d = d.mul(x, prec).add(&v, prec);
        v = v.mul(x, prec).add(&ComplexInterval::real(Interval::from_int(c)), prec);
    }
    (v, d)
}

/// Evaluates an integer polynomial on a complex interval.
pub fn eval_box(p: &IntPoly, x: &ComplexInterval, prec: u64) -> ComplexInterval {
    eval_interval(p, x, prec).0
}

/// Krawczyk test for the square box of radius `2^-s` around `c`.
fn krawczyk(p: &IntPoly, c: &Cf, s: i64, prec: u64) -> Option<ComplexInterval> {
    let r = Dyadic::pow2(-s);
    let bx = ComplexInterval::new(Interval::ball(c.re.clone(), &r), Interval::ball(c.im.clone(), &r));
    let cpt = ComplexInterval::point(c.re.clone(), c.im.clone());
    let (pc, _) = eval_interval(p, &cpt, prec);
    let (_, db) = eval_interval(p, &bx, prec);
    let (_, dc) = eval_cf(p, c, prec);
    let y = Cf::one().div(&dc, prec)?;
    let y = ComplexInterval::point(y.re, y.im);
    let offset = bx.sub(&cpt, prec);
    let contraction = ComplexInterval::one().sub(&y.mul(&db, prec), prec);
    let k = cpt.sub(&y.mul(&pc, prec), prec).add(&contraction.mul(&offset, prec), prec);
    bx.strictly_contains(&k).then_some(bx)
}

fn certify(p: &IntPoly, approx: &[Cf], real_count: usize, precision: u64, wp: u64) -> Option<Vec<RootBox>> {
    let n = approx.len();
    // Real candidates: the `real_count` approximations closest to the axis.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| approx[a].im.abs().cmp(&approx[b].im.abs()));
    let mut centers: Vec<(Cf, bool)> = Vec::with_capacity(n);
    for &i in &order[..real_count] {
        centers.push((Cf { re: approx[i].re.clone(), im: Dyadic::zero() }, true));
    }
    let upper: Vec<&Cf> = order[real_count..].iter().map(|&i| &approx[i]).filter(|z| z.im.signum() > 0).collect();
    if 2 * upper.len() + real_count != n {
        return None;
    }
    for z in upper {
        centers.push((z.clone(), false));
    }
    let as_f64: Vec<Complex64> = centers.iter().map(|(c, _)| Complex64::new(c.re.to_f64(), c.im.to_f64())).collect();
    let mut boxes = Vec::with_capacity(n);
    for (idx, (c, real)) in centers.iter().enumerate() {
        // Radius: below the requested width and a quarter of the separation.
        let mut sep = f64::INFINITY;
        for (j, w) in as_f64.iter().enumerate() {
            if j != idx {
                sep = sep.min((as_f64[idx] - w).norm());
                sep = sep.min((as_f64[idx] - w.conj()).norm());
            }
        }
        if !*real {
            sep = sep.min(2.0 * as_f64[idx].im.abs());
        }
        if !(sep > 0.0) {
            return None;
        }
        let s_sep = if sep.is_finite() { (-(sep / 4.0).log2()).ceil() as i64 } else { i64::MIN };
        let s = (precision as i64 + 1).max(s_sep);
        if s + 16 > wp as i64 {
            return None;
        }
        let bx = krawczyk(p, c, s, wp)?;
        if *real {
            boxes.push(RootBox { bx, real: true });
        } else {
            boxes.push(RootBox { bx: bx.conj(), real: false });
            boxes.push(RootBox { bx, real: false });
        }
    }
    for i in 0..boxes.len() {
        for j in i + 1..boxes.len() {
            if boxes[i].bx.intersects(&boxes[j].bx) {
                return None;
            }
        }
    }
    boxes.sort_by(|a, b| {
        let (ar, ai) = a.center();
        let (br, bi) = b.center();
        ar.cmp(&br).then(ai.cmp(&bi))
    });
    Some(boxes)
}

/// Floating-point approximations of all roots (no certification).
pub fn approximate_roots(p: &IntPoly) -> Vec<Complex64> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    aberth_f64(p)
}

/// Power sums `sum root^j` for `j = 0..count` by Newton's identities.
pub fn power_sums(p: &IntPoly, count: usize) -> Vec<num_rational::BigRational> {
    use num_rational::BigRational;
    let n = p.degree().unwrap_or(0);
    let lc = p.leading().cloned().unwrap_or_else(|| BigInt::from(1));
    // e-coefficients of the monic polynomial: x^n + c_{n-1} x^{n-1} + ...
    let c = |i: usize| BigRational::new(p.coeff(i), lc.clone());
    let mut s: Vec<BigRational> = Vec::with_capacity(count);
    for j in 0..count {
        if j == 0 {
            s.push(BigRational::from_integer(BigInt::from(n)));
            continue;
        }
        let mut acc = BigRational::zero();
        for i in 1..=j.min(n) {
            if i < j {
                acc -= c(n - i) * &s[j - i];
            } else {
                acc -= c(n - i) * BigRational::from_integer(BigInt::from(j));
            }
        }
        s.push(acc);
    }
    s
}
