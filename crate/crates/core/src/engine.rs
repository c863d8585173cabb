//! Sequence evaluation modulo one: exact recurrences, certified fractional
//! parts, floor words and limit-set estimates along arithmetic progressions.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ball::{precision_schedule, Dyadic, Interval};
use crate::error::{Error, Result};
use crate::expoly::{Expoly, ExpolyEvaluator};
use crate::scalar::{floor_rational, rational_to_f64, serde_num, RationalInterval};
use crate::IntPoly;

pub const DEFAULT_EPS: f64 = 1e-12;
pub const DEFAULT_CLUSTER_EPS: f64 = 1e-6;
/// Minimum tail length per residue class for a limit-set report.
pub const MIN_TAIL_PER_RESIDUE: u64 = 50;

/// `x_1, ..., x_K` from `sum u_i x_(k+i) = 0` and the first `deg R` values.
pub fn iterate_recurrence(r: &IntPoly, initial: &[BigRational], k_max: u64) -> Result<Vec<BigRational>> {
    let d = r.degree().ok_or(Error::ZeroPolynomial)?;
    if initial.len() != d {
        return Err(Error::BadInitialCount { expected: d, got: initial.len() });
    }
    let lead = BigRational::from_integer(r.coeff(d));
    let u: Vec<BigRational> = (0..d).map(|i| BigRational::from_integer(r.coeff(i))).collect();
    let mut xs: Vec<BigRational> = initial.to_vec();
    while (xs.len() as u64) < k_max {
        let n = xs.len();
        let acc = u.iter().enumerate().fold(BigRational::zero(), |acc, (i, ui)| acc + ui * &xs[n - d + i]);
        xs.push(-acc / &lead);
    }
    xs.truncate(k_max as usize);
    Ok(xs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleMode {
    ExactRational,
    /// Largest working precision used, in bits.
    Ball { precision: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleValue {
    pub k: u64,
    /// `floor(x_k - shift)`; absent when undecided.
    #[serde(with = "serde_num::bigint_opt")]
    pub floor: Option<BigInt>,
    pub fractional: Option<RationalInterval>,
    pub distance: Option<RationalInterval>,
}

impl SampleValue {
    pub fn undecided(&self) -> bool {
        self.floor.is_none()
    }

    /// Fractional part as a point of `[0, 1)`.
    pub fn point(&self) -> Option<f64> {
        let f = rational_to_f64(&self.fractional.as_ref()?.mid());
        Some(if f >= 1.0 { 0.0 } else { f.max(0.0) })
    }

    fn decided(k: u64, lo: BigRational, hi: BigRational) -> Self {
        let floor = floor_rational(&lo);
        let fl = BigRational::from_integer(floor.clone());
        let f = RationalInterval::new(lo - &fl, hi - &fl);
        let distance = distance_interval(&f);
        SampleValue { k, floor: Some(floor), fractional: Some(f), distance: Some(distance) }
    }

    fn undecided_at(k: u64) -> Self {
        SampleValue { k, floor: None, fractional: None, distance: None }
    }
}

/// `||x||` over a fractional-part interval inside `[0, 1)`.
fn distance_interval(f: &RationalInterval) -> RationalInterval {
    let one = BigRational::one();
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    if f.hi <= half {
        f.clone()
    } else if f.lo >= half {
        RationalInterval::new(&one - &f.hi, &one - &f.lo)
    } else {
        RationalInterval::new(f.lo.clone().min(&one - &f.hi), half)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceSample {
    pub k_min: u64,
    pub k_max: u64,
    #[serde(with = "serde_num::rational")]
    pub shift: BigRational,
    pub eps: f64,
    pub mode: SampleMode,
    pub values: Vec<SampleValue>,
}

impl SequenceSample {
    pub fn value(&self, k: u64) -> Option<&SampleValue> {
        k.checked_sub(self.k_min).and_then(|i| self.values.get(i as usize))
    }

    pub fn undecided_count(&self) -> usize {
        self.values.iter().filter(|v| v.undecided()).count()
    }

    /// Exact `(min, max)` of the fractional-part enclosures over `k >= k_from`.
    pub fn fractional_range(&self, k_from: u64) -> Option<(BigRational, BigRational)> {
        let mut it = self.values.iter().filter(|v| v.k >= k_from).filter_map(|v| v.fractional.as_ref());
        let first = it.next()?;
        Some(it.fold((first.lo.clone(), first.hi.clone()), |(lo, hi), f| {
            (if f.lo < lo { f.lo.clone() } else { lo }, if f.hi > hi { f.hi.clone() } else { hi })
        }))
    }

    /// `k, fractional_lo, fractional_hi, floor, distance_lo, distance_hi, undecided`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,fractional_lo,fractional_hi,floor,distance_lo,distance_hi,undecided\n");
        for v in &self.values {
            match (&v.floor, &v.fractional, &v.distance) {
                (Some(z), Some(f), Some(d)) => out.push_str(&format!(
                    "{},{:.17e},{:.17e},{},{:.17e},{:.17e},false\n",
                    v.k,
                    rational_to_f64(&f.lo),
                    rational_to_f64(&f.hi),
                    z,
                    rational_to_f64(&d.lo),
                    rational_to_f64(&d.hi)
                )),
                _ => out.push_str(&format!("{},,,,,,true\n", v.k)),
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct SampleConfig {
    pub eps: f64,
    pub shift: BigRational,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig { eps: DEFAULT_EPS, shift: BigRational::zero() }
    }
}

fn check_range(k_min: u64, k_max: u64) -> Result<()> {
    if k_min > k_max {
        return Err(Error::InvalidInterval(format!("empty range {k_min}..={k_max}")));
    }
    Ok(())
}

/// Samples an exactly known sequence; `values[0]` is `x_(k_start)`.
pub fn sample_exact(values: &[BigRational], k_start: u64, shift: &BigRational) -> SequenceSample {
    let out: Vec<SampleValue> = values
        .par_iter()
        .enumerate()
        .map(|(i, v)| {
            let r = v - shift;
            SampleValue::decided(k_start + i as u64, r.clone(), r)
        })
        .collect();
    SequenceSample {
        k_min: k_start,
        k_max: k_start + values.len().saturating_sub(1) as u64,
        shift: shift.clone(),
        eps: 0.0,
        mode: SampleMode::ExactRational,
        values: out,
    }
}

/// Fractional parts of `x_k - shift` for `k_min..=k_max`.
///
/// Exact when the expoly evaluates to rationals; otherwise ball arithmetic
/// with doubling precision until the enclosure has width at most `eps` and a
/// decided floor. Values still undecided at the precision cap are flagged.
pub fn sample_expoly(x: &Expoly, k_min: u64, k_max: u64, cfg: &SampleConfig) -> Result<SequenceSample> {
    check_range(k_min, k_max)?;
    if !(cfg.eps > 0.0 && cfg.eps < 1.0) {
        return Err(Error::InvalidInterval(format!("eps must lie in (0, 1), got {}", cfg.eps)));
    }
    let ev = ExpolyEvaluator::new(x)?;
    let exact = ev.exact_parts(k_min, k_max);
    if ev.is_exact() {
        return Ok(sample_exact(&exact, k_min, &cfg.shift));
    }
    let eps = Dyadic::from_f64(cfg.eps);
    let target = (-cfg.eps.log2()).ceil() as u64 + 8;
    let results: Vec<Result<(SampleValue, u64)>> = exact
        .par_iter()
        .enumerate()
        .map(|(i, ex)| {
            let k = k_min + i as u64;
            let mut used = 0;
            for prec in precision_schedule(target) {
                used = prec;
                let v = match ev.value_interval(k, ex, &cfg.shift, prec) {
                    Ok(v) => v,
                    Err(Error::PrecisionCapExceeded(_)) => break,
                    Err(e) => return Err(e),
                };
                if v.width() <= eps {
                    if let Some(sv) = decide(k, &v) {
                        return Ok((sv, prec));
                    }
                }
            }
            Ok((SampleValue::undecided_at(k), used))
        })
        .collect();
    let mut values = Vec::with_capacity(results.len());
    let mut precision = 0;
    for r in results {
        let (v, p) = r?;
        precision = precision.max(p);
        values.push(v);
    }
    if values.iter().all(SampleValue::undecided) {
        return Err(Error::PrecisionCapExceeded(crate::ball::PRECISION_CAP));
    }
    Ok(SequenceSample { k_min, k_max, shift: cfg.shift.clone(), eps: cfg.eps, mode: SampleMode::Ball { precision }, values })
}

fn decide(k: u64, v: &Interval) -> Option<SampleValue> {
    v.floor_if_decided()?;
    Some(SampleValue::decided(k, v.lo().to_rational(), v.hi().to_rational()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FloorWord {
    pub k_start: u64,
    #[serde(with = "serde_num::rational")]
    pub shift: BigRational,
    /// `s_k = -sum a_i z_(k+i)` for `k = k_start, k_start + 1, ...`.
    pub letters: Vec<i64>,
    pub alphabet: Vec<i64>,
    /// `L(P) * sup y + |shift * P(1)|`, which bounds `|s_k|` when `P` annihilates `x`.
    #[serde(with = "serde_num::rational")]
    pub envelope: BigRational,
    pub bounded: bool,
}

/// Floor word of a sample for `P(x) = sum a_i x^i`, using the sample's shift.
pub fn floor_word(sample: &SequenceSample, p: &IntPoly) -> Result<FloorWord> {
    let d = p.degree().ok_or(Error::ZeroPolynomial)?;
    let mut z = Vec::with_capacity(sample.values.len());
    let mut sup_y = BigRational::zero();
    for v in &sample.values {
        match (&v.floor, &v.fractional) {
            (Some(f), Some(fr)) => {
                z.push(f.clone());
                if fr.hi > sup_y {
                    sup_y = fr.hi.clone();
                }
            }
            _ => return Err(Error::UndecidedFloor(v.k)),
        }
    }
    let mut letters = Vec::with_capacity(z.len().saturating_sub(d));
    for start in 0..z.len().saturating_sub(d) {
        let s = -p.coeffs().iter().enumerate().fold(BigInt::zero(), |acc, (i, a)| acc + a * &z[start + i]);
        let k = sample.k_min + start as u64;
        letters.push(s.to_i64().ok_or(Error::LetterOverflow(k))?);
    }
    let alphabet: Vec<i64> = letters.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let p_at_one = p.coeffs().iter().fold(BigInt::zero(), |acc, a| acc + a);
    let envelope = BigRational::from_integer(p.length()) * &sup_y + (&sample.shift * BigRational::from_integer(p_at_one)).abs();
    let bounded = letters.iter().all(|s| BigRational::from_integer(BigInt::from(s.abs())) <= envelope);
    Ok(FloorWord { k_start: sample.k_min, shift: sample.shift.clone(), letters, alphabet, envelope, bounded })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidueReport {
    pub residue: u64,
    pub samples: usize,
    pub undecided: usize,
    pub centers: Vec<f64>,
    pub radii: Vec<f64>,
    /// `1 -` largest circular gap between retained points.
    pub diameter: f64,
    #[serde(with = "serde_num::rational_opt")]
    pub frac_inf: Option<BigRational>,
    #[serde(with = "serde_num::rational_opt")]
    pub frac_sup: Option<BigRational>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitSetReport {
    pub modulus: u64,
    pub burn_in: u64,
    pub cluster_eps: f64,
    pub horizon: u64,
    pub residues: Vec<ResidueReport>,
}

impl LimitSetReport {
    pub fn max_diameter(&self) -> f64 {
        self.residues.iter().map(|r| r.diameter).fold(0.0, f64::max)
    }

    pub fn cluster_count(&self) -> usize {
        self.residues.iter().map(|r| r.centers.len()).sum()
    }
}

pub fn default_burn_in(k_min: u64, k_max: u64) -> u64 {
    (k_min + (k_max - k_min) / 2).max(50)
}

/// Distance on `R/Z`.
pub fn circle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// Leader clustering of sorted points on the circle.
fn cluster(points: &[f64], eps: f64) -> (Vec<f64>, Vec<f64>) {
    let mut centers: Vec<f64> = Vec::new();
    let mut member = Vec::with_capacity(points.len());
    for &p in points {
        if centers.last().is_none_or(|&c| circle_distance(p, c) > eps) {
            centers.push(p);
        }
        member.push(centers.len() - 1);
    }
    if centers.len() >= 2 && circle_distance(centers[0], centers[centers.len() - 1]) <= eps {
        let last = centers.len() - 1;
        centers.pop();
        for m in member.iter_mut().filter(|m| **m == last) {
            *m = 0;
        }
    }
    let mut radii = vec![0.0f64; centers.len()];
    for (&p, &m) in points.iter().zip(&member) {
        radii[m] = radii[m].max(circle_distance(p, centers[m]));
    }
    (centers, radii)
}

fn circular_diameter(sorted: &[f64]) -> f64 {
    if sorted.len() < 2 {
        return 0.0;
    }
    let mut gap = sorted[0] + 1.0 - sorted[sorted.len() - 1];
    for w in sorted.windows(2) {
        gap = gap.max(w[1] - w[0]);
    }
    (1.0 - gap).max(0.0)
}

/// Per-residue limit-set estimate over the tail `k > burn_in`.
pub fn limit_set_report(sample: &SequenceSample, modulus: u64, burn_in: u64, cluster_eps: f64) -> Result<LimitSetReport> {
    if modulus == 0 {
        return Err(Error::InvalidInterval("modulus must be positive".into()));
    }
    let needed = modulus * MIN_TAIL_PER_RESIDUE;
    let have = sample.k_max.saturating_sub(burn_in.max(sample.k_min.saturating_sub(1)));
    if have < needed {
        return Err(Error::InsufficientSamples { needed, have });
    }
    let residues = (0..modulus)
        .into_par_iter()
        .map(|l| {
            let tail: Vec<&SampleValue> = sample.values.iter().filter(|v| v.k > burn_in && v.k % modulus == l).collect();
            let mut points: Vec<f64> = tail.iter().filter_map(|v| v.point()).collect();
            points.sort_by(f64::total_cmp);
            let (centers, radii) = cluster(&points, cluster_eps);
            let mut inf: Option<BigRational> = None;
            let mut sup: Option<BigRational> = None;
            for f in tail.iter().filter_map(|v| v.fractional.as_ref()) {
                if inf.as_ref().is_none_or(|x| f.lo < *x) {
                    inf = Some(f.lo.clone());
                }
                if sup.as_ref().is_none_or(|x| f.hi > *x) {
                    sup = Some(f.hi.clone());
                }
            }
            ResidueReport {
                residue: l,
                samples: points.len(),
                undecided: tail.len() - points.len(),
                diameter: circular_diameter(&points),
                centers,
                radii,
                frac_inf: inf,
                frac_sup: sup,
            }
        })
        .collect();
    Ok(LimitSetReport { modulus, burn_in, cluster_eps, horizon: sample.k_max, residues })
}

/// Greedy count of circle points pairwise at least `sep` apart.
pub fn separated_count(points: &[f64], sep: f64) -> usize {
    let mut sorted = points.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut picked: Vec<f64> = Vec::new();
    for p in sorted {
        if picked.last().is_none_or(|&q| p - q >= sep) {
            picked.push(p);
        }
    }
    if picked.len() >= 2 && circle_distance(picked[0], *picked.last().unwrap()) < sep {
        picked.pop();
    }
    picked.len()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZsetOutcome {
    PrefixOk,
    FirstFailure(u64),
}

/// Checks `{xi (p/q)^k} in [s, t)` for `k = 0..=k_max` exactly.
pub fn zset_prefix_test(xi: &BigRational, p: &BigInt, q: &BigInt, s: &BigRational, t: &BigRational, k_max: u64) -> Result<ZsetOutcome> {
    if !(p > q && q >= &BigInt::one() && p.gcd(q).is_one()) {
        return Err(Error::InvalidInterval(format!("need coprime p > q >= 1, got p = {p}, q = {q}")));
    }
    if !(s >= &BigRational::zero() && s < t && t <= &BigRational::one()) {
        return Err(Error::InvalidInterval(format!("need 0 <= s < t <= 1, got [{s}, {t})")));
    }
    if !xi.is_positive() {
        return Err(Error::InvalidInterval("xi must be positive".into()));
    }
    let ratio = BigRational::new(p.clone(), q.clone());
    let mut v = xi.clone();
    for k in 0..=k_max {
        let f = &v - BigRational::from_integer(floor_rational(&v));
        if f < *s || f >= *t {
            return Ok(ZsetOutcome::FirstFailure(k));
        }
        v *= &ratio;
    }
    Ok(ZsetOutcome::PrefixOk)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::AlgebraicNumber;
    use crate::expoly::{ExpolyCoefficient, SymbolicIrrational, Term};
    use crate::scalar::rat;
    use proptest::prelude::*;

    fn three_halves() -> Expoly {
        Expoly::rational_geometric(&[(rat(1, 1), rat(3, 2))]).unwrap()
    }

    fn golden_power() -> Expoly {
        let phi = AlgebraicNumber::nearest_root(&IntPoly::from_i64(&[-1, -1, 1]), num_complex::Complex64::new(1.6, 0.0)).unwrap();
        Expoly::new(vec![Term::new(phi, vec![ExpolyCoefficient::rational(1, 1)])]).unwrap()
    }

    fn lucas(k: u64) -> BigInt {
        let (mut a, mut b) = (BigInt::from(2), BigInt::from(1));
        for _ in 0..k {
            let c = &a + &b;
            a = b;
            b = c;
        }
        a
    }

    #[test]
    fn recurrences() {
        let g = iterate_recurrence(&IntPoly::from_i64(&[-3, 2]), &[rat(3, 2)], 4).unwrap();
        assert_eq!(g, vec![rat(3, 2), rat(9, 4), rat(27, 8), rat(81, 16)]);
        let f = iterate_recurrence(&IntPoly::from_i64(&[-1, -1, 1]), &[rat(1, 1), rat(1, 1)], 10).unwrap();
        assert_eq!(f[9], rat(55, 1));
        assert_eq!(
            iterate_recurrence(&IntPoly::from_i64(&[-1, -1, 1]), &[rat(1, 1)], 10),
            Err(Error::BadInitialCount { expected: 2, got: 1 })
        );
    }

    #[test]
    fn exact_fractional_parts() {
        let s = sample_expoly(&three_halves(), 1, 4, &SampleConfig::default()).unwrap();
        assert_eq!(s.mode, SampleMode::ExactRational);
        let fr: Vec<BigRational> = s.values.iter().map(|v| v.fractional.clone().unwrap().lo).collect();
        assert_eq!(fr, vec![rat(1, 2), rat(1, 4), rat(3, 8), rat(1, 16)]);
    }

    #[test]
    fn golden_distances_match_lucas() {
        let s = sample_expoly(&golden_power(), 10, 200, &SampleConfig::default()).unwrap();
        assert!(matches!(s.mode, SampleMode::Ball { .. }));
        for v in &s.values {
            let d = v.distance.as_ref().unwrap();
            // |L_k - phi^k| = |phibar|^k.
            let oracle = ((5f64.sqrt() - 1.0) / 2.0).powi(v.k as i32);
            assert!((rational_to_f64(&d.mid()) - oracle).abs() < 1e-12, "k = {}", v.k);
            let z = v.floor.clone().unwrap();
            let l = lucas(v.k);
            assert!(z == l || z == &l - 1);
        }
        assert!((rational_to_f64(&s.value(10).unwrap().distance.as_ref().unwrap().mid()) - 0.0081306).abs() < 1e-6);
    }

    #[test]
    fn symbolic_linear_term() {
        let sqrt2 = SymbolicIrrational {
            label: "sqrt2".into(),
            approx: crate::scalar::parse_rational("1.41421356237309504880168872").unwrap(),
            err: crate::scalar::parse_rational("1e-25").unwrap(),
            known_irrational: true,
        };
        let x = Expoly::new(vec![Term::new(
            AlgebraicNumber::from_i64(1),
            vec![ExpolyCoefficient::rational(0, 1), ExpolyCoefficient::Symbolic(sqrt2)],
        )])
        .unwrap();
        let s = sample_expoly(&x, 1, 3, &SampleConfig::default()).unwrap();
        let f = rational_to_f64(&s.values[0].fractional.as_ref().unwrap().mid());
        assert!((f - (2f64.sqrt() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn floor_words() {
        let cfg = SampleConfig { shift: rat(-1, 2), ..Default::default() };
        let s = sample_expoly(&three_halves(), 1, 8, &cfg).unwrap();
        let z: Vec<BigInt> = s.values.iter().map(|v| v.floor.clone().unwrap()).collect();
        assert_eq!(&z[..5], &[2, 2, 3, 5, 8].map(BigInt::from));
        let w = floor_word(&s, &IntPoly::from_i64(&[-3, 2])).unwrap();
        assert_eq!(&w.letters[..4], &[2, 0, -1, -1]);
        assert!(w.bounded);
        let two = Expoly::rational_geometric(&[(rat(1, 1), rat(2, 1))]).unwrap();
        let s = sample_expoly(&two, 1, 20, &SampleConfig::default()).unwrap();
        assert!(floor_word(&s, &IntPoly::from_i64(&[-2, 1])).unwrap().letters.iter().all(|&l| l == 0));
        let fib = iterate_recurrence(&IntPoly::from_i64(&[-1, -1, 1]), &[rat(1, 1), rat(1, 1)], 30).unwrap();
        let s = sample_exact(&fib, 1, &BigRational::zero());
        assert_eq!(floor_word(&s, &IntPoly::from_i64(&[-1, -1, 1])).unwrap().alphabet, vec![0]);
    }

    #[test]
    fn limit_sets() {
        let s = sample_expoly(&golden_power(), 1, 400, &SampleConfig::default()).unwrap();
        let r = limit_set_report(&s, 1, 40, DEFAULT_CLUSTER_EPS).unwrap();
        assert_eq!(r.residues[0].centers.len(), 1);
        assert!(r.max_diameter() <= 0.01);
        let s = sample_expoly(&three_halves(), 1, 2000, &SampleConfig::default()).unwrap();
        let r = limit_set_report(&s, 1, 1000, DEFAULT_CLUSTER_EPS).unwrap();
        assert!(r.max_diameter() >= 1.0 / 3.0);
        let quarters: Vec<BigRational> = (1..=400).map(|k| rat(k, 4)).collect();
        let s = sample_exact(&quarters, 1, &BigRational::zero());
        let r = limit_set_report(&s, 4, 100, DEFAULT_CLUSTER_EPS).unwrap();
        assert!(r.residues.iter().all(|x| x.diameter == 0.0 && x.centers.len() == 1));
        assert!(matches!(limit_set_report(&s, 8, 100, 1e-6), Err(Error::InsufficientSamples { .. })));
    }

    #[test]
    fn zsets() {
        let one = BigRational::one();
        let (p, q) = (BigInt::from(3), BigInt::from(2));
        assert_eq!(zset_prefix_test(&one, &p, &q, &rat(0, 1), &rat(1, 2), 10).unwrap(), ZsetOutcome::FirstFailure(1));
        assert_eq!(zset_prefix_test(&one, &p, &q, &rat(0, 1), &rat(1, 1), 50).unwrap(), ZsetOutcome::PrefixOk);
        assert!(zset_prefix_test(&one, &p, &q, &rat(1, 2), &rat(1, 2), 5).is_err());
        assert!(zset_prefix_test(&one, &BigInt::from(4), &BigInt::from(2), &rat(0, 1), &rat(1, 2), 5).is_err());
    }

    #[test]
    fn clustering_wraps_around() {
        let (c, r) = cluster(&[0.0, 0.3, 0.9999999], 1e-6);
        assert_eq!(c, vec![0.0, 0.3]);
        assert!(r[0] > 0.0 && r[0] <= 1e-6);
        assert_eq!(separated_count(&[0.0, 0.5, 0.99], 0.05), 2);
        assert!((circular_diameter(&[0.1, 0.9]) - 0.2).abs() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        /// Closed-form rational expolys agree with iterating their annihilator.
        #[test]
        fn closed_form_matches_iteration(
            terms in prop::collection::vec(((-5i64..=5).prop_filter("nz", |n| *n != 0), 1i64..=3, -4i64..=4), 1..=3)
        ) {
            let pairs: Vec<(BigRational, BigRational)> = terms.iter().map(|&(n, d, c)| (rat(c, 1), rat(n, d))).collect();
            if let Ok(x) = Expoly::rational_geometric(&pairs) {
                let r = x.annihilator();
                let d = r.degree().unwrap();
                let init: Vec<BigRational> = (1..=d as u64).map(|k| x.eval_exact(k).unwrap()).collect();
                let it = iterate_recurrence(&r, &init, 200).unwrap();
                let a = sample_expoly(&x, 1, 200, &SampleConfig::default()).unwrap();
                let b = sample_exact(&it, 1, &BigRational::zero());
                prop_assert_eq!(a.values, b.values);
            }
        }

        #[test]
        fn decomposition_identity(c in 1i64..=9, n in 2i64..=9) {
            let x = Expoly::rational_geometric(&[(rat(c, 1), rat(n, 2))]).unwrap();
            let s = sample_expoly(&x, 1, 40, &SampleConfig::default()).unwrap();
            for v in &s.values {
                let f = v.fractional.as_ref().unwrap();
                prop_assert!(f.lo >= BigRational::zero() && f.hi < BigRational::one());
                let total = BigRational::from_integer(v.floor.clone().unwrap()) + &f.lo;
                prop_assert_eq!(total, x.eval_exact(v.k).unwrap());
            }
        }
    }
}
