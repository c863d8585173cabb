//! Length, reduced length and overreduced length of integer polynomials.
//!
//! `ell(P) = inf L(PQ)` over real `Q` with leading or constant coefficient 1.
//! For a fixed degree bound `e` this is the linear program
//! `min sum |r_i|` with `r = A b + c`, where `b` are the free coefficients of
//! `Q`. It is solved in floating point first; the optimal vertex is then
//! rebuilt exactly from its zero residuals and certified by an exact dual
//! vector `y` (`A^T y = 0`, `|y| <= 1`, `y_i = sign r_i` off the zero set).
//! If certification fails the exact simplex takes over, starting from that vertex.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebraic::{mahler_measure, AlgebraicNumber, ModulusClass};
use crate::error::{Error, Result};
use crate::lp::{simplex, simplex_from_basis, LpOutcome};
use crate::poly::{cyclotomic_index, factor_over_integers, FactorConfig};
use crate::scalar::{rational_to_f64, serde_num, RationalInterval};
use crate::{IntPoly, RatPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    ConstantOne,
    LeadingOne,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedDegreeSolution {
    #[serde(with = "serde_num::rational")]
    pub value: BigRational,
    pub q: RatPoly,
    /// Optimality proven by an exact dual vector or the exact simplex.
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedLengthEstimate {
    /// Upper estimate of `ell(P)`, equal to `L(P * witness_q)`.
    #[serde(with = "serde_num::rational")]
    pub value: BigRational,
    pub witness_q: RatPoly,
    pub normalization: Normalization,
    pub degree_used: usize,
    /// Mahler measure enclosure, a lower bound for `ell(P)`.
    pub lower_bound: RationalInterval,
    pub converged: bool,
    /// Best value at each degree bound `e = 0..=e_max`.
    #[serde(with = "serde_num::rational_vec")]
    pub sweep: Vec<BigRational>,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverreducedLengthEstimate {
    #[serde(with = "serde_num::rational")]
    pub value: BigRational,
    pub admissible_factor: IntPoly,
    pub quotient: IntPoly,
    pub inner: ReducedLengthEstimate,
    pub candidates: usize,
}

#[derive(Clone, Debug)]
pub struct LengthConfig {
    pub e_max: usize,
    pub tol: BigRational,
    /// Degrees without improvement before the sweep counts as converged.
    pub stall: usize,
    pub factor: FactorConfig,
}

impl Default for LengthConfig {
    fn default() -> Self {
        LengthConfig {
            e_max: 32,
            tol: BigRational::new(BigInt::one(), BigInt::from(1_000_000_000u64)),
            stall: 8,
            factor: FactorConfig::default(),
        }
    }
}

impl LengthConfig {
    pub fn with_e_max(e_max: usize) -> Self {
        LengthConfig { e_max, ..Default::default() }
    }
}

/// `L(P)` for integer polynomials.
pub fn length(p: &IntPoly) -> BigInt {
    p.length()
}

/// `L(P)` for rational polynomials.
pub fn length_rat(p: &RatPoly) -> BigRational {
    p.length()
}

struct Problem {
    a: Vec<Vec<BigRational>>,
    c: Vec<BigRational>,
    free: Vec<usize>,
    pinned: usize,
    e: usize,
}

impl Problem {
    fn new(p: &IntPoly, e: usize, norm: Normalization) -> Self {
        let n = p.degree().unwrap();
        let pinned = match norm {
            Normalization::ConstantOne => 0,
            Normalization::LeadingOne => e,
        };
        let free: Vec<usize> = (0..=e).filter(|&j| j != pinned).collect();
        let m = n + e + 1;
        let coef = |i: usize, j: usize| -> BigRational {
            if i >= j && i - j <= n {
                BigRational::from_integer(p.coeff(i - j))
            } else {
                BigRational::zero()
            }
        };
        let a = (0..m).map(|i| free.iter().map(|&j| coef(i, j)).collect()).collect();
        let c = (0..m).map(|i| coef(i, pinned)).collect();
        Problem { a, c, free, pinned, e }
    }

    fn residuals(&self, b: &[BigRational]) -> Vec<BigRational> {
        self.a
            .iter()
            .zip(&self.c)
            .map(|(row, ci)| row.iter().zip(b).fold(ci.clone(), |acc, (x, y)| acc + x * y))
            .collect()
    }

    fn q_of(&self, b: &[BigRational]) -> RatPoly {
        let mut coeffs = vec![BigRational::zero(); self.e + 1];
        coeffs[self.pinned] = BigRational::one();
        for (&j, v) in self.free.iter().zip(b) {
            coeffs[j] = v.clone();
        }
        RatPoly::new(coeffs)
    }

    /// Standard-form basis of the vertex with zero residuals on `support`.
    fn vertex_basis(&self, support: &[usize], b: &[BigRational], r: &[BigRational]) -> Vec<usize> {
        let (k, m) = (self.free.len(), self.a.len());
        let mut basis: Vec<usize> = b.iter().enumerate().map(|(j, v)| if v.is_negative() { k + j } else { j }).collect();
        for (i, ri) in r.iter().enumerate() {
            if !support.contains(&i) {
                basis.push(if ri.is_negative() { 2 * k + m + i } else { 2 * k + i });
            }
        }
        basis
    }

    /// Standard form: variables `[b+, b-, u, v]`, rows `A b+ - A b- - u + v = -c`.
    fn standard_form<T: Clone>(&self, conv: impl Fn(&BigRational) -> T, zero: T, one: T) -> (Vec<Vec<T>>, Vec<T>, Vec<T>) {
        let m = self.a.len();
        let k = self.free.len();
        let mut rows = Vec::with_capacity(m);
        for (i, row) in self.a.iter().enumerate() {
            let mut r = Vec::with_capacity(2 * k + 2 * m);
            r.extend(row.iter().map(&conv));
            r.extend(row.iter().map(|x| conv(&-x)));
            for j in 0..m {
                r.push(if j == i { conv(&-BigRational::one()) } else { zero.clone() });
            }
            for j in 0..m {
                r.push(if j == i { one.clone() } else { zero.clone() });
            }
            rows.push(r);
        }
        let rhs = self.c.iter().map(|x| conv(&-x)).collect();
        let mut cost = vec![zero.clone(); 2 * k];
        cost.extend(std::iter::repeat_n(one, 2 * m));
        (rows, rhs, cost)
    }
}

/// Solves a square system exactly; `None` if singular.
fn solve_square(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let p = a[col][col].clone();
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for k in col..n {
                let t = &f * &a[col][k];
                a[r][k] -= t;
            }
            let t = &f * &b[col];
            b[r] -= t;
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// Greedily picks rows (in the given order) until they span `k` dimensions.
fn independent_rows(a: &[Vec<BigRational>], order: &[usize], k: usize) -> Option<Vec<usize>> {
    let mut basis: Vec<(usize, Vec<BigRational>)> = Vec::new();
    let mut chosen = Vec::new();
    for &i in order {
        if chosen.len() == k {
            break;
        }
        let mut v = a[i].clone();
        for (pc, bv) in &basis {
            if !v[*pc].is_zero() {
                let f = &v[*pc] / &bv[*pc];
                for (x, y) in v.iter_mut().zip(bv) {
                    *x -= &f * y;
                }
            }
        }
        if let Some(pc) = v.iter().position(|x| !x.is_zero()) {
            basis.push((pc, v));
            chosen.push(i);
        }
    }
    (chosen.len() == k).then_some(chosen)
}

fn sign(x: &BigRational) -> BigRational {
    if x.is_positive() {
        BigRational::one()
    } else if x.is_negative() {
        -BigRational::one()
    } else {
        BigRational::zero()
    }
}

/// Checks for `y` with `|y| <= 1`, `y = sign(r)` off the zero set and `A^T y = 0`.
fn dual_certificate(prob: &Problem, r: &[BigRational]) -> bool {
    let k = prob.free.len();
    let zero_set: Vec<usize> = (0..r.len()).filter(|&i| r[i].is_zero()).collect();
    // h = -A_N^T sign(r_N)
    let mut h = vec![BigRational::zero(); k];
    for (i, ri) in r.iter().enumerate() {
        if !ri.is_zero() {
            let s = sign(ri);
            for (hj, aij) in h.iter_mut().zip(&prob.a[i]) {
                *hj -= &s * aij;
            }
        }
    }
    if k == 0 {
        return true;
    }
    if zero_set.len() == k {
        let at: Vec<Vec<BigRational>> = (0..k).map(|j| zero_set.iter().map(|&i| prob.a[i][j].clone()).collect()).collect();
        return match solve_square(at, h) {
            Some(y) => y.iter().all(|v| v.abs() <= BigRational::one()),
            None => false,
        };
    }
    if let Some(true) = dual_from_float_vertex(prob, &zero_set, &h) {
        return true;
    }
    // Degenerate vertex: feasibility LP in w = y + 1 in [0, 2].
    let z = zero_set.len();
    let mut rows = Vec::with_capacity(k + z);
    let mut rhs = Vec::with_capacity(k + z);
    for j in 0..k {
        let mut row: Vec<BigRational> = zero_set.iter().map(|&i| prob.a[i][j].clone()).collect();
        row.resize(2 * z, BigRational::zero());
        let shift = zero_set.iter().fold(BigRational::zero(), |acc, &i| acc + &prob.a[i][j]);
        rows.push(row);
        rhs.push(&h[j] + shift);
    }
    for t in 0..z {
        let mut row = vec![BigRational::zero(); 2 * z];
        row[t] = BigRational::one();
        row[z + t] = BigRational::one();
        rows.push(row);
        rhs.push(BigRational::from_integer(BigInt::from(2)));
    }
    matches!(simplex(&rows, &rhs, &vec![BigRational::zero(); 2 * z]), LpOutcome::Optimal { .. })
}

/// Guesses which dual variables sit at `+-1` from a float vertex, solves for
/// the rest exactly and checks the result. `None` when the guess is unusable.
fn dual_from_float_vertex(prob: &Problem, zero_set: &[usize], h: &[BigRational]) -> Option<bool> {
    use microlp::{ComparisonOp, OptimizationDirection, Variable};
    let k = h.len();
    let mut lp = microlp::Problem::new(OptimizationDirection::Minimize);
    let y: Vec<Variable> = zero_set.iter().map(|_| lp.add_var(0.0, (-1.0, 1.0))).collect();
    for (j, hj) in h.iter().enumerate() {
        let terms: Vec<(Variable, f64)> =
            zero_set.iter().zip(&y).filter(|(&i, _)| !prob.a[i][j].is_zero()).map(|(&i, &v)| (v, rational_to_f64(&prob.a[i][j]))).collect();
        lp.add_constraint(terms, ComparisonOp::Eq, rational_to_f64(hj));
    }
    let out = lp.solve().ok()?;
    let sol = out.solution()?;
    let yf: Vec<f64> = y.iter().map(|&v| sol.var_value(v)).collect();
    let free: Vec<usize> = (0..zero_set.len()).filter(|&t| yf[t].abs() < 1.0 - 1e-9).collect();
    let fixed: Vec<(usize, BigRational)> =
        (0..zero_set.len()).filter(|t| !free.contains(t)).map(|t| (t, if yf[t] > 0.0 { BigRational::one() } else { -BigRational::one() })).collect();
    // Equations A_Z^T y = h restricted to the free unknowns.
    let eqs: Vec<Vec<BigRational>> = (0..k).map(|j| free.iter().map(|&t| prob.a[zero_set[t]][j].clone()).collect()).collect();
    let rhs: Vec<BigRational> = (0..k)
        .map(|j| fixed.iter().fold(h[j].clone(), |acc, (t, s)| acc - s * &prob.a[zero_set[*t]][j]))
        .collect();
    let yfree = if free.is_empty() {
        Vec::new()
    } else {
        let order: Vec<usize> = (0..k).collect();
        let sel = independent_rows(&eqs, &order, free.len())?;
        solve_square(sel.iter().map(|&j| eqs[j].clone()).collect(), sel.iter().map(|&j| rhs[j].clone()).collect())?
    };
    let consistent = eqs.iter().zip(&rhs).all(|(row, r)| row.iter().zip(&yfree).fold(BigRational::zero(), |acc, (a, v)| acc + a * v) == *r);
    Some(consistent && yfree.iter().all(|v| v.abs() <= BigRational::one()))
}

/// Floating-point optimum, used only to guess the support of an exact vertex.
fn float_l1(prob: &Problem) -> Option<Vec<f64>> {
    use microlp::{ComparisonOp, OptimizationDirection, Variable};
    let mut lp = microlp::Problem::new(OptimizationDirection::Minimize);
    let b: Vec<Variable> = prob.free.iter().map(|_| lp.add_var(0.0, (f64::NEG_INFINITY, f64::INFINITY))).collect();
    for (row, ci) in prob.a.iter().zip(&prob.c) {
        let t = lp.add_var(1.0, (0.0, f64::INFINITY));
        let terms: Vec<(Variable, f64)> =
            b.iter().zip(row).filter(|(_, a)| !a.is_zero()).map(|(&v, a)| (v, rational_to_f64(a))).collect();
        let c = rational_to_f64(ci);
        lp.add_constraint(terms.iter().copied().chain([(t, -1.0)]), ComparisonOp::Le, -c);
        lp.add_constraint(terms.iter().copied().chain([(t, 1.0)]), ComparisonOp::Ge, -c);
    }
    let out = lp.solve().ok()?;
    let sol = out.solution()?;
    Some(b.iter().map(|&v| sol.var_value(v)).collect())
}

/// Exact simplex on the standard form, warm-started from `start` when given.
fn exact_simplex(prob: &Problem, start: Option<&[usize]>) -> Result<Vec<BigRational>> {
    let (rows, rhs, cost) = prob.standard_form(|x| x.clone(), BigRational::zero(), BigRational::one());
    let warm = start.and_then(|basis| simplex_from_basis(&rows, &rhs, &cost, basis));
    match warm.unwrap_or_else(|| simplex(&rows, &rhs, &cost)) {
        LpOutcome::Optimal { x, .. } => {
            let k = prob.free.len();
            Ok((0..k).map(|j| &x[j] - &x[k + j]).collect())
        }
        _ => Err(Error::Invariant("L1 program has no optimum".into())),
    }
}

/// Minimizes `L(P Q)` over `Q` of degree at most `e` with the pinned coefficient 1.
pub fn l1_min_fixed_degree(p: &IntPoly, e: usize, norm: Normalization) -> Result<FixedDegreeSolution> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let prob = Problem::new(p, e, norm);
    let k = prob.free.len();
    if k == 0 {
        let q = prob.q_of(&[]);
        return Ok(FixedDegreeSolution { value: BigRational::from_integer(p.length()), q, certified: true });
    }
    let mut exact: Option<(Vec<BigRational>, Vec<BigRational>)> = None;
    let mut start: Option<Vec<usize>> = None;
    if let Some(b) = float_l1(&prob) {
        let rf: Vec<f64> = prob
            .a
            .iter()
            .zip(&prob.c)
            .map(|(row, ci)| row.iter().zip(&b).fold(rational_to_f64(ci), |acc, (a, y)| acc + rational_to_f64(a) * y))
            .collect();
        let mut order: Vec<usize> = (0..rf.len()).collect();
        order.sort_by(|&i, &j| rf[i].abs().total_cmp(&rf[j].abs()).then(i.cmp(&j)));
        if let Some(sel) = independent_rows(&prob.a, &order, k) {
            let sys: Vec<Vec<BigRational>> = sel.iter().map(|&i| prob.a[i].clone()).collect();
            let rhs: Vec<BigRational> = sel.iter().map(|&i| -&prob.c[i]).collect();
            if let Some(bx) = solve_square(sys, rhs) {
                let r = prob.residuals(&bx);
                if dual_certificate(&prob, &r) {
                    exact = Some((bx, r));
                } else {
                    start = Some(prob.vertex_basis(&sel, &bx, &r));
                }
            }
        }
    }
    let (b, r) = match exact {
        Some(v) => v,
        None => {
            let b = exact_simplex(&prob, start.as_deref())?;
            let r = prob.residuals(&b);
            (b, r)
        }
    };
    let value = r.iter().fold(BigRational::zero(), |acc, x| acc + x.abs());
    Ok(FixedDegreeSolution { value, q: prob.q_of(&b), certified: true })
}

fn mahler_enclosure(p: &IntPoly) -> Result<RationalInterval> {
    let tol = BigRational::new(BigInt::one(), BigInt::from(1_000_000_000_000u64));
    let m = mahler_measure(p, &tol)?;
    Ok(RationalInterval { lo: m.lo().to_rational(), hi: m.hi().to_rational() })
}

/// Degree sweep `e = 0..=e_max` over both normalizations.
pub fn reduced_length(p: &IntPoly, config: &LengthConfig) -> Result<ReducedLengthEstimate> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let jobs: Vec<(usize, Normalization)> = (0..=config.e_max)
        .flat_map(|e| [(e, Normalization::ConstantOne), (e, Normalization::LeadingOne)])
        .collect();
    let solved: Vec<FixedDegreeSolution> =
        jobs.par_iter().map(|&(e, n)| l1_min_fixed_degree(p, e, n)).collect::<Result<_>>()?;
    let mut sweep = Vec::with_capacity(config.e_max + 1);
    let mut best: Option<(usize, usize)> = None;
    for (idx, ((e, _), sol)) in jobs.iter().zip(&solved).enumerate() {
        if sweep.len() <= *e {
            sweep.push(sol.value.clone());
        } else if sol.value < sweep[*e] {
            sweep[*e] = sol.value.clone();
        }
        // Strict improvement only: ties keep the smaller degree and ConstantOne.
        if best.is_none_or(|(b, _)| sol.value < solved[b].value) {
            best = Some((idx, *e));
        }
    }
    let (bi, degree_used) = best.expect("at least one degree");
    let sol = &solved[bi];
    let converged = config.e_max >= config.stall && &sweep[config.e_max - config.stall] - &sweep[config.e_max] < config.tol;
    Ok(ReducedLengthEstimate {
        value: sol.value.clone(),
        witness_q: sol.q.clone(),
        normalization: jobs[bi].1,
        degree_used,
        lower_bound: mahler_enclosure(p)?,
        converged,
        sweep,
        certified: solved.iter().all(|s| s.certified),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorKind {
    Cyclotomic,
    InsideUnitDisk,
    Other,
}

/// Classifies an irreducible factor for the admissible-factor enumeration.
pub fn factor_kind(f: &IntPoly) -> Result<FactorKind> {
    if cyclotomic_index(f).is_some() {
        return Ok(FactorKind::Cyclotomic);
    }
    for a in AlgebraicNumber::roots_of(f)? {
        if a.modulus_class()? != ModulusClass::LT1 {
            return Ok(FactorKind::Other);
        }
    }
    Ok(FactorKind::InsideUnitDisk)
}

/// `lambda(R) = min ell(R / Q)` over admissible factors `Q`.
///
/// Constant factors have no roots, so the content of `R` is always divided out.
pub fn overreduced_length(r: &IntPoly, config: &LengthConfig) -> Result<OverreducedLengthEstimate> {
    let fac = factor_over_integers(r, &config.factor)?;
    let mut choices: Vec<Vec<(IntPoly, usize)>> = Vec::new();
    for (f, mult) in &fac.factors {
        let max = match factor_kind(f)? {
            FactorKind::Cyclotomic => 1,
            FactorKind::InsideUnitDisk => *mult,
            FactorKind::Other => 0,
        };
        choices.push((0..=max).map(|k| (f.clone(), k)).collect());
    }
    let mut candidates: Vec<IntPoly> = vec![IntPoly::constant(fac.content.clone())];
    for opts in &choices {
        let mut next = Vec::with_capacity(candidates.len() * opts.len());
        for q in &candidates {
            for (f, k) in opts {
                next.push(q * &f.pow(*k as u32));
            }
        }
        candidates = next;
    }
    let results: Vec<(IntPoly, IntPoly, ReducedLengthEstimate)> = candidates
        .par_iter()
        .map(|q| {
            let quot = r.exact_div(q)?;
            let est = reduced_length(&quot, config)?;
            Ok((q.clone(), quot, est))
        })
        .collect::<Result<_>>()?;
    let n = results.len();
    let (q, quotient, inner) = results
        .into_iter()
        .min_by(|a, b| {
            a.2.value
                .cmp(&b.2.value)
                .then(a.0.degree().cmp(&b.0.degree()))
                .then_with(|| a.0.coeffs().cmp(b.0.coeffs()))
        })
        .expect("Q = content is always admissible");
    Ok(OverreducedLengthEstimate { value: inner.value.clone(), admissible_factor: q, quotient, inner, candidates: n })
}

/// `L(R_m)` for `R_m(x) = prod_j (q_j^m / p_j^(m-1) x^m - p_j)`, `m = 1..=m_max`.
pub fn rational_family_bound(pairs: &[(i64, i64)], m_max: u32) -> Result<Vec<BigRational>> {
    for &(p, q) in pairs {
        if p <= q.abs() || q == 0 {
            return Err(Error::InvalidPair { p, q });
        }
    }
    Ok((1..=m_max)
        .map(|m| {
            let r = pairs.iter().fold(RatPoly::one(), |acc, &(p, q)| {
                let lead = BigRational::new(BigInt::from(q).pow(m), BigInt::from(p).pow(m - 1));
                let factor = &RatPoly::monomial(lead, m as usize) - &RatPoly::constant(BigRational::from_integer(BigInt::from(p)));
                &acc * &factor
            });
            r.length()
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct C2Bounds {
    /// `1 / ell((x-1)^max(g,0) P^(f+1))`, using the upper estimate of `ell`.
    #[serde(with = "serde_num::rational")]
    pub ell_bound: BigRational,
    /// `max_Q 1 / L((x-1)^(g+1) P^(f+1) Q)` over the candidates.
    #[serde(with = "serde_num::rational")]
    pub l_bound: BigRational,
    pub best_q: IntPoly,
    pub ell: ReducedLengthEstimate,
}

/// Default multipliers: `1`, `x^j +- 1` and `1 + x + ... + x^j` for `j <= 4`.
pub fn default_q_candidates() -> Vec<IntPoly> {
    let mut out = vec![IntPoly::one()];
    for j in 1..=4usize {
        let xj = IntPoly::monomial(BigInt::one(), j);
        out.push(&xj + &IntPoly::one());
        out.push(&xj - &IntPoly::one());
        out.push(IntPoly::new(vec![BigInt::one(); j + 1]));
    }
    out
}

pub fn corollary_c2_bounds(
    p: &IntPoly,
    f: i64,
    g: i64,
    q_candidates: Option<&[IntPoly]>,
    config: &LengthConfig,
) -> Result<C2Bounds> {
    if f < 0 || g < -1 {
        return Err(Error::InvalidDegrees(format!("need f >= 0 and g >= -1, got f = {f}, g = {g}")));
    }
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let x_minus_1 = IntPoly::from_i64(&[-1, 1]);
    let pf = p.pow(f as u32 + 1);
    let base = &x_minus_1.pow(g.max(0) as u32) * &pf;
    let ell = reduced_length(&base, config)?;
    let l_base = &x_minus_1.pow((g + 1) as u32) * &pf;
    let defaults = default_q_candidates();
    let cands = q_candidates.unwrap_or(&defaults);
    let mut best: Option<(BigInt, IntPoly)> = None;
    for q in cands.iter().filter(|q| !q.is_zero()) {
        let l = (&l_base * q).length();
        if best.as_ref().is_none_or(|(bl, _)| l < *bl) {
            best = Some((l, q.clone()));
        }
    }
    let (l, best_q) = best.ok_or_else(|| Error::InvalidDegrees("no nonzero Q candidate".into()))?;
    Ok(C2Bounds {
        ell_bound: ell.value.recip(),
        l_bound: BigRational::new(BigInt::one(), l),
        best_q,
        ell,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn fixed_degree_examples() {
        let two_x_minus_3 = p(&[-3, 2]);
        let s0 = l1_min_fixed_degree(&two_x_minus_3, 0, Normalization::ConstantOne).unwrap();
        assert_eq!(s0.value, rat(5, 1));
        assert_eq!(s0.q, RatPoly::one());
        let s1 = l1_min_fixed_degree(&two_x_minus_3, 1, Normalization::ConstantOne).unwrap();
        assert_eq!(s1.value, rat(13, 3));
        assert_eq!(s1.q, RatPoly::new(vec![rat(1, 1), rat(2, 3)]));
        let s2 = l1_min_fixed_degree(&two_x_minus_3, 2, Normalization::ConstantOne).unwrap();
        assert_eq!(s2.value, rat(35, 9));
    }

    /// Grid oracle for the one-variable problem `min |2b| + |2 - 3b| + 3`.
    #[test]
    fn degree_one_matches_grid_search() {
        let best = (0..=3000)
            .map(|i| {
                let b = i as f64 / 1000.0 - 1.0;
                (2.0 * b).abs() + (2.0 - 3.0 * b).abs() + 3.0
            })
            .fold(f64::INFINITY, f64::min);
        let s1 = l1_min_fixed_degree(&p(&[-3, 2]), 1, Normalization::ConstantOne).unwrap();
        assert!((rational_to_f64(&s1.value) - best).abs() < 1e-3);
    }

    #[test]
    fn sweep_value_for_linear_polynomial() {
        // Constant-one optimum at degree e is 3 + 2 (2/3)^e.
        let est = reduced_length(&p(&[-3, 2]), &LengthConfig::default()).unwrap();
        let expect = rat(3, 1) + rat(2, 1) * rat(2, 3).pow(32);
        assert_eq!(est.value, expect);
        assert_eq!(est.normalization, Normalization::ConstantOne);
        assert_eq!(est.degree_used, 32);
        assert_eq!(est.value, (&p(&[-3, 2]).to_rat() * &est.witness_q).length());
    }

    #[test]
    fn constant_and_x_minus_one() {
        let c = reduced_length(&p(&[5]), &LengthConfig::with_e_max(6)).unwrap();
        assert_eq!(c.value, rat(5, 1));
        let x1 = reduced_length(&p(&[-1, 1]), &LengthConfig::with_e_max(10)).unwrap();
        assert_eq!(x1.value, rat(2, 1));
        assert!(x1.converged);
    }

    #[test]
    fn overreduced_examples() {
        let cfg = LengthConfig::with_e_max(48);
        let tol = rat(1, 1_000_000);
        let a = overreduced_length(&p(&[-3, 2]), &cfg).unwrap();
        assert!(a.value >= rat(3, 1) && a.value <= rat(3, 1) + &tol);
        assert_eq!(a.admissible_factor, IntPoly::one());
        let r = &p(&[-1, 1]) * &p(&[-3, 2]);
        let b = overreduced_length(&r, &cfg).unwrap();
        assert_eq!(b.admissible_factor, p(&[-1, 1]));
        assert!(b.value <= rat(3, 1) + &tol);
        let r = &p(&[-1, 2]) * &p(&[-3, 2]);
        let c = overreduced_length(&r, &cfg).unwrap();
        assert_eq!(c.admissible_factor, p(&[-1, 2]));
        assert!(c.value <= rat(3, 1) + &tol);
    }

    #[test]
    fn factor_kinds() {
        assert_eq!(factor_kind(&p(&[1, 1, 1])).unwrap(), FactorKind::Cyclotomic);
        assert_eq!(factor_kind(&p(&[-1, 2])).unwrap(), FactorKind::InsideUnitDisk);
        assert_eq!(factor_kind(&p(&[0, 1])).unwrap(), FactorKind::InsideUnitDisk);
        assert_eq!(factor_kind(&p(&[-1, -1, 1])).unwrap(), FactorKind::Other);
    }

    #[test]
    fn rational_family_examples() {
        let v = rational_family_bound(&[(3, 2)], 40).unwrap();
        assert_eq!(v[0], rat(5, 1));
        assert_eq!(v[1], rat(13, 3));
        assert!(v.windows(2).all(|w| w[1] <= w[0]));
        assert!(v.iter().all(|x| *x >= rat(3, 1)));
        assert!(rational_to_f64(&v[39]) - 3.0 < 1e-6);
        assert_eq!(rational_family_bound(&[(2, 3)], 3), Err(Error::InvalidPair { p: 2, q: 3 }));
    }

    #[test]
    fn c2_examples() {
        let cfg = LengthConfig::with_e_max(24);
        let b = corollary_c2_bounds(&p(&[-3, 2]), 0, -1, None, &cfg).unwrap();
        assert!((rational_to_f64(&b.ell_bound) - 1.0 / 3.0).abs() < 1e-3);
        assert_eq!(b.l_bound, rat(1, 5));
        let b = corollary_c2_bounds(&p(&[-3, 2]), 1, -1, None, &cfg).unwrap();
        assert!(b.ell_bound <= rat(1, 9));
        assert!(corollary_c2_bounds(&p(&[-3, 2]), -1, 0, None, &cfg).is_err());
        assert!(corollary_c2_bounds(&p(&[-3, 2]), 0, -2, None, &cfg).is_err());
    }

    fn small_poly() -> impl Strategy<Value = IntPoly> {
        prop::collection::vec(-9i64..=9, 1..=5)
            .prop_map(|c| IntPoly::from_i64(&c))
            .prop_filter("nonzero", |q| !q.is_zero())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn sweep_is_monotone_and_witnessed(poly in small_poly()) {
            let est = reduced_length(&poly, &LengthConfig::with_e_max(10)).unwrap();
            prop_assert!(est.sweep.windows(2).all(|w| w[1] <= w[0]));
            prop_assert_eq!(&est.value, &(&poly.to_rat() * &est.witness_q).length());
            let slack = rat(1, 1_000_000);
            prop_assert!(est.value >= &est.lower_bound.lo - slack);
        }

        #[test]
        fn guided_solve_matches_cold_simplex(poly in small_poly(), e in 1usize..7, lead in any::<bool>()) {
            prop_assume!(poly.degree().unwrap() >= 1);
            let norm = if lead { Normalization::LeadingOne } else { Normalization::ConstantOne };
            let fast = l1_min_fixed_degree(&poly, e, norm).unwrap();
            let prob = Problem::new(&poly, e, norm);
            let cold = prob.residuals(&exact_simplex(&prob, None).unwrap()).iter().fold(BigRational::zero(), |acc, x| acc + x.abs());
            prop_assert_eq!(fast.value, cold);
        }

        #[test]
        fn lambda_at_most_ell(poly in small_poly()) {
            let cfg = LengthConfig::with_e_max(8);
            let ell = reduced_length(&poly, &cfg).unwrap();
            let lam = overreduced_length(&poly, &cfg).unwrap();
            prop_assert!(lam.value <= ell.value);
            prop_assert!(lam.admissible_factor.divides(&poly));
        }
    }
}
