//! Decision procedures for the conditions that force infinitely many limit
//! points of `{x_k}`, the finiteness dichotomy and the interval bounds.
//!
//! Every condition quantifies over field automorphisms `sigma` of `C`, but
//! only through `sigma(alpha_i)` and `sigma(F_i)` with `F_i` over
//! `Q(alpha_i)`. Such a `sigma` restricts to the embedding fixed by the image
//! `beta` of `alpha_i`, so each quantifier becomes a loop over conjugates.
//! A conjugate `beta` that is not among the bases is a term with `F = 0`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebraic::{classify_abs_pisot_salem, AlgebraicNumber, ModulusClass, PisotSalemClass};
use crate::engine::{default_burn_in, limit_set_report, sample_expoly, SampleConfig, DEFAULT_CLUSTER_EPS, DEFAULT_EPS};
use crate::error::{Error, Result};
use crate::expoly::{Expoly, ExpolyCoefficient, RealnessCertificate, Term};
use crate::lengths::{length, overreduced_length, LengthConfig};
use crate::scalar::{rational_to_f64, serde_num};
use crate::{IntPoly, RatPoly};

/// The embedding `Q(alpha) -> Q(beta)` with `alpha -> beta`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "EmbeddingRepr")]
pub struct EmbeddingSpec {
    source_base: AlgebraicNumber,
    target_root: AlgebraicNumber,
}

#[derive(Deserialize)]
struct EmbeddingRepr {
    source_base: AlgebraicNumber,
    target_root: AlgebraicNumber,
}

impl TryFrom<EmbeddingRepr> for EmbeddingSpec {
    type Error = Error;

    fn try_from(r: EmbeddingRepr) -> Result<Self> {
        EmbeddingSpec::new(r.source_base, r.target_root)
    }
}

impl EmbeddingSpec {
    /// The identity is allowed; it is the embedding behind (c') and (d').
    pub fn new(source_base: AlgebraicNumber, target_root: AlgebraicNumber) -> Result<Self> {
        if source_base.minpoly() != target_root.minpoly() {
            return Err(Error::FieldMismatch);
        }
        Ok(EmbeddingSpec { source_base, target_root })
    }

    pub fn source_base(&self) -> &AlgebraicNumber {
        &self.source_base
    }

    pub fn target_root(&self) -> &AlgebraicNumber {
        &self.target_root
    }

    pub fn is_identity(&self) -> bool {
        self.source_base == self.target_root
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmbedComparison {
    Equal,
    /// Largest degree `i` with `sigma(f_i) != g_i`.
    DifferAtDegree(usize),
}

impl EmbedComparison {
    /// `deg(sigma(F) - G)`, with `-1` for equality.
    pub fn degree(self) -> i64 {
        match self {
            EmbedComparison::Equal => -1,
            EmbedComparison::DifferAtDegree(i) => i as i64,
        }
    }
}

fn field_poly(c: &ExpolyCoefficient, m: &RatPoly) -> Result<RatPoly> {
    c.field_element()
        .map(|g| g.rem(m))
        .ok_or_else(|| Error::UnsupportedCoefficient("symbolic coefficient has no image under an embedding".into()))
}

/// Compares `sigma(F)` with `G`, where `F` has coefficients `g(alpha)` and `G`
/// has coefficients `h(beta)`. Since `sigma(g(alpha)) = g(beta)`, equality is
/// `g = h` modulo the shared minimal polynomial.
pub fn embed_compare(f: &[ExpolyCoefficient], spec: &EmbeddingSpec, g: &[ExpolyCoefficient]) -> Result<EmbedComparison> {
    let m = spec.source_base.minpoly().to_rat();
    let zero = ExpolyCoefficient::Rational(BigRational::zero());
    for i in (0..f.len().max(g.len())).rev() {
        let a = field_poly(f.get(i).unwrap_or(&zero), &m)?;
        let b = field_poly(g.get(i).unwrap_or(&zero), &m)?;
        if a != b {
            return Ok(EmbedComparison::DifferAtDegree(i));
        }
    }
    Ok(EmbedComparison::Equal)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub term: usize,
    /// `sigma`, given by `alpha_i -> beta`; absent for (a) and (b).
    pub embedding: Option<EmbeddingSpec>,
    /// Term whose base is `beta`; `None` when `beta` is not a base.
    pub target_term: Option<usize>,
    /// `deg(sigma(F_i) - F_j)`, or the offending degree for (c') and (d').
    pub degree: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionFlag {
    pub holds: bool,
    pub witness: Option<Witness>,
    /// Candidates examined; all of them refute the condition when it fails.
    pub checked: usize,
}

impl ConditionFlag {
    fn search(candidates: impl Iterator<Item = Result<Option<Witness>>>) -> Result<Self> {
        let mut checked = 0;
        for c in candidates {
            checked += 1;
            if let Some(w) = c? {
                return Ok(ConditionFlag { holds: true, witness: Some(w), checked });
            }
        }
        Ok(ConditionFlag { holds: false, witness: None, checked })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub a: ConditionFlag,
    pub b: ConditionFlag,
    pub c: ConditionFlag,
    pub c_prime: ConditionFlag,
    pub d: ConditionFlag,
    pub d_prime: ConditionFlag,
    pub e: ConditionFlag,
    /// Every base is a root of unity or has a conjugate off the unit circle.
    pub hypothesis_ok_for_ciff: bool,
}

impl ConditionReport {
    /// One of (a)-(d) holds, so the interval bounds apply.
    pub fn bounds_apply(&self) -> bool {
        [&self.a, &self.b, &self.c, &self.c_prime, &self.d, &self.d_prime].iter().any(|f| f.holds)
    }

    pub fn forces_infinite(&self) -> bool {
        self.bounds_apply() || self.e.holds
    }
}

struct Conjugate {
    root: AlgebraicNumber,
    class: ModulusClass,
    term: Option<usize>,
}

struct TermInfo<'a> {
    term: &'a Term,
    class: ModulusClass,
    conjugates: Vec<Conjugate>,
}

fn term_infos(terms: &[Term]) -> Result<Vec<TermInfo<'_>>> {
    terms
        .iter()
        .map(|t| {
            let conjugates = t
                .base
                .conjugates()
                .into_iter()
                .map(|root| {
                    let class = root.modulus_class()?;
                    let term = terms.iter().position(|u| u.base == root);
                    Ok(Conjugate { root, class, term })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(TermInfo { term: t, class: t.base.modulus_class()?, conjugates })
        })
        .collect()
}

/// `deg(sigma(F_i) - F_j)` with `F_j = 0` for an absent conjugate.
fn sigma_difference(infos: &[TermInfo], i: usize, c: &Conjugate) -> Result<(EmbeddingSpec, i64)> {
    let spec = EmbeddingSpec::new(infos[i].term.base.clone(), c.root.clone())?;
    let deg = match c.term {
        Some(j) => embed_compare(&infos[i].term.coeffs, &spec, &infos[j].term.coeffs)?.degree(),
        None => infos[i].term.degree(),
    };
    Ok((spec, deg))
}

/// Pairs `(i, sigma)` with `|alpha_i|` and `|sigma(alpha_i)|` in the given
/// classes and `deg(sigma(F_i) - F_j) >= min_degree`, over field-valued terms.
fn conjugate_condition(
    infos: &[TermInfo],
    source: &[ModulusClass],
    target: &[ModulusClass],
    min_degree: i64,
) -> Result<ConditionFlag> {
    let candidates = infos.iter().enumerate().filter(|(_, t)| source.contains(&t.class) && !t.term.has_symbolic()).flat_map(|(i, t)| {
        t.conjugates
            .iter()
            .filter(|c| target.contains(&c.class) && c.term.is_none_or(|j| !infos[j].term.has_symbolic()))
            .map(move |c| (i, c))
    });
    ConditionFlag::search(candidates.map(|(i, c)| {
        let (spec, deg) = sigma_difference(infos, i, c)?;
        Ok((deg >= min_degree).then(|| Witness { term: i, embedding: Some(spec), target_term: c.term, degree: Some(deg) }))
    }))
}

/// Terms with a certified-irrational coefficient of degree `>= min_degree`.
fn symbolic_condition(infos: &[TermInfo], source: &[ModulusClass], min_degree: usize) -> ConditionFlag {
    let found = infos.iter().enumerate().filter(|(_, t)| source.contains(&t.class)).find_map(|(i, t)| {
        t.term.coeffs.iter().enumerate().skip(min_degree).find_map(|(d, c)| match c {
            ExpolyCoefficient::Symbolic(s) if s.known_irrational => Some(Witness {
                term: i,
                embedding: EmbeddingSpec::new(t.term.base.clone(), t.term.base.clone()).ok(),
                target_term: Some(i),
                degree: Some(d as i64),
            }),
            _ => None,
        })
    });
    let checked = infos.iter().filter(|t| source.contains(&t.class)).count();
    ConditionFlag { holds: found.is_some(), witness: found, checked }
}

fn base_condition(infos: &[TermInfo], class: ModulusClass, min_degree: i64) -> ConditionFlag {
    let found = infos
        .iter()
        .position(|t| t.class == class && t.term.degree() >= min_degree && !t.term.base.is_algebraic_integer())
        .map(|i| Witness { term: i, embedding: None, target_term: None, degree: Some(infos[i].term.degree()) });
    ConditionFlag { holds: found.is_some(), witness: found, checked: infos.iter().filter(|t| t.class == class).count() }
}

fn hypothesis_ok(t: &TermInfo) -> bool {
    t.term.base.root_of_unity_order().is_some() || t.conjugates.iter().any(|c| c.class != ModulusClass::EQ1)
}

/// Evaluates (a)-(e), (c') and (d').
///
/// Conditions (c), (d), (e) are decided over terms whose coefficients lie in
/// the base field; certified-irrational symbolic coefficients enter through
/// (c') and (d'), which imply (c) and (d).
pub fn check_conditions(x: &Expoly) -> Result<ConditionReport> {
    use ModulusClass::*;
    let infos = term_infos(x.terms())?;
    let mut c = conjugate_condition(&infos, &[GT1], &[GT1], 0)?;
    let mut d = conjugate_condition(&infos, &[GT1, EQ1], &[GT1, EQ1], 1)?;
    let mut e = conjugate_condition(&infos, &[GT1], &[GT1, EQ1], 0)?;
    let c_prime = symbolic_condition(&infos, &[GT1], 0);
    let d_prime = symbolic_condition(&infos, &[GT1, EQ1], 1);
    for (flag, implied) in [(&mut c, &c_prime), (&mut d, &d_prime), (&mut e, &c_prime)] {
        if !flag.holds && implied.holds {
            flag.holds = true;
            flag.witness = implied.witness.clone();
        }
    }
    Ok(ConditionReport {
        a: base_condition(&infos, GT1, 0),
        b: base_condition(&infos, EQ1, 1),
        c,
        c_prime,
        d,
        d_prime,
        e,
        hypothesis_ok_for_ciff: infos.iter().all(hypothesis_ok),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailedCondition {
    /// A base of modulus `> 1` is not an algebraic integer; (a) holds.
    One,
    /// A conjugate of a base of modulus `> 1` lies outside the open unit disk
    /// and is not matched by an equal term; (e) holds.
    Two,
    /// A conjugate of a root-of-unity base with `deg F >= 1` is not matched up
    /// to constants; (d) holds.
    Three,
    /// A certified-irrational coefficient; (c') holds.
    CPrime,
    /// A certified-irrational coefficient of positive degree; (d') holds.
    DPrime,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FinitenessVerdict {
    Finite,
    Infinite { failed: FailedCondition, witness: Witness },
    OutOfScope { reason: String },
}

/// Whether `{x_k}` has finitely many limit points, for bases that are roots
/// of unity or have a conjugate off the unit circle.
pub fn finiteness_verdict(x: &Expoly) -> Result<FinitenessVerdict> {
    use ModulusClass::*;
    if x.realness() == RealnessCertificate::Unverified {
        return Ok(FinitenessVerdict::OutOfScope { reason: "sequence is not certified real".into() });
    }
    let infos = term_infos(x.terms())?;
    if let Some(i) = infos.iter().position(|t| !hypothesis_ok(t)) {
        return Ok(FinitenessVerdict::OutOfScope {
            reason: format!("base {i} has every conjugate on the unit circle and is not a root of unity"),
        });
    }
    if x.has_symbolic() {
        for (flag, failed) in [(symbolic_condition(&infos, &[GT1], 0), FailedCondition::CPrime), (symbolic_condition(&infos, &[GT1, EQ1], 1), FailedCondition::DPrime)] {
            if let Some(witness) = flag.witness {
                return Ok(FinitenessVerdict::Infinite { failed, witness });
            }
        }
        return Err(Error::UnsupportedCoefficient("symbolic coefficient without an irrationality certificate".into()));
    }
    if let Some(witness) = base_condition(&infos, GT1, 0).witness {
        return Ok(FinitenessVerdict::Infinite { failed: FailedCondition::One, witness });
    }
    for (i, t) in infos.iter().enumerate().filter(|(_, t)| t.class == GT1) {
        for c in t.conjugates.iter().filter(|c| c.class != LT1) {
            let (spec, deg) = sigma_difference(&infos, i, c)?;
            if c.term.is_none() || deg >= 0 {
                let witness = Witness { term: i, embedding: Some(spec), target_term: c.term, degree: Some(deg) };
                return Ok(FinitenessVerdict::Infinite { failed: FailedCondition::Two, witness });
            }
        }
    }
    for (i, t) in infos.iter().enumerate().filter(|(_, t)| t.term.degree() >= 1 && t.term.base.root_of_unity_order().is_some()) {
        for c in &t.conjugates {
            let (spec, deg) = sigma_difference(&infos, i, c)?;
            if c.term.is_none() || deg >= 1 {
                let witness = Witness { term: i, embedding: Some(spec), target_term: c.term, degree: Some(deg) };
                return Ok(FinitenessVerdict::Infinite { failed: FailedCondition::Three, witness });
            }
        }
    }
    Ok(FinitenessVerdict::Finite)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecFinClass {
    /// Every rational shift `theta` leaves finitely many limit points.
    AllRationalsModOne,
    Empty,
}

/// Shifts `theta` for which `F(k) alpha^k - k theta` has finitely many limit
/// points mod 1, for real `alpha` with `|alpha| > 1`. A symbolic coefficient
/// counts as lying outside `Q(alpha)`.
pub fn spectrum_fin_class(alpha: &AlgebraicNumber, f: &[ExpolyCoefficient]) -> Result<SpecFinClass> {
    if f.iter().all(ExpolyCoefficient::is_zero) {
        return Err(Error::AllZeroCoefficients);
    }
    let pisot = alpha.is_real() && classify_abs_pisot_salem(alpha)? == PisotSalemClass::Pisot;
    Ok(if pisot && !f.iter().any(ExpolyCoefficient::is_symbolic) { SpecFinClass::AllRationalsModOne } else { SpecFinClass::Empty })
}

#[derive(Clone, Debug)]
pub struct BoundConfig {
    pub horizon: u64,
    /// Defaults to the midpoint of `1..=horizon`.
    pub burn_in: Option<u64>,
    pub eps: f64,
    pub cluster_eps: f64,
    pub lengths: LengthConfig,
}

impl Default for BoundConfig {
    fn default() -> Self {
        BoundConfig { horizon: 2000, burn_in: None, eps: DEFAULT_EPS, cluster_eps: DEFAULT_CLUSTER_EPS, lengths: LengthConfig::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidueBound {
    pub residue: u64,
    pub diameter: f64,
    pub clusters: usize,
    /// The sampled tail already spans an arc of length `>= 1/lambda`.
    pub exceeds_bound: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModulusBound {
    pub modulus: u64,
    pub residues: Vec<ResidueBound>,
    /// Some residue meets the interval bound at this horizon.
    pub bound_met_at_horizon: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    /// None of (a)-(d) holds; the bounds below are not asserted.
    pub vacuous: bool,
    pub annihilator: IntPoly,
    #[serde(with = "serde_num::bigint")]
    pub length: BigInt,
    /// Upper estimate of `lambda(R)`, so `inv_lambda` is a valid lower bound.
    #[serde(with = "serde_num::rational")]
    pub lambda: BigRational,
    pub lambda_factor: IntPoly,
    #[serde(with = "serde_num::rational")]
    pub inv_length: BigRational,
    #[serde(with = "serde_num::rational")]
    pub inv_lambda: BigRational,
    pub horizon: u64,
    pub burn_in: u64,
    /// Largest certified lower end of `||x_k||` over the sampled tail.
    pub tail_max_distance: f64,
    pub limsup_bound_met_at_horizon: bool,
    pub moduli: Vec<ModulusBound>,
}

/// `1/L(R)` and `1/lambda(R)` for the annihilator `R`, next to the sampled
/// tails for each modulus. The bounds are asymptotic; `*_met_at_horizon`
/// only records what the finite sample shows.
pub fn theorem_bounds(x: &Expoly, moduli: &[u64], cfg: &BoundConfig) -> Result<BoundReport> {
    if x.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let report = check_conditions(x)?;
    let r = x.annihilator();
    let l = length(&r);
    let over = overreduced_length(&r, &cfg.lengths)?;
    let one = BigRational::one();
    let inv_length = &one / BigRational::from_integer(l.clone());
    let inv_lambda = &one / &over.value;
    let burn_in = cfg.burn_in.unwrap_or_else(|| default_burn_in(1, cfg.horizon));
    let sample = sample_expoly(x, 1, cfg.horizon, &SampleConfig { eps: cfg.eps, shift: BigRational::zero() })?;
    let tail_max_distance = sample
        .values
        .iter()
        .filter(|v| v.k >= burn_in)
        .filter_map(|v| v.distance.as_ref().map(|d| rational_to_f64(&d.lo)))
        .fold(0.0, f64::max);
    let inv_lambda_f = rational_to_f64(&inv_lambda);
    let moduli = moduli
        .iter()
        .map(|&m| {
            let ls = limit_set_report(&sample, m, burn_in, cfg.cluster_eps)?;
            let residues: Vec<ResidueBound> = ls
                .residues
                .iter()
                .map(|r| ResidueBound {
                    residue: r.residue,
                    diameter: r.diameter,
                    clusters: r.centers.len(),
                    exceeds_bound: r.diameter >= inv_lambda_f,
                })
                .collect();
            let bound_met_at_horizon = residues.iter().any(|r| r.exceeds_bound);
            Ok(ModulusBound { modulus: m, residues, bound_met_at_horizon })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundReport {
        vacuous: !report.bounds_apply(),
        annihilator: r,
        length: l,
        lambda: over.value,
        lambda_factor: over.admissible_factor,
        limsup_bound_met_at_horizon: tail_max_distance >= rational_to_f64(&inv_length),
        inv_length,
        inv_lambda,
        horizon: cfg.horizon,
        burn_in,
        tail_max_distance,
        moduli,
    })
}
