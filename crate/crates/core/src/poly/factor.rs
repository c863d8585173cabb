//! Factorization over the integers: squarefree decomposition, modular
//! factorization, Hensel lifting and Zassenhaus recombination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::modp::{factor_squarefree, is_prime, ModPoly};
use super::Poly;
use crate::error::{Error, Result};
use crate::scalar::serde_num;

type IntPoly = Poly<BigInt>;
type RatPoly = Poly<num_rational::BigRational>;

#[derive(Clone, Debug)]
pub struct FactorConfig {
    pub max_degree: usize,
    pub max_recombination_trials: u64,
    /// Number of good primes tried; the one giving the fewest modular factors wins.
    pub candidate_primes: usize,
}

impl Default for FactorConfig {
    fn default() -> Self {
        FactorConfig { max_degree: 64, max_recombination_trials: 1 << 20, candidate_primes: 5 }
    }
}

/// `unit * content * prod(factor^multiplicity)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    pub unit: i8,
    #[serde(with = "serde_num::bigint")]
    pub content: BigInt,
    pub factors: Vec<(IntPoly, usize)>,
}

impl Factorization {
    pub fn expand(&self) -> IntPoly {
        let mut acc = IntPoly::constant(BigInt::from(self.unit) * &self.content);
        for (f, m) in &self.factors {
            acc = &acc * &f.pow(*m as u32);
        }
        acc
    }

    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }
}

/// Yun's algorithm; the multiplicity-weighted product of the parts equals the
/// primitive part of the input.
pub fn squarefree_decomposition(p: &IntPoly) -> Result<Vec<(IntPoly, usize)>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let a = p.to_rat().monic();
    let da = a.derivative();
    let c = a.gcd(&da);
    let mut w = a.exact_div(&c)?;
    let mut y = da.exact_div(&c)?;
    let mut z = &y - &w.derivative();
    let mut out = Vec::new();
    let mut i = 1;
    while w.degree().unwrap_or(0) > 0 {
        let g = w.gcd(&z);
        if g.degree().unwrap_or(0) > 0 {
            out.push((RatPoly::clear_denominators(&g).primitive_part(), i));
        }
        w = w.exact_div(&g)?;
        y = z.exact_div(&g)?;
        z = &y - &w.derivative();
        i += 1;
    }
    Ok(out)
}

/// Complete factorization over the integers.
pub fn factor_over_integers(p: &IntPoly, config: &FactorConfig) -> Result<Factorization> {
    let deg = p.degree().ok_or(Error::ZeroPolynomial)?;
    if deg > config.max_degree {
        return Err(Error::DegreeTooLarge { degree: deg, max: config.max_degree });
    }
    let unit: i8 = if p.leading().unwrap().is_negative() { -1 } else { 1 };
    let content = p.content();
    let mut factors = Vec::new();
    for (part, mult) in squarefree_decomposition(p)? {
        for f in factor_squarefree_primitive(&part, config)? {
            factors.push((f, mult));
        }
    }
    factors.sort_by(|(a, _), (b, _)| a.degree().cmp(&b.degree()).then_with(|| a.coeffs().cmp(b.coeffs())));
    Ok(Factorization { unit, content, factors })
}

/// Irreducible factors of a squarefree primitive polynomial with positive
/// leading coefficient.
fn factor_squarefree_primitive(f: &IntPoly, config: &FactorConfig) -> Result<Vec<IntPoly>> {
    let n = f.degree().unwrap_or(0);
    if n <= 1 {
        return Ok(vec![f.clone()]);
    }
    // Pull out the factor x first; the rest has a nonzero constant term.
    if f.coeff(0).is_zero() {
        let rest = Poly::new(f.coeffs()[1..].to_vec());
        let mut out = vec![IntPoly::x()];
        out.extend(factor_squarefree_primitive(&rest, config)?);
        return Ok(out);
    }
    let lc = f.leading().unwrap().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);

    let mut best: Option<(u64, Vec<ModPoly>)> = None;
    let mut tried = 0;
    let mut q = 3u64;
    while tried < config.candidate_primes {
        if is_prime(q) && !(&lc % BigInt::from(q)).is_zero() {
            let fp = ModPoly::from_int(f, q);
            if fp.degree() == Some(n) && fp.is_squarefree() {
                tried += 1;
                let fs = factor_squarefree(&fp, &mut rng);
                if fs.len() == 1 {
                    return Ok(vec![f.clone()]);
                }
                if best.as_ref().is_none_or(|(_, b)| fs.len() < b.len()) {
                    best = Some((q, fs));
                }
            }
        }
        q += 2;
    }
    let (p, modular) = best.expect("some prime is good for a squarefree polynomial");

    // Landau-Mignotte style bound on coefficients of any factor.
    let norm2 = f.coeffs().iter().map(|c| c * c).fold(BigInt::zero(), |a, b| a + b).sqrt() + 1;
    let bound = (BigInt::one() << n) * norm2 * &lc;
    let target = bound * 2 + 1;
    let pb = BigInt::from(p);
    let mut modulus = pb.clone();
    let mut steps = 1u32;
    while modulus <= target {
        modulus *= &pb;
        steps += 1;
    }
    let lifted = hensel_lift_all(f, &modular, p, steps);
    recombine(f, lifted, &modulus, config.max_recombination_trials)
}

fn reduce_sym(a: &BigInt, m: &BigInt) -> BigInt {
    let r = a.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn poly_mod(f: &IntPoly, m: &BigInt) -> IntPoly {
    Poly::new(f.coeffs().iter().map(|c| reduce_sym(c, m)).collect())
}

/// Lifts `f = lc * prod(factors) mod p` to monic factors mod `p^steps`.
fn hensel_lift_all(f: &IntPoly, factors: &[ModPoly], p: u64, steps: u32) -> Vec<IntPoly> {
    if factors.len() == 1 {
        let m = BigInt::from(p).pow(steps);
        let lc = f.leading().unwrap();
        let inv = lc.mod_floor(&m).modinv(&m).expect("leading coefficient is a unit mod p");
        return vec![poly_mod(&f.scale(&inv), &m)];
    }
    let mid = factors.len() / 2;
    let (left, right) = factors.split_at(mid);
    let lc_mod = f.leading().unwrap().mod_floor(&BigInt::from(p)).to_u64().expect("residue fits u64");
    let g0 = left.iter().fold(ModPoly::one(p), |a, b| a.mul(b)).scale(lc_mod);
    let h0 = right.iter().fold(ModPoly::one(p), |a, b| a.mul(b));
    let (g, h) = hensel_lift_pair(f, &g0, &h0, p, steps);
    let mut out = hensel_lift_all(&g, left, p, steps);
    out.extend(hensel_lift_all(&h, right, p, steps));
    out
}

/// Linear Hensel lifting of `f = g*h mod p` (h monic) to `mod p^steps`.
/// The returned `g` keeps the leading coefficient of `f`.
fn hensel_lift_pair(f: &IntPoly, g0: &ModPoly, h0: &ModPoly, p: u64, steps: u32) -> (IntPoly, IntPoly) {
    let (one, s, t) = g0.ext_gcd(h0);
    debug_assert_eq!(one, ModPoly::one(p));
    let pb = BigInt::from(p);
    let lc = f.leading().unwrap().clone();
    let mut g = g0.lift_symmetric();
    // Pin the leading coefficient of g to lc(f) exactly.
    let dg = g.degree().unwrap_or(0);
    let mut gc = g.coeffs().to_vec();
    gc.resize(dg + 1, BigInt::zero());
    gc[dg] = lc.clone();
    g = Poly::new(gc);
    let mut h = h0.lift_symmetric();
    let mut pk = pb.clone();
    for _ in 1..steps {
        let diff = f - &(&g * &h);
        let e_int = Poly::new(diff.coeffs().iter().map(|c| c / &pk).collect::<Vec<_>>());
        let e = ModPoly::from_int(&e_int, p);
        let (quot, sigma) = e.mul(&s).div_rem(h0);
        let tau = e.mul(&t).add(&quot.mul(g0));
        let h_new = &h + &sigma.lift_symmetric().scale(&pk);
        let g_new = &g + &tau.lift_symmetric().scale(&pk);
        pk *= &pb;
        g = poly_mod(&g_new, &pk);
        h = poly_mod(&h_new, &pk);
    }
    (g, h)
}

fn recombine(f: &IntPoly, mut lifted: Vec<IntPoly>, m: &BigInt, max_trials: u64) -> Result<Vec<IntPoly>> {
    let mut f = f.clone();
    let mut found = Vec::new();
    let mut trials = 0u64;
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut progress = false;
        let mut comb: Vec<usize> = (0..size).collect();
        'outer: loop {
            trials += 1;
            if trials > max_trials {
                return Err(Error::RecombinationLimit(max_trials));
            }
            let lc = f.leading().unwrap().clone();
            // Cheap constant-term test before the full product.
            let c0 = comb.iter().fold(lc.clone(), |a, &i| reduce_sym(&(a * lifted[i].coeff(0)), m));
            let f0 = f.coeff(0) * &lc;
            if !c0.is_zero() && (&f0 % &c0).is_zero() {
                let prod = comb.iter().fold(IntPoly::constant(lc.clone()), |a, &i| poly_mod(&(&a * &lifted[i]), m));
                let cand = prod.primitive_part();
                if let Ok(q) = f.exact_div(&cand) {
                    found.push(cand);
                    f = q;
                    let mut rest = Vec::new();
                    for (i, u) in lifted.into_iter().enumerate() {
                        if !comb.contains(&i) {
                            rest.push(u);
                        }
                    }
                    lifted = rest;
                    progress = true;
                    break 'outer;
                }
            }
            // Next combination in lexicographic order.
            let k = comb.len();
            let n = lifted.len();
            let mut i = k;
            while i > 0 && comb[i - 1] == n - k + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            comb[i - 1] += 1;
            for j in i..k {
                comb[j] = comb[j - 1] + 1;
            }
        }
        if !progress {
            size += 1;
        }
    }
    if f.degree().unwrap_or(0) > 0 {
        found.push(f.primitive_part());
    }
    Ok(found)
}
