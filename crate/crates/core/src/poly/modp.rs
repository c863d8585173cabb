//! Polynomials over a small prime field `F_p` (p < 2^31).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

use super::Poly;

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    (a * b) % p
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Polynomial over `F_p`, ascending coefficients, normalized.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModPoly {
    pub p: u64,
    pub c: Vec<u64>,
}

impl ModPoly {
    pub fn new(p: u64, mut c: Vec<u64>) -> Self {
        for x in c.iter_mut() {
            *x %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        ModPoly { p, c }
    }

    pub fn from_int(f: &Poly<BigInt>, p: u64) -> Self {
        let pb = BigInt::from(p);
        ModPoly::new(
            p,
            f.coeffs()
                .iter()
                .map(|a| a.mod_floor(&pb).to_u64().expect("reduced residue fits u64"))
                .collect(),
        )
    }

    pub fn zero(p: u64) -> Self {
        ModPoly { p, c: vec![] }
    }

    pub fn one(p: u64) -> Self {
        ModPoly::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        ModPoly::new(p, vec![0, 1])
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lc(&self) -> u64 {
        *self.c.last().unwrap_or(&0)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod(self.lc(), self.p);
        self.scale(inv)
    }

    pub fn scale(&self, s: u64) -> Self {
        ModPoly::new(self.p, self.c.iter().map(|&a| mul_mod(a, s, self.p)).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let p = self.p;
        ModPoly::new(
            p,
            (0..n)
                .map(|i| (self.c.get(i).copied().unwrap_or(0) + o.c.get(i).copied().unwrap_or(0)) % p)
                .collect(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let p = self.p;
        ModPoly::new(
            p,
            (0..n)
                .map(|i| (self.c.get(i).copied().unwrap_or(0) + p - o.c.get(i).copied().unwrap_or(0)) % p)
                .collect(),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return ModPoly::zero(self.p);
        }
        let p = self.p;
        let mut out = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                out[i + j] = (out[i + j] + a * b) % p;
            }
        }
        ModPoly::new(p, out)
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let p = self.p;
        let dd = d.degree().expect("division by zero polynomial mod p");
        if self.c.len() <= dd {
            return (ModPoly::zero(p), self.clone());
        }
        let inv = inv_mod(d.lc(), p);
        let mut rem = self.c.clone();
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let q = mul_mod(rem[i + dd], inv, p);
            if q != 0 {
                for (j, &dc) in d.c.iter().enumerate() {
                    rem[i + j] = (rem[i + j] + p - mul_mod(q, dc, p)) % p;
                }
            }
            quot[i] = q;
        }
        rem.truncate(dd);
        (ModPoly::new(p, quot), ModPoly::new(p, rem))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*o = g`, `g` monic.
    pub fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (ModPoly::one(p), ModPoly::zero(p));
        let (mut t0, mut t1) = (ModPoly::zero(p), ModPoly::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        let inv = inv_mod(r0.lc(), p);
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        ModPoly::new(
            p,
            self.c.iter().enumerate().skip(1).map(|(i, &a)| mul_mod(a, i as u64 % p, p)).collect(),
        )
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, e: &BigUint, m: &Self) -> Self {
        let mut acc = ModPoly::one(self.p).rem(m);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(&acc).rem(m);
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Symmetric lift to integer coefficients in `(-p/2, p/2]`.
    pub fn lift_symmetric(&self) -> Poly<BigInt> {
        let p = self.p as i64;
        Poly::new(
            self.c
                .iter()
                .map(|&a| {
                    let a = a as i64;
                    BigInt::from(if a > p / 2 { a - p } else { a })
                })
                .collect(),
        )
    }
}

/// Distinct-degree factorization of a monic squarefree polynomial:
/// returns `(product of irreducible factors of degree d, d)`.
pub fn distinct_degree(f: &ModPoly) -> Vec<(ModPoly, usize)> {
    let p = f.p;
    let mut out = Vec::new();
    let mut rest = f.clone();
    let x = ModPoly::x(p);
    let mut h = x.clone();
    let mut d = 0;
    while let Some(deg) = rest.degree() {
        if deg < 2 * (d + 1) {
            if deg > 0 {
                out.push((rest.clone(), deg));
            }
            break;
        }
        d += 1;
        h = h.pow_mod(&BigUint::from(p), &rest);
        let g = rest.gcd(&h.sub(&x));
        if g.degree().unwrap_or(0) > 0 {
            out.push((g.clone(), d));
            rest = rest.div_rem(&g).0;
            h = h.rem(&rest);
        }
    }
    out
}

/// Cantor-Zassenhaus splitting of a monic squarefree product of irreducibles
/// of equal degree `d` (p odd).
pub fn equal_degree<R: Rng>(f: &ModPoly, d: usize, rng: &mut R) -> Vec<ModPoly> {
    let p = f.p;
    let n = f.degree().unwrap_or(0);
    if n == d {
        return vec![f.monic()];
    }
    let e: BigUint = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a = ModPoly::new(p, (0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let g = f.gcd(&a);
        let split = if g.degree().unwrap_or(0) > 0 {
            g
        } else {
            let b = a.pow_mod(&e, f).sub(&ModPoly::one(p));
            f.gcd(&b)
        };
        let k = split.degree().unwrap_or(0);
        if k > 0 && k < n {
            let other = f.div_rem(&split).0;
            let mut out = equal_degree(&split, d, rng);
            out.extend(equal_degree(&other.monic(), d, rng));
            return out;
        }
    }
}

/// Complete factorization of a monic squarefree polynomial into monic irreducibles.
pub fn factor_squarefree<R: Rng>(f: &ModPoly, rng: &mut R) -> Vec<ModPoly> {
    let mut out = Vec::new();
    for (g, d) in distinct_degree(&f.monic()) {
        out.extend(equal_degree(&g, d, rng));
    }
    out.sort();
    out
}

pub fn is_zero_int_mod(a: &BigInt, m: &BigInt) -> bool {
    a.mod_floor(m).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn factors_x4_minus_1_mod_5() {
        let f = ModPoly::new(5, vec![4, 0, 0, 0, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let fs = factor_squarefree(&f, &mut rng);
        assert_eq!(fs.len(), 4);
        let prod = fs.iter().fold(ModPoly::one(5), |a, b| a.mul(b));
        assert_eq!(prod, f);
    }

    #[test]
    fn irreducible_stays_whole() {
        // x^2 + 1 is irreducible mod 3.
        let f = ModPoly::new(3, vec![1, 0, 1]);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert_eq!(factor_squarefree(&f, &mut rng), vec![f]);
    }

    #[test]
    fn ext_gcd_identity() {
        let a = ModPoly::new(7, vec![1, 2, 3]);
        let b = ModPoly::new(7, vec![5, 1]);
        let (g, s, t) = a.ext_gcd(&b);
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
        assert_eq!(g, ModPoly::one(7));
    }
}
