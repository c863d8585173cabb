use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::Poly;

pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn mobius(mut n: u64) -> i8 {
    let mut sign = 1i8;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// The `d`-th cyclotomic polynomial via `prod_{e | d} (x^e - 1)^{mu(d/e)}`.
pub fn cyclotomic(d: u64) -> Poly<BigInt> {
    assert!(d >= 1, "cyclotomic index starts at 1");
    let mut num = Poly::<BigInt>::one();
    let mut den = Poly::<BigInt>::one();
    for e in 1..=d {
        if !d.is_multiple_of(e) {
            continue;
        }
        let mut c = vec![BigInt::from(0); e as usize + 1];
        c[0] = BigInt::from(-1);
        c[e as usize] = BigInt::one();
        let f = Poly::new(c);
        match mobius(d / e) {
            1 => num = &num * &f,
            -1 => den = &den * &f,
            _ => {}
        }
    }
    num.exact_div(&den).expect("Mobius product is exact")
}

/// `Some(d)` iff the polynomial is `±Φ_d`.
pub fn cyclotomic_index(p: &Poly<BigInt>) -> Option<u64> {
    let deg = p.degree()? as u64;
    if deg == 0 {
        return None;
    }
    let p = if p.leading().unwrap().is_negative() { -p.clone() } else { p.clone() };
    if !p.leading().unwrap().is_one() || p.coeff(0).abs() != BigInt::one() {
        return None;
    }
    if deg == 1 {
        return match p.coeff(0) {
            c if c == BigInt::from(-1) => Some(1),
            c if c.is_one() => Some(2),
            _ => None,
        };
    }
    if !p.coeff(0).is_one() || p.reverse() != p {
        return None;
    }
    // phi(d) >= sqrt(d / 2), so d <= 2 deg^2.
    (3..=2 * deg * deg).filter(|&d| euler_phi(d) == deg).find(|&d| cyclotomic(d) == p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly<BigInt> {
        Poly::<BigInt>::from_i64(c)
    }

    #[test]
    fn phi_values() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(97), 96);
    }

    #[test]
    fn index_examples() {
        assert_eq!(cyclotomic_index(&p(&[1, 1, 1])), Some(3));
        assert_eq!(cyclotomic_index(&p(&[-1, 1])), Some(1));
        assert_eq!(cyclotomic_index(&p(&[1, -1])), Some(1));
        assert_eq!(cyclotomic_index(&p(&[1, 1])), Some(2));
        assert_eq!(cyclotomic_index(&p(&[-1, -1, 1])), None);
        assert_eq!(cyclotomic_index(&p(&[1, 0, 1])), Some(4));
        assert_eq!(cyclotomic_index(&p(&[2, -3])), None);
    }

    /// Cyclotomics built by recursive exact division of `x^d - 1` must be
    /// recognized with their own index.
    #[test]
    fn recognizes_recursively_divided_cyclotomics() {
        let mut table: Vec<Poly<BigInt>> = vec![Poly::zero()];
        for d in 1..=100u64 {
            let mut c = vec![BigInt::from(0); d as usize + 1];
            c[0] = BigInt::from(-1);
            c[d as usize] = BigInt::one();
            let mut f = Poly::new(c);
            for e in 1..d {
                if d % e == 0 {
                    f = f.exact_div(&table[e as usize]).unwrap();
                }
            }
            assert_eq!(f, cyclotomic(d));
            assert_eq!(cyclotomic_index(&f), Some(d), "d = {d}");
            table.push(f);
        }
    }
}
