//! Seeded random corpus for `modone selftest`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use modone::expoly::{Expoly, ExpolyCoefficient, Term};
use modone::algebraic::AlgebraicNumber;
use modone::lengths::{overreduced_length, reduced_length, LengthConfig};
use modone::scalar::rational_to_f64;
use modone::IntPoly;

use crate::reports::{CheckResult, SelftestReport};

struct Tally {
    result: CheckResult,
}

impl Tally {
    fn new(name: &str) -> Self {
        Tally { result: CheckResult { name: name.into(), passed: 0, failed: 0, first_failure: None } }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        if ok {
            self.result.passed += 1;
        } else {
            self.result.failed += 1;
            if self.result.first_failure.is_none() {
                self.result.first_failure = Some(describe());
            }
        }
    }
}

fn random_poly(rng: &mut ChaCha8Rng, max_deg: usize, bound: i64) -> IntPoly {
    let d = rng.gen_range(1..=max_deg);
    let mut c: Vec<i64> = (0..=d).map(|_| rng.gen_range(-bound..=bound)).collect();
    while c[d] == 0 {
        c[d] = rng.gen_range(-bound..=bound);
    }
    IntPoly::from_i64(&c)
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(-9i64..=9)), BigInt::from(rng.gen_range(1i64..=5)))
}

fn random_expoly(rng: &mut ChaCha8Rng) -> Expoly {
    let n = rng.gen_range(1..=3);
    let mut bases: Vec<BigRational> = Vec::new();
    while bases.len() < n {
        let r = random_rational(rng);
        if !r.is_zero() && !bases.contains(&r) {
            bases.push(r);
        }
    }
    let terms = bases
        .iter()
        .map(|b| {
            let d = rng.gen_range(0..=2);
            Term::new(AlgebraicNumber::from_rational(b), (0..=d).map(|_| ExpolyCoefficient::Rational(random_rational(rng))).collect())
        })
        .collect();
    Expoly::new(terms).expect("distinct rational bases")
}

pub fn run(seed: u64, cases: usize, e_max: usize) -> SelftestReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = LengthConfig::with_e_max(e_max);
    let mut mahler = Tally::new("ell >= Mahler measure");
    let mut lambda = Tally::new("lambda <= ell");
    let mut transform = Tally::new("Q-transform equals shifted sum");
    let mut annihilate = Tally::new("annihilator transforms to zero");
    for _ in 0..cases {
        let p = random_poly(&mut rng, 6, 9);
        match (reduced_length(&p, &cfg), overreduced_length(&p, &cfg)) {
            (Ok(ell), Ok(lam)) => {
                let slack = BigRational::new(BigInt::from(1), BigInt::from(1_000_000));
                mahler.record(ell.value >= &ell.lower_bound.lo - &slack, || format!("{p}: ell {} below Mahler", rational_to_f64(&ell.value)));
                lambda.record(lam.value <= ell.value, || format!("{p}: lambda {} > ell {}", lam.value, ell.value));
            }
            (Err(e), _) | (_, Err(e)) => {
                mahler.record(false, || format!("{p}: {e}"));
                lambda.record(false, || format!("{p}: {e}"));
            }
        }

        let x = random_expoly(&mut rng);
        let q = random_poly(&mut rng, 4, 5);
        let ok = x.apply_q_transform(&q).is_ok_and(|y| {
            (1..=50u64).all(|k| {
                let direct = q
                    .coeffs()
                    .iter()
                    .enumerate()
                    .fold(BigRational::zero(), |acc, (s, b)| acc + x.eval_exact(k + s as u64).unwrap() * BigRational::from_integer(b.clone()));
                y.eval_exact(k).unwrap_or_else(BigRational::zero) == direct
            })
        });
        transform.record(ok, || format!("{x} with Q = {q}"));
        let zero = x.apply_q_transform(&x.annihilator()).is_ok_and(|y| y.is_zero());
        annihilate.record(zero, || format!("{x}"));
    }
    SelftestReport { seed, cases, checks: vec![mahler.result, lambda.result, transform.result, annihilate.result] }
}
