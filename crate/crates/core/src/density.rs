//! Uniform-density and well-distribution estimators, and admissibility of
//! subsets of the circle.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::serde_num;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityEstimate {
    pub n: u64,
    #[serde(with = "serde_num::rational")]
    pub lower: BigRational,
    #[serde(with = "serde_num::rational")]
    pub upper: BigRational,
    pub horizon: u64,
    /// Count over `[1, n * floor(horizon / n)]` divided by its length.
    #[serde(with = "serde_num::rational")]
    pub natural: BigRational,
}

/// Window counts `#(A & [h+1, h+n]) / n` for `0 <= h <= horizon - n`.
pub fn uniform_density_by(member: impl Fn(u64) -> bool + Sync, horizon: u64, n: u64) -> Result<DensityEstimate> {
    if n == 0 || horizon < 10 * n {
        return Err(Error::WindowTooLarge { window: n, horizon });
    }
    let flags: Vec<bool> = (1..=horizon).into_par_iter().map(&member).collect();
    let mut prefix = Vec::with_capacity(horizon as usize + 1);
    prefix.push(0u64);
    for f in &flags {
        prefix.push(prefix.last().unwrap() + *f as u64);
    }
    let n_us = n as usize;
    let (lo, hi) = (0..=horizon as usize - n_us)
        .map(|h| prefix[h + n_us] - prefix[h])
        .fold((u64::MAX, 0), |(lo, hi), c| (lo.min(c), hi.max(c)));
    let tiled = n * (horizon / n);
    let r = |a: u64, b: u64| BigRational::new(BigInt::from(a), BigInt::from(b));
    Ok(DensityEstimate { n, lower: r(lo, n), upper: r(hi, n), horizon, natural: r(prefix[tiled as usize], tiled) })
}

/// Same as [`uniform_density_by`] for a sorted list of positive integers.
pub fn uniform_density(a: &[u64], horizon: u64, n: u64) -> Result<DensityEstimate> {
    uniform_density_by(|k| a.binary_search(&k).is_ok(), horizon, n)
}

/// `A[m] = {k >= 1 : k + m in A}` for each shift, united, up to `horizon`.
pub fn translate_union(a: &[u64], shifts: &[i64], horizon: u64) -> Vec<u64> {
    (1..=horizon)
        .filter(|&k| {
            shifts.iter().any(|&m| {
                let t = k as i64 + m;
                t >= 1 && a.binary_search(&(t as u64)).is_ok()
            })
        })
        .collect()
}

/// Largest `|(1/n) #{k in (h, h+n] : point_k in [a, b)} - (b - a)|` over the
/// shifts `h` and the grid intervals with endpoints in `(1/grid) Z`.
/// `points[0]` is the point for `k = 1`.
pub fn windowed_discrepancy(points: &[f64], n: usize, shifts: &[usize], grid: usize) -> Result<f64> {
    let need = shifts.iter().max().copied().unwrap_or(0) + n;
    if n == 0 || grid == 0 || points.len() < need {
        return Err(Error::WindowTooLarge { window: n as u64, horizon: points.len() as u64 });
    }
    Ok(shifts
        .par_iter()
        .map(|&h| {
            let mut bins = vec![0usize; grid];
            for &p in &points[h..h + n] {
                let x = p.rem_euclid(1.0);
                bins[((x * grid as f64) as usize).min(grid - 1)] += 1;
            }
            let mut cum = vec![0usize; grid + 1];
            for i in 0..grid {
                cum[i + 1] = cum[i] + bins[i];
            }
            let mut worst = 0.0f64;
            for a in 0..grid {
                for b in a + 1..=grid {
                    let frac = (cum[b] - cum[a]) as f64 / n as f64;
                    worst = worst.max((frac - (b - a) as f64 / grid as f64).abs());
                }
            }
            worst
        })
        .reduce(|| 0.0, f64::max))
}

/// Deviation for one interval `[lo, hi)` and each shift.
pub fn interval_deviation(points: &[f64], n: usize, shifts: &[usize], lo: f64, hi: f64) -> Result<Vec<f64>> {
    let need = shifts.iter().max().copied().unwrap_or(0) + n;
    if n == 0 || points.len() < need {
        return Err(Error::WindowTooLarge { window: n as u64, horizon: points.len() as u64 });
    }
    Ok(shifts
        .iter()
        .map(|&h| {
            let hits = points[h..h + n].iter().filter(|p| (lo..hi).contains(&p.rem_euclid(1.0))).count();
            (hits as f64 / n as f64 - (hi - lo)).abs()
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CircleSet {
    /// Closed arc of the given length.
    Interval {
        #[serde(with = "serde_num::rational")]
        length: BigRational,
    },
    Points(#[serde(with = "serde_num::rational_vec")] Vec<BigRational>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Admissibility {
    pub admissible: bool,
    /// Length of `sum a_s I` before wrapping, for arcs.
    #[serde(with = "serde_num::rational_opt")]
    pub sum_length: Option<BigRational>,
}

pub fn admissibility_check(a: &[i64], set: &CircleSet) -> Result<Admissibility> {
    if a.iter().all(|&x| x == 0) {
        return Err(Error::AllZeroCoefficients);
    }
    Ok(match set {
        CircleSet::Points(_) => Admissibility { admissible: true, sum_length: None },
        CircleSet::Interval { length } => {
            if length.is_negative() {
                return Err(Error::InvalidInterval("negative arc length".into()));
            }
            let total: i64 = a.iter().map(|x| x.abs()).sum();
            let s = length * BigRational::from_integer(BigInt::from(total));
            let one = BigRational::from_integer(BigInt::from(1));
            Admissibility { admissible: s < one, sum_length: Some(s) }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rational_to_f64};
    use proptest::prelude::*;

    #[test]
    fn evens_and_squares() {
        let d = uniform_density_by(|k| k % 2 == 0, 20_000, 1000).unwrap();
        assert!((rational_to_f64(&d.lower) - 0.5).abs() <= 1e-3);
        assert!((rational_to_f64(&d.upper) - 0.5).abs() <= 1e-3);
        let squares: Vec<u64> = (1..=1000u64).map(|k| k * k).collect();
        let d = uniform_density(&squares, 1_000_000, 1000).unwrap();
        assert!(rational_to_f64(&d.upper) <= 0.04);
        assert!(matches!(uniform_density(&squares, 5000, 1000), Err(Error::WindowTooLarge { .. })));
    }

    #[test]
    fn beatty_set() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let a: Vec<u64> = (1..=70_000u64).map(|k| (k as f64 * phi).floor() as u64).collect();
        let d = uniform_density(&a, 100_000, 1000).unwrap();
        assert!((rational_to_f64(&d.lower) - 1.0 / phi).abs() < 0.01);
        assert!((rational_to_f64(&d.upper) - 1.0 / phi).abs() < 0.01);
    }

    #[test]
    fn discrepancy_examples() {
        let s2 = 2f64.sqrt();
        let pts: Vec<f64> = (1..=60_000u64).map(|k| (k as f64 * s2).fract()).collect();
        assert!(windowed_discrepancy(&pts, 10_000, &[0, 10_000, 50_000], 64).unwrap() <= 0.05);
        let zeros = vec![0.0; 2000];
        let d = windowed_discrepancy(&zeros, 1000, &[0, 500], 64).unwrap();
        assert!((d - 63.0 / 64.0).abs() < 1e-12);
        let halves: Vec<f64> = (1..=2000u64).map(|k| (k as f64 / 2.0).fract()).collect();
        let dev = interval_deviation(&halves, 100, &[0, 7, 500], 0.1, 0.4).unwrap();
        assert!(dev.iter().all(|x| (x - 0.3).abs() < 1e-12));
    }

    #[test]
    fn admissibility() {
        let a = [-3, 2];
        assert!(admissibility_check(&a, &CircleSet::Interval { length: rat(19, 100) }).unwrap().admissible);
        assert!(!admissibility_check(&a, &CircleSet::Interval { length: rat(21, 100) }).unwrap().admissible);
        assert!(admissibility_check(&[5, 7, 1], &CircleSet::Points(vec![rat(0, 1), rat(1, 3)])).unwrap().admissible);
        assert_eq!(admissibility_check(&[0, 0], &CircleSet::Points(vec![])), Err(Error::AllZeroCoefficients));
    }

    fn random_set() -> impl Strategy<Value = Vec<u64>> {
        (2u64..=9, any::<u64>()).prop_map(|(m, seed)| {
            // Residues mod m kept with a seed-dependent pattern plus sparse noise.
            (1..=20_000u64).filter(|k| (seed >> (k % m)) & 1 == 1 || (k.wrapping_mul(seed | 1) % 97 == 0)).collect()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]
        #[test]
        fn translate_union_bound(a in random_set(), shifts in prop::collection::btree_set(-5i64..=5, 1..=4)) {
            let shifts: Vec<i64> = shifts.into_iter().collect();
            let n = 1000;
            let da = uniform_density(&a, 20_000, n).unwrap();
            let u = translate_union(&a, &shifts, 20_000);
            let du = uniform_density(&u, 20_000, n).unwrap();
            let bound = rational_to_f64(&da.lower) * shifts.len() as f64 + 0.05;
            prop_assert!(rational_to_f64(&du.lower) <= bound);
            prop_assert!(da.lower <= da.natural && da.natural <= da.upper);
            prop_assert!(du.lower <= du.natural && du.natural <= du.upper);
        }
    }
}
