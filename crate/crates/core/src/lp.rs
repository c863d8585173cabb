//! Dense two-phase simplex with Bland's rule, generic over the scalar field.

use crate::scalar::OrderedField;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome<T> {
    Optimal { x: Vec<T>, value: T },
    Infeasible,
    Unbounded,
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    basis: Vec<usize>,
    cols: usize,
}

impl<T: OrderedField> Tableau<T> {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v = v.clone() / p.clone();
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c].clone();
            if f.is_zero() {
                continue;
            }
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = v.clone() - f.clone() * pv.clone();
                }
            }
        }
        self.basis[r] = c;
    }

    /// Reduced costs for objective `cost` over the first `active` columns.
    fn reduced_costs(&self, cost: &[T], active: usize) -> Vec<T> {
        let mut d: Vec<T> = cost[..active].to_vec();
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = cost[b].clone();
            if cb.is_zero() {
                continue;
            }
            for (j, dj) in d.iter_mut().enumerate() {
                *dj = dj.clone() - cb.clone() * row[j].clone();
            }
        }
        d
    }

    /// Runs simplex iterations; returns false if unbounded.
    fn optimize(&mut self, cost: &[T], active: usize) -> bool {
        let rhs = self.cols;
        loop {
            let d = self.reduced_costs(cost, active);
            let Some(enter) = (0..active).find(|&j| d[j] < T::zero() && !d[j].is_negligible()) else {
                return true;
            };
            let mut leave: Option<(usize, T)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let a = &row[enter];
                if *a > T::zero() && !a.is_negligible() {
                    let ratio = row[rhs].clone() / a.clone();
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => {
                            let diff = ratio.clone() - lr.clone();
                            if diff.is_negligible() {
                                self.basis[i] < self.basis[*li]
                            } else {
                                diff < T::zero()
                            }
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                None => return false,
                Some((r, _)) => self.pivot(r, enter),
            }
        }
    }
}

/// Minimizes `c.x` subject to `A x = b`, `x >= 0`.
pub fn simplex<T: OrderedField>(a: &[Vec<T>], b: &[T], c: &[T]) -> LpOutcome<T> {
    let m = a.len();
    let n = c.len();
    // Phase one: artificial variables n..n+m.
    let cols = n + m;
    let mut rows = Vec::with_capacity(m);
    for (i, (ai, bi)) in a.iter().zip(b).enumerate() {
        let flip = *bi < T::zero();
        let mut row: Vec<T> = ai.iter().map(|v| if flip { -v.clone() } else { v.clone() }).collect();
        row.resize(n, T::zero());
        for k in 0..m {
            row.push(if k == i { T::one() } else { T::zero() });
        }
        row.push(if flip { -bi.clone() } else { bi.clone() });
        rows.push(row);
    }
    let mut t = Tableau { rows, basis: (n..n + m).collect(), cols };
    let mut phase1 = vec![T::zero(); cols];
    for v in phase1.iter_mut().skip(n) {
        *v = T::one();
    }
    t.optimize(&phase1, cols);
    let infeas = t.rows.iter().zip(&t.basis).filter(|(_, &bv)| bv >= n).fold(T::zero(), |acc, (row, _)| acc + row[cols].clone());
    if infeas > T::zero() && !infeas.is_negligible() {
        return LpOutcome::Infeasible;
    }
    // Drive artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_negligible()) {
                Some(j) => t.pivot(i, j),
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    let mut cost = c.to_vec();
    cost.resize(cols, T::zero());
    if !t.optimize(&cost, n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![T::zero(); n];
    for (row, &bv) in t.rows.iter().zip(&t.basis) {
        if bv < n {
            x[bv] = row[cols].clone();
        }
    }
    let value = x.iter().zip(c).fold(T::zero(), |acc, (xi, ci)| acc + xi.clone() * ci.clone());
    LpOutcome::Optimal { x, value }
}

/// Phase two of [`simplex`] started from the columns in `basis`, one per row.
/// `None` if that basis is singular or not primal feasible.
pub fn simplex_from_basis<T: OrderedField>(a: &[Vec<T>], b: &[T], c: &[T], basis: &[usize]) -> Option<LpOutcome<T>> {
    let m = a.len();
    let n = c.len();
    if basis.len() != m {
        return None;
    }
    let rows = a.iter().zip(b).map(|(ai, bi)| ai.iter().cloned().chain([bi.clone()]).collect()).collect();
    let mut t = Tableau { rows, basis: vec![usize::MAX; m], cols: n };
    for &j in basis {
        let r = (0..m).find(|&r| t.basis[r] == usize::MAX && !t.rows[r][j].is_negligible())?;
        t.pivot(r, j);
    }
    if t.rows.iter().any(|row| row[n] < T::zero() && !row[n].is_negligible()) {
        return None;
    }
    if !t.optimize(c, n) {
        return Some(LpOutcome::Unbounded);
    }
    let mut x = vec![T::zero(); n];
    for (row, &bv) in t.rows.iter().zip(&t.basis) {
        x[bv] = row[n].clone();
    }
    let value = x.iter().zip(c).fold(T::zero(), |acc, (xi, ci)| acc + xi.clone() * ci.clone());
    Some(LpOutcome::Optimal { x, value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn r(v: i64) -> BigRational {
        rat(v, 1)
    }

    #[test]
    fn small_exact_lp() {
        // min -x - y  s.t. x + 2y + s1 = 4, 3x + y + s2 = 6.
        let a = vec![vec![r(1), r(2), r(1), r(0)], vec![r(3), r(1), r(0), r(1)]];
        let b = vec![r(4), r(6)];
        let c = vec![r(-1), r(-1), r(0), r(0)];
        match simplex(&a, &b, &c) {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, rat(-14, 5));
                assert_eq!(x[0], rat(8, 5));
                assert_eq!(x[1], rat(6, 5));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let a = vec![vec![r(1), r(1)]];
        assert_eq!(simplex(&a, &[r(-1)], &[r(1), r(1)]), LpOutcome::Infeasible);
        let a = vec![vec![r(1), r(-1)]];
        assert_eq!(simplex(&a, &[r(1)], &[r(0), r(-1)]), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_rows_are_dropped() {
        let a = vec![vec![r(1), r(1)], vec![r(2), r(2)]];
        match simplex(&a, &[r(1), r(2)], &[r(1), r(2)]) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, r(1)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degenerate_lp_terminates() {
        // Classic cycling example (Beale) solved with Bland's rule.
        let a = vec![
            vec![rat(1, 4), r(-8), r(-1), r(9), r(1), r(0), r(0)],
            vec![rat(1, 2), r(-12), rat(-1, 2), r(3), r(0), r(1), r(0)],
            vec![r(0), r(0), r(1), r(0), r(0), r(0), r(1)],
        ];
        let b = vec![r(0), r(0), r(1)];
        let c = vec![rat(-3, 4), r(20), rat(-1, 2), r(6), r(0), r(0), r(0)];
        match simplex(&a, &b, &c) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat(-5, 4)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn warm_start_reaches_optimum() {
        let a = vec![vec![r(1), r(2), r(1), r(0)], vec![r(3), r(1), r(0), r(1)]];
        let b = vec![r(4), r(6)];
        let c = vec![r(-1), r(-1), r(0), r(0)];
        let cold = simplex(&a, &b, &c);
        assert_eq!(simplex_from_basis(&a, &b, &c, &[2, 3]), Some(cold.clone()));
        assert_eq!(simplex_from_basis(&a, &b, &c, &[0, 1]), Some(cold));
        // y = 6 leaves the first slack at -8.
        assert_eq!(simplex_from_basis(&a, &b, &c, &[1, 2]), None);
        assert_eq!(simplex_from_basis(&a, &b, &c, &[2, 2]), None);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        /// Float and exact solvers agree on random bounded feasible problems.
        #[test]
        fn float_matches_exact(
            entries in prop::collection::vec(-5i64..6, 12),
            costs in prop::collection::vec(0i64..6, 6),
            rhs in prop::collection::vec(0i64..8, 2),
        ) {
            // Two equality rows over four structural columns plus two slacks.
            let ex: Vec<Vec<BigRational>> = (0..2)
                .map(|i| {
                    let mut row: Vec<BigRational> = entries[i * 4..i * 4 + 4].iter().map(|&v| r(v)).collect();
                    row.push(if i == 0 { r(1) } else { r(0) });
                    row.push(if i == 1 { r(1) } else { r(0) });
                    row
                })
                .collect();
            let fl: Vec<Vec<f64>> = ex.iter().map(|row| row.iter().map(crate::scalar::rational_to_f64).collect()).collect();
            let b: Vec<BigRational> = rhs.iter().map(|&v| r(v)).collect();
            let bf: Vec<f64> = rhs.iter().map(|&v| v as f64).collect();
            let c: Vec<BigRational> = costs.iter().map(|&v| r(v)).collect();
            let cf: Vec<f64> = costs.iter().map(|&v| v as f64).collect();
            match (simplex(&ex, &b, &c), simplex(&fl, &bf, &cf)) {
                (LpOutcome::Optimal { value: ve, .. }, LpOutcome::Optimal { value: vf, .. }) => {
                    prop_assert!((crate::scalar::rational_to_f64(&ve) - vf).abs() < 1e-9);
                }
                (e, f) => prop_assert!(false, "{e:?} vs {f:?}"),
            }
        }
    }
}
