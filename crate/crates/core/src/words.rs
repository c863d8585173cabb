//! Subword complexity, periodicity evidence and Morse-type witnesses on
//! finite prefixes of infinite words.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Letter = i64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    PeriodicEvidence { period: usize, offset: usize },
    AperiodicEvidence,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordComplexityReport {
    /// `p[n - 1]` distinct factors of length `n`, for `n = 1..=n_max`.
    pub p: Vec<usize>,
    pub horizon: usize,
    pub verdict: Verdict,
}

/// Smallest period `T` (with its offset) such that `w[i] = w[i + T]` for all
/// `i >= offset`, over periods up to `len / 4` and offsets up to `len / 2`.
pub fn eventual_period(w: &[Letter]) -> Option<(usize, usize)> {
    let n = w.len();
    (1..=n / 4).find_map(|t| {
        let offset = (0..n - t).rev().find(|&i| w[i] != w[i + t]).map_or(0, |i| i + 1);
        (offset <= n / 2).then_some((t, offset))
    })
}

/// Factor counts over windows starting before `len - n_max`, so every length
/// is counted on the same set of positions.
pub fn subword_complexity(prefix: &[Letter], n_max: usize) -> Result<WordComplexityReport> {
    if n_max == 0 || prefix.len() < 4 * n_max {
        return Err(Error::PrefixTooShort { len: prefix.len(), horizon: n_max });
    }
    let starts = prefix.len() - n_max;
    let p: Vec<usize> = (1..=n_max)
        .into_par_iter()
        .map(|n| (0..starts).map(|i| &prefix[i..i + n]).collect::<HashSet<_>>().len())
        .collect();
    let verdict = if p.iter().enumerate().all(|(i, &c)| c > i + 1) {
        Verdict::AperiodicEvidence
    } else {
        match eventual_period(prefix) {
            Some((period, offset)) => Verdict::PeriodicEvidence { period, offset },
            None => Verdict::Inconclusive,
        }
    };
    Ok(WordComplexityReport { p, horizon: prefix.len(), verdict })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorseWitness {
    pub e: usize,
    pub modulus: usize,
    pub u: Vec<Letter>,
    pub v: Vec<Letter>,
    pub s: Letter,
    pub s_prime: Letter,
    pub t: Letter,
    pub t_prime: Letter,
    /// Residue of the (1-based) positions of `sU` and `s'U`.
    pub m_residue: usize,
    /// Residue of the (1-based) positions of `Vt` and `Vt'`.
    pub n_residue: usize,
    pub positions_su: Vec<usize>,
    pub positions_s_prime_u: Vec<usize>,
    pub positions_vt: Vec<usize>,
    pub positions_vt_prime: Vec<usize>,
}

/// 1-based positions where `pattern` occurs in `w`.
pub fn occurrences(w: &[Letter], pattern: &[Letter]) -> Vec<usize> {
    if pattern.len() > w.len() {
        return Vec::new();
    }
    (0..=w.len() - pattern.len()).filter(|&i| &w[i..i + pattern.len()] == pattern).map(|i| i + 1).collect()
}

type Table = BTreeMap<(usize, Vec<Letter>), BTreeMap<Letter, Vec<usize>>>;

/// For each `(residue, U)`, the letters `s` with `sU` occurring (front) or the
/// letters `t` with `Ut` occurring (back), with positions.
fn extension_table(w: &[Letter], e: usize, m: usize, front: bool) -> Table {
    let mut table: Table = BTreeMap::new();
    for i in 0..w.len().saturating_sub(e) {
        let pos = i + 1;
        let (core, letter) = if front { (w[i + 1..i + 1 + e].to_vec(), w[i]) } else { (w[i..i + e].to_vec(), w[i + e]) };
        table.entry((pos % m, core)).or_default().entry(letter).or_default().push(pos);
    }
    table
}

fn pick(table: &Table, min_count: usize) -> Option<(usize, Vec<Letter>, Letter, Letter, Vec<usize>, Vec<usize>)> {
    for ((res, core), exts) in table {
        let good: Vec<(&Letter, &Vec<usize>)> = exts.iter().filter(|(_, ps)| ps.len() >= min_count).collect();
        if good.len() >= 2 {
            return Some((*res, core.clone(), *good[0].0, *good[1].0, good[0].1.clone(), good[1].1.clone()));
        }
    }
    None
}

/// Searches the prefix for words `U, V` of length `e` and letters
/// `s != s'`, `t != t'` such that `sU, s'U` occur at least `min_count` times
/// at positions in one residue class mod `M`, and likewise `Vt, Vt'`.
pub fn morse_witness(prefix: &[Letter], e: usize, modulus: usize, min_count: usize) -> Result<MorseWitness> {
    if modulus == 0 {
        return Err(Error::InvalidInterval("modulus must be positive".into()));
    }
    let n_max = (prefix.len() / 4).clamp(1, 64).max(e + 1);
    let report = subword_complexity(prefix, n_max)?;
    if let Verdict::PeriodicEvidence { period, .. } = report.verdict {
        return Err(Error::PeriodicInput(period));
    }
    let front = extension_table(prefix, e, modulus, true);
    let back = extension_table(prefix, e, modulus, false);
    let (m_residue, u, s, s_prime, positions_su, positions_s_prime_u) = pick(&front, min_count).ok_or(Error::NoWitnessInPrefix)?;
    let (n_residue, v, t, t_prime, positions_vt, positions_vt_prime) = pick(&back, min_count).ok_or(Error::NoWitnessInPrefix)?;
    Ok(MorseWitness {
        e,
        modulus,
        u,
        v,
        s,
        s_prime,
        t,
        t_prime,
        m_residue,
        n_residue,
        positions_su,
        positions_s_prime_u,
        positions_vt,
        positions_vt_prime,
    })
}

/// Independent rescan: every listed position holds the claimed pattern in the
/// claimed residue class, with at least `min_count` distinct positions each.
pub fn verify_witness(prefix: &[Letter], w: &MorseWitness, min_count: usize) -> bool {
    let cat = |a: &[Letter], b: &[Letter]| -> Vec<Letter> { a.iter().chain(b).copied().collect() };
    let check = |pattern: Vec<Letter>, positions: &[usize], residue: usize| -> bool {
        let found: BTreeSet<usize> = occurrences(prefix, &pattern).into_iter().collect();
        let distinct: BTreeSet<usize> = positions.iter().copied().collect();
        distinct.len() >= min_count && distinct.iter().all(|p| found.contains(p) && p % w.modulus == residue)
    };
    w.u.len() == w.e
        && w.v.len() == w.e
        && w.s != w.s_prime
        && w.t != w.t_prime
        && check(cat(&[w.s], &w.u), &w.positions_su, w.m_residue)
        && check(cat(&[w.s_prime], &w.u), &w.positions_s_prime_u, w.m_residue)
        && check(cat(&w.v, &[w.t]), &w.positions_vt, w.n_residue)
        && check(cat(&w.v, &[w.t_prime]), &w.positions_vt_prime, w.n_residue)
}

/// Prefix of the fixed point of `0 -> 01, 1 -> 0`.
pub fn fibonacci_word(len: usize) -> Vec<Letter> {
    let mut w: Vec<Letter> = vec![0];
    while w.len() < len {
        w = w.iter().flat_map(|&c| if c == 0 { vec![0, 1] } else { vec![0] }).collect();
    }
    w.truncate(len);
    w
}

/// Parses one CSV row of integers.
pub fn parse_word(s: &str) -> Result<Vec<Letter>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<Letter>().map_err(|e| Error::Parse(format!("{t}: {e}"))))
        .collect()
}

pub fn word_to_csv(w: &[Letter]) -> String {
    w.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}
