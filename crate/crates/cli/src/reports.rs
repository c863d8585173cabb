//! Report records emitted by the subcommands. Structured output is the JSON
//! form of these types, wrapped in an [`Envelope`].

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use modone::algebraic::{ModulusClass, PisotSalemClass};
use modone::criterion::{BoundReport, ConditionReport, FinitenessVerdict};
use modone::density::DensityEstimate;
use modone::engine::{FloorWord, LimitSetReport, SequenceSample, ZsetOutcome};
use modone::expoly::Expoly;
use modone::lengths::{C2Bounds, OverreducedLengthEstimate, ReducedLengthEstimate};
use modone::scalar::{serde_num, RationalInterval};
use modone::words::{MorseWitness, WordComplexityReport};
use modone::IntPoly;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub command: String,
    /// False when an error interrupted the job; `report` then holds the
    /// stages finished before it.
    pub complete: bool,
    pub error: Option<String>,
    pub report: T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LengthsReport {
    pub poly: IntPoly,
    #[serde(with = "serde_num::bigint")]
    pub length: BigInt,
    pub reduced: ReducedLengthEstimate,
    pub overreduced: OverreducedLengthEstimate,
    pub mahler: RationalInterval,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootReport {
    pub root_index: usize,
    pub re: f64,
    pub im: f64,
    pub modulus: ModulusClass,
    /// For real roots with `|alpha| > 1`: the class of `alpha` and of `|alpha|`.
    pub pisot_salem: Option<PisotSalemClass>,
    pub abs_pisot_salem: Option<PisotSalemClass>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub poly: IntPoly,
    pub degree: usize,
    pub algebraic_integer: bool,
    pub root_of_unity_order: Option<u64>,
    pub self_reciprocal: bool,
    pub lt1: usize,
    pub eq1: usize,
    pub gt1: usize,
    pub roots: Vec<RootReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulateReport {
    pub expoly: Expoly,
    pub sample: SequenceSample,
    pub limit_sets: Vec<LimitSetReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FinitenessReport {
    pub expoly: Expoly,
    pub conditions: ConditionReport,
    pub verdict: FinitenessVerdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub expoly: Expoly,
    pub bounds: BoundReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessOutcome {
    pub e: usize,
    pub modulus: usize,
    pub witness: Option<MorseWitness>,
    pub verified: bool,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WordsReport {
    pub source: String,
    pub horizon: usize,
    pub floor_word: Option<FloorWord>,
    pub complexity: WordComplexityReport,
    pub witnesses: Vec<WitnessOutcome>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub n: usize,
    pub shifts: Vec<usize>,
    pub grid: usize,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub set: Option<DensityEstimate>,
    pub translates: Vec<i64>,
    pub union: Option<DensityEstimate>,
    pub discrepancy: Option<DiscrepancyReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZsetEntry {
    pub j: u64,
    #[serde(with = "serde_num::rational")]
    pub start: BigRational,
    pub outcome: ZsetOutcome,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZsetReport {
    #[serde(with = "serde_num::rational")]
    pub xi: BigRational,
    #[serde(with = "serde_num::bigint")]
    pub p: BigInt,
    #[serde(with = "serde_num::bigint")]
    pub q: BigInt,
    #[serde(with = "serde_num::rational")]
    pub s: BigRational,
    #[serde(with = "serde_num::rational")]
    pub t: BigRational,
    pub k_max: u64,
    pub modulus: u64,
    /// Orbit of `xi (p/q)^j` under `(p/q)^M`, for each `j < M`.
    pub entries: Vec<ZsetEntry>,
    /// Some starting point leaves `[s, t)` within the prefix.
    pub some_failure: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct C2Report {
    pub poly: IntPoly,
    pub f: i64,
    pub g: i64,
    pub bounds: C2Bounds,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub cases: usize,
    pub checks: Vec<CheckResult>,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.failed == 0)
    }
}
