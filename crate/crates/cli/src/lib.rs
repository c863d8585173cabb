//! Batch front end for the `modone` toolkit.

pub mod render;
pub mod reports;
mod selftest;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Pow;
use serde::Serialize;

use modone::algebraic::{classify_abs_pisot_salem, AlgebraicNumber, ModulusClass};
use modone::criterion::{check_conditions, finiteness_verdict, theorem_bounds, BoundConfig};
use modone::density::{translate_union, uniform_density, windowed_discrepancy};
use modone::engine::{
    default_burn_in, floor_word, limit_set_report, sample_expoly, zset_prefix_test, SampleConfig, ZsetOutcome, DEFAULT_CLUSTER_EPS,
    DEFAULT_EPS,
};
use modone::expoly::Expoly;
use modone::lengths::{corollary_c2_bounds, length, overreduced_length, reduced_length, LengthConfig};
use modone::poly::parse_int_poly;
use modone::scalar::parse_rational;
use modone::words::{fibonacci_word, morse_witness, parse_word, subword_complexity, verify_witness, Letter};
use modone::Error;

use render::Render;
use reports::*;

#[derive(Parser, Debug)]
#[command(name = "modone", version, about = "Fractional parts of linear recurrent sequences")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Length, reduced length, overreduced length and Mahler measure of a polynomial.
    Lengths(LengthsArgs),
    /// Conjugate moduli and Pisot/Salem class of the roots of an irreducible polynomial.
    Classify(PolyArgs),
    /// Fractional parts of an exponential polynomial and their limit sets.
    Simulate(SimulateArgs),
    /// Conditions forcing infinitely many limit points, and the finiteness verdict.
    Finiteness(ExpolyArgs),
    /// Limsup and interval bounds next to sampled limit sets.
    Bounds(SimulateArgs),
    /// Subword complexity, periodicity evidence and Morse witnesses.
    Words(WordsArgs),
    /// Uniform density of an integer set, or windowed discrepancy of a sequence.
    Density(DensityArgs),
    /// Membership of `{xi (p/q)^k}` in `[s, t)` along a prefix.
    Zset(ZsetArgs),
    /// Bounds for `F(k) alpha^k + G(k)` with `deg F = f`, `deg G = g`.
    C2bounds(C2Args),
    /// Randomized consistency checks of the core library.
    Selftest(SelftestArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Structured,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
    /// Directory for the report file and plot data.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PolyArgs {
    /// Ascending coefficient list, e.g. "[-3,2]" for 2x - 3.
    #[arg(long)]
    pub poly: String,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct LengthsArgs {
    #[arg(long)]
    pub poly: String,
    #[arg(long, default_value_t = 32)]
    pub emax: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ExpolyArgs {
    /// JSON list of terms.
    #[arg(long)]
    pub expoly: PathBuf,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long)]
    pub expoly: PathBuf,
    /// Moduli for the residue classes, comma separated.
    #[arg(long = "M", value_delimiter = ',', default_value = "1")]
    pub m: Vec<u64>,
    /// Horizon: sample `k = 1..=K`.
    #[arg(long = "K", default_value_t = 2000)]
    pub k: u64,
    #[arg(long, default_value_t = DEFAULT_EPS)]
    pub eps: f64,
    #[arg(long = "burn-in")]
    pub burn_in: Option<u64>,
    #[arg(long = "cluster-eps", default_value_t = DEFAULT_CLUSTER_EPS)]
    pub cluster_eps: f64,
    /// Degree bound for the length estimates used by `bounds`.
    #[arg(long, default_value_t = 32)]
    pub emax: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct WordsArgs {
    /// One CSV row of integer letters.
    #[arg(long, conflicts_with_all = ["fibonacci", "expoly"])]
    pub word: Option<PathBuf>,
    /// Prefix length of the Fibonacci word.
    #[arg(long, conflicts_with = "expoly")]
    pub fibonacci: Option<usize>,
    /// Floor word of this sequence for the recurrence `--poly`.
    #[arg(long, requires = "poly")]
    pub expoly: Option<PathBuf>,
    #[arg(long)]
    pub poly: Option<String>,
    #[arg(long = "K", default_value_t = 2000)]
    pub k: u64,
    #[arg(long, default_value_t = DEFAULT_EPS)]
    pub eps: f64,
    #[arg(long = "nmax", default_value_t = 12)]
    pub n_max: usize,
    /// Witness lengths `e`, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1,2")]
    pub e: Vec<usize>,
    #[arg(long = "M", value_delimiter = ',', default_value = "1,3")]
    pub m: Vec<usize>,
    #[arg(long = "min-count", default_value_t = 10)]
    pub min_count: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct DensityArgs {
    /// Positive integers, comma or whitespace separated.
    #[arg(long, conflicts_with = "expoly")]
    pub set: Option<PathBuf>,
    /// Shifts `m` for the union of the translates `A[m]`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub translate: Vec<i64>,
    /// Sequence whose fractional parts enter the discrepancy.
    #[arg(long)]
    pub expoly: Option<PathBuf>,
    #[arg(long = "K", default_value_t = 20000)]
    pub k: u64,
    #[arg(long, default_value_t = 1000)]
    pub n: u64,
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub shifts: Vec<usize>,
    #[arg(long, default_value_t = 64)]
    pub grid: usize,
    #[arg(long, default_value_t = DEFAULT_EPS)]
    pub eps: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ZsetArgs {
    #[arg(long, default_value = "1")]
    pub xi: String,
    #[arg(long)]
    pub p: i64,
    #[arg(long)]
    pub q: i64,
    #[arg(long, default_value = "0")]
    pub s: String,
    #[arg(long)]
    pub t: String,
    #[arg(long = "K", default_value_t = 200)]
    pub k: u64,
    #[arg(long = "M", default_value_t = 1)]
    pub m: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct C2Args {
    /// Minimal polynomial of alpha.
    #[arg(long)]
    pub poly: String,
    #[arg(long, default_value_t = 0)]
    pub f: i64,
    #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
    pub g: i64,
    #[arg(long, default_value_t = 32)]
    pub emax: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 20)]
    pub cases: usize,
    #[arg(long, default_value_t = 12)]
    pub emax: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::PrecisionCapExceeded(_) | Error::UndecidedFloor(_) => EXIT_PRECISION,
        Error::Invariant(_) => EXIT_INVARIANT,
        _ => EXIT_INPUT,
    }
}

/// What a job produced: text for stdout, files for `--out`, and the status.
pub struct Outcome {
    pub stdout: String,
    pub files: Vec<(String, String)>,
    pub code: i32,
    pub diagnostic: Option<String>,
}

fn emit<T: Serialize + Render>(command: &str, output: &OutputArgs, report: &T, error: Option<&Error>, code: i32) -> Outcome {
    let (body, ext) = match output.format {
        Format::Table => {
            let mut t = report.table();
            if let Some(e) = error {
                t.push_str(&format!("INCOMPLETE: {e}\n"));
            }
            (t, "txt")
        }
        Format::Csv => (report.csv(), "csv"),
        Format::Structured => {
            let env = Envelope { command: command.to_string(), complete: error.is_none(), error: error.map(|e| e.to_string()), report };
            (serde_json::to_string_pretty(&env).expect("reports serialize") + "\n", "json")
        }
    };
    let mut files = vec![(format!("{command}.{ext}"), body.clone())];
    files.extend(report.plots());
    Outcome { stdout: body, files, code, diagnostic: error.map(|e| e.to_string()) }
}

fn failed(e: Error) -> Outcome {
    Outcome { stdout: String::new(), files: Vec::new(), code: exit_code(&e), diagnostic: Some(e.to_string()) }
}

fn read_expoly(path: &Path) -> Result<Expoly, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn read_text(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn check_eps(eps: f64) -> Result<(), Error> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidInterval(format!("eps must lie in (0, 1), got {eps}")))
    }
}

fn check_moduli<T: PartialEq + Default + Copy>(m: &[T]) -> Result<(), Error> {
    if m.is_empty() || m.contains(&T::default()) {
        return Err(Error::InvalidInterval("moduli must be positive".into()));
    }
    Ok(())
}

/// Runs one job. Files are not written here; see [`write_files`].
pub fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Lengths(a) => lengths(&a).map_or_else(failed, |r| emit("lengths", &a.output, &r, None, EXIT_OK)),
        Command::Classify(a) => classify(&a).map_or_else(failed, |r| emit("classify", &a.output, &r, None, EXIT_OK)),
        Command::Simulate(a) => simulate(&a),
        Command::Finiteness(a) => finiteness(&a).map_or_else(failed, |r| emit("finiteness", &a.output, &r, None, EXIT_OK)),
        Command::Bounds(a) => bounds(&a).map_or_else(failed, |r| emit("bounds", &a.output, &r, None, EXIT_OK)),
        Command::Words(a) => words(&a).map_or_else(failed, |r| emit("words", &a.output, &r, None, EXIT_OK)),
        Command::Density(a) => density(&a).map_or_else(failed, |r| emit("density", &a.output, &r, None, EXIT_OK)),
        Command::Zset(a) => zset(&a).map_or_else(failed, |r| emit("zset", &a.output, &r, None, EXIT_OK)),
        Command::C2bounds(a) => c2bounds(&a).map_or_else(failed, |r| emit("c2bounds", &a.output, &r, None, EXIT_OK)),
        Command::Selftest(a) => {
            let r = selftest::run(a.seed, a.cases, a.emax);
            let code = if r.all_passed() { EXIT_OK } else { EXIT_INVARIANT };
            let err = (code != EXIT_OK).then(|| Error::Invariant("selftest check failed".into()));
            emit("selftest", &a.output, &r, err.as_ref(), code)
        }
    }
}

pub fn write_files(dir: &Path, files: &[(String, String)]) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    for (name, body) in files {
        fs::write(dir.join(name), body)?;
    }
    Ok(())
}

pub fn output_dir(cli: &Cli) -> Option<PathBuf> {
    let o = match &cli.command {
        Command::Lengths(a) => &a.output,
        Command::Classify(a) => &a.output,
        Command::Simulate(a) | Command::Bounds(a) => &a.output,
        Command::Finiteness(a) => &a.output,
        Command::Words(a) => &a.output,
        Command::Density(a) => &a.output,
        Command::Zset(a) => &a.output,
        Command::C2bounds(a) => &a.output,
        Command::Selftest(a) => &a.output,
    };
    o.out.clone()
}

fn lengths(a: &LengthsArgs) -> Result<LengthsReport, Error> {
    let p = parse_int_poly(&a.poly)?;
    let cfg = LengthConfig::with_e_max(a.emax);
    let reduced = reduced_length(&p, &cfg)?;
    let overreduced = overreduced_length(&p, &cfg)?;
    Ok(LengthsReport { length: length(&p), mahler: reduced.lower_bound.clone(), poly: p, reduced, overreduced })
}

fn classify(a: &PolyArgs) -> Result<ClassifyReport, Error> {
    let p = parse_int_poly(&a.poly)?;
    let roots = AlgebraicNumber::roots_of(&p)?;
    let first = roots.first().ok_or(Error::ZeroPolynomial)?;
    let mut out = Vec::with_capacity(roots.len());
    let (mut lt1, mut eq1, mut gt1) = (0, 0, 0);
    for r in &roots {
        let modulus = r.modulus_class()?;
        match modulus {
            ModulusClass::LT1 => lt1 += 1,
            ModulusClass::EQ1 => eq1 += 1,
            ModulusClass::GT1 => gt1 += 1,
        }
        let (ps, abs_ps) = if r.is_real() && modulus == ModulusClass::GT1 {
            (Some(r.classify_pisot_salem()?), Some(classify_abs_pisot_salem(r)?))
        } else {
            (None, None)
        };
        let z = r.to_complex();
        out.push(RootReport { root_index: r.root_index(), re: z.re, im: z.im, modulus, pisot_salem: ps, abs_pisot_salem: abs_ps });
    }
    Ok(ClassifyReport {
        degree: first.degree(),
        algebraic_integer: first.is_algebraic_integer(),
        root_of_unity_order: first.root_of_unity_order(),
        self_reciprocal: first.minpoly().is_self_reciprocal(),
        poly: first.minpoly().clone(),
        lt1,
        eq1,
        gt1,
        roots: out,
    })
}

fn simulate(a: &SimulateArgs) -> Outcome {
    let prepared = (|| {
        check_eps(a.eps)?;
        check_moduli(&a.m)?;
        let x = read_expoly(&a.expoly)?;
        let sample = sample_expoly(&x, 1, a.k, &SampleConfig { eps: a.eps, ..Default::default() })?;
        Ok((x, sample))
    })();
    let (expoly, sample) = match prepared {
        Ok(v) => v,
        Err(e) => return failed(e),
    };
    let burn_in = a.burn_in.unwrap_or_else(|| default_burn_in(1, a.k));
    let mut report = SimulateReport { expoly, sample, limit_sets: Vec::new() };
    for &m in &a.m {
        match limit_set_report(&report.sample, m, burn_in, a.cluster_eps) {
            Ok(ls) => report.limit_sets.push(ls),
            Err(e) => {
                let code = exit_code(&e);
                return emit("simulate", &a.output, &report, Some(&e), code);
            }
        }
    }
    emit("simulate", &a.output, &report, None, EXIT_OK)
}

fn finiteness(a: &ExpolyArgs) -> Result<FinitenessReport, Error> {
    let expoly = read_expoly(&a.expoly)?;
    let conditions = check_conditions(&expoly)?;
    let verdict = finiteness_verdict(&expoly)?;
    Ok(FinitenessReport { expoly, conditions, verdict })
}

fn bounds(a: &SimulateArgs) -> Result<BoundsReport, Error> {
    check_eps(a.eps)?;
    check_moduli(&a.m)?;
    let expoly = read_expoly(&a.expoly)?;
    let cfg = BoundConfig {
        horizon: a.k,
        burn_in: a.burn_in,
        eps: a.eps,
        cluster_eps: a.cluster_eps,
        lengths: LengthConfig::with_e_max(a.emax),
    };
    let bounds = theorem_bounds(&expoly, &a.m, &cfg)?;
    Ok(BoundsReport { expoly, bounds })
}

fn words(a: &WordsArgs) -> Result<WordsReport, Error> {
    check_moduli(&a.m)?;
    let (source, word, fw): (String, Vec<Letter>, _) = if let Some(path) = &a.word {
        (path.display().to_string(), parse_word(&read_text(path)?)?, None)
    } else if let Some(n) = a.fibonacci {
        (format!("fibonacci({n})"), fibonacci_word(n), None)
    } else if let (Some(path), Some(p)) = (&a.expoly, &a.poly) {
        check_eps(a.eps)?;
        let x = read_expoly(path)?;
        let p = parse_int_poly(p)?;
        let sample = sample_expoly(&x, 1, a.k, &SampleConfig { eps: a.eps, ..Default::default() })?;
        let fw = floor_word(&sample, &p)?;
        (format!("floor word of {} for {p}", path.display()), fw.letters.clone(), Some(fw))
    } else {
        return Err(Error::Parse("one of --word, --fibonacci or --expoly is required".into()));
    };
    let complexity = subword_complexity(&word, a.n_max)?;
    let mut witnesses = Vec::new();
    for &e in &a.e {
        for &m in &a.m {
            let (witness, error) = match morse_witness(&word, e, m, a.min_count) {
                Ok(w) => (Some(w), None),
                Err(err) => (None, Some(err.to_string())),
            };
            let verified = witness.as_ref().is_some_and(|w| verify_witness(&word, w, a.min_count));
            witnesses.push(WitnessOutcome { e, modulus: m, witness, verified, error });
        }
    }
    Ok(WordsReport { source, horizon: word.len(), floor_word: fw, complexity, witnesses })
}

fn density(a: &DensityArgs) -> Result<DensityReport, Error> {
    let mut report = DensityReport { set: None, translates: a.translate.clone(), union: None, discrepancy: None };
    if let Some(path) = &a.set {
        let mut set: Vec<u64> = parse_word(&read_text(path)?)?
            .into_iter()
            .map(|v| u64::try_from(v).ok().filter(|&v| v > 0).ok_or_else(|| Error::Parse(format!("{v} is not a positive integer"))))
            .collect::<Result<_, _>>()?;
        set.sort_unstable();
        set.dedup();
        report.set = Some(uniform_density(&set, a.k, a.n)?);
        if !a.translate.is_empty() {
            let u = translate_union(&set, &a.translate, a.k);
            report.union = Some(uniform_density(&u, a.k, a.n)?);
        }
    } else if let Some(path) = &a.expoly {
        check_eps(a.eps)?;
        let x = read_expoly(path)?;
        let sample = sample_expoly(&x, 1, a.k, &SampleConfig { eps: a.eps, ..Default::default() })?;
        let points: Vec<f64> =
            sample.values.iter().map(|v| v.point().ok_or(Error::UndecidedFloor(v.k))).collect::<Result<_, _>>()?;
        let value = windowed_discrepancy(&points, a.n as usize, &a.shifts, a.grid)?;
        report.discrepancy = Some(DiscrepancyReport { n: a.n as usize, shifts: a.shifts.clone(), grid: a.grid, value });
    } else {
        return Err(Error::Parse("one of --set or --expoly is required".into()));
    }
    Ok(report)
}

fn zset(a: &ZsetArgs) -> Result<ZsetReport, Error> {
    if a.m == 0 {
        return Err(Error::InvalidInterval("M must be positive".into()));
    }
    let xi = parse_rational(&a.xi)?;
    let (s, t) = (parse_rational(&a.s)?, parse_rational(&a.t)?);
    let (p, q) = (BigInt::from(a.p), BigInt::from(a.q));
    let ratio = BigRational::new(p.clone(), q.clone());
    let (pm, qm): (BigInt, BigInt) = (Pow::pow(&p, a.m as u32), Pow::pow(&q, a.m as u32));
    let mut start = xi.clone();
    let mut entries = Vec::new();
    for j in 0..a.m {
        let outcome = zset_prefix_test(&start, &pm, &qm, &s, &t, a.k)?;
        entries.push(ZsetEntry { j, start: start.clone(), outcome });
        start *= &ratio;
    }
    let some_failure = entries.iter().any(|e| matches!(e.outcome, ZsetOutcome::FirstFailure(_)));
    Ok(ZsetReport { xi, p, q, s, t, k_max: a.k, modulus: a.m, entries, some_failure })
}

fn c2bounds(a: &C2Args) -> Result<C2Report, Error> {
    let p = parse_int_poly(&a.poly)?;
    let bounds = corollary_c2_bounds(&p, a.f, a.g, None, &LengthConfig::with_e_max(a.emax))?;
    Ok(C2Report { poly: p, f: a.f, g: a.g, bounds })
}
