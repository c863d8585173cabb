//! Table and CSV renderings, and two-column plot data.

use std::fmt::Write;

use num_rational::BigRational;

use modone::criterion::FinitenessVerdict;
use modone::engine::ZsetOutcome;
use modone::scalar::{format_rational, rational_to_f64};
use modone::words::Verdict;

use crate::reports::*;

pub trait Render {
    fn table(&self) -> String;
    fn csv(&self) -> String;
    /// `(file name, contents)` pairs of whitespace-separated columns.
    fn plots(&self) -> Vec<(String, String)> {
        Vec::new()
    }
}

fn q(r: &BigRational) -> String {
    format!("{} (~{:.12})", format_rational(r), rational_to_f64(r))
}

fn row(out: &mut String, key: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "{key:<28} {value}");
}

impl Render for LengthsReport {
    fn table(&self) -> String {
        let mut s = String::new();
        row(&mut s, "polynomial", &self.poly);
        row(&mut s, "L", &self.length);
        row(&mut s, "ell (upper estimate)", q(&self.reduced.value));
        row(&mut s, "ell witness Q", &self.reduced.witness_q);
        row(&mut s, "ell degree used", self.reduced.degree_used);
        row(&mut s, "ell converged", self.reduced.converged);
        row(&mut s, "ell certified", self.reduced.certified);
        row(&mut s, "lambda (upper estimate)", q(&self.overreduced.value));
        row(&mut s, "lambda admissible factor", &self.overreduced.admissible_factor);
        row(&mut s, "Mahler measure", format!("[{:.12}, {:.12}]", rational_to_f64(&self.mahler.lo), rational_to_f64(&self.mahler.hi)));
        s
    }

    fn csv(&self) -> String {
        format!(
            "L,ell,lambda,mahler_lo,mahler_hi\n{},{},{},{},{}\n",
            self.length,
            format_rational(&self.reduced.value),
            format_rational(&self.overreduced.value),
            format_rational(&self.mahler.lo),
            format_rational(&self.mahler.hi)
        )
    }

    fn plots(&self) -> Vec<(String, String)> {
        let sweep = self.reduced.sweep.iter().enumerate().map(|(e, v)| format!("{e} {}\n", rational_to_f64(v))).collect();
        vec![("ell_sweep.dat".into(), sweep)]
    }
}

impl Render for ClassifyReport {
    fn table(&self) -> String {
        let mut s = String::new();
        row(&mut s, "polynomial", &self.poly);
        row(&mut s, "degree", self.degree);
        row(&mut s, "algebraic integer", self.algebraic_integer);
        row(&mut s, "root of unity order", self.root_of_unity_order.map_or("none".into(), |o| o.to_string()));
        row(&mut s, "self-reciprocal", self.self_reciprocal);
        row(&mut s, "moduli <1 / =1 / >1", format!("{} / {} / {}", self.lt1, self.eq1, self.gt1));
        for r in &self.roots {
            let mut line = format!("{:+.12} {:+.12}i  {:?}", r.re, r.im, r.modulus);
            if let (Some(a), Some(b)) = (r.pisot_salem, r.abs_pisot_salem) {
                let _ = write!(line, "  {a:?} (|alpha|: {b:?})");
            }
            row(&mut s, &format!("root #{}", r.root_index), line);
        }
        s
    }

    fn csv(&self) -> String {
        let mut s = String::from("root_index,re,im,modulus,pisot_salem,abs_pisot_salem\n");
        for r in &self.roots {
            let c = |x: Option<modone::algebraic::PisotSalemClass>| x.map_or(String::new(), |x| format!("{x:?}"));
            let _ = writeln!(s, "{},{},{},{:?},{},{}", r.root_index, r.re, r.im, r.modulus, c(r.pisot_salem), c(r.abs_pisot_salem));
        }
        s
    }
}

fn limit_set_rows(out: &mut String, sets: &[modone::engine::LimitSetReport]) {
    for ls in sets {
        for r in &ls.residues {
            let _ = writeln!(out, "{},{},{},{},{},{}", ls.modulus, r.residue, r.samples, r.undecided, r.centers.len(), r.diameter);
        }
    }
}

impl Render for SimulateReport {
    fn table(&self) -> String {
        let mut s = String::new();
        row(&mut s, "expoly", &self.expoly);
        row(&mut s, "range", format!("{}..={}", self.sample.k_min, self.sample.k_max));
        row(&mut s, "mode", format!("{:?}", self.sample.mode));
        row(&mut s, "undecided", self.sample.undecided_count());
        for ls in &self.limit_sets {
            row(&mut s, &format!("M = {} (burn-in {})", ls.modulus, ls.burn_in), format!("{} clusters, max diameter {:.9}", ls.cluster_count(), ls.max_diameter()));
            for r in &ls.residues {
                row(&mut s, &format!("  residue {}", r.residue), format!("{} clusters, diameter {:.9}", r.centers.len(), r.diameter));
            }
        }
        s
    }

    fn csv(&self) -> String {
        let mut s = String::from("modulus,residue,samples,undecided,clusters,diameter\n");
        limit_set_rows(&mut s, &self.limit_sets);
        s
    }

    fn plots(&self) -> Vec<(String, String)> {
        let frac: String = self.sample.values.iter().filter_map(|v| v.point().map(|p| format!("{} {p}\n", v.k))).collect();
        let mut out = vec![("fractional_parts.dat".into(), frac), ("sample.csv".into(), self.sample.to_csv())];
        for ls in &self.limit_sets {
            let d = ls.residues.iter().map(|r| format!("{} {}\n", r.residue, r.diameter)).collect();
            out.push((format!("diameter_M{}.dat", ls.modulus), d));
        }
        out
    }
}

impl Render for FinitenessReport {
    fn table(&self) -> String {
        let mut s = String::new();
        row(&mut s, "expoly", &self.expoly);
        let c = &self.conditions;
        for (name, f) in [("(a)", &c.a), ("(b)", &c.b), ("(c)", &c.c), ("(c')", &c.c_prime), ("(d)", &c.d), ("(d')", &c.d_prime), ("(e)", &c.e)] {
            let w = f.witness.as_ref().map_or(String::new(), |w| {
                let target = w.target_term.map_or("absent conjugate".into(), |j| format!("term {j}"));
                format!("  term {} -> {target}, degree {}", w.term, w.degree.map_or("-".into(), |d| d.to_string()))
            });
            row(&mut s, &format!("condition {name}"), format!("{}{w}", f.holds));
        }
        row(&mut s, "hypothesis for finiteness", c.hypothesis_ok_for_ciff);
        row(&mut s, "verdict", verdict_text(&self.verdict));
        s
    }

    fn csv(&self) -> String {
        let c = &self.conditions;
        format!(
            "a,b,c,c_prime,d,d_prime,e,verdict\n{},{},{},{},{},{},{},{}\n",
            c.a.holds,
            c.b.holds,
            c.c.holds,
            c.c_prime.holds,
            c.d.holds,
            c.d_prime.holds,
            c.e.holds,
            verdict_text(&self.verdict)
        )
    }
}

fn verdict_text(v: &FinitenessVerdict) -> String {
    match v {
        FinitenessVerdict::Finite => "Finite".into(),
        FinitenessVerdict::Infinite { failed, .. } => format!("Infinite ({failed:?})"),
        FinitenessVerdict::OutOfScope { reason } => format!("OutOfScope ({reason})"),
    }
}

impl Render for BoundsReport {
    fn table(&self) -> String {
        let b = &self.bounds;
        let mut s = String::new();
        row(&mut s, "expoly", &self.expoly);
        row(&mut s, "vacuous", b.vacuous);
        row(&mut s, "annihilator R", &b.annihilator);
        row(&mut s, "L(R)", &b.length);
        row(&mut s, "lambda(R) (upper estimate)", q(&b.lambda));
        row(&mut s, "1/L(R)", q(&b.inv_length));
        row(&mut s, "1/lambda(R)", q(&b.inv_lambda));
        row(&mut s, "horizon / burn-in", format!("{} / {}", b.horizon, b.burn_in));
        row(&mut s, "tail max ||x_k||", format!("{:.9} (1/L met: {})", b.tail_max_distance, b.limsup_bound_met_at_horizon));
        for m in &b.moduli {
            row(&mut s, &format!("M = {}", m.modulus), format!("1/lambda met at horizon: {}", m.bound_met_at_horizon));
            for r in &m.residues {
                row(&mut s, &format!("  residue {}", r.residue), format!("diameter {:.9}, {} clusters", r.diameter, r.clusters));
            }
        }
        s
    }

    fn csv(&self) -> String {
        let mut s = String::from("modulus,residue,diameter,clusters,exceeds_inv_lambda\n");
        for m in &self.bounds.moduli {
            for r in &m.residues {
                let _ = writeln!(s, "{},{},{},{},{}", m.modulus, r.residue, r.diameter, r.clusters, r.exceeds_bound);
            }
        }
        s
    }

    fn plots(&self) -> Vec<(String, String)> {
        self.bounds
            .moduli
            .iter()
            .map(|m| (format!("diameter_M{}.dat", m.modulus), m.residues.iter().map(|r| format!("{} {}\n", r.residue, r.diameter)).collect()))
            .collect()
    }
}

impl Render for WordsReport {
    fn table(&self) -> String {
        let mut s = String::new();
        row(&mut s, "source", &self.source);
        row(&mut s, "horizon", self.horizon);
        if let Some(fw) = &self.floor_word {
            row(&mut s, "alphabet", format!("{:?}", fw.alphabet));
            row(&mut s, "envelope", format!("{} (bounded: {})", q(&fw.envelope), fw.bounded));
        }
        row(&mut s, "complexity p(n)", format!("{:?}", self.complexity.p));
        let v = match &self.complexity.verdict {
            Verdict::PeriodicEvidence { period, offset } => format!("periodic evidence (period {period}, offset {offset})"),
            Verdict::AperiodicEvidence => "aperiodic evidence".into(),
            Verdict::Inconclusive => "inconclusive".into(),
        };
        row(&mut s, "verdict", v);
        for w in &self.witnesses {
            let text = match (&w.witness, &w.error) {
                (Some(m), _) => format!(
                    "U={:?} s={} s'={} V={:?} t={} t'={} residues {}/{} verified {}",
                    m.u, m.s, m.s_prime, m.v, m.t, m.t_prime, m.m_residue, m.n_residue, w.verified
                ),
                (None, Some(e)) => format!("none: {e}"),
                (None, None) => "none".into(),
            };
            row(&mut s, &format!("witness e={} M={}", w.e, w.modulus), text);
        }
        s
    }

    fn csv(&self) -> String {
        let mut s = String::from("n,p\n");
        for (i, p) in self.complexity.p.iter().enumerate() {
            let _ = writeln!(s, "{},{p}", i + 1);
        }
        s
    }

    fn plots(&self) -> Vec<(String, String)> {
        let c = self.complexity.p.iter().enumerate().map(|(i, p)| format!("{} {p}\n", i + 1)).collect();
        vec![("complexity.dat".into(), c)]
    }
}

impl Render for DensityReport {
    fn table(&self) -> String {
        let mut s = String::new();
        let est = |s: &mut String, name: &str, d: &modone::density::DensityEstimate| {
            row(s, &format!("{name} window n"), d.n);
            row(s, &format!("{name} lower"), q(&d.lower));
            row(s, &format!("{name} upper"), q(&d.upper));
            row(s, &format!("{name} natural"), q(&d.natural));
        };
        if let Some(d) = &self.set {
            est(&mut s, "set", d);
        }
        if let Some(d) = &self.union {
            row(&mut s, "translates", format!("{:?}", self.translates));
            est(&mut s, "union", d);
        }
        if let Some(d) = &self.discrepancy {
            row(&mut s, "discrepancy", format!("{:.9} (n {}, shifts {:?}, grid {})", d.value, d.n, d.shifts, d.grid));
        }
        s
    }

    fn csv(&self) -> String {
        let mut s = String::from("quantity,n,lower,upper,natural\n");
        for (name, d) in [("set", &self.set), ("union", &self.union)] {
            if let Some(d) = d {
                let _ = writeln!(s, "{name},{},{},{},{}", d.n, format_rational(&d.lower), format_rational(&d.upper), format_rational(&d.natural));
            }
        }
        if let Some(d) = &self.discrepancy {
            let _ = writeln!(s, "discrepancy,{},{},{},", d.n, d.value, d.value);
        }
        s
    }
}

fn outcome_text(o: &ZsetOutcome) -> String {
    match o {
        ZsetOutcome::PrefixOk => "prefix ok".into(),
        ZsetOutcome::FirstFailure(k) => format!("first failure at k = {k}"),
    }
}

impl Render for ZsetReport {
    fn table(&self) -> String {
        let mut s = String::new();
        row(&mut s, "xi", format_rational(&self.xi));
        row(&mut s, "ratio", format!("{}/{}", self.p, self.q));
        row(&mut s, "interval", format!("[{}, {})", format_rational(&self.s), format_rational(&self.t)));
        row(&mut s, "k_max / M", format!("{} / {}", self.k_max, self.modulus));
        for e in &self.entries {
            row(&mut s, &format!("j = {} (start {})", e.j, format_rational(&e.start)), outcome_text(&e.outcome));
        }
        row(&mut s, "some start fails", self.some_failure);
        s
    }

    fn csv(&self) -> String {
        let mut s = String::from("j,start,first_failure\n");
        for e in &self.entries {
            let f = match e.outcome {
                ZsetOutcome::PrefixOk => String::new(),
                ZsetOutcome::FirstFailure(k) => k.to_string(),
            };
            let _ = writeln!(s, "{},{},{f}", e.j, format_rational(&e.start));
        }
        s
    }
}

impl Render for C2Report {
    fn table(&self) -> String {
        let mut s = String::new();
        row(&mut s, "P", &self.poly);
        row(&mut s, "f / g", format!("{} / {}", self.f, self.g));
        row(&mut s, "limsup bound 1/L(R Q)", q(&self.bounds.l_bound));
        row(&mut s, "best Q", &self.bounds.best_q);
        row(&mut s, "interval bound 1/ell", q(&self.bounds.ell_bound));
        row(&mut s, "ell (upper estimate)", q(&self.bounds.ell.value));
        s
    }

    fn csv(&self) -> String {
        format!("f,g,l_bound,ell_bound\n{},{},{},{}\n", self.f, self.g, format_rational(&self.bounds.l_bound), format_rational(&self.bounds.ell_bound))
    }
}

impl Render for SelftestReport {
    fn table(&self) -> String {
        let mut s = String::new();
        row(&mut s, "seed / cases", format!("{} / {}", self.seed, self.cases));
        for c in &self.checks {
            let status = if c.failed == 0 { "PASS" } else { "FAIL" };
            let extra = c.first_failure.as_ref().map_or(String::new(), |f| format!("  first failure: {f}"));
            row(&mut s, &c.name, format!("{status} {}/{}{extra}", c.passed, c.passed + c.failed));
        }
        s
    }

    fn csv(&self) -> String {
        let mut s = String::from("check,passed,failed\n");
        for c in &self.checks {
            let _ = writeln!(s, "{},{},{}", c.name, c.passed, c.failed);
        }
        s
    }
}
