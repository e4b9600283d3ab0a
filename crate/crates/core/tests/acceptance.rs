//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Runs without the libtest harness so the lines always
//! reach the output.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use scl_core::certificates::{
    build_example1, check_certificate, default_options, CoverIndex, SurfaceData, Verdict,
};
use scl_core::experiments::{self, SampleStatus, ScanConfig};
use scl_core::lp::{self, verify_solution, LpStatus};
use scl_core::scl::{self, extract_surface, verification_counts, Mode, SclOptions};
use scl_core::word::{parse_chain, parse_word, Chain, CyclicWord, Letter, Word};
use scl_core::Rational;

const SEVEN_FIFTHS_V: &str = "bcABBcABCbbcACbcBcbb";

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// What a criterion found: pass or fail plus a one-line explanation.
struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn check(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

/// Values collected across criteria for the gap-theorem guards.
#[derive(Default)]
struct Ledger {
    single_words: Vec<(String, Rational)>,
    family: Vec<(String, Rational)>,
}

fn scl_value(chain: &Chain, mode: Mode) -> Result<Rational, String> {
    scl::scl(chain, mode)
        .map(|r| r.value)
        .map_err(|e| format!("{chain}: {e}"))
}

fn criterion_1(ledger: &mut Ledger) -> Outcome {
    let cases = [
        ("[a,b]", q(1, 2), Duration::from_secs(1)),
        ("[a,b][c,aa]", q(1, 1), Duration::from_secs(30)),
        (
            "[a,b][c,bcABBcABCbbcACbcBcbb]",
            q(7, 5),
            Duration::from_secs(15 * 60),
        ),
    ];
    let mut notes = Vec::new();
    let mut pass = true;
    for (text, expected, budget) in cases {
        let chain = parse_chain(text, 3).unwrap();
        let start = Instant::now();
        let got = scl_value(&chain, Mode::Fast);
        let took = start.elapsed();
        let ok = got.as_ref() == Ok(&expected) && took < budget;
        pass &= ok;
        match got {
            Ok(v) => {
                notes.push(format!("{text} = {v} in {:.2}s", took.as_secs_f64()));
                ledger.single_words.push((text.to_string(), v.clone()));
                if text != "[a,b]" {
                    ledger.family.push((text.to_string(), v));
                }
            }
            Err(e) => notes.push(e),
        }
    }
    Outcome::check(pass, notes.join("; "))
}

/// All cyclically reduced, homologically trivial cyclic words over `a, b`
/// of length at most `max_len`, one per conjugacy class.
fn exhaustive_rank_two(max_len: usize) -> Vec<CyclicWord> {
    fn extend(prefix: &mut Vec<Letter>, len: usize, out: &mut BTreeSet<CyclicWord>) {
        if prefix.len() == len {
            let balanced = (0..2).all(|g| {
                prefix
                    .iter()
                    .filter(|x| x.generator() == g)
                    .map(|x| x.sign())
                    .sum::<i64>()
                    == 0
            });
            if balanced {
                if let Ok(w) = CyclicWord::new(prefix.clone()) {
                    out.insert(w);
                }
            }
            return;
        }
        for code in 0..4 {
            let x = Letter::new(code / 2, code % 2 == 1);
            if prefix.last().is_some_and(|&p| p == x.inverse()) {
                continue;
            }
            prefix.push(x);
            extend(prefix, len, out);
            prefix.pop();
        }
    }
    let mut out = BTreeSet::new();
    for len in (2..=max_len).step_by(2) {
        extend(&mut Vec::new(), len, &mut out);
    }
    out.into_iter().collect()
}

/// A random homologically trivial cyclic word of length `2..=max_len` over
/// `rank` letters, by rejection.
fn random_trivial_word(rng: &mut ChaCha8Rng, rank: usize, max_len: usize) -> CyclicWord {
    loop {
        let len = 2 * rng.gen_range(1..=max_len / 2);
        let letters: Vec<Letter> = (0..len)
            .map(|_| Letter::new(rng.gen_range(0..rank), rng.gen_bool(0.5)))
            .collect();
        let w = Word::new(letters);
        if w.len() != len {
            continue;
        }
        let Ok(chain) = Chain::from_word(&w) else {
            continue;
        };
        if !scl_core::word::is_homologically_trivial(&chain) {
            continue;
        }
        if let Ok(cw) = CyclicWord::new(w.letters().to_vec()) {
            return cw;
        }
    }
}

/// Fast against oracle on the exhaustive and random samples, with the
/// surface check of criterion 6 run on every fast solve.
fn criterion_2_and_6(ledger: &mut Ledger) -> (Outcome, Outcome) {
    let start = Instant::now();
    let mut words = exhaustive_rank_two(10);
    let exhaustive = words.len();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..200 {
        let rank = rng.gen_range(2..=3);
        words.push(random_trivial_word(&mut rng, rank, 12));
    }

    let mut mismatches = Vec::new();
    let mut surface_failures = Vec::new();
    for w in &words {
        let chain = Chain::single(w.clone());
        let fast = match scl::compute(&chain, SclOptions::mode(Mode::Fast)) {
            Ok(c) => c,
            Err(e) => {
                mismatches.push(format!("{w}: fast failed: {e}"));
                continue;
            }
        };
        let value = fast.result.value.clone();
        match scl_value(&chain, Mode::Oracle) {
            Ok(oracle) if oracle == value => {}
            Ok(oracle) => mismatches.push(format!("{w}: fast {value} oracle {oracle}")),
            Err(e) => mismatches.push(e),
        }
        match extract_surface(&fast) {
            Ok(s)
                if s.euler_characteristic == s.euler_characteristic_traced
                    && s.scl_bound() == value => {}
            Ok(s) => surface_failures.push(format!(
                "{w}: chi {} traced {} bound {}",
                s.euler_characteristic,
                s.euler_characteristic_traced,
                s.scl_bound()
            )),
            Err(e) => surface_failures.push(format!("{w}: {e}")),
        }
        ledger.single_words.push((w.to_string(), value));
    }
    let took = start.elapsed();

    let c2 = Outcome::check(
        mismatches.is_empty() && took < Duration::from_secs(30 * 60),
        format!(
            "{exhaustive} exhaustive + 200 random words, {} mismatches, {:.1}s{}",
            mismatches.len(),
            took.as_secs_f64(),
            mismatches
                .first()
                .map(|m| format!(" (first: {m})"))
                .unwrap_or_default()
        ),
    );

    let commutator = parse_chain("[a,b]", 2).unwrap();
    let surface = scl::extremal_surface(&commutator, SclOptions::default());
    let commutator_ok = surface.as_ref().is_ok_and(|s| {
        s.euler_characteristic == -1
            && s.boundary_component_count() == 1
            && s.scl_bound() == q(1, 2)
    });
    let c6 = Outcome::check(
        commutator_ok && surface_failures.is_empty(),
        format!(
            "[a,b]: {}; chi agreement on {} chains, {} failures{}",
            match &surface {
                Ok(s) => format!(
                    "chi {}, {} boundary, -chi/2n = {}",
                    s.euler_characteristic,
                    s.boundary_component_count(),
                    s.scl_bound()
                ),
                Err(e) => e.to_string(),
            },
            words.len(),
            surface_failures.len(),
            surface_failures
                .first()
                .map(|m| format!(" (first: {m})"))
                .unwrap_or_default()
        ),
    );
    (c2, c6)
}

fn criterion_3(ledger: &mut Ledger) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut failures = Vec::new();
    for _ in 0..20 {
        let rank = rng.gen_range(2..=3);
        let w = random_trivial_word(&mut rng, rank, 8);
        let word = w.to_word();
        let value = match scl_value(&Chain::single(w.clone()), Mode::Fast) {
            Ok(v) => v,
            Err(e) => {
                failures.push(e);
                continue;
            }
        };
        ledger.single_words.push((w.to_string(), value.clone()));

        let mut perm: Vec<usize> = (0..3).collect();
        for i in (1..3).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let flips: Vec<bool> = (0..3).map(|_| rng.gen_bool(0.5)).collect();
        let relabeled = word.substitute(|x| {
            let g = perm[x.generator()];
            Word::letter(Letter::new(g, x.is_inverted() ^ flips[g]))
        });
        let rotation = rng.gen_range(0..word.len());
        let checks = [
            ("square", word.pow(2), Rational::from(2) * value.clone()),
            ("inverse", word.inverse(), value.clone()),
            ("relabel", relabeled, value.clone()),
            ("rotation", word.rotate(rotation), value.clone()),
        ];
        for (name, image, expected) in checks {
            match Chain::from_word(&image)
                .map_err(|e| e.to_string())
                .and_then(|c| scl_value(&c, Mode::Fast))
            {
                Ok(v) if v == expected => {}
                Ok(v) => failures.push(format!("{w} {name}: {v} != {expected}")),
                Err(e) => failures.push(format!("{w} {name}: {e}")),
            }
        }
    }
    Outcome::check(
        failures.is_empty(),
        format!(
            "20 words x 4 checks, {} failures{}",
            failures.len(),
            failures
                .first()
                .map(|m| format!(" (first: {m})"))
                .unwrap_or_default()
        ),
    )
}

fn criterion_4(ledger: &Ledger) -> Outcome {
    let half = q(1, 2);
    let three_halves = q(3, 2);
    let low: Vec<&(String, Rational)> = ledger
        .single_words
        .iter()
        .filter(|(_, v)| *v < half)
        .collect();
    let out: Vec<&(String, Rational)> = ledger
        .family
        .iter()
        .filter(|(_, v)| *v < half || *v > three_halves)
        .collect();
    Outcome::check(
        low.is_empty() && out.is_empty() && !ledger.family.is_empty(),
        format!(
            "{} single-word values >= 1/2 ({} below), {} [a,b][c,v] values in [1/2, 3/2] ({} outside)",
            ledger.single_words.len(),
            low.len(),
            ledger.family.len(),
            out.len()
        ),
    )
}

fn criterion_5(ledger: &mut Ledger) -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    let options = default_options();

    match build_example1(&parse_word("aa", 3).unwrap(), options) {
        Ok(c) => {
            let ok = c.verdict == Verdict::Incompressible
                && c.norm == q(3, 1)
                && -c.chi - 2 == 2
                && c.min_cover_index == CoverIndex::Finite(2);
            pass &= ok;
            notes.push(format!(
                "v=aa: {} norm {} vs {}, index {}",
                c.verdict,
                c.norm,
                -c.chi - 2,
                c.min_cover_index
            ));
        }
        Err(e) => {
            pass = false;
            notes.push(format!("v=aa: {e}"));
        }
    }
    match build_example1(&parse_word(SEVEN_FIFTHS_V, 3).unwrap(), options) {
        Ok(c) => {
            let ok = c.verdict == Verdict::Incompressible
                && c.norm == q(19, 5)
                && c.min_cover_index == CoverIndex::Finite(10);
            pass &= ok;
            ledger
                .family
                .push((format!("[a,b][c,{SEVEN_FIFTHS_V}]"), c.scl_left.clone()));
            notes.push(format!(
                "7/5 word: norm {}, index {}",
                c.norm, c.min_cover_index
            ));
        }
        Err(e) => {
            pass = false;
            notes.push(format!("7/5 word: {e}"));
        }
    }
    let genus3 = SurfaceData::connected(3).unwrap();
    let boundary = check_certificate(&q(2, 1), &genus3).map(|v| v.verdict);
    let top = check_certificate(&q(4, 1), &genus3).map(|v| v.verdict);
    pass &= boundary == Ok(Verdict::Inconclusive) && top == Ok(Verdict::NormMinimizingInjective);
    notes.push(format!("norm = -chi-2: {boundary:?}; norm = -chi: {top:?}"));
    Outcome::check(pass, notes.join("; "))
}

fn criterion_7(ledger: &mut Ledger) -> Outcome {
    let cfg = ScanConfig::default();
    let start = Instant::now();
    let records = match experiments::run_scan(&cfg) {
        Ok(r) => r,
        Err(e) => return Outcome::check(false, e.to_string()),
    };
    let took = start.elapsed();
    let report = experiments::report(&cfg, &records).unwrap();
    for s in &report.lengths {
        eprintln!(
            "  scan n={:<3} ok={}/{} timeouts={} errors={} mean={} (~{:.4})",
            s.n,
            s.ok,
            s.samples,
            s.timeouts,
            s.errors,
            s.mean.as_ref().map_or("-".into(), |m| m.to_string()),
            s.mean.as_ref().map_or(f64::NAN, |m| m.to_f64())
        );
    }
    for w in &report.trend_warnings {
        eprintln!("  scan trend (soft): {w}");
    }
    for r in &records {
        if let Some(v) = &r.scl {
            ledger.family.push((format!("[a,b][c,{}]", r.v), v.clone()));
        }
    }
    let violations = experiments::bound_violations(&records).len();
    let errors = records
        .iter()
        .filter(|r| r.status == SampleStatus::Error)
        .count();
    let timeouts = records
        .iter()
        .filter(|r| r.status == SampleStatus::Timeout)
        .count();
    let means: Vec<String> = report
        .lengths
        .iter()
        .map(|s| {
            format!(
                "{}:{:.3}",
                s.n,
                s.mean.as_ref().map_or(f64::NAN, |m| m.to_f64())
            )
        })
        .collect();
    Outcome::check(
        violations == 0 && errors == 0 && took < Duration::from_secs(2 * 3600),
        format!(
            "{} samples, {violations} outside [1/2, 3/2], {errors} errors, {timeouts} timeouts, means {}, trend warnings {}, {:.0}s",
            records.len(),
            means.join(" "),
            report.trend_warnings.len(),
            took.as_secs_f64()
        ),
    )
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut disagreements = 0;
    let mut unverified = 0;
    for _ in 0..50 {
        let (a, b, c) = common::random_bounded(&mut rng);
        let program = common::program(&a, &b, &c);
        let sol = lp::solve_max(&program);
        let best = common::best_vertex(&a, &b, &c);
        match (&best, sol.status) {
            (Some(v), LpStatus::Optimal) if sol.optimum.as_ref() == Some(v) => {
                if !verify_solution(&program, &sol) {
                    unverified += 1;
                }
            }
            (None, LpStatus::Infeasible) => {}
            _ => disagreements += 1,
        }
    }
    let (solves, verified) = verification_counts();
    Outcome::check(
        disagreements == 0 && unverified == 0 && solves > 0 && solves == verified,
        format!(
            "{verified}/{solves} scl solves verified; 50 random LPs: {disagreements} disagreements with vertex enumeration, {unverified} unverified"
        ),
    )
}

fn main() -> ExitCode {
    let mut ledger = Ledger::default();
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();

    let run = |n: u32,
               name: &'static str,
               f: &mut dyn FnMut(&mut Ledger) -> Outcome,
               ledger: &mut Ledger| {
        eprintln!("criterion {n}: {name} ...");
        let start = Instant::now();
        let outcome = f(ledger);
        eprintln!(
            "criterion {n}: done in {:.1}s",
            start.elapsed().as_secs_f64()
        );
        (n, name, outcome)
    };

    results.push(run(
        1,
        "exact reference values",
        &mut criterion_1,
        &mut ledger,
    ));
    let (c2, c6) = {
        eprintln!("criterion 2/6: oracle equivalence and surfaces ...");
        criterion_2_and_6(&mut ledger)
    };
    results.push((2, "fast and oracle agree", c2));
    results.push(run(
        3,
        "homogeneity and symmetry",
        &mut criterion_3,
        &mut ledger,
    ));
    results.push(run(
        5,
        "certificate endpoints",
        &mut criterion_5,
        &mut ledger,
    ));
    results.push((6, "extremal surface consistency", c6));
    results.push(run(7, "random-word scan", &mut criterion_7, &mut ledger));
    // the gap guards look at every value gathered above
    results.push((4, "gap theorem guards", criterion_4(&ledger)));
    results.push((8, "exact LP self-verification", criterion_8()));
    results.sort_by_key(|(n, _, _)| *n);

    println!();
    let mut all = true;
    for (n, name, outcome) in &results {
        all &= outcome.pass;
        println!(
            "acceptance {n} [{}] {name}: {}",
            if outcome.pass { "PASS" } else { "FAIL" },
            outcome.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
