//! Acceptance criteria 1–11, one PASS/FAIL line each.
//!
//! Criteria whose published values do not reproduce are listed in
//! `KNOWN_DEVIATIONS`; they are still computed and reported as FAIL. The
//! run fails if the set of failing criteria differs from that list in
//! either direction.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use stabmod_core::catalog::{build_e, build_k, strategy_parameters, RavenelScheme};
use stabmod_core::cobar::{verify_named_cocycles, Outcome};
use stabmod_core::cohomology::{cohomology_with, CohomologyOptions, CohomologyResult};
use stabmod_core::conjecture::{conjectured_rank, solve_functional_equation};
use stabmod_core::golden::{self, Series};
use stabmod_core::pipeline::{run_pipeline, PipelineReport};

/// Criteria expected to fail; see the project notes for the analysis.
const KNOWN_DEVIATIONS: &[u32] = &[6, 7, 9];

struct Verdict {
    id: u32,
    title: &'static str,
    passed: bool,
    details: Vec<String>,
    elapsed: Duration,
}

struct Ctx {
    opts: CohomologyOptions,
    pipeline: PipelineReport,
    pipeline_time: Duration,
}

/// Collects named sub-checks of one criterion.
#[derive(Default)]
struct Findings {
    lines: Vec<String>,
    ok: bool,
}

impl Findings {
    fn new() -> Self {
        Self { lines: Vec::new(), ok: true }
    }

    fn expect(&mut self, what: impl Into<String>, ok: bool, detail: impl FnOnce() -> String) {
        let what = what.into();
        if ok {
            self.lines.push(format!("ok    {what}"));
        } else {
            self.ok = false;
            self.lines.push(format!("FAIL  {what}: {}", detail()));
        }
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, what: impl Into<String>, expected: T, got: T) {
        let ok = expected == got;
        self.expect(what, ok, || format!("expected {expected:?}, got {got:?}"));
    }

    fn within(&mut self, what: &str, elapsed: Duration, limit: Duration) {
        self.expect(format!("{what} in {:.2?} (limit {limit:?})", elapsed), elapsed < limit, || "too slow".into());
    }

    /// Pipeline stage checks whose names satisfy `keep`.
    fn stage_checks(&mut self, ctx: &Ctx, stage: &str, keep: impl Fn(&str) -> bool) {
        let Some(st) = ctx.pipeline.stage(stage) else {
            self.expect(format!("stage {stage} present"), false, || "missing".into());
            return;
        };
        for c in st.checks.iter().filter(|c| keep(&c.name)) {
            self.expect(format!("{stage}: {}", c.name), c.passed, || {
                let shown: Vec<String> = c
                    .diffs
                    .iter()
                    .take(10)
                    .map(|d| format!("{} expected {} got {}", d.degree, d.expected, d.got))
                    .collect();
                format!("{} diff(s): {}", c.diffs.len(), shown.join("; "))
            });
        }
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn one_var(r: &CohomologyResult) -> Vec<i64> {
    r.one_var().iter().map(|&x| x as i64).collect()
}

fn two_var(r: &CohomologyResult, modulus: u64) -> BTreeMap<(u32, u64), i64> {
    let ps = r.poincare().unwrap();
    Series::from_counts(modulus, &ps.two_var).terms
}

fn k(n: u32, m: u32, p: u64, ctx: &Ctx) -> (CohomologyResult, Duration) {
    timed(|| cohomology_with(&build_k(n, m, p).unwrap(), &ctx.opts).unwrap())
}

fn e(m: u32, level: u32, ctx: &Ctx) -> (CohomologyResult, Duration) {
    timed(|| cohomology_with(&build_e(4, m, level, 7, RavenelScheme::D2n).unwrap(), &ctx.opts).unwrap())
}

fn criterion_1(ctx: &Ctx) -> Findings {
    let mut f = Findings::new();
    let (k11, t1) = k(1, 1, 7, ctx);
    let (k21, t2) = k(2, 1, 7, ctx);
    f.eq("H(K(1,1)) total rank", 2, k11.total_rank());
    f.eq("H(K(2,1)) dims by degree", vec![1, 2, 1], one_var(&k21));
    f.within("both", t1 + t2, Duration::from_secs(1));
    f
}

fn criterion_2(ctx: &Ctx) -> Findings {
    let mut f = Findings::new();
    let mut total = Duration::ZERO;
    for p in [7, 11] {
        let (r, t) = k(2, 2, p, ctx);
        total += t;
        f.eq(format!("p={p}: total rank"), 12, r.total_rank());
        f.eq(format!("p={p}: one-variable series"), vec![1, 3, 4, 3, 1], one_var(&r));
        // (1+s)(1 + st + st^p + s^2t + s^2t^p + s^3), t mod p+1.
        let expected = common::expand_product(
            &[vec![(0, 0), (1, 0)], vec![(0, 0), (1, 1), (1, p), (2, 1), (2, p), (3, 0)]],
            p + 1,
        );
        f.eq(format!("p={p}: two-variable multiset"), expected, two_var(&r, p + 1));
    }
    f.within("both primes", total, Duration::from_secs(1));
    f
}

fn criterion_3(ctx: &Ctx) -> Findings {
    let mut f = Findings::new();
    let (r, t) = k(3, 3, 7, ctx);
    f.eq("H(K(3,3)) total rank at p=7", 152, r.total_rank());
    f.within("H(K(3,3))", t, Duration::from_secs(5));
    f
}

fn criterion_4(ctx: &Ctx) -> Findings {
    let mut f = Findings::new();
    let (r, t) = e(3, 0, ctx);
    f.eq("total rank", 24, r.total_rank());
    f.eq("one-variable series", poly_mul(&[1, 1], &[1, 2, 3, 3, 2, 1]), one_var(&r));
    f.stage_checks(ctx, "E(4,3,0)", |n| n.starts_with("chart"));
    f.within("H(E(4,3,0))", t, Duration::from_secs(1));
    f
}

fn criterion_5(ctx: &Ctx) -> Findings {
    let mut f = Findings::new();
    let (r, t) = e(4, 0, ctx);
    f.eq("total rank", 80, r.total_rank());
    let mut expected = vec![1];
    for _ in 0..4 {
        expected = poly_mul(&expected, &[1, 1]);
    }
    expected = poly_mul(&expected, &[1, 0, 3, 0, 1]);
    f.eq("one-variable series", expected.clone(), one_var(&r));
    f.eq("one-variable series (listed)", vec![1, 4, 9, 16, 20, 16, 9, 4, 1], expected);
    f.stage_checks(ctx, "E(4,4,0)", |n| n.starts_with("two-variable") || n.starts_with("chart"));
    f.within("H(E(4,4,0))", t, Duration::from_secs(2));
    f
}

fn criterion_6(ctx: &Ctx) -> Findings {
    let mut f = Findings::new();
    let (r1, t1) = e(4, 1, ctx);
    let (r2, t2) = e(4, 2, ctx);
    f.eq("H(E(4,4,1)) total rank", 320, r1.total_rank());
    f.stage_checks(ctx, "E(4,4,1)", |n| n.contains('⊗'));
    // Recount of the published module display: 4·P + 2·(M0 + M1) + T.
    let (lines, counts) = golden::parse_module_table(golden::E442_MODULES).unwrap();
    f.eq("published module display: lines, rank", (20, 232), (lines, counts.dimension()));
    f.eq("H(E(4,4,2)) total rank", 232, r2.total_rank());
    f.stage_checks(ctx, "E(4,4,2)", |n| n.starts_with("module types"));
    f.within("H(E(4,4,1)) and H(E(4,4,2))", t1 + t2, Duration::from_secs(10));
    f
}

fn criterion_7(ctx: &Ctx) -> Findings {
    let mut f = Findings::new();
    let Some(st) = ctx.pipeline.stage("K(4,4)") else {
        f.expect("stage K(4,4) present", false, || "missing".into());
        return f;
    };
    f.eq("H(K(4,4)) total rank", 3440, st.total_rank);
    f.eq(
        "one-variable series",
        vec![1, 5, 18, 55, 129, 249, 409, 551, 606, 551, 409, 249, 129, 55, 18, 5, 1],
        st.one_var.clone(),
    );
    f.stage_checks(ctx, "K(4,4)", |n| n.starts_with("two-variable"));
    match &ctx.pipeline.factored_form {
        Some(ff) => {
            f.lines.push(format!(
                "note  factored form: parses literally = {}, expands to the listed series reading x as s = {}",
                ff.literal_parses, ff.matches_with_x_as_s
            ));
            f.expect("factored form reported", true, String::new);
        }
        None => f.expect("factored form reported", false, || "missing".into()),
    }
    f.within("full pipeline", ctx.pipeline_time, Duration::from_secs(300));
    f
}

fn criterion_8(ctx: &Ctx) -> Findings {
    let mut f = Findings::new();
    for st in &ctx.pipeline.stages {
        f.stage_checks(ctx, &st.name, |n| n.contains("sequence:"));
    }
    f
}

fn criterion_9(_: &Ctx) -> Findings {
    let mut f = Findings::new();
    let (report, t) = timed(|| verify_named_cocycles(7, false).unwrap());
    for name in [
        "t1 primitive (graded)",
        "t1 primitive",
        "h10 eta2 representative (graded)",
        "h10 eta2 lift",
        "h10 h30 representative (graded)",
        "h10 h30 lift",
    ] {
        match report.check(name) {
            Some(c) => f.expect(format!("d({name}) = 0"), c.outcome == Outcome::Pass, || {
                format!("d = {}", c.coboundary.clone().unwrap_or_default())
            }),
            None => f.expect(name, false, || "missing".into()),
        }
    }
    let coassoc: Vec<_> = report.coassociativity.iter().filter(|(_, i, _)| *i >= 3).collect();
    f.expect(
        "coassociativity through i = 3",
        !coassoc.is_empty() && coassoc.iter().all(|(_, _, v)| v.is_empty()),
        || format!("{coassoc:?}"),
    );
    f.within("cobar checks", t, Duration::from_secs(1));
    f
}

fn criterion_10(ctx: &Ctx) -> Findings {
    let mut f = Findings::new();
    let (a, t) = timed(|| solve_functional_equation(8).unwrap());
    let a: Vec<String> = a.iter().map(|x| x.to_string()).collect();
    f.eq(
        "a_0..a_8",
        vec!["1", "1", "3", "19", "215", "4016", "119092", "5503205", "393154477"],
        a.iter().map(String::as_str).collect(),
    );
    f.within("solving through order 8", t, Duration::from_secs(1));
    for n in 1..=4u32 {
        let (m, _) = strategy_parameters(n, 7).unwrap();
        let engine = if n == 4 {
            ctx.pipeline.stage("K(4,4)").map_or(0, |s| s.total_rank)
        } else {
            k(n, m, 7, ctx).0.total_rank()
        };
        f.eq(
            format!("2^{n} a_{n} = rank H(K({n},{m}))"),
            conjectured_rank(n as usize).unwrap().to_string(),
            engine.to_string(),
        );
    }
    f
}

fn criterion_11(ctx: &Ctx) -> Findings {
    let mut f = Findings::new();
    let mut runner = TestRunner::new(Config { cases: 64, failure_persistence: None, ..Config::default() });
    let mut prop = |name: &str, result: Result<(), String>| {
        f.expect(name, result.is_ok(), || result.unwrap_err());
    };
    let catalog = common::catalog(7);
    let masks = (0..catalog.len(), any::<u64>());
    let r = runner.run(&masks, |(i, m)| common::d_squared_vanishes(&catalog[i].1, m).map_err(TestCaseError::fail));
    prop("d^2 = 0 on random monomials of catalog algebras", r.map_err(|e| e.to_string()));
    let r = runner.run(&masks, |(i, m)| common::sigma_commutes_with_d(&catalog[i].1, m).map_err(TestCaseError::fail));
    prop("sigma commutes with d", r.map_err(|e| e.to_string()));
    let matrices = (prop::sample::select(vec![5u64, 7, 11]), 1usize..8, 1usize..8)
        .prop_flat_map(|(p, r, c)| (Just(p), prop::collection::vec(prop::collection::vec(-2i64..3, c), r)));
    let r = runner.run(&matrices, |(p, rows)| common::rank_nullity(p, &rows).map_err(TestCaseError::fail));
    prop("rank-nullity on random matrices", r.map_err(|e| e.to_string()));

    let bad: Vec<String> = catalog
        .iter()
        .filter_map(|(name, a)| common::euler_and_palindrome(a, &ctx.opts).err().map(|e| format!("{name}: {e}")))
        .collect();
    f.expect("Euler characteristics preserved, series palindromic, all catalog algebras", bad.is_empty(), || {
        bad.join("; ")
    });
    let r = common::jobs_deterministic(&["cohomology", "--family", "E", "--n", "4", "--m", "4", "--level", "1"]);
    f.expect("byte-identical output for --jobs 1, 2, 4, 8", r.is_ok(), || r.unwrap_err());
    f
}

fn main() {
    let opts = CohomologyOptions::default();
    let (pipeline, pipeline_time) = timed(|| run_pipeline(2, 7, &opts).expect("pipeline runs"));
    let ctx = Ctx { opts, pipeline, pipeline_time };

    type Criterion = fn(&Ctx) -> Findings;
    let criteria: Vec<(u32, &'static str, Criterion)> = vec![
        (1, "H(K(1,1)) and H(K(2,1))", criterion_1),
        (2, "H(K(2,2)) at p = 7, 11", criterion_2),
        (3, "H(K(3,3)) at p = 7", criterion_3),
        (4, "H(E(4,3,0)) and its chart", criterion_4),
        (5, "H(E(4,4,0)) and its chart", criterion_5),
        (6, "H(E(4,4,1)) and H(E(4,4,2))", criterion_6),
        (7, "H(K(4,4)) end to end", criterion_7),
        (8, "spectral sequences converge per block", criterion_8),
        (9, "cobar cocycles and coassociativity", criterion_9),
        (10, "conjectured ranks", criterion_10),
        (11, "property suites", criterion_11),
    ];
    let mut verdicts = Vec::new();
    for (id, title, run) in criteria {
        let (findings, elapsed) = timed(|| run(&ctx));
        verdicts.push(Verdict { id, title, passed: findings.ok, details: findings.lines, elapsed });
    }

    for v in &verdicts {
        for line in &v.details {
            println!("    [{:>2}] {line}", v.id);
        }
    }
    println!();
    for v in &verdicts {
        let status = if v.passed { "PASS" } else { "FAIL" };
        let note = if KNOWN_DEVIATIONS.contains(&v.id) {
            if v.passed {
                "  (listed as a known deviation but passed)"
            } else {
                "  (known deviation)"
            }
        } else {
            ""
        };
        println!("criterion {:>2}  {status}  {:<40} {:>8.2?}{note}", v.id, v.title, v.elapsed);
    }

    let failing: BTreeSet<u32> = verdicts.iter().filter(|v| !v.passed).map(|v| v.id).collect();
    let known: BTreeSet<u32> = KNOWN_DEVIATIONS.iter().copied().collect();
    if failing != known {
        eprintln!("failing criteria {failing:?} differ from the known deviations {known:?}");
        std::process::exit(1);
    }
}
