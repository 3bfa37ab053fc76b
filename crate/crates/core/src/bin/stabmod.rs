//! Command-line front end: catalog algebras, cohomology, spectral
//! sequences, cobar checks, the conjectural rank table and the full
//! height-doubling pipeline.
//!
//! Exit codes: 0 success, 1 failed check or golden mismatch, 2 invalid
//! presentation, 3 configuration error.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use stabmod_core::catalog::{self, CatalogRequest, Family, RavenelScheme};
use stabmod_core::cobar::{self, Outcome};
use stabmod_core::cohomology::{cohomology_with, CohomologyOptions};
use stabmod_core::conjecture::{self, DEFAULT_ORDER};
use stabmod_core::dga::DgaPresentation;
use stabmod_core::field::PrimeField;
use stabmod_core::pipeline::run_pipeline;
use stabmod_core::spectral::{self, FilteredComplex};
use stabmod_core::{golden, json as pjson, Error};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "stabmod", version, about = "Cohomology of finite exterior DGA models of Morava stabilizer groups")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Worker threads (default: available cores).
    #[arg(long, env = "STABMOD_JOBS", global = true)]
    jobs: Option<usize>,
    /// Matrices with at most this many columns are reduced densely.
    #[arg(long, global = true)]
    dense_threshold: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cohomology of a catalog algebra or a JSON presentation.
    Cohomology {
        #[command(flatten)]
        source: Source,
        /// Also list a representative cocycle for every class.
        #[arg(long)]
        representatives: bool,
    },
    /// Spectral sequence of a filtered catalog algebra.
    Ss {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = FiltrationKind::Trivial)]
        filtration: FiltrationKind,
        /// Comma-separated quotient generators of a CE filtration
        /// (default: the generators added by the last catalog step).
        #[arg(long, value_delimiter = ',')]
        quotient: Vec<String>,
        /// Largest page computed.
        #[arg(long, default_value_t = 64)]
        pages: u32,
        /// Also print the d_1 table between E_1 representatives.
        #[arg(long)]
        d1_table: bool,
    },
    /// Every stage of the height-doubling strategy from height n to 2n.
    Pipeline {
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long, default_value_t = 7)]
        prime: u64,
    },
    /// Named cobar cochains, coassociativity and counit checks.
    Cobar {
        #[arg(long, default_value_t = 7)]
        prime: u64,
        /// Use the coproduct formula for t4 as well.
        #[arg(long)]
        assume_coproduct_t4: bool,
    },
    /// The table (n, 2^n a_n, a_n) of conjectured ranks.
    Conjecture {
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
    },
    /// Print a catalog presentation as JSON.
    Emit {
        #[command(flatten)]
        source: Source,
    },
}

#[derive(Args, Debug, Clone)]
struct Source {
    /// Catalog family: K, E0K or E.
    #[arg(long)]
    family: Option<String>,
    /// Height index n.
    #[arg(long)]
    n: Option<u32>,
    /// Rows m of h generators.
    #[arg(long)]
    m: Option<u32>,
    /// Level l of an E algebra: rows of w generators.
    #[arg(long, default_value_t = 0)]
    level: u32,
    /// Prime p > 3 of the ground field.
    #[arg(long, default_value_t = 7)]
    prime: u64,
    /// Ravenel degree scheme for the E families: dn or d2n.
    #[arg(long, default_value = "d2n")]
    ravenel_scheme: String,
    /// A built-in presentation instead of a catalog request.
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    /// A JSON presentation file instead of a catalog request.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Preset {
    /// The ground field, with no generators.
    Unit,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum FiltrationKind {
    Trivial,
    Ce,
    IAdic,
}

enum Failure {
    /// Bad flags, files or requests.
    Config(String),
    /// A malformed or inconsistent presentation.
    Presentation(String),
    /// The computation ran but a check failed; the report was written.
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_presentation_error() {
            Failure::Presentation(e.to_string())
        } else {
            Failure::Config(e.to_string())
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// What a subcommand produced.
struct Report {
    command: &'static str,
    warnings: Vec<String>,
    body: Value,
    text: String,
    passed: bool,
    /// Print `text` in every format, without the envelope (used by `emit`
    /// so that its output is itself a valid presentation file).
    raw: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Presentation(msg)) => {
            eprintln!("error: invalid presentation: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(Failure::Config("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| Failure::Config(format!("cannot start thread pool: {e}")))?;
    }
    let mut opts = CohomologyOptions::default();
    if let Some(t) = cli.dense_threshold {
        opts.dense_threshold = t;
    }
    let report = match &cli.command {
        Command::Cohomology { source, representatives } => cmd_cohomology(source, *representatives, &opts)?,
        Command::Ss { source, filtration, quotient, pages, d1_table } => {
            cmd_ss(source, *filtration, quotient, *pages, *d1_table, &opts)?
        }
        Command::Pipeline { n, prime } => cmd_pipeline(*n, *prime, &opts)?,
        Command::Cobar { prime, assume_coproduct_t4 } => cmd_cobar(*prime, *assume_coproduct_t4)?,
        Command::Conjecture { order } => cmd_conjecture(*order)?,
        Command::Emit { source } => cmd_emit(source)?,
    };
    for w in &report.warnings {
        log::warn!("{w}");
    }
    let rendered = match cli.format {
        _ if report.raw => report.text.clone(),
        Format::Json => {
            let envelope = json!({
                "schema_version": SCHEMA_VERSION,
                "command": report.command,
                "passed": report.passed,
                "warnings": report.warnings,
                "report": report.body,
            });
            let mut s = serde_json::to_string_pretty(&envelope).map_err(|e| Failure::Config(e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Table => report.text.clone(),
    };
    match &cli.output {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{rendered}"),
    }
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn to_value<T: Serialize>(x: &T) -> CliResult<Value> {
    serde_json::to_value(x).map_err(|e| Failure::Config(e.to_string()))
}

/// A presentation together with its label, any warnings and, for catalog
/// requests, the request itself.
struct Loaded {
    label: String,
    presentation: DgaPresentation,
    warnings: Vec<String>,
    request: Option<CatalogRequest>,
}

fn load(source: &Source) -> CliResult<Loaded> {
    let chosen = [source.family.is_some(), source.preset.is_some(), source.input.is_some()];
    if chosen.iter().filter(|&&c| c).count() != 1 {
        return Err(Failure::Config("give exactly one of --family, --preset or --input".into()));
    }
    if let Some(Preset::Unit) = source.preset {
        let field = PrimeField::new(source.prime).map_err(Failure::from)?;
        return Ok(Loaded {
            label: "unit".into(),
            presentation: DgaPresentation::unit(field),
            warnings: Vec::new(),
            request: None,
        });
    }
    if let Some(path) = &source.input {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
        let presentation = pjson::parse_presentation(&text)?;
        presentation.validate()?;
        return Ok(Loaded { label: path.display().to_string(), presentation, warnings: Vec::new(), request: None });
    }
    let request = catalog_request(source)?;
    let (presentation, warnings) = request.build()?;
    Ok(Loaded { label: request.label(), presentation, warnings, request: Some(request) })
}

fn catalog_request(source: &Source) -> CliResult<CatalogRequest> {
    let family: Family = source.family.as_deref().unwrap_or("K").parse()?;
    let n = source.n.ok_or_else(|| Failure::Config("--n is required with --family".into()))?;
    let m = source.m.ok_or_else(|| Failure::Config("--m is required with --family".into()))?;
    let ravenel_scheme: RavenelScheme = source.ravenel_scheme.parse()?;
    Ok(CatalogRequest { family, n, m, level: source.level, prime: source.prime, ravenel_scheme })
}

fn cmd_cohomology(source: &Source, representatives: bool, opts: &CohomologyOptions) -> CliResult<Report> {
    let loaded = load(source)?;
    let r = cohomology_with(&loaded.presentation, opts)?;
    let poincare = r.poincare()?;
    let blocks = r.block_summary();
    let mut body = json!({
        "algebra": loaded.label,
        "request": loaded.request,
        "prime": loaded.presentation.prime(),
        "generators": loaded.presentation.num_generators(),
        "total_rank": r.total_rank(),
        "ravenel_is_filtration": r.ravenel_is_filtration(),
        "euler_characteristics_match": r.euler_characteristics_match(),
        "poincare": to_value(&poincare)?,
        "blocks": to_value(&blocks.iter().filter(|b| b.classes > 0).collect::<Vec<_>>())?,
    });
    let reps: Vec<Value> = if representatives {
        (0..r.total_rank())
            .map(|i| {
                json!({
                    "index": i,
                    "degree": r.class_degree(i),
                    "representative": loaded.presentation.format_element(&r.representative(i)),
                })
            })
            .collect()
    } else {
        Vec::new()
    };
    if representatives {
        body["classes"] = Value::Array(reps.clone());
    }

    let mut text = String::new();
    let _ = writeln!(text, "{}  (p = {})", loaded.label, loaded.presentation.prime());
    let _ = writeln!(text, "total rank  {}", r.total_rank());
    let _ = writeln!(text, "one-variable  {}", format_list(&poincare.one_var));
    let _ = writeln!(text, "{:>4} {:>6} {:>9} {:>6} {:>8}", "coh", "rav", "internal", "arith", "classes");
    for b in blocks.iter().filter(|b| b.classes > 0) {
        let d = b.degree;
        let _ = writeln!(text, "{:>4} {:>6} {:>9} {:>6} {:>8}", d.coh, d.rav, d.internal, d.arith, b.classes);
    }
    for c in &reps {
        let _ = writeln!(text, "  [{}] {} {}", c["index"], c["degree"], c["representative"].as_str().unwrap_or(""));
    }
    Ok(Report { command: "cohomology", warnings: loaded.warnings, body, text, passed: true, raw: false })
}

/// Generators added by the last catalog step, used as the default CE
/// quotient.
fn default_quotient(request: &CatalogRequest, total: &DgaPresentation) -> CliResult<Vec<String>> {
    let previous = match request.family {
        Family::K if request.m > 1 => CatalogRequest { m: request.m - 1, ..request.clone() },
        Family::E if request.level > 0 => CatalogRequest { level: request.level - 1, ..request.clone() },
        Family::E if request.m > 1 => CatalogRequest { m: request.m - 1, ..request.clone() },
        _ => return Err(Failure::Config("no previous catalog step; pass --quotient".into())),
    };
    let (sub, _) = previous.build()?;
    Ok(total.generators().iter().filter(|g| sub.generator_index(&g.name).is_none()).map(|g| g.name.clone()).collect())
}

fn cmd_ss(
    source: &Source,
    kind: FiltrationKind,
    quotient: &[String],
    r_max: u32,
    d1_table: bool,
    opts: &CohomologyOptions,
) -> CliResult<Report> {
    if r_max == 0 {
        return Err(Failure::Config("--pages must be at least 1".into()));
    }
    let loaded = load(source)?;
    let total = loaded.presentation.clone();
    let (fc, description): (FilteredComplex, String) = match kind {
        FiltrationKind::Trivial => (FilteredComplex::trivial(total), "trivial".into()),
        FiltrationKind::Ce => {
            let q = if quotient.is_empty() {
                let request = loaded
                    .request
                    .as_ref()
                    .ok_or_else(|| Failure::Config("--quotient is required for this source".into()))?;
                default_quotient(request, &total)?
            } else {
                quotient.to_vec()
            };
            let names: Vec<&str> = q.iter().map(String::as_str).collect();
            (spectral::ce_filtration(&total, &names)?, format!("ce over {}", q.join(",")))
        }
        FiltrationKind::IAdic => {
            let request = loaded
                .request
                .as_ref()
                .filter(|r| r.family == Family::K)
                .ok_or_else(|| Failure::Config("the i-adic filtration needs --family K".into()))?;
            let ideal = catalog::ideal_i(request.n, request.m, request.prime)?;
            (spectral::i_adic_filtration(&total, &ideal)?, "i-adic".into())
        }
    };
    let ss = spectral::pages(&fc, r_max, opts)?;
    let passed = ss.converges() && ss.bookkeeping_ok && ss.sigma_ok != Some(false);
    let mut body = json!({
        "algebra": loaded.label,
        "filtration": description,
        "converges": ss.converges(),
        "e_infinity_total": ss.e_infinity.total_dim(),
        "sequence": to_value(&ss)?,
    });
    let table = if d1_table { Some(spectral::e1_differential_table(&fc)?) } else { None };
    if let Some(t) = &table {
        body["d1_table"] = to_value(t)?;
    }

    let mut text = String::new();
    let _ = writeln!(text, "{}  filtration: {}", loaded.label, description);
    let _ = writeln!(text, "{:>5} {:>10} {:>10} {:>7}", "page", "total dim", "rank d_r", "stable");
    for p in &ss.pages {
        let _ = writeln!(text, "{:>5} {:>10} {:>10} {:>7}", p.page, p.total_dim(), p.total_d_rank(), p.stable);
    }
    let _ = writeln!(text, "E_inf total  {}", ss.e_infinity.total_dim());
    let _ = writeln!(text, "converges  {}", ss.converges());
    let _ = writeln!(text, "bookkeeping  {}", ss.bookkeeping_ok);
    if let Some(s) = ss.sigma_ok {
        let _ = writeln!(text, "sigma-consistent  {s}");
    }
    write_diffs(&mut text, &ss.convergence_diffs);
    if let Some(t) = &table {
        for e in t {
            let _ = writeln!(
                text,
                "  d1 {} -> {}  coefficient {}",
                e.source.representative, e.target.representative, e.coefficient
            );
        }
    }
    Ok(Report { command: "ss", warnings: loaded.warnings, body, text, passed, raw: false })
}

fn cmd_pipeline(n: u32, p: u64, opts: &CohomologyOptions) -> CliResult<Report> {
    let mut warnings = Vec::new();
    if p <= 2 * n as u64 + 1 {
        warnings.push(format!("p = {p} ≤ 2n+1 = {}: collapse arguments do not apply", 2 * n + 1));
    }
    let report = run_pipeline(n, p, opts)?;
    let mut text = String::new();
    let _ = writeln!(text, "pipeline n = {n}, p = {p}");
    for st in &report.stages {
        let ok = st.checks.iter().filter(|c| c.passed).count();
        let _ = writeln!(text, "{:<26} rank {:>6}   checks {}/{}", st.name, st.total_rank, ok, st.checks.len());
        if !st.spectral_sequence.is_empty() {
            let pages: Vec<String> =
                st.spectral_sequence.iter().map(|(r, d, k)| format!("E{r}={d} (d{r} rank {k})")).collect();
            let _ = writeln!(text, "    {}", pages.join(", "));
        }
        for c in st.checks.iter().filter(|c| !c.passed) {
            let _ = writeln!(text, "    FAIL {}", c.name);
            write_diffs(&mut text, &c.diffs);
        }
    }
    if let Some(f) = &report.factored_form {
        let _ = writeln!(text, "factored form: {f:?}");
    }
    let _ = writeln!(text, "{}", if report.passed() { "all checks passed" } else { "some checks failed" });
    Ok(Report { command: "pipeline", warnings, body: to_value(&report)?, text, passed: report.passed(), raw: false })
}

fn cmd_cobar(p: u64, assume_t4: bool) -> CliResult<Report> {
    let report = cobar::verify_named_cocycles(p, assume_t4)?;
    let mut text = String::new();
    let _ = writeln!(text, "cobar checks at p = {p}{}", if assume_t4 { " (assuming the t4 coproduct)" } else { "" });
    for c in &report.checks {
        let outcome = match c.outcome {
            Outcome::Pass => "pass",
            Outcome::Fail => "FAIL",
            Outcome::Conditional => "conditional",
        };
        let _ = writeln!(text, "{outcome:<12} {}", c.name);
        if c.outcome == Outcome::Fail {
            if let Some(d) = &c.coboundary {
                let _ = writeln!(text, "             d = {d}");
            }
        }
    }
    let _ = writeln!(text, "coassociativity, counit, d^2 = 0: {}", if report.structure_ok() { "pass" } else { "FAIL" });
    let passed = report.all_unconditional_pass();
    Ok(Report { command: "cobar", warnings: Vec::new(), body: to_value(&report)?, text, passed, raw: false })
}

fn cmd_conjecture(order: usize) -> CliResult<Report> {
    let table = conjecture::conjecture_table(order)?;
    // Rows also present in the built-in table must agree with it.
    let golden = golden::parse_rank_table(golden::CONJECTURE_TABLE)?;
    let mismatches: Vec<Value> = golden
        .iter()
        .filter_map(|&(n, rank, a)| {
            let row = table.get(n as usize)?;
            (row.rank != rank.to_string() || row.a != a.to_string())
                .then(|| json!({ "n": n, "expected": [rank.to_string(), a.to_string()], "got": [row.rank, row.a] }))
        })
        .collect();
    let mut text = String::new();
    let _ = writeln!(text, "{:>3}  {:>28}  {:>26}", "n", "2^n a_n", "a_n");
    for row in &table {
        let _ = writeln!(text, "{:>3}  {:>28}  {:>26}", row.n, row.rank, row.a);
    }
    for m in &mismatches {
        let _ = writeln!(text, "MISMATCH {m}");
    }
    let passed = mismatches.is_empty();
    let body = json!({ "order": order, "rows": to_value(&table)?, "golden_mismatches": mismatches });
    Ok(Report { command: "conjecture", warnings: Vec::new(), body, text, passed, raw: false })
}

fn cmd_emit(source: &Source) -> CliResult<Report> {
    let loaded = load(source)?;
    let text = pjson::presentation_to_string(&loaded.presentation) + "\n";
    Ok(Report { command: "emit", warnings: loaded.warnings, body: Value::Null, text, passed: true, raw: true })
}

fn format_list(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

fn write_diffs(text: &mut String, diffs: &[golden::Diff]) {
    for d in diffs {
        let _ = writeln!(text, "      {}: expected {}, got {}", d.degree, d.expected, d.got);
    }
}
