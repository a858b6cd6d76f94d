//! The `orenil` command line.
//!
//! Exit codes: 0 success or expected verdict, 1 verdict mismatch, 2 input
//! error, 3 budget or cap exceeded.

mod parse;
mod report;

pub use parse::{parse_elements, parse_poly, parse_rational, parse_set};
pub use report::Report;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::Value;

use crate::algebra::io::{load_algebra, write_algebra, AlgebraDocument};
use crate::algebra::{catalog, inner_derivation, nilpotency_index, verify_leibniz, Algebra, AlgebraError, CoeffRing, Derivation, Element, MultilinearIdentity};
use crate::orepoly::{
    direct_product, evaluate_terms, minimal_nilpotency, rewrite_product, theorem_bound, within_t_span, OreError,
    DEFAULT_SPAN_BUDGET,
};
use crate::radical::{
    check_delta_stability, radical_char0, semiprime_witness, verify_candidate, RadicalError, RadicalReport, Stability,
};
use crate::words::{
    compute_bounds, find_d_decreasing, find_d_decreasing_constrained, is_b_bounded, is_k_valid, minimal_n_oracle,
    prop21_witness, weight, BoundSequence, OracleConfig, Word, WordsError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "orenil", version, about = "Exact computations in differential polynomial rings over nilpotent algebras")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for parallel searches (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Weight, validity, boundedness and decreasing factorizations of a word.
    WordsAnalyze(WordsAnalyzeArgs),
    /// The constants (M, N) of the decreasing-subword bound, with trace.
    WordsBounds(WordsBoundsArgs),
    /// Least N with S^{N+1} = 0 for a finite S in A[x; δ], optionally against the proved bound.
    OreNilpotency(OreNilpotencyArgs),
    /// Canonical terms of a_{i0} x^{p1} a_{i1} ... a_{in} x^{p(n+1)}.
    OreRewrite(OreRewriteArgs),
    /// Nil radical and its stability under a derivation.
    RadicalCheck(RadicalCheckArgs),
    /// Write a bundled algebra file and run its check.
    Examples(ExamplesArgs),
}

#[derive(Debug, clap::Args)]
struct WordsAnalyzeArgs {
    /// Comma-separated letters, e.g. "3,2,1".
    word: String,
    #[arg(long, default_value_t = 1)]
    k: u64,
    /// Bound prefix "b0,b1,..." (append ";notail" to disable the tail rule).
    #[arg(long)]
    b: Option<String>,
    /// Search for a d-decreasing factorization.
    #[arg(long)]
    decreasing: Option<usize>,
    /// Restrict blocks to the last floor(εn) letters (requires --decreasing and --m-bound).
    #[arg(long, requires_all = ["decreasing", "m_bound"])]
    epsilon: Option<String>,
    /// Block first letters must be below this value.
    #[arg(long, requires = "epsilon")]
    m_bound: Option<u64>,
}

#[derive(Debug, clap::Args)]
struct WordsBoundsArgs {
    #[arg(long)]
    d: usize,
    #[arg(long, default_value_t = 1)]
    k: u64,
    /// Rational in (0, 1], e.g. "1/2".
    #[arg(long, default_value = "1")]
    epsilon: String,
    /// Bound prefix "b0,b1,..." (append ";notail" to disable the tail rule).
    #[arg(long)]
    b: String,
    /// Also run the exhaustive oracle up to MAX_N letters of size at most MAX_LETTER.
    #[arg(long, num_args = 2, value_names = ["MAX_N", "MAX_LETTER"])]
    oracle: Option<Vec<u64>>,
    /// Word budget for the oracle.
    #[arg(long, default_value_t = 50_000_000)]
    budget: u64,
    /// Build the decreasing factorization of this word from the bound construction.
    #[arg(long)]
    witness: Option<String>,
}

#[derive(Debug, clap::Args)]
struct OreNilpotencyArgs {
    /// Algebra-definition file.
    file: PathBuf,
    /// Polynomials separated by ';', e.g. "e12+e23*x; e13".
    #[arg(long)]
    set: String,
    /// Named derivation from the file (default: zero).
    #[arg(long)]
    derivation: Option<String>,
    /// Largest N tried.
    #[arg(long, default_value_t = 32)]
    cap: usize,
    /// Named identity from the file; also compute the proved bound.
    #[arg(long)]
    bound: Option<String>,
    /// Maximum x-degree k for the bound (default: the set's degree, at least 1).
    #[arg(long)]
    k: Option<u64>,
    /// Generators T of the coefficients, e.g. "e12,e13,e23" (default: the whole basis).
    #[arg(long = "T")]
    t: Option<String>,
    /// Cap on the flattened span dimension.
    #[arg(long, default_value_t = DEFAULT_SPAN_BUDGET)]
    budget: usize,
}

#[derive(Debug, clap::Args)]
struct OreRewriteArgs {
    /// Factor indices i0,...,in.
    #[arg(long)]
    indices: String,
    /// Exponents p1,...,p(n+1).
    #[arg(long)]
    exponents: String,
    #[arg(long)]
    k: u64,
    /// Algebra file for checking the expansion against direct multiplication.
    #[arg(long, requires = "generators")]
    file: Option<PathBuf>,
    /// Generators a_0, a_1, ... separated by ';'.
    #[arg(long, requires = "file")]
    generators: Option<String>,
    #[arg(long, requires = "file")]
    derivation: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Expect {
    Stable,
    Unstable,
}

#[derive(Debug, clap::Args)]
struct RadicalCheckArgs {
    /// Algebra-definition file.
    file: PathBuf,
    /// Named derivation from the file (default: zero).
    #[arg(long)]
    derivation: Option<String>,
    /// Candidate nil radical as elements separated by ',' (required in characteristic p).
    #[arg(long)]
    candidate: Option<String>,
    /// Coordinate range for the rational semiprimeness search.
    #[arg(long, default_value_t = 2)]
    grid: i64,
    /// Expected verdict; a different outcome exits with 1.
    #[arg(long, value_enum)]
    expect: Option<Expect>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExampleName {
    /// F_p[T]/(T^p) with δ(t) = 1.
    Charp,
    /// Strictly upper-triangular 3×3 matrices.
    Upper3strict,
    /// Rank-2 algebra with zero multiplication.
    Squarezero,
    /// Upper-triangular 2×2 matrices over ℚ.
    Upper2,
}

#[derive(Debug, clap::Args)]
struct ExamplesArgs {
    #[arg(value_enum)]
    name: ExampleName,
    /// Characteristic for `charp`.
    #[arg(long, default_value_t = 3)]
    p: u64,
    /// Directory for the generated file.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
struct CliError {
    code: i32,
    message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        CliError { code: EXIT_INPUT, message: message.into() }
    }
}

impl From<WordsError> for CliError {
    fn from(e: WordsError) -> Self {
        let code = if matches!(e, WordsError::BudgetExceeded { .. }) { EXIT_BUDGET } else { EXIT_INPUT };
        CliError { code, message: e.to_string() }
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<OreError> for CliError {
    fn from(e: OreError) -> Self {
        match e {
            OreError::Words(w) => w.into(),
            OreError::BudgetExceeded { .. } => CliError { code: EXIT_BUDGET, message: e.to_string() },
            other => CliError::input(other.to_string()),
        }
    }
}

impl From<RadicalError> for CliError {
    fn from(e: RadicalError) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<String> for CliError {
    fn from(message: String) -> Self {
        CliError::input(message)
    }
}

type CmdResult = Result<(Report, i32), CliError>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: rendered }
            } else {
                Outcome { code: EXIT_OK, stdout: rendered, stderr: String::new() }
            };
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        builder = builder.num_threads(n);
    }
    let pool = match builder.build() {
        Ok(pool) => pool,
        Err(e) => return Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: format!("error: {e}\n") },
    };
    let json = cli.json;
    let result = pool.install(|| dispatch(cli.command));
    match result {
        Ok((report, code)) => Outcome { code, stdout: report.render(json), stderr: String::new() },
        Err(e) => Outcome { code: e.code, stdout: String::new(), stderr: format!("error: {}\n", e.message) },
    }
}

fn dispatch(command: Command) -> CmdResult {
    match command {
        Command::WordsAnalyze(a) => words_analyze(a),
        Command::WordsBounds(a) => words_bounds(a),
        Command::OreNilpotency(a) => {
            let doc = load_algebra(&a.file)?;
            let mut report = Report::new("ore-nilpotency");
            report.set("file", a.file.display().to_string());
            let bound = a.bound.as_deref().map(|name| BoundRequest { identity: name, k: a.k, t: a.t.as_deref() });
            let code = ore_nilpotency(&mut report, &doc, a.derivation.as_deref(), &a.set, a.cap, bound, a.budget)?;
            Ok((report, code))
        }
        Command::OreRewrite(a) => ore_rewrite(a),
        Command::RadicalCheck(a) => {
            let doc = load_algebra(&a.file)?;
            let mut report = Report::new("radical-check");
            report.set("file", a.file.display().to_string());
            let code = radical_check(&mut report, &doc, a.derivation.as_deref(), a.candidate.as_deref(), a.grid, a.expect)?;
            Ok((report, code))
        }
        Command::Examples(a) => examples(a),
    }
}

fn parse_word(text: &str) -> Result<Word, CliError> {
    text.parse::<Word>().map_err(CliError::from)
}

fn words_analyze(a: WordsAnalyzeArgs) -> CmdResult {
    let u = parse_word(&a.word)?;
    let mut r = Report::new("words-analyze");
    r.set("word", u.to_string()).set("length", u.len()).set("weight", weight(&u).to_string()).set("k", a.k);
    r.set("k_valid", is_k_valid(&u, a.k));
    if let Some(b) = &a.b {
        let b: BoundSequence = b.parse()?;
        r.set("b", b.to_string()).set("b_bounded", is_b_bounded(&u, &b)?);
    }
    if let Some(d) = a.decreasing {
        r.set("decreasing", d);
        let found = match (&a.epsilon, a.m_bound) {
            (Some(eps), Some(m)) => {
                let eps = parse_rational(eps)?;
                r.set("epsilon", eps.to_string()).set("m_bound", m);
                find_d_decreasing_constrained(&u, d, &eps, &BigUint::from(m))
            }
            _ => find_d_decreasing(&u, d),
        };
        r.set("factorization", found.map_or_else(|| "none".to_string(), |f| f.render(&u)));
    }
    Ok((r, EXIT_OK))
}

fn words_bounds(a: WordsBoundsArgs) -> CmdResult {
    let b: BoundSequence = a.b.parse()?;
    let eps = parse_rational(&a.epsilon)?;
    let mut r = Report::new("words-bounds");
    r.set("d", a.d).set("k", a.k).set("epsilon", eps.to_string()).set("b", b.to_string());
    let bounds = compute_bounds(a.d, &b, a.k, &eps)?;
    r.set("M", bounds.m.to_string()).set("N", bounds.n.to_string());
    let trace: Vec<Value> = bounds
        .trace
        .iter()
        .map(|l| {
            Value::String(format!(
                "depth={} eps={} M1={} N1={} b_M1={} M2={} N2={}",
                l.depth, l.epsilon, l.m1, l.n1, l.block_len, l.m2, l.n2
            ))
        })
        .collect();
    r.set("trace", trace);
    let mut code = EXIT_OK;
    if let Some(o) = &a.oracle {
        let mut cfg = OracleConfig::new(o[0] as usize, o[1]);
        cfg.budget = a.budget;
        let mut sub = Report::default();
        sub.set("max_n", o[0]).set("max_letter", o[1]).set("budget", a.budget);
        let found = minimal_n_oracle(a.d, &b, a.k, cfg)?;
        sub.set("minimal_n", found.map_or(Value::Null, Value::from));
        if let Some(n) = found {
            let ok = BigUint::from(n) <= bounds.n;
            sub.set("within_bound", ok);
            if !ok {
                code = EXIT_MISMATCH;
            }
        }
        r.nest("oracle", sub);
    }
    if let Some(w) = &a.witness {
        let u = parse_word(w)?;
        let f = prop21_witness(&u, a.d, &b, a.k, &eps)?;
        let mut sub = Report::default();
        sub.set("word", u.to_string()).set("factorization", f.render(&u));
        let valid = f.validate(&u).is_ok() && f.within_window(&u, &eps, &bounds.m);
        sub.set("valid", valid);
        if !valid {
            code = EXIT_MISMATCH;
        }
        r.nest("witness", sub);
    }
    Ok((r, code))
}

fn derivation_of(doc: &AlgebraDocument, name: Option<&str>) -> Result<(String, Derivation), CliError> {
    match name {
        None => Ok(("zero".into(), Derivation::zero(doc.algebra.rank()))),
        Some(n) => Ok((n.to_string(), doc.derivation(n)?.clone())),
    }
}

fn format_elements(alg: &Algebra, els: &[Element]) -> Vec<Value> {
    els.iter().map(|e| Value::String(alg.format_element(e))).collect()
}

struct BoundRequest<'a> {
    identity: &'a str,
    k: Option<u64>,
    t: Option<&'a str>,
}

fn ore_nilpotency(
    r: &mut Report,
    doc: &AlgebraDocument,
    derivation: Option<&str>,
    set_text: &str,
    cap: usize,
    bound: Option<BoundRequest<'_>>,
    budget: usize,
) -> Result<i32, CliError> {
    let alg = &doc.algebra;
    let (dname, delta) = derivation_of(doc, derivation)?;
    let set = parse_set(alg, set_text)?;
    r.set("algebra", alg.to_string()).set("derivation", dname).set("cap", cap);
    r.set("set", set.iter().map(|p| Value::String(p.format(alg))).collect::<Vec<_>>());
    let mut report = minimal_nilpotency(alg, &delta, &set, cap, budget)?;
    r.set("dimensions", report.dimensions.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(","));
    r.set("minimal_N", report.minimal_n.map_or_else(|| Value::String(format!("cap exceeded ({cap})")), Value::from));
    let mut code = if report.minimal_n.is_some() { EXIT_OK } else { EXIT_BUDGET };
    if let Some(req) = bound {
        let ident = doc.identity(req.identity)?;
        let t = match req.t {
            Some(text) => parse_elements(alg, text)?,
            None => (0..alg.rank()).map(|i| alg.basis(i)).collect(),
        };
        let k = req.k.unwrap_or_else(|| set.iter().filter_map(|p| p.degree()).max().unwrap_or(0).max(1) as u64);
        let tb = theorem_bound(alg, &delta, &t, k, ident)?;
        let mut sub = Report::default();
        sub.set("identity", req.identity).set("degree", ident.degree()).set("k", k);
        sub.set("T", format_elements(alg, &t));
        sub.set("b", tb.b.to_string()).set("M", tb.bounds.m.to_string()).set("N", tb.bounds.n.to_string());
        let inside = within_t_span(alg, &t, k, &set);
        sub.set("set_within_T_span", inside);
        report.theorem = Some(tb);
        if let Some(ok) = report.within_bound() {
            sub.set("minimal_N_within_bound", ok);
            if inside && !ok {
                code = EXIT_MISMATCH;
            }
        }
        r.nest("bound", sub);
    }
    Ok(code)
}

fn ore_rewrite(a: OreRewriteArgs) -> CmdResult {
    let indices = parse::parse_usize_list(&a.indices)?;
    let exponents = parse::parse_u64_list(&a.exponents)?;
    let mut r = Report::new("ore-rewrite");
    r.set("indices", a.indices.clone()).set("exponents", a.exponents.clone()).set("k", a.k);
    let loaded = match (&a.file, &a.generators) {
        (Some(file), Some(g)) => {
            let doc = load_algebra(file)?;
            let gens = parse_elements(&doc.algebra, g)?;
            let (dname, delta) = derivation_of(&doc, a.derivation.as_deref())?;
            Some((doc, gens, dname, delta))
        }
        _ => None,
    };
    // Without an algebra only the number of generators matters.
    let placeholder: Vec<Element>;
    let gens: &[Element] = match &loaded {
        Some((_, gens, ..)) => gens,
        None => {
            placeholder = vec![Element::new(Vec::new()); indices.iter().max().map_or(0, |m| m + 1)];
            &placeholder
        }
    };
    let terms = rewrite_product(gens, &indices, &exponents, a.k)?;
    r.set("terms", terms.len());
    r.set("records", terms.iter().map(|t| Value::String(t.to_string())).collect::<Vec<_>>());
    let mut code = EXIT_OK;
    if let Some((doc, gens, dname, delta)) = &loaded {
        let alg = &doc.algebra;
        let direct = direct_product(alg, delta, gens, &indices, &exponents);
        let summed = evaluate_terms(alg, delta, gens, &terms);
        let mut sub = Report::default();
        sub.set("derivation", dname.clone()).set("product", direct.format(alg)).set("equal", direct == summed);
        if direct != summed {
            code = EXIT_MISMATCH;
        }
        r.nest("check", sub);
    }
    Ok((r, code))
}

fn radical_check(
    r: &mut Report,
    doc: &AlgebraDocument,
    derivation: Option<&str>,
    candidate: Option<&str>,
    grid: i64,
    expect: Option<Expect>,
) -> Result<i32, CliError> {
    let alg = &doc.algebra;
    let (dname, delta) = derivation_of(doc, derivation)?;
    r.set("algebra", alg.to_string()).set("derivation", dname);
    let report: RadicalReport = match (alg.ring(), candidate) {
        (CoeffRing::Rationals, None) => radical_char0(alg)?,
        (CoeffRing::Rationals, Some(text)) => {
            let computed = radical_char0(alg)?;
            let cand = alg.span(parse_elements(alg, text)?.iter());
            if cand != computed.radical {
                return Err(CliError::input("candidate differs from the trace-form radical"));
            }
            computed
        }
        (_, Some(text)) => verify_candidate(alg, alg.span(parse_elements(alg, text)?.iter()))?,
        (ring, None) => return Err(CliError::input(format!("over {ring} a --candidate radical is required"))),
    };
    let n = &report.radical;
    r.set("method", format!("{:?}", report.method));
    r.set("radical", format_elements(alg, &alg.subspace_basis(n)));
    r.set("nilpotency_index", report.certificate.nilpotency_index.map_or(Value::Null, Value::from));
    // Exhaustive over F_p only when the quotient is small.
    let free = alg.rank() - n.dim();
    let searchable = match alg.ring() {
        CoeffRing::PrimeField(p) => (*p as f64).powi(free as i32) <= 1e6,
        _ => ((2 * grid + 1) as f64).powi(free as i32) <= 1e6,
    };
    let semiprime = if searchable {
        match semiprime_witness(alg, n, grid) {
            None => Value::String("no witness found".into()),
            Some(x) => Value::String(format!("not semiprime: {}", alg.format_element(&x))),
        }
    } else {
        Value::String("skipped (search space too large)".into())
    };
    r.set("semiprime_quotient", semiprime);
    let stability = check_delta_stability(alg, &delta, n)?;
    let observed = match &stability {
        Stability::Stable => {
            r.set("stability", "Stable");
            Expect::Stable
        }
        Stability::Unstable { witness, image } => {
            r.set("stability", "Unstable");
            r.set("witness", alg.format_element(witness)).set("image", alg.format_element(image));
            Expect::Unstable
        }
    };
    Ok(match expect {
        Some(e) if e != observed => EXIT_MISMATCH,
        _ => EXIT_OK,
    })
}

fn write_doc(dir: &Path, name: &str, doc: &AlgebraDocument) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::input(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, write_algebra(doc)).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    Ok(path)
}

fn examples(a: ExamplesArgs) -> CmdResult {
    let mut r = Report::new("examples");
    match a.name {
        ExampleName::Charp => {
            r.set("name", "charp").set("p", a.p);
            let (alg, d) = catalog::charp(a.p)?;
            let mut doc = AlgebraDocument::new(alg);
            doc.derivations.insert("d".into(), d);
            let path = write_doc(&a.out, &format!("charp-{}.json", a.p), &doc)?;
            r.set("written", path.display().to_string());
            let doc = load_algebra(&path)?;
            let alg = &doc.algebra;
            let d = doc.derivation("d")?;
            let leibniz = verify_leibniz(alg, d.rows().to_vec()).is_ok();
            let t = alg.basis(1.min(alg.rank() - 1));
            let t_index = nilpotency_index(alg, &alg.span([t.clone()].iter()));
            let dt = d.apply(alg, &t);
            let dt_is_unit = alg.unit().is_some_and(|u| dt == alg.basis(u));
            r.set("leibniz", leibniz).set("t_nilpotency_index", t_index.map_or(Value::Null, Value::from));
            r.set("delta_t", alg.format_element(&dt)).set("delta_t_is_unit", dt_is_unit);
            let candidate = (1..alg.rank()).map(|i| alg.basis_names()[i].clone()).collect::<Vec<_>>().join(",");
            let mut sub = Report::default();
            let code = radical_check(&mut sub, &doc, Some("d"), Some(&candidate), 0, Some(Expect::Unstable))?;
            r.nest("radical_check", sub);
            let reproduced = code == EXIT_OK && leibniz && dt_is_unit && t_index == Some(a.p as usize);
            r.set("expected", "Unstable with witness t, δ(t) = 1").set("reproduced", reproduced);
            Ok((r, if reproduced { EXIT_OK } else { EXIT_MISMATCH }))
        }
        ExampleName::Upper3strict => {
            r.set("name", "upper3strict");
            let alg = catalog::strict_upper_triangular(CoeffRing::Rationals, 3);
            let mut doc = AlgebraDocument::new(alg.clone());
            doc.derivations.insert("inner".into(), inner_derivation(&alg, &alg.basis(0)));
            doc.derivations.insert("zero".into(), Derivation::zero(3));
            doc.identities.insert("cube".into(), MultilinearIdentity::nilpotent(3));
            let path = write_doc(&a.out, "upper3strict.json", &doc)?;
            r.set("written", path.display().to_string());
            let doc = load_algebra(&path)?;
            let mut plain = Report::default();
            let c1 = ore_nilpotency(&mut plain, &doc, Some("zero"), "e12+e23*x", 8, None, DEFAULT_SPAN_BUDGET)?;
            let plain_ok = c1 == EXIT_OK && plain_minimal(&plain) == Some(2);
            r.nest("zero_derivation", plain);
            let mut bounded = Report::default();
            let req = BoundRequest { identity: "cube", k: Some(1), t: Some("e12,e13,e23") };
            let c2 = ore_nilpotency(&mut bounded, &doc, Some("inner"), "e12+e23*x", 8, Some(req), DEFAULT_SPAN_BUDGET)?;
            r.nest("inner_derivation", bounded);
            let reproduced = plain_ok && c2 == EXIT_OK;
            r.set("expected", "minimal_N = 2 and minimal_N <= N").set("reproduced", reproduced);
            Ok((r, if reproduced { EXIT_OK } else { EXIT_MISMATCH }))
        }
        ExampleName::Squarezero => {
            r.set("name", "squarezero");
            let alg = catalog::square_zero(CoeffRing::Rationals, 2);
            let mut doc = AlgebraDocument::new(alg);
            doc.identities.insert("comm".into(), MultilinearIdentity::commutative());
            let path = write_doc(&a.out, "squarezero.json", &doc)?;
            r.set("written", path.display().to_string());
            let doc = load_algebra(&path)?;
            let mut sub = Report::default();
            let req = BoundRequest { identity: "comm", k: Some(1), t: Some("e1,e2") };
            let code = ore_nilpotency(&mut sub, &doc, None, "e1*x", 8, Some(req), DEFAULT_SPAN_BUDGET)?;
            let reproduced = code == EXIT_OK && plain_minimal(&sub) == Some(1);
            r.nest("nilpotency", sub);
            r.set("expected", "minimal_N = 1").set("reproduced", reproduced);
            Ok((r, if reproduced { EXIT_OK } else { EXIT_MISMATCH }))
        }
        ExampleName::Upper2 => {
            r.set("name", "upper2");
            let alg = catalog::upper_triangular(CoeffRing::Rationals, 2);
            let mut doc = AlgebraDocument::new(alg.clone());
            doc.derivations.insert("inner".into(), inner_derivation(&alg, &alg.basis(0)));
            let path = write_doc(&a.out, "upper2.json", &doc)?;
            r.set("written", path.display().to_string());
            let doc = load_algebra(&path)?;
            let mut sub = Report::default();
            let code = radical_check(&mut sub, &doc, Some("inner"), Some("e12"), 2, Some(Expect::Stable))?;
            r.nest("radical_check", sub);
            let reproduced = code == EXIT_OK;
            r.set("expected", "radical span(e12), Stable").set("reproduced", reproduced);
            Ok((r, if reproduced { EXIT_OK } else { EXIT_MISMATCH }))
        }
    }
}

fn plain_minimal(r: &Report) -> Option<u64> {
    let json: Value = serde_json::from_str(&r.render(true)).ok()?;
    json.get("minimal_N")?.as_u64()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        run(std::iter::once("orenil").chain(args.iter().copied()))
    }

    #[test]
    fn words_analyze_reports() {
        let o = run_args(&["words-analyze", "2,1", "--k", "1"]);
        assert_eq!(o.code, 0);
        assert!(o.stdout.contains("weight: 4\n") && o.stdout.contains("k_valid: false\n"), "{}", o.stdout);
        let o = run_args(&["words-analyze", "3,2,1", "--decreasing", "2"]);
        assert!(o.stdout.contains("factorization: v=(3) w1=(2) w2=(1) x=()"), "{}", o.stdout);
        let o = run_args(&["words-analyze", "3,x,1"]);
        assert_eq!(o.code, 2);
        assert!(o.stderr.contains("position 1"), "{}", o.stderr);
    }

    #[test]
    fn words_bounds_reports() {
        let o = run_args(&["words-bounds", "--d", "1", "--k", "1", "--epsilon", "1", "--b", "1"]);
        assert_eq!(o.code, 0);
        assert!(o.stdout.contains("M: 9\nN: 11\n"), "{}", o.stdout);
        let o = run_args(&["words-bounds", "--d", "0", "--b", "1", "--json"]);
        let v: Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["N"], "1");
        let o = run_args(&["words-bounds", "--d", "1", "--b", "1", "--epsilon", "0.5"]);
        assert_eq!(o.code, 2);
        let o = run_args(&["words-bounds", "--d", "2", "--b", "1", "--oracle", "8", "3"]);
        assert_eq!(o.code, 0, "{}{}", o.stdout, o.stderr);
    }

    #[test]
    fn unknown_flags_are_rejected() {
        let o = run_args(&["words-analyze", "1", "--bogus"]);
        assert_eq!(o.code, 2);
    }

    #[test]
    fn rewrite_without_algebra() {
        let o = run_args(&["ore-rewrite", "--indices", "0,1", "--exponents", "1,0", "--k", "1"]);
        assert_eq!(o.code, 0);
        assert!(o.stdout.contains("  - 1 | 0,1 | 0 | 1\n  - 1 | 0,1 | 1 | 0\n"), "{}", o.stdout);
        let o = run_args(&["ore-rewrite", "--indices", "0,1", "--exponents", "2,0", "--k", "1"]);
        assert_eq!(o.code, 2);
    }

    #[test]
    fn examples_reproduce() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().to_str().unwrap();
        for name in ["charp", "upper3strict", "squarezero", "upper2"] {
            let o = run_args(&["examples", name, "--out", out]);
            assert_eq!(o.code, 0, "{name}: {}{}", o.stdout, o.stderr);
        }
        let o = run_args(&["examples", "charp", "--p", "5", "--out", out]);
        assert_eq!(o.code, 0, "{}", o.stdout);
        assert!(o.stdout.contains("witness: t\n") && o.stdout.contains("image: 1\n"), "{}", o.stdout);
        let o = run_args(&["examples", "charp", "--p", "4", "--out", out]);
        assert_eq!(o.code, 2);
    }
}
