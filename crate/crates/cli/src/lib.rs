//! The `koszulkit` command line: argument parsing, dispatch and report assembly.
//!
//! [`run`] does all the work and returns the exit code with the captured output, so the
//! binary is a thin wrapper and tests can drive commands without spawning processes.
//!
//! Exit codes: 0 success or condition true, 1 condition false, 2 hypotheses or
//! preconditions not met, 3 input error.

use std::fmt::Write as _;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use koszulkit::conditions::{self, ConditionReport, Verdict};
use koszulkit::koszul::{HomologyAlgebra, Koszul, KoszulElement};
use koszulkit::parse::parse_poly;
use koszulkit::report::{render_betti_table, table_from_dims};
use koszulkit::resolution::{betti_numbers_k, betti_table_over_polynomial_ring};
use koszulkit::series::{golod_formula_series, golod_quotient_series, stretched_series, IntPolynomial, RationalFunctionZ};
use koszulkit::stretched::{parse_matrix, structure_checks, StretchedSpec};
use koszulkit::{corpus, parse_ring, Error, Field, MonomialOrder, QuotientRing, RingDefinition};

/// Environment variable holding an optional worker-thread count.
pub const THREADS_ENV: &str = "KOSZULKIT_THREADS";

#[derive(Parser, Debug)]
#[command(name = "koszulkit", version, about = "Koszul homology, Betti numbers and Poincaré series of quotient rings")]
pub struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Report wall-clock time. Off by default so that output is reproducible.
    #[arg(long, global = true)]
    timing: bool,
    /// Override the coefficient field of the ring, e.g. `Q` or `GF(32003)`.
    #[arg(long, global = true, value_name = "FIELD")]
    field: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduced Gröbner basis of the defining ideal.
    Gb {
        /// Corpus name, file path, or `-` for standard input.
        ring: String,
        #[arg(long, value_enum)]
        order: Option<Order>,
    },
    /// Betti table of R over the polynomial ring, or Betti numbers of k over R.
    Betti(BettiArgs),
    /// Bigraded Koszul homology dimensions and algebra generators.
    Homology { ring: String },
    /// A basis of the socle.
    Socle { ring: String },
    /// Decide a multiplicative condition on Koszul homology.
    #[command(subcommand)]
    Check(CheckCommand),
    /// Closed forms of Poincaré series.
    #[command(subcommand)]
    Series(SeriesCommand),
    /// Stretched rings.
    #[command(subcommand)]
    Stretched(StretchedCommand),
    /// Built-in rings.
    #[command(subcommand)]
    Corpus(CorpusCommand),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Order {
    Lex,
    Grevlex,
}

impl From<Order> for MonomialOrder {
    fn from(o: Order) -> Self {
        match o {
            Order::Lex => MonomialOrder::Lex,
            Order::Grevlex => MonomialOrder::GrevLex,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Via {
    /// Minimal resolution of the ideal over the polynomial ring.
    Resolution,
    /// Dimensions of Koszul homology.
    Homology,
}

#[derive(Args, Debug)]
struct BettiArgs {
    ring: String,
    /// Betti table of R over the polynomial ring (the default).
    #[arg(long, conflicts_with = "of_k")]
    over_poly: bool,
    /// Betti numbers of the residue field over R.
    #[arg(long)]
    of_k: bool,
    /// Last homological degree for `--of-k`.
    #[arg(long, default_value_t = 6, allow_negative_numbers = true)]
    limit: i64,
    /// How the table over the polynomial ring is computed.
    #[arg(long, value_enum, default_value = "resolution")]
    via: Via,
}

#[derive(Subcommand, Debug)]
enum CheckCommand {
    /// Whether the nonlinear strands lie in the ideal generated by the given classes.
    NonlinearGen {
        ring: String,
        /// Cycles such as `z*T1 + (y+u)*T2`, or generator labels such as `G3`.
        #[arg(long, num_args = 1.., required = true)]
        classes: Vec<String>,
    },
    /// Whether all pairwise products of the cycles vanish in K.
    TrivialProducts {
        ring: String,
        #[arg(long, num_args = 1.., required = true)]
        cycles: Vec<String>,
    },
    /// Condition P(t, r) for one cycle.
    PCond {
        ring: String,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        cycle: String,
        /// Use the m-adic filtration instead of the grading.
        #[arg(long)]
        local: bool,
    },
    /// Graded condition Z(t, b, s) for a cycle set.
    ZCond {
        ring: String,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        s: usize,
        #[arg(long, num_args = 1.., required = true)]
        cycles: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
enum SeriesCommand {
    /// P_k(z) = (1+z)^n / (1 - z(h-1) + a z^2 (1+z)^n) with h from R/m^s and a = dim m^s.
    Golod {
        ring: String,
        #[arg(long)]
        s: usize,
        #[arg(long, default_value_t = 6)]
        limit: usize,
    },
    /// Series of k over a stretched ring with embedding dimension v and socle rank r.
    Stretched {
        #[arg(long)]
        v: i64,
        #[arg(long)]
        r: i64,
        #[arg(long, default_value_t = 6)]
        limit: usize,
    },
    /// Compare a formula with Betti numbers of k computed directly.
    Compare {
        ring: String,
        /// `golod:S`, `golod-quotient`, `stretched:V,R`, or a fraction in z such as `1/(1-2*z)`.
        #[arg(long)]
        formula: String,
        #[arg(long, default_value_t = 6)]
        limit: usize,
    },
}

#[derive(Subcommand, Debug)]
enum StretchedCommand {
    /// Print the presentation of a stretched ring.
    Build {
        #[arg(long)]
        v: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        h: usize,
        /// Symmetric invertible matrix, rows separated by `;`, e.g. `1,0;0,1`.
        #[arg(long, default_value = "")]
        a: String,
    },
}

#[derive(Subcommand, Debug)]
enum CorpusCommand {
    List,
    Get { name: String },
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Serialize)]
struct Config {
    field: Option<String>,
    order: Option<String>,
}

#[derive(Serialize)]
struct Report<'a> {
    command: &'a [String],
    config: Config,
    results: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_ms: Option<f64>,
}

/// Text and structured forms of a command's result.
struct Produced {
    code: i32,
    text: String,
    results: Value,
    config: Config,
}

struct Context<'a> {
    stdin: &'a str,
    field: Option<String>,
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::Precondition(_) | Error::NotArtinian(_) | Error::NotGraded(_) => 2,
        _ => 3,
    }
}

/// Runs the command line `args` (including the program name) with `stdin` as standard input.
pub fn run(args: &[String], stdin: &str) -> Outcome {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let start = Instant::now();
    let ctx = Context { stdin, field: cli.field.clone() };
    let produced = match dispatch(&ctx, &cli.command) {
        Ok(p) => p,
        Err(e) => return Outcome { code: error_code(&e), stdout: String::new(), stderr: format!("error: {e}\n") },
    };
    let elapsed = start.elapsed().as_secs_f64() * 1000.0;
    let mut stderr = String::new();
    let stdout = if cli.json {
        let report = Report {
            command: &args[1..],
            config: produced.config,
            results: produced.results,
            timing_ms: cli.timing.then_some(elapsed),
        };
        let mut s = serde_json::to_string_pretty(&report).expect("reports serialize");
        s.push('\n');
        s
    } else {
        if cli.timing {
            stderr = format!("time: {elapsed:.1} ms\n");
        }
        produced.text
    };
    Outcome { code: produced.code, stdout, stderr }
}

fn dispatch(ctx: &Context, cmd: &Command) -> Result<Produced, Error> {
    match cmd {
        Command::Gb { ring, order } => gb(ctx, ring, *order),
        Command::Betti(a) => betti(ctx, a),
        Command::Homology { ring } => homology(ctx, ring),
        Command::Socle { ring } => socle(ctx, ring),
        Command::Check(c) => check(ctx, c),
        Command::Series(s) => series(ctx, s),
        Command::Stretched(StretchedCommand::Build { v, r, h, a }) => stretched_build(*v, *r, *h, a),
        Command::Corpus(c) => corpus_command(c),
    }
}

fn load_definition(ctx: &Context, src: &str) -> Result<RingDefinition, Error> {
    let text = if src == "-" {
        ctx.stdin.to_string()
    } else if std::path::Path::new(src).is_file() {
        std::fs::read_to_string(src).map_err(|e| Error::InvalidInput(format!("cannot read `{src}`: {e}")))?
    } else {
        corpus::text(src)?.to_string()
    };
    let def = parse_ring(&text)?;
    match &ctx.field {
        None => Ok(def),
        Some(f) => {
            let retyped: String = def
                .print()
                .lines()
                .map(|l| if l.starts_with("field ") { format!("field {f}\n") } else { format!("{l}\n") })
                .collect();
            parse_ring(&retyped)
        }
    }
}

fn load(ctx: &Context, src: &str) -> Result<QuotientRing, Error> {
    load_definition(ctx, src)?.build()
}

fn config_of(r: &QuotientRing) -> Config {
    Config { field: Some(r.field().to_string()), order: Some(r.order().name().to_string()) }
}

fn no_config() -> Config {
    Config { field: None, order: None }
}

fn gb(ctx: &Context, src: &str, order: Option<Order>) -> Result<Produced, Error> {
    let mut r = load(ctx, src)?;
    if let Some(o) = order {
        r = r.with_order(o.into())?;
    }
    let elems: Vec<String> = r.gb().elements().iter().map(|g| g.format(r.names())).collect();
    let text = elems.iter().map(|e| format!("{e}\n")).collect();
    Ok(Produced { code: 0, text, results: json!({ "gb": elems }), config: config_of(&r) })
}

fn betti(ctx: &Context, a: &BettiArgs) -> Result<Produced, Error> {
    let r = load(ctx, &a.ring)?;
    if a.of_k {
        let b = betti_numbers_k(&r, a.limit)?;
        let linear = b.is_linear(0);
        let mut text = format!("betti: {}\n", join(&b.totals));
        if let Some(l) = linear {
            let _ = writeln!(text, "linear: {}", if l { "yes" } else { "no" });
        }
        if let Some(g) = &b.graded {
            text.push_str(&render_betti_table(g));
        }
        let results = json!({ "totals": b.totals, "graded": b.graded, "linear": linear });
        return Ok(Produced { code: 0, text, results, config: config_of(&r) });
    }
    let table = match a.via {
        Via::Resolution => betti_table_over_polynomial_ring(&r)?,
        Via::Homology => table_from_dims(&HomologyAlgebra::compute(&r)?.dims()),
    };
    let text = render_betti_table(&table);
    let results = json!({ "table": table, "rendered": text });
    Ok(Produced { code: 0, text, results, config: config_of(&r) })
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn homology(ctx: &Context, src: &str) -> Result<Produced, Error> {
    let r = load(ctx, src)?;
    let h = HomologyAlgebra::compute(&r)?;
    let k = h.koszul();
    let dims = h.dims();
    let mut text = render_betti_table(&table_from_dims(&dims));
    text.push_str("generators:\n");
    let mut gens = Vec::new();
    for g in h.generators() {
        let cycle = k.format(&g.cycle);
        let _ = writeln!(text, "  {} ({},{}): {cycle}", g.label, g.bidegree.0, g.bidegree.1);
        gens.push(json!({ "label": g.label, "bidegree": [g.bidegree.0, g.bidegree.1], "cycle": cycle }));
    }
    let dims: Vec<Value> = dims.iter().filter(|(_, d)| **d > 0).map(|(bd, d)| json!({ "i": bd.0, "j": bd.1, "dim": d })).collect();
    Ok(Produced { code: 0, text, results: json!({ "dims": dims, "generators": gens }), config: config_of(&r) })
}

fn socle(ctx: &Context, src: &str) -> Result<Produced, Error> {
    let r = load(ctx, src)?;
    let basis: Vec<String> = r.socle()?.iter().map(|e| r.format(e)).collect();
    let mut text = format!("dimension: {}\n", basis.len());
    for b in &basis {
        let _ = writeln!(text, "{b}");
    }
    Ok(Produced { code: 0, text, results: json!({ "dimension": basis.len(), "basis": basis }), config: config_of(&r) })
}

/// Cycles from expressions or generator labels.
fn cycle_list(k: &Koszul, h: Option<&HomologyAlgebra>, items: &[String]) -> Result<Vec<(String, KoszulElement)>, Error> {
    items
        .iter()
        .map(|s| {
            let by_label = h.and_then(|h| h.generators().iter().find(|g| g.label == *s));
            match by_label {
                Some(g) => Ok((s.clone(), g.cycle.clone())),
                None => Ok((s.clone(), k.parse(s)?)),
            }
        })
        .collect()
}

fn verdict_name(v: Verdict) -> String {
    serde_json::to_value(v).ok().and_then(|x| x.as_str().map(String::from)).unwrap_or_default()
}

fn render_condition(rep: &ConditionReport) -> String {
    let mut s = format!("condition: {}\nverdict: {}\n", rep.condition, verdict_name(rep.verdict));
    if !rep.hypotheses.is_empty() {
        s.push_str("hypotheses:\n");
        for c in &rep.hypotheses {
            let _ = writeln!(s, "  [{}] {}", if c.passed { "ok" } else { "failed" }, c.name);
        }
    }
    if !rep.pieces.is_empty() {
        s.push_str("pieces:\n");
        for p in &rep.pieces {
            let at = match p.internal_degree {
                Some(j) => format!("({},{})", p.homological_degree, j),
                None => format!("{}", p.homological_degree),
            };
            let _ = writeln!(
                s,
                "  {at}: source {}, target rank {}, combined rank {} [{}]",
                p.source_dim,
                p.target_rank,
                p.combined_rank,
                if p.passed { "ok" } else { "failed" }
            );
        }
    }
    if !rep.witnesses.is_empty() {
        s.push_str("witnesses:\n");
        for w in &rep.witnesses {
            let _ = writeln!(s, "  {}: {}", w.note, w.cycle);
        }
    }
    s
}

fn condition_output(r: &QuotientRing, rep: ConditionReport) -> Produced {
    let text = render_condition(&rep);
    let results = serde_json::to_value(&rep).expect("reports serialize");
    Produced { code: rep.verdict.exit_code(), text, results, config: config_of(r) }
}

fn check(ctx: &Context, c: &CheckCommand) -> Result<Produced, Error> {
    match c {
        CheckCommand::NonlinearGen { ring, classes } => {
            let r = load(ctx, ring)?;
            let h = HomologyAlgebra::compute(&r)?;
            let z = cycle_list(h.koszul(), Some(&h), classes)?;
            Ok(condition_output(&r, conditions::check_nonlinear_generated_by(&h, &z)?))
        }
        CheckCommand::TrivialProducts { ring, cycles } => {
            let r = load(ctx, ring)?;
            let k = Koszul::new(&r);
            let uses_labels = cycles.iter().any(|c| k.parse(c).is_err());
            let h = if uses_labels && r.is_graded() { Some(HomologyAlgebra::compute(&r)?) } else { None };
            let z = cycle_list(&k, h.as_ref(), cycles)?;
            Ok(condition_output(&r, conditions::check_trivial_products(&k, &z)?))
        }
        CheckCommand::PCond { ring, t, r: deg, cycle, local } => {
            let r = load(ctx, ring)?;
            if *local {
                let k = Koszul::new(&r);
                let l = k.parse(cycle)?;
                return Ok(condition_output(&r, conditions::check_p_local(&r, *t, *deg, &l)?));
            }
            let h = HomologyAlgebra::compute(&r)?;
            let l = cycle_list(h.koszul(), Some(&h), std::slice::from_ref(cycle))?.remove(0).1;
            Ok(condition_output(&r, conditions::check_p_graded(&h, *t, *deg, &l)?))
        }
        CheckCommand::ZCond { ring, t, b, s, cycles } => {
            let r = load(ctx, ring)?;
            let h = HomologyAlgebra::compute(&r)?;
            let z = cycle_list(h.koszul(), Some(&h), cycles)?;
            Ok(condition_output(&r, conditions::check_z_graded(&h, *t, *b, *s, &z)?))
        }
    }
}

/// Σ_i dim H_i z^i for a graded ring.
fn homology_polynomial(r: &QuotientRing) -> Result<IntPolynomial, Error> {
    Ok(IntPolynomial::from_usize(&HomologyAlgebra::compute(r)?.total_dims()))
}

struct GolodData {
    series: RationalFunctionZ,
    h: IntPolynomial,
    a: usize,
    hypotheses: Vec<(String, bool)>,
}

fn golod_data(r: &QuotientRing, s: usize) -> Result<GolodData, Error> {
    if s < 2 {
        return Err(Error::InvalidInput(format!("s must be at least 2, got {s}")));
    }
    let quotient = r.truncation(s as u32)?;
    let h = homology_polynomial(&quotient)?;
    let a = r.power_ideal_basis(s)?.len();
    let t = s / 2;
    let hypotheses = vec![
        (format!("m^{} = 0", s + 1), r.power_vanishes(s + 1)),
        (format!("m^{s} != 0"), a > 0),
        (format!("R/m^{s} is Golod by the degree test with t = {t}"), t >= 1 && conditions::lofwall_golod_test(&quotient, t)?),
    ];
    let series = golod_formula_series(r.nvars() as u32, a as i64, &h)?;
    Ok(GolodData { series, h, a, hypotheses })
}

fn expansion(f: &RationalFunctionZ, limit: usize) -> Result<Vec<BigInt>, Error> {
    f.expand(limit)
}

fn series(ctx: &Context, s: &SeriesCommand) -> Result<Produced, Error> {
    match s {
        SeriesCommand::Golod { ring, s, limit } => {
            let r = load(ctx, ring)?;
            let g = golod_data(&r, *s)?;
            let coeffs = expansion(&g.series, *limit)?;
            let mut text = format!("{}\n", g.series);
            let _ = writeln!(text, "h: {}", g.h);
            let _ = writeln!(text, "a: {}", g.a);
            let _ = writeln!(text, "expansion: {}", join(&coeffs));
            text.push_str("hypotheses:\n");
            for (name, ok) in &g.hypotheses {
                let _ = writeln!(text, "  [{}] {name}", if *ok { "ok" } else { "failed" });
            }
            text.push_str("note: the Golod property of R -> R/m^s is not checked here; certify it with `check z-cond`\n");
            let results = json!({
                "series": g.series.format(),
                "h": g.h.to_string(),
                "a": g.a,
                "expansion": coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "hypotheses": g.hypotheses.iter().map(|(n, p)| json!({ "name": n, "passed": p })).collect::<Vec<_>>(),
            });
            Ok(Produced { code: 0, text, results, config: config_of(&r) })
        }
        SeriesCommand::Stretched { v, r, limit } => {
            let f = stretched_series(*v, *r)?;
            let coeffs = expansion(&f, *limit)?;
            let text = format!("{f}\nexpansion: {}\n", join(&coeffs));
            let results = json!({ "series": f.format(), "expansion": coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>() });
            Ok(Produced { code: 0, text, results, config: no_config() })
        }
        SeriesCommand::Compare { ring, formula, limit } => {
            let r = load(ctx, ring)?;
            let f = formula_series(&r, formula)?;
            let coeffs = expansion(&f, *limit)?;
            let direct = betti_numbers_k(&r, *limit as i64)?;
            let direct_big: Vec<BigInt> = direct.totals.iter().map(|x| BigInt::from(*x)).collect();
            let matches = coeffs == direct_big;
            let text = format!(
                "formula: {f}\nseries: {}\nbetti: {}\nmatch: {}\n",
                join(&coeffs),
                join(&direct.totals),
                if matches { "yes" } else { "no" }
            );
            let results = json!({
                "series": f.format(),
                "expansion": coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "betti": direct.totals,
                "match": matches,
            });
            Ok(Produced { code: if matches { 0 } else { 1 }, text, results, config: config_of(&r) })
        }
    }
}

fn formula_series(r: &QuotientRing, formula: &str) -> Result<RationalFunctionZ, Error> {
    let formula = formula.trim();
    if let Some(s) = formula.strip_prefix("golod:") {
        let s: usize = s.trim().parse().map_err(|_| Error::InvalidInput(format!("bad power `{s}`")))?;
        return Ok(golod_data(r, s)?.series);
    }
    if formula == "golod-quotient" {
        return golod_quotient_series(r.nvars() as u32, &homology_polynomial(r)?);
    }
    if let Some(rest) = formula.strip_prefix("stretched:") {
        let parts: Vec<i64> = rest.split(',').map(|x| x.trim().parse()).collect::<Result<_, _>>().map_err(|_| Error::InvalidInput(format!("bad stretched parameters `{rest}`")))?;
        if parts.len() != 2 {
            return Err(Error::InvalidInput("expected stretched:V,R".into()));
        }
        return stretched_series(parts[0], parts[1]);
    }
    parse_fraction(formula)
}

fn int_polynomial(src: &str) -> Result<IntPolynomial, Error> {
    let names = vec!["z".to_string()];
    let p = parse_poly(src, Field::Rationals, &names, MonomialOrder::GrevLex)?;
    let mut coeffs = Vec::new();
    for (m, c) in p.terms() {
        let d = m.degree() as usize;
        let q = c.as_rational().filter(|q| q.is_integer()).ok_or_else(|| Error::InvalidInput(format!("`{src}` has a non-integer coefficient")))?;
        if coeffs.len() <= d {
            coeffs.resize(d + 1, BigInt::from(0));
        }
        coeffs[d] = q.numer();
    }
    Ok(IntPolynomial::new(coeffs))
}

/// `N/D` with N and D polynomials in z; the split is at the first top-level `/` that
/// leaves two parseable sides.
fn parse_fraction(src: &str) -> Result<RationalFunctionZ, Error> {
    let mut depth = 0i32;
    let mut first_err = None;
    for (i, ch) in src.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '/' if depth == 0 => match (int_polynomial(&src[..i]), int_polynomial(&src[i + 1..])) {
                (Ok(n), Ok(d)) => return RationalFunctionZ::new(n, d),
                (Err(e), _) | (_, Err(e)) => {
                    first_err.get_or_insert(e);
                }
            },
            _ => {}
        }
    }
    match int_polynomial(src) {
        Ok(p) => Ok(RationalFunctionZ::polynomial(p)),
        Err(e) => Err(first_err.unwrap_or(e)),
    }
}

fn stretched_build(v: usize, r: usize, h: usize, a: &str) -> Result<Produced, Error> {
    let spec = StretchedSpec::new(v, r, h, parse_matrix(a)?)?;
    let field = Field::Rationals;
    let ring = spec.build(field)?;
    let def = RingDefinition {
        label: Some(format!("stretched-v{v}-r{r}-h{h}")),
        field,
        names: ring.names().to_vec(),
        order: None,
        relations: ring.relations().to_vec(),
    };
    let checks = structure_checks(&spec, &ring)?;
    let f = if r != v { Some(Koszul::new(&ring).format(&spec.f_cycle(&ring)?)) } else { None };
    let mut text = def.print();
    for (name, ok) in &checks {
        let _ = writeln!(text, "# [{}] {name}", if *ok { "ok" } else { "failed" });
    }
    if let Some(f) = &f {
        let _ = writeln!(text, "# F = {f}");
    }
    let all = checks.iter().all(|c| c.1);
    let results = json!({
        "ring": def.print(),
        "checks": checks.iter().map(|(n, p)| json!({ "name": n, "passed": p })).collect::<Vec<_>>(),
        "f_cycle": f,
    });
    Ok(Produced { code: if all { 0 } else { 1 }, text, results, config: config_of(&ring) })
}

fn corpus_command(c: &CorpusCommand) -> Result<Produced, Error> {
    match c {
        CorpusCommand::List => {
            let list = corpus::list();
            let width = list.iter().map(|(n, _)| n.len()).max().unwrap_or(0);
            let text = list.iter().map(|(n, d)| format!("{n:<width$}  {d}\n")).collect();
            let results = json!(list.iter().map(|(n, d)| json!({ "name": n, "description": d })).collect::<Vec<_>>());
            Ok(Produced { code: 0, text, results, config: no_config() })
        }
        CorpusCommand::Get { name } => {
            let text = corpus::text(name)?.to_string();
            let def = parse_ring(&text)?;
            let config = Config { field: Some(def.field.to_string()), order: Some(def.order_or_default().name().to_string()) };
            Ok(Produced { code: 0, results: json!({ "ring": text }), text, config })
        }
    }
}

/// Configures the global thread pool from [`THREADS_ENV`] when it holds a positive count.
pub fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()).filter(|n| *n > 0) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}
