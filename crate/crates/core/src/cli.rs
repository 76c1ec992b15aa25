//! Command-line interface: load or build rings, run the invariant
//! computations, and print deterministic text or JSON reports.
//!
//! Exit codes: 0 success, 1 invariant violation, 2 parse/usage error,
//! 3 resource refusal.

use std::collections::BTreeMap;

use clap::{Args, Parser, Subcommand};
use num_traits::{One, Zero};

use crate::adams::{self, AdamsError};
use crate::builtins;
use crate::charclass::{self, CompleteIntersection};
use crate::lefschetz;
use crate::lie::{self, LieTensor, SixfoldCoefficients};
use crate::linalg::{fmt_q, parse_q, Q, SparseVec};
use crate::report::{
    Report, CITE_CARLSON_TOLEDO, CITE_DISTORTION, CITE_FORMALITY, CITE_JOHNSON_SURJ,
    CITE_KRECK_SU, CITE_RANK_BOUND, CITE_SULLIVAN,
};
use crate::ring::CohomologyRing;
use crate::ring_io;
use crate::word::Word;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVARIANT: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// Environment variable overriding the word cap of page computations.
pub const WORD_CAP_ENV: &str = "TORELLI_MAX_WORDS";

#[derive(Parser)]
#[command(
    name = "torelli",
    version,
    about = "Exact rational-homotopy and characteristic-class invariants of formal manifolds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every ring invariant and list the violations.
    Validate(InputArgs),
    /// Rational homotopy ranks, loop-space homology and the tensor-length
    /// refinement.
    Homotopy(HomotopyArgs),
    /// Johnson target dimensions, the rank lower bound, and distortion data.
    Johnson(JohnsonArgs),
    /// Chern/Pontryagin classes, Betti numbers and index verdicts of
    /// complete intersections.
    Charclass(CharclassArgs),
    /// Build the six-manifold model, derive, exponentiate and report the
    /// Johnson invariant.
    Sixfold(SixfoldArgs),
    /// Hard Lefschetz, sl2 action, primitive decomposition and derivation
    /// algebras.
    Lefschetz(LefschetzArgs),
}

#[derive(Args)]
struct LefschetzArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Print the basis of the derivation algebra as matrices (small
    /// algebras only).
    #[arg(long)]
    dump_derivations: bool,
}

#[derive(Args, Clone)]
struct InputArgs {
    /// Ring file (JSON).
    #[arg(long, conflicts_with = "builtin")]
    ring: Option<String>,
    /// Builtin ring name (see `--builtin help`).
    #[arg(long)]
    builtin: Option<String>,
    /// Output format.
    #[arg(long, default_value = "text", value_parser = ["text", "json"])]
    format: String,
}

#[derive(Args)]
struct HomotopyArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Largest homotopy degree to report.
    #[arg(long)]
    max_degree: Option<usize>,
    /// Assert formality, labeling page output as loop homology and
    /// homotopy (on by default for builtins).
    #[arg(long)]
    formal: bool,
    /// Cap on materialized words (default 2,000,000; also TORELLI_MAX_WORDS).
    #[arg(long)]
    max_words: Option<u128>,
    /// Dump the quadratic Lie model of the input ring.
    #[arg(long)]
    emit_model: bool,
    /// Also print the bigraded page dimensions (first and second page).
    #[arg(long)]
    page_table: bool,
}

#[derive(Args)]
struct JohnsonArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Hypersurface input: complex dimension and degree.
    #[arg(long, num_args = 2, value_names = ["N", "D"], conflicts_with_all = ["ring", "builtin"])]
    hypersurface: Option<Vec<u32>>,
}

#[derive(Args)]
struct CharclassArgs {
    /// Ambient projective dimension N.
    #[arg(long, conflicts_with = "hypersurface")]
    ambient: Option<usize>,
    /// Comma-separated degrees of the defining hypersurfaces.
    #[arg(long, requires = "ambient")]
    degrees: Option<String>,
    /// Hypersurface input: complex dimension and degree (or degree range
    /// like `1..10`).
    #[arg(long, num_args = 2, value_names = ["N", "D"])]
    hypersurface: Option<Vec<String>>,
    #[arg(long, default_value = "text", value_parser = ["text", "json"])]
    format: String,
}

#[derive(Args)]
struct SixfoldArgs {
    #[arg(long)]
    b2: usize,
    #[arg(long)]
    b3: usize,
    /// Cubic form: `fermat`, `lefschetz`, or `@file.json`.
    #[arg(long, default_value = "lefschetz")]
    cubic: String,
    /// Derivation coefficients: `zero` or `@file.json`.
    #[arg(long, default_value = "zero")]
    a: String,
    /// Construct derivations hitting a basis of the Johnson target.
    #[arg(long)]
    witness_surjectivity: bool,
    /// Dump the model generators and differential.
    #[arg(long)]
    emit_model: bool,
    #[arg(long, default_value = "text", value_parser = ["text", "json"])]
    format: String,
}

/// Outcome carrying the report (already printed) and the exit code.
struct CmdError {
    code: i32,
    message: String,
}

impl CmdError {
    fn parse(message: impl Into<String>) -> Self {
        CmdError { code: EXIT_PARSE, message: message.into() }
    }

    fn invariant(message: impl Into<String>) -> Self {
        CmdError { code: EXIT_INVARIANT, message: message.into() }
    }
}

impl From<AdamsError> for CmdError {
    fn from(e: AdamsError) -> Self {
        let code = match e {
            AdamsError::ResourceLimit { .. } => EXIT_RESOURCE,
            _ => EXIT_PARSE,
        };
        CmdError { code, message: e.to_string() }
    }
}

fn load_ring(input: &InputArgs) -> Result<(CohomologyRing, String), CmdError> {
    match (&input.ring, &input.builtin) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CmdError::parse(format!("cannot read {path}: {e}")))?;
            let ring = ring_io::parse(&text).map_err(|e| CmdError::parse(e.to_string()))?;
            Ok((ring, path.clone()))
        }
        (None, Some(name)) => {
            let ring = builtins::build(name).map_err(CmdError::parse)?;
            Ok((ring, format!("builtin:{name}")))
        }
        _ => Err(CmdError::parse("exactly one of --ring or --builtin is required")),
    }
}

fn word_cap(explicit: Option<u128>) -> Option<u128> {
    if explicit.is_some() {
        return explicit;
    }
    std::env::var(WORD_CAP_ENV).ok().and_then(|v| v.parse().ok())
}

fn print_report(report: &Report, format: &str) {
    if format == "json" {
        print!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
}

fn ring_summary(report: &mut Report, ring: &CohomologyRing, source: &str) {
    let s = report.section("ring");
    s.kv("source", source);
    s.kv("real_dimension", ring.real_dimension().to_string());
    let betti: Vec<String> =
        (0..=ring.real_dimension()).map(|d| ring.betti(d).to_string()).collect();
    s.kv("betti", betti.join(","));
    s.kv("simply_connected", ring.simply_connected().to_string());
    s.kv("omega", if ring.omega().is_some() { "present" } else { "absent" }.to_string());
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    let invocation: Vec<String> = std::env::args().skip(1).collect();
    let outcome = match cli.command {
        Command::Validate(args) => cmd_validate(args, invocation),
        Command::Homotopy(args) => cmd_homotopy(args, invocation),
        Command::Johnson(args) => cmd_johnson(args, invocation),
        Command::Charclass(args) => cmd_charclass(args, invocation),
        Command::Sixfold(args) => cmd_sixfold(args, invocation),
        Command::Lefschetz(args) => cmd_lefschetz(args, invocation),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

fn cmd_validate(args: InputArgs, invocation: Vec<String>) -> Result<i32, CmdError> {
    let (ring, source) = load_ring(&args)?;
    let mut report = Report::new(invocation);
    ring_summary(&mut report, &ring, &source);
    let validation = ring.validate();
    let s = report.section("validation");
    s.kv("valid", validation.is_valid().to_string());
    s.kv("simply_connected", validation.simply_connected.to_string());
    if let Some(flag) = validation.omega_top_nonzero {
        s.kv("omega_top_power_nonzero", flag.to_string());
    }
    if let Some(flag) = validation.pontryagin_omega_span {
        s.kv("pontryagin_in_omega_powers", flag.to_string());
    }
    for v in &validation.violations {
        s.kv("violation", format!("{} — {}", v.label(), v.describe()));
    }
    print_report(&report, &args.format);
    Ok(if validation.is_valid() { EXIT_OK } else { EXIT_INVARIANT })
}

fn cmd_homotopy(args: HomotopyArgs, invocation: Vec<String>) -> Result<i32, CmdError> {
    let (ring, source) = load_ring(&args.input)?;
    let formal = args.formal || args.input.builtin.is_some();
    let max_degree = args.max_degree.unwrap_or(ring.real_dimension() + 2).max(2);
    let cap = word_cap(args.max_words);

    let validation = ring.validate();
    if !validation.is_valid() {
        return Err(CmdError::invariant(format!(
            "input ring violates {} invariant(s); run `validate` for details",
            validation.violations.len()
        )));
    }

    let homotopy = adams::homotopy_ranks(&ring, max_degree, cap)?;
    let loops = adams::loop_homology_ranks(&ring, max_degree, cap)?;

    let mut report = Report::new(invocation);
    ring_summary(&mut report, &ring, &source);

    let (pi_label, loop_label) = if formal {
        ("rational homotopy ranks", "loop-space homology ranks")
    } else {
        ("page primitives (formality not asserted)", "page ranks (formality not asserted)")
    };
    let s = report.section(pi_label);
    if formal {
        s.kv_cited("formal", "true", CITE_FORMALITY);
    }
    let mut rows = Vec::new();
    for j in 2..=max_degree {
        let dim = homotopy.pi.get(&j).copied().unwrap_or(0);
        let graded: Vec<String> = homotopy
            .graded
            .iter()
            .filter(|((_, jj), _)| *jj == j)
            .map(|((sdeg, _), d)| format!("s{sdeg}:{d}"))
            .collect();
        rows.push(vec![
            format!("pi_{j}"),
            dim.to_string(),
            if graded.is_empty() { "-".to_string() } else { graded.join(" ") },
        ]);
    }
    s.table(
        vec!["degree".into(), "rank".into(), "filtration".into()],
        rows,
        None,
    );

    let s = report.section(loop_label);
    let rows = loops
        .iter()
        .enumerate()
        .map(|(j, d)| vec![j.to_string(), d.to_string()])
        .collect();
    s.table(vec!["degree".into(), "rank".into()], rows, None);

    // the two low-degree exact sequences
    if ring.simply_connected() {
        let seq = adams::pi3_sequence(&ring).map_err(CmdError::from)?;
        let s = report.section("degree-3 sequence");
        s.kv("kernel (Sym^2 H_2 / im Delta)", seq.kernel_dim.to_string());
        s.kv("middle (pi_3)", seq.middle_dim.to_string());
        s.kv("cokernel (H_3)", seq.cokernel_dim.to_string());
        if let Some((k, m, c)) = seq.tensor_variant {
            s.kv("loop variant (H_2 ⊗ H_2 / im Delta, H_2 Ω, H_3)", format!("{k}, {m}, {c}"));
        }
        if ring.betti(2) == 1 {
            let seq4 = adams::pi4_sequence_b2_one(&ring).map_err(CmdError::from)?;
            let s = report.section("degree-4 sequence (b2 = 1)");
            s.kv("kernel (H_2 ⊗ H_3 / im Delta)", seq4.kernel_dim.to_string());
            s.kv("middle (pi_4)", seq4.middle_dim.to_string());
            s.kv("cokernel (primitive H_4)", seq4.cokernel_dim.to_string());
        }
    }

    if args.page_table {
        let t_max = 2 * (max_degree - 1);
        let mut complex = adams::build_e1(&ring, t_max)?;
        let estimate = complex.estimate_total_words();
        let hard_cap = cap.unwrap_or(adams::DEFAULT_WORD_CAP);
        if estimate > hard_cap {
            return Err(CmdError::from(AdamsError::ResourceLimit {
                estimate,
                cap: hard_cap,
            }));
        }
        let table = adams::compute_e2(&mut complex);
        let s = report.section("bigraded page dimensions");
        let rows: Vec<Vec<String>> = table
            .entries
            .iter()
            .map(|((col, t), e)| {
                vec![
                    format!("-{col}"),
                    t.to_string(),
                    e.dim_e1.to_string(),
                    e.dim_e2.to_string(),
                ]
            })
            .collect();
        s.table(
            vec!["column".into(), "degree".into(), "first page".into(), "second page".into()],
            rows,
            None,
        );
    }

    if args.emit_model {
        let model = lie::quadratic_model_from_ring(&ring)
            .map_err(|e| CmdError::parse(e.to_string()))?;
        let s = report.section("quadratic Lie model");
        for line in render_model(&model) {
            s.kv(line.0, line.1);
        }
    }

    print_report(&report, &args.input.format);
    Ok(EXIT_OK)
}

/// Render the generators and differential of a model as bracket
/// expressions.
pub fn render_model(model: &lie::DgLieModel) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for (g, name, degree) in model.generators() {
        let value = model.differential(g);
        out.push((
            format!("{name} (degree {degree})"),
            format!("d -> {}", render_quadratic(model, value)),
        ));
    }
    out
}

/// Write a quadratic Lie tensor as a sum of brackets.
fn render_quadratic(model: &lie::DgLieModel, v: &LieTensor) -> String {
    if v.is_empty() {
        return "0".to_string();
    }
    // collect bracket coefficients: [a,b] for a < b, and [a,a] on odd
    // letters (whose tensor is 2 a⊗a)
    let mut coeffs: BTreeMap<(u16, u16), Q> = BTreeMap::new();
    for (w, c) in v {
        let (a, b) = (w.letters()[0], w.letters()[1]);
        if a <= b {
            let half = if a == b { c / Q::from_integer(2.into()) } else { c.clone() };
            coeffs.insert((a, b), half);
        }
    }
    let parts: Vec<String> = coeffs
        .iter()
        .filter(|(_, q)| !q.is_zero())
        .map(|((a, b), q)| {
            let bracket = format!("[{},{}]", model.name(*a), model.name(*b));
            if q.is_one() {
                bracket
            } else if (-q.clone()).is_one() {
                format!("-{bracket}")
            } else {
                format!("{}*{}", fmt_q(q), bracket)
            }
        })
        .collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ").replace("+ -", "- ")
    }
}

fn cmd_johnson(args: JohnsonArgs, invocation: Vec<String>) -> Result<i32, CmdError> {
    let (ring, source) = if let Some(nd) = &args.hypersurface {
        let (n, d) = (nd[0] as usize, nd[1]);
        let ci = CompleteIntersection::hypersurface(n, d)
            .map_err(|e| CmdError::parse(e.to_string()))?;
        if n != 3 {
            return Err(CmdError::parse(format!(
                "the Johnson surjectivity statement applies to complex threefolds; got n = {n}"
            )));
        }
        let ring = charclass::ci_to_ring(&ci).map_err(|e| CmdError::parse(e.to_string()))?;
        (ring, format!("hypersurface n=3 d={d}"))
    } else {
        let (ring, source) = load_ring(&args.input)?;
        if ring.real_dimension() != 6 {
            return Err(CmdError::parse(format!(
                "the Johnson surjectivity statement applies to six-dimensional rings; got real dimension {}",
                ring.real_dimension()
            )));
        }
        (ring, source)
    };

    let mut report = Report::new(invocation);
    ring_summary(&mut report, &ring, &source);

    let (exact, bound) = lie::johnson_target_dim(&ring);
    let s = report.section("Johnson homomorphism target");
    s.kv_cited("dim Hom(H_3, Sym^2 H_2 / im Delta)", exact.to_string(), CITE_JOHNSON_SURJ);
    s.kv_cited("closed-form lower bound (b2-1) b2 b3 / 2", bound.to_string(), CITE_RANK_BOUND);
    if ring.betti(2) == 1 {
        s.kv_cited(
            "b2 = 1: this Johnson homomorphism vanishes",
            "true",
            CITE_JOHNSON_SURJ,
        );
    }

    // distortion data when the Pontryagin classes are omega-power multiples
    let s = report.section("distortion group");
    match distortion_dims_for_ring(&ring) {
        Some(dims) => {
            let total: usize = dims.iter().map(|(_, d)| d).sum();
            for (deg, d) in &dims {
                s.kv_cited(format!("dim H^{deg}"), d.to_string(), CITE_DISTORTION);
            }
            s.kv_cited("dim D_M (indeterminacies vanish)", total.to_string(), CITE_DISTORTION);
            let mut lower = bound + total;
            if ring.betti(2) == 1 {
                s.kv_cited(
                    "H_1 of the Torelli group has exactly this rank (b2 = 1 threefolds)",
                    total.to_string(),
                    CITE_KRECK_SU,
                );
                lower = total;
            }
            s.kv_cited(
                "rank H_1(Torelli) lower bound (surjectivity + central distortion)",
                lower.to_string(),
                CITE_SULLIVAN,
            );
        }
        None => {
            s.note(
                "no omega/Pontryagin decoration in omega-power form: indeterminacies unknown, distortion not reported",
            );
        }
    }

    print_report(&report, &args.input.format);
    Ok(EXIT_OK)
}

/// Distortion dimensions for a ring satisfying the omega-power condition:
/// `b1 = 0` and every stored `p_k` proportional to `omega^{2k}`.
fn distortion_dims_for_ring(ring: &CohomologyRing) -> Option<Vec<(usize, usize)>> {
    let omega = ring.omega()?;
    if ring.betti(1) != 0 {
        return None;
    }
    for (k, p) in ring.pontryagin() {
        // check p_k lies in the span of omega^{2k}
        let mut pow = SparseVec::unit(ring.dim(), ring.unit_index());
        for _ in 0..(2 * k) {
            pow = ring.mul(omega, &pow);
        }
        let mut elim = crate::linalg::Eliminator::<usize>::rank_only();
        elim.offer(pow.iter().map(|(i, q)| (i, q.clone())).collect());
        let rank = elim.rank();
        elim.offer(p.iter().map(|(i, q)| (i, q.clone())).collect());
        if elim.rank() != rank {
            return None;
        }
    }
    let mut out = Vec::new();
    let mut k = 1;
    while 4 * k <= ring.real_dimension() {
        out.push((4 * k - 1, ring.betti(4 * k - 1)));
        k += 1;
    }
    Some(out)
}

fn parse_degree_spec(spec: &str) -> Result<Vec<u32>, CmdError> {
    if let Some((lo, hi)) = spec.split_once("..") {
        let lo: u32 = lo.trim().parse().map_err(|_| CmdError::parse("bad degree range"))?;
        let hi: u32 = hi.trim().parse().map_err(|_| CmdError::parse("bad degree range"))?;
        if lo == 0 || hi < lo {
            return Err(CmdError::parse("bad degree range"));
        }
        Ok((lo..=hi).collect())
    } else {
        let d: u32 = spec.trim().parse().map_err(|_| CmdError::parse("bad degree"))?;
        Ok(vec![d])
    }
}

fn cmd_charclass(args: CharclassArgs, invocation: Vec<String>) -> Result<i32, CmdError> {
    let mut report = Report::new(invocation);
    let cis: Vec<CompleteIntersection> = if let Some(nd) = &args.hypersurface {
        let n: usize = nd[0].parse().map_err(|_| CmdError::parse("bad dimension"))?;
        parse_degree_spec(&nd[1])?
            .into_iter()
            .map(|d| {
                CompleteIntersection::hypersurface(n, d)
                    .map_err(|e| CmdError::parse(e.to_string()))
            })
            .collect::<Result<_, _>>()?
    } else if let Some(ambient) = args.ambient {
        let degrees = match &args.degrees {
            Some(list) => list
                .split(',')
                .map(|p| p.trim().parse::<u32>().map_err(|_| CmdError::parse("bad degree list")))
                .collect::<Result<Vec<_>, _>>()?,
            None => Vec::new(),
        };
        vec![CompleteIntersection::new(ambient, degrees)
            .map_err(|e| CmdError::parse(e.to_string()))?]
    } else {
        return Err(CmdError::parse("charclass needs --ambient or --hypersurface"));
    };

    if cis.len() == 1 {
        let ci = &cis[0];
        let r = charclass::ci_report(ci).map_err(|e| CmdError::parse(e.to_string()))?;
        let s = report.section("complete intersection");
        s.kv("ambient", format!("P^{}", r.ambient));
        s.kv(
            "degrees",
            if r.degrees.is_empty() {
                "-".to_string()
            } else {
                r.degrees.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
            },
        );
        s.kv("complex_dimension", r.dim.to_string());
        s.kv("degree", r.degree.clone());
        let s = report.section("characteristic classes");
        s.kv("total chern class", r.chern_total.clone());
        s.kv("total pontryagin class", r.pontryagin_total.clone());
        for (k, a) in &r.pontryagin_coeffs {
            s.kv(format!("a_{k} (p_{k} = a_{k} w^{})", 2 * k), a.clone());
        }
        s.kv("euler characteristic", r.euler_characteristic.to_string());
        let s = report.section("topology");
        s.kv(
            "betti",
            r.betti.iter().map(i64::to_string).collect::<Vec<_>>().join(","),
        );
        s.kv("middle primitive dimension", r.middle_primitive.to_string());
        for (deg, d) in &r.distortion_dims {
            s.kv_cited(format!("distortion dim H^{deg}"), d.to_string(), CITE_DISTORTION);
        }
        if let Some(v) = &r.verdict {
            let s = report.section("monodromy index verdict");
            s.kv_cited("verdict", format!("{:?}", v.verdict), CITE_CARLSON_TOLEDO);
            for reason in &v.reasons {
                s.note(reason.clone());
            }
            if r.dim == 3 && r.degrees.len() == 1 {
                let ks = charclass::kreck_su_report(ci)
                    .map_err(|e| CmdError::parse(e.to_string()))?;
                s.kv_cited(
                    "rank H_1(Torelli)",
                    ks.h1_torelli_rank.to_string(),
                    CITE_KRECK_SU,
                );
            }
        }
    } else {
        let mut rows = Vec::new();
        for ci in &cis {
            let r = charclass::ci_report(ci).map_err(|e| CmdError::parse(e.to_string()))?;
            rows.push(vec![
                ci.degrees[0].to_string(),
                r.euler_characteristic.to_string(),
                r.middle_primitive.to_string(),
                r.pontryagin_coeffs
                    .iter()
                    .map(|(k, a)| format!("a{k}={a}"))
                    .collect::<Vec<_>>()
                    .join(" "),
                r.distortion_dims
                    .iter()
                    .map(|(deg, d)| format!("H^{deg}:{d}"))
                    .collect::<Vec<_>>()
                    .join(" "),
                r.verdict.as_ref().map(|v| format!("{:?}", v.verdict)).unwrap_or_default(),
            ]);
        }
        let s = report.section("hypersurface family");
        s.table(
            vec![
                "d".into(),
                "chi".into(),
                "middle r".into(),
                "pontryagin".into(),
                "distortion".into(),
                "verdict".into(),
            ],
            rows,
            Some(CITE_CARLSON_TOLEDO),
        );
    }

    print_report(&report, &args.format);
    Ok(EXIT_OK)
}

fn load_cubic(spec: &str, b2: usize) -> Result<crate::ring::CubicForm, CmdError> {
    if let Some(path) = spec.strip_prefix('@') {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CmdError::parse(format!("cannot read {path}: {e}")))?;
        parse_cubic_file(&text, b2)
    } else {
        builtins::cubic_preset(spec, b2).map_err(CmdError::parse)
    }
}

fn parse_cubic_file(text: &str, b2: usize) -> Result<crate::ring::CubicForm, CmdError> {
    #[derive(serde::Deserialize)]
    #[serde(deny_unknown_fields)]
    struct CubicDoc {
        entries: Vec<CubicEntry>,
    }
    #[derive(serde::Deserialize)]
    #[serde(deny_unknown_fields)]
    struct CubicEntry {
        i: usize,
        j: usize,
        k: usize,
        value: String,
    }
    let doc: CubicDoc =
        serde_json::from_str(text).map_err(|e| CmdError::parse(format!("cubic file: {e}")))?;
    let mut cubic = crate::ring::CubicForm::new(b2);
    for e in &doc.entries {
        if e.i == 0 || e.j == 0 || e.k == 0 || e.i > b2 || e.j > b2 || e.k > b2 {
            return Err(CmdError::parse(format!(
                "cubic index ({},{},{}) out of range 1..={b2}",
                e.i, e.j, e.k
            )));
        }
        let q = parse_q(&e.value)
            .ok_or_else(|| CmdError::parse(format!("bad cubic value `{}`", e.value)))?;
        cubic.set(e.i - 1, e.j - 1, e.k - 1, q);
    }
    Ok(cubic)
}

fn load_a_table(spec: &str, b2: usize, m: usize) -> Result<SixfoldCoefficients, CmdError> {
    if spec == "zero" {
        return Ok(SixfoldCoefficients::new(b2, m));
    }
    let Some(path) = spec.strip_prefix('@') else {
        return Err(CmdError::parse("--a takes `zero` or `@file.json`"));
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CmdError::parse(format!("cannot read {path}: {e}")))?;
    #[derive(serde::Deserialize)]
    #[serde(deny_unknown_fields)]
    struct ADoc {
        entries: Vec<AEntry>,
    }
    #[derive(serde::Deserialize)]
    #[serde(deny_unknown_fields)]
    struct AEntry {
        k: i64,
        s: usize,
        t: usize,
        value: String,
    }
    let doc: ADoc =
        serde_json::from_str(&text).map_err(|e| CmdError::parse(format!("a file: {e}")))?;
    let mut a = SixfoldCoefficients::new(b2, m);
    for e in &doc.entries {
        if e.k == 0 || e.k.unsigned_abs() as usize > m || e.s == 0 || e.s > b2 || e.t == 0 || e.t > b2 {
            return Err(CmdError::parse(format!(
                "a-coefficient index (k={}, s={}, t={}) out of range",
                e.k, e.s, e.t
            )));
        }
        let q = parse_q(&e.value)
            .ok_or_else(|| CmdError::parse(format!("bad coefficient `{}`", e.value)))?;
        a.set(e.k, e.s, e.t, q);
    }
    Ok(a)
}

fn cmd_sixfold(args: SixfoldArgs, invocation: Vec<String>) -> Result<i32, CmdError> {
    if args.b3 % 2 != 0 {
        return Err(CmdError::parse("b3 must be even"));
    }
    let cubic = load_cubic(&args.cubic, args.b2)?;
    let six = lie::sixfold_model(args.b2, args.b3, &cubic).map_err(|e| match e {
        lie::LieError::Ring(crate::ring::RingError::DegenerateCubic { witness }) => {
            CmdError::invariant(format!(
                "degenerate cubic: direction [{}] multiplies to zero with all of H^2",
                witness.iter().map(fmt_q).collect::<Vec<_>>().join(", ")
            ))
        }
        other => CmdError::parse(other.to_string()),
    })?;
    let m = args.b3 / 2;
    let a = load_a_table(&args.a, args.b2, m)?;
    let d = lie::sixfold_derivation(&six, &a);

    let mut report = Report::new(invocation);
    let s = report.section("sixfold model");
    s.kv("b2", args.b2.to_string());
    s.kv("b3", args.b3.to_string());
    s.kv("cubic", args.cubic.clone());
    if args.emit_model {
        for line in render_model(&six.model) {
            s.kv(line.0, line.1);
        }
    }

    let s = report.section("derivation");
    let mut rows = Vec::new();
    for k in six.z_indices() {
        for sdx in 1..=args.b2 {
            for t in 1..=args.b2 {
                let q = a.get(k, sdx, t);
                if !q.is_zero() {
                    rows.push(vec![format!("a_{k}^{{{sdx},{t}}}"), fmt_q(&q)]);
                }
            }
        }
    }
    for j in 1..=args.b2 {
        for i in 1..=args.b2 {
            for k in six.z_indices() {
                let q = a.forced_b(j, i, k);
                if !q.is_zero() {
                    rows.push(vec![format!("b_{j}^{{{i},{k}}} (forced)"), fmt_q(&q)]);
                }
            }
        }
    }
    if rows.is_empty() {
        s.note("zero derivation");
    } else {
        s.table(vec!["coefficient".into(), "value".into()], rows, None);
    }

    let failures = lie::check_chain_derivation(&six.model, &d);
    let s = report.section("chain condition");
    s.kv("[D,d] = 0", failures.is_empty().to_string());
    for (g, r) in &failures {
        s.kv(
            format!("fails on {}", six.model.name(*g)),
            format!("{} terms", r.len()),
        );
    }
    if !failures.is_empty() {
        print_report(&report, &args.format);
        return Ok(EXIT_INVARIANT);
    }

    let phi = lie::exp_derivation(&six.model, &d).map_err(|e| CmdError::parse(e.to_string()))?;
    let s = report.section("exponential automorphism");
    for (g, name, _) in six.model.generators() {
        s.kv(format!("exp(D) {name}"), render_tensor(&six.model, phi.value(g)));
    }

    let inv = lie::johnson_invariant(&six.model, lie::TorelliInput::Automorphism(&phi))
        .map_err(|e| CmdError::parse(e.to_string()))?;
    let s = report.section("Johnson invariant");
    s.kv_cited("target dimension", inv.quotient_dim().to_string(), CITE_JOHNSON_SURJ);
    if inv.quotient_dim() > 0 {
        let headers: Vec<String> = std::iter::once("class".to_string())
            .chain(inv.z_names.iter().cloned())
            .collect();
        let rows: Vec<Vec<String>> = inv
            .quotient_keys
            .iter()
            .enumerate()
            .map(|(row, (p, q))| {
                std::iter::once(format!("{}·{}", inv.e_names[*p], inv.e_names[*q]))
                    .chain(inv.columns.iter().map(|col| fmt_q(&col[row])))
                    .collect()
            })
            .collect();
        s.table(headers, rows, Some(CITE_JOHNSON_SURJ));
    } else {
        s.note("target is zero; the invariant carries no information (b2 = 1 or b3 = 0)");
    }

    if args.witness_surjectivity {
        let s = report.section("surjectivity witnesses");
        let witnesses = surjectivity_witnesses(&six);
        for (desc, hit) in witnesses {
            s.kv_cited(desc, hit, CITE_JOHNSON_SURJ);
        }
    }

    print_report(&report, &args.format);
    Ok(EXIT_OK)
}

/// For each basis vector of the Johnson target, construct a derivation
/// whose exponential hits it.
pub fn surjectivity_witnesses(six: &lie::SixfoldModel) -> Vec<(String, String)> {
    let zero = SixfoldCoefficients::new(six.b2, six.m);
    let d0 = lie::sixfold_derivation(six, &zero);
    let inv0 = lie::johnson_invariant(&six.model, lie::TorelliInput::Derivation(&d0))
        .expect("zero derivation is Torelli");
    let mut out = Vec::new();
    for (col, zk) in six.z_indices().into_iter().enumerate() {
        for (row, &(p, q)) in inv0.quotient_keys.iter().enumerate() {
            // aim at the basis vector e_p e_q in column z_k
            let mut a = SixfoldCoefficients::new(six.b2, six.m);
            let val = if p == q { Q::one() } else { Q::new(1.into(), 2.into()) };
            a.set(zk, p + 1, q + 1, val.clone());
            a.set(zk, q + 1, p + 1, val);
            let d = lie::sixfold_derivation(six, &a);
            let phi = lie::exp_derivation(&six.model, &d).expect("witness exponential");
            let inv = lie::johnson_invariant(&six.model, lie::TorelliInput::Automorphism(&phi))
                .expect("witness is Torelli");
            let good = inv
                .quotient_keys
                .iter()
                .enumerate()
                .all(|(r, _)| {
                    let expect = if r == row { Q::one() } else { Q::zero() };
                    inv.columns.iter().enumerate().all(|(c, colv)| {
                        let want = if c == col { expect.clone() } else { Q::zero() };
                        colv[r] == want
                    })
                });
            out.push((
                format!(
                    "{} -> {}·{}",
                    inv0.z_names[col], inv0.e_names[p], inv0.e_names[q]
                ),
                if good { "hit".to_string() } else { "MISSED".to_string() },
            ));
        }
    }
    out
}

fn render_tensor(model: &lie::DgLieModel, v: &LieTensor) -> String {
    if v.is_empty() {
        return "0".to_string();
    }
    let word_name = |w: &Word| -> String {
        w.letters()
            .iter()
            .map(|&l| model.name(l).to_string())
            .collect::<Vec<_>>()
            .join("⊗")
    };
    v.iter()
        .map(|(w, c)| {
            if c.is_one() {
                word_name(w)
            } else if (-c.clone()).is_one() {
                format!("-{}", word_name(w))
            } else {
                format!("{}*{}", fmt_q(c), word_name(w))
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
        .replace("+ -", "- ")
}

fn cmd_lefschetz(args: LefschetzArgs, invocation: Vec<String>) -> Result<i32, CmdError> {
    let (ring, source) = load_ring(&args.input)?;
    if ring.omega().is_none() {
        return Err(CmdError::parse("the ring carries no omega class"));
    }
    let mut report = Report::new(invocation);
    ring_summary(&mut report, &ring, &source);

    let checks = lefschetz::hard_lefschetz_check(&ring)
        .map_err(|e| CmdError::parse(e.to_string()))?;
    let s = report.section("hard Lefschetz");
    let all_ok = checks.iter().all(|(_, ok)| *ok);
    for (j, ok) in &checks {
        s.kv(format!("omega^{j} iso on level {j}"), ok.to_string());
    }
    if !all_ok {
        s.note("hard Lefschetz fails; sl2 data unavailable");
        print_report(&report, &args.input.format);
        return Ok(EXIT_INVARIANT);
    }

    let sl2 = lefschetz::build_sl2(&ring).map_err(|e| CmdError::invariant(e.to_string()))?;
    let s = report.section("sl2 action");
    let violations = sl2.violations();
    s.kv("commutator identities", if violations.is_empty() { "verified" } else { "FAILED" }.to_string());
    for v in &violations {
        s.kv("violation", v.clone());
    }

    let decomp =
        lefschetz::primitive_decomposition(&ring).map_err(|e| CmdError::invariant(e.to_string()))?;
    let n = ring.half_dimension();
    let s = report.section("primitive decomposition");
    let rows: Vec<Vec<String>> = (0..=n)
        .map(|j| {
            vec![
                format!("H_o^{}", n - j),
                decomp.primitive_basis(j).len().to_string(),
                (ring.betti(n - j) as i64
                    - if n >= j + 2 { ring.betti(n - j - 2) as i64 } else { 0 })
                .to_string(),
            ]
        })
        .collect();
    s.table(
        vec!["space".into(), "dim".into(), "betti difference".into()],
        rows,
        None,
    );

    let g = lefschetz::derivation_algebra(&ring, &[ring.omega().unwrap().clone()]);
    let s = report.section("derivation algebra fixing omega");
    s.kv_cited("dim g", g.dim().to_string(), CITE_SULLIVAN);
    let commutant = lefschetz::sl2_commutant_check(&g, &sl2);
    s.kv("commutes with sl2", commutant.is_empty().to_string());
    let (inj, kernel) = lefschetz::restriction_injectivity(&g, &decomp);
    s.kv("restricts injectively to primitives", inj.to_string());
    if !inj {
        s.kv("restriction kernel dimension", kernel.len().to_string());
    }
    match g.trace_form_nondegenerate(60) {
        Some(flag) => {
            s.kv("trace form nondegenerate (reductivity evidence)", flag.to_string());
        }
        None => {
            s.note("trace form skipped (dimension above evidence cap)");
        }
    }

    if args.dump_derivations {
        let s = report.section("derivation basis");
        if g.dim() > 40 {
            s.note(format!("dimension {} exceeds the dump cap of 40", g.dim()));
        } else {
            for (i, m) in g.basis.iter().enumerate() {
                let entries: Vec<String> = m
                    .iter()
                    .map(|((t, src), q)| {
                        format!(
                            "{} <- {}: {}",
                            ring.basis().name(*t),
                            ring.basis().name(*src),
                            fmt_q(q)
                        )
                    })
                    .collect();
                s.kv(format!("delta_{i}"), entries.join("; "));
            }
        }
    }

    if !ring.pontryagin().is_empty() {
        let mut fixed = vec![ring.omega().unwrap().clone()];
        fixed.extend(ring.pontryagin().iter().map(|(_, p)| p.clone()));
        let gv = lefschetz::derivation_algebra(&ring, &fixed);
        let s = report.section("derivation algebra fixing omega and pontryagin classes");
        s.kv_cited("dim g_V", gv.dim().to_string(), CITE_SULLIVAN);
    }

    print_report(&report, &args.input.format);
    Ok(if violations.is_empty() && commutant.is_empty() { EXIT_OK } else { EXIT_INVARIANT })
}
