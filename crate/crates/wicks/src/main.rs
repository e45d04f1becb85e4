//! Command-line front end: genus computation, equation solving, Wicks form
//! tables, solution reduction, witness families, and the verification suite.
//!
//! Output is deterministic byte-for-byte for fixed inputs and tables; the
//! JSON mode (`--format json`) carries exactly the same information as the
//! text mode. Exit codes: 0 success, 1 failed computation or failed
//! verification, 2 usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use wicks::normalize::{self, Reduction};
use wicks::solver::{self, Distinctness, GenusCertificate, GenusResult, GenusValue, Solutions};
use wicks::verify::{self, SuiteOptions, VerificationReport};
use wicks::wicks::FormStore;
use wicks::word::{Substitution, Symbol, Word};

#[derive(Parser)]
#[command(name = "wicks", version, about = "genus and quadratic equations in free groups")]
struct Cli {
    /// Output format; json mirrors the text output one-to-one.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Directory of cached Wicks form tables (validated, regenerated on
    /// mismatch). Defaults to in-process enumeration.
    #[arg(long, global = true)]
    table_dir: Option<PathBuf>,
    /// Enumeration node budget; exceeding it aborts table construction
    /// (reported as a skip by `verify paper`).
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Minimal number of commutators and/or squares with product equal to
    /// the given constant word.
    Genus {
        word: String,
        #[command(flatten)]
        kind: GenusKind,
    },
    /// Solve an equation in a free group, listing one representative per
    /// stabilizer class of solutions.
    #[command(subcommand)]
    Solve(SolveCommand),
    /// List the Wicks forms of the given orientability and genus.
    Wicks {
        orientability: Orientability,
        genus: usize,
        /// Only forms of maximal length.
        #[arg(long)]
        maximal: bool,
    },
    /// Rewrite a solution of a quadratic equation into a cancellation-free
    /// one, printing every move of the reduction.
    ReduceSolution {
        /// Quadratic word in variables, e.g. "x^-1 y^-1 x y".
        form: String,
        /// Variable images, e.g. x="a b" y="b^-1 a".
        #[arg(required = true)]
        assignments: Vec<String>,
    },
    /// Run the verification suite against the published results.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Print a member of one of the sharp witness families.
    Witness {
        #[arg(value_parser = ["u1", "u2"])]
        family: String,
        n: usize,
    },
}

#[derive(Args)]
#[group(multiple = false)]
struct GenusKind {
    /// Only the minimal number of commutators.
    #[arg(long)]
    orientable: bool,
    /// Only the minimal number of squares.
    #[arg(long)]
    nonorientable: bool,
    /// Both counts (the default).
    #[arg(long)]
    both: bool,
}

#[derive(Subcommand)]
enum SolveCommand {
    /// Classes of solutions of [x1,y1]...[xg,yg] = U at the minimal genus.
    Commutators { word: String },
    /// Classes of solutions of x1^2...xg^2 = U at the minimal genus.
    Squares { word: String },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Check every published claim the implementation can reproduce.
    Paper {
        /// Skip the slow maximal genus-two census (reported as skipped).
        #[arg(long)]
        skip_slow: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Orientability {
    Orientable,
    Nonorientable,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let store = match (&cli.table_dir, cli.budget) {
        (Some(dir), Some(b)) => FormStore::with_dir(dir.clone()).with_budget(b),
        (Some(dir), None) => FormStore::with_dir(dir.clone()),
        (None, Some(b)) => FormStore::in_memory().with_budget(b),
        (None, None) => FormStore::in_memory(),
    };
    match run(&cli, &store) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

enum Failure {
    Usage(String),
    Run(String),
}

impl From<wicks::word::WordError> for Failure {
    fn from(e: wicks::word::WordError) -> Failure {
        Failure::Usage(e.to_string())
    }
}

impl From<solver::SolveError> for Failure {
    fn from(e: solver::SolveError) -> Failure {
        Failure::Run(e.to_string())
    }
}

impl From<wicks::wicks::WicksError> for Failure {
    fn from(e: wicks::wicks::WicksError) -> Failure {
        Failure::Run(e.to_string())
    }
}

impl From<normalize::NormalizeError> for Failure {
    fn from(e: normalize::NormalizeError) -> Failure {
        Failure::Run(e.to_string())
    }
}

fn run(cli: &Cli, store: &FormStore) -> Result<ExitCode, Failure> {
    match &cli.command {
        Command::Genus { word, kind } => {
            let u = Word::parse_constant(word)?;
            cmd_genus(&u, kind, cli.format, store)
        }
        Command::Solve(SolveCommand::Commutators { word }) => {
            let u = Word::parse_constant(word)?;
            cmd_solve(&u, true, cli.format, store)
        }
        Command::Solve(SolveCommand::Squares { word }) => {
            let u = Word::parse_constant(word)?;
            cmd_solve(&u, false, cli.format, store)
        }
        Command::Wicks { orientability, genus, maximal } => cmd_wicks(
            matches!(orientability, Orientability::Orientable),
            *genus,
            *maximal,
            cli.format,
            store,
        ),
        Command::ReduceSolution { form, assignments } => {
            cmd_reduce(form, assignments, cli.format)
        }
        Command::Verify(VerifyCommand::Paper { skip_slow }) => {
            cmd_verify(*skip_slow, cli.format, store)
        }
        Command::Witness { family, n } => cmd_witness(family, *n, cli.format),
    }
}

fn genus_value_json(v: &GenusValue) -> Value {
    match v {
        GenusValue::Finite(g) => json!(g),
        GenusValue::Infinite => json!("infinity"),
    }
}

fn certificate_text(cert: &GenusCertificate) -> String {
    match cert {
        GenusCertificate::Trivial => "empty product realizes the trivial word".into(),
        GenusCertificate::Witness(m) => {
            format!("factorization via form {} with {}", m.form, m.assignment)
        }
        GenusCertificate::ExponentSum { symbol, sum } => format!(
            "exponent sum of {} is {sum} != 0, so the word lies outside the commutator subgroup",
            symbol.name()
        ),
        GenusCertificate::OddExponentSum { symbol, sum } => format!(
            "exponent sum of {} is {sum}, odd, so the word is not a product of squares",
            symbol.name()
        ),
        GenusCertificate::SquareBound { commutator_genus } => format!(
            "no product of up to {} squares matches, and commutator genus {commutator_genus} \
             forces exactly {}",
            2 * commutator_genus,
            2 * commutator_genus + 1
        ),
    }
}

fn cmd_genus(
    u: &Word,
    kind: &GenusKind,
    format: Format,
    store: &FormStore,
) -> Result<ExitCode, Failure> {
    let both = kind.both || (!kind.orientable && !kind.nonorientable);
    let mut results: Vec<(&str, &str, GenusResult)> = Vec::new();
    if both || kind.orientable {
        results.push(("orientable", "genus+", solver::genus_plus(u, store)?));
    }
    if both || kind.nonorientable {
        results.push(("nonorientable", "genus-", solver::genus_minus(u, store)?));
    }
    match format {
        Format::Text => {
            println!("word: {u}");
            for (_, label, result) in &results {
                println!("{label} = {}", result.value);
                println!("  certificate: {}", certificate_text(&result.certificate));
            }
        }
        Format::Json => {
            let mut genus = Map::new();
            let mut certificates = Map::new();
            for (key, _, result) in &results {
                genus.insert(key.to_string(), genus_value_json(&result.value));
                certificates.insert(key.to_string(), json!(certificate_text(&result.certificate)));
            }
            print_json(&json!({
                "equation": u.to_string(),
                "genus": genus,
                "classes": [],
                "certificates": certificates,
            }));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn equation_left(orientable: bool, genus: usize) -> String {
    if genus == 0 {
        return "1".into();
    }
    (1..=genus)
        .map(|i| {
            if orientable {
                format!("[x{i},y{i}]")
            } else {
                format!("x{i}^2")
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn ordered_variables(solutions: &Solutions) -> Vec<Symbol> {
    let mut vars = Vec::new();
    for i in 1..=solutions.genus {
        vars.push(normalize::standard_symbol("x", i));
        if solutions.orientable {
            vars.push(normalize::standard_symbol("y", i));
        }
    }
    vars
}

fn distinctness_text(d: Distinctness) -> &'static str {
    match d {
        Distinctness::ResolvedDistinct => "resolved-distinct",
        Distinctness::Unresolved => "unresolved",
    }
}

fn cmd_solve(
    u: &Word,
    orientable: bool,
    format: Format,
    store: &FormStore,
) -> Result<ExitCode, Failure> {
    let solutions = if orientable {
        solver::solve_commutators(u, None, store)?
    } else {
        solver::solve_squares(u, None, store)?
    };
    let genus = if orientable {
        solver::genus_plus(u, store)?
    } else {
        solver::genus_minus(u, store)?
    };
    let equation = format!("{} = {u}", equation_left(orientable, solutions.genus));
    let vars = ordered_variables(&solutions);
    let completeness = if solutions.complete {
        "every stabilizer class is represented"
    } else {
        "witness only; the class list may be incomplete"
    };
    match format {
        Format::Text => {
            println!("equation: {equation}");
            println!(
                "genus = {} ({}), classes = {}, {completeness}",
                solutions.genus,
                if orientable { "orientable" } else { "nonorientable" },
                solutions.classes.len()
            );
            for (i, class) in solutions.classes.iter().enumerate() {
                let images = vars
                    .iter()
                    .map(|v| {
                        let img = class.rep.image_of(v);
                        format!("{} -> {} (length {})", v.name(), img, img.len())
                    })
                    .collect::<Vec<_>>()
                    .join(", ");
                println!("class {}: {images}", i + 1);
                println!("  fingerprint: {}", class.subgroup_fingerprint);
                println!("  distinctness: {}", distinctness_text(class.distinctness));
            }
            println!("certificate: {}", certificate_text(&genus.certificate));
        }
        Format::Json => {
            let classes: Vec<Value> = solutions
                .classes
                .iter()
                .map(|class| {
                    let mut assignments = Map::new();
                    let mut lengths = Map::new();
                    for v in &vars {
                        let img = class.rep.image_of(v);
                        assignments.insert(v.name().to_string(), json!(img.to_string()));
                        lengths.insert(v.name().to_string(), json!(img.len()));
                    }
                    json!({
                        "assignments": assignments,
                        "lengths": lengths,
                        "fingerprint_id": class.subgroup_fingerprint,
                        "distinctness": distinctness_text(class.distinctness),
                    })
                })
                .collect();
            print_json(&json!({
                "equation": equation,
                "genus": solutions.genus,
                "classes": classes,
                "certificates": {
                    "genus": certificate_text(&genus.certificate),
                    "completeness": completeness,
                },
            }));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_wicks(
    orientable: bool,
    genus: usize,
    maximal: bool,
    format: Format,
    store: &FormStore,
) -> Result<ExitCode, Failure> {
    let forms = store.forms(orientable, genus)?;
    let selected: Vec<_> = forms.iter().filter(|f| !maximal || f.maximal).collect();
    match format {
        Format::Text => {
            println!(
                "{} genus {genus}: {} forms{}",
                if orientable { "orientable" } else { "nonorientable" },
                selected.len(),
                if maximal { " (maximal only)" } else { "" }
            );
            for form in &selected {
                let tag = if form.maximal { ", maximal" } else { "" };
                println!("{}  [length {}{tag}]", form.form, form.length);
            }
        }
        Format::Json => {
            let list: Vec<Value> = selected
                .iter()
                .map(|f| {
                    json!({
                        "form": f.form.to_string(),
                        "length": f.length,
                        "maximal": f.maximal,
                    })
                })
                .collect();
            print_json(&json!({
                "orientable": orientable,
                "genus": genus,
                "maximal_only": maximal,
                "count": selected.len(),
                "forms": list,
            }));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_assignments(args: &[String]) -> Result<Substitution, Failure> {
    let mut psi = Substitution::identity();
    for arg in args {
        let (name, image) = arg
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("assignment {arg:?} is not var=word")))?;
        let var = Word::parse_variable(name)?;
        if var.len() != 1 || var.letters()[0].sign != wicks::word::Sign::Plus {
            return Err(Failure::Usage(format!(
                "assignment {arg:?} must name a single uninverted variable"
            )));
        }
        let image = Word::parse_constant(image.trim())?;
        psi = psi.bind(var.letters()[0].symbol.clone(), image);
    }
    Ok(psi)
}

fn substitution_json(s: &Substitution) -> Value {
    let mut map = Map::new();
    for (var, image) in s.pairs() {
        map.insert(var.name().to_string(), json!(image.to_string()));
    }
    Value::Object(map)
}

fn reduction_step_rows(reduction: &Reduction) -> Vec<(String, String, String)> {
    reduction
        .trace
        .steps
        .iter()
        .map(|step| {
            (
                step.kind.to_string(),
                format!("({}, {})", step.measure_before.0, step.measure_before.1),
                format!("({}, {})", step.measure_after.0, step.measure_after.1),
            )
        })
        .collect()
}

fn cmd_reduce(form: &str, assignments: &[String], format: Format) -> Result<ExitCode, Failure> {
    let w = Word::parse_variable(form)?;
    let psi = parse_assignments(assignments)?;
    let u = psi.apply(&w);
    let reduction = normalize::reduce_solution(&w, &psi, &u)?;
    match format {
        Format::Text => {
            println!("word: {w}");
            println!("assignment: {psi}");
            println!("target: {u}");
            let rows = reduction_step_rows(&reduction);
            println!("moves: {}", rows.len());
            for (i, (kind, before, after)) in rows.iter().enumerate() {
                println!("  {}. {kind}: measure {before} -> {after}", i + 1);
            }
            println!("reduced word: {}", reduction.word);
            println!("reduced assignment: {}", reduction.assignment);
            println!("carrier automorphism: {}", reduction.automorphism.forward());
        }
        Format::Json => {
            let steps: Vec<Value> = reduction
                .trace
                .steps
                .iter()
                .map(|step| {
                    json!({
                        "kind": step.kind.to_string(),
                        "measure_before": [step.measure_before.0, step.measure_before.1],
                        "measure_after": [step.measure_after.0, step.measure_after.1],
                    })
                })
                .collect();
            print_json(&json!({
                "equation": format!("{w} = {u}"),
                "assignment": substitution_json(&psi),
                "steps": steps,
                "reduced_word": reduction.word.to_string(),
                "reduced_assignment": substitution_json(&reduction.assignment),
                "carrier_automorphism": substitution_json(reduction.automorphism.forward()),
            }));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn report_json(report: &VerificationReport) -> Value {
    let claims: Vec<Value> = report
        .claims
        .iter()
        .map(|c| {
            let status = match c.status {
                verify::ClaimStatus::Pass => "pass",
                verify::ClaimStatus::Fail => "fail",
                verify::ClaimStatus::Skipped => "skipped",
            };
            json!({
                "id": c.id,
                "title": c.title,
                "status": status,
                "detail": c.detail,
            })
        })
        .collect();
    let (passed, failed, skipped) = report.counts();
    json!({
        "claims": claims,
        "passed": passed,
        "failed": failed,
        "skipped": skipped,
        "all_passed": report.all_passed(),
    })
}

fn cmd_verify(skip_slow: bool, format: Format, store: &FormStore) -> Result<ExitCode, Failure> {
    let report = verify::run_paper_suite(store, &SuiteOptions { skip_slow });
    match format {
        Format::Text => print!("{report}"),
        Format::Json => print_json(&report_json(&report)),
    }
    if report.all_passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn cmd_witness(family: &str, n: usize, format: Format) -> Result<ExitCode, Failure> {
    if n < 1 {
        return Err(Failure::Usage("witness families start at n = 1".into()));
    }
    let word = match family {
        "u1" => verify::witness_u1(n),
        "u2" => verify::witness_u2(n),
        other => return Err(Failure::Usage(format!("unknown family {other:?}"))),
    };
    match format {
        Format::Text => println!("{word}"),
        Format::Json => print_json(&json!({
            "family": family,
            "n": n,
            "word": word.to_string(),
            "length": word.len(),
        })),
    }
    Ok(ExitCode::SUCCESS)
}

fn print_json(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable value"));
}
