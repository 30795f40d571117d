use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, ValueEnum};
use dergrade_core::grading::{decompose, is_stem, GradedDecomposition, GradingSetup};
use dergrade_core::verify::{Budget, Suite, VerifyReport};
use dergrade_core::{AlgebraElement, Arrow, Derivation, Error, Execution, Group, QuotientSpec};
use serde_json::{json, Value};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Command {
    Decompose,
    Bracket,
    Apply,
    Character,
    Verify,
    Info,
}

/// Derivations of group algebras and their grading by an abelian quotient.
#[derive(Parser, Debug)]
#[command(name = "dergrade", version)]
struct Job {
    #[arg(value_enum)]
    command: Command,
    /// heisenberg, zn:<n> or perm:<name> (s<n>, a<n>, d<n>, c<n>)
    #[arg(long)]
    group: String,
    /// "derived" or a path to a quotient spec JSON file
    #[arg(long, default_value = "derived")]
    quotient: String,
    /// Input JSON file, or - for stdin
    #[arg(long = "in")]
    input: Option<String>,
    /// Output file, or - for stdout
    #[arg(long, default_value = "-")]
    out: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    samples: Option<u64>,
    #[arg(long = "word-len", value_parser = clap::value_parser!(u64).range(1..))]
    word_len: Option<u64>,
}

enum Failure {
    Spec(String),
    Setup(String),
    Property(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Spec(_) => 2,
            Failure::Setup(_) => 3,
            Failure::Property(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Spec(m) | Failure::Setup(m) | Failure::Property(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::TrivialGrading(_) | Error::NonAbelianQuotient { .. } | Error::NotNormal(_) => {
                Failure::Setup(format!("setup rejected: {e}"))
            }
            _ => Failure::Spec(e.to_string()),
        }
    }
}

/// What a command produces: the primary output and a report for stderr.
struct Output {
    body: String,
    summary: Option<String>,
    failed: bool,
}

fn main() -> ExitCode {
    let job = Job::parse();
    match run(&job) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("dergrade: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(job: &Job) -> Result<(), Failure> {
    let group = Arc::new(Group::from_selector(&job.group)?);
    let output = match job.command {
        Command::Decompose => cmd_decompose(job, &group)?,
        Command::Bracket => cmd_bracket(job, &group)?,
        Command::Apply => cmd_apply(job, &group)?,
        Command::Character => cmd_character(job, &group)?,
        Command::Verify => cmd_verify(job, &group)?,
        Command::Info => cmd_info(job, &group)?,
    };
    write_atomically(&job.out, &output.body)?;
    if let Some(summary) = &output.summary {
        eprint!("{summary}");
    }
    if output.failed {
        return Err(Failure::Property("property checks failed".into()));
    }
    Ok(())
}

fn read_input(job: &Job) -> Result<Value, Failure> {
    let path = job
        .input
        .as_deref()
        .ok_or_else(|| Failure::Spec(format!("{:?} needs --in <file|->", job.command)))?;
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Spec(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Spec(format!("{path}: {e}")))?
    };
    let source = if path == "-" { "stdin" } else { path };
    serde_json::from_str(&text).map_err(|e| Failure::Spec(format!("{source}: {e}")))
}

fn setup(job: &Job, group: &Arc<Group>) -> Result<GradingSetup, Failure> {
    let quotient = if job.quotient == "derived" {
        QuotientSpec::derived(group)?
    } else {
        let text = std::fs::read_to_string(&job.quotient)
            .map_err(|e| Failure::Spec(format!("{}: {e}", job.quotient)))?;
        let value: Value = serde_json::from_str(&text)
            .map_err(|e| Failure::Spec(format!("{}: {e}", job.quotient)))?;
        QuotientSpec::from_json(&value, group)?
    };
    Ok(GradingSetup::new(quotient)?)
}

fn field<'a>(value: &'a Value, name: &str) -> Result<&'a Value, Failure> {
    value
        .get(name)
        .ok_or_else(|| Failure::Spec(format!("input is missing {name:?}")))
}

/// Indented JSON with arrays that hold no objects kept on one line.
fn pretty(value: &Value) -> String {
    let mut s = String::new();
    render(value, 0, &mut s);
    s.push('\n');
    s
}

fn render(value: &Value, depth: usize, out: &mut String) {
    let pad = |d: usize| "  ".repeat(d);
    match value {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, v)) in map.iter().enumerate() {
                let _ = write!(out, "{}{}: ", pad(depth + 1), Value::String(k.clone()));
                render(v, depth + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{}}}", pad(depth));
        }
        Value::Array(items) if items.iter().any(|v| v.is_object()) => {
            out.push_str("[\n");
            for (i, v) in items.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                render(v, depth + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{}]", pad(depth));
        }
        other => out.push_str(&other.to_string()),
    }
}

fn cmd_decompose(job: &Job, group: &Arc<Group>) -> Result<Output, Failure> {
    let setup = setup(job, group)?;
    let input = read_input(job)?;
    let d = Derivation::from_spec_json(&input, group)?;
    let dec = decompose(&d, &setup);
    Ok(Output {
        body: pretty(&dec.to_json()),
        summary: Some(summary_table(&dec)),
        failed: false,
    })
}

fn summary_table(dec: &GradedDecomposition) -> String {
    let mut out = format!("{:<16} {:>6}\n", "key", "terms");
    for (key, d) in &dec.components {
        let terms: usize = d.images().iter().map(AlgebraElement::len).sum();
        let _ = writeln!(out, "{:<16} {:>6}", key.to_string(), terms);
    }
    let _ = writeln!(out, "{} component(s)", dec.components.len());
    out
}

fn cmd_bracket(job: &Job, group: &Arc<Group>) -> Result<Output, Failure> {
    let input = read_input(job)?;
    let pair = input.as_array().filter(|a| a.len() == 2).ok_or_else(|| {
        Failure::Spec("bracket expects a JSON array of two derivation specs".into())
    })?;
    let d = Derivation::from_spec_json(&pair[0], group)?;
    let p = Derivation::from_spec_json(&pair[1], group)?;
    Ok(Output {
        body: pretty(&d.bracket(&p)?.to_spec_json()),
        summary: None,
        failed: false,
    })
}

fn cmd_apply(job: &Job, group: &Arc<Group>) -> Result<Output, Failure> {
    let input = read_input(job)?;
    let d = Derivation::from_spec_json(field(&input, "derivation")?, group)?;
    let x = AlgebraElement::from_json(field(&input, "element")?, group)?;
    Ok(Output {
        body: pretty(&d.try_apply(&x)?.to_json()),
        summary: None,
        failed: false,
    })
}

fn cmd_character(job: &Job, group: &Arc<Group>) -> Result<Output, Failure> {
    let input = read_input(job)?;
    let d = Derivation::from_spec_json(field(&input, "derivation")?, group)?;
    let arrow = Arrow::from_json(field(&input, "arrow")?, group)?;
    let value = d.character(&arrow);
    let body = json!({
        "coefficient": serde_json::to_value(&value).expect("coefficients serialize"),
        "value": value.to_string(),
    });
    Ok(Output {
        body: pretty(&body),
        summary: None,
        failed: false,
    })
}

fn cmd_verify(job: &Job, group: &Arc<Group>) -> Result<Output, Failure> {
    let setup = setup(job, group)?;
    let fixtures = match &job.input {
        None => Vec::new(),
        Some(_) => match read_input(job)? {
            Value::Array(items) => items
                .iter()
                .map(|v| Derivation::from_spec_json(v, group))
                .collect::<Result<Vec<_>, _>>()?,
            single => vec![Derivation::from_spec_json(&single, group)?],
        },
    };
    let mut budget = Budget::default();
    if let Some(n) = job.samples {
        budget.samples = n as usize;
    }
    if let Some(l) = job.word_len {
        budget.word_len = l as usize;
    }
    let report = Suite {
        setup: &setup,
        fixtures: &fixtures,
        budget,
        seed: job.seed,
        exec: Execution::default(),
    }
    .standard();
    let body = pretty(&serde_json::to_value(&report).expect("reports serialize"));
    Ok(Output {
        body,
        summary: Some(verify_table(&report)),
        failed: !report.all_passed(),
    })
}

fn verify_table(report: &VerifyReport) -> String {
    let mut out = format!("{:<22} {:>8} {:>8}\n", "property", "passed", "failed");
    for p in &report.properties {
        let _ = writeln!(out, "{:<22} {:>8} {:>8}", p.name, p.passed, p.failed);
        if let Some(f) = &p.first_failure {
            let _ = writeln!(out, "  first failure: {f}");
        }
    }
    out
}

fn cmd_info(job: &Job, group: &Arc<Group>) -> Result<Output, Failure> {
    let mut out = String::new();
    let _ = writeln!(out, "group: {}", group.selector());
    if let Some(order) = group.order() {
        let _ = writeln!(out, "order: {order}");
    }
    let _ = writeln!(out, "generators:");
    for (name, g) in group.generator_names().zip(group.generators()) {
        let _ = writeln!(out, "  {name} = {g}");
    }
    let _ = writeln!(out, "center: {}", group.describe_center());
    let _ = writeln!(out, "commutator subgroup: {}", group.describe_derived());
    let verdict = if is_stem(group) {
        "yes, Z(G) <= G'"
    } else {
        "no, Z(G) is not contained in G'"
    };
    let _ = writeln!(out, "stem: {verdict}");
    match setup(job, group) {
        Ok(s) => {
            let _ = writeln!(out, "quotient: {}", s.quotient().describe());
        }
        Err(f) => {
            let _ = writeln!(out, "quotient: {}", f.message());
        }
    }
    Ok(Output {
        body: out,
        summary: None,
        failed: false,
    })
}

/// Writes to a temporary file beside `path` and renames it into place.
fn write_atomically(path: &str, body: &str) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Spec(format!("{path}: {e}"));
    if path == "-" {
        let mut stdout = std::io::stdout().lock();
        return stdout
            .write_all(body.as_bytes())
            .and_then(|_| stdout.flush())
            .map_err(io);
    }
    let dir = Path::new(path)
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(body.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}
