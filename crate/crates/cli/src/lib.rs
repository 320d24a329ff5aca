//! The `n3store` command line.
//!
//! ```text
//! n3store materialize    --input data.nt [--profile rdfs] [--rules extra.n3] [--output strict]
//! n3store check          --input data.nt --profile owlp
//! n3store query          --input data.nt --pattern "?x a ?c"
//! n3store profile-report --profile owlp
//! ```
//!
//! Exit codes: 0 success or consistent, 1 inconsistent, 2 syntax error in
//! data or rules, 3 usage error, 4 resource limit exceeded. Payload goes to
//! stdout; summaries and diagnostics go to stderr.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use n3store::engine::{self, EngineError, InferenceResult, Limits, Options, Violation};
use n3store::profiles::{load_profile, profile_report, Profile, ProfileError};
use n3store::syntax::{parse_data_bytes, parse_patterns, serialize_graph, DataOptions, OutputMode};
use n3store::{Graph, Pattern};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INCONSISTENT: i32 = 1;
pub const EXIT_SYNTAX: i32 = 2;
pub const EXIT_USAGE: i32 = 3;
pub const EXIT_LIMIT: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "n3store", version, about = "Deductive RDF graph store")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the sorted closure of the inputs.
    Materialize(RunArgs),
    /// Print whether the inputs are consistent under the profile.
    Check(RunArgs),
    /// Print the bindings of --pattern over the closure.
    Query(RunArgs),
    /// List which OWL vocabulary terms the profile's rules cover.
    ProfileReport(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProfileName {
    None,
    Rdf,
    Rdfs,
    Owlp,
}

impl ProfileName {
    fn as_str(self) -> &'static str {
        match self {
            ProfileName::None => "none",
            ProfileName::Rdf => "rdf",
            ProfileName::Rdfs => "rdfs",
            ProfileName::Owlp => "owlp",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Strict,
    Generalized,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Data file (N-Triples or the Turtle subset); repeatable.
    #[arg(long = "input", value_name = "PATH")]
    inputs: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "rdfs")]
    profile: ProfileName,
    /// Extra rule file appended to the profile; repeatable.
    #[arg(long = "rules", value_name = "PATH")]
    rules: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "strict")]
    output: Output,
    /// Print one derivation per inferred triple to stderr.
    #[arg(long)]
    trace: bool,
    #[arg(long, value_name = "N", default_value_t = Limits::default().max_triples)]
    max_triples: usize,
    #[arg(long, value_name = "N", default_value_t = Limits::default().max_rounds)]
    max_rounds: usize,
    /// Use the rules exactly as printed in the source tables.
    #[arg(long)]
    paper_literal: bool,
    /// Basic graph pattern, e.g. "?x a ?c . ?c rdfs:subClassOf ?d" (query only).
    #[arg(long, value_name = "STR")]
    pattern: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Verb {
    Materialize,
    Check,
    Query,
    ProfileReport,
}

/// A fully validated invocation.
#[derive(Debug)]
struct RunConfig {
    verb: Verb,
    inputs: Vec<PathBuf>,
    profile: &'static str,
    rule_files: Vec<PathBuf>,
    output: OutputMode,
    trace: bool,
    limits: Limits,
    paper_literal: bool,
    pattern: Option<String>,
}

/// Why a run stopped early; each maps to one exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Syntax(String),
    Limit(String),
    Inconsistent(Violation),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<ProfileError> for Failure {
    fn from(e: ProfileError) -> Self {
        match e {
            ProfileError::Parse { .. } => Failure::Syntax(e.to_string()),
            ProfileError::UnknownProfile(_) | ProfileError::Io { .. } => Failure::Usage(e.to_string()),
        }
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::ResourceLimit { .. } => Failure::Limit(e.to_string()),
            EngineError::UnsafeRule { .. } | EngineError::EmptyRule { .. } => Failure::Syntax(e.to_string()),
            EngineError::InconsistentStore | EngineError::EmptyQuery | EngineError::TracingDisabled => {
                Failure::Usage(e.to_string())
            }
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match Cli::try_parse_from(args) {
        Ok(cli) => match RunConfig::from_cli(cli) {
            Ok(config) => config,
            Err(msg) => {
                let _ = writeln!(stderr, "error: {msg}");
                return EXIT_USAGE;
            }
        },
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    run_config(&config, stdout, stderr)
}

/// Runs an already validated configuration.
fn run_config(config: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let outcome = execute(config, stdout, stderr);
    let code = match &outcome {
        Ok(()) => EXIT_OK,
        Err(Failure::Inconsistent(v)) => {
            let _ = write_violation(stderr, v);
            EXIT_INCONSISTENT
        }
        Err(Failure::Syntax(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_SYNTAX
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Limit(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_LIMIT
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    };
    let _ = stdout.flush();
    code
}

impl RunConfig {
    fn from_cli(cli: Cli) -> Result<RunConfig, String> {
        let (verb, args) = match cli.command {
            Command::Materialize(a) => (Verb::Materialize, a),
            Command::Check(a) => (Verb::Check, a),
            Command::Query(a) => (Verb::Query, a),
            Command::ProfileReport(a) => (Verb::ProfileReport, a),
        };
        match (verb, &args.pattern) {
            (Verb::Query, None) => return Err("query requires --pattern".into()),
            (Verb::Query, Some(_)) | (_, None) => {}
            (_, Some(_)) => return Err("--pattern is only accepted by query".into()),
        }
        Ok(RunConfig {
            verb,
            inputs: args.inputs,
            profile: args.profile.as_str(),
            rule_files: args.rules,
            output: match args.output {
                Output::Strict => OutputMode::Strict,
                Output::Generalized => OutputMode::Generalized,
            },
            trace: args.trace,
            limits: Limits {
                max_triples: args.max_triples,
                max_rounds: args.max_rounds,
            },
            paper_literal: args.paper_literal,
            pattern: args.pattern,
        })
    }
}

fn execute(config: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    let profile = load_profile(config.profile, &config.rule_files, config.paper_literal)?;
    if config.verb == Verb::ProfileReport {
        write!(stdout, "{}", profile_report(&profile))?;
        return Ok(());
    }
    // parse the pattern before doing any inference work
    let patterns = match &config.pattern {
        Some(text) => {
            let ps = parse_patterns(text).map_err(|e| Failure::Usage(format!("--pattern:{e}")))?;
            if ps.is_empty() {
                return Err(Failure::Usage("--pattern is empty".into()));
            }
            Some(ps)
        }
        None => None,
    };
    let input = load_inputs(&config.inputs)?;
    let result = materialize(config, &input, &profile, stderr)?;
    if let Some(v) = result.violation {
        if config.verb == Verb::Check {
            writeln!(stdout, "inconsistent\t{}", v.rule)?;
        }
        return Err(Failure::Inconsistent(v));
    }

    match config.verb {
        Verb::Materialize => {
            stdout.write_all(serialize_graph(&result.closure, config.output).as_bytes())?;
        }
        Verb::Check => {
            writeln!(stdout, "consistent")?;
        }
        Verb::Query => {
            let ps = patterns.expect("validated");
            write_rows(stdout, &result, &ps)?;
        }
        Verb::ProfileReport => unreachable!("handled above"),
    }
    Ok(())
}

fn load_inputs(paths: &[PathBuf]) -> Result<Graph, Failure> {
    let mut graph = Graph::new();
    for (i, path) in paths.iter().enumerate() {
        let bytes = std::fs::read(path)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
        let options = DataOptions::source(&format!("f{i}"));
        let g = parse_data_bytes(&bytes, &options)
            .map_err(|e| Failure::Syntax(format!("{}:{e}", path.display())))?;
        graph.extend_from(&g);
    }
    Ok(graph)
}

fn materialize(
    config: &RunConfig,
    input: &Graph,
    profile: &Profile,
    stderr: &mut dyn Write,
) -> Result<InferenceResult, Failure> {
    let options = Options {
        limits: config.limits,
        trace: config.trace,
        ..Options::default()
    };
    let result = engine::materialize(input, profile, &options)?;
    writeln!(
        stderr,
        "input: {} triples, inferred: {} triples, rounds: {}",
        input.len(),
        result.inferred_count,
        result.iterations
    )?;
    if !result.consistent {
        return Ok(result);
    }
    if config.trace {
        for t in result.inferred(input).iter() {
            if let Some(step) = engine::explain(&result, t)?.pop() {
                writeln!(stderr, "{step}")?;
            }
        }
    }
    Ok(result)
}

/// One line per binding: values of the pattern's variables in order of first
/// occurrence, tab-separated, lines sorted.
fn write_rows(out: &mut dyn Write, result: &InferenceResult, ps: &[Pattern]) -> Result<(), Failure> {
    let mut vars: Vec<&str> = Vec::new();
    for p in ps {
        for v in p.variables() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
    }
    let rows: BTreeSet<String> = engine::query(result, ps)?
        .iter()
        .map(|b| {
            vars.iter()
                .map(|v| b.get(v).expect("every pattern variable is bound").to_string())
                .collect::<Vec<_>>()
                .join("\t")
        })
        .collect();
    for row in rows {
        writeln!(out, "{row}")?;
    }
    Ok(())
}

fn write_violation(out: &mut dyn Write, v: &Violation) -> io::Result<()> {
    writeln!(out, "inconsistent: {v}")?;
    for p in &v.premises {
        writeln!(out, "    {p}")?;
    }
    Ok(())
}
