//! `chain-oasis`: ingest chain data into a graph file, then validate, query
//! or re-export it.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chain_oasis::discovery::{compile_criteria, execute, Criteria};
use chain_oasis::ingest::rpc::RPC_URL_ENV;
use chain_oasis::ingest::Address;
use chain_oasis::mapper::Summary;
use chain_oasis::ontology::{parse, serialize_with_namespace, Class, Format, Graph, Individual, Namespace};
use chain_oasis::pipeline::{export, ingest, Source};
use chain_oasis::validate::{validate, Report};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

const EXIT_VIOLATIONS: u8 = 1;
const EXIT_INPUT: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "chain-oasis", version, about = "Map Ethereum chain data into an agent/behavior knowledge graph")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Ntriples,
    Turtle,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Ntriples => Format::NTriples,
            FormatArg::Turtle => Format::Turtle,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Read blocks from a fixture or an RPC node, map them and write the graph.
    Ingest(IngestArgs),
    /// Check a graph file against the conditionals and ownership invariants.
    Validate(ValidateArgs),
    /// Run a discovery query against a graph file.
    Query(QueryArgs),
    /// Re-serialize a graph file.
    Export(ExportArgs),
}

#[derive(Debug, Args)]
struct IngestArgs {
    /// JSON-lines fixture to read instead of an RPC node.
    #[arg(long, conflicts_with_all = ["rpc_url", "from_block", "to_block"])]
    fixture: Option<PathBuf>,
    /// JSON-RPC endpoint; falls back to the CHAIN_OASIS_RPC_URL environment variable.
    #[arg(long)]
    rpc_url: Option<String>,
    #[arg(long)]
    from_block: Option<u64>,
    #[arg(long)]
    to_block: Option<u64>,
    /// Graph file to write.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "ntriples")]
    format: FormatArg,
    /// Prefix for instance IRIs.
    #[arg(long)]
    namespace: Option<String>,
    /// Validate the mapped graph and exit 1 without writing it on any violation.
    #[arg(long)]
    fail_fast: bool,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    /// Graph file; `.ttl` is read as Turtle, anything else as N-Triples.
    graph: PathBuf,
    /// Exit 1 when any violation is found.
    #[arg(long)]
    fail_fast: bool,
}

#[derive(Debug, Args, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct CriteriaArgs {
    /// Agent class, by local name or full IRI.
    #[arg(long)]
    agent_category: Option<String>,
    /// Action individual such as `mint` or `transfer`.
    #[arg(long)]
    action: Option<String>,
    /// Token class, by local name or full IRI.
    #[arg(long)]
    token_class: Option<String>,
    /// Current owner address.
    #[arg(long)]
    owner: Option<String>,
}

#[derive(Debug, Args)]
struct QueryArgs {
    graph: PathBuf,
    #[command(flatten)]
    criteria: CriteriaArgs,
    /// JSON file with the same fields as the criteria flags, used instead of them.
    #[arg(long, conflicts_with_all = ["agent_category", "action", "token_class", "owner"])]
    plan: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ExportArgs {
    graph: PathBuf,
    #[arg(long, value_enum, default_value = "turtle")]
    format: FormatArg,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Instance prefix to abbreviate in Turtle output.
    #[arg(long)]
    namespace: Option<String>,
}

/// A failed command and the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

fn input_error(message: impl std::fmt::Display) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.to_string(),
    }
}

#[derive(Serialize)]
struct IngestReport<'a> {
    out: String,
    format: Format,
    triples: usize,
    summary: &'a Summary,
}

fn namespace(arg: Option<&str>) -> Result<Namespace, Failure> {
    match arg {
        Some(prefix) => Namespace::new(prefix).map_err(input_error),
        None => Ok(Namespace::default()),
    }
}

fn source(args: &IngestArgs) -> Result<Source, Failure> {
    if let Some(path) = &args.fixture {
        return Ok(Source::Fixture(path.clone()));
    }
    let url = args
        .rpc_url
        .clone()
        .or_else(|| std::env::var(RPC_URL_ENV).ok().filter(|u| !u.is_empty()))
        .ok_or_else(|| input_error(format!("no source: pass --fixture, or --rpc-url or {RPC_URL_ENV}")))?;
    match (args.from_block, args.to_block) {
        (Some(from_block), Some(to_block)) if from_block <= to_block => Ok(Source::Rpc {
            url,
            from_block,
            to_block,
        }),
        (Some(from), Some(to)) => Err(input_error(format!("empty block range {from}..={to}"))),
        _ => Err(input_error("an RPC source needs --from-block and --to-block")),
    }
}

fn write_output(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| input_error(format!("cannot write {}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}

fn cmd_ingest(args: IngestArgs) -> Result<(), Failure> {
    let ns = namespace(args.namespace.as_deref())?;
    let ctx = ingest(&source(&args)?, ns).map_err(input_error)?;
    if args.fail_fast {
        let report = validate(&ctx.graph);
        if !report.is_clean() {
            println!("{}", to_json(&report));
            return Err(Failure {
                code: EXIT_VIOLATIONS,
                message: format!("{} violations", report.violations.len()),
            });
        }
    }
    let format = Format::from(args.format);
    write_output(&args.out, &export(&ctx, format))?;
    let report = IngestReport {
        out: args.out.display().to_string(),
        format,
        triples: ctx.graph.len(),
        summary: ctx.summary(),
    };
    println!("{}", to_json(&report));
    Ok(())
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    let bytes = fs::read(path).map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?;
    let format = match path.extension().and_then(|e| e.to_str()) {
        Some("ttl") => Format::Turtle,
        _ => Format::NTriples,
    };
    parse(&bytes, format).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn cmd_validate(args: ValidateArgs) -> Result<(), Failure> {
    let graph = read_graph(&args.graph)?;
    let report: Report = validate(&graph);
    println!("{}", to_json(&report));
    if args.fail_fast && !report.is_clean() {
        return Err(Failure {
            code: EXIT_VIOLATIONS,
            message: format!("{} violations", report.violations.len()),
        });
    }
    Ok(())
}

fn criteria(args: &CriteriaArgs) -> Result<Criteria, Failure> {
    let class = |flag: &str, name: &Option<String>| {
        name.as_deref()
            .map(|n| Class::lookup(n).ok_or_else(|| input_error(format!("--{flag}: unknown class `{n}`"))))
            .transpose()
    };
    let action = args
        .action
        .as_deref()
        .map(|n| {
            Individual::lookup(n)
                .filter(|i| i.class() == Some(Class::Action))
                .ok_or_else(|| input_error(format!("--action: unknown action `{n}`")))
        })
        .transpose()?;
    let owner = args
        .owner
        .as_deref()
        .map(|a| a.parse::<Address>().map_err(|e| input_error(format!("--owner: {e}"))))
        .transpose()?;
    Ok(Criteria {
        agent_category: class("agent-category", &args.agent_category)?,
        action,
        token_class: class("token-class", &args.token_class)?,
        owner,
        reference_constraints: Vec::new(),
    })
}

fn cmd_query(args: QueryArgs) -> Result<(), Failure> {
    let criteria_args = match &args.plan {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))?
        }
        None => args.criteria,
    };
    let criteria = criteria(&criteria_args)?;
    let plan = compile_criteria(&criteria).map_err(input_error)?;
    let graph = read_graph(&args.graph)?;
    let rows = execute(&plan, &graph);
    print!("{}", plan.to_sparql());
    println!();
    println!("{}", plan.projection.join("\t"));
    for row in rows {
        let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
        println!("{}", cells.join("\t"));
    }
    Ok(())
}

fn cmd_export(args: ExportArgs) -> Result<(), Failure> {
    let ns = namespace(args.namespace.as_deref())?;
    let graph = read_graph(&args.graph)?;
    let bytes = serialize_with_namespace(&graph, args.format.into(), ns.as_str());
    match &args.out {
        Some(path) => write_output(path, &bytes),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(&bytes)
                .map_err(|e| input_error(format!("cannot write output: {e}")))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Ingest(args) => cmd_ingest(args),
        Command::Validate(args) => cmd_validate(args),
        Command::Query(args) => cmd_query(args),
        Command::Export(args) => cmd_export(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
