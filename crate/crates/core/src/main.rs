use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use schematic_answers::driver::{run, EmitMode, RunConfig};
use schematic_answers::ordering::CalculusMode;

/// Deductive query answering over relational data: saturation over database
/// abstractions, incremental rewriting of schematic answers into SQL, and
/// built-in execution.
#[derive(Parser)]
#[command(name = "sqa", version, about)]
struct Args {
    /// Knowledge base (.fol, clausal form)
    #[arg(long)]
    kb: PathBuf,
    /// Schema mapping (.map)
    #[arg(long)]
    schema: PathBuf,
    /// Fact data (.tab)
    #[arg(long)]
    data: PathBuf,
    /// Query file (`?- conjunction [answer V, ...].`)
    #[arg(long)]
    query: PathBuf,
    /// Document registry for semantic indexing
    #[arg(long)]
    docs: Option<PathBuf>,
    /// Calculus: unordered | ordered | ordered-selection
    #[arg(long, default_value = "unordered")]
    calculus: String,
    /// Disable the db-literal constraint check
    #[arg(long)]
    no_prune_db: bool,
    /// Disable the answer-literal unifiability check
    #[arg(long)]
    no_prune_answers: bool,
    /// Disable forward/backward subsumption
    #[arg(long)]
    no_subsumption: bool,
    /// Derived-clause budget
    #[arg(long, value_name = "N", default_value_t = 100_000)]
    max_derived: usize,
    /// Wall-clock budget in seconds
    #[arg(long, value_name = "S", default_value_t = 60.0)]
    timeout: f64,
    /// Stop after this many concrete answers
    #[arg(long, value_name = "N")]
    max_answers: Option<usize>,
    /// Output: sql | answers | both | docs
    #[arg(long, value_name = "MODE", default_value = "both")]
    emit: String,
    /// Cross-check answers against the ground oracle
    #[arg(long)]
    oracle_check: bool,
    /// Term-depth bound for the oracle
    #[arg(long, value_name = "N", default_value_t = 4)]
    oracle_depth: usize,
}

fn main() -> ExitCode {
    let level = match std::env::var("SA_LOG").as_deref() {
        Ok("trace") => "trace",
        Ok("info") => "info",
        Ok("quiet") | Err(_) => "error",
        Ok(other) => {
            eprintln!("SA_LOG: unknown level `{other}`, using quiet");
            "error"
        }
    };
    env_logger::Builder::new().parse_filters(level).init();

    let args = Args::parse();
    let calculus = match args.calculus.as_str() {
        "unordered" => CalculusMode::Unordered,
        "ordered" => CalculusMode::Ordered,
        "ordered-selection" => CalculusMode::OrderedSelection,
        other => {
            eprintln!("error: unknown calculus `{other}`");
            return ExitCode::from(1);
        }
    };
    let emit = match args.emit.as_str() {
        "sql" => EmitMode::Sql,
        "answers" => EmitMode::Answers,
        "both" => EmitMode::Both,
        "docs" => EmitMode::Docs,
        other => {
            eprintln!("error: unknown emit mode `{other}`");
            return ExitCode::from(1);
        }
    };
    let cfg = RunConfig {
        kb: args.kb,
        schema: args.schema,
        data: args.data,
        query: args.query,
        docs: args.docs,
        calculus,
        prune_db: !args.no_prune_db,
        prune_answers: !args.no_prune_answers,
        subsumption: !args.no_subsumption,
        max_derived: args.max_derived,
        timeout_secs: args.timeout,
        max_answers: args.max_answers,
        emit,
        oracle_check: args.oracle_check,
        oracle_depth: args.oracle_depth,
    };
    let mut out = std::io::stdout();
    ExitCode::from(run(&cfg, &mut out) as u8)
}
