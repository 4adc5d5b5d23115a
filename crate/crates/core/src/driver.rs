//! End-to-end pipeline: load inputs, saturate on a producer thread, and
//! stream each schematic answer through the compiler to SQL text and
//! concrete answers on the consumer side.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::sync::mpsc;
use std::sync::Arc;
use std::time::Duration;

use indexmap::IndexSet;

use crate::compile::{
    compile, db_inconsistency_witnessed, instantiate_query, render_ans_term, AnsTerm, Compiled,
    ConcreteAnswer,
};
use crate::docindex::DocumentIndex;
use crate::oracle::ground_answers;
use crate::ordering::CalculusMode;
use crate::parse::{load_facts, parse_docs, parse_kb, parse_query, parse_schema, DeductiveQuery};
use crate::saturate::{
    AbstractionInput, Outcome, Problem, SaturationConfig, Saturation, SchematicAnswer, Status,
};
use crate::store::{build_abstraction, FactStore, Schema};
use crate::symbols::SymbolTable;
use crate::term::Term;
use crate::Result;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EmitMode {
    Sql,
    Answers,
    Both,
    Docs,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub kb: PathBuf,
    pub schema: PathBuf,
    pub data: PathBuf,
    pub query: PathBuf,
    pub docs: Option<PathBuf>,
    pub calculus: CalculusMode,
    pub prune_db: bool,
    pub prune_answers: bool,
    pub subsumption: bool,
    pub max_derived: usize,
    pub timeout_secs: f64,
    pub max_answers: Option<usize>,
    pub emit: EmitMode,
    pub oracle_check: bool,
    pub oracle_depth: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            kb: PathBuf::new(),
            schema: PathBuf::new(),
            data: PathBuf::new(),
            query: PathBuf::new(),
            docs: None,
            calculus: CalculusMode::Unordered,
            prune_db: true,
            prune_answers: true,
            subsumption: true,
            max_derived: 100_000,
            timeout_secs: 60.0,
            max_answers: None,
            emit: EmitMode::Both,
            oracle_check: false,
            oracle_depth: 4,
        }
    }
}

/// Everything parsed and resolved, ready to saturate.
pub struct Session {
    pub st: Arc<SymbolTable>,
    pub schema: Schema,
    pub store: Arc<FactStore>,
    pub kb: Vec<crate::term::Clause>,
    pub query: DeductiveQuery,
    pub abstractions: Vec<AbstractionInput>,
    /// Per abstraction input, the owning document id (if any).
    pub leaf_docs: Vec<Option<String>>,
    pub index: Option<DocumentIndex>,
}

impl Session {
    pub fn from_texts(
        kb: &str,
        schema: &str,
        data: &str,
        query: &str,
        docs: Option<&str>,
    ) -> Result<Session> {
        let st = Arc::new(SymbolTable::new());
        let schema = parse_schema(schema, &st)?;
        let kb = parse_kb(kb, &st)?;
        let store = Arc::new(load_facts(&schema, data, &st)?);
        let query = parse_query(query, &st)?;
        let mut abstractions: Vec<AbstractionInput> = build_abstraction(&schema, &st)
            .into_iter()
            .map(|clause| AbstractionInput {
                clause,
                prefs: vec![],
            })
            .collect();
        let mut leaf_docs: Vec<Option<String>> = vec![None; abstractions.len()];
        let mut index = None;
        if let Some(text) = docs {
            let mut ix = DocumentIndex::new();
            for doc in parse_docs(text, &st)? {
                for (clause, prefs) in &doc.clauses {
                    abstractions.push(AbstractionInput {
                        clause: clause.clone(),
                        prefs: prefs.clone(),
                    });
                    leaf_docs.push(Some(doc.id.clone()));
                }
                ix.register_parsed(doc)?;
            }
            index = Some(ix);
        }
        Ok(Session {
            st,
            schema,
            store,
            kb,
            query,
            abstractions,
            leaf_docs,
            index,
        })
    }

    pub fn problem(&self) -> Problem {
        Problem {
            kb: self.kb.clone(),
            abstractions: self.abstractions.clone(),
            goal: self.query.goal.clone(),
        }
    }

    pub fn distinguished_names(&self) -> Vec<String> {
        self.query
            .distinguished
            .iter()
            .map(|(n, _)| n.clone())
            .collect()
    }
}

fn saturation_config(cfg: &RunConfig, schema: &Schema) -> SaturationConfig {
    SaturationConfig {
        calculus: cfg.calculus,
        prune_db: cfg.prune_db,
        prune_answers: cfg.prune_answers,
        subsumption: cfg.subsumption,
        max_derived: cfg.max_derived,
        timeout: Duration::from_secs_f64(cfg.timeout_secs),
        backed_preds: Some(schema.preds().collect()),
        ..SaturationConfig::default()
    }
}

enum Msg {
    Answer(SchematicAnswer),
    Done(Outcome),
}

/// Exit codes: 0 clean, 1 parse/config error, 2 inconsistency (KB alone or
/// DB with KB), 3 oracle mismatch, 4 budget exhausted.
pub fn run(cfg: &RunConfig, out: &mut dyn Write) -> i32 {
    match try_run(cfg, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            1
        }
    }
}

fn read(path: &PathBuf) -> Result<String> {
    Ok(fs::read_to_string(path)?)
}

fn try_run(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    if cfg.emit == EmitMode::Docs && cfg.docs.is_none() {
        return Err(crate::Error::Invalid(
            "--emit docs requires --docs <registry>".into(),
        ));
    }
    let docs_text = match &cfg.docs {
        Some(p) => Some(read(p)?),
        None => None,
    };
    let session = Session::from_texts(
        &read(&cfg.kb)?,
        &read(&cfg.schema)?,
        &read(&cfg.data)?,
        &read(&cfg.query)?,
        docs_text.as_deref(),
    )?;
    run_session(&session, cfg, out)
}

/// Drive one query session, writing the streamed report to `out`.
pub fn run_session(session: &Session, cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let problem = session.problem();
    let sat_cfg = saturation_config(cfg, &session.schema);
    let st = session.st.clone();
    let store = session.store.clone();
    let (tx, rx) = mpsc::channel::<Msg>();
    let producer = {
        let st = st.clone();
        let store = store.clone();
        std::thread::spawn(move || {
            let mut sat = Saturation::new(st, Some(store), &problem, sat_cfg);
            let outcome = sat.run(|sa| tx.send(Msg::Answer(sa)).is_ok());
            let _ = tx.send(Msg::Done(outcome));
        })
    };

    let names = session.distinguished_names();
    let mut seen: IndexSet<ConcreteAnswer> = IndexSet::new();
    let mut n = 0usize;
    let mut kb_refutation = false;
    let mut db_inconsistency = false;
    let mut outcome: Option<Outcome> = None;
    let mut stop = false;
    while let Ok(msg) = rx.recv() {
        let sa = match msg {
            Msg::Answer(sa) => sa,
            Msg::Done(o) => {
                outcome = Some(o);
                break;
            }
        };
        n += 1;
        writeln!(out, "-- answer {n}")?;
        if cfg.emit == EmitMode::Docs {
            let docs = relevant_docs(session, &sa);
            writeln!(out, "docs: {}", docs.join(", "))?;
            continue;
        }
        match compile(&sa.clause, &session.schema, &st, &names) {
            Compiled::KbRefutation => {
                writeln!(out, "KB is inconsistent: refutation found")?;
                kb_refutation = true;
                stop = true;
            }
            Compiled::KbDbInconsistency { db } => {
                if db_inconsistency_witnessed(&db, &store) {
                    writeln!(out, "DB is inconsistent with KB")?;
                    db_inconsistency = true;
                    stop = true;
                } else {
                    writeln!(out, "-- constraint unsatisfiable, no instances")?;
                }
            }
            Compiled::NoInstances => {
                writeln!(out, "-- answer literals not unifiable, no instances")?;
            }
            Compiled::Unsupported => {
                writeln!(out, "-- not expressible relationally, skipped")?;
            }
            Compiled::PureAnswer(ans) => {
                if seen.insert(ans.clone()) {
                    print_answer(out, &names, &ans, &st)?;
                }
            }
            Compiled::Query(cq) => {
                if matches!(cfg.emit, EmitMode::Sql | EmitMode::Both) {
                    writeln!(out, "{}", cq.sql)?;
                }
                let print = matches!(cfg.emit, EmitMode::Answers | EmitMode::Both);
                if print || cfg.oracle_check {
                    for ans in instantiate_query(&cq, &store, &st) {
                        if seen.insert(ans.clone()) {
                            if print {
                                print_answer(out, &names, &ans, &st)?;
                            }
                            if let Some(max) = cfg.max_answers {
                                if seen.len() >= max {
                                    stop = true;
                                    break;
                                }
                            }
                        }
                    }
                }
            }
        }
        if stop {
            break;
        }
    }
    drop(rx);
    let _ = producer.join();
    let outcome = outcome.unwrap_or(Outcome {
        status: Status::Cancelled,
        counters: Default::default(),
    });
    let status = match outcome.status {
        Status::Saturated => "saturated",
        Status::MaxDerived | Status::Timeout => "budget-exhausted",
        Status::Cancelled => "cancelled",
    };
    writeln!(
        out,
        "-- status: {status}; schematic={n}; derived={}; kept={}; answers={}",
        outcome.counters.derived,
        outcome.counters.kept,
        seen.len()
    )?;

    let mut oracle_mismatch = false;
    if cfg.oracle_check {
        match ground_answers(&store, &session.kb, &session.query, cfg.oracle_depth, &st) {
            Ok(oracle) => {
                let engine_inconsistent = kb_refutation || db_inconsistency;
                let ok = if oracle.inconsistent || engine_inconsistent {
                    oracle.inconsistent == engine_inconsistent
                } else {
                    let oracle_set: IndexSet<ConcreteAnswer> = oracle
                        .tuples
                        .iter()
                        .map(|t| t.iter().map(term_to_ans).collect())
                        .collect();
                    oracle_set == seen
                };
                if ok {
                    writeln!(out, "ORACLE: match")?;
                } else {
                    writeln!(out, "ORACLE: diff")?;
                    report_diff(out, &seen, &oracle.tuples, &st)?;
                    oracle_mismatch = true;
                }
            }
            Err(e) => {
                writeln!(out, "ORACLE: unavailable ({e})")?;
            }
        }
    }

    Ok(if kb_refutation || db_inconsistency {
        2
    } else if oracle_mismatch {
        3
    } else if matches!(outcome.status, Status::MaxDerived | Status::Timeout) {
        4
    } else {
        0
    })
}

/// Same answer as `DocumentIndex::relevant_documents`, but through the
/// session's combined abstraction pool (schema abstractions carry no doc).
pub fn relevant_docs(session: &Session, sa: &SchematicAnswer) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for &leaf in &sa.leaves {
        if let Some(Some(doc)) = session.leaf_docs.get(leaf) {
            if !out.contains(doc) {
                out.push(doc.clone());
            }
        }
    }
    out.sort();
    out
}

fn term_to_ans(t: &Term) -> AnsTerm {
    match t {
        Term::Var(_) => unreachable!("oracle tuples are ground"),
        Term::App(f, args) if args.is_empty() => AnsTerm::Const(*f),
        Term::App(f, args) => AnsTerm::App(*f, args.iter().map(term_to_ans).collect()),
    }
}

fn print_answer(
    out: &mut dyn Write,
    names: &[String],
    ans: &ConcreteAnswer,
    st: &SymbolTable,
) -> std::io::Result<()> {
    if ans.is_empty() {
        return writeln!(out, "true");
    }
    let parts: Vec<String> = names
        .iter()
        .zip(ans)
        .map(|(n, t)| format!("{n}={}", render_ans_term(t, st)))
        .collect();
    writeln!(out, "{}", parts.join(", "))
}

fn report_diff(
    out: &mut dyn Write,
    engine: &IndexSet<ConcreteAnswer>,
    oracle: &IndexSet<Vec<Term>>,
    st: &SymbolTable,
) -> std::io::Result<()> {
    let oracle_set: IndexSet<ConcreteAnswer> = oracle
        .iter()
        .map(|t| t.iter().map(term_to_ans).collect())
        .collect();
    for a in oracle_set.difference(engine) {
        let rendered: Vec<String> = a.iter().map(|t| render_ans_term(t, st)).collect();
        writeln!(out, "missing: ({})", rendered.join(", "))?;
    }
    for a in engine.difference(&oracle_set) {
        let rendered: Vec<String> = a.iter().map(|t| render_ans_term(t, st)).collect();
        writeln!(out, "extra: ({})", rendered.join(", "))?;
    }
    Ok(())
}
