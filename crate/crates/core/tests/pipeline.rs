//! End-to-end pipeline tests: file formats, CLI behaviour, exit codes,
//! streaming/cancellation, and a few cross-cutting properties the unit
//! suites cannot see.

mod common;

use std::io::Write;
use std::process::Command;
use std::sync::Arc;

use common::*;
use schematic_answers::driver::Session;
use schematic_answers::parse::{clause_to_kb_line, parse_kb};
use schematic_answers::saturate::{saturate_collect, Saturation, Status};
use schematic_answers::store::refine_abstraction;
use schematic_answers::SymbolTable;

struct Files {
    dir: tempfile::TempDir,
}

impl Files {
    fn new(kb: &str, map: &str, tab: &str, query: &str) -> Files {
        let dir = tempfile::tempdir().unwrap();
        for (name, text) in [
            ("kb.fol", kb),
            ("schema.map", map),
            ("data.tab", tab),
            ("query.q", query),
        ] {
            let mut f = std::fs::File::create(dir.path().join(name)).unwrap();
            f.write_all(text.as_bytes()).unwrap();
        }
        Files { dir }
    }

    fn arg(&self, name: &str) -> String {
        self.dir.path().join(name).to_str().unwrap().to_string()
    }

    fn cmd(&self) -> Command {
        let mut c = Command::new(env!("CARGO_BIN_EXE_sqa"));
        c.arg("--kb")
            .arg(self.arg("kb.fol"))
            .arg("--schema")
            .arg(self.arg("schema.map"))
            .arg("--data")
            .arg(self.arg("data.tab"))
            .arg("--query")
            .arg(self.arg("query.q"));
        c
    }
}

fn run(cmd: &mut Command) -> (i32, String) {
    let out = cmd.output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).to_string(),
    )
}

#[test]
fn cli_university_both_with_oracle() {
    let f = Files::new(UNIV_KB, UNIV_MAP, &univ_data(100), UNIV_QUERY);
    let (code, out) = run(f.cmd().args(["--emit", "both", "--oracle-check"]));
    assert_eq!(code, 0, "output:\n{out}");
    assert!(out.contains("-- answer 1"));
    assert!(out.contains("SELECT R1.id AS X FROM graduateStudent AS R1;"));
    assert!(out.contains("X=s1\n") && out.contains("X=s100\n"));
    assert!(out.contains("ORACLE: match"));
    assert!(out.contains("-- status: saturated"));
}

#[test]
fn cli_parse_error_exits_1() {
    let f = Files::new("p(X.\n", UNIV_MAP, "", UNIV_QUERY);
    let (code, out) = run(&mut f.cmd());
    assert_eq!(code, 1);
    assert!(out.contains("error:"), "missing diagnostic: {out}");
}

#[test]
fn cli_unknown_table_exits_1() {
    let f = Files::new("", UNIV_MAP, "nosuch: a\n", UNIV_QUERY);
    let (code, out) = run(&mut f.cmd());
    assert_eq!(code, 1);
    assert!(out.contains("unknown table"));
}

#[test]
fn cli_refutation_exits_2() {
    let f = Files::new("p(a).\n~p(X).\n", UNIV_MAP, "", "?- q(X).\n");
    let (code, out) = run(&mut f.cmd());
    assert_eq!(code, 2);
    assert!(out.contains("KB is inconsistent"));
}

/// A clause tower with a function symbol gives an unbounded stream of
/// schematic answers: the passive set never empties.
const INFINITE_KB: &str = "~nat(X) | nat(s(X)).\n";
const NAT_MAP: &str = "table nat(id) as nat/1.\n";

#[test]
fn cli_budget_exhaustion_exits_4() {
    let f = Files::new(INFINITE_KB, NAT_MAP, "nat: zero\n", "?- nat(X).\n");
    let (code, out) = run(f.cmd().args(["--emit", "sql", "--max-derived", "50"]));
    assert_eq!(code, 4, "output:\n{out}");
    assert!(out.contains("-- status: budget-exhausted"));
}

#[test]
fn cli_max_answers_cancels_cleanly() {
    let f = Files::new(INFINITE_KB, NAT_MAP, "nat: zero\n", "?- nat(X).\n");
    let (code, out) = run(f
        .cmd()
        .args(["--emit", "answers", "--max-answers", "1", "--timeout", "10"]));
    assert_eq!(code, 0, "output:\n{out}");
    assert!(out.contains("X=zero"));
    assert!(out.contains("-- status: cancelled"));
}

#[test]
fn cli_oracle_mismatch_exits_3() {
    // cutting the run off after one answer makes the engine disagree with
    // the oracle on purpose
    let f = Files::new("", UNIV_MAP, &univ_data(5), "?- grStud(X).\n");
    let (code, out) = run(f
        .cmd()
        .args(["--emit", "answers", "--max-answers", "2", "--oracle-check"]));
    assert_eq!(code, 3, "output:\n{out}");
    assert!(out.contains("ORACLE: diff"));
    assert!(out.contains("missing:"));
}

#[test]
fn cli_emit_docs_requires_registry() {
    let f = Files::new("", UNIV_MAP, "", UNIV_QUERY);
    let (code, out) = run(f.cmd().args(["--emit", "docs"]));
    assert_eq!(code, 1);
    assert!(out.contains("--docs"));
}

#[test]
fn cli_emit_sql_only_prints_no_bindings() {
    let f = Files::new(UNIV_KB, UNIV_MAP, &univ_data(5), UNIV_QUERY);
    let (code, out) = run(f.cmd().args(["--emit", "sql"]));
    assert_eq!(code, 0);
    assert!(out.contains("SELECT"));
    assert!(!out.contains("X=s1"));
}

/// The producer/consumer contract: the consumer sees the first schematic
/// answer while saturation is still running, and dropping the consumer
/// cancels the producer.
#[test]
fn streaming_first_answer_before_completion() {
    let session =
        Session::from_texts(INFINITE_KB, NAT_MAP, "nat: zero\n", "?- nat(X).\n", None).unwrap();
    let mut cfg = default_cfg(&session);
    cfg.max_derived = 10_000;
    let mut sat = Saturation::new(
        session.st.clone(),
        Some(session.store.clone()),
        &session.problem(),
        cfg,
    );
    let mut got = 0;
    let outcome = sat.run(|_| {
        got += 1;
        false // consumer goes away after the first answer
    });
    assert_eq!(got, 1);
    assert_eq!(outcome.status, Status::Cancelled);
    // well below the budget: the producer stopped because of the consumer
    assert!(outcome.counters.derived < 10_000);
}

#[test]
fn kb_round_trip_alpha_equivalent() {
    let st = SymbolTable::new();
    let clauses = parse_kb(UNIV_KB, &st).unwrap();
    for c in &clauses {
        let line = clause_to_kb_line(c, &st);
        let reparsed = parse_kb(&line, &st).unwrap();
        assert_eq!(reparsed.len(), 1);
        assert!(
            c.alpha_eq(&reparsed[0]),
            "round trip changed clause: {line}"
        );
    }
}

/// Generalisation-tolerance smoke test: replacing the store-derived refined
/// abstractions with the strictly more general unrefined one never loses
/// answers.
#[test]
fn generalisation_tolerance_smoke() {
    let mut rng = seeded(0x5eed_0042);
    for _ in 0..8 {
        let f = random_fixture(&mut rng);
        let session = Session::from_texts(&f.kb, &f.map, &f.tab, &f.query, None).unwrap();
        let general = engine_answers(&session, default_cfg(&session));
        assert_saturated(&general.outcome);

        // specialize every unary-or-wider predicate on its first column
        let mut refined_session =
            Session::from_texts(&f.kb, &f.map, &f.tab, &f.query, None).unwrap();
        let mut abstractions = Vec::new();
        for pred in refined_session.schema.preds() {
            let values: Vec<_> = refined_session
                .store
                .tuples(pred)
                .map(|t| t[0])
                .collect();
            if values.is_empty() {
                // no rows: keep the general clause
                abstractions.push(
                    refined_session
                        .abstractions
                        .iter()
                        .find(|a| a.clause.recording[0].pred == pred)
                        .unwrap()
                        .clone(),
                );
                continue;
            }
            for clause in
                refine_abstraction(&refined_session.schema, &refined_session.st, pred, 1, &values)
                    .unwrap()
            {
                abstractions.push(schematic_answers::saturate::AbstractionInput {
                    clause,
                    prefs: vec![],
                });
            }
        }
        refined_session.abstractions = abstractions;
        let refined = engine_answers(&refined_session, default_cfg(&refined_session));
        assert_saturated(&refined.outcome);
        // general ⊇ refined, and on value-complete refinements they coincide
        for a in &refined.answers {
            assert!(
                general.answers.contains(a),
                "general abstraction lost an answer"
            );
        }
        assert_eq!(general.answers, refined.answers);
    }
}

/// Subsumption off is a supported differential configuration: answers agree
/// with the default run on terminating fixtures.
#[test]
fn no_subsumption_differential() {
    let mut rng = seeded(0x5eed_0043);
    for _ in 0..5 {
        let f = random_fixture(&mut rng);
        let session = Session::from_texts(&f.kb, &f.map, &f.tab, &f.query, None).unwrap();
        let base = engine_answers(&session, default_cfg(&session));
        let mut cfg = default_cfg(&session);
        cfg.subsumption = false;
        cfg.max_derived = 50_000;
        let nosub = engine_answers(&session, cfg);
        if nosub.outcome.status == Status::Saturated {
            assert_eq!(base.answers, nosub.answers);
        } else {
            // without subsumption the run may only hit the budget; it must
            // still not invent answers
            for a in &nosub.answers {
                assert!(base.answers.contains(a));
            }
        }
    }
}

/// The three calculus configurations agree on the worked examples.
#[test]
fn calculus_variants_agree() {
    use schematic_answers::ordering::CalculusMode;
    for mode in [
        CalculusMode::Unordered,
        CalculusMode::Ordered,
        CalculusMode::OrderedSelection,
    ] {
        let session =
            Session::from_texts(UNIV_KB, UNIV_MAP, &univ_data(7), UNIV_QUERY, None).unwrap();
        let mut cfg = default_cfg(&session);
        cfg.calculus = mode;
        let run = engine_answers(&session, cfg);
        assert_eq!(run.answers.len(), 7, "mode {mode:?} lost answers");
    }
}

#[test]
fn concurrent_store_reads_during_saturation() {
    // the store is read-only after load; constraint checks may run on any
    // thread while saturation proceeds
    let session =
        Session::from_texts(UNIV_KB, UNIV_MAP, &univ_data(50), UNIV_QUERY, None).unwrap();
    let store: Arc<schematic_answers::FactStore> = session.store.clone();
    let reader = {
        let store = store.clone();
        std::thread::spawn(move || {
            let mut total = 0usize;
            for _ in 0..1000 {
                total += store.len();
            }
            total
        })
    };
    let (sas, outcome, _) = saturate_collect(
        session.st.clone(),
        Some(store),
        &session.problem(),
        default_cfg(&session),
    );
    assert_eq!(outcome.status, Status::Saturated);
    assert!(!sas.is_empty());
    assert_eq!(reader.join().unwrap(), 50_000);
}
