//! Shared fixtures for the integration suites: the two worked examples and a
//! seeded generator of function-free Horn problems for the oracle-equivalence
//! runs.

#![allow(dead_code)]

use indexmap::IndexSet;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use schematic_answers::compile::{instantiate, ConcreteAnswer};
use schematic_answers::driver::Session;
use schematic_answers::saturate::{
    saturate_collect, Outcome, SaturationConfig, Saturation, Status,
};

pub const UNIV_KB: &str = "\
% university KB, five clauses
~grStud(X) | pers(X).
~takesC(X,Y) | ~course(Y) | ~pers(X) | stud(X).
~grCourse(X) | course(X).
~grStud(X) | takesC(X,sk0(X)).
~grStud(X) | grCourse(sk0(X)).
";

pub const UNIV_MAP: &str = "table graduateStudent(id) as grStud/1.\n";

pub fn univ_data(n: usize) -> String {
    (1..=n)
        .map(|i| format!("graduateStudent: s{i}\n"))
        .collect()
}

pub const UNIV_QUERY: &str = "?- stud(X).\n";

pub const JOIN_KB: &str = "~person(P) | ~takesCourse(P,C) | ~course(C) | stud(P).\n";

pub const JOIN_MAP: &str = "\
table person(id) as person/1.
table takesCourse(student, course) as takesCourse/2.
table course(id) as course/1.
";

pub fn join_data(n: usize) -> String {
    let mut s = String::new();
    for i in 1..=n {
        s.push_str(&format!("person: p{i}\n"));
        s.push_str(&format!("takesCourse: p{i}, c{i}\n"));
        s.push_str(&format!("course: c{i}\n"));
    }
    s
}

pub struct Fixture {
    pub kb: String,
    pub map: String,
    pub tab: String,
    pub query: String,
}

/// Random function-free problem: base tables with data, a stratified
/// (non-recursive) tower of Horn rules, and a query on the topmost derived
/// predicate. Range-restricted by construction, so both the engine and the
/// oracle stay in their comfortable fragment.
pub fn random_fixture(rng: &mut ChaCha8Rng) -> Fixture {
    let n_tables = rng.gen_range(1..=4usize);
    let n_consts = rng.gen_range(3..=6usize);
    let mut map = String::new();
    let mut arities = Vec::new();
    for t in 1..=n_tables {
        let arity = rng.gen_range(1..=2usize);
        arities.push(arity);
        let cols = if arity == 1 { "c1" } else { "c1, c2" };
        map.push_str(&format!("table t{t}({cols}) as b{t}/{arity}.\n"));
    }
    let mut tab = String::new();
    let mut rows = 0;
    for (t, &arity) in arities.iter().enumerate() {
        let n_rows = rng.gen_range(0..=7usize);
        for _ in 0..n_rows {
            if rows >= 30 {
                break;
            }
            rows += 1;
            let vals: Vec<String> = (0..arity)
                .map(|_| format!("a{}", rng.gen_range(1..=n_consts)))
                .collect();
            tab.push_str(&format!("t{}: {}\n", t + 1, vals.join(", ")));
        }
    }
    let n_derived = rng.gen_range(1..=4usize);
    let mut derived_arities = Vec::new();
    let mut kb = String::new();
    let vars = ["V1", "V2", "V3", "V4"];
    for d in 1..=n_derived {
        let arity = rng.gen_range(1..=2usize);
        derived_arities.push(arity);
        let n_rules = rng.gen_range(1..=2usize);
        for _ in 0..n_rules {
            // body over base predicates and strictly lower derived ones
            let n_body = rng.gen_range(1..=3usize);
            let mut body = Vec::new();
            let mut body_vars: Vec<&str> = Vec::new();
            for _ in 0..n_body {
                let use_derived = d > 1 && rng.gen_bool(0.3);
                let (name, arity) = if use_derived {
                    let i = rng.gen_range(1..d);
                    (format!("d{i}"), derived_arities[i - 1])
                } else {
                    let i = rng.gen_range(1..=n_tables);
                    (format!("b{i}"), arities[i - 1])
                };
                let args: Vec<&str> = (0..arity)
                    .map(|_| vars[rng.gen_range(0..vars.len())])
                    .collect();
                for v in &args {
                    if !body_vars.contains(v) {
                        body_vars.push(v);
                    }
                }
                body.push(format!("{name}({})", args.join(",")));
            }
            let head_args: Vec<&str> = (0..arity)
                .map(|_| body_vars[rng.gen_range(0..body_vars.len())])
                .collect();
            let negs: Vec<String> = body.iter().map(|a| format!("~{a}")).collect();
            kb.push_str(&format!(
                "{} | d{d}({}).\n",
                negs.join(" | "),
                head_args.join(",")
            ));
        }
    }
    let qa = derived_arities[n_derived - 1];
    let qargs: Vec<&str> = vars.iter().take(qa).copied().collect();
    let query = format!("?- d{n_derived}({}).\n", qargs.join(","));
    Fixture {
        kb,
        map,
        tab,
        query,
    }
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub struct EngineRun {
    pub answers: IndexSet<ConcreteAnswer>,
    pub outcome: Outcome,
    pub saturation: Saturation,
}

/// Saturate a session and union the instantiated answers of every schematic
/// answer, mirroring the driver but keeping the saturation for inspection.
pub fn engine_answers(session: &Session, cfg: SaturationConfig) -> EngineRun {
    let (sas, outcome, saturation) = saturate_collect(
        session.st.clone(),
        Some(session.store.clone()),
        &session.problem(),
        cfg,
    );
    let names = session.distinguished_names();
    let mut answers = IndexSet::new();
    for sa in &sas {
        answers.extend(instantiate(
            &sa.clause,
            &session.schema,
            &session.store,
            &session.st,
            &names,
        ));
    }
    EngineRun {
        answers,
        outcome,
        saturation,
    }
}

pub fn default_cfg(session: &Session) -> SaturationConfig {
    SaturationConfig {
        backed_preds: Some(session.schema.preds().collect()),
        ..SaturationConfig::default()
    }
}

pub fn assert_saturated(outcome: &Outcome) {
    assert_eq!(outcome.status, Status::Saturated, "run did not saturate");
}
