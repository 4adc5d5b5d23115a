//! Cross-check the engine against the independent ground reasoner: both
//! must produce the same set of concrete answers.
//!
//!     cargo run --example oracle_check

use indexmap::IndexSet;

use schematic_answers::compile::{instantiate, AnsTerm};
use schematic_answers::driver::Session;
use schematic_answers::oracle::ground_answers;
use schematic_answers::saturate::{saturate_collect, SaturationConfig};
use schematic_answers::Term;

const KB: &str = "
~parent(X,Y) | anc(X,Y).
~parent(X,Y) | ~anc(Y,Z) | anc(X,Z).
";

const SCHEMA: &str = "table parentOf(parent, child) as parent/2.\n";

const DATA: &str = "
parentOf: ada, ben
parentOf: ben, cal
parentOf: cal, dot
";

fn main() {
    let session = Session::from_texts(KB, SCHEMA, DATA, "?- anc(X,Y).\n", None).unwrap();
    // the ancestor rules are recursive, so the stream of schematic answers
    // never ends; a small budget suffices for every chain the data supports
    let cfg = SaturationConfig {
        backed_preds: Some(session.schema.preds().collect()),
        max_derived: 500,
        ..SaturationConfig::default()
    };
    let (sas, outcome, _) = saturate_collect(
        session.st.clone(),
        Some(session.store.clone()),
        &session.problem(),
        cfg,
    );
    println!("engine: {:?}, {} schematic answers", outcome.status, sas.len());

    let names = session.distinguished_names();
    let mut engine: IndexSet<Vec<AnsTerm>> = IndexSet::new();
    for sa in &sas {
        engine.extend(instantiate(
            &sa.clause,
            &session.schema,
            &session.store,
            &session.st,
            &names,
        ));
    }

    let oracle = ground_answers(
        &session.store,
        &session.kb,
        &session.query,
        4,
        &session.st,
    )
    .unwrap();
    let oracle_set: IndexSet<Vec<AnsTerm>> = oracle
        .tuples
        .iter()
        .map(|t| {
            t.iter()
                .map(|term| match term {
                    Term::App(f, a) if a.is_empty() => AnsTerm::Const(*f),
                    _ => unreachable!("oracle answers are constant tuples"),
                })
                .collect()
        })
        .collect();

    println!("engine answers: {}", engine.len());
    println!("oracle answers: {} (exact: {})", oracle_set.len(), oracle.exact);
    if engine == oracle_set {
        println!("ORACLE: match");
    } else {
        println!("ORACLE: diff");
        std::process::exit(3);
    }
}
