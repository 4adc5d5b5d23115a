//! Abstraction refinement: split a table's abstraction clause into one
//! clause per value of a column. Saturation then works with more specific
//! premises — at the cost of more clauses — without changing the answers.
//!
//!     cargo run --example refined_abstraction

use indexmap::IndexSet;

use schematic_answers::compile::instantiate;
use schematic_answers::driver::Session;
use schematic_answers::saturate::{saturate_collect, AbstractionInput, SaturationConfig};
use schematic_answers::store::refine_abstraction;

const KB: &str = "~reads(P,B) | ~scifi(B) | fan(P).\n";

const SCHEMA: &str = "
table reads(person, book) as reads/2.
table scifiBook(title) as scifi/1.
";

const DATA: &str = "
reads: ann, dune
reads: bob, dune
reads: bob, cookbook
scifiBook: dune
";

fn answers(session: &Session) -> IndexSet<Vec<schematic_answers::compile::AnsTerm>> {
    let cfg = SaturationConfig {
        backed_preds: Some(session.schema.preds().collect()),
        ..SaturationConfig::default()
    };
    let (sas, outcome, _) = saturate_collect(
        session.st.clone(),
        Some(session.store.clone()),
        &session.problem(),
        cfg,
    );
    println!(
        "  {:?}: {} schematic answers from {} abstraction clauses",
        outcome.status,
        sas.len(),
        session.abstractions.len()
    );
    let names = session.distinguished_names();
    let mut out = IndexSet::new();
    for sa in &sas {
        out.extend(instantiate(
            &sa.clause,
            &session.schema,
            &session.store,
            &session.st,
            &names,
        ));
    }
    out
}

fn main() {
    let query = "?- fan(P).\n";
    println!("generic abstraction:");
    let generic = Session::from_texts(KB, SCHEMA, DATA, query, None).unwrap();
    let base = answers(&generic);

    println!("refined on reads.book:");
    let mut refined = Session::from_texts(KB, SCHEMA, DATA, query, None).unwrap();
    let reads = refined.abstractions[0].clause.recording[0].pred;
    let books: Vec<_> = refined.store.tuples(reads).map(|t| t[1]).collect();
    let clauses = refine_abstraction(&refined.schema, &refined.st, reads, 2, &books).unwrap();
    refined.abstractions.splice(
        0..1,
        clauses
            .into_iter()
            .map(|clause| AbstractionInput { clause, prefs: vec![] }),
    );
    let split = answers(&refined);

    assert_eq!(base, split, "refinement must not change the answers");
    println!("both runs agree on {} answers", base.len());
}
