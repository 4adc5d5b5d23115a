//! Semantic document indexing: documents register abstraction clauses, and
//! every schematic answer maps back to the documents whose clauses fed its
//! derivation. Prefix constraints prune derivations that would mix
//! incompatible URI spaces.
//!
//!     cargo run --example doc_index

use schematic_answers::driver::{relevant_docs, Session};
use schematic_answers::saturate::{saturate_collect, SaturationConfig};

const KB: &str = "~zoo:elephant(X) | ~colors:hasColour(X,C) | ~colors:pink(C) | pinkElephant(X).\n";

// no local tables at all: the data lives in the documents
const SCHEMA: &str = "";

const DOCS: &str = r#"
doc d1 {
    zoo:elephant(X) | zoo:elephant(X) pref(X, "myelephants/").
    colors:hasColour(X,Y) | colors:hasColour(X,Y) pref(X, "myelephants/africa/").
}
doc d2 {
    colors:pink(X) | colors:pink(X).
}
doc d3 {
    zoo:elephant(X) | zoo:elephant(X) pref(X, "myrhinos/").
}
"#;

fn main() {
    let session = Session::from_texts(
        KB,
        SCHEMA,
        "",
        "?- pinkElephant(X).\n",
        Some(DOCS),
    )
    .unwrap();
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
    println!("status: {:?}", outcome.status);
    // d3's elephants live under myrhinos/, which cannot chain with the
    // colour clause's myelephants/africa/ prefix, so d3 never shows up
    for sa in &sas {
        println!("schematic answer: {}", sa.clause.display(&session.st));
        println!("  relevant documents: {:?}", relevant_docs(&session, sa));
    }
}
