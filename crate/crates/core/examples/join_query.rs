//! A rule whose body spans three tables compiles into a single three-way
//! join, so one schematic answer covers every student at once.
//!
//!     cargo run --example join_query

use schematic_answers::compile::{compile, instantiate_query, render_ans_term, Compiled};
use schematic_answers::driver::Session;
use schematic_answers::saturate::{saturate_collect, SaturationConfig};

const KB: &str = "~person(P) | ~takesCourse(P,C) | ~course(C) | stud(P).\n";

const SCHEMA: &str = "
table person(id) as person/1.
table takesCourse(student, course) as takesCourse/2.
table course(id) as course/1.
";

const DATA: &str = "
person: ann
person: bob
course: logic
course: databases
takesCourse: ann, logic
takesCourse: bob, databases
takesCourse: bob, logic
";

fn main() {
    let session = Session::from_texts(KB, SCHEMA, DATA, "?- stud(X).\n", None).unwrap();
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
    println!("status: {:?}, schematic answers: {}", outcome.status, sas.len());
    let names = session.distinguished_names();
    for sa in &sas {
        match compile(&sa.clause, &session.schema, &session.st, &names) {
            Compiled::Query(cq) => {
                println!("{}", cq.sql);
                for ans in instantiate_query(&cq, &session.store, &session.st) {
                    let row: Vec<String> = ans
                        .iter()
                        .map(|t| render_ans_term(t, &session.st))
                        .collect();
                    println!("  {}", row.join(", "));
                }
            }
            other => println!("(non-query answer: {other:?})"),
        }
    }
}
