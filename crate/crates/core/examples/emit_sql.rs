//! Walk a schematic answer through the compilation stages one by one:
//! merge answer literals, normalize, flatten, render SQL.
//!
//!     cargo run --example emit_sql

use schematic_answers::compile::{
    flatten, merge_answer_literals, normalize_answer, to_sql,
};
use schematic_answers::driver::Session;
use schematic_answers::saturate::{saturate_collect, SaturationConfig};
use schematic_answers::PredKind;

const KB: &str = "~enrolled(S,C) | ~dept(C,D) | inDept(S,D).\n";

const SCHEMA: &str = "
table enrollment(student, course) as enrolled/2.
table department(course, dept) as dept/2.
";

const DATA: &str = "
enrollment: ann, logic
department: logic, cs
";

fn main() {
    let session =
        Session::from_texts(KB, SCHEMA, DATA, "?- inDept(S,D).\n", None).unwrap();
    let cfg = SaturationConfig {
        backed_preds: Some(session.schema.preds().collect()),
        ..SaturationConfig::default()
    };
    let (sas, _, _) = saturate_collect(
        session.st.clone(),
        Some(session.store.clone()),
        &session.problem(),
        cfg,
    );
    let st = &session.st;
    for sa in &sas {
        println!("schematic answer: {}", sa.clause.display(st));

        // stage 1: collapse the answer literals into one by their mgu
        let (db, answer) = merge_answer_literals(&sa.clause, st).unwrap();
        println!("merged answer atom: {}", answer.args.len());
        for l in &db {
            assert_eq!(st.pred_kind(l.pred), PredKind::Db);
        }

        // stage 2: keep only the variables the answer shares with the
        // db-constraint; everything else becomes part of the template
        let norm = normalize_answer(db, &answer);
        println!("core variables: {}", norm.core_vars.len());

        // stage 3: flatten to positional constraints over table columns
        let flat = flatten(&norm).expect("relational answer");
        println!(
            "constraints: {} anchors, {} constants, {} equalities",
            flat.ea.len(),
            flat.ec.len(),
            flat.ed.len()
        );

        // stage 4: render
        let names = session.distinguished_names();
        println!("{}", to_sql(&flat, &session.schema, st, &names));
    }
}
