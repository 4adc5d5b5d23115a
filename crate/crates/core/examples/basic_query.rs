//! Smallest end-to-end run: a five-clause knowledge base over one table,
//! answered through the full pipeline (saturate, compile to SQL, execute).
//!
//!     cargo run --example basic_query

use schematic_answers::driver::{run_session, EmitMode, RunConfig, Session};

const KB: &str = "
% every graduate student is a person and takes some graduate course
~grStud(X) | pers(X).
~takesC(X,Y) | ~course(Y) | ~pers(X) | stud(X).
~grCourse(X) | course(X).
~grStud(X) | takesC(X,sk0(X)).
~grStud(X) | grCourse(sk0(X)).
";

const SCHEMA: &str = "table graduateStudent(id) as grStud/1.\n";

const DATA: &str = "
graduateStudent: ann
graduateStudent: bob
graduateStudent: cat
";

const QUERY: &str = "?- stud(X).\n";

fn main() {
    let session = Session::from_texts(KB, SCHEMA, DATA, QUERY, None).unwrap();
    let cfg = RunConfig {
        emit: EmitMode::Both,
        ..RunConfig::default()
    };
    let code = run_session(&session, &cfg, &mut std::io::stdout()).unwrap();
    std::process::exit(code);
}
