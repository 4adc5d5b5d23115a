//! Effect of the two pruning rules on the search space: a run with pruning
//! derives fewer clauses than one without, with identical answers.
//!
//!     cargo run --example pruning

use schematic_answers::driver::Session;
use schematic_answers::saturate::{saturate_collect, SaturationConfig};

const KB: &str = "
~emp(E,D) | ~mgr(D,M) | boss(E,M).
~emp(E,D) | ~big(D) | busy(E).
~boss(E,M) | ~busy(M) | slow(E).
";

const SCHEMA: &str = "
table employee(name, dept) as emp/2.
table manager(dept, name) as mgr/2.
table bigDept(dept) as big/1.
";

// nothing in bigDept, so every derivation through `big` is dead on arrival —
// exactly what the db-constraint prune notices
const DATA: &str = "
employee: ann, sales
employee: bob, sales
manager: sales, cat
";

fn main() {
    let session = Session::from_texts(KB, SCHEMA, DATA, "?- slow(E).\n", None).unwrap();
    for (label, prune) in [("pruning on ", true), ("pruning off", false)] {
        let cfg = SaturationConfig {
            prune_db: prune,
            prune_answers: prune,
            backed_preds: Some(session.schema.preds().collect()),
            ..SaturationConfig::default()
        };
        let (sas, outcome, _) = saturate_collect(
            session.st.clone(),
            Some(session.store.clone()),
            &session.problem(),
            cfg,
        );
        let c = outcome.counters;
        println!(
            "{label}: derived={:3} kept={:3} emitted={} pruned_db={} pruned_answers={}",
            c.derived, c.kept, sas.len(), c.pruned_db, c.pruned_answers
        );
    }
}
