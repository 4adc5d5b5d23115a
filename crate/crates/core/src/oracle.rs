//! Brute-force ground reasoner used to cross-check the saturation pipeline.
//!
//! Deliberately shares no inference code with the engine: Horn knowledge
//! bases go through naive forward chaining with a local ground matcher,
//! non-Horn function-free ones through propositional grounding plus
//! exhaustive ground resolution. Slow by design.

use indexmap::IndexSet;

use crate::parse::DeductiveQuery;
use crate::store::FactStore;
use crate::symbols::{FnId, SymbolTable, VarId};
use crate::term::{Clause, Literal, Term};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct GroundAnswerSet {
    /// Ground answer tuples, width = number of distinguished variables.
    pub tuples: IndexSet<Vec<Term>>,
    /// False when the depth bound truncated the Herbrand exploration.
    pub exact: bool,
    /// DB ∪ KB is inconsistent on its own (every tuple is then an answer).
    pub inconsistent: bool,
}

fn is_horn(kb: &[Clause]) -> bool {
    kb.iter()
        .all(|c| c.ordinary.iter().filter(|l| l.positive).count() <= 1)
}

fn function_free(kb: &[Clause], goal: &Clause) -> bool {
    fn tf(t: &Term) -> bool {
        match t {
            Term::Var(_) => true,
            Term::App(_, args) => args.is_empty(),
        }
    }
    kb.iter()
        .chain(std::iter::once(goal))
        .all(|c| c.ordinary.iter().all(|l| l.args.iter().all(tf)))
}

// -- local ground matching, independent of the engine's unifier --

type Binding = Vec<(VarId, Term)>;

fn bound<'a>(b: &'a Binding, v: VarId) -> Option<&'a Term> {
    b.iter().find(|(u, _)| *u == v).map(|(_, t)| t)
}

fn match_ground(pattern: &Term, ground: &Term, b: &mut Binding) -> bool {
    match pattern {
        Term::Var(v) => match bound(b, *v) {
            Some(t) => t == ground,
            None => {
                b.push((*v, ground.clone()));
                true
            }
        },
        Term::App(f, args) => match ground {
            Term::App(g, gargs) if f == g => args
                .iter()
                .zip(gargs)
                .all(|(p, t)| match_ground(p, t, b)),
            _ => false,
        },
    }
}

fn apply_binding(t: &Term, b: &Binding) -> Term {
    match t {
        Term::Var(v) => bound(b, *v).cloned().unwrap_or_else(|| t.clone()),
        Term::App(f, args) => {
            Term::App(*f, args.iter().map(|a| apply_binding(a, b)).collect())
        }
    }
}

/// Enumerate all bindings matching the conjunction of atoms against the
/// model, left to right.
fn match_conjunction(
    atoms: &[(crate::symbols::PredId, Vec<Term>)],
    model: &IndexSet<(crate::symbols::PredId, Vec<Term>)>,
    b: Binding,
    out: &mut Vec<Binding>,
) {
    let Some(((pred, args), rest)) = atoms.split_first() else {
        out.push(b);
        return;
    };
    for (mp, margs) in model {
        if mp != pred {
            continue;
        }
        let mut b2 = b.clone();
        if args
            .iter()
            .zip(margs)
            .all(|(p, t)| match_ground(p, t, &mut b2))
        {
            match_conjunction(rest, model, b2, out);
        }
    }
}

fn store_atoms(store: &FactStore, st: &SymbolTable) -> IndexSet<(crate::symbols::PredId, Vec<Term>)> {
    let mut model = IndexSet::new();
    for p in store.preds() {
        for tuple in store.tuples(p) {
            model.insert((p, tuple.iter().map(|&c| Term::constant(c)).collect()));
        }
    }
    let _ = st;
    model
}

fn term_depth(t: &Term) -> usize {
    match t {
        Term::Var(_) => 1,
        Term::App(_, args) => 1 + args.iter().map(term_depth).max().unwrap_or(0),
    }
}

fn constants_of(kb: &[Clause], goal: &Clause, st: &SymbolTable) -> IndexSet<FnId> {
    let mut cs = IndexSet::new();
    fn go(t: &Term, st: &SymbolTable, cs: &mut IndexSet<FnId>) {
        if let Term::App(f, args) = t {
            if args.is_empty() && st.fn_arity(*f) == 0 {
                cs.insert(*f);
            }
            for a in args {
                go(a, st, cs);
            }
        }
    }
    for c in kb.iter().chain(std::iter::once(goal)) {
        for l in &c.ordinary {
            for t in &l.args {
                go(t, st, &mut cs);
            }
        }
    }
    cs
}

/// Concrete answers by brute force: for each candidate tuple over the active
/// domain, decide inconsistency of `DB ∪ KB ∪ {goal[X̄/t̄]}`.
pub fn ground_answers(
    store: &FactStore,
    kb: &[Clause],
    query: &DeductiveQuery,
    depth_bound: usize,
    st: &SymbolTable,
) -> Result<GroundAnswerSet> {
    if is_horn(kb) {
        horn_answers(store, kb, query, depth_bound, st)
    } else if function_free(kb, &query.goal) {
        ground_resolution_answers(store, kb, query, st)
    } else {
        Err(Error::Invalid(
            "oracle supports Horn or function-free knowledge bases only".into(),
        ))
    }
}

fn horn_answers(
    store: &FactStore,
    kb: &[Clause],
    query: &DeductiveQuery,
    depth_bound: usize,
    st: &SymbolTable,
) -> Result<GroundAnswerSet> {
    let mut model = store_atoms(store, st);
    let mut exact = true;
    // rules: (body atoms, optional head); all-negative clauses are
    // integrity constraints
    struct HRule {
        body: Vec<(crate::symbols::PredId, Vec<Term>)>,
        head: Option<(crate::symbols::PredId, Vec<Term>)>,
    }
    let mut rules = Vec::new();
    for c in kb {
        if !c.recording.is_empty() {
            return Err(Error::Invalid(
                "oracle expects plain clauses without recording parts".into(),
            ));
        }
        let body: Vec<_> = c
            .ordinary
            .iter()
            .filter(|l| !l.positive)
            .map(|l| (l.pred, l.args.clone()))
            .collect();
        let head = c
            .ordinary
            .iter()
            .find(|l| l.positive)
            .map(|l| (l.pred, l.args.clone()));
        if let Some((_, args)) = &head {
            // range restriction: head variables must occur in the body
            let mut body_vars: Vec<VarId> = Vec::new();
            for (_, bargs) in &body {
                for t in bargs {
                    t.for_each_var(&mut |v| {
                        if !body_vars.contains(&v) {
                            body_vars.push(v);
                        }
                    });
                }
            }
            let mut ok = true;
            for t in args {
                t.for_each_var(&mut |v| {
                    if !body_vars.contains(&v) {
                        ok = false;
                    }
                });
            }
            if !ok {
                return Err(Error::Invalid(
                    "oracle requires range-restricted Horn rules".into(),
                ));
            }
        }
        rules.push(HRule { body, head });
    }
    // naive forward chaining to fixpoint
    let mut inconsistent = false;
    loop {
        let mut added = false;
        for r in &rules {
            let mut bindings = Vec::new();
            match_conjunction(&r.body, &model, Vec::new(), &mut bindings);
            match &r.head {
                Some((p, args)) => {
                    for b in bindings {
                        let atom: Vec<Term> =
                            args.iter().map(|t| apply_binding(t, &b)).collect();
                        if atom.iter().any(|t| term_depth(t) > depth_bound) {
                            exact = false;
                            continue;
                        }
                        if model.insert((*p, atom)) {
                            added = true;
                        }
                    }
                }
                None => {
                    if !bindings.is_empty() {
                        inconsistent = true;
                    }
                }
            }
        }
        if !added {
            break;
        }
    }
    // the goal clause is all-negative; its complemented body is the
    // conjunction to satisfy in the least model
    let conj: Vec<_> = query
        .goal
        .ordinary
        .iter()
        .map(|l: &Literal| (l.pred, l.args.clone()))
        .collect();
    if query.goal.ordinary.iter().any(|l| l.positive) {
        return Err(Error::Invalid(
            "oracle expects a goal that negates a positive conjunction".into(),
        ));
    }
    let mut tuples = IndexSet::new();
    if inconsistent {
        // everything follows; report all candidate tuples over the domain
        let mut domain: IndexSet<FnId> = store.active_domain();
        domain.extend(constants_of(kb, &query.goal, st));
        let k = query.distinguished.len();
        let mut tuple = vec![None; k];
        enumerate_domain(&domain, &mut tuple, 0, &mut |t| {
            tuples.insert(t.to_vec());
        });
    } else {
        let mut bindings = Vec::new();
        match_conjunction(&conj, &model, Vec::new(), &mut bindings);
        for b in bindings {
            let tuple: Vec<Term> = query
                .distinguished
                .iter()
                .map(|(_, v)| {
                    bound(&b, *v)
                        .cloned()
                        .unwrap_or_else(|| Term::Var(*v))
                })
                .collect();
            if tuple.iter().all(Term::is_ground) {
                tuples.insert(tuple);
            }
        }
    }
    Ok(GroundAnswerSet {
        tuples,
        exact,
        inconsistent,
    })
}

fn enumerate_domain(
    domain: &IndexSet<FnId>,
    tuple: &mut [Option<Term>],
    i: usize,
    f: &mut impl FnMut(&[Term]),
) {
    if i == tuple.len() {
        let t: Vec<Term> = tuple.iter().map(|x| x.clone().unwrap()).collect();
        f(&t);
        return;
    }
    for &c in domain {
        tuple[i] = Some(Term::constant(c));
        enumerate_domain(domain, tuple, i + 1, f);
    }
}

// -- non-Horn path: propositional grounding + exhaustive resolution --

type PropAtom = (crate::symbols::PredId, Vec<Term>);
type PropClause = Vec<(bool, PropAtom)>;

fn ground_clause_instances(
    c: &Clause,
    domain: &[FnId],
    out: &mut Vec<PropClause>,
) {
    let mut vars: Vec<VarId> = Vec::new();
    for l in &c.ordinary {
        l.for_each_var(&mut |v| {
            if !vars.contains(&v) {
                vars.push(v);
            }
        });
    }
    let mut assignment: Vec<(VarId, Term)> = Vec::new();
    fn rec(
        c: &Clause,
        vars: &[VarId],
        domain: &[FnId],
        assignment: &mut Vec<(VarId, Term)>,
        out: &mut Vec<PropClause>,
    ) {
        if assignment.len() == vars.len() {
            let mut pc: PropClause = c
                .ordinary
                .iter()
                .map(|l| {
                    (
                        l.positive,
                        (
                            l.pred,
                            l.args
                                .iter()
                                .map(|t| apply_binding(t, assignment))
                                .collect(),
                        ),
                    )
                })
                .collect();
            pc.sort_by(|a, b| format!("{a:?}").cmp(&format!("{b:?}")));
            pc.dedup();
            out.push(pc);
            return;
        }
        let v = vars[assignment.len()];
        for &d in domain {
            assignment.push((v, Term::constant(d)));
            rec(c, vars, domain, assignment, out);
            assignment.pop();
        }
    }
    rec(c, &vars, domain, &mut assignment, out);
}

fn prop_tautology(c: &PropClause) -> bool {
    c.iter()
        .any(|(pos, a)| *pos && c.contains(&(false, a.clone())))
}

fn prop_subsumed(c: &PropClause, by: &[PropClause]) -> bool {
    by.iter().any(|d| d.iter().all(|l| c.contains(l)))
}

/// Exhaustive propositional resolution: true iff the empty clause is
/// derivable.
fn prop_unsat(mut clauses: Vec<PropClause>) -> bool {
    clauses.retain(|c| !prop_tautology(c));
    let mut i = 0;
    while i < clauses.len() {
        if clauses[i].is_empty() {
            return true;
        }
        for j in 0..i {
            let (a, b) = (clauses[i].clone(), clauses[j].clone());
            for (pos, atom) in &a {
                if b.contains(&(!pos, atom.clone())) {
                    let mut res: PropClause = a
                        .iter()
                        .filter(|l| *l != &(*pos, atom.clone()))
                        .chain(b.iter().filter(|l| *l != &(!pos, atom.clone())))
                        .cloned()
                        .collect();
                    res.sort_by(|x, y| format!("{x:?}").cmp(&format!("{y:?}")));
                    res.dedup();
                    if res.is_empty() {
                        return true;
                    }
                    if !prop_tautology(&res) && !prop_subsumed(&res, &clauses) {
                        clauses.push(res);
                    }
                }
            }
        }
        i += 1;
    }
    false
}

fn ground_resolution_answers(
    store: &FactStore,
    kb: &[Clause],
    query: &DeductiveQuery,
    st: &SymbolTable,
) -> Result<GroundAnswerSet> {
    let mut domain: IndexSet<FnId> = store.active_domain();
    domain.extend(constants_of(kb, &query.goal, st));
    let domain: Vec<FnId> = domain.into_iter().collect();
    if domain.is_empty() {
        return Ok(GroundAnswerSet {
            tuples: IndexSet::new(),
            exact: true,
            inconsistent: false,
        });
    }
    let mut base: Vec<PropClause> = Vec::new();
    for p in store.preds() {
        for tuple in store.tuples(p) {
            base.push(vec![(
                true,
                (p, tuple.iter().map(|&c| Term::constant(c)).collect()),
            )]);
        }
    }
    for c in kb {
        ground_clause_instances(c, &domain, &mut base);
    }
    let inconsistent = prop_unsat(base.clone());
    let k = query.distinguished.len();
    let mut tuples = IndexSet::new();
    let dvars: Vec<VarId> = query.distinguished.iter().map(|(_, v)| *v).collect();
    let mut tuple: Vec<Option<Term>> = vec![None; k];
    let domain_set: IndexSet<FnId> = domain.iter().copied().collect();
    enumerate_domain(&domain_set, &mut tuple, 0, &mut |t| {
        if inconsistent {
            tuples.insert(t.to_vec());
            return;
        }
        let goal_inst = {
            let b: Binding = dvars.iter().copied().zip(t.iter().cloned()).collect();
            Clause {
                ordinary: query
                    .goal
                    .ordinary
                    .iter()
                    .map(|l| Literal {
                        positive: l.positive,
                        pred: l.pred,
                        args: l.args.iter().map(|x| apply_binding(x, &b)).collect(),
                    })
                    .collect(),
                recording: vec![],
                origin: query.goal.origin.clone(),
            }
        };
        let mut clauses = base.clone();
        ground_clause_instances(&goal_inst, &domain, &mut clauses);
        if prop_unsat(clauses) {
            tuples.insert(t.to_vec());
        }
    });
    Ok(GroundAnswerSet {
        tuples,
        exact: true,
        inconsistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{load_facts, parse_kb, parse_query, parse_schema};

    fn fixture(
        kb: &str,
        map: &str,
        tab: &str,
        q: &str,
    ) -> (SymbolTable, Vec<Clause>, FactStore, DeductiveQuery) {
        let st = SymbolTable::new();
        let schema = parse_schema(map, &st).unwrap();
        let kb = parse_kb(kb, &st).unwrap();
        let store = load_facts(&schema, tab, &st).unwrap();
        let query = parse_query(q, &st).unwrap();
        (st, kb, store, query)
    }

    #[test]
    fn direct_db_answer() {
        let (st, kb, store, query) = fixture(
            "",
            "table graduateStudent(id) as grStud/1.",
            "graduateStudent: a",
            "?- grStud(X).",
        );
        let ans = ground_answers(&store, &kb, &query, 5, &st).unwrap();
        assert!(ans.exact && !ans.inconsistent);
        let a = st.func("a", 0).unwrap();
        assert_eq!(ans.tuples.len(), 1);
        assert!(ans.tuples.contains(&vec![Term::constant(a)]));
    }

    #[test]
    fn university_fixture() {
        let (st, kb, store, query) = fixture(
            "~grStud(X) | pers(X).\n\
             ~pers(X) | stud(X) | nonStud(X).\n\
             ~nonStud(X) | ~grStud(X).\n",
            "table graduateStudent(id) as grStud/1.",
            "graduateStudent: s1\ngraduateStudent: s2\ngraduateStudent: s3",
            "?- stud(X).",
        );
        // non-Horn branch: second clause has two positive literals
        let ans = ground_answers(&store, &kb, &query, 3, &st).unwrap();
        assert!(!ans.inconsistent);
        assert_eq!(ans.tuples.len(), 3);
    }

    #[test]
    fn horn_chain() {
        let (st, kb, store, query) = fixture(
            "~p(X) | q(X).\n~q(X) | r(X).\n",
            "table p(id) as p/1.",
            "p: a\np: b",
            "?- r(X).",
        );
        let ans = ground_answers(&store, &kb, &query, 5, &st).unwrap();
        assert!(ans.exact);
        assert_eq!(ans.tuples.len(), 2);
    }

    #[test]
    fn inconsistent_kb_db() {
        let (st, kb, store, query) = fixture(
            "~p(X).",
            "table p(id) as p/1.",
            "p: a",
            "?- q(X).",
        );
        let ans = ground_answers(&store, &kb, &query, 5, &st).unwrap();
        assert!(ans.inconsistent);
        assert_eq!(ans.tuples.len(), 1); // whole (1-element) domain
    }

    #[test]
    fn boolean_query() {
        let (st, kb, store, query) = fixture(
            "",
            "table p(id) as p/1.",
            "p: a",
            "?- p(a).",
        );
        let ans = ground_answers(&store, &kb, &query, 5, &st).unwrap();
        assert_eq!(ans.tuples.len(), 1);
        assert!(ans.tuples.contains(&Vec::new()));
    }

    #[test]
    fn rejects_unsupported_fragment() {
        // non-Horn AND with functions
        let (st, kb, store, query) = fixture(
            "~p(X) | q(f(X)) | r(X).",
            "table p(id) as p/1.",
            "p: a",
            "?- q(X).",
        );
        assert!(ground_answers(&store, &kb, &query, 3, &st).is_err());
    }
}
