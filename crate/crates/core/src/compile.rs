//! Compiling schematic answers into SQL and concrete answers.
//!
//! A schematic answer `[] | γ` goes through case analysis, answer-literal
//! merging, normalization (projecting the answer literal onto the variables
//! shared with the db-part), flattening into `E_a ∨ E_c ∨ E_d ∨ D_x ∨ A`,
//! and finally SQL text generation. Instantiation evaluates the same
//! flattened form against the in-memory fact store.

use indexmap::IndexSet;

use crate::store::{constraint_satisfiable, solve_constraint, FactStore, Schema};
use crate::subst::{simultaneous_mgu, Substitution};
use crate::symbols::{FnId, PredId, PredKind, SymbolTable, VarId};
use crate::term::{Clause, Literal, Term};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AnswerCase {
    /// p = 0, n = 0: the empty clause — KB alone is inconsistent.
    KbRefutation,
    /// p = 0, n ≠ 0: the answer needs no database support.
    PureAnswer,
    /// p ≠ 0, n = 0: if the constraint is satisfiable, DB is inconsistent
    /// with KB.
    KbDbInconsistency,
    Standard,
}

pub fn classify_case(sa: &Clause, st: &SymbolTable) -> AnswerCase {
    let p = db_literals(sa, st).count();
    let n = answer_literals(sa, st).count();
    match (p, n) {
        (0, 0) => AnswerCase::KbRefutation,
        (0, _) => AnswerCase::PureAnswer,
        (_, 0) => AnswerCase::KbDbInconsistency,
        _ => AnswerCase::Standard,
    }
}

fn db_literals<'a>(sa: &'a Clause, st: &'a SymbolTable) -> impl Iterator<Item = &'a Literal> {
    sa.recording
        .iter()
        .filter(move |l| l.positive && st.pred_kind(l.pred) == PredKind::Db)
}

fn answer_literals<'a>(sa: &'a Clause, st: &'a SymbolTable) -> impl Iterator<Item = &'a Literal> {
    sa.recording
        .iter()
        .filter(move |l| !l.positive && st.pred_kind(l.pred) == PredKind::Answer)
}

/// Merging step: replace all answer literals by a single one instantiated with their
/// simultaneous mgu. `None` means the schematic answer covers no instances.
pub fn merge_answer_literals(sa: &Clause, st: &SymbolTable) -> Option<(Vec<Literal>, Literal)> {
    let answers: Vec<&Literal> = answer_literals(sa, st).collect();
    assert!(!answers.is_empty());
    let theta = if answers.len() == 1 {
        Substitution::new()
    } else {
        simultaneous_mgu(answers.iter().copied()).ok()?
    };
    let d = db_literals(sa, st)
        .map(|l| theta.apply_literal(l))
        .collect();
    Some((d, theta.apply_literal(answers[0])))
}

/// Ground answer component: constants, compounds over them, or a universal
/// marker for a variable unconstrained by the database part.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum AnsTerm {
    Const(FnId),
    App(FnId, Vec<AnsTerm>),
    Universal(usize),
}

pub type ConcreteAnswer = Vec<AnsTerm>;

pub fn render_ans_term(t: &AnsTerm, st: &SymbolTable) -> String {
    match t {
        AnsTerm::Const(c) => st.fn_name(*c),
        AnsTerm::App(f, args) => {
            let inner: Vec<String> = args.iter().map(|a| render_ans_term(a, st)).collect();
            format!("{}({})", st.fn_name(*f), inner.join(","))
        }
        AnsTerm::Universal(_) => "*".to_string(),
    }
}

/// Normal form: the answer literal restricted to `vars(A) ∩ vars(D)`,
/// plus the template rebuilding the original answer terms.
#[derive(Clone, Debug)]
pub struct NormalizedAnswer {
    pub db: Vec<Literal>,
    /// Core variables Z1..Zr in order of first occurrence in the answer
    /// literal; each occurs in `db`.
    pub core_vars: Vec<VarId>,
    /// Original answer arguments; variables not in `core_vars` are
    /// universally quantified.
    pub template: Vec<Term>,
    pub universal_vars: Vec<VarId>,
}

pub fn normalize_answer(db: Vec<Literal>, answer: &Literal) -> NormalizedAnswer {
    // canonical D order: predicate declaration order, stable within a
    // predicate — the derivation's recording order is an accident of clause
    // selection, and aliasing must be reproducible
    let mut db = db;
    db.sort_by_key(|l| l.pred);
    let mut db_vars: IndexSet<VarId> = IndexSet::new();
    for l in &db {
        l.for_each_var(&mut |v| {
            db_vars.insert(v);
        });
    }
    let mut core_vars: Vec<VarId> = Vec::new();
    let mut universal_vars: Vec<VarId> = Vec::new();
    for t in &answer.args {
        t.for_each_var(&mut |v| {
            if db_vars.contains(&v) {
                if !core_vars.contains(&v) {
                    core_vars.push(v);
                }
            } else if !universal_vars.contains(&v) {
                universal_vars.push(v);
            }
        });
    }
    NormalizedAnswer {
        db,
        core_vars,
        template: answer.args.clone(),
        universal_vars,
    }
}

/// A position in the flattened db-part: 1-based literal index and 1-based
/// argument index (alias number, column number).
pub type Pos = (usize, usize);

#[derive(Clone, Debug)]
pub struct FlattenedAnswer {
    /// D_x: predicate of each literal, in γ order (aliases R1..Rp).
    pub preds: Vec<PredId>,
    /// E_a: for core variable `e` (by index), its defining position.
    pub ea: Vec<Pos>,
    /// E_c: constant bindings.
    pub ec: Vec<(Pos, FnId)>,
    /// E_d: redundancy-free variable-variable links, rendered with the
    /// endpoint minimal under (column, alias) on the left.
    pub ed: Vec<(Pos, Pos)>,
    pub k: usize,
}

/// Flattening. Fails when a db-literal argument is a compound term —
/// such schematic answers cannot be turned into relational queries.
pub fn flatten(norm: &NormalizedAnswer) -> Option<FlattenedAnswer> {
    let mut preds = Vec::new();
    let mut ec = Vec::new();
    let mut occurrences: Vec<(VarId, Pos)> = Vec::new();
    for (i, l) in norm.db.iter().enumerate() {
        preds.push(l.pred);
        for (j, t) in l.args.iter().enumerate() {
            let pos = (i + 1, j + 1);
            match t {
                Term::Var(v) => occurrences.push((*v, pos)),
                Term::App(f, args) if args.is_empty() => ec.push((pos, *f)),
                Term::App(..) => return None,
            }
        }
    }
    let mut ea = Vec::new();
    for z in &norm.core_vars {
        let first = occurrences
            .iter()
            .filter(|(v, _)| v == z)
            .map(|(_, p)| *p)
            .min()
            .expect("core variable occurs in db-part");
        ea.push(first);
    }
    // one spanning path per variable over its sorted occurrence set
    let mut ed = Vec::new();
    let mut seen: Vec<VarId> = Vec::new();
    for (v, _) in &occurrences {
        if seen.contains(v) {
            continue;
        }
        seen.push(*v);
        let mut occ: Vec<Pos> = occurrences
            .iter()
            .filter(|(u, _)| u == v)
            .map(|(_, p)| *p)
            .collect();
        occ.sort();
        for w in occ.windows(2) {
            ed.push((w[0], w[1]));
        }
    }
    Some(FlattenedAnswer {
        preds,
        ea,
        ec,
        ed,
        k: norm.core_vars.len(),
    })
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SqlConjunct {
    ColConst { pos: Pos, value: String },
    ColCol { left: Pos, right: Pos },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SqlQuery {
    /// (alias index, column name, output name) per selected column.
    pub select: Vec<(usize, String, String)>,
    /// (table name, alias index) in D_x order.
    pub from: Vec<(String, usize)>,
    pub conjuncts: Vec<SqlConjunct>,
    /// k = 0: boolean existence query rendered as `SELECT 1`.
    pub boolean: bool,
}

fn quote_constant(name: &str) -> String {
    if !name.is_empty() && name.bytes().all(|b| b.is_ascii_digit()) {
        name.to_string()
    } else {
        format!("'{}'", name.replace('\'', "''"))
    }
}

fn column_name(schema: &Schema, pred: PredId, j: usize) -> String {
    let (_, info) = schema.table_for(pred).expect("db predicate has a table");
    info.columns[j - 1].clone()
}

/// Build the dialect-neutral SQL structure. `names[e]` is the output name
/// for core variable `e`.
pub fn to_sql_query(
    flat: &FlattenedAnswer,
    schema: &Schema,
    st: &SymbolTable,
    names: &[String],
) -> SqlQuery {
    let col = |pos: Pos| column_name(schema, flat.preds[pos.0 - 1], pos.1);
    let select = flat
        .ea
        .iter()
        .enumerate()
        .map(|(e, &pos)| (pos.0, col(pos), names[e].clone()))
        .collect();
    let from = flat
        .preds
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let (table, _) = schema.table_for(*p).expect("db predicate has a table");
            (table.to_string(), i + 1)
        })
        .collect();
    let mut conjuncts = Vec::new();
    for (pos, c) in &flat.ec {
        conjuncts.push(SqlConjunct::ColConst {
            pos: *pos,
            value: quote_constant(&st.fn_name(*c)),
        });
    }
    for &(a, b) in &flat.ed {
        // the endpoint with the smaller (column, alias) pair reads better on
        // the left: `R1.id = R2.student`, `R3.id = R2.course`
        let (left, right) = if (a.1, a.0) <= (b.1, b.0) { (a, b) } else { (b, a) };
        conjuncts.push(SqlConjunct::ColCol { left, right });
    }
    SqlQuery {
        select,
        from,
        conjuncts,
        boolean: flat.k == 0,
    }
}

impl SqlQuery {
    /// Render the SQL text, `;`-terminated. Deterministic: identical inputs
    /// give byte-identical output.
    pub fn render(&self, flat: &FlattenedAnswer, schema: &Schema) -> String {
        let col = |pos: Pos| column_name(schema, flat.preds[pos.0 - 1], pos.1);
        let mut out = String::from("SELECT ");
        if self.boolean {
            out.push('1');
        } else {
            let cols: Vec<String> = self
                .select
                .iter()
                .map(|(alias, c, name)| format!("R{alias}.{c} AS {name}"))
                .collect();
            out.push_str(&cols.join(", "));
        }
        out.push_str(" FROM ");
        let tables: Vec<String> = self
            .from
            .iter()
            .map(|(table, alias)| format!("{table} AS R{alias}"))
            .collect();
        out.push_str(&tables.join(", "));
        let conjuncts: Vec<String> = self
            .conjuncts
            .iter()
            .map(|c| match c {
                SqlConjunct::ColConst { pos, value } => {
                    format!("R{}.{} = {}", pos.0, col(*pos), value)
                }
                SqlConjunct::ColCol { left, right } => format!(
                    "R{}.{} = R{}.{}",
                    left.0,
                    col(*left),
                    right.0,
                    col(*right)
                ),
            })
            .collect();
        if !conjuncts.is_empty() {
            out.push_str(" WHERE ");
            out.push_str(&conjuncts.join(" AND "));
        }
        out.push(';');
        out
    }
}

pub fn to_sql(flat: &FlattenedAnswer, schema: &Schema, st: &SymbolTable, names: &[String]) -> String {
    to_sql_query(flat, schema, st, names).render(flat, schema)
}

/// Evaluate the flattened form on the store: solutions of D_x ∧ E_c ∧ E_d
/// projected through E_a, as tuples over the core variables.
pub fn eval_flat(
    flat: &FlattenedAnswer,
    store: &FactStore,
    st: &SymbolTable,
) -> IndexSet<Vec<FnId>> {
    // union-find over positions, collapsing E_d links
    let mut positions: Vec<Pos> = Vec::new();
    for (i, &p) in flat.preds.iter().enumerate() {
        for j in 1..=st.pred_arity(p) {
            positions.push((i + 1, j));
        }
    }
    let index_of = |pos: Pos| positions.iter().position(|&q| q == pos).unwrap();
    let mut parent: Vec<usize> = (0..positions.len()).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    for &(a, b) in &flat.ed {
        let (ra, rb) = (find(&mut parent, index_of(a)), find(&mut parent, index_of(b)));
        parent[ra] = rb;
    }
    // term per class: a constant if E_c binds any member, else a fresh var
    let mut class_term: Vec<Option<Term>> = vec![None; positions.len()];
    for (pos, c) in &flat.ec {
        let r = find(&mut parent, index_of(*pos));
        class_term[r] = Some(Term::constant(*c));
    }
    for i in 0..positions.len() {
        let r = find(&mut parent, i);
        if class_term[r].is_none() {
            class_term[r] = Some(Term::Var(st.fresh_var()));
        }
    }
    let mut lits = Vec::new();
    let mut cursor = 0;
    for &p in &flat.preds {
        let arity = st.pred_arity(p);
        let args: Vec<Term> = (0..arity)
            .map(|j| {
                let r = find(&mut parent, cursor + j);
                class_term[r].clone().unwrap()
            })
            .collect();
        cursor += arity;
        lits.push(Literal::new(true, p, args));
    }
    let solutions = match solve_constraint(store, &lits) {
        Ok(s) => s,
        Err(_) => return IndexSet::new(),
    };
    let mut out = IndexSet::new();
    for sol in solutions {
        let tuple: Vec<FnId> = flat
            .ea
            .iter()
            .map(|&pos| {
                let r = find(&mut parent, index_of(pos));
                match class_term[r].as_ref().unwrap() {
                    Term::Var(v) => sol
                        .iter()
                        .find(|(u, _)| u == v)
                        .map(|(_, c)| *c)
                        .expect("solution binds every variable"),
                    t => t.as_constant().unwrap(),
                }
            })
            .collect();
        out.insert(tuple);
    }
    out
}

/// The outcome of compiling one schematic answer.
#[derive(Clone, Debug)]
pub enum Compiled {
    /// The empty clause: KB alone is inconsistent.
    KbRefutation,
    /// p ≠ 0, n = 0: carries the constraint; if satisfiable over the store,
    /// DB is inconsistent with KB.
    KbDbInconsistency { db: Vec<Literal> },
    /// Answer literals are not simultaneously unifiable.
    NoInstances,
    /// A db-literal has a compound argument; not expressible relationally.
    Unsupported,
    /// p = 0: the single (possibly universally quantified) answer.
    PureAnswer(ConcreteAnswer),
    Query(CompiledQuery),
}

#[derive(Clone, Debug)]
pub struct CompiledQuery {
    pub norm: NormalizedAnswer,
    pub flat: FlattenedAnswer,
    pub sql: String,
    pub names: Vec<String>,
}

/// Output name for each core variable: the name of the first distinguished
/// position of the template mentioning it, falling back to `Z<n>`.
fn core_names(norm: &NormalizedAnswer, query_names: &[String]) -> Vec<String> {
    norm.core_vars
        .iter()
        .enumerate()
        .map(|(e, z)| {
            for (pos, t) in norm.template.iter().enumerate() {
                if t.contains_var(*z) {
                    if let Some(n) = query_names.get(pos) {
                        return n.clone();
                    }
                }
            }
            format!("Z{}", e + 1)
        })
        .collect()
}

fn term_to_ans(t: &Term, universal: &mut Vec<VarId>, core: &[VarId]) -> AnsTerm {
    match t {
        Term::Var(v) => {
            debug_assert!(!core.contains(v));
            let n = match universal.iter().position(|u| u == v) {
                Some(n) => n,
                None => {
                    universal.push(*v);
                    universal.len() - 1
                }
            };
            AnsTerm::Universal(n)
        }
        Term::App(f, args) if args.is_empty() => AnsTerm::Const(*f),
        Term::App(f, args) => AnsTerm::App(
            *f,
            args.iter()
                .map(|a| term_to_ans(a, universal, core))
                .collect(),
        ),
    }
}

/// Run the full compilation pipeline on one schematic answer. `query_names` are the
/// distinguished-variable names of the query, in answer-literal position
/// order.
pub fn compile(sa: &Clause, schema: &Schema, st: &SymbolTable, query_names: &[String]) -> Compiled {
    match classify_case(sa, st) {
        AnswerCase::KbRefutation => Compiled::KbRefutation,
        AnswerCase::KbDbInconsistency => Compiled::KbDbInconsistency {
            db: db_literals(sa, st).cloned().collect(),
        },
        AnswerCase::PureAnswer => {
            let Some((_, answer)) = merge_answer_literals(sa, st) else {
                return Compiled::NoInstances;
            };
            let mut universal = Vec::new();
            let ans = answer
                .args
                .iter()
                .map(|t| term_to_ans(t, &mut universal, &[]))
                .collect();
            Compiled::PureAnswer(ans)
        }
        AnswerCase::Standard => {
            let Some((db, answer)) = merge_answer_literals(sa, st) else {
                return Compiled::NoInstances;
            };
            let norm = normalize_answer(db, &answer);
            let Some(flat) = flatten(&norm) else {
                return Compiled::Unsupported;
            };
            let names = core_names(&norm, query_names);
            let sql = to_sql(&flat, schema, st, &names);
            Compiled::Query(CompiledQuery {
                norm,
                flat,
                sql,
                names,
            })
        }
    }
}

/// Instantiate a compiled query over the store: evaluate the flattened form
/// and substitute core values into the template.
pub fn instantiate_query(
    cq: &CompiledQuery,
    store: &FactStore,
    st: &SymbolTable,
) -> IndexSet<ConcreteAnswer> {
    let tuples = eval_flat(&cq.flat, store, st);
    let mut out = IndexSet::new();
    for tuple in tuples {
        let subst: Vec<(VarId, FnId)> = cq
            .norm
            .core_vars
            .iter()
            .copied()
            .zip(tuple.iter().copied())
            .collect();
        let mut universal = Vec::new();
        let ans: ConcreteAnswer = cq
            .norm
            .template
            .iter()
            .map(|t| instantiate_template(t, &subst, &mut universal))
            .collect();
        out.insert(ans);
    }
    out
}

fn instantiate_template(
    t: &Term,
    subst: &[(VarId, FnId)],
    universal: &mut Vec<VarId>,
) -> AnsTerm {
    match t {
        Term::Var(v) => match subst.iter().find(|(u, _)| u == v) {
            Some((_, c)) => AnsTerm::Const(*c),
            None => {
                let n = match universal.iter().position(|u| u == v) {
                    Some(n) => n,
                    None => {
                        universal.push(*v);
                        universal.len() - 1
                    }
                };
                AnsTerm::Universal(n)
            }
        },
        Term::App(f, args) if args.is_empty() => AnsTerm::Const(*f),
        Term::App(f, args) => AnsTerm::App(
            *f,
            args.iter()
                .map(|a| instantiate_template(a, subst, universal))
                .collect(),
        ),
    }
}

/// Full pipeline: set of concrete answers covered by a schematic answer.
/// `KbDbInconsistency` and `KbRefutation` yield no tuples here; the driver
/// reports them separately.
pub fn instantiate(
    sa: &Clause,
    schema: &Schema,
    store: &FactStore,
    st: &SymbolTable,
    query_names: &[String],
) -> IndexSet<ConcreteAnswer> {
    match compile(sa, schema, st, query_names) {
        Compiled::PureAnswer(a) => {
            let mut s = IndexSet::new();
            s.insert(a);
            s
        }
        Compiled::Query(cq) => instantiate_query(&cq, store, st),
        _ => IndexSet::new(),
    }
}

/// E_d redundancy: an equality literal is redundant if the other conjuncts
/// already force the same equality. Checked via transitive closure.
pub fn ed_redundancy_free(flat: &FlattenedAnswer) -> bool {
    for skip in 0..flat.ed.len() {
        let rest: Vec<(Pos, Pos)> = flat
            .ed
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .map(|(_, e)| *e)
            .collect();
        if connected(&rest, flat.ed[skip].0, flat.ed[skip].1) {
            return false;
        }
    }
    true
}

fn connected(edges: &[(Pos, Pos)], from: Pos, to: Pos) -> bool {
    let mut frontier = vec![from];
    let mut seen = vec![from];
    while let Some(x) = frontier.pop() {
        if x == to {
            return true;
        }
        for &(a, b) in edges {
            let next = if a == x {
                Some(b)
            } else if b == x {
                Some(a)
            } else {
                None
            };
            if let Some(n) = next {
                if !seen.contains(&n) {
                    seen.push(n);
                    frontier.push(n);
                }
            }
        }
    }
    false
}

/// Check whether a p≠0, n=0 schematic answer actually witnesses
/// inconsistency of DB with KB.
pub fn db_inconsistency_witnessed(db: &[Literal], store: &FactStore) -> bool {
    constraint_satisfiable(store, db).unwrap_or(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::SymbolTable;
    use crate::term::ClauseOrigin;

    fn setup() -> (SymbolTable, Schema) {
        let st = SymbolTable::new();
        let mut schema = Schema::new();
        let gr = st.pred("grStud", 1, PredKind::Db).unwrap();
        schema
            .add_table("graduateStudent", vec!["id".into()], gr, &st)
            .unwrap();
        let person = st.pred("person", 1, PredKind::Db).unwrap();
        schema
            .add_table("person", vec!["id".into()], person, &st)
            .unwrap();
        let takes = st.pred("takesCourse", 2, PredKind::Db).unwrap();
        schema
            .add_table(
                "takesCourse",
                vec!["student".into(), "course".into()],
                takes,
                &st,
            )
            .unwrap();
        let course = st.pred("course", 1, PredKind::Db).unwrap();
        schema
            .add_table("course", vec!["id".into()], course, &st)
            .unwrap();
        (st, schema)
    }

    fn sa(st: &SymbolTable, answer_args: Vec<Vec<Term>>, db: Vec<Literal>) -> Clause {
        let at = st.answer_pred(answer_args.first().map_or(0, |a| a.len())).unwrap();
        let mut rec: Vec<Literal> = answer_args
            .into_iter()
            .map(|args| Literal::new(false, at, args))
            .collect();
        rec.extend(db);
        Clause::new(vec![], rec, ClauseOrigin::Kb)
    }

    #[test]
    fn university_sql() {
        let (st, schema) = setup();
        let x = st.var("X");
        let gr = st.lookup_pred("grStud").unwrap();
        let clause = sa(
            &st,
            vec![vec![Term::Var(x)]],
            vec![Literal::new(true, gr, vec![Term::Var(x)])],
        );
        let Compiled::Query(cq) = compile(&clause, &schema, &st, &["X".into()]) else {
            panic!("expected standard case");
        };
        assert_eq!(cq.sql, "SELECT R1.id AS X FROM graduateStudent AS R1;");
    }

    #[test]
    fn join_sql() {
        let (st, schema) = setup();
        let x = st.var("X");
        let y = st.var("Y");
        let person = st.lookup_pred("person").unwrap();
        let takes = st.lookup_pred("takesCourse").unwrap();
        let course = st.lookup_pred("course").unwrap();
        let clause = sa(
            &st,
            vec![vec![Term::Var(x)]],
            vec![
                Literal::new(true, person, vec![Term::Var(x)]),
                Literal::new(true, takes, vec![Term::Var(x), Term::Var(y)]),
                Literal::new(true, course, vec![Term::Var(y)]),
            ],
        );
        let Compiled::Query(cq) = compile(&clause, &schema, &st, &["X".into()]) else {
            panic!("expected standard case");
        };
        assert_eq!(
            cq.sql,
            "SELECT R1.id AS X FROM person AS R1, takesCourse AS R2, course AS R3 \
             WHERE R1.id = R2.student AND R3.id = R2.course;"
        );
        assert!(ed_redundancy_free(&cq.flat));
    }

    #[test]
    fn constant_binding_sql() {
        // p(a, X) → WHERE R1.c1 = 'a'
        let st = SymbolTable::new();
        let mut schema = Schema::new();
        let p = st.pred("p", 2, PredKind::Db).unwrap();
        schema
            .add_table("p", vec!["c1".into(), "c2".into()], p, &st)
            .unwrap();
        let a = st.func("a", 0).unwrap();
        let x = st.var("X");
        let clause = sa(
            &st,
            vec![vec![Term::Var(x)]],
            vec![Literal::new(true, p, vec![Term::constant(a), Term::Var(x)])],
        );
        let Compiled::Query(cq) = compile(&clause, &schema, &st, &["X".into()]) else {
            panic!("expected standard case");
        };
        assert_eq!(cq.sql, "SELECT R1.c2 AS X FROM p AS R1 WHERE R1.c1 = 'a';");
    }

    #[test]
    fn quoting() {
        assert_eq!(quote_constant("123"), "123");
        assert_eq!(quote_constant("s1"), "'s1'");
        assert_eq!(quote_constant("o'brien"), "'o''brien'");
    }

    #[test]
    fn merge_unifies_or_rejects() {
        let (st, _) = setup();
        let x = st.var("X");
        let y = st.var("Y");
        let gr = st.lookup_pred("grStud").unwrap();
        // [] | ~@(X), ~@(Y), grStud(X) → single @-literal, db instantiated
        let clause = sa(
            &st,
            vec![vec![Term::Var(x)], vec![Term::Var(y)]],
            vec![Literal::new(true, gr, vec![Term::Var(x)])],
        );
        let (db, ans) = merge_answer_literals(&clause, &st).unwrap();
        assert_eq!(db.len(), 1);
        assert_eq!(ans.args.len(), 1);
        // [] | ~@(a), ~@(b) → no instances
        let a = st.func("a", 0).unwrap();
        let b = st.func("b", 0).unwrap();
        let clause = sa(
            &st,
            vec![vec![Term::constant(a)], vec![Term::constant(b)]],
            vec![],
        );
        assert!(matches!(
            compile(&clause, &Schema::new(), &st, &[]),
            Compiled::NoInstances
        ));
    }

    #[test]
    fn normalize_universal_and_projection() {
        let (st, _) = setup();
        let x = st.var("X");
        let w = st.var("W");
        let f = st.func("f", 1).unwrap();
        let gr = st.lookup_pred("grStud").unwrap();
        // [] | ~@(f(X), W), grStud(X): core {X}, W universal
        let at = st.answer_pred(2).unwrap();
        let answer = Literal::new(
            false,
            at,
            vec![Term::App(f, vec![Term::Var(x)]), Term::Var(w)],
        );
        let db = vec![Literal::new(true, gr, vec![Term::Var(x)])];
        let norm = normalize_answer(db, &answer);
        assert_eq!(norm.core_vars, vec![x]);
        assert_eq!(norm.universal_vars, vec![w]);
    }

    #[test]
    fn case_classification() {
        let (st, _) = setup();
        let empty = Clause::new(vec![], vec![], ClauseOrigin::Kb);
        assert_eq!(classify_case(&empty, &st), AnswerCase::KbRefutation);
        let gr = st.lookup_pred("grStud").unwrap();
        let x = st.var("X");
        let dbonly = Clause::new(
            vec![],
            vec![Literal::new(true, gr, vec![Term::Var(x)])],
            ClauseOrigin::Kb,
        );
        assert_eq!(classify_case(&dbonly, &st), AnswerCase::KbDbInconsistency);
    }

    #[test]
    fn instantiate_over_store() {
        let (st, schema) = setup();
        let gr = st.lookup_pred("grStud").unwrap();
        let mut store = FactStore::new();
        for i in 1..=3 {
            let c = st.func(&format!("s{i}"), 0).unwrap();
            store.insert(gr, vec![c], &st).unwrap();
        }
        let x = st.var("X");
        let clause = sa(
            &st,
            vec![vec![Term::Var(x)]],
            vec![Literal::new(true, gr, vec![Term::Var(x)])],
        );
        let answers = instantiate(&clause, &schema, &store, &st, &["X".into()]);
        assert_eq!(answers.len(), 3);
        let s1 = st.func("s1", 0).unwrap();
        assert!(answers.contains(&vec![AnsTerm::Const(s1)]));
    }
}
