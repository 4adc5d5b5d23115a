//! In-memory relational store: the database as a set of ground atoms,
//! abstraction building, and conjunctive-constraint evaluation.

use indexmap::{IndexMap, IndexSet};

use crate::error::{Error, Result};
use crate::symbols::{FnId, PredId, SymbolTable, VarId};
use crate::term::{Clause, ClauseOrigin, Literal, Term};

#[derive(Clone, Debug)]
pub struct TableInfo {
    pub columns: Vec<String>,
    pub pred: PredId,
}

/// Predicate/table bijection with ordered column names.
#[derive(Clone, Default, Debug)]
pub struct Schema {
    tables: IndexMap<String, TableInfo>,
    by_pred: IndexMap<PredId, String>,
}

impl Schema {
    pub fn new() -> Schema {
        Schema::default()
    }

    pub fn add_table(
        &mut self,
        name: &str,
        columns: Vec<String>,
        pred: PredId,
        st: &SymbolTable,
    ) -> Result<()> {
        if self.tables.contains_key(name) {
            return Err(Error::DuplicateTable(name.to_string()));
        }
        if self.by_pred.contains_key(&pred) {
            return Err(Error::DuplicatePredicate(st.pred_name(pred)));
        }
        {
            let mut seen = Vec::new();
            for c in &columns {
                if seen.contains(&c) {
                    return Err(Error::Invalid(format!(
                        "duplicate column `{c}` in table `{name}`"
                    )));
                }
                seen.push(c);
            }
        }
        self.tables.insert(
            name.to_string(),
            TableInfo {
                columns,
                pred,
            },
        );
        self.by_pred.insert(pred, name.to_string());
        Ok(())
    }

    pub fn table(&self, name: &str) -> Option<&TableInfo> {
        self.tables.get(name)
    }

    pub fn table_for(&self, pred: PredId) -> Option<(&str, &TableInfo)> {
        self.by_pred
            .get(&pred)
            .map(|n| (n.as_str(), &self.tables[n]))
    }

    pub fn preds(&self) -> impl Iterator<Item = PredId> + '_ {
        self.by_pred.keys().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }
}

/// Ground facts, one deduplicated tuple set per predicate. Insertion order
/// is preserved so answer enumeration is deterministic.
#[derive(Clone, Default, Debug)]
pub struct FactStore {
    rel: IndexMap<PredId, IndexSet<Vec<FnId>>>,
}

impl FactStore {
    pub fn new() -> FactStore {
        FactStore::default()
    }

    pub fn insert(&mut self, pred: PredId, tuple: Vec<FnId>, st: &SymbolTable) -> Result<()> {
        let arity = st.pred_arity(pred);
        if tuple.len() != arity {
            return Err(Error::ArityClash {
                name: st.pred_name(pred),
                declared: arity,
                used: tuple.len(),
            });
        }
        self.rel.entry(pred).or_default().insert(tuple);
        Ok(())
    }

    pub fn tuples(&self, pred: PredId) -> impl Iterator<Item = &Vec<FnId>> {
        self.rel.get(&pred).into_iter().flatten()
    }

    pub fn contains(&self, pred: PredId, tuple: &[FnId]) -> bool {
        self.rel
            .get(&pred)
            .map(|s| s.contains(tuple))
            .unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.rel.values().map(IndexSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn preds(&self) -> impl Iterator<Item = PredId> + '_ {
        self.rel.keys().copied()
    }

    /// All constants occurring in any tuple, in first-seen order.
    pub fn active_domain(&self) -> IndexSet<FnId> {
        let mut out = IndexSet::new();
        for set in self.rel.values() {
            for t in set {
                out.extend(t.iter().copied());
            }
        }
        out
    }
}

/// One abstraction clause `p(X1..Xk) | p(X1..Xk)` per table, with fresh
/// pairwise-distinct variables.
pub fn build_abstraction(schema: &Schema, st: &SymbolTable) -> Vec<Clause> {
    schema
        .preds()
        .map(|pred| abstraction_clause(pred, st))
        .collect()
}

fn abstraction_clause(pred: PredId, st: &SymbolTable) -> Clause {
    let arity = st.pred_arity(pred);
    let args: Vec<Term> = (0..arity).map(|_| Term::Var(st.fresh_var())).collect();
    let atom = Literal::new(true, pred, args);
    Clause::new(vec![atom.clone()], vec![atom], ClauseOrigin::Abstraction)
}

/// Replace the abstraction for `pred` by one specialized clause per value,
/// fixing the given 1-based column to that constant.
pub fn refine_abstraction(
    schema: &Schema,
    st: &SymbolTable,
    pred: PredId,
    column: usize,
    values: &[FnId],
) -> Result<Vec<Clause>> {
    let (table, info) = schema
        .table_for(pred)
        .ok_or_else(|| Error::UnknownPredicate(st.pred_name(pred)))?;
    if column == 0 || column > info.columns.len() {
        return Err(Error::UnknownColumn {
            table: table.to_string(),
            column,
        });
    }
    if values.is_empty() {
        return Err(Error::Invalid("refinement needs at least one value".into()));
    }
    let arity = info.columns.len();
    Ok(values
        .iter()
        .map(|&v| {
            let args: Vec<Term> = (0..arity)
                .map(|j| {
                    if j + 1 == column {
                        Term::constant(v)
                    } else {
                        Term::Var(st.fresh_var())
                    }
                })
                .collect();
            let atom = Literal::new(true, pred, args);
            Clause::new(vec![atom.clone()], vec![atom], ClauseOrigin::Abstraction)
        })
        .collect())
}

/// A solution assigns a constant to every variable of the constraint.
pub type Solution = Vec<(VarId, FnId)>;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct UnsupportedConstraint;

fn flat_args(atom: &Literal) -> Result2<Vec<Slot>> {
    atom.args
        .iter()
        .map(|t| match t {
            Term::Var(v) => Ok(Slot::Var(*v)),
            Term::App(f, args) if args.is_empty() => Ok(Slot::Const(*f)),
            _ => Err(UnsupportedConstraint),
        })
        .collect()
}

type Result2<T> = std::result::Result<T, UnsupportedConstraint>;

#[derive(Clone, Copy)]
enum Slot {
    Var(VarId),
    Const(FnId),
}

fn search(
    store: &FactStore,
    atoms: &[(PredId, Vec<Slot>)],
    idx: usize,
    binding: &mut Vec<(VarId, FnId)>,
    mut found: &mut dyn FnMut(&[(VarId, FnId)]) -> bool,
) -> bool {
    if idx == atoms.len() {
        return found(binding);
    }
    let (pred, slots) = &atoms[idx];
    'tuples: for tuple in store.tuples(*pred) {
        let mark = binding.len();
        for (slot, &val) in slots.iter().zip(tuple) {
            match slot {
                Slot::Const(c) => {
                    if *c != val {
                        binding.truncate(mark);
                        continue 'tuples;
                    }
                }
                Slot::Var(v) => {
                    if let Some(&(_, bound)) = binding.iter().find(|(u, _)| u == v) {
                        if bound != val {
                            binding.truncate(mark);
                            continue 'tuples;
                        }
                    } else {
                        binding.push((*v, val));
                    }
                }
            }
        }
        if search(store, atoms, idx + 1, binding, &mut found) {
            return true;
        }
        binding.truncate(mark);
    }
    false
}

fn prepare(atoms: &[Literal]) -> Result2<Vec<(PredId, Vec<Slot>)>> {
    atoms
        .iter()
        .map(|a| Ok((a.pred, flat_args(a)?)))
        .collect()
}

/// Enumerate all substitutions over the atoms' variables with every atom
/// instance in the store. The join runs left to right with bound-variable
/// propagation; solutions are deduplicated on the variable projection.
pub fn solve_constraint(
    store: &FactStore,
    atoms: &[Literal],
) -> Result2<Vec<Solution>> {
    let prepared = prepare(atoms)?;
    let mut seen: IndexSet<Solution> = IndexSet::new();
    let mut binding = Vec::new();
    search(store, &prepared, 0, &mut binding, &mut |b| {
        let mut sol: Solution = b.to_vec();
        sol.sort_by_key(|(v, _)| *v);
        seen.insert(sol);
        false
    });
    Ok(seen.into_iter().collect())
}

/// True iff the constraint has at least one solution; stops at the first.
pub fn constraint_satisfiable(store: &FactStore, atoms: &[Literal]) -> Result2<bool> {
    if atoms.is_empty() {
        return Ok(true);
    }
    let prepared = prepare(atoms)?;
    let mut binding = Vec::new();
    Ok(search(store, &prepared, 0, &mut binding, &mut |_| true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{PredKind, SymbolTable};

    fn setup() -> (SymbolTable, Schema) {
        let st = SymbolTable::new();
        let mut schema = Schema::new();
        let gr = st.pred("grStud", 1, PredKind::Db).unwrap();
        let tc = st.pred("takesCourse", 2, PredKind::Db).unwrap();
        schema
            .add_table("graduateStudent", vec!["id".into()], gr, &st)
            .unwrap();
        schema
            .add_table(
                "takesCourse",
                vec!["student".into(), "course".into()],
                tc,
                &st,
            )
            .unwrap();
        (st, schema)
    }

    #[test]
    fn abstraction_shapes() {
        let (st, schema) = setup();
        let abs = build_abstraction(&schema, &st);
        assert_eq!(abs.len(), 2);
        for c in &abs {
            assert_eq!(c.ordinary.len(), 1);
            assert_eq!(c.ordinary, c.recording);
            let vars = c.vars();
            assert_eq!(vars.len(), c.ordinary[0].args.len());
        }
        assert!(build_abstraction(&Schema::new(), &st).is_empty());
    }

    #[test]
    fn refinement_binds_column() {
        let (st, schema) = setup();
        let tc = st.lookup_pred("takesCourse").unwrap();
        let a = st.func("a", 0).unwrap();
        let b = st.func("b", 0).unwrap();
        let refined = refine_abstraction(&schema, &st, tc, 1, &[a, b]).unwrap();
        assert_eq!(refined.len(), 2);
        assert_eq!(refined[0].ordinary[0].args[0], Term::constant(a));
        assert!(matches!(refined[0].ordinary[0].args[1], Term::Var(_)));
        assert_eq!(refined[1].ordinary[0].args[0], Term::constant(b));
        let single = refine_abstraction(&schema, &st, tc, 2, &[a]).unwrap();
        assert_eq!(single.len(), 1);
    }

    #[test]
    fn refinement_covers_store() {
        // every stored fact stays an instance of some abstraction clause
        let (st, schema) = setup();
        let tc = st.lookup_pred("takesCourse").unwrap();
        let consts: Vec<FnId> = (0..4).map(|i| st.func(&format!("c{i}"), 0).unwrap()).collect();
        let mut store = FactStore::new();
        for i in 0..4 {
            store
                .insert(tc, vec![consts[i], consts[(i + 1) % 4]], &st)
                .unwrap();
        }
        let refined = refine_abstraction(&schema, &st, tc, 1, &consts).unwrap();
        for tuple in store.tuples(tc) {
            let covered = refined.iter().any(|c| {
                let mut binding = std::collections::HashMap::new();
                let target = Literal::new(
                    true,
                    tc,
                    tuple.iter().map(|&f| Term::constant(f)).collect(),
                );
                crate::subst::match_literal(&mut binding, &c.ordinary[0], &target)
            });
            assert!(covered);
        }
    }

    #[test]
    fn join_enumeration_and_satisfiability() {
        let (st, _) = setup();
        let gr = st.lookup_pred("grStud").unwrap();
        let tc = st.lookup_pred("takesCourse").unwrap();
        let mut store = FactStore::new();
        let s: Vec<FnId> = (0..3).map(|i| st.func(&format!("s{i}"), 0).unwrap()).collect();
        let c0 = st.func("c0", 0).unwrap();
        for &x in &s {
            store.insert(gr, vec![x], &st).unwrap();
        }
        store.insert(tc, vec![s[0], c0], &st).unwrap();
        let x = st.var("X");
        let y = st.var("Y");
        let q = vec![Literal::new(true, gr, vec![Term::Var(x)])];
        assert_eq!(solve_constraint(&store, &q).unwrap().len(), 3);
        let join = vec![
            Literal::new(true, gr, vec![Term::Var(x)]),
            Literal::new(true, tc, vec![Term::Var(x), Term::Var(y)]),
        ];
        let sols = solve_constraint(&store, &join).unwrap();
        assert_eq!(sols.len(), 1);
        assert!(constraint_satisfiable(&store, &join).unwrap());
        assert!(constraint_satisfiable(&store, &[]).unwrap());
        // empty store
        let empty = FactStore::new();
        assert!(solve_constraint(&empty, &q).unwrap().is_empty());
        // compound argument is unsupported
        let f = st.func("f", 1).unwrap();
        let bad = vec![Literal::new(
            true,
            gr,
            vec![Term::App(f, vec![Term::Var(x)])],
        )];
        assert!(solve_constraint(&store, &bad).is_err());
    }
}
