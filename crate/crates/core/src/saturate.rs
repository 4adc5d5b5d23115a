//! Given-clause saturation over `DB' ∪ KB ∪ {goal}` with recording literals.
//!
//! Clauses are picked lightest-first (symbol count, age tie-break). Every
//! derived clause with an empty ordinary part is emitted as a schematic
//! answer as soon as it survives pruning and subsumption. Recording parts
//! are multiset-unioned and instantiated by the inference unifier; the
//! inference log keeps enough to replay that invariant.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::ordering::{eligible_literals, CalculusMode};
use crate::store::{constraint_satisfiable, FactStore};
use crate::subst::{simultaneous_mgu, unify_atoms, Substitution, UnifyError};
use crate::subsume::subsumes;
use crate::symbols::{PredKind, SymbolTable, VarId};
use crate::term::{Clause, ClauseOrigin, Literal, Rule, Term};

#[derive(Clone, Debug)]
pub struct SaturationConfig {
    pub calculus: CalculusMode,
    pub prune_db: bool,
    pub prune_answers: bool,
    pub subsumption: bool,
    pub max_derived: usize,
    pub timeout: Duration,
    /// Skip the db-constraint check for recording parts above this size.
    pub db_check_threshold: usize,
    /// Restrict the db-constraint check to these predicates (the ones the
    /// store actually backs); `None` checks every db literal. Document
    /// abstractions have no local data, so their literals must not be
    /// tested against the store.
    pub backed_preds: Option<Vec<crate::symbols::PredId>>,
}

impl Default for SaturationConfig {
    fn default() -> Self {
        SaturationConfig {
            calculus: CalculusMode::Unordered,
            prune_db: true,
            prune_answers: true,
            subsumption: true,
            max_derived: 100_000,
            timeout: Duration::from_secs(60),
            db_check_threshold: 8,
            backed_preds: None,
        }
    }
}

/// One abstraction input clause; `leaf` provenance indexes are assigned in
/// order and surface on every schematic answer derived through the clause.
#[derive(Clone, Debug)]
pub struct AbstractionInput {
    pub clause: Clause,
    pub prefs: Vec<(VarId, String)>,
}

#[derive(Clone, Debug)]
pub struct Problem {
    pub kb: Vec<Clause>,
    pub abstractions: Vec<AbstractionInput>,
    pub goal: Clause,
}

#[derive(Clone, Debug)]
pub struct SchematicAnswer {
    /// `[] | γ` with duplicate recording literals merged.
    pub clause: Clause,
    pub id: usize,
    /// Indexes into `Problem::abstractions` of contributing leaves.
    pub leaves: BTreeSet<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Status {
    Saturated,
    MaxDerived,
    Timeout,
    Cancelled,
}

#[derive(Clone, Copy, Default, Debug)]
pub struct Counters {
    pub derived: usize,
    pub kept: usize,
    pub emitted: usize,
    pub pruned_db: usize,
    pub pruned_answers: usize,
    pub pruned_pref: usize,
    pub tautologies: usize,
    pub subsumed_forward: usize,
    pub subsumed_backward: usize,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub status: Status,
    pub counters: Counters,
}

/// Why `prune` discarded a clause.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Discard {
    DbConstraintUnsat,
    AnswerLiteralsUnunifiable,
    PrefIncompatible,
}

/// Log entry sufficient to replay recording-part inheritance: the conclusion
/// recording part must equal the multiset union of the (renamed) premise
/// recording parts instantiated by the unifier.
#[derive(Clone, Debug)]
pub struct InferenceRecord {
    pub rule: Rule,
    pub premises: Vec<usize>,
    pub premise_recordings: Vec<Vec<Literal>>,
    pub unifier: Substitution,
    pub conclusion_recording: Vec<Literal>,
}

struct Rec {
    clause: Clause,
    leaves: BTreeSet<usize>,
    prefs: Vec<(VarId, String)>,
    alive: bool,
    weight: usize,
}

pub struct Saturation {
    st: Arc<SymbolTable>,
    store: Option<Arc<FactStore>>,
    cfg: SaturationConfig,
    clauses: Vec<Rec>,
    passive: BTreeSet<(usize, usize)>, // (weight, id)
    active: Vec<usize>,
    log: Vec<Option<InferenceRecord>>,
    counters: Counters,
    db_check_cache: HashMap<Vec<Literal>, bool>,
}

/// Collapse syntactically identical recording literals to one occurrence.
pub fn merge_recording_duplicates(c: &Clause) -> Clause {
    let mut recording: Vec<Literal> = Vec::new();
    for l in &c.recording {
        if !recording.contains(l) {
            recording.push(l.clone());
        }
    }
    Clause {
        ordinary: c.ordinary.clone(),
        recording,
        origin: c.origin.clone(),
    }
}

/// Binary resolution on clauses with recording literals. `pos1` must be a
/// positive ordinary literal of `c1` and `pos2` a negative one of `c2` with
/// the same predicate; premises are assumed renamed apart.
pub fn resolve(
    c1: &Clause,
    pos1: usize,
    c2: &Clause,
    pos2: usize,
    premises: Vec<usize>,
) -> Result<(Clause, Substitution), UnifyError> {
    let a = &c1.ordinary[pos1];
    let b = &c2.ordinary[pos2];
    debug_assert!(a.positive && !b.positive);
    let theta = unify_atoms(a, b)?;
    let mut ordinary = Vec::new();
    for (i, l) in c1.ordinary.iter().enumerate() {
        if i != pos1 {
            ordinary.push(theta.apply_literal(l));
        }
    }
    for (i, l) in c2.ordinary.iter().enumerate() {
        if i != pos2 {
            ordinary.push(theta.apply_literal(l));
        }
    }
    let recording = c1
        .recording
        .iter()
        .chain(&c2.recording)
        .map(|l| theta.apply_literal(l))
        .collect();
    Ok((
        Clause::new(
            ordinary,
            recording,
            ClauseOrigin::Derived {
                rule: Rule::Resolution,
                premises,
            },
        ),
        theta,
    ))
}

/// Factoring: merge two ordinary literals of the same polarity and predicate.
pub fn factor(
    c: &Clause,
    pos_i: usize,
    pos_j: usize,
    premises: Vec<usize>,
) -> Result<(Clause, Substitution), UnifyError> {
    debug_assert_ne!(pos_i, pos_j);
    let a = &c.ordinary[pos_i];
    let b = &c.ordinary[pos_j];
    debug_assert_eq!(a.positive, b.positive);
    let theta = unify_atoms(a, b)?;
    let mut ordinary = Vec::new();
    for (i, l) in c.ordinary.iter().enumerate() {
        if i != pos_j {
            ordinary.push(theta.apply_literal(l));
        }
    }
    let recording = c.recording.iter().map(|l| theta.apply_literal(l)).collect();
    Ok((
        Clause::new(
            ordinary,
            recording,
            ClauseOrigin::Derived {
                rule: Rule::Factoring,
                premises,
            },
        ),
        theta,
    ))
}

fn rename_clause(c: &Clause, st: &SymbolTable) -> Clause {
    let mut map: HashMap<VarId, VarId> = HashMap::new();
    fn go(t: &Term, st: &SymbolTable, map: &mut HashMap<VarId, VarId>) -> Term {
        match t {
            Term::Var(v) => Term::Var(*map.entry(*v).or_insert_with(|| st.fresh_var())),
            Term::App(f, args) => {
                Term::App(*f, args.iter().map(|a| go(a, st, map)).collect())
            }
        }
    }
    let fix = |ls: &[Literal], map: &mut HashMap<VarId, VarId>| {
        ls.iter()
            .map(|l| Literal {
                positive: l.positive,
                pred: l.pred,
                args: l.args.iter().map(|t| go(t, st, map)).collect(),
            })
            .collect::<Vec<_>>()
    };
    let ordinary = fix(&c.ordinary, &mut map);
    let recording = fix(&c.recording, &mut map);
    Clause {
        ordinary,
        recording,
        origin: c.origin.clone(),
    }
}

fn rename_prefs(
    prefs: &[(VarId, String)],
    original: &Clause,
    renamed: &Clause,
) -> Vec<(VarId, String)> {
    // Abstraction clauses are linear in their variables, so recover the
    // renaming positionally from the recording atoms.
    let mut map = HashMap::new();
    for (a, b) in original.recording.iter().zip(&renamed.recording) {
        for (x, y) in a.args.iter().zip(&b.args) {
            if let (Term::Var(u), Term::Var(v)) = (x, y) {
                map.insert(*u, *v);
            }
        }
    }
    prefs
        .iter()
        .filter_map(|(v, p)| map.get(v).map(|&u| (u, p.clone())))
        .collect()
}

/// Check a set of prefix constraints: for every variable its prefixes must
/// form a chain under string-prefix ordering.
pub fn pref_compatible(constraints: &[(VarId, String)]) -> bool {
    for (i, (v, p)) in constraints.iter().enumerate() {
        for (u, q) in &constraints[i + 1..] {
            if v == u && !(p.starts_with(q.as_str()) || q.starts_with(p.as_str())) {
                return false;
            }
        }
    }
    true
}

impl Saturation {
    pub fn new(
        st: Arc<SymbolTable>,
        store: Option<Arc<FactStore>>,
        problem: &Problem,
        cfg: SaturationConfig,
    ) -> Saturation {
        let mut sat = Saturation {
            st,
            store,
            cfg,
            clauses: Vec::new(),
            passive: BTreeSet::new(),
            active: Vec::new(),
            log: Vec::new(),
            counters: Counters::default(),
            db_check_cache: HashMap::new(),
        };
        for (leaf, a) in problem.abstractions.iter().enumerate() {
            let mut leaves = BTreeSet::new();
            leaves.insert(leaf);
            sat.insert_input(a.clause.clone(), leaves, a.prefs.clone());
        }
        for c in &problem.kb {
            sat.insert_input(c.clone(), BTreeSet::new(), Vec::new());
        }
        sat.insert_input(problem.goal.clone(), BTreeSet::new(), Vec::new());
        sat
    }

    fn insert_input(&mut self, clause: Clause, leaves: BTreeSet<usize>, prefs: Vec<(VarId, String)>) {
        let weight = clause.symbol_count();
        let id = self.clauses.len();
        self.clauses.push(Rec {
            clause,
            leaves,
            prefs,
            alive: true,
            weight,
        });
        self.log.push(None);
        self.passive.insert((weight, id));
    }

    pub fn counters(&self) -> Counters {
        self.counters
    }

    pub fn clause(&self, id: usize) -> &Clause {
        &self.clauses[id].clause
    }

    pub fn inference_log(&self) -> impl Iterator<Item = (usize, &InferenceRecord)> {
        self.log
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.as_ref().map(|r| (i, r)))
    }

    /// Replay every logged inference and check recording-part inheritance:
    /// conclusion γ equals the instantiated multiset union of premise γs.
    pub fn verify_inheritance(&self) -> bool {
        self.inference_log().all(|(_, rec)| {
            let mut expected: Vec<Literal> = rec
                .premise_recordings
                .iter()
                .flatten()
                .map(|l| rec.unifier.apply_literal(l))
                .collect();
            let mut actual = rec.conclusion_recording.clone();
            multiset_sort(&mut expected);
            multiset_sort(&mut actual);
            expected == actual
        })
    }

    /// The pruning decision for a derived clause, per configuration.
    pub fn prune(&mut self, clause: &Clause) -> Option<Discard> {
        let st = self.st.clone();
        let answers: Vec<&Literal> = clause
            .recording
            .iter()
            .filter(|l| !l.positive && st.pred_kind(l.pred) == PredKind::Answer)
            .collect();
        let mut answer_mgu = None;
        if self.cfg.prune_answers && answers.len() > 1 {
            match simultaneous_mgu(answers.iter().copied()) {
                Ok(theta) => answer_mgu = Some(theta),
                Err(_) => return Some(Discard::AnswerLiteralsUnunifiable),
            }
        }
        if self.cfg.prune_db {
            if let Some(store) = self.store.clone() {
                let mut db_lits: Vec<Literal> = clause
                    .recording
                    .iter()
                    .filter(|l| l.positive && st.pred_kind(l.pred) == PredKind::Db)
                    .filter(|l| match &self.cfg.backed_preds {
                        Some(preds) => preds.contains(&l.pred),
                        None => true,
                    })
                    .cloned()
                    .collect();
                if let Some(theta) = &answer_mgu {
                    db_lits = db_lits.iter().map(|l| theta.apply_literal(l)).collect();
                }
                if !db_lits.is_empty() && db_lits.len() <= self.cfg.db_check_threshold {
                    let mut key = db_lits.clone();
                    multiset_sort(&mut key);
                    let sat = *self
                        .db_check_cache
                        .entry(key)
                        .or_insert_with(|| {
                            // unsupported constraints (compound arguments)
                            // conservatively count as satisfiable
                            constraint_satisfiable(&store, &db_lits).unwrap_or(true)
                        });
                    if !sat {
                        return Some(Discard::DbConstraintUnsat);
                    }
                }
            }
        }
        None
    }

    fn process_new(
        &mut self,
        clause: Clause,
        leaves: BTreeSet<usize>,
        prefs: Vec<(VarId, String)>,
        record: InferenceRecord,
        emit: &mut dyn FnMut(SchematicAnswer) -> bool,
    ) -> bool {
        self.counters.derived += 1;
        if clause.is_tautology() {
            self.counters.tautologies += 1;
            return true;
        }
        match self.prune(&clause) {
            Some(Discard::DbConstraintUnsat) => {
                self.counters.pruned_db += 1;
                return true;
            }
            Some(Discard::AnswerLiteralsUnunifiable) => {
                self.counters.pruned_answers += 1;
                return true;
            }
            Some(Discard::PrefIncompatible) => unreachable!(),
            None => {}
        }
        if !pref_compatible(&prefs) {
            self.counters.pruned_pref += 1;
            return true;
        }
        if self.cfg.subsumption {
            let forward = self
                .clauses
                .iter()
                .any(|r| r.alive && subsumes(&r.clause, &clause));
            if forward {
                self.counters.subsumed_forward += 1;
                return true;
            }
            for id in 0..self.clauses.len() {
                if self.clauses[id].alive && subsumes(&clause, &self.clauses[id].clause) {
                    self.clauses[id].alive = false;
                    self.passive.remove(&(self.clauses[id].weight, id));
                    self.active.retain(|&a| a != id);
                    self.counters.subsumed_backward += 1;
                }
            }
        }
        self.counters.kept += 1;
        let weight = clause.symbol_count();
        let id = self.clauses.len();
        let empty_ordinary = clause.ordinary.is_empty();
        let merged = merge_recording_duplicates(&clause);
        self.clauses.push(Rec {
            clause,
            leaves: leaves.clone(),
            prefs,
            alive: true,
            weight,
        });
        self.log.push(Some(record));
        self.passive.insert((weight, id));
        if empty_ordinary {
            self.counters.emitted += 1;
            log::info!(
                "schematic answer #{}: {}",
                self.counters.emitted,
                merged.display(&self.st)
            );
            let sa = SchematicAnswer {
                clause: merged,
                id,
                leaves,
            };
            if !emit(sa) {
                return false;
            }
        }
        true
    }

    /// Run the given-clause loop to exhaustion or budget, streaming schematic
    /// answers through `emit`. Returning `false` from `emit` cancels the run.
    pub fn run(&mut self, mut emit: impl FnMut(SchematicAnswer) -> bool) -> Outcome {
        let start = Instant::now();
        loop {
            if start.elapsed() > self.cfg.timeout {
                return self.outcome(Status::Timeout);
            }
            if self.counters.derived >= self.cfg.max_derived {
                return self.outcome(Status::MaxDerived);
            }
            let Some(&(weight, given)) = self.passive.iter().next() else {
                return self.outcome(Status::Saturated);
            };
            self.passive.remove(&(weight, given));
            if !self.clauses[given].alive {
                continue;
            }
            self.active.push(given);
            log::trace!(
                "given #{given}: {}",
                self.clauses[given].clause.display(&self.st)
            );
            if !self.infer_with(given, &mut emit) {
                return self.outcome(Status::Cancelled);
            }
        }
    }

    fn infer_with(
        &mut self,
        given: usize,
        emit: &mut dyn FnMut(SchematicAnswer) -> bool,
    ) -> bool {
        // factoring on the given clause
        let g = self.clauses[given].clause.clone();
        let g_leaves = self.clauses[given].leaves.clone();
        let g_prefs = self.clauses[given].prefs.clone();
        let eligible = eligible_literals(&g, self.cfg.calculus);
        for (ii, &i) in eligible.iter().enumerate() {
            for &j in &eligible[ii + 1..] {
                let (a, b) = (&g.ordinary[i], &g.ordinary[j]);
                if a.positive != b.positive || a.pred != b.pred {
                    continue;
                }
                if let Ok((conclusion, theta)) = factor(&g, i, j, vec![given]) {
                    let rec = InferenceRecord {
                        rule: Rule::Factoring,
                        premises: vec![given],
                        premise_recordings: vec![g.recording.clone()],
                        unifier: theta.clone(),
                        conclusion_recording: conclusion.recording.clone(),
                    };
                    let prefs = apply_theta_prefs(&self.st, &g_prefs, &theta);
                    let Some(prefs) = prefs else {
                        self.counters.derived += 1;
                        self.counters.pruned_pref += 1;
                        continue;
                    };
                    if !self.process_new(conclusion, g_leaves.clone(), prefs, rec, emit) {
                        return false;
                    }
                }
            }
        }
        // resolution between the given clause and every active clause
        let partners = self.active.clone();
        for partner in partners {
            if !self.clauses[partner].alive || !self.clauses[given].alive {
                if !self.clauses[given].alive {
                    break;
                }
                continue;
            }
            if !self.resolve_pair(given, partner, emit) {
                return false;
            }
            if partner != given && !self.resolve_pair(partner, given, emit) {
                return false;
            }
        }
        true
    }

    /// All resolution inferences with the positive literal in `cpos` and the
    /// negative literal in `cneg`.
    fn resolve_pair(
        &mut self,
        cpos: usize,
        cneg: usize,
        emit: &mut dyn FnMut(SchematicAnswer) -> bool,
    ) -> bool {
        let c1 = self.clauses[cpos].clause.clone();
        let c2_orig = self.clauses[cneg].clause.clone();
        let c2 = rename_clause(&c2_orig, &self.st);
        let prefs2 = rename_prefs(&self.clauses[cneg].prefs, &c2_orig, &c2);
        let elig1 = eligible_literals(&c1, self.cfg.calculus);
        let elig2 = eligible_literals(&c2, self.cfg.calculus);
        for &i in &elig1 {
            if !c1.ordinary[i].positive {
                continue;
            }
            for &j in &elig2 {
                if c2.ordinary[j].positive || c2.ordinary[j].pred != c1.ordinary[i].pred {
                    continue;
                }
                if let Ok((conclusion, theta)) = resolve(&c1, i, &c2, j, vec![cpos, cneg]) {
                    let rec = InferenceRecord {
                        rule: Rule::Resolution,
                        premises: vec![cpos, cneg],
                        premise_recordings: vec![c1.recording.clone(), c2.recording.clone()],
                        unifier: theta.clone(),
                        conclusion_recording: conclusion.recording.clone(),
                    };
                    let mut leaves = self.clauses[cpos].leaves.clone();
                    leaves.extend(&self.clauses[cneg].leaves);
                    let mut prefs = self.clauses[cpos].prefs.clone();
                    prefs.extend(prefs2.iter().cloned());
                    let Some(prefs) = apply_theta_prefs(&self.st, &prefs, &theta) else {
                        self.counters.derived += 1;
                        self.counters.pruned_pref += 1;
                        continue;
                    };
                    if !self.process_new(conclusion, leaves, prefs, rec, emit) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn outcome(&self, status: Status) -> Outcome {
        Outcome {
            status,
            counters: self.counters,
        }
    }
}

/// Push prefix constraints through a unifier. A constraint on a variable
/// bound to another variable follows the binding; bound to a constant it is
/// checked against the constant's spelling (returning `None` on violation);
/// bound to a compound term it is dropped.
fn apply_theta_prefs(
    st: &SymbolTable,
    prefs: &[(VarId, String)],
    theta: &Substitution,
) -> Option<Vec<(VarId, String)>> {
    let mut out = Vec::new();
    for (v, p) in prefs {
        match theta.get(*v) {
            None => out.push((*v, p.clone())),
            Some(Term::Var(u)) => out.push((*u, p.clone())),
            Some(t) => {
                if let Some(c) = t.as_constant() {
                    if !st.fn_name(c).starts_with(p.as_str()) {
                        return None;
                    }
                }
            }
        }
    }
    if out.len() > 1 && !pref_compatible(&out) {
        return None;
    }
    Some(out)
}

fn multiset_sort(lits: &mut [Literal]) {
    lits.sort_by(|a, b| format!("{a:?}").cmp(&format!("{b:?}")));
}

/// Convenience wrapper: run to completion, collecting every emitted
/// schematic answer.
pub fn saturate_collect(
    st: Arc<SymbolTable>,
    store: Option<Arc<FactStore>>,
    problem: &Problem,
    cfg: SaturationConfig,
) -> (Vec<SchematicAnswer>, Outcome, Saturation) {
    let mut sat = Saturation::new(st, store, problem, cfg);
    let mut answers = Vec::new();
    let outcome = sat.run(|sa| {
        answers.push(sa);
        true
    });
    (answers, outcome, sat)
}
