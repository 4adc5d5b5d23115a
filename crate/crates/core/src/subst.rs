//! Substitutions, unification and one-way matching.
//!
//! Substitutions are kept idempotent: domain variables never occur in range
//! terms, so a single application pass fully instantiates a term.

use std::collections::HashMap;

use crate::symbols::VarId;
use crate::term::{Clause, Literal, Term};

#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct Substitution {
    map: HashMap<VarId, Term>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum UnifyError {
    PredicateClash,
    ArityClash,
    FunctorClash,
    OccursCheck,
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    pub fn is_identity(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&self, v: VarId) -> Option<&Term> {
        self.map.get(&v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, &Term)> {
        self.map.iter().map(|(v, t)| (*v, t))
    }

    pub fn apply_term(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => self.map.get(v).cloned().unwrap_or_else(|| t.clone()),
            Term::App(f, args) => {
                Term::App(*f, args.iter().map(|a| self.apply_term(a)).collect())
            }
        }
    }

    pub fn apply_literal(&self, l: &Literal) -> Literal {
        Literal {
            positive: l.positive,
            pred: l.pred,
            args: l.args.iter().map(|a| self.apply_term(a)).collect(),
        }
    }

    pub fn apply_clause(&self, c: &Clause) -> Clause {
        Clause {
            ordinary: c.ordinary.iter().map(|l| self.apply_literal(l)).collect(),
            recording: c.recording.iter().map(|l| self.apply_literal(l)).collect(),
            origin: c.origin.clone(),
        }
    }

    /// Bind `v` to `t`. `t` must already be fully instantiated under `self`
    /// and must not contain `v`; the existing range is rewritten to keep the
    /// substitution idempotent.
    fn bind(&mut self, v: VarId, t: Term) {
        fn replace(target: &mut Term, v: VarId, t: &Term) {
            match target {
                Term::Var(u) if *u == v => *target = t.clone(),
                Term::Var(_) => {}
                Term::App(_, args) => {
                    for a in args {
                        replace(a, v, t);
                    }
                }
            }
        }
        for val in self.map.values_mut() {
            replace(val, v, &t);
        }
        self.map.insert(v, t);
    }
}

pub fn unify_terms(s: &mut Substitution, a: &Term, b: &Term) -> Result<(), UnifyError> {
    let a = s.apply_term(a);
    let b = s.apply_term(b);
    match (&a, &b) {
        (Term::Var(x), Term::Var(y)) if x == y => Ok(()),
        (Term::Var(x), t) | (t, Term::Var(x)) => {
            if t.contains_var(*x) {
                Err(UnifyError::OccursCheck)
            } else {
                s.bind(*x, t.clone());
                Ok(())
            }
        }
        (Term::App(f, fa), Term::App(g, ga)) => {
            if f != g {
                return Err(UnifyError::FunctorClash);
            }
            debug_assert_eq!(fa.len(), ga.len());
            for (x, y) in fa.iter().zip(ga) {
                unify_terms(s, x, y)?;
            }
            Ok(())
        }
    }
}

/// Most general unifier of two atoms (polarity ignored).
pub fn unify_atoms(a: &Literal, b: &Literal) -> Result<Substitution, UnifyError> {
    let mut s = Substitution::new();
    unify_atoms_into(&mut s, a, b)?;
    Ok(s)
}

pub fn unify_atoms_into(
    s: &mut Substitution,
    a: &Literal,
    b: &Literal,
) -> Result<(), UnifyError> {
    if a.pred != b.pred {
        return Err(UnifyError::PredicateClash);
    }
    if a.args.len() != b.args.len() {
        return Err(UnifyError::ArityClash);
    }
    for (x, y) in a.args.iter().zip(&b.args) {
        unify_terms(s, x, y)?;
    }
    Ok(())
}

/// Simultaneous mgu of a nonempty list of atoms: a substitution under which
/// all atoms become syntactically equal. Computed by folding pairwise
/// unification with the first atom.
pub fn simultaneous_mgu<'a, I>(atoms: I) -> Result<Substitution, UnifyError>
where
    I: IntoIterator<Item = &'a Literal>,
{
    let mut it = atoms.into_iter();
    let first = it.next().expect("simultaneous_mgu: empty atom list");
    let mut s = Substitution::new();
    for a in it {
        unify_atoms_into(&mut s, first, a)?;
    }
    Ok(s)
}

/// One-way matching: extend `binding` so that `pattern` instantiated by it
/// equals `target`. Variables of `target` are treated as constants.
pub fn match_term(
    binding: &mut HashMap<VarId, Term>,
    pattern: &Term,
    target: &Term,
) -> bool {
    match pattern {
        Term::Var(v) => {
            if let Some(t) = binding.get(v) {
                t == target
            } else {
                binding.insert(*v, target.clone());
                true
            }
        }
        Term::App(f, fa) => match target {
            Term::App(g, ga) if f == g && fa.len() == ga.len() => {
                fa.iter().zip(ga).all(|(p, t)| match_term(binding, p, t))
            }
            _ => false,
        },
    }
}

pub fn match_literal(
    binding: &mut HashMap<VarId, Term>,
    pattern: &Literal,
    target: &Literal,
) -> bool {
    pattern.positive == target.positive
        && pattern.pred == target.pred
        && pattern.args.len() == target.args.len()
        && pattern
            .args
            .iter()
            .zip(&target.args)
            .all(|(p, t)| match_term(binding, p, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{PredKind, SymbolTable};

    fn atom(st: &SymbolTable, name: &str, args: Vec<Term>) -> Literal {
        let p = st.pred(name, args.len(), PredKind::Ordinary).unwrap();
        Literal::new(true, p, args)
    }

    #[test]
    fn single_binding_forced() {
        let st = SymbolTable::new();
        let x = st.var("X");
        let a = st.func("a", 0).unwrap();
        let l = atom(&st, "p", vec![Term::Var(x)]);
        let r = atom(&st, "p", vec![Term::constant(a)]);
        let s = unify_atoms(&l, &r).unwrap();
        assert_eq!(s.get(x), Some(&Term::constant(a)));
    }

    #[test]
    fn occurs_check_fails() {
        let st = SymbolTable::new();
        let x = st.var("X");
        let f = st.func("f", 1).unwrap();
        let l = atom(&st, "p", vec![Term::Var(x)]);
        let r = atom(&st, "p", vec![Term::App(f, vec![Term::Var(x)])]);
        assert_eq!(unify_atoms(&l, &r), Err(UnifyError::OccursCheck));
    }

    #[test]
    fn hand_run_robinson_case() {
        // unify(p(X, f(Y)), p(g(Z), f(Z))) = {X -> g(Z), Y -> Z}
        let st = SymbolTable::new();
        let (x, y, z) = (st.var("X"), st.var("Y"), st.var("Z"));
        let f = st.func("f", 1).unwrap();
        let g = st.func("g", 1).unwrap();
        let l = atom(
            &st,
            "p",
            vec![Term::Var(x), Term::App(f, vec![Term::Var(y)])],
        );
        let r = atom(
            &st,
            "p",
            vec![
                Term::App(g, vec![Term::Var(z)]),
                Term::App(f, vec![Term::Var(z)]),
            ],
        );
        let s = unify_atoms(&l, &r).unwrap();
        assert_eq!(s.apply_literal(&l), s.apply_literal(&r));
        assert_eq!(s.get(x), Some(&Term::App(g, vec![Term::Var(z)])));
        assert_eq!(s.get(y), Some(&Term::Var(z)));
    }

    #[test]
    fn simultaneous_examples() {
        let st = SymbolTable::new();
        let at = st.answer_pred(1).unwrap();
        let x = st.var("X");
        let a = st.func("a", 0).unwrap();
        // [@(X), @(X)] -> identity
        let l = Literal::new(false, at, vec![Term::Var(x)]);
        let s = simultaneous_mgu([&l, &l]).unwrap();
        assert!(s.is_identity());
        // [@(X), @(a)] -> {X -> a}
        let r = Literal::new(false, at, vec![Term::constant(a)]);
        let s = simultaneous_mgu([&l, &r]).unwrap();
        assert_eq!(s.get(x), Some(&Term::constant(a)));
    }

    #[test]
    fn simultaneous_three_atoms() {
        // [@(f(X), Y), @(Z, b), @(Z, b)] -> {Z -> f(X), Y -> b}
        let st = SymbolTable::new();
        let at = st.answer_pred(2).unwrap();
        let (x, y, z) = (st.var("X"), st.var("Y"), st.var("Z"));
        let f = st.func("f", 1).unwrap();
        let b = st.func("b", 0).unwrap();
        let a1 = Literal::new(
            false,
            at,
            vec![Term::App(f, vec![Term::Var(x)]), Term::Var(y)],
        );
        let a2 = Literal::new(false, at, vec![Term::Var(z), Term::constant(b)]);
        let s = simultaneous_mgu([&a1, &a2, &a2]).unwrap();
        assert_eq!(s.get(z), Some(&Term::App(f, vec![Term::Var(x)])));
        assert_eq!(s.get(y), Some(&Term::constant(b)));
        assert_eq!(s.apply_literal(&a1), s.apply_literal(&a2));
    }
}
