//! Terms, literals and clauses with recording literals.
//!
//! A clause is `C | γ`: `C` is the ordinary part, `γ` the recording part.
//! Both parts are multisets (represented as vectors; multiplicity matters
//! for subsumption). Semantically `C | λ1,…,λn` reads as
//! `C ∨ ¬λ1 ∨ … ∨ ¬λn`.

use std::fmt;

use crate::symbols::{FnId, PredId, SymbolTable, VarId};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Term {
    Var(VarId),
    App(FnId, Vec<Term>),
}

impl Term {
    pub fn constant(f: FnId) -> Term {
        Term::App(f, Vec::new())
    }

    pub fn as_constant(&self) -> Option<FnId> {
        match self {
            Term::App(f, args) if args.is_empty() => Some(*f),
            _ => None,
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn for_each_var(&self, f: &mut impl FnMut(VarId)) {
        match self {
            Term::Var(v) => f(*v),
            Term::App(_, args) => {
                for a in args {
                    a.for_each_var(f);
                }
            }
        }
    }

    pub fn contains_var(&self, v: VarId) -> bool {
        match self {
            Term::Var(u) => *u == v,
            Term::App(_, args) => args.iter().any(|a| a.contains_var(v)),
        }
    }

    pub fn symbol_count(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::symbol_count).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Literal {
    pub positive: bool,
    pub pred: PredId,
    pub args: Vec<Term>,
}

impl Literal {
    pub fn new(positive: bool, pred: PredId, args: Vec<Term>) -> Literal {
        Literal {
            positive,
            pred,
            args,
        }
    }

    pub fn complement(&self) -> Literal {
        Literal {
            positive: !self.positive,
            ..self.clone()
        }
    }

    /// Same predicate and arguments, polarity ignored.
    pub fn same_atom(&self, other: &Literal) -> bool {
        self.pred == other.pred && self.args == other.args
    }

    pub fn symbol_count(&self) -> usize {
        1 + self.args.iter().map(Term::symbol_count).sum::<usize>()
    }

    pub fn for_each_var(&self, f: &mut impl FnMut(VarId)) {
        for a in &self.args {
            a.for_each_var(f);
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Rule {
    Resolution,
    Factoring,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ClauseOrigin {
    Kb,
    Goal,
    Abstraction,
    Derived { rule: Rule, premises: Vec<usize> },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Clause {
    pub ordinary: Vec<Literal>,
    pub recording: Vec<Literal>,
    pub origin: ClauseOrigin,
}

impl Clause {
    pub fn new(ordinary: Vec<Literal>, recording: Vec<Literal>, origin: ClauseOrigin) -> Clause {
        Clause {
            ordinary,
            recording,
            origin,
        }
    }

    pub fn symbol_count(&self) -> usize {
        self.ordinary
            .iter()
            .chain(&self.recording)
            .map(Literal::symbol_count)
            .sum()
    }

    pub fn for_each_var(&self, f: &mut impl FnMut(VarId)) {
        for l in self.ordinary.iter().chain(&self.recording) {
            l.for_each_var(f);
        }
    }

    pub fn vars(&self) -> Vec<VarId> {
        let mut seen = Vec::new();
        self.for_each_var(&mut |v| {
            if !seen.contains(&v) {
                seen.push(v);
            }
        });
        seen
    }

    /// The ordinary part contains a complementary pair of literals.
    pub fn is_tautology(&self) -> bool {
        for (i, a) in self.ordinary.iter().enumerate() {
            for b in &self.ordinary[i + 1..] {
                if a.positive != b.positive && a.same_atom(b) {
                    return true;
                }
            }
        }
        false
    }

    /// Structural equality modulo a consistent renaming of variables,
    /// with literals taken in order.
    pub fn alpha_eq(&self, other: &Clause) -> bool {
        fn canon(c: &Clause) -> (Vec<Literal>, Vec<Literal>) {
            let mut map: Vec<(VarId, VarId)> = Vec::new();
            let mut rename = |t: &Term| -> Term {
                fn go(t: &Term, map: &mut Vec<(VarId, VarId)>) -> Term {
                    match t {
                        Term::Var(v) => {
                            if let Some(&(_, n)) = map.iter().find(|(o, _)| o == v) {
                                Term::Var(n)
                            } else {
                                let n = VarId(map.len() as u32);
                                map.push((*v, n));
                                Term::Var(n)
                            }
                        }
                        Term::App(f, args) => {
                            Term::App(*f, args.iter().map(|a| go(a, map)).collect())
                        }
                    }
                }
                go(t, &mut map)
            };
            let fix = |ls: &[Literal], rename: &mut dyn FnMut(&Term) -> Term| {
                ls.iter()
                    .map(|l| Literal {
                        positive: l.positive,
                        pred: l.pred,
                        args: l.args.iter().map(&mut *rename).collect(),
                    })
                    .collect::<Vec<_>>()
            };
            let ord = fix(&c.ordinary, &mut rename);
            let rec = fix(&c.recording, &mut rename);
            (ord, rec)
        }
        canon(self) == canon(other)
    }

    pub fn display<'a>(&'a self, st: &'a SymbolTable) -> ClauseDisplay<'a> {
        ClauseDisplay { clause: self, st }
    }
}

pub struct TermDisplay<'a> {
    pub term: &'a Term,
    pub st: &'a SymbolTable,
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.term {
            Term::Var(v) => write!(f, "{}", self.st.var_name(*v)),
            Term::App(g, args) => {
                write!(f, "{}", self.st.fn_name(*g))?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{}", TermDisplay { term: a, st: self.st })?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

pub struct LiteralDisplay<'a> {
    pub literal: &'a Literal,
    pub st: &'a SymbolTable,
}

impl fmt::Display for LiteralDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.literal.positive {
            write!(f, "~")?;
        }
        write!(f, "{}", self.st.pred_name(self.literal.pred))?;
        if !self.literal.args.is_empty() {
            write!(f, "(")?;
            for (i, a) in self.literal.args.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", TermDisplay { term: a, st: self.st })?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

pub struct ClauseDisplay<'a> {
    clause: &'a Clause,
    st: &'a SymbolTable,
}

impl fmt::Display for ClauseDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clause.ordinary.is_empty() {
            write!(f, "[]")?;
        } else {
            for (i, l) in self.clause.ordinary.iter().enumerate() {
                if i > 0 {
                    write!(f, " v ")?;
                }
                write!(f, "{}", LiteralDisplay { literal: l, st: self.st })?;
            }
        }
        if !self.clause.recording.is_empty() {
            write!(f, " | ")?;
            for (i, l) in self.clause.recording.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", LiteralDisplay { literal: l, st: self.st })?;
            }
        }
        Ok(())
    }
}
