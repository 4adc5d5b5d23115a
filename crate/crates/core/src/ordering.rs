//! A Knuth-Bendix-style literal ordering and eligible-literal selection.
//!
//! All symbols have weight 1 and precedence is declaration order. The
//! ordering satisfies the substitution property (`L1 > L2` implies
//! `L1θ > L2θ`), which is what selection needs to stay safe under
//! generalisation.

use std::collections::HashMap;

use crate::symbols::VarId;
use crate::term::{Clause, Literal, Term};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Cmp {
    Greater,
    Less,
    Equal,
    Incomparable,
}

impl Cmp {
    fn flip(self) -> Cmp {
        match self {
            Cmp::Greater => Cmp::Less,
            Cmp::Less => Cmp::Greater,
            c => c,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CalculusMode {
    Unordered,
    Ordered,
    OrderedSelection,
}

fn var_multiset(t: &Term, out: &mut HashMap<VarId, usize>) {
    match t {
        Term::Var(v) => *out.entry(*v).or_insert(0) += 1,
        Term::App(_, args) => {
            for a in args {
                var_multiset(a, out);
            }
        }
    }
}

fn covers(big: &HashMap<VarId, usize>, small: &HashMap<VarId, usize>) -> bool {
    small
        .iter()
        .all(|(v, n)| big.get(v).copied().unwrap_or(0) >= *n)
}

/// KBO on terms. Heads are compared by `FnId` (declaration precedence).
pub fn kbo_term(s: &Term, t: &Term) -> Cmp {
    if s == t {
        return Cmp::Equal;
    }
    match (s, t) {
        (Term::Var(x), _) => {
            if t.contains_var(*x) {
                Cmp::Less
            } else {
                Cmp::Incomparable
            }
        }
        (_, Term::Var(y)) => {
            if s.contains_var(*y) {
                Cmp::Greater
            } else {
                Cmp::Incomparable
            }
        }
        (Term::App(f, fa), Term::App(g, ga)) => {
            let mut vs = HashMap::new();
            let mut vt = HashMap::new();
            var_multiset(s, &mut vs);
            var_multiset(t, &mut vt);
            let s_covers = covers(&vs, &vt);
            let t_covers = covers(&vt, &vs);
            let ws = s.symbol_count();
            let wt = t.symbol_count();
            if ws > wt {
                return if s_covers { Cmp::Greater } else { Cmp::Incomparable };
            }
            if wt > ws {
                return if t_covers { Cmp::Less } else { Cmp::Incomparable };
            }
            // equal weights
            if f != g {
                return if f > g {
                    if s_covers {
                        Cmp::Greater
                    } else {
                        Cmp::Incomparable
                    }
                } else if t_covers {
                    Cmp::Less
                } else {
                    Cmp::Incomparable
                };
            }
            for (x, y) in fa.iter().zip(ga) {
                match kbo_term(x, y) {
                    Cmp::Equal => continue,
                    Cmp::Greater => {
                        return if s_covers { Cmp::Greater } else { Cmp::Incomparable }
                    }
                    Cmp::Less => return if t_covers { Cmp::Less } else { Cmp::Incomparable },
                    Cmp::Incomparable => return Cmp::Incomparable,
                }
            }
            Cmp::Equal
        }
    }
}

fn atom_weight(l: &Literal) -> usize {
    l.symbol_count()
}

fn kbo_atom(a: &Literal, b: &Literal) -> Cmp {
    if a.same_atom(b) {
        return Cmp::Equal;
    }
    let mut va = HashMap::new();
    let mut vb = HashMap::new();
    for t in &a.args {
        var_multiset(t, &mut va);
    }
    for t in &b.args {
        var_multiset(t, &mut vb);
    }
    let a_covers = covers(&va, &vb);
    let b_covers = covers(&vb, &va);
    let wa = atom_weight(a);
    let wb = atom_weight(b);
    if wa > wb {
        return if a_covers { Cmp::Greater } else { Cmp::Incomparable };
    }
    if wb > wa {
        return if b_covers { Cmp::Less } else { Cmp::Incomparable };
    }
    if a.pred != b.pred {
        return if a.pred > b.pred {
            if a_covers {
                Cmp::Greater
            } else {
                Cmp::Incomparable
            }
        } else if b_covers {
            Cmp::Less
        } else {
            Cmp::Incomparable
        };
    }
    for (x, y) in a.args.iter().zip(&b.args) {
        match kbo_term(x, y) {
            Cmp::Equal => continue,
            Cmp::Greater => return if a_covers { Cmp::Greater } else { Cmp::Incomparable },
            Cmp::Less => return if b_covers { Cmp::Less } else { Cmp::Incomparable },
            Cmp::Incomparable => return Cmp::Incomparable,
        }
    }
    Cmp::Equal
}

/// Literal comparison: atoms first; for the same atom a negative literal is
/// greater than the positive one.
pub fn compare_literals(a: &Literal, b: &Literal) -> Cmp {
    match kbo_atom(a, b) {
        Cmp::Equal => {
            if a.positive == b.positive {
                Cmp::Equal
            } else if !a.positive {
                Cmp::Greater
            } else {
                Cmp::Less
            }
        }
        c => c,
    }
}

fn maximal_among(clause: &Clause, positions: &[usize]) -> Vec<usize> {
    positions
        .iter()
        .copied()
        .filter(|&i| {
            positions.iter().all(|&j| {
                j == i
                    || compare_literals(&clause.ordinary[j], &clause.ordinary[i]).flip()
                        != Cmp::Less
            })
        })
        .collect()
}

/// Ordinary-literal positions eligible for inferences under the given mode.
///
/// With selection on, all maximal negative literals are selected whenever a
/// negative literal exists; a single non-maximal literal is never selected.
pub fn eligible_literals(clause: &Clause, mode: CalculusMode) -> Vec<usize> {
    let n = clause.ordinary.len();
    if n == 0 {
        return Vec::new();
    }
    let all: Vec<usize> = (0..n).collect();
    match mode {
        CalculusMode::Unordered => all,
        CalculusMode::Ordered => maximal_among(clause, &all),
        CalculusMode::OrderedSelection => {
            let negs: Vec<usize> = all
                .iter()
                .copied()
                .filter(|&i| !clause.ordinary[i].positive)
                .collect();
            if negs.is_empty() {
                maximal_among(clause, &all)
            } else {
                maximal_among(clause, &negs)
            }
        }
    }
}
