//! Clause subsumption with multiset semantics on both parts.
//!
//! `C1 | γ1` subsumes `C2 | γ2` iff some substitution θ makes `C1θ` a
//! submultiset of `C2` and `γ1θ` a submultiset of `γ2`. Multiplicities are
//! respected: two occurrences of a literal cannot map onto one.

use std::collections::HashMap;

use crate::subst::match_literal;
use crate::symbols::VarId;
use crate::term::{Clause, Term};

pub fn subsumes(c1: &Clause, c2: &Clause) -> bool {
    if c1.ordinary.len() > c2.ordinary.len() || c1.recording.len() > c2.recording.len() {
        return false;
    }
    let mut used_ord = vec![false; c2.ordinary.len()];
    let mut used_rec = vec![false; c2.recording.len()];
    let binding = HashMap::new();
    assign(c1, c2, 0, &mut used_ord, &mut used_rec, &binding)
}

fn assign(
    c1: &Clause,
    c2: &Clause,
    idx: usize,
    used_ord: &mut [bool],
    used_rec: &mut [bool],
    binding: &HashMap<VarId, Term>,
) -> bool {
    let n_ord = c1.ordinary.len();
    if idx == n_ord + c1.recording.len() {
        return true;
    }
    let in_ord = idx < n_ord;
    let pattern = if in_ord {
        &c1.ordinary[idx]
    } else {
        &c1.recording[idx - n_ord]
    };
    let tlen = if in_ord {
        c2.ordinary.len()
    } else {
        c2.recording.len()
    };
    for j in 0..tlen {
        let taken = if in_ord { used_ord[j] } else { used_rec[j] };
        if taken {
            continue;
        }
        let target = if in_ord { &c2.ordinary[j] } else { &c2.recording[j] };
        let mut b = binding.clone();
        if match_literal(&mut b, pattern, target) {
            if in_ord {
                used_ord[j] = true;
            } else {
                used_rec[j] = true;
            }
            let ok = assign(c1, c2, idx + 1, used_ord, used_rec, &b);
            if in_ord {
                used_ord[j] = false;
            } else {
                used_rec[j] = false;
            }
            if ok {
                return true;
            }
        }
    }
    false
}
