//! Interned predicate, function and variable symbols.
//!
//! The table is append-only behind an internal lock, so it can be shared
//! across threads with `Arc`. Ids are stable once handed out; precedence
//! for the term ordering is declaration order.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PredId(pub(crate) u32);

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FnId(pub(crate) u32);

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct VarId(pub(crate) u32);

impl VarId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PredKind {
    Ordinary,
    Db,
    Answer,
}

struct PredInfo {
    name: String,
    arity: usize,
    kind: PredKind,
}

struct FnInfo {
    name: String,
    arity: usize,
}

#[derive(Default)]
struct Inner {
    preds: Vec<PredInfo>,
    pred_index: HashMap<String, PredId>,
    funs: Vec<FnInfo>,
    fn_index: HashMap<String, FnId>,
    vars: Vec<String>,
    answer: Option<PredId>,
}

pub struct SymbolTable {
    inner: Mutex<Inner>,
}

impl Default for SymbolTable {
    fn default() -> Self {
        Self::new()
    }
}

impl SymbolTable {
    pub fn new() -> Self {
        SymbolTable {
            inner: Mutex::new(Inner::default()),
        }
    }

    /// Intern a predicate symbol. Re-declaring with a different arity is an
    /// error; a `Db` hint upgrades an `Ordinary` symbol (schema files are
    /// allowed to map predicates the KB already mentioned).
    pub fn pred(&self, name: &str, arity: usize, kind: PredKind) -> Result<PredId> {
        let mut inner = self.inner.lock().unwrap();
        if let Some(&id) = inner.pred_index.get(name) {
            let info = &mut inner.preds[id.0 as usize];
            if info.arity != arity {
                return Err(Error::ArityClash {
                    name: name.to_string(),
                    declared: info.arity,
                    used: arity,
                });
            }
            if info.kind != kind {
                match (info.kind, kind) {
                    (PredKind::Ordinary, PredKind::Db) => info.kind = PredKind::Db,
                    (PredKind::Db, PredKind::Ordinary) => {}
                    _ => {
                        return Err(Error::Invalid(format!(
                            "predicate `{name}` cannot change role"
                        )))
                    }
                }
            }
            return Ok(id);
        }
        if kind == PredKind::Answer {
            return Err(Error::Invalid(
                "the answer predicate is reserved".to_string(),
            ));
        }
        let id = PredId(inner.preds.len() as u32);
        inner.preds.push(PredInfo {
            name: name.to_string(),
            arity,
            kind,
        });
        inner.pred_index.insert(name.to_string(), id);
        Ok(id)
    }

    /// The one answer predicate of the session. The first call fixes its
    /// arity; later calls with a different arity are rejected.
    pub fn answer_pred(&self, arity: usize) -> Result<PredId> {
        let mut inner = self.inner.lock().unwrap();
        if let Some(id) = inner.answer {
            let declared = inner.preds[id.0 as usize].arity;
            if declared != arity {
                return Err(Error::ArityClash {
                    name: "@".to_string(),
                    declared,
                    used: arity,
                });
            }
            return Ok(id);
        }
        let id = PredId(inner.preds.len() as u32);
        inner.preds.push(PredInfo {
            name: "@".to_string(),
            arity,
            kind: PredKind::Answer,
        });
        inner.answer = Some(id);
        Ok(id)
    }

    pub fn func(&self, name: &str, arity: usize) -> Result<FnId> {
        let mut inner = self.inner.lock().unwrap();
        if let Some(&id) = inner.fn_index.get(name) {
            let declared = inner.funs[id.0 as usize].arity;
            if declared != arity {
                return Err(Error::ArityClash {
                    name: name.to_string(),
                    declared,
                    used: arity,
                });
            }
            return Ok(id);
        }
        let id = FnId(inner.funs.len() as u32);
        inner.funs.push(FnInfo {
            name: name.to_string(),
            arity,
        });
        inner.fn_index.insert(name.to_string(), id);
        Ok(id)
    }

    /// A new variable with the given display name. Variables are clause-local:
    /// every parsed clause gets fresh ids, so no interning by name happens here.
    pub fn var(&self, name: &str) -> VarId {
        let mut inner = self.inner.lock().unwrap();
        let id = VarId(inner.vars.len() as u32);
        inner.vars.push(name.to_string());
        id
    }

    pub fn fresh_var(&self) -> VarId {
        let mut inner = self.inner.lock().unwrap();
        let id = VarId(inner.vars.len() as u32);
        inner.vars.push(format!("_{}", id.0));
        id
    }

    pub fn pred_name(&self, id: PredId) -> String {
        self.inner.lock().unwrap().preds[id.0 as usize].name.clone()
    }

    pub fn pred_arity(&self, id: PredId) -> usize {
        self.inner.lock().unwrap().preds[id.0 as usize].arity
    }

    pub fn pred_kind(&self, id: PredId) -> PredKind {
        self.inner.lock().unwrap().preds[id.0 as usize].kind
    }

    pub fn fn_name(&self, id: FnId) -> String {
        self.inner.lock().unwrap().funs[id.0 as usize].name.clone()
    }

    pub fn fn_arity(&self, id: FnId) -> usize {
        self.inner.lock().unwrap().funs[id.0 as usize].arity
    }

    pub fn var_name(&self, id: VarId) -> String {
        self.inner.lock().unwrap().vars[id.0 as usize].clone()
    }

    pub fn answer(&self) -> Option<PredId> {
        self.inner.lock().unwrap().answer
    }

    pub fn lookup_pred(&self, name: &str) -> Option<PredId> {
        self.inner.lock().unwrap().pred_index.get(name).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arity_is_fixed_per_symbol() {
        let st = SymbolTable::new();
        let p = st.pred("p", 2, PredKind::Ordinary).unwrap();
        assert_eq!(st.pred("p", 2, PredKind::Ordinary).unwrap(), p);
        assert!(st.pred("p", 1, PredKind::Ordinary).is_err());
        st.func("f", 1).unwrap();
        assert!(st.func("f", 2).is_err());
    }

    #[test]
    fn single_answer_predicate_per_session() {
        let st = SymbolTable::new();
        let a = st.answer_pred(1).unwrap();
        assert_eq!(st.answer_pred(1).unwrap(), a);
        assert!(st.answer_pred(2).is_err());
        assert_eq!(st.pred_kind(a), PredKind::Answer);
    }
}
