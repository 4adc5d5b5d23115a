//! Semantic document indexing by abstraction clauses.
//!
//! Each registered document contributes abstraction clauses (optionally with
//! URI-prefix constraints) to the saturation input pool. A schematic answer
//! carries the indexes of its leaf abstraction clauses, so mapping those back
//! to document ids gives the documents potentially relevant to the query.

use indexmap::IndexMap;

use crate::parse::ParsedDocument;
use crate::saturate::{AbstractionInput, SchematicAnswer};
use crate::symbols::VarId;
use crate::term::Clause;
use crate::{Error, Result};

pub use crate::saturate::pref_compatible;

#[derive(Default)]
pub struct DocumentIndex {
    /// docid → indexes into `pool`
    docs: IndexMap<String, Vec<usize>>,
    pool: Vec<AbstractionInput>,
    leaf_doc: Vec<String>,
}

impl DocumentIndex {
    pub fn new() -> DocumentIndex {
        DocumentIndex::default()
    }

    pub fn register_document(
        &mut self,
        docid: &str,
        clauses: Vec<(Clause, Vec<(VarId, String)>)>,
    ) -> Result<()> {
        if self.docs.contains_key(docid) {
            return Err(Error::DuplicateDocument(docid.to_string()));
        }
        let mut ids = Vec::new();
        for (clause, prefs) in clauses {
            ids.push(self.pool.len());
            self.pool.push(AbstractionInput { clause, prefs });
            self.leaf_doc.push(docid.to_string());
        }
        self.docs.insert(docid.to_string(), ids);
        Ok(())
    }

    pub fn register_parsed(&mut self, doc: ParsedDocument) -> Result<()> {
        self.register_document(&doc.id, doc.clauses)
    }

    /// The pooled abstraction clauses, in registration order; their position
    /// is the leaf index reported by saturation.
    pub fn abstraction_inputs(&self) -> Vec<AbstractionInput> {
        self.pool.clone()
    }

    pub fn doc_ids(&self) -> impl Iterator<Item = &str> {
        self.docs.keys().map(|s| s.as_str())
    }

    /// Documents whose abstraction clauses appear as leaves of the schematic
    /// answer's derivation.
    pub fn relevant_documents(&self, sa: &SchematicAnswer) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for &leaf in &sa.leaves {
            if let Some(doc) = self.leaf_doc.get(leaf) {
                if !out.contains(doc) {
                    out.push(doc.clone());
                }
            }
        }
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{PredKind, SymbolTable};
    use crate::term::{ClauseOrigin, Literal, Term};

    fn abstraction(st: &SymbolTable, name: &str, arity: usize) -> Clause {
        let p = st.pred(name, arity, PredKind::Db).unwrap();
        let args: Vec<Term> = (0..arity).map(|_| Term::Var(st.fresh_var())).collect();
        let atom = Literal::new(true, p, args);
        Clause::new(vec![atom.clone()], vec![atom], ClauseOrigin::Abstraction)
    }

    #[test]
    fn duplicate_docid_rejected() {
        let st = SymbolTable::new();
        let mut ix = DocumentIndex::new();
        ix.register_document("d1", vec![(abstraction(&st, "zoo:elephant", 1), vec![])])
            .unwrap();
        assert!(ix.register_document("d1", vec![]).is_err());
    }

    #[test]
    fn empty_doc_never_relevant() {
        let mut ix = DocumentIndex::new();
        ix.register_document("d0", vec![]).unwrap();
        assert!(ix.abstraction_inputs().is_empty());
    }

    #[test]
    fn pref_chain_rules() {
        let st = SymbolTable::new();
        let x = st.var("X");
        let y = st.var("Y");
        assert!(pref_compatible(&[
            (x, "http://a/".into()),
            (x, "http://a/b/".into())
        ]));
        assert!(!pref_compatible(&[
            (x, "htpp://www.myelephants.com/".into()),
            (x, "htpp://www.myrhinos.com/".into())
        ]));
        assert!(pref_compatible(&[
            (x, "http://a/".into()),
            (y, "http://b/".into())
        ]));
    }
}
