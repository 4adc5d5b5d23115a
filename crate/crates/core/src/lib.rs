//! Deductive query answering over relational data.
//!
//! The engine answers first-order queries modulo a knowledge base by
//! saturating an abstraction of the database in a resolution calculus with
//! recording literals. Every derived clause with an empty ordinary part is a
//! schematic answer; each one is compiled into a SQL query and instantiated
//! against the built-in fact store, so answers with similar proofs arrive in
//! bulk instead of one at a time.
//!
//! Start with the `examples/` directory: each example is a runnable walk
//! through one capability (basic queries, joins, SQL emission, pruning,
//! oracle cross-checking, document indexing).

pub mod compile;
pub mod docindex;
pub mod driver;
pub mod error;
pub mod oracle;
pub mod ordering;
pub mod parse;
pub mod saturate;
pub mod store;
pub mod subst;
pub mod subsume;
pub mod symbols;
pub mod term;

pub use error::{Error, Result};
pub use store::{FactStore, Schema};
pub use symbols::{FnId, PredId, PredKind, SymbolTable, VarId};
pub use term::{Clause, ClauseOrigin, Literal, Rule, Term};
