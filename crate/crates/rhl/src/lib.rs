//! An evaluation engine for relational Horn logic (RHL): Datalog extended
//! with quantification over sorts, existentially quantified conclusion
//! variables, and inferred equalities, together with a partial Horn logic
//! (PHL) front end that lowers composite-term sequents onto the relational
//! core.
//!
//! The engine computes weakly free models: starting from a ground relational
//! structure it repeatedly matches sequent premises and adjoins conclusion
//! data (tuples, equalities, fresh elements) until a fixpoint. Equality is
//! represented by per-sort union-find structures; stored tuples are kept in
//! canonical form by an incremental normalization pass driven by occurrence
//! lists, and indices over relations with functional projections turn
//! functionality sequents into equality generation at insertion time.
//!
//! Modules:
//! - [`theory`]: RHL abstract syntax and the static analyses.
//! - [`phl`]: the PHL surface language, parser and lowering.
//! - [`structure`]: element arenas, tuple stores, indices, occurrence lists.
//! - [`engine`]: premise matching, conclusion application, the fixpoint loops.
//! - [`oracle`]: deliberately slow reference evaluators for differential tests.
//! - [`apps`]: bundled points-to analysis and type inference pipelines.
//! - [`cli`]: the batch command-line driver.

pub mod apps;
pub mod cli;
pub mod engine;
pub mod ids;
pub mod oracle;
pub mod phl;
pub mod structure;
pub mod theory;
pub mod union_find;


pub use structure::{InsertOutcome, RelationalStructure, Tuple};
pub use theory::{Diagnostic, RhlAtom, RhlTheory, Sequent};
