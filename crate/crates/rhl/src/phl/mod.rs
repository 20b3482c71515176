//! Partial Horn logic: the human-facing surface language.
//!
//! PHL declares predicates and partial functions over sorts and allows
//! composite terms built from function application wherever RHL expects a
//! variable. Sequents are lowered to RHL by flattening: each composite term
//! becomes a result variable plus a graph-relation atom, and every partial
//! function contributes its functionality axiom.
//!
//! Theory files use `;`-terminated declarations and `#` line comments:
//!
//! ```text
//! sort A;
//! pred Le : A * A;
//! func f : A -> A;
//! axiom Le(u, v) & Le(v, w) => Le(u, w);
//! axiom x : A => f(x)!;
//! axiom f(x) = y => f(y) = x;
//! ```
//!
//! Atoms are predicate applications `P(t, ...)`, term equations `t = t`,
//! definedness assertions `t!`, and sort quantifications `v : S`. The
//! wildcard `_` denotes a fresh anonymous variable usable once.

mod lower;
mod parse;

pub use lower::{check_epic, compile_phl, lower_theory, SymbolMap};
pub use parse::parse_phl;

use crate::ids::SortId;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PredId(pub u32);

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FuncId(pub u32);

impl PredId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl FuncId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A term: a variable or a partial function applied to terms.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PhlTerm {
    Var(String),
    App(FuncId, Vec<PhlTerm>),
}

impl PhlTerm {
    pub fn vars(&self, out: &mut Vec<String>) {
        match self {
            PhlTerm::Var(v) => out.push(v.clone()),
            PhlTerm::App(_, args) => {
                for a in args {
                    a.vars(out);
                }
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PhlAtom {
    Pred { pred: PredId, args: Vec<PhlTerm> },
    TermEqual(PhlTerm, PhlTerm),
    /// `t!` — the term is defined.
    Defined(PhlTerm),
    /// `v : S` — sort quantification over a bare variable.
    SortOf(String, SortId),
}

impl PhlAtom {
    pub fn vars(&self, out: &mut Vec<String>) {
        match self {
            PhlAtom::Pred { args, .. } => {
                for t in args {
                    t.vars(out);
                }
            }
            PhlAtom::TermEqual(a, b) => {
                a.vars(out);
                b.vars(out);
            }
            PhlAtom::Defined(t) => t.vars(out),
            PhlAtom::SortOf(v, _) => out.push(v.clone()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PhlSequent {
    pub premise: Vec<PhlAtom>,
    pub conclusion: Vec<PhlAtom>,
    /// Source line of the `axiom` keyword, for diagnostics.
    pub line: usize,
}

#[derive(Clone, Debug)]
pub struct PredDecl {
    pub name: String,
    pub arity: Vec<SortId>,
}

#[derive(Clone, Debug)]
pub struct FuncDecl {
    pub name: String,
    pub dom: Vec<SortId>,
    pub cod: SortId,
}

#[derive(Clone, Debug, Default)]
pub struct PhlTheory {
    pub sorts: Vec<String>,
    pub preds: Vec<PredDecl>,
    pub funcs: Vec<FuncDecl>,
    pub sequents: Vec<PhlSequent>,
}

impl PhlTheory {
    pub fn sort_by_name(&self, name: &str) -> Option<SortId> {
        self.sorts
            .iter()
            .position(|s| s == name)
            .map(|i| SortId(i as u32))
    }
}
