//! Relational Horn logic theories.
//!
//! A theory declares sorts, relations with arities, and sequents
//! `premise => conclusion` where both sides are conjunctions of atoms.
//! Atoms are relation applications `r(v, ...)`, equalities `u == v`, and
//! sort quantifications `v : s`.
//!
//! Besides the syntax this module holds the static analyses the evaluator
//! consumes: sort checking, premise-equality elimination
//! ([`canonicalize_sequent`]), surjectivity classification, premise symmetry
//! detection ([`detect_symmetries`]) and functional projection inference
//! ([`infer_functional_projections`]).

use std::collections::BTreeSet;
use std::fmt;

use crate::ids::{RelationId, SortId, VarId};

/// One atom of a premise or conclusion.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum RhlAtom {
    /// `r(v_1, ..., v_n)`; the tuple is a member of the relation.
    Relation { rel: RelationId, args: Vec<VarId> },
    /// `u == v`; the two elements are semantically equal.
    Equal(VarId, VarId),
    /// `v : s`; the variable ranges over all elements of the sort.
    SortQuant { var: VarId, sort: SortId },
}

impl RhlAtom {
    pub fn vars(&self) -> Vec<VarId> {
        match self {
            RhlAtom::Relation { args, .. } => args.clone(),
            RhlAtom::Equal(u, v) => vec![*u, *v],
            RhlAtom::SortQuant { var, .. } => vec![*var],
        }
    }

    pub fn map_vars(&self, f: impl Fn(VarId) -> VarId) -> RhlAtom {
        match self {
            RhlAtom::Relation { rel, args } => RhlAtom::Relation {
                rel: *rel,
                args: args.iter().map(|v| f(*v)).collect(),
            },
            RhlAtom::Equal(u, v) => RhlAtom::Equal(f(*u), f(*v)),
            RhlAtom::SortQuant { var, sort } => RhlAtom::SortQuant {
                var: f(*var),
                sort: *sort,
            },
        }
    }

    /// Equality atoms with swapped sides are the same atom; normalize the
    /// side order so multiset comparisons see through the symmetry.
    fn orient(&self) -> RhlAtom {
        match self {
            RhlAtom::Equal(u, v) if v < u => RhlAtom::Equal(*v, *u),
            other => other.clone(),
        }
    }
}

/// A sequent `premise => conclusion`.
///
/// `var_sorts`, `surjective` and `symmetry_classes` are filled in by
/// [`RhlTheory::prepare`]; a freshly built sequent carries placeholders.
#[derive(Clone, Debug)]
pub struct Sequent {
    pub premise: Vec<RhlAtom>,
    pub conclusion: Vec<RhlAtom>,
    /// Variable names, for diagnostics only; indexed by `VarId`.
    pub var_names: Vec<String>,
    /// Inferred sort per variable; indexed by `VarId`.
    pub var_sorts: Vec<SortId>,
    /// True iff every conclusion variable occurs in the premise.
    pub surjective: bool,
    /// Partition of premise atom positions under premise symmetries.
    pub symmetry_classes: Vec<Vec<usize>>,
}

impl Sequent {
    pub fn new(premise: Vec<RhlAtom>, conclusion: Vec<RhlAtom>, var_names: Vec<String>) -> Self {
        Sequent {
            premise,
            conclusion,
            var_names,
            var_sorts: Vec::new(),
            surjective: false,
            symmetry_classes: Vec::new(),
        }
    }

    pub fn var_count(&self) -> usize {
        self.var_names.len()
    }

    fn premise_vars(&self) -> BTreeSet<VarId> {
        self.premise.iter().flat_map(|a| a.vars()).collect()
    }

    fn conclusion_vars(&self) -> BTreeSet<VarId> {
        self.conclusion.iter().flat_map(|a| a.vars()).collect()
    }

    /// Conclusion variables that do not occur in the premise, in first
    /// occurrence order.
    pub fn conclusion_only_vars(&self) -> Vec<VarId> {
        let bound = self.premise_vars();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for atom in &self.conclusion {
            for v in atom.vars() {
                if !bound.contains(&v) && seen.insert(v) {
                    out.push(v);
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct RelationDecl {
    pub name: String,
    pub arity: Vec<SortId>,
}

/// A set `determined` of projections of a relation that is uniquely
/// determined by the complementary projections, together with the sequent
/// the dependency was inferred from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionalDependency {
    pub relation: RelationId,
    pub determined: BTreeSet<usize>,
    pub determining: BTreeSet<usize>,
    pub source_sequent: usize,
}

/// A validation or parse problem, reported as a value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub message: String,
    pub sequent: Option<usize>,
    pub line: Option<usize>,
    pub col: Option<usize>,
}

impl Diagnostic {
    pub fn new(message: impl Into<String>) -> Self {
        Diagnostic {
            message: message.into(),
            sequent: None,
            line: None,
            col: None,
        }
    }

    pub fn in_sequent(message: impl Into<String>, sequent: usize) -> Self {
        Diagnostic {
            message: message.into(),
            sequent: Some(sequent),
            line: None,
            col: None,
        }
    }

    pub fn at(message: impl Into<String>, line: usize, col: usize) -> Self {
        Diagnostic {
            message: message.into(),
            sequent: None,
            line: Some(line),
            col: Some(col),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let (Some(line), Some(col)) = (self.line, self.col) {
            write!(f, "{}:{}: ", line, col)?;
        }
        if let Some(seq) = self.sequent {
            write!(f, "sequent {}: ", seq)?;
        }
        write!(f, "{}", self.message)
    }
}

/// A relational Horn logic theory.
#[derive(Clone, Debug, Default)]
pub struct RhlTheory {
    pub sorts: Vec<String>,
    pub relations: Vec<RelationDecl>,
    pub sequents: Vec<Sequent>,
    /// Functional dependencies justified by [`infer_functional_projections`];
    /// filled by [`RhlTheory::prepare`].
    pub functional_dependencies: Vec<FunctionalDependency>,
    prepared: bool,
}

impl RhlTheory {
    pub fn new() -> Self {
        RhlTheory::default()
    }

    pub fn add_sort(&mut self, name: impl Into<String>) -> SortId {
        let id = SortId(self.sorts.len() as u32);
        self.sorts.push(name.into());
        id
    }

    pub fn add_relation(&mut self, name: impl Into<String>, arity: Vec<SortId>) -> RelationId {
        let id = RelationId(self.relations.len() as u32);
        self.relations.push(RelationDecl {
            name: name.into(),
            arity,
        });
        id
    }

    pub fn add_sequent(&mut self, sequent: Sequent) -> usize {
        self.prepared = false;
        self.sequents.push(sequent);
        self.sequents.len() - 1
    }

    pub fn relation_by_name(&self, name: &str) -> Option<RelationId> {
        self.relations
            .iter()
            .position(|r| r.name == name)
            .map(|i| RelationId(i as u32))
    }

    pub fn sort_by_name(&self, name: &str) -> Option<SortId> {
        self.sorts
            .iter()
            .position(|s| s == name)
            .map(|i| SortId(i as u32))
    }

    pub fn arity(&self, rel: RelationId) -> &[SortId] {
        &self.relations[rel.index()].arity
    }

    pub fn is_prepared(&self) -> bool {
        self.prepared
    }

    /// The projection index sets with a functional dependency, per relation.
    pub fn functional_projections(&self, rel: RelationId) -> Vec<&BTreeSet<usize>> {
        self.functional_dependencies
            .iter()
            .filter(|d| d.relation == rel)
            .map(|d| &d.determined)
            .collect()
    }

    /// Validate, canonicalize and analyze every sequent.
    ///
    /// After this returns `Ok`, premises contain no equality atoms and the
    /// computed fields of every sequent (`var_sorts`, `surjective`,
    /// `symmetry_classes`) are valid. Idempotent.
    pub fn prepare(&mut self) -> Result<(), Vec<Diagnostic>> {
        let diagnostics = validate_theory(self);
        if !diagnostics.is_empty() {
            return Err(diagnostics);
        }
        for idx in 0..self.sequents.len() {
            let var_sorts = infer_var_sorts(self, &self.sequents[idx], idx)
                .expect("validated sequent must sort-check");
            let mut seq = canonicalize_sequent(&self.sequents[idx]);
            seq.var_sorts = var_sorts;
            seq.surjective = classify_surjective(&seq);
            seq.symmetry_classes = detect_symmetries(&seq);
            self.sequents[idx] = seq;
        }
        self.functional_dependencies = infer_functional_projections(self);
        self.prepared = true;
        Ok(())
    }
}

/// Check arity correctness and sort consistency of every sequent.
///
/// Returns an empty list iff the theory is well-formed. Each diagnostic
/// carries the sequent index and describes the offending atom.
pub fn validate_theory(theory: &RhlTheory) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for (idx, seq) in theory.sequents.iter().enumerate() {
        for atom in seq.premise.iter().chain(&seq.conclusion) {
            for v in atom.vars() {
                if v.index() >= seq.var_count() {
                    out.push(Diagnostic::in_sequent(
                        format!("variable {} out of range", v),
                        idx,
                    ));
                }
            }
            if let RhlAtom::Relation { rel, args } = atom {
                if rel.index() >= theory.relations.len() {
                    out.push(Diagnostic::in_sequent(
                        format!("unknown relation {}", rel),
                        idx,
                    ));
                    continue;
                }
                let decl = &theory.relations[rel.index()];
                if args.len() != decl.arity.len() {
                    out.push(Diagnostic::in_sequent(
                        format!(
                            "relation {} expects {} arguments, got {}",
                            decl.name,
                            decl.arity.len(),
                            args.len()
                        ),
                        idx,
                    ));
                }
            }
        }
        if out.iter().any(|d| d.sequent == Some(idx)) {
            // Sort inference below assumes arities line up.
            continue;
        }
        if let Err(mut ds) = infer_var_sorts(theory, seq, idx) {
            out.append(&mut ds);
        }
    }
    out
}

/// Infer the sort of every variable of a sequent.
///
/// Variables are unified through equality atoms; each class must end up
/// with exactly one sort among its members' relation-argument and sort
/// quantification constraints. Variables that occur in no atom get the
/// placeholder sort 0 and no diagnostic.
fn infer_var_sorts(
    theory: &RhlTheory,
    seq: &Sequent,
    idx: usize,
) -> Result<Vec<SortId>, Vec<Diagnostic>> {
    let n = seq.var_count();
    // Tiny union-find over sequent variables.
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for atom in seq.premise.iter().chain(&seq.conclusion) {
        if let RhlAtom::Equal(u, v) = atom {
            let (ru, rv) = (root(&mut parent, u.index()), root(&mut parent, v.index()));
            if ru != rv {
                parent[ru] = rv;
            }
        }
    }

    let mut class_sort: Vec<Option<(SortId, String)>> = vec![None; n];
    let mut occurs: Vec<bool> = vec![false; n];
    let mut diagnostics = Vec::new();
    let mut constrain = |parent: &mut Vec<usize>,
                         class_sort: &mut Vec<Option<(SortId, String)>>,
                         var: VarId,
                         sort: SortId,
                         context: String| {
        let r = root(parent, var.index());
        match &class_sort[r] {
            None => class_sort[r] = Some((sort, context)),
            Some((s, prev)) if *s != sort => {
                diagnostics.push(Diagnostic::in_sequent(
                    format!(
                        "variable {} used at sort {} in {} but at sort {} in {}",
                        seq.var_names.get(var.index()).cloned().unwrap_or_default(),
                        theory.sorts[s.index()],
                        prev,
                        theory.sorts[sort.index()],
                        context
                    ),
                    idx,
                ));
            }
            Some(_) => {}
        }
    };

    for atom in seq.premise.iter().chain(&seq.conclusion) {
        match atom {
            RhlAtom::Relation { rel, args } => {
                let decl = &theory.relations[rel.index()];
                for (pos, v) in args.iter().enumerate() {
                    occurs[v.index()] = true;
                    constrain(
                        &mut parent,
                        &mut class_sort,
                        *v,
                        decl.arity[pos],
                        format!("{}(..)", decl.name),
                    );
                }
            }
            RhlAtom::SortQuant { var, sort } => {
                occurs[var.index()] = true;
                constrain(
                    &mut parent,
                    &mut class_sort,
                    *var,
                    *sort,
                    "sort quantification".to_string(),
                );
            }
            RhlAtom::Equal(u, v) => {
                occurs[u.index()] = true;
                occurs[v.index()] = true;
            }
        }
    }

    let mut sorts = vec![SortId(0); n];
    for v in 0..n {
        let r = root(&mut parent, v);
        match &class_sort[r] {
            Some((s, _)) => sorts[v] = *s,
            None if occurs[v] => {
                diagnostics.push(Diagnostic::in_sequent(
                    format!(
                        "cannot infer a sort for variable {}",
                        seq.var_names.get(v).cloned().unwrap_or_default()
                    ),
                    idx,
                ));
            }
            None => {}
        }
    }
    if diagnostics.is_empty() {
        Ok(sorts)
    } else {
        Err(diagnostics)
    }
}

/// Eliminate premise equality atoms by substitution.
///
/// For each premise atom `u == v`, every occurrence of `v` in the sequent is
/// replaced by `u` and the atom is dropped. Chained equalities collapse all
/// members onto one variable. Match semantics are preserved: premises match
/// the same instantiations before and after.
pub fn canonicalize_sequent(seq: &Sequent) -> Sequent {
    let mut out = seq.clone();
    loop {
        let pos = out
            .premise
            .iter()
            .position(|a| matches!(a, RhlAtom::Equal(_, _)));
        let Some(pos) = pos else { break };
        let RhlAtom::Equal(u, v) = out.premise.remove(pos) else {
            unreachable!()
        };
        if u == v {
            continue;
        }
        let subst = |x: VarId| if x == v { u } else { x };
        for atom in out.premise.iter_mut().chain(out.conclusion.iter_mut()) {
            *atom = atom.map_vars(subst);
        }
    }
    out
}

/// True iff every conclusion variable occurs in the premise.
pub fn classify_surjective(seq: &Sequent) -> bool {
    let premise = seq.premise_vars();
    seq.conclusion_vars().is_subset(&premise)
}

/// Detect premise symmetries: equivalence classes of premise atom positions
/// such that swapping two positions of one class extends to a variable
/// permutation fixing the premise (as a multiset) and mapping the conclusion
/// to an equivalent one (up to equality-side swaps and atom reordering).
///
/// The search is over pairs of same-relation atoms only: the candidate
/// permutation is read off positionally from the two argument lists, then
/// verified against the whole sequent. The engine emits one semi-naive
/// variant per class instead of one per atom.
pub fn detect_symmetries(seq: &Sequent) -> Vec<Vec<usize>> {
    let n = seq.premise.len();
    let mut class: Vec<usize> = (0..n).collect();
    fn root(class: &mut Vec<usize>, mut x: usize) -> usize {
        while class[x] != x {
            class[x] = class[class[x]];
            x = class[x];
        }
        x
    }

    for i in 0..n {
        for j in i + 1..n {
            if symmetric_pair(seq, i, j) {
                let (ri, rj) = (root(&mut class, i), root(&mut class, j));
                if ri != rj {
                    class[rj.max(ri)] = rj.min(ri);
                }
            }
        }
    }

    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut rep_to_class: Vec<Option<usize>> = vec![None; n];
    for pos in 0..n {
        let r = root(&mut class, pos);
        match rep_to_class[r] {
            Some(c) => classes[c].push(pos),
            None => {
                rep_to_class[r] = Some(classes.len());
                classes.push(vec![pos]);
            }
        }
    }
    classes
}

fn symmetric_pair(seq: &Sequent, i: usize, j: usize) -> bool {
    let (RhlAtom::Relation { rel: ri, args: ai }, RhlAtom::Relation { rel: rj, args: aj }) =
        (&seq.premise[i], &seq.premise[j])
    else {
        return false;
    };
    if ri != rj || ai.len() != aj.len() {
        return false;
    }

    // Candidate permutation: swap arguments positionally, identity elsewhere.
    let mut map: Vec<Option<VarId>> = vec![None; seq.var_count()];
    let mut bind = |x: VarId, y: VarId| -> bool {
        match map[x.index()] {
            None => {
                map[x.index()] = Some(y);
                true
            }
            Some(z) => z == y,
        }
    };
    for (x, y) in ai.iter().zip(aj.iter()) {
        if !bind(*x, *y) || !bind(*y, *x) {
            return false;
        }
    }
    let perm = |v: VarId| map[v.index()].unwrap_or(v);

    let multiset = |atoms: &[RhlAtom]| -> Vec<RhlAtom> {
        let mut v: Vec<RhlAtom> = atoms.iter().map(|a| a.orient()).collect();
        v.sort();
        v
    };
    let premise_image: Vec<RhlAtom> = seq.premise.iter().map(|a| a.map_vars(perm)).collect();
    if multiset(&premise_image) != multiset(&seq.premise) {
        return false;
    }
    let conclusion_image: Vec<RhlAtom> = seq.conclusion.iter().map(|a| a.map_vars(perm)).collect();
    multiset(&conclusion_image) == multiset(&seq.conclusion)
}

/// Infer functional dependencies from sequents that syntactically match the
/// functionality template: a premise of exactly two atoms on one relation
/// sharing variables exactly at the positions outside some set `I`, and a
/// conclusion equating the positions in `I`.
///
/// Purely syntactic and conservative; no entailment reasoning.
pub fn infer_functional_projections(theory: &RhlTheory) -> Vec<FunctionalDependency> {
    let mut out: Vec<FunctionalDependency> = Vec::new();
    'seqs: for (idx, seq) in theory.sequents.iter().enumerate() {
        let [RhlAtom::Relation { rel: r1, args: a }, RhlAtom::Relation { rel: r2, args: b }] =
            &seq.premise[..]
        else {
            continue;
        };
        if r1 != r2 || a.len() != b.len() || a.is_empty() {
            continue;
        }
        // No repeated variable within either atom.
        let distinct = |args: &[VarId]| args.iter().collect::<BTreeSet<_>>().len() == args.len();
        if !distinct(a) || !distinct(b) {
            continue;
        }

        let determined: BTreeSet<usize> = (0..a.len()).filter(|&k| a[k] != b[k]).collect();
        if determined.is_empty() {
            continue;
        }
        // The determined variables of one atom must be private to it.
        let a_det: BTreeSet<VarId> = determined.iter().map(|&k| a[k]).collect();
        let b_det: BTreeSet<VarId> = determined.iter().map(|&k| b[k]).collect();
        if a_det.intersection(&b_det).next().is_some() {
            continue;
        }

        // Conclusion must be exactly the equations at the determined positions.
        let mut wanted: BTreeSet<(VarId, VarId)> = BTreeSet::new();
        for &k in &determined {
            let (u, v) = (a[k], b[k]);
            wanted.insert((u.min(v), u.max(v)));
        }
        let mut got: BTreeSet<(VarId, VarId)> = BTreeSet::new();
        for atom in &seq.conclusion {
            match atom {
                RhlAtom::Equal(u, v) => {
                    got.insert((*u.min(v), *u.max(v)));
                }
                _ => continue 'seqs,
            }
        }
        if got != wanted {
            continue;
        }

        let determining: BTreeSet<usize> = (0..a.len()).filter(|k| !determined.contains(k)).collect();
        // The same dependency inferred twice still lists both sources, so the
        // engine can skip every sequent the indices enforce.
        out.push(FunctionalDependency {
            relation: *r1,
            determined,
            determining,
            source_sequent: idx,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> VarId {
        VarId(i)
    }

    fn rel(r: RelationId, args: &[u32]) -> RhlAtom {
        RhlAtom::Relation {
            rel: r,
            args: args.iter().map(|&i| VarId(i)).collect(),
        }
    }

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("x{}", i)).collect()
    }

    fn transitivity_theory() -> (RhlTheory, RelationId) {
        let mut th = RhlTheory::new();
        let s = th.add_sort("S");
        let le = th.add_relation("Le", vec![s, s]);
        th.add_sequent(Sequent::new(
            vec![rel(le, &[0, 1]), rel(le, &[1, 2])],
            vec![rel(le, &[0, 2])],
            names(3),
        ));
        (th, le)
    }

    #[test]
    fn validates_wellformed_transitivity() {
        let (th, _) = transitivity_theory();
        assert!(validate_theory(&th).is_empty());
    }

    #[test]
    fn rejects_arity_mismatch() {
        let (mut th, le) = transitivity_theory();
        th.add_sequent(Sequent::new(
            vec![rel(le, &[0, 1, 2])],
            vec![rel(le, &[0, 1])],
            names(3),
        ));
        let ds = validate_theory(&th);
        assert_eq!(ds.len(), 1);
        assert_eq!(ds[0].sequent, Some(1));
        assert!(ds[0].message.contains("expects 2 arguments"));
    }

    #[test]
    fn rejects_sort_clash() {
        let mut th = RhlTheory::new();
        let a = th.add_sort("A");
        let b = th.add_sort("B");
        let p = th.add_relation("P", vec![a]);
        let q = th.add_relation("Q", vec![b]);
        th.add_sequent(Sequent::new(
            vec![rel(p, &[0]), rel(q, &[0])],
            vec![],
            names(1),
        ));
        let ds = validate_theory(&th);
        assert_eq!(ds.len(), 1);
        assert!(ds[0].message.contains("sort"));
    }

    #[test]
    fn canonicalize_substitutes_premise_equality() {
        let (th, le) = transitivity_theory();
        let p = th.relation_by_name("Le").unwrap();
        assert_eq!(p, le);
        let seq = Sequent::new(
            vec![rel(le, &[0, 1]), RhlAtom::Equal(v(0), v(1))],
            vec![rel(le, &[0, 0])],
            names(2),
        );
        let canon = canonicalize_sequent(&seq);
        assert_eq!(canon.premise, vec![rel(le, &[0, 0])]);
        assert_eq!(canon.conclusion, vec![rel(le, &[0, 0])]);
    }

    #[test]
    fn canonicalize_leaves_equality_free_premise_alone() {
        let (th, _) = transitivity_theory();
        let seq = &th.sequents[0];
        let canon = canonicalize_sequent(seq);
        assert_eq!(canon.premise, seq.premise);
        assert_eq!(canon.conclusion, seq.conclusion);
    }

    #[test]
    fn canonicalize_collapses_equality_chain() {
        // u == v and v == w must leave a single variable; the brute-force
        // match-set check for this lives in the oracle tests.
        let (_, le) = transitivity_theory();
        let seq = Sequent::new(
            vec![
                RhlAtom::Equal(v(0), v(1)),
                RhlAtom::Equal(v(1), v(2)),
                rel(le, &[2, 2]),
            ],
            vec![rel(le, &[0, 1])],
            names(3),
        );
        let canon = canonicalize_sequent(&seq);
        assert_eq!(canon.premise, vec![rel(le, &[0, 0])]);
        assert_eq!(canon.conclusion, vec![rel(le, &[0, 0])]);
    }

    #[test]
    fn surjectivity_examples() {
        let mut th = RhlTheory::new();
        let a = th.add_sort("A");
        let b = th.add_sort("B");
        let f = th.add_relation("f", vec![a, b]);
        let g = th.add_relation("g", vec![b, a]);
        // f(x, y) => g(y, x)
        let retract = Sequent::new(vec![rel(f, &[0, 1])], vec![rel(g, &[1, 0])], names(2));
        assert!(classify_surjective(&retract));
        // x : A => f(x, v), v fresh
        let total = Sequent::new(
            vec![RhlAtom::SortQuant { var: v(0), sort: a }],
            vec![rel(f, &[0, 1])],
            names(2),
        );
        assert!(!classify_surjective(&total));
        // P(x) => P(x)
        let p = th.add_relation("P", vec![a]);
        let idem = Sequent::new(vec![rel(p, &[0])], vec![rel(p, &[0])], names(1));
        assert!(classify_surjective(&idem));
    }

    #[test]
    fn surjectivity_invariant_under_premise_reordering() {
        let (_, le) = transitivity_theory();
        let seq = Sequent::new(
            vec![rel(le, &[0, 1]), rel(le, &[1, 2])],
            vec![rel(le, &[0, 2])],
            names(3),
        );
        let mut reordered = seq.clone();
        reordered.premise.reverse();
        assert_eq!(
            classify_surjective(&canonicalize_sequent(&seq)),
            classify_surjective(&canonicalize_sequent(&reordered))
        );
    }

    #[test]
    fn functionality_premise_is_one_symmetry_class() {
        let mut th = RhlTheory::new();
        let s = th.add_sort("S");
        let f = th.add_relation("f", vec![s, s, s]);
        let seq = Sequent::new(
            vec![rel(f, &[0, 1, 2]), rel(f, &[0, 1, 3])],
            vec![RhlAtom::Equal(v(2), v(3))],
            names(4),
        );
        assert_eq!(detect_symmetries(&seq), vec![vec![0, 1]]);
    }

    #[test]
    fn antisymmetry_premise_is_one_symmetry_class() {
        let (_, le) = transitivity_theory();
        let seq = Sequent::new(
            vec![rel(le, &[0, 1]), rel(le, &[1, 0])],
            vec![RhlAtom::Equal(v(0), v(1))],
            names(2),
        );
        assert_eq!(detect_symmetries(&seq), vec![vec![0, 1]]);
    }

    #[test]
    fn transitivity_premise_has_no_symmetry() {
        // Exhaustive check over all variable permutations confirms the
        // expected classes: no permutation swaps the two atoms while
        // preserving the conclusion.
        let (th, _) = transitivity_theory();
        let seq = &th.sequents[0];
        assert_eq!(detect_symmetries(seq), vec![vec![0], vec![1]]);

        let perms3: Vec<Vec<u32>> = vec![
            vec![0, 1, 2],
            vec![0, 2, 1],
            vec![1, 0, 2],
            vec![1, 2, 0],
            vec![2, 0, 1],
            vec![2, 1, 0],
        ];
        for perm in perms3 {
            let f = |x: VarId| VarId(perm[x.index()]);
            let img: Vec<RhlAtom> = seq.premise.iter().map(|a| a.map_vars(f)).collect();
            let swaps = img[0] == seq.premise[1] && img[1] == seq.premise[0];
            let conclusion_fixed = seq
                .conclusion
                .iter()
                .map(|a| a.map_vars(f))
                .collect::<Vec<_>>()
                == seq.conclusion;
            assert!(
                !(swaps && conclusion_fixed),
                "unexpected symmetry under {:?}",
                perm
            );
        }
    }

    #[test]
    fn symmetries_never_merge_distinct_relations() {
        let mut th = RhlTheory::new();
        let s = th.add_sort("S");
        let p = th.add_relation("P", vec![s, s]);
        let q = th.add_relation("Q", vec![s, s]);
        let seq = Sequent::new(
            vec![rel(p, &[0, 1]), rel(q, &[0, 1])],
            vec![RhlAtom::Equal(v(0), v(1))],
            names(2),
        );
        assert_eq!(detect_symmetries(&seq), vec![vec![0], vec![1]]);
    }

    #[test]
    fn functionality_yields_last_projection_dependency() {
        let mut th = RhlTheory::new();
        let s = th.add_sort("S");
        let f = th.add_relation("f", vec![s, s, s]);
        th.add_sequent(Sequent::new(
            vec![rel(f, &[0, 1, 2]), rel(f, &[0, 1, 3])],
            vec![RhlAtom::Equal(v(2), v(3))],
            names(4),
        ));
        let deps = infer_functional_projections(&th);
        assert_eq!(deps.len(), 1);
        assert_eq!(deps[0].relation, f);
        assert_eq!(deps[0].determined, BTreeSet::from([2]));
        assert_eq!(deps[0].determining, BTreeSet::from([0, 1]));
        assert_eq!(deps[0].source_sequent, 0);
    }

    #[test]
    fn injectivity_yields_argument_projections_dependency() {
        let mut th = RhlTheory::new();
        let s = th.add_sort("S");
        let f = th.add_relation("f", vec![s, s, s]);
        // f(u1, u2, x) and f(w1, w2, x) => u1 == w1 and u2 == w2
        th.add_sequent(Sequent::new(
            vec![rel(f, &[0, 1, 4]), rel(f, &[2, 3, 4])],
            vec![RhlAtom::Equal(v(0), v(2)), RhlAtom::Equal(v(1), v(3))],
            names(5),
        ));
        let deps = infer_functional_projections(&th);
        assert_eq!(deps.len(), 1);
        assert_eq!(deps[0].determined, BTreeSet::from([0, 1]));
        assert_eq!(deps[0].determining, BTreeSet::from([2]));
    }

    #[test]
    fn transitivity_yields_no_dependency() {
        let (th, _) = transitivity_theory();
        assert!(infer_functional_projections(&th).is_empty());
    }

    #[test]
    fn repeated_variables_disqualify_the_template() {
        // r(x, x, u) and r(x, x, w) => u == w only constrains tuples with
        // equal first components; it must not be read as a dependency.
        let mut th = RhlTheory::new();
        let s = th.add_sort("S");
        let r = th.add_relation("r", vec![s, s, s]);
        th.add_sequent(Sequent::new(
            vec![rel(r, &[0, 0, 1]), rel(r, &[0, 0, 2])],
            vec![RhlAtom::Equal(v(1), v(2))],
            names(3),
        ));
        assert!(infer_functional_projections(&th).is_empty());
    }

    #[test]
    fn crossed_determined_variables_disqualify_the_template() {
        // r(u, w) and r(w, u) => u == w matches only mirrored tuple pairs.
        let mut th = RhlTheory::new();
        let s = th.add_sort("S");
        let r = th.add_relation("r", vec![s, s]);
        th.add_sequent(Sequent::new(
            vec![rel(r, &[0, 1]), rel(r, &[1, 0])],
            vec![RhlAtom::Equal(v(0), v(1))],
            names(2),
        ));
        assert!(infer_functional_projections(&th).is_empty());
    }

    #[test]
    fn prepare_fills_computed_fields() {
        let (mut th, le) = transitivity_theory();
        th.add_sequent(Sequent::new(
            vec![rel(le, &[0, 1]), rel(le, &[1, 0])],
            vec![RhlAtom::Equal(v(0), v(1))],
            names(2),
        ));
        th.prepare().unwrap();
        assert!(th.is_prepared());
        assert!(th.sequents[0].surjective);
        assert_eq!(th.sequents[0].symmetry_classes, vec![vec![0], vec![1]]);
        assert!(th.sequents[1].surjective);
        assert_eq!(th.sequents[1].symmetry_classes, vec![vec![0, 1]]);
        assert_eq!(th.sequents[0].var_sorts, vec![SortId(0); 3]);
    }
}
