//! The relational structure under construction.
//!
//! Per sort: an element arena with a union-find for inferred equality and an
//! occurrence list per element (every tuple the element was inserted into).
//! Per relation: the tuple set, delta-partitioned into `all` / `new` (added
//! in the previous iteration) / `pending` (staged for the next delta), plus
//! maintained indices. Indices on a relation with a functional projection
//! hold at most one tuple per key and emit equality constraints instead of
//! admitting a second one.
//!
//! Stored tuples contain canonical representatives only at iteration
//! boundaries; the occurrence lists make re-normalization incremental. The
//! lists themselves are never normalized — stale entries are skipped when a
//! recorded tuple is no longer stored.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use indexmap::IndexSet;

use crate::ids::{ElementId, RelationId, SortId};
use crate::theory::{Diagnostic, FunctionalDependency, RhlTheory};
use crate::union_find::UnionFind;

pub type Tuple = Vec<ElementId>;

/// Result of [`RelationalStructure::insert_tuple`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InsertOutcome {
    /// The tuple was new and is now stored (in the pending delta).
    Added,
    /// The tuple was already stored.
    Duplicate,
    /// A functional index already holds a different tuple with the same
    /// determining key; nothing was stored and these equality constraints
    /// were queued instead.
    EqualitiesEmitted(Vec<(ElementId, ElementId)>),
}

#[derive(Clone, Debug, Default)]
struct SortData {
    uf: UnionFind,
    occurrences: Vec<Vec<(RelationId, Tuple)>>,
    new_elems: Vec<ElementId>,
    pending_elems: Vec<ElementId>,
    /// Intern name per element, if it has one.
    elem_names: Vec<Option<String>>,
}

#[derive(Clone, Debug)]
struct RelationData {
    arity: Vec<SortId>,
    all: IndexSet<Tuple>,
    new: IndexSet<Tuple>,
    pending: IndexSet<Tuple>,
    indices: Vec<Index>,
    functional: Vec<FunctionalIndex>,
}

/// A maintained lookup index on a fixed key projection.
#[derive(Clone, Debug)]
pub struct Index {
    key: Vec<usize>,
    map: BTreeMap<Vec<ElementId>, IndexSet<Tuple>>,
}

impl Index {
    fn key_of(&self, t: &[ElementId]) -> Vec<ElementId> {
        self.key.iter().map(|&k| t[k]).collect()
    }
    fn insert(&mut self, t: &Tuple) {
        let key = self.key_of(t);
        self.map.entry(key).or_default().insert(t.clone());
    }
    fn remove(&mut self, t: &Tuple) {
        let key = self.key_of(t);
        if let Some(set) = self.map.get_mut(&key) {
            set.swap_remove(t);
            if set.is_empty() {
                self.map.remove(&key);
            }
        }
    }
}

/// An index whose key is the determining projection set of a functional
/// dependency; lookups yield at most one tuple.
#[derive(Clone, Debug)]
struct FunctionalIndex {
    determined: Vec<usize>,
    determining: Vec<usize>,
    map: BTreeMap<Vec<ElementId>, Tuple>,
}

impl FunctionalIndex {
    fn key_of(&self, t: &[ElementId]) -> Vec<ElementId> {
        self.determining.iter().map(|&k| t[k]).collect()
    }
}

#[derive(Clone, Debug)]
pub struct RelationalStructure {
    sorts: Vec<SortData>,
    rels: Vec<RelationData>,
    /// Equalities discovered by functional indices, waiting for the next
    /// equality application phase.
    pending_eqs: Vec<(SortId, ElementId, ElementId)>,
    /// Occurrence entries of retired elements, waiting for [`Self::normalize`].
    staged: Vec<(RelationId, Tuple)>,
    /// Intern table for facts files and dumps.
    names: BTreeMap<String, (SortId, ElementId)>,
}

impl RelationalStructure {
    pub fn new(theory: &RhlTheory) -> Self {
        RelationalStructure {
            sorts: theory.sorts.iter().map(|_| SortData::default()).collect(),
            rels: theory
                .relations
                .iter()
                .map(|decl| RelationData {
                    arity: decl.arity.clone(),
                    all: IndexSet::new(),
                    new: IndexSet::new(),
                    pending: IndexSet::new(),
                    indices: Vec::new(),
                    functional: Vec::new(),
                })
                .collect(),
            pending_eqs: Vec::new(),
            staged: Vec::new(),
            names: BTreeMap::new(),
        }
    }

    // ------------------------------------------------------------------
    // Elements and equality
    // ------------------------------------------------------------------

    /// Adjoin a fresh canonical element to a sort (entering the pending
    /// element delta).
    pub fn new_element(&mut self, sort: SortId) -> ElementId {
        let data = &mut self.sorts[sort.index()];
        let e = data.uf.push();
        data.occurrences.push(Vec::new());
        data.elem_names.push(None);
        data.pending_elems.push(e);
        e
    }

    /// Total number of elements ever allocated for `sort`, retired included.
    pub fn element_count(&self, sort: SortId) -> usize {
        self.sorts[sort.index()].uf.len()
    }

    pub fn find(&self, sort: SortId, e: ElementId) -> ElementId {
        self.sorts[sort.index()].uf.find(e)
    }

    pub fn find_compress(&mut self, sort: SortId, e: ElementId) -> ElementId {
        self.sorts[sort.index()].uf.find_compress(e)
    }

    pub fn is_canonical(&self, sort: SortId, e: ElementId) -> bool {
        self.sorts[sort.index()].uf.is_canonical(e)
    }

    pub fn canonical_elements(&self, sort: SortId) -> impl Iterator<Item = ElementId> + '_ {
        let data = &self.sorts[sort.index()];
        (0..data.uf.len() as u32)
            .map(ElementId)
            .filter(move |&e| data.uf.is_canonical(e))
    }

    pub fn new_elements(&self, sort: SortId) -> &[ElementId] {
        &self.sorts[sort.index()].new_elems
    }

    /// Merge the classes of `a` and `b`. The element with the longer
    /// occurrence list stays canonical (ties keep the smaller id); the
    /// retired element's occurrence list is staged for normalization and
    /// concatenated onto the kept one. Returns `(kept, retired)`, or `None`
    /// if the classes were already equal.
    pub fn union(&mut self, sort: SortId, a: ElementId, b: ElementId) -> Option<(ElementId, ElementId)> {
        let data = &mut self.sorts[sort.index()];
        let ra = data.uf.find_compress(a);
        let rb = data.uf.find_compress(b);
        if ra == rb {
            return None;
        }
        let (la, lb) = (
            data.occurrences[ra.index()].len(),
            data.occurrences[rb.index()].len(),
        );
        let (kept, retired) = if la > lb || (la == lb && ra < rb) {
            (ra, rb)
        } else {
            (rb, ra)
        };
        data.uf.union_into(retired, kept);
        let moved = std::mem::take(&mut data.occurrences[retired.index()]);
        self.staged.extend(moved.iter().cloned());
        data.occurrences[kept.index()].extend(moved);
        Some((kept, retired))
    }

    /// Queue an equality constraint for the next equality application phase.
    pub fn push_pending_equality(&mut self, sort: SortId, a: ElementId, b: ElementId) {
        self.pending_eqs.push((sort, a, b));
    }

    pub fn has_pending_equalities(&self) -> bool {
        !self.pending_eqs.is_empty()
    }

    pub fn take_pending_equalities(&mut self) -> Vec<(SortId, ElementId, ElementId)> {
        std::mem::take(&mut self.pending_eqs)
    }

    // ------------------------------------------------------------------
    // Tuples
    // ------------------------------------------------------------------

    pub fn all(&self, rel: RelationId) -> &IndexSet<Tuple> {
        &self.rels[rel.index()].all
    }

    pub fn new_tuples(&self, rel: RelationId) -> &IndexSet<Tuple> {
        &self.rels[rel.index()].new
    }

    pub fn relation_count(&self) -> usize {
        self.rels.len()
    }

    pub fn sort_count(&self) -> usize {
        self.sorts.len()
    }

    /// Insert a tuple of canonical elements.
    ///
    /// If a functional index holds a different tuple under the same
    /// determining key, nothing is inserted and the determined positions are
    /// queued as equality constraints instead. Otherwise the tuple enters
    /// `all`, the pending delta, every index, and the occurrence list of each
    /// of its elements.
    pub fn insert_tuple(&mut self, rel: RelationId, t: Tuple) -> InsertOutcome {
        let data = &mut self.rels[rel.index()];
        assert_eq!(t.len(), data.arity.len(), "arity mismatch on insert");
        debug_assert!(t
            .iter()
            .zip(&data.arity)
            .all(|(&e, &s)| self.sorts[s.index()].uf.is_canonical(e)));

        if data.all.contains(&t) {
            return InsertOutcome::Duplicate;
        }

        let mut emitted = Vec::new();
        for fi in &data.functional {
            let key = fi.key_of(&t);
            if let Some(existing) = fi.map.get(&key) {
                if *existing != t {
                    for &pos in &fi.determined {
                        emitted.push((data.arity[pos], t[pos], existing[pos]));
                    }
                }
            }
        }
        if !emitted.is_empty() {
            let pairs = emitted.iter().map(|&(_, a, b)| (a, b)).collect();
            self.pending_eqs.extend(emitted);
            return InsertOutcome::EqualitiesEmitted(pairs);
        }

        for fi in &mut data.functional {
            let key = fi.key_of(&t);
            fi.map.insert(key, t.clone());
        }
        for index in &mut data.indices {
            index.insert(&t);
        }
        data.all.insert(t.clone());
        data.pending.insert(t.clone());
        for (pos, &e) in t.iter().enumerate() {
            let sort = data.arity[pos];
            self.sorts[sort.index()].occurrences[e.index()].push((rel, t.clone()));
        }
        InsertOutcome::Added
    }

    fn remove_tuple(&mut self, rel: RelationId, t: &Tuple) {
        let data = &mut self.rels[rel.index()];
        data.all.swap_remove(t);
        data.new.swap_remove(t);
        data.pending.swap_remove(t);
        for index in &mut data.indices {
            index.remove(t);
        }
        for fi in &mut data.functional {
            let key = fi.key_of(t);
            if fi.map.get(&key) == Some(t) {
                fi.map.remove(&key);
            }
        }
    }

    /// Rewrite every staged occurrence entry to canonical representatives.
    ///
    /// Each staged `(rel, tuple)` still stored is removed, its components
    /// replaced by their representatives, and the result re-inserted with
    /// full [`Self::insert_tuple`] semantics — so functional collisions during
    /// normalization queue equalities, and a rewritten tuple enters the
    /// pending delta. Returns whether anything changed.
    pub fn normalize(&mut self) -> bool {
        let mut changed = false;
        while let Some((rel, tuple)) = self.staged.pop() {
            if !self.rels[rel.index()].all.contains(&tuple) {
                continue; // stale entry
            }
            let arity = self.rels[rel.index()].arity.clone();
            let normed: Tuple = tuple
                .iter()
                .zip(&arity)
                .map(|(&e, &s)| self.sorts[s.index()].uf.find_compress(e))
                .collect();
            if normed == tuple {
                continue;
            }
            self.remove_tuple(rel, &tuple);
            self.insert_tuple(rel, normed);
            changed = true;
        }
        changed
    }

    /// Rotate the deltas: the previous `new` becomes plain `all` data and
    /// `pending` becomes `new`, for tuples and sort elements alike.
    pub fn advance_deltas(&mut self) {
        for rel in &mut self.rels {
            rel.new = std::mem::take(&mut rel.pending);
        }
        for sort in &mut self.sorts {
            sort.new_elems = std::mem::take(&mut sort.pending_elems);
        }
    }

    // ------------------------------------------------------------------
    // Indices
    // ------------------------------------------------------------------

    /// Create (and backfill) an index on `key` positions if not yet present.
    pub fn ensure_index(&mut self, rel: RelationId, key: &[usize]) {
        let data = &mut self.rels[rel.index()];
        if data.indices.iter().any(|ix| ix.key == key) {
            return;
        }
        let mut index = Index {
            key: key.to_vec(),
            map: BTreeMap::new(),
        };
        for t in &data.all {
            index.insert(t);
        }
        data.indices.push(index);
    }

    /// Look up the tuples whose `key` projection equals `key_values`.
    /// The index must have been created via [`Self::ensure_index`].
    pub fn index_lookup(
        &self,
        rel: RelationId,
        key: &[usize],
        key_values: &[ElementId],
    ) -> Option<&IndexSet<Tuple>> {
        let data = &self.rels[rel.index()];
        let index = data
            .indices
            .iter()
            .find(|ix| ix.key == key)
            .expect("index was not created before lookup");
        index.map.get(key_values)
    }

    /// Install functional indices for the given dependencies (idempotent).
    /// Backfilling over existing tuples emits equality constraints for any
    /// key already held by a different tuple, and drops the extra tuple.
    pub fn enable_functional_indices(&mut self, deps: &[FunctionalDependency]) {
        for dep in deps {
            let data = &mut self.rels[dep.relation.index()];
            let determining: Vec<usize> = dep.determining.iter().copied().collect();
            let determined: Vec<usize> = dep.determined.iter().copied().collect();
            if data
                .functional
                .iter()
                .any(|fi| fi.determining == determining)
            {
                continue;
            }
            let mut fi = FunctionalIndex {
                determined,
                determining,
                map: BTreeMap::new(),
            };
            let mut extras: Vec<Tuple> = Vec::new();
            for t in &data.all {
                let key = fi.key_of(t);
                match fi.map.get(&key) {
                    None => {
                        fi.map.insert(key, t.clone());
                    }
                    Some(existing) => {
                        for &pos in &fi.determined {
                            self.pending_eqs.push((data.arity[pos], t[pos], existing[pos]));
                        }
                        extras.push(t.clone());
                    }
                }
            }
            data.functional.push(fi);
            for t in extras {
                self.remove_tuple(dep.relation, &t);
            }
        }
    }

    // ------------------------------------------------------------------
    // Invariant checks
    // ------------------------------------------------------------------

    /// Full-scan check that every stored tuple component is canonical.
    /// Panics with context on the first violation.
    pub fn assert_canonical(&self, context: &str) {
        for (r, data) in self.rels.iter().enumerate() {
            for t in &data.all {
                for (pos, &e) in t.iter().enumerate() {
                    let sort = data.arity[pos];
                    assert!(
                        self.sorts[sort.index()].uf.is_canonical(e),
                        "canonical-form violation ({}): relation {} tuple {:?} position {}",
                        context,
                        r,
                        t,
                        pos
                    );
                }
            }
        }
    }

    /// Replay every occurrence list; the entries that are still stored must
    /// cover all stored tuples (completeness up to normalization).
    pub fn occurrence_cover(&self) -> bool {
        let mut covered: Vec<IndexSet<Tuple>> = vec![IndexSet::new(); self.rels.len()];
        for sort in &self.sorts {
            for occ in &sort.occurrences {
                for (rel, t) in occ {
                    covered[rel.index()].insert(t.clone());
                }
            }
        }
        self.rels.iter().enumerate().all(|(r, data)| {
            data.all
                .iter()
                .all(|t| t.is_empty() || covered[r].contains(t))
        })
    }

    // ------------------------------------------------------------------
    // Facts files and model dumps
    // ------------------------------------------------------------------

    /// Intern `name` as an element of `sort`, allocating on first sight.
    pub fn intern_element(
        &mut self,
        name: &str,
        sort: SortId,
    ) -> Result<ElementId, (SortId, ElementId)> {
        match self.names.get(name) {
            Some(&(s, e)) if s == sort => Ok(e),
            Some(&(s, e)) => Err((s, e)),
            None => {
                let e = self.new_element(sort);
                self.names.insert(name.to_string(), (sort, e));
                self.sorts[sort.index()].elem_names[e.index()] = Some(name.to_string());
                Ok(e)
            }
        }
    }

    pub fn named_element(&self, name: &str) -> Option<(SortId, ElementId)> {
        self.names.get(name).copied()
    }

    /// Load ground facts: lines `Rel(name, ...).`, `elem name : Sort.`,
    /// `#` comments. Element names are interned; their sort is inferred
    /// from the relation arity.
    pub fn ingest_facts(&mut self, theory: &RhlTheory, text: &str) -> Result<(), Diagnostic> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(i) => &raw[..i],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let lineno = lineno + 1;
            let stmt = line.strip_suffix('.').ok_or_else(|| {
                Diagnostic::at(format!("expected `.` at end of fact: `{}`", line), lineno, 1)
            })?;
            let stmt = stmt.trim();

            if let Some(rest) = stmt.strip_prefix("elem ") {
                let mut parts = rest.splitn(2, ':');
                let name = parts.next().unwrap_or("").trim();
                let sort_name = parts.next().unwrap_or("").trim();
                let sort = theory.sort_by_name(sort_name).ok_or_else(|| {
                    Diagnostic::at(format!("unknown sort `{}`", sort_name), lineno, 1)
                })?;
                if !is_fact_name(name) {
                    return Err(Diagnostic::at(
                        format!("bad element name `{}`", name),
                        lineno,
                        1,
                    ));
                }
                self.intern_element(name, sort).map_err(|(s, _)| {
                    Diagnostic::at(
                        format!(
                            "element `{}` already declared at sort {}",
                            name,
                            theory.sorts[s.index()]
                        ),
                        lineno,
                        1,
                    )
                })?;
                continue;
            }

            let open = stmt.find('(').ok_or_else(|| {
                Diagnostic::at(format!("expected `(` in fact: `{}`", stmt), lineno, 1)
            })?;
            if !stmt.ends_with(')') {
                return Err(Diagnostic::at(
                    format!("expected `)` before `.`: `{}`", stmt),
                    lineno,
                    1,
                ));
            }
            let rel_name = stmt[..open].trim();
            let rel = theory.relation_by_name(rel_name).ok_or_else(|| {
                Diagnostic::at(format!("unknown relation `{}`", rel_name), lineno, 1)
            })?;
            let args_text = stmt[open + 1..stmt.len() - 1].trim();
            let arg_names: Vec<&str> = if args_text.is_empty() {
                Vec::new()
            } else {
                args_text.split(',').map(|a| a.trim()).collect()
            };
            let arity = theory.arity(rel).to_vec();
            if arg_names.len() != arity.len() {
                return Err(Diagnostic::at(
                    format!(
                        "relation `{}` expects {} arguments, got {}",
                        rel_name,
                        arity.len(),
                        arg_names.len()
                    ),
                    lineno,
                    1,
                ));
            }
            let mut tuple = Vec::with_capacity(arity.len());
            for (name, &sort) in arg_names.iter().zip(&arity) {
                if !is_fact_name(name) {
                    return Err(Diagnostic::at(
                        format!("bad element name `{}`", name),
                        lineno,
                        1,
                    ));
                }
                let e = self.intern_element(name, sort).map_err(|(s, _)| {
                    Diagnostic::at(
                        format!(
                            "element `{}` used at sort {} but declared at sort {}",
                            name,
                            theory.sorts[sort.index()],
                            theory.sorts[s.index()]
                        ),
                        lineno,
                        1,
                    )
                })?;
                tuple.push(self.find_compress(sort, e));
            }
            self.insert_tuple(rel, tuple);
        }
        Ok(())
    }

    /// Display name of an element: its intern name, or a synthesized
    /// `<Sort><id>` name (prefixed with `_` until it avoids the intern table).
    pub fn element_name(&self, theory: &RhlTheory, sort: SortId, e: ElementId) -> String {
        if let Some(name) = &self.sorts[sort.index()].elem_names[e.index()] {
            return name.clone();
        }
        let mut name = format!("{}{}", theory.sorts[sort.index()], e.0);
        while self.names.contains_key(&name) {
            name.insert(0, '_');
        }
        name
    }

    /// Deterministic text dump: canonical elements per sort, normalized
    /// tuples per relation sorted lexicographically, and the retired-name
    /// to canonical-name mapping.
    pub fn dump_model(&self, theory: &RhlTheory) -> String {
        fn item_line(out: &mut String, name: &str, items: &[String]) {
            if items.is_empty() {
                let _ = writeln!(out, "  {}:", name);
            } else {
                let _ = writeln!(out, "  {}: {}", name, items.join(" "));
            }
        }

        let mut out = String::new();
        out.push_str("sorts:\n");
        for (s, sort_name) in theory.sorts.iter().enumerate() {
            let sort = SortId(s as u32);
            let mut elems: Vec<String> = self
                .canonical_elements(sort)
                .map(|e| self.element_name(theory, sort, e))
                .collect();
            elems.sort();
            item_line(&mut out, sort_name, &elems);
        }
        out.push_str("rels:\n");
        for (r, decl) in theory.relations.iter().enumerate() {
            let rel = RelationId(r as u32);
            let mut rows: Vec<Vec<String>> = self
                .all(rel)
                .iter()
                .map(|t| {
                    t.iter()
                        .enumerate()
                        .map(|(pos, &e)| self.element_name(theory, decl.arity[pos], e))
                        .collect()
                })
                .collect();
            rows.sort();
            let items: Vec<String> = rows
                .iter()
                .map(|row| format!("({})", row.join(", ")))
                .collect();
            item_line(&mut out, &decl.name, &items);
        }
        out.push_str("eqs:\n");
        let mut eqs: Vec<(String, String)> = Vec::new();
        for (s, data) in self.sorts.iter().enumerate() {
            let sort = SortId(s as u32);
            for id in 0..data.uf.len() as u32 {
                let e = ElementId(id);
                if !data.uf.is_canonical(e) {
                    let rep = data.uf.find(e);
                    eqs.push((
                        self.element_name(theory, sort, e),
                        self.element_name(theory, sort, rep),
                    ));
                }
            }
        }
        eqs.sort();
        for (retired, canon) in eqs {
            let _ = writeln!(out, "  {} -> {}", retired, canon);
        }
        out
    }
}

fn is_fact_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::{RhlAtom, Sequent};
    use crate::ids::VarId;
    use std::collections::BTreeSet;

    fn graph_theory() -> (RhlTheory, RelationId) {
        let mut th = RhlTheory::new();
        let s = th.add_sort("S");
        let f = th.add_relation("f", vec![s, s, s]);
        th.add_sequent(Sequent::new(
            vec![
                RhlAtom::Relation { rel: f, args: vec![VarId(0), VarId(1), VarId(2)] },
                RhlAtom::Relation { rel: f, args: vec![VarId(0), VarId(1), VarId(3)] },
            ],
            vec![RhlAtom::Equal(VarId(2), VarId(3))],
            (0..4).map(|i| format!("v{}", i)).collect(),
        ));
        th.prepare().unwrap();
        (th, f)
    }

    #[test]
    fn fresh_elements_are_canonical_and_dense() {
        let (th, _) = graph_theory();
        let mut st = RelationalStructure::new(&th);
        let a = st.new_element(SortId(0));
        let b = st.new_element(SortId(0));
        assert_eq!(a, ElementId(0));
        assert_eq!(b, ElementId(1));
        assert_eq!(st.find(SortId(0), a), a);
        assert_ne!(st.find(SortId(0), a), st.find(SortId(0), b));
        st.advance_deltas();
        assert_eq!(st.new_elements(SortId(0)), &[a, b]);
    }

    #[test]
    fn union_prefers_longer_occurrence_list() {
        let (th, f) = graph_theory();
        let mut st = RelationalStructure::new(&th);
        let s = SortId(0);
        let es: Vec<ElementId> = (0..6).map(|_| st.new_element(s)).collect();
        // es[0] occurs in three tuples, es[5] in one.
        st.insert_tuple(f, vec![es[0], es[1], es[2]]);
        st.insert_tuple(f, vec![es[0], es[2], es[3]]);
        st.insert_tuple(f, vec![es[0], es[3], es[4]]);
        st.insert_tuple(f, vec![es[1], es[2], es[5]]);
        let (kept, retired) = st.union(s, es[5], es[0]).unwrap();
        assert_eq!(kept, es[0]);
        assert_eq!(retired, es[5]);
        assert!(st.union(s, es[0], es[5]).is_none());
    }

    #[test]
    fn union_tie_keeps_smaller_id() {
        let (th, _) = graph_theory();
        let mut st = RelationalStructure::new(&th);
        let s = SortId(0);
        let a = st.new_element(s);
        let b = st.new_element(s);
        let (kept, retired) = st.union(s, b, a).unwrap();
        assert_eq!(kept, a);
        assert_eq!(retired, b);
    }

    #[test]
    fn insert_duplicate_and_occurrences() {
        let (th, f) = graph_theory();
        let mut st = RelationalStructure::new(&th);
        let s = SortId(0);
        let a = st.new_element(s);
        let b = st.new_element(s);
        let c = st.new_element(s);
        assert_eq!(st.insert_tuple(f, vec![a, b, c]), InsertOutcome::Added);
        assert_eq!(st.insert_tuple(f, vec![a, b, c]), InsertOutcome::Duplicate);
        assert_eq!(st.all(f).len(), 1);
        assert!(st.occurrence_cover());
    }

    #[test]
    fn functional_index_emits_equalities_instead_of_second_tuple() {
        let (th, f) = graph_theory();
        let mut st = RelationalStructure::new(&th);
        st.enable_functional_indices(&th.functional_dependencies);
        let s = SortId(0);
        let a = st.new_element(s);
        let b = st.new_element(s);
        let c1 = st.new_element(s);
        let c2 = st.new_element(s);
        assert_eq!(st.insert_tuple(f, vec![a, b, c1]), InsertOutcome::Added);
        match st.insert_tuple(f, vec![a, b, c2]) {
            InsertOutcome::EqualitiesEmitted(eqs) => assert_eq!(eqs, vec![(c2, c1)]),
            other => panic!("expected equalities, got {:?}", other),
        }
        assert_eq!(st.all(f).len(), 1);
        assert!(st.has_pending_equalities());
    }

    #[test]
    fn normalize_rewrites_and_collapses() {
        let (th, f) = graph_theory();
        let mut st = RelationalStructure::new(&th);
        let s = SortId(0);
        let a = st.new_element(s);
        let b = st.new_element(s);
        let c1 = st.new_element(s);
        let c2 = st.new_element(s);
        st.insert_tuple(f, vec![a, b, c1]);
        st.insert_tuple(f, vec![a, b, c2]);
        assert_eq!(st.all(f).len(), 2);
        st.union(s, c1, c2);
        assert!(st.normalize());
        // The two tuples collapse into one.
        assert_eq!(st.all(f).len(), 1);
        let rep = st.find(s, c1);
        assert_eq!(st.all(f).iter().next().unwrap(), &vec![a, b, rep]);
        st.assert_canonical("test");
        assert!(!st.normalize());
    }

    #[test]
    fn normalized_tuple_enters_pending_delta() {
        let (th, f) = graph_theory();
        let mut st = RelationalStructure::new(&th);
        let s = SortId(0);
        let a = st.new_element(s);
        let b = st.new_element(s);
        let c = st.new_element(s);
        let d = st.new_element(s);
        st.insert_tuple(f, vec![a, b, c]);
        st.insert_tuple(f, vec![d, d, d]);
        st.advance_deltas();
        st.advance_deltas();
        assert!(st.new_tuples(f).is_empty());
        // d has the longer occurrence list, so c retires and its tuple is
        // rewritten; the rewritten tuple counts as new data.
        st.union(s, c, d);
        assert!(st.normalize());
        st.advance_deltas();
        assert_eq!(st.new_tuples(f).len(), 1);
        assert!(st.new_tuples(f).contains(&vec![a, b, d]));
    }

    #[test]
    fn index_lookup_tracks_normalization() {
        let (th, f) = graph_theory();
        let mut st = RelationalStructure::new(&th);
        st.ensure_index(f, &[0]);
        let s = SortId(0);
        let a = st.new_element(s);
        let b = st.new_element(s);
        let c = st.new_element(s);
        st.insert_tuple(f, vec![a, a, c]);
        st.insert_tuple(f, vec![b, b, c]);
        assert_eq!(st.index_lookup(f, &[0], &[b]).unwrap().len(), 1);
        st.union(s, a, b); // equal list lengths: the smaller id a stays
        st.normalize();
        assert!(st.index_lookup(f, &[0], &[b]).is_none());
        assert_eq!(st.index_lookup(f, &[0], &[a]).unwrap().len(), 1);
    }

    #[test]
    fn ingest_and_dump_roundtrip() {
        let mut th = RhlTheory::new();
        let s = th.add_sort("S");
        th.add_relation("Le", vec![s, s]);
        th.prepare().unwrap();
        let mut st = RelationalStructure::new(&th);
        st.ingest_facts(&th, "# chain\nLe(n1, n2).\nLe(n2, n3).\nelem lonely : S.\n")
            .unwrap();
        let dump = st.dump_model(&th);
        assert_eq!(
            dump,
            "sorts:\n  S: lonely n1 n2 n3\nrels:\n  Le: (n1, n2) (n2, n3)\neqs:\n"
        );
        // Dumps are themselves valid facts input for the element section.
        let mut st2 = RelationalStructure::new(&th);
        st2.ingest_facts(&th, "Le(n1, n2).\nLe(n2, n3).\nelem lonely : S.\n")
            .unwrap();
        assert_eq!(st2.dump_model(&th), dump);
    }

    #[test]
    fn ingest_rejects_unknown_relation_and_arity() {
        let mut th = RhlTheory::new();
        let s = th.add_sort("S");
        th.add_relation("Le", vec![s, s]);
        th.prepare().unwrap();
        let mut st = RelationalStructure::new(&th);
        let err = st.ingest_facts(&th, "Ge(a, b).").unwrap_err();
        assert!(err.message.contains("unknown relation"));
        assert_eq!(err.line, Some(1));
        let err = st.ingest_facts(&th, "\nLe(a).").unwrap_err();
        assert_eq!(err.line, Some(2));
        assert!(err.message.contains("expects 2 arguments"));
    }

    #[test]
    fn dump_after_union_maps_retired_names() {
        let mut th = RhlTheory::new();
        let s = th.add_sort("S");
        th.add_relation("P", vec![s]);
        th.prepare().unwrap();
        let mut st = RelationalStructure::new(&th);
        st.ingest_facts(&th, "P(a). P(b).".replace(". ", ".\n").as_str())
            .unwrap();
        let (_, a) = st.named_element("a").unwrap();
        let (_, b) = st.named_element("b").unwrap();
        st.union(SortId(0), a, b);
        st.normalize();
        let dump = st.dump_model(&th);
        assert_eq!(dump, "sorts:\n  S: a\nrels:\n  P: (a)\neqs:\n  b -> a\n");
    }

    #[test]
    fn insert_is_idempotent_on_normalized_duplicates() {
        let (th, f) = graph_theory();
        let mut st = RelationalStructure::new(&th);
        let s = SortId(0);
        let a = st.new_element(s);
        let b = st.new_element(s);
        let c = st.new_element(s);
        st.insert_tuple(f, vec![a, b, c]);
        let before: BTreeSet<Tuple> = st.all(f).iter().cloned().collect();
        assert_eq!(st.insert_tuple(f, vec![a, b, c]), InsertOutcome::Duplicate);
        let after: BTreeSet<Tuple> = st.all(f).iter().cloned().collect();
        assert_eq!(before, after);
    }
}
