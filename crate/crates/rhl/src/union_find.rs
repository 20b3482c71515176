//! Union-find over the elements of one sort.
//!
//! The merge direction is *not* decided here: the structure picks which
//! element stays canonical based on occurrence list lengths, so `union_into`
//! takes an explicit direction. `find` comes in a read-only flavor (used
//! while matching, against a shared structure) and a path-halving flavor
//! (used in the write phases).

use crate::ids::ElementId;

#[derive(Clone, Debug, Default)]
pub struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    pub fn new() -> Self {
        UnionFind { parent: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Allocate a fresh singleton class and return its element.
    pub fn push(&mut self) -> ElementId {
        let id = self.parent.len() as u32;
        self.parent.push(id);
        ElementId(id)
    }

    /// Canonical representative, without path compression.
    pub fn find(&self, e: ElementId) -> ElementId {
        let mut x = e.0;
        while self.parent[x as usize] != x {
            x = self.parent[x as usize];
        }
        ElementId(x)
    }

    /// Canonical representative, with path halving.
    pub fn find_compress(&mut self, e: ElementId) -> ElementId {
        let mut x = e.0;
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = self.parent[x as usize];
        }
        ElementId(x)
    }

    pub fn is_canonical(&self, e: ElementId) -> bool {
        self.parent[e.index()] == e.0
    }

    /// Merge the class of `retired` into the class of `kept`.
    ///
    /// Both must be canonical and distinct; the caller has already decided
    /// the direction.
    pub fn union_into(&mut self, retired: ElementId, kept: ElementId) {
        debug_assert!(self.is_canonical(retired));
        debug_assert!(self.is_canonical(kept));
        debug_assert_ne!(retired, kept);
        self.parent[retired.index()] = kept.0;
    }
}
