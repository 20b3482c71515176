//! Dense integer identifiers, scoped to one theory or one structure.

use std::fmt;

macro_rules! id_type {
    ($(#[$meta:meta])* $name:ident, $prefix:literal) => {
        $(#[$meta])*
        #[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub u32);

        impl $name {
            #[inline]
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }

        impl From<usize> for $name {
            #[inline]
            fn from(i: usize) -> Self {
                $name(i as u32)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, concat!($prefix, "{}"), self.0)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, concat!($prefix, "{}"), self.0)
            }
        }
    };
}

id_type!(
    /// A sort of a theory.
    SortId,
    "s"
);
id_type!(
    /// A relation of a theory.
    RelationId,
    "r"
);
id_type!(
    /// A variable, scoped to one sequent.
    VarId,
    "v"
);
id_type!(
    /// An element of one sort of a relational structure.
    ///
    /// Ids are allocated densely and never reused; retired (non-canonical)
    /// elements keep their id forever.
    ElementId,
    "e"
);
