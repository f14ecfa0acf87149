//! Elements of a finite relation algebra as fixed-width atom bit masks.

use std::fmt;
use std::ops::{BitAnd, BitAndAssign, BitOr, BitOrAssign};

/// Widest atom set an [`Element`] can hold.
pub const MAX_ATOMS: usize = 64;

/// A set of atoms, bit `i` standing for the `i`-th atom in file order.
///
/// Operations that need the algebra (top, complement, converse, composition)
/// live on [`crate::RelationAlgebra`]; this type only knows set algebra.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Element(u64);

impl Element {
    pub const ZERO: Element = Element(0);

    pub const fn from_bits(bits: u64) -> Self {
        Element(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn atom(index: usize) -> Self {
        debug_assert!(index < MAX_ATOMS);
        Element(1 << index)
    }

    /// The set of the first `k` atoms.
    pub fn full(k: usize) -> Self {
        if k >= MAX_ATOMS {
            Element(u64::MAX)
        } else {
            Element((1u64 << k) - 1)
        }
    }

    pub fn from_atoms<I: IntoIterator<Item = usize>>(atoms: I) -> Self {
        atoms.into_iter().fold(Element::ZERO, |acc, a| acc | Element::atom(a))
    }

    pub fn contains(self, atom: usize) -> bool {
        atom < MAX_ATOMS && self.0 >> atom & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// True iff exactly one atom is present.
    pub fn is_atom(self) -> bool {
        self.0.is_power_of_two()
    }

    /// Index of the lowest atom, if any.
    pub fn first_atom(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn meet(self, other: Element) -> Element {
        Element(self.0 & other.0)
    }

    pub fn join(self, other: Element) -> Element {
        Element(self.0 | other.0)
    }

    pub fn leq(self, other: Element) -> bool {
        self.0 & !other.0 == 0
    }

    /// Atom indices in ascending (file) order.
    pub fn atoms(self) -> Atoms {
        Atoms(self.0)
    }
}

pub struct Atoms(u64);

impl Iterator for Atoms {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Atoms {}

impl BitAnd for Element {
    type Output = Element;
    fn bitand(self, rhs: Element) -> Element {
        self.meet(rhs)
    }
}

impl BitOr for Element {
    type Output = Element;
    fn bitor(self, rhs: Element) -> Element {
        self.join(rhs)
    }
}

impl BitAndAssign for Element {
    fn bitand_assign(&mut self, rhs: Element) {
        self.0 &= rhs.0;
    }
}

impl BitOrAssign for Element {
    fn bitor_assign(&mut self, rhs: Element) {
        self.0 |= rhs.0;
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.atoms()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atoms_iterate_in_order() {
        let e = Element::from_atoms([5, 0, 3]);
        assert_eq!(e.atoms().collect::<Vec<_>>(), vec![0, 3, 5]);
        assert_eq!(e.len(), 3);
        assert_eq!(e.first_atom(), Some(0));
        assert!(!e.is_atom());
        assert!(Element::atom(7).is_atom());
        assert!(!Element::ZERO.is_atom());
    }

    #[test]
    fn lattice_ops() {
        let a = Element::from_atoms([0, 1]);
        let b = Element::from_atoms([1, 2]);
        assert_eq!(a & b, Element::atom(1));
        assert_eq!(a | b, Element::full(3));
        assert!(Element::atom(1).leq(a));
        assert!(!a.leq(b));
        assert!(Element::ZERO.leq(Element::ZERO));
        assert_eq!(Element::full(64).len(), 64);
    }
}
