//! Relational structures over the atom signature and their translation
//! to and from networks.

use std::fmt::Write as _;

use crate::algebra::RelationAlgebra;
use crate::element::Element;
use crate::network::Network;

/// A finite structure whose relation symbols are the atoms of an algebra.
/// `holds(x, y)` is the set of atoms `r` with `(x, y) ∈ r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabeledStructure {
    elements: Vec<String>,
    holds: Vec<Element>,
}

impl LabeledStructure {
    /// A structure with no relations holding anywhere.
    pub fn empty(elements: Vec<String>) -> Self {
        let n = elements.len();
        LabeledStructure { elements, holds: vec![Element::ZERO; n * n] }
    }

    pub fn from_holds(elements: Vec<String>, holds: Vec<Element>) -> Self {
        assert_eq!(holds.len(), elements.len() * elements.len());
        LabeledStructure { elements, holds }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn holds(&self, x: usize, y: usize) -> Element {
        self.holds[x * self.len() + y]
    }

    pub fn holds_atom(&self, atom: usize, x: usize, y: usize) -> bool {
        self.holds(x, y).contains(atom)
    }

    pub fn set_holds(&mut self, x: usize, y: usize, atoms: Element) {
        let n = self.len();
        self.holds[x * n + y] = atoms;
    }

    pub fn insert(&mut self, atom: usize, x: usize, y: usize) {
        let n = self.len();
        self.holds[x * n + y] |= Element::atom(atom);
    }

    pub fn induced(&self, keep: &[usize]) -> LabeledStructure {
        let elements = keep.iter().map(|&i| self.elements[i].clone()).collect();
        let holds = keep
            .iter()
            .flat_map(|&x| keep.iter().map(move |&y| (x, y)))
            .map(|(x, y)| self.holds(x, y))
            .collect();
        LabeledStructure { elements, holds }
    }

    /// Network-format text listing the atoms holding on every ordered pair
    /// (`0` where none hold). This is the raw structure, not its translation.
    pub fn to_text(&self, ra: &RelationAlgebra, name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "network {name}");
        let _ = writeln!(s, "nodes {}", self.elements.join(" "));
        for x in 0..self.len() {
            for y in 0..self.len() {
                let _ = writeln!(
                    s,
                    "edge {} {} : {}",
                    self.elements[x],
                    self.elements[y],
                    ra.join_names(self.holds(x, y), " ")
                );
            }
        }
        s
    }
}

/// Label of a pair = meet of the atoms holding on it, `1` if none hold.
pub fn struct_to_net(ra: &RelationAlgebra, s: &LabeledStructure) -> Network {
    let n = s.len();
    let labels = (0..n * n)
        .map(|i| {
            let held = s.holds[i];
            if held.is_empty() {
                ra.top()
            } else if held.is_atom() {
                held
            } else {
                // distinct atoms are disjoint
                Element::ZERO
            }
        })
        .collect();
    Network::from_labels("structure", s.elements.clone(), labels)
}

/// A pair satisfies exactly the atoms of its label; a `1` label becomes a
/// pair on which nothing holds, matching the `1` rule of [`struct_to_net`].
pub fn net_to_struct(ra: &RelationAlgebra, net: &Network) -> LabeledStructure {
    let holds = net
        .labels()
        .iter()
        .map(|&l| if l == ra.top() && !l.is_atom() { Element::ZERO } else { l })
        .collect();
    LabeledStructure { elements: net.nodes().to_vec(), holds }
}
