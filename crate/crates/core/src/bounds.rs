//! Finite sets of forbidden substructures whose Forb class is exactly the
//! class of atomic networks, read off the composition table.

use std::collections::BTreeSet;
use std::fmt;

use crate::algebra::RelationAlgebra;
use crate::canon;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::network::is_atomic;
use crate::structure::{struct_to_net, LabeledStructure};

/// Largest atom count accepted by [`generate_bounds`].
pub const MAX_BOUND_ATOMS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// One element: a bad loop.
    F1,
    /// Two elements: a bad pair, loops fine.
    F2,
    /// Three elements: every pair fine, a triangle fails.
    F3,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::F1 => "F1",
            Family::F2 => "F2",
            Family::F3 => "F3",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bound {
    pub family: Family,
    pub structure: LabeledStructure,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundSet {
    pub algebra_name: String,
    pub bounds: Vec<Bound>,
}

impl BoundSet {
    pub fn family(&self, family: Family) -> impl Iterator<Item = &LabeledStructure> {
        self.bounds.iter().filter(move |b| b.family == family).map(|b| &b.structure)
    }

    pub fn count(&self, family: Family) -> usize {
        self.family(family).count()
    }

    /// Concatenated network-format blocks, each preceded by `# family: Fi`.
    pub fn to_text(&self, ra: &RelationAlgebra) -> String {
        let mut s = String::new();
        for (i, b) in self.bounds.iter().enumerate() {
            s.push_str(&format!("# family: {}\n", b.family));
            s.push_str(&b.structure.to_text(ra, &format!("{}_bound{}", self.algebra_name, i)));
            s.push('\n');
        }
        s
    }
}

fn names(n: usize) -> Vec<String> {
    ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
}

fn locally_atomic(ra: &RelationAlgebra, s: &LabeledStructure) -> bool {
    is_atomic(ra, &struct_to_net(ra, s))
}

/// Atom sets whose translated label is a single atom.
fn atom_like_sets(ra: &RelationAlgebra) -> Vec<Element> {
    let held = |s: Element| if s.is_empty() { ra.top() } else { s };
    (0..1u64 << ra.k()).map(Element::from_bits).filter(|&s| held(s).is_atom()).collect()
}

/// Bound families F1 (loops), F2 (pairs), F3 (triangles), each the minimal
/// non-atomic structures of that size up to isomorphism.
pub fn generate_bounds(ra: &RelationAlgebra) -> Result<BoundSet> {
    let k = ra.k();
    if k > MAX_BOUND_ATOMS {
        return Err(Error::TooLarge(format!(
            "bound generation supports at most {MAX_BOUND_ATOMS} atoms, got {k}"
        )));
    }
    let all: Vec<Element> = (0..1u64 << k).map(Element::from_bits).collect();
    let mut bounds = Vec::new();

    let mut good_loops = Vec::new();
    for &s in &all {
        let st = LabeledStructure::from_holds(names(1), vec![s]);
        if locally_atomic(ra, &st) {
            good_loops.push(s);
        } else {
            bounds.push(Bound { family: Family::F1, structure: st });
        }
    }

    let mut seen = BTreeSet::new();
    for &l0 in &good_loops {
        for &l1 in &good_loops {
            for &xy in &all {
                for &yx in &all {
                    let holds = vec![l0, xy, yx, l1];
                    let st = LabeledStructure::from_holds(names(2), holds.clone());
                    if !locally_atomic(ra, &st) && seen.insert(canon::canonical_form(&holds, 2).0) {
                        bounds.push(Bound { family: Family::F2, structure: st });
                    }
                }
            }
        }
    }

    let label = |s: Element| if s.is_empty() { ra.top() } else { s };
    let pair_sets = atom_like_sets(ra);
    let reverse_of = |s: Element| -> Vec<Element> {
        let want = ra.converse(label(s));
        pair_sets.iter().copied().filter(|&r| label(r) == want).collect()
    };
    let mut seen = BTreeSet::new();
    for &l0 in &good_loops {
        for &l1 in &good_loops {
            for &l2 in &good_loops {
                for &s01 in &pair_sets {
                    for s10 in reverse_of(s01) {
                        for &s02 in &pair_sets {
                            for s20 in reverse_of(s02) {
                                for &s12 in &pair_sets {
                                    for s21 in reverse_of(s12) {
                                        let holds = vec![l0, s01, s02, s10, l1, s12, s20, s21, l2];
                                        let st = LabeledStructure::from_holds(names(3), holds.clone());
                                        let pairs_fine = [[0, 1], [0, 2], [1, 2]]
                                            .iter()
                                            .all(|keep| locally_atomic(ra, &st.induced(keep)));
                                        if pairs_fine
                                            && !locally_atomic(ra, &st)
                                            && seen.insert(canon::canonical_form(&holds, 3).0)
                                        {
                                            bounds.push(Bound { family: Family::F3, structure: st });
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(BoundSet { algebra_name: ra.name().to_string(), bounds })
}

/// True iff `bound` is isomorphic to an induced substructure of `s`.
pub fn embeds(bound: &LabeledStructure, s: &LabeledStructure) -> bool {
    let mut map = Vec::with_capacity(bound.len());
    let mut used = vec![false; s.len()];
    embed_from(bound, s, &mut map, &mut used)
}

fn embed_from(bound: &LabeledStructure, s: &LabeledStructure, map: &mut Vec<usize>, used: &mut [bool]) -> bool {
    let u = map.len();
    if u == bound.len() {
        return true;
    }
    for v in 0..s.len() {
        if used[v] || s.holds(v, v) != bound.holds(u, u) {
            continue;
        }
        let fits = map
            .iter()
            .enumerate()
            .all(|(w, &img)| s.holds(v, img) == bound.holds(u, w) && s.holds(img, v) == bound.holds(w, u));
        if fits {
            used[v] = true;
            map.push(v);
            if embed_from(bound, s, map, used) {
                return true;
            }
            map.pop();
            used[v] = false;
        }
    }
    false
}

/// True iff no bound embeds into `s`.
pub fn check_membership(bs: &BoundSet, s: &LabeledStructure) -> bool {
    !bs.bounds.iter().any(|b| embeds(&b.structure, s))
}
