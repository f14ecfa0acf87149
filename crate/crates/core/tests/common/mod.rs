//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the solver, path consistency, model checker or bound machinery.

#![allow(dead_code, clippy::needless_range_loop)]

use ra_kit::{ConcreteRepresentation, Element, LabeledStructure, Network, RelationAlgebra};

/// Atomicity straight from the definition: atom labels, loops below Id,
/// converse-consistent pairs, and the triangle condition on all triples.
pub fn oracle_atomic(ra: &RelationAlgebra, labels: &[usize], n: usize) -> bool {
    let f = |x: usize, y: usize| labels[x * n + y];
    for x in 0..n {
        if !ra.identity().contains(f(x, x)) {
            return false;
        }
        for y in 0..n {
            if ra.converse_atom(f(x, y)) != f(y, x) {
                return false;
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if !ra.compose_atoms(f(a, b), f(b, c)).contains(f(a, c)) {
                    return false;
                }
            }
        }
    }
    true
}

/// Every atomic network on `n` labelled nodes, as atom-index matrices.
///
/// Enumerates every atom on every ordered pair except that loops range over
/// identity atoms and `f(y,x)` is tied to `f(x,y)⌣`; both are forced by
/// atomicity, so nothing atomic is skipped.
pub fn all_atomic_labelings(ra: &RelationAlgebra, n: usize) -> Vec<Vec<usize>> {
    let ids: Vec<usize> = ra.identity().atoms().collect();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))).collect();
    let k = ra.k();
    let mut out = Vec::new();
    let loop_combos = ids.len().pow(n as u32);
    let pair_combos = k.pow(pairs.len() as u32);
    for lc in 0..loop_combos {
        for pc in 0..pair_combos {
            let mut labels = vec![0usize; n * n];
            let mut l = lc;
            for x in 0..n {
                labels[x * n + x] = ids[l % ids.len()];
                l /= ids.len();
            }
            let mut p = pc;
            for &(x, y) in &pairs {
                let a = p % k;
                p /= k;
                labels[x * n + y] = a;
                labels[y * n + x] = ra.converse_atom(a);
            }
            if oracle_atomic(ra, &labels, n) {
                out.push(labels);
            }
        }
    }
    out
}

/// Satisfiable iff some atomic labelling refines every label.
pub fn oracle_satisfiable(atomic: &[Vec<usize>], net: &Network) -> bool {
    atomic
        .iter()
        .any(|a| a.iter().zip(net.labels()).all(|(&atom, label)| label.contains(atom)))
}

pub fn to_network(name: &str, labels: &[usize], n: usize) -> Network {
    Network::from_labels(
        name,
        Network::default_nodes(n),
        labels.iter().map(|&a| Element::atom(a)).collect(),
    )
}

/// All maps `0..n → 0..d`, first to last.
pub fn for_each_map(n: usize, d: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    let mut s = vec![0usize; n];
    loop {
        if f(&s) {
            return true;
        }
        let mut i = 0;
        loop {
            if i == n {
                return false;
            }
            s[i] += 1;
            if s[i] < d {
                break;
            }
            s[i] = 0;
            i += 1;
        }
    }
}

/// Membership of a domain pair in an atom relation, from the pair lists.
pub fn relation_table(cr: &ConcreteRepresentation) -> Vec<Vec<bool>> {
    let d = cr.domain_size();
    (0..cr.atom_names().len())
        .map(|a| {
            let mut m = vec![false; d * d];
            for &(i, j) in cr.relation(a) {
                m[i * d + j] = true;
            }
            m
        })
        .collect()
}

/// Some `s` with `(s(x), s(y))` in the union of the label's relations.
pub fn oracle_network_satisfiable(cr: &ConcreteRepresentation, net: &Network) -> bool {
    let rel = relation_table(cr);
    let d = cr.domain_size();
    let n = net.len();
    for_each_map(n, d, |s| {
        (0..n).all(|x| {
            (0..n).all(|y| net.label(x, y).atoms().any(|a| rel[a][s[x] * d + s[y]]))
        })
    })
}

/// A homomorphism from a structure over the atom signature, given the
/// representation's `relation_table`.
pub fn oracle_homomorphism(rel: &[Vec<bool>], d: usize, s: &LabeledStructure) -> bool {
    let n = s.len();
    for_each_map(n, d, |h| {
        (0..n).all(|x| (0..n).all(|y| s.holds(x, y).atoms().all(|a| rel[a][h[x] * d + h[y]])))
    })
}

/// Whether two atom matrices are isomorphic, by trying every bijection.
pub fn oracle_isomorphic(a: &[Element], b: &[Element], n: usize) -> bool {
    let mut found = false;
    for_each_map(n, n, |perm| {
        let mut seen = vec![false; n];
        for &p in perm {
            if seen[p] {
                return false;
            }
            seen[p] = true;
        }
        if (0..n).all(|x| (0..n).all(|y| a[perm[x] * n + perm[y]] == b[x * n + y])) {
            found = true;
        }
        found
    });
    found
}

/// Kahn's algorithm on the `strict` edges; true iff they form a DAG.
pub fn strict_edges_acyclic(net: &Network, strict: Element) -> bool {
    let n = net.len();
    let mut indegree = vec![0usize; n];
    for x in 0..n {
        for y in 0..n {
            if x != y && net.label(x, y).leq(strict) && !net.label(x, y).is_empty() {
                indegree[y] += 1;
            }
        }
    }
    let mut ready: Vec<usize> = (0..n).filter(|&x| indegree[x] == 0).collect();
    let mut done = 0;
    while let Some(x) = ready.pop() {
        done += 1;
        for y in 0..n {
            if x != y && net.label(x, y).leq(strict) && !net.label(x, y).is_empty() {
                indegree[y] -= 1;
                if indegree[y] == 0 {
                    ready.push(y);
                }
            }
        }
    }
    done == n
}

/// Independent re-check of one reported law violation.
pub fn law_fails_at(ra: &RelationAlgebra, law: ra_kit::Law, w: &[usize]) -> bool {
    use ra_kit::Law::*;
    let conv = |a: usize| ra.converse_atom(a);
    let t = |a: usize, b: usize| ra.compose_atoms(a, b);
    let union = |xs: Element, f: &dyn Fn(usize) -> Element| xs.atoms().fold(Element::ZERO, |acc, x| acc | f(x));
    match law {
        ConverseInvolution => conv(conv(w[0])) != w[0],
        IdentitySelfConverse => conv(w[0]) != w[0],
        RightIdentity => union(ra.identity(), &|e| t(w[0], e)) != Element::atom(w[0]),
        LeftIdentity => union(ra.identity(), &|e| t(e, w[0])) != Element::atom(w[0]),
        ConverseOfComposition => t(w[0], w[1]).contains(w[2]) != t(conv(w[1]), conv(w[0])).contains(conv(w[2])),
        RotationRight => t(w[0], w[1]).contains(w[2]) != t(w[2], conv(w[1])).contains(w[0]),
        RotationLeft => t(w[0], w[1]).contains(w[2]) != t(conv(w[0]), w[2]).contains(w[1]),
        Associativity => {
            union(t(w[0], w[1]), &|d| t(d, w[2])) != union(t(w[1], w[2]), &|e| t(w[0], e))
        }
    }
}
