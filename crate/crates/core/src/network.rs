//! Networks over a relation algebra: parsing, normalization, path
//! consistency, atomicity and the atomic-refinement solver.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use crate::algebra::RelationAlgebra;
use crate::element::Element;
use crate::error::{ParseError, ParseErrorKind};
use crate::lexer;

/// A finite set of named nodes with an [`Element`] label on every ordered
/// pair, loops included.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Network {
    name: String,
    nodes: Vec<String>,
    labels: Vec<Element>,
}

impl Network {
    /// A network with every label given explicitly, row-major.
    pub fn from_labels(name: impl Into<String>, nodes: Vec<String>, labels: Vec<Element>) -> Self {
        assert_eq!(labels.len(), nodes.len() * nodes.len(), "label matrix must be n*n");
        Network { name: name.into(), nodes, labels }
    }

    /// Off-diagonal labels `1`, loops `Id`.
    pub fn unconstrained(ra: &RelationAlgebra, name: impl Into<String>, nodes: Vec<String>) -> Self {
        let n = nodes.len();
        let labels = (0..n * n)
            .map(|i| if i / n == i % n { ra.identity() } else { ra.top() })
            .collect();
        Network { name: name.into(), nodes, labels }
    }

    /// Node names `v0 .. v{n-1}`.
    pub fn default_nodes(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("v{i}")).collect()
    }

    pub fn parse(ra: &RelationAlgebra, text: &str) -> Result<Self, ParseError> {
        parse_network(ra, text)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n == name)
    }

    pub fn label(&self, x: usize, y: usize) -> Element {
        self.labels[x * self.len() + y]
    }

    pub fn set_label(&mut self, x: usize, y: usize, value: Element) {
        let n = self.len();
        self.labels[x * n + y] = value;
    }

    pub fn labels(&self) -> &[Element] {
        &self.labels
    }

    /// The subnetwork induced by `keep`, in that order.
    pub fn induced(&self, keep: &[usize]) -> Network {
        let nodes = keep.iter().map(|&i| self.nodes[i].clone()).collect();
        let labels = keep
            .iter()
            .flat_map(|&x| keep.iter().map(move |&y| (x, y)))
            .map(|(x, y)| self.label(x, y))
            .collect();
        Network { name: self.name.clone(), nodes, labels }
    }

    /// True iff every label of `self` is below the corresponding label of `other`.
    pub fn refines(&self, other: &Network) -> bool {
        self.len() == other.len() && self.labels.iter().zip(&other.labels).all(|(a, b)| a.leq(*b))
    }

    /// Serializes in the network file format, listing every ordered pair.
    pub fn to_text(&self, ra: &RelationAlgebra) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "network {}", self.name);
        if self.nodes.is_empty() {
            s.push_str("nodes\n");
        } else {
            let _ = writeln!(s, "nodes {}", self.nodes.join(" "));
        }
        for x in 0..self.len() {
            for y in 0..self.len() {
                let _ = writeln!(
                    s,
                    "edge {} {} : {}",
                    self.nodes[x],
                    self.nodes[y],
                    ra.join_names(self.label(x, y), " ")
                );
            }
        }
        s
    }
}

/// Parses the network file format. Missing pairs default to `1`, missing
/// loops to `Id`, and a pair given in one direction only defaults to the
/// converse in the other.
pub fn parse_network(ra: &RelationAlgebra, text: &str) -> Result<Network, ParseError> {
    let mut name: Option<String> = None;
    let mut nodes: Option<Vec<String>> = None;
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut given: Vec<Option<Element>> = Vec::new();

    for (line, tokens) in lexer::lines(text) {
        let head = tokens[0];
        match head.text {
            "network" => {
                if name.is_some() {
                    return Err(ParseError::new(line, head.column, ParseErrorKind::DuplicateEntry("network line".into())));
                }
                if tokens.len() != 2 {
                    return Err(ParseError::syntax(line, head.column, "expected `network <name>`"));
                }
                name = Some(tokens[1].text.to_string());
            }
            "nodes" => {
                if name.is_none() {
                    return Err(ParseError::syntax(line, head.column, "`network` line must come first"));
                }
                if nodes.is_some() {
                    return Err(ParseError::new(line, head.column, ParseErrorKind::DuplicateEntry("nodes line".into())));
                }
                let mut list = Vec::new();
                for t in &tokens[1..] {
                    if index.insert(t.text.to_string(), list.len()).is_some() {
                        return Err(ParseError::new(line, t.column, ParseErrorKind::DuplicateNode(t.text.to_string())));
                    }
                    list.push(t.text.to_string());
                }
                given = vec![None; list.len() * list.len()];
                nodes = Some(list);
            }
            "edge" => {
                let Some(list) = nodes.as_ref() else {
                    return Err(ParseError::syntax(line, head.column, "`nodes` line must come first"));
                };
                if tokens.len() < 5 || tokens[3].text != ":" {
                    return Err(ParseError::syntax(line, head.column, "expected `edge <x> <y> : <a1> ...`"));
                }
                let node = |t: lexer::Token<'_>| {
                    index
                        .get(t.text)
                        .copied()
                        .ok_or_else(|| ParseError::new(line, t.column, ParseErrorKind::UnknownNode(t.text.to_string())))
                };
                let x = node(tokens[1])?;
                let y = node(tokens[2])?;
                let value = parse_label(ra, line, &tokens[4..])?;
                let slot = &mut given[x * list.len() + y];
                if slot.is_some() {
                    return Err(ParseError::new(
                        line,
                        head.column,
                        ParseErrorKind::DuplicateEntry(format!("edge {} {}", tokens[1].text, tokens[2].text)),
                    ));
                }
                *slot = Some(value);
            }
            other => {
                return Err(ParseError::syntax(line, head.column, format!("unknown keyword `{other}`")));
            }
        }
    }
    let end = lexer::end_line(text);
    let name = name.ok_or_else(|| ParseError::syntax(end, 1, "missing `network` line"))?;
    let nodes = nodes.ok_or_else(|| ParseError::syntax(end, 1, "missing `nodes` line"))?;
    let n = nodes.len();
    let mut labels = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let value = match (given[x * n + y], given[y * n + x]) {
                (Some(v), _) => v,
                (None, _) if x == y => ra.identity(),
                (None, Some(rev)) => ra.converse(rev),
                (None, None) => ra.top(),
            };
            labels.push(value);
        }
    }
    Ok(Network { name, nodes, labels })
}

pub(crate) fn parse_label(ra: &RelationAlgebra, line: usize, tokens: &[lexer::Token<'_>]) -> Result<Element, ParseError> {
    if tokens.len() == 1 {
        match tokens[0].text {
            "0" => return Ok(Element::ZERO),
            "1" => return Ok(ra.top()),
            _ => {}
        }
    }
    let mut value = Element::ZERO;
    for t in tokens {
        let atom = ra
            .atom_index(t.text)
            .ok_or_else(|| ParseError::new(line, t.column, ParseErrorKind::UnknownAtom(t.text.to_string())))?;
        value |= Element::atom(atom);
    }
    Ok(value)
}

/// Intersects every label with the converse of its reverse and every loop
/// with `Id`. `None` means some label became `0`.
pub fn normalize(ra: &RelationAlgebra, net: &Network) -> Option<Network> {
    let n = net.len();
    let mut out = net.clone();
    for x in 0..n {
        for y in 0..n {
            let mut v = net.label(x, y) & ra.converse(net.label(y, x));
            if x == y {
                v &= ra.identity();
            }
            if v.is_empty() {
                return None;
            }
            out.set_label(x, y, v);
        }
    }
    Some(out)
}

/// Refines labels to the path-consistent fixpoint
/// `f(x,z) ← f(x,z) ∧ f(x,y)∘f(y,z)`, keeping `f(z,x) ≤ f(x,z)⌣`.
/// `None` means some label became `0`.
pub fn path_consistency(ra: &RelationAlgebra, net: &Network) -> Option<Network> {
    let mut out = net.clone();
    let n = out.len();
    if out.labels.iter().any(|l| l.is_empty()) {
        return None;
    }
    propagate(ra, &mut out.labels, n, (0..n * n).collect()).then_some(out)
}

/// Worklist propagation over a row-major label matrix. Returns `false` on an
/// empty label.
pub(crate) fn propagate(ra: &RelationAlgebra, labels: &mut [Element], n: usize, seed: Vec<usize>) -> bool {
    let mut queued = vec![false; n * n];
    let mut queue = VecDeque::with_capacity(n * n);
    for p in seed {
        if !queued[p] {
            queued[p] = true;
            queue.push_back(p);
        }
    }
    // Narrows (x,y) to `bound`, mirrors into (y,x), and queues what changed.
    let narrow = |labels: &mut [Element], queue: &mut VecDeque<usize>, queued: &mut [bool], x: usize, y: usize, bound: Element| -> bool {
        let p = x * n + y;
        let next = labels[p] & bound;
        if next == labels[p] {
            return true;
        }
        labels[p] = next;
        if next.is_empty() {
            return false;
        }
        if !queued[p] {
            queued[p] = true;
            queue.push_back(p);
        }
        let q = y * n + x;
        let mirrored = labels[q] & ra.converse(next);
        if mirrored != labels[q] {
            labels[q] = mirrored;
            if mirrored.is_empty() {
                return false;
            }
            if !queued[q] {
                queued[q] = true;
                queue.push_back(q);
            }
        }
        true
    };
    for p in queue.clone() {
        let (i, j) = (p / n, p % n);
        let bound = ra.converse(labels[j * n + i]);
        if !narrow(labels, &mut queue, &mut queued, i, j, bound) {
            return false;
        }
    }
    while let Some(p) = queue.pop_front() {
        queued[p] = false;
        let (i, j) = (p / n, p % n);
        let lij = labels[p];
        for k in 0..n {
            let via = ra.compose(lij, labels[j * n + k]);
            if !narrow(labels, &mut queue, &mut queued, i, k, via) {
                return false;
            }
            let lij = labels[p];
            let via = ra.compose(labels[k * n + i], lij);
            if !narrow(labels, &mut queue, &mut queued, k, j, via) {
                return false;
            }
        }
    }
    true
}

/// Atomic: every label is a single atom, loops lie below `Id`, each label is
/// the converse of its reverse, and `f(a,c) ≤ f(a,b) ∘ f(b,c)` holds for all
/// ordered triples, repeated nodes included.
pub fn is_atomic(ra: &RelationAlgebra, net: &Network) -> bool {
    atomic_labels(ra, net.labels(), net.len())
}

pub(crate) fn atomic_labels(ra: &RelationAlgebra, labels: &[Element], n: usize) -> bool {
    if !labels.iter().all(|l| l.is_atom()) {
        return false;
    }
    let atom = |x: usize, y: usize| labels[x * n + y].first_atom().unwrap();
    for x in 0..n {
        if !ra.is_identity_atom(atom(x, x)) {
            return false;
        }
        for y in 0..n {
            if ra.converse_atom(atom(x, y)) != atom(y, x) {
                return false;
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if !ra.compose_atoms(atom(a, b), atom(b, c)).contains(atom(a, c)) {
                    return false;
                }
            }
        }
    }
    true
}

/// Finds an atomic refinement of `net`, or `None` if there is none.
///
/// Backtracking over ordered pairs `(x,y)` with `x ≤ y`, fewest candidate
/// atoms first, atoms tried in file order, with path consistency after each
/// decision.
pub fn refine_solve(ra: &RelationAlgebra, net: &Network) -> Option<Network> {
    let n = net.len();
    let start = path_consistency(ra, &normalize(ra, net)?)?;
    let mut labels = start.labels.clone();
    if !search(ra, &mut labels, n) {
        return None;
    }
    let out = Network { labels, ..start };
    debug_assert!(is_atomic(ra, &out));
    Some(out)
}

fn search(ra: &RelationAlgebra, labels: &mut Vec<Element>, n: usize) -> bool {
    let mut pick: Option<(usize, usize)> = None;
    for x in 0..n {
        for y in x..n {
            let len = labels[x * n + y].len();
            if len > 1 && pick.is_none_or(|(_, best)| len < best) {
                pick = Some((x * n + y, len));
            }
        }
    }
    let Some((p, _)) = pick else {
        return atomic_labels(ra, labels, n);
    };
    let (x, y) = (p / n, p % n);
    for atom in labels[p].atoms() {
        let mut trial = labels.clone();
        trial[p] = Element::atom(atom);
        let q = y * n + x;
        trial[q] &= ra.converse(Element::atom(atom));
        if trial[q].is_empty() {
            continue;
        }
        if propagate(ra, &mut trial, n, vec![p, q]) && search(ra, &mut trial, n) {
            *labels = trial;
            return true;
        }
    }
    false
}
