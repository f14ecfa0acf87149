//! Amalgamation of atomic networks: isomorphism-class enumeration, 2-point
//! amalgamation diagrams, the bounded exhaustive AP decision, and seeded
//! growth of generic atomic networks.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::RelationAlgebra;
use crate::canon;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::network::{is_atomic, Network};

/// An atomic network stored as atom indices, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct AtomCells {
    n: usize,
    cells: Vec<u8>,
}

impl AtomCells {
    pub(crate) fn empty() -> Self {
        AtomCells { n: 0, cells: Vec::new() }
    }

    pub(crate) fn from_network(net: &Network) -> Option<Self> {
        let cells = net
            .labels()
            .iter()
            .map(|l| if l.is_atom() { l.first_atom().map(|a| a as u8) } else { None })
            .collect::<Option<Vec<u8>>>()?;
        Some(AtomCells { n: net.len(), cells })
    }

    pub(crate) fn len(&self) -> usize {
        self.n
    }

    pub(crate) fn get(&self, x: usize, y: usize) -> usize {
        self.cells[x * self.n + y] as usize
    }

    pub(crate) fn to_network(&self, name: &str, nodes: Vec<String>) -> Network {
        let labels = self.cells.iter().map(|&a| Element::atom(a as usize)).collect();
        Network::from_labels(name, nodes, labels)
    }

    /// Appends one node with extension vector `[loop, f(new,0), .., f(new,n-1)]`.
    pub(crate) fn extend(&self, ra: &RelationAlgebra, ext: &[u8]) -> AtomCells {
        let n = self.n;
        let m = n + 1;
        let mut cells = vec![0u8; m * m];
        for x in 0..n {
            for y in 0..n {
                cells[x * m + y] = self.cells[x * n + y];
            }
            cells[n * m + x] = ext[1 + x];
            cells[x * m + n] = ra.converse_atom(ext[1 + x] as usize) as u8;
        }
        cells[n * m + n] = ext[0];
        AtomCells { n: m, cells }
    }

    fn canonical(&self) -> AtomCells {
        AtomCells { n: self.n, cells: canon::canonical_form(&self.cells, self.n).0 }
    }
}

/// `f(x,z) ≤ f(x,y) ∘ f(y,z)` for atom labels.
#[inline]
fn triangle_ok(ra: &RelationAlgebra, get: &impl Fn(usize, usize) -> usize, x: usize, y: usize, z: usize) -> bool {
    ra.compose_atoms(get(x, y), get(y, z)).contains(get(x, z))
}

/// First ordered triple over `nodes` (repeats allowed) breaking the triangle condition.
fn failing_triple(
    ra: &RelationAlgebra,
    get: &impl Fn(usize, usize) -> usize,
    nodes: &[usize],
) -> Option<[usize; 3]> {
    for &x in nodes {
        for &y in nodes {
            for &z in nodes {
                if !triangle_ok(ra, get, x, y, z) {
                    return Some([x, y, z]);
                }
            }
        }
    }
    None
}

/// Visits every one-point extension of `base` that keeps it atomic, in
/// lexicographic order of the extension vector `[loop, f(new,0), ..]`.
/// With `allow_collapse == false` identity atoms are excluded off the diagonal.
pub(crate) fn for_each_extension(
    ra: &RelationAlgebra,
    base: &AtomCells,
    allow_collapse: bool,
    visit: &mut dyn FnMut(&[u8]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let mut ext = vec![0u8; base.n + 1];
    for e in ra.identity().atoms() {
        if ra.converse_atom(e) != e || !ra.compose_atoms(e, e).contains(e) {
            continue;
        }
        ext[0] = e as u8;
        extend_from(ra, base, allow_collapse, &mut ext, 0, visit)?;
    }
    ControlFlow::Continue(())
}

fn extend_from(
    ra: &RelationAlgebra,
    base: &AtomCells,
    allow_collapse: bool,
    ext: &mut Vec<u8>,
    i: usize,
    visit: &mut dyn FnMut(&[u8]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let m = base.n;
    if i == m {
        return visit(ext);
    }
    for a in 0..ra.k() {
        if !allow_collapse && ra.is_identity_atom(a) {
            continue;
        }
        if ra.converse_atom(ra.converse_atom(a)) != a {
            continue;
        }
        ext[1 + i] = a as u8;
        let ok = {
            let ext = &*ext;
            let get = |x: usize, y: usize| -> usize {
                match (x == m, y == m) {
                    (false, false) => base.get(x, y),
                    (true, true) => ext[0] as usize,
                    (true, false) => ext[1 + y] as usize,
                    (false, true) => ra.converse_atom(ext[1 + x] as usize),
                }
            };
            (0..=i).all(|j| failing_triple(ra, &get, &[m, i, j]).is_none())
        };
        if ok {
            extend_from(ra, base, allow_collapse, ext, i + 1, visit)?;
        }
    }
    ControlFlow::Continue(())
}

pub(crate) fn extensions(ra: &RelationAlgebra, base: &AtomCells) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let _ = for_each_extension(ra, base, true, &mut |ext| {
        out.push(ext.to_vec());
        ControlFlow::Continue(())
    });
    out
}

/// Canonical representatives of the atomic networks on exactly `size`
/// nodes, one per isomorphism class, built by one-node extension.
pub(crate) fn atomic_classes(ra: &RelationAlgebra, size: usize) -> Vec<Vec<AtomCells>> {
    let mut levels = vec![vec![AtomCells::empty()]];
    for _ in 0..size {
        let prev = levels.last().unwrap();
        let mut next = BTreeSet::new();
        for base in prev {
            for ext in extensions(ra, base) {
                next.insert(base.extend(ra, &ext).canonical());
            }
        }
        levels.push(next.into_iter().collect());
    }
    levels
}

/// Every atomic network on `size` nodes up to isomorphism, each exactly once,
/// ordered by canonical form. Nodes are named `v0 ..`.
pub fn enumerate_atomic_networks(ra: &RelationAlgebra, size: usize) -> Vec<Network> {
    let levels = atomic_classes(ra, size);
    levels[size]
        .iter()
        .enumerate()
        .map(|(i, c)| c.to_network(&format!("atomic{size}_{i}"), Network::default_nodes(size)))
        .collect()
}

/// Canonical key of an atomic network, or `None` if some label is not an atom.
pub fn canonical_key(net: &Network) -> Option<Vec<u8>> {
    AtomCells::from_network(net).map(|c| c.canonical().cells)
}

/// Two atomic networks sharing a base: `left` adds node `p`, `right` adds
/// node `q`, each as its last node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmalgamationDiagram {
    base: Network,
    left: Network,
    right: Network,
}

impl AmalgamationDiagram {
    pub fn new(ra: &RelationAlgebra, base: Network, left: Network, right: Network) -> Result<Self> {
        let m = base.len();
        for (side, net) in [("left", &left), ("right", &right)] {
            if net.len() != m + 1 {
                return Err(Error::MalformedDiagram(format!(
                    "{side} network must have exactly one node more than the base"
                )));
            }
            if !is_atomic(ra, net) {
                return Err(Error::MalformedDiagram(format!("{side} network is not atomic")));
            }
            let keep: Vec<usize> = (0..m).collect();
            if net.induced(&keep).labels() != base.labels() {
                return Err(Error::MalformedDiagram(format!("{side} network disagrees with the base")));
            }
        }
        if !is_atomic(ra, &base) {
            return Err(Error::MalformedDiagram("base network is not atomic".into()));
        }
        Ok(AmalgamationDiagram { base, left, right })
    }

    pub fn base(&self) -> &Network {
        &self.base
    }

    pub fn left(&self) -> &Network {
        &self.left
    }

    pub fn right(&self) -> &Network {
        &self.right
    }

    /// Total node count of an amalgam, base plus `p` and `q`.
    pub fn size(&self) -> usize {
        self.base.len() + 2
    }

    fn ext(&self, side: &Network) -> Vec<u8> {
        let m = self.base.len();
        let mut v = vec![side.label(m, m).first_atom().unwrap() as u8];
        v.extend((0..m).map(|i| side.label(m, i).first_atom().unwrap() as u8));
        v
    }

    fn node_names(&self) -> Vec<String> {
        let m = self.base.len();
        let mut names = self.base.nodes().to_vec();
        let p = self.left.nodes()[m].clone();
        let mut q = self.right.nodes()[m].clone();
        while q == p || names.contains(&q) {
            q.push('\'');
        }
        names.push(p);
        names.push(q);
        names
    }

    /// The combined network on base ∪ {p, q} with `f(p,q) = atom`.
    pub fn amalgam(&self, ra: &RelationAlgebra, atom: usize) -> Network {
        let m = self.base.len();
        let base = AtomCells::from_network(&self.base).unwrap();
        let with_p = base.extend(ra, &self.ext(&self.left));
        let mut rext = self.ext(&self.right);
        rext.push(ra.converse_atom(atom) as u8);
        let mut both = with_p.extend(ra, &rext);
        // `extend` put f(q,p) = conv(atom) and f(p,q) = conv(conv(atom))
        both.cells[m * (m + 2) + m + 1] = atom as u8;
        both.to_network("amalgam", self.node_names())
    }
}

/// Fast core of [`amalgamate`] on atom-index data.
struct DiagramView<'a> {
    ra: &'a RelationAlgebra,
    base: &'a AtomCells,
    left: &'a [u8],
    right: &'a [u8],
}

impl DiagramView<'_> {
    /// First triple involving both `p` and `q` that fails when `f(p,q) = atom`.
    fn blocking_triple(&self, atom: usize) -> Option<[usize; 3]> {
        let ra = self.ra;
        let m = self.base.n;
        let (p, q) = (m, m + 1);
        if ra.converse_atom(ra.converse_atom(atom)) != atom {
            return Some([p, q, p]);
        }
        let get = |x: usize, y: usize| -> usize {
            match (x, y) {
                _ if x < m && y < m => self.base.get(x, y),
                _ if x == p && y == p => self.left[0] as usize,
                _ if x == q && y == q => self.right[0] as usize,
                _ if x == p && y == q => atom,
                _ if x == q && y == p => ra.converse_atom(atom),
                _ if x == p => self.left[1 + y] as usize,
                _ if y == p => ra.converse_atom(self.left[1 + x] as usize),
                _ if x == q => self.right[1 + y] as usize,
                _ => ra.converse_atom(self.right[1 + x] as usize),
            }
        };
        let involves_both = |t: &[usize; 3]| t.contains(&p) && t.contains(&q);
        let check = |nodes: &[usize]| -> Option<[usize; 3]> {
            for &x in nodes {
                for &y in nodes {
                    for &z in nodes {
                        let t = [x, y, z];
                        if involves_both(&t) && !triangle_ok(ra, &get, x, y, z) {
                            return Some(t);
                        }
                    }
                }
            }
            None
        };
        if let Some(t) = check(&[p, q]) {
            return Some(t);
        }
        (0..m).find_map(|r| check(&[p, q, r]))
    }

    fn amalgam_atom(&self) -> Option<usize> {
        (0..self.ra.k()).find(|&a| self.blocking_triple(a).is_none())
    }
}

/// An atom for `f(p,q)` that makes base ∪ {p,q} atomic, if one exists.
/// Identity atoms are tried too: `p` and `q` may be identified.
pub fn amalgamate(ra: &RelationAlgebra, d: &AmalgamationDiagram) -> Option<usize> {
    let base = AtomCells::from_network(&d.base).expect("diagram base is atomic");
    let (left, right) = (d.ext(&d.left), d.ext(&d.right));
    DiagramView { ra, base: &base, left: &left, right: &right }.amalgam_atom()
}

/// For every candidate atom, one violated triple (node names) of the amalgam.
pub fn blocking_triples(ra: &RelationAlgebra, d: &AmalgamationDiagram) -> Vec<(usize, Option<[String; 3]>)> {
    let base = AtomCells::from_network(&d.base).expect("diagram base is atomic");
    let (left, right) = (d.ext(&d.left), d.ext(&d.right));
    let view = DiagramView { ra, base: &base, left: &left, right: &right };
    let names = d.node_names();
    (0..ra.k())
        .map(|a| (a, view.blocking_triple(a).map(|t| t.map(|i| names[i].clone()))))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecideOptions {
    /// Largest base size checked; `None` means the atom count.
    pub max_base: Option<usize>,
    /// Maximum number of diagrams examined, in canonical order.
    pub budget: u64,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

pub const DEFAULT_BUDGET: u64 = 50_000_000;

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions { max_base: None, budget: DEFAULT_BUDGET, threads: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ApVerdict {
    /// Every 2-point diagram with base size ≤ `max_base` amalgamates.
    Yes { max_base: usize, diagrams: u64 },
    /// A size-minimal failing diagram.
    No { witness: Box<AmalgamationDiagram>, diagrams: u64 },
    /// The budget ran out before a verdict.
    Indeterminate { max_base: usize, diagrams: u64 },
}

/// Outcome of checking all diagrams over one base.
struct BaseScan {
    count: u64,
    first_failure: Option<(u64, Vec<u8>, Vec<u8>)>,
}

fn scan_base(ra: &RelationAlgebra, base: &AtomCells) -> BaseScan {
    let exts = extensions(ra, base);
    let autos = canon::automorphisms(&base.cells, base.n);
    // orbit representatives of left extensions under Aut(base)
    let lefts: Vec<&Vec<u8>> = exts
        .iter()
        .filter(|v| {
            autos.iter().all(|perm| {
                let mut image = Vec::with_capacity(v.len());
                image.push(v[0]);
                image.extend(perm.iter().map(|&i| v[1 + i]));
                **v <= image
            })
        })
        .collect();
    let count = (lefts.len() * exts.len()) as u64;
    for (li, left) in lefts.iter().enumerate() {
        for (ri, right) in exts.iter().enumerate() {
            let view = DiagramView { ra, base, left, right };
            if view.amalgam_atom().is_none() {
                let idx = (li * exts.len() + ri) as u64;
                return BaseScan { count, first_failure: Some((idx, left.to_vec(), right.clone())) };
            }
        }
    }
    BaseScan { count, first_failure: None }
}

fn diagram_from_cells(ra: &RelationAlgebra, base: &AtomCells, left: &[u8], right: &[u8]) -> AmalgamationDiagram {
    let m = base.n;
    let base_names: Vec<String> = (0..m).map(|i| format!("r{i}")).collect();
    let with = |extra: &str| {
        let mut v = base_names.clone();
        v.push(extra.to_string());
        v
    };
    let base_net = base.to_network("base", base_names.clone());
    let left_net = base.extend(ra, left).to_network("left", with("p"));
    let right_net = base.extend(ra, right).to_network("right", with("q"));
    AmalgamationDiagram::new(ra, base_net, left_net, right_net).expect("generated diagram is well formed")
}

/// Decides whether the class of atomic networks has the amalgamation
/// property by checking every 2-point diagram whose base has at most
/// `max_base` nodes (default: the atom count), smallest bases first.
///
/// The result does not depend on `threads`: bases are scanned in parallel
/// but combined in canonical order, and the budget is counted in that order.
pub fn decide_amalgamation_property(ra: &RelationAlgebra, opts: &DecideOptions) -> ApVerdict {
    let max_base = opts.max_base.unwrap_or(ra.k());
    let run = || decide_inner(ra, max_base, opts.budget);
    match opts.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .expect("thread pool")
            .install(run),
        None => run(),
    }
}

fn decide_inner(ra: &RelationAlgebra, max_base: usize, budget: u64) -> ApVerdict {
    let mut checked: u64 = 0;
    let mut level = vec![AtomCells::empty()];
    for size in 0..=max_base {
        if size > 0 {
            let next: BTreeSet<AtomCells> = level
                .par_iter()
                .flat_map_iter(|b| extensions(ra, b).into_iter().map(move |e| b.extend(ra, &e).canonical()))
                .collect();
            level = next.into_iter().collect();
        }
        if checked >= budget && !level.is_empty() {
            return ApVerdict::Indeterminate { max_base, diagrams: checked };
        }
        let scans: Vec<BaseScan> = level.par_iter().map(|b| scan_base(ra, b)).collect();
        for (base, scan) in level.iter().zip(scans) {
            if let Some((idx, left, right)) = scan.first_failure {
                if checked + idx < budget {
                    let witness = diagram_from_cells(ra, base, &left, &right);
                    return ApVerdict::No { witness: Box::new(witness), diagrams: checked + idx + 1 };
                }
                return ApVerdict::Indeterminate { max_base, diagrams: budget };
            }
            if checked + scan.count > budget {
                return ApVerdict::Indeterminate { max_base, diagrams: budget };
            }
            checked += scan.count;
        }
    }
    ApVerdict::Yes { max_base, diagrams: checked }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowOptions {
    /// Permit identity atoms between distinct nodes.
    pub allow_collapse: bool,
    /// Upper bound on one-point extensions enumerated per step.
    pub max_extensions: u64,
}

impl Default for GrowOptions {
    fn default() -> Self {
        GrowOptions { allow_collapse: false, max_extensions: 1 << 22 }
    }
}

/// Grows an atomic network one node at a time from the empty network,
/// each step picking uniformly among all atomic one-point extensions.
/// Deterministic for a fixed seed. Every prefix `v0..vi` is the network
/// after step `i`.
pub fn grow_limit(ra: &RelationAlgebra, target_size: usize, seed: u64, opts: &GrowOptions) -> Result<Network> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = AtomCells::empty();
    while cur.len() < target_size {
        let mut seen: u64 = 0;
        let mut chosen: Option<Vec<u8>> = None;
        let flow = for_each_extension(ra, &cur, opts.allow_collapse, &mut |ext| {
            seen += 1;
            if seen > opts.max_extensions {
                return ControlFlow::Break(());
            }
            // reservoir sampling with a single slot
            if rng.gen_range(0..seen) == 0 {
                chosen = Some(ext.to_vec());
            }
            ControlFlow::Continue(())
        });
        if flow.is_break() {
            return Err(Error::TooLarge(format!(
                "more than {} one-point extensions at size {}",
                opts.max_extensions,
                cur.len()
            )));
        }
        let Some(ext) = chosen else {
            return Err(Error::ExtensionFailed { size: cur.len() });
        };
        cur = cur.extend(ra, &ext);
    }
    Ok(cur.to_network("grown", Network::default_nodes(cur.len())))
}
