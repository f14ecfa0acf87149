//! Finite square representations given by explicit pair lists.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use crate::algebra::RelationAlgebra;
use crate::element::{Element, MAX_ATOMS};
use crate::error::{Error, ParseError, ParseErrorKind, Result};
use crate::lexer;
use crate::network::Network;

/// A finite domain `0..n` with one explicit binary relation per atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcreteRepresentation {
    name: String,
    algebra_name: Option<String>,
    domain_size: usize,
    atoms: Vec<String>,
    relations: Vec<Vec<(usize, usize)>>,
    violations: Vec<RepViolation>,
}

/// One broken representation invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RepViolation {
    /// An atom with an empty relation.
    EmptyAtom(usize),
    /// A pair of the square covered by no atom.
    Uncovered(usize, usize),
    /// A pair covered by two atoms.
    Overlap { pair: (usize, usize), atoms: (usize, usize) },
    /// An atom with both diagonal and off-diagonal pairs, so the identity
    /// atoms do not add up to exactly the diagonal.
    IdentityMixed(usize),
    /// The converse of this atom's relation is not an atom relation.
    ConverseNotAtom(usize),
    /// `R_a ∘ R_b` meets `R_c` without containing it.
    CompositionNotUnion { a: usize, b: usize, c: usize },
}

impl RepViolation {
    pub fn render(&self, cr: &ConcreteRepresentation) -> String {
        let name = |a: usize| cr.atoms[a].as_str();
        match *self {
            RepViolation::EmptyAtom(a) => format!("empty-atom ({})", name(a)),
            RepViolation::Uncovered(i, j) => format!("square: pair ({i},{j}) is in no atom"),
            RepViolation::Overlap { pair: (i, j), atoms: (a, b) } => {
                format!("partition: pair ({i},{j}) is in both {} and {}", name(a), name(b))
            }
            RepViolation::IdentityMixed(a) => format!("identity: {} mixes diagonal and off-diagonal pairs", name(a)),
            RepViolation::ConverseNotAtom(a) => format!("converse: converse of {} is not an atom relation", name(a)),
            RepViolation::CompositionNotUnion { a, b, c } => {
                format!("composition: {} ∘ {} partially covers {}", name(a), name(b), name(c))
            }
        }
    }
}

impl ConcreteRepresentation {
    pub fn new(
        name: impl Into<String>,
        algebra_name: Option<String>,
        domain_size: usize,
        atoms: Vec<String>,
        relations: Vec<Vec<(usize, usize)>>,
    ) -> Result<Self> {
        if domain_size == 0 {
            return Err(Error::InvalidAlgebra("domain must be nonempty".into()));
        }
        if atoms.len() != relations.len() || atoms.is_empty() || atoms.len() > MAX_ATOMS {
            return Err(Error::InvalidAlgebra("atom list and relation list disagree".into()));
        }
        if relations.iter().flatten().any(|&(i, j)| i >= domain_size || j >= domain_size) {
            return Err(Error::InvalidAlgebra("pair outside the domain".into()));
        }
        Ok(Self::checked(name.into(), algebra_name, domain_size, atoms, relations))
    }

    fn checked(
        name: String,
        algebra_name: Option<String>,
        domain_size: usize,
        atoms: Vec<String>,
        relations: Vec<Vec<(usize, usize)>>,
    ) -> Self {
        let mut cr = ConcreteRepresentation { name, algebra_name, domain_size, atoms, relations, violations: Vec::new() };
        cr.violations = cr.find_violations();
        cr
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        parse_representation(text)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn algebra_name(&self) -> Option<&str> {
        self.algebra_name.as_deref()
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn atom_names(&self) -> &[String] {
        &self.atoms
    }

    pub fn relation(&self, atom: usize) -> &[(usize, usize)] {
        &self.relations[atom]
    }

    fn matrix(&self, atom: usize) -> Vec<bool> {
        let d = self.domain_size;
        let mut m = vec![false; d * d];
        for &(i, j) in &self.relations[atom] {
            m[i * d + j] = true;
        }
        m
    }

    /// The atoms covering each cell of the square.
    fn owners(&self) -> Vec<Element> {
        let d = self.domain_size;
        let mut owners = vec![Element::ZERO; d * d];
        for (a, rel) in self.relations.iter().enumerate() {
            for &(i, j) in rel {
                owners[i * d + j] |= Element::atom(a);
            }
        }
        owners
    }

    /// Every broken invariant, computed once at construction.
    pub fn validate(&self) -> Vec<RepViolation> {
        self.violations.clone()
    }

    fn find_violations(&self) -> Vec<RepViolation> {
        let d = self.domain_size;
        let k = self.atoms.len();
        let mut out = Vec::new();
        for a in 0..k {
            if self.relations[a].is_empty() {
                out.push(RepViolation::EmptyAtom(a));
            }
        }
        let owners = self.owners();
        for i in 0..d {
            for j in 0..d {
                let o = owners[i * d + j];
                match o.len() {
                    0 => out.push(RepViolation::Uncovered(i, j)),
                    1 => {}
                    _ => {
                        let mut it = o.atoms();
                        let (a, b) = (it.next().unwrap(), it.next().unwrap());
                        out.push(RepViolation::Overlap { pair: (i, j), atoms: (a, b) });
                    }
                }
            }
        }
        for a in 0..k {
            let rel = &self.relations[a];
            let diag = rel.iter().filter(|(i, j)| i == j).count();
            if diag > 0 && diag < rel.len() {
                out.push(RepViolation::IdentityMixed(a));
            }
        }
        let sets: Vec<HashSet<(usize, usize)>> =
            self.relations.iter().map(|r| r.iter().copied().collect()).collect();
        for a in 0..k {
            let conv: HashSet<(usize, usize)> = sets[a].iter().map(|&(i, j)| (j, i)).collect();
            if !sets.contains(&conv) {
                out.push(RepViolation::ConverseNotAtom(a));
            }
        }
        let mats: Vec<Vec<bool>> = (0..k).map(|a| self.matrix(a)).collect();
        for a in 0..k {
            for b in 0..k {
                let comp = compose_relations(&mats[a], &mats[b], d);
                for c in 0..k {
                    let hit = self.relations[c].iter().filter(|&&(i, j)| comp[i * d + j]).count();
                    if hit > 0 && hit < self.relations[c].len() {
                        out.push(RepViolation::CompositionNotUnion { a, b, c });
                    }
                }
            }
        }
        out
    }

    /// Serializes in the representation file format.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        match &self.algebra_name {
            Some(a) => {
                let _ = writeln!(s, "representation {} over {}", self.name, a);
            }
            None => {
                let _ = writeln!(s, "representation {}", self.name);
            }
        }
        let _ = writeln!(s, "domain {}", self.domain_size);
        let _ = writeln!(s, "atoms {}", self.atoms.join(" "));
        for (a, rel) in self.relations.iter().enumerate() {
            for chunk in rel.chunks(8) {
                let pairs: Vec<String> = chunk.iter().map(|(i, j)| format!("({i},{j})")).collect();
                let _ = writeln!(s, "pairs {} : {}", self.atoms[a], pairs.join(" "));
            }
        }
        s
    }
}

fn compose_relations(r: &[bool], s: &[bool], d: usize) -> Vec<bool> {
    let mut out = vec![false; d * d];
    for x in 0..d {
        for y in 0..d {
            if r[x * d + y] {
                for z in 0..d {
                    if s[y * d + z] {
                        out[x * d + z] = true;
                    }
                }
            }
        }
    }
    out
}

/// Parses the representation file format. Only structure is checked.
///
/// An optional `atoms` line fixes the atom order up front; without it atoms
/// are taken in order of first appearance.
pub fn parse_representation(text: &str) -> Result<ConcreteRepresentation, ParseError> {
    let mut header: Option<(String, Option<String>)> = None;
    let mut domain: Option<usize> = None;
    let mut declared = false;
    let mut atoms: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut relations: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut seen: Vec<HashSet<(usize, usize)>> = Vec::new();

    for (line, tokens) in lexer::lines(text) {
        let head = tokens[0];
        match head.text {
            "representation" => {
                if header.is_some() {
                    return Err(ParseError::new(line, head.column, ParseErrorKind::DuplicateEntry("representation line".into())));
                }
                header = match tokens.len() {
                    2 => Some((tokens[1].text.to_string(), None)),
                    4 if tokens[2].text == "over" => Some((tokens[1].text.to_string(), Some(tokens[3].text.to_string()))),
                    _ => return Err(ParseError::syntax(line, head.column, "expected `representation <name> [over <algebra>]`")),
                };
            }
            "domain" => {
                if header.is_none() {
                    return Err(ParseError::syntax(line, head.column, "`representation` line must come first"));
                }
                if domain.is_some() {
                    return Err(ParseError::new(line, head.column, ParseErrorKind::DuplicateEntry("domain line".into())));
                }
                let n = match tokens.get(1).map(|t| t.text.parse::<usize>()) {
                    Some(Ok(n)) if n >= 1 && tokens.len() == 2 => n,
                    _ => return Err(ParseError::syntax(line, head.column, "expected `domain <n>` with n >= 1")),
                };
                domain = Some(n);
            }
            "atoms" => {
                if declared || !atoms.is_empty() {
                    return Err(ParseError::syntax(line, head.column, "`atoms` must appear once, before any `pairs`"));
                }
                declared = true;
                for t in &tokens[1..] {
                    if index.insert(t.text.to_string(), atoms.len()).is_some() {
                        return Err(ParseError::new(line, t.column, ParseErrorKind::DuplicateAtom(t.text.to_string())));
                    }
                    atoms.push(t.text.to_string());
                    relations.push(Vec::new());
                    seen.push(HashSet::new());
                }
            }
            "pairs" => {
                let Some(d) = domain else {
                    return Err(ParseError::syntax(line, head.column, "`domain` line must come first"));
                };
                if tokens.len() < 3 || tokens[2].text != ":" {
                    return Err(ParseError::syntax(line, head.column, "expected `pairs <atom> : (i,j) ...`"));
                }
                let name = tokens[1];
                let atom = match index.get(name.text) {
                    Some(&a) => a,
                    None if declared => {
                        return Err(ParseError::new(line, name.column, ParseErrorKind::UnknownAtom(name.text.to_string())));
                    }
                    None => {
                        if atoms.len() == MAX_ATOMS {
                            return Err(ParseError::new(line, name.column, ParseErrorKind::TooManyAtoms(MAX_ATOMS + 1)));
                        }
                        index.insert(name.text.to_string(), atoms.len());
                        atoms.push(name.text.to_string());
                        relations.push(Vec::new());
                        seen.push(HashSet::new());
                        atoms.len() - 1
                    }
                };
                for t in &tokens[3..] {
                    let (i, j) = parse_pair(t.text).ok_or_else(|| {
                        ParseError::syntax(line, t.column, format!("expected `(i,j)`, found `{}`", t.text))
                    })?;
                    if i >= d || j >= d {
                        return Err(ParseError::new(line, t.column, ParseErrorKind::PairOutOfRange(i, j, d)));
                    }
                    if !seen[atom].insert((i, j)) {
                        return Err(ParseError::new(line, t.column, ParseErrorKind::DuplicatePair(atoms[atom].clone(), i, j)));
                    }
                    relations[atom].push((i, j));
                }
            }
            other => {
                return Err(ParseError::syntax(line, head.column, format!("unknown keyword `{other}`")));
            }
        }
    }
    let end = lexer::end_line(text);
    let (name, algebra_name) = header.ok_or_else(|| ParseError::syntax(end, 1, "missing `representation` line"))?;
    let domain_size = domain.ok_or_else(|| ParseError::syntax(end, 1, "missing `domain` line"))?;
    if atoms.is_empty() {
        return Err(ParseError::syntax(end, 1, "no atoms"));
    }
    Ok(ConcreteRepresentation::checked(name, algebra_name, domain_size, atoms, relations))
}

fn parse_pair(text: &str) -> Option<(usize, usize)> {
    let inner = text.strip_prefix('(')?.strip_suffix(')')?;
    let (a, b) = inner.split_once(',')?;
    Some((a.parse().ok()?, b.parse().ok()?))
}

/// Reads the abstract algebra off a valid representation: `a ∘ b` is the
/// set of atoms whose relation meets `R_a ∘ R_b`.
pub fn derive_algebra(cr: &ConcreteRepresentation) -> Result<RelationAlgebra> {
    if let Some(v) = cr.violations.first() {
        return Err(Error::NotProper(v.render(cr)));
    }
    let d = cr.domain_size;
    let k = cr.atoms.len();
    let owners = cr.owners();
    let owner = |i: usize, j: usize| owners[i * d + j].first_atom().expect("partition checked");
    let mats: Vec<Vec<bool>> = (0..k).map(|a| cr.matrix(a)).collect();
    let mut table = Vec::with_capacity(k * k);
    for a in 0..k {
        for b in 0..k {
            let comp = compose_relations(&mats[a], &mats[b], d);
            let mut e = Element::ZERO;
            for (cell, &hit) in comp.iter().enumerate() {
                if hit {
                    e |= Element::atom(owner(cell / d, cell % d));
                }
            }
            table.push(e);
        }
    }
    let converse = (0..k)
        .map(|a| {
            let (i, j) = cr.relations[a][0];
            owner(j, i)
        })
        .collect();
    let identity = Element::from_atoms((0..k).filter(|&a| cr.relations[a].iter().all(|(i, j)| i == j)));
    let name = cr.algebra_name.clone().unwrap_or_else(|| cr.name.clone());
    RelationAlgebra::from_parts(name, cr.atoms.clone(), converse, identity, table)
}

/// Searches for `s` with `(s(x), s(y)) ∈ ⋃{R_a : a ∈ f(x,y)}` for all
/// ordered pairs. Labels are read in the representation's atom order.
///
/// Backtracking over nodes, smallest remaining candidate set first, with
/// forward checking against every unassigned node.
pub fn model_check(cr: &ConcreteRepresentation, net: &Network) -> Result<Option<Vec<usize>>> {
    let top = Element::full(cr.atoms.len());
    if net.labels().iter().any(|l| !l.leq(top)) {
        return Err(Error::Mismatch("label uses an atom the representation does not have".into()));
    }
    if let Some(v) = cr.violations.first() {
        return Err(Error::NotProper(v.render(cr)));
    }
    let d = cr.domain_size;
    let owners: Vec<usize> = cr.owners().iter().map(|o| o.first_atom().unwrap()).collect();
    let n = net.len();
    let allowed = |x: usize, y: usize, u: usize, v: usize| net.label(x, y).contains(owners[u * d + v]);
    let domains: Vec<Vec<usize>> = (0..n).map(|x| (0..d).filter(|&u| allowed(x, x, u, u)).collect()).collect();
    let mut assignment = vec![None; n];
    let found = assign(&allowed, &mut assignment, domains);
    Ok(found.then(|| assignment.into_iter().map(|v| v.unwrap()).collect()))
}

fn assign(
    allowed: &impl Fn(usize, usize, usize, usize) -> bool,
    assignment: &mut [Option<usize>],
    domains: Vec<Vec<usize>>,
) -> bool {
    let next = (0..assignment.len())
        .filter(|&x| assignment[x].is_none())
        .min_by_key(|&x| domains[x].len());
    let Some(x) = next else {
        return true;
    };
    'values: for &u in &domains[x] {
        let mut pruned = domains.clone();
        pruned[x] = vec![u];
        for y in 0..assignment.len() {
            if y == x || assignment[y].is_some() {
                continue;
            }
            pruned[y].retain(|&v| allowed(x, y, u, v) && allowed(y, x, v, u));
            if pruned[y].is_empty() {
                continue 'values;
            }
        }
        assignment[x] = Some(u);
        if assign(allowed, assignment, pruned) {
            return true;
        }
        assignment[x] = None;
    }
    false
}
