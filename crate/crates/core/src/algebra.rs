//! Finite relation algebras given by their atom structure.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use crate::element::{Element, MAX_ATOMS};
use crate::error::{Error, ParseError, ParseErrorKind, Result};
use crate::lexer;

/// A finite relation algebra presented by its atoms, the converse map on
/// atoms, the atoms below `Id`, and the atom-level composition table.
///
/// Values are immutable once built. Atom order is file order and fixes the
/// bit position of every atom in an [`Element`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationAlgebra {
    name: String,
    atoms: Vec<String>,
    index: HashMap<String, usize>,
    converse: Vec<usize>,
    identity: Element,
    /// Row-major `k * k`, entry `a * k + b` is `a ∘ b`.
    table: Vec<Element>,
}

impl RelationAlgebra {
    /// Builds an algebra from already-resolved parts. Only shape is checked;
    /// use [`RelationAlgebra::validate`] for the laws.
    pub fn from_parts(
        name: impl Into<String>,
        atoms: Vec<String>,
        converse: Vec<usize>,
        identity: Element,
        table: Vec<Element>,
    ) -> Result<Self> {
        let k = atoms.len();
        if k == 0 {
            return Err(Error::InvalidAlgebra("no atoms".into()));
        }
        if k > MAX_ATOMS {
            return Err(Error::InvalidAlgebra(format!("{k} atoms exceeds the limit of {MAX_ATOMS}")));
        }
        if converse.len() != k || converse.iter().any(|&c| c >= k) {
            return Err(Error::InvalidAlgebra("converse map is not total".into()));
        }
        if table.len() != k * k {
            return Err(Error::InvalidAlgebra("composition table is not k*k".into()));
        }
        let top = Element::full(k);
        if identity.is_empty() || !identity.leq(top) || table.iter().any(|e| !e.leq(top)) {
            return Err(Error::InvalidAlgebra("element outside the atom set".into()));
        }
        let mut index = HashMap::with_capacity(k);
        for (i, a) in atoms.iter().enumerate() {
            if index.insert(a.clone(), i).is_some() {
                return Err(Error::InvalidAlgebra(format!("duplicate atom `{a}`")));
            }
        }
        Ok(RelationAlgebra { name: name.into(), atoms, index, converse, identity, table })
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        parse_algebra(text)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of atoms.
    pub fn k(&self) -> usize {
        self.atoms.len()
    }

    pub fn atom_names(&self) -> &[String] {
        &self.atoms
    }

    pub fn atom_name(&self, atom: usize) -> &str {
        &self.atoms[atom]
    }

    pub fn atom_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn zero(&self) -> Element {
        Element::ZERO
    }

    pub fn top(&self) -> Element {
        Element::full(self.k())
    }

    /// `Id`, the join of the identity atoms.
    pub fn identity(&self) -> Element {
        self.identity
    }

    pub fn is_identity_atom(&self, atom: usize) -> bool {
        self.identity.contains(atom)
    }

    pub fn converse_atom(&self, atom: usize) -> usize {
        self.converse[atom]
    }

    /// Table lookup `a ∘ b` for atoms.
    pub fn compose_atoms(&self, a: usize, b: usize) -> Element {
        self.table[a * self.k() + b]
    }

    pub fn compose(&self, x: Element, y: Element) -> Element {
        let mut out = Element::ZERO;
        for a in x.atoms() {
            let row = &self.table[a * self.k()..(a + 1) * self.k()];
            for b in y.atoms() {
                out |= row[b];
            }
        }
        out
    }

    pub fn converse(&self, x: Element) -> Element {
        Element::from_atoms(x.atoms().map(|a| self.converse[a]))
    }

    pub fn complement(&self, x: Element) -> Element {
        Element::from_bits(!x.bits() & self.top().bits())
    }

    pub fn meet(&self, x: Element, y: Element) -> Element {
        x.meet(y)
    }

    pub fn join(&self, x: Element, y: Element) -> Element {
        x.join(y)
    }

    pub fn leq(&self, x: Element, y: Element) -> bool {
        x.leq(y)
    }

    /// Returns a copy with one table entry replaced.
    pub fn with_entry(&self, a: usize, b: usize, value: Element) -> RelationAlgebra {
        let mut out = self.clone();
        let k = out.k();
        out.table[a * k + b] = value;
        out
    }

    /// Parses a comma-separated atom list such as `lt,eq`. `0` is the empty
    /// element and `1` the top element.
    pub fn parse_element(&self, text: &str) -> Result<Element> {
        let text = text.trim();
        match text {
            "0" => return Ok(Element::ZERO),
            "1" => return Ok(self.top()),
            _ => {}
        }
        let mut out = Element::ZERO;
        for part in text.split(',') {
            let part = part.trim();
            let atom = self.atom_index(part).ok_or_else(|| {
                ParseError::new(1, 1, ParseErrorKind::UnknownAtom(part.to_string()))
            })?;
            out |= Element::atom(atom);
        }
        Ok(out)
    }

    /// Comma-separated atom names in file order, `0` for the empty element.
    pub fn format_element(&self, x: Element) -> String {
        self.join_names(x, ",")
    }

    pub(crate) fn join_names(&self, x: Element, sep: &str) -> String {
        if x.is_empty() {
            return "0".to_string();
        }
        let names: Vec<&str> = x.atoms().map(|a| self.atom_name(a)).collect();
        names.join(sep)
    }

    /// Serializes in the algebra file format.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "algebra {}", self.name);
        let _ = writeln!(s, "atoms {}", self.atoms.join(" "));
        let _ = writeln!(s, "identity {}", self.join_names(self.identity, " "));
        for a in 0..self.k() {
            let c = self.converse[a];
            if a <= c {
                let _ = writeln!(s, "converse {} {}", self.atoms[a], self.atoms[c]);
            } else if self.converse[c] != a {
                // not an involution; keep the line so the map survives a round trip
                let _ = writeln!(s, "converse {} {}", self.atoms[a], self.atoms[c]);
            }
        }
        for a in 0..self.k() {
            for b in 0..self.k() {
                let _ = writeln!(
                    s,
                    "compose {} {} = {}",
                    self.atoms[a],
                    self.atoms[b],
                    self.join_names(self.compose_atoms(a, b), " ")
                );
            }
        }
        s
    }

    /// Checks the relation algebra laws at atom level. Violations are data,
    /// not errors.
    pub fn validate(&self) -> ValidationReport {
        validate_algebra(self)
    }
}

/// Parses the algebra file format. Laws are not checked.
pub fn parse_algebra(text: &str) -> Result<RelationAlgebra, ParseError> {
    let mut name: Option<String> = None;
    let mut atoms: Option<Vec<String>> = None;
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut identity: Option<Element> = None;
    let mut converse: Vec<Option<usize>> = Vec::new();
    let mut table: Vec<Option<Element>> = Vec::new();

    for (line, tokens) in lexer::lines(text) {
        let head = tokens[0];
        let need_atoms = |col: usize| -> Result<(), ParseError> {
            if atoms.is_none() {
                Err(ParseError::syntax(line, col, "`atoms` line must come first"))
            } else {
                Ok(())
            }
        };
        let resolve = |index: &HashMap<String, usize>, t: lexer::Token<'_>| {
            index
                .get(t.text)
                .copied()
                .ok_or_else(|| ParseError::new(line, t.column, ParseErrorKind::UnknownAtom(t.text.to_string())))
        };
        match head.text {
            "algebra" => {
                if name.is_some() {
                    return Err(ParseError::new(line, head.column, ParseErrorKind::DuplicateEntry("algebra line".into())));
                }
                if tokens.len() != 2 {
                    return Err(ParseError::syntax(line, head.column, "expected `algebra <name>`"));
                }
                name = Some(tokens[1].text.to_string());
            }
            "atoms" => {
                if name.is_none() {
                    return Err(ParseError::syntax(line, head.column, "`algebra` line must come first"));
                }
                if atoms.is_some() {
                    return Err(ParseError::new(line, head.column, ParseErrorKind::DuplicateEntry("atoms line".into())));
                }
                if tokens.len() < 2 {
                    return Err(ParseError::syntax(line, head.column, "expected at least one atom"));
                }
                let mut list = Vec::new();
                for t in &tokens[1..] {
                    if t.text == "0" || t.text == "1" || t.text == "=" || t.text.contains(',') {
                        return Err(ParseError::syntax(line, t.column, format!("`{}` is not a valid atom name", t.text)));
                    }
                    if index.insert(t.text.to_string(), list.len()).is_some() {
                        return Err(ParseError::new(line, t.column, ParseErrorKind::DuplicateAtom(t.text.to_string())));
                    }
                    list.push(t.text.to_string());
                }
                if list.len() > MAX_ATOMS {
                    return Err(ParseError::new(line, head.column, ParseErrorKind::TooManyAtoms(list.len())));
                }
                converse = vec![None; list.len()];
                table = vec![None; list.len() * list.len()];
                atoms = Some(list);
            }
            "identity" => {
                need_atoms(head.column)?;
                if identity.is_some() {
                    return Err(ParseError::new(line, head.column, ParseErrorKind::DuplicateEntry("identity line".into())));
                }
                if tokens.len() < 2 {
                    return Err(ParseError::syntax(line, head.column, "expected at least one identity atom"));
                }
                let mut id = Element::ZERO;
                for t in &tokens[1..] {
                    id |= Element::atom(resolve(&index, *t)?);
                }
                identity = Some(id);
            }
            "converse" => {
                need_atoms(head.column)?;
                if tokens.len() != 3 {
                    return Err(ParseError::syntax(line, head.column, "expected `converse <a> <b>`"));
                }
                let a = resolve(&index, tokens[1])?;
                let b = resolve(&index, tokens[2])?;
                for (x, t) in [(a, tokens[1]), (b, tokens[2])] {
                    if converse[x].is_some() {
                        return Err(ParseError::new(
                            line,
                            t.column,
                            ParseErrorKind::DuplicateEntry(format!("converse of `{}` given twice", t.text)),
                        ));
                    }
                }
                converse[a] = Some(b);
                converse[b] = Some(a);
            }
            "compose" => {
                need_atoms(head.column)?;
                if tokens.len() < 5 || tokens[3].text != "=" {
                    return Err(ParseError::syntax(line, head.column, "expected `compose <a> <b> = <c1> ...`"));
                }
                let k = converse.len();
                let a = resolve(&index, tokens[1])?;
                let b = resolve(&index, tokens[2])?;
                let rhs = &tokens[4..];
                let value = if rhs.len() == 1 && rhs[0].text == "0" {
                    Element::ZERO
                } else {
                    let mut v = Element::ZERO;
                    for t in rhs {
                        if t.text == "0" {
                            return Err(ParseError::syntax(line, t.column, "`0` cannot be combined with atoms"));
                        }
                        v |= Element::atom(resolve(&index, *t)?);
                    }
                    v
                };
                let slot = &mut table[a * k + b];
                if slot.is_some() {
                    return Err(ParseError::new(
                        line,
                        head.column,
                        ParseErrorKind::DuplicateEntry(format!("compose {} {}", tokens[1].text, tokens[2].text)),
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
    let name = name.ok_or_else(|| ParseError::syntax(end, 1, "missing `algebra` line"))?;
    let atoms = atoms.ok_or_else(|| ParseError::syntax(end, 1, "missing `atoms` line"))?;
    let identity = identity.ok_or_else(|| ParseError::syntax(end, 1, "missing `identity` line"))?;
    let k = atoms.len();
    let mut conv = Vec::with_capacity(k);
    for (a, c) in converse.iter().enumerate() {
        conv.push(c.ok_or_else(|| ParseError::new(end, 1, ParseErrorKind::MissingConverse(atoms[a].clone())))?);
    }
    let mut entries = Vec::with_capacity(k * k);
    for (i, e) in table.iter().enumerate() {
        entries.push(e.ok_or_else(|| {
            ParseError::new(end, 1, ParseErrorKind::MissingTableEntry(atoms[i / k].clone(), atoms[i % k].clone()))
        })?);
    }
    Ok(RelationAlgebra { name, atoms, index, converse: conv, identity, table: entries })
}

/// Which law a [`Violation`] breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Law {
    /// `a⌣⌣ = a`; witness `[a]`.
    ConverseInvolution,
    /// identity atoms are self-converse; witness `[e]`.
    IdentitySelfConverse,
    /// `⋃_e a ∘ e = {a}`; witness `[a]`.
    RightIdentity,
    /// `⋃_e e ∘ a = {a}`; witness `[a]`.
    LeftIdentity,
    /// `c ≤ a∘b ⟺ c⌣ ≤ b⌣∘a⌣`; witness `[a, b, c]`.
    ConverseOfComposition,
    /// `c ≤ a∘b ⟺ a ≤ c∘b⌣`; witness `[a, b, c]`.
    RotationRight,
    /// `c ≤ a∘b ⟺ b ≤ a⌣∘c`; witness `[a, b, c]`.
    RotationLeft,
    /// `(a∘b)∘c = a∘(b∘c)`; witness `[a, b, c]`.
    Associativity,
}

impl Law {
    pub fn as_str(self) -> &'static str {
        match self {
            Law::ConverseInvolution => "converse-involution",
            Law::IdentitySelfConverse => "identity-self-converse",
            Law::RightIdentity => "right-identity",
            Law::LeftIdentity => "left-identity",
            Law::ConverseOfComposition => "converse-of-composition",
            Law::RotationRight => "rotation-right",
            Law::RotationLeft => "rotation-left",
            Law::Associativity => "associativity",
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub law: Law,
    /// Atom indices witnessing the failure.
    pub witness: Vec<usize>,
}

impl Violation {
    pub fn render(&self, ra: &RelationAlgebra) -> String {
        let names: Vec<&str> = self.witness.iter().map(|&a| ra.atom_name(a)).collect();
        format!("{} ({})", self.law, names.join(", "))
    }
}

/// Non-fatal findings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Warning {
    /// `a ∘ b = 0`.
    EmptyEntry(usize, usize),
}

impl Warning {
    pub fn render(&self, ra: &RelationAlgebra) -> String {
        match *self {
            Warning::EmptyEntry(a, b) => {
                format!("empty table entry `compose {} {}`", ra.atom_name(a), ra.atom_name(b))
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<Warning>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn laws(&self) -> Vec<Law> {
        let mut laws: Vec<Law> = self.violations.iter().map(|v| v.law).collect();
        laws.sort();
        laws.dedup();
        laws
    }
}

fn validate_algebra(ra: &RelationAlgebra) -> ValidationReport {
    let k = ra.k();
    let mut report = ValidationReport::default();
    let v = &mut report.violations;
    let conv = |a: usize| ra.converse_atom(a);
    let has = |a: usize, b: usize, c: usize| ra.compose_atoms(a, b).contains(c);

    for a in 0..k {
        if conv(conv(a)) != a {
            v.push(Violation { law: Law::ConverseInvolution, witness: vec![a] });
        }
    }
    for e in ra.identity().atoms() {
        if conv(e) != e {
            v.push(Violation { law: Law::IdentitySelfConverse, witness: vec![e] });
        }
    }
    for a in 0..k {
        let right = ra.compose(Element::atom(a), ra.identity());
        if right != Element::atom(a) {
            v.push(Violation { law: Law::RightIdentity, witness: vec![a] });
        }
        let left = ra.compose(ra.identity(), Element::atom(a));
        if left != Element::atom(a) {
            v.push(Violation { law: Law::LeftIdentity, witness: vec![a] });
        }
    }
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                let base = has(a, b, c);
                if base != has(conv(b), conv(a), conv(c)) {
                    v.push(Violation { law: Law::ConverseOfComposition, witness: vec![a, b, c] });
                }
                if base != has(c, conv(b), a) {
                    v.push(Violation { law: Law::RotationRight, witness: vec![a, b, c] });
                }
                if base != has(conv(a), c, b) {
                    v.push(Violation { law: Law::RotationLeft, witness: vec![a, b, c] });
                }
                let (ab, bc) = (ra.compose_atoms(a, b), ra.compose_atoms(b, c));
                if ra.compose(ab, Element::atom(c)) != ra.compose(Element::atom(a), bc) {
                    v.push(Violation { law: Law::Associativity, witness: vec![a, b, c] });
                }
            }
        }
    }
    for a in 0..k {
        for b in 0..k {
            if ra.compose_atoms(a, b).is_empty() {
                report.warnings.push(Warning::EmptyEntry(a, b));
            }
        }
    }
    report
}
