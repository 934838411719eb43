//! JSON documents and Graphviz output.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bitset::AtomSet;
use crate::error::{Error, Result};
use crate::extend::StandardForm;
use crate::family::SetFamily;
use crate::lattice::{FiniteLattice, FinitePoset};

/// `{"n": .., "covers": [[a, b], ..]}` with optional element names and, for
/// standard forms, the parent of each inserted atom.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDoc {
    pub n: usize,
    pub covers: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inserted: Option<BTreeMap<usize, usize>>,
}

impl LatticeDoc {
    pub fn from_poset(p: &FinitePoset) -> LatticeDoc {
        LatticeDoc { n: p.n(), covers: p.covers().iter().map(|&(a, b)| [a, b]).collect(), labels: None, inserted: None }
    }

    pub fn from_form(form: &StandardForm) -> LatticeDoc {
        let mut doc = LatticeDoc::from_poset(form.lattice().poset());
        doc.inserted = Some(form.inserted().into_iter().collect());
        doc
    }

    fn pairs(&self) -> Vec<(usize, usize)> {
        self.covers.iter().map(|&[a, b]| (a, b)).collect()
    }

    fn check_labels(&self) -> Result<()> {
        match &self.labels {
            Some(l) if l.len() != self.n => {
                Err(Error::Parse(format!("field `labels`: expected {} names, found {}", self.n, l.len())))
            }
            _ => Ok(()),
        }
    }

    pub fn poset(&self) -> Result<FinitePoset> {
        self.check_labels()?;
        FinitePoset::new(self.n, &self.pairs())
    }

    pub fn lattice(&self) -> Result<FiniteLattice> {
        self.check_labels()?;
        FiniteLattice::new(self.n, &self.pairs())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDoc {
    pub universe: usize,
    pub sets: Vec<AtomSet>,
}

impl FamilyDoc {
    pub fn family(&self) -> Result<SetFamily> {
        SetFamily::new(self.universe, self.sets.iter().copied())
    }
}

impl From<&SetFamily> for FamilyDoc {
    fn from(f: &SetFamily) -> FamilyDoc {
        FamilyDoc { universe: f.universe(), sets: f.sets().to_vec() }
    }
}

/// Either kind of input document.
#[derive(Clone, Debug)]
pub enum Document {
    Lattice(LatticeDoc),
    Family(FamilyDoc),
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

pub fn parse_lattice(text: &str) -> Result<LatticeDoc> {
    serde_json::from_str(text).map_err(parse_error)
}

pub fn parse_family(text: &str) -> Result<FamilyDoc> {
    serde_json::from_str(text).map_err(parse_error)
}

/// Dispatches on the presence of a `universe` field.
pub fn parse_document(text: &str) -> Result<Document> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(parse_error)?;
    if value.get("universe").is_some() {
        serde_json::from_value(value).map(Document::Family).map_err(parse_error)
    } else if value.get("n").is_some() {
        serde_json::from_value(value).map(Document::Lattice).map_err(parse_error)
    } else {
        Err(Error::Parse("expected a lattice (`n`, `covers`) or a family (`universe`, `sets`)".into()))
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("documents serialize")
}

pub fn family_json(f: &SetFamily) -> String {
    serde_json::to_string(&FamilyDoc::from(f)).expect("documents serialize")
}

/// How DOT nodes are labelled.
#[derive(Clone, Copy, Debug)]
pub enum NodeLabels<'a> {
    Index,
    Names(&'a [String]),
    Sets(&'a [AtomSet]),
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn render(name: &str, n: usize, covers: &[(usize, usize)], heights: &[usize], label: impl Fn(usize) -> String) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", quote(name));
    let _ = writeln!(out, "  rankdir=BT;");
    let _ = writeln!(out, "  node [shape=circle];");
    for x in 0..n {
        let _ = writeln!(out, "  n{x} [label={}];", quote(&label(x)));
    }
    for &(a, b) in covers {
        let _ = writeln!(out, "  n{a} -> n{b} [arrowhead=none];");
    }
    let mut ranks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (x, &h) in heights.iter().enumerate().take(n) {
        ranks.entry(h).or_default().push(x);
    }
    for members in ranks.values() {
        let nodes: Vec<String> = members.iter().map(|x| format!("n{x}")).collect();
        let _ = writeln!(out, "  {{ rank=same; {}; }}", nodes.join("; "));
    }
    out.push_str("}\n");
    out
}

/// Hasse diagram: one node per element, one edge per cover, rows by height.
pub fn poset_dot(p: &FinitePoset, name: &str, labels: NodeLabels<'_>) -> String {
    let heights: Vec<usize> = p.elements().map(|x| p.height(x)).collect();
    render(name, p.n(), p.covers(), &heights, |x| match labels {
        NodeLabels::Index => x.to_string(),
        NodeLabels::Names(names) => names.get(x).cloned().unwrap_or_else(|| x.to_string()),
        NodeLabels::Sets(sets) => sets.get(x).map_or_else(|| x.to_string(), |s| s.to_string()),
    })
}

pub fn family_dot(f: &SetFamily, name: &str) -> String {
    render(name, f.len(), &f.cover_pairs(), &f.heights(), |x| f.sets()[x].to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_round_trip() {
        let text = r#"{"n": 3, "covers": [[0, 1], [1, 2]]}"#;
        let doc = parse_lattice(text).unwrap();
        let again = parse_lattice(&to_json(&doc)).unwrap();
        assert_eq!(doc, again);
        assert_eq!(doc.lattice().unwrap().length(), 2);
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = parse_lattice("{\"n\": 3,\n \"covers\": [[0, 1], [1]]}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        assert!(matches!(parse_family(r#"{"universe": 2, "sets": [[0]]}"#), Err(Error::Parse(_))));
        assert!(matches!(parse_document(r#"{"x": 1}"#), Err(Error::Parse(_))));
    }

    #[test]
    fn family_dot_has_ranks() {
        let f = SetFamily::new(2, AtomSet::full(2).subsets()).unwrap();
        let dot = family_dot(&f, "b2");
        assert!(dot.contains("label=\"{1,2}\""));
        assert_eq!(dot.matches("rank=same").count(), 3);
        assert_eq!(dot.matches("->").count(), 4);
    }
}
