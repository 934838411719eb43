//! Named example lattices and families bundled with the crate.
//!
//! Atom labels follow the drawings the examples come from, so families can
//! be compared with them directly. `FIX-P10` lists its atoms in the order
//! that reproduces those labels under [`crate::family::set_representation`].

use crate::algo1::SearchInput;
use crate::bitset::AtomSet;
use crate::error::{Error, Result};
use crate::family::SetFamily;
use crate::io::{parse_family, parse_lattice, LatticeDoc};
use crate::lattice::{FiniteLattice, FinitePoset};

macro_rules! corpus {
    ($($name:literal => $file:literal),* $(,)?) => {
        pub const NAMES: &[&str] = &[$($name),*];

        pub fn source(name: &str) -> Option<&'static str> {
            match name {
                $($name => Some(include_str!(concat!("../fixtures/", $file))),)*
                _ => None,
            }
        }
    };
}

corpus! {
    "FIX-M3" => "m3.json",
    "FIX-FIG1" => "fig1.json",
    "FIX-FIG2" => "fig2.json",
    "FIX-FIG3" => "fig3.json",
    "FIX-L5" => "l5.json",
    "FIX-P1" => "p1.json",
    "FIX-P2" => "p2.json",
    "FIX-P3" => "p3.json",
    "FIX-T6" => "t6.json",
    "FIX-S6" => "s6.json",
    "FIX-T7" => "t7.json",
    "FIX-S7" => "s7.json",
    "FIX-L7" => "l7.json",
    "FIX-P10" => "p10.json",
    "FIX-T10" => "t10.json",
    "FIX-S10" => "s10.json",
    "FIX-FAM11" => "fam11.json",
    "FIX-FAM12" => "fam12.json",
    "FIX-FAM13" => "fam13.json",
    "FIX-FAM14" => "fam14.json",
    "FIX-FAM15" => "fam15.json",
    "FIX-FAM16" => "fam16.json",
}

fn text(name: &str) -> Result<&'static str> {
    source(name).ok_or_else(|| Error::Parse(format!("unknown fixture {name}")))
}

pub fn is_family(name: &str) -> bool {
    source(name).is_some_and(|t| t.contains("\"universe\""))
}

pub fn lattice_doc(name: &str) -> Result<LatticeDoc> {
    parse_lattice(text(name)?)
}

pub fn lattice(name: &str) -> Result<FiniteLattice> {
    lattice_doc(name)?.lattice()
}

pub fn poset(name: &str) -> Result<FinitePoset> {
    lattice_doc(name)?.poset()
}

pub fn family(name: &str) -> Result<SetFamily> {
    parse_family(text(name)?)?.family()
}

/// Search input for the drawn labelling of `FIX-L7` inside `FIX-P10`.
pub fn l7_input() -> Result<SearchInput> {
    let s = |l: &[usize]| AtomSet::from_labels(l.iter().copied());
    // 0, c, m1, m2, m3, m4, 1
    let embedding = vec![s(&[]), s(&[3]), s(&[1, 3]), s(&[2, 3]), s(&[3, 4]), s(&[3, 5]), s(&[1, 2, 3, 4, 5])];
    Ok(SearchInput { sp: family("FIX-S10")?, embedded: family("FIX-T10")?, embedding, length: 3 })
}

/// The four choices that lead from `FIX-S10` to `FIX-FAM14`.
pub fn fam14_script() -> Vec<AtomSet> {
    [&[1, 2, 4][..], &[1, 5], &[2, 5], &[4, 5]]
        .iter()
        .map(|l| AtomSet::from_labels(l.iter().copied()))
        .collect()
}

/// The single choice that leads from `FIX-S10` to `FIX-FAM16`.
pub fn fam16_script() -> Vec<AtomSet> {
    vec![AtomSet::from_labels([1, 2, 4, 5])]
}
