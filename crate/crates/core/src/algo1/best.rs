use serde::Serialize;

use super::search::{enumerate_outputs, trace_to, Enumeration, SearchInput, SearchOptions, TraceEntry};
use crate::bitset::AtomSet;
use crate::error::{Error, Result};
use crate::extend::StandardForm;
use crate::family::SetFamily;
use crate::lattice::FiniteLattice;

/// First `(X, a)` with `a ⊄ X` and `ℓ(cl(X ∪ a)) ≠ ℓ(X) + 1`.
pub fn m_violation(q: &SetFamily) -> Result<Option<(AtomSet, AtomSet)>> {
    let atoms = q.atoms();
    let heights = q.height_map();
    for &x in q.sets() {
        for &a in atoms.iter().filter(|a| !a.is_subset(x)) {
            let c = q.closure_with_atoms(&atoms, x | a)?;
            if heights[&c] != heights[&x] + 1 {
                return Ok(Some((x, a)));
            }
        }
    }
    Ok(None)
}

/// Every one-atom augmentation of a member raises the height by one.
pub fn satisfies_m(q: &SetFamily) -> Result<bool> {
    Ok(m_violation(q)?.is_none())
}

/// An output family with its summary data.
#[derive(Clone, Debug, Serialize)]
pub struct ExtensionResult {
    pub family: SetFamily,
    /// Whether the family satisfies the augmentation condition.
    pub geometric: bool,
    /// `embedding[x]` is the image of element `x` of `L`.
    pub embedding: Vec<AtomSet>,
    pub size: usize,
    pub atoms: usize,
    pub length: usize,
    /// Choices that reproduce this family; empty if none was recomputed.
    pub trace: Vec<TraceEntry>,
}

impl ExtensionResult {
    pub fn new(input: &SearchInput, family: SetFamily, with_trace: bool) -> Result<ExtensionResult> {
        let trace = if with_trace { trace_to(input, &family)?.unwrap_or_default() } else { Vec::new() };
        Ok(ExtensionResult {
            geometric: satisfies_m(&family)?,
            embedding: input.embedding.clone(),
            size: family.len(),
            atoms: family.atoms().len(),
            length: family.length(),
            trace,
            family,
        })
    }
}

/// Output classes that satisfy the augmentation condition.
pub fn geometric_outputs(enumeration: &Enumeration) -> Result<Vec<SetFamily>> {
    let mut out = Vec::new();
    for q in &enumeration.classes {
        if satisfies_m(q)? {
            out.push(q.clone());
        }
    }
    Ok(out)
}

/// Minimum-size geometric outputs for a prepared search input.
pub fn best_from_input(input: &SearchInput, options: SearchOptions) -> Result<Vec<ExtensionResult>> {
    let enumeration = enumerate_outputs(input, options)?;
    let good = geometric_outputs(&enumeration)?;
    let Some(min) = good.iter().map(SetFamily::len).min() else {
        return Ok(Vec::new());
    };
    good.into_iter()
        .filter(|q| q.len() == min)
        .map(|q| ExtensionResult::new(input, q, true))
        .collect()
}

/// Smallest cover-preserving geometric extensions of `l` of equal length,
/// one per isomorphism class, built on the minimal standard form.
pub fn best_extensions(l: &FiniteLattice, options: SearchOptions) -> Result<Vec<ExtensionResult>> {
    let form = StandardForm::minimal(l)?;
    let input = form.search_input()?;
    let results = best_from_input(&input, options)?;
    let j = l.join_irreducibles().len();
    for r in &results {
        if r.atoms != j || r.length != l.length() {
            return Err(Error::InvariantViolated(format!(
                "best extension has {} atoms and length {}, expected {} and {}",
                r.atoms,
                r.length,
                j,
                l.length()
            )));
        }
    }
    Ok(results)
}
