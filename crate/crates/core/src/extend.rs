//! Extending standard forms: new atoms inserted strictly between the bottom
//! and non-atom elements, plus the two atom-removal reductions.

use std::collections::BTreeMap;

use crate::algo1::SearchInput;
use crate::bitset::AtomSet;
use crate::error::{Error, Result};
use crate::family::{embedded_family, set_representation, SetFamily};
use crate::lattice::FiniteLattice;

/// `L − (A(L) ∪ {0})`, ascending.
pub fn h_set(l: &FiniteLattice) -> Vec<usize> {
    let atoms = l.atoms();
    l.elements().filter(|&x| x != l.bottom() && !atoms.contains(&x)).collect()
}

/// Elements that need at least one inserted atom: `J(L) ∩ H(L)`.
pub fn required_parents(l: &FiniteLattice) -> Vec<usize> {
    let h = h_set(l);
    l.join_irreducibles().into_iter().filter(|x| h.contains(x)).collect()
}

/// A lattice `L` with `delta[x]` new atoms `x'` placed as `0 ≺ x' ≺ x`.
///
/// Elements of `L` keep their indices; inserted atoms take indices `n, n+1,
/// ..` in ascending parent order.
#[derive(Clone, Debug)]
pub struct StandardForm {
    base: FiniteLattice,
    delta: BTreeMap<usize, usize>,
    lattice: FiniteLattice,
    parent: Vec<Option<usize>>,
}

impl StandardForm {
    pub fn new(base: &FiniteLattice, delta: &BTreeMap<usize, usize>) -> Result<StandardForm> {
        let h = h_set(base);
        let n = base.n();
        for (&x, _) in delta.iter().filter(|&(_, &c)| c > 0) {
            if x >= n {
                return Err(Error::IndexOutOfRange { index: x, n });
            }
            if !h.contains(&x) {
                return Err(Error::MalformedFamily(format!(
                    "element {x} is the bottom or an atom; no atom can be inserted below it"
                )));
            }
        }
        if let Some(&x) = required_parents(base).iter().find(|x| delta.get(x).copied().unwrap_or(0) == 0) {
            return Err(Error::MalformedFamily(format!(
                "join-irreducible element {x} has no inserted atom below it"
            )));
        }

        let delta: BTreeMap<usize, usize> = delta.iter().filter(|&(_, &c)| c > 0).map(|(&x, &c)| (x, c)).collect();
        let mut covers = base.covers().to_vec();
        let mut parent = vec![None; n];
        for (&x, &count) in &delta {
            for _ in 0..count {
                let new = parent.len();
                parent.push(Some(x));
                covers.push((base.bottom(), new));
                covers.push((new, x));
            }
        }
        let lattice = FiniteLattice::new(parent.len(), &covers)?;
        Ok(StandardForm { base: base.clone(), delta, lattice, parent })
    }

    /// Exactly one new atom under each element of `J(L) ∩ H(L)`.
    pub fn minimal(base: &FiniteLattice) -> Result<StandardForm> {
        if let Some((a, b, c)) = base.semimodularity_violation() {
            return Err(Error::NotSemimodular { a, b, c });
        }
        let delta = required_parents(base).into_iter().map(|x| (x, 1)).collect();
        StandardForm::new(base, &delta)
    }

    pub fn base(&self) -> &FiniteLattice {
        &self.base
    }

    pub fn delta(&self) -> &BTreeMap<usize, usize> {
        &self.delta
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    /// Parent of an inserted atom; `None` for elements of `L`.
    pub fn parent(&self, x: usize) -> Option<usize> {
        self.parent.get(x).copied().flatten()
    }

    /// `(inserted atom, parent)` pairs.
    pub fn inserted(&self) -> Vec<(usize, usize)> {
        self.parent.iter().enumerate().filter_map(|(x, p)| p.map(|p| (x, p))).collect()
    }

    pub fn inserted_count(&self) -> usize {
        self.delta.values().sum()
    }

    pub fn atom_count(&self) -> usize {
        self.lattice.atoms().len()
    }

    /// Elements of `L` inside `P`.
    pub fn base_elements(&self) -> Vec<usize> {
        (0..self.base.n()).collect()
    }

    /// `S_P`.
    pub fn representation(&self) -> Result<SetFamily> {
        Ok(set_representation(self.lattice.poset())?.family)
    }

    /// `𝒯^P_L`.
    pub fn embedded(&self) -> Result<SetFamily> {
        embedded_family(&self.lattice, &self.base_elements())
    }

    /// Atom label carried by element `x` of `P`, if `x` is an atom.
    pub fn label_of(&self, x: usize) -> Option<usize> {
        self.lattice.atoms().iter().position(|&a| a == x).map(|i| i + 1)
    }

    pub fn search_input(&self) -> Result<SearchInput> {
        let rep = set_representation(self.lattice.poset())?;
        let embedding: Vec<AtomSet> = self.base_elements().iter().map(|&x| rep.element_sets[x]).collect();
        let embedded = SetFamily::new(rep.family.universe(), embedding.iter().copied())?;
        Ok(SearchInput { sp: rep.family, embedded, embedding, length: self.base.length() })
    }

    /// Inserted atoms whose removal keeps the form standard, ascending.
    pub fn removable(&self) -> Vec<usize> {
        let required = required_parents(&self.base);
        self.inserted()
            .into_iter()
            .filter(|&(_, p)| self.delta[&p] >= 2 || !required.contains(&p))
            .map(|(x, _)| x)
            .collect()
    }

    /// Removes the inserted atom with the highest index among the removable
    /// ones. Returns the smaller form and `{X − {r}: X ∈ 𝒯^Q_L}` with atom
    /// labels above `r` shifted down.
    pub fn remove_atom(&self) -> Result<(StandardForm, SetFamily)> {
        match self.removable().last() {
            Some(&r) => self.remove_specific(r),
            None => Err(Error::AtMinimum(self.atom_count())),
        }
    }

    pub fn remove_specific(&self, r: usize) -> Result<(StandardForm, SetFamily)> {
        if !self.removable().contains(&r) {
            return Err(Error::NotRemovable(r));
        }
        let label = self.label_of(r).ok_or(Error::NotRemovable(r))?;
        let mut delta = self.delta.clone();
        let p = self.parent(r).ok_or(Error::NotRemovable(r))?;
        *delta.get_mut(&p).expect("parent has a delta entry") -= 1;
        let smaller = StandardForm::new(&self.base, &delta)?;
        let family = self.embedded()?.remove_atom_compacted(label);
        Ok((smaller, family))
    }
}

/// Every standard form with at most `extra_budget` atoms beyond the minimal
/// one, one per multiset of insertion counts.
pub fn standard_forms(base: &FiniteLattice, extra_budget: usize) -> Result<Vec<StandardForm>> {
    if let Some((a, b, c)) = base.semimodularity_violation() {
        return Err(Error::NotSemimodular { a, b, c });
    }
    let required = required_parents(base);
    let h = h_set(base);
    let mut out = Vec::new();
    let mut extra = vec![0usize; h.len()];
    fn go(
        i: usize,
        left: usize,
        extra: &mut Vec<usize>,
        h: &[usize],
        required: &[usize],
        base: &FiniteLattice,
        out: &mut Vec<StandardForm>,
    ) -> Result<()> {
        if i == h.len() {
            let delta = h
                .iter()
                .zip(extra.iter())
                .map(|(&x, &e)| (x, e + usize::from(required.contains(&x))))
                .collect();
            out.push(StandardForm::new(base, &delta)?);
            return Ok(());
        }
        for e in 0..=left {
            extra[i] = e;
            go(i + 1, left - e, extra, h, required, base, out)?;
        }
        extra[i] = 0;
        Ok(())
    }
    go(0, extra_budget, &mut extra, &h, &required, base, &mut out)?;
    Ok(out)
}

/// `{W − {r}: W ∈ K, cl(W − {r}) = cl(W)}`, relabelled so the universe
/// shrinks by one.
pub fn reduce_geometric(k: &SetFamily, r: usize) -> Result<SetFamily> {
    if !k.to_lattice().map(|l| l.is_geometric()).unwrap_or(false) {
        return Err(Error::NotGeometric);
    }
    let atom = AtomSet::singleton(r);
    if r == 0 || r > k.universe() || !k.atoms().contains(&atom) {
        return Err(Error::ReductionFailed(format!("{r} is not an atom label of the family")));
    }
    let mut kept = Vec::new();
    for &w in k.sets() {
        let reduced = w.without(r);
        if k.closure(reduced)? == k.closure(w)? {
            kept.push(reduced.remove_and_compact(r));
        }
    }
    let h = SetFamily::new(k.universe() - 1, kept)?;
    if h.len() >= k.len() {
        return Err(Error::ReductionFailed(format!("size did not shrink ({} ≥ {})", h.len(), k.len())));
    }
    if h.atoms().len() + 1 != k.atoms().len() {
        return Err(Error::ReductionFailed("atom count did not drop by exactly one".into()));
    }
    if !h.to_lattice().map(|l| l.is_geometric()).unwrap_or(false) {
        return Err(Error::ReductionFailed("result is not geometric".into()));
    }
    Ok(h)
}
