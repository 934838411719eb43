//! Inclusion-ordered families of atom subsets.
//!
//! A [`SetFamily`] stores distinct subsets of `{1, .., universe}` sorted by
//! `(cardinality, value)`, which is also a linear extension of inclusion.

use std::collections::HashMap;

use serde::Serialize;

use crate::bitset::{AtomSet, MAX_ATOMS};
use crate::error::{Error, Result};
use crate::lattice::{FiniteLattice, FinitePoset};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SetFamily {
    universe: usize,
    sets: Vec<AtomSet>,
}

impl SetFamily {
    pub fn new<I: IntoIterator<Item = AtomSet>>(universe: usize, sets: I) -> Result<SetFamily> {
        if universe > MAX_ATOMS {
            return Err(Error::UniverseTooLarge(universe));
        }
        let full = AtomSet::full(universe);
        let mut sets: Vec<AtomSet> = sets.into_iter().collect();
        if let Some(&bad) = sets.iter().find(|s| !s.is_subset(full)) {
            return Err(Error::MalformedFamily(format!(
                "set {bad} is not inside the universe {{1..{universe}}}"
            )));
        }
        sets.sort_unstable();
        sets.dedup();
        Ok(SetFamily { universe, sets })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn sets(&self) -> &[AtomSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn index_of(&self, set: AtomSet) -> Option<usize> {
        self.sets.binary_search(&set).ok()
    }

    pub fn contains(&self, set: AtomSet) -> bool {
        self.index_of(set).is_some()
    }

    /// A new family with `set` added.
    pub fn with(&self, set: AtomSet) -> SetFamily {
        let mut sets = self.sets.clone();
        if let Err(pos) = sets.binary_search(&set) {
            sets.insert(pos, set);
        }
        SetFamily { universe: self.universe, sets }
    }

    /// Union of all members.
    pub fn support(&self) -> AtomSet {
        self.sets.iter().fold(AtomSet::EMPTY, |acc, &s| acc | s)
    }

    /// The unique maximal member, if there is one.
    pub fn top(&self) -> Option<AtomSet> {
        let support = self.support();
        self.contains(support).then_some(support)
    }

    pub fn is_subfamily_of(&self, other: &SetFamily) -> bool {
        self.sets.iter().all(|&s| other.contains(s))
    }

    /// Members covering `∅`, i.e. the minimal non-empty members.
    pub fn atoms(&self) -> Vec<AtomSet> {
        let nonempty: Vec<AtomSet> = self.sets.iter().copied().filter(|s| !s.is_empty()).collect();
        nonempty
            .iter()
            .copied()
            .filter(|&s| !nonempty.iter().any(|&t| t.is_proper_subset(s)))
            .collect()
    }

    /// Atoms of the family contained in `x`.
    pub fn atoms_in(&self, x: AtomSet) -> Vec<AtomSet> {
        self.atoms().into_iter().filter(|a| a.is_subset(x)).collect()
    }

    /// Every singleton `{i}`, `1 ≤ i ≤ universe`, is a member.
    pub fn has_all_singletons(&self) -> bool {
        (1..=self.universe).all(|i| self.contains(AtomSet::singleton(i)))
    }

    pub fn intersection_violation(&self) -> Option<(AtomSet, AtomSet)> {
        for (i, &a) in self.sets.iter().enumerate() {
            for &b in &self.sets[i + 1..] {
                if !self.contains(a & b) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn is_intersection_closed(&self) -> bool {
        self.intersection_violation().is_none()
    }

    /// Families with `∅`, a top, and closure under intersection are lattices
    /// with meet `∩`.
    pub fn is_lattice_family(&self) -> bool {
        self.contains(AtomSet::EMPTY) && self.top().is_some() && self.is_intersection_closed()
    }

    /// Longest-chain heights, indexed like [`SetFamily::sets`]. Heights are
    /// measured from the minimal members, which is `∅` for every family the
    /// algorithms build.
    pub fn heights(&self) -> Vec<usize> {
        let mut h = vec![0usize; self.sets.len()];
        for i in 0..self.sets.len() {
            let x = self.sets[i];
            h[i] = (0..i)
                .filter(|&j| self.sets[j].is_proper_subset(x))
                .map(|j| h[j] + 1)
                .max()
                .unwrap_or(0);
        }
        h
    }

    pub fn height_map(&self) -> HashMap<AtomSet, usize> {
        self.sets.iter().copied().zip(self.heights()).collect()
    }

    pub fn length(&self) -> usize {
        self.heights().into_iter().max().unwrap_or(0)
    }

    /// Cover pairs `(i, j)` of member indices with `sets[i] ≺ sets[j]`.
    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.sets.len();
        let mut pairs = Vec::new();
        for j in 0..n {
            let y = self.sets[j];
            let below: Vec<usize> = (0..j).filter(|&i| self.sets[i].is_proper_subset(y)).collect();
            for &i in &below {
                let x = self.sets[i];
                if !below.iter().any(|&k| k != i && x.is_proper_subset(self.sets[k])) {
                    pairs.push((i, j));
                }
            }
        }
        pairs
    }

    /// Lower covers of each member, as member indices.
    pub fn lower_covers(&self) -> Vec<Vec<usize>> {
        let mut lower = vec![Vec::new(); self.sets.len()];
        for (i, j) in self.cover_pairs() {
            lower[j].push(i);
        }
        lower
    }

    /// The inclusion order as a bounded poset on member indices.
    pub fn to_poset(&self) -> Result<FinitePoset> {
        FinitePoset::new(self.sets.len(), &self.cover_pairs())
    }

    pub fn to_lattice(&self) -> Result<FiniteLattice> {
        FiniteLattice::new(self.sets.len(), &self.cover_pairs())
    }

    /// Join of the family's atoms contained in `x`: the least member that
    /// contains every such atom. If `x` is a member the result is `x`.
    pub fn closure(&self, x: AtomSet) -> Result<AtomSet> {
        self.closure_with_atoms(&self.atoms(), x)
    }

    /// [`SetFamily::closure`] with the atom list supplied by the caller.
    pub fn closure_with_atoms(&self, atoms: &[AtomSet], x: AtomSet) -> Result<AtomSet> {
        let needed = atoms.iter().filter(|a| a.is_subset(x)).fold(AtomSet::EMPTY, |acc, &a| acc | a);
        self.least_upper_bound(needed)
    }

    /// Least member containing `set`, if it is unique.
    pub fn least_upper_bound(&self, set: AtomSet) -> Result<AtomSet> {
        let mut meet: Option<AtomSet> = None;
        for &s in &self.sets {
            if set.is_subset(s) {
                meet = Some(meet.map_or(s, |m| m & s));
            }
        }
        match meet {
            Some(m) if self.contains(m) => Ok(m),
            _ => Err(Error::JoinUndefined(set)),
        }
    }

    /// Greatest member contained in `set`, if it is unique.
    pub fn greatest_lower_bound(&self, set: AtomSet) -> Option<AtomSet> {
        let below: Vec<AtomSet> = self.sets.iter().copied().filter(|s| s.is_subset(set)).collect();
        let join = below.iter().fold(AtomSet::EMPTY, |acc, &s| acc | s);
        below.contains(&join).then_some(join)
    }

    /// Same members relabelled by `perm` (`perm[i - 1]` is the image of `i`).
    pub fn permuted(&self, perm: &[usize]) -> SetFamily {
        let mut sets: Vec<AtomSet> = self.sets.iter().map(|s| s.permute(perm)).collect();
        sets.sort_unstable();
        SetFamily { universe: self.universe, sets }
    }

    /// Drops `label` from every member and shifts larger labels down.
    pub fn remove_atom_compacted(&self, label: usize) -> SetFamily {
        let mut sets: Vec<AtomSet> = self.sets.iter().map(|s| s.remove_and_compact(label)).collect();
        sets.sort_unstable();
        sets.dedup();
        SetFamily { universe: self.universe.saturating_sub(1), sets }
    }

    fn encoding(&self) -> Vec<u64> {
        self.sets.iter().map(|s| s.bits()).collect()
    }
}

/// `{A(x) : x ∈ P}` together with the element map `x ↦ A(x)`.
#[derive(Clone, Debug)]
pub struct Representation {
    pub family: SetFamily,
    /// `element_sets[x]` is `A(x)`.
    pub element_sets: Vec<AtomSet>,
    /// Atoms of `P` in label order: `atoms[i]` carries label `i + 1`.
    pub atoms: Vec<usize>,
}

impl Representation {
    pub fn label_of(&self, atom: usize) -> Option<usize> {
        self.atoms.iter().position(|&a| a == atom).map(|i| i + 1)
    }
}

fn atom_sets(p: &FinitePoset) -> Result<(Vec<usize>, Vec<AtomSet>)> {
    let atoms = p.atoms();
    if atoms.len() > MAX_ATOMS {
        return Err(Error::UniverseTooLarge(atoms.len()));
    }
    let sets = p
        .elements()
        .map(|x| {
            atoms
                .iter()
                .enumerate()
                .filter(|&(_, &a)| p.leq(a, x))
                .map(|(i, _)| i + 1)
                .collect()
        })
        .collect();
    Ok((atoms, sets))
}

/// Atoms get labels `1..` in ascending element order.
pub fn set_representation(p: &FinitePoset) -> Result<Representation> {
    if let Some((x, y)) = p.atomistic_violation() {
        return Err(Error::NotAtomistic { x, y });
    }
    let (atoms, element_sets) = atom_sets(p)?;
    let family = SetFamily::new(atoms.len(), element_sets.iter().copied())?;
    debug_assert_eq!(family.len(), p.n());
    Ok(Representation { family, element_sets, atoms })
}

/// `{A_P(x) : x ∈ subset}` for a sublattice `subset` of `P`.
pub fn embedded_family(p: &FiniteLattice, subset: &[usize]) -> Result<SetFamily> {
    if let Some(&index) = subset.iter().find(|&&x| x >= p.n()) {
        return Err(Error::IndexOutOfRange { index, n: p.n() });
    }
    if let Some((a, b, op)) = p.sublattice_violation(subset) {
        return Err(Error::NotSublattice { a, b, op });
    }
    let (atoms, sets) = atom_sets(p)?;
    SetFamily::new(atoms.len(), subset.iter().map(|&x| sets[x]))
}

/// All permutations of `1..=u`, as image vectors.
fn permutations(u: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i + 1);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(u), &mut vec![false; u], &mut out);
    out
}

/// Atom relabellings that map a fixed family onto itself.
#[derive(Clone, Debug)]
pub struct Stabilizer {
    universe: usize,
    perms: Vec<Vec<usize>>,
}

/// Enumerating all `u!` relabellings is only sensible for small universes.
pub const MAX_STABILIZER_UNIVERSE: usize = 9;

impl Stabilizer {
    pub fn of(fixed: &SetFamily) -> Result<Stabilizer> {
        let u = fixed.universe();
        if u > MAX_STABILIZER_UNIVERSE {
            return Err(Error::UniverseTooLarge(u));
        }
        let perms = permutations(u).into_iter().filter(|p| fixed.permuted(p) == *fixed).collect();
        Ok(Stabilizer { universe: u, perms })
    }

    pub fn order(&self) -> usize {
        self.perms.len()
    }

    /// Lexicographically least image of `family` under the group.
    pub fn canonical(&self, family: &SetFamily) -> SetFamily {
        debug_assert_eq!(family.universe(), self.universe);
        self.perms
            .iter()
            .map(|p| family.permuted(p))
            .min_by(|a, b| a.encoding().cmp(&b.encoding()))
            .unwrap_or_else(|| family.clone())
    }
}

/// Is there an atom relabelling taking `a` to `b` and `a_fixed` to `b_fixed`?
pub fn families_isomorphic(
    a: &SetFamily,
    a_fixed: &SetFamily,
    b: &SetFamily,
    b_fixed: &SetFamily,
) -> Result<bool> {
    if a.universe() != b.universe() || a.len() != b.len() || a_fixed.len() != b_fixed.len() {
        return Ok(false);
    }
    if a.universe() > MAX_STABILIZER_UNIVERSE {
        return Err(Error::UniverseTooLarge(a.universe()));
    }
    Ok(permutations(a.universe())
        .iter()
        .any(|p| a.permuted(p) == *b && a_fixed.permuted(p) == *b_fixed))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn fam(universe: usize, sets: &[&[usize]]) -> SetFamily {
        SetFamily::new(universe, sets.iter().map(|s| AtomSet::from_labels(s.iter().copied()))).unwrap()
    }

    fn s(labels: &[usize]) -> AtomSet {
        AtomSet::from_labels(labels.iter().copied())
    }

    fn s10() -> SetFamily {
        fam(
            5,
            &[&[], &[1], &[2], &[3], &[4], &[5], &[1, 3], &[2, 3], &[3, 4], &[3, 5], &[1, 2, 3, 4, 5]],
        )
    }

    #[test]
    fn closure_examples() {
        let sp = s10();
        assert_eq!(sp.closure(s(&[1, 2])).unwrap(), s(&[1, 2, 3, 4, 5]));
        assert_eq!(sp.closure(AtomSet::EMPTY).unwrap(), AtomSet::EMPTY);
        for &m in sp.sets() {
            assert_eq!(sp.closure(m).unwrap(), m);
        }
        let fam14 = sp.with(s(&[1, 2, 4])).with(s(&[1, 5])).with(s(&[2, 5])).with(s(&[4, 5]));
        assert_eq!(fam14.closure(s(&[1, 2])).unwrap(), s(&[1, 2, 4]));
    }

    #[test]
    fn closure_rejects_ambiguous_join() {
        // {1} and {2} have two minimal upper bounds
        let g = fam(4, &[&[], &[1], &[2], &[1, 2, 3], &[1, 2, 4], &[1, 2, 3, 4]]);
        assert!(matches!(g.closure(s(&[1, 2])), Err(Error::JoinUndefined(_))));
    }

    #[test]
    fn heights_and_atoms() {
        let sp = s10();
        assert_eq!(sp.length(), 3);
        assert_eq!(sp.atoms().len(), 5);
        assert!(sp.has_all_singletons());
        assert!(sp.is_lattice_family());
        let h = sp.height_map();
        assert_eq!(h[&s(&[1, 3])], 2);
        assert_eq!(h[&s(&[1, 2, 3, 4, 5])], 3);
    }

    #[test]
    fn b2_representation() {
        let b2 = FiniteLattice::new(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let rep = set_representation(b2.poset()).unwrap();
        assert_eq!(rep.family, fam(2, &[&[], &[1], &[2], &[1, 2]]));
        assert_eq!(rep.element_sets[3], s(&[1, 2]));
    }

    #[test]
    fn non_atomistic_rejected() {
        let l7 = FiniteLattice::new(
            7,
            &[(0, 1), (1, 2), (1, 3), (1, 4), (1, 5), (2, 6), (3, 6), (4, 6), (5, 6)],
        )
        .unwrap();
        assert!(matches!(set_representation(l7.poset()), Err(Error::NotAtomistic { .. })));
    }

    #[test]
    fn stabilizer_of_t10() {
        let t = fam(5, &[&[], &[3], &[1, 3], &[2, 3], &[3, 4], &[3, 5], &[1, 2, 3, 4, 5]]);
        // any permutation of {1, 2, 4, 5} fixing 3
        assert_eq!(Stabilizer::of(&t).unwrap().order(), 24);
    }

    #[test]
    fn compaction() {
        let f = fam(3, &[&[], &[1], &[3], &[1, 3]]);
        assert_eq!(f.remove_atom_compacted(2), fam(2, &[&[], &[1], &[2], &[1, 2]]));
    }
}
