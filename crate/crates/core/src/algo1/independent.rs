use std::collections::BTreeSet;

use crate::bitset::AtomSet;
use crate::error::{Error, Result};
use crate::family::SetFamily;

/// `x ↦ 𝔍(x)` on a set family.
///
/// Each independent set is stored as the union of its atoms. Atoms of an
/// atomistic family are pairwise disjoint, so the union determines the set.
#[derive(Clone, Debug)]
pub struct IndependentFamily {
    family: SetFamily,
    sets: Vec<Vec<AtomSet>>,
    heights: Vec<usize>,
}

impl IndependentFamily {
    pub fn of(family: &SetFamily) -> Result<IndependentFamily> {
        let atoms = family.atoms();
        for (i, &a) in atoms.iter().enumerate() {
            if let Some(&b) = atoms[i + 1..].iter().find(|&&b| !a.is_disjoint(b)) {
                return Err(Error::MalformedFamily(format!("atoms {a} and {b} overlap")));
            }
        }
        let heights = family.heights();
        let lower = family.lower_covers();
        let members = family.sets();
        let mut sets: Vec<Vec<AtomSet>> = vec![Vec::new(); members.len()];
        for (x, &xs) in members.iter().enumerate() {
            if heights[x] == 0 {
                sets[x] = vec![AtomSet::EMPTY];
                continue;
            }
            let mut found = BTreeSet::new();
            for &y in lower[x].iter().filter(|&&y| heights[y] + 1 == heights[x]) {
                let fresh: Vec<AtomSet> =
                    atoms.iter().copied().filter(|a| a.is_subset(xs) && !a.is_subset(members[y])).collect();
                for &sigma in &sets[y] {
                    for &a in &fresh {
                        found.insert(sigma | a);
                    }
                }
            }
            if found.is_empty() {
                return Err(Error::MalformedFamily(format!("member {xs} has no independent set")));
            }
            sets[x] = found.into_iter().collect();
        }
        Ok(IndependentFamily { family: family.clone(), sets, heights })
    }

    pub fn family(&self) -> &SetFamily {
        &self.family
    }

    pub fn get(&self, x: AtomSet) -> Option<&[AtomSet]> {
        self.family.index_of(x).map(|i| self.sets[i].as_slice())
    }

    pub fn height(&self, x: AtomSet) -> Option<usize> {
        self.family.index_of(x).map(|i| self.heights[i])
    }

    /// `(member, 𝔍(member))` in family order.
    pub fn iter(&self) -> impl Iterator<Item = (AtomSet, &[AtomSet])> {
        self.family.sets().iter().copied().zip(self.sets.iter().map(Vec::as_slice))
    }
}

/// Members and independent sets of each height.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Levels {
    /// `varphi[i]`: members of height `i`.
    pub varphi: Vec<Vec<AtomSet>>,
    /// `phi[i]`: independent sets of members of height `i`, as unions.
    pub phi: Vec<Vec<AtomSet>>,
}

impl Levels {
    pub fn of(family: &SetFamily) -> Result<Levels> {
        Ok(Levels::from_independent(&IndependentFamily::of(family)?))
    }

    pub fn from_independent(ind: &IndependentFamily) -> Levels {
        let top = ind.heights.iter().copied().max().unwrap_or(0);
        let mut varphi = vec![Vec::new(); top + 1];
        let mut phi: Vec<BTreeSet<AtomSet>> = vec![BTreeSet::new(); top + 1];
        for (i, (x, sigmas)) in ind.iter().enumerate() {
            let h = ind.heights[i];
            varphi[h].push(x);
            phi[h].extend(sigmas.iter().copied());
        }
        Levels { varphi, phi: phi.into_iter().map(|s| s.into_iter().collect()).collect() }
    }

    pub fn varphi(&self, i: usize) -> &[AtomSet] {
        self.varphi.get(i).map_or(&[], Vec::as_slice)
    }

    pub fn phi(&self, i: usize) -> &[AtomSet] {
        self.phi.get(i).map_or(&[], Vec::as_slice)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(labels: &[usize]) -> AtomSet {
        AtomSet::from_labels(labels.iter().copied())
    }

    #[test]
    fn m3_top() {
        let m3 = SetFamily::new(3, [s(&[]), s(&[1]), s(&[2]), s(&[3]), s(&[1, 2, 3])]).unwrap();
        let ind = IndependentFamily::of(&m3).unwrap();
        assert_eq!(ind.get(s(&[1, 2, 3])).unwrap(), &[s(&[1, 2]), s(&[1, 3]), s(&[2, 3])]);
        assert_eq!(ind.get(s(&[2])).unwrap(), &[s(&[2])]);
        assert_eq!(ind.get(AtomSet::EMPTY).unwrap(), &[AtomSet::EMPTY]);
    }

    #[test]
    fn levels_of_boolean() {
        let b2 = SetFamily::new(2, AtomSet::full(2).subsets()).unwrap();
        let lv = Levels::of(&b2).unwrap();
        assert_eq!(lv.varphi(0), &[AtomSet::EMPTY]);
        assert_eq!(lv.varphi(1).len(), 2);
        assert_eq!(lv.phi(2), &[s(&[1, 2])]);
        assert!(lv.varphi(3).is_empty());
    }
}
