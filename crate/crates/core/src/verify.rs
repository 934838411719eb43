//! Independent checks: embedding properties, an exhaustive smallest
//! extension search, a flat-based generator of all geometric extensions,
//! small-lattice enumeration, and the independent-set characterizations.

use std::collections::{BTreeSet, HashSet};
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::algo1::{IndependentFamily, SearchInput};
use crate::bitset::AtomSet;
use crate::canon::canonical_form;
use crate::error::{Error, Result};
use crate::extend::StandardForm;
use crate::family::SetFamily;
use crate::lattice::FiniteLattice;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub a: AtomSet,
    pub b: AtomSet,
    pub kind: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingReport {
    pub is_sublattice: bool,
    pub preserves_meets: bool,
    pub preserves_joins: bool,
    pub preserves_covers: bool,
    pub violations: Vec<Violation>,
}

impl EmbeddingReport {
    pub fn all_true(&self) -> bool {
        self.is_sublattice && self.preserves_meets && self.preserves_joins && self.preserves_covers
    }
}

/// Meets and joins of `sub` must agree with those of `sup`, and covers of
/// `sub` must stay covers in `sup`.
pub fn check_embedding(sub: &SetFamily, sup: &SetFamily) -> Result<EmbeddingReport> {
    if let Some(&x) = sub.sets().iter().find(|&&x| !sup.contains(x)) {
        return Err(Error::NotSubset(x));
    }
    let mut violations = Vec::new();
    let (mut meets, mut joins) = (true, true);
    let members = sub.sets();
    for (i, &a) in members.iter().enumerate() {
        for &b in &members[i + 1..] {
            let m_sub = sub.greatest_lower_bound(a & b);
            if m_sub.is_none() || m_sub != sup.greatest_lower_bound(a & b) {
                meets = false;
                violations.push(Violation { a, b, kind: "meet" });
            }
            let j_sub = sub.least_upper_bound(a | b).ok();
            if j_sub.is_none() || j_sub != sup.least_upper_bound(a | b).ok() {
                joins = false;
                violations.push(Violation { a, b, kind: "join" });
            }
        }
    }
    let mut covers = true;
    let sup_covers: HashSet<(AtomSet, AtomSet)> =
        sup.cover_pairs().into_iter().map(|(i, j)| (sup.sets()[i], sup.sets()[j])).collect();
    for (i, j) in sub.cover_pairs() {
        let (a, b) = (members[i], members[j]);
        if !sup_covers.contains(&(a, b)) {
            covers = false;
            violations.push(Violation { a, b, kind: "cover" });
        }
    }
    Ok(EmbeddingReport {
        is_sublattice: meets && joins,
        preserves_meets: meets,
        preserves_joins: joins,
        preserves_covers: covers,
        violations,
    })
}

/// Geometric, of length `length`, and containing `embedded` cover-preservingly.
pub fn is_geometric_extension(g: &SetFamily, embedded: &SetFamily, length: usize) -> Result<bool> {
    if !g.is_lattice_family() || g.length() != length {
        return Ok(false);
    }
    let lattice = g.to_lattice()?;
    if !lattice.is_geometric() {
        return Ok(false);
    }
    Ok(check_embedding(embedded, g)?.all_true())
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleResult {
    pub family: SetFamily,
    /// Number of sets added to `S_P`.
    pub depth: usize,
    pub added: Vec<AtomSet>,
    /// Combinations examined at each depth; every depth below `depth` was
    /// exhausted without success.
    pub tried: Vec<usize>,
}

/// Membership table over all subsets of a small universe.
struct Table {
    present: Vec<bool>,
}

impl Table {
    fn closed(&self, members: &[u64]) -> bool {
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                if !self.present[(a & b) as usize] {
                    return false;
                }
            }
        }
        true
    }
}

const MAX_ORACLE_UNIVERSE: usize = 16;

/// An accepted family and the candidate indices that produced it.
type Hit = (SetFamily, Vec<usize>);

/// Tries `S_P ∪ D` for `D` over all `d`-subsets of the candidate sets,
/// `d = 0, 1, ..`, and returns the first geometric extension found.
pub fn brute_force_best(l: &FiniteLattice, cap: usize) -> Result<OracleResult> {
    let input = StandardForm::minimal(l)?.search_input()?;
    brute_force_on(&input, cap)
}

pub fn brute_force_on(input: &SearchInput, cap: usize) -> Result<OracleResult> {
    let u = input.sp.universe();
    if u > MAX_ORACLE_UNIVERSE {
        return Err(Error::UniverseTooLarge(u));
    }
    let mut candidates: Vec<AtomSet> = AtomSet::full(u)
        .subsets()
        .filter(|s| (2..u).contains(&s.len()) && !input.sp.contains(*s))
        .collect();
    candidates.sort_unstable();
    let base: Vec<u64> = input.sp.sets().iter().map(|s| s.bits()).collect();
    let total = AtomicUsize::new(0);
    let mut tried = Vec::new();

    for d in 0..=candidates.len() {
        let count = AtomicUsize::new(0);
        let accept = |combo: &[usize]| -> Result<Option<SetFamily>> {
            count.fetch_add(1, Ordering::Relaxed);
            if total.fetch_add(1, Ordering::Relaxed) >= cap {
                return Err(Error::CapExceeded(cap));
            }
            let mut present = vec![false; 1 << u];
            let mut members = base.clone();
            for &b in &base {
                present[b as usize] = true;
            }
            for &i in combo {
                let b = candidates[i].bits();
                present[b as usize] = true;
                members.push(b);
            }
            if !(Table { present }).closed(&members) {
                return Ok(None);
            }
            let g = SetFamily::new(u, members.iter().map(|&b| AtomSet::from_bits(b)))?;
            Ok(is_geometric_extension(&g, &input.embedded, input.length)?.then_some(g))
        };
        let found = if d == 0 {
            accept(&[])?.map(|g| (g, Vec::new()))
        } else {
            let firsts: Vec<usize> = (0..candidates.len()).collect();
            let hits: Vec<Result<Option<Hit>>> = firsts
                .par_iter()
                .map(|&first| first_combination(first, d, candidates.len(), &accept))
                .collect();
            let mut found = None;
            for h in hits {
                if let Some(hit) = h? {
                    found = Some(hit);
                    break;
                }
            }
            found
        };
        tried.push(count.into_inner());
        if let Some((family, combo)) = found {
            let added = combo.iter().map(|&i| candidates[i]).collect();
            return Ok(OracleResult { family, depth: d, added, tried });
        }
    }
    Err(Error::InvariantViolated("no geometric extension exists on the minimal universe".into()))
}

/// Lexicographically first accepted `d`-combination whose smallest index is
/// `first`.
fn first_combination<F>(first: usize, d: usize, n: usize, accept: &F) -> Result<Option<Hit>>
where
    F: Fn(&[usize]) -> Result<Option<SetFamily>>,
{
    fn go<F>(combo: &mut Vec<usize>, d: usize, n: usize, accept: &F) -> Result<Option<Hit>>
    where
        F: Fn(&[usize]) -> Result<Option<SetFamily>>,
    {
        if combo.len() == d {
            return Ok(accept(combo)?.map(|g| (g, combo.clone())));
        }
        let start = combo.last().map_or(0, |&l| l + 1);
        let need = d - combo.len();
        for i in start..=n.saturating_sub(need) {
            if i >= n {
                break;
            }
            combo.push(i);
            let hit = go(combo, d, n, accept)?;
            combo.pop();
            if hit.is_some() {
                return Ok(hit);
            }
        }
        Ok(None)
    }
    if first + d > n {
        return Ok(None);
    }
    go(&mut vec![first], d, n, accept)
}

/// Every set partition of the labels in `rest`.
fn partitions(rest: AtomSet) -> Vec<Vec<AtomSet>> {
    let labels: Vec<usize> = rest.iter().collect();
    let mut out = Vec::new();
    fn go(i: usize, labels: &[usize], blocks: &mut Vec<AtomSet>, out: &mut Vec<Vec<AtomSet>>) {
        if i == labels.len() {
            out.push(blocks.clone());
            return;
        }
        let l = labels[i];
        for b in 0..blocks.len() {
            blocks[b].insert(l);
            go(i + 1, labels, blocks, out);
            blocks[b].remove(l);
        }
        blocks.push(AtomSet::singleton(l));
        go(i + 1, labels, blocks, out);
        blocks.pop();
    }
    go(0, &labels, &mut Vec::new(), &mut out);
    out
}

fn respects(z_minus_x: AtomSet, blocks: &[AtomSet]) -> bool {
    blocks.iter().all(|&b| b.is_subset(z_minus_x) || b.is_disjoint(z_minus_x))
}

/// All geometric families over the universe of `S_P` that contain `S_P`,
/// have the search length, and contain `𝒯^P_L` cover-preservingly.
///
/// Flats are processed in increasing `(cardinality, value)` order. The
/// flats covering a flat `X` partition the remaining atoms, so at each `X`
/// the generator picks a partition compatible with every flat already
/// present and adds `X ∪ B` for each block `B`.
pub fn geometric_extensions(input: &SearchInput, cap: usize) -> Result<Vec<SetFamily>> {
    struct Gen<'a> {
        input: &'a SearchInput,
        full: AtomSet,
        nodes: usize,
        cap: usize,
        out: BTreeSet<Vec<u64>>,
    }

    impl Gen<'_> {
        fn go(&mut self, fam: SetFamily, last: Option<AtomSet>, done: &mut Vec<(AtomSet, Vec<AtomSet>)>) -> Result<()> {
            self.nodes += 1;
            if self.nodes > self.cap {
                return Err(Error::CapExceeded(self.cap));
            }
            let next = fam.sets().iter().copied().find(|&s| last.is_none_or(|l| s > l));
            let Some(x) = next else {
                if is_geometric_extension(&fam, &self.input.embedded, self.input.length)? {
                    self.out.insert(fam.sets().iter().map(|s| s.bits()).collect());
                }
                return Ok(());
            };
            'partition: for blocks in partitions(self.full - x) {
                for &z in fam.sets() {
                    if x.is_proper_subset(z) && !respects(z - x, &blocks) {
                        continue 'partition;
                    }
                }
                let fresh: Vec<AtomSet> = blocks.iter().map(|&b| x | b).filter(|n| !fam.contains(*n)).collect();
                for &n in &fresh {
                    for (y, y_blocks) in done.iter() {
                        if y.is_proper_subset(n) {
                            if !respects(n - *y, y_blocks) {
                                continue 'partition;
                            }
                        } else if !fam.contains(n & *y) {
                            continue 'partition;
                        }
                    }
                }
                let mut next_fam = fam.clone();
                for &n in &fresh {
                    next_fam = next_fam.with(n);
                }
                done.push((x, blocks));
                let r = self.go(next_fam, Some(x), done);
                done.pop();
                r?;
            }
            Ok(())
        }
    }

    let u = input.sp.universe();
    let mut g = Gen { input, full: AtomSet::full(u), nodes: 0, cap, out: BTreeSet::new() };
    g.go(input.sp.clone(), None, &mut Vec::new())?;
    g.out
        .into_iter()
        .map(|bits| SetFamily::new(u, bits.into_iter().map(AtomSet::from_bits)))
        .collect()
}

/// All lattices with at most `max_n` elements, up to isomorphism, in
/// canonical labelling.
pub fn enumerate_lattices(max_n: usize) -> Vec<FiniteLattice> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let mut forms = BTreeSet::new();
        if n <= 2 {
            let covers = if n == 2 { vec![(0, 1)] } else { vec![] };
            forms.insert(canonical_form(FiniteLattice::new(n, &covers).expect("chain").poset()));
        } else {
            let k = n - 2;
            let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
            for mask in 0u64..(1u64 << pairs.len()) {
                let mut rel = vec![false; k * k];
                for (b, &(i, j)) in pairs.iter().enumerate() {
                    rel[i * k + j] = mask >> b & 1 == 1;
                }
                let transitive = (0..k).all(|i| {
                    (i + 1..k).all(|j| !rel[i * k + j] || (j + 1..k).all(|l| !rel[j * k + l] || rel[i * k + l]))
                });
                if !transitive {
                    continue;
                }
                // bottom 0, inner elements 1..=k, top k+1
                let mut covers = Vec::new();
                for j in 0..k {
                    if !(0..j).any(|i| rel[i * k + j]) {
                        covers.push((0, j + 1));
                    }
                    if !(j + 1..k).any(|l| rel[j * k + l]) {
                        covers.push((j + 1, k + 1));
                    }
                    for i in 0..j {
                        if rel[i * k + j] && !(i + 1..j).any(|l| rel[i * k + l] && rel[l * k + j]) {
                            covers.push((i + 1, j + 1));
                        }
                    }
                }
                if let Ok(l) = FiniteLattice::new(n, &covers) {
                    forms.insert(canonical_form(l.poset()));
                }
            }
        }
        out.extend(forms.into_iter().map(|f| FiniteLattice::new(f.n, &f.covers).expect("canonical lattice")));
    }
    out
}

pub fn enumerate_semimodular(max_n: usize) -> Vec<FiniteLattice> {
    enumerate_lattices(max_n).into_iter().filter(|l| l.is_semimodular()).collect()
}

/// Each atom lies outside the closure of the others.
fn independent(g: &SetFamily, atoms: &[AtomSet], s: AtomSet) -> Result<bool> {
    for a in s.iter() {
        let others = s.without(a);
        if g.closure_with_atoms(atoms, others)?.contains(a) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// For every member `X`, compares `𝔍(X)`, the maximal independent atom sets
/// below `X`, and the independent sets whose closure is `X`. Returns the
/// first `(X, σ)` on which the three disagree.
pub fn independence_violation(g: &SetFamily) -> Result<Option<(AtomSet, AtomSet)>> {
    if !g.has_all_singletons() || g.atoms().len() != g.universe() {
        return Err(Error::MalformedFamily("atoms must be the singletons of the universe".into()));
    }
    let ind = IndependentFamily::of(g)?;
    let atoms = g.atoms();
    for (x, sigmas) in ind.iter() {
        let by_recursion: BTreeSet<AtomSet> = sigmas.iter().copied().collect();
        let mut indep = Vec::new();
        for s in x.subsets() {
            if independent(g, &atoms, s)? {
                indep.push(s);
            }
        }
        let indep_set: HashSet<AtomSet> = indep.iter().copied().collect();
        let maximal: BTreeSet<AtomSet> = indep
            .iter()
            .copied()
            .filter(|&s| (x - s).iter().all(|b| !indep_set.contains(&(s | AtomSet::singleton(b)))))
            .collect();
        let mut spanning = BTreeSet::new();
        for &s in &indep {
            if g.closure_with_atoms(&atoms, s)? == x {
                spanning.insert(s);
            }
        }
        if by_recursion != maximal || maximal != spanning {
            let witness = by_recursion
                .symmetric_difference(&maximal)
                .chain(maximal.symmetric_difference(&spanning))
                .next()
                .copied()
                .unwrap_or(AtomSet::EMPTY);
            return Ok(Some((x, witness)));
        }
    }
    Ok(None)
}

pub fn check_independent_sets(g: &SetFamily) -> Result<bool> {
    Ok(independence_violation(g)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(labels: &[usize]) -> AtomSet {
        AtomSet::from_labels(labels.iter().copied())
    }

    #[test]
    fn partition_counts() {
        assert_eq!(partitions(AtomSet::EMPTY).len(), 1);
        assert_eq!(partitions(s(&[1, 2, 3])).len(), 5);
        assert_eq!(partitions(AtomSet::full(5)).len(), 52);
    }

    #[test]
    fn skipped_cover_detected() {
        let b3 = SetFamily::new(3, AtomSet::full(3).subsets()).unwrap();
        let sub = SetFamily::new(3, [s(&[]), s(&[1]), s(&[1, 2, 3])]).unwrap();
        let r = check_embedding(&sub, &b3).unwrap();
        assert!(r.is_sublattice && r.preserves_meets && r.preserves_joins);
        assert!(!r.preserves_covers);
        assert_eq!(r.violations, vec![Violation { a: s(&[1]), b: s(&[1, 2, 3]), kind: "cover" }]);
    }

    #[test]
    fn not_subset() {
        let b2 = SetFamily::new(2, AtomSet::full(2).subsets()).unwrap();
        let other = SetFamily::new(3, [s(&[]), s(&[3])]).unwrap();
        assert!(matches!(check_embedding(&other, &b2), Err(Error::NotSubset(_))));
    }

    #[test]
    fn small_lattice_counts() {
        let counts: Vec<usize> = (1..=7).map(|n| enumerate_lattices(n).len()).collect();
        // cumulative counts of unlabelled lattices with 1..7 elements
        assert_eq!(counts, vec![1, 2, 3, 5, 10, 25, 78]);
    }

    #[test]
    fn boolean_is_its_own_oracle_answer() {
        let b2 = FiniteLattice::new(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let r = brute_force_best(&b2, 1000).unwrap();
        assert_eq!(r.depth, 0);
        assert_eq!(r.family.len(), 4);
    }

    #[test]
    fn independent_sets_on_m3() {
        let m3 = SetFamily::new(3, [s(&[]), s(&[1]), s(&[2]), s(&[3]), s(&[1, 2, 3])]).unwrap();
        assert!(check_independent_sets(&m3).unwrap());
    }
}
