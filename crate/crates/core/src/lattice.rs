//! Finite posets and lattices given by their cover relation.
//!
//! Elements are dense indices `0..n`. Caller indices are kept as given; the
//! bottom and top are recorded rather than renumbered.

use crate::error::{Error, Result};

/// Validated order structure shared by posets and lattices.
#[derive(Clone, Debug)]
struct Order {
    n: usize,
    covers: Vec<(usize, usize)>,
    lower: Vec<Vec<usize>>,
    upper: Vec<Vec<usize>>,
    leq: Vec<bool>,
    heights: Vec<usize>,
}

impl Order {
    fn from_covers(n: usize, covers: &[(usize, usize)]) -> Result<Order> {
        let mut sorted = covers.to_vec();
        for &(a, b) in &sorted {
            for index in [a, b] {
                if index >= n {
                    return Err(Error::IndexOutOfRange { index, n });
                }
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
        }
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateCover(w[0].0, w[0].1));
        }

        let mut lower = vec![Vec::new(); n];
        let mut upper = vec![Vec::new(); n];
        for &(a, b) in &sorted {
            upper[a].push(b);
            lower[b].push(a);
        }

        // Kahn's algorithm; leftover elements sit on a cycle.
        let mut indeg: Vec<usize> = lower.iter().map(Vec::len).collect();
        let mut queue: Vec<usize> = (0..n).filter(|&x| indeg[x] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(x) = queue.pop() {
            topo.push(x);
            for &y in &upper[x] {
                indeg[y] -= 1;
                if indeg[y] == 0 {
                    queue.push(y);
                }
            }
        }
        if topo.len() < n {
            let stuck = (0..n).find(|&x| indeg[x] > 0).unwrap_or(0);
            return Err(Error::Cycle(stuck));
        }

        let mut leq = vec![false; n * n];
        for &x in topo.iter().rev() {
            leq[x * n + x] = true;
            for &y in &upper[x] {
                for z in 0..n {
                    if leq[y * n + z] {
                        leq[x * n + z] = true;
                    }
                }
            }
        }

        for &(a, b) in &sorted {
            if upper[a].iter().any(|&c| c != b && leq[c * n + b]) {
                return Err(Error::RedundantEdge { from: a, to: b });
            }
        }

        let mut heights = vec![0; n];
        for &x in &topo {
            heights[x] = lower[x].iter().map(|&y| heights[y] + 1).max().unwrap_or(0);
        }

        Ok(Order { n, covers: sorted, lower, upper, leq, heights })
    }

    fn minimal(&self) -> Vec<usize> {
        (0..self.n).filter(|&x| self.lower[x].is_empty()).collect()
    }

    fn maximal(&self) -> Vec<usize> {
        (0..self.n).filter(|&x| self.upper[x].is_empty()).collect()
    }
}

/// Length data: `heights[x]` is the length of `[0, x]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightProfile {
    pub heights: Vec<usize>,
    pub length: usize,
}

/// A finite poset with a least and a greatest element.
#[derive(Clone, Debug)]
pub struct FinitePoset {
    order: Order,
    bottom: usize,
    top: usize,
}

impl FinitePoset {
    pub fn new(n: usize, covers: &[(usize, usize)]) -> Result<FinitePoset> {
        let order = Order::from_covers(n, covers)?;
        let (minimal, maximal) = (order.minimal(), order.maximal());
        if minimal.len() != 1 || maximal.len() != 1 {
            return Err(Error::NotBounded { minimal, maximal });
        }
        Ok(FinitePoset { bottom: minimal[0], top: maximal[0], order })
    }

    pub fn n(&self) -> usize {
        self.order.n
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.order.covers
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.order.leq[a * self.order.n + b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn is_cover(&self, a: usize, b: usize) -> bool {
        self.order.upper[a].contains(&b)
    }

    pub fn parallel(&self, a: usize, b: usize) -> bool {
        !self.leq(a, b) && !self.leq(b, a)
    }

    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.order.lower[x]
    }

    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.order.upper[x]
    }

    pub fn height(&self, x: usize) -> usize {
        self.order.heights[x]
    }

    /// Longest-chain heights; no gradedness is assumed.
    pub fn height_profile(&self) -> HeightProfile {
        HeightProfile { heights: self.order.heights.clone(), length: self.length() }
    }

    pub fn length(&self) -> usize {
        self.order.heights[self.top]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order.n
    }

    pub fn atoms(&self) -> Vec<usize> {
        // upper-cover lists are built from the sorted cover list, so ascending
        self.order.upper[self.bottom].clone()
    }

    /// Atoms below `x`, ascending.
    pub fn atoms_below(&self, x: usize) -> Vec<usize> {
        self.atoms().into_iter().filter(|&a| self.leq(a, x)).collect()
    }

    /// Non-bottom elements with exactly one lower cover.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        self.elements()
            .filter(|&x| x != self.bottom && self.order.lower[x].len() == 1)
            .collect()
    }

    /// The two atom-set conditions: `x < y` forces a strictly larger atom
    /// set, and incomparable elements have incomparable atom sets. Returns
    /// the first offending pair.
    pub fn atomistic_violation(&self) -> Option<(usize, usize)> {
        let sets: Vec<Vec<usize>> = self.elements().map(|x| self.atoms_below(x)).collect();
        let subset = |a: &[usize], b: &[usize]| a.iter().all(|x| b.contains(x));
        for x in self.elements() {
            for y in self.elements() {
                if x == y {
                    continue;
                }
                if self.lt(x, y) {
                    if sets[x] == sets[y] || !subset(&sets[x], &sets[y]) {
                        return Some((x, y));
                    }
                } else if self.parallel(x, y) && subset(&sets[x], &sets[y]) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    pub fn is_atomistic(&self) -> bool {
        self.atomistic_violation().is_none()
    }
}

/// A finite lattice with precomputed meet and join tables.
#[derive(Clone, Debug)]
pub struct FiniteLattice {
    poset: FinitePoset,
    meet: Vec<usize>,
    join: Vec<usize>,
}

impl std::ops::Deref for FiniteLattice {
    type Target = FinitePoset;
    fn deref(&self) -> &FinitePoset {
        &self.poset
    }
}

impl FiniteLattice {
    /// Validates the cover list and checks that every pair has a meet and a
    /// join. A missing bound is reported for the lexicographically first pair.
    pub fn new(n: usize, covers: &[(usize, usize)]) -> Result<FiniteLattice> {
        let order = Order::from_covers(n, covers)?;
        if n == 0 {
            return Err(Error::NotBounded { minimal: vec![], maximal: vec![] });
        }
        let below_count: Vec<usize> =
            (0..n).map(|x| (0..n).filter(|&z| order.leq[z * n + x]).count()).collect();
        let above_count: Vec<usize> =
            (0..n).map(|x| (0..n).filter(|&z| order.leq[x * n + z]).count()).collect();
        let leq = |a: usize, b: usize| order.leq[a * n + b];

        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for a in 0..n {
            for b in a..n {
                let lower: Vec<usize> = (0..n).filter(|&z| leq(z, a) && leq(z, b)).collect();
                let glb = lower.iter().copied().max_by_key(|&z| below_count[z]);
                let glb = match glb {
                    Some(g) if lower.iter().all(|&z| leq(z, g)) => g,
                    _ => return Err(Error::NotALattice { a, b, missing: "meet" }),
                };
                let upper: Vec<usize> = (0..n).filter(|&z| leq(a, z) && leq(b, z)).collect();
                let lub = upper.iter().copied().max_by_key(|&z| above_count[z]);
                let lub = match lub {
                    Some(l) if upper.iter().all(|&z| leq(l, z)) => l,
                    _ => return Err(Error::NotALattice { a, b, missing: "join" }),
                };
                meet[a * n + b] = glb;
                meet[b * n + a] = glb;
                join[a * n + b] = lub;
                join[b * n + a] = lub;
            }
        }
        let (minimal, maximal) = (order.minimal(), order.maximal());
        debug_assert!(minimal.len() == 1 && maximal.len() == 1);
        let poset = FinitePoset { bottom: minimal[0], top: maximal[0], order };
        Ok(FiniteLattice { poset, meet, join })
    }

    pub fn from_poset(poset: &FinitePoset) -> Result<FiniteLattice> {
        FiniteLattice::new(poset.n(), poset.covers())
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.n() + b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.n() + b]
    }

    pub fn join_all<I: IntoIterator<Item = usize>>(&self, items: I) -> usize {
        items.into_iter().fold(self.bottom(), |acc, x| self.join(acc, x))
    }

    /// `a ≺ b` must imply `a ∨ c ⪯ b ∨ c`. Returns the first failing triple.
    pub fn semimodularity_violation(&self) -> Option<(usize, usize, usize)> {
        for &(a, b) in self.covers() {
            for c in self.elements() {
                let (ac, bc) = (self.join(a, c), self.join(b, c));
                if ac != bc && !self.is_cover(ac, bc) {
                    return Some((a, b, c));
                }
            }
        }
        None
    }

    pub fn is_semimodular(&self) -> bool {
        self.semimodularity_violation().is_none()
    }

    /// Birkhoff's condition: if `a ∧ b ≺ a` and `a ∧ b ≺ b` then
    /// `a ≺ a ∨ b` and `b ≺ a ∨ b`. Secondary route to semimodularity.
    pub fn birkhoff_violation(&self) -> Option<(usize, usize)> {
        for a in self.elements() {
            for b in self.elements() {
                let m = self.meet(a, b);
                if self.is_cover(m, a) && self.is_cover(m, b) {
                    let j = self.join(a, b);
                    if !self.is_cover(a, j) || !self.is_cover(b, j) {
                        return Some((a, b));
                    }
                }
            }
        }
        None
    }

    pub fn satisfies_birkhoff(&self) -> bool {
        self.birkhoff_violation().is_none()
    }

    /// Atomistic via the atom-set conditions on the underlying poset.
    pub fn is_atomistic_lattice(&self) -> bool {
        self.poset.is_atomistic()
    }

    /// Atomistic via joins: every element is the join of the atoms below it.
    pub fn is_atomistic_by_joins(&self) -> bool {
        self.elements().all(|x| self.join_all(self.atoms_below(x)) == x)
    }

    pub fn is_geometric(&self) -> bool {
        self.is_semimodular() && self.is_atomistic_lattice()
    }

    /// Checks closure of `subset` under meet and join.
    pub fn sublattice_violation(&self, subset: &[usize]) -> Option<(usize, usize, &'static str)> {
        let mut inside = vec![false; self.n()];
        for &x in subset {
            inside[x] = true;
        }
        for &a in subset {
            for &b in subset {
                if !inside[self.meet(a, b)] {
                    return Some((a, b, "meet"));
                }
                if !inside[self.join(a, b)] {
                    return Some((a, b, "join"));
                }
            }
        }
        None
    }
}
