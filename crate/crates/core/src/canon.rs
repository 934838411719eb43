//! Canonical labelling of small bounded posets.
//!
//! Elements are first split into cells by a colour refinement seeded with
//! height, depth and degree data. Within that cell order a branch-and-bound
//! search picks the labelling whose cover-row sequence is lexicographically
//! smallest.

use std::collections::BTreeMap;

use crate::lattice::FinitePoset;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub n: usize,
    pub covers: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct Canonization {
    pub form: CanonicalForm,
    /// `relabel[x]` is the canonical index of input element `x`.
    pub relabel: Vec<usize>,
}

fn depths(p: &FinitePoset) -> Vec<usize> {
    let n = p.n();
    let mut by_height: Vec<usize> = (0..n).collect();
    by_height.sort_by_key(|&x| std::cmp::Reverse(p.height(x)));
    let mut depth = vec![0; n];
    for &x in &by_height {
        depth[x] = p.upper_covers(x).iter().map(|&y| depth[y] + 1).max().unwrap_or(0);
    }
    depth
}

fn compress<K: Ord + Clone>(keys: &[K]) -> (Vec<usize>, usize) {
    let ids: BTreeMap<K, usize> = {
        let mut uniq: Vec<K> = keys.to_vec();
        uniq.sort();
        uniq.dedup();
        uniq.into_iter().enumerate().map(|(i, k)| (k, i)).collect()
    };
    (keys.iter().map(|k| ids[k]).collect(), ids.len())
}

/// Stable colouring: equal colours for elements no invariant can separate.
fn refined_colours(p: &FinitePoset) -> Vec<usize> {
    let n = p.n();
    let depth = depths(p);
    let seed: Vec<(usize, usize, usize, usize, usize, usize)> = (0..n)
        .map(|x| {
            let below = (0..n).filter(|&z| p.leq(z, x)).count();
            let above = (0..n).filter(|&z| p.leq(x, z)).count();
            (p.height(x), depth[x], p.lower_covers(x).len(), p.upper_covers(x).len(), below, above)
        })
        .collect();
    let (mut colour, mut count) = compress(&seed);
    loop {
        let sig: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..n)
            .map(|x| {
                let mut lo: Vec<usize> = p.lower_covers(x).iter().map(|&y| colour[y]).collect();
                let mut up: Vec<usize> = p.upper_covers(x).iter().map(|&y| colour[y]).collect();
                lo.sort_unstable();
                up.sort_unstable();
                (colour[x], lo, up)
            })
            .collect();
        let (next, next_count) = compress(&sig);
        colour = next;
        if next_count == count {
            return colour;
        }
        count = next_count;
    }
}

struct Search<'a> {
    poset: &'a FinitePoset,
    cell_of_position: Vec<usize>,
    members: Vec<Vec<usize>>,
    used: Vec<bool>,
    position_of: Vec<usize>,
    path: Vec<usize>,
    rows: Vec<Vec<usize>>,
    best_rows: Option<Vec<Vec<usize>>>,
    best_path: Vec<usize>,
}

impl Search<'_> {
    fn row(&self, x: usize) -> Vec<usize> {
        let mut r: Vec<usize> = self
            .poset
            .lower_covers(x)
            .iter()
            .filter(|&&y| self.used[y])
            .map(|&y| self.position_of[y])
            .collect();
        r.sort_unstable();
        r
    }

    /// Compares the current prefix with the same prefix of the record.
    fn prefix_cmp(&self) -> std::cmp::Ordering {
        match &self.best_rows {
            None => std::cmp::Ordering::Less,
            Some(best) => self.rows.iter().cmp(best[..self.rows.len()].iter()),
        }
    }

    fn run(&mut self, pos: usize) {
        let n = self.poset.n();
        if pos == n {
            if self.prefix_cmp() == std::cmp::Ordering::Less {
                self.best_rows = Some(self.rows.clone());
                self.best_path = self.path.clone();
            }
            return;
        }
        let cell = self.cell_of_position[pos];
        for i in 0..self.members[cell].len() {
            let x = self.members[cell][i];
            if self.used[x] {
                continue;
            }
            // Lower covers always sit in earlier cells, so the row is complete.
            self.used[x] = true;
            self.position_of[x] = pos;
            let r = self.row(x);
            self.rows.push(r);
            if self.prefix_cmp() != std::cmp::Ordering::Greater {
                self.path.push(x);
                self.run(pos + 1);
                self.path.pop();
            }
            self.rows.pop();
            self.used[x] = false;
        }
    }
}

pub fn canonicalize(p: &FinitePoset) -> Canonization {
    let n = p.n();
    let colour = refined_colours(p);
    let cells = colour.iter().copied().max().map_or(0, |m| m + 1);
    let mut members = vec![Vec::new(); cells];
    for x in 0..n {
        members[colour[x]].push(x);
    }
    let cell_of_position: Vec<usize> =
        members.iter().enumerate().flat_map(|(c, m)| std::iter::repeat_n(c, m.len())).collect();
    let mut search = Search {
        poset: p,
        cell_of_position,
        members,
        used: vec![false; n],
        position_of: vec![usize::MAX; n],
        path: Vec::with_capacity(n),
        rows: Vec::with_capacity(n),
        best_rows: None,
        best_path: Vec::new(),
    };
    search.run(0);

    let mut relabel = vec![0; n];
    for (pos, &x) in search.best_path.iter().enumerate() {
        relabel[x] = pos;
    }
    let mut covers: Vec<(usize, usize)> =
        p.covers().iter().map(|&(a, b)| (relabel[a], relabel[b])).collect();
    covers.sort_unstable();
    Canonization { form: CanonicalForm { n, covers }, relabel }
}

pub fn canonical_form(p: &FinitePoset) -> CanonicalForm {
    canonicalize(p).form
}

pub fn is_isomorphic(a: &FinitePoset, b: &FinitePoset) -> bool {
    a.n() == b.n() && a.covers().len() == b.covers().len() && canonical_form(a) == canonical_form(b)
}
