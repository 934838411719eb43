use std::collections::HashSet;
use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;

use dashmap::{DashMap, DashSet};
use rayon::prelude::*;
use serde::Serialize;

use super::independent::Levels;
use crate::bitset::AtomSet;
use crate::error::{Error, Result};
use crate::family::{SetFamily, Stabilizer, MAX_STABILIZER_UNIVERSE};

/// The rule that rejected a candidate set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Condition {
    /// Not a proper subset of any admissible host.
    NotProperSubset,
    /// Already a member of the current family.
    AlreadyPresent,
    /// Fewer than two atoms.
    TooSmall,
    I1,
    I2,
    I3,
    J1,
    J2,
    J3,
    /// The script continues after the run has stopped.
    AfterStop,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::NotProperSubset => "not a proper subset of a host",
            Condition::AlreadyPresent => "already present",
            Condition::TooSmall => "fewer than two atoms",
            Condition::I1 => "(i1)",
            Condition::I2 => "(i2)",
            Condition::I3 => "(i3)",
            Condition::J1 => "(j1)",
            Condition::J2 => "(j2)",
            Condition::J3 => "(j3)",
            Condition::AfterStop => "run already stopped",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Mode {
    Step1,
    Step3,
}

/// Everything the search needs about a standard form.
#[derive(Clone, Debug)]
pub struct SearchInput {
    /// `S_P`.
    pub sp: SetFamily,
    /// `𝒯^P_L`.
    pub embedded: SetFamily,
    /// `embedding[x]` is the image of element `x` of `L`.
    pub embedding: Vec<AtomSet>,
    /// `ℓ(L)`.
    pub length: usize,
}

/// One inserted set and the step that admitted it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TraceEntry {
    pub step: u8,
    pub k: usize,
    pub t: usize,
    pub set: AtomSet,
}

/// A configuration between two steps.
#[derive(Clone, Debug)]
pub struct SearchState {
    pub q: SetFamily,
    pub r: SetFamily,
    pub k: usize,
    pub t: usize,
    /// Sets added since `r`, outermost first.
    pub pending: Vec<AtomSet>,
    pub trace: Vec<TraceEntry>,
}

impl SearchState {
    pub fn initial(sp: &SetFamily) -> SearchState {
        SearchState { q: sp.clone(), r: sp.clone(), k: 3, t: 3, pending: Vec::new(), trace: Vec::new() }
    }
}

/// Precomputed data for evaluating conditions against one `(Q, R, k, t)`.
struct Frame<'a> {
    q: &'a SetFamily,
    r: &'a SetFamily,
    r_atoms: Vec<AtomSet>,
    levels: Levels,
    k: usize,
    t: usize,
    mode: Mode,
}

impl<'a> Frame<'a> {
    fn new(q: &'a SetFamily, r: &'a SetFamily, k: usize, t: usize, mode: Mode) -> Result<Frame<'a>> {
        Ok(Frame { q, r, r_atoms: r.atoms(), levels: Levels::of(q)?, k, t, mode })
    }

    fn level(&self) -> Option<usize> {
        match self.mode {
            Mode::Step1 => self.k.checked_sub(1),
            Mode::Step3 => self.k.checked_sub(2),
        }
    }

    fn hosts(&self, pending: Option<AtomSet>) -> Vec<AtomSet> {
        match self.mode {
            Mode::Step1 => self.levels.varphi(self.k).to_vec(),
            Mode::Step3 => pending.into_iter().collect(),
        }
    }

    fn closure_r(&self, x: AtomSet) -> Result<AtomSet> {
        self.r.closure_with_atoms(&self.r_atoms, x)
    }

    /// First failing condition for `u` as a proper subset of `host`.
    fn check(&self, host: AtomSet, u: AtomSet) -> Result<Option<Condition>> {
        let (c1, c2, c3) = match self.mode {
            Mode::Step1 => (Condition::I1, Condition::I2, Condition::I3),
            Mode::Step3 => (Condition::J1, Condition::J2, Condition::J3),
        };
        if !u.is_proper_subset(host) {
            return Ok(Some(Condition::NotProperSubset));
        }
        if u.len() < 2 {
            return Ok(Some(Condition::TooSmall));
        }
        if self.q.contains(u) {
            return Ok(Some(Condition::AlreadyPresent));
        }
        for &v in self.levels.varphi(self.t - 1) {
            let fast = self.closure_r(u & v)?.is_subset(u);
            if cfg!(debug_assertions) {
                let mut full = true;
                for y in (u & v).subsets() {
                    if !self.closure_r(y)?.is_subset(u) {
                        full = false;
                        break;
                    }
                }
                debug_assert_eq!(fast, full, "single and full closure checks disagree on {u} ∩ {v}");
            }
            if !fast {
                return Ok(Some(c1));
            }
        }
        let Some(level) = self.level() else {
            return Ok(Some(c2));
        };
        if self.levels.phi(level).iter().any(|sigma| sigma.is_subset(u)) {
            return Ok(Some(c2));
        }
        if self.levels.varphi(level).iter().any(|v| u.is_subset(*v)) {
            return Ok(Some(c3));
        }
        Ok(None)
    }

    /// Legal `(host, set)` pairs, one per set, in set order.
    fn candidates(&self, pending: Option<AtomSet>) -> Result<Vec<(AtomSet, AtomSet)>> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for host in self.hosts(pending) {
            for u in host.subsets() {
                if u.len() < 2 || u == host || self.q.contains(u) || seen.contains(&u) {
                    continue;
                }
                if self.check(host, u)?.is_none() {
                    seen.insert(u);
                    out.push((host, u));
                }
            }
        }
        out.sort_by_key(|&(_, u)| u);
        Ok(out)
    }

    /// Why `u` is not a candidate, if it is not one.
    fn reject_reason(&self, u: AtomSet, pending: Option<AtomSet>) -> Result<Option<Condition>> {
        let hosts: Vec<AtomSet> = self.hosts(pending).into_iter().filter(|h| u.is_proper_subset(*h)).collect();
        let Some(&host) = hosts.first() else {
            return Ok(Some(Condition::NotProperSubset));
        };
        self.check(host, u)
    }
}

fn height_of(q: &SetFamily, x: AtomSet) -> usize {
    let i = q.index_of(x).expect("member");
    q.heights()[i]
}

/// Candidates for the next choice in `state`.
pub fn candidate_insertions(state: &SearchState, mode: Mode) -> Result<Vec<(AtomSet, AtomSet)>> {
    let frame = Frame::new(&state.q, &state.r, state.k, state.t, mode)?;
    frame.candidates(state.pending.last().copied())
}

/// Replays the search with the given choices, in order.
pub fn run_deterministic(input: &SearchInput, script: &[AtomSet]) -> Result<(SetFamily, Vec<TraceEntry>)> {
    let m = input.length;
    let mut script = script.iter().copied();
    let mut r = input.sp.clone();
    let mut k = 3;
    let mut trace = Vec::new();
    'step1: while k < m + 1 {
        let t = k;
        let frame = Frame::new(&r, &r, k, t, Mode::Step1)?;
        if frame.candidates(None)?.is_empty() {
            k += 1;
            continue;
        }
        let u = script.next().ok_or(Error::ScriptExhausted { level: k })?;
        if let Some(condition) = frame.reject_reason(u, None)? {
            return Err(Error::IllegalChoice { choice: u, condition });
        }
        let mark = trace.len();
        trace.push(TraceEntry { step: 1, k, t, set: u });
        let mut q = r.with(u);
        if height_of(&q, u) == k - 1 {
            r = q;
            k = 3;
            continue;
        }
        let mut pending = u;
        let mut kk = k;
        loop {
            let frame = Frame::new(&q, &r, kk, t, Mode::Step3)?;
            if frame.candidates(Some(pending))?.is_empty() {
                trace.truncate(mark);
                continue 'step1;
            }
            let w = script.next().ok_or(Error::ScriptExhausted { level: kk })?;
            if let Some(condition) = frame.reject_reason(w, Some(pending))? {
                return Err(Error::IllegalChoice { choice: w, condition });
            }
            trace.push(TraceEntry { step: 3, k: kk, t, set: w });
            q = q.with(w);
            if height_of(&q, w) == kk - 2 {
                r = q;
                k = 3;
                continue 'step1;
            }
            kk -= 1;
            pending = w;
        }
    }
    if let Some(extra) = script.next() {
        return Err(Error::IllegalChoice { choice: extra, condition: Condition::AfterStop });
    }
    Ok((r, trace))
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    /// Cap on explored search nodes.
    pub budget: usize,
    pub workers: usize,
}

pub const DEFAULT_BUDGET: usize = 2_000_000;

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget: DEFAULT_BUDGET, workers: 1 }
    }
}

/// Output families of the search, one per isomorphism class.
#[derive(Clone, Debug, Default)]
pub struct Enumeration {
    /// Class representatives sorted by size, then contents.
    pub classes: Vec<SetFamily>,
    /// Distinct terminal families reached (before class merging).
    pub terminals: usize,
    pub truncated: bool,
    pub nodes: usize,
    /// Commits where the family stopped being an atomistic lattice.
    pub violations: Vec<String>,
}

type Key = (Vec<u64>, usize);

fn encode(f: &SetFamily) -> Vec<u64> {
    f.sets().iter().map(|s| s.bits()).collect()
}

struct Engine<'a> {
    input: &'a SearchInput,
    stabilizer: Option<Stabilizer>,
    visited: DashSet<Key>,
    terminals: DashMap<Vec<u64>, SetFamily>,
    raw_terminals: AtomicUsize,
    nodes: AtomicUsize,
    budget: usize,
    truncated: AtomicBool,
    violations: Mutex<Vec<String>>,
    error: Mutex<Option<Error>>,
}

impl Engine<'_> {
    fn canonical(&self, f: &SetFamily) -> SetFamily {
        match &self.stabilizer {
            Some(g) => g.canonical(f),
            None => f.clone(),
        }
    }

    fn tick(&self) -> bool {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            self.truncated.store(true, Ordering::Relaxed);
            return false;
        }
        !self.truncated.load(Ordering::Relaxed) && self.error.lock().unwrap().is_none()
    }

    fn fail(&self, e: Error) {
        let mut slot = self.error.lock().unwrap();
        if slot.is_none() {
            *slot = Some(e);
        }
    }

    fn explore(&self, r: SetFamily, k: usize) {
        if let Err(e) = self.try_explore(r, k) {
            self.fail(e);
        }
    }

    fn try_explore(&self, r: SetFamily, k: usize) -> Result<()> {
        if k > self.input.length {
            self.raw_terminals.fetch_add(1, Ordering::Relaxed);
            let c = self.canonical(&r);
            self.terminals.entry(encode(&c)).or_insert(c);
            return Ok(());
        }
        let key = (encode(&self.canonical(&r)), k);
        if !self.visited.insert(key) || !self.tick() {
            return Ok(());
        }
        let frame = Frame::new(&r, &r, k, k, Mode::Step1)?;
        let candidates = frame.candidates(None)?;
        let live = AtomicBool::new(false);
        let body = |&(_, u): &(AtomSet, AtomSet)| {
            let q = r.with(u);
            let completions = if height_of(&q, u) == k - 1 {
                vec![q]
            } else {
                let mut out = Vec::new();
                if let Err(e) = self.step3(&r, q, u, k, k, &mut out) {
                    self.fail(e);
                }
                out
            };
            if !completions.is_empty() {
                live.store(true, Ordering::Relaxed);
            }
            for c in completions {
                self.commit(c);
            }
        };
        if self.input.sp.universe() <= 4 {
            candidates.iter().for_each(body);
        } else {
            candidates.par_iter().for_each(body);
        }
        if !live.load(Ordering::Relaxed) {
            self.explore(r, k + 1);
        }
        Ok(())
    }

    fn step3(&self, r: &SetFamily, q: SetFamily, pending: AtomSet, k: usize, t: usize, out: &mut Vec<SetFamily>) -> Result<()> {
        if k < 2 || !self.tick() {
            return Ok(());
        }
        let frame = Frame::new(&q, r, k, t, Mode::Step3)?;
        for (_, w) in frame.candidates(Some(pending))? {
            let q2 = q.with(w);
            if height_of(&q2, w) == k - 2 {
                out.push(q2);
            } else {
                self.step3(r, q2, w, k - 1, t, out)?;
            }
        }
        Ok(())
    }

    fn commit(&self, q: SetFamily) {
        if !(q.is_intersection_closed() && q.top().is_some() && q.atoms().len() == q.universe()) {
            let msg = format!("committed family is not an atomistic lattice: {:?}", q.sets());
            log::warn!("{msg}");
            self.violations.lock().unwrap().push(msg);
        }
        self.explore(q, 3);
    }
}

/// Explores every choice sequence and collects the terminal families,
/// merged up to relabellings of atoms that fix `𝒯^P_L`.
pub fn enumerate_outputs(input: &SearchInput, options: SearchOptions) -> Result<Enumeration> {
    let stabilizer = if input.sp.universe() <= MAX_STABILIZER_UNIVERSE {
        Some(Stabilizer::of(&input.embedded)?)
    } else {
        None
    };
    let engine = Engine {
        input,
        stabilizer,
        visited: DashSet::new(),
        terminals: DashMap::new(),
        raw_terminals: AtomicUsize::new(0),
        nodes: AtomicUsize::new(0),
        budget: options.budget,
        truncated: AtomicBool::new(false),
        violations: Mutex::new(Vec::new()),
        error: Mutex::new(None),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.workers.max(1))
        .build()
        .map_err(|e| Error::InvariantViolated(format!("thread pool: {e}")))?;
    pool.install(|| engine.explore(input.sp.clone(), 3));
    if let Some(e) = engine.error.into_inner().unwrap() {
        return Err(e);
    }
    let mut classes: Vec<SetFamily> = engine.terminals.into_iter().map(|(_, f)| f).collect();
    classes.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| encode(a).cmp(&encode(b))));
    let result = Enumeration {
        classes,
        terminals: engine.raw_terminals.into_inner(),
        truncated: engine.truncated.into_inner(),
        nodes: engine.nodes.into_inner().min(options.budget),
        violations: engine.violations.into_inner().unwrap(),
    };
    if result.truncated {
        return Err(Error::BudgetExceeded { budget: options.budget, partial: Box::new(result) });
    }
    Ok(result)
}

/// A choice sequence that makes the search stop at exactly `target`.
///
/// Only members of `target` are tried, but a step only moves to the next
/// level when no choice at all has a completion, as in the full search.
pub fn trace_to(input: &SearchInput, target: &SetFamily) -> Result<Option<Vec<TraceEntry>>> {
    struct Tracer<'a> {
        input: &'a SearchInput,
        target: &'a SetFamily,
        visited: HashSet<Key>,
    }

    impl Tracer<'_> {
        #[allow(clippy::too_many_arguments)]
        fn completions(
            &self,
            r: &SetFamily,
            q: SetFamily,
            pending: AtomSet,
            k: usize,
            t: usize,
            only_target: bool,
            path: &mut Vec<TraceEntry>,
            out: &mut Vec<(SetFamily, Vec<TraceEntry>)>,
            stop_at_first: bool,
        ) -> Result<()> {
            if k < 2 {
                return Ok(());
            }
            let frame = Frame::new(&q, r, k, t, Mode::Step3)?;
            for (_, w) in frame.candidates(Some(pending))? {
                if only_target && !self.target.contains(w) {
                    continue;
                }
                path.push(TraceEntry { step: 3, k, t, set: w });
                let q2 = q.with(w);
                if height_of(&q2, w) == k - 2 {
                    out.push((q2, path.clone()));
                } else {
                    self.completions(r, q2, w, k - 1, t, only_target, path, out, stop_at_first)?;
                }
                path.pop();
                if stop_at_first && !out.is_empty() {
                    return Ok(());
                }
            }
            Ok(())
        }

        fn search(&mut self, r: SetFamily, k: usize) -> Result<Option<Vec<TraceEntry>>> {
            if k > self.input.length {
                return Ok((r == *self.target).then(Vec::new));
            }
            if !self.visited.insert((encode(&r), k)) {
                return Ok(None);
            }
            let frame = Frame::new(&r, &r, k, k, Mode::Step1)?;
            let candidates = frame.candidates(None)?;
            let mut any_live = false;
            for &(_, u) in &candidates {
                let step1 = TraceEntry { step: 1, k, t: k, set: u };
                let q = r.with(u);
                let direct = height_of(&q, u) == k - 1;
                if !self.target.contains(u) {
                    if !any_live {
                        let mut found = Vec::new();
                        if direct {
                            any_live = true;
                        } else {
                            self.completions(&r, q, u, k, k, false, &mut Vec::new(), &mut found, true)?;
                            any_live = !found.is_empty();
                        }
                    }
                    continue;
                }
                let mut found = Vec::new();
                if direct {
                    found.push((q, Vec::new()));
                } else {
                    self.completions(&r, q, u, k, k, true, &mut Vec::new(), &mut found, false)?;
                }
                if found.is_empty() && !any_live {
                    let mut any = Vec::new();
                    if !direct {
                        self.completions(&r, r.with(u), u, k, k, false, &mut Vec::new(), &mut any, true)?;
                    }
                    any_live = !any.is_empty();
                }
                for (c, steps) in found {
                    any_live = true;
                    if let Some(rest) = self.search(c, 3)? {
                        let mut path = vec![step1.clone()];
                        path.extend(steps);
                        path.extend(rest);
                        return Ok(Some(path));
                    }
                }
            }
            if any_live {
                return Ok(None);
            }
            self.search(r, k + 1)
        }
    }

    let mut tracer = Tracer { input, target, visited: HashSet::new() };
    tracer.search(input.sp.clone(), 3)
}
