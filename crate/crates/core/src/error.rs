use thiserror::Error;

use crate::algo1::{Condition, Enumeration};
use crate::bitset::AtomSet;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("element index {index} out of range for {n} elements")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("cover pair ({0}, {1}) listed twice")]
    DuplicateCover(usize, usize),
    #[error("cover pair ({0}, {0}) is a self-loop")]
    SelfLoop(usize),
    #[error("cover relation has a cycle through element {0}")]
    Cycle(usize),
    #[error("cover pair ({from}, {to}) is implied by transitivity")]
    RedundantEdge { from: usize, to: usize },
    #[error("poset is not bounded: minimal elements {minimal:?}, maximal elements {maximal:?}")]
    NotBounded { minimal: Vec<usize>, maximal: Vec<usize> },
    #[error("elements {a} and {b} have no {missing}")]
    NotALattice { a: usize, b: usize, missing: &'static str },
    #[error("not atomistic: elements {x} and {y} violate the atom-set conditions")]
    NotAtomistic { x: usize, y: usize },
    #[error("elements {a} and {b} of the subset have {op} outside the subset")]
    NotSublattice { a: usize, b: usize, op: &'static str },
    #[error("not semimodular: {a} covered by {b}, but {a} v {c} is not covered by {b} v {c}")]
    NotSemimodular { a: usize, b: usize, c: usize },
    #[error("family is not a geometric lattice")]
    NotGeometric,
    #[error("no unique join of the atoms below {0}")]
    JoinUndefined(AtomSet),
    #[error("malformed family: {0}")]
    MalformedFamily(String),
    #[error("standard form already has |A| = |J(L)| = {0}")]
    AtMinimum(usize),
    #[error("element {0} is not a removable inserted atom")]
    NotRemovable(usize),
    #[error("reduction produced an invalid family: {0}")]
    ReductionFailed(String),
    #[error("scripted choice {choice} rejected by condition {condition}")]
    IllegalChoice { choice: AtomSet, condition: Condition },
    #[error("scripted run still has candidates after the script ended (level {level})")]
    ScriptExhausted { level: usize },
    #[error("search budget of {budget} nodes exceeded ({found} outputs so far)", found = partial.classes.len())]
    BudgetExceeded { budget: usize, partial: Box<Enumeration> },
    #[error("set {0} of the sub-family is not a member of the ambient family")]
    NotSubset(AtomSet),
    #[error("oracle cap of {0} candidate families exceeded")]
    CapExceeded(usize),
    #[error("atom universe of size {0} is too large")]
    UniverseTooLarge(usize),
    #[error("invariant violated: {0}")]
    InvariantViolated(String),
    #[error("parse error: {0}")]
    Parse(String),
}
