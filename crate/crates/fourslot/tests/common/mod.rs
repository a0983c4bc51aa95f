//! Shared test oracles, kept independent of the checker's engines.

use std::collections::HashSet;

use fourslot::model::{ControlProjection, GlobalState, TransitionSystem};

/// Reachability counts computed by an explicit-stack depth-first walk,
/// a deliberately different traversal from the checker's breadth-first
/// engine. The two must agree exactly.
pub struct DfsCounts {
    pub states: usize,
    pub transitions: usize,
    pub control_states: usize,
}

pub fn dfs_oracle(ts: &TransitionSystem) -> DfsCounts {
    let mut seen: HashSet<GlobalState> = HashSet::new();
    let mut projections: HashSet<ControlProjection> = HashSet::new();
    let mut transitions = 0usize;
    let mut stack = vec![ts.initial_state()];
    seen.insert(ts.initial_state());
    projections.insert(ts.initial_state().control_projection());
    while let Some(s) = stack.pop() {
        for (_c, next) in ts.successors(&s) {
            transitions += 1;
            if seen.insert(next) {
                projections.insert(next.control_projection());
                stack.push(next);
            }
        }
    }
    DfsCounts {
        states: seen.len(),
        transitions,
        control_states: projections.len(),
    }
}

/// The reachable control projections themselves, for saturation diffs.
pub fn dfs_projections(ts: &TransitionSystem) -> HashSet<ControlProjection> {
    let mut seen: HashSet<GlobalState> = HashSet::new();
    let mut stack = vec![ts.initial_state()];
    seen.insert(ts.initial_state());
    while let Some(s) = stack.pop() {
        for (_c, next) in ts.successors(&s) {
            if seen.insert(next) {
                stack.push(next);
            }
        }
    }
    seen.iter().map(|s| s.control_projection()).collect()
}
