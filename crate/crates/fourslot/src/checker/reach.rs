//! Breadth-first reachability with parent links.

use std::collections::HashMap;

use thiserror::Error;

use crate::model::{CommandId, ControlProjection, GlobalState, TransitionSystem};

#[derive(Debug, Error)]
pub enum ExploreError {
    #[error(
        "state budget exceeded: {limit} states explored, {frontier} still queued, \
         {transitions} transitions so far"
    )]
    StateBudget {
        limit: usize,
        frontier: usize,
        transitions: usize,
    },
}

/// Exploration limits. Exceeding a budget is an explicit error, never a
/// silent truncation.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub max_states: usize,
    pub max_pairs: u64,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget {
            max_states: 10_000_000,
            max_pairs: 1_000_000_000,
        }
    }
}

/// The reachable fragment: states in discovery order, every reachable
/// transition, and BFS parent links for shortest-trace reconstruction.
pub struct ReachSet {
    pub system: TransitionSystem,
    pub states: Vec<GlobalState>,
    index: HashMap<GlobalState, u32>,
    pub transitions: Vec<(u32, CommandId, u32)>,
    parents: Vec<Option<(u32, CommandId)>>,
    /// CSR adjacency: edges of state `i` are `edges[offsets[i]..offsets[i+1]]`.
    offsets: Vec<u32>,
    edges: Vec<(CommandId, u32)>,
}

impl ReachSet {
    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn id_of(&self, s: &GlobalState) -> Option<u32> {
        self.index.get(s).copied()
    }

    pub fn successors_of(&self, id: u32) -> &[(CommandId, u32)] {
        let lo = self.offsets[id as usize] as usize;
        let hi = self.offsets[id as usize + 1] as usize;
        &self.edges[lo..hi]
    }

    /// Shortest command path from the initial state to `id`, by BFS
    /// parent links; ties were broken by command order at exploration
    /// time.
    pub fn trace_to(&self, id: u32) -> super::report::Trace {
        let mut rev_states = vec![self.states[id as usize]];
        let mut rev_cmds = Vec::new();
        let mut cur = id;
        while let Some((parent, cmd)) = self.parents[cur as usize] {
            rev_cmds.push(cmd);
            rev_states.push(self.states[parent as usize]);
            cur = parent;
        }
        rev_states.reverse();
        rev_cmds.reverse();
        super::report::Trace {
            states: rev_states,
            commands: rev_cmds,
            pair_split: None,
        }
    }

    /// The stamp-free projection of the reachable set.
    pub fn control_projections(&self) -> std::collections::HashSet<ControlProjection> {
        self.states.iter().map(|s| s.control_projection()).collect()
    }
}

/// Exact breadth-first fixpoint of the reachable set. Deterministic: the
/// queue is FIFO and successors are pushed in command order.
pub fn explore(ts: &TransitionSystem, budget: &Budget) -> Result<ReachSet, ExploreError> {
    let init = ts.initial_state();
    let mut states = vec![init];
    let mut index = HashMap::new();
    index.insert(init, 0u32);
    let mut parents: Vec<Option<(u32, CommandId)>> = vec![None];
    let mut transitions: Vec<(u32, CommandId, u32)> = Vec::new();
    let mut head = 0usize;

    while head < states.len() {
        let src = states[head];
        let src_id = head as u32;
        head += 1;
        for (cmd, next) in ts.successors(&src) {
            let next_id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    let id = states.len() as u32;
                    if states.len() >= budget.max_states {
                        return Err(ExploreError::StateBudget {
                            limit: budget.max_states,
                            frontier: states.len() - head,
                            transitions: transitions.len(),
                        });
                    }
                    states.push(next);
                    index.insert(next, id);
                    parents.push(Some((src_id, cmd)));
                    id
                }
            };
            transitions.push((src_id, cmd, next_id));
        }
    }

    // Transitions were produced in source order, so the CSR layout is a
    // single counting pass.
    let n = states.len();
    let mut offsets = vec![0u32; n + 1];
    for (src, _, _) in &transitions {
        offsets[*src as usize + 1] += 1;
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    let mut cursor = offsets.clone();
    let mut edges = vec![(CommandId::Am2, 0u32); transitions.len()];
    for (src, cmd, dst) in &transitions {
        let at = cursor[*src as usize] as usize;
        edges[at] = (*cmd, *dst);
        cursor[*src as usize] += 1;
    }

    Ok(ReachSet {
        system: *ts,
        states,
        index,
        transitions,
        parents,
        offsets,
        edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Variant;

    #[test]
    fn tiny_budget_is_an_explicit_error() {
        let ts = TransitionSystem::new(Variant::Timestamped, 4);
        let budget = Budget {
            max_states: 10,
            ..Budget::default()
        };
        match explore(&ts, &budget) {
            Err(ExploreError::StateBudget { limit, .. }) => assert_eq!(limit, 10),
            Ok(_) => panic!("exploration should exceed a 10-state budget"),
        }
    }

    #[test]
    fn exploration_is_deterministic() {
        let ts = TransitionSystem::new(Variant::Timestamped, 2);
        let a = explore(&ts, &Budget::default()).unwrap();
        let b = explore(&ts, &Budget::default()).unwrap();
        assert_eq!(a.states, b.states);
        assert_eq!(a.transitions, b.transitions);
    }

    #[test]
    fn every_reachable_state_has_at_most_two_successors() {
        let ts = TransitionSystem::new(Variant::Timestamped, 2);
        let r = explore(&ts, &Budget::default()).unwrap();
        for id in 0..r.state_count() as u32 {
            assert!(r.successors_of(id).len() <= 2);
        }
    }

    #[test]
    fn traces_replay_through_the_step_function() {
        let ts = TransitionSystem::new(Variant::Timestamped, 2);
        let r = explore(&ts, &Budget::default()).unwrap();
        let last = (r.state_count() - 1) as u32;
        r.trace_to(last).replay(&ts).unwrap();
    }
}
