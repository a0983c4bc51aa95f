//! Checking pair predicates over all reachable big-step pairs.
//!
//! The set of big-step pairs is the transitive closure of the reachable
//! transitions. It is walked by a breadth-first closure from every
//! source state; the walks are independent, so they run on a thread
//! pool, and all requested predicates are evaluated per pair in one
//! pass. Results are reduced to the smallest failing pair per predicate,
//! which makes the output independent of scheduling.
//!
//! The same walk validates the two composed derivations: while visiting
//! pairs it propagates, along each source's BFS tree, the last round
//! entry, last index fetch, and last slot fetch on the path, and then
//! checks the derivation's legs on those witness states.

#[cfg(not(target_arch = "wasm32"))]
use rayon::prelude::*;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use crate::model::{CommandId, GlobalState, ReaderPc};
use crate::predicates::{Catalog, PairPredicate};

use super::reach::ReachSet;
use super::report::{CheckReport, Trace, Verdict};
use super::CheckerError;

const NONE: u32 = u32::MAX;

/// First failing pair of one predicate, as state ids in the reach set.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PairFailure {
    pub src: u32,
    pub dst: u32,
}

/// Outcome of one composed-derivation check.
#[derive(Clone, Debug)]
pub struct CompositionOutcome {
    pub name: String,
    pub legs: Vec<String>,
    pub guarded_pairs: u64,
    pub failure: Option<(PairFailure, String)>,
}

/// Everything a single sweep produced.
pub struct SweepResult {
    pub failures: Vec<Option<PairFailure>>,
    pub compositions: Vec<CompositionOutcome>,
    pub pairs_visited: u64,
}

struct Scratch {
    visited: Vec<u32>,
    epoch: u32,
    queue: Vec<u32>,
    /// Per state: [pre-state of last `b-1`, post-state of last `b-3`,
    /// pre-state of last `b`] along the tree path from the source.
    anchors: Vec<[u32; 3]>,
}

impl Scratch {
    fn new(n: usize) -> Scratch {
        Scratch {
            visited: vec![0; n],
            epoch: 0,
            queue: Vec::with_capacity(1024),
            anchors: vec![[NONE; 3]; n],
        }
    }
}

struct Partial {
    failures: Vec<Option<PairFailure>>,
    aux_k: Option<(PairFailure, String)>,
    fresh2: Option<(PairFailure, String)>,
    aux_k_pairs: u64,
    fresh2_pairs: u64,
}

impl Partial {
    fn new(preds: usize) -> Partial {
        Partial {
            failures: vec![None; preds],
            aux_k: None,
            fresh2: None,
            aux_k_pairs: 0,
            fresh2_pairs: 0,
        }
    }
}

fn min_failure(a: Option<PairFailure>, b: Option<PairFailure>) -> Option<PairFailure> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(if (x.src, x.dst) <= (y.src, y.dst) { x } else { y }),
    }
}

fn min_comp(
    a: Option<(PairFailure, String)>,
    b: Option<(PairFailure, String)>,
) -> Option<(PairFailure, String)> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => {
            if (x.0.src, x.0.dst) <= (y.0.src, y.0.dst) {
                Some(x)
            } else {
                Some(y)
            }
        }
    }
}

/// Checks every given pair predicate, plus the two composed freshness
/// derivations when a catalog is supplied, over all reachable big-step
/// pairs.
pub fn sweep_pairs(
    r: &ReachSet,
    preds: &[PairPredicate],
    catalog: Option<&Catalog>,
    max_pairs: u64,
) -> Result<SweepResult, CheckerError> {
    let n = r.state_count();
    let pair_budget = AtomicU64::new(0);
    let over_budget = AtomicBool::new(false);

    let sources: Vec<u32> = (0..n as u32).collect();
    let chunk_walk = |srcs: &[u32]| {
        let mut scratch = Scratch::new(n);
        let mut part = Partial::new(preds.len());
        for &src in srcs {
            if over_budget.load(Ordering::Relaxed) {
                break;
            }
            let visited = walk_from(r, src, preds, catalog, &mut scratch, &mut part);
            let total = pair_budget.fetch_add(visited, Ordering::Relaxed) + visited;
            if total > max_pairs {
                over_budget.store(true, Ordering::Relaxed);
            }
        }
        part
    };
    let merge = |mut a: Partial, b: Partial| {
        for (fa, fb) in a.failures.iter_mut().zip(b.failures) {
            *fa = min_failure(*fa, fb);
        }
        a.aux_k = min_comp(a.aux_k.take(), b.aux_k);
        a.fresh2 = min_comp(a.fresh2.take(), b.fresh2);
        a.aux_k_pairs += b.aux_k_pairs;
        a.fresh2_pairs += b.fresh2_pairs;
        a
    };
    #[cfg(not(target_arch = "wasm32"))]
    let merged = sources
        .par_chunks(256)
        .map(chunk_walk)
        .reduce(|| Partial::new(preds.len()), merge);
    #[cfg(target_arch = "wasm32")]
    let merged = sources
        .chunks(256)
        .map(chunk_walk)
        .fold(Partial::new(preds.len()), merge);

    if over_budget.load(Ordering::Relaxed) {
        return Err(CheckerError::PairBudget {
            visited: pair_budget.load(Ordering::Relaxed),
        });
    }

    let mut compositions = Vec::new();
    if catalog.is_some() {
        compositions.push(CompositionOutcome {
            name: "AUX_k".to_string(),
            legs: vec![
                "AUX_LLB".to_string(),
                "AUX_RPUB".to_string(),
                "LOC_MONO".to_string(),
                "AUX_RREAD".to_string(),
            ],
            guarded_pairs: merged.aux_k_pairs,
            failure: merged.aux_k,
        });
        compositions.push(CompositionOutcome {
            name: "FRESH2".to_string(),
            legs: vec!["AUX_k".to_string(), "READER_MONO".to_string()],
            guarded_pairs: merged.fresh2_pairs,
            failure: merged.fresh2,
        });
    }

    Ok(SweepResult {
        failures: merged.failures,
        compositions,
        pairs_visited: pair_budget.load(Ordering::Relaxed),
    })
}

fn walk_from(
    r: &ReachSet,
    src: u32,
    preds: &[PairPredicate],
    catalog: Option<&Catalog>,
    scratch: &mut Scratch,
    part: &mut Partial,
) -> u64 {
    scratch.epoch += 1;
    let epoch = scratch.epoch;
    scratch.queue.clear();
    scratch.queue.push(src);
    scratch.visited[src as usize] = epoch;
    scratch.anchors[src as usize] = [NONE; 3];
    let s = &r.states[src as usize];
    let mut head = 0;
    let mut visited_pairs = 0u64;

    while head < scratch.queue.len() {
        let v = scratch.queue[head];
        head += 1;
        for &(cmd, w) in r.successors_of(v) {
            if scratch.visited[w as usize] == epoch {
                continue;
            }
            scratch.visited[w as usize] = epoch;
            let mut anchors = scratch.anchors[v as usize];
            match cmd {
                CommandId::Bm1 => anchors[0] = v,
                CommandId::Bm3 => anchors[1] = w,
                CommandId::B => anchors[2] = v,
                _ => {}
            }
            scratch.anchors[w as usize] = anchors;
            scratch.queue.push(w);
            visited_pairs += 1;

            let t = &r.states[w as usize];
            for (i, p) in preds.iter().enumerate() {
                if !p.eval(s, t) {
                    part.failures[i] = min_failure(part.failures[i], Some(PairFailure { src, dst: w }));
                }
            }
            if let Some(cat) = catalog {
                check_compositions(r, cat, src, s, w, t, anchors, part);
            }
        }
    }
    visited_pairs
}

#[allow(clippy::too_many_arguments)]
fn check_compositions(
    r: &ReachSet,
    cat: &Catalog,
    src: u32,
    s: &GlobalState,
    dst: u32,
    t: &GlobalState,
    anchors: [u32; 3],
    part: &mut Partial,
) {
    // Composed derivation of AUX_k: round entry → slot fetch, chained
    // through the re-grab and the index fetch of the final read round.
    if s.beta == ReaderPc::Bm3 && t.beta == ReaderPc::B {
        part.aux_k_pairs += 1;
        if let Some(why) = aux_k_chain(r, cat, s, t, anchors) {
            part.aux_k = min_comp(part.aux_k.take(), Some((PairFailure { src, dst }, why)));
        }
    }
    // Composed derivation of FRESH2: AUX_k up to the slot-fetch witness,
    // then reader monotonicity.
    if s.beta == ReaderPc::Bm3 && t.beta == ReaderPc::Bp1 {
        part.fresh2_pairs += 1;
        let w = anchors[2];
        let why = if w == NONE {
            Some("no slot-fetch witness on path".to_string())
        } else {
            let wit = &r.states[w as usize];
            if !cat.pair("AUX_k").eval(s, wit) {
                Some("AUX_k leg fails at witness".to_string())
            } else if !cat.pair("READER_MONO").eval(wit, t) {
                Some("READER_MONO leg fails from witness".to_string())
            } else if !cat.pair("FRESH2").eval(s, t) {
                Some("legs hold but target fails".to_string())
            } else {
                None
            }
        };
        if let Some(why) = why {
            part.fresh2 = min_comp(part.fresh2.take(), Some((PairFailure { src, dst }, why)));
        }
    }
}

fn aux_k_chain(
    r: &ReachSet,
    cat: &Catalog,
    s: &GlobalState,
    t: &GlobalState,
    anchors: [u32; 3],
) -> Option<String> {
    let (b1_pre, b3_post) = (anchors[0], anchors[1]);
    if b1_pre == NONE || b3_post == NONE {
        return Some("missing re-grab or index-fetch witness on path".to_string());
    }
    let y = &r.states[b3_post as usize];
    let w2 = &r.states[b1_pre as usize];
    if y.rp != w2.rp {
        return Some("pair changed between re-grab and index fetch".to_string());
    }
    if !cat.state("AUX_LLB").eval(s) {
        return Some("AUX_LLB leg fails at source".to_string());
    }
    if !cat.pair("AUX_RPUB").eval(s, y) {
        return Some("AUX_RPUB leg fails at re-grab witness".to_string());
    }
    let rp = y.rp as usize;
    if !(y.li[rp].stamp <= w2.li[rp].stamp) {
        return Some("location-monotonicity leg fails between witnesses".to_string());
    }
    if !cat.pair("AUX_RREAD").eval(w2, t) {
        return Some("AUX_RREAD leg fails into the slot fetch".to_string());
    }
    if !cat.pair("AUX_k").eval(s, t) {
        return Some("legs hold but target fails".to_string());
    }
    None
}

/// Builds a replayable counterexample trace for a failing pair: the
/// shortest path to the source, then the BFS path from source to target.
pub fn pair_trace(r: &ReachSet, f: PairFailure) -> Trace {
    let mut trace = r.trace_to(f.src);
    trace.pair_split = Some(trace.states.len() - 1);
    let n = r.state_count();
    let mut parent: Vec<Option<(u32, CommandId)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = vec![f.src];
    seen[f.src as usize] = true;
    let mut head = 0;
    'outer: while head < queue.len() {
        let v = queue[head];
        head += 1;
        for &(cmd, w) in r.successors_of(v) {
            if seen[w as usize] {
                continue;
            }
            seen[w as usize] = true;
            parent[w as usize] = Some((v, cmd));
            queue.push(w);
            if w == f.dst {
                break 'outer;
            }
        }
    }
    let mut rev = Vec::new();
    let mut cur = f.dst;
    while cur != f.src {
        let (p, cmd) = parent[cur as usize].expect("target reachable from source");
        rev.push((cmd, cur));
        cur = p;
    }
    for (cmd, id) in rev.into_iter().rev() {
        trace.commands.push(cmd);
        trace.states.push(r.states[id as usize]);
    }
    trace
}

/// One predicate over all reachable big-step pairs; fails with a
/// replayable two-phase trace.
pub fn check_transition_invariant(
    pp: &PairPredicate,
    r: &ReachSet,
    max_pairs: u64,
) -> Result<CheckReport, CheckerError> {
    let result = sweep_pairs(r, std::slice::from_ref(pp), None, max_pairs)?;
    let mut report = CheckReport::new(&pp.name, Verdict::Holds);
    if let Some(f) = result.failures[0] {
        report.verdict = Verdict::Fails;
        report.counterexample = Some(pair_trace(r, f));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::reach::{explore, Budget};
    use crate::model::{TransitionSystem, Variant};
    use crate::predicates::catalog;

    #[test]
    fn reader_monotonicity_holds_over_big_step_pairs() {
        let ts = TransitionSystem::new(Variant::Timestamped, 2);
        let r = explore(&ts, &Budget::default()).unwrap();
        let report =
            check_transition_invariant(catalog().pair("READER_MONO"), &r, 1 << 40).unwrap();
        assert_eq!(report.verdict, Verdict::Holds);
    }

    #[test]
    fn exceeding_the_pair_budget_is_an_explicit_error() {
        let ts = TransitionSystem::new(Variant::Timestamped, 2);
        let r = explore(&ts, &Budget::default()).unwrap();
        let err = check_transition_invariant(catalog().pair("READER_MONO"), &r, 100);
        assert!(matches!(err, Err(CheckerError::PairBudget { visited }) if visited > 100));
    }
}
