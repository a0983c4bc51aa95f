//! The scripted end-to-end safety proof.
//!
//! Nodes run in dependency order. Each node first verifies its predicate
//! directly on the reachable fragment (state sweep or big-step pair
//! sweep), then discharges the induction, consequence, or composition
//! obligations that establish it deductively. A node failure aborts the
//! run with that node named. Supports are only usable once the node that
//! establishes them has passed.

use std::collections::BTreeSet;

use crate::model::{CommandId, TransitionSystem, Variant};
use crate::predicates::{catalog, conjoin, implies_on, Catalog, PairPredicate, StatePredicate};

use super::domain::for_each_state;
use super::induction::{check_inductive_subject_to, Support, SupportMap};
use super::pair_induction::{
    check_inductive_transition, PairSupport, TransitionObligations,
};
use super::reach::{explore, Budget, ReachSet};
use super::report::{CheckReport, Verdict};
use super::state_check::check_state_invariant;
use super::sweep::{pair_trace, sweep_pairs, PairFailure, SweepResult};
use super::CheckerError;

/// Names of invariants established so far; supports must come from here.
#[derive(Clone, Default, Debug)]
pub struct ProofContext {
    verified: BTreeSet<String>,
}

impl ProofContext {
    pub fn new() -> ProofContext {
        ProofContext::default()
    }

    pub fn mark(&mut self, name: &str) {
        self.verified.insert(name.to_string());
    }

    pub fn is_verified(&self, name: &str) -> bool {
        self.verified.contains(name)
    }
}

/// Result of a full proof run.
pub struct ProofOutcome {
    pub reports: Vec<CheckReport>,
    /// Name of the node that failed, if the run aborted.
    pub aborted_at: Option<String>,
    pub states: usize,
    pub transitions: usize,
    pub pairs_visited: u64,
}

impl ProofOutcome {
    pub fn all_passed(&self) -> bool {
        self.aborted_at.is_none()
    }
}

/// Pair predicates swept over the big-step pairs during a proof run.
fn sweep_list(cat: &Catalog) -> Vec<PairPredicate> {
    let mut names: Vec<&str> = Catalog::loc_mono_names().to_vec();
    names.extend([
        "READER_MONO",
        "AUX_1",
        "FRESH1",
        "FRESH1_KERNEL",
        "FRESH2",
        "AUX_k",
        "AUX_RPUB",
        "AUX_RREAD",
    ]);
    names.into_iter().map(|n| cat.pair(n).clone()).collect()
}

struct ProofRun<'a> {
    ts: &'a TransitionSystem,
    budget: &'a Budget,
    cat: Catalog,
    reach: ReachSet,
    ctx: ProofContext,
    reports: Vec<CheckReport>,
    sweep: Option<(Vec<PairPredicate>, SweepResult)>,
    failed: Option<String>,
}

impl<'a> ProofRun<'a> {
    fn push(&mut self, report: CheckReport) -> bool {
        let ok = report.passed();
        if ok {
            self.ctx.mark(&report.name);
        } else {
            self.failed = Some(report.name.clone());
        }
        self.reports.push(report);
        ok
    }

    fn ensure_sweep(&mut self) -> Result<(), CheckerError> {
        if self.sweep.is_none() {
            let preds = sweep_list(&self.cat);
            let result = sweep_pairs(&self.reach, &preds, Some(&self.cat), self.budget.max_pairs)?;
            self.sweep = Some((preds, result));
        }
        Ok(())
    }

    fn pair_direct(&mut self, name: &str) -> Result<Option<PairFailure>, CheckerError> {
        self.ensure_sweep()?;
        let (preds, result) = self.sweep.as_ref().unwrap();
        let idx = preds
            .iter()
            .position(|p| p.name == name)
            .unwrap_or_else(|| panic!("{name} not in sweep list"));
        Ok(result.failures[idx])
    }

    /// Direct check + plain or supported induction for a state predicate.
    fn state_node(&mut self, name: &str, supports: SupportMap) -> Result<bool, CheckerError> {
        let p = self.cat.state(name).clone();
        let direct = check_state_invariant(&p, &self.reach);
        if !direct.passed() {
            return Ok(self.push(direct));
        }
        let report = check_inductive_subject_to(&p, &supports, &self.ctx, self.ts)?;
        Ok(self.push(report))
    }

    /// Consequence node: the conjunction of verified premises implies the
    /// target pointwise on the full bounded domain; the target is also
    /// checked directly.
    fn consequence_node(&mut self, name: &str, premises: &[&str]) -> Result<bool, CheckerError> {
        for pr in premises {
            if !self.ctx.is_verified(pr) {
                return Err(CheckerError::UnverifiedSupport {
                    name: pr.to_string(),
                });
            }
        }
        let target = self.cat.state(name).clone();
        let mut premise = self.cat.state(premises[0]).clone();
        for pr in &premises[1..] {
            premise = conjoin(&premise, self.cat.state(pr));
        }
        let direct = check_state_invariant(&target, &self.reach);
        if !direct.passed() {
            return Ok(self.push(direct));
        }

        let fields = premise.footprint.union(target.footprint);
        let mut pointwise = true;
        let mut witness = None;
        for_each_state(self.ts, &self.ts.initial_state(), fields, &mut |s| {
            if premise.eval(s) && !target.eval(s) {
                pointwise = false;
                witness = Some(s.to_string());
                return false;
            }
            true
        });
        let mut report = CheckReport::new(
            name,
            if pointwise { Verdict::Holds } else { Verdict::Fails },
        );
        report.supports = premises.iter().map(|s| s.to_string()).collect();
        if let Some(w) = witness {
            report.witness = Some(format!("pointwise implication fails at {w}"));
        }
        Ok(self.push(report))
    }

    /// Pair node: big-step sweep + transition induction obligations.
    fn pair_node(
        &mut self,
        name: &str,
        obligations: TransitionObligations,
    ) -> Result<bool, CheckerError> {
        let failure = self.pair_direct(name)?;
        if let Some(f) = failure {
            let mut report = CheckReport::new(name, Verdict::Fails);
            report.counterexample = Some(pair_trace(&self.reach, f));
            return Ok(self.push(report));
        }
        let pp = self.cat.pair(name).clone();
        let report = check_inductive_transition(&pp, &obligations, &self.ctx, self.ts)?;
        Ok(self.push(report))
    }

    /// Pair consequence: premise implies target pointwise over the
    /// bounded pair domain, plus the direct sweep of the target.
    fn pair_consequence_node(&mut self, name: &str, premise: &str) -> Result<bool, CheckerError> {
        if !self.ctx.is_verified(premise) {
            return Err(CheckerError::UnverifiedSupport {
                name: premise.to_string(),
            });
        }
        let failure = self.pair_direct(name)?;
        if let Some(f) = failure {
            let mut report = CheckReport::new(name, Verdict::Fails);
            report.counterexample = Some(pair_trace(&self.reach, f));
            return Ok(self.push(report));
        }
        let pre = self.cat.pair(premise).clone();
        let target = self.cat.pair(name).clone();
        let first = pre.footprint_first.union(target.footprint_first);
        let second = pre.footprint_second.union(target.footprint_second);
        let mut ok = true;
        let init = self.ts.initial_state();
        for_each_state(self.ts, &init, first, &mut |a| {
            for_each_state(self.ts, &init, second, &mut |b| {
                if pre.eval(a, b) && !target.eval(a, b) {
                    ok = false;
                }
                ok
            });
            ok
        });
        let mut report = CheckReport::new(name, if ok { Verdict::Holds } else { Verdict::Fails });
        report.supports = vec![premise.to_string()];
        Ok(self.push(report))
    }

    /// Composition node: the sweep has already validated the derivation
    /// legs on path witnesses for every guarded reachable pair.
    fn composition_node(&mut self, name: &str, legs: &[&str]) -> Result<bool, CheckerError> {
        for leg in legs {
            if !self.ctx.is_verified(leg) {
                return Err(CheckerError::UnverifiedSupport {
                    name: leg.to_string(),
                });
            }
        }
        let failure = self.pair_direct(name)?;
        if let Some(f) = failure {
            let mut report = CheckReport::new(name, Verdict::Fails);
            report.counterexample = Some(pair_trace(&self.reach, f));
            return Ok(self.push(report));
        }
        let comp = {
            let (_, result) = self.sweep.as_ref().unwrap();
            result
                .compositions
                .iter()
                .find(|c| c.name == name)
                .cloned()
                .unwrap_or_else(|| panic!("no composition check named {name}"))
        };
        let mut report = CheckReport::new(name, Verdict::Holds);
        report.supports = legs.iter().map(|s| s.to_string()).collect();
        if let Some((f, why)) = comp.failure {
            report.verdict = Verdict::Fails;
            report.witness = Some(format!("composed derivation fails: {why}"));
            report.counterexample = Some(pair_trace(&self.reach, f));
        } else {
            report.witness = Some(format!(
                "derivation witnessed on {} guarded pairs",
                comp.guarded_pairs
            ));
        }
        Ok(self.push(report))
    }

    /// A theorem carried entirely by already-established invariants.
    fn theorem_node(&mut self, name: &str, premises: &[&str]) -> Result<bool, CheckerError> {
        for pr in premises {
            if !self.ctx.is_verified(pr) {
                return Err(CheckerError::UnverifiedSupport {
                    name: pr.to_string(),
                });
            }
        }
        let mut report = CheckReport::new(name, Verdict::Holds);
        report.supports = premises.iter().map(|s| s.to_string()).collect();
        Ok(self.push(report))
    }

    /// Extra evidence on the writer-only submodel (reader disabled).
    fn writer_only_node(&mut self, name: &str, pair: bool) -> Result<bool, CheckerError> {
        let wts = TransitionSystem::new(self.ts.variant, self.ts.round_bound)
            .with_mutation(self.ts.mutation)
            .writer_only();
        let reach = explore(&wts, self.budget)?;
        let node_name = format!("{name} (writer-only)");
        let mut report = if pair {
            let pp = self.cat.pair(name).clone();
            let result = sweep_pairs(&reach, std::slice::from_ref(&pp), None, self.budget.max_pairs)?;
            let mut rep = CheckReport::new(&node_name, Verdict::Holds);
            if let Some(f) = result.failures[0] {
                rep.verdict = Verdict::Fails;
                rep.counterexample = Some(pair_trace(&reach, f));
            }
            rep
        } else {
            let p = self.cat.state(name).clone();
            let mut rep = check_state_invariant(&p, &reach);
            rep.name = node_name.clone();
            rep
        };
        report.witness = Some(format!(
            "checked over {} writer-only states",
            reach.state_count()
        ));
        // Writer-only evidence supplements the main node; it does not
        // mark anything verified.
        let ok = report.passed();
        if !ok {
            self.failed = Some(report.name.clone());
        }
        self.reports.push(report);
        Ok(ok)
    }
}

/// Runs the whole dependency-ordered proof: the race-freedom
/// decomposition, the monotonicity lemmas behind coherence, and the
/// freshness bounds, each verified directly and discharged deductively.
pub fn run_paper_proof(ts: &TransitionSystem, budget: &Budget) -> Result<ProofOutcome, CheckerError> {
    assert_eq!(
        ts.variant,
        Variant::Timestamped,
        "the proof runs on the timestamped system"
    );
    let reach = explore(ts, budget)?;
    let mut run = ProofRun {
        ts,
        budget,
        cat: catalog(),
        reach,
        ctx: ProofContext::new(),
        reports: Vec::new(),
        sweep: None,
        failed: None,
    };

    macro_rules! node {
        ($e:expr) => {
            if !$e? {
                return Ok(finish(run));
            }
        };
    }

    let state_sup = |entries: &[(CommandId, Vec<Support>)]| -> SupportMap {
        entries.iter().cloned().collect()
    };
    let st = |run: &ProofRun, name: &str| Support::State(run.cat.state(name).clone());
    let sp_state = |run: &ProofRun, name: &str| PairSupport::StateAtStep(run.cat.state(name).clone());
    let sp_step = |run: &ProofRun, name: &str| PairSupport::StepPair(run.cat.pair(name).clone());
    let sp_prefix = |run: &ProofRun, name: &str| PairSupport::PrefixPair(run.cat.pair(name).clone());
    let sp_suffix = |run: &ProofRun, name: &str| PairSupport::SuffixPair(run.cat.pair(name).clone());

    // Race freedom, by decomposition into three inductive conditions.
    node!(run.state_node("COND1", SupportMap::new()));
    node!(run.state_node("COND2", SupportMap::new()));
    node!(run.state_node("COND3", SupportMap::new()));
    node!(run.consequence_node("RACE_FREEDOM_EX", &["COND1", "COND2", "COND3"]));
    node!(run.consequence_node("RACE_FREEDOM", &["RACE_FREEDOM_EX"]));

    // Stamp plumbing: bounds and publication facts.
    node!(run.state_node("STAMP_BOUND", SupportMap::new()));
    node!(run.state_node("AUX_WSTAMP", SupportMap::new()));
    node!(run.state_node("AUX_LPUB", SupportMap::new()));
    let sup = state_sup(&[(CommandId::Ap2, vec![st(&run, "AUX_LPUB")])]);
    node!(run.state_node("AUX_LLB_IND", sup));
    node!(run.consequence_node("AUX_LLB", &["AUX_LLB_IND"]));
    node!(run.writer_only_node("AUX_LLB", false));

    // Location monotonicity, one node per stamped location.
    for name in Catalog::loc_mono_names() {
        let obligations = TransitionObligations::right()
            .extension(CommandId::A, vec![sp_state(&run, "STAMP_BOUND")])
            .extension(CommandId::Ap1, vec![sp_state(&run, "STAMP_BOUND")])
            .base(CommandId::A, vec![sp_state(&run, "STAMP_BOUND")])
            .base(CommandId::Ap1, vec![sp_state(&run, "STAMP_BOUND")]);
        node!(run.pair_node(name, obligations));
    }

    // Monotonicity of the freshest published stamp.
    let aux1 = TransitionObligations::right()
        .extension(
            CommandId::Ap1,
            vec![sp_step(&run, "LOC_MONO_LI0"), sp_step(&run, "LOC_MONO_LI1")],
        )
        .extension(CommandId::Ap2, vec![sp_state(&run, "AUX_LPUB")])
        .base(
            CommandId::Ap1,
            vec![sp_step(&run, "LOC_MONO_LI0"), sp_step(&run, "LOC_MONO_LI1")],
        )
        .base(CommandId::Ap2, vec![sp_state(&run, "AUX_LPUB")]);
    node!(run.pair_node("AUX_1", aux1));
    node!(run.writer_only_node("AUX_1", true));

    // Reader-side stamp tracking.
    let sup = state_sup(&[
        (CommandId::A, vec![st(&run, "COND1")]),
        (CommandId::Ap1, vec![st(&run, "AUX_WSTAMP")]),
    ]);
    node!(run.state_node("AUX_a", sup));
    let sup = state_sup(&[
        (CommandId::Bm1, vec![st(&run, "AUX_a")]),
        (CommandId::A, vec![st(&run, "RACE_FREEDOM_EX")]),
    ]);
    node!(run.state_node("COND_A", sup));
    let sup = state_sup(&[
        (CommandId::B, vec![st(&run, "COND_A")]),
        (
            CommandId::Ap1,
            vec![
                Support::Step(run.cat.pair("LOC_MONO_LI0").clone()),
                Support::Step(run.cat.pair("LOC_MONO_LI1").clone()),
            ],
        ),
    ]);
    node!(run.state_node("AUX_RTM_LE", sup));

    // The round-entry strengthening is verified directly; its deductive
    // role is to discharge COND_B's announce obligation.
    {
        let p = run.cat.state("AUX_RTM_LE_B3").clone();
        let mut report = check_state_invariant(&p, &run.reach);
        report.supports = vec!["AUX_RTM_LE".to_string(), "AUX_1".to_string()];
        node!(Ok::<bool, CheckerError>(run.push(report)));
    }

    let sup = state_sup(&[
        (CommandId::Bm3, vec![st(&run, "AUX_RTM_LE_B3")]),
        (
            CommandId::Ap1,
            vec![
                Support::Step(run.cat.pair("LOC_MONO_LI0").clone()),
                Support::Step(run.cat.pair("LOC_MONO_LI1").clone()),
            ],
        ),
    ]);
    node!(run.state_node("COND_B", sup));

    // Reader monotonicity, then coherence.
    let rm = TransitionObligations::right()
        .extension(CommandId::Bm1, vec![sp_state(&run, "COND_B")])
        .extension(CommandId::B, vec![sp_state(&run, "COND_A")])
        .base(CommandId::Bm1, vec![sp_state(&run, "COND_B")])
        .base(CommandId::B, vec![sp_state(&run, "COND_A")]);
    node!(run.pair_node("READER_MONO", rm));

    // Freshness bounds.
    node!(run.state_node("AUX_e", SupportMap::new()));
    let sup = state_sup(&[
        (CommandId::Bm1, vec![st(&run, "AUX_a")]),
        (CommandId::A, vec![st(&run, "RACE_FREEDOM_EX")]),
    ]);
    node!(run.state_node("AUX_f", sup));

    let kernel = TransitionObligations::right().base_everywhere(vec![
        sp_state(&run, "AUX_e"),
        sp_state(&run, "AUX_f"),
    ]);
    node!(run.pair_node("FRESH1_KERNEL", kernel));
    node!(run.pair_consequence_node("FRESH1", "FRESH1_KERNEL"));

    let rpub = TransitionObligations::right()
        .extension(CommandId::Bm3, vec![sp_prefix(&run, "AUX_1")])
        .extension(
            CommandId::Ap1,
            vec![sp_step(&run, "LOC_MONO_LI0"), sp_step(&run, "LOC_MONO_LI1")],
        );
    node!(run.pair_node("AUX_RPUB", rpub));

    let rread = TransitionObligations::left()
        .extension(CommandId::Bm1, vec![sp_suffix(&run, "READER_MONO")])
        .extension(
            CommandId::Ap1,
            vec![sp_step(&run, "LOC_MONO_LI0"), sp_step(&run, "LOC_MONO_LI1")],
        );
    node!(run.pair_node("AUX_RREAD", rread));

    // Mark the location-monotonicity family name so composition legs can
    // reference it collectively.
    run.ctx.mark("LOC_MONO");
    node!(run.composition_node("AUX_k", &["AUX_LLB", "AUX_RPUB", "LOC_MONO", "AUX_RREAD"]));
    node!(run.composition_node("FRESH2", &["AUX_k", "READER_MONO"]));

    // The two top-level theorems close the run: reads never observe
    // writes out of order, and a read only returns a value from an
    // overlapping or immediately preceding write.
    node!(run.theorem_node("DATA_COHERENCE", &["READER_MONO"]));
    node!(run.theorem_node("DATA_FRESHNESS", &["FRESH1", "FRESH2"]));

    Ok(finish(run))
}

fn finish(run: ProofRun) -> ProofOutcome {
    let pairs_visited = run.sweep.as_ref().map_or(0, |(_, r)| r.pairs_visited);
    ProofOutcome {
        reports: run.reports,
        aborted_at: run.failed,
        states: run.reach.state_count(),
        transitions: run.reach.transition_count(),
        pairs_visited,
    }
}

/// Pointwise implication of state predicates over the full bounded
/// domain spanned by their footprints.
pub fn implies_on_bounded_domain(
    p: &StatePredicate,
    q: &StatePredicate,
    ts: &TransitionSystem,
) -> bool {
    let fields = p.footprint.union(q.footprint);
    let mut ok = true;
    for_each_state(ts, &ts.initial_state(), fields, &mut |s| {
        if p.eval(s) && !q.eval(s) {
            ok = false;
        }
        ok
    });
    ok
}

/// Convenience wrapper matching the reachable-set reading of implication.
pub fn implies_on_reachable(p: &StatePredicate, q: &StatePredicate, r: &ReachSet) -> bool {
    implies_on(p, q, r.states.iter())
}
