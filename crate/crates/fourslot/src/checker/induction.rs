//! Induction over state predicates.
//!
//! A state predicate is inductive when the initial state satisfies it and
//! every command preserves it from *any* state of the bounded syntactic
//! domain that satisfies it; reachability plays no role. The
//! subject-to variant lets each command's obligation additionally assume
//! an already-verified supporting invariant.

use std::collections::BTreeMap;

use crate::model::{CommandId, Field, FieldSet, Side, TransitionSystem};
use crate::predicates::{PairPredicate, StatePredicate};

use super::domain::for_each_state;
use super::proof::ProofContext;
use super::report::{CheckReport, Verdict};
use super::CheckerError;

/// One supporting invariant attached to a command's obligation.
#[derive(Clone, Debug)]
pub enum Support {
    /// Assumed at the pre-state of the step.
    State(StatePredicate),
    /// Assumed across the step itself, on `(pre, post)`.
    Step(PairPredicate),
}

impl Support {
    pub fn name(&self) -> &str {
        match self {
            Support::State(p) => &p.name,
            Support::Step(p) => &p.name,
        }
    }

    fn pre_footprint(&self) -> FieldSet {
        match self {
            Support::State(p) => p.footprint,
            Support::Step(p) => p.footprint_first.union(p.footprint_second),
        }
    }
}

pub type SupportMap = BTreeMap<CommandId, Vec<Support>>;

/// Removes the command's own program counter from an enumeration set;
/// the guard pins it.
fn drop_guard_pc(fields: FieldSet, c: CommandId) -> (FieldSet, Field) {
    match c.side() {
        Side::Writer => (fields.without(Field::Alpha), Field::Alpha),
        Side::Reader => (fields.without(Field::Beta), Field::Beta),
    }
}

fn base_state_for(ts: &TransitionSystem, c: CommandId) -> crate::model::GlobalState {
    let mut base = ts.initial_state();
    if let Some(pc) = c.writer_pc() {
        base.alpha = pc;
    }
    if let Some(pc) = c.reader_pc() {
        base.beta = pc;
    }
    base
}

/// Checks `init ⟹ p` and, per command, `p ∧ supports ∧ c ⟹ p'` over the
/// bounded domain. Every support must already be verified in `ctx`.
pub fn check_inductive_subject_to(
    p: &StatePredicate,
    supports: &SupportMap,
    ctx: &ProofContext,
    ts: &TransitionSystem,
) -> Result<CheckReport, CheckerError> {
    for sup in supports.values().flatten() {
        if !ctx.is_verified(sup.name()) {
            return Err(CheckerError::UnverifiedSupport {
                name: sup.name().to_string(),
            });
        }
    }

    let mut report = CheckReport::new(
        &p.name,
        if supports.is_empty() {
            Verdict::Inductive
        } else {
            Verdict::InductiveSubjectTo
        },
    );
    let mut names: Vec<String> = supports
        .values()
        .flatten()
        .map(|s| s.name().to_string())
        .collect();
    names.sort();
    names.dedup();
    report.supports = names;
    report.nontrivial = nontrivial_commands(p, ts);

    if !p.eval(&ts.initial_state()) {
        report.verdict = Verdict::Fails;
        report.witness = Some(format!("initialization violates {}", p.name));
        return Ok(report);
    }

    let empty = Vec::new();
    let failures: Vec<Option<(CommandId, String)>> = {
        super::par_map_commands(|c| {
                let sups = supports.get(&c).unwrap_or(&empty);
                let mut fields = p
                    .footprint
                    .union(p.antecedent_footprint)
                    .union(ts.command_reads(c));
                for s in sups {
                    fields = fields.union(s.pre_footprint());
                }
                let (fields, _) = drop_guard_pc(fields, c);
                let base = base_state_for(ts, c);
                let mut offending = None;
                for_each_state(ts, &base, fields, &mut |s| {
                    if !ts.is_enabled(s, c) {
                        return true;
                    }
                    if !p.eval(s) {
                        return true;
                    }
                    let mut next = None;
                    for sup in sups {
                        let ok = match sup {
                            Support::State(q) => q.eval(s),
                            Support::Step(pp) => {
                                let n = *next.get_or_insert_with(|| ts.step(s, c));
                                pp.eval(s, &n)
                            }
                        };
                        if !ok {
                            return true;
                        }
                    }
                    let n = next.unwrap_or_else(|| ts.step(s, c));
                    if !p.eval(&n) {
                        offending = Some(format!(
                            "command {} breaks {}:\n  pre:  {}\n  post: {}",
                            c.label(),
                            p.name,
                            s,
                            n
                        ));
                        return false;
                    }
                    true
                });
                offending.map(|w| (c, w))
        })
    };
    if let Some(failure) = failures.into_iter().flatten().next() {
        report.verdict = Verdict::NotInductive(failure.0);
        report.witness = Some(failure.1);
    }
    Ok(report)
}

/// Plain induction, no supports.
pub fn check_inductive(p: &StatePredicate, ts: &TransitionSystem) -> CheckReport {
    check_inductive_subject_to(p, &SupportMap::new(), &ProofContext::new(), ts)
        .expect("no supports to verify")
}

/// Classifies each command's obligation. An obligation counts as
/// non-trivial when the command can newly establish the predicate's
/// antecedent, or, with the antecedent satisfiable after the step, it
/// writes a variable the predicate mentions or fetches a control-array
/// entry through an index variable the predicate mentions. Everything
/// else is discharged by "the antecedent stays false" or "no mentioned
/// variable moves".
pub fn nontrivial_commands(p: &StatePredicate, ts: &TransitionSystem) -> Vec<CommandId> {
    let mut out = Vec::new();
    for c in CommandId::ALL {
        let writes_mentioned = ts.command_writes_data(c).intersects(p.vars);
        let indexes_mentioned = c.control_index_reads().intersects(p.vars);

        let fields = p.antecedent_footprint.union(ts.command_reads(c));
        let (fields, _) = drop_guard_pc(fields, c);
        let base = base_state_for(ts, c);
        let mut turn = false;
        let mut post_possible = false;
        for_each_state(ts, &base, fields, &mut |s| {
            if !ts.is_enabled(s, c) {
                return true;
            }
            let next = ts.step(s, c);
            if p.antecedent(&next) {
                post_possible = true;
                if !p.antecedent(s) {
                    turn = true;
                }
            }
            !(turn && post_possible)
        });

        if turn || ((writes_mentioned || indexes_mentioned) && post_possible) {
            out.push(c);
        }
    }
    out
}
