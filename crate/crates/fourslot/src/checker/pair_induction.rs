//! Induction over state-pair predicates.
//!
//! A pair predicate is an inductive transition invariant when (base)
//! every single step satisfies it and (extension) it survives extending
//! a chain by one command. Chains can be extended at either end; the
//! catalog's forward-anchored predicates need the left-extension form,
//! everything else the right one. Supports are already-verified
//! invariants assumed at the positions the obligation names.

use std::collections::BTreeMap;

use crate::model::{CommandId, Field, FieldSet, Side, TransitionSystem};
use crate::predicates::{PairPredicate, StatePredicate};

use super::domain::for_each_state;
use super::proof::ProofContext;
use super::report::{CheckReport, Verdict};
use super::CheckerError;

/// Which end of the chain the extension obligation grows.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExtendDirection {
    /// `pp(s, s°) ∧ c(s°, s') ⟹ pp(s, s')`.
    Right,
    /// `c(s, s°) ∧ pp(s°, s') ⟹ pp(s, s')`.
    Left,
}

/// One supporting invariant for a pair obligation.
#[derive(Clone, Debug)]
pub enum PairSupport {
    /// Right extension only: assumed on the chain pair `(s, s°)`.
    PrefixPair(PairPredicate),
    /// Assumed at the state about to execute the command.
    StateAtStep(StatePredicate),
    /// Assumed across the executed step itself.
    StepPair(PairPredicate),
    /// Left extension only: assumed on the remaining chain `(s°, s')`.
    SuffixPair(PairPredicate),
}

impl PairSupport {
    pub fn name(&self) -> &str {
        match self {
            PairSupport::PrefixPair(p) | PairSupport::StepPair(p) | PairSupport::SuffixPair(p) => {
                &p.name
            }
            PairSupport::StateAtStep(p) => &p.name,
        }
    }
}

/// Per-command supports for the extension and base obligations.
#[derive(Clone, Default, Debug)]
pub struct TransitionObligations {
    pub direction: Option<ExtendDirection>,
    pub extension: BTreeMap<CommandId, Vec<PairSupport>>,
    /// Base supports: state invariants assumed at the step's pre-state
    /// and pair invariants assumed across the step.
    pub base: BTreeMap<CommandId, Vec<PairSupport>>,
}

impl TransitionObligations {
    pub fn right() -> Self {
        TransitionObligations {
            direction: Some(ExtendDirection::Right),
            ..Default::default()
        }
    }

    pub fn left() -> Self {
        TransitionObligations {
            direction: Some(ExtendDirection::Left),
            ..Default::default()
        }
    }

    pub fn extension(mut self, c: CommandId, sups: Vec<PairSupport>) -> Self {
        self.extension.insert(c, sups);
        self
    }

    pub fn base(mut self, c: CommandId, sups: Vec<PairSupport>) -> Self {
        self.base.insert(c, sups);
        self
    }

    pub fn base_everywhere(mut self, sups: Vec<PairSupport>) -> Self {
        for c in CommandId::ALL {
            self.base.insert(c, sups.clone());
        }
        self
    }

    fn support_names(&self) -> Vec<String> {
        let mut names: Vec<String> = self
            .extension
            .values()
            .chain(self.base.values())
            .flatten()
            .map(|s| s.name().to_string())
            .collect();
        names.sort();
        names.dedup();
        names
    }
}

fn guard_pc_field(c: CommandId) -> Field {
    match c.side() {
        Side::Writer => Field::Alpha,
        Side::Reader => Field::Beta,
    }
}

fn pin_guard(ts: &TransitionSystem, c: CommandId) -> crate::model::GlobalState {
    let mut base = ts.initial_state();
    if let Some(pc) = c.writer_pc() {
        base.alpha = pc;
    }
    if let Some(pc) = c.reader_pc() {
        base.beta = pc;
    }
    base
}

/// Checks the base and extension obligations of `pp` per command, using
/// the given supports. Every support must already be verified.
pub fn check_inductive_transition(
    pp: &PairPredicate,
    obligations: &TransitionObligations,
    ctx: &ProofContext,
    ts: &TransitionSystem,
) -> Result<CheckReport, CheckerError> {
    for sup in obligations
        .extension
        .values()
        .chain(obligations.base.values())
        .flatten()
    {
        if !ctx.is_verified(sup.name()) {
            return Err(CheckerError::UnverifiedSupport {
                name: sup.name().to_string(),
            });
        }
    }

    let names = obligations.support_names();
    let mut report = CheckReport::new(
        &pp.name,
        if names.is_empty() {
            Verdict::Inductive
        } else {
            Verdict::InductiveSubjectTo
        },
    );
    report.supports = names;

    let direction = obligations.direction.unwrap_or(ExtendDirection::Right);
    let empty = Vec::new();

    let check_command = |c: CommandId| -> Option<(CommandId, String)> {
        // Base: every single step satisfies pp.
        let base_sups = obligations.base.get(&c).unwrap_or(&empty);
        let mut fields = pp
            .footprint_first
            .union(pp.footprint_second)
            .union(ts.command_reads(c));
        for s in base_sups {
            fields = fields.union(support_pre_footprint(s));
        }
        let fields = fields.without(guard_pc_field(c));
        let pinned = pin_guard(ts, c);
        let mut witness = None;
        for_each_state(ts, &pinned, fields, &mut |s| {
            if !ts.is_enabled(s, c) {
                return true;
            }
            let next = ts.step(s, c);
            for sup in base_sups {
                match sup {
                    PairSupport::StateAtStep(q) => {
                        if !q.eval(s) {
                            return true;
                        }
                    }
                    PairSupport::StepPair(q) => {
                        if !q.eval(s, &next) {
                            return true;
                        }
                    }
                    _ => panic!("base obligations take state or step supports"),
                }
            }
            if !pp.eval(s, &next) {
                witness = Some(format!(
                    "single step {} violates {}:\n  pre:  {}\n  post: {}",
                    c.label(),
                    pp.name,
                    s,
                    next
                ));
                return false;
            }
            true
        });
        if let Some(w) = witness {
            return Some((c, w));
        }

        // Extension: pp survives growing the chain by this command.
        let ext_sups = obligations.extension.get(&c).unwrap_or(&empty);
        let mut witness = None;
        match direction {
            ExtendDirection::Right => {
                // Enumerate s (chain start) and s° (the stepped state).
                let mut first_fields = pp.footprint_first;
                let mut mid_fields = pp.footprint_second.union(ts.command_reads(c));
                for sup in ext_sups {
                    match sup {
                        PairSupport::PrefixPair(q) => {
                            first_fields = first_fields.union(q.footprint_first);
                            mid_fields = mid_fields.union(q.footprint_second);
                        }
                        PairSupport::StateAtStep(q) => {
                            mid_fields = mid_fields.union(q.footprint);
                        }
                        PairSupport::StepPair(q) => {
                            mid_fields = mid_fields
                                .union(q.footprint_first)
                                .union(q.footprint_second);
                        }
                        PairSupport::SuffixPair(_) => {
                            panic!("suffix supports apply to left extensions")
                        }
                    }
                }
                let mid_fields = mid_fields.without(guard_pc_field(c));
                let pinned = pin_guard(ts, c);
                for_each_state(ts, &ts.initial_state(), first_fields, &mut |first| {
                    let mut keep_going = true;
                    for_each_state(ts, &pinned, mid_fields, &mut |mid| {
                        if !ts.is_enabled(mid, c) {
                            return true;
                        }
                        if !pp.eval(first, mid) {
                            return true;
                        }
                        let mut next = None;
                        for sup in ext_sups {
                            let ok = match sup {
                                PairSupport::PrefixPair(q) => q.eval(first, mid),
                                PairSupport::StateAtStep(q) => q.eval(mid),
                                PairSupport::StepPair(q) => {
                                    let n = *next.get_or_insert_with(|| ts.step(mid, c));
                                    q.eval(mid, &n)
                                }
                                PairSupport::SuffixPair(_) => unreachable!(),
                            };
                            if !ok {
                                return true;
                            }
                        }
                        let n = next.unwrap_or_else(|| ts.step(mid, c));
                        if !pp.eval(first, &n) {
                            witness = Some(format!(
                                "extending by {} violates {}:\n  start: {}\n  pre:   {}\n  post:  {}",
                                c.label(),
                                pp.name,
                                first,
                                mid,
                                n
                            ));
                            keep_going = false;
                            return false;
                        }
                        true
                    });
                    keep_going
                });
            }
            ExtendDirection::Left => {
                // Enumerate s (about to run c) and s' (chain end);
                // the stepped state s° is computed.
                let mut first_fields = pp.footprint_first.union(ts.command_reads(c));
                let mut last_fields = pp.footprint_second;
                for sup in ext_sups {
                    match sup {
                        PairSupport::SuffixPair(q) => {
                            last_fields = last_fields.union(q.footprint_second);
                        }
                        PairSupport::StateAtStep(q) => {
                            first_fields = first_fields.union(q.footprint);
                        }
                        PairSupport::StepPair(q) => {
                            first_fields = first_fields
                                .union(q.footprint_first)
                                .union(q.footprint_second);
                        }
                        PairSupport::PrefixPair(_) => {
                            panic!("prefix supports apply to right extensions")
                        }
                    }
                }
                let first_fields = first_fields.without(guard_pc_field(c));
                let pinned = pin_guard(ts, c);
                for_each_state(ts, &pinned, first_fields, &mut |first| {
                    if !ts.is_enabled(first, c) {
                        return true;
                    }
                    let stepped = ts.step(first, c);
                    for sup in ext_sups {
                        let ok = match sup {
                            PairSupport::StateAtStep(q) => q.eval(first),
                            PairSupport::StepPair(q) => q.eval(first, &stepped),
                            _ => true,
                        };
                        if !ok {
                            return true;
                        }
                    }
                    let mut keep_going = true;
                    for_each_state(ts, &ts.initial_state(), last_fields, &mut |last| {
                        if !pp.eval(&stepped, last) {
                            return true;
                        }
                        for sup in ext_sups {
                            if let PairSupport::SuffixPair(q) = sup {
                                if !q.eval(&stepped, last) {
                                    return true;
                                }
                            }
                        }
                        if !pp.eval(first, last) {
                            witness = Some(format!(
                                "prepending {} violates {}:\n  pre:     {}\n  stepped: {}\n  end:     {}",
                                c.label(),
                                pp.name,
                                first,
                                stepped,
                                last
                            ));
                            keep_going = false;
                            return false;
                        }
                        true
                    });
                    keep_going
                });
            }
        }
        witness.map(|w| (c, w))
    };

    let failures: Vec<Option<(CommandId, String)>> = super::par_map_commands(check_command);
    if let Some(failure) = failures.into_iter().flatten().next() {
        report.verdict = Verdict::NotInductive(failure.0);
        report.witness = Some(failure.1);
    }
    Ok(report)
}

fn support_pre_footprint(s: &PairSupport) -> FieldSet {
    match s {
        PairSupport::PrefixPair(p) | PairSupport::StepPair(p) | PairSupport::SuffixPair(p) => {
            p.footprint_first.union(p.footprint_second)
        }
        PairSupport::StateAtStep(p) => p.footprint,
    }
}
