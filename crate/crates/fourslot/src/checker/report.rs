//! Check verdicts, counterexample traces, and their rendered forms.

use crate::model::{CommandId, GlobalState, TransitionSystem};

/// Outcome of one check.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    /// True on every reachable state (or reachable big-step pair).
    Holds,
    /// False somewhere reachable.
    Fails,
    /// Established by induction with no supporting invariants.
    Inductive,
    /// Established by induction with the listed supports.
    InductiveSubjectTo,
    /// Some induction obligation failed at the named command.
    NotInductive(CommandId),
}

impl Verdict {
    pub fn passed(&self) -> bool {
        !matches!(self, Verdict::Fails | Verdict::NotInductive(_))
    }

    pub fn label(&self) -> String {
        match self {
            Verdict::Holds => "holds".to_string(),
            Verdict::Fails => "fails".to_string(),
            Verdict::Inductive => "inductive".to_string(),
            Verdict::InductiveSubjectTo => "inductive-subject-to".to_string(),
            Verdict::NotInductive(c) => format!("not-inductive({})", c.label()),
        }
    }
}

/// A command-labelled state sequence starting at the initial state. For
/// pair-predicate counterexamples, `pair_split` marks the index of the
/// earlier state of the offending pair; the final state is the later one.
#[derive(Clone, Debug)]
pub struct Trace {
    pub states: Vec<GlobalState>,
    pub commands: Vec<CommandId>,
    pub pair_split: Option<usize>,
}

impl Trace {
    /// Replays every step through the transition relation and checks the
    /// recorded states match exactly.
    pub fn replay(&self, ts: &TransitionSystem) -> Result<(), String> {
        if self.states.is_empty() {
            return Err("empty trace".to_string());
        }
        if self.states[0] != ts.initial_state() {
            return Err("trace does not start at the initial state".to_string());
        }
        if self.commands.len() + 1 != self.states.len() {
            return Err("command/state count mismatch".to_string());
        }
        for (i, c) in self.commands.iter().enumerate() {
            if !ts.is_enabled(&self.states[i], *c) {
                return Err(format!("step {i}: command {} not enabled", c.label()));
            }
            let next = ts.step(&self.states[i], *c);
            if next != self.states[i + 1] {
                return Err(format!("step {i}: successor mismatch"));
            }
        }
        Ok(())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("  init  {}\n", self.states[0]));
        for (i, c) in self.commands.iter().enumerate() {
            let mark = match self.pair_split {
                Some(k) if k == i + 1 => " <- pair start",
                _ => "",
            };
            out.push_str(&format!("  {:>4}  {}{}\n", c.label(), self.states[i + 1], mark));
        }
        out
    }
}

/// Verdict for one predicate, with whatever evidence the check produced.
#[derive(Clone, Debug)]
pub struct CheckReport {
    pub name: String,
    pub verdict: Verdict,
    /// Names of supporting invariants used, if any.
    pub supports: Vec<String>,
    /// Commands whose induction obligation was non-trivial.
    pub nontrivial: Vec<CommandId>,
    /// Reachable counterexample, when the check failed on the reachable
    /// set; always replayable through the step function.
    pub counterexample: Option<Trace>,
    /// Rendering of an offending induction witness, when an obligation
    /// failed on the bounded domain.
    pub witness: Option<String>,
}

impl CheckReport {
    pub fn new(name: &str, verdict: Verdict) -> CheckReport {
        CheckReport {
            name: name.to_string(),
            verdict,
            supports: Vec::new(),
            nontrivial: Vec::new(),
            counterexample: None,
            witness: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }

    /// One stable, machine-readable line: tab-separated fields in fixed
    /// order.
    pub fn structured_line(&self, description: &str) -> String {
        let nontrivial = self
            .nontrivial
            .iter()
            .map(|c| c.label())
            .collect::<Vec<_>>()
            .join(",");
        let cex = match &self.counterexample {
            Some(t) => format!("{} steps", t.commands.len()),
            None => String::new(),
        };
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}",
            self.name,
            self.verdict.label(),
            self.supports.join(","),
            nontrivial,
            cex,
            description,
        )
    }
}
