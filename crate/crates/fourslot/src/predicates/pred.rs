//! Predicate types: evaluatable conditions with declared footprints.

use std::sync::Arc;

use crate::model::{FieldSet, GlobalState};

pub type StateEval = Arc<dyn Fn(&GlobalState) -> bool + Send + Sync>;
pub type PairEval = Arc<dyn Fn(&GlobalState, &GlobalState) -> bool + Send + Sync>;

/// A named, total predicate over single states.
#[derive(Clone)]
pub struct StatePredicate {
    pub name: String,
    pub description: String,
    eval: StateEval,
    /// Every field the predicate reads.
    pub footprint: FieldSet,
    /// For predicates of implication shape, the antecedent on its own.
    antecedent: Option<StateEval>,
    pub antecedent_footprint: FieldSet,
    /// Non-program-counter variables mentioned anywhere in the predicate;
    /// drives the trivial/non-trivial classification of induction
    /// obligations.
    pub vars: FieldSet,
}

impl StatePredicate {
    pub fn new(
        name: &str,
        description: &str,
        footprint: FieldSet,
        eval: impl Fn(&GlobalState) -> bool + Send + Sync + 'static,
    ) -> StatePredicate {
        StatePredicate {
            name: name.to_string(),
            description: description.to_string(),
            eval: Arc::new(eval),
            footprint,
            antecedent: None,
            antecedent_footprint: FieldSet::EMPTY,
            vars: footprint,
        }
    }

    pub fn with_antecedent(
        mut self,
        footprint: FieldSet,
        antecedent: impl Fn(&GlobalState) -> bool + Send + Sync + 'static,
    ) -> StatePredicate {
        self.antecedent = Some(Arc::new(antecedent));
        self.antecedent_footprint = footprint;
        self
    }

    pub fn with_vars(mut self, vars: FieldSet) -> StatePredicate {
        self.vars = vars;
        self
    }

    #[inline]
    pub fn eval(&self, s: &GlobalState) -> bool {
        (self.eval)(s)
    }

    /// The antecedent value, or `true` for unconditional predicates.
    #[inline]
    pub fn antecedent(&self, s: &GlobalState) -> bool {
        match &self.antecedent {
            Some(a) => a(s),
            None => true,
        }
    }

    pub fn has_antecedent(&self) -> bool {
        self.antecedent.is_some()
    }
}

impl std::fmt::Debug for StatePredicate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("StatePredicate").field("name", &self.name).finish()
    }
}

/// A named, total predicate over ordered state pairs. Pair predicates are
/// only ever evaluated on pairs where the first state precedes the second
/// along some execution.
#[derive(Clone)]
pub struct PairPredicate {
    pub name: String,
    pub description: String,
    eval: PairEval,
    /// Fields read from the earlier state.
    pub footprint_first: FieldSet,
    /// Fields read from the later state.
    pub footprint_second: FieldSet,
}

impl PairPredicate {
    pub fn new(
        name: &str,
        description: &str,
        footprint_first: FieldSet,
        footprint_second: FieldSet,
        eval: impl Fn(&GlobalState, &GlobalState) -> bool + Send + Sync + 'static,
    ) -> PairPredicate {
        PairPredicate {
            name: name.to_string(),
            description: description.to_string(),
            eval: Arc::new(eval),
            footprint_first,
            footprint_second,
        }
    }

    #[inline]
    pub fn eval(&self, first: &GlobalState, second: &GlobalState) -> bool {
        (self.eval)(first, second)
    }
}

impl std::fmt::Debug for PairPredicate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PairPredicate").field("name", &self.name).finish()
    }
}
