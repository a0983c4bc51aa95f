//! Consequence, conjunction, and composition over predicates.

use crate::model::GlobalState;

use super::pred::{PairPredicate, StatePredicate};

/// Pointwise implication `p ⟹ q` over a supplied state domain.
pub fn implies_on<'a>(
    p: &StatePredicate,
    q: &StatePredicate,
    domain: impl IntoIterator<Item = &'a GlobalState>,
) -> bool {
    domain.into_iter().all(|s| !p.eval(s) || q.eval(s))
}

/// The conjunction of two state predicates, with the union footprint.
pub fn conjoin(p: &StatePredicate, q: &StatePredicate) -> StatePredicate {
    let (pe, qe) = (p.clone(), q.clone());
    StatePredicate::new(
        &format!("({} AND {})", p.name, q.name),
        &format!("{}; and {}", p.description, q.description),
        p.footprint.union(q.footprint),
        move |s| pe.eval(s) && qe.eval(s),
    )
    .with_vars(p.vars.union(q.vars))
}

/// Relational composition of two pair predicates. A pair `(s, s')`
/// satisfies the composition via a witness `mid` iff the first predicate
/// holds on `(s, mid)` and the second on `(mid, s')`.
#[derive(Clone)]
pub struct Composed {
    pub name: String,
    pub first: PairPredicate,
    pub second: PairPredicate,
}

impl Composed {
    pub fn holds_via(&self, s: &GlobalState, mid: &GlobalState, s2: &GlobalState) -> bool {
        self.first.eval(s, mid) && self.second.eval(mid, s2)
    }
}

pub fn compose(first: &PairPredicate, second: &PairPredicate) -> Composed {
    Composed {
        name: format!("({} ; {})", first.name, second.name),
        first: first.clone(),
        second: second.clone(),
    }
}
