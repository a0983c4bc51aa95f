//! The predicate catalog.

use crate::model::{
    Field, FieldSet, GlobalState, ReaderPc, Stamp, WriterPc, LI_TM_FIELDS, LI_VAL_FIELDS,
    SLOT_FIELDS,
};

use super::pred::{PairPredicate, StatePredicate};

/// Stamps mapped onto a total order with the sentinel below every
/// natural, so that bound arithmetic like `rtm < wtm + 1` stays total.
#[inline]
pub fn st(s: Stamp) -> i64 {
    match s {
        Some(n) => n as i64,
        None => -1,
    }
}

#[inline]
fn li_tm(s: &GlobalState, pair: u8) -> i64 {
    st(s.li[pair as usize].stamp)
}

#[inline]
fn slot_tm(s: &GlobalState, pair: u8, index: u8) -> i64 {
    st(s.slots[pair as usize][index as usize])
}

/// One catalog entry: a state predicate or a pair predicate.
#[derive(Clone, Debug)]
pub enum CatalogEntry {
    State(StatePredicate),
    Pair(PairPredicate),
}

impl CatalogEntry {
    pub fn name(&self) -> &str {
        match self {
            CatalogEntry::State(p) => &p.name,
            CatalogEntry::Pair(p) => &p.name,
        }
    }

    pub fn description(&self) -> &str {
        match self {
            CatalogEntry::State(p) => &p.description,
            CatalogEntry::Pair(p) => &p.description,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CatalogEntry::State(_) => "state",
            CatalogEntry::Pair(_) => "pair",
        }
    }
}

/// The full, name-indexed predicate catalog.
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn get(&self, name: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.name() == name)
    }

    pub fn state(&self, name: &str) -> &StatePredicate {
        match self.get(name) {
            Some(CatalogEntry::State(p)) => p,
            _ => panic!("no state predicate named {name}"),
        }
    }

    pub fn pair(&self, name: &str) -> &PairPredicate {
        match self.get(name) {
            Some(CatalogEntry::Pair(p)) => p,
            _ => panic!("no pair predicate named {name}"),
        }
    }

    /// The six stamped locations, for per-location monotonicity checks.
    pub fn loc_mono_names() -> [&'static str; 6] {
        [
            "LOC_MONO_LI0",
            "LOC_MONO_LI1",
            "LOC_MONO_D00",
            "LOC_MONO_D01",
            "LOC_MONO_D10",
            "LOC_MONO_D11",
        ]
    }
}

const BITS_RACE: FieldSet = FieldSet::of(&[Field::Wp, Field::Rp, Field::Wi, Field::Ri]);

fn no_shared_slot(s: &GlobalState) -> bool {
    s.wp != s.rp || s.wi != s.ri
}

/// Builds the catalog. Names are unique; every entry is total on all
/// states, including sentinel-stamped ones.
pub fn catalog() -> Catalog {
    let mut entries: Vec<CatalogEntry> = Vec::new();
    let mut state = |p: StatePredicate| entries.push(CatalogEntry::State(p));

    state(
        StatePredicate::new(
            "RACE_FREEDOM",
            "when the writer is at its slot store and the reader at its slot fetch, they target different slots",
            FieldSet::of(&[Field::Alpha, Field::Beta]).union(BITS_RACE),
            |s| !(s.alpha == WriterPc::A && s.beta == ReaderPc::B) || no_shared_slot(s),
        )
        .with_antecedent(FieldSet::of(&[Field::Alpha, Field::Beta]), |s| {
            s.alpha == WriterPc::A && s.beta == ReaderPc::B
        })
        .with_vars(BITS_RACE),
    );

    state(
        StatePredicate::new(
            "RACE_FREEDOM_EX",
            "slot targets differ whenever the writer is in its store/publish window and the reader is outside its announce window",
            FieldSet::of(&[Field::Alpha, Field::Beta]).union(BITS_RACE),
            |s| !rfx_window(s) || no_shared_slot(s),
        )
        .with_antecedent(FieldSet::of(&[Field::Alpha, Field::Beta]), rfx_window)
        .with_vars(BITS_RACE),
    );

    let cond1_vars = FieldSet::of(&[Field::Wi, Field::Wp]).union(LI_VAL_FIELDS);
    state(
        StatePredicate::new(
            "COND1",
            "while the writer is between slot store and index publish, its slot target differs from the published index of its pair",
            FieldSet::of(&[Field::Alpha]).union(cond1_vars),
            |s| {
                !(s.alpha == WriterPc::A || s.alpha == WriterPc::Ap1)
                    || s.wi != s.li[s.wp as usize].value
            },
        )
        .with_antecedent(FieldSet::of(&[Field::Alpha]), |s| {
            s.alpha == WriterPc::A || s.alpha == WriterPc::Ap1
        })
        .with_vars(cond1_vars),
    );

    let cond2_vars = FieldSet::of(&[Field::Reading, Field::Rp]);
    state(
        StatePredicate::new(
            "COND2",
            "outside the announce step, the announced pair equals the reader's working pair",
            FieldSet::of(&[Field::Beta]).union(cond2_vars),
            |s| s.beta == ReaderPc::Bm2 || s.reading == s.rp,
        )
        .with_antecedent(FieldSet::of(&[Field::Beta]), |s| s.beta != ReaderPc::Bm2)
        .with_vars(cond2_vars),
    );

    let cond3_vars = FieldSet::of(&[Field::Wp, Field::Reading, Field::Ri, Field::Rp])
        .union(LI_VAL_FIELDS);
    state(
        StatePredicate::new(
            "COND3",
            "while the writer is mid-round and the reader is outside announce/fetch-index, the writer avoids the announced pair or the reader's slot is the published one",
            FieldSet::of(&[Field::Alpha, Field::Beta]).union(cond3_vars),
            |s| {
                let alpha_in = matches!(s.alpha, WriterPc::Am1 | WriterPc::A | WriterPc::Ap1);
                let beta_out = !matches!(s.beta, ReaderPc::Bm2 | ReaderPc::Bm1);
                !(alpha_in && beta_out)
                    || s.wp != s.reading
                    || s.ri == s.li[s.rp as usize].value
            },
        )
        .with_antecedent(FieldSet::of(&[Field::Alpha, Field::Beta]), |s| {
            matches!(s.alpha, WriterPc::Am1 | WriterPc::A | WriterPc::Ap1)
                && !matches!(s.beta, ReaderPc::Bm2 | ReaderPc::Bm1)
        })
        .with_vars(cond3_vars),
    );

    let stamp_fields = LI_TM_FIELDS.union(SLOT_FIELDS).with(Field::Wtm);
    state(StatePredicate::new(
        "STAMP_BOUND",
        "every stored stamp is at most the current round counter",
        stamp_fields,
        |s| {
            let w = st(s.wtm);
            li_tm(s, 0) <= w
                && li_tm(s, 1) <= w
                && (0..2).all(|p| (0..2).all(|i| slot_tm(s, p, i) <= w))
        },
    ));

    let cond_a_vars = FieldSet::of(&[Field::Rtm, Field::Rp, Field::Ri]).union(SLOT_FIELDS);
    state(
        StatePredicate::new(
            "COND_A",
            "at the slot fetch, the reader's stamp equals the stamp stored in its target slot",
            FieldSet::of(&[Field::Beta]).union(cond_a_vars),
            |s| s.beta != ReaderPc::B || st(s.rtm) == slot_tm(s, s.rp, s.ri),
        )
        .with_antecedent(FieldSet::of(&[Field::Beta]), |s| s.beta == ReaderPc::B)
        .with_vars(cond_a_vars),
    );

    let cond_b_vars = FieldSet::of(&[Field::Rtm, Field::Rp]).union(LI_TM_FIELDS);
    state(
        StatePredicate::new(
            "COND_B",
            "between announce and index fetch, the reader's stamp is at most the published stamp of its pair",
            FieldSet::of(&[Field::Beta]).union(cond_b_vars),
            |s| {
                !matches!(s.beta, ReaderPc::Bm2 | ReaderPc::Bm1)
                    || st(s.rtm) <= li_tm(s, s.rp)
            },
        )
        .with_antecedent(FieldSet::of(&[Field::Beta]), |s| {
            matches!(s.beta, ReaderPc::Bm2 | ReaderPc::Bm1)
        })
        .with_vars(cond_b_vars),
    );

    state(StatePredicate::new(
        "AUX_a",
        "each pair's published stamp equals the stamp of the slot its index points at",
        LI_VAL_FIELDS.union(LI_TM_FIELDS).union(SLOT_FIELDS),
        |s| (0..2u8).all(|p| li_tm(s, p) == slot_tm(s, p, s.li[p as usize].value)),
    ));

    let aux_ri_vars = FieldSet::of(&[Field::Ri, Field::Rp]).union(LI_VAL_FIELDS);
    state(
        StatePredicate::new(
            "AUX_RI",
            "outside announce/index-fetch, the reader's slot equals the published index of its pair (falsified by the mechanical check; kept for the record)",
            FieldSet::of(&[Field::Beta]).union(aux_ri_vars),
            |s| {
                matches!(s.beta, ReaderPc::Bm2 | ReaderPc::Bm1)
                    || s.ri == s.li[s.rp as usize].value
            },
        )
        .with_antecedent(FieldSet::of(&[Field::Beta]), |s| {
            !matches!(s.beta, ReaderPc::Bm2 | ReaderPc::Bm1)
        })
        .with_vars(aux_ri_vars),
    );

    let aux_wstamp_vars = FieldSet::of(&[Field::Wtm, Field::Wp, Field::Wi]).union(SLOT_FIELDS);
    state(
        StatePredicate::new(
            "AUX_WSTAMP",
            "right after the slot store, the target slot carries the current round stamp",
            FieldSet::of(&[Field::Alpha]).union(aux_wstamp_vars),
            |s| s.alpha != WriterPc::Ap1 || st(s.wtm) == slot_tm(s, s.wp, s.wi),
        )
        .with_antecedent(FieldSet::of(&[Field::Alpha]), |s| s.alpha == WriterPc::Ap1)
        .with_vars(aux_wstamp_vars),
    );

    let aux_lpub_vars = LI_TM_FIELDS.with(Field::Wp).with(Field::Wtm);
    state(
        StatePredicate::new(
            "AUX_LPUB",
            "right after the index publish, the writer's pair carries the round stamp, and no pair is published beyond the round counter",
            FieldSet::of(&[Field::Alpha]).union(aux_lpub_vars),
            |s| {
                let w = st(s.wtm);
                (s.alpha != WriterPc::Ap2 || li_tm(s, s.wp) == w)
                    && li_tm(s, 0) <= w
                    && li_tm(s, 1) <= w
            },
        )
        .with_vars(aux_lpub_vars),
    );

    let aux_rtm_le_vars = FieldSet::of(&[Field::Rtm, Field::Rp]).union(LI_TM_FIELDS);
    state(
        StatePredicate::new(
            "AUX_RTM_LE",
            "outside announce/index-fetch, the reader's stamp is at most the published stamp of its pair",
            FieldSet::of(&[Field::Beta]).union(aux_rtm_le_vars),
            |s| {
                matches!(s.beta, ReaderPc::Bm2 | ReaderPc::Bm1)
                    || st(s.rtm) <= li_tm(s, s.rp)
            },
        )
        .with_antecedent(FieldSet::of(&[Field::Beta]), |s| {
            !matches!(s.beta, ReaderPc::Bm2 | ReaderPc::Bm1)
        })
        .with_vars(aux_rtm_le_vars),
    );

    let aux_rtm_b3_vars = FieldSet::of(&[Field::Rtm, Field::Rp, Field::Latest]).union(LI_TM_FIELDS);
    state(
        StatePredicate::new(
            "AUX_RTM_LE_B3",
            "at round entry, the reader's stamp is bounded by its pair's published stamp, which is bounded by the freshest published stamp",
            FieldSet::of(&[Field::Beta]).union(aux_rtm_b3_vars),
            |s| {
                s.beta != ReaderPc::Bm3
                    || (st(s.rtm) <= li_tm(s, s.rp) && li_tm(s, s.rp) <= li_tm(s, s.latest))
            },
        )
        .with_antecedent(FieldSet::of(&[Field::Beta]), |s| s.beta == ReaderPc::Bm3)
        .with_vars(aux_rtm_b3_vars),
    );

    state(StatePredicate::new(
        "AUX_e",
        "no slot stamp exceeds the round counter",
        SLOT_FIELDS.with(Field::Wtm),
        |s| (0..2).all(|p| (0..2).all(|i| slot_tm(s, p, i) < st(s.wtm) + 1)),
    ));

    let aux_f_vars = FieldSet::of(&[Field::Rtm, Field::Rp, Field::Ri]).union(SLOT_FIELDS);
    state(
        StatePredicate::new(
            "AUX_f",
            "from slot fetch through return, the reader's stamp equals the stamp in its target slot",
            FieldSet::of(&[Field::Beta]).union(aux_f_vars),
            |s| {
                !matches!(s.beta, ReaderPc::B | ReaderPc::Bp1)
                    || st(s.rtm) == slot_tm(s, s.rp, s.ri)
            },
        )
        .with_antecedent(FieldSet::of(&[Field::Beta]), |s| {
            matches!(s.beta, ReaderPc::B | ReaderPc::Bp1)
        })
        .with_vars(aux_f_vars),
    );

    state(
        StatePredicate::new(
            "AUX_F_SWAPPED",
            "the swapped-index reading of AUX_f (falsified by the mechanical check; kept for the record)",
            FieldSet::of(&[Field::Beta, Field::Rtm, Field::Rp, Field::Ri]).union(SLOT_FIELDS),
            |s| {
                !matches!(s.beta, ReaderPc::B | ReaderPc::Bp1)
                    || st(s.rtm) == slot_tm(s, s.ri, s.rp)
            },
        )
        .with_antecedent(FieldSet::of(&[Field::Beta]), |s| {
            matches!(s.beta, ReaderPc::B | ReaderPc::Bp1)
        })
        .with_vars(aux_f_vars),
    );

    let llb_vars = LI_TM_FIELDS.with(Field::Latest).with(Field::Wtm);
    state(StatePredicate::new(
        "AUX_LLB",
        "the freshest published stamp trails the round counter by at most one",
        llb_vars,
        |s| li_tm(s, s.latest) >= st(s.wtm) - 1,
    ));

    state(
        StatePredicate::new(
            "AUX_LLB_IND",
            "between rounds the freshest published stamp equals the round counter; elsewhere it trails by at most one",
            FieldSet::of(&[Field::Alpha]).union(llb_vars),
            |s| {
                (s.alpha != WriterPc::Am2 || li_tm(s, s.latest) == st(s.wtm))
                    && li_tm(s, s.latest) >= st(s.wtm) - 1
            },
        )
        .with_vars(llb_vars),
    );

    // Pair predicates.
    let mut pair = |p: PairPredicate| entries.push(CatalogEntry::Pair(p));

    let loc_specs: [(&str, &str, Field); 6] = [
        ("LOC_MONO_LI0", "pair 0's published stamp never decreases", Field::LiTm0),
        ("LOC_MONO_LI1", "pair 1's published stamp never decreases", Field::LiTm1),
        ("LOC_MONO_D00", "slot (0,0)'s stamp never decreases", Field::Slot00),
        ("LOC_MONO_D01", "slot (0,1)'s stamp never decreases", Field::Slot01),
        ("LOC_MONO_D10", "slot (1,0)'s stamp never decreases", Field::Slot10),
        ("LOC_MONO_D11", "slot (1,1)'s stamp never decreases", Field::Slot11),
    ];
    for (name, desc, field) in loc_specs {
        let read = location_reader(field);
        pair(PairPredicate::new(
            name,
            desc,
            FieldSet::of(&[field]),
            FieldSet::of(&[field]),
            move |a, b| read(a) <= read(b),
        ));
    }

    pair(PairPredicate::new(
        "READER_MONO",
        "the reader's stamp never decreases",
        FieldSet::of(&[Field::Rtm]),
        FieldSet::of(&[Field::Rtm]),
        |a, b| st(a.rtm) <= st(b.rtm),
    ));

    pair(PairPredicate::new(
        "AUX_1",
        "the freshest published stamp never decreases",
        LI_TM_FIELDS.with(Field::Latest),
        LI_TM_FIELDS.with(Field::Latest),
        |a, b| li_tm(a, a.latest) <= li_tm(b, b.latest),
    ));

    pair(PairPredicate::new(
        "FRESH1",
        "a returned stamp never exceeds the round counter observed at any later round entry of the reader's announce window",
        FieldSet::of(&[Field::Beta, Field::Rtm]),
        FieldSet::of(&[Field::Beta, Field::Wtm]),
        |a, b| {
            !(a.beta == ReaderPc::Bp1 && b.beta == ReaderPc::Bm2)
                || st(a.rtm) < st(b.wtm) + 1
        },
    ));

    pair(PairPredicate::new(
        "FRESH1_KERNEL",
        "a returned stamp never exceeds any later value of the round counter",
        FieldSet::of(&[Field::Beta, Field::Rtm]),
        FieldSet::of(&[Field::Wtm]),
        |a, b| a.beta != ReaderPc::Bp1 || st(a.rtm) < st(b.wtm) + 1,
    ));

    pair(PairPredicate::new(
        "FRESH1_TEMPORAL",
        "the inverted-orientation reading of FRESH1 (falsified by the mechanical check; kept for the record)",
        FieldSet::of(&[Field::Beta, Field::Wtm]),
        FieldSet::of(&[Field::Beta, Field::Rtm]),
        |a, b| {
            !(a.beta == ReaderPc::Bm2 && b.beta == ReaderPc::Bp1)
                || st(b.rtm) < st(a.wtm) + 1
        },
    ));

    pair(PairPredicate::new(
        "FRESH2",
        "a read returning after a round entry carries at least the stamp preceding the counter seen at that entry",
        FieldSet::of(&[Field::Beta, Field::Wtm]),
        FieldSet::of(&[Field::Beta, Field::Rtm]),
        |a, b| {
            !(a.beta == ReaderPc::Bm3 && b.beta == ReaderPc::Bp1)
                || st(b.rtm) >= st(a.wtm) - 1
        },
    ));

    pair(PairPredicate::new(
        "AUX_k",
        "a slot fetch after a round entry captures at least the stamp preceding the counter seen at that entry",
        FieldSet::of(&[Field::Beta, Field::Wtm]),
        FieldSet::of(&[Field::Beta, Field::Rtm]),
        |a, b| {
            !(a.beta == ReaderPc::Bm3 && b.beta == ReaderPc::B)
                || st(b.rtm) >= st(a.wtm) - 1
        },
    ));

    pair(PairPredicate::new(
        "AUX_RPUB",
        "after the reader re-grabs a pair, that pair's published stamp is at least the freshest published stamp seen at the previous round entry",
        FieldSet::of(&[Field::Beta, Field::Latest]).union(LI_TM_FIELDS),
        FieldSet::of(&[Field::Beta, Field::Rp]).union(LI_TM_FIELDS),
        |a, b| {
            !(a.beta == ReaderPc::Bm3 && b.beta == ReaderPc::Bm2)
                || li_tm(b, b.rp) >= li_tm(a, a.latest)
        },
    ));

    pair(PairPredicate::new(
        "AUX_RREAD",
        "a slot fetch captures at least the pair stamp published when the reader sat before its index fetch",
        FieldSet::of(&[Field::Beta, Field::Rp]).union(LI_TM_FIELDS),
        FieldSet::of(&[Field::Beta, Field::Rtm]),
        |a, b| {
            !(a.beta == ReaderPc::Bm1 && b.beta == ReaderPc::B)
                || st(b.rtm) >= li_tm(a, a.rp)
        },
    ));

    let catalog = Catalog { entries };
    debug_assert!(catalog_names_unique(&catalog));
    catalog
}

fn rfx_window(s: &GlobalState) -> bool {
    matches!(s.alpha, WriterPc::A | WriterPc::Ap1)
        && !matches!(s.beta, ReaderPc::Bm2 | ReaderPc::Bm1)
}

fn location_reader(field: Field) -> fn(&GlobalState) -> i64 {
    match field {
        Field::LiTm0 => |s| li_tm(s, 0),
        Field::LiTm1 => |s| li_tm(s, 1),
        Field::Slot00 => |s| slot_tm(s, 0, 0),
        Field::Slot01 => |s| slot_tm(s, 0, 1),
        Field::Slot10 => |s| slot_tm(s, 1, 0),
        Field::Slot11 => |s| slot_tm(s, 1, 1),
        _ => panic!("not a stamped location"),
    }
}

fn catalog_names_unique(c: &Catalog) -> bool {
    let mut names: Vec<&str> = c.entries.iter().map(|e| e.name()).collect();
    names.sort_unstable();
    names.windows(2).all(|w| w[0] != w[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{TransitionSystem, Variant};

    fn init() -> GlobalState {
        TransitionSystem::new(Variant::Timestamped, 4).initial_state()
    }

    #[test]
    fn names_are_unique() {
        assert!(catalog_names_unique(&catalog()));
    }

    #[test]
    fn cond1_vacuous_on_initial_state() {
        let c = catalog();
        let s = init();
        assert!(!c.state("COND1").antecedent(&s));
        assert!(c.state("COND1").eval(&s));
    }

    #[test]
    fn race_freedom_on_crafted_state() {
        let c = catalog();
        let mut s = init();
        s.alpha = WriterPc::A;
        s.beta = ReaderPc::B;
        s.wp = 1;
        s.rp = 0;
        assert!(c.state("RACE_FREEDOM").eval(&s));
    }

    #[test]
    fn stamp_bound_on_initial_state() {
        // Max stored stamp is 1, equal to the round counter.
        assert!(catalog().state("STAMP_BOUND").eval(&init()));
    }

    #[test]
    fn every_entry_is_total_on_sentinel_states() {
        let c = catalog();
        let mut s = init();
        s.wtm = None;
        s.rtm = None;
        s.li[0].stamp = None;
        s.li[1].stamp = None;
        s.slots = [[None; 2]; 2];
        for e in c.entries() {
            match e {
                CatalogEntry::State(p) => {
                    p.eval(&s);
                }
                CatalogEntry::Pair(p) => {
                    p.eval(&s, &s);
                }
            }
        }
    }

    #[test]
    fn footprints_cover_what_predicates_read() {
        // Perturbing a field outside the declared footprint must never
        // change the verdict. Walk a few thousand random states.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x4510);
        let c = catalog();
        let sys = TransitionSystem::new(Variant::Timestamped, 4);
        for _ in 0..2000 {
            let s = random_state(&mut rng, &sys);
            for e in c.entries() {
                match e {
                    CatalogEntry::State(p) => {
                        let before = p.eval(&s);
                        let ante_before = p.antecedent(&s);
                        for f in Field::ALL {
                            if p.footprint.contains(f) {
                                continue;
                            }
                            let t = perturb(&s, f, &mut rng);
                            assert_eq!(p.eval(&t), before, "{} reads {f:?}", p.name);
                            if !p.antecedent_footprint.contains(f) {
                                assert_eq!(p.antecedent(&t), ante_before);
                            }
                        }
                    }
                    CatalogEntry::Pair(p) => {
                        let s2 = random_state(&mut rng, &sys);
                        let before = p.eval(&s, &s2);
                        for f in Field::ALL {
                            if !p.footprint_first.contains(f) {
                                let t = perturb(&s, f, &mut rng);
                                assert_eq!(p.eval(&t, &s2), before, "{} reads {f:?} (first)", p.name);
                            }
                            if !p.footprint_second.contains(f) {
                                let t = perturb(&s2, f, &mut rng);
                                assert_eq!(p.eval(&s, &t), before, "{} reads {f:?} (second)", p.name);
                            }
                        }
                    }
                }
            }
        }
    }

    fn random_stamp(rng: &mut impl rand::Rng) -> Stamp {
        if rng.gen_bool(0.2) {
            None
        } else {
            Some(rng.gen_range(0..6))
        }
    }

    fn random_state(rng: &mut impl rand::Rng, sys: &TransitionSystem) -> GlobalState {
        let mut s = sys.initial_state();
        s.alpha = WriterPc::ALL[rng.gen_range(0..5)];
        s.beta = ReaderPc::ALL[rng.gen_range(0..5)];
        s.wp = rng.gen_range(0..2);
        s.wi = rng.gen_range(0..2);
        s.rp = rng.gen_range(0..2);
        s.ri = rng.gen_range(0..2);
        s.reading = rng.gen_range(0..2);
        s.latest = rng.gen_range(0..2);
        for p in 0..2 {
            s.li[p].value = rng.gen_range(0..2);
            s.li[p].stamp = random_stamp(rng);
            for i in 0..2 {
                s.slots[p][i] = random_stamp(rng);
            }
        }
        s.wtm = Some(rng.gen_range(0..6));
        s.rtm = random_stamp(rng);
        s.y_stamp = random_stamp(rng);
        s
    }

    fn perturb(s: &GlobalState, f: Field, rng: &mut impl rand::Rng) -> GlobalState {
        let mut t = *s;
        match f {
            Field::Alpha => t.alpha = WriterPc::ALL[rng.gen_range(0..5)],
            Field::Beta => t.beta = ReaderPc::ALL[rng.gen_range(0..5)],
            Field::Wp => t.wp ^= 1,
            Field::Wi => t.wi ^= 1,
            Field::Rp => t.rp ^= 1,
            Field::Ri => t.ri ^= 1,
            Field::Reading => t.reading ^= 1,
            Field::Latest => t.latest ^= 1,
            Field::LiVal0 => t.li[0].value ^= 1,
            Field::LiVal1 => t.li[1].value ^= 1,
            Field::LiTm0 => t.li[0].stamp = random_stamp(rng),
            Field::LiTm1 => t.li[1].stamp = random_stamp(rng),
            Field::Slot00 => t.slots[0][0] = random_stamp(rng),
            Field::Slot01 => t.slots[0][1] = random_stamp(rng),
            Field::Slot10 => t.slots[1][0] = random_stamp(rng),
            Field::Slot11 => t.slots[1][1] = random_stamp(rng),
            Field::Wtm => t.wtm = random_stamp(rng),
            Field::Rtm => t.rtm = random_stamp(rng),
            Field::YStamp => t.y_stamp = random_stamp(rng),
            Field::WriterRounds => t.writer_rounds = rng.gen_range(0..5),
            Field::ReaderRounds => t.reader_rounds = rng.gen_range(0..5),
        }
        t
    }
}
