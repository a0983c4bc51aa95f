//! Driving real writer/reader threads against the instrumented build.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::acm::{
    instrumented, merge_events, InstrumentedConfig, NoPacer, Pacer, RaceReport, StepPoint,
};
use crate::model::Mutation;

use super::history::{History, HistoryError};
use super::linearize::payload_for;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{0}")]
    Race(RaceReport),
    #[error(transparent)]
    Malformed(#[from] HistoryError),
    #[error("worker thread failed: {0}")]
    Worker(String),
}

/// Per-step delay profiles. Delays are busy spins so they stay in the
/// hundreds-of-nanoseconds range and actually shift interleavings.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum JitterProfile {
    /// No artificial delays.
    None,
    /// A small random spin before every step.
    Uniform,
    /// Long spins right before slot accesses and between sub-word moves,
    /// where the interesting overlaps live.
    Targeted,
}

impl JitterProfile {
    pub const ALL: [JitterProfile; 3] =
        [JitterProfile::None, JitterProfile::Uniform, JitterProfile::Targeted];

    pub fn name(self) -> &'static str {
        match self {
            JitterProfile::None => "none",
            JitterProfile::Uniform => "uniform",
            JitterProfile::Targeted => "targeted",
        }
    }

    pub fn from_name(name: &str) -> Option<JitterProfile> {
        JitterProfile::ALL.into_iter().find(|j| j.name() == name)
    }
}

struct RandomPacer {
    rng: ChaCha8Rng,
    control: u32,
    slot: u32,
    word: u32,
}

impl Pacer for RandomPacer {
    fn pace(&mut self, point: StepPoint) {
        let cap = match point {
            StepPoint::BeforeControlStep => self.control,
            StepPoint::BeforeSlotAccess => self.slot,
            StepPoint::BetweenSlotWords => self.word,
        };
        if cap == 0 {
            return;
        }
        let spins = self.rng.gen_range(0..cap);
        for _ in 0..spins {
            std::hint::spin_loop();
        }
    }
}

fn pacer_for(profile: JitterProfile, seed: u64, side_salt: u64) -> Box<dyn Pacer> {
    let rng = ChaCha8Rng::seed_from_u64(seed ^ side_salt);
    match profile {
        JitterProfile::None => Box::new(NoPacer),
        JitterProfile::Uniform => Box::new(RandomPacer {
            rng,
            control: 64,
            slot: 64,
            word: 64,
        }),
        JitterProfile::Targeted => Box::new(RandomPacer {
            rng,
            control: 8,
            slot: 2048,
            word: 512,
        }),
    }
}

/// One concurrent run.
#[derive(Clone, Copy, Debug)]
pub struct RunConfig {
    pub writes: u64,
    pub reads: u64,
    pub seed: u64,
    pub jitter: JitterProfile,
    pub mutation: Option<Mutation>,
    pub record_slot_events: bool,
    /// Abort the run on the first guard trip. Turned off by the mutation
    /// experiments, which want the corrupted histories.
    pub abort_on_race: bool,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            writes: 1000,
            reads: 1000,
            seed: 0,
            jitter: JitterProfile::Uniform,
            mutation: None,
            record_slot_events: false,
            abort_on_race: true,
        }
    }
}

/// A completed run: the merged history plus any latched race.
pub struct RunOutcome {
    pub history: History,
    pub race: Option<RaceReport>,
    pub initial_payload: u64,
}

/// Spawns one writer thread performing `writes` writes of distinct
/// payloads and one reader thread performing `reads` reads, with seeded
/// per-step delays, and returns the complete recorded history. A guard
/// trip is a hard failure unless the config says otherwise.
pub fn run_concurrent(cfg: &RunConfig) -> Result<RunOutcome, HarnessError> {
    let initial_payload = payload_for(1);
    let ops = cfg.writes.max(cfg.reads) as usize;
    let per_op = if cfg.record_slot_events { 4 } else { 2 };
    let icfg = InstrumentedConfig {
        mutation: cfg.mutation,
        record_slot_events: cfg.record_slot_events,
        log_capacity: ops * per_op + 64,
        abort_on_race: cfg.abort_on_race,
    };
    let (mut writer, mut reader, race) = instrumented(
        initial_payload,
        icfg,
        pacer_for(cfg.jitter, cfg.seed, 0x57),
        pacer_for(cfg.jitter, cfg.seed, 0x52),
    );

    let writes = cfg.writes;
    let reads = cfg.reads;
    let writer_thread = std::thread::spawn(move || {
        for k in 1..=writes {
            writer.write(payload_for(k as i64 + 1));
        }
        writer.into_events()
    });
    let reader_thread = std::thread::spawn(move || {
        for _ in 0..reads {
            reader.read();
        }
        reader.into_events()
    });

    let writer_events = join_worker(writer_thread, &race)?;
    let reader_events = join_worker(reader_thread, &race)?;

    let history = History::new(merge_events(writer_events, reader_events))?;
    Ok(RunOutcome {
        history,
        race: race.race(),
        initial_payload,
    })
}

fn join_worker(
    handle: std::thread::JoinHandle<Vec<crate::acm::HistoryEvent>>,
    race: &crate::acm::RaceCheck,
) -> Result<Vec<crate::acm::HistoryEvent>, HarnessError> {
    match handle.join() {
        Ok(events) => Ok(events),
        Err(panic) => {
            if let Some(report) = race.race() {
                return Err(HarnessError::Race(report));
            }
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".to_string());
            Err(HarnessError::Worker(msg))
        }
    }
}
