// SPDX-License-Identifier: Apache-2.0

//! Slot-synchronous simulator for an N×N input-queued crossbar switch.
//!
//! Each input port keeps one virtual output queue (VOQ) per output and
//! priority class for unicast cells, plus a single multicast FIFO per class.
//! At every slot a scheduler picks a conflict-free [`Match`] between inputs
//! and outputs; matched cells cross the fabric into per-output queues, which
//! drain one cell per slot onto the line.
//!
//! The crate is organized bottom-up:
//!
//! * [`fabric`] holds cells, queues, matches and the crossbar routing tags.
//! * [`arbiter`] is the programmable priority encoder every round-robin
//!   arbiter is built from.
//! * [`unicast`] implements iSLIP, RRM, iLQF/iOCF, the FIFO baseline and the
//!   exact maximum-size / maximum-weight matching oracles.
//! * [`multicast`] implements the fanout-splitting disciplines and the
//!   residue calculus.
//! * [`traffic`] generates reproducible arrivals.
//! * [`metrics`] accumulates delay, throughput and convergence statistics.
//! * [`sim`] binds everything into the per-slot pipeline.

pub mod arbiter;
pub mod error;
pub mod fabric;
pub mod metrics;
pub mod multicast;
pub mod sim;
pub mod traffic;
pub mod unicast;

pub use arbiter::{ppe_select, RequestVector, RoundRobinPointer};
pub use error::{Error, Result};
pub use fabric::{
    encode_reverse_tags, Cell, CrossbarConfig, FifoBank, Match, MatchMode, PortSet, SlotClock,
    VoqBank, MAX_PORTS,
};
pub use metrics::{
    BurstinessStats, ConvergenceStats, DelayStats, MetricsCollector, SimResult, ThroughputStats,
};
pub use multicast::{
    brute_force_min_residue, compute_residue, concentrate_schedule, no_split_schedule,
    random_split_schedule, wba_schedule, ConcentrateOutcome, FanoutRequestSet, ResidueReport,
    WbaParams,
};
pub use sim::{
    run, run_with, saturation_load, MulticastPolicy, SimConfig, Simulation, SlotRecord,
    UnicastPolicy,
};
pub use traffic::{admissible_check, Admissibility, TrafficSource, TrafficSpec};
pub use unicast::{
    fifo_hol_schedule, ilqf_schedule, iocf_schedule, is_maximal, islip_schedule, match_weight,
    max_size_match, max_weight_match, rrm_schedule, IterationRecord, IterationTrace, RequestMatrix,
    ScheduleOutcome, SchedulerState, WeightMatrix,
};
