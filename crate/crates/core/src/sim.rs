// SPDX-License-Identifier: Apache-2.0

//! The slot-synchronous run loop.
//!
//! One slot is:
//!
//! 1. arrivals are generated and enqueued;
//! 2. `speedup` times: for each class in strict priority order, the multicast
//!    scheduler runs on the free ports, then the unicast scheduler on what is
//!    left; matched cells cross the fabric into the output queues;
//! 3. each output queue emits at most one cell to the line.
//!
//! A cell arriving in slot `t` may cross the fabric in slot `t`. Line
//! emission in slot `t` completes at the slot boundary, so the recorded delay
//! is `t + 1 - arrival_slot` and is always at least one slot.

use std::collections::VecDeque;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fabric::{
    encode_reverse_tags, Cell, FifoBank, Match, MatchMode, PortSet, SlotClock, VoqBank, MAX_PORTS,
};
use crate::metrics::{MetricsCollector, SimResult};
use crate::multicast::{self, WbaParams};
use crate::traffic::{TrafficSource, TrafficSpec};
use crate::unicast::{
    self, fifo_hol_schedule, max_size_match, max_weight_match, Arbitration, IterationTrace,
    PointerRule, SchedulerState, WeightMatrix,
};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum UnicastPolicy {
    Islip {
        iterations: usize,
    },
    Rrm {
        iterations: usize,
    },
    Ilqf {
        iterations: usize,
    },
    Iocf {
        iterations: usize,
    },
    /// Exact maximum-size matching every slot.
    MaxSize,
    /// Exact maximum-weight matching on VOQ lengths.
    Lqf,
    /// Exact maximum-weight matching on HOL ages.
    Ocf,
    /// One FIFO per input, no VOQs.
    Fifo,
    /// Ideal output-queued switch: arrivals go straight to the output queue.
    OutputQueued,
}

impl UnicastPolicy {
    pub fn name(&self) -> &'static str {
        match self {
            UnicastPolicy::Islip { .. } => "islip",
            UnicastPolicy::Rrm { .. } => "rrm",
            UnicastPolicy::Ilqf { .. } => "ilqf",
            UnicastPolicy::Iocf { .. } => "iocf",
            UnicastPolicy::MaxSize => "maxsize",
            UnicastPolicy::Lqf => "lqf",
            UnicastPolicy::Ocf => "ocf",
            UnicastPolicy::Fifo => "fifo",
            UnicastPolicy::OutputQueued => "oq",
        }
    }

    pub fn iterations(&self) -> Option<usize> {
        match *self {
            UnicastPolicy::Islip { iterations }
            | UnicastPolicy::Rrm { iterations }
            | UnicastPolicy::Ilqf { iterations }
            | UnicastPolicy::Iocf { iterations } => Some(iterations),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MulticastPolicy {
    RandomSplit,
    NoSplit,
    Concentrate,
    Wba(WbaParams),
}

impl MulticastPolicy {
    pub fn name(&self) -> &'static str {
        match self {
            MulticastPolicy::RandomSplit => "random-split",
            MulticastPolicy::NoSplit => "no-split",
            MulticastPolicy::Concentrate => "concentrate",
            MulticastPolicy::Wba(_) => "wba",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub n: usize,
    pub classes: usize,
    pub unicast: UnicastPolicy,
    pub multicast: MulticastPolicy,
    pub speedup: usize,
    pub horizon: u64,
    /// Slots excluded from statistics.
    pub warmup: u64,
    pub seed: u64,
    pub traffic: TrafficSpec,
    /// Record scheduler traces for slots below this bound.
    pub trace_slots: u64,
}

impl SimConfig {
    /// Defaults: one class, speedup 1, warmup a tenth of the horizon.
    pub fn new(
        n: usize,
        unicast: UnicastPolicy,
        traffic: TrafficSpec,
        horizon: u64,
        seed: u64,
    ) -> Self {
        SimConfig {
            n,
            classes: 1,
            unicast,
            multicast: MulticastPolicy::RandomSplit,
            speedup: 1,
            horizon,
            warmup: horizon / 10,
            seed,
            traffic,
            trace_slots: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || self.n > MAX_PORTS {
            return Err(Error::config(format!(
                "N={} outside [2, {MAX_PORTS}]",
                self.n
            )));
        }
        if self.classes == 0 || self.classes > crate::fabric::MAX_CLASSES {
            return Err(Error::config(format!(
                "class count {} outside [1, 4]",
                self.classes
            )));
        }
        if self.speedup == 0 {
            return Err(Error::config("speedup must be at least 1"));
        }
        if self.warmup >= self.horizon {
            return Err(Error::config(format!(
                "warmup {} must be below horizon {}",
                self.warmup, self.horizon
            )));
        }
        if let Some(0) = self.unicast.iterations() {
            return Err(Error::config("iteration count must be at least 1"));
        }
        if let MulticastPolicy::Wba(p) = self.multicast {
            if !(p.w_age >= 0.0 && p.w_fanout >= 0.0) {
                return Err(Error::config("WBA weights must be non-negative"));
            }
        }
        if self.unicast == UnicastPolicy::Fifo && self.traffic.is_multicast() {
            return Err(Error::config(
                "the FIFO baseline carries unicast traffic only",
            ));
        }
        self.traffic.validate(self.n)
    }
}

/// One cell (or multicast copy) crossing the fabric.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Transfer {
    pub input: usize,
    pub output: usize,
    pub cell_id: u64,
    pub class: usize,
    pub arrival_slot: u64,
}

/// One copy leaving an output queue onto the line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Departure {
    pub output: usize,
    pub input: usize,
    pub cell_id: u64,
    pub class: usize,
    pub arrival_slot: u64,
    /// Slots from arrival to the end of the emitting slot.
    pub delay: u64,
}

/// One schedule+transfer phase (there are `speedup` per slot).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PhaseRecord {
    /// Every match applied, in order (multicast then unicast per class).
    pub matches: Vec<Match>,
    pub transfers: Vec<Transfer>,
    /// iterations_used of each iterative unicast scheduler invocation.
    pub iterations: Vec<usize>,
    /// Present for slots below `trace_slots`.
    pub traces: Vec<IterationTrace>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SlotRecord {
    pub slot: u64,
    pub arrivals: Vec<Cell>,
    pub phases: Vec<PhaseRecord>,
    pub departures: Vec<Departure>,
    /// Cells queued at each input, sampled after arrivals.
    pub input_occupancy: Vec<usize>,
    /// Copies queued at each output, sampled after arrivals.
    pub output_occupancy: Vec<usize>,
    /// Oldest multicast HOL cell age, sampled after arrivals.
    pub max_multicast_hol_age: Option<u64>,
}

impl SlotRecord {
    pub fn transfers(&self) -> impl Iterator<Item = &Transfer> {
        self.phases.iter().flat_map(|p| p.transfers.iter())
    }

    /// Per-slot trace text: one line.
    pub fn trace_line(&self) -> String {
        let mut s = format!("slot={}", self.slot);
        for (k, p) in self.phases.iter().enumerate() {
            s.push_str(&format!(" phase={k}"));
            for m in &p.matches {
                s.push_str(&format!(" match={m}"));
            }
            for t in &p.traces {
                s.push_str(&format!(" trace=<{t}>"));
            }
        }
        s.push_str(&format!(
            " arrivals={} departures={}",
            self.arrivals.len(),
            self.departures.len()
        ));
        s
    }
}

/// Per-class conservation counts, in output copies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Conservation {
    pub arrived: u64,
    pub departed: u64,
    pub resident: u64,
}

/// A running switch.
pub struct Simulation {
    config: SimConfig,
    clock: SlotClock,
    bank: VoqBank,
    fifo: FifoBank,
    outputs: Vec<VecDeque<Transfer>>,
    states: Vec<SchedulerState>,
    mc_pointer: Vec<usize>,
    traffic: TrafficSource,
    sched_rng: ChaCha8Rng,
    arrived: Vec<u64>,
    departed: Vec<u64>,
}

impl Simulation {
    pub fn new(config: SimConfig) -> Result<Self> {
        config.validate()?;
        let (n, c) = (config.n, config.classes);
        let traffic = TrafficSource::new(config.traffic.clone(), n, c, config.seed)?;
        let mut sched_rng = ChaCha8Rng::seed_from_u64(config.seed);
        sched_rng.set_stream(2);
        Ok(Simulation {
            clock: SlotClock::new(),
            bank: VoqBank::new(n, c)?,
            fifo: FifoBank::new(n, c)?,
            outputs: vec![VecDeque::new(); n],
            states: vec![SchedulerState::new(n); c],
            mc_pointer: vec![0; c],
            traffic,
            sched_rng,
            arrived: vec![0; c],
            departed: vec![0; c],
            config,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn now(&self) -> u64 {
        self.clock.now()
    }

    pub fn bank(&self) -> &VoqBank {
        &self.bank
    }

    pub fn scheduler_state(&self, class: usize) -> &SchedulerState {
        &self.states[class]
    }

    pub fn output_queue_len(&self, output: usize) -> usize {
        self.outputs[output].len()
    }

    pub fn conservation(&self, class: usize) -> Conservation {
        let in_outputs = self
            .outputs
            .iter()
            .flatten()
            .filter(|t| t.class == class)
            .count() as u64;
        Conservation {
            arrived: self.arrived[class],
            departed: self.departed[class],
            resident: self.bank.resident_copies(class) + self.fifo.resident(class) + in_outputs,
        }
    }

    fn admit(&mut self, cell: Cell, arrivals: &mut Vec<Cell>) -> Result<()> {
        self.arrived[cell.class] += cell.fanout() as u64;
        arrivals.push(cell);
        match self.config.unicast {
            UnicastPolicy::OutputQueued => {
                for o in cell.destinations {
                    self.outputs[o].push_back(Transfer {
                        input: cell.input,
                        output: o,
                        cell_id: cell.id,
                        class: cell.class,
                        arrival_slot: cell.arrival_slot,
                    });
                }
                Ok(())
            }
            UnicastPolicy::Fifo => self.fifo.enqueue(cell),
            _ => self.bank.enqueue(cell),
        }
    }

    fn generate_arrivals(&mut self, now: u64) -> Result<Vec<Cell>> {
        let n = self.config.n;
        let mut arrivals = Vec::new();
        match self.config.traffic.clone() {
            TrafficSpec::Saturated { pattern } => match self.config.unicast {
                UnicastPolicy::OutputQueued => {
                    for i in 0..n {
                        let c = self.traffic.uniform_cell(i, now);
                        self.admit(c, &mut arrivals)?;
                    }
                }
                UnicastPolicy::Fifo => {
                    for i in 0..n {
                        if self.fifo.input_occupancy(i) == 0 {
                            let c = self.traffic.uniform_cell(i, now);
                            self.admit(c, &mut arrivals)?;
                        }
                    }
                }
                _ => {
                    for i in 0..n {
                        let row = pattern.as_ref().map_or(PortSet::full(n), |p| p.row(i));
                        for o in row {
                            let backlogged =
                                (0..self.config.classes).any(|c| self.bank.queue_len(i, o, c) > 0);
                            if !backlogged {
                                let c = self.traffic.unicast_cell(i, o, now);
                                self.admit(c, &mut arrivals)?;
                            }
                        }
                    }
                }
            },
            TrafficSpec::SaturatedMulticast { .. } => {
                for i in 0..n {
                    let backlogged =
                        (0..self.config.classes).any(|c| self.bank.multicast_len(i, c) > 0);
                    if !backlogged {
                        let c = self.traffic.multicast_cell(i, now);
                        self.admit(c, &mut arrivals)?;
                    }
                }
            }
            _ => {
                for c in self.traffic.next_slot_arrivals(now).into_iter().flatten() {
                    self.admit(c, &mut arrivals)?;
                }
            }
        }
        Ok(arrivals)
    }

    /// Advances the switch by exactly one slot.
    pub fn step_slot(&mut self) -> Result<SlotRecord> {
        let now = self.clock.now();
        let n = self.config.n;
        let arrivals = self.generate_arrivals(now)?;

        let input_occupancy: Vec<usize> = (0..n)
            .map(|i| self.bank.input_occupancy(i) + self.fifo.input_occupancy(i))
            .collect();
        let output_occupancy: Vec<usize> = self.outputs.iter().map(VecDeque::len).collect();
        let max_multicast_hol_age = (0..n)
            .flat_map(|i| (0..self.config.classes).map(move |c| (i, c)))
            .filter_map(|(i, c)| self.bank.multicast_hol(i, c))
            .map(|cell| now - cell.arrival_slot)
            .max();

        let mut phases = Vec::new();
        if self.config.unicast != UnicastPolicy::OutputQueued {
            for _ in 0..self.config.speedup {
                let phase = self.run_phase(now)?;
                phases.push(phase);
            }
        }

        let mut departures = Vec::new();
        for (o, q) in self.outputs.iter_mut().enumerate() {
            if let Some(t) = q.pop_front() {
                self.departed[t.class] += 1;
                departures.push(Departure {
                    output: o,
                    input: t.input,
                    cell_id: t.cell_id,
                    class: t.class,
                    arrival_slot: t.arrival_slot,
                    delay: now + 1 - t.arrival_slot,
                });
            }
        }

        self.clock.tick();
        Ok(SlotRecord {
            slot: now,
            arrivals,
            phases,
            departures,
            input_occupancy,
            output_occupancy,
            max_multicast_hol_age,
        })
    }

    fn run_phase(&mut self, now: u64) -> Result<PhaseRecord> {
        let n = self.config.n;
        let tracing = now < self.config.trace_slots;
        let mut rec = PhaseRecord::default();
        let mut free_in = PortSet::full(n);
        let mut free_out = PortSet::full(n);

        for class in 0..self.config.classes {
            if self.config.unicast != UnicastPolicy::Fifo {
                let fanouts = self.bank.hol_fanout_requests(class)?;
                if fanouts.iter().any(|f| !f.is_empty()) {
                    let m = self.schedule_multicast(&fanouts, class, free_in, free_out, now)?;
                    self.check_free(&m, free_in, free_out, now)?;
                    let deliveries = self.bank.apply_multicast_match(&m, class, now)?;
                    for (cell, o) in deliveries {
                        let t = Transfer {
                            input: cell.input,
                            output: o,
                            cell_id: cell.id,
                            class: cell.class,
                            arrival_slot: cell.arrival_slot,
                        };
                        self.outputs[o].push_back(t);
                        rec.transfers.push(t);
                    }
                    free_in = free_in.difference(m.matched_inputs());
                    free_out = free_out.difference(m.matched_outputs());
                    rec.matches.push(m);
                }
            }

            let snapshot = self.states[class].clone();
            let (m, iterations, trace) =
                self.schedule_unicast(class, free_in, free_out, now, tracing)?;
            self.check_free(&m, free_in, free_out, now)?;
            // crossbar configuration for this phase; a match that cannot be
            // expressed as reverse-path tags is a scheduler bug
            debug_assert_eq!(
                encode_reverse_tags(&m)
                    .decode(MatchMode::Unicast)
                    .as_ref()
                    .ok(),
                Some(&m)
            );
            let moved = match self.config.unicast {
                UnicastPolicy::Fifo => self.fifo.apply_match(&m, class, now),
                _ => self.bank.apply_unicast_match(&m, class, now),
            };
            let moved = match moved {
                Ok(moved) => moved,
                Err(e) => {
                    // replay the scheduler from its pre-slot state to recover
                    // the iteration trace; queues are untouched on failure
                    self.states[class] = snapshot;
                    let (_, _, replay) =
                        self.schedule_unicast(class, free_in, free_out, now, true)?;
                    return Err(attach_trace(e, replay.or(trace)));
                }
            };
            for cell in moved {
                let o = cell
                    .unicast_output()
                    .expect("unicast queue holds unicast cells");
                let t = Transfer {
                    input: cell.input,
                    output: o,
                    cell_id: cell.id,
                    class: cell.class,
                    arrival_slot: cell.arrival_slot,
                };
                self.outputs[o].push_back(t);
                rec.transfers.push(t);
            }
            free_in = free_in.difference(m.matched_inputs());
            free_out = free_out.difference(m.matched_outputs());
            if let Some(k) = iterations {
                rec.iterations.push(k);
            }
            if tracing {
                if let Some(t) = trace {
                    rec.traces.push(t);
                }
            }
            rec.matches.push(m);
        }
        Ok(rec)
    }

    fn check_free(&self, m: &Match, free_in: PortSet, free_out: PortSet, now: u64) -> Result<()> {
        if cfg!(debug_assertions) {
            m.validate()
                .map_err(|e| Error::violation(now, e.to_string()))?;
        }
        if !m.matched_inputs().is_subset(free_in) || !m.matched_outputs().is_subset(free_out) {
            return Err(Error::violation(
                now,
                format!("match {m} uses ports already connected this phase"),
            ));
        }
        Ok(())
    }

    fn schedule_multicast(
        &mut self,
        fanouts: &[PortSet],
        class: usize,
        free_in: PortSet,
        free_out: PortSet,
        now: u64,
    ) -> Result<Match> {
        let n = self.config.n;
        let policy = self.config.multicast;
        // An all-or-nothing cell whose fanout touches a busy output cannot
        // go at all; splitting policies just see the free part.
        let offered: Vec<PortSet> = fanouts
            .iter()
            .enumerate()
            .map(|(i, f)| {
                if !free_in.contains(i) {
                    PortSet::EMPTY
                } else if policy == MulticastPolicy::NoSplit {
                    if f.is_subset(free_out) {
                        *f
                    } else {
                        PortSet::EMPTY
                    }
                } else {
                    f.intersection(free_out)
                }
            })
            .collect();
        let m = match policy {
            MulticastPolicy::RandomSplit => {
                multicast::random_split_schedule(&offered, &mut self.sched_rng)
            }
            MulticastPolicy::NoSplit => {
                let p = self.mc_pointer[class];
                self.mc_pointer[class] = (p + 1) % n;
                multicast::no_split_schedule(&offered, p)
            }
            MulticastPolicy::Concentrate => {
                let p = self.mc_pointer[class];
                self.mc_pointer[class] = (p + 1) % n;
                multicast::concentrate_schedule(&offered, p).matching
            }
            MulticastPolicy::Wba(params) => {
                let ages: Vec<u64> = (0..n)
                    .map(|i| {
                        self.bank
                            .multicast_hol(i, class)
                            .map_or(0, |c| now - c.arrival_slot)
                    })
                    .collect();
                multicast::wba_schedule(&offered, &ages, params)?
            }
        };
        Ok(m)
    }

    #[allow(clippy::type_complexity)]
    fn schedule_unicast(
        &mut self,
        class: usize,
        free_in: PortSet,
        free_out: PortSet,
        now: u64,
        tracing: bool,
    ) -> Result<(Match, Option<usize>, Option<IterationTrace>)> {
        let n = self.config.n;
        if self.config.unicast == UnicastPolicy::Fifo {
            let hol: Vec<Option<usize>> = self
                .fifo
                .hol_destinations(class)
                .into_iter()
                .enumerate()
                .map(|(i, d)| d.filter(|&o| free_in.contains(i) && free_out.contains(o)))
                .collect();
            return Ok((fifo_hol_schedule(&hol, &mut self.states[class]), None, None));
        }

        let requests = self.bank.request_matrix(class)?.restrict(free_in, free_out);
        let weights = |f: &dyn Fn(usize, usize) -> u64| -> WeightMatrix {
            let mut w = WeightMatrix::zeros(n);
            for i in 0..n {
                for o in requests.row(i) {
                    w.set(i, o, f(i, o));
                }
            }
            w
        };
        let bank = &self.bank;
        let qlen = |i: usize, o: usize| bank.queue_len(i, o, class) as u64;
        // +1 keeps a cell that arrived this slot strictly positive
        let age = |i: usize, o: usize| {
            bank.hol_unicast(i, o, class)
                .map_or(0, |c| now - c.arrival_slot + 1)
        };

        let iterative =
            |arb: Arbitration<'_>, rule: PointerRule, iters: usize, state: &mut SchedulerState| {
                let mut trace = IterationTrace::default();
                let (m, k) = unicast::schedule_iterative(
                    &requests,
                    state,
                    iters,
                    arb,
                    rule,
                    tracing.then_some(&mut trace),
                )?;
                Ok::<_, Error>((m, Some(k), tracing.then_some(trace)))
            };

        let state = &mut self.states[class];
        match self.config.unicast {
            UnicastPolicy::Islip { iterations } => iterative(
                Arbitration::RoundRobin,
                PointerRule::Slip,
                iterations,
                state,
            ),
            UnicastPolicy::Rrm { iterations } => iterative(
                Arbitration::RoundRobin,
                PointerRule::Unconditional,
                iterations,
                state,
            ),
            UnicastPolicy::Ilqf { iterations } => {
                let w = weights(&qlen);
                iterative(
                    Arbitration::Weighted(&w),
                    PointerRule::Slip,
                    iterations,
                    state,
                )
            }
            UnicastPolicy::Iocf { iterations } => {
                let w = weights(&age);
                iterative(
                    Arbitration::Weighted(&w),
                    PointerRule::Slip,
                    iterations,
                    state,
                )
            }
            UnicastPolicy::MaxSize => Ok((max_size_match(&requests), None, None)),
            UnicastPolicy::Lqf => Ok((max_weight_match(&weights(&qlen)), None, None)),
            UnicastPolicy::Ocf => Ok((max_weight_match(&weights(&age)), None, None)),
            UnicastPolicy::Fifo | UnicastPolicy::OutputQueued => unreachable!("handled above"),
        }
    }
}

fn attach_trace(e: Error, trace: Option<IterationTrace>) -> Error {
    match e {
        Error::ContractViolation { slot, detail, .. } => Error::ContractViolation {
            slot,
            detail,
            trace: trace.map(Box::new),
        },
        other => other,
    }
}

/// Runs a full simulation and returns its statistics.
pub fn run(config: SimConfig) -> Result<SimResult> {
    run_with(config, |_| {})
}

/// Like [`run`], handing every slot record to `observe` as it is produced.
pub fn run_with(config: SimConfig, mut observe: impl FnMut(&SlotRecord)) -> Result<SimResult> {
    let mut sim = Simulation::new(config)?;
    let mut metrics = MetricsCollector::new(sim.config());
    for _ in 0..sim.config().horizon {
        let rec = sim.step_slot()?;
        metrics.observe(&rec);
        observe(&rec);
    }
    Ok(metrics.finish())
}

/// Highest offered load at which the switch stays stable, found by
/// bisection on the load of `base.traffic` until the stable/unstable bracket
/// is narrower than `tolerance`. A run counts as stable when its divergence
/// flag is clear.
pub fn saturation_load(base: &SimConfig, tolerance: f64) -> Result<f64> {
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::config("tolerance must be positive"));
    }
    let stable_at = |load: f64| -> Result<bool> {
        let traffic = base
            .traffic
            .with_load(load)
            .ok_or_else(|| Error::config("traffic has no load parameter to sweep"))?;
        let mut cfg = base.clone();
        cfg.traffic = traffic;
        Ok(!run(cfg)?.diverged)
    };
    if stable_at(1.0)? {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > tolerance {
        let mid = 0.5 * (lo + hi);
        if stable_at(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}
