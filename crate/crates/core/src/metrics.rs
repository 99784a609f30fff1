// SPDX-License-Identifier: Apache-2.0

//! Streaming statistics over slot records.
//!
//! Only slots at or after the warmup boundary count. All accumulators are
//! integer sums, so merging is exact and order-independent.

use crate::sim::{SimConfig, SlotRecord};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DelayStats {
    pub count: u64,
    pub sum: u64,
    pub sum_sq: u128,
    pub max: u64,
}

impl DelayStats {
    pub fn push(&mut self, delay: u64) {
        self.count += 1;
        self.sum += delay;
        self.sum_sq += u128::from(delay) * u128::from(delay);
        self.max = self.max.max(delay);
    }

    pub fn merge(&mut self, other: &DelayStats) {
        self.count += other.count;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        self.max = self.max.max(other.max);
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Mean delay in slots; NaN with no samples.
    pub fn mean(&self) -> f64 {
        if self.count == 0 {
            f64::NAN
        } else {
            self.sum as f64 / self.count as f64
        }
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        let n = self.count as f64;
        let mean = self.sum as f64 / n;
        ((self.sum_sq as f64) - n * mean * mean) / (n - 1.0)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ThroughputStats {
    /// Line departures per slot, per output.
    pub per_output: Vec<f64>,
    /// Fabric transfers per slot, `per_voq[input][output]`.
    pub per_voq: Vec<Vec<f64>>,
    /// Departures per slot per port.
    pub aggregate: f64,
    /// Arriving copies per slot per port.
    pub offered: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConvergenceStats {
    /// `histogram[k]` counts invocations that used `k` iterations.
    pub histogram: Vec<u64>,
    pub max: usize,
    pub mean: f64,
}

impl ConvergenceStats {
    pub fn invocations(&self) -> u64 {
        self.histogram.iter().sum()
    }
}

/// Mean length of runs of consecutive-slot cells of one (input, output)
/// flow: at ingress (arrivals) and at egress (line departures).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BurstinessStats {
    pub ingress_mean_run: f64,
    pub egress_mean_run: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimResult {
    pub measured_slots: u64,
    /// Copies arrived during the measured window.
    pub arrivals: u64,
    pub departures: u64,
    pub delay: DelayStats,
    pub delay_by_class: Vec<DelayStats>,
    pub throughput: ThroughputStats,
    pub convergence: ConvergenceStats,
    pub burstiness: BurstinessStats,
    /// Mean cells resident in the switch (inputs + outputs), sampled after
    /// arrivals each slot.
    pub mean_occupancy: f64,
    /// Mean input-queue occupancy in each tenth of the measured window.
    pub occupancy_deciles: [f64; 10],
    /// Input backlog in the last tenth exceeded twice the first tenth (and
    /// grew by at least one cell per port).
    pub diverged: bool,
    /// Peak of input cells + output copies at each port.
    pub peak_port_occupancy: Vec<usize>,
    pub max_multicast_hol_age: u64,
}

#[derive(Clone, Debug, Default)]
struct RunTracker {
    last_slot: Option<u64>,
    runs: u64,
    cells: u64,
}

impl RunTracker {
    fn hit(&mut self, slot: u64) {
        if self.last_slot.is_none_or(|s| s + 1 != slot) {
            self.runs += 1;
        }
        self.last_slot = Some(slot);
        self.cells += 1;
    }
}

/// Streaming accumulator fed one [`SlotRecord`] at a time.
#[derive(Clone, Debug)]
pub struct MetricsCollector {
    n: usize,
    warmup: u64,
    horizon: u64,
    measured_slots: u64,
    arrivals: u64,
    departures: u64,
    delay: DelayStats,
    delay_by_class: Vec<DelayStats>,
    per_output: Vec<u64>,
    per_voq: Vec<u64>,
    iter_hist: Vec<u64>,
    ingress: Vec<RunTracker>,
    egress: Vec<RunTracker>,
    occupancy_sum: u128,
    decile_sum: [u128; 10],
    decile_count: [u64; 10],
    peak_port: Vec<usize>,
    max_hol_age: u64,
}

impl MetricsCollector {
    pub fn new(config: &SimConfig) -> Self {
        let n = config.n;
        MetricsCollector {
            n,
            warmup: config.warmup,
            horizon: config.horizon,
            measured_slots: 0,
            arrivals: 0,
            departures: 0,
            delay: DelayStats::default(),
            delay_by_class: vec![DelayStats::default(); config.classes],
            per_output: vec![0; n],
            per_voq: vec![0; n * n],
            iter_hist: vec![0; n + 1],
            ingress: vec![RunTracker::default(); n * n],
            egress: vec![RunTracker::default(); n * n],
            occupancy_sum: 0,
            decile_sum: [0; 10],
            decile_count: [0; 10],
            peak_port: vec![0; n],
            max_hol_age: 0,
        }
    }

    pub fn observe(&mut self, rec: &SlotRecord) {
        if rec.slot < self.warmup {
            return;
        }
        let n = self.n;
        self.measured_slots += 1;

        for c in &rec.arrivals {
            self.arrivals += c.fanout() as u64;
            for o in c.destinations {
                self.ingress[c.input * n + o].hit(rec.slot);
            }
        }
        for phase in &rec.phases {
            for t in &phase.transfers {
                self.per_voq[t.input * n + t.output] += 1;
            }
            for &k in &phase.iterations {
                if k >= self.iter_hist.len() {
                    self.iter_hist.resize(k + 1, 0);
                }
                self.iter_hist[k] += 1;
            }
        }
        for d in &rec.departures {
            self.departures += 1;
            self.per_output[d.output] += 1;
            self.delay.push(d.delay);
            if let Some(s) = self.delay_by_class.get_mut(d.class) {
                s.push(d.delay);
            }
            self.egress[d.input * n + d.output].hit(rec.slot);
        }

        let inputs: usize = rec.input_occupancy.iter().sum();
        let outputs: usize = rec.output_occupancy.iter().sum();
        self.occupancy_sum += (inputs + outputs) as u128;
        let window = (self.horizon - self.warmup).max(1);
        let decile = (((rec.slot - self.warmup) * 10) / window).min(9) as usize;
        self.decile_sum[decile] += inputs as u128;
        self.decile_count[decile] += 1;
        for p in 0..n {
            let occ = rec.input_occupancy[p] + rec.output_occupancy[p];
            self.peak_port[p] = self.peak_port[p].max(occ);
        }
        if let Some(age) = rec.max_multicast_hol_age {
            self.max_hol_age = self.max_hol_age.max(age);
        }
    }

    pub fn finish(self) -> SimResult {
        let n = self.n;
        let slots = self.measured_slots.max(1) as f64;
        let per_output: Vec<f64> = self.per_output.iter().map(|&d| d as f64 / slots).collect();
        let per_voq: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|o| self.per_voq[i * n + o] as f64 / slots)
                    .collect()
            })
            .collect();

        let mut hist = self.iter_hist;
        while hist.len() > 1 && *hist.last().expect("non-empty") == 0 {
            hist.pop();
        }
        let invocations: u64 = hist.iter().sum();
        let convergence = ConvergenceStats {
            max: hist.iter().rposition(|&c| c > 0).unwrap_or(0),
            mean: if invocations == 0 {
                0.0
            } else {
                hist.iter()
                    .enumerate()
                    .map(|(k, &c)| k as f64 * c as f64)
                    .sum::<f64>()
                    / invocations as f64
            },
            histogram: hist,
        };

        let mean_run = |trackers: &[RunTracker]| {
            let (cells, runs) = trackers
                .iter()
                .fold((0u64, 0u64), |(c, r), t| (c + t.cells, r + t.runs));
            if runs == 0 {
                0.0
            } else {
                cells as f64 / runs as f64
            }
        };

        let mut deciles = [0.0; 10];
        for (d, (&sum, &count)) in deciles
            .iter_mut()
            .zip(self.decile_sum.iter().zip(&self.decile_count))
        {
            if count > 0 {
                *d = sum as f64 / count as f64;
            }
        }
        let (first, last) = (deciles[0], deciles[9]);
        let diverged = self.decile_count[9] > 0 && last > 2.0 * first && last - first >= n as f64;

        SimResult {
            measured_slots: self.measured_slots,
            arrivals: self.arrivals,
            departures: self.departures,
            delay: self.delay,
            delay_by_class: self.delay_by_class,
            throughput: ThroughputStats {
                per_output,
                per_voq,
                aggregate: self.departures as f64 / (slots * n as f64),
                offered: self.arrivals as f64 / (slots * n as f64),
            },
            convergence,
            burstiness: BurstinessStats {
                ingress_mean_run: mean_run(&self.ingress),
                egress_mean_run: mean_run(&self.egress),
            },
            mean_occupancy: self.occupancy_sum as f64 / slots,
            occupancy_deciles: deciles,
            diverged,
            peak_port_occupancy: self.peak_port,
            max_multicast_hol_age: self.max_hol_age,
        }
    }
}
