// SPDX-License-Identifier: Apache-2.0

//! Arrival processes.
//!
//! Every process draws from its own ChaCha stream, so a `TrafficSpec` and a seed fully
//! determine the arrival sequence. At most one cell arrives per input per
//! slot for the stochastic variants. The saturated variants are not arrival
//! processes at all: the simulator refills emptied queues directly, see
//! [`TrafficSpec::is_saturated`].

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};

use crate::error::{Error, Result};
use crate::fabric::{Cell, PortSet, RequestMatrix};

#[derive(Clone, Debug, PartialEq)]
pub enum TrafficSpec {
    /// Bernoulli arrivals, destinations uniform over all outputs.
    BernoulliUniform { load: f64 },
    /// Input `i` sends to output `j` with probability `rates[i][j]` per slot.
    BernoulliMatrix { rates: Vec<Vec<f64>> },
    /// Geometric on/off bursts; every cell of a burst shares one destination.
    OnOffBursty { load: f64, mean_burst: f64 },
    /// Bernoulli multicast arrivals with truncated-geometric fanout of mean
    /// `mean_fanout`, destination sets uniform given their size.
    MulticastBernoulli { input_rate: f64, mean_fanout: f64 },
    /// Every VOQ in `pattern` (all VOQs when `None`) is kept backlogged.
    /// Under the FIFO policy each input's single queue is kept backlogged
    /// with uniformly distributed destinations.
    Saturated { pattern: Option<RequestMatrix> },
    /// Every input's multicast queue is kept backlogged.
    SaturatedMulticast { mean_fanout: f64 },
}

impl TrafficSpec {
    pub fn is_saturated(&self) -> bool {
        matches!(
            self,
            TrafficSpec::Saturated { .. } | TrafficSpec::SaturatedMulticast { .. }
        )
    }

    pub fn is_multicast(&self) -> bool {
        matches!(
            self,
            TrafficSpec::MulticastBernoulli { .. } | TrafficSpec::SaturatedMulticast { .. }
        )
    }

    /// Multicast traffic at a given per-output offered load:
    /// `input_rate = load / mean_fanout`.
    pub fn multicast_at_load(load: f64, mean_fanout: f64) -> Self {
        TrafficSpec::MulticastBernoulli {
            input_rate: load / mean_fanout,
            mean_fanout,
        }
    }

    /// The same traffic shape rescaled to a per-output offered load, or
    /// `None` when the traffic has no load parameter.
    pub fn with_load(&self, load: f64) -> Option<TrafficSpec> {
        match self {
            TrafficSpec::BernoulliUniform { .. } => Some(TrafficSpec::BernoulliUniform { load }),
            TrafficSpec::OnOffBursty { mean_burst, .. } => Some(TrafficSpec::OnOffBursty {
                load,
                mean_burst: *mean_burst,
            }),
            TrafficSpec::MulticastBernoulli { mean_fanout, .. } => {
                Some(TrafficSpec::multicast_at_load(load, *mean_fanout))
            }
            _ => None,
        }
    }

    /// Expected output copies per output per slot under uniform
    /// destinations, or `None` for saturated traffic.
    pub fn offered_load(&self, n: usize) -> Option<f64> {
        match self {
            TrafficSpec::BernoulliUniform { load } | TrafficSpec::OnOffBursty { load, .. } => {
                Some(*load)
            }
            TrafficSpec::BernoulliMatrix { rates } => {
                Some(rates.iter().flatten().sum::<f64>() / n as f64)
            }
            TrafficSpec::MulticastBernoulli {
                input_rate,
                mean_fanout,
            } => Some(input_rate * mean_fanout),
            TrafficSpec::Saturated { .. } | TrafficSpec::SaturatedMulticast { .. } => None,
        }
    }

    /// Mean rate matrix of output copies, or `None` for saturated traffic.
    pub fn rate_matrix(&self, n: usize) -> Option<Vec<Vec<f64>>> {
        let uniform = |r: f64| vec![vec![r / n as f64; n]; n];
        match self {
            TrafficSpec::BernoulliUniform { load } | TrafficSpec::OnOffBursty { load, .. } => {
                Some(uniform(*load))
            }
            TrafficSpec::BernoulliMatrix { rates } => Some(rates.clone()),
            TrafficSpec::MulticastBernoulli {
                input_rate,
                mean_fanout,
            } => Some(uniform(input_rate * mean_fanout)),
            _ => None,
        }
    }

    /// Parameter sanity independent of admissibility.
    pub fn validate(&self, n: usize) -> Result<()> {
        let prob = |name: &str, p: f64| {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(Error::config(format!("{name} {p} outside [0, 1]")))
            }
        };
        let fanout = |f: f64| {
            if f >= 1.0 && f <= n as f64 {
                Ok(())
            } else {
                Err(Error::config(format!("mean fanout {f} outside [1, {n}]")))
            }
        };
        match self {
            TrafficSpec::BernoulliUniform { load } => prob("load", *load),
            TrafficSpec::OnOffBursty { load, mean_burst } => {
                prob("load", *load)?;
                if mean_burst.is_nan() || *mean_burst < 1.0 {
                    return Err(Error::config(format!("mean burst {mean_burst} below 1")));
                }
                Ok(())
            }
            TrafficSpec::BernoulliMatrix { rates } => {
                if rates.len() != n || rates.iter().any(|r| r.len() != n) {
                    return Err(Error::config(format!("rate matrix must be {n}x{n}")));
                }
                for (i, row) in rates.iter().enumerate() {
                    if row.iter().any(|&r| r.is_nan() || r < 0.0) {
                        return Err(Error::config(format!("negative rate in row {i}")));
                    }
                    prob(&format!("row {i} sum"), row.iter().sum())?;
                }
                Ok(())
            }
            TrafficSpec::MulticastBernoulli {
                input_rate,
                mean_fanout,
            } => {
                prob("multicast input rate", *input_rate)?;
                fanout(*mean_fanout)
            }
            TrafficSpec::Saturated { pattern } => match pattern {
                Some(p) if p.n() != n => {
                    Err(Error::config(format!("saturation pattern must be {n}x{n}")))
                }
                _ => Ok(()),
            },
            TrafficSpec::SaturatedMulticast { mean_fanout } => fanout(*mean_fanout),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Admissibility {
    pub admissible: bool,
    pub max_row_sum: f64,
    pub max_col_sum: f64,
}

impl Admissibility {
    pub fn worst(&self) -> f64 {
        self.max_row_sum.max(self.max_col_sum)
    }
}

/// Admissible iff every row sum and every column sum is below 1.
pub fn admissible_check(rates: &[Vec<f64>]) -> Admissibility {
    let max_row_sum = rates
        .iter()
        .map(|r| r.iter().sum::<f64>())
        .fold(0.0, f64::max);
    let cols = rates.first().map_or(0, Vec::len);
    let max_col_sum = (0..cols)
        .map(|j| rates.iter().map(|r| r[j]).sum::<f64>())
        .fold(0.0, f64::max);
    Admissibility {
        admissible: max_row_sum < 1.0 && max_col_sum < 1.0,
        max_row_sum,
        max_col_sum,
    }
}

/// Truncated geometric law on `[1, n]`, `P(k) ∝ r^(k-1)`, with `r` tuned so
/// the mean hits a target.
#[derive(Clone, Debug)]
pub struct FanoutDistribution {
    cdf: Vec<f64>,
}

impl FanoutDistribution {
    pub fn new(n: usize, mean: f64) -> Result<Self> {
        if n == 0 || !(mean >= 1.0 && mean <= n as f64) {
            return Err(Error::config(format!(
                "mean fanout {mean} outside [1, {n}]"
            )));
        }
        // weights r^k computed in log space, scaled so the largest is 1
        let pmf = |log_r: f64| -> Vec<f64> {
            let top = if log_r > 0.0 {
                (n - 1) as f64 * log_r
            } else {
                0.0
            };
            let mut w: Vec<f64> = (0..n).map(|k| (k as f64 * log_r - top).exp()).collect();
            let total: f64 = w.iter().sum();
            w.iter_mut().for_each(|x| *x /= total);
            w
        };
        let mean_of =
            |p: &[f64]| -> f64 { p.iter().enumerate().map(|(k, x)| (k + 1) as f64 * x).sum() };

        let probs = if mean <= 1.0 {
            let mut p = vec![0.0; n];
            p[0] = 1.0;
            p
        } else if mean >= n as f64 {
            let mut p = vec![0.0; n];
            p[n - 1] = 1.0;
            p
        } else {
            // mean is increasing in r; bisect on log r
            let (mut lo, mut hi) = (-40.0f64, 40.0f64);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mean_of(&pmf(mid)) < mean {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            pmf(0.5 * (lo + hi))
        };
        let mut acc = 0.0;
        let cdf = probs
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        Ok(FanoutDistribution { cdf })
    }

    pub fn mean(&self) -> f64 {
        let mut prev = 0.0;
        self.cdf
            .iter()
            .enumerate()
            .map(|(k, &c)| {
                let p = c - prev;
                prev = c;
                (k + 1) as f64 * p
            })
            .sum()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        let k = self.cdf.partition_point(|&c| c <= u);
        k.min(self.cdf.len() - 1) + 1
    }
}

#[derive(Clone, Debug, Default)]
struct OnOffState {
    on_left: u64,
    off_left: u64,
    dest: usize,
}

/// Stateful generator for one run.
#[derive(Clone, Debug)]
pub struct TrafficSource {
    spec: TrafficSpec,
    n: usize,
    classes: usize,
    rng: ChaCha8Rng,
    next_id: u64,
    onoff: Vec<OnOffState>,
    burst_len: Option<Geometric>,
    gap_len: Option<Geometric>,
    fanout: Option<FanoutDistribution>,
    row_cdf: Vec<Vec<f64>>,
}

impl TrafficSource {
    pub fn new(spec: TrafficSpec, n: usize, classes: usize, seed: u64) -> Result<Self> {
        spec.validate(n)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(1);
        let mut src = TrafficSource {
            n,
            classes,
            rng,
            next_id: 0,
            onoff: Vec::new(),
            burst_len: None,
            gap_len: None,
            fanout: None,
            row_cdf: Vec::new(),
            spec,
        };
        match &src.spec {
            TrafficSpec::OnOffBursty { load, mean_burst } if *load > 0.0 => {
                let mean_gap = mean_burst * (1.0 - load) / load;
                src.burst_len = Some(
                    Geometric::new(1.0 / mean_burst)
                        .map_err(|e| Error::config(format!("burst length: {e}")))?,
                );
                src.gap_len = Some(
                    Geometric::new(1.0 / (1.0 + mean_gap))
                        .map_err(|e| Error::config(format!("gap length: {e}")))?,
                );
                let gap = src.gap_len.expect("set above");
                src.onoff = (0..n)
                    .map(|_| OnOffState {
                        on_left: 0,
                        off_left: gap.sample(&mut src.rng),
                        dest: 0,
                    })
                    .collect();
            }
            TrafficSpec::MulticastBernoulli { mean_fanout, .. }
            | TrafficSpec::SaturatedMulticast { mean_fanout } => {
                src.fanout = Some(FanoutDistribution::new(n, *mean_fanout)?);
            }
            TrafficSpec::BernoulliMatrix { rates } => {
                src.row_cdf = rates
                    .iter()
                    .map(|row| {
                        let mut acc = 0.0;
                        row.iter()
                            .map(|r| {
                                acc += r;
                                acc
                            })
                            .collect()
                    })
                    .collect();
            }
            _ => {}
        }
        Ok(src)
    }

    pub fn spec(&self) -> &TrafficSpec {
        &self.spec
    }

    fn draw_class(&mut self) -> usize {
        if self.classes > 1 {
            self.rng.random_range(0..self.classes)
        } else {
            0
        }
    }

    fn make(&mut self, input: usize, destinations: PortSet, slot: u64) -> Cell {
        let class = self.draw_class();
        let id = self.next_id;
        self.next_id += 1;
        Cell {
            id,
            input,
            destinations,
            class,
            arrival_slot: slot,
        }
    }

    /// A fresh unicast cell to a fixed output.
    pub fn unicast_cell(&mut self, input: usize, output: usize, slot: u64) -> Cell {
        self.make(input, PortSet::singleton(output), slot)
    }

    /// A fresh unicast cell to a uniformly drawn output.
    pub fn uniform_cell(&mut self, input: usize, slot: u64) -> Cell {
        let o = self.rng.random_range(0..self.n);
        self.make(input, PortSet::singleton(o), slot)
    }

    /// A fresh multicast cell with a fanout drawn from the configured law.
    pub fn multicast_cell(&mut self, input: usize, slot: u64) -> Cell {
        let dist = self
            .fanout
            .as_ref()
            .expect("multicast cell requested without a fanout distribution");
        let k = dist.sample(&mut self.rng);
        let dests: PortSet = index::sample(&mut self.rng, self.n, k)
            .into_iter()
            .collect();
        self.make(input, dests, slot)
    }

    /// Arrivals for one slot, indexed by input. Saturated specs return none.
    pub fn next_slot_arrivals(&mut self, slot: u64) -> Vec<Option<Cell>> {
        let n = self.n;
        let mut out = vec![None; n];
        match self.spec.clone() {
            TrafficSpec::BernoulliUniform { load } => {
                for (i, slot_cell) in out.iter_mut().enumerate() {
                    if load > 0.0 && self.rng.random_bool(load) {
                        *slot_cell = Some(self.uniform_cell(i, slot));
                    }
                }
            }
            TrafficSpec::BernoulliMatrix { .. } => {
                for (i, slot_cell) in out.iter_mut().enumerate() {
                    let u: f64 = self.rng.random();
                    let row = &self.row_cdf[i];
                    let j = row.partition_point(|&c| c <= u);
                    if j < n {
                        *slot_cell = Some(self.unicast_cell(i, j, slot));
                    }
                }
            }
            TrafficSpec::OnOffBursty { load, .. } => {
                if load <= 0.0 {
                    return out;
                }
                let burst = self.burst_len.expect("initialized");
                let gap = self.gap_len.expect("initialized");
                for (i, slot_cell) in out.iter_mut().enumerate() {
                    if self.onoff[i].on_left == 0 && self.onoff[i].off_left == 0 {
                        self.onoff[i].on_left = 1 + burst.sample(&mut self.rng);
                        self.onoff[i].dest = self.rng.random_range(0..n);
                    }
                    if self.onoff[i].on_left > 0 {
                        let d = self.onoff[i].dest;
                        *slot_cell = Some(self.unicast_cell(i, d, slot));
                        self.onoff[i].on_left -= 1;
                        if self.onoff[i].on_left == 0 {
                            self.onoff[i].off_left = gap.sample(&mut self.rng);
                        }
                    } else {
                        self.onoff[i].off_left -= 1;
                    }
                }
            }
            TrafficSpec::MulticastBernoulli { input_rate, .. } => {
                for (i, slot_cell) in out.iter_mut().enumerate() {
                    if input_rate > 0.0 && self.rng.random_bool(input_rate) {
                        *slot_cell = Some(self.multicast_cell(i, slot));
                    }
                }
            }
            TrafficSpec::Saturated { .. } | TrafficSpec::SaturatedMulticast { .. } => {}
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count_arrivals(spec: TrafficSpec, n: usize, slots: u64, seed: u64) -> Vec<Vec<u64>> {
        let mut src = TrafficSource::new(spec, n, 1, seed).unwrap();
        let mut counts = vec![vec![0u64; n]; n];
        for t in 0..slots {
            for c in src.next_slot_arrivals(t).into_iter().flatten() {
                for o in c.destinations {
                    counts[c.input][o] += 1;
                }
            }
        }
        counts
    }

    #[test]
    fn full_load_every_slot() {
        let mut src =
            TrafficSource::new(TrafficSpec::BernoulliUniform { load: 1.0 }, 8, 1, 3).unwrap();
        for t in 0..1000 {
            let a = src.next_slot_arrivals(t);
            assert!(a.iter().all(Option::is_some));
        }
    }

    #[test]
    fn zero_load_never() {
        for spec in [
            TrafficSpec::BernoulliUniform { load: 0.0 },
            TrafficSpec::OnOffBursty {
                load: 0.0,
                mean_burst: 8.0,
            },
            TrafficSpec::MulticastBernoulli {
                input_rate: 0.0,
                mean_fanout: 2.0,
            },
        ] {
            let counts = count_arrivals(spec, 4, 10_000, 1);
            assert_eq!(counts.iter().flatten().sum::<u64>(), 0);
        }
    }

    #[test]
    fn bernoulli_rate_and_uniformity() {
        let n = 8;
        let slots = 100_000u64;
        let counts = count_arrivals(TrafficSpec::BernoulliUniform { load: 0.5 }, n, slots, 17);
        for row in &counts {
            let rate = row.iter().sum::<u64>() as f64 / slots as f64;
            assert!((rate - 0.5).abs() <= 0.005, "rate {rate}");
        }
        // per-destination counts: binomial(total, 1/n), 3 sigma
        for o in 0..n {
            let col: u64 = counts.iter().map(|r| r[o]).sum();
            let total: u64 = counts.iter().flatten().sum();
            let p = 1.0 / n as f64;
            let mean = total as f64 * p;
            let sd = (total as f64 * p * (1.0 - p)).sqrt();
            assert!(
                (col as f64 - mean).abs() <= 3.0 * sd,
                "output {o}: {col} vs {mean}"
            );
        }
    }

    #[test]
    fn seed_determinism() {
        let spec = TrafficSpec::OnOffBursty {
            load: 0.6,
            mean_burst: 5.0,
        };
        let mut a = TrafficSource::new(spec.clone(), 6, 2, 99).unwrap();
        let mut b = TrafficSource::new(spec, 6, 2, 99).unwrap();
        for t in 0..5_000 {
            assert_eq!(a.next_slot_arrivals(t), b.next_slot_arrivals(t));
        }
    }

    #[test]
    fn onoff_rate_and_burst_destinations() {
        let n = 4;
        let (p, b) = (0.4, 10.0);
        let slots = 400_000u64;
        let mut src = TrafficSource::new(
            TrafficSpec::OnOffBursty {
                load: p,
                mean_burst: b,
            },
            n,
            1,
            5,
        )
        .unwrap();
        let mut cells = 0u64;
        let mut continuing = vec![false; n];
        let mut last = vec![0usize; n];
        for t in 0..slots {
            let a = src.next_slot_arrivals(t);
            for i in 0..n {
                if let Some(c) = a[i] {
                    cells += 1;
                    let d = c.unicast_output().unwrap();
                    if continuing[i] {
                        assert_eq!(d, last[i], "destination changed inside a burst");
                    }
                    last[i] = d;
                    continuing[i] = src.onoff[i].on_left > 0;
                } else {
                    continuing[i] = false;
                }
            }
        }
        let rate = cells as f64 / (slots * n as u64) as f64;
        // renewal-reward variance: cycle = burst L + gap K, reward L
        let gap = b * (1.0 - p) / p;
        let var_cycle = (1.0 - p).powi(2) * b * (b - 1.0) + p * p * gap * (1.0 + gap);
        let sigma = (var_cycle / ((b + gap) * (slots * n as u64) as f64)).sqrt();
        assert!((rate - p).abs() <= 3.0 * sigma, "rate {rate} sigma {sigma}");
    }

    #[test]
    fn onoff_burst_lengths() {
        let (p, b) = (0.5, 8.0);
        let mut src = TrafficSource::new(
            TrafficSpec::OnOffBursty {
                load: p,
                mean_burst: b,
            },
            1,
            1,
            21,
        )
        .unwrap();
        let mut lengths = Vec::new();
        let mut cur = 0u64;
        for t in 0..1_000_000 {
            if src.next_slot_arrivals(t)[0].is_some() {
                cur += 1;
                if src.onoff[0].on_left == 0 {
                    lengths.push(cur);
                    cur = 0;
                }
            }
        }
        let mean = lengths.iter().sum::<u64>() as f64 / lengths.len() as f64;
        assert!((mean - b).abs() <= 0.05 * b, "mean burst {mean}");
    }

    #[test]
    fn multicast_mean_fanout() {
        let n = 8;
        let mut src = TrafficSource::new(
            TrafficSpec::MulticastBernoulli {
                input_rate: 1.0,
                mean_fanout: 4.0,
            },
            n,
            1,
            8,
        )
        .unwrap();
        let mut total = 0usize;
        let mut cells = 0usize;
        while cells < 100_000 {
            for c in src.next_slot_arrivals(cells as u64).into_iter().flatten() {
                assert!(c.destinations.is_subset(PortSet::full(n)));
                total += c.fanout();
                cells += 1;
            }
        }
        let mean = total as f64 / cells as f64;
        assert!((mean - 4.0).abs() <= 0.05, "mean fanout {mean}");
    }

    #[test]
    fn fanout_distribution_hits_mean() {
        for n in [2usize, 4, 8, 16, 32] {
            for &f in &[1.0, 1.5, 2.0, n as f64 / 2.0, n as f64 - 0.5, n as f64] {
                if f < 1.0 || f > n as f64 {
                    continue;
                }
                let d = FanoutDistribution::new(n, f).unwrap();
                assert!((d.mean() - f).abs() < 1e-9, "n={n} f={f} got {}", d.mean());
            }
        }
        assert!(FanoutDistribution::new(4, 0.5).is_err());
        assert!(FanoutDistribution::new(4, 5.0).is_err());
    }

    #[test]
    fn matrix_rates() {
        let rates = vec![vec![0.3, 0.1], vec![0.0, 0.6]];
        let slots = 200_000u64;
        let counts = count_arrivals(
            TrafficSpec::BernoulliMatrix {
                rates: rates.clone(),
            },
            2,
            slots,
            4,
        );
        for i in 0..2 {
            for j in 0..2 {
                let r = counts[i][j] as f64 / slots as f64;
                let sd = (rates[i][j] * (1.0 - rates[i][j]) / slots as f64).sqrt();
                assert!((r - rates[i][j]).abs() <= 3.0 * sd + 1e-12, "({i},{j}) {r}");
            }
        }
    }

    #[test]
    fn admissibility() {
        let n = 8;
        let uni = vec![vec![0.9 / n as f64; n]; n];
        assert!(admissible_check(&uni).admissible);
        let mut bad = vec![vec![0.1; 3]; 3];
        bad[0][2] = 0.5;
        bad[1][2] = 0.6;
        bad[2][2] = 0.1;
        let a = admissible_check(&bad);
        assert!(!a.admissible);
        assert!((a.max_col_sum - 1.2).abs() < 1e-12);
        assert!((a.worst() - 1.2).abs() < 1e-12);
    }

    #[test]
    fn admissibility_agrees_with_recount() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..2_000 {
            let n = rng.random_range(1..7);
            let m: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.random_range(0.0..0.4)).collect())
                .collect();
            let a = admissible_check(&m);
            let mut ok = true;
            let mut worst_row: f64 = 0.0;
            let mut worst_col: f64 = 0.0;
            for (i, row) in m.iter().enumerate() {
                let r: f64 = row.iter().sum();
                let c: f64 = (0..n).map(|k| m[k][i]).sum();
                ok &= r < 1.0 && c < 1.0;
                worst_row = worst_row.max(r);
                worst_col = worst_col.max(c);
            }
            assert_eq!(a.admissible, ok);
            assert!((a.max_row_sum - worst_row).abs() < 1e-12);
            assert!((a.max_col_sum - worst_col).abs() < 1e-12);
        }
    }

    #[test]
    fn validate_rejects_bad_specs() {
        assert!(TrafficSpec::BernoulliUniform { load: 1.2 }
            .validate(4)
            .is_err());
        assert!(TrafficSpec::OnOffBursty {
            load: 0.5,
            mean_burst: 0.5
        }
        .validate(4)
        .is_err());
        assert!(TrafficSpec::BernoulliMatrix {
            rates: vec![vec![0.6, 0.6], vec![0.0, 0.0]]
        }
        .validate(2)
        .is_err());
        assert!(TrafficSpec::MulticastBernoulli {
            input_rate: 0.5,
            mean_fanout: 9.0
        }
        .validate(8)
        .is_err());
    }
}
