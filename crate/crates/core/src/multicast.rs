// SPDX-License-Identifier: Apache-2.0

//! Multicast scheduling over per-input HOL fanout sets.
//!
//! Each input exposes the unserved destinations of its multicast HOL cell.
//! With fanout splitting a cell may be served over several slots, so a
//! schedule only has to pick, for every requested output, which requester
//! gets it. The copies left unserved after a slot are the residue.
//!
//! For any work-conserving schedule the residue size is fixed: every
//! requested output is served exactly once, so
//! `sum(residue) = sum(|fanout|) - #requested outputs`. Policies differ only
//! in where the residue lands.

use rand::Rng;

use crate::error::{Error, Result};
use crate::fabric::{Match, MatchMode, PortSet};

/// Per-input unserved HOL destinations; empty means no multicast HOL cell.
pub type FanoutRequestSet = Vec<PortSet>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueReport {
    pub residual_copies: Vec<usize>,
    /// Inputs left with at least one unserved copy.
    pub residue_inputs: usize,
}

impl ResidueReport {
    pub fn total(&self) -> usize {
        self.residual_copies.iter().sum()
    }
}

fn requesters(fanouts: &[PortSet], output: usize) -> PortSet {
    fanouts
        .iter()
        .enumerate()
        .filter_map(|(i, f)| f.contains(output).then_some(i))
        .collect()
}

fn requested_outputs(fanouts: &[PortSet]) -> PortSet {
    fanouts.iter().fold(PortSet::EMPTY, |acc, f| acc.union(*f))
}

// Port count of the square match holding these requests; fanouts may name
// more outputs than there are inputs.
fn match_size(fanouts: &[PortSet]) -> usize {
    let outputs = requested_outputs(fanouts).last().map_or(0, |o| o + 1);
    fanouts.len().max(outputs)
}

/// Each requested output goes to one of its requesters, chosen uniformly.
pub fn random_split_schedule<R: Rng + ?Sized>(fanouts: &[PortSet], rng: &mut R) -> Match {
    let mut m = Match::new(match_size(fanouts), MatchMode::Multicast);
    for o in requested_outputs(fanouts) {
        let reqs = requesters(fanouts, o);
        let k = rng.random_range(0..reqs.len());
        let i = reqs.iter().nth(k).expect("k < len");
        m.push(i, o);
    }
    m
}

/// All-or-nothing service. Inputs are visited round-robin from
/// `order_pointer`; an input gets its whole fanout if none of it is taken
/// yet, otherwise nothing.
pub fn no_split_schedule(fanouts: &[PortSet], order_pointer: usize) -> Match {
    let n = fanouts.len();
    let mut m = Match::new(match_size(fanouts), MatchMode::Multicast);
    let mut claimed = PortSet::EMPTY;
    for k in 0..n {
        let i = (order_pointer + k) % n;
        let f = fanouts[i];
        if !f.is_empty() && f.is_disjoint(claimed) {
            for o in f {
                m.push(i, o);
            }
            claimed = claimed.union(f);
        }
    }
    m
}

/// Contending inputs up to which [`concentrate_schedule`] searches exactly.
pub const CONCENTRATE_EXACT_LIMIT: usize = 16;

#[derive(Clone, Debug)]
pub struct ConcentrateOutcome {
    pub matching: Match,
    pub residue_inputs: usize,
    /// False when the greedy fallback was used.
    pub exact: bool,
}

/// Work-conserving schedule that leaves the residue on as few inputs as
/// possible.
///
/// Minimizing residue inputs is the same as maximizing the number of inputs
/// served completely, i.e. a maximum family of pairwise-disjoint fanouts.
/// Among maximum families the one preferring inputs in round-robin order
/// from `tie_pointer` wins. Outputs not used by the fully served inputs go to
/// their first requester in the same order.
pub fn concentrate_schedule(fanouts: &[PortSet], tie_pointer: usize) -> ConcentrateOutcome {
    let n = fanouts.len();
    let order: Vec<usize> = (0..n)
        .map(|k| (tie_pointer + k) % n.max(1))
        .filter(|&i| !fanouts[i].is_empty())
        .collect();

    // Inputs disjoint from every other requester belong to every maximum
    // family; only the rest need searching.
    let mut always = Vec::new();
    let mut contending = Vec::new();
    for &i in &order {
        let others = order
            .iter()
            .filter(|&&j| j != i)
            .fold(PortSet::EMPTY, |acc, &j| acc.union(fanouts[j]));
        if fanouts[i].is_disjoint(others) {
            always.push(i);
        } else {
            contending.push(i);
        }
    }

    let exact = contending.len() <= CONCENTRATE_EXACT_LIMIT;
    let chosen = if exact {
        max_disjoint_family(fanouts, &contending)
    } else {
        greedy_disjoint_family(fanouts, &contending)
    };

    let mut m = Match::new(match_size(fanouts), MatchMode::Multicast);
    let mut full = PortSet::EMPTY;
    for &i in always.iter().chain(chosen.iter()) {
        full.insert(i);
        for o in fanouts[i] {
            m.push(i, o);
        }
    }
    let taken = m.matched_outputs();
    for o in requested_outputs(fanouts).difference(taken) {
        let reqs = requesters(fanouts, o);
        let i = order
            .iter()
            .copied()
            .find(|&i| reqs.contains(i))
            .expect("requested output has a requester");
        m.push(i, o);
    }
    ConcentrateOutcome {
        matching: m,
        residue_inputs: order.len() - full.len(),
        exact,
    }
}

fn max_disjoint_family(fanouts: &[PortSet], candidates: &[usize]) -> Vec<usize> {
    struct Search<'a> {
        fanouts: &'a [PortSet],
        candidates: &'a [usize],
        best: Vec<usize>,
        current: Vec<usize>,
    }

    impl Search<'_> {
        fn dfs(&mut self, idx: usize, claimed: PortSet) {
            if self.current.len() > self.best.len() {
                self.best = self.current.clone();
            }
            if idx == self.candidates.len() {
                return;
            }
            // not even taking every remaining candidate beats the best
            if self.current.len() + (self.candidates.len() - idx) <= self.best.len() {
                return;
            }
            let i = self.candidates[idx];
            let f = self.fanouts[i];
            if f.is_disjoint(claimed) {
                self.current.push(i);
                self.dfs(idx + 1, claimed.union(f));
                self.current.pop();
            }
            self.dfs(idx + 1, claimed);
        }
    }

    let mut s = Search {
        fanouts,
        candidates,
        best: Vec::new(),
        current: Vec::new(),
    };
    s.dfs(0, PortSet::EMPTY);
    s.best
}

// Smallest fanouts first, round-robin order among equals.
fn greedy_disjoint_family(fanouts: &[PortSet], candidates: &[usize]) -> Vec<usize> {
    let mut ranked: Vec<(usize, usize)> = candidates
        .iter()
        .enumerate()
        .map(|(rank, &i)| (rank, i))
        .collect();
    ranked.sort_by_key(|&(rank, i)| (fanouts[i].len(), rank));
    let mut claimed = PortSet::EMPTY;
    let mut chosen = Vec::new();
    for (_, i) in ranked {
        if fanouts[i].is_disjoint(claimed) {
            claimed = claimed.union(fanouts[i]);
            chosen.push(i);
        }
    }
    chosen
}

/// Parameters of the weight-based policy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WbaParams {
    pub w_age: f64,
    pub w_fanout: f64,
}

impl Default for WbaParams {
    fn default() -> Self {
        WbaParams {
            w_age: 1.0,
            w_fanout: 1.0,
        }
    }
}

/// Weight-based multicast policy: an input's HOL cell weighs
/// `w_age * age - w_fanout * |fanout|`, and each output goes to its heaviest
/// requester (lowest index on ties). Older cells gain priority, wide fanouts
/// lose it.
pub fn wba_schedule(fanouts: &[PortSet], hol_ages: &[u64], params: WbaParams) -> Result<Match> {
    if !(params.w_age >= 0.0 && params.w_fanout >= 0.0) {
        return Err(Error::config(format!(
            "WBA weights must be non-negative, got {params:?}"
        )));
    }
    if hol_ages.len() != fanouts.len() {
        return Err(Error::config("hol_ages length differs from fanout count"));
    }
    let weight: Vec<f64> = fanouts
        .iter()
        .zip(hol_ages)
        .map(|(f, &age)| params.w_age * age as f64 - params.w_fanout * f.len() as f64)
        .collect();
    let mut m = Match::new(match_size(fanouts), MatchMode::Multicast);
    for o in requested_outputs(fanouts) {
        let mut best: Option<usize> = None;
        for i in requesters(fanouts, o) {
            if best.is_none_or(|b| weight[i] > weight[b]) {
                best = Some(i);
            }
        }
        m.push(best.expect("requested output has a requester"), o);
    }
    Ok(m)
}

/// Residual copies per input after serving `m`.
pub fn compute_residue(fanouts: &[PortSet], m: &Match) -> Result<ResidueReport> {
    if m.n() < fanouts.len() {
        return Err(Error::config("match smaller than the fanout count"));
    }
    let mut served = vec![PortSet::EMPTY; fanouts.len()];
    for (i, o) in m.pairs() {
        if fanouts.get(i).is_none_or(|f| !f.contains(o)) {
            return Err(Error::config(format!(
                "match serves ({i},{o}) outside the requested fanout"
            )));
        }
        served[i].insert(o);
    }
    let residual_copies: Vec<usize> = fanouts
        .iter()
        .zip(&served)
        .map(|(f, s)| f.len() - s.len())
        .collect();
    let residue_inputs = residual_copies.iter().filter(|&&r| r > 0).count();
    Ok(ResidueReport {
        residual_copies,
        residue_inputs,
    })
}

/// Most contested outputs [`brute_force_min_residue`] will enumerate.
pub const BRUTE_FORCE_CONTESTED_LIMIT: usize = 12;

/// Calls `visit` with every work-conserving assignment of requested outputs
/// to requesters.
pub fn for_each_work_conserving(fanouts: &[PortSet], mut visit: impl FnMut(&Match)) -> Result<()> {
    let n = match_size(fanouts);
    let outputs: Vec<usize> = requested_outputs(fanouts).iter().collect();
    let choices: Vec<Vec<usize>> = outputs
        .iter()
        .map(|&o| requesters(fanouts, o).iter().collect())
        .collect();
    let contested = choices.iter().filter(|c| c.len() > 1).count();
    if contested > BRUTE_FORCE_CONTESTED_LIMIT {
        return Err(Error::TooLarge(format!(
            "{contested} contested outputs (limit {BRUTE_FORCE_CONTESTED_LIMIT})"
        )));
    }
    let mut digits = vec![0usize; outputs.len()];
    loop {
        let mut m = Match::new(n, MatchMode::Multicast);
        for (k, &o) in outputs.iter().enumerate() {
            m.push(choices[k][digits[k]], o);
        }
        visit(&m);
        // mixed-radix increment
        let mut k = 0;
        loop {
            if k == digits.len() {
                return Ok(());
            }
            digits[k] += 1;
            if digits[k] < choices[k].len() {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}

/// Smallest achievable residue_inputs, by exhaustive enumeration.
pub fn brute_force_min_residue(fanouts: &[PortSet]) -> Result<usize> {
    let mut best = usize::MAX;
    for_each_work_conserving(fanouts, |m| {
        let r = compute_residue(fanouts, m).expect("enumerated matches respect fanouts");
        best = best.min(r.residue_inputs);
    })?;
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn set(xs: &[usize]) -> PortSet {
        xs.iter().copied().collect()
    }

    fn served(m: &Match, i: usize) -> PortSet {
        m.outputs_of(i)
    }

    fn random_fanouts(rng: &mut ChaCha8Rng, inputs: usize, outputs: usize) -> Vec<PortSet> {
        (0..inputs)
            .map(|_| {
                if rng.random_bool(0.2) {
                    PortSet::EMPTY
                } else {
                    PortSet::from_bits(rng.random::<u64>()).intersection(PortSet::full(outputs))
                }
            })
            .collect()
    }

    #[test]
    fn random_split_uncontested() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = vec![set(&[0, 1, 2]), PortSet::EMPTY, PortSet::EMPTY];
        let m = random_split_schedule(&f, &mut rng);
        assert_eq!(served(&m, 0), set(&[0, 1, 2]));
    }

    #[test]
    fn random_split_fair_coin() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let f = vec![set(&[1]), set(&[1])];
        let trials = 10_000;
        let wins0 = (0..trials)
            .filter(|_| random_split_schedule(&f, &mut rng).input_of(1) == Some(0))
            .count();
        let freq = wins0 as f64 / trials as f64;
        assert!((freq - 0.5).abs() <= 0.02, "freq {freq}");
    }

    #[test]
    fn work_conservation_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for t in 0..10_000 {
            let n = 2 + t % 7;
            let f = random_fanouts(&mut rng, n, n);
            let want = requested_outputs(&f);
            let r = random_split_schedule(&f, &mut rng);
            let c = concentrate_schedule(&f, t % n).matching;
            let ages: Vec<u64> = (0..n).map(|_| rng.random_range(0..50)).collect();
            let w = wba_schedule(&f, &ages, WbaParams::default()).unwrap();
            for m in [&r, &c, &w] {
                assert_eq!(m.matched_outputs(), want);
                assert!(compute_residue(&f, m).is_ok());
            }
        }
    }

    #[test]
    fn no_split_pointer_zero() {
        let f = vec![set(&[0, 1]), set(&[1])];
        let m = no_split_schedule(&f, 0);
        assert_eq!(served(&m, 0), set(&[0, 1]));
        assert!(served(&m, 1).is_empty());
    }

    #[test]
    fn no_split_pointer_one_idles_output() {
        let f = vec![set(&[0, 1]), set(&[1])];
        let m = no_split_schedule(&f, 1);
        assert_eq!(served(&m, 1), set(&[1]));
        assert!(served(&m, 0).is_empty());
        assert_eq!(m.input_of(0), None);
    }

    #[test]
    fn no_split_disjoint_all_served() {
        let f = vec![set(&[0]), set(&[1, 2]), set(&[3])];
        for p in 0..3 {
            let m = no_split_schedule(&f, p);
            for (i, fi) in f.iter().enumerate() {
                assert_eq!(served(&m, i), *fi);
            }
        }
    }

    #[test]
    fn no_split_never_partial() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for t in 0..5_000 {
            let n = 2 + t % 7;
            let f = random_fanouts(&mut rng, n, n);
            let m = no_split_schedule(&f, t % n);
            for (i, fi) in f.iter().enumerate() {
                let s = served(&m, i);
                assert!(s.is_empty() || s == *fi);
            }
        }
    }

    #[test]
    fn concentrate_two_by_three() {
        let f = vec![set(&[0, 1, 2]), set(&[1, 2])];
        let out = concentrate_schedule(&f, 0);
        assert!(out.exact);
        assert_eq!(served(&out.matching, 0), set(&[0, 1, 2]));
        assert_eq!(out.residue_inputs, 1);
        let r = compute_residue(&f, &out.matching).unwrap();
        assert_eq!(r.residual_copies, vec![0, 2]);
        assert_eq!(r.residue_inputs, 1);
        assert_eq!(brute_force_min_residue(&f).unwrap(), 1);

        // with the pointer on input 1 it is still the only way to leave a
        // single residue input, since input 1 cannot take output 0
        let out = concentrate_schedule(&f, 1);
        assert_eq!(out.residue_inputs, 1);
    }

    #[test]
    fn concentrate_breaks_ties_round_robin() {
        let f = vec![set(&[0, 1]), set(&[1, 2])];
        let a = concentrate_schedule(&f, 0);
        let b = concentrate_schedule(&f, 1);
        assert_eq!(served(&a.matching, 0), set(&[0, 1]));
        assert_eq!(served(&b.matching, 1), set(&[1, 2]));
        assert_eq!(a.residue_inputs, 1);
        assert_eq!(b.residue_inputs, 1);
    }

    #[test]
    fn concentrate_uncontested() {
        let f = vec![set(&[0]), set(&[1, 2]), PortSet::EMPTY, set(&[3])];
        let out = concentrate_schedule(&f, 2);
        assert_eq!(out.residue_inputs, 0);
        assert_eq!(brute_force_min_residue(&f).unwrap(), 0);
    }

    #[test]
    fn brute_force_single_input() {
        assert_eq!(brute_force_min_residue(&[set(&[0, 1, 5])]).unwrap(), 0);
        assert_eq!(brute_force_min_residue(&[PortSet::EMPTY; 3]).unwrap(), 0);
    }

    #[test]
    fn brute_force_refuses_large() {
        let f = vec![PortSet::full(13), PortSet::full(13)];
        assert!(matches!(
            brute_force_min_residue(&f),
            Err(Error::TooLarge(_))
        ));
    }

    #[test]
    fn concentrate_matches_brute_force_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for t in 0..3_000 {
            let inputs = 2 + t % 4;
            let outputs = 2 + t % 5;
            let f = random_fanouts(&mut rng, inputs, outputs);
            let out = concentrate_schedule(&f, t % inputs);
            let r = compute_residue(&f, &out.matching).unwrap();
            assert_eq!(r.residue_inputs, out.residue_inputs);
            assert_eq!(
                out.residue_inputs,
                brute_force_min_residue(&f).unwrap(),
                "{f:?}"
            );
        }
    }

    #[test]
    fn greedy_fallback_is_flagged_and_work_conserving() {
        let n = 20;
        let f: Vec<PortSet> = (0..n).map(|i| set(&[i % 10, (i + 1) % 10])).collect();
        let out = concentrate_schedule(&f, 0);
        assert!(!out.exact);
        assert_eq!(out.matching.matched_outputs(), PortSet::full(10));
    }

    #[test]
    fn wba_prefers_small_fanout() {
        let f = vec![set(&[0]), set(&[0, 1])];
        let params = WbaParams {
            w_age: 1.0,
            w_fanout: 1.0,
        };
        let m = wba_schedule(&f, &[3, 3], params).unwrap();
        assert_eq!(m.input_of(0), Some(0));
        assert_eq!(m.input_of(1), Some(1));
    }

    #[test]
    fn wba_zero_weights_lowest_index() {
        let f = vec![set(&[0, 2]), set(&[0, 1]), set(&[1, 2])];
        let zero = WbaParams {
            w_age: 0.0,
            w_fanout: 0.0,
        };
        let m = wba_schedule(&f, &[9, 1, 5], zero).unwrap();
        assert_eq!(m.input_of(0), Some(0));
        assert_eq!(m.input_of(1), Some(1));
        assert_eq!(m.input_of(2), Some(0));
        assert_eq!(m.matched_outputs(), set(&[0, 1, 2]));
    }

    #[test]
    fn wba_rejects_negative_weights() {
        let bad = WbaParams {
            w_age: -1.0,
            w_fanout: 0.0,
        };
        assert!(wba_schedule(&[set(&[0])], &[0], bad).is_err());
    }

    #[test]
    fn wba_aging_is_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for t in 0..5_000 {
            let n = 2 + t % 6;
            let f = random_fanouts(&mut rng, n, n);
            let ages: Vec<u64> = (0..n).map(|_| rng.random_range(0..20)).collect();
            let params = WbaParams {
                w_age: rng.random_range(0.0..2.0),
                w_fanout: rng.random_range(0.0..2.0),
            };
            let before = wba_schedule(&f, &ages, params).unwrap();
            let k = rng.random_range(0..n);
            let mut older = ages.clone();
            older[k] += rng.random_range(1..10);
            let after = wba_schedule(&f, &older, params).unwrap();
            assert!(before.outputs_of(k).is_subset(after.outputs_of(k)));
        }
    }

    #[test]
    fn residue_full_service_is_zero() {
        let f = [set(&[0]), set(&[1, 2])];
        let m = Match::from_pairs(3, MatchMode::Multicast, [(0, 0), (1, 1), (1, 2)]).unwrap();
        let f3 = vec![f[0], f[1], PortSet::EMPTY];
        let r = compute_residue(&f3, &m).unwrap();
        assert_eq!(r.residual_copies, vec![0, 0, 0]);
        assert_eq!(r.residue_inputs, 0);
    }

    #[test]
    fn residue_sum_is_policy_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for t in 0..400 {
            let inputs = 2 + t % 3;
            let outputs = 2 + t % 4;
            let f = random_fanouts(&mut rng, inputs, outputs);
            let expected = f.iter().map(|s| s.len()).sum::<usize>() - requested_outputs(&f).len();
            for_each_work_conserving(&f, |m| {
                assert_eq!(compute_residue(&f, m).unwrap().total(), expected);
            })
            .unwrap();
        }
    }
}
