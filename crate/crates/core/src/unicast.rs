// SPDX-License-Identifier: Apache-2.0

//! Unicast schedulers.
//!
//! The iterative family (iSLIP, RRM, iLQF, iOCF) shares one
//! request/grant/accept loop and differs only in how arbiters pick among
//! candidates and when pointers move:
//!
//! * iSLIP: round-robin picks; a grant pointer moves one beyond the granted
//!   input only if that grant was accepted, and only in the first iteration.
//!   Accept pointers likewise move only for inputs matched in the first
//!   iteration.
//! * RRM: round-robin picks; every grant in the first iteration moves its
//!   pointer whether or not it was accepted.
//! * iLQF / iOCF: the heaviest candidate wins (queue length or HOL age), ties
//!   go round-robin over the tied set, pointers follow the iSLIP rule.
//!
//! Connections are never undone by later iterations, and the loop stops as
//! soon as no unmatched input has a request for an unmatched output.
//!
//! [`max_size_match`] and [`max_weight_match`] are exact oracles. The
//! weighted one runs the O(N³) Hungarian method.

use std::fmt;

use crate::arbiter::{select_from, RoundRobinPointer};
use crate::error::{Error, Result};
use crate::fabric::{Match, MatchMode, PortSet};

pub use crate::fabric::RequestMatrix;

/// Grant pointers (one per output) and accept pointers (one per input).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchedulerState {
    grant: Vec<RoundRobinPointer>,
    accept: Vec<RoundRobinPointer>,
}

impl SchedulerState {
    pub fn new(n: usize) -> Self {
        SchedulerState {
            grant: vec![RoundRobinPointer::default(); n],
            accept: vec![RoundRobinPointer::default(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.grant.len()
    }

    pub fn grant_pointer(&self, output: usize) -> usize {
        self.grant[output].get()
    }

    pub fn accept_pointer(&self, input: usize) -> usize {
        self.accept[input].get()
    }

    pub fn set_grant_pointer(&mut self, output: usize, value: usize) {
        let n = self.n();
        self.grant[output] = RoundRobinPointer::new(value, n);
    }

    pub fn set_accept_pointer(&mut self, input: usize, value: usize) {
        let n = self.n();
        self.accept[input] = RoundRobinPointer::new(value, n);
    }

    pub fn grant_pointers(&self) -> Vec<usize> {
        self.grant.iter().map(|p| p.get()).collect()
    }

    pub fn accept_pointers(&self) -> Vec<usize> {
        self.accept.iter().map(|p| p.get()).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointerUpdate {
    Grant {
        output: usize,
        from: usize,
        to: usize,
    },
    Accept {
        input: usize,
        from: usize,
        to: usize,
    },
}

/// What happened in one request/grant/accept iteration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IterationRecord {
    /// Requests from unmatched inputs to unmatched outputs.
    pub requests: Vec<PortSet>,
    /// Per output: the input it granted.
    pub grants: Vec<Option<usize>>,
    /// Per input: the output it accepted.
    pub accepts: Vec<Option<usize>>,
    pub pointer_updates: Vec<PointerUpdate>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IterationTrace {
    pub records: Vec<IterationRecord>,
}

impl IterationTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

impl fmt::Display for IterationTrace {
    /// Single line: `it1 req=.. grant=.. accept=.. ptr=.. | it2 ...`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, r) in self.records.iter().enumerate() {
            if k > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "it{} req=", k + 1)?;
            for (i, row) in r.requests.iter().enumerate() {
                if !row.is_empty() {
                    write!(f, "{i}:{row}")?;
                    f.write_str(";")?;
                }
            }
            f.write_str(" grant=")?;
            for (o, g) in r.grants.iter().enumerate() {
                if let Some(i) = g {
                    write!(f, "{o}>{i};")?;
                }
            }
            f.write_str(" accept=")?;
            for (i, a) in r.accepts.iter().enumerate() {
                if let Some(o) = a {
                    write!(f, "{i}<{o};")?;
                }
            }
            f.write_str(" ptr=")?;
            for u in &r.pointer_updates {
                match u {
                    PointerUpdate::Grant { output, from, to } => {
                        write!(f, "g{output}:{from}>{to};")?
                    }
                    PointerUpdate::Accept { input, from, to } => {
                        write!(f, "a{input}:{from}>{to};")?
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct ScheduleOutcome {
    pub matching: Match,
    pub iterations: usize,
    pub trace: IterationTrace,
}

/// N×N non-negative weights (queue lengths, HOL ages).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightMatrix {
    n: usize,
    w: Vec<u64>,
}

impl WeightMatrix {
    pub fn zeros(n: usize) -> Self {
        WeightMatrix {
            n,
            w: vec![0; n * n],
        }
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::config("weight matrix must be square"));
        }
        Ok(WeightMatrix {
            n,
            w: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, input: usize, output: usize) -> u64 {
        self.w[input * self.n + output]
    }

    pub fn set(&mut self, input: usize, output: usize, value: u64) {
        self.w[input * self.n + output] = value;
    }

    /// Requests implied by the positive entries.
    pub fn support(&self) -> RequestMatrix {
        RequestMatrix::from_rows(
            (0..self.n)
                .map(|i| (0..self.n).filter(|&o| self.get(i, o) > 0).collect())
                .collect(),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum PointerRule {
    /// Move only on accepted grants, first iteration only.
    Slip,
    /// Every first-iteration grant moves its pointer.
    Unconditional,
}

#[derive(Clone, Copy)]
pub(crate) enum Arbitration<'a> {
    RoundRobin,
    Weighted(&'a WeightMatrix),
}

impl Arbitration<'_> {
    #[inline]
    fn pick_grant(&self, output: usize, candidates: PortSet, pointer: usize) -> Option<usize> {
        match self {
            Arbitration::RoundRobin => select_from(candidates, pointer),
            Arbitration::Weighted(w) => {
                select_from(heaviest(candidates, |i| w.get(i, output)), pointer)
            }
        }
    }

    #[inline]
    fn pick_accept(&self, input: usize, candidates: PortSet, pointer: usize) -> Option<usize> {
        match self {
            Arbitration::RoundRobin => select_from(candidates, pointer),
            Arbitration::Weighted(w) => {
                select_from(heaviest(candidates, |o| w.get(input, o)), pointer)
            }
        }
    }
}

fn heaviest(candidates: PortSet, weight: impl Fn(usize) -> u64) -> PortSet {
    let mut best = 0u64;
    let mut tied = PortSet::EMPTY;
    for k in candidates {
        let w = weight(k);
        if tied.is_empty() || w > best {
            best = w;
            tied = PortSet::singleton(k);
        } else if w == best {
            tied.insert(k);
        }
    }
    tied
}

/// The shared request/grant/accept loop.
pub(crate) fn schedule_iterative(
    requests: &RequestMatrix,
    state: &mut SchedulerState,
    max_iters: usize,
    arbitration: Arbitration<'_>,
    rule: PointerRule,
    mut trace: Option<&mut IterationTrace>,
) -> Result<(Match, usize)> {
    let n = state.n();
    if requests.n() != n {
        return Err(Error::config(format!(
            "request matrix is {}x{} but scheduler state has N={n}",
            requests.n(),
            requests.n()
        )));
    }
    if max_iters == 0 {
        return Err(Error::config("max_iters must be at least 1"));
    }
    let all = PortSet::full(n);
    let mut m = Match::new(n, MatchMode::Unicast);
    let mut free_in = all;
    let mut free_out = all;
    let mut used = 0usize;
    let mut rows = vec![PortSet::EMPTY; n];
    let mut cols = vec![PortSet::EMPTY; n];
    let mut granted_by = vec![PortSet::EMPTY; n];

    for iter in 0..max_iters {
        cols.iter_mut().for_each(|c| *c = PortSet::EMPTY);
        let mut any = false;
        for (i, row) in rows.iter_mut().enumerate() {
            *row = if free_in.contains(i) {
                requests.row(i).intersection(free_out)
            } else {
                PortSet::EMPTY
            };
            for o in *row {
                cols[o].insert(i);
                any = true;
            }
        }
        if !any {
            if iter == 0 {
                used = 1;
                if let Some(t) = trace.as_deref_mut() {
                    t.records.push(IterationRecord {
                        requests: rows.clone(),
                        grants: vec![None; n],
                        accepts: vec![None; n],
                        pointer_updates: Vec::new(),
                    });
                }
            }
            break;
        }
        used = iter + 1;

        // grant
        granted_by.iter_mut().for_each(|g| *g = PortSet::EMPTY);
        let mut grants = vec![None; n];
        for o in free_out {
            if let Some(i) = arbitration.pick_grant(o, cols[o], state.grant[o].get()) {
                grants[o] = Some(i);
                granted_by[i].insert(o);
            }
        }

        // accept
        let mut accepts = vec![None; n];
        for i in free_in {
            if let Some(o) = arbitration.pick_accept(i, granted_by[i], state.accept[i].get()) {
                accepts[i] = Some(o);
            }
        }

        let mut updates = Vec::new();
        for (i, a) in accepts.iter().enumerate() {
            if let Some(o) = *a {
                m.push(i, o);
                free_in.remove(i);
                free_out.remove(o);
            }
        }
        if iter == 0 {
            for (o, g) in grants.iter().enumerate() {
                let Some(i) = *g else { continue };
                let accepted = accepts[i] == Some(o);
                if accepted || rule == PointerRule::Unconditional {
                    let from = state.grant[o].get();
                    state.grant[o].advance_past(i, n);
                    updates.push(PointerUpdate::Grant {
                        output: o,
                        from,
                        to: state.grant[o].get(),
                    });
                }
            }
            for (i, a) in accepts.iter().enumerate() {
                if let Some(o) = *a {
                    let from = state.accept[i].get();
                    state.accept[i].advance_past(o, n);
                    updates.push(PointerUpdate::Accept {
                        input: i,
                        from,
                        to: state.accept[i].get(),
                    });
                }
            }
        }
        if let Some(t) = trace.as_deref_mut() {
            t.records.push(IterationRecord {
                requests: rows.clone(),
                grants,
                accepts,
                pointer_updates: updates,
            });
        }
    }
    Ok((m, used))
}

fn traced(
    requests: &RequestMatrix,
    state: &mut SchedulerState,
    max_iters: usize,
    arbitration: Arbitration<'_>,
    rule: PointerRule,
) -> Result<ScheduleOutcome> {
    let mut trace = IterationTrace::default();
    let (matching, iterations) = schedule_iterative(
        requests,
        state,
        max_iters,
        arbitration,
        rule,
        Some(&mut trace),
    )?;
    Ok(ScheduleOutcome {
        matching,
        iterations,
        trace,
    })
}

/// iSLIP with at most `max_iters` iterations.
pub fn islip_schedule(
    requests: &RequestMatrix,
    state: &mut SchedulerState,
    max_iters: usize,
) -> Result<ScheduleOutcome> {
    traced(
        requests,
        state,
        max_iters,
        Arbitration::RoundRobin,
        PointerRule::Slip,
    )
}

/// Round-robin matching without the slip rule.
pub fn rrm_schedule(
    requests: &RequestMatrix,
    state: &mut SchedulerState,
    max_iters: usize,
) -> Result<ScheduleOutcome> {
    traced(
        requests,
        state,
        max_iters,
        Arbitration::RoundRobin,
        PointerRule::Unconditional,
    )
}

pub(crate) fn check_weights(requests: &RequestMatrix, weights: &WeightMatrix) -> Result<()> {
    let n = requests.n();
    if weights.n() != n {
        return Err(Error::config(format!(
            "weight matrix N={} does not match request matrix N={n}",
            weights.n()
        )));
    }
    for i in 0..n {
        for o in 0..n {
            if requests.get(i, o) != (weights.get(i, o) > 0) {
                return Err(Error::config(format!(
                    "weight[{i}][{o}]={} inconsistent with request={}",
                    weights.get(i, o),
                    requests.get(i, o)
                )));
            }
        }
    }
    Ok(())
}

/// Iterative longest-queue-first. `weights` are VOQ lengths.
pub fn ilqf_schedule(
    requests: &RequestMatrix,
    weights: &WeightMatrix,
    state: &mut SchedulerState,
    max_iters: usize,
) -> Result<ScheduleOutcome> {
    check_weights(requests, weights)?;
    traced(
        requests,
        state,
        max_iters,
        Arbitration::Weighted(weights),
        PointerRule::Slip,
    )
}

/// Iterative oldest-cell-first. `weights` are HOL waiting times in slots.
pub fn iocf_schedule(
    requests: &RequestMatrix,
    weights: &WeightMatrix,
    state: &mut SchedulerState,
    max_iters: usize,
) -> Result<ScheduleOutcome> {
    check_weights(requests, weights)?;
    traced(
        requests,
        state,
        max_iters,
        Arbitration::Weighted(weights),
        PointerRule::Slip,
    )
}

/// Maximum-cardinality matching by augmenting paths, inputs and outputs
/// scanned in ascending order.
pub fn max_size_match(requests: &RequestMatrix) -> Match {
    let n = requests.n();
    let mut owner: Vec<Option<usize>> = vec![None; n];

    fn augment(
        i: usize,
        requests: &RequestMatrix,
        owner: &mut [Option<usize>],
        visited: &mut PortSet,
    ) -> bool {
        for o in requests.row(i) {
            if visited.contains(o) {
                continue;
            }
            visited.insert(o);
            match owner[o] {
                None => {
                    owner[o] = Some(i);
                    return true;
                }
                Some(j) => {
                    if augment(j, requests, owner, visited) {
                        owner[o] = Some(i);
                        return true;
                    }
                }
            }
        }
        false
    }

    for i in 0..n {
        let mut visited = PortSet::EMPTY;
        augment(i, requests, &mut owner, &mut visited);
    }
    let mut m = Match::unicast(n);
    for (o, i) in owner.iter().enumerate() {
        if let Some(i) = *i {
            m.push(i, o);
        }
    }
    m
}

/// Maximum-weight matching. Zero-weight pairs are never included.
pub fn max_weight_match(weights: &WeightMatrix) -> Match {
    let n = weights.n();
    let mut m = Match::unicast(n);
    if n == 0 {
        return m;
    }
    // Hungarian method on cost = max - w (minimization over a square matrix),
    // 1-based with a dummy row/column 0.
    let max = (0..n)
        .flat_map(|i| (0..n).map(move |o| (i, o)))
        .map(|(i, o)| weights.get(i, o))
        .max()
        .unwrap_or(0) as i128;
    let cost = |i: usize, o: usize| max - weights.get(i - 1, o - 1) as i128;

    let inf = i128::MAX / 4;
    let mut u = vec![0i128; n + 1];
    let mut v = vec![0i128; n + 1];
    let mut p = vec![0usize; n + 1]; // p[col] = row
    let mut way = vec![0usize; n + 1];
    for row in 1..=n {
        p[0] = row;
        let mut j0 = 0usize;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost(i0, j) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    for (o, &i) in p.iter().enumerate().skip(1) {
        if i > 0 && weights.get(i - 1, o - 1) > 0 {
            m.push(i - 1, o - 1);
        }
    }
    m
}

/// Total weight of a match.
pub fn match_weight(m: &Match, weights: &WeightMatrix) -> u64 {
    m.pairs().map(|(i, o)| weights.get(i, o)).sum()
}

/// Single-FIFO baseline: each input offers only its HOL cell's output.
/// Contested outputs grant round-robin and inputs always accept.
pub fn fifo_hol_schedule(hol_destinations: &[Option<usize>], state: &mut SchedulerState) -> Match {
    let n = state.n();
    let mut cols = vec![PortSet::EMPTY; n];
    for (i, d) in hol_destinations.iter().enumerate() {
        if let Some(o) = *d {
            cols[o].insert(i);
        }
    }
    let mut m = Match::unicast(n);
    for (o, col) in cols.iter().enumerate() {
        if let Some(i) = select_from(*col, state.grant[o].get()) {
            m.push(i, o);
            state.grant[o].advance_past(i, n);
        }
    }
    m
}

/// True when no request joins an unmatched input to an unmatched output.
pub fn is_maximal(requests: &RequestMatrix, m: &Match) -> bool {
    let free_out = PortSet::full(requests.n()).difference(m.matched_outputs());
    let matched_in = m.matched_inputs();
    (0..requests.n())
        .filter(|&i| !matched_in.contains(i))
        .all(|i| requests.row(i).is_disjoint(free_out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(m: &Match) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = m.pairs().collect();
        v.sort();
        v
    }

    // 0-based: input0 -> {0,1}, input1 -> {0}, input2 -> {1,3}
    fn worked_example() -> RequestMatrix {
        let mut r = RequestMatrix::empty(4);
        for (i, o) in [(0, 0), (0, 1), (1, 0), (2, 1), (2, 3)] {
            r.set(i, o, true);
        }
        r
    }

    #[test]
    fn islip_worked_example_one_iteration() {
        let r = worked_example();
        let mut st = SchedulerState::new(4);
        let out = islip_schedule(&r, &mut st, 1).unwrap();
        assert_eq!(pairs(&out.matching), vec![(0, 0), (2, 3)]);
        assert_eq!(out.iterations, 1);
        let rec = &out.trace.records[0];
        assert_eq!(rec.grants, vec![Some(0), Some(0), None, Some(2)]);
        assert_eq!(rec.accepts, vec![Some(0), None, Some(3), None]);
        assert_eq!(st.grant_pointers(), vec![1, 0, 0, 3]);
        assert_eq!(st.accept_pointers(), vec![1, 0, 0, 0]);
        assert_eq!(max_size_match(&r).len(), 3);
    }

    #[test]
    fn islip_worked_example_converged_is_maximal() {
        let r = worked_example();
        let mut st = SchedulerState::new(4);
        let out = islip_schedule(&r, &mut st, 4).unwrap();
        // input1 only wants output0, which input0 holds; input0's second
        // request (output1) cannot be added, so nothing changes.
        assert_eq!(pairs(&out.matching), vec![(0, 0), (2, 3)]);
        assert!(is_maximal(&r, &out.matching));
        assert_eq!(st.grant_pointers(), vec![1, 0, 0, 3]);
    }

    #[test]
    fn rrm_worked_example_moves_unsuccessful_pointer() {
        let r = worked_example();
        let mut st = SchedulerState::new(4);
        let out = rrm_schedule(&r, &mut st, 1).unwrap();
        assert_eq!(pairs(&out.matching), vec![(0, 0), (2, 3)]);
        // output 1 granted input 0 (refused) and still advances
        assert_eq!(st.grant_pointers(), vec![1, 1, 0, 3]);
        assert_eq!(st.accept_pointers(), vec![1, 0, 0, 0]);
    }

    #[test]
    fn diagonal_requests_perfect_match() {
        let n = 6;
        let r = RequestMatrix::from_rows((0..n).map(PortSet::singleton).collect());
        for sched in [islip_schedule, rrm_schedule] {
            let mut st = SchedulerState::new(n);
            let out = sched(&r, &mut st, 4).unwrap();
            assert_eq!(out.matching.len(), n);
            assert_eq!(out.iterations, 1);
            for i in 0..n {
                assert!(out.matching.contains(i, i));
                assert_eq!(st.grant_pointer(i), (i + 1) % n);
                assert_eq!(st.accept_pointer(i), (i + 1) % n);
            }
        }
    }

    #[test]
    fn empty_requests() {
        let r = RequestMatrix::empty(5);
        let mut st = SchedulerState::new(5);
        let out = islip_schedule(&r, &mut st, 3).unwrap();
        assert!(out.matching.is_empty());
        assert_eq!(out.iterations, 1);
        assert_eq!(st, SchedulerState::new(5));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let r = RequestMatrix::empty(3);
        let mut st = SchedulerState::new(4);
        assert!(matches!(
            islip_schedule(&r, &mut st, 1),
            Err(Error::Config(_))
        ));
        let r = RequestMatrix::empty(4);
        assert!(islip_schedule(&r, &mut st, 0).is_err());
    }

    #[test]
    fn ilqf_two_by_two() {
        let w = WeightMatrix::from_rows(&[vec![5, 0], vec![3, 4]]).unwrap();
        let r = w.support();
        let mut st = SchedulerState::new(2);
        let out = ilqf_schedule(&r, &w, &mut st, 2).unwrap();
        assert_eq!(pairs(&out.matching), vec![(0, 0), (1, 1)]);
    }

    #[test]
    fn ilqf_equal_weights_matches_islip() {
        let r = worked_example();
        let mut w = WeightMatrix::zeros(4);
        for i in 0..4 {
            for o in r.row(i) {
                w.set(i, o, 7);
            }
        }
        let mut a = SchedulerState::new(4);
        let mut b = SchedulerState::new(4);
        for _ in 0..5 {
            let x = islip_schedule(&r, &mut a, 2).unwrap();
            let y = ilqf_schedule(&r, &w, &mut b, 2).unwrap();
            assert_eq!(x.matching, y.matching);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn weighted_rejects_inconsistent_weights() {
        let w = WeightMatrix::from_rows(&[vec![5, 0], vec![3, 4]]).unwrap();
        let mut r = w.support();
        r.set(0, 1, true);
        let mut st = SchedulerState::new(2);
        assert!(ilqf_schedule(&r, &w, &mut st, 1).is_err());
        assert!(iocf_schedule(&r, &w, &mut st, 1).is_err());
    }

    #[test]
    fn max_weight_two_by_two() {
        let w = WeightMatrix::from_rows(&[vec![3, 0], vec![2, 2]]).unwrap();
        let m = max_weight_match(&w);
        assert_eq!(pairs(&m), vec![(0, 0), (1, 1)]);
        assert_eq!(match_weight(&m, &w), 5);
    }

    #[test]
    fn max_weight_single_entry() {
        let mut w = WeightMatrix::zeros(4);
        w.set(2, 1, 9);
        assert_eq!(pairs(&max_weight_match(&w)), vec![(2, 1)]);
        assert!(max_weight_match(&WeightMatrix::zeros(3)).is_empty());
    }

    #[test]
    fn max_size_identity() {
        let n = 7;
        let r = RequestMatrix::from_rows((0..n).map(PortSet::singleton).collect());
        assert_eq!(max_size_match(&r).len(), n);
    }

    #[test]
    fn fifo_distinct_destinations_all_served() {
        let mut st = SchedulerState::new(3);
        let m = fifo_hol_schedule(&[Some(2), Some(0), Some(1)], &mut st);
        assert_eq!(m.len(), 3);
    }

    #[test]
    fn fifo_contention_alternates() {
        let mut st = SchedulerState::new(2);
        let hol = [Some(0), Some(0)];
        let first = fifo_hol_schedule(&hol, &mut st);
        assert_eq!(pairs(&first), vec![(0, 0)]);
        let second = fifo_hol_schedule(&hol, &mut st);
        assert_eq!(pairs(&second), vec![(1, 0)]);
        let third = fifo_hol_schedule(&hol, &mut st);
        assert_eq!(pairs(&third), vec![(0, 0)]);
    }

    #[test]
    fn trace_renders_one_line() {
        let r = worked_example();
        let mut st = SchedulerState::new(4);
        let out = islip_schedule(&r, &mut st, 2).unwrap();
        let line = out.trace.to_string();
        assert!(!line.contains('\n'));
        assert!(line.starts_with("it1 req=0:{0,1};1:{0};2:{1,3};"));
        assert!(line.contains("g0:0>1;"));
    }
}
