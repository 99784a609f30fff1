// SPDX-License-Identifier: Apache-2.0

//! Cells, input queues, matches and the crossbar configuration.
//!
//! Everything here is shared by the schedulers and the simulator. Port sets
//! are 64-bit masks, which caps the switch at [`MAX_PORTS`] ports.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

/// Largest port count representable by a [`PortSet`].
pub const MAX_PORTS: usize = 64;

/// Largest number of strict-priority classes.
pub const MAX_CLASSES: usize = 4;

/// A set of port indices in `[0, 64)`, stored as a bit mask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct PortSet(u64);

impl PortSet {
    pub const EMPTY: PortSet = PortSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        PortSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// All ports `0..n`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_PORTS);
        if n >= 64 {
            PortSet(u64::MAX)
        } else {
            PortSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(port: usize) -> Self {
        debug_assert!(port < MAX_PORTS);
        PortSet(1u64 << port)
    }

    #[inline]
    pub fn contains(self, port: usize) -> bool {
        port < MAX_PORTS && self.0 & (1u64 << port) != 0
    }

    #[inline]
    pub fn insert(&mut self, port: usize) {
        debug_assert!(port < MAX_PORTS);
        self.0 |= 1u64 << port;
    }

    #[inline]
    pub fn remove(&mut self, port: usize) {
        debug_assert!(port < MAX_PORTS);
        self.0 &= !(1u64 << port);
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn union(self, other: PortSet) -> PortSet {
        PortSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: PortSet) -> PortSet {
        PortSet(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: PortSet) -> PortSet {
        PortSet(self.0 & !other.0)
    }

    #[inline]
    pub fn is_subset(self, other: PortSet) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_disjoint(self, other: PortSet) -> bool {
        self.0 & other.0 == 0
    }

    /// Smallest member, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Largest member, if any.
    pub fn last(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    /// Members in ascending order.
    pub fn iter(self) -> PortSetIter {
        PortSetIter(self.0)
    }
}

impl fmt::Debug for PortSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for PortSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, p) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

impl FromIterator<usize> for PortSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = PortSet::EMPTY;
        for p in iter {
            s.insert(p);
        }
        s
    }
}

impl IntoIterator for PortSet {
    type Item = usize;
    type IntoIter = PortSetIter;

    fn into_iter(self) -> PortSetIter {
        self.iter()
    }
}

pub struct PortSetIter(u64);

impl Iterator for PortSetIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let p = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(p)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for PortSetIter {}

/// A fixed-size packet.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cell {
    pub id: u64,
    pub input: usize,
    /// Never empty; a single member means unicast.
    pub destinations: PortSet,
    pub class: usize,
    pub arrival_slot: u64,
}

impl Cell {
    pub fn unicast(id: u64, input: usize, output: usize, class: usize, arrival_slot: u64) -> Self {
        Cell {
            id,
            input,
            destinations: PortSet::singleton(output),
            class,
            arrival_slot,
        }
    }

    pub fn multicast(
        id: u64,
        input: usize,
        destinations: PortSet,
        class: usize,
        arrival_slot: u64,
    ) -> Self {
        Cell {
            id,
            input,
            destinations,
            class,
            arrival_slot,
        }
    }

    pub fn is_unicast(&self) -> bool {
        self.destinations.len() == 1
    }

    pub fn fanout(&self) -> usize {
        self.destinations.len()
    }

    /// The sole destination of a unicast cell.
    pub fn unicast_output(&self) -> Option<usize> {
        if self.is_unicast() {
            self.destinations.first()
        } else {
            None
        }
    }
}

/// Slot counter; one tick per packet time.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SlotClock {
    slot: u64,
}

impl SlotClock {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn now(&self) -> u64 {
        self.slot
    }

    pub fn tick(&mut self) -> u64 {
        self.slot += 1;
        self.slot
    }
}

/// Whether an input may be connected to several outputs at once.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MatchMode {
    Unicast,
    Multicast,
}

/// A conflict-free set of (input, output) connections for one slot.
///
/// Stored per output, so no output can ever carry two inputs. In
/// [`MatchMode::Unicast`] an input is additionally restricted to one output.
#[derive(Clone, PartialEq, Eq)]
pub struct Match {
    mode: MatchMode,
    by_output: Vec<Option<usize>>,
    inputs: PortSet,
}

impl Match {
    pub fn new(n: usize, mode: MatchMode) -> Self {
        Match {
            mode,
            by_output: vec![None; n],
            inputs: PortSet::EMPTY,
        }
    }

    pub fn unicast(n: usize) -> Self {
        Self::new(n, MatchMode::Unicast)
    }

    pub fn multicast(n: usize) -> Self {
        Self::new(n, MatchMode::Multicast)
    }

    /// Builds a match from explicit pairs, rejecting conflicts.
    pub fn from_pairs(
        n: usize,
        mode: MatchMode,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut m = Match::new(n, mode);
        for (i, o) in pairs {
            m.insert(i, o)?;
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.by_output.len()
    }

    pub fn mode(&self) -> MatchMode {
        self.mode
    }

    pub fn insert(&mut self, input: usize, output: usize) -> Result<()> {
        let n = self.n();
        if input >= n || output >= n {
            return Err(Error::config(format!(
                "pair ({input},{output}) out of range for N={n}"
            )));
        }
        if let Some(prev) = self.by_output[output] {
            return Err(Error::config(format!(
                "output {output} already connected to input {prev}"
            )));
        }
        if self.mode == MatchMode::Unicast && self.inputs.contains(input) {
            return Err(Error::config(format!(
                "input {input} already matched in a unicast match"
            )));
        }
        self.push(input, output);
        Ok(())
    }

    #[inline]
    pub(crate) fn push(&mut self, input: usize, output: usize) {
        debug_assert!(self.by_output[output].is_none());
        debug_assert!(self.mode == MatchMode::Multicast || !self.inputs.contains(input));
        self.by_output[output] = Some(input);
        self.inputs.insert(input);
    }

    pub fn input_of(&self, output: usize) -> Option<usize> {
        self.by_output.get(output).copied().flatten()
    }

    /// Outputs connected to `input`.
    pub fn outputs_of(&self, input: usize) -> PortSet {
        self.by_output
            .iter()
            .enumerate()
            .filter_map(|(o, i)| (*i == Some(input)).then_some(o))
            .collect()
    }

    pub fn contains(&self, input: usize, output: usize) -> bool {
        self.input_of(output) == Some(input)
    }

    pub fn matched_inputs(&self) -> PortSet {
        self.inputs
    }

    pub fn matched_outputs(&self) -> PortSet {
        self.by_output
            .iter()
            .enumerate()
            .filter_map(|(o, i)| i.map(|_| o))
            .collect()
    }

    /// Pairs in ascending output order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.by_output
            .iter()
            .enumerate()
            .filter_map(|(o, i)| i.map(|i| (i, o)))
    }

    pub fn len(&self) -> usize {
        self.by_output.iter().filter(|i| i.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    /// Re-checks the type invariants from scratch.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        let mut seen = PortSet::EMPTY;
        for (i, o) in self.pairs() {
            if i >= n {
                return Err(Error::config(format!("input {i} out of range in match")));
            }
            if self.mode == MatchMode::Unicast && seen.contains(i) {
                return Err(Error::config(format!(
                    "input {i} matched twice in unicast match (second output {o})"
                )));
            }
            seen.insert(i);
        }
        if seen != self.inputs {
            return Err(Error::config("match input index out of sync"));
        }
        Ok(())
    }
}

impl fmt::Debug for Match {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Match{:?}", self.pairs().collect::<Vec<_>>())
    }
}

impl fmt::Display for Match {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, (i, o)) in self.pairs().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{i}->{o}")?;
        }
        f.write_str("]")
    }
}

/// Per-output reverse-path routing tags for one crossbar configuration.
///
/// `tags[o]` names the input that transmits to output `o`, in
/// [`CrossbarConfig::tag_bits`] bits. Unmatched outputs carry `idle[o]` and a
/// zero tag, so every tag value stays a valid input index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossbarConfig {
    tag_bits: u32,
    tags: Vec<u32>,
    idle: Vec<bool>,
}

/// Bits needed to name one of `n` ports: `ceil(log2 n)`.
pub fn tag_width(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

pub fn encode_reverse_tags(m: &Match) -> CrossbarConfig {
    let n = m.n();
    let tag_bits = tag_width(n);
    let mut tags = vec![0u32; n];
    let mut idle = vec![true; n];
    for (i, o) in m.pairs() {
        tags[o] = i as u32;
        idle[o] = false;
    }
    CrossbarConfig {
        tag_bits,
        tags,
        idle,
    }
}

impl CrossbarConfig {
    pub fn n(&self) -> usize {
        self.tags.len()
    }

    pub fn tag_bits(&self) -> u32 {
        self.tag_bits
    }

    pub fn tag(&self, output: usize) -> Option<u32> {
        (!self.idle[output]).then_some(self.tags[output])
    }

    pub fn is_idle(&self, output: usize) -> bool {
        self.idle[output]
    }

    /// Packs all tags into one bit string, output 0 in the low bits.
    /// Each output contributes `tag_bits` tag bits followed by its idle bit.
    pub fn pack(&self) -> Vec<u64> {
        let stride = self.tag_bits as usize + 1;
        let total = stride * self.n();
        let mut words = vec![0u64; total.div_ceil(64).max(1)];
        for o in 0..self.n() {
            let field = u64::from(self.tags[o]) | (u64::from(self.idle[o]) << self.tag_bits);
            write_bits(&mut words, o * stride, stride, field);
        }
        words
    }

    /// Inverse of [`CrossbarConfig::pack`].
    pub fn unpack(n: usize, words: &[u64]) -> Result<Self> {
        let tag_bits = tag_width(n);
        let stride = tag_bits as usize + 1;
        if words.len() * 64 < stride * n {
            return Err(Error::config("packed crossbar configuration too short"));
        }
        let mut tags = Vec::with_capacity(n);
        let mut idle = Vec::with_capacity(n);
        for o in 0..n {
            let field = read_bits(words, o * stride, stride);
            let is_idle = field >> tag_bits & 1 == 1;
            let tag = (field & ((1u64 << tag_bits) - 1)) as u32;
            if tag as usize >= n {
                return Err(Error::config(format!("tag {tag} out of range for N={n}")));
            }
            tags.push(if is_idle { 0 } else { tag });
            idle.push(is_idle);
        }
        Ok(CrossbarConfig {
            tag_bits,
            tags,
            idle,
        })
    }

    /// Recovers the match the tags were encoded from.
    pub fn decode(&self, mode: MatchMode) -> Result<Match> {
        let mut m = Match::new(self.n(), mode);
        for o in 0..self.n() {
            if let Some(i) = self.tag(o) {
                m.insert(i as usize, o)?;
            }
        }
        Ok(m)
    }
}

fn write_bits(words: &mut [u64], offset: usize, width: usize, value: u64) {
    for b in 0..width {
        if value >> b & 1 == 1 {
            let pos = offset + b;
            words[pos / 64] |= 1u64 << (pos % 64);
        }
    }
}

fn read_bits(words: &[u64], offset: usize, width: usize) -> u64 {
    let mut v = 0;
    for b in 0..width {
        let pos = offset + b;
        if words[pos / 64] >> (pos % 64) & 1 == 1 {
            v |= 1u64 << b;
        }
    }
    v
}

/// N×N request matrix; row `i` is the set of outputs input `i` requests.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RequestMatrix {
    rows: Vec<PortSet>,
}

impl RequestMatrix {
    pub fn empty(n: usize) -> Self {
        RequestMatrix {
            rows: vec![PortSet::EMPTY; n],
        }
    }

    pub fn from_rows(rows: Vec<PortSet>) -> Self {
        RequestMatrix { rows }
    }

    pub fn from_bools(matrix: &[Vec<bool>]) -> Self {
        let rows = matrix
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter_map(|(j, &b)| b.then_some(j))
                    .collect()
            })
            .collect();
        RequestMatrix { rows }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, input: usize, output: usize) -> bool {
        self.rows[input].contains(output)
    }

    pub fn set(&mut self, input: usize, output: usize, value: bool) {
        if value {
            self.rows[input].insert(output);
        } else {
            self.rows[input].remove(output);
        }
    }

    pub fn row(&self, input: usize) -> PortSet {
        self.rows[input]
    }

    pub fn rows(&self) -> &[PortSet] {
        &self.rows
    }

    /// Inputs requesting `output`.
    pub fn column(&self, output: usize) -> PortSet {
        self.rows
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.contains(output).then_some(i))
            .collect()
    }

    /// Keeps only requests between the given inputs and outputs.
    pub fn restrict(&self, inputs: PortSet, outputs: PortSet) -> RequestMatrix {
        let rows = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                if inputs.contains(i) {
                    r.intersection(outputs)
                } else {
                    PortSet::EMPTY
                }
            })
            .collect();
        RequestMatrix { rows }
    }

    pub fn count(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }
}

/// Per-input virtual output queues plus one multicast FIFO per class.
#[derive(Clone, Debug)]
pub struct VoqBank {
    n: usize,
    classes: usize,
    // index: (input * n + output) * classes + class
    unicast: Vec<VecDeque<Cell>>,
    // outputs with a non-empty VOQ, per (input, class)
    occupied: Vec<PortSet>,
    // per (input, class)
    multicast: Vec<VecDeque<Cell>>,
    hol_fanout: Vec<PortSet>,
    cells_at_input: Vec<usize>,
}

impl VoqBank {
    pub fn new(n: usize, classes: usize) -> Result<Self> {
        check_dims(n, classes)?;
        Ok(VoqBank {
            n,
            classes,
            unicast: vec![VecDeque::new(); n * n * classes],
            occupied: vec![PortSet::EMPTY; n * classes],
            multicast: vec![VecDeque::new(); n * classes],
            hol_fanout: vec![PortSet::EMPTY; n * classes],
            cells_at_input: vec![0; n],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    #[inline]
    fn uidx(&self, input: usize, output: usize, class: usize) -> usize {
        (input * self.n + output) * self.classes + class
    }

    #[inline]
    fn midx(&self, input: usize, class: usize) -> usize {
        input * self.classes + class
    }

    fn check_class(&self, class: usize) -> Result<()> {
        if class >= self.classes {
            return Err(Error::config(format!(
                "class {class} out of range (C={})",
                self.classes
            )));
        }
        Ok(())
    }

    pub fn enqueue(&mut self, cell: Cell) -> Result<()> {
        let n = self.n;
        if cell.input >= n {
            return Err(Error::config(format!(
                "cell {} input {} out of range for N={n}",
                cell.id, cell.input
            )));
        }
        if cell.destinations.is_empty() {
            return Err(Error::config(format!(
                "cell {} has no destinations",
                cell.id
            )));
        }
        if !cell.destinations.is_subset(PortSet::full(n)) {
            return Err(Error::config(format!(
                "cell {} destination {} out of range for N={n}",
                cell.id, cell.destinations
            )));
        }
        self.check_class(cell.class)?;

        if let Some(out) = cell.unicast_output() {
            let q = self.uidx(cell.input, out, cell.class);
            self.unicast[q].push_back(cell);
            let m = self.midx(cell.input, cell.class);
            self.occupied[m].insert(out);
        } else {
            let m = self.midx(cell.input, cell.class);
            if self.multicast[m].is_empty() {
                self.hol_fanout[m] = cell.destinations;
            }
            self.multicast[m].push_back(cell);
        }
        self.cells_at_input[cell.input] += 1;
        Ok(())
    }

    /// Entry (i, j) is set iff VOQ (i, j, class) is non-empty.
    pub fn request_matrix(&self, class: usize) -> Result<RequestMatrix> {
        self.check_class(class)?;
        Ok(RequestMatrix::from_rows(
            (0..self.n)
                .map(|i| self.occupied[self.midx(i, class)])
                .collect(),
        ))
    }

    /// Unserved destinations of each input's multicast HOL cell.
    pub fn hol_fanout_requests(&self, class: usize) -> Result<Vec<PortSet>> {
        self.check_class(class)?;
        Ok((0..self.n)
            .map(|i| self.hol_fanout[self.midx(i, class)])
            .collect())
    }

    /// Dequeues the HOL cell of every matched VOQ.
    pub fn apply_unicast_match(&mut self, m: &Match, class: usize, now: u64) -> Result<Vec<Cell>> {
        self.check_class(class)?;
        if m.n() != self.n {
            return Err(Error::config(format!(
                "match for N={} applied to bank with N={}",
                m.n(),
                self.n
            )));
        }
        for (i, o) in m.pairs() {
            if self.unicast[self.uidx(i, o, class)].is_empty() {
                return Err(Error::violation(
                    now,
                    format!("unicast match pairs ({i},{o}) but VOQ[{i}][{o}][{class}] is empty"),
                ));
            }
        }
        let mut moved = Vec::with_capacity(m.len());
        for (i, o) in m.pairs() {
            let q = self.uidx(i, o, class);
            let cell = self.unicast[q].pop_front().expect("checked non-empty");
            debug_assert!(cell.arrival_slot <= now);
            if self.unicast[q].is_empty() {
                let mi = self.midx(i, class);
                self.occupied[mi].remove(o);
            }
            self.cells_at_input[i] -= 1;
            moved.push(cell);
        }
        Ok(moved)
    }

    /// Serves matched copies of multicast HOL cells. A HOL cell leaves the
    /// queue once its last destination is served.
    pub fn apply_multicast_match(
        &mut self,
        m: &Match,
        class: usize,
        now: u64,
    ) -> Result<Vec<(Cell, usize)>> {
        self.check_class(class)?;
        if m.n() != self.n {
            return Err(Error::config(format!(
                "match for N={} applied to bank with N={}",
                m.n(),
                self.n
            )));
        }
        for (i, o) in m.pairs() {
            let fan = self.hol_fanout[self.midx(i, class)];
            if !fan.contains(o) {
                return Err(Error::violation(
                    now,
                    format!("multicast match pairs ({i},{o}) but HOL fanout of input {i} class {class} is {fan}"),
                ));
            }
        }
        let mut deliveries = Vec::with_capacity(m.len());
        for i in m.matched_inputs() {
            let mi = self.midx(i, class);
            let served = m.outputs_of(i);
            let hol = *self.multicast[mi]
                .front()
                .expect("non-empty fanout implies HOL");
            for o in served {
                deliveries.push((hol, o));
            }
            self.hol_fanout[mi] = self.hol_fanout[mi].difference(served);
            if self.hol_fanout[mi].is_empty() {
                self.multicast[mi].pop_front();
                self.cells_at_input[i] -= 1;
                self.hol_fanout[mi] = self.multicast[mi]
                    .front()
                    .map_or(PortSet::EMPTY, |c| c.destinations);
            }
        }
        Ok(deliveries)
    }

    pub fn queue_len(&self, input: usize, output: usize, class: usize) -> usize {
        self.unicast[self.uidx(input, output, class)].len()
    }

    pub fn queue(&self, input: usize, output: usize, class: usize) -> impl Iterator<Item = &Cell> {
        self.unicast[self.uidx(input, output, class)].iter()
    }

    pub fn hol_unicast(&self, input: usize, output: usize, class: usize) -> Option<&Cell> {
        self.unicast[self.uidx(input, output, class)].front()
    }

    pub fn multicast_len(&self, input: usize, class: usize) -> usize {
        self.multicast[self.midx(input, class)].len()
    }

    pub fn multicast_queue(&self, input: usize, class: usize) -> impl Iterator<Item = &Cell> {
        self.multicast[self.midx(input, class)].iter()
    }

    pub fn multicast_hol(&self, input: usize, class: usize) -> Option<&Cell> {
        self.multicast[self.midx(input, class)].front()
    }

    /// Cells (not copies) queued at one input, all classes.
    pub fn input_occupancy(&self, input: usize) -> usize {
        self.cells_at_input[input]
    }

    pub fn total_cells(&self) -> usize {
        self.cells_at_input.iter().sum()
    }

    /// Output copies still owed for `class`: one per unicast cell, the
    /// remaining fanout of each multicast HOL cell, and the full fanout of
    /// every multicast cell behind it.
    pub fn resident_copies(&self, class: usize) -> u64 {
        let mut total = 0u64;
        for i in 0..self.n {
            for o in 0..self.n {
                total += self.queue_len(i, o, class) as u64;
            }
            let mi = self.midx(i, class);
            total += self.hol_fanout[mi].len() as u64;
            total += self.multicast[mi]
                .iter()
                .skip(1)
                .map(|c| c.fanout() as u64)
                .sum::<u64>();
        }
        total
    }
}

/// One FIFO per input and class; the head-of-line blocking baseline.
#[derive(Clone, Debug)]
pub struct FifoBank {
    n: usize,
    classes: usize,
    queues: Vec<VecDeque<Cell>>,
}

impl FifoBank {
    pub fn new(n: usize, classes: usize) -> Result<Self> {
        check_dims(n, classes)?;
        Ok(FifoBank {
            n,
            classes,
            queues: vec![VecDeque::new(); n * classes],
        })
    }

    pub fn enqueue(&mut self, cell: Cell) -> Result<()> {
        if cell.input >= self.n || cell.class >= self.classes {
            return Err(Error::config(format!(
                "cell {} (input {}, class {}) out of range",
                cell.id, cell.input, cell.class
            )));
        }
        match cell.unicast_output() {
            Some(o) if o < self.n => {}
            _ => {
                return Err(Error::config(format!(
                    "FIFO bank takes unicast cells only (cell {} -> {})",
                    cell.id, cell.destinations
                )))
            }
        }
        self.queues[cell.input * self.classes + cell.class].push_back(cell);
        Ok(())
    }

    /// Destination of each input's HOL cell in `class`.
    pub fn hol_destinations(&self, class: usize) -> Vec<Option<usize>> {
        (0..self.n)
            .map(|i| {
                self.queues[i * self.classes + class]
                    .front()
                    .and_then(Cell::unicast_output)
            })
            .collect()
    }

    pub fn apply_match(&mut self, m: &Match, class: usize, now: u64) -> Result<Vec<Cell>> {
        let hol = self.hol_destinations(class);
        for (i, o) in m.pairs() {
            if hol[i] != Some(o) {
                return Err(Error::violation(
                    now,
                    format!(
                        "FIFO match pairs ({i},{o}) but HOL of input {i} is {:?}",
                        hol[i]
                    ),
                ));
            }
        }
        Ok(m.pairs()
            .map(|(i, _)| {
                self.queues[i * self.classes + class]
                    .pop_front()
                    .expect("checked HOL")
            })
            .collect())
    }

    pub fn len(&self, input: usize, class: usize) -> usize {
        self.queues[input * self.classes + class].len()
    }

    pub fn is_empty(&self) -> bool {
        self.queues.iter().all(VecDeque::is_empty)
    }

    pub fn input_occupancy(&self, input: usize) -> usize {
        (0..self.classes).map(|c| self.len(input, c)).sum()
    }

    pub fn resident(&self, class: usize) -> u64 {
        (0..self.n).map(|i| self.len(i, class) as u64).sum()
    }
}

fn check_dims(n: usize, classes: usize) -> Result<()> {
    if n == 0 || n > MAX_PORTS {
        return Err(Error::config(format!(
            "port count {n} outside [1, {MAX_PORTS}]"
        )));
    }
    if classes == 0 || classes > MAX_CLASSES {
        return Err(Error::config(format!(
            "class count {classes} outside [1, {MAX_CLASSES}]"
        )));
    }
    Ok(())
}
