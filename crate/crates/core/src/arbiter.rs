// SPDX-License-Identifier: Apache-2.0

//! Programmable priority encoder.
//!
//! A round-robin arbiter is a PPE plus a pointer register. The PPE here is a
//! pure function; the pointer registers live in the schedulers, which alone
//! decide when a pointer moves.

use crate::fabric::PortSet;

/// Highest-priority position of a round-robin arbiter, always in `[0, n)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct RoundRobinPointer(usize);

impl RoundRobinPointer {
    pub fn new(value: usize, n: usize) -> Self {
        debug_assert!(n > 0);
        RoundRobinPointer(value % n)
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// Moves to one location beyond `index`, modulo `n`.
    pub fn advance_past(&mut self, index: usize, n: usize) {
        self.0 = (index + 1) % n;
    }
}

/// An N-bit request vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RequestVector {
    bits: PortSet,
    len: usize,
}

impl RequestVector {
    pub fn new(bits: PortSet, len: usize) -> Self {
        debug_assert!(bits.is_subset(PortSet::full(len)));
        RequestVector { bits, len }
    }

    pub fn from_bools(bools: &[bool]) -> Self {
        RequestVector {
            bits: bools
                .iter()
                .enumerate()
                .filter_map(|(k, &b)| b.then_some(k))
                .collect(),
            len: bools.len(),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bits(&self) -> PortSet {
        self.bits
    }

    pub fn get(&self, k: usize) -> bool {
        self.bits.contains(k)
    }
}

/// First set request at or after `pointer`, wrapping modulo the vector length.
pub fn ppe_select(requests: RequestVector, pointer: RoundRobinPointer) -> Option<usize> {
    select_from(requests.bits, pointer.get())
}

/// Mask form of [`ppe_select`] used on the hot path.
#[inline]
pub(crate) fn select_from(bits: PortSet, pointer: usize) -> Option<usize> {
    let b = bits.bits();
    if b == 0 {
        return None;
    }
    // at-or-after the pointer first, then wrap to the lowest set bit
    let high = if pointer >= 64 {
        0
    } else {
        b & (u64::MAX << pointer)
    };
    if high != 0 {
        Some(high.trailing_zeros() as usize)
    } else {
        Some(b.trailing_zeros() as usize)
    }
}
