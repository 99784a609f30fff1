// SPDX-License-Identifier: Apache-2.0

use std::collections::{HashMap, VecDeque};

use iqswitch::{
    max_size_match, Cell, Match, MatchMode, PortSet, RequestMatrix, SchedulerState, VoqBank,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Plain map-of-queues model of the unicast side of a VOQ bank.
#[derive(Default)]
struct Model {
    queues: HashMap<(usize, usize, usize), VecDeque<u64>>,
}

impl Model {
    fn push(&mut self, c: &Cell) {
        let o = c.unicast_output().unwrap();
        self.queues
            .entry((c.input, o, c.class))
            .or_default()
            .push_back(c.id);
    }

    fn pop(&mut self, i: usize, o: usize, class: usize) -> Option<u64> {
        self.queues
            .get_mut(&(i, o, class))
            .and_then(VecDeque::pop_front)
    }

    fn len(&self, i: usize, o: usize, class: usize) -> usize {
        self.queues.get(&(i, o, class)).map_or(0, VecDeque::len)
    }
}

#[test]
fn voq_replay_matches_model() {
    let (n, classes) = (6, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut bank = VoqBank::new(n, classes).unwrap();
    let mut model = Model::default();
    let mut state = SchedulerState::new(n);
    let mut slot = 0u64;

    for next_id in 0..10_000u64 {
        let c = Cell::unicast(
            next_id,
            rng.random_range(0..n),
            rng.random_range(0..n),
            rng.random_range(0..classes),
            slot,
        );
        bank.enqueue(c).unwrap();
        model.push(&c);

        if rng.random_bool(0.3) {
            let class = rng.random_range(0..classes);
            let req = bank.request_matrix(class).unwrap();
            let m = iqswitch::islip_schedule(&req, &mut state, 2)
                .unwrap()
                .matching;
            let before: Vec<usize> = m
                .pairs()
                .map(|(i, o)| bank.queue_len(i, o, class))
                .collect();
            let moved = bank.apply_unicast_match(&m, class, slot).unwrap();
            assert_eq!(moved.len(), m.len());
            for ((i, o), (cell, len)) in m.pairs().zip(moved.iter().zip(before)) {
                assert_eq!(Some(cell.id), model.pop(i, o, class));
                assert_eq!(bank.queue_len(i, o, class), len - 1);
            }
            slot += 1;
        }
    }

    for class in 0..classes {
        let req = bank.request_matrix(class).unwrap();
        for i in 0..n {
            for o in 0..n {
                assert_eq!(bank.queue_len(i, o, class), model.len(i, o, class));
                assert_eq!(req.get(i, o), model.len(i, o, class) > 0);
            }
        }
    }
    let total: usize = model.queues.values().map(VecDeque::len).sum();
    assert_eq!(bank.total_cells(), total);
}

#[test]
fn rejected_match_leaves_bank_untouched() {
    let mut bank = VoqBank::new(3, 1).unwrap();
    bank.enqueue(Cell::unicast(0, 0, 1, 0, 0)).unwrap();
    let m = Match::from_pairs(3, MatchMode::Unicast, [(0, 1), (2, 2)]).unwrap();
    assert!(bank.apply_unicast_match(&m, 0, 0).is_err());
    assert_eq!(bank.queue_len(0, 1, 0), 1);
    assert_eq!(bank.total_cells(), 1);
}

#[test]
fn multicast_hol_advances_after_last_copy() {
    let mut bank = VoqBank::new(4, 1).unwrap();
    let fan: PortSet = [0, 2, 3].into_iter().collect();
    bank.enqueue(Cell::multicast(0, 1, fan, 0, 0)).unwrap();
    let next: PortSet = [1, 3].into_iter().collect();
    bank.enqueue(Cell::multicast(1, 1, next, 0, 0)).unwrap();
    assert_eq!(bank.resident_copies(0), 5);

    let m = Match::from_pairs(4, MatchMode::Multicast, [(1, 0), (1, 3)]).unwrap();
    let d = bank.apply_multicast_match(&m, 0, 0).unwrap();
    assert_eq!(d.len(), 2);
    assert_eq!(
        bank.hol_fanout_requests(0).unwrap()[1],
        PortSet::singleton(2)
    );
    assert_eq!(bank.resident_copies(0), 3);

    let m = Match::from_pairs(4, MatchMode::Multicast, [(1, 2)]).unwrap();
    bank.apply_multicast_match(&m, 0, 1).unwrap();
    assert_eq!(bank.hol_fanout_requests(0).unwrap()[1], next);
    assert_eq!(bank.multicast_hol(1, 0).unwrap().id, 1);
    assert_eq!(bank.input_occupancy(1), 1);
}

#[test]
fn single_destination_cell_uses_its_voq() {
    let mut bank = VoqBank::new(4, 1).unwrap();
    bank.enqueue(Cell::multicast(0, 2, PortSet::singleton(3), 0, 0))
        .unwrap();
    assert_eq!(bank.queue_len(2, 3, 0), 1);
    assert_eq!(bank.multicast_len(2, 0), 0);
}

fn matrix(n: usize, bits: &[bool]) -> RequestMatrix {
    let rows: Vec<Vec<bool>> = bits.chunks(n).map(<[bool]>::to_vec).collect();
    RequestMatrix::from_bools(&rows)
}

proptest! {
    #[test]
    fn request_matrix_recount(n in 1usize..8, bits in proptest::collection::vec(any::<bool>(), 64)) {
        let req = matrix(n, &bits[..n * n]);
        let want = bits[..n * n].iter().filter(|&&b| b).count();
        prop_assert_eq!(req.count(), want);
        let by_column: usize = (0..n).map(|o| req.column(o).len()).sum();
        prop_assert_eq!(by_column, want);
    }

    #[test]
    fn apply_shrinks_each_matched_voq_by_one(
        n in 2usize..8,
        cells in proptest::collection::vec((0usize..8, 0usize..8), 1..60),
    ) {
        let mut bank = VoqBank::new(n, 1).unwrap();
        for (k, (i, o)) in cells.iter().enumerate() {
            bank.enqueue(Cell::unicast(k as u64, i % n, o % n, 0, 0)).unwrap();
        }
        let req = bank.request_matrix(0).unwrap();
        let m = max_size_match(&req);
        let total = bank.total_cells();
        let lens: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|o| bank.queue_len(i, o, 0)).collect()).collect();
        bank.apply_unicast_match(&m, 0, 0).unwrap();
        prop_assert_eq!(bank.total_cells(), total - m.len());
        for (i, row) in lens.iter().enumerate() {
            for (o, &before) in row.iter().enumerate() {
                let delta = usize::from(m.contains(i, o));
                prop_assert_eq!(bank.queue_len(i, o, 0), before - delta);
            }
        }
    }
}
