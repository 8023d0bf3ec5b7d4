use std::collections::HashSet;

use proptest::prelude::*;

use roundsearch::brouwer::{const_rounds_brouwer, shared_face_split, BadCubes};
use roundsearch::grid::{folded_segment, Windows};
use roundsearch::instances::{gen_const_staircase, gen_sink_field, pad_brouwer, EndSign};
use roundsearch::lb::{classify_all, counting_slack, enumerate_goodness, probability_score, simulate, Toy, UniformBoundaryDnc};
use roundsearch::oracle::{OracleSession, SessionLimits};
use roundsearch::search::const_rounds_ls;
use roundsearch::{Cube, Error, Grid, GridPoint};

fn point(d: usize, lo: i64, hi: i64) -> impl Strategy<Value = GridPoint> {
    proptest::collection::vec(lo..=hi, d).prop_map(GridPoint::new)
}

fn small_cube() -> impl Strategy<Value = Cube> {
    (1usize..=3).prop_flat_map(|d| {
        (proptest::collection::vec(-3i64..=3, d), proptest::collection::vec(1u64..=6, d))
            .prop_map(|(low, ext)| Cube::new(GridPoint::new(low), ext).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn folded_segments_are_connected_paths(
        (x, y) in (1usize..=4).prop_flat_map(|d| (point(d, -5, 5), point(d, -5, 5)))
    ) {
        let fs = folded_segment(&x, &y);
        let pts = fs.points();
        prop_assert_eq!(pts.len() as u64, x.l1(&y));
        let mut prev = x.clone();
        for p in &pts {
            prop_assert_eq!(prev.l1(p), 1);
            prop_assert_eq!(fs.position(p).map(|i| i as usize), pts.iter().position(|q| q == p).map(|i| i + 1));
            prev = p.clone();
        }
        if !pts.is_empty() {
            prop_assert_eq!(pts.last().unwrap(), &y);
        }
    }

    #[test]
    fn partitions_tile_the_cube(c in small_cube(), side in 1u64..=4) {
        let parts = c.partition(side).unwrap();
        prop_assert_eq!(parts.iter().map(Cube::volume).sum::<u64>(), c.volume());
        for p in c.points() {
            prop_assert_eq!(parts.iter().filter(|s| s.contains(&p)).count(), 1);
        }
    }

    #[test]
    fn boundary_is_where_neighbours_leave(c in small_cube()) {
        let d = c.d();
        let expected: Vec<GridPoint> = c
            .points()
            .filter(|p| {
                let inside = (0..d)
                    .flat_map(|a| [p.shifted(a, 1), p.shifted(a, -1)])
                    .filter(|q| c.contains(q))
                    .count();
                inside < 2 * d
            })
            .collect();
        prop_assert_eq!(c.boundary(), expected);
        prop_assert_eq!(c.boundary_count(), c.boundary().len() as u64);
    }

    #[test]
    fn window_membership_wraps(
        (n, ell) in (3u64..=12).prop_flat_map(|n| (Just(n), 1..n)),
        x in point(3, 1, 12),
        y in point(3, 1, 12),
        axis in 0usize..3,
    ) {
        let w = Windows::new(n, ell).unwrap();
        let x = GridPoint::new(x.coords().iter().map(|&c| w.wrap(c)).collect());
        let y = GridPoint::new(y.coords().iter().map(|&c| w.wrap(c)).collect());
        let lifted = y.shifted(axis, n as i64);
        prop_assert_eq!(w.in_window(&x, &y), w.in_window(&x, &lifted));
        prop_assert_eq!(w.in_reach(&x, &y), w.in_reach(&x, &lifted));
    }

    #[test]
    fn sessions_replay_and_ledgers_grow(seed in 0u64..1000, batches in proptest::collection::vec(proptest::collection::vec(0u64..400, 0..30), 1..6)) {
        let s = gen_const_staircase(16, 2, 2, seed).unwrap();
        let g = *roundsearch::oracle::Oracle::grid(&s);
        let batches: Vec<Vec<GridPoint>> = batches.iter().map(|b| b.iter().map(|&i| g.point_at(i % g.size())).collect()).collect();
        let mut a = OracleSession::unlimited(&s);
        let mut b = OracleSession::unlimited(&s);
        let (mut rounds, mut total) = (0, 0);
        for batch in &batches {
            prop_assert_eq!(a.submit_round(batch).unwrap(), b.submit_round(batch).unwrap());
            prop_assert!(a.rounds_used() > rounds && a.queries_used() >= total);
            rounds = a.rounds_used();
            total = a.queries_used();
        }
    }

    #[test]
    fn rejected_batches_reveal_nothing(budget in 0u64..20, size in 1usize..40) {
        let s = gen_const_staircase(16, 2, 2, 1).unwrap();
        let g = *roundsearch::oracle::Oracle::grid(&s);
        let batch: Vec<GridPoint> = (0..size as u64).map(|i| g.point_at(i * 7 % g.size())).collect();
        let limits = SessionLimits { query_budget: Some(budget), ..Default::default() };
        let mut sess = OracleSession::open(&s, limits);
        match sess.submit_round(&batch) {
            Ok(_) => prop_assert!(sess.queries_used() <= budget),
            Err(Error::QueryBudgetExceeded { .. }) => {
                prop_assert_eq!(sess.known_count(), 0);
                prop_assert_eq!(sess.rounds_used(), 0);
            }
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
    }

    #[test]
    fn staircase_values_step_down_along_the_trace(seed in 0u64..10_000, d in 1usize..=3, k in 1usize..=3) {
        let s = gen_const_staircase(9, d, k, seed).unwrap();
        let path = s.path();
        let t = path.len() - 1;
        for (i, p) in path.iter().enumerate().take(t) {
            prop_assert_eq!(s.value_at(p), -(i as i64));
        }
        let end = s.value_at(&path[t]);
        match s.end_sign() {
            EndSign::Minus => prop_assert_eq!(end, -(t as i64)),
            EndSign::Plus => prop_assert_eq!(end, path[t].l1(s.start()) as i64),
        }
    }

    #[test]
    fn const_rounds_certificate(seed in 0u64..10_000, k in 1usize..=3) {
        let s = gen_const_staircase(27, 2, k, seed).unwrap();
        let mut sess = OracleSession::open(&s, SessionLimits::rounds(k));
        let r = const_rounds_ls(&mut sess, k).unwrap();
        prop_assert!(r.run.success);
        prop_assert!(r.run.rounds_used <= k);
        let v = s.value_at(&r.run.solution);
        for round in sess.ledger().rounds() {
            for p in &round.batch {
                prop_assert!(v <= s.value_at(p));
            }
        }
        if r.run.rounds_used < k {
            prop_assert!(r.chain.last().unwrap().is_single_point());
        }
    }

    #[test]
    fn brouwer_finds_planted_zeros(d in 1usize..=3, n in 2u64..=12, seed in any::<u64>(), k in 1usize..=3) {
        let grid = Grid::new(d, n).unwrap();
        let target = grid.point_at(seed % grid.size());
        let f = pad_brouwer(gen_sink_field(n, d, target.clone()).unwrap()).unwrap();
        let mut sess = OracleSession::open(&f, SessionLimits::rounds(k));
        let r = const_rounds_brouwer(&mut sess, k).unwrap();
        prop_assert_eq!(r.run.solution, target);
        prop_assert_eq!(r.run.rounds_used, k);
    }

    #[test]
    fn parity_adds_up_over_shared_face_splits(
        d in 2usize..=3,
        target_seed in any::<u64>(),
        blocks in proptest::collection::vec(1u64..=4, 3),
    ) {
        let n = if d == 2 { 9 } else { 5 };
        let grid = Grid::new(d, n).unwrap();
        let f = pad_brouwer(gen_sink_field(n, d, grid.point_at(target_seed % grid.size())).unwrap()).unwrap();
        let outer = f.grid().full_cube();
        let mut bc = BadCubes::new(|p: &GridPoint| f.eval(p));
        let total = bc.boundary_bad_count(&outer);
        let pieces = shared_face_split(&outer, &blocks[..d]);
        let sum: u64 = pieces.iter().map(|c| bc.boundary_bad_count(c)).sum();
        prop_assert_eq!(total, 1);
        prop_assert_eq!(sum % 2, 1);
    }

    #[test]
    fn probability_score_matches_direct_count(
        x in point(2, 1, 4),
        ell in 1u64..=4,
        queried in proptest::collection::hash_set(point(2, 1, 8), 0..8),
    ) {
        let w = Cube::new(x.clone(), vec![ell; 2]).unwrap();
        let free = w.points().filter(|y| folded_segment(&x, y).points().iter().all(|p| !queried.contains(p))).count() as u64;
        let s = probability_score(&x, &queried, ell);
        prop_assert_eq!(*s.numer() * (ell * ell), free * *s.denom());
        let mut more = queried.clone();
        more.insert(x.shifted(0, 1));
        prop_assert!(probability_score(&x, &more, ell) <= s);
    }
}

#[test]
fn staircase_count_matches_window_product() {
    for ells in [vec![3u64, 2], vec![2, 3, 2], vec![3, 3]] {
        let toy = Toy::new(2, ells.clone()).unwrap();
        let k = ells.len();
        let total = toy.count(k).unwrap();
        let distinct: HashSet<Vec<GridPoint>> =
            (0..total).map(|i| toy.staircase(&toy.indices(k, i)).connecting_points().to_vec()).collect();
        assert_eq!(distinct.len() as u64, ells.iter().map(|l| l * l).product::<u64>());
    }
}

#[test]
fn good_staircases_sharing_a_prefix_replay_identically() {
    let toy = Toy::new(2, vec![5, 3, 2]).unwrap();
    let alg = UniformBoundaryDnc { budget: 6 };
    let k = 3;
    let good = classify_all(&alg, &toy, k).unwrap();
    let tail: u64 = 9 * 4;
    for (idx, &g) in good.iter().enumerate() {
        if !g {
            continue;
        }
        let idx = idx as u64;
        // partner shares x_0, x_1 and differs afterwards
        let partner = (idx / tail) * tail + (idx % tail + 7) % tail;
        if !good[partner as usize] {
            continue;
        }
        let a = simulate(&alg, &toy, &toy.staircase(&toy.indices(k, idx))).unwrap();
        let b = simulate(&alg, &toy, &toy.staircase(&toy.indices(k, partner))).unwrap();
        for r in 0..2 {
            assert_eq!(a[r].batch, b[r].batch, "staircases {idx} and {partner}, round {}", r + 1);
        }
    }
}

#[test]
fn counting_inequality_holds_on_toy_schedules() {
    for (ells, budget) in [(vec![5u64, 3, 2], 6u64), (vec![6, 3], 4), (vec![4, 2], 3)] {
        let toy = Toy::new(2, ells).unwrap();
        let report = enumerate_goodness(&UniformBoundaryDnc { budget }, &toy).unwrap();
        for slack in counting_slack(&report, &toy, budget) {
            assert!(slack >= -1e-12, "{report:?}");
        }
    }
}
