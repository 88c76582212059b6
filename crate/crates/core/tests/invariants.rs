mod common;

use proptest::prelude::*;
use seatplan::digraph::hamiltonian_path;
use seatplan::{AgentId, Digraph, SeatGraph};

use common::{random_arrangement, random_instance, rng};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn swapping_twice_restores_the_arrangement(seed: u64, k in 0usize..6, i in 0usize..8, j in 0usize..8) {
        let mut r = rng(seed);
        let inst = random_instance(k, false, &mut r);
        let n = inst.len();
        let pi = random_arrangement(n, &mut r);
        let (i, j) = (AgentId::new(i % n), AgentId::new(j % n));
        prop_assert_eq!(pi.swap(i, j).unwrap().swap(i, j).unwrap(), pi);
    }

    #[test]
    fn envy_free_implies_exchange_stable(seed: u64, k in 0usize..6, binary: bool) {
        let mut r = rng(seed);
        let inst = random_instance(k, binary, &mut r);
        let pi = random_arrangement(inst.len(), &mut r);
        let report = inst.report(&pi).unwrap();
        prop_assert!(!report.is_envy_free() || report.is_exchange_stable());
        for &(i, j) in &report.blocking_pairs {
            prop_assert!(report.envies.contains(&(i, j)) && report.envies.contains(&(j, i)));
        }
    }

    #[test]
    fn envy_is_invariant_under_grid_symmetries(seed: u64, rows in 1usize..4, cols in 1usize..4) {
        let mut r = rng(seed);
        let seats = SeatGraph::grid(rows, cols).unwrap();
        let n = seats.num_seats();
        let inst = seatplan::Instance::new(common::random_profile(n, false, &mut r), seats).unwrap();
        let pi = random_arrangement(n, &mut r);
        let base = inst.report(&pi).unwrap();
        for sigma in inst.seats().automorphisms() {
            let moved = pi.permute_seats(&sigma).unwrap();
            prop_assert_eq!(&inst.report(&moved).unwrap(), &base);
            prop_assert_eq!(inst.utilities(&moved).unwrap(), inst.utilities(&pi).unwrap());
        }
    }

    #[test]
    fn fast_envy_matches_the_definition(seed: u64, k in 0usize..6) {
        let mut r = rng(seed);
        let inst = random_instance(k, false, &mut r);
        let pi = random_arrangement(inst.len(), &mut r);
        for i in inst.profile().agents() {
            for j in inst.profile().agents().filter(|&j| j != i) {
                prop_assert_eq!(inst.envies_fast(&pi, i, j), inst.envies(&pi, i, j).unwrap());
            }
        }
    }

    #[test]
    fn grid_degrees_stay_within_four(rows in 1usize..7, cols in 1usize..7) {
        let g = SeatGraph::grid(rows, cols).unwrap();
        let total: usize = (0..g.num_seats()).map(|v| g.degree(v).unwrap()).sum();
        prop_assert_eq!(total, 2 * g.edge_count());
        prop_assert_eq!(g.edge_count(), rows * (cols - 1) + cols * (rows - 1));
        prop_assert!(g.max_degree() <= 4);
    }

    #[test]
    fn held_karp_paths_are_hamiltonian(n in 1usize..9, p in 0.0f64..1.0, seed: u64) {
        let d = Digraph::random(n, p, seed).unwrap();
        match hamiltonian_path(&d).unwrap() {
            Some(path) => prop_assert!(d.is_hamiltonian_path(&path)),
            None => prop_assert!(common::path_by_permutation(&d).is_none()),
        }
    }
}
