#![allow(dead_code)]

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seatplan::digraph::hamiltonian_path;
use seatplan::{Arrangement, Digraph, Instance, PreferenceProfile, SeatGraph, Utility};

/// Hamiltonian path by trying every vertex order.
pub fn path_by_permutation(d: &Digraph) -> Option<Vec<usize>> {
    (1..=d.len()).permutations(d.len()).find(|seq| d.is_hamiltonian_path(seq))
}

/// Seat graphs with at most eight seats: small grids and a few explicit ones.
pub fn small_seat_graph(k: usize) -> SeatGraph {
    match k % 6 {
        0 => SeatGraph::grid(2, 3).unwrap(),
        1 => SeatGraph::grid(2, 4).unwrap(),
        2 => SeatGraph::grid(1, 8).unwrap(),
        3 => SeatGraph::explicit(6, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)]).unwrap(),
        4 => SeatGraph::explicit(7, [(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (0, 6), (1, 2)]).unwrap(),
        _ => SeatGraph::explicit(8, (0..8).map(|v| (v, (v + 1) % 8)).chain([(0, 4)])).unwrap(),
    }
}

/// Utilities drawn from `{-2..2}` or, when `binary`, from `{0, 1}`.
pub fn random_profile(n: usize, binary: bool, rng: &mut ChaCha8Rng) -> PreferenceProfile {
    let values: Vec<Vec<Utility>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| if binary { rng.gen_range(0..2) } else { rng.gen_range(-2..3) })
                .collect()
        })
        .collect();
    PreferenceProfile::from_matrix((1..=n).map(|i| i.to_string()), &values).unwrap()
}

pub fn random_instance(k: usize, binary: bool, rng: &mut ChaCha8Rng) -> Instance {
    let seats = small_seat_graph(k);
    let profile = random_profile(seats.num_seats(), binary, rng);
    Instance::new(profile, seats).unwrap()
}

pub fn random_arrangement(n: usize, rng: &mut ChaCha8Rng) -> Arrangement {
    use rand::seq::SliceRandom;
    let mut seats: Vec<usize> = (0..n).collect();
    seats.shuffle(rng);
    Arrangement::new(seats).unwrap()
}

/// DHP* digraphs on `2..=max_n` vertices that have a Hamiltonian path,
/// confirmed by the exact oracle.
pub fn dhp_star_yes_corpus(count: usize, max_n: usize, seed: u64) -> Vec<(Digraph, Vec<usize>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.gen_range(2..=max_n);
        let p = rng.gen_range(0.3..0.8);
        let d = Digraph::random(n - 1, p, rng.gen()).unwrap().with_universal_sink();
        if let Some(path) = hamiltonian_path(&d).unwrap() {
            out.push((d, path));
        }
    }
    out
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
