//! Shared helpers for the integration suites: a seeded generator and
//! random antichains, elements, and points.

#![allow(dead_code)]

use htlab::cantor::{make_element, CantorPoint, Prefix, VElement};
use htlab::numerics::{nrat, CirclePoint};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Complete antichain obtained from the one-cone partition by
/// `expansions` random leaf splits; sorted, with `1 + expansions*(n-1)`
/// members.
pub fn random_antichain(rng: &mut ChaCha8Rng, n: u32, expansions: usize) -> Vec<Prefix> {
    let mut leaves = vec![Prefix::empty(n).unwrap()];
    for _ in 0..expansions {
        let i = rng.gen_range(0..leaves.len());
        let leaf = leaves.swap_remove(i);
        for d in 1..=n {
            leaves.push(leaf.concat(&[d]));
        }
    }
    leaves.sort();
    leaves
}

/// Random element of `V_n`: two random partitions of equal size (up to
/// `max_expansions` splits) under a uniformly random pairing.
pub fn random_v_element(rng: &mut ChaCha8Rng, n: u32, max_expansions: usize) -> VElement {
    let expansions = rng.gen_range(0..=max_expansions);
    let domain = random_antichain(rng, n, expansions);
    let mut range = random_antichain(rng, n, expansions);
    range.shuffle(rng);
    make_element(n, domain.into_iter().zip(range).collect()).unwrap()
}

/// Random element of `T_n`: sorted domain paired to a cyclic shift of a
/// sorted range.
pub fn random_t_element(rng: &mut ChaCha8Rng, n: u32, max_expansions: usize) -> VElement {
    let expansions = rng.gen_range(0..=max_expansions);
    let domain = random_antichain(rng, n, expansions);
    let range = random_antichain(rng, n, expansions);
    let k = domain.len();
    let shift = rng.gen_range(0..k);
    let pairs = (0..k)
        .map(|i| (domain[i].clone(), range[(i + shift) % k].clone()))
        .collect();
    make_element(n, pairs).unwrap()
}

/// Random element of `F_n`: order-preserving pairing of two partitions.
pub fn random_f_element(rng: &mut ChaCha8Rng, n: u32, max_expansions: usize) -> VElement {
    let expansions = rng.gen_range(0..=max_expansions);
    let domain = random_antichain(rng, n, expansions);
    let range = random_antichain(rng, n, expansions);
    make_element(n, domain.into_iter().zip(range).collect()).unwrap()
}

/// Random eventually periodic point of the n-ary Cantor set.
pub fn random_cantor_point(rng: &mut ChaCha8Rng, n: u32) -> CantorPoint {
    let pre_len = rng.gen_range(0..4);
    let per_len = rng.gen_range(1..4);
    let pre: Vec<u32> = (0..pre_len).map(|_| rng.gen_range(1..=n)).collect();
    let per: Vec<u32> = (0..per_len).map(|_| rng.gen_range(1..=n)).collect();
    CantorPoint::new(Prefix::new(n, pre).unwrap(), Prefix::new(n, per).unwrap()).unwrap()
}

/// Random point p / n^k on the circle.
pub fn random_n_adic(rng: &mut ChaCha8Rng, n: u32) -> CirclePoint {
    let k = rng.gen_range(0..7u32);
    let q = (n as i64).pow(k);
    let p = rng.gen_range(0..q);
    CirclePoint::new(nrat(p, q).unwrap())
}
