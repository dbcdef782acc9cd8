#![allow(dead_code)]

use assoc_spectrum::{Bracketing, Groupoid};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Splits uniformly at every node; not uniform over bracketings, which the
/// properties do not need.
pub fn random_bracketing(n: usize, rng: &mut impl Rng) -> Bracketing {
    if n == 1 {
        return Bracketing::leaf();
    }
    let k = rng.gen_range(1..n);
    let left = random_bracketing(k, rng);
    Bracketing::pair(left, random_bracketing(n - k, rng))
}

pub fn bracketing_strategy(max: usize) -> impl Strategy<Value = Bracketing> {
    (1..=max, any::<u64>())
        .prop_map(|(n, seed)| random_bracketing(n, &mut ChaCha8Rng::seed_from_u64(seed)))
}

pub fn random_groupoid(g: usize, rng: &mut impl Rng) -> Groupoid {
    let table = (0..g * g).map(|_| rng.gen_range(0..g as u8)).collect();
    Groupoid::from_flat(g, table).unwrap()
}

pub fn groupoid_strategy(min: usize, max: usize) -> impl Strategy<Value = Groupoid> {
    (min..=max).prop_flat_map(|g| {
        proptest::collection::vec(0..g as u8, g * g)
            .prop_map(move |t| Groupoid::from_flat(g, t).unwrap())
    })
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    assoc_spectrum::groupoid::for_each_permutation(n, |p| out.push(p.to_vec()));
    out
}
