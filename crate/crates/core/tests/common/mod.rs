#![allow(dead_code)]

use partition_orders::{Partition, PowerPartition};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_partition(rng: &mut ChaCha8Rng, max_len: usize, max_entry: u64) -> Partition<u64> {
    let len = rng.gen_range(1..=max_len);
    let v: Vec<u64> = (0..len).map(|_| rng.gen_range(1..=max_entry)).collect();
    Partition::from_u64s(&v).unwrap()
}

/// Nonempty count vector with up to `levels` levels.
pub fn random_counts(rng: &mut ChaCha8Rng, q: u64, levels: usize, max_count: u64) -> PowerPartition {
    loop {
        let n = rng.gen_range(1..=levels);
        let c: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=max_count)).collect();
        let p = PowerPartition::from_u64_counts(q, &c).unwrap();
        if !p.is_empty() {
            return p;
        }
    }
}

/// Entries built upward by small multipliers, so each divides the next.
pub fn divisible_chain(rng: &mut ChaCha8Rng, max_len: usize, max_entry: u64) -> Partition<u64> {
    let len = rng.gen_range(1..=max_len);
    let mut e = rng.gen_range(1..=4u64);
    let mut v = vec![e];
    while v.len() < len {
        let m = *[1u64, 1, 2, 2, 3, 4].choose(rng).unwrap();
        if e * m <= max_entry {
            e *= m;
        }
        v.push(e);
    }
    Partition::from_u64s(&v).unwrap()
}

/// `λ` obtained by cutting the entries of a random `μ` into pieces and
/// dropping some, so that `λ ↪ μ` by construction.
pub fn embedded_pair(rng: &mut ChaCha8Rng, max_len: usize, max_entry: u64) -> (Partition<u64>, Partition<u64>) {
    loop {
        let mu = random_partition(rng, max_len, max_entry);
        let mut pieces = Vec::new();
        for &m in mu.entries() {
            let mut left = m;
            while left > 0 {
                let cut = rng.gen_range(1..=left);
                if rng.gen_bool(0.85) {
                    pieces.push(cut);
                }
                left -= cut;
            }
        }
        pieces.shuffle(rng);
        pieces.truncate(max_len.max(1));
        if pieces.is_empty() {
            continue;
        }
        let lambda = Partition::from_u64s(&pieces).unwrap();
        if lambda != mu {
            return (lambda, mu);
        }
    }
}
