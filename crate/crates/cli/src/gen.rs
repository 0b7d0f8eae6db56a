//! Seeded instance generators.

use num_bigint::BigUint;
use partition_orders::{BigPartition, Partition, PowerPartition};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::CliError;

pub fn random(rng: &mut ChaCha8Rng, max_len: usize, max_entry: u64) -> Result<BigPartition, CliError> {
    if max_len == 0 || max_entry == 0 {
        return Err(CliError::Usage("--len and --max must be positive".into()));
    }
    let n = rng.gen_range(1..=max_len);
    let v: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=max_entry)).collect();
    Partition::from_u64s(&v).map_err(|e| CliError::Internal(e.to_string()))
}

/// Counts `0..=max_count` on levels below `levels`, with the top level
/// nonempty.
pub fn powerq(rng: &mut ChaCha8Rng, base: u64, levels: usize, max_count: u64) -> Result<PowerPartition, CliError> {
    if base < 2 {
        return Err(CliError::Usage(format!("--base must be at least 2, got {base}")));
    }
    if levels == 0 || max_count == 0 {
        return Err(CliError::Usage("--levels and --max-count must be positive".into()));
    }
    let mut counts: Vec<u64> = (0..levels).map(|_| rng.gen_range(0..=max_count)).collect();
    if counts[levels - 1] == 0 {
        counts[levels - 1] = 1;
    }
    PowerPartition::from_u64_counts(base, &counts).map_err(|e| CliError::Usage(e.to_string()))
}

/// Each entry divides the one before it: start small, multiply by factors
/// in `1..=max_factor`.
pub fn divisible(rng: &mut ChaCha8Rng, len: usize, max_factor: u64) -> Result<BigPartition, CliError> {
    if len == 0 || max_factor == 0 {
        return Err(CliError::Usage("--len and --max-factor must be positive".into()));
    }
    let mut cur = BigUint::from(rng.gen_range(1..=max_factor));
    let mut v = Vec::with_capacity(len);
    for _ in 0..len {
        v.push(cur.clone());
        cur *= rng.gen_range(1..=max_factor);
    }
    Partition::from_entries(v).map_err(|e| CliError::Internal(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use partition_orders::orders::is_divisible_chain;
    use rand::SeedableRng;

    #[test]
    fn generators_are_deterministic() {
        let a = powerq(&mut ChaCha8Rng::seed_from_u64(7), 2, 4, 4).unwrap();
        let b = powerq(&mut ChaCha8Rng::seed_from_u64(7), 2, 4, 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.counts().len(), 4);
        let a = random(&mut ChaCha8Rng::seed_from_u64(1), 6, 32).unwrap();
        let b = random(&mut ChaCha8Rng::seed_from_u64(1), 6, 32).unwrap();
        assert_eq!(a, b);
        assert!(a.len() <= 6 && a.entries().iter().all(|e| *e <= BigUint::from(32u8)));
    }

    #[test]
    fn divisible_output_is_a_chain() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let p = divisible(&mut rng, 5, 4).unwrap();
            assert_eq!(p.len(), 5);
            assert!(is_divisible_chain(&p));
        }
    }

    #[test]
    fn bad_parameters_are_usage_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(powerq(&mut rng, 1, 3, 2), Err(CliError::Usage(_))));
        assert!(matches!(random(&mut rng, 0, 3), Err(CliError::Usage(_))));
        assert!(matches!(divisible(&mut rng, 3, 0), Err(CliError::Usage(_))));
    }
}
