//! Brute-force references for testing. Every routine refuses inputs beyond
//! its guard with [`Error::TooLarge`] rather than answering partially.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::orders;
use crate::partition::Partition;
use crate::scalar::Entry;

/// Most assignments `brute_embed` will enumerate.
pub const EMBED_GUARD: f64 = 1e6;
/// Most thresholds `brute_supermajorize` will test.
pub const THRESHOLD_GUARD: u64 = 1_000_000;
/// Most candidate catalysts `brute_stable_search` will enumerate.
pub const CANDIDATE_GUARD: u64 = 100_000;
/// Node budget of the exact search used on catalyst products.
pub const PRODUCT_SEARCH_NODES: u64 = 2_000_000;

/// Tries every map from `λ` indices to `μ` indices.
pub fn brute_embed<T: Entry>(lambda: &Partition<T>, mu: &Partition<T>) -> Result<bool> {
    let (n, m) = (lambda.len(), mu.len());
    let space = (m as f64).powi(n as i32);
    if space > EMBED_GUARD {
        return Err(Error::TooLarge(format!("{m}^{n} assignments")));
    }
    let items: Vec<BigUint> = lambda.entries().iter().map(Entry::to_big).collect();
    let caps: Vec<BigUint> = mu.entries().iter().map(Entry::to_big).collect();
    let mut map = vec![0usize; n];
    loop {
        let mut loads = vec![BigUint::default(); m];
        for (i, &j) in map.iter().enumerate() {
            loads[j] += &items[i];
        }
        if loads.iter().zip(&caps).all(|(l, c)| l <= c) {
            return Ok(true);
        }
        // odometer
        let mut pos = 0;
        loop {
            if pos == n {
                return Ok(false);
            }
            map[pos] += 1;
            if map[pos] < m {
                break;
            }
            map[pos] = 0;
            pos += 1;
        }
    }
}

/// Tests the tail-sum inequality at every `x` from 1 to `max + 1`.
pub fn brute_supermajorize<T: Entry>(mu: &Partition<T>, lambda: &Partition<T>) -> Result<bool> {
    let top = lambda.max_entry().to_big().max(mu.max_entry().to_big());
    let top = match u64::try_from(top) {
        Ok(t) if t < THRESHOLD_GUARD => t,
        _ => return Err(Error::TooLarge("entries too large to scan every threshold".into())),
    };
    for x in 1..=top + 1 {
        let x = BigUint::from(x);
        let tail = |p: &Partition<T>| -> BigUint {
            p.entries().iter().map(Entry::to_big).filter(|e| *e >= x).sum()
        };
        if tail(lambda) > tail(mu) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn binomial(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Number of nonincreasing sequences of length `1..=max_len` over
/// `1..=max_entry`.
pub fn candidate_count(max_len: usize, max_entry: u64) -> f64 {
    (1..=max_len as u64).map(|l| binomial(max_entry + l - 1, l)).sum()
}

/// Calls `visit` on every candidate, shorter first, each length in
/// lexicographic order of the nonincreasing entry list. Stops when `visit`
/// returns `false`.
fn for_each_candidate(
    max_len: usize,
    max_entry: u64,
    mut visit: impl FnMut(&[u64]) -> Result<bool>,
) -> Result<()> {
    for len in 1..=max_len {
        let mut seq = vec![1u64; len];
        loop {
            if !visit(&seq)? {
                return Ok(());
            }
            // next nonincreasing sequence in lexicographic order
            let cap = |seq: &[u64], i: usize| if i == 0 { max_entry } else { seq[i - 1] };
            let Some(i) = (0..len).rev().find(|&i| seq[i] < cap(&seq, i)) else {
                break;
            };
            seq[i] += 1;
            for s in seq.iter_mut().skip(i + 1) {
                *s = 1;
            }
        }
    }
    Ok(())
}

fn catalyst_works<T: Entry>(lambda: &Partition<T>, mu: &Partition<T>, nu: &[u64]) -> Result<bool> {
    let nu = Partition::<T>::from_u64s(nu)?;
    let (ln, mn) = (lambda.product(&nu)?, mu.product(&nu)?);
    Ok(orders::embeds(&ln, &mn, PRODUCT_SEARCH_NODES)?.is_some())
}

fn guard_candidates(max_len: usize, max_entry: u64) -> Result<()> {
    let n = candidate_count(max_len, max_entry);
    if n > CANDIDATE_GUARD as f64 {
        return Err(Error::TooLarge(format!("{n} candidate catalysts")));
    }
    Ok(())
}

/// First catalyst `ν` (by length, then lexicographically) with entries up to
/// `max_entry` and length up to `max_len` that makes `λ×ν ↪ μ×ν`.
pub fn brute_stable_search<T: Entry>(
    lambda: &Partition<T>,
    mu: &Partition<T>,
    max_len: usize,
    max_entry: u64,
) -> Result<Option<Partition<T>>> {
    guard_candidates(max_len, max_entry)?;
    let mut found = None;
    for_each_candidate(max_len, max_entry, |nu| {
        if catalyst_works(lambda, mu, nu)? {
            found = Some(Partition::from_u64s(nu)?);
            return Ok(false);
        }
        Ok(true)
    })?;
    Ok(found)
}

/// Every catalyst in the bounded space that works.
pub fn brute_stable_all<T: Entry>(
    lambda: &Partition<T>,
    mu: &Partition<T>,
    max_len: usize,
    max_entry: u64,
    keep: impl Fn(&[u64]) -> bool,
) -> Result<Vec<Partition<T>>> {
    guard_candidates(max_len, max_entry)?;
    let mut out = Vec::new();
    for_each_candidate(max_len, max_entry, |nu| {
        if keep(nu) && catalyst_works(lambda, mu, nu)? {
            out.push(Partition::from_u64s(nu)?);
        }
        Ok(true)
    })?;
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BulkSample {
    pub power: u32,
    /// Power of `μ` compared against, `⌈power (1 + ε)⌉`.
    pub mu_power: u32,
    pub embeds: bool,
}

/// For `N = 1..=n_max`, whether `λ^{×N} ↪ μ^{×⌈N(1+ε)⌉}`, decided by
/// [`brute_embed`].
pub fn bulk_sample<T: Entry>(
    lambda: &Partition<T>,
    mu: &Partition<T>,
    n_max: u32,
    eps: f64,
) -> Result<Vec<BulkSample>> {
    if !(eps >= 0.0) {
        return Err(Error::InvalidScalar(eps.to_string()));
    }
    let mut out = Vec::new();
    for n in 1..=n_max {
        let mu_power = (n as f64 * (1.0 + eps) - 1e-9).ceil().max(1.0) as u32;
        let lp = lambda.power(n)?;
        let mp = mu.power(mu_power)?;
        out.push(BulkSample { power: n, mu_power, embeds: brute_embed(&lp, &mp)? });
    }
    Ok(out)
}
