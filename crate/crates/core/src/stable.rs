//! Stable embedding: does some catalyst `ν` make `λ×ν ↪ μ×ν`?
//!
//! For general pairs only refutations are available. For pairs whose
//! entries are all powers of one base the question is decided (up to a step
//! budget) by a level-by-level construction of the catalyst.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::norms::{self, Exponent, RootCertificate};
use crate::orders::{embed_powerq, pack_powers, Budgets, Decision, EmbeddingWitness};
use crate::partition::{power_exponent, Partition, PowerPartition};
use crate::scalar::Entry;

/// Trial division stops here when looking for a prime in the valuation rule.
const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

/// Product embeddings are only materialized up to this many boxes in total.
pub const MAX_WITNESS_BOXES: u64 = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StableStatus {
    Holds,
    Fails,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnknownReason {
    /// The catalyst construction ran out of steps.
    StepBudget,
    /// Not all entries are powers of one base; only refutations apply.
    NoAlgorithm,
}

/// One level of the catalyst construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    /// 1 for the rounding pass, 2 for the exact rerun.
    pub pass: u8,
    pub step: usize,
    /// Level `L` of the boxes being compared, size `q^L`.
    pub level: i64,
    /// Demand: boxes of size `q^L` in `λ×ν`.
    pub demand: BigUint,
    /// Room for boxes of size `q^L` in `μ×ν` before the new coefficient.
    pub room: BigUint,
    /// Catalyst coefficient chosen at this step.
    pub coefficient: BigUint,
    /// Room carried to the next level down, in units of `q^L`.
    pub leftover: BigUint,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StableWitness<T = BigUint> {
    pub nu: Partition<T>,
    /// Embedding of `λ×ν` into `μ×ν`; `None` only when the products are too
    /// large to materialize.
    pub embedding: Option<EmbeddingWitness<T>>,
}

impl<T: Entry> StableWitness<T> {
    pub fn validate(&self, lambda: &Partition<T>, mu: &Partition<T>) -> Result<()> {
        let w = self
            .embedding
            .as_ref()
            .ok_or_else(|| Error::ContractViolation("witness carries no embedding".into()))?;
        w.validate(&lambda.product(&self.nu)?, &mu.product(&self.nu)?)
    }
}

/// Checkable reason why no catalyst exists.
#[derive(Clone, Debug, PartialEq)]
pub enum Refutation {
    /// Some ℓ_s norm of `λ` exceeds that of `μ`.
    BulkFails { exponent: Exponent, exact: bool },
    /// `‖λ‖_s = ‖μ‖_s` at an interior exponent although `λ ≠ μ`.
    NormEquality { certificate: RootCertificate },
    /// After cancelling common boxes the largest box of `λ` is larger than
    /// that of `μ`.
    TopIndexRule { base: u64, lambda_top: usize, mu_top: usize },
    /// Equal sums force every product bin to be filled exactly, but
    /// `gcd(λ)` does not divide `gcd(μ)`. `prime` is a prime whose
    /// valuation separates the two when one was found.
    TightValuation {
        sum: BigUint,
        lambda_gcd: BigUint,
        mu_gcd: BigUint,
        prime: Option<BigUint>,
    },
}

impl Refutation {
    pub fn tag(&self) -> &'static str {
        match self {
            Refutation::BulkFails { .. } => "BulkFails",
            Refutation::NormEquality { .. } => "NormEquality",
            Refutation::TopIndexRule { .. } => "TopIndexRule",
            Refutation::TightValuation { .. } => "TightValuation",
        }
    }

    /// Recomputes the certificate against the pair.
    pub fn verify<T: Entry>(&self, lambda: &Partition<T>, mu: &Partition<T>, budgets: &Budgets) -> bool {
        match self {
            Refutation::BulkFails { .. } => {
                !norms::bulk_verdict(lambda, mu, budgets.base, budgets.tol, budgets.grid).holds
            }
            Refutation::NormEquality { certificate } => {
                let q = certificate.base;
                let (Ok(a), Ok(b)) = (lambda.to_base_counts(q), mu.to_base_counts(q)) else {
                    return false;
                };
                a != b
                    && a.difference_coefficients(&b).ok().as_ref() == Some(&certificate.polynomial)
                    && certificate.verify()
            }
            Refutation::TopIndexRule { base, lambda_top, mu_top } => {
                let (Ok(a), Ok(b)) = (lambda.to_base_counts(*base), mu.to_base_counts(*base)) else {
                    return false;
                };
                let Ok((a, b)) = normalize_pair(&a, &b) else {
                    return false;
                };
                a.top_level() == Some(*lambda_top) && b.top_level() == Some(*mu_top) && mu_top < lambda_top
                    || (b.is_empty() && !a.is_empty())
            }
            Refutation::TightValuation { sum, lambda_gcd, mu_gcd, prime } => {
                let lg = entry_gcd(lambda);
                let mg = entry_gcd(mu);
                if lambda.sum_big() != *sum || mu.sum_big() != *sum || lg != *lambda_gcd || mg != *mu_gcd {
                    return false;
                }
                if (mg.clone() % &lg).is_zero() {
                    return false;
                }
                match prime {
                    None => true,
                    Some(r) => is_prime(r) && valuation_gap(&lg, &mg, r),
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StableVerdict<T = BigUint> {
    pub status: StableStatus,
    /// Constructed catalyst as counts per level. Always present when the
    /// construction succeeded, even if it is too large to expand.
    pub catalyst: Option<PowerPartition>,
    /// Expanded catalyst with its embedding, when it fits in memory.
    pub witness: Option<StableWitness<T>>,
    pub construction_log: Vec<StepRecord>,
    pub refutation: Option<Refutation>,
    pub unknown: Option<UnknownReason>,
    /// Construction steps taken, over both passes.
    pub budget_spent: u64,
}

impl<T: Entry> StableVerdict<T> {
    fn empty(status: StableStatus) -> Self {
        StableVerdict {
            status,
            catalyst: None,
            witness: None,
            construction_log: Vec::new(),
            refutation: None,
            unknown: None,
            budget_spent: 0,
        }
    }

    fn fails(r: Refutation) -> Self {
        StableVerdict { refutation: Some(r), ..Self::empty(StableStatus::Fails) }
    }

    fn unknown(reason: UnknownReason, log: Vec<StepRecord>, budget_spent: u64) -> Self {
        StableVerdict {
            unknown: Some(reason),
            construction_log: log,
            budget_spent,
            ..Self::empty(StableStatus::Unknown)
        }
    }

    /// Verdict for a finished construction; `outer` is the pair whose
    /// products the embedding is built for.
    fn constructed(run: Construction, nu: PowerPartition, outer: (&PowerPartition, &PowerPartition)) -> Result<Self> {
        let witness = match nu.to_partition::<T>() {
            Ok(expanded) => Some(StableWitness {
                nu: expanded,
                embedding: product_embedding::<T>(outer.0, outer.1, &nu)?,
            }),
            Err(Error::TooLarge(_)) | Err(Error::Overflow) => None,
            Err(e) => return Err(e),
        };
        Ok(StableVerdict {
            catalyst: Some(nu),
            witness,
            construction_log: run.log,
            budget_spent: run.steps,
            ..Self::empty(StableStatus::Holds)
        })
    }

    /// Trivial catalyst `[1]` with a direct embedding.
    fn direct(w: EmbeddingWitness<T>, base: Option<u64>) -> Self {
        StableVerdict {
            catalyst: base.and_then(|q| PowerPartition::new(q, vec![BigUint::one()]).ok()),
            witness: Some(StableWitness { nu: Partition::unit(), embedding: Some(w) }),
            ..Self::empty(StableStatus::Holds)
        }
    }
}

/// Cancels the boxes both sides have at each level.
pub fn normalize_pair(
    lambda: &PowerPartition,
    mu: &PowerPartition,
) -> Result<(PowerPartition, PowerPartition)> {
    lambda.ensure_same_base(mu)?;
    let len = lambda.counts().len().max(mu.counts().len());
    let mut a = Vec::with_capacity(len);
    let mut b = Vec::with_capacity(len);
    for i in 0..len {
        let (x, y) = (lambda.count(i), mu.count(i));
        let common = x.clone().min(y.clone());
        a.push(x - &common);
        b.push(y - &common);
    }
    Ok((PowerPartition::new(lambda.base(), a)?, PowerPartition::new(mu.base(), b)?))
}

fn entry_gcd<T: Entry>(p: &Partition<T>) -> BigUint {
    p.entries().iter().fold(BigUint::zero(), |g, e| g.gcd(&e.to_big()))
}

fn valuation_gap(lambda_gcd: &BigUint, mu_gcd: &BigUint, r: &BigUint) -> bool {
    crate::partition::valuation(lambda_gcd, r) > crate::partition::valuation(mu_gcd, r)
}

fn is_prime(r: &BigUint) -> bool {
    let Some(r) = r.to_u64() else {
        return false;
    };
    r >= 2 && (2..).take_while(|d| d * d <= r).all(|d| r % d != 0)
}

/// Smallest prime factor of `d` below the trial division limit.
fn small_prime_factor(d: &BigUint) -> Option<BigUint> {
    let mut k = 2u64;
    while k <= TRIAL_DIVISION_LIMIT {
        let kb = BigUint::from(k);
        if &kb * &kb > *d {
            // no factor up to sqrt(d): d is prime
            return (*d > BigUint::one()).then(|| d.clone());
        }
        if (d % &kb).is_zero() {
            return Some(kb);
        }
        k += 1;
    }
    None
}

/// Cheap refutations, tried in order: failing bulk dominance, a certified
/// interior norm equality, the top-index rule and the tight valuation rule.
pub fn prefilter_stable<T: Entry>(
    lambda: &Partition<T>,
    mu: &Partition<T>,
    budgets: &Budgets,
) -> Option<Refutation> {
    let bulk = norms::bulk_verdict(lambda, mu, budgets.base, budgets.tol, budgets.grid);
    if !bulk.holds {
        return Some(Refutation::BulkFails {
            exponent: bulk.failure_exponent.unwrap_or(Exponent::Infinity),
            exact: bulk.exact,
        });
    }
    if lambda != mu {
        if let Some(eq) = bulk.certified_equalities().next() {
            return Some(Refutation::NormEquality { certificate: eq.certificate.clone().unwrap() });
        }
    }
    if let Some(q) = budgets.base_for(lambda, mu) {
        let pair = lambda
            .to_base_counts(q)
            .and_then(|a| normalize_pair(&a, &mu.to_base_counts(q)?));
        if let Ok((a, b)) = pair {
            if let (Some(n), Some(m)) = (a.top_level(), b.top_level()) {
                if m < n {
                    return Some(Refutation::TopIndexRule { base: q, lambda_top: n, mu_top: m });
                }
            }
        }
    }
    let sum = lambda.sum_big();
    if sum == mu.sum_big() {
        let lg = entry_gcd(lambda);
        let mg = entry_gcd(mu);
        if !(mg.clone() % &lg).is_zero() {
            let d = &lg / lg.gcd(&mg);
            let prime = small_prime_factor(&d);
            return Some(Refutation::TightValuation { sum, lambda_gcd: lg, mu_gcd: mg, prime });
        }
    }
    None
}

/// Outcome of the coefficient iteration on a normalized pair.
#[derive(Clone, Debug, PartialEq)]
pub struct Construction {
    /// Catalyst as counts per level; `None` when the step budget ran out.
    pub nu: Option<PowerPartition>,
    pub log: Vec<StepRecord>,
    pub steps: u64,
}

/// Default step budget for top levels `n` of `λ` and `m` of `μ`.
pub fn default_max_steps(n: usize, m: usize) -> usize {
    64 * (n + m + 2)
}

enum PassEnd {
    Done { coeffs: Vec<BigUint>, exact: bool },
    Exhausted,
}

/// One run of the iteration with `c_0` fixed.
///
/// The catalyst has `c_k` boxes of nominal size `q^{-k}`. Going down one
/// level `L = m - k` at a time, the demand is the number of `q^L` boxes of
/// `λ×ν` and the room is what `μ×ν` offers at that level from coefficients
/// already fixed plus `q` times the leftover from the level above. The new
/// coefficient `c_k` only adds room, `b_m c_k`, and is the least amount that
/// covers the shortfall. Once `k` passes `m + K` for the last nonzero `c_K`
/// no demand is left.
fn run_pass(
    a: &PowerPartition,
    b: &PowerPartition,
    c0: BigUint,
    pass: u8,
    max_steps: usize,
    log: &mut Vec<StepRecord>,
    steps: &mut u64,
) -> PassEnd {
    let n = a.top_level().unwrap();
    let m = b.top_level().unwrap();
    let q = BigUint::from(a.base());
    let bm = b.count(m);
    let mut c = vec![c0.clone()];
    let mut last_nonzero = 0usize;
    let mut leftover = &bm * &c0;
    let mut exact = true;
    log.push(StepRecord {
        pass,
        step: 0,
        level: m as i64,
        demand: BigUint::zero(),
        room: BigUint::zero(),
        coefficient: c0,
        leftover: leftover.clone(),
    });
    let mut k = 1usize;
    let mut taken = 0usize;
    while k <= m + last_nonzero {
        if taken == max_steps {
            return PassEnd::Exhausted;
        }
        taken += 1;
        *steps += 1;
        // c index for a count at level j on this step is j + k - m
        let coeff_at = |j: usize| (j + k).checked_sub(m).and_then(|t| c.get(t));
        let mut room = &q * &leftover;
        for j in 0..m {
            if let Some(ct) = coeff_at(j) {
                room += b.count(j) * ct;
            }
        }
        let mut demand = BigUint::zero();
        for i in 0..=n {
            if let Some(ct) = coeff_at(i) {
                demand += a.count(i) * ct;
            }
        }
        let coefficient = if demand > room {
            let (quot, rem) = (&demand - &room).div_rem(&bm);
            leftover = BigUint::zero();
            if rem.is_zero() {
                quot
            } else {
                exact = false;
                quot + 1u32
            }
        } else {
            leftover = &room - &demand;
            BigUint::zero()
        };
        if !coefficient.is_zero() {
            last_nonzero = k;
        }
        log.push(StepRecord {
            pass,
            step: k,
            level: m as i64 - k as i64,
            demand,
            room,
            coefficient: coefficient.clone(),
            leftover: leftover.clone(),
        });
        c.push(coefficient);
        k += 1;
    }
    c.truncate(last_nonzero + 1);
    PassEnd::Done { coeffs: c, exact }
}

/// Counts `c_0..c_K` (largest boxes first) to an integral catalyst with
/// `c_k` boxes of size `q^{K-k}`, after dividing out their common factor.
fn coefficients_to_nu(q: u64, coeffs: &[BigUint]) -> Result<PowerPartition> {
    let g = coeffs.iter().fold(BigUint::zero(), |g, c| g.gcd(c));
    let mut counts: Vec<BigUint> = coeffs.iter().map(|c| c / &g).collect();
    counts.reverse();
    PowerPartition::new(q, counts)
}

/// Runs the catalyst construction on a normalized pair.
///
/// The first pass starts from `c_0 = 1` and rounds shortfalls up. The second
/// pass restarts from `c_0 = b_m^{K+1}`, which normally makes every division
/// exact; when it does not the exponent is raised a few times, and if
/// rounding persists the first pass result (which is valid, only not
/// canonical) is kept.
pub fn run_construction(
    lambda: &PowerPartition,
    mu: &PowerPartition,
    max_steps: Option<usize>,
) -> Result<Construction> {
    lambda.ensure_same_base(mu)?;
    let q = lambda.base();
    if lambda.is_empty() {
        return Ok(Construction { nu: Some(PowerPartition::new(q, vec![BigUint::one()])?), log: vec![], steps: 0 });
    }
    let (Some(n), Some(m)) = (lambda.top_level(), mu.top_level()) else {
        return Err(Error::ContractViolation("right side is empty after cancellation".into()));
    };
    if (0..=n.min(m)).any(|i| !lambda.count(i).is_zero() && !mu.count(i).is_zero()) {
        return Err(Error::ContractViolation("pair is not normalized".into()));
    }
    if m < n {
        return Err(Error::ContractViolation(format!("top level {m} of the right side is below {n}")));
    }
    let max_steps = max_steps.unwrap_or_else(|| default_max_steps(n, m));
    let mut log = Vec::new();
    let mut steps = 0u64;
    let first = match run_pass(lambda, mu, BigUint::one(), 1, max_steps, &mut log, &mut steps) {
        PassEnd::Exhausted => return Ok(Construction { nu: None, log, steps }),
        PassEnd::Done { coeffs, exact: true } => {
            return Ok(Construction { nu: Some(coefficients_to_nu(q, &coeffs)?), log, steps });
        }
        PassEnd::Done { coeffs, exact: false } => coeffs,
    };
    let bm = mu.count(m);
    let mut exponent = first.len() as u32;
    for _ in 0..4 {
        match run_pass(lambda, mu, bm.pow(exponent), 2, max_steps, &mut log, &mut steps) {
            PassEnd::Done { coeffs, exact: true } => {
                return Ok(Construction { nu: Some(coefficients_to_nu(q, &coeffs)?), log, steps });
            }
            PassEnd::Done { coeffs, exact: false } => exponent = exponent.max(coeffs.len() as u32) + 1,
            PassEnd::Exhausted => break,
        }
    }
    Ok(Construction { nu: Some(coefficients_to_nu(q, &first)?), log, steps })
}

/// Embedding of `λ×ν` into `μ×ν` from the greedy power packing, or `None`
/// when the products do not fit in memory or in `T`.
fn product_embedding<T: Entry>(
    lambda: &PowerPartition,
    mu: &PowerPartition,
    nu: &PowerPartition,
) -> Result<Option<EmbeddingWitness<T>>> {
    let ln = lambda.product(nu)?;
    let mn = mu.product(nu)?;
    if ln.total_boxes() + mn.total_boxes() > BigUint::from(MAX_WITNESS_BOXES) {
        return Ok(None);
    }
    if ln.is_empty() {
        let Ok(bins) = mn.levels_desc() else {
            return Ok(None);
        };
        return Ok(Some(EmbeddingWitness { assignment: vec![], loads: vec![T::zero(); bins.len()] }));
    }
    match embed_powerq::<T>(&ln, &mn) {
        Ok(Some(w)) => Ok(Some(w)),
        Ok(None) => Err(Error::Internal(format!(
            "catalyst {nu} does not make {lambda} embed into {mu}"
        ))),
        Err(Error::TooLarge(_)) | Err(Error::Overflow) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Catalyst construction on a normalized pair, with the embedding of the
/// products of this very pair.
pub fn construct_nu<T: Entry>(
    lambda: &PowerPartition,
    mu: &PowerPartition,
    max_steps: Option<usize>,
) -> Result<StableVerdict<T>> {
    let mut run = run_construction(lambda, mu, max_steps)?;
    let Some(nu) = run.nu.take() else {
        return Ok(StableVerdict::unknown(UnknownReason::StepBudget, run.log, run.steps));
    };
    StableVerdict::constructed(run, nu, (lambda, mu))
}

/// Splits every catalyst entry into its base-`q` digits and rebuilds the
/// embedding for the refined catalyst, bin by bin.
///
/// Inside one bin `μ_j ν_k` the items `λ_i ν_l` are powers of `q` times
/// digit pieces; their sum fits the bin, so the items (all powers of `q`)
/// are supermajorized by the digit expansion of the bin and the greedy
/// power packing places them.
pub fn refine_witness<T: Entry>(
    lambda: &Partition<T>,
    mu: &Partition<T>,
    nu: &Partition<T>,
    w: &EmbeddingWitness<T>,
    q: u64,
) -> Result<(PowerPartition, EmbeddingWitness<T>)> {
    let (ln, l_origin) = lambda.product_indexed(nu)?;
    let (mn, m_origin) = mu.product_indexed(nu)?;
    w.validate(&ln, &mn)?;
    if !lambda.is_power_of(q) || !mu.is_power_of(q) {
        return Err(Error::ContractViolation(format!("outer partitions are not powers of {q}")));
    }
    if nu.is_power_of(q) {
        return Ok((nu.to_base_counts(q)?, w.clone()));
    }
    let level = |v: &T| power_exponent(&v.to_big(), q).expect("checked power of q");
    // base-q digit pieces of every catalyst entry, as levels
    let pieces: Vec<Vec<u32>> = nu
        .entries()
        .iter()
        .map(|v| {
            let mut out = Vec::new();
            let mut x = v.to_big();
            let qb = BigUint::from(q);
            let mut l = 0u32;
            while !x.is_zero() {
                let (d, r) = x.div_rem(&qb);
                let r = r.to_u64().unwrap();
                out.extend(std::iter::repeat(l).take(r as usize));
                x = d;
                l += 1;
            }
            out.reverse();
            out
        })
        .collect();
    let refined_entries: Vec<T> = pieces
        .iter()
        .flatten()
        .map(|&l| T::from_big(&BigUint::from(q).pow(l)).ok_or(Error::Overflow))
        .collect::<Result<_>>()?;
    let refined = Partition::from_entries(refined_entries)?;
    // position in the refined catalyst of every piece
    let mut next_free: std::collections::BTreeMap<u32, usize> = std::collections::BTreeMap::new();
    for (pos, e) in refined.entries().iter().enumerate() {
        next_free.entry(level(e)).or_insert(pos);
    }
    let piece_pos: Vec<Vec<usize>> = pieces
        .iter()
        .map(|ps| {
            ps.iter()
                .map(|l| {
                    let slot = next_free.get_mut(l).unwrap();
                    let p = *slot;
                    *slot += 1;
                    p
                })
                .collect()
        })
        .collect();
    let (lr, lr_origin) = lambda.product_indexed(&refined)?;
    let (mr, mr_origin) = mu.product_indexed(&refined)?;
    let index_of = |origin: &[(usize, usize)]| -> std::collections::HashMap<(usize, usize), usize> {
        origin.iter().enumerate().map(|(pos, &o)| (o, pos)).collect()
    };
    let lr_index = index_of(&lr_origin);
    let mr_index = index_of(&mr_origin);

    let mut by_bin: Vec<Vec<usize>> = vec![Vec::new(); mn.len()];
    for (item, &bin) in w.assignment.iter().enumerate() {
        by_bin[bin].push(item);
    }
    let mut assignment = vec![usize::MAX; lr.len()];
    for (bin, items) in by_bin.iter().enumerate() {
        let (j, k) = m_origin[bin];
        let mj = level(&mu.entries()[j]);
        let bin_levels: Vec<u32> = pieces[k].iter().map(|&l| mj + l).collect();
        let mut item_levels = Vec::new();
        let mut item_targets = Vec::new();
        for &item in items {
            let (i, l) = l_origin[item];
            let li = level(&lambda.entries()[i]);
            for (t, &pl) in pieces[l].iter().enumerate() {
                item_levels.push(li + pl);
                item_targets.push(lr_index[&(i, piece_pos[l][t])]);
            }
        }
        let packed = pack_powers(&item_levels, &bin_levels, q)
            .ok_or_else(|| Error::Internal(format!("refinement of bin {bin} got stuck")))?;
        for (t, p) in packed.into_iter().enumerate() {
            assignment[item_targets[t]] = mr_index[&(j, piece_pos[k][p])];
        }
    }
    let w = EmbeddingWitness::from_assignment(&lr, &mr, assignment)
        .map_err(|e| Error::Internal(format!("refined witness invalid: {e}")))?;
    Ok((refined.to_base_counts(q)?, w))
}

/// Counts from the lowest nonzero level to the top one.
fn span(v: &PowerPartition) -> &[BigUint] {
    let first = v.counts().iter().position(|c| !c.is_zero()).unwrap_or(0);
    &v.counts()[first..]
}

/// Order on catalysts: shorter level span first, then the ratios
/// `c_1/c_0, c_2/c_0, …` lexicographically, where `c_k` is the count `k`
/// levels above the lowest occupied one. Scaling a catalyst by a power of
/// the base, or all its counts by a constant, leaves it equal.
pub fn nu_order_compare(u: &PowerPartition, v: &PowerPartition) -> Ordering {
    let (su, sv) = (span(u), span(v));
    su.len().cmp(&sv.len()).then_with(|| {
        let (u0, v0) = (&su[0], &sv[0]);
        for (cu, cv) in su.iter().zip(sv).skip(1) {
            // cu/u0 against cv/v0
            match (cu * v0).cmp(&(cv * u0)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    })
}

/// Order under which the constructed catalyst is least: counts read from
/// the top level down, divided by the top count, compared lexicographically
/// with missing levels read as zero. Level span plays no part.
pub fn catalyst_ratio_compare(u: &PowerPartition, v: &PowerPartition) -> Ordering {
    let (su, sv) = (span(u), span(v));
    let (u0, v0) = (su.last().unwrap(), sv.last().unwrap());
    let zero = BigUint::zero();
    for k in 1..su.len().max(sv.len()) {
        let cu = su.len().checked_sub(k + 1).map_or(&zero, |i| &su[i]);
        let cv = sv.len().checked_sub(k + 1).map_or(&zero, |i| &sv[i]);
        match (cu * v0).cmp(&(cv * u0)) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// Full stable embedding decision for a pair.
///
/// A direct embedding answers with the trivial catalyst `[1]`. Otherwise
/// the refutations run, and for power-of-base pairs the catalyst
/// construction on the normalized pair decides. Other pairs stay unknown.
pub fn stable_embeds<T: Entry>(
    lambda: &Partition<T>,
    mu: &Partition<T>,
    budgets: &Budgets,
) -> Result<StableVerdict<T>> {
    if let Decision::Holds(w) = crate::orders::decide_embedding(lambda, mu, budgets)? {
        return Ok(StableVerdict::direct(w, budgets.base_for(lambda, mu)));
    }
    if let Some(r) = prefilter_stable(lambda, mu, budgets) {
        return Ok(StableVerdict::fails(r));
    }
    let Some(q) = budgets.base_for(lambda, mu) else {
        return Ok(StableVerdict::unknown(UnknownReason::NoAlgorithm, Vec::new(), 0));
    };
    let (a, b) = (lambda.to_base_counts(q)?, mu.to_base_counts(q)?);
    let (na, nb) = normalize_pair(&a, &b)?;
    let mut run = run_construction(&na, &nb, budgets.max_steps)?;
    let Some(nu) = run.nu.take() else {
        return Ok(StableVerdict::unknown(UnknownReason::StepBudget, run.log, run.steps));
    };
    StableVerdict::constructed(run, nu, (&a, &b))
}

/// Stable embedding on count vectors, where either side may be empty.
pub fn stable_embeds_counts(
    lambda: &PowerPartition,
    mu: &PowerPartition,
    budgets: &Budgets,
) -> Result<StableStatus> {
    lambda.ensure_same_base(mu)?;
    match (lambda.is_empty(), mu.is_empty()) {
        (true, _) => Ok(StableStatus::Holds),
        (false, true) => Ok(StableStatus::Fails),
        _ => {
            let l = lambda.to_partition::<BigUint>()?;
            let m = mu.to_partition::<BigUint>()?;
            Ok(stable_embeds(&l, &m, budgets)?.status)
        }
    }
}
