//! The directly checkable relations: embedding (bin packing) with witness,
//! first fit, supermajorization, the greedy embedding for power-of-base
//! partitions, and the combined [`RelationReport`].

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::norms::{self, BulkVerdict};
use crate::partition::{common_base, Partition, PowerPartition};
use crate::scalar::Entry;
use crate::stable::{self, StableStatus, StableVerdict};

/// Default node limit for the exact embedding search.
pub const DEFAULT_EMBED_NODES: u64 = 10_000_000;

// memo of dead search states stops growing past this many entries
const MEMO_LIMIT: usize = 1 << 21;

/// An embedding map `φ`: `assignment[i]` is the `μ` index receiving `λ[i]`,
/// `loads[j]` the total placed into `μ[j]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EmbeddingWitness<T = BigUint> {
    pub assignment: Vec<usize>,
    pub loads: Vec<T>,
}

impl<T: Entry> EmbeddingWitness<T> {
    /// Computes loads for `assignment` and validates the result.
    pub fn from_assignment(
        lambda: &Partition<T>,
        mu: &Partition<T>,
        assignment: Vec<usize>,
    ) -> Result<Self> {
        if assignment.len() != lambda.len() {
            return Err(Error::ContractViolation(format!(
                "assignment covers {} of {} entries",
                assignment.len(),
                lambda.len()
            )));
        }
        let mut loads = vec![T::zero(); mu.len()];
        for (i, &j) in assignment.iter().enumerate() {
            let slot = loads.get_mut(j).ok_or_else(|| {
                Error::ContractViolation(format!("entry {i} mapped to missing bin {j}"))
            })?;
            *slot = slot.checked_add(&lambda.entries()[i]).ok_or(Error::Overflow)?;
        }
        let w = EmbeddingWitness { assignment, loads };
        w.validate(lambda, mu)?;
        Ok(w)
    }

    /// `λ ↪ λ` by the identity map.
    pub fn identity(lambda: &Partition<T>) -> Self {
        EmbeddingWitness {
            assignment: (0..lambda.len()).collect(),
            loads: lambda.entries().to_vec(),
        }
    }

    /// Checks every invariant of the witness against the exact inputs.
    pub fn validate(&self, lambda: &Partition<T>, mu: &Partition<T>) -> Result<()> {
        let bad = |m: String| Err(Error::ContractViolation(m));
        if self.assignment.len() != lambda.len() {
            return bad(format!(
                "{} assignments for {} entries",
                self.assignment.len(),
                lambda.len()
            ));
        }
        if self.loads.len() != mu.len() {
            return bad(format!("{} loads for {} bins", self.loads.len(), mu.len()));
        }
        let mut recomputed = vec![BigUint::zero(); mu.len()];
        for (i, &j) in self.assignment.iter().enumerate() {
            if j >= mu.len() {
                return bad(format!("entry {i} mapped to missing bin {j}"));
            }
            recomputed[j] += lambda.entries()[i].to_big();
        }
        for (j, load) in recomputed.iter().enumerate() {
            if *load != self.loads[j].to_big() {
                return bad(format!("stored load of bin {j} is stale"));
            }
            if *load > mu.entries()[j].to_big() {
                return bad(format!("bin {j} overfull: {} > {}", load, mu.entries()[j]));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Supermajorization<T = BigUint> {
    pub holds: bool,
    /// Smallest `x` with `Σ_{λ_i ≥ x} λ_i > Σ_{μ_j ≥ x} μ_j`.
    pub failing_threshold: Option<T>,
}

/// Whether `μ` supermajorizes `λ`, i.e. `λ ⪯_S μ`.
///
/// Both tail sums are step functions that only change at entry values, so
/// each distinct value `v` stands for the whole run `(previous value, v]`;
/// a failure there is reported at its left end, the smallest failing `x`.
pub fn supermajorizes<T: Entry>(mu: &Partition<T>, lambda: &Partition<T>) -> Supermajorization<T> {
    let mut values: Vec<&T> = lambda.entries().iter().chain(mu.entries()).collect();
    values.sort_unstable();
    values.dedup();
    let tail = |p: &Partition<T>, x: &T| -> BigUint {
        p.entries().iter().take_while(|e| *e >= x).map(Entry::to_big).sum()
    };
    let mut prev = T::zero();
    for v in values {
        if tail(lambda, v) > tail(mu, v) {
            return Supermajorization { holds: false, failing_threshold: Some(prev + T::one()) };
        }
        prev = v.clone();
    }
    Supermajorization { holds: true, failing_threshold: None }
}

/// `items ⪯_S caps` for `items` sorted nonincreasing. Overflow in the
/// entry type answers `true`, so callers may only use this to prune.
fn tail_dominated<T: Entry>(items: &[T], caps: &mut Vec<T>) -> bool {
    caps.sort_unstable_by(|a, b| b.cmp(a));
    let (mut si, mut sc) = (T::zero(), T::zero());
    let mut c = 0;
    let mut i = 0;
    while i < items.len() {
        let x = &items[i];
        while i < items.len() && items[i] == *x {
            match si.checked_add(&items[i]) {
                Some(v) => si = v,
                None => return true,
            }
            i += 1;
        }
        while c < caps.len() && caps[c] >= *x {
            match sc.checked_add(&caps[c]) {
                Some(v) => sc = v,
                None => return true,
            }
            c += 1;
        }
        if si > sc {
            return false;
        }
    }
    true
}

struct Search<'a, T> {
    items: &'a [T],
    caps: Vec<T>,
    assign: Vec<usize>,
    nodes: u64,
    budget: u64,
    tail_prune: bool,
    dead: HashSet<(usize, Vec<T>)>,
}

impl<T: Entry> Search<'_, T> {
    fn dfs(&mut self, i: usize) -> Result<bool> {
        if i == self.items.len() {
            return Ok(true);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded { nodes: self.budget });
        }
        let mut key_caps = self.caps.clone();
        if self.tail_prune {
            if !tail_dominated(&self.items[i..], &mut key_caps) {
                return Ok(false);
            }
        } else {
            key_caps.sort_unstable_by(|a, b| b.cmp(a));
        }
        let key = (i, key_caps);
        if self.dead.contains(&key) {
            return Ok(false);
        }
        let item = &self.items[i];
        let mut order: Vec<usize> = (0..self.caps.len()).filter(|&j| self.caps[j] >= *item).collect();
        // best fit first; bins with equal residual capacity are interchangeable
        order.sort_by(|&a, &b| self.caps[a].cmp(&self.caps[b]).then(a.cmp(&b)));
        order.dedup_by(|b, a| self.caps[*a] == self.caps[*b]);
        for j in order {
            self.caps[j] = self.caps[j].clone() - item.clone();
            self.assign[i] = j;
            if self.dfs(i + 1)? {
                return Ok(true);
            }
            self.caps[j] = self.caps[j].clone() + item.clone();
        }
        if self.dead.len() < MEMO_LIMIT {
            self.dead.insert(key);
        }
        Ok(false)
    }
}

/// Exact embedding decision by branch and bound.
///
/// Items are placed largest first. A node is cut when the remaining items
/// are not supermajorized by the residual capacities, when its residual
/// capacity multiset is already known to be dead, and among bins of equal
/// residual capacity only one is tried. Running out of `budget` nodes is
/// reported as [`Error::BudgetExceeded`], never as absence.
pub fn embeds<T: Entry>(
    lambda: &Partition<T>,
    mu: &Partition<T>,
    budget: u64,
) -> Result<Option<EmbeddingWitness<T>>> {
    if lambda.sum_big() > mu.sum_big() || lambda.max_entry() > mu.max_entry() {
        return Ok(None);
    }
    if !supermajorizes(mu, lambda).holds {
        return Ok(None);
    }
    search(lambda, mu, budget, true)
}

/// The same search with the supermajorization cuts switched off, leaving
/// capacity checks, dead-state memo and equal-bin symmetry. Slower; meant
/// for cross-checking results that the cuts would otherwise presuppose.
pub fn embeds_without_tail_prune<T: Entry>(
    lambda: &Partition<T>,
    mu: &Partition<T>,
    budget: u64,
) -> Result<Option<EmbeddingWitness<T>>> {
    search(lambda, mu, budget, false)
}

fn search<T: Entry>(
    lambda: &Partition<T>,
    mu: &Partition<T>,
    budget: u64,
    tail_prune: bool,
) -> Result<Option<EmbeddingWitness<T>>> {
    let mut search = Search {
        items: lambda.entries(),
        caps: mu.entries().to_vec(),
        assign: vec![0; lambda.len()],
        nodes: 0,
        budget,
        tail_prune,
        dead: HashSet::new(),
    };
    if search.dfs(0)? {
        let assign = std::mem::take(&mut search.assign);
        return EmbeddingWitness::from_assignment(lambda, mu, assign).map(Some);
    }
    Ok(None)
}

/// First fit in the canonical bin order.
pub fn first_fit<T: Entry>(lambda: &Partition<T>, mu: &Partition<T>) -> Option<EmbeddingWitness<T>> {
    let order: Vec<usize> = (0..mu.len()).collect();
    first_fit_in_order(lambda, mu, &order)
}

/// Places each entry of `λ`, largest first, into the first bin of
/// `bin_order` that still has room.
pub fn first_fit_in_order<T: Entry>(
    lambda: &Partition<T>,
    mu: &Partition<T>,
    bin_order: &[usize],
) -> Option<EmbeddingWitness<T>> {
    let mut caps = mu.entries().to_vec();
    let mut assignment = Vec::with_capacity(lambda.len());
    for item in lambda.entries() {
        let j = *bin_order.iter().find(|&&j| caps[j] >= *item)?;
        caps[j] = caps[j].clone() - item.clone();
        assignment.push(j);
    }
    EmbeddingWitness::from_assignment(lambda, mu, assignment).ok()
}

/// Every entry divides every larger entry.
pub fn is_divisible_chain<T: Entry>(lambda: &Partition<T>) -> bool {
    lambda.entries().windows(2).all(|w| (w[0].clone() % w[1].clone()).is_zero())
}

/// `λ ⪯_S μ` on count vectors over a shared base.
pub fn supermajorizes_counts(mu: &PowerPartition, lambda: &PowerPartition) -> Result<bool> {
    mu.ensure_same_base(lambda)?;
    let q = BigUint::from(mu.base());
    let top = mu.counts().len().max(lambda.counts().len());
    let (mut sm, mut sl) = (BigUint::zero(), BigUint::zero());
    for level in (0..top).rev() {
        let w = q.pow(level as u32);
        sm += mu.count(level) * &w;
        sl += lambda.count(level) * &w;
        if sl > sm {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Greedy packing of power-of-`q` boxes given by their levels.
///
/// Each item, largest first, goes into the largest free piece of capacity;
/// the unused part `q^t − q^s` of that piece is split into its base-`q`
/// digits (`q − 1` pieces at each level `s..t`), all still tagged with the
/// original bin. When the items are supermajorized by the bins this never
/// gets stuck. Returns the bin index for every item.
pub fn pack_powers(items: &[u32], bins: &[u32], q: u64) -> Option<Vec<usize>> {
    let top = bins.iter().copied().max().map_or(0, |t| t as usize + 1);
    let mut free: Vec<Vec<(usize, u64)>> = vec![Vec::new(); top];
    for (j, &l) in bins.iter().enumerate().rev() {
        free[l as usize].push((j, 1));
    }
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| items[b].cmp(&items[a]).then(a.cmp(&b)));
    let mut assign = vec![usize::MAX; items.len()];
    for i in order {
        let s = items[i] as usize;
        let t = (s..top).rev().find(|&t| !free[t].is_empty())?;
        let slot = free[t].last_mut().unwrap();
        let bin = slot.0;
        slot.1 -= 1;
        if slot.1 == 0 {
            free[t].pop();
        }
        assign[i] = bin;
        for piece in free.iter_mut().take(t).skip(s) {
            piece.push((bin, q - 1));
        }
    }
    Some(assign)
}

/// Embedding of power-of-base partitions, decided by supermajorization and
/// built by [`pack_powers`]. Indices refer to the expanded partitions.
pub fn embed_powerq<T: Entry>(
    lambda: &PowerPartition,
    mu: &PowerPartition,
) -> Result<Option<EmbeddingWitness<T>>> {
    mu.ensure_same_base(lambda)?;
    if lambda.is_empty() || mu.is_empty() {
        return Err(Error::EmptyPartition);
    }
    if !supermajorizes_counts(mu, lambda)? {
        return Ok(None);
    }
    let items = lambda.levels_desc()?;
    let bins = mu.levels_desc()?;
    let assign = pack_powers(&items, &bins, mu.base())
        .ok_or_else(|| Error::Internal("greedy power packing got stuck".into()))?;
    let lp = lambda.to_partition::<T>()?;
    let mp = mu.to_partition::<T>()?;
    EmbeddingWitness::from_assignment(&lp, &mp, assign)
        .map(Some)
        .map_err(|e| Error::Internal(format!("greedy power packing produced a bad witness: {e}")))
}

/// Limits and tolerances shared by the composite queries.
#[derive(Clone, Debug, PartialEq)]
pub struct Budgets {
    /// Node limit of the exact embedding search.
    pub embed_nodes: u64,
    /// Step limit of the catalyst construction; `None` picks
    /// `64 (n + m + 2)` from the top levels `n`, `m`.
    pub max_steps: Option<usize>,
    pub tol: f64,
    pub grid: usize,
    /// Force this base for the power-of-base routes.
    pub base: Option<u64>,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            embed_nodes: DEFAULT_EMBED_NODES,
            max_steps: None,
            tol: norms::DEFAULT_TOL,
            grid: norms::DEFAULT_GRID,
            base: None,
        }
    }
}

impl Budgets {
    /// The base to use for the pair, if both are powers of it.
    pub fn base_for<T: Entry>(&self, lambda: &Partition<T>, mu: &Partition<T>) -> Option<u64> {
        match self.base {
            Some(q) => (lambda.is_power_of(q) && mu.is_power_of(q)).then_some(q),
            None => common_base(&[lambda, mu]),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Decision<W> {
    Holds(W),
    Fails,
    Unknown { nodes: u64 },
}

impl<W> Decision<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Decision::Holds(_))
    }

    pub fn fails(&self) -> bool {
        matches!(self, Decision::Fails)
    }
}

/// Embedding decision using the greedy route for same-base pairs and the
/// exact search otherwise.
pub fn decide_embedding<T: Entry>(
    lambda: &Partition<T>,
    mu: &Partition<T>,
    budgets: &Budgets,
) -> Result<Decision<EmbeddingWitness<T>>> {
    if let Some(q) = budgets.base_for(lambda, mu) {
        let w = embed_powerq(&lambda.to_base_counts(q)?, &mu.to_base_counts(q)?)?;
        return Ok(w.map_or(Decision::Fails, Decision::Holds));
    }
    match embeds(lambda, mu, budgets.embed_nodes) {
        Ok(Some(w)) => Ok(Decision::Holds(w)),
        Ok(None) => Ok(Decision::Fails),
        Err(Error::BudgetExceeded { nodes }) => Ok(Decision::Unknown { nodes }),
        Err(e) => Err(e),
    }
}

/// All four relations for one pair.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationReport<T = BigUint> {
    pub embeds: Decision<EmbeddingWitness<T>>,
    pub supermajorized: Supermajorization<T>,
    pub bulk: BulkVerdict,
    pub stable: StableVerdict<T>,
}

impl<T: Entry> RelationReport<T> {
    /// The implications embed ⇒ supermajorized ⇒ bulk, embed ⇒ stable and
    /// stable ⇒ bulk. A violation means one of the deciders is wrong.
    pub fn check_implications(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::Internal(format!("implication violated: {m}")));
        let stable_holds = self.stable.status == StableStatus::Holds;
        if self.embeds.holds() && !self.supermajorized.holds {
            return fail("embeds but not supermajorized");
        }
        if self.embeds.holds() && self.stable.status == StableStatus::Fails {
            return fail("embeds but stable embedding refuted");
        }
        if self.supermajorized.holds && !self.bulk.holds {
            return fail("supermajorized but bulk fails");
        }
        if stable_holds && !self.bulk.holds {
            return fail("stable but bulk fails");
        }
        Ok(())
    }
}

pub fn relations<T: Entry>(
    lambda: &Partition<T>,
    mu: &Partition<T>,
    budgets: &Budgets,
) -> Result<RelationReport<T>> {
    let report = RelationReport {
        embeds: decide_embedding(lambda, mu, budgets)?,
        supermajorized: supermajorizes(mu, lambda),
        bulk: norms::bulk_verdict(lambda, mu, budgets.base, budgets.tol, budgets.grid),
        stable: stable::stable_embeds(lambda, mu, budgets)?,
    };
    report.check_implications()?;
    Ok(report)
}
