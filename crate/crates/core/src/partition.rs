//! Integral partitions and their algebra.
//!
//! A [`Partition`] is a finite nonincreasing sequence of positive integers.
//! Addition is multiset union, the product takes all pairwise products and
//! the power is the iterated product. [`PowerPartition`] is the count-vector
//! form of a partition whose entries are all powers of one base.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::Entry;

/// Upper bound on the number of boxes materialized from a count vector.
pub const MAX_EXPANDED: usize = 1 << 24;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Partition<T = BigUint> {
    entries: Vec<T>,
}

impl<T: Entry> Partition<T> {
    /// Builds a partition from entries in any order.
    pub fn from_entries(mut entries: Vec<T>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyPartition);
        }
        if let Some(z) = entries.iter().find(|e| e.is_zero()) {
            return Err(Error::InvalidEntry(z.to_string()));
        }
        entries.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { entries })
    }

    /// Builds a partition from signed input, rejecting non-positive values.
    pub fn from_i64s(raw: &[i64]) -> Result<Self> {
        let mut entries = Vec::with_capacity(raw.len());
        for &v in raw {
            if v <= 0 {
                return Err(Error::InvalidEntry(v.to_string()));
            }
            entries.push(T::from_u64(v as u64).ok_or(Error::Overflow)?);
        }
        Self::from_entries(entries)
    }

    pub fn from_u64s(raw: &[u64]) -> Result<Self> {
        let entries = raw
            .iter()
            .map(|&v| T::from_u64(v).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(entries)
    }

    /// The identity for the product, `[1]`.
    pub fn unit() -> Self {
        Partition { entries: vec![T::one()] }
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<T> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_entry(&self) -> &T {
        &self.entries[0]
    }

    pub fn min_entry(&self) -> &T {
        &self.entries[self.entries.len() - 1]
    }

    /// The entry sum, i.e. the 1-norm, without overflow.
    pub fn sum_big(&self) -> BigUint {
        self.entries.iter().map(Entry::to_big).sum()
    }

    /// Entry sum in the entry type.
    pub fn try_sum(&self) -> Result<T> {
        self.entries
            .iter()
            .try_fold(T::zero(), |acc, e| acc.checked_add(e))
            .ok_or(Error::Overflow)
    }

    pub fn multiplicities(&self) -> BTreeMap<T, usize> {
        let mut m = BTreeMap::new();
        for e in &self.entries {
            *m.entry(e.clone()).or_insert(0) += 1;
        }
        m
    }

    /// Reordered juxtaposition.
    pub fn add(&self, other: &Self) -> Self {
        let mut entries = Vec::with_capacity(self.len() + other.len());
        entries.extend_from_slice(&self.entries);
        entries.extend_from_slice(&other.entries);
        entries.sort_unstable_by(|a, b| b.cmp(a));
        Partition { entries }
    }

    /// All pairwise products `self[i] * other[j]` in canonical order.
    pub fn product(&self, other: &Self) -> Result<Self> {
        self.product_indexed(other).map(|(p, _)| p)
    }

    /// Like [`product`](Self::product), also returning for each position of
    /// the result the pair `(i, j)` of factor indices it came from. Equal
    /// values are ordered by `(i, j)` ascending.
    pub fn product_indexed(&self, other: &Self) -> Result<(Self, Vec<(usize, usize)>)> {
        let mut cells = Vec::with_capacity(self.len() * other.len());
        for (i, a) in self.entries.iter().enumerate() {
            for (j, b) in other.entries.iter().enumerate() {
                cells.push((a.checked_mul(b).ok_or(Error::Overflow)?, (i, j)));
            }
        }
        // stable: ties keep generation order, which is (i, j) ascending
        cells.sort_by(|x, y| y.0.cmp(&x.0));
        let (entries, origin) = cells.into_iter().unzip();
        Ok((Partition { entries }, origin))
    }

    /// The `n`-fold product of `self` with itself.
    pub fn power(&self, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidExponent("power must be at least 1".into()));
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.product(self)?;
        }
        Ok(acc)
    }

    pub fn scale(&self, alpha: &T) -> Result<Self> {
        if alpha.is_zero() {
            return Err(Error::InvalidScalar(alpha.to_string()));
        }
        let entries = self
            .entries
            .iter()
            .map(|e| e.checked_mul(alpha).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(Partition { entries })
    }

    /// Count-vector form over base `q`.
    pub fn to_base_counts(&self, q: u64) -> Result<PowerPartition> {
        if q < 2 {
            return Err(Error::InvalidBase(q));
        }
        let mut counts: Vec<BigUint> = Vec::new();
        for e in &self.entries {
            let level = power_exponent(&e.to_big(), q)
                .ok_or_else(|| Error::NotPowerOfBase(e.to_string()))? as usize;
            if counts.len() <= level {
                counts.resize(level + 1, BigUint::zero());
            }
            counts[level] += 1u32;
        }
        PowerPartition::new(q, counts)
    }

    pub fn is_power_of(&self, q: u64) -> bool {
        q >= 2 && self.entries.iter().all(|e| power_exponent(&e.to_big(), q).is_some())
    }

    /// Converts to another entry type, failing if any entry does not fit.
    pub fn convert<U: Entry>(&self) -> Result<Partition<U>> {
        let entries = self
            .entries
            .iter()
            .map(|e| U::from_big(&e.to_big()).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(Partition { entries })
    }
}

impl<T: Entry> fmt::Display for Partition<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, e) in self.entries.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("]")
    }
}

/// Partition whose entries are all powers of `base`, stored as
/// `counts[i]` = number of entries equal to `base^i`.
///
/// An empty count vector is allowed here: it is what pair normalization
/// leaves behind when every box cancels.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PowerPartition {
    base: u64,
    counts: Vec<BigUint>,
}

impl PowerPartition {
    /// Trailing zero counts are dropped.
    pub fn new(base: u64, mut counts: Vec<BigUint>) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidBase(base));
        }
        while counts.last().is_some_and(Zero::is_zero) {
            counts.pop();
        }
        Ok(PowerPartition { base, counts })
    }

    pub fn from_u64_counts(base: u64, counts: &[u64]) -> Result<Self> {
        Self::new(base, counts.iter().map(|&c| BigUint::from(c)).collect())
    }

    pub fn empty(base: u64) -> Result<Self> {
        Self::new(base, Vec::new())
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn count(&self, level: usize) -> BigUint {
        self.counts.get(level).cloned().unwrap_or_default()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Highest level with a nonzero count.
    pub fn top_level(&self) -> Option<usize> {
        self.counts.len().checked_sub(1)
    }

    pub fn total_boxes(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// Sum of entries, `sum_i counts[i] * base^i`.
    pub fn weight(&self) -> BigUint {
        let q = BigUint::from(self.base);
        self.counts.iter().rev().fold(BigUint::zero(), |acc, c| acc * &q + c)
    }

    pub fn ensure_same_base(&self, other: &Self) -> Result<()> {
        if self.base != other.base {
            return Err(Error::BaseMismatch(self.base, other.base));
        }
        Ok(())
    }

    /// Juxtaposition: counts add level-wise.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.ensure_same_base(other)?;
        let len = self.counts.len().max(other.counts.len());
        let counts = (0..len).map(|i| self.count(i) + other.count(i)).collect();
        Self::new(self.base, counts)
    }

    /// Product: the count vector is the convolution of the operands'.
    pub fn product(&self, other: &Self) -> Result<Self> {
        self.ensure_same_base(other)?;
        if self.is_empty() || other.is_empty() {
            return Self::empty(self.base);
        }
        let mut counts = vec![BigUint::zero(); self.counts.len() + other.counts.len() - 1];
        for (i, a) in self.counts.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.counts.iter().enumerate() {
                counts[i + j] += a * b;
            }
        }
        Self::new(self.base, counts)
    }

    /// Box levels, largest first.
    pub fn levels_desc(&self) -> Result<Vec<u32>> {
        let total = self
            .total_boxes()
            .to_usize()
            .filter(|&n| n <= MAX_EXPANDED)
            .ok_or_else(|| Error::TooLarge(format!("{} boxes", self.total_boxes())))?;
        let mut out = Vec::with_capacity(total);
        for (level, c) in self.counts.iter().enumerate().rev() {
            let c = c.to_usize().expect("bounded by total");
            out.extend(std::iter::repeat(level as u32).take(c));
        }
        Ok(out)
    }

    /// Expands to an explicit partition.
    pub fn to_partition<T: Entry>(&self) -> Result<Partition<T>> {
        if self.is_empty() {
            return Err(Error::EmptyPartition);
        }
        let levels = self.levels_desc()?;
        let mut cache: BTreeMap<u32, T> = BTreeMap::new();
        let mut entries = Vec::with_capacity(levels.len());
        for l in levels {
            let v = match cache.get(&l) {
                Some(v) => v.clone(),
                None => {
                    let v = T::from_big(&BigUint::from(self.base).pow(l)).ok_or(Error::Overflow)?;
                    cache.insert(l, v.clone());
                    v
                }
            };
            entries.push(v);
        }
        Ok(Partition { entries })
    }

    /// Signed level-wise difference `other - self`, the coefficient vector of
    /// `x ↦ sum_i (b_i - a_i) x^i`.
    pub fn difference_coefficients(&self, other: &Self) -> Result<Vec<BigInt>> {
        self.ensure_same_base(other)?;
        let len = self.counts.len().max(other.counts.len());
        Ok((0..len)
            .map(|i| BigInt::from(other.count(i)) - BigInt::from(self.count(i)))
            .collect())
    }
}

impl fmt::Display for PowerPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, c) in self.counts.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]_{}", self.base)
    }
}

/// `Some(k)` when `v == q^k`.
pub fn power_exponent(v: &BigUint, q: u64) -> Option<u32> {
    if v.is_zero() || q < 2 {
        return None;
    }
    let q = BigUint::from(q);
    let mut v = v.clone();
    let mut k = 0u32;
    while !v.is_one() {
        let (d, r) = v.div_rem(&q);
        if !r.is_zero() {
            return None;
        }
        v = d;
        k += 1;
    }
    Some(k)
}

/// Writes `v = r^k` with `k` maximal; `r` is then not itself a perfect power.
pub fn perfect_power_root(v: &BigUint) -> (BigUint, u32) {
    let bits = v.bits() as u32;
    for k in (2..=bits).rev() {
        let r = v.nth_root(k);
        if r > BigUint::one() && r.pow(k) == *v {
            return (r, k);
        }
    }
    (v.clone(), 1)
}

/// The smallest base `q ≥ 2` such that every entry of every partition is a
/// power of `q`. All-ones input yields 2.
pub fn common_base<T: Entry>(parts: &[&Partition<T>]) -> Option<u64> {
    let mut root: Option<BigUint> = None;
    for p in parts {
        for e in p.entries() {
            let e = e.to_big();
            if e.is_one() {
                continue;
            }
            let (r, _) = perfect_power_root(&e);
            match &root {
                None => root = Some(r),
                Some(prev) if *prev == r => {}
                Some(_) => return None,
            }
        }
    }
    match root {
        None => Some(2),
        Some(r) => r.to_u64(),
    }
}

/// Exponent of the prime `r` in `v` (`v > 0`).
pub fn valuation(v: &BigUint, r: &BigUint) -> u64 {
    let mut v = v.clone();
    let mut k = 0;
    loop {
        let (d, rem) = v.div_rem(r);
        if !rem.is_zero() || v.is_zero() {
            return k;
        }
        v = d;
        k += 1;
    }
}

pub(crate) fn big_to_bigint(v: &BigUint) -> BigInt {
    BigInt::from(v.clone())
}
