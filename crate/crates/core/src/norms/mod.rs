//! ℓ_s-norm evaluation and the all-exponent dominance test.
//!
//! `λ` bulk-embeds into `μ` exactly when `‖λ‖_s ≤ ‖μ‖_s` for every
//! `s ∈ [1, ∞]`. Writing `n_v` for the multiplicity of `v` in `μ` minus its
//! multiplicity in `λ`, the comparison reduces to the sign of
//! `f(s) = Σ_v n_v v^s = ‖μ‖_s^s − ‖λ‖_s^s`.
//!
//! Two decision routes are provided. [`dominates_all_s`] works for any pair
//! and scans `f` numerically in 128-bit arithmetic. When both partitions are
//! powers of one base `q`, the substitution `x = q^s` turns `f` into an integer
//! polynomial and [`exact_dominates_powerq`] decides the sign on `[q, ∞)`
//! exactly, certifying every interior equality by an isolating interval.

pub mod numeric;
pub mod poly;

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::partition::{big_to_bigint, common_base, Partition, PowerPartition};
use crate::scalar::Entry;
use numeric::{Ctx, RelativeEvaluator};
use poly::{isolate_roots, refine_root, squarefree_decomposition, Poly};

/// Default number of grid intervals for the numeric scan.
pub const DEFAULT_GRID: usize = 256;

/// Default tolerance on the relative value `f(s) / Σ_v |n_v| v^s`.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Exact isolating intervals are refined below this width (in `x = q^s`).
pub fn certificate_width() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << 34)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn as_f64(&self) -> f64 {
        match self {
            Exponent::Finite(s) => *s,
            Exponent::Infinity => f64::INFINITY,
        }
    }
}

/// Value of an ℓ_s norm. Integer exponents also carry the exact power sum,
/// and the exact root when it is an integer.
#[derive(Clone, Debug, PartialEq)]
pub struct NormValue {
    pub power_sum: Option<BigUint>,
    pub exact: Option<BigUint>,
    pub approx: f64,
}

pub fn p_norm<T: Entry>(a: &Partition<T>, s: Exponent) -> Result<NormValue> {
    let s = match s {
        Exponent::Infinity => {
            let m = a.max_entry().to_big();
            let approx = m.to_f64().unwrap_or(f64::INFINITY);
            return Ok(NormValue { power_sum: None, exact: Some(m), approx });
        }
        Exponent::Finite(s) if s.is_nan() || s < 1.0 => {
            return Err(Error::InvalidExponent(format!("{s} is below 1")));
        }
        Exponent::Finite(s) if s.is_infinite() => return p_norm(a, Exponent::Infinity),
        Exponent::Finite(s) => s,
    };
    let mut ctx = Ctx::new();
    if s.fract() == 0.0 && s <= u32::MAX as f64 {
        let k = s as u32;
        let sum: BigUint = a.entries().iter().map(|e| e.to_big().pow(k)).sum();
        let root = sum.nth_root(k);
        let exact = (root.pow(k) == sum).then_some(root);
        let approx = match &exact {
            Some(r) => r.to_f64().unwrap_or(f64::INFINITY),
            None => {
                let x = ctx.from_big(&sum);
                let l = ctx.ln(&x);
                let y = numeric::div(&l, &numeric::from_f64(s));
                let v = ctx.exp(&y);
                ctx.to_f64(&v)
            }
        };
        return Ok(NormValue { power_sum: Some(sum), exact, approx });
    }
    // (Σ a_i^s)^(1/s) = a_max (Σ (a_i / a_max)^s)^(1/s)
    let sf = numeric::from_f64(s);
    let m = ctx.from_big(&a.max_entry().to_big());
    let lm = ctx.ln(&m);
    let mut acc = numeric::from_f64(0.0);
    for e in a.entries() {
        let x = ctx.from_big(&e.to_big());
        let l = numeric::sub(&ctx.ln(&x), &lm);
        acc = numeric::add(&acc, &ctx.exp(&numeric::mul(&l, &sf)));
    }
    let l = numeric::add(&numeric::div(&ctx.ln(&acc), &sf), &lm);
    let v = ctx.exp(&l);
    Ok(NormValue { power_sum: None, exact: None, approx: ctx.to_f64(&v) })
}

/// Signed multiplicity differences `n_v = mult_μ(v) − mult_λ(v)`, nonzero
/// only, ordered by decreasing `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormProfile {
    terms: Vec<(BigUint, BigInt)>,
}

impl NormProfile {
    pub fn new<T: Entry>(lambda: &Partition<T>, mu: &Partition<T>) -> Self {
        let mut map = std::collections::BTreeMap::<BigUint, BigInt>::new();
        for e in mu.entries() {
            *map.entry(e.to_big()).or_default() += 1;
        }
        for e in lambda.entries() {
            *map.entry(e.to_big()).or_default() -= 1;
        }
        let terms = map.into_iter().rev().filter(|(_, n)| !n.is_zero()).collect();
        NormProfile { terms }
    }

    pub fn terms(&self) -> &[(BigUint, BigInt)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient of the largest value.
    pub fn top(&self) -> Option<&(BigUint, BigInt)> {
        self.terms.first()
    }

    /// `f(s)` exactly at a positive integer `s`.
    pub fn eval_int(&self, s: u32) -> BigInt {
        self.terms.iter().map(|(v, n)| big_to_bigint(&v.pow(s)) * n).sum()
    }

    /// `f(1) = ‖μ‖_1 − ‖λ‖_1`.
    pub fn f_one(&self) -> BigInt {
        self.eval_int(1)
    }

    pub fn abs_mass(&self) -> BigInt {
        self.terms.iter().map(|(_, n)| n.abs()).sum()
    }

    pub fn evaluator(&self) -> RelativeEvaluator {
        RelativeEvaluator::new(&self.terms)
    }
}

/// Exact witness that `P(x) = Σ (b_i − a_i) x^i` has a root in `(q, ∞)`:
/// a square-free factor of `P` with a sign change on `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootCertificate {
    pub base: u64,
    pub polynomial: Vec<BigInt>,
    pub factor: Vec<BigInt>,
    pub multiplicity: u32,
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RootCertificate {
    /// Re-checks the certificate from scratch.
    pub fn verify(&self) -> bool {
        let p = Poly::from_ints(&self.polynomial);
        let f = Poly::from_ints(&self.factor);
        if f.is_constant() || p.is_zero() || self.multiplicity == 0 {
            return false;
        }
        if !p.div_rem(&f.pow(self.multiplicity)).1.is_zero() {
            return false;
        }
        let q = BigRational::from_integer(BigInt::from(self.base));
        if self.lo < q || self.lo > self.hi {
            return false;
        }
        let (sl, sh) = (f.sign_at(&self.lo), f.sign_at(&self.hi));
        if self.lo == self.hi {
            return sl == Ordering::Equal && self.lo > q;
        }
        if sh == Ordering::Equal {
            return true;
        }
        // a root exactly at lo = q would not be interior
        sl != Ordering::Equal && sl != sh
    }

    /// Midpoint of the interval in `s = log_q x`.
    pub fn exponent(&self) -> f64 {
        let mid = (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2));
        mid.to_f64().unwrap_or(f64::NAN).ln() / (self.base as f64).ln()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EqualityPoint {
    /// Location in `s`.
    pub s: f64,
    /// Certified by exact arithmetic.
    pub exact: bool,
    /// `f` touches zero without changing sign.
    pub touch: bool,
    pub certificate: Option<RootCertificate>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BulkVerdict {
    pub holds: bool,
    /// Decided by the exact polynomial route.
    pub exact: bool,
    pub failure_exponent: Option<Exponent>,
    pub interior_equalities: Vec<EqualityPoint>,
    pub tight_at_one: bool,
    pub tight_at_infinity: bool,
    /// The two partitions are equal, so every norm agrees.
    pub identical: bool,
}

impl BulkVerdict {
    fn identical(exact: bool) -> Self {
        BulkVerdict {
            holds: true,
            exact,
            failure_exponent: None,
            interior_equalities: Vec::new(),
            tight_at_one: true,
            tight_at_infinity: true,
            identical: true,
        }
    }

    /// Interior equality points backed by exact certificates.
    pub fn certified_equalities(&self) -> impl Iterator<Item = &EqualityPoint> {
        self.interior_equalities.iter().filter(|e| e.exact && e.certificate.is_some())
    }
}

/// Numeric decision of `f(s) ≥ 0` for all `s ∈ [1, ∞]`.
///
/// `s = 1` and `s = ∞` are decided exactly. In between, `f` is only sampled
/// on `[1, s_max]`, where beyond `s_max` the largest value's term dominates
/// every other term. Sign changes are bisected and local minima refined by
/// golden-section search; a relative value within `tol` of zero counts as an
/// equality, flagged inexact.
pub fn dominates_all_s<T: Entry>(
    lambda: &Partition<T>,
    mu: &Partition<T>,
    tol: f64,
    grid: usize,
) -> BulkVerdict {
    let profile = NormProfile::new(lambda, mu);
    if profile.is_empty() {
        return BulkVerdict::identical(false);
    }
    let grid = grid.max(2);
    let f1 = profile.f_one();
    let mut verdict = BulkVerdict {
        holds: true,
        exact: false,
        failure_exponent: None,
        interior_equalities: Vec::new(),
        tight_at_one: f1.is_zero(),
        tight_at_infinity: lambda.max_entry() == mu.max_entry(),
        identical: false,
    };
    let (_, top_n) = profile.top().unwrap();
    let fails_at_infinity = top_n.is_negative();
    if f1.is_negative() {
        verdict.holds = false;
        verdict.failure_exponent = Some(Exponent::Finite(1.0));
        return verdict;
    }
    if profile.terms().len() == 1 {
        // a single term has a constant sign, already fixed by f(1)
        return verdict;
    }

    let mut ev = profile.evaluator();
    let s_max = scan_limit(&profile, &mut ev);
    let step = (s_max - 1.0) / grid as f64;
    let xs: Vec<f64> = (0..=grid).map(|i| 1.0 + step * i as f64).collect();
    let hs: Vec<f64> = xs.iter().map(|&s| ev.relative(s)).collect();

    let mut failure: Option<f64> = None;
    let note_failure = |s: f64, failure: &mut Option<f64>| {
        if failure.map_or(true, |f| s < f) {
            *failure = Some(s);
        }
    };

    if verdict.tight_at_one && ev.slope_sign_at_one(profile.terms()) < 0 {
        // f(1) = 0 and f decreasing: negative immediately to the right of 1
        let s = bisect_negative(&mut ev, 1.0, xs[1], tol);
        note_failure(s, &mut failure);
    }
    for (i, &h) in hs.iter().enumerate() {
        if h < -tol {
            note_failure(xs[i], &mut failure);
        }
    }
    // sign changes
    for i in 0..grid {
        let (a, b) = (hs[i], hs[i + 1]);
        if (a > tol && b < -tol) || (a < -tol && b > tol) {
            let s = bisect_root(&mut ev, xs[i], xs[i + 1], a > 0.0);
            if s > 1.0 {
                verdict.interior_equalities.push(EqualityPoint {
                    s,
                    exact: false,
                    touch: false,
                    certificate: None,
                });
            }
        }
    }
    // local minima that may dip to (or below) zero between samples
    for i in 1..=grid {
        let left = hs[i - 1];
        let right = if i < grid { hs[i + 1] } else { f64::INFINITY };
        if hs[i] <= left && hs[i] <= right {
            let hi = if i < grid { xs[i + 1] } else { xs[i] };
            let (s, h) = golden_min(&mut ev, xs[i - 1], hi);
            if h < -tol {
                note_failure(s, &mut failure);
            } else if h.abs() <= tol && s > 1.0 + 1e-9 {
                let dup = verdict
                    .interior_equalities
                    .iter()
                    .any(|e| (e.s - s).abs() < 1e-6);
                if !dup {
                    verdict.interior_equalities.push(EqualityPoint {
                        s,
                        exact: false,
                        touch: true,
                        certificate: None,
                    });
                }
            }
        }
    }
    verdict
        .interior_equalities
        .sort_by(|a, b| a.s.partial_cmp(&b.s).unwrap_or(Ordering::Equal));

    if let Some(s) = failure {
        verdict.holds = false;
        verdict.failure_exponent = Some(Exponent::Finite(s));
    } else if fails_at_infinity {
        verdict.holds = false;
        verdict.failure_exponent = Some(Exponent::Infinity);
    }
    verdict
}

/// `1 + ln(Σ|n_v|) / ln(v₁ / v₂)` for the two largest values `v₁ > v₂`.
fn scan_limit(profile: &NormProfile, ev: &mut RelativeEvaluator) -> f64 {
    let t = profile.terms();
    let ctx = ev.ctx();
    let mass = ctx.from_bigint(&profile.abs_mass());
    let v1 = ctx.from_big(&t[0].0);
    let v2 = ctx.from_big(&t[1].0);
    let ln_mass = ctx.ln(&mass);
    let ln_ratio = numeric::sub(&ctx.ln(&v1), &ctx.ln(&v2));
    let r = ctx.to_f64(&numeric::div(&ln_mass, &ln_ratio));
    1.0 + r.max(0.0)
}

fn bisect_root(ev: &mut RelativeEvaluator, mut a: f64, mut b: f64, positive_at_a: bool) -> f64 {
    for _ in 0..200 {
        if b - a <= 1e-15 * b {
            break;
        }
        let m = 0.5 * (a + b);
        let h = ev.relative(m);
        if (h > 0.0) == positive_at_a {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Finds some `s ∈ (a, b]` with relative value below `-tol`, or returns the
/// point closest to `a` that was examined.
fn bisect_negative(ev: &mut RelativeEvaluator, a: f64, mut b: f64, tol: f64) -> f64 {
    for _ in 0..200 {
        if ev.relative(b) < -tol {
            return b;
        }
        b = a + 0.5 * (b - a);
        if b - a < 1e-15 {
            break;
        }
    }
    b
}

fn golden_min(ev: &mut RelativeEvaluator, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = ev.relative(c);
    let mut fd = ev.relative(d);
    for _ in 0..200 {
        if b - a <= 1e-13 {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = ev.relative(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = ev.relative(d);
        }
    }
    let s = 0.5 * (a + b);
    (s, ev.relative(s))
}

/// Exact decision for two partitions over the same base `q`.
///
/// With `x = q^s` the comparison becomes `P(x) = Σ_i (b_i − a_i) x^i ≥ 0` on
/// `[q, ∞)`. `P` is split into square-free factors; odd-multiplicity roots in
/// `(q, ∞)` are sign crossings, even ones are touch points.
pub fn exact_dominates_powerq(lambda: &PowerPartition, mu: &PowerPartition) -> Result<BulkVerdict> {
    let coeffs = lambda.difference_coefficients(mu)?;
    let p = Poly::from_ints(&coeffs);
    if p.is_zero() {
        return Ok(BulkVerdict::identical(true));
    }
    let q = BigRational::from_integer(BigInt::from(lambda.base()));
    let lead_negative = p.lead().unwrap().is_negative();
    let mut verdict = BulkVerdict {
        holds: true,
        exact: true,
        failure_exponent: None,
        interior_equalities: Vec::new(),
        tight_at_one: p.sign_at(&q) == Ordering::Equal,
        tight_at_infinity: lambda.top_level() == mu.top_level(),
        identical: false,
    };
    let bound = p.root_bound().max(q.clone() + BigRational::one());
    let width = certificate_width();
    let mut crossing = false;
    let mut probes = vec![q.clone(), bound.clone() + BigRational::one()];
    for (factor, mult) in squarefree_decomposition(&p) {
        let factor_ints = factor.primitive_ints();
        for iv in isolate_roots(&factor, &q, &bound) {
            let (lo, hi) = refine_root(&factor, iv, &width);
            if lo == hi && lo == q {
                continue;
            }
            if mult % 2 == 1 {
                crossing = true;
            }
            probes.push(lo.clone());
            probes.push(hi.clone());
            let cert = RootCertificate {
                base: lambda.base(),
                polynomial: coeffs.clone(),
                factor: factor_ints.clone(),
                multiplicity: mult,
                lo,
                hi,
            };
            verdict.interior_equalities.push(EqualityPoint {
                s: cert.exponent(),
                exact: true,
                touch: mult % 2 == 0,
                certificate: Some(cert),
            });
        }
    }
    verdict
        .interior_equalities
        .sort_by(|a, b| a.s.partial_cmp(&b.s).unwrap_or(Ordering::Equal));
    if lead_negative || crossing {
        verdict.holds = false;
        probes.sort();
        let base = lambda.base() as f64;
        verdict.failure_exponent = probes
            .iter()
            .find(|x| p.sign_at(x) == Ordering::Less)
            .map(|x| Exponent::Finite(x.to_f64().unwrap_or(f64::INFINITY).ln() / base.ln()))
            .or(Some(Exponent::Infinity));
    }
    Ok(verdict)
}

/// Bulk decision using the exact route whenever both partitions share a
/// base (`base` forces one), and the numeric scan otherwise.
pub fn bulk_verdict<T: Entry>(
    lambda: &Partition<T>,
    mu: &Partition<T>,
    base: Option<u64>,
    tol: f64,
    grid: usize,
) -> BulkVerdict {
    let q = base
        .filter(|&q| lambda.is_power_of(q) && mu.is_power_of(q))
        .or_else(|| common_base(&[lambda, mu]));
    if let Some(q) = q {
        if let (Ok(a), Ok(b)) = (lambda.to_base_counts(q), mu.to_base_counts(q)) {
            if let Ok(v) = exact_dominates_powerq(&a, &b) {
                return v;
            }
        }
    }
    dominates_all_s(lambda, mu, tol, grid)
}

/// Exact sign of `f(s)` at an integer exponent.
pub fn sign_at_integer<T: Entry>(lambda: &Partition<T>, mu: &Partition<T>, s: u32) -> Ordering {
    NormProfile::new(lambda, mu).eval_int(s).cmp(&BigInt::zero())
}
