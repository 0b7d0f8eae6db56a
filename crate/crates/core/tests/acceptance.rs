//! Acceptance run: one line per criterion, nonzero exit if any fails.

mod common;

use std::cmp::Ordering;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use partition_orders::counterexamples::{self, four_and_eight_ones, four_twos};
use partition_orders::norms::{self, NormProfile, DEFAULT_GRID, DEFAULT_TOL};
use partition_orders::oracle::{brute_embed, brute_stable_all, brute_supermajorize};
use partition_orders::orders::{
    embed_powerq, embeds, embeds_without_tail_prune, first_fit, first_fit_in_order,
    is_divisible_chain, relations, supermajorizes, Decision,
};
use partition_orders::stable::{
    catalyst_ratio_compare, construct_nu, normalize_pair, nu_order_compare, stable_embeds,
    stable_embeds_counts, StableStatus,
};
use partition_orders::{Budgets, Partition, PowerPartition};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{divisible_chain, embedded_pair, random_counts, random_partition};

struct Outcome {
    pass: bool,
    summary: String,
}

fn outcome(pass: bool, summary: impl Into<String>) -> Outcome {
    Outcome { pass, summary: summary.into() }
}

fn within(pass: bool, summary: String, elapsed: Duration, limit: Duration) -> Outcome {
    if elapsed > limit {
        return outcome(false, format!("{summary}; too slow: {elapsed:?} > {limit:?}"));
    }
    outcome(pass, summary)
}

fn pp(q: u64, c: &[u64]) -> PowerPartition {
    PowerPartition::from_u64_counts(q, c).unwrap()
}

fn separating_pairs() -> Outcome {
    let t = Instant::now();
    let claims = counterexamples::run_battery();
    let elapsed = t.elapsed();
    let failed: Vec<String> = claims
        .iter()
        .filter(|c| !c.reproduced)
        .map(|c| format!("{} ({})", c.id, c.detail))
        .collect();
    let summary = if failed.is_empty() {
        format!("{}/{} claims reproduced in {elapsed:?}", claims.len(), claims.len())
    } else {
        format!("not reproduced: {}", failed.join("; "))
    };
    within(failed.is_empty(), summary, elapsed, Duration::from_secs(1))
}

/// `lo <= 1 + √5 <= hi` decided in exact arithmetic.
fn brackets_golden_root(lo: &BigRational, hi: &BigRational) -> bool {
    let one = BigRational::one();
    let five = BigRational::from_integer(BigInt::from(5));
    let below = |x: &BigRational| *x <= one || (x - &one) * (x - &one) <= five;
    let above = |x: &BigRational| *x >= one && (x - &one) * (x - &one) >= five;
    below(lo) && above(hi)
}

fn equality_point() -> Outcome {
    let l2 = counterexamples::eights_and_fours();
    let m3 = counterexamples::sixteen_twos_ones();
    let exact = norms::exact_dominates_powerq(&l2.to_base_counts(2).unwrap(), &m3.to_base_counts(2).unwrap())
        .unwrap();
    let Some(eq) = exact.certified_equalities().next() else {
        return outcome(false, "no certified equality");
    };
    let cert = eq.certificate.as_ref().unwrap();
    let factor_ok = cert.factor == [BigInt::from(-4), BigInt::from(-2), BigInt::from(1)] && cert.multiplicity == 2;
    let squared = [16i64, 16, -4, -4, 1].map(BigInt::from);
    let poly_ok = cert.polynomial == squared;
    let width = &cert.hi - &cert.lo;
    let width_ok = width <= BigRational::new(BigInt::one(), BigInt::from(1_000_000_000));
    let bracket_ok = brackets_golden_root(&cert.lo, &cert.hi);
    let numeric = norms::dominates_all_s(&l2, &m3, DEFAULT_TOL, DEFAULT_GRID);
    let s_num = numeric.interior_equalities.first().map_or(f64::NAN, |e| e.s);
    let num_ok = numeric.holds && (s_num - 1.69424).abs() <= 1e-4;
    let pass = factor_ok && poly_ok && width_ok && bracket_ok && cert.verify() && eq.touch && exact.holds && num_ok;
    outcome(
        pass,
        format!(
            "P = (x^2-2x-4)^2: {}, touch: {}, bracket holds 1+sqrt5: {bracket_ok}, width {:.3e}, numeric s* = {s_num:.8}",
            factor_ok && poly_ok,
            eq.touch,
            num_traits::ToPrimitive::to_f64(&width).unwrap_or(f64::NAN),
        ),
    )
}

fn catalyst_construction() -> Outcome {
    let (a, b) = (pp(2, &[0, 4]), pp(2, &[8, 0, 1]));
    let t = Instant::now();
    let v = construct_nu::<u64>(&a, &b, None).unwrap();
    let elapsed = t.elapsed();
    let Some(w) = v.witness else {
        return outcome(false, format!("status {:?} without witness", v.status));
    };
    let nu_ok = w.nu == Partition::from_u64s(&[2, 1, 1]).unwrap();
    let valid = w.validate(&four_twos(), &four_and_eight_ones()).is_ok();
    within(
        nu_ok && valid,
        format!("catalyst {} (expected [2,1,1]), embedding validates: {valid}, {elapsed:?}", w.nu),
        elapsed,
        Duration::from_millis(10),
    )
}

fn power_embedding_equivalence() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let budget = 10_000_000;
    let (mut pairs, mut holds, mut bad) = (0, 0, Vec::new());
    for k in 0..320 {
        let q = if k % 2 == 0 { 2 } else { 3 };
        let (a, b) = (random_counts(&mut rng, q, 5, 6), random_counts(&mut rng, q, 5, 6));
        let (l, m) = (a.to_partition::<u64>().unwrap(), b.to_partition::<u64>().unwrap());
        let search = match embeds_without_tail_prune(&l, &m, budget) {
            Ok(w) => w.is_some(),
            Err(e) => {
                bad.push(format!("{l} into {m}: {e}"));
                continue;
            }
        };
        let sup = supermajorizes(&m, &l).holds;
        let greedy = embed_powerq::<u64>(&a, &b).unwrap();
        let greedy_ok = match &greedy {
            Some(w) => w.validate(&l, &m).is_ok(),
            None => true,
        };
        pairs += 1;
        holds += search as usize;
        if search != sup || greedy.is_some() != sup || !greedy_ok {
            bad.push(format!("{a} into {b}: search {search}, supermajorized {sup}, greedy {greedy_ok}"));
        }
    }
    let elapsed = t.elapsed();
    within(
        bad.is_empty() && pairs >= 300,
        format!("{pairs} pairs ({holds} embed), discrepancies: {}{}", bad.len(), first(&bad)),
        elapsed,
        Duration::from_secs(60),
    )
}

fn first(v: &[String]) -> String {
    v.first().map_or(String::new(), |s| format!(" e.g. {s}"))
}

fn first_fit_completeness() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut pairs, mut reorders, mut holds, mut bad) = (0, 0, 0, Vec::new());
    for _ in 0..320 {
        let lam = divisible_chain(&mut rng, 6, 64);
        assert!(is_divisible_chain(&lam));
        let mu = random_partition(&mut rng, 6, 64);
        let ff = first_fit(&lam, &mu);
        let exact = embeds(&lam, &mu, 10_000_000).unwrap();
        pairs += 1;
        holds += exact.is_some() as usize;
        if ff.is_some() != exact.is_some() {
            bad.push(format!("{lam} into {mu}: first fit {}, search {}", ff.is_some(), exact.is_some()));
        }
        if let Some(w) = &ff {
            if w.validate(&lam, &mu).is_err() {
                bad.push(format!("{lam} into {mu}: invalid first fit witness"));
            }
        }
        if reorders < 160 {
            let mut order: Vec<usize> = (0..mu.len()).collect();
            order.shuffle(&mut rng);
            reorders += 1;
            if first_fit_in_order(&lam, &mu, &order).is_some() != ff.is_some() {
                bad.push(format!("{lam} into {mu}: bin order {order:?} changes the outcome"));
            }
        }
    }
    let elapsed = t.elapsed();
    within(
        bad.is_empty(),
        format!(
            "{pairs} chains ({holds} embed), {reorders} shuffled bin orders, discrepancies: {}{}",
            bad.len(),
            first(&bad)
        ),
        elapsed,
        Duration::from_secs(60),
    )
}

fn implication_diagram() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let budgets = Budgets::default();
    let (mut pairs, mut bad) = (0, Vec::new());
    let mut tally = [0usize; 4];
    while pairs < 520 {
        let (lam, mu) = if pairs % 3 == 0 {
            embedded_pair(&mut rng, 6, 32)
        } else {
            (random_partition(&mut rng, 6, 32), random_partition(&mut rng, 6, 32))
        };
        pairs += 1;
        let report = match relations(&lam, &mu, &budgets) {
            Ok(r) => r,
            Err(e) => {
                bad.push(format!("{lam} vs {mu}: {e}"));
                continue;
            }
        };
        let emb = match &report.embeds {
            Decision::Holds(w) => {
                if w.validate(&lam, &mu).is_err() {
                    bad.push(format!("{lam} into {mu}: invalid witness"));
                }
                true
            }
            Decision::Fails => false,
            Decision::Unknown { .. } => {
                bad.push(format!("{lam} into {mu}: search budget exhausted"));
                continue;
            }
        };
        let sup = report.supermajorized.holds;
        tally[0] += emb as usize;
        tally[1] += sup as usize;
        tally[2] += report.bulk.holds as usize;
        tally[3] += (report.stable.status == StableStatus::Holds) as usize;
        if emb && !sup {
            bad.push(format!("{lam} vs {mu}: embeds but not supermajorized"));
        }
        if sup && !report.bulk.holds {
            bad.push(format!("{lam} vs {mu}: supermajorized but not bulk"));
        }
        if report.stable.status == StableStatus::Holds && !report.bulk.holds {
            bad.push(format!("{lam} vs {mu}: stable but not bulk"));
        }
        if emb && report.stable.status == StableStatus::Fails {
            bad.push(format!("{lam} vs {mu}: embeds but stable refuted"));
        }
        match brute_embed(&lam, &mu) {
            Ok(b) if b != emb => bad.push(format!("{lam} into {mu}: brute force says {b}")),
            Ok(_) => {}
            Err(e) => bad.push(format!("{lam} into {mu}: oracle {e}")),
        }
        if brute_supermajorize(&mu, &lam).unwrap() != sup {
            bad.push(format!("{lam} vs {mu}: supermajorization disagrees with brute force"));
        }
    }
    let elapsed = t.elapsed();
    within(
        bad.is_empty(),
        format!(
            "{pairs} pairs (embed {}, supermajorized {}, bulk {}, stable {}), violations: {}{}",
            tally[0],
            tally[1],
            tally[2],
            tally[3],
            bad.len(),
            first(&bad)
        ),
        elapsed,
        Duration::from_secs(120),
    )
}

fn strict_norms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut pairs, mut bad, mut min_rel) = (0, Vec::new(), f64::INFINITY);
    while pairs < 120 {
        let (lam, mu) = embedded_pair(&mut rng, 6, 32);
        if embeds(&lam, &mu, 10_000_000).unwrap().is_none() {
            bad.push(format!("{lam} into {mu}: generated pair does not embed"));
            continue;
        }
        pairs += 1;
        let profile = NormProfile::new(&lam, &mu);
        for s in [2u32, 3] {
            if !profile.eval_int(s).is_positive() {
                bad.push(format!("{lam} vs {mu}: f({s}) = {}", profile.eval_int(s)));
            }
        }
        let rel = profile.evaluator().relative(1.5);
        min_rel = min_rel.min(rel);
        if rel <= DEFAULT_TOL {
            bad.push(format!("{lam} vs {mu}: relative f(3/2) = {rel:e}"));
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{pairs} embedded pairs, f > 0 at s = 3/2, 2, 3 (smallest relative f(3/2) = {min_rel:.3e}), violations: {}{}",
            bad.len(),
            first(&bad)
        ),
    )
}

/// Power-of-two pairs that stably embed through the construction, not
/// directly.
fn constructed_pairs(rng: &mut ChaCha8Rng, want: usize) -> Vec<(Partition<u64>, Partition<u64>, PowerPartition)> {
    let budgets = Budgets::default();
    let mut out = Vec::new();
    while out.len() < want {
        let a = random_counts(rng, 2, 4, 6);
        let b = random_counts(rng, 2, 5, 8);
        let (l, m) = (a.to_partition::<u64>().unwrap(), b.to_partition::<u64>().unwrap());
        if supermajorizes(&m, &l).holds {
            continue;
        }
        let v = stable_embeds(&l, &m, &budgets).unwrap();
        if v.status == StableStatus::Holds {
            out.push((l, m, v.catalyst.unwrap()));
        }
    }
    out
}

fn minimality() -> Outcome {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let pairs = constructed_pairs(&mut rng, 60);
    let (mut beaten, mut beaten_ratio, mut examples) = (0, 0, Vec::new());
    for (l, m, nu) in &pairs {
        let valid = brute_stable_all(l, m, 4, 16, |c| c.iter().all(|x| x.is_power_of_two())).unwrap();
        let counts: Vec<PowerPartition> = valid.iter().map(|c| c.to_base_counts(2).unwrap()).collect();
        if let Some(c) = counts.iter().find(|c| nu_order_compare(c, nu) == Ordering::Less) {
            beaten += 1;
            if examples.len() < 2 {
                examples.push(format!("{l} vs {m}: constructed {nu}, smaller {}", c.to_partition::<u64>().unwrap()));
            }
        }
        if counts.iter().any(|c| catalyst_ratio_compare(c, nu) == Ordering::Less) {
            beaten_ratio += 1;
        }
    }
    let elapsed = t.elapsed();
    within(
        beaten == 0,
        format!(
            "{} constructed catalysts, beaten under the length-then-ratio order: {beaten}{}; under top-down ratios alone: {beaten_ratio}",
            pairs.len(),
            if examples.is_empty() { String::new() } else { format!(" ({})", examples.join("; ")) }
        ),
        elapsed,
        Duration::from_secs(120),
    )
}

fn normalization_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let budgets = Budgets::default();
    let mut tally = [0usize; 3];
    let mut bad = Vec::new();
    let mut pairs = Vec::new();
    for (l, m, _) in constructed_pairs(&mut rng, 40) {
        pairs.push((l.to_base_counts(2).unwrap(), m.to_base_counts(2).unwrap()));
    }
    while pairs.len() < 220 {
        let q = *[2u64, 2, 3].choose(&mut rng).unwrap();
        let a = random_counts(&mut rng, q, 4, 5);
        let mut b = random_counts(&mut rng, q, 5, 6);
        if rng.gen_bool(0.5) {
            // share some boxes so that cancellation has work to do
            b = b.add(&random_counts(&mut rng, q, 3, 2)).unwrap();
        }
        pairs.push((a, b));
    }
    for (a, b) in &pairs {
        let l = a.to_partition::<u64>().unwrap();
        let m = b.to_partition::<u64>().unwrap();
        let before = stable_embeds(&l, &m, &budgets).unwrap().status;
        let (na, nb) = normalize_pair(a, b).unwrap();
        let after = stable_embeds_counts(&na, &nb, &budgets).unwrap();
        tally[before as usize] += 1;
        if before != after {
            bad.push(format!("{a} vs {b}: {before:?} before, {after:?} after cancelling to {na} vs {nb}"));
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{} pairs (holds {}, fails {}, unknown {}), discrepancies: {}{}",
            pairs.len(),
            tally[0],
            tally[1],
            tally[2],
            bad.len(),
            first(&bad)
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("separating pairs", separating_pairs),
        ("norm equality point", equality_point),
        ("catalyst construction", catalyst_construction),
        ("power-of-base embedding equivalence", power_embedding_equivalence),
        ("first fit on divisible chains", first_fit_completeness),
        ("implication diagram", implication_diagram),
        ("strict norms under embedding", strict_norms),
        ("catalyst minimality", minimality),
        ("cancellation invariance", normalization_invariance),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        failed += !o.pass as usize;
        println!("criterion {} {tag} {name}: {} [{:.2?}]", k + 1, o.summary, t.elapsed());
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
