//! Small pairs separating the four relations, checked end to end.
//!
//! Each claim is recomputed through the public deciders, including
//! validation of every witness and certificate involved.

use crate::norms::{self, DEFAULT_GRID, DEFAULT_TOL};
use crate::orders::{self, Budgets};
use crate::partition::Partition;
use crate::stable::{self, Refutation, StableStatus};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Claim {
    pub id: &'static str,
    pub statement: String,
    pub reproduced: bool,
    pub detail: String,
}

fn p(v: &[u64]) -> Partition<u64> {
    Partition::from_u64s(v).expect("fixture")
}

fn repeat(parts: &[(u64, usize)]) -> Partition<u64> {
    let v: Vec<u64> = parts.iter().flat_map(|&(x, k)| std::iter::repeat(x).take(k)).collect();
    p(&v)
}

/// `[2,2,2,2]`
pub fn four_twos() -> Partition<u64> {
    repeat(&[(2, 4)])
}

/// `[4,1,1,1,1,1,1,1,1]`
pub fn four_and_eight_ones() -> Partition<u64> {
    repeat(&[(4, 1), (1, 8)])
}

/// `[3,3,3]`
pub fn three_threes() -> Partition<u64> {
    repeat(&[(3, 3)])
}

/// `[8,8,8,8,4,4,4,4]`
pub fn eights_and_fours() -> Partition<u64> {
    repeat(&[(8, 4), (4, 4)])
}

/// `[16]` followed by sixteen 2s and sixteen 1s.
pub fn sixteen_twos_ones() -> Partition<u64> {
    repeat(&[(16, 1), (2, 16), (1, 16)])
}

/// `[4,2,2]`
pub fn four_two_two() -> Partition<u64> {
    p(&[4, 2, 2])
}

/// `[5,3]`
pub fn five_three() -> Partition<u64> {
    p(&[5, 3])
}

fn claim(id: &'static str, statement: String, outcome: Result<String, String>) -> Claim {
    match outcome {
        Ok(detail) => Claim { id, statement, reproduced: true, detail },
        Err(detail) => Claim { id, statement, reproduced: false, detail },
    }
}

fn check(cond: bool, ok: String, bad: String) -> Result<String, String> {
    if cond {
        Ok(ok)
    } else {
        Err(bad)
    }
}

/// Runs every claim. Order is fixed.
pub fn run_battery() -> Vec<Claim> {
    let budgets = Budgets::default();
    let (l1, m1, m2) = (four_twos(), four_and_eight_ones(), three_threes());
    let (l2, m3) = (eights_and_fours(), sixteen_twos_ones());
    let (l3, m4) = (four_two_two(), five_three());
    let mut out = Vec::new();

    out.push(claim("catalyst-stable", format!("{l1} stably embeds into {m1} with catalyst [2,1,1]"), {
        match stable::stable_embeds(&l1, &m1, &budgets) {
            Ok(v) => match &v.witness {
                Some(w) if v.status == StableStatus::Holds && w.nu == p(&[2, 1, 1]) => {
                    match w.validate(&l1, &m1) {
                        Ok(()) => Ok(format!("catalyst {} validates", w.nu)),
                        Err(e) => Err(format!("witness rejected: {e}")),
                    }
                }
                _ => Err(format!("got {:?} with {:?}", v.status, v.witness.map(|w| w.nu.to_string()))),
            },
            Err(e) => Err(e.to_string()),
        }
    }));

    let s = orders::supermajorizes(&m1, &l1);
    out.push(claim(
        "catalyst-not-supermajorized",
        format!("{l1} is not supermajorized by {m1}"),
        check(
            !s.holds && s.failing_threshold == Some(2),
            "fails at x=2: 8 > 4".into(),
            format!("{s:?}"),
        ),
    ));

    out.push(claim("catalyst-not-embedded", format!("{l1} does not embed into {m1}"), {
        match orders::embeds(&l1, &m1, budgets.embed_nodes) {
            Ok(None) => Ok("exact search exhausted".into()),
            other => Err(format!("{other:?}")),
        }
    }));

    let s = orders::supermajorizes(&m2, &l1);
    out.push(claim(
        "threes-supermajorized",
        format!("{l1} is supermajorized by {m2}"),
        check(s.holds, "all thresholds pass".into(), format!("{s:?}")),
    ));

    out.push(claim("threes-not-embedded", format!("{l1} does not embed into {m2}"), {
        match orders::embeds(&l1, &m2, budgets.embed_nodes) {
            Ok(None) => Ok("exact search exhausted".into()),
            other => Err(format!("{other:?}")),
        }
    }));

    let bulk = norms::bulk_verdict(&l2, &m3, None, DEFAULT_TOL, DEFAULT_GRID);
    let numeric = norms::dominates_all_s(&l2, &m3, DEFAULT_TOL, DEFAULT_GRID);
    out.push(claim(
        "equality-bulk",
        format!("{l2} bulk embeds into {m3}"),
        check(
            bulk.holds && bulk.exact && numeric.holds,
            format!(
                "norms dominate for all s; equality at s={:.6}",
                bulk.interior_equalities.first().map_or(f64::NAN, |e| e.s)
            ),
            format!("exact {bulk:?}, numeric {numeric:?}"),
        ),
    ));

    out.push(claim("equality-not-stable", format!("{l2} does not stably embed into {m3}"), {
        match stable::stable_embeds(&l2, &m3, &budgets) {
            Ok(v) => match &v.refutation {
                Some(r @ Refutation::NormEquality { certificate })
                    if v.status == StableStatus::Fails && r.verify(&l2, &m3, &budgets) =>
                {
                    Ok(format!(
                        "norm equality certified in x=2^s on [{}, {}]",
                        certificate.lo, certificate.hi
                    ))
                }
                _ => Err(format!("{:?} {:?}", v.status, v.refutation)),
            },
            Err(e) => Err(e.to_string()),
        }
    }));

    let s = orders::supermajorizes(&m3, &l2);
    out.push(claim(
        "equality-not-supermajorized",
        format!("{l2} is not supermajorized by {m3}"),
        check(
            !s.holds && s.failing_threshold == Some(3),
            "fails at x=3: 48 > 16".into(),
            format!("{s:?}"),
        ),
    ));

    let s = orders::supermajorizes(&m4, &l3);
    out.push(claim(
        "parity-supermajorized",
        format!("{l3} is supermajorized by {m4}"),
        check(s.holds, "all thresholds pass".into(), format!("{s:?}")),
    ));

    out.push(claim("parity-not-stable", format!("{l3} does not stably embed into {m4}"), {
        match stable::stable_embeds(&l3, &m4, &budgets) {
            Ok(v) => match &v.refutation {
                Some(r @ Refutation::TightValuation { prime: Some(prime), .. })
                    if v.status == StableStatus::Fails && r.verify(&l3, &m4, &budgets) =>
                {
                    Ok(format!("tight packing with valuation gap at prime {prime}"))
                }
                _ => Err(format!("{:?} {:?}", v.status, v.refutation)),
            },
            Err(e) => Err(e.to_string()),
        }
    }));

    out
}
