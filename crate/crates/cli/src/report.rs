//! Serializable reports and their plain-text rendering.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use partition_orders::norms::{EqualityPoint, Exponent, RootCertificate};
use partition_orders::orders::{Decision, Supermajorization};
use partition_orders::stable::{Refutation, StepRecord, UnknownReason};
use partition_orders::{BigPartition, BulkVerdict, EmbeddingWitness, StableStatus, StableVerdict};
use serde::{Deserialize, Serialize};

use crate::doc::{Num, PartitionDoc};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Holds,
    Fails,
    Unknown,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Holds => 0,
            Status::Fails => 1,
            Status::Unknown => 2,
        }
    }

    fn shout(self) -> &'static str {
        match self {
            Status::Holds => "HOLDS",
            Status::Fails => "FAILS",
            Status::Unknown => "UNKNOWN",
        }
    }
}

impl From<StableStatus> for Status {
    fn from(s: StableStatus) -> Self {
        match s {
            StableStatus::Holds => Status::Holds,
            StableStatus::Fails => Status::Fails,
            StableStatus::Unknown => Status::Unknown,
        }
    }
}

fn bool_status(b: bool) -> Status {
    if b {
        Status::Holds
    } else {
        Status::Fails
    }
}

fn nums(v: &[BigUint]) -> Vec<Num> {
    v.iter().map(Num::from).collect()
}

fn show(v: &[Num]) -> String {
    let parts: Vec<String> = v.iter().map(|n| n.0.to_string()).collect();
    format!("[{}]", parts.join(","))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDoc {
    /// Bin index for each entry of the left side, in entry order.
    pub assignment: Vec<usize>,
    pub loads: Vec<Num>,
}

impl From<&EmbeddingWitness<BigUint>> for WitnessDoc {
    fn from(w: &EmbeddingWitness<BigUint>) -> Self {
        WitnessDoc { assignment: w.assignment.clone(), loads: nums(&w.loads) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbedReport {
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessDoc>,
    /// Search nodes spent when the budget ran out.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<u64>,
}

impl From<&Decision<EmbeddingWitness<BigUint>>> for EmbedReport {
    fn from(d: &Decision<EmbeddingWitness<BigUint>>) -> Self {
        match d {
            Decision::Holds(w) => EmbedReport { status: Status::Holds, witness: Some(w.into()), nodes: None },
            Decision::Fails => EmbedReport { status: Status::Fails, witness: None, nodes: None },
            Decision::Unknown { nodes } => EmbedReport { status: Status::Unknown, witness: None, nodes: Some(*nodes) },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupermajorizeReport {
    pub status: Status,
    /// Smallest `x` where the left tail sum exceeds the right one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failing_threshold: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhs_tail: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rhs_tail: Option<Num>,
}

fn tail_sum(p: &BigPartition, x: &BigUint) -> BigUint {
    p.entries().iter().filter(|e| *e >= x).sum()
}

impl SupermajorizeReport {
    pub fn new(s: &Supermajorization<BigUint>, lambda: &BigPartition, mu: &BigPartition) -> Self {
        let x = s.failing_threshold.as_ref();
        SupermajorizeReport {
            status: bool_status(s.holds),
            failing_threshold: x.map(Num::from),
            lhs_tail: x.map(|x| Num::from(&tail_sum(lambda, x))),
            rhs_tail: x.map(|x| Num::from(&tail_sum(mu, x))),
        }
    }
}

/// A finite exponent, or `"inf"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExponentDoc {
    Finite(f64),
    Named(String),
}

impl From<&Exponent> for ExponentDoc {
    fn from(e: &Exponent) -> Self {
        match e {
            Exponent::Finite(s) => ExponentDoc::Finite(*s),
            Exponent::Infinity => ExponentDoc::Named("inf".into()),
        }
    }
}

impl std::fmt::Display for ExponentDoc {
    fn fmt(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
        match self {
            ExponentDoc::Finite(s) => write!(f, "{s}"),
            ExponentDoc::Named(n) => f.write_str(n),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub base: u64,
    /// Coefficients of `P(x)`, lowest degree first, with `x = base^s`.
    pub polynomial: Vec<Num>,
    /// Square-free factor holding the root, lowest degree first.
    pub factor: Vec<Num>,
    pub multiplicity: u32,
    /// Isolating interval for `x` as exact fractions.
    pub lo: String,
    pub hi: String,
    pub verified: bool,
}

impl From<&RootCertificate> for CertificateDoc {
    fn from(c: &RootCertificate) -> Self {
        let ints = |v: &[num_bigint::BigInt]| v.iter().map(|x| Num(x.clone())).collect();
        CertificateDoc {
            base: c.base,
            polynomial: ints(&c.polynomial),
            factor: ints(&c.factor),
            multiplicity: c.multiplicity,
            lo: c.lo.to_string(),
            hi: c.hi.to_string(),
            verified: c.verify(),
        }
    }
}

fn ratio_f64(s: &str) -> f64 {
    match s.split_once('/') {
        Some((p, q)) => {
            let p: num_bigint::BigInt = p.parse().unwrap_or_default();
            let q: num_bigint::BigInt = q.parse().unwrap_or_default();
            p.to_f64().unwrap_or(f64::NAN) / q.to_f64().unwrap_or(f64::NAN)
        }
        None => s.parse().unwrap_or(f64::NAN),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EqualityDoc {
    pub s: f64,
    pub exact: bool,
    /// `true` when the difference touches zero without changing sign.
    pub touch: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateDoc>,
}

impl From<&EqualityPoint> for EqualityDoc {
    fn from(e: &EqualityPoint) -> Self {
        EqualityDoc { s: e.s, exact: e.exact, touch: e.touch, certificate: e.certificate.as_ref().map(Into::into) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BulkReport {
    pub status: Status,
    /// Decided by exact polynomial arithmetic rather than sampling.
    pub exact: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure_exponent: Option<ExponentDoc>,
    pub tight_at_one: bool,
    pub tight_at_infinity: bool,
    pub identical: bool,
    pub equalities: Vec<EqualityDoc>,
}

impl From<&BulkVerdict> for BulkReport {
    fn from(b: &BulkVerdict) -> Self {
        BulkReport {
            status: bool_status(b.holds),
            exact: b.exact,
            failure_exponent: b.failure_exponent.as_ref().map(Into::into),
            tight_at_one: b.tight_at_one,
            tight_at_infinity: b.tight_at_infinity,
            identical: b.identical,
            equalities: b.interior_equalities.iter().map(Into::into).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RefutationDoc {
    BulkFails { exponent: ExponentDoc, exact: bool },
    NormEquality { certificate: CertificateDoc },
    TopIndexRule { base: u64, lambda_top: usize, mu_top: usize },
    TightValuation {
        sum: Num,
        lambda_gcd: Num,
        mu_gcd: Num,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        prime: Option<Num>,
    },
}

impl From<&Refutation> for RefutationDoc {
    fn from(r: &Refutation) -> Self {
        match r {
            Refutation::BulkFails { exponent, exact } => {
                RefutationDoc::BulkFails { exponent: exponent.into(), exact: *exact }
            }
            Refutation::NormEquality { certificate } => {
                RefutationDoc::NormEquality { certificate: certificate.into() }
            }
            Refutation::TopIndexRule { base, lambda_top, mu_top } => {
                RefutationDoc::TopIndexRule { base: *base, lambda_top: *lambda_top, mu_top: *mu_top }
            }
            Refutation::TightValuation { sum, lambda_gcd, mu_gcd, prime } => RefutationDoc::TightValuation {
                sum: sum.into(),
                lambda_gcd: lambda_gcd.into(),
                mu_gcd: mu_gcd.into(),
                prime: prime.as_ref().map(Into::into),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepDoc {
    pub pass: u8,
    pub step: usize,
    pub level: i64,
    pub demand: Num,
    pub room: Num,
    pub coefficient: Num,
    pub leftover: Num,
}

impl From<&StepRecord> for StepDoc {
    fn from(s: &StepRecord) -> Self {
        StepDoc {
            pass: s.pass,
            step: s.step,
            level: s.level,
            demand: (&s.demand).into(),
            room: (&s.room).into(),
            coefficient: (&s.coefficient).into(),
            leftover: (&s.leftover).into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StableReport {
    pub status: Status,
    /// Catalyst in count form; present whenever one was found.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub catalyst: Option<PartitionDoc>,
    /// Catalyst entries, when small enough to expand.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<Vec<Num>>,
    /// Embedding of the two products, when small enough to build.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding: Option<WitnessDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refutation: Option<RefutationDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unknown_reason: Option<String>,
    pub steps: u64,
    pub construction_log: Vec<StepDoc>,
}

impl From<&StableVerdict<BigUint>> for StableReport {
    fn from(v: &StableVerdict<BigUint>) -> Self {
        StableReport {
            status: v.status.into(),
            catalyst: v.catalyst.as_ref().map(|c| PartitionDoc::from_counts(c, None)),
            nu: v.witness.as_ref().map(|w| nums(w.nu.entries())),
            embedding: v.witness.as_ref().and_then(|w| w.embedding.as_ref()).map(Into::into),
            refutation: v.refutation.as_ref().map(Into::into),
            unknown_reason: v.unknown.map(|u| {
                match u {
                    UnknownReason::StepBudget => "step budget exhausted",
                    UnknownReason::NoAlgorithm => "no decision procedure for this pair",
                }
                .to_string()
            }),
            steps: v.budget_spent,
            construction_log: v.construction_log.iter().map(Into::into).collect(),
        }
    }
}

/// Output of `check`: the inputs plus whichever relations were asked for.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub relation: String,
    pub lhs: PartitionDoc,
    pub rhs: PartitionDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embed: Option<EmbedReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub supermajorize: Option<SupermajorizeReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bulk: Option<BulkReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stable: Option<StableReport>,
}

impl CheckReport {
    fn statuses(&self) -> Vec<Status> {
        let mut out = Vec::new();
        out.extend(self.embed.as_ref().map(|r| r.status));
        out.extend(self.supermajorize.as_ref().map(|r| r.status));
        out.extend(self.bulk.as_ref().map(|r| r.status));
        out.extend(self.stable.as_ref().map(|r| r.status));
        out
    }

    /// Unknown if any relation is unknown, otherwise fails if any fails.
    pub fn status(&self) -> Status {
        let s = self.statuses();
        if s.contains(&Status::Unknown) {
            Status::Unknown
        } else if s.contains(&Status::Fails) {
            Status::Fails
        } else {
            Status::Holds
        }
    }

    pub fn render(&self, with_log: bool) -> String {
        let mut out = String::new();
        let lhs = self.lhs.label();
        let rhs = self.rhs.label();
        let _ = writeln!(out, "lhs {lhs}\nrhs {rhs}");
        if let Some(r) = &self.embed {
            let _ = writeln!(out, "embed: {}", r.status.shout());
            if let Some(w) = &r.witness {
                let _ = writeln!(out, "  assignment {:?}", w.assignment);
                let _ = writeln!(out, "  loads {}", show(&w.loads));
            }
            if let Some(n) = r.nodes {
                let _ = writeln!(out, "  search budget exhausted after {n} nodes");
            }
        }
        if let Some(r) = &self.supermajorize {
            let _ = writeln!(out, "supermajorize: {}", r.status.shout());
            if let (Some(x), Some(a), Some(b)) = (&r.failing_threshold, &r.lhs_tail, &r.rhs_tail) {
                let _ = writeln!(out, "  fails at x = {}: tail sums {} > {}", x.0, a.0, b.0);
            }
        }
        if let Some(r) = &self.bulk {
            let _ = writeln!(out, "bulk: {} ({})", r.status.shout(), if r.exact { "exact" } else { "numeric" });
            if let Some(s) = &r.failure_exponent {
                let _ = writeln!(out, "  norm inequality fails at s = {s}");
            }
            let _ = writeln!(out, "  tight at s=1: {}, tight at s=inf: {}", r.tight_at_one, r.tight_at_infinity);
            for e in &r.equalities {
                let kind = if e.touch { "touch" } else { "crossing" };
                let _ = writeln!(out, "  equality at s = {:.12} ({kind})", e.s);
                if let Some(c) = &e.certificate {
                    let _ = writeln!(
                        out,
                        "    x = {}^s in [{}, {}] ~ [{:.12}, {:.12}], factor {} multiplicity {}, verified {}",
                        c.base,
                        c.lo,
                        c.hi,
                        ratio_f64(&c.lo),
                        ratio_f64(&c.hi),
                        show(&c.factor),
                        c.multiplicity,
                        c.verified
                    );
                }
            }
        }
        if let Some(r) = &self.stable {
            let _ = writeln!(out, "stable: {}", r.status.shout());
            if let Some(c) = &r.catalyst {
                let counts = c.counts.as_deref().map(show).unwrap_or_default();
                let _ = writeln!(out, "  catalyst counts {counts} over base {}", c.base.unwrap_or(0));
            }
            if let Some(nu) = &r.nu {
                let _ = writeln!(out, "  nu = {}", show(nu));
            }
            if let Some(w) = &r.embedding {
                let _ = writeln!(out, "  product embedding into {} bins, validated", w.loads.len());
            }
            if let Some(f) = &r.refutation {
                let _ = writeln!(out, "  refuted: {}", render_refutation(f));
            }
            if let Some(u) = &r.unknown_reason {
                let _ = writeln!(out, "  {u} after {} steps", r.steps);
            }
            if with_log && !r.construction_log.is_empty() {
                let _ = writeln!(out, "  pass step level demand room coefficient leftover");
                for s in &r.construction_log {
                    let _ = writeln!(
                        out,
                        "  {} {} {} {} {} {} {}",
                        s.pass, s.step, s.level, s.demand.0, s.room.0, s.coefficient.0, s.leftover.0
                    );
                }
            }
        }
        out
    }
}

fn render_refutation(r: &RefutationDoc) -> String {
    match r {
        RefutationDoc::BulkFails { exponent, .. } => format!("norm inequality fails at s = {exponent}"),
        RefutationDoc::NormEquality { certificate: c } => {
            format!("norms are equal at x = {}^s in [{}, {}]", c.base, c.lo, c.hi)
        }
        RefutationDoc::TopIndexRule { base, lambda_top, mu_top } => {
            format!("top level {lambda_top} of lhs is above top level {mu_top} of rhs (base {base})")
        }
        RefutationDoc::TightValuation { sum, lambda_gcd, mu_gcd, prime } => {
            let p = prime.as_ref().map(|p| format!(", prime {}", p.0)).unwrap_or_default();
            format!(
                "equal sums {} force exact packing but gcd {} does not divide gcd {}{p}",
                sum.0, lambda_gcd.0, mu_gcd.0
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use partition_orders::orders::{relations, Budgets};
    use partition_orders::Partition;

    fn big(v: &[u64]) -> BigPartition {
        Partition::from_u64s(v).unwrap()
    }

    fn full_report(l: &[u64], m: &[u64]) -> CheckReport {
        let (l, m) = (big(l), big(m));
        let r = relations(&l, &m, &Budgets::default()).unwrap();
        CheckReport {
            relation: "all".into(),
            lhs: PartitionDoc::from_partition(&l, None),
            rhs: PartitionDoc::from_partition(&m, None),
            embed: Some((&r.embeds).into()),
            supermajorize: Some(SupermajorizeReport::new(&r.supermajorized, &l, &m)),
            bulk: Some((&r.bulk).into()),
            stable: Some((&r.stable).into()),
        }
    }

    fn round_trip(r: &CheckReport) {
        let text = serde_json::to_string(r).unwrap();
        let back: CheckReport = serde_json::from_str(&text).unwrap();
        assert_eq!(&back, r, "{text}");
    }

    #[test]
    fn reports_round_trip() {
        let mut m1 = vec![4];
        m1.extend([1; 8]);
        let mut m3 = vec![16];
        m3.extend([2; 16]);
        m3.extend([1; 16]);
        let cases: Vec<(Vec<u64>, Vec<u64>)> = vec![
            (vec![2, 2, 2, 2], m1),
            (vec![8, 8, 8, 8, 4, 4, 4, 4], m3),
            (vec![4, 2, 2], vec![5, 3]),
            (vec![3, 2, 2], vec![4, 3]),
            (vec![6, 5], vec![4, 4, 3]),
            (vec![7], vec![7]),
        ];
        for (l, m) in cases {
            round_trip(&full_report(&l, &m));
        }
    }

    #[test]
    fn refutation_kinds_round_trip() {
        let docs = vec![
            RefutationDoc::BulkFails { exponent: ExponentDoc::Named("inf".into()), exact: true },
            RefutationDoc::BulkFails { exponent: ExponentDoc::Finite(1.25), exact: false },
            RefutationDoc::TopIndexRule { base: 3, lambda_top: 4, mu_top: 2 },
            RefutationDoc::TightValuation {
                sum: Num::from(8),
                lambda_gcd: Num::from(2),
                mu_gcd: Num::from(1),
                prime: Some(Num::from(2)),
            },
        ];
        for d in docs {
            let text = serde_json::to_string(&d).unwrap();
            assert_eq!(serde_json::from_str::<RefutationDoc>(&text).unwrap(), d);
        }
    }

    #[test]
    fn combined_status() {
        let r = full_report(&[4, 2, 2], &[5, 3]);
        assert_eq!(r.embed.as_ref().unwrap().status, Status::Fails);
        assert_eq!(r.supermajorize.as_ref().unwrap().status, Status::Holds);
        assert_eq!(r.status(), Status::Fails);
        let r = full_report(&[3, 2, 2], &[4, 3]);
        assert_eq!(r.status(), Status::Holds);
        assert!(r.render(false).contains("embed: HOLDS"));
    }

    #[test]
    fn bulk_equality_carries_certificate() {
        let mut m3 = vec![16];
        m3.extend([2; 16]);
        m3.extend([1; 16]);
        let r = full_report(&[8, 8, 8, 8, 4, 4, 4, 4], &m3);
        let bulk = r.bulk.unwrap();
        assert_eq!(bulk.status, Status::Holds);
        let c = bulk.equalities[0].certificate.as_ref().unwrap();
        assert!(c.verified);
        let (lo, hi) = (ratio_f64(&c.lo), ratio_f64(&c.hi));
        let golden = 1.0 + 5f64.sqrt();
        assert!(lo <= golden && golden <= hi, "[{lo}, {hi}]");
    }
}
