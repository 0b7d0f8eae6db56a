//! Catalyst construction over a corpus of tight pairs.
//!
//! A pair is scanned when both sides are powers of one base, the norms agree
//! at `s = 1` and `s = ∞`, and the right side's norm is strictly larger for
//! every `s` in between. Everything else is listed as excluded with the
//! reason.

use std::fmt::Write as _;

use partition_orders::orders::Budgets;
use partition_orders::{norms, stable, BigPartition};
use serde::{Deserialize, Serialize};

use crate::doc::{PairDoc, PartitionDoc};
use crate::report::Status;
use crate::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    pub name: String,
    pub base: u64,
    pub status: Status,
    pub steps: u64,
    /// Catalyst in count form, when one was found.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub catalyst: Option<PartitionDoc>,
    /// Refutation kind or reason for an unknown outcome.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Excluded {
    pub name: String,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanCounts {
    pub pairs: usize,
    pub excluded: usize,
    pub holds: usize,
    pub fails: usize,
    pub unknown: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
    pub excluded: Vec<Excluded>,
    pub counts: ScanCounts,
}

fn exclusion(l: &BigPartition, m: &BigPartition, base: u64, budgets: &Budgets) -> Option<String> {
    let (sl, sm) = (l.sum_big(), m.sum_big());
    if sl != sm {
        return Some(format!("not tight at s=1: {sl} vs {sm}"));
    }
    if l.max_entry() != m.max_entry() {
        return Some(format!("not tight at s=inf: max {} vs {}", l.max_entry(), m.max_entry()));
    }
    let bulk = norms::bulk_verdict(l, m, Some(base), budgets.tol, budgets.grid);
    if bulk.identical {
        return Some("identical after cancelling common entries".into());
    }
    if !bulk.holds {
        let at = bulk.failure_exponent.map(|e| e.as_f64()).unwrap_or(f64::NAN);
        return Some(format!("norm inequality fails at s={at}"));
    }
    if let Some(e) = bulk.interior_equalities.first() {
        return Some(format!("norms meet at interior s={:.9}", e.s));
    }
    None
}

pub fn scan(pairs: &[PairDoc], budgets: &Budgets) -> Result<ScanReport, CliError> {
    let mut report = ScanReport { rows: Vec::new(), excluded: Vec::new(), counts: ScanCounts::default() };
    for (k, pair) in pairs.iter().enumerate() {
        let name = pair.name.clone().unwrap_or_else(|| format!("pair-{}", k + 1));
        let (l, m) = (pair.lhs.partition()?, pair.rhs.partition()?);
        report.counts.pairs += 1;
        let forced = budgets.base.or(pair.lhs.base).or(pair.rhs.base);
        let pair_budgets = Budgets { base: forced, ..budgets.clone() };
        let Some(base) = pair_budgets.base_for(&l, &m) else {
            report.excluded.push(Excluded { name, reason: "not powers of a common base".into() });
            continue;
        };
        let pair_budgets = Budgets { base: Some(base), ..pair_budgets };
        if let Some(reason) = exclusion(&l, &m, base, &pair_budgets) {
            report.excluded.push(Excluded { name, reason });
            continue;
        }
        let v = stable::stable_embeds(&l, &m, &pair_budgets).map_err(|e| CliError::Internal(e.to_string()))?;
        let status = Status::from(v.status);
        match status {
            Status::Holds => report.counts.holds += 1,
            Status::Fails => report.counts.fails += 1,
            Status::Unknown => report.counts.unknown += 1,
        }
        let note = v
            .refutation
            .as_ref()
            .map(|r| r.tag().to_string())
            .or_else(|| v.unknown.map(|u| format!("{u:?}")));
        report.rows.push(ScanRow {
            name,
            base,
            status,
            steps: v.budget_spent,
            catalyst: v.catalyst.as_ref().map(|c| PartitionDoc::from_counts(c, None)),
            note,
        });
    }
    report.counts.excluded = report.excluded.len();
    Ok(report)
}

impl ScanReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<24} {:>4} {:<8} {:>6}  catalyst counts", "pair", "base", "status", "steps");
        for r in &self.rows {
            let counts = r
                .catalyst
                .as_ref()
                .and_then(|c| c.counts.as_ref())
                .map(|c| {
                    let v: Vec<String> = c.iter().map(|n| n.0.to_string()).collect();
                    format!("[{}]", v.join(","))
                })
                .unwrap_or_else(|| "-".into());
            let status = format!("{:?}", r.status).to_uppercase();
            let note = r.note.as_deref().map(|n| format!("  ({n})")).unwrap_or_default();
            let _ = writeln!(out, "{:<24} {:>4} {:<8} {:>6}  {counts}{note}", r.name, r.base, status, r.steps);
        }
        for e in &self.excluded {
            let _ = writeln!(out, "excluded {}: {}", e.name, e.reason);
        }
        let c = &self.counts;
        let _ = writeln!(
            out,
            "pairs {}, excluded {}, scanned {}: holds {}, fails {}, unknown {}",
            c.pairs,
            c.excluded,
            self.rows.len(),
            c.holds,
            c.fails,
            c.unknown
        );
        out
    }
}
