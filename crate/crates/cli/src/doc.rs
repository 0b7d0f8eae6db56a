//! Partition documents: JSON input and output forms.

use std::fmt;
use std::path::Path;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive};
use partition_orders::{BigPartition, Partition, PowerPartition};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::CliError;

/// Integer that prints as a JSON number when it fits in `u64` and as a
/// decimal string otherwise. Accepts either form, signed, on input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Num(pub BigInt);

impl From<&BigUint> for Num {
    fn from(v: &BigUint) -> Self {
        Num(BigInt::from(v.clone()))
    }
}

impl From<u64> for Num {
    fn from(v: u64) -> Self {
        Num(BigInt::from(v))
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match (self.0.to_u64(), self.0.to_i64()) {
            (Some(v), _) => s.serialize_u64(v),
            (None, Some(v)) => s.serialize_i64(v),
            _ => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Num;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a decimal string")
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Num, E> {
                Ok(Num(BigInt::from(v)))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Num, E> {
                Ok(Num(BigInt::from(v)))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Num, E> {
                Err(E::custom(format!("{v} is not an integer")))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Num, E> {
                v.trim().parse::<BigInt>().map(Num).map_err(|_| E::custom(format!("{v:?} is not an integer")))
            }
        }
        d.deserialize_any(V)
    }
}

/// `{"entries": [...]}` or `{"base": q, "counts": [...]}`, optionally named.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<Num>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<Vec<Num>>,
}

/// A pair line of a corpus file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub lhs: PartitionDoc,
    pub rhs: PartitionDoc,
}

fn nonnegative(v: &[Num], what: &str) -> Result<Vec<BigUint>, CliError> {
    v.iter()
        .map(|n| {
            n.0.to_biguint()
                .filter(|_| !n.0.is_negative())
                .ok_or_else(|| CliError::Data(format!("{what} must not be negative, got {}", n.0)))
        })
        .collect()
}

impl PartitionDoc {
    pub fn from_partition(p: &BigPartition, name: Option<String>) -> Self {
        PartitionDoc {
            name,
            entries: Some(p.entries().iter().map(Num::from).collect()),
            base: None,
            counts: None,
        }
    }

    pub fn from_counts(p: &PowerPartition, name: Option<String>) -> Self {
        PartitionDoc {
            name,
            entries: None,
            base: Some(p.base()),
            counts: Some(p.counts().iter().map(Num::from).collect()),
        }
    }

    /// Count vector, when the document is in count form.
    pub fn power_partition(&self) -> Result<Option<PowerPartition>, CliError> {
        match (&self.base, &self.counts) {
            (Some(q), Some(c)) => PowerPartition::new(*q, nonnegative(c, "counts")?)
                .map(Some)
                .map_err(|e| CliError::Data(e.to_string())),
            _ => Ok(None),
        }
    }

    pub fn partition(&self) -> Result<BigPartition, CliError> {
        match (&self.entries, &self.base, &self.counts) {
            (Some(e), None, None) => {
                for n in e {
                    if !n.0.is_positive() {
                        return Err(CliError::Data(format!("entries must be positive, got {}", n.0)));
                    }
                }
                Partition::from_entries(nonnegative(e, "entries")?).map_err(|e| CliError::Data(e.to_string()))
            }
            (None, Some(_), Some(_)) => self
                .power_partition()?
                .unwrap()
                .to_partition()
                .map_err(|e| CliError::Data(e.to_string())),
            _ => Err(CliError::Data(
                "a partition document needs either \"entries\" or both \"base\" and \"counts\"".into(),
            )),
        }
    }

    pub fn label(&self) -> String {
        match (&self.name, self.partition()) {
            (Some(n), _) => n.clone(),
            (None, Ok(p)) => p.to_string(),
            (None, Err(_)) => "?".into(),
        }
    }
}

/// Parses a document from JSON text: a bare entry array or an object.
pub fn parse_doc(text: &str) -> Result<PartitionDoc, CliError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CliError::Data(format!("not valid JSON: {e}")))?;
    if value.is_array() {
        let entries: Vec<Num> =
            serde_json::from_value(value).map_err(|e| CliError::Data(format!("bad entry list: {e}")))?;
        return Ok(PartitionDoc { name: None, entries: Some(entries), base: None, counts: None });
    }
    serde_json::from_value(value).map_err(|e| CliError::Data(format!("bad partition document: {e}")))
}

/// Inline JSON when the argument looks like JSON, otherwise a file path.
pub fn load_doc(arg: &str) -> Result<PartitionDoc, CliError> {
    let t = arg.trim_start();
    if t.starts_with('[') || t.starts_with('{') {
        return parse_doc(arg);
    }
    let path = Path::new(arg);
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut doc = parse_doc(&text)?;
    if doc.name.is_none() {
        doc.name = path.file_stem().map(|s| s.to_string_lossy().into_owned());
    }
    Ok(doc)
}

/// Reads a newline-delimited corpus of pair documents. Blank lines are
/// skipped.
pub fn load_corpus(path: &str) -> Result<Vec<PairDoc>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(k, l)| {
            serde_json::from_str(l).map_err(|e| CliError::Data(format!("{path}:{}: {e}", k + 1)))
        })
        .collect()
}
