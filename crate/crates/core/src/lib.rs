//! Embeddability orders on integral partitions.
//!
//! Four relations are decided here, each with a machine-checkable
//! certificate where one exists:
//!
//! * embedding `λ ↪ μ` (bin packing), with an explicit assignment;
//! * supermajorization `λ ⪯_S μ`, with a failing threshold;
//! * bulk embedding, via ℓ_s-norm dominance over `s ∈ [1, ∞]`;
//! * stable embedding `λ ×ν ↪ μ ×ν`, with the catalyst `ν` constructed
//!   explicitly for partitions whose entries are powers of one base.
//!
//! Partitions are generic over their entry type; see [`Entry`].

pub mod counterexamples;
pub mod error;
pub mod norms;
pub mod oracle;
pub mod orders;
pub mod partition;
pub mod scalar;
pub mod stable;

use num_bigint::BigUint;

pub use error::{Error, Result};
pub use norms::{BulkVerdict, Exponent, NormProfile};
pub use orders::{Budgets, EmbeddingWitness, RelationReport};
pub use partition::{Partition, PowerPartition};
pub use scalar::Entry;
pub use stable::{StableStatus, StableVerdict, StableWitness};

/// Arbitrary-precision partitions; the default for anything user-facing.
pub type BigPartition = Partition<BigUint>;
pub type Partition64 = Partition<u64>;
pub type Partition128 = Partition<u128>;
