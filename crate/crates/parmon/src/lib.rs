//! parmon — an exact computation engine for partition monoids.
//!
//! The finite engine ([`partition`]) represents partitions of
//! `{1..n} ∪ {1'..n'}` in canonical block-list form and implements the
//! diagram product, the `*` involution and the full set of structural
//! parameters.  On top of it, [`generation`] runs exhaustive enumeration,
//! breadth-first closure, and relative-rank searches in `P_n`; and
//! [`cardinal`] + [`classifier`] provide the symbolic layer that decides
//! when a pair of partitions generates `P_X` over an infinite ground set
//! together with the symmetric group or the idempotents.  [`infinite`]
//! computes exactly over ℕ: finitary partitions, lazy block oracles with
//! fuel-bounded composition, the factorization of a finitary partition
//! through the canonical generating pair, and the two-generator embedding
//! of a finite family of targets with its `2n+6` word identity.
//!
//! [`oracle`] holds independent reference implementations (graph-walk
//! composition, Bell triangle) used to cross-check the engine.

pub mod cardinal;
pub mod classifier;
pub mod generation;
pub mod infinite;
pub mod oracle;
pub mod partition;

pub use cardinal::Cardinal;
pub use partition::{GroundEquivalence, Partition};
