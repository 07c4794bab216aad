//! Exact computation over the countably infinite ground set ℕ = {1, 2, …}.
//!
//! Three element representations live here:
//!
//! * [`FinitaryPartition`] — identity outside a finite warp set; exact and
//!   total, the workhorse for concrete elements.
//! * [`LazyPartition`] — a pure block oracle with locally finite blocks;
//!   composition explores the product graph on demand, bounded by fuel, and
//!   either answers exactly or refuses (`HorizonExceeded`).  Never guesses.
//! * the structured canonical generating pair in [`factorize`], whose blocks
//!   are infinite and therefore described by part-membership functions
//!   instead of a finite-block oracle.
//!
//! Every "choose any bijection" step in the hosted constructions is resolved
//! by order-isomorphism (k-th smallest to k-th smallest), so all results are
//! deterministic and testable.

mod finitary;
mod lazy;
pub mod factorize;
pub mod moiety;
pub mod sierpinski;

pub use finitary::{compose_finitary, FinitaryPartition};
pub use lazy::{compose_lazy, compose_lazy_tagged, restrict_to_window, LazyPartition};

use thiserror::Error;

use crate::partition::PartitionError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InfiniteError {
    /// Bounded exploration ran out before the component closed.  The answer
    /// is refused rather than approximated.
    #[error("horizon exceeded: {explored} middle vertices explored with fuel {fuel}{}",
            factor.map(|f| format!(" (factor {f})")).unwrap_or_default())]
    HorizonExceeded { fuel: usize, explored: usize, factor: Option<usize> },
    #[error("point 0 is not a valid signed point")]
    ZeroPoint,
    #[error("point {0} overflows the representable ground set")]
    PointOverflow(i64),
    #[error("window {window} does not cover the warp point {point}")]
    WindowTooSmall { window: u32, point: u64 },
    #[error("query reached an unreachable residual class of the factorization")]
    ResidualClass,
    #[error(transparent)]
    Partition(#[from] PartitionError),
}
