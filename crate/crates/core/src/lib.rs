//! Exact arithmetic for linear recurring sequences over `Z/p^e Z` and the
//! compressing maps applied to them.
//!
//! The crate is organized bottom-up:
//!
//! - [`ring`]: the residue ring `R = Z/p^e Z`, digits, units, roots of unity.
//! - [`galois`]: the Galois ring `O = R[x]/(f)`, its residue field, the
//!   trace, and the decomposition `eta = zeta * u`.
//! - [`primitivity`]: primitive / strongly primitive classification,
//!   polynomial search and exhaustive counting.
//! - [`sequences`]: trace-parameterized and LFSR-generated sequences.
//! - [`compress`]: compressing maps on `R`, coordinate polynomials and the
//!   entropy-preserving families.
//! - [`injectivity`]: pair relations, equivalence closures, the brute-force
//!   oracle, the root/coset criterion, failure classification, partition
//!   prediction and the map census.

pub mod arith;
pub mod compress;
pub mod error;
pub mod galois;
pub mod injectivity;
mod polyfp;
pub mod primitivity;
pub mod ring;
pub mod sequences;

pub use compress::{CompressingMap, CoordPoly, Provenance};
pub use error::{Error, Result};
pub use galois::{FqElem, GaloisCtx, OElem};
pub use injectivity::{Partition, PairRelation};
pub use primitivity::{PrimitivityReport, SearchConstraint};
pub use ring::{Residue, RingCtx};
pub use sequences::{Alphabet, PeriodicSequence};
