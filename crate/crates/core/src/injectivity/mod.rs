//! When does a compressing map keep distinct sequences of `G` distinct?
//!
//! - [`relation`]: the pair relations `R^i_{alpha,beta}`, their equivalence
//!   closures and the two-route equality test for compressed sequences.
//! - [`oracle`]: brute-force injectivity of `Phi_psi` on `G`.
//! - [`criterion`]: the root-orbit / top-coset criterion, failure
//!   classification and the map census.
//! - [`gamma`]: the decomposition of `gamma = beta / alpha` and partition
//!   prediction.

pub mod criterion;
pub mod gamma;
pub mod oracle;
mod partition;
pub mod relation;

pub use criterion::{
    census, classify_failure, criterion_injective, CensusReport, Criterion, CriterionReport, FailureReport,
    FailureStatement,
};
pub use gamma::{condition1_check, gamma_decompose, predict_partition, Condition1Report, GammaDecomposition, Prediction};
pub use oracle::{oracle_injective, EntropyOracle, OracleVerdict};
pub use partition::{DisjointSets, Partition};
pub use relation::{closure_partition, compressed_equal, relation, relation_with, PairRelation};

use crate::error::{Error, Result};
use crate::galois::{GaloisCtx, OElem};

fn require_primitive(ctx: &GaloisCtx) -> Result<()> {
    if ctx.is_primitive() {
        Ok(())
    } else {
        Err(Error::NotPrimitive)
    }
}

fn require_units(ctx: &GaloisCtx, elems: &[&OElem]) -> Result<()> {
    if elems.iter().all(|z| ctx.is_unit(z)) {
        Ok(())
    } else {
        Err(Error::NotUnit)
    }
}
