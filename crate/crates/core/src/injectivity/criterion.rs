use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::oracle::{EntropyOracle, OracleVerdict};
use super::require_primitive;
use crate::arith;
use crate::compress::CompressingMap;
use crate::error::{Error, Result};
use crate::galois::GaloisCtx;
use crate::ring::{Residue, RingCtx};

/// Orbits `{a w^i}` and cosets `a + p^(e-1) R` of `R`, the sets whose
/// constancy decides injectivity.
#[derive(Debug, Clone)]
struct RingSets {
    ring: RingCtx,
    /// `(w, distinct orbits {a w^i} over all a in R)` for each root of unity
    /// `w != 1` of prime order dividing `p - 1`.
    root_orbits: Vec<(Residue, Vec<Vec<Residue>>)>,
    unit_cosets: Vec<Vec<Residue>>,
    nonunit_cosets: Vec<Vec<Residue>>,
}

impl RingSets {
    fn new(ring: RingCtx) -> Self {
        let mut root_orbits = Vec::new();
        for m in arith::prime_divisors(ring.p() - 1) {
            for w in ring.roots_of_unity(m).expect("m divides p - 1") {
                if w == 1 {
                    continue;
                }
                let orbits: BTreeSet<Vec<Residue>> = (0..ring.modulus()).map(|a| ring.orbit(a, w)).collect();
                root_orbits.push((w, orbits.into_iter().collect()));
            }
        }
        let step = ring.p_pow(ring.e() - 1);
        let (unit_cosets, nonunit_cosets) = (0..step)
            .map(|a| ring.top_coset(a))
            .partition(|c| ring.is_unit(c[0]));
        Self {
            ring,
            root_orbits,
            unit_cosets,
            nonunit_cosets,
        }
    }

    fn constant(table: &[u32], set: &[Residue]) -> bool {
        set.windows(2).all(|w| table[w[0] as usize] == table[w[1] as usize])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub injective: bool,
    /// Every nontrivial root `w` of prime order has some `a` with `psi`
    /// not constant on `{a w^i}`.
    pub root_condition: bool,
    /// Some unit `a` has `psi` not constant on `a + p^(e-1) R`.
    pub coset_condition: bool,
    /// Roots `w` for which the root condition fails.
    pub failing_roots: Vec<Residue>,
}

/// The root-orbit / top-coset test, valid when `f` is primitive with
/// `delta_bar^2` outside `F_p`.
#[derive(Debug, Clone)]
pub struct Criterion {
    sets: RingSets,
}

impl Criterion {
    pub fn new(ctx: &GaloisCtx) -> Result<Self> {
        require_primitive(ctx)?;
        if ctx.delta_sq_in_prime_field() {
            return Err(Error::DeltaSquareInPrimeField);
        }
        Ok(Self::for_ring(*ctx.ring()))
    }

    /// The same conditions with no check on `f`. Outside the primitive,
    /// `delta_bar^2` outside `F_p` case the verdict is not established.
    pub fn for_ring(ring: RingCtx) -> Self {
        Self {
            sets: RingSets::new(ring),
        }
    }

    pub fn check(&self, map: &CompressingMap) -> Result<CriterionReport> {
        if map.ring() != &self.sets.ring {
            return Err(Error::RingMismatch {
                map: map.ring().modulus(),
                seq: self.sets.ring.modulus(),
            });
        }
        Ok(self.check_table(map.table()))
    }

    pub fn check_table(&self, table: &[u32]) -> CriterionReport {
        let failing_roots: Vec<Residue> = self
            .sets
            .root_orbits
            .iter()
            .filter(|(_, orbits)| orbits.iter().all(|o| RingSets::constant(table, o)))
            .map(|(w, _)| *w)
            .collect();
        let root_condition = failing_roots.is_empty();
        let coset_condition = self.sets.unit_cosets.iter().any(|c| !RingSets::constant(table, c));
        CriterionReport {
            injective: root_condition && coset_condition,
            root_condition,
            coset_condition,
            failing_roots,
        }
    }

    /// Fast path for the census: no allocation.
    fn injective(&self, table: &[u32]) -> bool {
        self.sets
            .root_orbits
            .iter()
            .all(|(_, orbits)| orbits.iter().any(|o| !RingSets::constant(table, o)))
            && self.sets.unit_cosets.iter().any(|c| !RingSets::constant(table, c))
    }
}

pub fn criterion_injective(ctx: &GaloisCtx, map: &CompressingMap) -> Result<CriterionReport> {
    Criterion::new(ctx)?.check(map)
}

/// The three ways a non-injective map can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FailureStatement {
    /// Constant on `{a w^i}` for every `a` (every unit `a` unless `f` is
    /// strongly primitive), for some root `w != 1` of prime order.
    #[serde(rename = "I")]
    RootOrbits,
    /// Constant on `a + p^(e-1) R` for every unit `a`.
    #[serde(rename = "II")]
    UnitCosets,
    /// Constant on `a + p^(e-1) R` for every `a` in `pR`.
    #[serde(rename = "III")]
    NonUnitCosets,
}

impl FailureStatement {
    pub fn roman(&self) -> &'static str {
        match self {
            Self::RootOrbits => "I",
            Self::UnitCosets => "II",
            Self::NonUnitCosets => "III",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FailureReport {
    pub statements: BTreeSet<FailureStatement>,
    /// Roots witnessing statement I.
    pub roots: Vec<Residue>,
    pub witness: OracleVerdict,
}

/// Which failure statements hold for a map the oracle finds non-injective.
pub fn classify_failure(oracle: &EntropyOracle, map: &CompressingMap) -> Result<FailureReport> {
    let witness = oracle.check(map)?;
    if witness.injective {
        return Err(Error::MapIsInjective);
    }
    let ctx = oracle.ctx();
    let sets = RingSets::new(*ctx.ring());
    let table = map.table();
    let all_of_r = ctx.is_strongly_primitive();
    let roots: Vec<Residue> = sets
        .root_orbits
        .iter()
        .filter(|(_, orbits)| {
            orbits
                .iter()
                .filter(|o| all_of_r || ctx.ring().is_unit(o[0]))
                .all(|o| RingSets::constant(table, o))
        })
        .map(|(w, _)| *w)
        .collect();
    let mut statements = BTreeSet::new();
    if !roots.is_empty() {
        statements.insert(FailureStatement::RootOrbits);
    }
    if sets.unit_cosets.iter().all(|c| RingSets::constant(table, c)) {
        statements.insert(FailureStatement::UnitCosets);
    }
    if sets.nonunit_cosets.iter().all(|c| RingSets::constant(table, c)) {
        statements.insert(FailureStatement::NonUnitCosets);
    }
    Ok(FailureReport {
        statements,
        roots,
        witness,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub total: u64,
    pub ep: u64,
    pub proportion: f64,
    pub bound: f64,
}

impl CensusReport {
    pub fn exceeds_bound(&self) -> bool {
        self.proportion > self.bound
    }
}

/// `1 - k^(-(p-1)^2 p^(e-2)) - k^((1-p^e)/2) log2 p`.
pub fn census_bound(p: u64, e: u32, k: u64) -> f64 {
    let k = k as f64;
    let pf = p as f64;
    let first = ((p - 1) * (p - 1) * p.pow(e - 2)) as f64;
    let second = (1.0 - pf.powi(e as i32)) / 2.0;
    1.0 - k.powf(-first) - k.powf(second) * pf.log2()
}

/// Map number `idx` from `R` to `{0, ..., k-1}`: label of `a` is digit `a`
/// of `idx` in base `k`.
pub fn map_table_from_index(ring: &RingCtx, k: u32, mut idx: u64) -> Vec<u32> {
    (0..ring.modulus())
        .map(|_| {
            let d = (idx % k as u64) as u32;
            idx /= k as u64;
            d
        })
        .collect()
}

/// Counts entropy-preserving maps `R -> {0, ..., k-1}` with the criterion.
pub fn census(ctx: &GaloisCtx, k: u32, budget: u64) -> Result<CensusReport> {
    if k < 2 {
        return Err(Error::Precondition(format!(
            "alphabet size {k}: constant maps are never entropy-preserving"
        )));
    }
    let criterion = Criterion::new(ctx)?;
    let ring = *ctx.ring();
    let total = (k as u128).checked_pow(ring.modulus() as u32).unwrap_or(u128::MAX);
    if total > budget as u128 {
        return Err(Error::BudgetExceeded { needed: total, budget });
    }
    let total = total as u64;
    let ep = (0..total)
        .into_par_iter()
        .filter(|&idx| criterion.injective(&map_table_from_index(&ring, k, idx)))
        .count() as u64;
    Ok(CensusReport {
        total,
        ep,
        proportion: ep as f64 / total as f64,
        bound: census_bound(ring.p(), ring.e(), k as u64),
    })
}
