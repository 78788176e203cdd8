use serde::Serialize;

use super::require_primitive;
use crate::compress::CompressingMap;
use crate::error::{Error, Result};
use crate::galois::{GaloisCtx, OElem};
use crate::primitivity::DEFAULT_BUDGET;
use crate::ring::Residue;
use crate::sequences::TraceTable;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleVerdict {
    pub injective: bool,
    /// First `(alpha, beta)`, `alpha` a coset representative, with equal
    /// compressed sequences.
    pub witness: Option<(OElem, OElem)>,
}

/// Precomputed sequences for deciding injectivity of `Phi_psi` on `G` by
/// enumeration.
///
/// Since `s_{alpha eta^t}` is a shift of `s_alpha` and compression commutes
/// with shifts, it suffices to let `alpha` range over representatives of
/// `O^x / <eta>` and `beta` over all units.
#[derive(Debug, Clone)]
pub struct EntropyOracle {
    ctx: GaloisCtx,
    units: Vec<OElem>,
    /// Positions in `units` of the coset representatives.
    reps: Vec<usize>,
    /// One period of `s_beta` per unit, concatenated.
    samples: Vec<Residue>,
    period: usize,
}

impl EntropyOracle {
    pub fn new(ctx: &GaloisCtx) -> Result<Self> {
        Self::with_budget(ctx, DEFAULT_BUDGET)
    }

    /// Fails if `#reps * #units` pair comparisons would exceed `budget`.
    pub fn with_budget(ctx: &GaloisCtx, budget: u64) -> Result<Self> {
        require_primitive(ctx)?;
        let unit_count = ctx.unit_count();
        let period = crate::sequences::period(ctx);
        let needed = (unit_count / period) as u128 * unit_count as u128;
        if needed > budget as u128 {
            return Err(Error::BudgetExceeded { needed, budget });
        }
        let units = ctx.units();
        let total = ctx.ring().modulus().pow(ctx.n() as u32) as usize;
        let mut position = vec![usize::MAX; total];
        for (i, z) in units.iter().enumerate() {
            position[ctx.elem_index(z) as usize] = i;
        }
        let mut seen = vec![false; units.len()];
        let mut reps = Vec::new();
        for i in 0..units.len() {
            if seen[i] {
                continue;
            }
            reps.push(i);
            let mut z = units[i].clone();
            loop {
                let j = position[ctx.elem_index(&z) as usize];
                if seen[j] {
                    break;
                }
                seen[j] = true;
                z = ctx.mul(&z, ctx.eta());
            }
        }
        let table = TraceTable::new(ctx);
        let samples = units.iter().flat_map(|z| table.samples(ctx.ring(), z)).collect();
        Ok(Self {
            ctx: ctx.clone(),
            units,
            reps,
            samples,
            period: period as usize,
        })
    }

    pub fn ctx(&self) -> &GaloisCtx {
        &self.ctx
    }

    pub fn representatives(&self) -> impl Iterator<Item = &OElem> {
        self.reps.iter().map(|&i| &self.units[i])
    }

    pub fn check(&self, map: &CompressingMap) -> Result<OracleVerdict> {
        if map.ring() != self.ctx.ring() {
            return Err(Error::RingMismatch {
                map: map.ring().modulus(),
                seq: self.ctx.ring().modulus(),
            });
        }
        Ok(self.check_table(map.table()))
    }

    /// [`EntropyOracle::check`] on a raw table (assumed to be over `R`).
    pub fn check_table(&self, table: &[u32]) -> OracleVerdict {
        let n = self.period;
        let compressed: Vec<u32> = self.samples.iter().map(|&v| table[v as usize]).collect();
        let row = |i: usize| &compressed[i * n..(i + 1) * n];
        for &a in &self.reps {
            let ra = row(a);
            if let Some(b) = (0..self.units.len()).find(|&b| b != a && row(b) == ra) {
                return OracleVerdict {
                    injective: false,
                    witness: Some((self.units[a].clone(), self.units[b].clone())),
                };
            }
        }
        OracleVerdict {
            injective: true,
            witness: None,
        }
    }
}

pub fn oracle_injective(ctx: &GaloisCtx, map: &CompressingMap) -> Result<OracleVerdict> {
    EntropyOracle::new(ctx)?.check(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::injectivity::compressed_equal;
    use crate::ring::RingCtx;

    fn over_z27() -> GaloisCtx {
        GaloisCtx::new(RingCtx::new(3, 3).unwrap(), &[1, -1, -4]).unwrap()
    }

    #[test]
    fn representative_count() {
        let ctx = over_z27();
        let o = EntropyOracle::new(&ctx).unwrap();
        // |O^x| / period = 648 / 72 = p^((n-1)(e-1)).
        assert_eq!(o.representatives().count(), 9);
    }

    #[test]
    fn trivial_maps() {
        let ctx = over_z27();
        let o = EntropyOracle::new(&ctx).unwrap();
        assert!(o.check(&CompressingMap::identity(*ctx.ring())).unwrap().injective);
        let v = o.check(&CompressingMap::constant(*ctx.ring(), 0)).unwrap();
        assert!(!v.injective);
        let (a, b) = v.witness.unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn top_digit_map_is_not_injective() {
        let ctx = over_z27();
        let psi = CompressingMap::parse(*ctx.ring(), "x2^2 + x2").unwrap();
        let v = oracle_injective(&ctx, &psi).unwrap();
        assert!(!v.injective);
        let (a, b) = v.witness.unwrap();
        assert!(compressed_equal(&ctx, &psi, &a, &b).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let ctx = over_z27();
        assert!(matches!(
            EntropyOracle::with_budget(&ctx, 10),
            Err(Error::BudgetExceeded { needed: 5832, budget: 10 })
        ));
    }
}
