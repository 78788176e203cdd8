use std::collections::BTreeSet;

use serde::Serialize;

use super::partition::{DisjointSets, Partition};
use super::{require_primitive, require_units};
use crate::compress::{apply, CompressingMap};
use crate::error::{Error, Result};
use crate::galois::{GaloisCtx, OElem};
use crate::sequences::TraceTable;

/// `R^i_{alpha,beta} = {(s_alpha(t), s_beta(t)) mod p^i : t in Z}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairRelation {
    pub level: u32,
    pub modulus: u64,
    pub pairs: BTreeSet<(u64, u64)>,
    pub alpha: OElem,
    pub beta: OElem,
    /// Only times with `tr(delta alpha eta^t) != 0 mod p` were kept.
    pub delta_nonvanishing: bool,
}

impl PairRelation {
    /// Reduces into level `level` (which must not exceed `self.level`).
    pub fn project(&self, level: u32, p: u64) -> BTreeSet<(u64, u64)> {
        assert!(level <= self.level);
        let m = p.pow(level);
        self.pairs.iter().map(|&(a, b)| (a % m, b % m)).collect()
    }
}

pub fn relation(ctx: &GaloisCtx, alpha: &OElem, beta: &OElem, level: u32) -> Result<PairRelation> {
    relation_with(ctx, alpha, beta, level, false)
}

/// [`relation`], optionally restricted to times where
/// `tr(delta alpha eta^t) != 0 mod p`, `delta = (u - 1)/p`.
pub fn relation_with(
    ctx: &GaloisCtx,
    alpha: &OElem,
    beta: &OElem,
    level: u32,
    delta_nonvanishing: bool,
) -> Result<PairRelation> {
    require_primitive(ctx)?;
    require_units(ctx, &[alpha, beta])?;
    if level < 1 || level > ctx.e() {
        return Err(Error::Precondition(format!("level {level} outside [1, {}]", ctx.e())));
    }
    let ring = ctx.ring();
    let table = TraceTable::new(ctx);
    let sa = table.samples(ring, alpha);
    let sb = table.samples(ring, beta);
    let keep: Vec<bool> = if delta_nonvanishing {
        let delta = ctx.div_p(&ctx.sub(ctx.u(), &ctx.one()))?;
        let sd = table.samples(ring, &ctx.mul(&delta, alpha));
        sd.iter().map(|v| v % ctx.p() != 0).collect()
    } else {
        vec![true; sa.len()]
    };
    let modulus = ring.p_pow(level);
    let pairs = sa
        .iter()
        .zip(&sb)
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|((&a, &b), _)| (a % modulus, b % modulus))
        .collect();
    Ok(PairRelation {
        level,
        modulus,
        pairs,
        alpha: alpha.clone(),
        beta: beta.clone(),
        delta_nonvanishing,
    })
}

/// The smallest equivalence relation on `Z/p^i` containing the relation.
pub fn closure_partition(rel: &PairRelation) -> Partition {
    let mut dsu = DisjointSets::new(rel.modulus as usize);
    for &(a, b) in &rel.pairs {
        dsu.union(a as usize, b as usize);
    }
    dsu.into_partition()
}

/// Whether `Phi_psi(s_alpha) = Phi_psi(s_beta)`.
///
/// Decided by constancy of `psi` on the classes of the level-`e` closure,
/// and cross-checked against direct comparison of the compressed sequences.
pub fn compressed_equal(ctx: &GaloisCtx, map: &CompressingMap, alpha: &OElem, beta: &OElem) -> Result<bool> {
    if alpha == beta {
        return Err(Error::DegeneratePair);
    }
    if map.ring() != ctx.ring() {
        return Err(Error::RingMismatch {
            map: map.ring().modulus(),
            seq: ctx.ring().modulus(),
        });
    }
    let rel = relation(ctx, alpha, beta, ctx.e())?;
    let by_classes = closure_partition(&rel)
        .classes()
        .iter()
        .all(|c| map.is_constant_on(c));
    let sa = crate::sequences::trace_sequence(ctx, alpha)?;
    let sb = crate::sequences::trace_sequence(ctx, beta)?;
    let direct = apply(map, &sa)? == apply(map, &sb)?;
    assert_eq!(by_classes, direct, "closure-class test disagrees with direct comparison");
    Ok(direct)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingCtx;

    fn over_z27() -> GaloisCtx {
        GaloisCtx::new(RingCtx::new(3, 3).unwrap(), &[1, -1, -4]).unwrap()
    }

    fn over_z9() -> GaloisCtx {
        GaloisCtx::new(RingCtx::new(3, 2).unwrap(), &[1, 1, -1]).unwrap()
    }

    #[test]
    fn one_vs_eta_plus_5_partition() {
        let ctx = over_z9();
        let beta = ctx.elem(&[5, 1]).unwrap();
        let rel = relation(&ctx, &ctx.one(), &beta, 2).unwrap();
        assert!(rel.pairs.contains(&(2, 0)));
        assert!(rel.pairs.len() <= 24);
        let part = closure_partition(&rel);
        assert_eq!(part.classes(), &[vec![0, 1, 2, 3, 6, 7, 8], vec![4, 5]]);
    }

    #[test]
    fn equal_elements_give_diagonal_and_singletons() {
        let ctx = over_z9();
        let rel = relation(&ctx, &ctx.one(), &ctx.one(), 2).unwrap();
        assert!(rel.pairs.iter().all(|(a, b)| a == b));
        assert_eq!(closure_partition(&rel), Partition::singletons(9));
    }

    #[test]
    fn negation_pairs_values_with_their_negatives() {
        let ctx = over_z27();
        let alpha = ctx.elem(&[13, 3]).unwrap();
        let rel = relation(&ctx, &alpha, &ctx.neg(&alpha), 3).unwrap();
        let r = ctx.ring();
        let occurring = crate::sequences::trace_sequence(&ctx, &alpha).unwrap().value_set();
        for c in closure_partition(&rel).classes().iter().filter(|c| occurring.contains(&c[0])) {
            let mut expected = vec![c[0], r.neg(c[0])];
            expected.sort_unstable();
            expected.dedup();
            assert_eq!(c, &expected);
        }
    }

    #[test]
    fn levels_are_monotone() {
        let ctx = over_z27();
        let alpha = ctx.elem(&[13, 3]).unwrap();
        for beta in ctx.units().into_iter().step_by(37) {
            let rels: Vec<_> = (1..=3).map(|i| relation(&ctx, &alpha, &beta, i).unwrap()).collect();
            for i in 1..3 {
                assert!(rels[i].project(i as u32, 3).is_subset(&rels[i - 1].pairs));
            }
        }
    }

    #[test]
    fn delta_variant_is_a_subrelation() {
        let ctx = over_z9();
        let beta = ctx.elem(&[5, 1]).unwrap();
        let full = relation(&ctx, &ctx.one(), &beta, 2).unwrap();
        let restricted = relation_with(&ctx, &ctx.one(), &beta, 2, true).unwrap();
        assert!(restricted.pairs.is_subset(&full.pairs));
        assert!(!restricted.pairs.is_empty());
    }

    #[test]
    fn compressed_equal_examples() {
        let ctx = over_z27();
        let alpha = ctx.elem(&[13, 3]).unwrap();
        let neg = ctx.neg(&alpha);
        let psi = CompressingMap::parse(*ctx.ring(), "x2^2 + x2").unwrap();
        assert!(compressed_equal(&ctx, &psi, &alpha, &neg).unwrap());
        let id = CompressingMap::identity(*ctx.ring());
        assert!(!compressed_equal(&ctx, &id, &alpha, &neg).unwrap());
        let k = CompressingMap::constant(*ctx.ring(), 0);
        assert!(compressed_equal(&ctx, &k, &alpha, &neg).unwrap());
        assert!(matches!(compressed_equal(&ctx, &k, &alpha, &alpha), Err(Error::DegeneratePair)));
    }

    #[test]
    fn preconditions() {
        let ctx = over_z9();
        let non_unit = ctx.elem(&[3]).unwrap();
        assert!(matches!(relation(&ctx, &ctx.one(), &non_unit, 1), Err(Error::NotUnit)));
        assert!(relation(&ctx, &ctx.one(), &ctx.one(), 3).is_err());
        assert!(relation(&ctx, &ctx.one(), &ctx.one(), 0).is_err());
        let non_primitive = GaloisCtx::new(RingCtx::new(3, 2).unwrap(), &[1, 0, 1]).unwrap();
        assert!(matches!(relation(&non_primitive, &non_primitive.one(), &non_primitive.one(), 1), Err(Error::NotPrimitive)));
    }
}
