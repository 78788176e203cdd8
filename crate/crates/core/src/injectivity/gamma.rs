use serde::Serialize;

use super::partition::{DisjointSets, Partition};
use super::require_units;
use crate::error::Result;
use crate::galois::{FqElem, GaloisCtx, OElem};
use crate::ring::Residue;

/// `gamma = beta / alpha = gamma_0 (1 + gamma_ell p^ell)` with `gamma_0` in
/// `R`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaDecomposition {
    pub gamma: OElem,
    /// Whether `gamma mod p` lies in `F_p`.
    pub rational: bool,
    /// Largest `i <= e` with `gamma` congruent to an element of `R` mod
    /// `p^i O`; absent when `gamma` is irrational.
    pub ell: Option<u32>,
    /// Smallest nonnegative such element, reduced mod `p^ell`.
    pub gamma0: Option<Residue>,
    /// `gamma_ell mod p`, defined when `ell < e`; never in `F_p`.
    pub gamma_ell_bar: Option<FqElem>,
}

fn valuation(c: u64, p: u64, cap: u32) -> u32 {
    if c == 0 {
        return cap;
    }
    let mut v = 0;
    let mut c = c;
    while c.is_multiple_of(p) {
        c /= p;
        v += 1;
    }
    v.min(cap)
}

pub fn gamma_decompose(ctx: &GaloisCtx, alpha: &OElem, beta: &OElem) -> Result<GammaDecomposition> {
    require_units(ctx, &[alpha, beta])?;
    let gamma = ctx.mul(beta, &ctx.inv(alpha)?);
    let p = ctx.p();
    let e = ctx.e();
    let ell = gamma.coeffs()[1..]
        .iter()
        .map(|&c| valuation(c, p, e))
        .min()
        .unwrap_or(e);
    if ell == 0 {
        return Ok(GammaDecomposition {
            gamma,
            rational: false,
            ell: None,
            gamma0: None,
            gamma_ell_bar: None,
        });
    }
    let ring = ctx.ring();
    let gamma0 = gamma.coeffs()[0] % ring.p_pow(ell);
    let gamma_ell_bar = if ell < e {
        let ratio = ctx.mul(&gamma, &ctx.from_residue(ring.inv(gamma0).expect("gamma0 is a unit")));
        let mut w = ctx.sub(&ratio, &ctx.one());
        for _ in 0..ell {
            w = ctx.div_p(&w)?;
        }
        Some(ctx.reduce_mod_p(&w))
    } else {
        None
    };
    Ok(GammaDecomposition {
        gamma,
        rational: true,
        ell: Some(ell),
        gamma0: Some(gamma0),
        gamma_ell_bar,
    })
}

/// The four clauses of the condition under which an irrational `gamma` can
/// still give equal compressed sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Condition1Report {
    /// `delta_bar` not in `F_p`.
    pub delta_irrational: bool,
    /// `delta_bar^2` in `F_p^x`.
    pub delta_sq_in_prime_units: bool,
    /// `beta_bar / alpha_bar` not in `F_p`.
    pub gamma_irrational: bool,
    /// `delta_bar alpha_bar / beta_bar` in `F_p^x`.
    pub ratio_in_prime_units: bool,
    pub holds: bool,
}

pub fn condition1_check(ctx: &GaloisCtx, alpha: &OElem, beta: &OElem) -> Result<Condition1Report> {
    require_units(ctx, &[alpha, beta])?;
    let delta = ctx.delta_bar();
    let in_units = |z: &FqElem| z.in_prime_field() && !z.is_zero();
    let delta_irrational = !delta.in_prime_field();
    let delta_sq_in_prime_units = in_units(&ctx.fq_mul(delta, delta));
    let a = ctx.reduce_mod_p(alpha);
    let b = ctx.reduce_mod_p(beta);
    let gamma_bar = ctx.fq_mul(&b, &ctx.fq_inv(&a)?);
    let gamma_irrational = !gamma_bar.in_prime_field();
    let ratio_in_prime_units = in_units(&ctx.fq_mul(delta, &ctx.fq_inv(&gamma_bar)?));
    Ok(Condition1Report {
        delta_irrational,
        delta_sq_in_prime_units,
        gamma_irrational,
        ratio_in_prime_units,
        holds: delta_irrational && delta_sq_in_prime_units && gamma_irrational && ratio_in_prime_units,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "partition", rename_all = "snake_case")]
pub enum Prediction {
    Predicted(Partition),
    NoPrediction,
}

/// Predicted closure partition at level `e` for a strongly primitive `f`.
///
/// Rational `gamma`: classes `{a gamma_0^i} + p^ell R`. Irrational `gamma`
/// with the condition false: the single class `R`. Otherwise no prediction.
pub fn predict_partition(ctx: &GaloisCtx, alpha: &OElem, beta: &OElem) -> Result<Prediction> {
    if !ctx.is_strongly_primitive() {
        return Ok(Prediction::NoPrediction);
    }
    let dec = gamma_decompose(ctx, alpha, beta)?;
    let ring = ctx.ring();
    let n = ring.modulus();
    if let (Some(ell), Some(g0)) = (dec.ell, dec.gamma0) {
        let step = ring.p_pow(ell);
        let mut dsu = DisjointSets::new(n as usize);
        for a in 0..n {
            dsu.union(a as usize, ring.mul(a, g0) as usize);
            dsu.union(a as usize, ((a + step) % n) as usize);
        }
        return Ok(Prediction::Predicted(dsu.into_partition()));
    }
    if condition1_check(ctx, alpha, beta)?.holds {
        return Ok(Prediction::NoPrediction);
    }
    Ok(Prediction::Predicted(Partition::from_classes(vec![(0..n).collect()])))
}
