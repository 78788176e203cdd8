//! Primitivity classification of monic polynomials over `Z/p^e Z`,
//! lexicographic search, and exhaustive counting of the three classes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::galois::GaloisCtx;
use crate::ring::RingCtx;

/// Default cap on the number of polynomials an enumeration may analyze.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimitivityReport {
    pub reducible_mod_p: bool,
    pub zeta_order: u64,
    /// Coefficients of `delta_bar`, lowest power first; empty when reducible.
    pub delta_bar: Vec<u64>,
    /// Multiplicative order of `eta`; the period of every sequence in `G`.
    pub eta_order: u64,
    pub is_primitive: bool,
    pub is_strongly_primitive: bool,
    pub delta_sq_in_prime_field: bool,
}

impl PrimitivityReport {
    fn reducible() -> Self {
        Self {
            reducible_mod_p: true,
            zeta_order: 0,
            delta_bar: Vec::new(),
            eta_order: 0,
            is_primitive: false,
            is_strongly_primitive: false,
            delta_sq_in_prime_field: false,
        }
    }

    /// Primitive with `delta_bar^2` outside `F_p`.
    pub fn delta_sq_outside(&self) -> bool {
        self.is_primitive && !self.delta_sq_in_prime_field
    }
}

pub fn analyze(ctx: &GaloisCtx) -> PrimitivityReport {
    let eta_order = ctx.order(ctx.eta()).expect("eta is a unit");
    let report = PrimitivityReport {
        reducible_mod_p: false,
        zeta_order: ctx.zeta_order(),
        delta_bar: ctx.delta_bar().coeffs().to_vec(),
        eta_order,
        is_primitive: ctx.is_primitive(),
        is_strongly_primitive: ctx.is_strongly_primitive(),
        delta_sq_in_prime_field: ctx.delta_sq_in_prime_field(),
    };
    let full_period = ctx.ring().p_pow(ctx.e() - 1) * (ctx.q() - 1);
    assert_eq!(
        report.is_primitive,
        eta_order == full_period,
        "order of eta disagrees with the zeta/delta characterization for f = {}",
        ctx.f_spec()
    );
    report
}

/// Like [`analyze`], but accepts polynomials that are reducible mod `p`.
pub fn analyze_poly(ring: RingCtx, f_low_first: Vec<u64>) -> Result<PrimitivityReport> {
    match GaloisCtx::from_monic(ring, f_low_first) {
        Ok(ctx) => Ok(analyze(&ctx)),
        Err(Error::ReducibleModP) => Ok(PrimitivityReport::reducible()),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub primitive: u64,
    pub strongly_primitive: u64,
    pub delta_sq_outside: u64,
}

/// Closed forms for the number of degree-`n` primitive, strongly primitive,
/// and `delta_bar^2 ∉ F_p` polynomials.
pub fn class_count_formulas(p: u64, e: u32, n: u32) -> ClassCounts {
    let q = p.pow(n);
    let lead = q.pow(e - 2) * arith::euler_phi(q - 1);
    let even_correction = if n.is_multiple_of(2) { p - 1 } else { 0 };
    ClassCounts {
        primitive: lead * (q - 1) / n as u64,
        strongly_primitive: lead * (q - p) / n as u64,
        delta_sq_outside: lead * (q - p - even_correction) / n as u64,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub p: u64,
    pub e: u32,
    pub n: u32,
    pub polynomials: u64,
    pub enumerated: ClassCounts,
    pub formula: ClassCounts,
}

impl CountReport {
    pub fn matches(&self) -> bool {
        self.enumerated == self.formula
    }
}

fn poly_count(ring: &RingCtx, n: u32, budget: u64) -> Result<u64> {
    let total = (ring.modulus() as u128).pow(n);
    if total > budget as u128 {
        return Err(Error::BudgetExceeded {
            needed: total,
            budget,
        });
    }
    Ok(total as u64)
}

/// Monic degree-`n` polynomial number `idx`, lowest power first. The
/// enumeration is lexicographic in `(c_{n-1}, ..., c_0)`.
fn poly_from_index(ring: &RingCtx, n: u32, mut idx: u64) -> Vec<u64> {
    let m = ring.modulus();
    let mut f: Vec<u64> = (0..n)
        .map(|_| {
            let c = idx % m;
            idx /= m;
            c
        })
        .collect();
    f.push(1);
    f
}

/// Analyzes every monic polynomial of degree `n` over `Z/p^e Z`.
pub fn enumerate_counts(p: u64, e: u32, n: u32, budget: u64) -> Result<CountReport> {
    let ring = RingCtx::new(p, e)?;
    if n < 2 {
        return Err(Error::DegreeTooSmall(n as usize));
    }
    let total = poly_count(&ring, n, budget)?;
    let enumerated = (0..total)
        .into_par_iter()
        .map(|idx| {
            let r = analyze_poly(ring, poly_from_index(&ring, n, idx)).expect("monic, degree >= 2");
            ClassCounts {
                primitive: r.is_primitive as u64,
                strongly_primitive: r.is_strongly_primitive as u64,
                delta_sq_outside: r.delta_sq_outside() as u64,
            }
        })
        .reduce(
            || ClassCounts {
                primitive: 0,
                strongly_primitive: 0,
                delta_sq_outside: 0,
            },
            |a, b| ClassCounts {
                primitive: a.primitive + b.primitive,
                strongly_primitive: a.strongly_primitive + b.strongly_primitive,
                delta_sq_outside: a.delta_sq_outside + b.delta_sq_outside,
            },
        );
    Ok(CountReport {
        p,
        e,
        n,
        polynomials: total,
        enumerated,
        formula: class_count_formulas(p, e, n),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchConstraint {
    Primitive,
    StronglyPrimitive,
    DeltaSqOutside,
}

impl SearchConstraint {
    pub fn accepts(&self, r: &PrimitivityReport) -> bool {
        match self {
            Self::Primitive => r.is_primitive,
            Self::StronglyPrimitive => r.is_strongly_primitive,
            Self::DeltaSqOutside => r.delta_sq_outside(),
        }
    }
}

impl std::str::FromStr for SearchConstraint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "primitive" => Ok(Self::Primitive),
            "strongly_primitive" | "strongly-primitive" => Ok(Self::StronglyPrimitive),
            "delta_sq_outside" | "delta-sq-outside" => Ok(Self::DeltaSqOutside),
            _ => Err(Error::Parse(format!("unknown constraint `{s}`"))),
        }
    }
}

/// Every qualifying polynomial, in enumeration order.
pub fn all_matching(p: u64, e: u32, n: u32, constraint: SearchConstraint, budget: u64) -> Result<Vec<GaloisCtx>> {
    let ring = RingCtx::new(p, e)?;
    let total = poly_count(&ring, n, budget)?;
    Ok((0..total)
        .filter_map(|idx| GaloisCtx::from_monic(ring, poly_from_index(&ring, n, idx)).ok())
        .filter(|ctx| constraint.accepts(&analyze(ctx)))
        .collect())
}

/// The lexicographically first polynomial meeting `constraint`.
pub fn search(p: u64, e: u32, n: u32, constraint: SearchConstraint, budget: u64) -> Result<GaloisCtx> {
    let ring = RingCtx::new(p, e)?;
    let total = (ring.modulus() as u128).pow(n);
    let limit = total.min(budget as u128) as u64;
    for idx in 0..limit {
        if let Ok(ctx) = GaloisCtx::from_monic(ring, poly_from_index(&ring, n, idx)) {
            if constraint.accepts(&analyze(&ctx)) {
                return Ok(ctx);
            }
        }
    }
    if total > budget as u128 {
        Err(Error::BudgetExceeded {
            needed: total,
            budget,
        })
    } else {
        Err(Error::NotFound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64, e: u32, f: &[i64]) -> GaloisCtx {
        GaloisCtx::new(RingCtx::new(p, e).unwrap(), f).unwrap()
    }

    #[test]
    fn example_reports() {
        let r = analyze(&ctx(3, 3, &[1, -1, -4]));
        assert!(r.is_primitive && !r.is_strongly_primitive);
        assert_eq!(r.eta_order, 72);

        let r = analyze(&ctx(3, 2, &[1, 1, -1]));
        assert!(r.is_strongly_primitive && r.delta_sq_in_prime_field);
        assert_eq!(r.delta_bar, vec![2, 1]);

        let r = analyze(&ctx(3, 2, &[1, 0, 1]));
        assert!(!r.is_primitive);
        assert_eq!(r.zeta_order, 4);
    }

    #[test]
    fn zeta_order_matches_brute_force() {
        let c = ctx(3, 2, &[1, 0, 1]);
        let eta_bar = c.reduce_mod_p(c.eta());
        let brute = (1..9u64).find(|&k| c.fq_pow(&eta_bar, k) == c.fq_one()).unwrap();
        assert_eq!(brute, 4);
        assert_eq!(c.zeta_order(), brute);
    }

    #[test]
    fn reducible_report() {
        let ring = RingCtx::new(3, 2).unwrap();
        let r = analyze_poly(ring, vec![8, 0, 1]).unwrap();
        assert!(r.reducible_mod_p && !r.is_primitive && !r.is_strongly_primitive);
    }

    #[test]
    fn formulas() {
        let c = class_count_formulas(3, 2, 2);
        assert_eq!((c.primitive, c.strongly_primitive, c.delta_sq_outside), (16, 12, 8));
        let c = class_count_formulas(5, 2, 2);
        assert_eq!((c.primitive, c.strongly_primitive, c.delta_sq_outside), (96, 80, 64));
        let c = class_count_formulas(3, 3, 2);
        assert_eq!((c.primitive, c.strongly_primitive, c.delta_sq_outside), (144, 108, 72));
    }

    #[test]
    fn small_enumeration_matches() {
        let r = enumerate_counts(3, 2, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.polynomials, 81);
        assert!(r.matches(), "{r:?}");
    }

    #[test]
    fn class_implications_exhaustive() {
        let ring = RingCtx::new(3, 2).unwrap();
        for idx in 0..81 {
            let f = poly_from_index(&ring, 2, idx);
            let r = analyze_poly(ring, f.clone()).unwrap();
            if r.is_strongly_primitive {
                assert!(r.is_primitive);
            }
            if r.is_primitive {
                // f mod p is primitive over F_p.
                assert_eq!(r.zeta_order, 8);
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(enumerate_counts(5, 2, 2, 100), Err(Error::BudgetExceeded { needed: 625, budget: 100 })));
    }

    #[test]
    fn search_results_satisfy_constraint() {
        for c in [SearchConstraint::Primitive, SearchConstraint::StronglyPrimitive, SearchConstraint::DeltaSqOutside] {
            let g = search(3, 2, 2, c, DEFAULT_BUDGET).unwrap();
            assert!(c.accepts(&analyze(&g)));
        }
        let g = search(3, 2, 2, SearchConstraint::DeltaSqOutside, DEFAULT_BUDGET).unwrap();
        assert!(!analyze(&g).delta_sq_in_prime_field);
        assert_eq!(all_matching(3, 2, 2, SearchConstraint::DeltaSqOutside, DEFAULT_BUDGET).unwrap().len(), 8);
    }

    #[test]
    fn reference_polynomials_qualify() {
        assert!(SearchConstraint::Primitive.accepts(&analyze(&ctx(3, 3, &[1, -1, -4]))));
        assert!(SearchConstraint::StronglyPrimitive.accepts(&analyze(&ctx(3, 2, &[1, 1, -1]))));
    }

    #[test]
    fn constraint_parsing() {
        assert_eq!("strongly_primitive".parse::<SearchConstraint>().unwrap(), SearchConstraint::StronglyPrimitive);
        assert!("bogus".parse::<SearchConstraint>().is_err());
    }
}
