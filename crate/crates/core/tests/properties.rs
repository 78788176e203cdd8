use proptest::prelude::*;

use ringseq::compress::apply;
use ringseq::injectivity::{closure_partition, compressed_equal, relation};
use ringseq::primitivity::{search, DEFAULT_BUDGET};
use ringseq::sequences::trace_sequence;
use ringseq::{CompressingMap, CoordPoly, GaloisCtx, RingCtx, SearchConstraint};

fn over_z27() -> GaloisCtx {
    GaloisCtx::new(RingCtx::new(3, 3).unwrap(), &[1, -1, -4]).unwrap()
}

fn ctx_for(p: u64, e: u32) -> GaloisCtx {
    search(p, e, 2, SearchConstraint::Primitive, DEFAULT_BUDGET).unwrap()
}

/// `(x_0^(p-1) - 1) | f` by coefficients: writing `f = sum_k x_0^k h_k`,
/// the reduced `f` is divisible iff `h_0 = -h_(p-1)` and all other `h_k`
/// vanish.
fn symbolic_unit_vanisher(f: &CoordPoly) -> bool {
    let p = f.p();
    let mut h = vec![std::collections::BTreeMap::<Vec<u32>, u64>::new(); p as usize];
    for (e, c) in f.terms() {
        h[e[0] as usize].insert(e[1..].to_vec(), c);
    }
    if (1..p as usize - 1).any(|k| !h[k].is_empty()) {
        return false;
    }
    let last = &h[p as usize - 1];
    let keys: std::collections::BTreeSet<&Vec<u32>> = h[0].keys().chain(last.keys()).collect();
    let ok = keys
        .into_iter()
        .all(|k| (h[0].get(k).copied().unwrap_or(0) + last.get(k).copied().unwrap_or(0)) % p == 0);
    ok
}

fn symbolic_x0_divides(f: &CoordPoly) -> bool {
    f.terms().all(|(e, _)| e[0] > 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn trace_is_linear(p in prop::sample::select(vec![3u64, 5]), e in 2u32..4,
                       a in any::<u64>(), b in any::<u64>(),
                       z in prop::collection::vec(any::<i64>(), 2),
                       w in prop::collection::vec(any::<i64>(), 2)) {
        let ctx = ctx_for(p, e);
        let r = *ctx.ring();
        let (a, b) = (a % r.modulus(), b % r.modulus());
        let z = ctx.elem(&z).unwrap();
        let w = ctx.elem(&w).unwrap();
        let lhs = ctx.trace(&ctx.add(&ctx.scale(a, &z), &ctx.scale(b, &w)));
        let rhs = r.add(r.mul(a, ctx.trace(&z)), r.mul(b, ctx.trace(&w)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn digits_round_trip(p in prop::sample::select(vec![3u64, 5, 7]), e in 2u32..5, a in any::<u64>()) {
        let r = RingCtx::new(p, e).unwrap();
        let a = a % r.modulus();
        let d = r.digits(a);
        prop_assert!(d.iter().all(|&x| x < p));
        prop_assert_eq!(r.from_digits(&d).unwrap(), a);
    }

    #[test]
    fn divisibility_by_evaluation_matches_coefficients(e in 2u32..4,
                                                       values in prop::collection::vec(0u64..3, 9)) {
        let nvars = e as usize - 1;
        let vals = &values[..3usize.pow(nvars as u32)];
        let f = CoordPoly::interpolate(3, nvars, vals);
        prop_assert_eq!(f.divisible_by_x0_unit_vanisher(), symbolic_unit_vanisher(&f));
        prop_assert_eq!(f.divisible_by_x0(), symbolic_x0_divides(&f));
    }

    #[test]
    fn interpolation_is_inverse_of_evaluation(values in prop::collection::vec(0u64..3, 9)) {
        let f = CoordPoly::interpolate(3, 2, &values);
        prop_assert_eq!(f.values(), values);
        let r = RingCtx::new(3, 2).unwrap();
        let m = CompressingMap::from_poly(r, &f).unwrap();
        prop_assert!(m.table().iter().zip(&f.values()).all(|(&a, &b)| a as u64 == b));
    }

    #[test]
    fn apply_commutes_with_shift(table in prop::collection::vec(0u32..3, 27), alpha in 0usize..648, k in -100i64..100) {
        let ctx = over_z27();
        let units = ctx.units();
        let map = CompressingMap::from_table(*ctx.ring(), table, Some(3)).unwrap();
        let s = trace_sequence(&ctx, &units[alpha]).unwrap();
        prop_assert_eq!(apply(&map, &s.shift(k)).unwrap(), apply(&map, &s).unwrap().shift(k));
    }

    #[test]
    fn compression_equality_two_routes_agree(table in prop::collection::vec(0u32..2, 27),
                                             a in 0usize..648, b in 0usize..648) {
        prop_assume!(a != b);
        let ctx = over_z27();
        let units = ctx.units();
        let map = CompressingMap::from_table(*ctx.ring(), table, Some(2)).unwrap();
        // compressed_equal asserts internally that both routes agree.
        let eq = compressed_equal(&ctx, &map, &units[a], &units[b]).unwrap();
        let part = closure_partition(&relation(&ctx, &units[a], &units[b], 3).unwrap());
        prop_assert_eq!(eq, part.classes().iter().all(|c| map.is_constant_on(c)));
    }

    #[test]
    fn partitions_cover_and_levels_are_monotone(a in 0usize..648, b in 0usize..648) {
        let ctx = over_z27();
        let units = ctx.units();
        let rels: Vec<_> = (1..=3).map(|i| relation(&ctx, &units[a], &units[b], i).unwrap()).collect();
        for i in 1..3 {
            prop_assert!(rels[i].project(i as u32, 3).is_subset(&rels[i - 1].pairs));
        }
        for rel in &rels {
            let part = closure_partition(rel);
            prop_assert_eq!(part.universe(), rel.modulus);
            prop_assert!(part.classes().iter().all(|c| !c.is_empty()));
        }
    }
}
