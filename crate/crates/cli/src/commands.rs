use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use ringseq::galois::parse_coeff_list;
use ringseq::injectivity::criterion::Criterion;
use ringseq::injectivity::{
    census, classify_failure, closure_partition, condition1_check, gamma_decompose, predict_partition,
    relation, EntropyOracle, Prediction,
};
use ringseq::primitivity::{analyze_poly, enumerate_counts, search, PrimitivityReport};
use ringseq::sequences::{period, trace_sequence, SequenceExport};
use ringseq::{CompressingMap, FqElem, GaloisCtx, OElem, RingCtx};

use crate::output::{set_text, Output};
use crate::{CliError, Opts};

type Result<T> = std::result::Result<T, CliError>;

fn ring(o: &Opts) -> Result<RingCtx> {
    let p = o.p.ok_or(CliError::Missing("-p"))?;
    let e = o.e.ok_or(CliError::Missing("-e"))?;
    Ok(RingCtx::new(p, e)?)
}

fn ctx(o: &Opts) -> Result<GaloisCtx> {
    let spec = o.poly.as_deref().ok_or(CliError::Missing("--poly"))?;
    Ok(GaloisCtx::from_spec(ring(o)?, spec)?)
}

fn degree(o: &Opts) -> Result<u32> {
    o.n.ok_or(CliError::Missing("-n"))
}

fn alpha(o: &Opts, ctx: &GaloisCtx) -> Result<OElem> {
    match &o.alpha {
        Some(s) => Ok(ctx.parse_elem(s)?),
        None => Ok(ctx.one()),
    }
}

fn beta(o: &Opts, ctx: &GaloisCtx) -> Result<OElem> {
    let s = o.beta.as_deref().ok_or(CliError::Missing("--beta"))?;
    Ok(ctx.parse_elem(s)?)
}

fn map(o: &Opts, ring: RingCtx) -> Result<CompressingMap> {
    let spec = o.map.as_deref().ok_or(CliError::Missing("--map"))?;
    if spec == "random" {
        let k = o.alphabet.unwrap_or(2);
        let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
        let table = (0..ring.modulus()).map(|_| rng.gen_range(0..k.max(1))).collect();
        return Ok(CompressingMap::from_table(ring, table, Some(k))?);
    }
    let m = CompressingMap::parse(ring, spec)?;
    match o.alphabet {
        Some(k) if k != m.alphabet() => Ok(CompressingMap::from_table(ring, m.table().to_vec(), Some(k))?),
        _ => Ok(m),
    }
}

fn fq_spec(z: &FqElem) -> String {
    let parts: Vec<String> = z.coeffs().iter().rev().map(|c| c.to_string()).collect();
    parts.join(",")
}

fn report_json(f: &str, ring: &RingCtx, rep: &PrimitivityReport) -> Value {
    let mut v = json!({ "p": ring.p(), "e": ring.e(), "f": f });
    let fields = serde_json::to_value(rep).expect("report serializes");
    v.as_object_mut().unwrap().extend(fields.as_object().unwrap().clone());
    v["delta_sq_outside"] = json!(rep.delta_sq_outside());
    v
}

fn report_text(f: &str, rep: &PrimitivityReport) -> String {
    if rep.reducible_mod_p {
        return format!("f = {f}\nreducible mod p\n");
    }
    let delta: Vec<String> = rep.delta_bar.iter().rev().map(|c| c.to_string()).collect();
    format!(
        "f = {f}\nzeta order: {}\neta order: {}\ndelta_bar: {}\nprimitive: {}\nstrongly primitive: {}\ndelta_bar^2 outside F_p: {}\n",
        rep.zeta_order,
        rep.eta_order,
        delta.join(","),
        rep.is_primitive,
        rep.is_strongly_primitive,
        rep.delta_sq_outside()
    )
}

pub fn primitive_check(o: &Opts) -> Result<Output> {
    let ring = ring(o)?;
    let spec = o.poly.as_deref().ok_or(CliError::Missing("--poly"))?;
    let coeffs = parse_coeff_list(spec)?;
    let mut f: Vec<u64> = coeffs.iter().rev().map(|&c| ring.reduce(c)).collect();
    while f.len() > 1 && f.last() == Some(&0) {
        f.pop();
    }
    if f.last() != Some(&1) {
        return Err(ringseq::Error::NotMonic.into());
    }
    let canonical: Vec<String> = f.iter().rev().map(|&c| ring.signed(c).to_string()).collect();
    let canonical = canonical.join(",");
    let rep = analyze_poly(ring, f)?;
    Ok(Output::new(report_json(&canonical, &ring, &rep), report_text(&canonical, &rep)))
}

pub fn primitive_search(o: &Opts) -> Result<Output> {
    let ring = ring(o)?;
    let ctx = search(ring.p(), ring.e(), degree(o)?, o.constraint, o.budget)?;
    let rep = ringseq::primitivity::analyze(&ctx);
    let f = ctx.f_spec();
    let mut v = report_json(&f, &ring, &rep);
    v["constraint"] = serde_json::to_value(o.constraint).unwrap();
    Ok(Output::new(v, report_text(&f, &rep)))
}

pub fn primitive_count(o: &Opts) -> Result<Output> {
    let ring = ring(o)?;
    let rep = enumerate_counts(ring.p(), ring.e(), degree(o)?, o.budget)?;
    let mut v = serde_json::to_value(rep).unwrap();
    v["matches"] = json!(rep.matches());
    let (c, f) = (rep.enumerated, rep.formula);
    let text = format!(
        "({}, {}, {}): {} polynomials\nprimitive: {} (formula {})\nstrongly primitive: {} (formula {})\ndelta_bar^2 outside F_p: {} (formula {})\n",
        rep.p,
        rep.e,
        rep.n,
        rep.polynomials,
        c.primitive,
        f.primitive,
        c.strongly_primitive,
        f.strongly_primitive,
        c.delta_sq_outside,
        f.delta_sq_outside
    );
    Ok(Output::new(v, text))
}

pub fn seq_gen(o: &Opts) -> Result<Output> {
    let ctx = ctx(o)?;
    let a = alpha(o, &ctx)?;
    let seq = trace_sequence(&ctx, &a)?;
    let export = SequenceExport::new(&ctx, Some(&a), &seq);
    let h = &export.header;
    let text = format!(
        "# p={} e={} f={} alpha={} period={}\n{}",
        h.p,
        h.e,
        h.f,
        h.alpha.as_deref().unwrap_or(""),
        h.period,
        seq.to_lines()
    );
    Ok(Output::new(serde_json::to_value(&export).unwrap(), text))
}

pub fn seq_values(o: &Opts) -> Result<Output> {
    let ctx = ctx(o)?;
    let a = alpha(o, &ctx)?;
    let values = trace_sequence(&ctx, &a)?.value_set();
    let v = json!({
        "f": ctx.f_spec(),
        "alpha": ctx.elem_spec(&a),
        "count": values.len(),
        "values": values,
    });
    let text = format!("{} values: {}\n", values.len(), set_text(&values));
    Ok(Output::new(v, text))
}

pub fn seq_period(o: &Opts) -> Result<Output> {
    let ctx = ctx(o)?;
    let t = period(&ctx);
    let full = (ctx.q() - 1) * ctx.p().pow(ctx.e() - 1);
    let v = json!({ "f": ctx.f_spec(), "period": t, "maximal": t == full });
    Ok(Output::new(v, format!("period {t} (maximal {full})\n")))
}

pub fn map_build(o: &Opts) -> Result<Output> {
    let m = map(o, ring(o)?)?;
    let v = json!({
        "map": m.to_spec(),
        "alphabet": m.alphabet(),
        "table": m.table(),
        "provenance": m.provenance(),
    });
    Ok(Output::new(v, format!("{}\nalphabet {}\n", m.to_spec(), m.alphabet())))
}

fn witness_json(ctx: &GaloisCtx, w: &Option<(OElem, OElem)>) -> Value {
    match w {
        Some((a, b)) => json!([ctx.elem_spec(a), ctx.elem_spec(b)]),
        None => Value::Null,
    }
}

pub fn map_check(o: &Opts) -> Result<Output> {
    let ctx = ctx(o)?;
    let m = map(o, *ctx.ring())?;
    let verdict = EntropyOracle::with_budget(&ctx, o.budget)?.check(&m)?;
    let crit = Criterion::for_ring(*ctx.ring()).check(&m)?;
    let applicable = !ctx.delta_sq_in_prime_field();
    let v = json!({
        "f": ctx.f_spec(),
        "map": m.to_spec(),
        "injective": verdict.injective,
        "oracle": { "injective": verdict.injective, "witness": witness_json(&ctx, &verdict.witness) },
        "criterion": {
            "applicable": applicable,
            "injective": crit.injective,
            "root_condition": crit.root_condition,
            "coset_condition": crit.coset_condition,
            "failing_roots": crit.failing_roots,
        },
        "agree": crit.injective == verdict.injective,
    });
    let mut text = format!(
        "oracle: {}\ncriterion: {}{}\n",
        if verdict.injective { "injective" } else { "not injective" },
        if crit.injective { "injective" } else { "not injective" },
        if applicable { "" } else { " (delta_bar^2 in F_p: not established)" }
    );
    if let Some((a, b)) = &verdict.witness {
        text.push_str(&format!("witness: {} ~ {}\n", ctx.display(a), ctx.display(b)));
    }
    Ok(Output::new(v, text))
}

pub fn map_classify(o: &Opts) -> Result<Output> {
    let ctx = ctx(o)?;
    let m = map(o, *ctx.ring())?;
    let oracle = EntropyOracle::with_budget(&ctx, o.budget)?;
    match classify_failure(&oracle, &m) {
        Ok(rep) => {
            let statements: Vec<&str> = rep.statements.iter().map(|s| s.roman()).collect();
            let v = json!({
                "f": ctx.f_spec(),
                "map": m.to_spec(),
                "injective": false,
                "statements": statements,
                "roots": rep.roots,
                "witness": witness_json(&ctx, &rep.witness.witness),
            });
            Ok(Output::new(v, format!("not injective; statements {}\n", set_text(statements))))
        }
        Err(ringseq::Error::MapIsInjective) => {
            let v = json!({ "f": ctx.f_spec(), "map": m.to_spec(), "injective": true, "statements": [] });
            Ok(Output::new(v, "injective; nothing to classify\n"))
        }
        Err(e) => Err(e.into()),
    }
}

pub fn map_census(o: &Opts) -> Result<Output> {
    let ctx = ctx(o)?;
    let k = o.alphabet.unwrap_or(2);
    let rep = census(&ctx, k, o.budget)?;
    let mut v = serde_json::to_value(&rep).unwrap();
    v["f"] = json!(ctx.f_spec());
    v["alphabet"] = json!(k);
    v["exceeds_bound"] = json!(rep.exceeds_bound());
    let text = format!(
        "{} of {} maps injective ({:.6}); bound {:.6}; exceeds bound: {}\n",
        rep.ep,
        rep.total,
        rep.proportion,
        rep.bound,
        rep.exceeds_bound()
    );
    Ok(Output::new(v, text))
}

pub fn partition(o: &Opts) -> Result<Output> {
    let ctx = ctx(o)?;
    let a = alpha(o, &ctx)?;
    let b = beta(o, &ctx)?;
    let level = o.level.unwrap_or(ctx.e());
    let part = closure_partition(&relation(&ctx, &a, &b, level)?);
    let mut v = json!({
        "f": ctx.f_spec(),
        "alpha": ctx.elem_spec(&a),
        "beta": ctx.elem_spec(&b),
        "level": level,
        "partition": part,
    });
    let mut text = format!("{}\n", part.to_text());
    if level == ctx.e() && a != b {
        let dec = gamma_decompose(&ctx, &a, &b)?;
        let cond = condition1_check(&ctx, &a, &b)?;
        let pred = predict_partition(&ctx, &a, &b)?;
        v["gamma"] = json!({
            "gamma": ctx.elem_spec(&dec.gamma),
            "rational": dec.rational,
            "ell": dec.ell,
            "gamma0": dec.gamma0,
            "gamma_ell_bar": dec.gamma_ell_bar.as_ref().map(fq_spec),
        });
        v["condition"] = serde_json::to_value(cond).unwrap();
        v["prediction"] = serde_json::to_value(&pred).unwrap();
        match &pred {
            Prediction::Predicted(p) => {
                v["prediction_matches"] = json!(*p == part);
                text.push_str(&format!("predicted: {} (matches: {})\n", p.to_text(), *p == part));
            }
            Prediction::NoPrediction => text.push_str("predicted: none\n"),
        }
    }
    Ok(Output::new(v, text))
}
