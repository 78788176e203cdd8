use serde_json::{json, Map, Value};

use ringseq::injectivity::{closure_partition, compressed_equal, relation, EntropyOracle};
use ringseq::primitivity::analyze;
use ringseq::sequences::trace_sequence;
use ringseq::{CompressingMap, FqElem, GaloisCtx, RingCtx};

use crate::output::{set_text, Output};
use crate::CliError;

/// Values of `s_(3 eta + 13)` for `x^2 - x - 4` over `Z/27`: every residue
/// except the nonzero multiples of 9.
const CUBIC_VALUES: [u64; 24] = [
    1, 2, 3, 4, 5, 6, 7, 8, 10, 11, 12, 13, 14, 15, 16, 17, 19, 20, 21, 22, 23, 24, 25, 26,
];

const QUADRATIC_CLASSES: [&[u64]; 2] = [&[0, 1, 2, 3, 6, 7, 8], &[4, 5]];

#[derive(Default)]
struct Report {
    fields: Map<String, Value>,
    lines: Vec<String>,
    checks: Vec<(&'static str, bool)>,
}

impl Report {
    fn field(&mut self, key: &str, value: Value, line: String) {
        self.fields.insert(key.to_string(), value);
        self.lines.push(line);
    }

    fn check(&mut self, name: &'static str, ok: bool) {
        self.checks.push((name, ok));
    }

    fn finish(mut self, which: u8) -> Output {
        let pass = self.checks.iter().all(|&(_, ok)| ok);
        let checks: Vec<Value> = self.checks.iter().map(|&(name, ok)| json!({ "name": name, "pass": ok })).collect();
        let mut v = json!({ "example": which });
        v.as_object_mut().unwrap().append(&mut self.fields);
        v["checks"] = json!(checks);
        v["pass"] = json!(pass);
        let mut text = self.lines.join("\n");
        text.push('\n');
        for (name, ok) in &self.checks {
            text.push_str(&format!("{} {name}\n", if *ok { "ok  " } else { "FAIL" }));
        }
        text.push_str(if pass { "pass\n" } else { "fail\n" });
        Output::new(v, text).with_exit_code(if pass { 0 } else { 1 })
    }
}

fn context(p: u64, e: u32, f: &str) -> Result<GaloisCtx, CliError> {
    Ok(GaloisCtx::from_spec(RingCtx::new(p, e)?, f)?)
}

fn cubic_ring(r: &mut Report) -> Result<(), CliError> {
    let ctx = context(3, 3, "1,-1,-4")?;
    r.field("f", json!(ctx.f_spec()), "f = x^2 - x - 4 over Z/27".into());
    let (_, u, _) = ctx.decompose();
    let u9: Vec<u64> = u.coeffs().iter().map(|c| c % 9).collect();
    r.field("u_mod_9", json!(u9), format!("u mod 9 = {}", ctx.display(&ringseq::OElem(u9.clone()))));
    r.check("u = 7 mod 9", u9 == [7, 0]);
    let rep = analyze(&ctx);
    r.field(
        "primitive",
        json!(rep.is_primitive),
        format!("primitive: {}, strongly primitive: {}", rep.is_primitive, rep.is_strongly_primitive),
    );
    r.fields.insert("strongly_primitive".into(), json!(rep.is_strongly_primitive));
    r.check("primitive, not strongly primitive", rep.is_primitive && !rep.is_strongly_primitive);
    let alpha = ctx.parse_elem("3,13")?;
    let values = trace_sequence(&ctx, &alpha)?.value_set();
    r.field("values", json!(values), format!("values of s_(3*eta + 13): {}", set_text(&values)));
    r.check("value set", values.iter().copied().eq(CUBIC_VALUES));
    Ok(())
}

fn quadratic_partition(r: &mut Report) -> Result<(), CliError> {
    let ctx = context(3, 2, "1,1,-1")?;
    r.field("f", json!(ctx.f_spec()), "f = x^2 + x - 1 over Z/9".into());
    let d = ctx.delta_bar().clone();
    r.field("delta_bar", json!(d.coeffs()), "delta_bar = eta_bar - 1".into());
    r.check("delta_bar = eta_bar - 1", d == FqElem(vec![2, 1]));
    let d2 = ctx.fq_mul(&d, &d);
    r.field("delta_bar_sq", json!(d2.coeffs()), format!("delta_bar^2 = {}", d2.coeffs()[0]));
    r.check("delta_bar^2 = 2", d2 == FqElem(vec![2, 0]));
    let beta = ctx.parse_elem("1,5")?;
    let part = closure_partition(&relation(&ctx, &ctx.one(), &beta, 2)?);
    r.field("partition", json!(part), format!("classes for alpha = 1, beta = eta + 5: {}", part.to_text()));
    r.check("partition", part.classes().iter().map(Vec::as_slice).eq(QUADRATIC_CLASSES));
    Ok(())
}

fn top_digit_map(r: &mut Report) -> Result<(), CliError> {
    let ctx = context(3, 3, "1,-1,-4")?;
    r.field("f", json!(ctx.f_spec()), "f = x^2 - x - 4 over Z/27, psi = x2^2 + x2".into());
    let psi = CompressingMap::parse(*ctx.ring(), "x2^2 + x2")?;
    let alpha = ctx.parse_elem("3,13")?;
    let eq = compressed_equal(&ctx, &psi, &alpha, &ctx.neg(&alpha))?;
    r.field("compressed_equal", json!(eq), format!("psi(s_alpha) = psi(s_-alpha): {eq}"));
    r.check("compressed sequences of alpha and -alpha agree", eq);
    let verdict = EntropyOracle::new(&ctx)?.check(&psi)?;
    r.field("injective", json!(verdict.injective), format!("injective: {}", verdict.injective));
    r.check("not injective", !verdict.injective);
    if let Some((a, b)) = &verdict.witness {
        r.field(
            "witness",
            json!([ctx.elem_spec(a), ctx.elem_spec(b)]),
            format!("witness: {} ~ {}", ctx.display(a), ctx.display(b)),
        );
    }
    Ok(())
}

pub fn run(which: u8) -> Result<Output, CliError> {
    let mut r = Report::default();
    match which {
        1 => cubic_ring(&mut r)?,
        2 => quadratic_partition(&mut r)?,
        _ => top_digit_map(&mut r)?,
    }
    Ok(r.finish(which))
}
