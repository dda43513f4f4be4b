use std::io::Write;

use rug::Float;
use serde::Serialize;

use symlseries::exact::{eval_constant, find_constant};
use symlseries::numeric::{decimal, short_decimal};
use symlseries::{evaluate, EvalRequest, Family, LValue};

use super::{Context, EvalArgs, Format, Outcome};

#[derive(Serialize)]
struct EvalJson {
    family: Family,
    m: u32,
    r: u32,
    modulus: u64,
    value_re: String,
    value_im: String,
    error_bound: String,
    method: String,
    terms_used: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    constant_id: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    constant: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    residual: Option<String>,
}

struct Reference {
    id: &'static str,
    formula: String,
    residual: Float,
}

/// |Re v - exact| + |Im v| when a closed form is tabulated.
fn reference(a: &EvalArgs, v: &LValue, ctx: &Context) -> Outcome<Option<Reference>> {
    let Some(entry) = find_constant(a.family, a.m, a.r) else {
        return Ok(None);
    };
    let exact = eval_constant(&entry.constant, ctx.prec)?;
    let w = v.value.prec().0.max(exact.prec());
    let mut residual = Float::with_val(64, Float::with_val(w, v.re() - &exact).abs());
    residual += Float::with_val(64, v.im().abs_ref());
    residual.next_up();
    Ok(Some(Reference {
        id: entry.id,
        formula: entry.constant.to_string(),
        residual,
    }))
}

pub fn run(a: &EvalArgs, ctx: &Context, out: &mut dyn Write) -> Outcome {
    let f = a.family.build(a.m)?;
    let req = EvalRequest::new(f, a.r, a.method)
        .with_precision(ctx.prec)
        .with_tolerance(ctx.tol.clone());
    let v = evaluate(&req)?;
    let reference = reference(a, &v, ctx)?;
    let digits = ctx.prec.decimal_digits();
    let re = decimal(v.re(), digits);
    let im = decimal(v.im(), digits);
    let bound = short_decimal(&v.error_bound);
    let modulus = a.family.modulus(a.m);

    match ctx.format {
        Format::Text => {
            writeln!(out, "L({}, {} m={})  modulus {}", a.r, a.family, a.m, modulus)?;
            writeln!(out, "method       {}", v.method)?;
            writeln!(out, "value        {re} ± {bound}")?;
            writeln!(out, "imaginary    {im}")?;
            writeln!(out, "terms used   {}", v.terms_used)?;
            if let Some(rf) = &reference {
                writeln!(out, "constant     {} = {}", rf.id, rf.formula)?;
                writeln!(out, "residual     {}", short_decimal(&rf.residual))?;
            }
        }
        Format::Json => {
            let j = EvalJson {
                family: a.family,
                m: a.m,
                r: a.r,
                modulus,
                value_re: re,
                value_im: im,
                error_bound: bound,
                method: v.method.tag().to_string(),
                terms_used: v.terms_used,
                constant_id: reference.as_ref().map(|rf| rf.id.to_string()),
                constant: reference.as_ref().map(|rf| rf.formula.clone()),
                residual: reference.as_ref().map(|rf| short_decimal(&rf.residual)),
            };
            serde_json::to_writer_pretty(&mut *out, &j)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record([
                "family",
                "m",
                "r",
                "modulus",
                "method",
                "value_re",
                "value_im",
                "error_bound",
                "terms_used",
                "constant_id",
                "residual",
            ])?;
            w.write_record([
                a.family.name().to_string(),
                a.m.to_string(),
                a.r.to_string(),
                modulus.to_string(),
                v.method.tag().to_string(),
                re,
                im,
                bound,
                v.terms_used.to_string(),
                reference.as_ref().map(|rf| rf.id.to_string()).unwrap_or_default(),
                reference
                    .as_ref()
                    .map(|rf| short_decimal(&rf.residual))
                    .unwrap_or_default(),
            ])?;
            w.flush()?;
        }
    }
    Ok(())
}
