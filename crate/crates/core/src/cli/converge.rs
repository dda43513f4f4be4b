use std::io::Write;

use rug::Float;
use serde::Serialize;

use symlseries::engine::zeta_limit_study;
use symlseries::numeric::{decimal, short_decimal};
use symlseries::Family;

use super::{Context, ConvergeArgs, Format, Outcome};

#[derive(Serialize)]
struct Row {
    m: u32,
    value: String,
    gap: String,
}

#[derive(Serialize)]
struct ConvergeJson {
    family: Family,
    r: u32,
    reference_label: String,
    reference: String,
    reference_bound: String,
    /// Largest error bound over the rows.
    max_error_bound: String,
    rows: Vec<Row>,
}

pub fn run(a: &ConvergeArgs, ctx: &Context, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let study = zeta_limit_study(a.r, &a.schedule, a.family, ctx.prec, &ctx.tol)?;
    let digits = ctx.prec.decimal_digits();
    let label = match a.family {
        Family::Chi => format!("zeta({})", a.r),
        Family::F => format!("(1-2^-{})·zeta({})", a.r, a.r),
    };
    let reference = decimal(&study.reference, digits);
    let reference_bound = short_decimal(&study.reference_bound);
    let rows: Vec<Row> = study
        .rows
        .iter()
        .map(|row| Row {
            m: row.m,
            value: decimal(&row.value, digits),
            gap: decimal(&row.gap, digits),
        })
        .collect();
    let max_bound = study
        .rows
        .iter()
        .map(|row| row.error_bound.clone())
        .fold(Float::with_val(64, 0), |acc, b| acc.max(&b));

    match ctx.format {
        Format::Text => {
            writeln!(out, "reference {label} = {reference} ± {reference_bound}")?;
            writeln!(
                out,
                "family {}, r = {}, row error bound <= {}",
                a.family,
                a.r,
                short_decimal(&max_bound)
            )?;
            writeln!(out, "{:>6}  {:<w$}  gap", "m", "value", w = digits + 2)?;
            for row in &rows {
                writeln!(out, "{:>6}  {:<w$}  {}", row.m, row.value, row.gap, w = digits + 2)?;
            }
        }
        Format::Json => {
            let j = ConvergeJson {
                family: a.family,
                r: a.r,
                reference_label: label,
                reference,
                reference_bound,
                max_error_bound: short_decimal(&max_bound),
                rows,
            };
            serde_json::to_writer_pretty(&mut *out, &j)?;
            writeln!(out)?;
        }
        Format::Csv => {
            writeln!(err, "reference {label} = {reference} ± {reference_bound}")?;
            let mut w = csv::Writer::from_writer(&mut *out);
            for row in &rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}
