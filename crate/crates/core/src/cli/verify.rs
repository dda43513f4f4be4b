use std::io::Write;

use rayon::prelude::*;
use rug::{Complex, Float};
use serde::Serialize;

use symlseries::engine::identities::cubic_pair;
use symlseries::engine::split_residual;
use symlseries::exact::{compare_entry, constant_table, ConstantEntry, ExactConstant, VerifyRow};
use symlseries::hfun::h_eval_bounded;
use symlseries::numeric::{abs_upper, pi, pow2, short_decimal};
use symlseries::{Precision, Result};

use super::{Context, Failure, Format, Outcome, VerifyArgs};

#[derive(Serialize)]
struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

#[derive(Serialize)]
struct VerifyJson {
    constants: Vec<VerifyRow>,
    checks: Vec<Check>,
}

fn select(a: &VerifyArgs) -> Outcome<Vec<ConstantEntry>> {
    let mut table = constant_table();
    if !a.only.is_empty() {
        for id in &a.only {
            if !table.iter().any(|e| e.id == id.as_str()) {
                return Err(Failure::Usage(format!("unknown constant id {id:?}")));
            }
        }
        table.retain(|e| a.only.iter().any(|id| id == e.id));
    }
    if a.corrupt_table {
        // Negative control: shift each denominator by one.
        for e in &mut table {
            let c = &e.constant;
            let d = rug::Integer::from(c.denominator() + 1u32);
            e.constant = ExactConstant::new(c.pi_power(), d, c.body().clone()).expect("still well formed");
        }
    }
    Ok(table)
}

/// h_r(conj t) = (-1)^r h_r(t) at a few unit-circle points, r = 1..8.
fn conjugation_check(prec: Precision) -> Result<Check> {
    let w = prec.bits();
    let mut worst = Float::with_val(64, 0);
    let mut passed = true;
    for r in 1..=8u32 {
        for k in [1u32, 3, 5, 8, 11] {
            let theta = Float::with_val(w, pi(w) * k) / 7u32;
            let (s, c) = theta.sin_cos(Float::new(w));
            let t = Complex::with_val(w, (&c, &s));
            let tc = Complex::with_val(w, (&c, -s));
            let a = h_eval_bounded(r, &tc, prec)?;
            let b = h_eval_bounded(r, &t, prec)?;
            let mut rhs = b.value;
            if r % 2 == 1 {
                rhs = -rhs;
            }
            let bits = a.value.prec().0.max(rhs.prec().0);
            let d = abs_upper(&Complex::with_val(bits, &a.value - &rhs));
            // the input rounding of t is not part of either bound
            let mut allowed = Float::with_val(64, &a.error + &b.error);
            allowed += abs_upper(&rhs) * pow2(16 - w as i32);
            passed &= d <= allowed;
            worst = worst.max(&d);
        }
    }
    Ok(Check {
        name: "conjugation",
        passed,
        detail: format!("r = 1..8 at 5 points, worst difference {}", short_decimal(&worst)),
    })
}

fn split_check(prec: Precision) -> Result<Check> {
    let cases: Vec<(u32, u32)> = (2..=6).flat_map(|m| [3, 5, 7].map(|r| (m, r))).collect();
    let results = cases
        .par_iter()
        .map(|&(m, r)| split_residual(m, r, prec).map(|s| (m, r, s.holds())))
        .collect::<Result<Vec<_>>>()?;
    let failed: Vec<String> = results
        .iter()
        .filter(|(_, _, ok)| !ok)
        .map(|(m, r, _)| format!("m={m} r={r}"))
        .collect();
    Ok(Check {
        name: "split",
        passed: failed.is_empty(),
        detail: if failed.is_empty() {
            "m = 2..6, r = 3, 5, 7".to_string()
        } else {
            format!("failed at {}", failed.join(", "))
        },
    })
}

fn double_angle_check(prec: Precision) -> Check {
    let w = prec.with_guard(32);
    let mut passed = true;
    let mut worst = Float::with_val(64, 0);
    for k in 1..=12u32 {
        let theta = Float::with_val(w, pi(w) * k) / 13u32;
        let (lhs, rhs) = cubic_pair(&theta);
        let d = Float::with_val(w, &lhs - &rhs).abs();
        let rel = Float::with_val(64, &d / &lhs);
        passed &= rel <= pow2(20 - prec.bits() as i32);
        worst = worst.max(&rel);
    }
    Check {
        name: "double_angle",
        passed,
        detail: format!("12 angles, worst relative difference {}", short_decimal(&worst)),
    }
}

pub fn run(a: &VerifyArgs, ctx: &Context, out: &mut dyn Write) -> Outcome {
    let table = select(a)?;
    let prec = ctx.prec;
    let comparisons = table
        .par_iter()
        .map(|e| compare_entry(e, prec))
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<VerifyRow> = table
        .iter()
        .zip(&comparisons)
        .map(|(e, c)| VerifyRow::new(e, c, prec))
        .collect();
    let checks = if a.only.is_empty() {
        vec![conjugation_check(prec)?, split_check(prec)?, double_angle_check(prec)]
    } else {
        Vec::new()
    };

    let mut failed: Vec<String> = rows.iter().filter(|r| !r.matched).map(|r| r.id.clone()).collect();
    failed.extend(checks.iter().filter(|c| !c.passed).map(|c| c.name.to_string()));

    match ctx.format {
        Format::Text => {
            for r in &rows {
                let status = if r.matched { "ok" } else { "FAILED" };
                writeln!(
                    out,
                    "{:<10} {:<6} residual {:<12} {}",
                    r.id, status, r.residual, r.decimal_value
                )?;
            }
            let matched = rows.iter().filter(|r| r.matched).count();
            writeln!(out, "{matched}/{} constants matched", rows.len())?;
            for c in &checks {
                let status = if c.passed { "ok" } else { "FAILED" };
                writeln!(out, "check {:<13} {:<6} {}", c.name, status, c.detail)?;
            }
        }
        Format::Json => {
            serde_json::to_writer_pretty(
                &mut *out,
                &VerifyJson {
                    constants: rows,
                    checks,
                },
            )?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            for r in &rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verify(failed))
    }
}
