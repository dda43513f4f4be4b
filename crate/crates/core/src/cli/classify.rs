use std::io::Write;

use serde::Serialize;

use symlseries::symfn::{classify_character, extend, CharacterVerdict, Witness};
use symlseries::{Family, SymmetricFunction};

use super::{ClassifyArgs, Context, Format, Outcome};

#[derive(Serialize)]
struct ClassifyJson {
    family: Family,
    m: u32,
    modulus: u32,
    #[serde(flatten)]
    verdict: CharacterVerdict,
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn explain(f: &SymmetricFunction, w: Witness) -> String {
    let n = f.modulus();
    match w {
        Witness::Residue { a } => {
            let g = gcd(a, n);
            if g == 1 {
                format!("value at {a} is 0 although gcd({a}, {n}) = 1")
            } else {
                format!("value at {a} is {} although gcd({a}, {n}) = {g}", f.value(a))
            }
        }
        Witness::Product { a, b } => {
            let ab = i64::from(a) * i64::from(b);
            format!(
                "value at {a}·{b} is {} but the product of values is {}",
                extend(f, ab),
                f.value(a) * f.value(b)
            )
        }
    }
}

pub fn run(a: &ClassifyArgs, ctx: &Context, out: &mut dyn Write) -> Outcome {
    let f = a.family.build(a.m)?;
    let verdict = classify_character(&f);
    match ctx.format {
        Format::Text => {
            let label = if verdict.is_character {
                "a Dirichlet character"
            } else {
                "not a Dirichlet character"
            };
            writeln!(out, "{} m={} (modulus {}): {label}", a.family, a.m, f.modulus())?;
            if let Some(w) = verdict.witness {
                writeln!(out, "witness: {}", explain(&f, w))?;
            }
        }
        Format::Json => {
            let j = ClassifyJson {
                family: a.family,
                m: a.m,
                modulus: f.modulus(),
                verdict,
            };
            serde_json::to_writer_pretty(&mut *out, &j)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let (kind, wa, wb) = match verdict.witness {
                None => ("", String::new(), String::new()),
                Some(Witness::Residue { a }) => ("residue", a.to_string(), String::new()),
                Some(Witness::Product { a, b }) => ("product", a.to_string(), b.to_string()),
            };
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record([
                "family",
                "m",
                "modulus",
                "is_character",
                "witness_kind",
                "witness_a",
                "witness_b",
            ])?;
            w.write_record([
                a.family.name().to_string(),
                a.m.to_string(),
                f.modulus().to_string(),
                verdict.is_character.to_string(),
                kind.to_string(),
                wa,
                wb,
            ])?;
            w.flush()?;
        }
    }
    Ok(())
}
