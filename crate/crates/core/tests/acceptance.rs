//! One PASS/FAIL line per acceptance criterion. Runs without the libtest
//! harness so the report reads top to bottom; exits nonzero on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Complex, Float};

use symlseries::engine::identities::{cubic_pair, quintic_pair};
use symlseries::engine::{applicable_methods, l_half_sum, split_residual, zeta_limit_study};
use symlseries::exact::{compare_entry, constant_table, euler_numbers, euler_series_value};
use symlseries::hfun::{h_at_root, h_at_x, h_eval_bounded, h_rational, h_series, h_trig};
use symlseries::numeric::{abs_upper, parse_positive, pi, pow2, short_decimal};
use symlseries::symfn::classify_character;
use symlseries::{evaluate, EvalRequest, Family, LValue, Method, Precision};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn p(bits: u32) -> Precision {
    Precision::new(bits).unwrap()
}

fn tol(s: &str) -> Float {
    parse_positive(s, 64).unwrap()
}

fn secs(d: Duration) -> String {
    format!("{:.2} s", d.as_secs_f64())
}

fn golden_constants() -> Verdict {
    let start = Instant::now();
    let table = constant_table();
    let limit = tol("1e-60");
    let mut worst = Float::with_val(64, 0);
    let mut bad = Vec::new();
    for e in &table {
        let c = compare_entry(e, p(256)).map_err(|err| format!("{}: {err}", e.id))?;
        if !(c.residual < limit && c.matched()) {
            bad.push(e.id);
        }
        worst = worst.max(&c.residual);
    }
    let elapsed = start.elapsed();
    if !bad.is_empty() {
        return Err(format!("mismatched: {}", bad.join(", ")));
    }
    if elapsed > Duration::from_secs(10) {
        return Err(format!("took {}", secs(elapsed)));
    }
    Ok(format!(
        "{} entries, max residual {}, {}",
        table.len(),
        short_decimal(&worst),
        secs(elapsed)
    ))
}

fn cross_method() -> Verdict {
    let mut cases = 0;
    let mut slowest = Duration::ZERO;
    let targets = (2..=16u32)
        .map(|m| (Family::Chi, m))
        .chain((1..=8u32).map(|m| (Family::F, m)));
    for (family, m) in targets {
        let f = family.build(m).unwrap();
        for r in [3u32, 5] {
            let mut values: Vec<LValue> = Vec::new();
            for method in applicable_methods(&f, r) {
                let req = EvalRequest::new(f.clone(), r, method)
                    .with_precision(p(256))
                    .with_tolerance(tol("1e-10"));
                let start = Instant::now();
                let v = evaluate(&req).map_err(|e| format!("{family} m={m} r={r} {}: {e}", method.tag()))?;
                if method == Method::Direct {
                    slowest = slowest.max(start.elapsed());
                }
                values.push(v);
            }
            if !values.iter().any(|v| v.method == Method::Direct) || values.len() < 3 {
                return Err(format!("{family} m={m} r={r}: only {} methods applied", values.len()));
            }
            for (i, a) in values.iter().enumerate() {
                for b in &values[i + 1..] {
                    if !a.agrees_with(b) {
                        let (d, allowed) = a.discrepancy(b);
                        return Err(format!(
                            "{family} m={m} r={r}: {} vs {} differ by {} > {}",
                            a.method.tag(),
                            b.method.tag(),
                            short_decimal(&d),
                            short_decimal(&allowed)
                        ));
                    }
                }
            }
            cases += 1;
        }
    }
    if slowest > Duration::from_secs(60) {
        return Err(format!("slowest direct run took {}", secs(slowest)));
    }
    Ok(format!(
        "{cases} cases pairwise consistent, slowest direct run {}",
        secs(slowest)
    ))
}

fn within(a: &Complex, b: &Complex, allowed: &Float) -> bool {
    let bits = a.prec().0.max(b.prec().0);
    abs_upper(&Complex::with_val(bits, a - b)) <= *allowed
}

fn h_three_way() -> Verdict {
    let prec = p(128);
    let mut xs: Vec<Float> = [(1u32, 12u32), (1, 8), (1, 6), (1, 4), (1, 3), (5, 12), (1, 2)]
        .iter()
        .map(|&(a, b)| Float::with_val(256, a) / b)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    xs.extend((0..20).map(|_| Float::with_val(256, rng.gen_range(0.001..0.999))));
    let k = 10_000u64;
    let mut comparisons = 0;
    for x in &xs {
        for r in 1..=5u32 {
            let exact = h_at_x(r, x, prec).map_err(|e| e.to_string())?;
            let trig = h_trig(r, x, prec).map_err(|e| e.to_string())?;
            let slack = abs_upper(&exact.value) * pow2(16 - 128);
            let allowed = Float::with_val(64, &exact.error + &slack);
            if !within(&exact.value, &trig, &allowed) {
                return Err(format!("h_eval vs h_trig at r={r}, x={}", x.to_f64()));
            }
            comparisons += 1;
            if r >= 2 {
                let (series, bound) = h_series(r, x, k, prec).map_err(|e| e.to_string())?;
                let mut allowed = Float::with_val(64, &exact.error + &bound);
                allowed += &slack;
                if !within(&exact.value, &series, &allowed) {
                    return Err(format!("h_eval vs h_series at r={r}, x={}", x.to_f64()));
                }
                let mut allowed = Float::with_val(64, &bound + &slack);
                allowed += &slack;
                if !within(&trig, &series, &allowed) {
                    return Err(format!("h_trig vs h_series at r={r}, x={}", x.to_f64()));
                }
                comparisons += 2;
            }
        }
    }
    Ok(format!("{} points, {comparisons} comparisons at 128 bits", xs.len()))
}

fn symmetry() -> Verdict {
    let prec = p(128);
    let w = 160;
    let mut checked = 0u64;
    for r in 1..=8u32 {
        let h = h_rational(r).map_err(|e| e.to_string())?;
        for n in 2..=48u64 {
            for a in 1..n {
                let v = h_at_root(&h, a, n, prec).map_err(|e| e.to_string())?;
                let slack = abs_upper(&v.value) * pow2(16 - 128);
                let allowed = Float::with_val(64, &v.error + &slack);

                // parity of image
                let stray = if r % 2 == 1 { v.value.real() } else { v.value.imag() };
                if Float::with_val(64, stray.abs_ref()) > allowed {
                    return Err(format!("parity of image fails at r={r}, a={a}, N={n}"));
                }

                // ζ^{N-a} against ζ^a
                let mirror = h_at_root(&h, n - a, n, prec).map_err(|e| e.to_string())?;
                let mut expect = v.value.clone();
                if r % 2 == 1 {
                    expect = -expect;
                }
                let mut both = Float::with_val(64, &v.error + &mirror.error);
                both += &slack;
                if !within(&mirror.value, &expect, &both) {
                    return Err(format!("root-of-unity symmetry fails at r={r}, a={a}, N={n}"));
                }

                // conjugation through the generic evaluator
                let theta = Float::with_val(w, pi(w) * (2 * a)) / n;
                let (s, c) = theta.sin_cos(Float::new(w));
                let t = Complex::with_val(w, (&c, &s));
                let tc = Complex::with_val(w, (&c, -s));
                let lhs = h_eval_bounded(r, &tc, prec).map_err(|e| e.to_string())?;
                let rhs = h_eval_bounded(r, &t, prec).map_err(|e| e.to_string())?;
                let mut expect = rhs.value;
                if r % 2 == 1 {
                    expect = -expect;
                }
                let mut both = Float::with_val(64, &lhs.error + &rhs.error);
                both += &slack;
                if !within(&lhs.value, &expect, &both) {
                    return Err(format!("conjugation law fails at r={r}, a={a}, N={n}"));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (r, a, N) triples, three laws each"))
}

fn identities() -> Verdict {
    let prec = p(256);
    let mut splits = 0;
    for m in 2..=12u32 {
        for r in [3u32, 5, 7] {
            let s = split_residual(m, r, prec).map_err(|e| e.to_string())?;
            if !s.holds() {
                return Err(format!("split residual {} at m={m} r={r}", short_decimal(&s.residual)));
            }
            splits += 1;
        }
    }
    let w = 256;
    let rel_limit = pow2(64 - w as i32);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let rel =
        |a: &Float, b: &Float| Float::with_val(64, Float::with_val(w, a - b).abs() / Float::with_val(w, b.abs_ref()));
    let mut worst = Float::with_val(64, 0);
    for _ in 0..50 {
        let theta = Float::with_val(w, pi(w) * rng.gen_range(1e-6..1.0 - 1e-6));
        let (lhs, rhs) = cubic_pair(&theta);
        let d = rel(&lhs, &rhs);
        if d > rel_limit {
            return Err(format!(
                "double-angle identity off by {} at θ={}",
                short_decimal(&d),
                theta.to_f64()
            ));
        }
        worst = worst.max(&d);
    }
    for _ in 0..50 {
        let theta = Float::with_val(w, pi(w) * rng.gen_range(1e-6..0.5 - 1e-6));
        let (a, b, c) = quintic_pair(&theta);
        let d = rel(&a, &b).max(&rel(&a, &c));
        if d > rel_limit {
            return Err(format!(
                "quintic identity off by {} at θ={}",
                short_decimal(&d),
                theta.to_f64()
            ));
        }
        worst = worst.max(&d);
    }
    Ok(format!(
        "{splits} split residuals within bound, 100 angles with worst relative difference {}",
        short_decimal(&worst)
    ))
}

fn classifier_census() -> Verdict {
    let mut found = Vec::new();
    let all = (2..=12u32)
        .map(|m| (Family::Chi, m))
        .chain((1..=12u32).map(|m| (Family::F, m)));
    for (family, m) in all {
        let f = family.build(m).unwrap();
        let v = classify_character(&f);
        if v.is_character {
            found.push(format!("{}_{}", family.name(), f.modulus()));
        } else if !v.witness_holds(&f) {
            return Err(format!("{family} m={m}: witness does not hold"));
        }
    }
    let want = ["chi_4", "f_4", "f_8"];
    if found == want {
        Ok(format!("characters: {}", found.join(", ")))
    } else {
        Err(format!("characters found: {}", found.join(", ")))
    }
}

fn euler_check() -> Verdict {
    let e = euler_numbers(3);
    if e[2] != 5 {
        return Err(format!("E_4 = {}", e[2]));
    }
    let chi4 = Family::Chi.build(2).unwrap();
    let limit = tol("1e-30");
    let mut worst = Float::with_val(64, 0);
    for q in 1..=3u32 {
        let l = l_half_sum(&chi4, 2 * q + 1, p(256)).map_err(|e| e.to_string())?;
        let want = euler_series_value(q, p(256)).map_err(|e| e.to_string())?;
        let d = l.distance_to(&want);
        if d >= limit {
            return Err(format!("p={q}: off by {}", short_decimal(&d)));
        }
        worst = worst.max(&d);
    }
    Ok(format!("p = 1..3, worst difference {}, E_4 = 5", short_decimal(&worst)))
}

fn limit_study() -> Verdict {
    let schedule = [2u32, 4, 8, 16, 32, 64];
    let mut summary = Vec::new();
    for family in [Family::Chi, Family::F] {
        let study = zeta_limit_study(3, &schedule, family, p(256), &tol("1e-30")).map_err(|e| e.to_string())?;
        for row in &study.rows {
            if row.gap <= row.error_bound {
                return Err(format!("{family}: gap at m={} not positive", row.m));
            }
        }
        let first = &study.rows[0].gap;
        let last = &study.rows[study.rows.len() - 1].gap;
        if last >= first {
            return Err(format!("{family}: gap did not shrink"));
        }
        summary.push(format!(
            "{family} gap {} -> {}",
            short_decimal(first),
            short_decimal(last)
        ));
    }
    Ok(summary.join("; "))
}

fn main() -> ExitCode {
    // libtest-style flags passed by cargo are ignored.
    let criteria: [Criterion; 8] = [
        ("golden constants", golden_constants),
        ("cross-method agreement", cross_method),
        ("h-kernel three-way agreement", h_three_way),
        ("symmetry suite", symmetry),
        ("identity suite", identities),
        ("classifier census", classifier_census),
        ("Euler-coefficient check", euler_check),
        ("limit study", limit_study),
    ];
    let mut failures = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        match check() {
            Ok(detail) => println!("PASS {name}: {detail} [{}]", secs(start.elapsed())),
            Err(detail) => {
                failures += 1;
                println!("FAIL {name}: {detail} [{}]", secs(start.elapsed()));
            }
        }
    }
    println!("{} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
