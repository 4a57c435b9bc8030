//! Acceptance suite: eleven end-to-end criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the report is always printed; the
//! process exits non-zero when any criterion fails.

use std::collections::HashMap;
use std::process::Command;
use std::time::Instant;

use ciani::ciani::{
    check_field_descent, check_field_descent_with, classify, classify_ext, classify_with,
    is_nonsingular, is_superspecial, is_superspecial_with, lambdas, mu_nu, mu_nu_with,
    rst_from_lambdas, sqrt_triple, CianiCurve,
};
use ciani::legendre::{deuring_eval, Extremality};
use ciani::oracle::{count_ciani_points, hw_verdict, verify_isogeny_counts, HwVerdict};
use ciani::{make_field, FieldCtx, FieldElem};
use ciani_cli::census::run_census;
use ciani_cli::grammar::parse_element;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn field(p: u64, level: u32) -> FieldCtx {
    make_field(p, level, None).expect("valid field")
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_ciani")
}

fn run_json(args: &[&str]) -> Result<Value, String> {
    let out = Command::new(bin())
        .args(args)
        .output()
        .map_err(|e| format!("cannot run ciani: {e}"))?;
    if !out.status.success() {
        return Err(format!(
            "`ciani {}` exited with {:?}: {}",
            args.join(" "),
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    serde_json::from_slice(&out.stdout).map_err(|e| format!("bad JSON from `ciani {}`: {e}", args.join(" ")))
}

/// `#{(x, y) : y^2 = x(x-1)(x-λ)} + 1`, with square roots counted from a
/// table of all squares.
fn legendre_count_by_table(lambda: FieldElem<'_>, roots: &HashMap<FieldElem<'_>, u64>) -> u64 {
    let ctx = lambda.ctx();
    let one = ctx.one();
    1 + ctx
        .elements()
        .map(|x| {
            let f = x * (x - one) * (x - lambda);
            roots.get(&f).copied().unwrap_or(0)
        })
        .sum::<u64>()
}

fn square_table(ctx: &FieldCtx) -> HashMap<FieldElem<'_>, u64> {
    let mut roots = HashMap::new();
    for y in ctx.elements() {
        *roots.entry(y * y).or_insert(0) += 1;
    }
    roots
}

fn random_nonsingular<'a>(ctx: &'a FieldCtx, rng: &mut ChaCha8Rng) -> CianiCurve<'a> {
    loop {
        let q = ctx.order();
        let [r, s, t] = [(); 3].map(|_| ctx.element_at(rng.gen_range(0..q)));
        let c = CianiCurve::new(r, s, t).expect("one field");
        if is_nonsingular(&c) {
            return c;
        }
    }
}

/// `(3/√-2, -9/4, 3/√-2)`.
fn example_curve(ctx: &FieldCtx) -> CianiCurve<'_> {
    let root = ctx.from_i64(-2).sqrt().expect("every element of F_p is a square in F_p^2");
    let r = ctx.from_u64(3) / root;
    CianiCurve::new(r, ctx.from_i64(-9) / ctx.from_u64(4), r).expect("one field")
}

fn criterion_1() -> Outcome {
    let mut checked = 0;
    for p in [3u64, 5, 7, 11, 13] {
        let f = field(p, 2);
        let roots = square_table(&f);
        for lambda in f.elements().filter(|l| !l.is_zero() && !l.is_one()) {
            let ss = deuring_eval(lambda).map_err(|e| e.to_string())?.supersingular;
            let n = legendre_count_by_table(lambda, &roots);
            ensure!(ss == (n % p == 1), "p={p} λ={lambda}: Deuring says {ss}, count {n}");
            checked += 1;
        }
    }
    Ok(format!("{checked} λ values"))
}

fn criterion_2() -> Outcome {
    let mut supersingular = 0;
    for p in [3u64, 5, 7, 11, 13] {
        let f = field(p, 2);
        let roots = square_table(&f);
        let q = p * p;
        let expected = if p % 4 == 3 { q + 1 + 2 * p } else { q + 1 - 2 * p };
        for lambda in f.elements().filter(|l| !l.is_zero() && !l.is_one()) {
            if !deuring_eval(lambda).map_err(|e| e.to_string())?.supersingular {
                continue;
            }
            supersingular += 1;
            let n = legendre_count_by_table(lambda, &roots);
            ensure!(n == expected, "p={p} λ={lambda}: count {n}, expected {expected}");
            ensure!(
                lambda.is_fourth_power().map_err(|e| e.to_string())?,
                "p={p} λ={lambda} is not a fourth power"
            );
        }
    }
    Ok(format!("{supersingular} supersingular λ values"))
}

fn check_rows(v: &Value, p: u64, min_checked: usize) -> Result<(usize, usize), String> {
    let rows = v["rows"].as_array().ok_or("missing rows")?;
    ensure!(!rows.is_empty(), "p={p}: no superspecial curves found");
    let q = p * p;
    let mut checked = 0;
    for row in rows {
        ensure!(row["superspecial"] == Value::Bool(true), "p={p}: non-superspecial row {row}");
        let verdict = row["verdict"].as_str().ok_or_else(|| format!("p={p}: row without verdict {row}"))?;
        if let Some(n) = row["oracle_count"].as_u64() {
            checked += 1;
            let expected = match verdict {
                "Maximal" => q + 1 + 6 * p,
                "Minimal" => q + 1 - 6 * p,
                other => return Err(format!("p={p}: unknown verdict {other}")),
            };
            ensure!(n == expected, "p={p}: {row} has count {n}, verdict {verdict}");
        }
        let ctx = field(p, 2);
        let [r, s, t] = ["r", "s", "t"].map(|k| row[k].as_str().unwrap_or("").to_string());
        let c = CianiCurve::new(
            parse_element(&ctx, &r).map_err(|e| e.to_string())?,
            parse_element(&ctx, &s).map_err(|e| e.to_string())?,
            parse_element(&ctx, &t).map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?;
        let again = classify(&c).map_err(|e| format!("p={p} {c}: {e}"))?;
        ensure!(again.as_str() == verdict, "p={p} {c}: re-parsed verdict {again}");
    }
    ensure!(
        checked >= min_checked.min(rows.len()),
        "p={p}: only {checked} rows checked by the oracle"
    );
    Ok((rows.len(), checked))
}

fn criterion_3() -> Outcome {
    let mut notes = Vec::new();
    for p in [3u64, 7] {
        let v = run_json(&["enumerate", "--p", &p.to_string(), "--oracle", "--format", "json"])?;
        let (n, checked) = check_rows(&v, p, usize::MAX)?;
        ensure!(checked == n, "p={p}: {checked} of {n} rows verified");
        ensure!(
            v["summary"]["triples"].as_u64() == Some(p.pow(6)),
            "p={p}: summary {}",
            v["summary"]
        );
        notes.push(format!("p={p}: {n}/{n}"));
    }
    for p in [11u64, 13] {
        let v = run_json(&[
            "enumerate", "--p", &p.to_string(), "--oracle", "--sample", "200", "--seed", "1", "--format", "json",
        ])?;
        let (n, checked) = check_rows(&v, p, 200)?;
        notes.push(format!("p={p}: {checked}/{n}"));
    }
    Ok(format!("oracle-verified {}", notes.join(", ")))
}

fn criterion_4() -> Outcome {
    let v = run_json(&["scan-ext", "--p", "3", "--deg", "4", "--format", "json"])?;
    ensure!(v["triples"].as_u64() == Some(81u64.pow(3)), "scanned {}", v["triples"]);
    ensure!(v["outside_subfield"].as_u64() == Some(0), "outside-subfield curves: {}", v["outside_subfield"]);
    ensure!(
        v["inside_subfield"] == v["subfield_census"],
        "inside {} vs census {}",
        v["inside_subfield"],
        v["subfield_census"]
    );
    Ok(format!(
        "{} triples, {} superspecial, 0 outside F_9",
        v["triples"], v["superspecial"]
    ))
}

fn criterion_5() -> Outcome {
    for p in [7u64, 11, 19, 23] {
        let f = field(p, 2);
        let c = example_curve(&f);
        ensure!(is_superspecial(&c).map_err(|e| e.to_string())?, "p={p}: not superspecial");
        ensure!(classify(&c).map_err(|e| e.to_string())? == Extremality::Maximal, "p={p}: not maximal");
        let n = count_ciani_points(&c, &f).map_err(|e| e.to_string())?.count;
        ensure!(n == p * p + 1 + 6 * p, "p={p}: count {n}");
        for j in lambdas(&c).and_then(|l| l.j_invariants()).map_err(|e| e.to_string())? {
            ensure!(j == f.from_u64(1728), "p={p}: j = {j}");
        }
        let mu1 = mu_nu(&c).map_err(|e| e.to_string())?.mu1();
        let target = f.from_u64(17) / f.from_u64(2) * f.from_i64(-1).sqrt().expect("square in F_p^2");
        ensure!(mu1.same_value(&target) || mu1.same_value(&-target), "p={p}: μ1 = {mu1}");
        ensure!(mu1.is_square(), "p={p}: μ1 not a square");
    }
    for p in [5u64, 13, 17] {
        let f = field(p, 2);
        let c = example_curve(&f);
        // at p = 17 the discriminant -289/16 vanishes: singular, hence not superspecial
        let ss = is_nonsingular(&c) && is_superspecial(&c).map_err(|e| e.to_string())?;
        ensure!(!ss, "p={p}: unexpectedly superspecial");
    }
    Ok("maximal at 7, 11, 19, 23; not superspecial at 5, 13, 17".into())
}

fn enumerated_curves(ctx: &FieldCtx) -> Result<Vec<CianiCurve<'_>>, String> {
    let census = run_census(ctx, false, None, 0).map_err(|e| e.to_string())?;
    census
        .rows
        .iter()
        .map(|row| {
            let parse = |s: &str| parse_element(ctx, s).map_err(|e| e.to_string());
            CianiCurve::new(parse(&row.r)?, parse(&row.s)?, parse(&row.t)?).map_err(|e| e.to_string())
        })
        .collect()
}

fn criterion_6() -> Outcome {
    let mut total = 0;
    for p in [3u64, 7, 11, 13] {
        let f = field(p, 2);
        for c in enumerated_curves(&f)? {
            let d = check_field_descent(&c).map_err(|e| format!("p={p} {c}: {e}"))?;
            ensure!(d.delta_descends, "p={p} {c}: Δ not in F_p^2");
            ensure!(d.products_descend, "p={p} {c}: root products not in F_p^2");
            ensure!(d.ratios_fourth_powers, "p={p} {c}: ratios not fourth powers");
            ensure!(d.mu_squareness_consistent, "p={p} {c}: μ square classes disagree");
            total += 1;
        }
    }
    Ok(format!("{total} superspecial curves"))
}

fn criterion_7() -> Outcome {
    let mut total = 0;
    for p in [3u64, 7] {
        let f = field(p, 2);
        for c in enumerated_curves(&f)? {
            let counts = verify_isogeny_counts(&c).map_err(|e| format!("p={p} {c}: {e}"))?;
            ensure!(
                counts.twists_match() == Some(true),
                "p={p} {c}: #E_i = {:?}, #E'_i = {:?}",
                counts.quotients,
                counts.twists
            );
            total += 1;
        }
    }
    Ok(format!("{total} curves, 3 quotient pairs each"))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for p in [7u64, 11] {
        let f = field(p, 2);
        for _ in 0..100 {
            let c = random_nonsingular(&f, &mut rng);
            let lt = lambdas(&c).map_err(|e| e.to_string())?;
            let back = rst_from_lambdas(&lt).map_err(|e| format!("p={p} {c}: {e}"))?;
            let lt2 = lambdas(&back).map_err(|e| format!("p={p} {c} -> {back}: {e}"))?;
            let js = lt.j_multiset(&f).map_err(|e| e.to_string())?;
            let js2 = lt2.j_multiset(&f).map_err(|e| e.to_string())?;
            ensure!(js == js2, "p={p} {c} -> {back}: j multisets differ");
            ensure!(
                is_superspecial(&c).map_err(|e| e.to_string())?
                    == is_superspecial(&back).map_err(|e| e.to_string())?,
                "p={p} {c} -> {back}: superspeciality changed"
            );
        }
    }
    Ok("200 round trips".into())
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut notes = Vec::new();
    for p in [3u64, 5, 7] {
        let f = field(p, 2);
        let mut tested = 0;
        let mut attempts = 0;
        while tested < 100 {
            attempts += 1;
            ensure!(attempts < 1_000_000, "p={p}: too few curves with rational λ");
            let c = random_nonsingular(&f, &mut rng);
            let lt = lambdas(&c).map_err(|e| e.to_string())?;
            if lt.lambdas.iter().any(|l| l.level() != 2) {
                continue;
            }
            let counts = verify_isogeny_counts(&c).map_err(|e| format!("p={p} {c}: {e}"))?;
            ensure!(
                counts.kani_holds(),
                "p={p} {c}: #C = {}, #E_i = {:?}",
                counts.curve,
                counts.quotients
            );
            tested += 1;
        }
        notes.push(format!("p={p}: 100"));
    }
    Ok(notes.join(", "))
}

fn criterion_10() -> Outcome {
    let f9 = field(3, 2);
    let fermat = CianiCurve::from_ints(&f9, 0, 0, 0);
    let n9 = count_ciani_points(&fermat, &f9).map_err(|e| e.to_string())?.count;
    ensure!(n9 == 28, "count over F_9: {n9}");
    ensure!(hw_verdict(n9, 9, 3).map_err(|e| e.to_string())? == HwVerdict::Maximal, "F_9 not maximal");
    let f81 = f9.extension().map_err(|e| e.to_string())?;
    let n81 = count_ciani_points(&fermat, f81).map_err(|e| e.to_string())?.count;
    ensure!(n81 == 28 && 28 == 81 + 1 - 54, "count over F_81: {n81}");
    ensure!(hw_verdict(n81, 81, 3).map_err(|e| e.to_string())? == HwVerdict::Minimal, "F_81 not minimal");
    ensure!(
        classify_ext(&fermat, 2).map_err(|e| e.to_string())? == Extremality::Minimal,
        "classify_ext(e=2) is not Minimal at p=3"
    );

    let f49 = field(7, 2);
    let c = example_curve(&f49);
    ensure!(is_superspecial(&c).map_err(|e| e.to_string())?, "p=7 example is not superspecial");
    let f2401 = f49.extension().map_err(|e| e.to_string())?;
    let n = count_ciani_points(&c, f2401).map_err(|e| e.to_string())?.count;
    ensure!(n == 2401 + 1 - 294, "count over F_2401: {n}");
    ensure!(
        classify_ext(&c, 2).map_err(|e| e.to_string())? == Extremality::Minimal,
        "classify_ext(e=2) is not Minimal at p=7"
    );
    Ok("F_9: 28 maximal, F_81: 28 minimal, F_2401: 2108 minimal".into())
}

fn sign_robust(c: &CianiCurve<'_>) -> Result<(), String> {
    let roots = sqrt_triple(c).map_err(|e| e.to_string())?;
    let munu = mu_nu(c).map_err(|e| e.to_string())?;
    let ss = is_superspecial(c).map_err(|e| e.to_string())?;
    let verdict = classify(c).ok();
    let descent = check_field_descent(c).ok();
    for mask in 0..16u8 {
        let r = roots.flipped([mask & 1 != 0, mask & 2 != 0, mask & 4 != 0]);
        let m = if mask & 8 != 0 {
            mu_nu_with(c, -munu.delta).map_err(|e| e.to_string())?
        } else {
            munu
        };
        ensure!(is_superspecial_with(c, &r).map_err(|e| e.to_string())? == ss, "{c} mask {mask}: superspecial");
        ensure!(classify_with(c, &r, &m).ok() == verdict, "{c} mask {mask}: verdict");
        ensure!(check_field_descent_with(c, &r, &m).ok() == descent, "{c} mask {mask}: descent");
    }
    Ok(())
}

fn criterion_11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut superspecial = 0;
    for p in [7u64, 11] {
        let f = field(p, 2);
        for _ in 0..50 {
            sign_robust(&random_nonsingular(&f, &mut rng))?;
        }
        for c in enumerated_curves(&f)? {
            sign_robust(&c)?;
            superspecial += 1;
        }
    }
    Ok(format!("100 random curves and {superspecial} superspecial curves, 16 patterns each"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("supersingularity oracle equivalence", criterion_1),
        ("supersingular Legendre counts and fourth powers", criterion_2),
        ("exhaustive census matches point counts", criterion_3),
        ("no superspecial curve outside F_9 over F_81", criterion_4),
        ("explicit maximal curve (3/√-2, -9/4, 3/√-2)", criterion_5),
        ("field descent on every superspecial curve", criterion_6),
        ("quotient curves and twists have equal counts", criterion_7),
        ("λ-triple inverse map round trip", criterion_8),
        ("Kani count identity", criterion_9),
        ("minimal over even-degree extensions", criterion_10),
        ("independence from square-root signs", criterion_11),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.1}s)", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({secs:.1}s)", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
