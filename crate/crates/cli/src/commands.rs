use std::io::Write;
use std::path::PathBuf;

use ciani::ciani::{analyze, AnalysisReport, CianiCurve};
use ciani::oracle::{count_ciani_points, hw_verdict, OracleError, PLANE_COUNT_CEILING};
use ciani::scan::{scan_extension, Sieve};
use ciani::{make_field, FieldCtx, FieldElem};
use serde_json::{json, Value};

use crate::args::*;
use crate::census::run_census;
use crate::grammar::parse_element;
use crate::{render, CliError, SCAN_BUDGET, SCHEMA_VERSION};

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze(a) => in_pool(&a.workers, || cmd_analyze(&a)),
        Command::Enumerate(a) => in_pool(&a.workers, || cmd_enumerate(&a)),
        Command::ScanExt(a) => in_pool(&a.workers, || cmd_scan_ext(&a)),
        Command::Count(a) => in_pool(&a.workers, || cmd_count(&a)),
    }
}

fn in_pool<T: Send>(
    workers: &WorkerArgs,
    f: impl FnOnce() -> Result<T, CliError> + Send,
) -> Result<T, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers.workers {
        builder = builder.num_threads(n as usize);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start workers: {e}")))?;
    pool.install(f)
}

fn build_field(f: &FieldArgs) -> Result<FieldCtx, CliError> {
    Ok(make_field(f.p, f.deg, f.d)?)
}

fn parse_curve<'a>(ctx: &'a FieldCtx, c: &CurveArgs) -> Result<CianiCurve<'a>, CliError> {
    let r = parse_element(ctx, &c.r)?;
    let s = parse_element(ctx, &c.s)?;
    let t = parse_element(ctx, &c.t)?;
    CianiCurve::new(r, s, t).map_err(|e| CliError::Usage(e.to_string()))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn render_record(record: &Value, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => render::record_json(record),
        Format::Csv => render::record_csv(record),
        Format::Table => Ok(render::record_table(record)),
    }
}

fn strings(xs: &[FieldElem<'_>]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

pub fn analysis_record(rep: &AnalysisReport<'_>, oracle_note: Option<&str>) -> Value {
    let c = rep.curve;
    let ctx = c.ctx();
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": "analyze",
        "p": ctx.p(),
        "deg": ctx.level(),
        "r": c.r().to_string(),
        "s": c.s().to_string(),
        "t": c.t().to_string(),
        "discriminant": rep.discriminant.to_string(),
        "nonsingular": rep.nonsingular,
        "auto_group": rep.auto_group.as_str(),
        "roots": rep.roots.map(|x| strings(&[x.alpha, x.beta, x.gamma])),
        "lambdas": rep.lambdas.map(|l| strings(&l.lambdas)),
        "j_invariants": rep.j_invariants.map(|j| strings(&j)),
        "superspecial": rep.superspecial,
        "delta": rep.munu.map(|m| m.delta.to_string()),
        "mu": rep.munu.map(|m| strings(&m.mu)),
        "nu": rep.munu.map(|m| strings(&m.nu)),
        "mu_squares": rep.mu_squares,
        "descent": rep.descent.map(|d| json!({
            "products_descend": d.products_descend,
            "delta_descends": d.delta_descends,
            "ratios_fourth_powers": d.ratios_fourth_powers,
            "mu_squareness_consistent": d.mu_squareness_consistent,
        })),
        "verdict": rep.verdict.map(|v| v.as_str()),
        "oracle_count": rep.oracle.map(|o| o.count),
        "oracle_verdict": rep.oracle_verdict.map(|v| v.as_str()),
        "oracle_note": oracle_note,
        "isogeny": rep.isogeny.as_ref().map(|i| json!({
            "quotient_counts": i.quotients,
            "twist_counts": i.twists,
            "legendre_counts": i.legendre,
            "kani_holds": i.kani_holds(),
            "twists_match": i.twists_match(),
        })),
        "violations": rep.violations,
        "failure": rep.failure.as_ref().map(|e| e.to_string()),
    })
}

fn cmd_analyze(a: &AnalyzeArgs) -> Result<(), CliError> {
    let ctx = build_field(&a.field)?;
    let c = parse_curve(&ctx, &a.curve)?;
    let rep = analyze(&c, a.oracle);
    let note = (a.oracle && ctx.order() > PLANE_COUNT_CEILING).then(|| {
        format!("skipped: F_q with q = {} exceeds the ceiling {PLANE_COUNT_CEILING}", ctx.order())
    });
    let record = analysis_record(&rep, note.as_deref());
    emit(&a.output.out, &render_record(&record, a.output.format.unwrap_or(Format::Table))?)?;
    if let Some(e) = &rep.failure {
        return Err(CliError::Violation(e.to_string()));
    }
    if !rep.violations.is_empty() {
        return Err(CliError::Violation(rep.violations.join("; ")));
    }
    Ok(())
}

fn check_budget(triples: u128, acknowledged: bool) -> Result<(), CliError> {
    if triples > SCAN_BUDGET && !acknowledged {
        return Err(CliError::Budget(format!(
            "scan of {triples} triples exceeds the budget of {SCAN_BUDGET}; pass --yes-i-know to run it anyway"
        )));
    }
    Ok(())
}

fn cmd_enumerate(a: &EnumerateArgs) -> Result<(), CliError> {
    if a.field.deg != 2 {
        return Err(CliError::Usage(format!(
            "enumerate scans F_{{p^2}}; --deg must be 2, got {}",
            a.field.deg
        )));
    }
    let ctx = build_field(&a.field)?;
    check_budget(ctx.order().pow(3), a.yes_i_know)?;
    let census = run_census(&ctx, a.oracle, a.sample, a.seed)?;
    let format = a.output.format.unwrap_or(Format::Csv);
    let text = match format {
        Format::Json => render::census_json(&census)?,
        Format::Csv => render::census_csv(&census)?,
        Format::Table => render::census_table(&census),
    };
    emit(&a.output.out, &text)?;
    if format == Format::Csv {
        eprintln!("p = {}: {}", census.p, census.summary);
    }
    if !census.violations.is_empty() {
        for v in &census.violations {
            eprintln!("violation: {v}");
        }
        return Err(CliError::Violation(format!(
            "{} census rows violate an invariant",
            census.violations.len()
        )));
    }
    Ok(())
}

fn cmd_scan_ext(a: &ScanExtArgs) -> Result<(), CliError> {
    if a.deg != 4 {
        return Err(CliError::Usage(format!(
            "scan-ext scans F_{{p^4}} against F_{{p^2}}; --deg must be 4, got {}",
            a.deg
        )));
    }
    let ext = make_field(a.p, 4, a.d)?;
    check_budget(ext.order().pow(3), a.yes_i_know)?;
    let sub = make_field(a.p, 2, a.d)?;

    let sieve = Sieve::new(&ext)?;
    let scan = scan_extension(&sieve, &sub)?;
    let sub_census = run_census(&sub, false, None, 0)?;
    let outside: Vec<String> = scan
        .outside
        .iter()
        .map(|idx| {
            let [r, s, t] = idx.map(|k| sieve.element(k).to_string());
            format!("({r}, {s}, {t})")
        })
        .collect();
    let record = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "scan-ext",
        "p": a.p,
        "deg": a.deg,
        "triples": scan.summary.triples,
        "nonsingular": scan.summary.nonsingular,
        "superspecial": scan.summary.superspecial.len(),
        "inside_subfield": scan.inside.len(),
        "outside_subfield": scan.outside.len(),
        "subfield_census": sub_census.summary.superspecial,
        "outside_curves": outside,
    });
    let text = match a.output.format.unwrap_or(Format::Table) {
        Format::Table => format!(
            "triples scanned: {}\nnonsingular: {}\nsuperspecial: {}\ninside-subfield superspecial curves: {}\noutside-subfield superspecial curves: {}\nsubfield census (enumerate --p {}): {}\n{}",
            scan.summary.triples,
            scan.summary.nonsingular,
            scan.summary.superspecial.len(),
            scan.inside.len(),
            scan.outside.len(),
            a.p,
            sub_census.summary.superspecial,
            outside.iter().map(|c| format!("outside: {c}\n")).collect::<String>(),
        ),
        f => render_record(&record, f)?,
    };
    emit(&a.output.out, &text)?;

    let mut problems = Vec::new();
    if !scan.outside.is_empty() {
        problems.push(format!(
            "{} superspecial curves have coefficients outside F_{}^2",
            scan.outside.len(),
            a.p
        ));
    }
    if scan.inside.len() as u64 != sub_census.summary.superspecial {
        problems.push(format!(
            "subfield curves found in the extension scan ({}) differ from the direct census ({})",
            scan.inside.len(),
            sub_census.summary.superspecial
        ));
    }
    if !sub_census.violations.is_empty() {
        problems.extend(sub_census.violations);
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(CliError::Violation(problems.join("; ")))
    }
}

fn cmd_count(a: &CountArgs) -> Result<(), CliError> {
    let ctx = build_field(&a.field)?;
    let c = parse_curve(&ctx, &a.curve)?;
    let plane = count_ciani_points(&c, &ctx).map_err(|e| match e {
        OracleError::FieldTooLarge { .. } => CliError::Budget(e.to_string()),
        other => CliError::Usage(other.to_string()),
    })?;
    let verdict = match hw_verdict(plane.count, plane.q, 3) {
        Ok(v) => Some(v.as_str()),
        Err(OracleError::NonSquareQ(_)) => None,
        Err(e) => return Err(CliError::Usage(e.to_string())),
    };
    let record = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "count",
        "p": ctx.p(),
        "deg": ctx.level(),
        "q": plane.q,
        "r": c.r().to_string(),
        "s": c.s().to_string(),
        "t": c.t().to_string(),
        "count": plane.count,
        "verdict": verdict,
        "elapsed_ms": plane.elapsed.as_secs_f64() * 1e3,
    });
    emit(&a.output.out, &render_record(&record, a.output.format.unwrap_or(Format::Table))?)
}
