use super::*;
use crate::oracle::{self, HwVerdict, IsogenyCounts, PlaneCount};

/// Everything the pipeline can say about one curve. Stages that do not apply
/// (a singular curve has no λ, an ordinary one no verdict) are `None`.
#[derive(Debug, Clone)]
pub struct AnalysisReport<'a> {
    pub curve: CianiCurve<'a>,
    pub discriminant: FieldElem<'a>,
    pub nonsingular: bool,
    pub roots: Option<SqrtTriple<'a>>,
    pub lambdas: Option<LambdaTriple<'a>>,
    pub j_invariants: Option<[FieldElem<'a>; 3]>,
    pub superspecial: Option<bool>,
    pub munu: Option<MuNuData<'a>>,
    /// Square classes of μ1, μ2, μ3 when they lie in the curve's field.
    pub mu_squares: Option<[bool; 3]>,
    pub descent: Option<DescentChecks>,
    pub verdict: Option<Extremality>,
    pub auto_group: AutoGroup,
    pub oracle: Option<PlaneCount>,
    pub oracle_verdict: Option<HwVerdict>,
    pub isogeny: Option<IsogenyCounts>,
    /// Failed internal consistency checks; empty for a sound run.
    pub violations: Vec<String>,
    /// The error that stopped the pipeline early, if any.
    pub failure: Option<CianiError>,
}

impl AnalysisReport<'_> {
    /// The verdict agrees with the plane count, when both exist.
    pub fn oracle_agrees(&self) -> Option<bool> {
        let (v, o) = (self.verdict?, self.oracle_verdict?);
        Some(matches!(
            (v, o),
            (Extremality::Maximal, HwVerdict::Maximal) | (Extremality::Minimal, HwVerdict::Minimal)
        ))
    }
}

/// Runs the full pipeline. With `with_oracle`, the plane count, the quotient
/// counts and the twist counts are computed as well (fields up to
/// [`oracle::PLANE_COUNT_CEILING`] elements). Never fails: an error in a
/// later stage is stored in [`AnalysisReport::failure`] next to the stages
/// that completed.
pub fn analyze<'a>(c: &CianiCurve<'a>, with_oracle: bool) -> AnalysisReport<'a> {
    let mut rep = AnalysisReport {
        curve: *c,
        discriminant: discriminant(c),
        nonsingular: is_nonsingular(c),
        roots: None,
        lambdas: None,
        j_invariants: None,
        superspecial: None,
        munu: None,
        mu_squares: None,
        descent: None,
        verdict: None,
        auto_group: type_classify(c),
        oracle: None,
        oracle_verdict: None,
        isogeny: None,
        violations: Vec::new(),
        failure: None,
    };
    if rep.nonsingular {
        if let Err(e) = fill(&mut rep, with_oracle) {
            rep.failure = Some(e);
        }
    }
    rep
}

fn fill<'a>(rep: &mut AnalysisReport<'a>, with_oracle: bool) -> Result<(), CianiError> {
    let curve: CianiCurve<'a> = rep.curve;
    let c = &curve;
    let base = c.ctx();

    let roots = sqrt_triple(c)?;
    let lt = lambdas_with(c, &roots)?;
    let ss = superspecial_from(&lt);
    let munu = mu_nu(c)?;
    rep.roots = Some(roots);
    rep.lambdas = Some(lt);
    rep.j_invariants = Some(lt.j_invariants()?);
    rep.superspecial = Some(ss);
    rep.munu = Some(munu);
    if munu.mu.iter().all(|m| m.level() == base.level()) {
        rep.mu_squares = Some(munu.mu.map(|m| m.is_square()));
    }

    if ss && base.level() == 2 {
        let checks = check_field_descent_with(c, &roots, &munu)?;
        if !checks.all_hold() {
            rep.violations
                .push(format!("descent checks failed on a superspecial curve: {checks:?}"));
        }
        rep.descent = Some(checks);
        match classify_with(c, &roots, &munu) {
            Ok(v) => rep.verdict = Some(v),
            Err(CianiError::InvariantViolation(msg)) => rep.violations.push(msg),
            Err(e) => return Err(e),
        }
    }

    if with_oracle && base.order() <= oracle::PLANE_COUNT_CEILING {
        let plane = oracle::count_ciani_points(c, base).map_err(oracle_to_ciani)?;
        if base.level() % 2 == 0 {
            rep.oracle_verdict =
                Some(oracle::hw_verdict(plane.count, plane.q, 3).map_err(oracle_to_ciani)?);
        }
        rep.oracle = Some(plane);
        let counts = oracle::isogeny_counts_given(c, plane.count).map_err(oracle_to_ciani)?;
        if !counts.kani_holds() {
            rep.violations
                .push(format!("quotient counts do not add up: {counts:?}"));
        }
        if counts.twists_match() == Some(false) {
            rep.violations
                .push(format!("twisted 2-isogenous counts differ from the quotients: {counts:?}"));
        }
        rep.isogeny = Some(counts);
        if rep.oracle_agrees() == Some(false) {
            rep.violations.push(format!(
                "verdict {} contradicts the plane count {}",
                rep.verdict.expect("present"),
                plane.count
            ));
        }
    }
    Ok(())
}

fn oracle_to_ciani(e: oracle::OracleError) -> CianiError {
    match e {
        oracle::OracleError::Ciani(c) => c,
        oracle::OracleError::Field(f) => CianiError::Field(f),
        other => CianiError::InvariantViolation(other.to_string()),
    }
}
