//! Ciani quartics `x^4 + y^4 + z^4 + r x^2 y^2 + s y^2 z^2 + t z^2 x^2 = 0`.
//!
//! The pipeline runs from the coefficient triple to the three quotient
//! elliptic curves `E_i = C/<σ_i>` in Legendre form, the superspeciality test
//! (all three `E_i` supersingular), the twist scalars `μ_i, ν_i` and finally
//! the maximal/minimal verdict over F_{p^2}.
//!
//! Square roots (`α, β, γ, Δ`) are always the canonical roots of
//! [`FieldElem::sqrt`], taken one tower level up when they do not exist in the
//! curve's field. Every `*_with` variant accepts an arbitrary choice of roots
//! instead; verdicts do not depend on that choice.

mod autgroup;
mod report;

use thiserror::Error;

use crate::fields::{FieldCtx, FieldElem, FieldError};
use crate::legendre::{
    j_invariant, DeuringPoly, Extremality, LegendreCurve, LegendreError, TwistedLegendre,
};

pub use autgroup::{equivalent_triples, type_classify, AutoGroup};
pub use report::{analyze, AnalysisReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CianiError {
    #[error("the curve is singular")]
    SingularCurve,
    #[error("the curve is not superspecial")]
    NotSuperspecial,
    #[error("λ ∈ {{0, 1}}")]
    SingularLambda,
    #[error("twist scalar μ{0} vanishes")]
    ZeroMu(usize),
    #[error("s = -2 has no D8 standard form")]
    DegenerateS,
    #[error("the D8 standard form is singular")]
    SingularResult,
    #[error("the maximality decision needs a curve over F_{{p^2}}, got level {0}")]
    NotOverQuadraticField(u32),
    #[error("extension degree must be positive")]
    ZeroExtensionDegree,
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Legendre(#[from] LegendreError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CianiCurve<'a> {
    r: FieldElem<'a>,
    s: FieldElem<'a>,
    t: FieldElem<'a>,
}

impl<'a> CianiCurve<'a> {
    /// Coefficients may come from different levels of one tower; all of them
    /// are moved into the largest field involved.
    pub fn new(r: FieldElem<'a>, s: FieldElem<'a>, t: FieldElem<'a>) -> Result<Self, CianiError> {
        let top = [r, s, t]
            .into_iter()
            .max_by_key(|x| x.level())
            .expect("three coefficients")
            .ctx();
        Ok(CianiCurve {
            r: r.embed(top)?,
            s: s.embed(top)?,
            t: t.embed(top)?,
        })
    }

    pub fn from_ints(ctx: &'a FieldCtx, r: i64, s: i64, t: i64) -> Self {
        CianiCurve {
            r: ctx.from_i64(r),
            s: ctx.from_i64(s),
            t: ctx.from_i64(t),
        }
    }

    pub fn ctx(&self) -> &'a FieldCtx {
        self.r.ctx()
    }

    pub fn r(&self) -> FieldElem<'a> {
        self.r
    }

    pub fn s(&self) -> FieldElem<'a> {
        self.s
    }

    pub fn t(&self) -> FieldElem<'a> {
        self.t
    }

    pub fn coeffs(&self) -> [FieldElem<'a>; 3] {
        [self.r, self.s, self.t]
    }

    /// The same curve with its coefficients in a larger field of the tower.
    pub fn embed(&self, target: &'a FieldCtx) -> Result<Self, CianiError> {
        Ok(CianiCurve {
            r: self.r.embed(target)?,
            s: self.s.embed(target)?,
            t: self.t.embed(target)?,
        })
    }

    /// `F(x, y, z)`.
    pub fn eval(&self, x: FieldElem<'a>, y: FieldElem<'a>, z: FieldElem<'a>) -> FieldElem<'a> {
        let (x2, y2, z2) = (x * x, y * y, z * z);
        x2 * x2 + y2 * y2 + z2 * z2 + self.r * x2 * y2 + self.s * y2 * z2 + self.t * z2 * x2
    }

    /// `(rt - 2s, sr - 2t, ts - 2r)`.
    pub fn cross_terms(&self) -> [FieldElem<'a>; 3] {
        let (r, s, t) = (self.r, self.s, self.t);
        [r * t - s.scale(2), s * r - t.scale(2), t * s - r.scale(2)]
    }

    /// `(r^2 - 4, s^2 - 4, t^2 - 4)`.
    pub fn shifted_squares(&self) -> [FieldElem<'a>; 3] {
        let four = self.ctx().from_u64(4);
        [self.r * self.r - four, self.s * self.s - four, self.t * self.t - four]
    }
}

impl std::fmt::Display for CianiCurve<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.r, self.s, self.t)
    }
}

/// `r^2 + s^2 + t^2 - rst - 4`.
pub fn discriminant<'a>(c: &CianiCurve<'a>) -> FieldElem<'a> {
    let (r, s, t) = (c.r, c.s, c.t);
    r * r + s * s + t * t - r * s * t - c.ctx().from_u64(4)
}

/// Nonsingular iff none of r, s, t is ±2 and the discriminant is nonzero.
pub fn is_nonsingular(c: &CianiCurve<'_>) -> bool {
    c.shifted_squares().iter().all(|v| !v.is_zero()) && !discriminant(c).is_zero()
}

fn require_nonsingular(c: &CianiCurve<'_>) -> Result<(), CianiError> {
    if is_nonsingular(c) {
        Ok(())
    } else {
        Err(CianiError::SingularCurve)
    }
}

/// Roots `α, β, γ` of `r^2 - 4, s^2 - 4, t^2 - 4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SqrtTriple<'a> {
    pub alpha: FieldElem<'a>,
    pub beta: FieldElem<'a>,
    pub gamma: FieldElem<'a>,
}

impl<'a> SqrtTriple<'a> {
    /// Negates the roots selected by `flips` (α, β, γ order).
    pub fn flipped(&self, flips: [bool; 3]) -> Self {
        let f = |x: FieldElem<'a>, b: bool| if b { -x } else { x };
        SqrtTriple {
            alpha: f(self.alpha, flips[0]),
            beta: f(self.beta, flips[1]),
            gamma: f(self.gamma, flips[2]),
        }
    }

    /// `(γα, αβ, βγ)`, the products entering λ1, λ2, λ3.
    pub fn products(&self) -> [FieldElem<'a>; 3] {
        [
            self.gamma * self.alpha,
            self.alpha * self.beta,
            self.beta * self.gamma,
        ]
    }
}

pub fn sqrt_triple<'a>(c: &CianiCurve<'a>) -> Result<SqrtTriple<'a>, CianiError> {
    require_nonsingular(c)?;
    let [a, b, g] = c.shifted_squares();
    Ok(SqrtTriple {
        alpha: a.sqrt_lifting()?,
        beta: b.sqrt_lifting()?,
        gamma: g.sqrt_lifting()?,
    })
}

/// The Legendre parameters of `E_1, E_2, E_3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LambdaTriple<'a> {
    pub lambdas: [FieldElem<'a>; 3],
}

impl<'a> LambdaTriple<'a> {
    pub fn new(l1: FieldElem<'a>, l2: FieldElem<'a>, l3: FieldElem<'a>) -> Self {
        LambdaTriple {
            lambdas: [l1, l2, l3],
        }
    }

    pub fn j_invariants(&self) -> Result<[FieldElem<'a>; 3], CianiError> {
        let [a, b, c] = self.lambdas;
        Ok([j_invariant(a)?, j_invariant(b)?, j_invariant(c)?])
    }

    /// Sorted j-invariants, each moved to `base` when it lies there.
    pub fn j_multiset(&self, base: &'a FieldCtx) -> Result<Vec<FieldElem<'a>>, CianiError> {
        let mut js: Vec<_> = self
            .j_invariants()?
            .into_iter()
            .map(|j| j.settle(base))
            .collect();
        js.sort();
        Ok(js)
    }

    pub fn supersingular_flags(&self) -> [bool; 3] {
        let poly = DeuringPoly::new(self.lambdas[0].ctx().p());
        self.lambdas.map(|l| poly.eval(l).is_zero())
    }

    pub fn curves(&self) -> Result<[LegendreCurve<'a>; 3], CianiError> {
        let [a, b, c] = self.lambdas;
        Ok([
            LegendreCurve::new(a)?,
            LegendreCurve::new(b)?,
            LegendreCurve::new(c)?,
        ])
    }
}

pub fn lambdas<'a>(c: &CianiCurve<'a>) -> Result<LambdaTriple<'a>, CianiError> {
    let roots = sqrt_triple(c)?;
    lambdas_with(c, &roots)
}

/// `λ_i = (A_i - g_i)/(A_i + g_i)` with `A = (rt-2s, sr-2t, ts-2r)` and
/// `g = (γα, αβ, βγ)`. Each λ is stored in the curve's field when it lies there.
pub fn lambdas_with<'a>(
    c: &CianiCurve<'a>,
    roots: &SqrtTriple<'a>,
) -> Result<LambdaTriple<'a>, CianiError> {
    require_nonsingular(c)?;
    let cross = c.cross_terms();
    let prods = roots.products();
    let mut out = [c.ctx().zero(); 3];
    for i in 0..3 {
        let mut g = prods[i];
        let mut den = cross[i] + g;
        if den.is_zero() {
            // A_i^2 - g_i^2 = 4·disc, so A_i - g_i is then nonzero.
            g = -g;
            den = cross[i] + g;
        }
        let lambda = ((cross[i] - g) / den).settle(c.ctx());
        if lambda.is_zero() || lambda.is_one() {
            return Err(CianiError::SingularLambda);
        }
        out[i] = lambda;
    }
    Ok(LambdaTriple { lambdas: out })
}

/// Inverse of [`lambdas`]: a coefficient triple whose quotient curves have the
/// given Legendre parameters.
///
/// The three roots `√(λ1λ2), √(λ2λ3), √(λ3λ1)` are canonical except that the
/// last one is negated when needed so that their product is `-λ1λ2λ3`; the
/// other parity yields a curve with an odd number of sign changes, which is
/// in general not isomorphic. The result is one representative of its
/// `[a,b,c]`-type class.
pub fn rst_from_lambdas<'a>(lt: &LambdaTriple<'a>) -> Result<CianiCurve<'a>, CianiError> {
    let [l1, l2, l3] = lt.lambdas;
    for l in [l1, l2, l3] {
        if l.is_zero() || l.is_one() {
            return Err(CianiError::SingularLambda);
        }
    }
    let base = [l1, l2, l3]
        .into_iter()
        .min_by_key(|x| x.level())
        .expect("three lambdas")
        .ctx();
    let one = l1.ctx().one();
    let (p12, p23, p31) = (l1 * l2, l2 * l3, l3 * l1);
    let q12 = p12.sqrt_lifting()?;
    let q23 = p23.sqrt_lifting()?;
    let mut q31 = p31.sqrt_lifting()?;
    if !(q12 * q23 * q31).same_value(&-(l1 * l2 * l3)) {
        q31 = -q31;
    }
    let r = (p12 - p23 - p31 + one) / (q12 * (one - l3));
    let s = (p23 - p31 - p12 + one) / (q23 * (one - l1));
    let t = (p31 - p12 - p23 + one) / (q31 * (one - l2));
    CianiCurve::new(r.settle(base), s.settle(base), t.settle(base))
}

/// `Δ` with `Δ^2 = disc`, and `μ_i = A_i + 2Δ`, `ν_i = A_i - 2Δ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MuNuData<'a> {
    pub delta: FieldElem<'a>,
    pub mu: [FieldElem<'a>; 3],
    pub nu: [FieldElem<'a>; 3],
}

impl<'a> MuNuData<'a> {
    pub fn mu1(&self) -> FieldElem<'a> {
        self.mu[0]
    }
}

pub fn mu_nu<'a>(c: &CianiCurve<'a>) -> Result<MuNuData<'a>, CianiError> {
    require_nonsingular(c)?;
    let delta = discriminant(c).sqrt_lifting()?;
    mu_nu_with(c, delta)
}

pub fn mu_nu_with<'a>(c: &CianiCurve<'a>, delta: FieldElem<'a>) -> Result<MuNuData<'a>, CianiError> {
    require_nonsingular(c)?;
    let two_delta = delta.scale(2);
    let cross = c.cross_terms();
    let base = c.ctx();
    Ok(MuNuData {
        delta: delta.settle(base),
        mu: cross.map(|a| (a + two_delta).settle(base)),
        nu: cross.map(|a| (a - two_delta).settle(base)),
    })
}

/// Superspecial iff all three quotient curves `E_i` are supersingular.
pub fn is_superspecial(c: &CianiCurve<'_>) -> Result<bool, CianiError> {
    Ok(superspecial_from(&lambdas(c)?))
}

pub fn is_superspecial_with<'a>(
    c: &CianiCurve<'a>,
    roots: &SqrtTriple<'a>,
) -> Result<bool, CianiError> {
    Ok(superspecial_from(&lambdas_with(c, roots)?))
}

pub fn superspecial_from(lt: &LambdaTriple<'_>) -> bool {
    lt.supersingular_flags().iter().all(|&b| b)
}

/// The F_{p^2}-rationality facts that hold for every superspecial curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DescentChecks {
    /// αβ, βγ, γα lie in F_{p^2}.
    pub products_descend: bool,
    /// Δ lies in F_{p^2}.
    pub delta_descends: bool,
    /// (r²-4)/(t²-4), (s²-4)/(r²-4), (t²-4)/(s²-4) are fourth powers in F_{p^2}.
    pub ratios_fourth_powers: bool,
    /// μ1, μ2, μ3 are all squares or all non-squares in F_{p^2}.
    pub mu_squareness_consistent: bool,
}

impl DescentChecks {
    pub fn all_hold(&self) -> bool {
        self.products_descend
            && self.delta_descends
            && self.ratios_fourth_powers
            && self.mu_squareness_consistent
    }
}

fn require_quadratic(c: &CianiCurve<'_>) -> Result<(), CianiError> {
    match c.ctx().level() {
        2 => Ok(()),
        l => Err(CianiError::NotOverQuadraticField(l)),
    }
}

fn require_superspecial<'a>(c: &CianiCurve<'a>, roots: &SqrtTriple<'a>) -> Result<(), CianiError> {
    if is_superspecial_with(c, roots)? {
        Ok(())
    } else {
        Err(CianiError::NotSuperspecial)
    }
}

pub fn check_field_descent(c: &CianiCurve<'_>) -> Result<DescentChecks, CianiError> {
    let roots = sqrt_triple(c)?;
    let munu = mu_nu(c)?;
    check_field_descent_with(c, &roots, &munu)
}

pub fn check_field_descent_with<'a>(
    c: &CianiCurve<'a>,
    roots: &SqrtTriple<'a>,
    munu: &MuNuData<'a>,
) -> Result<DescentChecks, CianiError> {
    require_quadratic(c)?;
    require_superspecial(c, roots)?;
    let base = c.ctx();
    let in_base = |x: FieldElem<'a>| matches!(x.try_descend(base), Ok(Some(_)));

    let products_descend = roots.products().into_iter().all(in_base);
    let delta_descends = in_base(munu.delta);

    let [ra, sb, tg] = c.shifted_squares();
    let ratios = [ra / tg, sb / ra, tg / sb];
    let mut ratios_fourth_powers = true;
    for x in ratios {
        ratios_fourth_powers &= x.is_fourth_power()?;
    }

    let mu_squareness_consistent = munu.mu.iter().all(|&m| in_base(m)) && {
        let sq = munu.mu.map(|m| m.is_square());
        sq[0] == sq[1] && sq[1] == sq[2]
    };

    Ok(DescentChecks {
        products_descend,
        delta_descends,
        ratios_fourth_powers,
        mu_squareness_consistent,
    })
}

/// Maximal or minimal over F_{p^2}, decided from the square class of μ1.
pub fn classify(c: &CianiCurve<'_>) -> Result<Extremality, CianiError> {
    let roots = sqrt_triple(c)?;
    let munu = mu_nu(c)?;
    classify_with(c, &roots, &munu)
}

pub fn classify_with<'a>(
    c: &CianiCurve<'a>,
    roots: &SqrtTriple<'a>,
    munu: &MuNuData<'a>,
) -> Result<Extremality, CianiError> {
    require_quadratic(c)?;
    require_superspecial(c, roots)?;
    let base = c.ctx();
    let mut squares = [false; 3];
    for (i, m) in munu.mu.iter().enumerate() {
        let m = m.try_descend(base)?.ok_or_else(|| {
            CianiError::InvariantViolation(format!("μ{} of a superspecial curve is not in F_p^2", i + 1))
        })?;
        squares[i] = m.is_square();
    }
    if squares[0] != squares[1] || squares[1] != squares[2] {
        return Err(CianiError::InvariantViolation(format!(
            "square classes of μ1, μ2, μ3 disagree: {squares:?}"
        )));
    }
    let p3 = base.p() % 4 == 3;
    Ok(if squares[0] == p3 {
        Extremality::Maximal
    } else {
        Extremality::Minimal
    })
}

/// Verdict over F_{p^{2e}}: minimal for even `e`, the F_{p^2} verdict for odd `e`.
pub fn classify_ext(c: &CianiCurve<'_>, e: u32) -> Result<Extremality, CianiError> {
    if e == 0 {
        return Err(CianiError::ZeroExtensionDegree);
    }
    let verdict = classify(c)?;
    Ok(if e % 2 == 0 {
        Extremality::Minimal
    } else {
        verdict
    })
}

/// The curve of `x^4 + y^4 + z^4 + r x^2 yz + s y^2 z^2 = 0`, rewritten as
/// the `[a,b,a]`-type triple with `a = r/√(s+2)` and `b = 2 - 16/(s+2)`.
pub fn d8_standard_form<'a>(r: FieldElem<'a>, s: FieldElem<'a>) -> Result<CianiCurve<'a>, CianiError> {
    let base = if r.level() <= s.level() { r.ctx() } else { s.ctx() };
    let s2 = s + s.ctx().from_u64(2);
    if s2.is_zero() {
        return Err(CianiError::DegenerateS);
    }
    let root = s2.sqrt_lifting()?;
    let a = (r / root).settle(base);
    let b = (s.ctx().from_u64(2) - s.ctx().from_u64(16) / s2).settle(base);
    let c = CianiCurve::new(a, b, a)?;
    if !is_nonsingular(&c) {
        return Err(CianiError::SingularResult);
    }
    Ok(c)
}

/// The 2-isogenous curves `E'_i : μ_i y^2 = x(x-1)(x - ν_i/μ_i)`.
pub fn isogenous_twists<'a>(c: &CianiCurve<'a>) -> Result<[TwistedLegendre<'a>; 3], CianiError> {
    let munu = mu_nu(c)?;
    isogenous_twists_with(&munu)
}

pub fn isogenous_twists_with<'a>(munu: &MuNuData<'a>) -> Result<[TwistedLegendre<'a>; 3], CianiError> {
    let mut out = Vec::with_capacity(3);
    for i in 0..3 {
        let (mu, nu) = (munu.mu[i], munu.nu[i]);
        if mu.is_zero() {
            return Err(CianiError::ZeroMu(i + 1));
        }
        out.push(TwistedLegendre::new(mu, nu / mu)?);
    }
    Ok(out.try_into().expect("three twists"))
}
