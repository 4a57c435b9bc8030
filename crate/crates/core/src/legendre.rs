//! Legendre-form elliptic curves `y^2 = x(x-1)(x-λ)` and their quadratic
//! twists `μ y^2 = x(x-1)(x-λ)`.

use thiserror::Error;

use crate::fields::{FieldElem, FieldError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LegendreError {
    #[error("λ ∈ {{0, 1}} gives a singular cubic")]
    SingularLambda,
    #[error("twist scalar μ must be nonzero")]
    ZeroTwist,
    #[error("the curve is not supersingular")]
    NotSupersingular,
    #[error("classification needs a curve over F_{{p^2}}, got level {0}")]
    NotOverQuadraticField(u32),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Maximal or minimal with respect to the Hasse–Weil bound over F_{p^2}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Extremality {
    Maximal,
    Minimal,
}

impl Extremality {
    pub fn as_str(&self) -> &'static str {
        match self {
            Extremality::Maximal => "Maximal",
            Extremality::Minimal => "Minimal",
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Extremality::Maximal => Extremality::Minimal,
            Extremality::Minimal => Extremality::Maximal,
        }
    }
}

impl std::fmt::Display for Extremality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

fn check_lambda(lambda: &FieldElem<'_>) -> Result<(), LegendreError> {
    if lambda.is_zero() || lambda.is_one() {
        Err(LegendreError::SingularLambda)
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LegendreCurve<'a> {
    lambda: FieldElem<'a>,
}

impl<'a> LegendreCurve<'a> {
    pub fn new(lambda: FieldElem<'a>) -> Result<Self, LegendreError> {
        check_lambda(&lambda)?;
        Ok(LegendreCurve { lambda })
    }

    pub fn lambda(&self) -> FieldElem<'a> {
        self.lambda
    }

    pub fn j_invariant(&self) -> FieldElem<'a> {
        j_invariant(self.lambda).expect("checked at construction")
    }

    pub fn deuring(&self) -> SsVerdict<'a> {
        deuring_eval(self.lambda).expect("checked at construction")
    }

    pub fn is_supersingular(&self) -> bool {
        self.deuring().supersingular
    }

    /// Number of points over the curve's field, including the point at infinity.
    pub fn count_points(&self) -> u64 {
        twisted_count(None, self.lambda)
    }

    pub fn as_twist(&self) -> TwistedLegendre<'a> {
        TwistedLegendre {
            mu: self.lambda.ctx().one(),
            lambda: self.lambda,
        }
    }
}

/// `μ y^2 = x(x-1)(x-λ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwistedLegendre<'a> {
    mu: FieldElem<'a>,
    lambda: FieldElem<'a>,
}

impl<'a> TwistedLegendre<'a> {
    pub fn new(mu: FieldElem<'a>, lambda: FieldElem<'a>) -> Result<Self, LegendreError> {
        if mu.is_zero() {
            return Err(LegendreError::ZeroTwist);
        }
        check_lambda(&lambda)?;
        mu.checked_add(lambda)?;
        Ok(TwistedLegendre { mu, lambda })
    }

    pub fn mu(&self) -> FieldElem<'a> {
        self.mu
    }

    pub fn lambda(&self) -> FieldElem<'a> {
        self.lambda
    }

    pub fn untwisted(&self) -> LegendreCurve<'a> {
        LegendreCurve {
            lambda: self.lambda,
        }
    }

    pub fn is_supersingular(&self) -> bool {
        self.untwisted().is_supersingular()
    }

    pub fn count_points(&self) -> u64 {
        twisted_count(Some(self.mu), self.lambda)
    }
}

/// Value of the Deuring polynomial at λ, with the supersingularity verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SsVerdict<'a> {
    pub supersingular: bool,
    pub hasse_value: FieldElem<'a>,
}

/// `2^8 (λ^2 - λ + 1)^3 / (λ^2 (λ - 1)^2)`.
pub fn j_invariant(lambda: FieldElem<'_>) -> Result<FieldElem<'_>, LegendreError> {
    check_lambda(&lambda)?;
    let one = lambda.ctx().one();
    let n = lambda * lambda - lambda + one;
    let d = lambda * (lambda - one);
    Ok((n * n * n).scale(256) * (d * d).inv()?)
}

/// Coefficients `C(m, i)^2 mod p`, `m = (p - 1)/2`, of the Deuring polynomial
/// `H_p(λ) = Σ C(m, i)^2 λ^i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeuringPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl DeuringPoly {
    pub fn new(p: u64) -> Self {
        let m = (p - 1) / 2;
        let modulus = crate::fields::Modulus::new(p);
        // C(m, i+1) = C(m, i) (m - i) / (i + 1); every i + 1 <= m < p is invertible.
        let mut row = Vec::with_capacity(m as usize + 1);
        let mut c = 1u64;
        row.push(1);
        for i in 0..m {
            c = modulus.mul(c, (m - i) % p);
            c = modulus.mul(c, modulus.inv(i + 1));
            row.push(c);
        }
        let coeffs = row.into_iter().map(|b| modulus.mul(b, b)).collect();
        DeuringPoly { p, coeffs }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `C(m, i)^2 mod p`, lowest degree first.
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn eval<'a>(&self, lambda: FieldElem<'a>) -> FieldElem<'a> {
        debug_assert_eq!(lambda.ctx().p(), self.p);
        let ctx = lambda.ctx();
        self.coeffs
            .iter()
            .rev()
            .fold(ctx.zero(), |acc, &c| acc * lambda + ctx.from_u64(c))
    }

    /// `den^m · H_p(num/den)`, which vanishes iff `H_p(num/den)` does when
    /// `den ≠ 0`. Avoids the inversion.
    pub fn eval_homogeneous<'a>(&self, num: FieldElem<'a>, den: FieldElem<'a>) -> FieldElem<'a> {
        let mut acc = num.ctx().from_u64(*self.coeffs.last().expect("m >= 1"));
        let mut den_pow = den.ctx().one();
        for &c in self.coeffs.iter().rev().skip(1) {
            den_pow *= den;
            acc = acc * num + den_pow.scale(c as i64);
        }
        acc
    }
}

/// Evaluates the Deuring polynomial at λ. Valid at any tower level, since the
/// criterion depends on the characteristic only.
pub fn deuring_eval(lambda: FieldElem<'_>) -> Result<SsVerdict<'_>, LegendreError> {
    check_lambda(&lambda)?;
    let h = DeuringPoly::new(lambda.ctx().p()).eval(lambda);
    Ok(SsVerdict {
        supersingular: h.is_zero(),
        hasse_value: h,
    })
}

/// `q + 1 + Σ_x χ(μ^{-1} x(x-1)(x-λ))`; one point at infinity.
fn twisted_count(mu: Option<FieldElem<'_>>, lambda: FieldElem<'_>) -> u64 {
    let ctx = match mu {
        Some(m) if m.level() > lambda.level() => m.ctx(),
        _ => lambda.ctx(),
    };
    let q = u64::try_from(ctx.order()).expect("field too large to count");
    let one = ctx.one();
    let mu_inv = mu.map(|m| m.inv().expect("nonzero twist"));
    let mut sum: i64 = 0;
    for x in ctx.elements() {
        let mut f = x * (x - one) * (x - lambda);
        if let Some(mi) = mu_inv {
            f = f * mi;
        }
        sum += f.legendre() as i64;
    }
    (q as i64 + 1 + sum) as u64
}

fn require_quadratic(level: u32) -> Result<(), LegendreError> {
    if level == 2 {
        Ok(())
    } else {
        Err(LegendreError::NotOverQuadraticField(level))
    }
}

/// Supersingular Legendre curves over F_{p^2} are maximal for p ≡ 3 (mod 4)
/// and minimal for p ≡ 1 (mod 4).
pub fn classify_legendre(curve: &LegendreCurve<'_>) -> Result<Extremality, LegendreError> {
    require_quadratic(curve.lambda.level())?;
    if !curve.is_supersingular() {
        return Err(LegendreError::NotSupersingular);
    }
    Ok(if curve.lambda.ctx().p() % 4 == 3 {
        Extremality::Maximal
    } else {
        Extremality::Minimal
    })
}

/// The twist by μ keeps the Legendre verdict when μ is a square and flips it
/// otherwise.
pub fn classify_twist(curve: &TwistedLegendre<'_>) -> Result<Extremality, LegendreError> {
    require_quadratic(curve.lambda.level().max(curve.mu.level()))?;
    let base = classify_legendre(&curve.untwisted())?;
    Ok(if curve.mu.is_square() {
        base
    } else {
        base.flipped()
    })
}
