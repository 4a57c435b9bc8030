//! Brute-force point counts over F_q, used to check every verdict of the
//! algebraic pipeline independently.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::ciani::{self, CianiCurve, CianiError};
use crate::fields::{FieldCtx, FieldElem, FieldError};

/// Largest field the plane count accepts (3^8 = 81^2 = 6561).
pub const PLANE_COUNT_CEILING: u128 = 6561;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("F_{q} exceeds the brute-force ceiling of {ceiling} elements")]
    FieldTooLarge { q: u128, ceiling: u128 },
    #[error("q = {0} is not a square")]
    NonSquareQ(u64),
    #[error(transparent)]
    Ciani(#[from] CianiError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlaneCount {
    pub q: u64,
    pub count: u64,
    pub elapsed: Duration,
}

fn check_ceiling(field: &FieldCtx) -> Result<u64, OracleError> {
    let q = field.order();
    if q > PLANE_COUNT_CEILING {
        return Err(OracleError::FieldTooLarge {
            q,
            ceiling: PLANE_COUNT_CEILING,
        });
    }
    Ok(q as u64)
}

/// Number of points of the plane quartic over `field`, which must contain
/// the curve's field.
///
/// Points are split into the charts `(1:y:z)`, `(0:1:z)` and `(0:0:1)`; the
/// affine chart is evaluated with tabulated squares and fourth powers, one
/// `y` per task.
pub fn count_ciani_points(c: &CianiCurve<'_>, field: &FieldCtx) -> Result<PlaneCount, OracleError> {
    let q = check_ceiling(field)?;
    let start = Instant::now();
    let c = c.embed(field)?;
    let (r, s, t) = (c.r(), c.s(), c.t());
    let one = field.one();
    let elems: Vec<FieldElem<'_>> = field.elements().collect();
    let sq: Vec<FieldElem<'_>> = elems.iter().map(|x| x.square()).collect();
    let fourth: Vec<FieldElem<'_>> = sq.iter().map(|x| x.square()).collect();

    let affine: u64 = (0..elems.len())
        .into_par_iter()
        .map(|yi| {
            let a = one + fourth[yi] + r * sq[yi];
            let b = s * sq[yi] + t;
            (0..elems.len())
                .filter(|&zi| (a + fourth[zi] + b * sq[zi]).is_zero())
                .count() as u64
        })
        .sum();

    let zero = field.zero();
    let at_x0 = elems
        .iter()
        .filter(|&&z| c.eval(zero, one, z).is_zero())
        .count() as u64;
    let corner = u64::from(c.eval(zero, zero, one).is_zero());

    Ok(PlaneCount {
        q,
        count: affine + at_x0 + corner,
        elapsed: start.elapsed(),
    })
}

/// Position of a count relative to the Hasse–Weil interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HwVerdict {
    Maximal,
    Minimal,
    Neither,
}

impl HwVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            HwVerdict::Maximal => "Maximal",
            HwVerdict::Minimal => "Minimal",
            HwVerdict::Neither => "Neither",
        }
    }
}

impl std::fmt::Display for HwVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Compares `count` with `q + 1 ± 2g√q`.
pub fn hw_verdict(count: u64, q: u64, genus: u64) -> Result<HwVerdict, OracleError> {
    let root = q.isqrt();
    if root * root != q {
        return Err(OracleError::NonSquareQ(q));
    }
    let width = 2 * genus * root;
    Ok(if count == q + 1 + width {
        HwVerdict::Maximal
    } else if q + 1 >= width && count == q + 1 - width {
        HwVerdict::Minimal
    } else {
        HwVerdict::Neither
    })
}

/// Coefficients `(c1, c12, c2)` of the quotient model
/// `X^2 + c1 X u^2 + c2 X w^2 + u^4 + c12 u^2 w^2 + w^4 = 0` of `E_i`,
/// obtained by setting `X` to the square of the variable fixed by `σ_i`.
fn quotient_coeffs<'a>(c: &CianiCurve<'a>, i: usize) -> [FieldElem<'a>; 3] {
    let (r, s, t) = (c.r(), c.s(), c.t());
    match i {
        1 => [r, s, t],
        2 => [r, t, s],
        3 => [t, r, s],
        _ => panic!("quotient index must be 1, 2 or 3"),
    }
}

/// Points of `E_i = C/<σ_i>` over `field`, counted on its model in the
/// weighted plane P(2,1,1).
pub fn count_quotient_points(c: &CianiCurve<'_>, i: usize, field: &FieldCtx) -> Result<u64, OracleError> {
    check_ceiling(field)?;
    let c = c.embed(field)?;
    let [c1, c12, c2] = quotient_coeffs(&c, i);
    let one = field.one();
    let elems: Vec<FieldElem<'_>> = field.elements().collect();
    let affine: u64 = elems
        .par_iter()
        .map(|&u| {
            let u2 = u.square();
            let lin = c1 * u2 + c2;
            let cst = u2 * u2 + c12 * u2 + one;
            elems
                .iter()
                .filter(|&&x| (x * x + lin * x + cst).is_zero())
                .count() as u64
        })
        .sum();
    let at_infinity = elems
        .iter()
        .filter(|&&x| (x * x + c1 * x + one).is_zero())
        .count() as u64;
    Ok(affine + at_infinity)
}

/// Point counts of a curve and its three quotients over the curve's field,
/// with the Legendre models and the twisted 2-isogenous curves where those
/// are defined over that field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsogenyCounts {
    pub q: u64,
    pub curve: u64,
    pub quotients: [u64; 3],
    /// `y^2 = x(x-1)(x-λ_i)`, present when all λ_i lie in the field.
    pub legendre: Option<[u64; 3]>,
    /// `μ_i y^2 = x(x-1)(x-ν_i/μ_i)`, present when Δ lies in the field.
    pub twists: Option<[u64; 3]>,
}

impl IsogenyCounts {
    /// `#C = #E_1 + #E_2 + #E_3 - 2(q + 1)`.
    pub fn kani_holds(&self) -> bool {
        self.curve + 2 * (self.q + 1) == self.quotients.iter().sum::<u64>()
    }

    /// `#E_i = #E'_i` for each i, when the twists are defined.
    pub fn twists_match(&self) -> Option<bool> {
        self.twists.map(|tw| tw == self.quotients)
    }

    pub fn holds(&self) -> bool {
        self.kani_holds() && self.twists_match().unwrap_or(true)
    }
}

pub fn verify_isogeny_counts(c: &CianiCurve<'_>) -> Result<IsogenyCounts, OracleError> {
    let plane = count_ciani_points(c, c.ctx())?;
    isogeny_counts_given(c, plane.count)
}

/// As [`verify_isogeny_counts`], reusing a plane count already computed.
pub fn isogeny_counts_given(c: &CianiCurve<'_>, curve_count: u64) -> Result<IsogenyCounts, OracleError> {
    let field = c.ctx();
    let q = check_ceiling(field)?;
    let mut quotients = [0; 3];
    for (i, slot) in quotients.iter_mut().enumerate() {
        *slot = count_quotient_points(c, i + 1, field)?;
    }

    let lt = ciani::lambdas(c)?;
    let legendre = if lt.lambdas.iter().all(|l| l.level() == field.level()) {
        let curves = lt.curves()?;
        Some(curves.map(|e| e.count_points()))
    } else {
        None
    };

    let munu = ciani::mu_nu(c)?;
    let twists = if munu.delta.level() == field.level() {
        let tw = ciani::isogenous_twists_with(&munu)?;
        Some(tw.map(|e| e.count_points()))
    } else {
        None
    };

    Ok(IsogenyCounts {
        q,
        curve: curve_count,
        quotients,
        legendre,
        twists,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::make_field;

    fn count_by_other_charts(c: &CianiCurve<'_>, field: &FieldCtx) -> u64 {
        // (x:y:1), (x:1:0), (1:0:0)
        let c = c.embed(field).unwrap();
        let (zero, one) = (field.zero(), field.one());
        let mut n = 0;
        for x in field.elements() {
            for y in field.elements() {
                n += u64::from(c.eval(x, y, one).is_zero());
            }
            n += u64::from(c.eval(x, one, zero).is_zero());
        }
        n + u64::from(c.eval(one, zero, zero).is_zero())
    }

    #[test]
    fn chart_decompositions_agree() {
        for (p, level) in [(3u64, 2), (5, 1), (7, 2), (5, 2)] {
            let f = make_field(p, level, None).unwrap();
            for (k, r) in f.elements().enumerate().step_by(3) {
                let s = f.element_at((k as u128 * 7 + 1) % f.order());
                let t = f.element_at((k as u128 * 11 + 2) % f.order());
                let c = CianiCurve::new(r, s, t).unwrap();
                let fast = count_ciani_points(&c, &f).unwrap().count;
                assert_eq!(fast, count_by_other_charts(&c, &f), "p={p} level={level} c={c}");
            }
        }
    }

    #[test]
    fn fermat_quartic_counts() {
        let f9 = make_field(3, 2, None).unwrap();
        let c = CianiCurve::from_ints(&f9, 0, 0, 0);
        assert_eq!(count_ciani_points(&c, &f9).unwrap().count, 28);
        let f81 = f9.extension().unwrap();
        assert_eq!(count_ciani_points(&c, f81).unwrap().count, 28);
    }

    #[test]
    fn ceiling_is_enforced() {
        let f = make_field(11, 4, None).unwrap();
        let c = CianiCurve::from_ints(&f, 1, 1, 1);
        assert_eq!(
            count_ciani_points(&c, &f).unwrap_err(),
            OracleError::FieldTooLarge {
                q: 14641,
                ceiling: PLANE_COUNT_CEILING
            }
        );
    }

    #[test]
    fn hasse_weil_verdicts() {
        assert_eq!(hw_verdict(28, 9, 3).unwrap(), HwVerdict::Maximal);
        assert_eq!(hw_verdict(28, 81, 3).unwrap(), HwVerdict::Minimal);
        assert_eq!(hw_verdict(2108, 2401, 3).unwrap(), HwVerdict::Minimal);
        assert_eq!(hw_verdict(50, 49, 3).unwrap(), HwVerdict::Neither);
        assert_eq!(hw_verdict(16, 9, 1).unwrap(), HwVerdict::Maximal);
        assert_eq!(hw_verdict(4, 9, 1).unwrap(), HwVerdict::Minimal);
        assert_eq!(hw_verdict(10, 7, 3).unwrap_err(), OracleError::NonSquareQ(7));
    }

    #[test]
    fn quotient_counts_match_quartic_model() {
        // E_1 : v^2 = (r^2-4) u^4 + 2(rt-2s) u^2 + (t^2-4), plus the points at infinity.
        let f = make_field(7, 2, None).unwrap();
        let q = f.order() as i64;
        let mut seen = 0;
        for k in 0..f.order() {
            let r = f.element_at(k);
            let s = f.element_at((k * 5 + 3) % f.order());
            let t = f.element_at((k * 13 + 8) % f.order());
            let c = CianiCurve::new(r, s, t).unwrap();
            if !ciani::is_nonsingular(&c) {
                continue;
            }
            seen += 1;
            let [a, _, g] = c.shifted_squares();
            let b = c.cross_terms()[0].scale(2);
            let sum: i64 = f
                .elements()
                .map(|u| {
                    let u2 = u.square();
                    (a * u2 * u2 + b * u2 + g).legendre() as i64
                })
                .sum();
            let expected = q + sum + 1 + a.legendre() as i64;
            assert_eq!(count_quotient_points(&c, 1, &f).unwrap() as i64, expected);
        }
        assert!(seen > 10);
    }
}
