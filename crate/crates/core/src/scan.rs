//! Exhaustive search for superspecial Ciani curves over a finite field.
//!
//! The sieve evaluates the same λ formulas as [`crate::ciani::lambdas`], but
//! with the roots of `x^2 - 4` tabulated once per field element and the
//! Deuring polynomial evaluated homogeneously on `(A - g, A + g)`, so no
//! inversion is needed and most triples are rejected after one evaluation.

use rayon::prelude::*;

use crate::fields::{FieldCtx, FieldElem, FieldError};
use crate::legendre::DeuringPoly;

/// Outcome of the sieve for one triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Screen {
    Singular,
    Ordinary,
    Superspecial,
}

pub struct Sieve<'a> {
    ctx: &'a FieldCtx,
    elems: Vec<FieldElem<'a>>,
    squares: Vec<FieldElem<'a>>,
    // canonical root of x^2 - 4, possibly one level up; zero exactly for x = ±2
    roots: Vec<FieldElem<'a>>,
    poly: DeuringPoly,
}

impl<'a> Sieve<'a> {
    pub fn new(ctx: &'a FieldCtx) -> Result<Self, FieldError> {
        let elems: Vec<_> = ctx.elements().collect();
        let squares: Vec<_> = elems.iter().map(|x| x.square()).collect();
        let four = ctx.from_u64(4);
        let roots = squares
            .iter()
            .map(|&x2| (x2 - four).sqrt_lifting())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Sieve {
            ctx,
            elems,
            squares,
            roots,
            poly: DeuringPoly::new(ctx.p()),
        })
    }

    pub fn ctx(&self) -> &'a FieldCtx {
        self.ctx
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn element(&self, index: usize) -> FieldElem<'a> {
        self.elems[index]
    }

    /// Classifies the triple `(elems[ri], elems[si], elems[ti])`.
    pub fn screen(&self, ri: usize, si: usize, ti: usize) -> Screen {
        let (alpha, beta, gamma) = (self.roots[ri], self.roots[si], self.roots[ti]);
        if alpha.is_zero() || beta.is_zero() || gamma.is_zero() {
            return Screen::Singular;
        }
        let (r, s, t) = (self.elems[ri], self.elems[si], self.elems[ti]);
        let disc = self.squares[ri] + self.squares[si] + self.squares[ti]
            - r * s * t
            - self.ctx.from_u64(4);
        if disc.is_zero() {
            return Screen::Singular;
        }
        let pairs = [
            (r * t - s.scale(2), gamma * alpha),
            (s * r - t.scale(2), alpha * beta),
            (t * s - r.scale(2), beta * gamma),
        ];
        for (a, g) in pairs {
            if !self.poly.eval_homogeneous(a - g, a + g).is_zero() {
                return Screen::Ordinary;
            }
        }
        Screen::Superspecial
    }
}

/// Totals of an exhaustive scan, with the superspecial triples as element
/// indices in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanSummary {
    pub triples: u64,
    pub nonsingular: u64,
    pub superspecial: Vec<[usize; 3]>,
}

/// Screens all `q^3` triples, parallel over `r`. The result does not depend
/// on the thread pool it runs in.
pub fn scan_all(sieve: &Sieve<'_>) -> ScanSummary {
    let q = sieve.len();
    let parts: Vec<(u64, Vec<[usize; 3]>)> = (0..q)
        .into_par_iter()
        .map(|ri| {
            let mut nonsingular = 0;
            let mut found = Vec::new();
            for si in 0..q {
                for ti in 0..q {
                    match sieve.screen(ri, si, ti) {
                        Screen::Singular => {}
                        Screen::Ordinary => nonsingular += 1,
                        Screen::Superspecial => {
                            nonsingular += 1;
                            found.push([ri, si, ti]);
                        }
                    }
                }
            }
            (nonsingular, found)
        })
        .collect();
    let mut summary = ScanSummary {
        triples: (q as u64).pow(3),
        nonsingular: 0,
        superspecial: Vec::new(),
    };
    for (n, found) in parts {
        summary.nonsingular += n;
        summary.superspecial.extend(found);
    }
    summary
}

/// Superspecial triples over `ext`, split by whether all three coordinates
/// lie in the subfield `sub`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionScan {
    pub summary: ScanSummary,
    pub inside: Vec<[usize; 3]>,
    pub outside: Vec<[usize; 3]>,
}

pub fn scan_extension(sieve: &Sieve<'_>, sub: &FieldCtx) -> Result<ExtensionScan, FieldError> {
    let ext = sieve.ctx();
    if sub.level() >= ext.level() || !sub.compatible(ext) {
        return Err(FieldError::CtxMismatch);
    }
    let summary = scan_all(sieve);
    let mut inside = Vec::new();
    let mut outside = Vec::new();
    for &idx in &summary.superspecial {
        let mut all_in = true;
        for k in idx {
            all_in &= sieve.element(k).try_descend(sub)?.is_some();
        }
        if all_in {
            inside.push(idx);
        } else {
            outside.push(idx);
        }
    }
    Ok(ExtensionScan {
        summary,
        inside,
        outside,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ciani::{is_nonsingular, is_superspecial, CianiCurve};
    use crate::fields::make_field;

    fn pipeline(sieve: &Sieve<'_>, i: usize, j: usize, k: usize) -> Screen {
        let c = CianiCurve::new(sieve.element(i), sieve.element(j), sieve.element(k)).unwrap();
        if !is_nonsingular(&c) {
            Screen::Singular
        } else if is_superspecial(&c).unwrap() {
            Screen::Superspecial
        } else {
            Screen::Ordinary
        }
    }

    #[test]
    fn sieve_matches_pipeline_exhaustively_at_p3() {
        let f = make_field(3, 2, None).unwrap();
        let sieve = Sieve::new(&f).unwrap();
        for i in 0..9 {
            for j in 0..9 {
                for k in 0..9 {
                    assert_eq!(sieve.screen(i, j, k), pipeline(&sieve, i, j, k));
                }
            }
        }
    }

    #[test]
    fn sieve_matches_pipeline_on_samples() {
        for p in [5u64, 7, 11] {
            let f = make_field(p, 2, None).unwrap();
            let sieve = Sieve::new(&f).unwrap();
            let q = sieve.len();
            for n in 0..3000usize {
                let (i, j, k) = (n % q, (n * 7 + 3) % q, (n * 31 + n / q) % q);
                assert_eq!(sieve.screen(i, j, k), pipeline(&sieve, i, j, k), "p={p}");
            }
        }
    }

    #[test]
    fn fermat_survives_at_p3() {
        let f = make_field(3, 2, None).unwrap();
        let sieve = Sieve::new(&f).unwrap();
        let summary = scan_all(&sieve);
        assert!(summary.superspecial.contains(&[0, 0, 0]));
        assert_eq!(summary.triples, 729);
        assert!(summary.superspecial.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn thread_count_does_not_change_result() {
        let f = make_field(5, 2, None).unwrap();
        let sieve = Sieve::new(&f).unwrap();
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let three = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        assert_eq!(one.install(|| scan_all(&sieve)), three.install(|| scan_all(&sieve)));
    }

    #[test]
    fn extension_scan_rejects_bad_subfield() {
        let f81 = make_field(3, 4, None).unwrap();
        let f9 = make_field(3, 2, None).unwrap();
        let other = make_field(5, 2, None).unwrap();
        let sieve = Sieve::new(&f9).unwrap();
        assert_eq!(scan_extension(&sieve, &f81).unwrap_err(), FieldError::CtxMismatch);
        let sieve = Sieve::new(&f81).unwrap();
        assert_eq!(scan_extension(&sieve, &other).unwrap_err(), FieldError::CtxMismatch);
    }
}
