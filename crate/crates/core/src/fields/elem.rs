use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use super::{Coords, FieldCtx, FieldError};

/// An element of a [`FieldCtx`].
///
/// Binary operations accept operands from different levels of the same tower
/// and compute in the larger field. Operands from unrelated towers panic in
/// the operator forms; the `checked_*` methods report
/// [`FieldError::CtxMismatch`] instead.
#[derive(Clone, Copy)]
pub struct FieldElem<'a> {
    ctx: &'a FieldCtx,
    c: Coords,
}

impl<'a> FieldElem<'a> {
    #[inline(always)]
    pub(crate) fn from_raw(ctx: &'a FieldCtx, c: Coords) -> Self {
        FieldElem { ctx, c }
    }

    pub fn ctx(&self) -> &'a FieldCtx {
        self.ctx
    }

    pub fn level(&self) -> u32 {
        self.ctx.level
    }

    /// Coordinates over F_p, most significant first.
    pub fn coords(&self) -> &[u64] {
        &self.c[..self.ctx.level as usize]
    }

    /// Position in the lexicographic enumeration of the field.
    pub fn index(&self) -> u128 {
        self.ctx.index_of(&self.c)
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&v| v == 0)
    }

    pub fn is_one(&self) -> bool {
        self.c[0] == 1 && self.c[1..].iter().all(|&v| v == 0)
    }

    /// The value as an element of F_p, if it lies there.
    pub fn as_base(&self) -> Option<u64> {
        self.c[1..].iter().all(|&v| v == 0).then_some(self.c[0])
    }

    #[inline]
    fn common(self, rhs: FieldElem<'a>) -> Result<&'a FieldCtx, FieldError> {
        if std::ptr::eq(self.ctx, rhs.ctx) {
            return Ok(self.ctx);
        }
        if !self.ctx.compatible(rhs.ctx) {
            return Err(FieldError::CtxMismatch);
        }
        Ok(if self.ctx.level >= rhs.ctx.level {
            self.ctx
        } else {
            rhs.ctx
        })
    }

    pub fn checked_add(self, rhs: FieldElem<'a>) -> Result<Self, FieldError> {
        let ctx = self.common(rhs)?;
        Ok(FieldElem::from_raw(ctx, ctx.add_c(&self.c, &rhs.c)))
    }

    pub fn checked_sub(self, rhs: FieldElem<'a>) -> Result<Self, FieldError> {
        let ctx = self.common(rhs)?;
        Ok(FieldElem::from_raw(ctx, ctx.sub_c(&self.c, &rhs.c)))
    }

    pub fn checked_mul(self, rhs: FieldElem<'a>) -> Result<Self, FieldError> {
        let ctx = self.common(rhs)?;
        Ok(FieldElem::from_raw(ctx, ctx.mul_c(&self.c, &rhs.c)))
    }

    pub fn checked_div(self, rhs: FieldElem<'a>) -> Result<Self, FieldError> {
        let ctx = self.common(rhs)?;
        let inv = rhs.inv()?;
        Ok(FieldElem::from_raw(ctx, ctx.mul_c(&self.c, &inv.c)))
    }

    pub fn inv(self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(FieldElem::from_raw(self.ctx, self.ctx.inv_c(&self.c)))
    }

    pub fn square(self) -> Self {
        self * self
    }

    pub fn pow(self, e: u128) -> Self {
        FieldElem::from_raw(self.ctx, self.ctx.pow_c(&self.c, e))
    }

    /// Multiplication by a small integer.
    pub fn scale(self, k: i64) -> Self {
        let k = self.ctx.m.from_i64(k);
        FieldElem::from_raw(self.ctx, self.ctx.scale_c(&self.c, k))
    }

    /// The absolute Frobenius x^p. Identity on F_p.
    pub fn frobenius(self) -> Self {
        FieldElem::from_raw(self.ctx, self.ctx.frobenius_c(&self.c))
    }

    /// Conjugation over the subfield one tower step down: `lo + hi*w -> lo - hi*w`.
    pub fn relative_frobenius(self) -> Self {
        let n = self.ctx.level as usize;
        if n == 1 {
            return self;
        }
        let mut c = self.c;
        for v in &mut c[n / 2..n] {
            *v = self.ctx.m.neg(*v);
        }
        FieldElem::from_raw(self.ctx, c)
    }

    /// Quadratic character: 0, 1 or -1.
    pub fn legendre(&self) -> i8 {
        self.ctx.chi_c(&self.c)
    }

    pub fn is_square(&self) -> bool {
        self.legendre() >= 0
    }

    /// Whether `self = y^4` for some `y` in the same field.
    pub fn is_fourth_power(&self) -> Result<bool, FieldError> {
        let q1 = self.ctx.order() - 1;
        if q1 % 4 != 0 {
            return Err(FieldError::FourDoesNotDivideGroupOrder);
        }
        Ok(self.is_zero() || self.pow(q1 / 4).is_one())
    }

    /// Some square root (Tonelli–Shanks), not normalised.
    pub fn sqrt_any(&self) -> Option<Self> {
        self.ctx
            .tonelli_shanks(&self.c)
            .map(|c| FieldElem::from_raw(self.ctx, c))
    }

    /// The canonical square root: of the pair `±y`, the one with the
    /// lexicographically smaller coordinate vector. `None` for non-squares.
    pub fn sqrt(&self) -> Option<Self> {
        self.sqrt_any().map(|y| {
            let ny = -y;
            if ny < y {
                ny
            } else {
                y
            }
        })
    }

    /// Canonical square root, taken in the quadratic extension when `self` is
    /// not a square here. The result is left in the smallest tower level
    /// containing it, but never below `self`'s level.
    pub fn sqrt_lifting(&self) -> Result<Self, FieldError> {
        if let Some(y) = self.sqrt() {
            return Ok(y);
        }
        let ext = self.ctx.extension()?;
        let lifted = self.embed(ext)?;
        Ok(lifted
            .sqrt()
            .expect("every element is a square in the quadratic extension"))
    }

    /// Natural inclusion into a larger field of the same tower.
    pub fn embed(self, target: &'a FieldCtx) -> Result<Self, FieldError> {
        if target.level < self.ctx.level || !target.compatible(self.ctx) {
            return Err(FieldError::CtxMismatch);
        }
        Ok(FieldElem::from_raw(target, self.c))
    }

    /// The representative in the subfield `target`, if the element lies there.
    pub fn try_descend(self, target: &'a FieldCtx) -> Result<Option<Self>, FieldError> {
        if target.level > self.ctx.level || !target.compatible(self.ctx) {
            return Err(FieldError::CtxMismatch);
        }
        let n = target.level as usize;
        Ok(self.c[n..]
            .iter()
            .all(|&v| v == 0)
            .then(|| FieldElem::from_raw(target, self.c)))
    }

    /// Equality of values across levels of one tower.
    pub fn same_value(&self, other: &FieldElem<'_>) -> bool {
        self.c == other.c && self.ctx.compatible(other.ctx)
    }

    /// Moves the element to `base` when it lies there, otherwise leaves it as is.
    pub fn settle(self, base: &'a FieldCtx) -> Self {
        match self.try_descend(base) {
            Ok(Some(x)) => x,
            _ => self,
        }
    }
}

impl<'a> Add for FieldElem<'a> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        self.checked_add(rhs).expect("field context mismatch")
    }
}

impl<'a> Sub for FieldElem<'a> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(rhs).expect("field context mismatch")
    }
}

impl<'a> Mul for FieldElem<'a> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(rhs).expect("field context mismatch")
    }
}

impl<'a> Div for FieldElem<'a> {
    type Output = Self;
    /// Panics on division by zero.
    fn div(self, rhs: Self) -> Self {
        self.checked_div(rhs).expect("division failed")
    }
}

impl<'a> Neg for FieldElem<'a> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        FieldElem::from_raw(self.ctx, self.ctx.neg_c(&self.c))
    }
}

impl<'a> AddAssign for FieldElem<'a> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<'a> SubAssign for FieldElem<'a> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<'a> MulAssign for FieldElem<'a> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl PartialEq for FieldElem<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c && self.ctx == other.ctx
    }
}

impl Eq for FieldElem<'_> {}

impl Hash for FieldElem<'_> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ctx.level.hash(state);
        self.c.hash(state);
    }
}

impl PartialOrd for FieldElem<'_> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic order on coordinate vectors; the tower level breaks ties
/// between embedded copies of the same value.
impl Ord for FieldElem<'_> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.c
            .cmp(&other.c)
            .then(self.ctx.level.cmp(&other.ctx.level))
    }
}

fn write_level(f: &mut fmt::Formatter<'_>, c: &[u64]) -> fmt::Result {
    const GENS: [&str; 3] = ["i", "j", "k"];
    match c.len() {
        1 => write!(f, "{}", c[0]),
        2 => write!(f, "{}+{}*i", c[0], c[1]),
        n => {
            let h = n / 2;
            let g = GENS[h.trailing_zeros() as usize];
            f.write_str("(")?;
            write_level(f, &c[..h])?;
            f.write_str(")+(")?;
            write_level(f, &c[h..])?;
            write!(f, ")*{g}")
        }
    }
}

/// Canonical text encoding: `a` (F_p), `a+b*i` (F_{p^2}),
/// `(a+b*i)+(c+d*i)*j` (F_{p^4}).
impl fmt::Display for FieldElem<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_level(f, self.coords())
    }
}

impl fmt::Debug for FieldElem<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in F_{}^{}", self, self.ctx.p(), self.ctx.level)
    }
}
