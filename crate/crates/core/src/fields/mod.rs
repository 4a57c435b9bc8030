//! Exact arithmetic in F_p, F_{p^2} and F_{p^4}, each level a quadratic step
//! over the one below.
//!
//! An element of a level-`n` field is stored as `n` coordinates over F_p,
//! ordered most-significant first: a level-2k element `lo + hi*w` (with
//! `w^2 = d_k`) stores the coordinates of `lo` followed by those of `hi`.
//! Unused trailing slots are always zero, so the natural inclusion of a
//! subfield into a larger field of the same tower leaves the coordinates
//! untouched.
//!
//! Every context eagerly builds its extension chain (up to level 8, the
//! extension of F_{p^4}), so square roots that do not exist in a field can be
//! taken one level up without any mutable state.

mod elem;
mod modp;

use std::fmt;

use thiserror::Error;

pub use elem::FieldElem;
pub use modp::is_prime;

pub(crate) use modp::Modulus;

pub(crate) type Coords = [u64; 8];

/// Largest prime accepted at any level.
pub const MAX_PRIME_BITS: u32 = 61;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("modulus {0} is not an odd prime")]
    CompositeModulus(u64),
    #[error("{d} is not a quadratic non-residue mod {p}")]
    NotANonResidue { p: u64, d: u64 },
    #[error("unsupported tower level {0} (expected 1, 2 or 4)")]
    UnsupportedLevel(u32),
    #[error("F_{{{p}^{level}}} is too large for word-sized exponents")]
    FieldTooLarge { p: u64, level: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to incompatible fields")]
    CtxMismatch,
    #[error("4 does not divide the order of the multiplicative group")]
    FourDoesNotDivideGroupOrder,
    #[error("no quadratic extension is available above level {0}")]
    NoExtension(u32),
}

/// A finite field F_q with q = p^level, described as a quadratic tower over F_p.
#[derive(Clone)]
pub struct FieldCtx {
    pub(crate) m: Modulus,
    pub(crate) level: u32,
    // Defining constants of each quadratic step: w1^2 = d1 (in F_p),
    // w2^2 = d2 (in F_{p^2}), w4^2 = d4 (in F_{p^4}).
    pub(crate) d1: u64,
    pub(crate) d2: [u64; 2],
    pub(crate) d4: [u64; 4],
    // d2^((p-1)/2) and d4^((p-1)/2), used by the absolute Frobenius.
    frob2: [u64; 2],
    frob4: [u64; 4],
    // Tonelli–Shanks data: q - 1 = 2^two_adicity * odd_part, ts_root = z^odd_part
    // for the smallest non-square z of this field.
    two_adicity: u32,
    odd_part: u128,
    ts_root: Coords,
    ext: Option<Box<FieldCtx>>,
}

fn max_level(p: u64) -> u32 {
    if p < (1 << 15) {
        8
    } else if p < (1 << 31) {
        4
    } else {
        2
    }
}

/// Smallest positive quadratic non-residue mod an odd prime.
pub fn smallest_nonresidue(p: u64) -> u64 {
    let m = Modulus::new(p);
    (2..p).find(|&a| m.legendre(a) == -1).expect("odd prime has non-residues")
}

/// Builds F_{p^level}. `d_override` replaces the default base non-residue.
pub fn make_field(p: u64, level: u32, d_override: Option<u64>) -> Result<FieldCtx, FieldError> {
    FieldCtx::new(p, level, d_override)
}

impl FieldCtx {
    pub fn new(p: u64, level: u32, d_override: Option<u64>) -> Result<Self, FieldError> {
        if p < 3 || !is_prime(p) {
            return Err(FieldError::CompositeModulus(p));
        }
        if !matches!(level, 1 | 2 | 4) {
            return Err(FieldError::UnsupportedLevel(level));
        }
        if p >= (1 << MAX_PRIME_BITS) || level > max_level(p) {
            return Err(FieldError::FieldTooLarge { p, level });
        }
        let m = Modulus::new(p);
        let d1 = match d_override {
            Some(d) => {
                let d = d % p;
                if m.legendre(d) != -1 {
                    return Err(FieldError::NotANonResidue { p, d });
                }
                d
            }
            None => smallest_nonresidue(p),
        };
        let top = max_level(p);

        // Defining constants bottom-up; each is the smallest non-square of its level.
        let mut d2 = [0; 2];
        let mut d4 = [0; 4];
        let mut nonsq = vec![{
            let mut c = [0; 8];
            c[0] = d1;
            c
        }];
        let mut lvl = 2;
        while lvl <= top {
            let z = FieldCtx::raw(m, lvl, d1, d2, d4).find_smallest_nonsquare();
            match lvl {
                2 => d2.copy_from_slice(&z[..2]),
                4 => d4.copy_from_slice(&z[..4]),
                _ => {}
            }
            nonsq.push(z);
            lvl *= 2;
        }

        // Contexts top-down so each owns its extension.
        let mut built: Option<Box<FieldCtx>> = None;
        let mut lvl = top;
        loop {
            let idx = lvl.trailing_zeros() as usize;
            let mut ctx = FieldCtx::raw(m, lvl, d1, d2, d4);
            ctx.finish(nonsq[idx]);
            ctx.ext = built.take();
            if lvl == level {
                return Ok(ctx);
            }
            built = Some(Box::new(ctx));
            lvl /= 2;
        }
    }

    fn raw(m: Modulus, level: u32, d1: u64, d2: [u64; 2], d4: [u64; 4]) -> Self {
        let mut ctx = FieldCtx {
            m,
            level,
            d1,
            d2: if level >= 4 { d2 } else { [0; 2] },
            d4: if level >= 8 { d4 } else { [0; 4] },
            frob2: [0; 2],
            frob4: [0; 4],
            two_adicity: 0,
            odd_part: 0,
            ts_root: [0; 8],
            ext: None,
        };
        let e = (m.p() - 1) / 2;
        if level >= 4 {
            let mut c = [0; 8];
            c[..2].copy_from_slice(&d2);
            let r = ctx.pow_c(&c, e as u128);
            ctx.frob2.copy_from_slice(&r[..2]);
        }
        if level >= 8 {
            let mut c = [0; 8];
            c[..4].copy_from_slice(&d4);
            let r = ctx.pow_c(&c, e as u128);
            ctx.frob4.copy_from_slice(&r[..4]);
        }
        ctx
    }

    fn finish(&mut self, nonsquare: Coords) {
        let q1 = self.order() - 1;
        let s = q1.trailing_zeros();
        self.two_adicity = s;
        self.odd_part = q1 >> s;
        self.ts_root = self.pow_c(&nonsquare, self.odd_part);
    }

    fn find_smallest_nonsquare(&self) -> Coords {
        (1..self.order())
            .map(|i| self.coords_at(i))
            .find(|c| self.chi_c(c) == -1)
            .expect("every finite field of odd order has non-squares")
    }

    pub fn p(&self) -> u64 {
        self.m.p()
    }

    /// Tower degree over F_p.
    pub fn level(&self) -> u32 {
        self.level
    }

    /// Number of elements q = p^level.
    pub fn order(&self) -> u128 {
        (self.m.p() as u128).pow(self.level)
    }

    /// The base non-residue d with F_{p^2} = F_p(sqrt d).
    pub fn base_nonresidue(&self) -> u64 {
        self.d1
    }

    /// The non-square of F_{p^2} adjoined to reach F_{p^4} (level >= 4 only).
    pub fn second_nonsquare(&self) -> Option<FieldElem<'_>> {
        (self.level >= 4).then(|| {
            let mut c = [0; 8];
            c[..2].copy_from_slice(&self.d2);
            FieldElem::from_raw(self, c)
        })
    }

    /// The quadratic extension of this field within the same tower.
    pub fn extension(&self) -> Result<&FieldCtx, FieldError> {
        self.ext.as_deref().ok_or(FieldError::NoExtension(self.level))
    }

    /// Contexts with the same prime whose defining constants agree on every
    /// level both of them contain.
    pub fn compatible(&self, other: &FieldCtx) -> bool {
        if std::ptr::eq(self, other) {
            return true;
        }
        if self.m.p() != other.m.p() {
            return false;
        }
        let lo = self.level.min(other.level);
        (lo < 2 || self.d1 == other.d1)
            && (lo < 4 || self.d2 == other.d2)
            && (lo < 8 || self.d4 == other.d4)
    }

    pub fn zero(&self) -> FieldElem<'_> {
        FieldElem::from_raw(self, [0; 8])
    }

    pub fn one(&self) -> FieldElem<'_> {
        self.from_u64(1)
    }

    pub fn from_u64(&self, n: u64) -> FieldElem<'_> {
        let mut c = [0; 8];
        c[0] = n % self.m.p();
        FieldElem::from_raw(self, c)
    }

    pub fn from_i64(&self, n: i64) -> FieldElem<'_> {
        let mut c = [0; 8];
        c[0] = self.m.from_i64(n);
        FieldElem::from_raw(self, c)
    }

    /// Element with the given coordinates (most significant first), reduced mod p.
    /// Missing trailing coordinates are zero.
    pub fn from_coords(&self, coords: &[u64]) -> Result<FieldElem<'_>, FieldError> {
        if coords.len() > self.level as usize {
            return Err(FieldError::CtxMismatch);
        }
        let mut c = [0; 8];
        for (slot, &v) in c.iter_mut().zip(coords) {
            *slot = v % self.m.p();
        }
        Ok(FieldElem::from_raw(self, c))
    }

    /// The generator `w` of the top quadratic step (`i` at level 2, `j` at level 4).
    pub fn generator(&self) -> FieldElem<'_> {
        let mut c = [0; 8];
        if self.level == 1 {
            c[0] = 1;
        } else {
            c[self.level as usize / 2] = 1;
        }
        FieldElem::from_raw(self, c)
    }

    /// The element at position `index` in lexicographic coordinate order.
    pub fn element_at(&self, index: u128) -> FieldElem<'_> {
        FieldElem::from_raw(self, self.coords_at(index))
    }

    /// All q elements in lexicographic coordinate order.
    pub fn elements(&self) -> impl ExactSizeIterator<Item = FieldElem<'_>> + '_ {
        let q = usize::try_from(self.order()).expect("field too large to enumerate");
        (0..q).map(move |i| self.element_at(i as u128))
    }

    pub(crate) fn coords_at(&self, mut index: u128) -> Coords {
        let p = self.m.p() as u128;
        let mut c = [0; 8];
        for k in (0..self.level as usize).rev() {
            c[k] = (index % p) as u64;
            index /= p;
        }
        c
    }

    pub(crate) fn index_of(&self, c: &Coords) -> u128 {
        let p = self.m.p() as u128;
        c[..self.level as usize]
            .iter()
            .fold(0u128, |acc, &v| acc * p + v as u128)
    }

    // ---- coordinate arithmetic at this context's level ----

    #[inline]
    pub(crate) fn add_c(&self, a: &Coords, b: &Coords) -> Coords {
        let mut r = [0; 8];
        for k in 0..self.level as usize {
            r[k] = self.m.add(a[k], b[k]);
        }
        r
    }

    #[inline]
    pub(crate) fn sub_c(&self, a: &Coords, b: &Coords) -> Coords {
        let mut r = [0; 8];
        for k in 0..self.level as usize {
            r[k] = self.m.sub(a[k], b[k]);
        }
        r
    }

    #[inline]
    pub(crate) fn neg_c(&self, a: &Coords) -> Coords {
        let mut r = [0; 8];
        for k in 0..self.level as usize {
            r[k] = self.m.neg(a[k]);
        }
        r
    }

    #[inline]
    pub(crate) fn scale_c(&self, a: &Coords, k: u64) -> Coords {
        let mut r = [0; 8];
        for i in 0..self.level as usize {
            r[i] = self.m.mul(a[i], k);
        }
        r
    }

    #[inline]
    pub(crate) fn mul_c(&self, a: &Coords, b: &Coords) -> Coords {
        let mut r = [0; 8];
        match self.level {
            1 => r[0] = self.m.mul(a[0], b[0]),
            2 => r[..2].copy_from_slice(&self.mul2(&[a[0], a[1]], &[b[0], b[1]])),
            4 => r[..4].copy_from_slice(&self.mul4(&split4(a), &split4(b))),
            _ => r = self.mul8(a, b),
        }
        r
    }

    pub(crate) fn pow_c(&self, a: &Coords, mut e: u128) -> Coords {
        let mut acc = [0; 8];
        acc[0] = 1;
        let mut base = *a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_c(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_c(&base, &base);
            }
        }
        acc
    }

    /// Inverse of a nonzero element.
    pub(crate) fn inv_c(&self, a: &Coords) -> Coords {
        let mut r = [0; 8];
        match self.level {
            1 => r[0] = self.m.inv(a[0]),
            2 => r[..2].copy_from_slice(&self.inv2(&[a[0], a[1]])),
            4 => r[..4].copy_from_slice(&self.inv4(&split4(a))),
            _ => r = self.inv8(a),
        }
        r
    }

    /// Quadratic character: 0 on zero, otherwise 1 for squares and -1 else.
    /// A nonzero element of a quadratic extension is a square iff its norm is
    /// a square in the base, so this descends to Euler's criterion in F_p.
    pub(crate) fn chi_c(&self, a: &Coords) -> i8 {
        if a.iter().all(|&v| v == 0) {
            return 0;
        }
        let base = match self.level {
            1 => a[0],
            2 => self.norm2(&[a[0], a[1]]),
            4 => self.norm2(&self.norm4(&split4(a))),
            _ => {
                let n4 = self.norm8(a);
                self.norm2(&self.norm4(&n4))
            }
        };
        self.m.legendre(base)
    }

    /// Absolute Frobenius x -> x^p.
    pub(crate) fn frobenius_c(&self, a: &Coords) -> Coords {
        let mut r = [0; 8];
        match self.level {
            1 => r[0] = a[0],
            2 => r[..2].copy_from_slice(&self.frob2(&[a[0], a[1]])),
            4 => r[..4].copy_from_slice(&self.frob4_c(&split4(a))),
            _ => {
                let lo = self.frob4_c(&[a[0], a[1], a[2], a[3]]);
                let hi = self.frob4_c(&[a[4], a[5], a[6], a[7]]);
                let hi = self.mul4(&hi, &self.frob4);
                r[..4].copy_from_slice(&lo);
                r[4..].copy_from_slice(&hi);
            }
        }
        r
    }

    pub(crate) fn tonelli_shanks(&self, a: &Coords) -> Option<Coords> {
        match self.chi_c(a) {
            0 => return Some([0; 8]),
            -1 => return None,
            _ => {}
        }
        let mut one = [0; 8];
        one[0] = 1;
        let mut m = self.two_adicity;
        let mut c = self.ts_root;
        let mut t = self.pow_c(a, self.odd_part);
        let mut r = self.pow_c(a, self.odd_part.div_ceil(2));
        while t != one {
            let mut i = 0;
            let mut probe = t;
            while probe != one {
                probe = self.mul_c(&probe, &probe);
                i += 1;
            }
            debug_assert!(i < m);
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = self.mul_c(&b, &b);
            }
            m = i;
            c = self.mul_c(&b, &b);
            t = self.mul_c(&t, &c);
            r = self.mul_c(&r, &b);
        }
        Some(r)
    }

    // ---- fixed-level helpers ----

    #[inline(always)]
    fn add2(&self, a: &[u64; 2], b: &[u64; 2]) -> [u64; 2] {
        [self.m.add(a[0], b[0]), self.m.add(a[1], b[1])]
    }

    #[inline(always)]
    fn sub2(&self, a: &[u64; 2], b: &[u64; 2]) -> [u64; 2] {
        [self.m.sub(a[0], b[0]), self.m.sub(a[1], b[1])]
    }

    #[inline(always)]
    fn mul2(&self, a: &[u64; 2], b: &[u64; 2]) -> [u64; 2] {
        let m = &self.m;
        let t0 = m.mul(a[0], b[0]);
        let t1 = m.mul(a[1], b[1]);
        let cross = m.mul(m.add(a[0], a[1]), m.add(b[0], b[1]));
        [m.add(t0, m.mul(self.d1, t1)), m.sub(m.sub(cross, t0), t1)]
    }

    #[inline(always)]
    fn norm2(&self, a: &[u64; 2]) -> u64 {
        let m = &self.m;
        m.sub(m.mul(a[0], a[0]), m.mul(self.d1, m.mul(a[1], a[1])))
    }

    fn inv2(&self, a: &[u64; 2]) -> [u64; 2] {
        let n = self.m.inv(self.norm2(a));
        [self.m.mul(a[0], n), self.m.mul(self.m.neg(a[1]), n)]
    }

    #[inline(always)]
    fn frob2(&self, a: &[u64; 2]) -> [u64; 2] {
        [a[0], self.m.neg(a[1])]
    }

    #[inline(always)]
    fn add4(&self, a: &[u64; 4], b: &[u64; 4]) -> [u64; 4] {
        let m = &self.m;
        [m.add(a[0], b[0]), m.add(a[1], b[1]), m.add(a[2], b[2]), m.add(a[3], b[3])]
    }

    #[inline(always)]
    fn sub4(&self, a: &[u64; 4], b: &[u64; 4]) -> [u64; 4] {
        let m = &self.m;
        [m.sub(a[0], b[0]), m.sub(a[1], b[1]), m.sub(a[2], b[2]), m.sub(a[3], b[3])]
    }

    #[inline(always)]
    fn mul4(&self, a: &[u64; 4], b: &[u64; 4]) -> [u64; 4] {
        let (alo, ahi) = ([a[0], a[1]], [a[2], a[3]]);
        let (blo, bhi) = ([b[0], b[1]], [b[2], b[3]]);
        let t0 = self.mul2(&alo, &blo);
        let t1 = self.mul2(&ahi, &bhi);
        let cross = self.mul2(&self.add2(&alo, &ahi), &self.add2(&blo, &bhi));
        let lo = self.add2(&t0, &self.mul2(&self.d2, &t1));
        let hi = self.sub2(&self.sub2(&cross, &t0), &t1);
        [lo[0], lo[1], hi[0], hi[1]]
    }

    fn norm4(&self, a: &[u64; 4]) -> [u64; 2] {
        let (lo, hi) = ([a[0], a[1]], [a[2], a[3]]);
        let hi2 = self.mul2(&hi, &hi);
        self.sub2(&self.mul2(&lo, &lo), &self.mul2(&self.d2, &hi2))
    }

    fn inv4(&self, a: &[u64; 4]) -> [u64; 4] {
        let n = self.inv2(&self.norm4(a));
        let lo = self.mul2(&[a[0], a[1]], &n);
        let hi = self.mul2(&[self.m.neg(a[2]), self.m.neg(a[3])], &n);
        [lo[0], lo[1], hi[0], hi[1]]
    }

    fn frob4_c(&self, a: &[u64; 4]) -> [u64; 4] {
        let lo = self.frob2(&[a[0], a[1]]);
        let hi = self.mul2(&self.frob2(&[a[2], a[3]]), &self.frob2);
        [lo[0], lo[1], hi[0], hi[1]]
    }

    fn mul8(&self, a: &Coords, b: &Coords) -> Coords {
        let (alo, ahi) = halves8(a);
        let (blo, bhi) = halves8(b);
        let t0 = self.mul4(&alo, &blo);
        let t1 = self.mul4(&ahi, &bhi);
        let cross = self.mul4(&self.add4(&alo, &ahi), &self.add4(&blo, &bhi));
        let lo = self.add4(&t0, &self.mul4(&self.d4, &t1));
        let hi = self.sub4(&self.sub4(&cross, &t0), &t1);
        join8(&lo, &hi)
    }

    fn norm8(&self, a: &Coords) -> [u64; 4] {
        let (lo, hi) = halves8(a);
        let hi2 = self.mul4(&hi, &hi);
        self.sub4(&self.mul4(&lo, &lo), &self.mul4(&self.d4, &hi2))
    }

    fn inv8(&self, a: &Coords) -> Coords {
        let n = self.inv4(&self.norm8(a));
        let (lo, hi) = halves8(a);
        let m = &self.m;
        let neg_hi = [m.neg(hi[0]), m.neg(hi[1]), m.neg(hi[2]), m.neg(hi[3])];
        join8(&self.mul4(&lo, &n), &self.mul4(&neg_hi, &n))
    }
}

#[inline(always)]
fn split4(a: &Coords) -> [u64; 4] {
    [a[0], a[1], a[2], a[3]]
}

#[inline(always)]
fn halves8(a: &Coords) -> ([u64; 4], [u64; 4]) {
    ([a[0], a[1], a[2], a[3]], [a[4], a[5], a[6], a[7]])
}

#[inline(always)]
fn join8(lo: &[u64; 4], hi: &[u64; 4]) -> Coords {
    [lo[0], lo[1], lo[2], lo[3], hi[0], hi[1], hi[2], hi[3]]
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.level == other.level && self.compatible(other)
    }
}

impl Eq for FieldCtx {}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = f.debug_struct("FieldCtx");
        s.field("p", &self.m.p()).field("level", &self.level);
        if self.level >= 2 {
            s.field("d1", &self.d1);
        }
        if self.level >= 4 {
            s.field("d2", &self.d2);
        }
        if self.level >= 8 {
            s.field("d4", &self.d4);
        }
        s.finish()
    }
}
