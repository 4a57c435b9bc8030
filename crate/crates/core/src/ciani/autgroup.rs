use std::fmt;

use super::CianiCurve;
use crate::fields::FieldElem;

/// Automorphism-group tag read off the shape of the coefficient triple.
///
/// The tag is syntactic: isomorphic curves whose triples are not related by
/// permutations and sign changes may receive different tags, so it is a lower
/// bound on the true automorphism group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AutoGroup {
    D4,
    D8,
    G16,
    S4,
    G48,
    G96,
    G168,
}

impl AutoGroup {
    pub const ALL: [AutoGroup; 7] = [
        AutoGroup::D4,
        AutoGroup::D8,
        AutoGroup::G16,
        AutoGroup::S4,
        AutoGroup::G48,
        AutoGroup::G96,
        AutoGroup::G168,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            AutoGroup::D4 => "D4",
            AutoGroup::D8 => "D8",
            AutoGroup::G16 => "G16",
            AutoGroup::S4 => "S4",
            AutoGroup::G48 => "G48",
            AutoGroup::G96 => "G96",
            AutoGroup::G168 => "G168",
        }
    }

    /// Group order.
    pub fn order(&self) -> u32 {
        match self {
            AutoGroup::D4 => 4,
            AutoGroup::D8 => 8,
            AutoGroup::G16 => 16,
            AutoGroup::S4 => 24,
            AutoGroup::G48 => 48,
            AutoGroup::G96 => 96,
            AutoGroup::G168 => 168,
        }
    }
}

impl fmt::Display for AutoGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

// x -> ix negates the two coefficients of the monomials containing x^2.
const SIGNS: [[bool; 3]; 4] = [
    [false, false, false],
    [false, true, true],
    [true, false, true],
    [true, true, false],
];

/// The 24 coefficient triples obtained by permuting the variables and
/// rescaling them by fourth roots of unity. Duplicates are kept.
pub fn equivalent_triples<'a>(c: &CianiCurve<'a>) -> Vec<[FieldElem<'a>; 3]> {
    let base = c.coeffs();
    let mut out = Vec::with_capacity(24);
    for perm in PERMUTATIONS {
        let permuted = perm.map(|k| base[k]);
        for signs in SIGNS {
            let mut img = permuted;
            for (v, neg) in img.iter_mut().zip(signs) {
                if neg {
                    *v = -*v;
                }
            }
            out.push(img);
        }
    }
    out
}

pub fn type_classify(c: &CianiCurve<'_>) -> AutoGroup {
    let ctx = c.ctx();
    let images = equivalent_triples(c);
    let any = |pred: &dyn Fn(&[FieldElem<'_>; 3]) -> bool| images.iter().any(pred);

    // At p = 3 the G168 constant ω vanishes, so the Fermat pattern is tested first.
    if any(&|v| v.iter().all(|x| x.is_zero())) {
        return AutoGroup::G96;
    }
    if let Some(root) = ctx.from_i64(-63).sqrt() {
        let half = ctx.from_u64(2).inv().expect("odd characteristic");
        let omegas = [root, -root].map(|w| (w - ctx.from_u64(3)) * half);
        if any(&|v| omegas.iter().any(|w| v.iter().all(|x| x == w))) {
            return AutoGroup::G168;
        }
    }
    if let Some(root) = ctx.from_i64(-3).sqrt() {
        let b = root.scale(2);
        if any(&|v| v[0].is_zero() && v[2].is_zero() && (v[1] == b || v[1] == -b)) {
            return AutoGroup::G48;
        }
    }
    if any(&|v| v[0] == v[1] && v[1] == v[2]) {
        return AutoGroup::S4;
    }
    if any(&|v| v[0].is_zero() && v[2].is_zero()) {
        return AutoGroup::G16;
    }
    if any(&|v| v[0] == v[2]) {
        return AutoGroup::D8;
    }
    AutoGroup::D4
}
