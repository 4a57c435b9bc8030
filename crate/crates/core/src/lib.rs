//! Ciani quartics `x^4 + y^4 + z^4 + r x^2 y^2 + s y^2 z^2 + t z^2 x^2 = 0`
//! over finite fields: nonsingularity, superspeciality and the maximal/minimal
//! dichotomy over F_{p^2}, together with brute-force point counts that check
//! every verdict independently.

pub mod ciani;
pub mod fields;
pub mod legendre;
pub mod oracle;
pub mod scan;

pub use ciani::{CianiCurve, CianiError};
pub use fields::{make_field, FieldCtx, FieldElem, FieldError};
pub use legendre::Extremality;
