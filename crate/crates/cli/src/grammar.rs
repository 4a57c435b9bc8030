//! Text encoding of field elements.
//!
//! ```text
//! element := coeff | coeff SIGN coeff "*i" | "(" level2 ")+(" level2 ")*j"
//! coeff   := decimal integer in [0, p)
//! SIGN    := "+" | "-"
//! ```
//!
//! No whitespace is allowed anywhere. `a-b*i` denotes `a + (p-b)*i`. The
//! `Display` output of [`ciani::FieldElem`] always parses back to the same
//! element.

use std::fmt;

use ciani::{FieldCtx, FieldElem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub input: String,
    /// Byte offset of the offending character.
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cannot parse {:?} at position {}: {}",
            self.input, self.position, self.message
        )
    }
}

impl std::error::Error for ParseError {}

struct Parser<'s> {
    src: &'s str,
    pos: usize,
    p: u64,
}

impl<'s> Parser<'s> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            input: self.src.to_string(),
            position: self.pos,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn expect(&mut self, token: &str) -> Result<(), ParseError> {
        if self.src[self.pos..].starts_with(token) {
            self.pos += token.len();
            Ok(())
        } else {
            Err(self.error(format!("expected {token:?}")))
        }
    }

    fn coeff(&mut self) -> Result<u64, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected a decimal coefficient"));
        }
        let digits = &self.src[start..self.pos];
        match digits.parse::<u64>() {
            Ok(v) if v < self.p => Ok(v),
            _ => {
                self.pos = start;
                Err(self.error(format!("coefficient {digits} is not in [0, {})", self.p)))
            }
        }
    }

    /// `coeff` or `coeff SIGN coeff "*i"`; returns the coordinates and
    /// whether an `i` part was present.
    fn level2(&mut self) -> Result<([u64; 2], bool), ParseError> {
        let a = self.coeff()?;
        let sign = match self.peek() {
            Some(b'+') => 1,
            Some(b'-') => -1,
            _ => return Ok(([a, 0], false)),
        };
        self.pos += 1;
        let b = self.coeff()?;
        self.expect("*i")?;
        let b = if sign < 0 && b != 0 { self.p - b } else { b };
        Ok(([a, b], true))
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.pos == self.src.len() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing input"))
        }
    }
}

/// Parses `text` as an element of `ctx`. Elements written in a smaller
/// field of the tower are embedded.
pub fn parse_element<'a>(ctx: &'a FieldCtx, text: &str) -> Result<FieldElem<'a>, ParseError> {
    let mut parser = Parser {
        src: text,
        pos: 0,
        p: ctx.p(),
    };
    if text.is_empty() {
        return Err(parser.error("empty element"));
    }
    let coords: Vec<u64> = if parser.peek() == Some(b'(') {
        if ctx.level() < 4 {
            return Err(parser.error(format!("j-coordinates need level 4, field has level {}", ctx.level())));
        }
        parser.pos += 1;
        let (lo, _) = parser.level2()?;
        parser.expect(")+(")?;
        let (hi, _) = parser.level2()?;
        parser.expect(")*j")?;
        parser.finish()?;
        vec![lo[0], lo[1], hi[0], hi[1]]
    } else {
        let (c, has_i) = parser.level2()?;
        parser.finish()?;
        if has_i && ctx.level() < 2 {
            return Err(ParseError {
                input: text.to_string(),
                position: text.find('+').or_else(|| text.find('-')).unwrap_or(0),
                message: "i-coordinates need level 2 or higher".into(),
            });
        }
        if has_i {
            c.to_vec()
        } else {
            vec![c[0]]
        }
    };
    Ok(ctx
        .from_coords(&coords)
        .expect("coordinate count checked against the level"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ciani::make_field;
    use proptest::prelude::*;

    #[test]
    fn accepted_forms() {
        let f7 = make_field(7, 2, None).unwrap();
        assert_eq!(parse_element(&f7, "3").unwrap(), f7.from_u64(3));
        assert_eq!(parse_element(&f7, "2+0*i").unwrap(), f7.from_u64(2));
        assert_eq!(parse_element(&f7, "1+3*i").unwrap(), f7.from_coords(&[1, 3]).unwrap());
        assert_eq!(parse_element(&f7, "1-3*i").unwrap(), f7.from_coords(&[1, 4]).unwrap());
        assert_eq!(parse_element(&f7, "0-0*i").unwrap(), f7.zero());

        let f81 = make_field(3, 4, None).unwrap();
        let x = parse_element(&f81, "(1+2*i)+(0+1*i)*j").unwrap();
        assert_eq!(x, f81.from_coords(&[1, 2, 0, 1]).unwrap());
        assert_eq!(parse_element(&f81, "2+1*i").unwrap(), f81.from_coords(&[2, 1]).unwrap());
    }

    #[test]
    fn rejected_forms_report_positions() {
        let f7 = make_field(7, 2, None).unwrap();
        let cases = [
            ("", 0),
            ("7", 0),
            ("12", 0),
            ("-1", 0),
            ("1 +2*i", 1),
            ("1+2", 3),
            ("1+2*j", 3),
            ("1+9*i", 2),
            ("1+2*ix", 5),
            ("(1+2*i)+(0+1*i)*j", 0),
            ("a", 0),
        ];
        for (text, pos) in cases {
            let err = parse_element(&f7, text).unwrap_err();
            assert_eq!(err.position, pos, "{text:?}: {err}");
        }
        let f7base = make_field(7, 1, None).unwrap();
        assert_eq!(parse_element(&f7base, "1+2*i").unwrap_err().position, 1);

        let f81 = make_field(3, 4, None).unwrap();
        assert_eq!(parse_element(&f81, "(1+2*i)-(0+1*i)*j").unwrap_err().position, 6);
        assert_eq!(parse_element(&f81, "(1+2*i)+(0+1*i)").unwrap_err().position, 14);
    }

    proptest! {
        #[test]
        fn display_round_trips(p in prop::sample::select(vec![3u64, 5, 7, 13, 101]),
                               level in prop::sample::select(vec![1u32, 2, 4]),
                               k in any::<u128>()) {
            let f = make_field(p, level, None).unwrap();
            let x = f.element_at(k % f.order());
            prop_assert_eq!(parse_element(&f, &x.to_string()).unwrap(), x);
        }
    }
}
