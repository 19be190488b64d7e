//! Canonical text form of group ring elements, e.g. `1 - 2*t1^-1*t2^3`.
//!
//! Terms are printed in increasing lexicographic exponent order. Unit
//! coefficients are omitted on non-constant monomials. `t` is accepted as an
//! alias for `t1` when parsing rank-one input.

use std::fmt;

use super::{Coefficient, Exponent, GroupRingError, LaurentPoly};

impl<C: Coefficient> fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            let mono = monomial_string(e);
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

fn monomial_string(e: &Exponent) -> String {
    e.entries()
        .iter()
        .enumerate()
        .filter(|(_, &k)| k != 0)
        .map(|(i, &k)| {
            if k == 1 {
                format!("t{}", i + 1)
            } else {
                format!("t{}^{}", i + 1, k)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn err(&self, message: impl Into<String>) -> GroupRingError {
        GroupRingError::Parse {
            column: self.pos + 1,
            message: message.into(),
        }
    }

    fn integer(&mut self) -> Result<i64, GroupRingError> {
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| GroupRingError::Parse {
                column: start + 1,
                message: "expected integer".into(),
            })
    }

    /// Unsigned coefficient literal: digits, optionally `/digits`.
    fn coefficient_literal(&mut self) -> &str {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit() || b == b'/') {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap()
    }
}

/// Parses the canonical text form into a polynomial of the given rank.
pub fn parse_poly<C: Coefficient>(s: &str, rank: usize) -> Result<LaurentPoly<C>, GroupRingError> {
    let mut cur = Cursor {
        src: s.as_bytes(),
        pos: 0,
    };
    let mut out = LaurentPoly::zero(rank);
    cur.skip_ws();
    if cur.peek().is_none() {
        return Err(cur.err("empty input"));
    }
    let mut first = true;
    loop {
        cur.skip_ws();
        let Some(b) = cur.peek() else { break };
        let mut sign = C::one();
        if b == b'+' || b == b'-' {
            if b == b'-' {
                sign = -sign;
            }
            cur.pos += 1;
            cur.skip_ws();
        } else if !first {
            return Err(cur.err("expected `+` or `-`"));
        }
        first = false;
        let (coef, exp) = parse_term::<C>(&mut cur, rank)?;
        out.add_term(exp, sign * coef);
    }
    Ok(out)
}

fn parse_term<C: Coefficient>(
    cur: &mut Cursor<'_>,
    rank: usize,
) -> Result<(C, Exponent), GroupRingError> {
    let mut coef = C::one();
    let mut exp = vec![0i64; rank];
    let mut expect_factor = true;
    if cur.peek().is_some_and(|b| b.is_ascii_digit()) {
        let col = cur.pos;
        let lit = cur.coefficient_literal().to_string();
        coef = lit.parse().map_err(|_| GroupRingError::Parse {
            column: col + 1,
            message: format!("bad coefficient `{lit}`"),
        })?;
        cur.skip_ws();
        if cur.peek() == Some(b'*') {
            cur.pos += 1;
            cur.skip_ws();
        } else {
            expect_factor = false;
        }
    }
    while expect_factor {
        if cur.peek() != Some(b't') {
            return Err(cur.err("expected variable `t<i>`"));
        }
        cur.pos += 1;
        let idx = if cur.peek().is_some_and(|b| b.is_ascii_digit()) {
            let start = cur.pos;
            let i = cur.integer()?;
            if i < 1 || i as usize > rank {
                return Err(GroupRingError::Parse {
                    column: start + 1,
                    message: format!("variable index {i} out of range for rank {rank}"),
                });
            }
            i as usize - 1
        } else if rank == 1 {
            0
        } else {
            return Err(cur.err("bare `t` is only allowed in rank 1"));
        };
        let mut power = 1;
        cur.skip_ws();
        if cur.peek() == Some(b'^') {
            cur.pos += 1;
            cur.skip_ws();
            power = cur.integer()?;
        }
        exp[idx] += power;
        cur.skip_ws();
        if cur.peek() == Some(b'*') {
            cur.pos += 1;
            cur.skip_ws();
        } else {
            expect_factor = false;
        }
    }
    Ok((coef, Exponent::new(exp)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupring::{IntPoly, RatPoly};
    use proptest::prelude::*;

    #[test]
    fn canonical_rendering() {
        let p: IntPoly = parse_poly("1 - 2*t1^-1*t2^3", 2).unwrap();
        assert_eq!(p.to_string(), "-2*t1^-1*t2^3 + 1");
        let q: IntPoly = parse_poly("  2 * t2^3 * t1^-1 + 1 - 4*t2^3*t1^-1", 2).unwrap();
        assert_eq!(q, p);
        assert_eq!(IntPoly::zero(3).to_string(), "0");
        let r: RatPoly = parse_poly("1/2*t - 3", 1).unwrap();
        assert_eq!(r.to_string(), "-3 + 1/2*t1");
    }

    #[test]
    fn parse_errors_report_columns() {
        let err = parse_poly::<num_bigint::BigInt>("1 + x", 1).unwrap_err();
        assert_eq!(
            err,
            GroupRingError::Parse {
                column: 5,
                message: "expected variable `t<i>`".into()
            }
        );
        assert!(parse_poly::<num_bigint::BigInt>("t3", 2).is_err());
        assert!(parse_poly::<num_bigint::BigInt>("t", 2).is_err());
        assert!(parse_poly::<num_bigint::BigInt>("", 1).is_err());
    }

    fn arb_poly(rank: usize) -> impl Strategy<Value = IntPoly> {
        prop::collection::vec((prop::collection::vec(-3i64..=3, rank), -20i64..=20), 0..6).prop_map(
            move |terms| {
                IntPoly::from_terms(
                    rank,
                    terms.into_iter().map(|(e, c)| (Exponent::new(e), c.into())),
                )
                .unwrap()
            },
        )
    }

    proptest! {
        #[test]
        fn render_parse_is_identity(p in arb_poly(3)) {
            let text = p.to_string();
            let back: IntPoly = parse_poly(&text, 3).unwrap();
            prop_assert_eq!(&back, &p);
            prop_assert_eq!(back.to_string(), text);
        }
    }
}
