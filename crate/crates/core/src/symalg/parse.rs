//! Expression parser:
//!
//! ```text
//! expr := term (('+'|'-') term)*
//! term := atom ('*' atom)*
//! atom := 's'INT | 't'INT | 'Q' | 'P' | INT | 'q' | 'qc' | 'q[' INT ',' INT ']'
//!       | '(' expr ')' | atom '^' INT | atom '\''
//! ```
//!
//! Columns in errors are 1-based character positions.

use std::sync::Arc;

use super::{Element, Letter, SymAlgebra, SymElement};
use crate::coeff::{Gauss, PhaseCoeff};
use crate::error::{Error, Result};

struct Parser<'a> {
    alg: &'a Arc<SymAlgebra>,
    chars: Vec<char>,
    pos: usize,
}

fn err(column: usize, message: impl Into<String>) -> Error {
    Error::Parse { column, message: message.into() }
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn expect(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => Err(err(self.column(), format!("expected '{c}', found '{x}'"))),
            None => Err(err(self.column(), format!("expected '{c}', found end of input"))),
        }
    }

    fn integer(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(err(start + 1, "expected an integer"));
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse().map_err(|_| err(start + 1, "integer too large"))
    }

    /// Digits directly attached to the previous character.
    fn attached_index(&mut self) -> Result<u16> {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(err(start + 1, "expected a generator index"));
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse().map_err(|_| err(start + 1, "generator index too large"))
    }

    fn expr(&mut self) -> Result<SymElement> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.pos += 1;
                -&self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some('-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<SymElement> {
        let mut acc = self.atom()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            acc = &acc * &self.atom()?;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<SymElement> {
        let mut x = self.primary()?;
        loop {
            match self.chars.get(self.pos).copied() {
                Some('\'') => {
                    self.pos += 1;
                    x = x.adjoint();
                }
                Some('^') => {
                    self.pos += 1;
                    let k = self.integer()?;
                    x = x.pow(k as u32);
                }
                _ => return Ok(x),
            }
        }
    }

    fn generator(&mut self, letter_col: usize, make: fn(u16) -> Letter) -> Result<SymElement> {
        let idx = self.attached_index()?;
        Element::generator(self.alg, make(idx)).map_err(|e| err(letter_col, e.to_string()))
    }

    fn coefficient(&self, c: Result<PhaseCoeff>, col: usize) -> Result<SymElement> {
        c.map(|c| Element::scalar(self.alg, c)).map_err(|e| match e {
            Error::Mode(m) => Error::Mode(format!("{m} (column {col})")),
            other => err(col, other.to_string()),
        })
    }

    fn primary(&mut self) -> Result<SymElement> {
        let col = match self.peek() {
            None => return Err(err(self.column(), "unexpected end of input")),
            Some(_) => self.column(),
        };
        let vars = self.alg.vars().expect("symbolic algebra");
        let c = self.chars[self.pos];
        self.pos += 1;
        match c {
            's' => self.generator(col, Letter::s),
            't' => self.generator(col, Letter::t),
            'Q' => Ok(Element::proj_q(self.alg)),
            'P' => Ok(Element::proj_p(self.alg)),
            'q' => match self.chars.get(self.pos).copied() {
                Some('c') => {
                    self.pos += 1;
                    self.coefficient(PhaseCoeff::qc(vars), col)
                }
                Some('[') => {
                    self.pos += 1;
                    let i = self.integer()?;
                    self.expect(',')?;
                    let j = self.integer()?;
                    self.expect(']')?;
                    self.coefficient(PhaseCoeff::qij_pow(vars, i as usize, j as usize, 1), col)
                }
                _ => self.coefficient(PhaseCoeff::q(vars), col),
            },
            '(' => {
                let inner = self.expr();
                match inner {
                    Err(Error::Parse { message, .. }) if self.pos >= self.chars.len() => {
                        Err(err(col, format!("unclosed '(' ({message})")))
                    }
                    Err(e) => Err(e),
                    Ok(x) => {
                        if self.peek().is_none() {
                            return Err(err(col, "unclosed '('"));
                        }
                        self.expect(')')?;
                        Ok(x)
                    }
                }
            }
            d if d.is_ascii_digit() => {
                self.pos -= 1;
                let k = self.integer()?;
                let k = i128::from(k);
                Ok(Element::scalar(self.alg, PhaseCoeff::scalar(vars, Gauss::from_ints(k, 0))))
            }
            other => Err(err(col, format!("unexpected character '{other}'"))),
        }
    }
}

/// Parses `text` into a normal-ordered element of `alg`.
pub fn parse_expr(text: &str, alg: &Arc<SymAlgebra>) -> Result<SymElement> {
    let mut p = Parser { alg, chars: text.chars().collect(), pos: 0 };
    let x = p.expr()?;
    if let Some(c) = p.peek() {
        return Err(err(p.column(), format!("unexpected '{c}'")));
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::DeformVars;

    #[test]
    fn adjoint_then_cross_relation() {
        let v = DeformVars::SingleGeneric;
        let alg = SymAlgebra::symbolic(2, 2, v).unwrap();
        let x = parse_expr("s1' * t1", &alg).unwrap();
        let t1 = Element::t(&alg, 1).unwrap();
        let s1 = Element::s(&alg, 1).unwrap();
        let expected = (&t1 * &s1.adjoint()).scale(&PhaseCoeff::q(v).unwrap());
        assert_eq!(x, expected);
    }

    #[test]
    fn projection_symbol() {
        let alg = SymAlgebra::symbolic(2, 3, DeformVars::SingleUnimodular).unwrap();
        assert_eq!(parse_expr("Q", &alg).unwrap(), Element::proj_q(&alg));
        assert_eq!(parse_expr("s1*s1' + s2*s2'", &alg).unwrap(), Element::proj_q(&alg));
        assert_eq!(parse_expr("P", &alg).unwrap().len(), 3);
    }

    #[test]
    fn unclosed_parenthesis_reports_its_column() {
        let alg = SymAlgebra::symbolic(2, 2, DeformVars::SingleUnimodular).unwrap();
        match parse_expr("s1 * (", &alg) {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 6),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn other_errors() {
        let alg = SymAlgebra::symbolic(2, 2, DeformVars::SingleUnimodular).unwrap();
        assert!(matches!(parse_expr("s3", &alg), Err(Error::Parse { column: 1, .. })));
        assert!(matches!(parse_expr("q[1,1]", &alg), Err(Error::Mode(_))));
        assert!(matches!(parse_expr("s1 t1", &alg), Err(Error::Parse { column: 4, .. })));
        assert!(matches!(parse_expr("s1 ?", &alg), Err(Error::Parse { column: 4, .. })));
    }

    #[test]
    fn powers_scalars_and_multi_parameters() {
        let v = DeformVars::MultiUnimodular { n: 2, m: 2 };
        let alg = SymAlgebra::symbolic(2, 2, v).unwrap();
        let x = parse_expr("t2*s1", &alg).unwrap();
        let y = parse_expr("q[1,2]' * s1*t2", &alg).unwrap();
        assert_eq!(x, y);
        let z = parse_expr("2*s1^2 - s1*s1 - s1*s1", &alg).unwrap();
        assert!(z.is_zero());
        assert!(matches!(parse_expr("q", &alg), Err(Error::Mode(_))));
    }

    #[test]
    fn qc_in_unimodular_mode_is_inverse() {
        let alg = SymAlgebra::symbolic(1, 1, DeformVars::SingleUnimodular).unwrap();
        assert_eq!(parse_expr("q*qc", &alg).unwrap(), parse_expr("1", &alg).unwrap());
    }
}
