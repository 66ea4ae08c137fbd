//! Words in the named generators.
//!
//! ```text
//! expr    := factor ('*' factor)*
//! factor  := primary ('^' power)*
//! power   := '-'? digits | primary        integer power, or conjugation
//! primary := gen | '(' expr ')' | '[' expr ',' expr ']'
//! gen     := 'x' digits | 'c0' | 'c1' | 'e' | '1'
//! ```

use crate::error::{Error, Result};
use crate::thompson::{generators, standard_generator, FElement};

pub fn parse_word(text: &str) -> Result<FElement> {
    let mut p = WordParser {
        src: text.as_bytes(),
        pos: 0,
    };
    let g = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(g)
}

struct WordParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl WordParser<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse("word", self.pos, msg)
    }

    fn skip_ws(&mut self) {
        while self
            .src
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_whitespace())
        {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<FElement> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.multiply(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<FElement> {
        let mut acc = self.primary()?;
        while self.peek() == Some(b'^') {
            self.pos += 1;
            match self.peek() {
                Some(c) if c == b'-' || c.is_ascii_digit() => {
                    let k = self.integer()?;
                    acc = acc.pow(k);
                }
                _ => {
                    let h = self.primary()?;
                    acc = acc.conj(&h);
                }
            }
        }
        Ok(acc)
    }

    fn integer(&mut self) -> Result<i64> {
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if digits == self.pos {
            return Err(self.err("expected digits"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii")
            .parse()
            .map_err(|e| Error::parse("word", start, format!("{e}")))
    }

    fn primary(&mut self) -> Result<FElement> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let g = self.expr()?;
                self.expect(b')')?;
                Ok(g)
            }
            Some(b'[') => {
                self.pos += 1;
                let g = self.expr()?;
                self.expect(b',')?;
                let h = self.expr()?;
                self.expect(b']')?;
                Ok(g.commutator(&h))
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(FElement::identity())
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self
                    .src
                    .get(self.pos)
                    .is_some_and(u8::is_ascii_alphanumeric)
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                let g = generators();
                match name {
                    "e" | "id" => Ok(FElement::identity()),
                    "c0" => Ok(g.c0.clone()),
                    "c1" => Ok(g.c1.clone()),
                    _ => match name.strip_prefix('x').map(str::parse::<usize>) {
                        // Guard against absurd indices; each one costs a shift.
                        Some(Ok(k)) if k <= 4096 => Ok(standard_generator(k)),
                        _ => Err(Error::parse(
                            "word",
                            start,
                            format!("unknown generator {name:?}"),
                        )),
                    },
                }
            }
            Some(c) => Err(self.err(format!("unexpected '{}'", c as char))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_examples() {
        let g = generators();
        assert!(parse_word("x0*x0^-1").unwrap().is_identity());
        assert_eq!(parse_word("[x0,x1]").unwrap(), g.c0);
        assert_eq!(parse_word("x1^x0").unwrap(), g.x2);
        assert_eq!(parse_word(" x2 ").unwrap(), g.x2);
        assert_eq!(
            parse_word("(x1*x2^-1)^((x0*x1)^-1)").unwrap(),
            g.x1.multiply(&g.x2.inverse())
                .conj(&g.x0.multiply(&g.x1).inverse())
        );
        assert_eq!(parse_word("[c0, c0]").unwrap(), FElement::identity());
        assert_eq!(parse_word("x0^2^-1").unwrap(), g.x0.pow(-2));
    }

    #[test]
    fn word_errors_carry_positions() {
        match parse_word("x0*y1") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("{other:?}"),
        }
        match parse_word("[x0,x1") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("{other:?}"),
        }
        assert!(parse_word("").is_err());
        assert!(parse_word("x0 x1").is_err());
        assert!(parse_word("x0^").is_err());
    }
}
