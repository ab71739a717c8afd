use super::{FiniteGroup, GroupLike};
use crate::error::{Error, Result};

/// Parses a word over the generator names, e.g. `x1*x2^-1`, `[x1,x2]^2`,
/// `(x1 x2)^3` or `1`. Juxtaposition multiplies; `[a,b] = a⁻¹b⁻¹ab`.
pub fn parse_word(g: &FiniteGroup, text: &str) -> Result<usize> {
    let mut p = Parser {
        g,
        src: text.as_bytes(),
        pos: 0,
    };
    let x = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(x)
}

struct Parser<'a> {
    g: &'a FiniteGroup,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
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
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<usize> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = self.g.mul(acc, t);
                }
                Some(c) if c == b'(' || c == b'[' || c.is_ascii_alphanumeric() => {
                    let t = self.term()?;
                    acc = self.g.mul(acc, t);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<usize> {
        let mut x = self.atom()?;
        while self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.integer()?;
            let base = if e < 0 { self.g.inv(x) } else { x };
            x = self.g.pow(base, e.unsigned_abs());
        }
        Ok(x)
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| self.error("expected an integer exponent"))
    }

    fn atom(&mut self) -> Result<usize> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let x = self.expr()?;
                self.expect(b')')?;
                Ok(x)
            }
            Some(b'[') => {
                self.pos += 1;
                let a = self.expr()?;
                self.expect(b',')?;
                let b = self.expr()?;
                self.expect(b']')?;
                Ok(self.g.comm(a, b))
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(self.g.identity())
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let k = self
                    .g
                    .generator_names()
                    .iter()
                    .position(|n| n == name)
                    .ok_or_else(|| Error::Parse(format!("unknown generator '{name}'")))?;
                Ok(self.g.generators()[k])
            }
            _ => Err(self.error("expected a generator, '1', '(' or '['")),
        }
    }
}
