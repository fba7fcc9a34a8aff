use super::{MotivicClass, LEFSCHETZ};
use crate::error::{Error, Result};

// expr   := term (('+' | '-') term)*
// term   := unary ('*' unary)*
// unary  := '-' unary | power
// power  := atom ('^' integer)?
// atom   := integer | identifier | '(' expr ')'

pub(crate) fn is_symbol_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '/' || c == '\'')
        && s != LEFSCHETZ
}

pub(crate) fn parse_class(input: &str) -> Result<MotivicClass> {
    let mut p = Parser {
        src: input,
        bytes: input.as_bytes(),
        pos: 0,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in `{}`", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<MotivicClass> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' { acc + rhs } else { acc - rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MotivicClass> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc * self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MotivicClass> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<MotivicClass> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e = u32::try_from(e).map_err(|_| self.error("exponent too large"))?;
            if e > 256 {
                return Err(self.error("exponent too large"));
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<i128> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer"));
        }
        self.src[start..self.pos]
            .parse::<i128>()
            .map_err(|_| self.error("integer out of range"))
    }

    fn atom(&mut self) -> Result<MotivicClass> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => Ok(MotivicClass::int(self.integer()?)),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.bytes.len() {
                    let c = self.bytes[self.pos];
                    if c.is_ascii_alphanumeric() || c == b'_' || c == b'/' || c == b'\'' {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                let name = &self.src[start..self.pos];
                if name == LEFSCHETZ {
                    Ok(MotivicClass::lefschetz())
                } else {
                    Ok(MotivicClass::symbol(name))
                }
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_arithmetic() {
        let x = parse_class("(1 + L)^2").unwrap();
        assert_eq!(x, MotivicClass::from_l_coefficients(&[1, 2, 1]));
        let y = parse_class("-(L - 1) * X/G + 3").unwrap();
        assert_eq!(y.to_string(), "3 + X/G - X/G*L");
        assert_eq!(parse_class("2*3 - -1").unwrap(), MotivicClass::int(7));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_class("").is_err());
        assert!(parse_class("1 +").is_err());
        assert!(parse_class("(L").is_err());
        assert!(parse_class("L^").is_err());
        assert!(parse_class("L $ 2").is_err());
        assert!(parse_class("L^100000").is_err());
    }

    #[test]
    fn symbol_names() {
        assert!(is_symbol_name("X/G"));
        assert!(is_symbol_name("PV'"));
        assert!(!is_symbol_name("L"));
        assert!(!is_symbol_name("1x"));
    }
}
