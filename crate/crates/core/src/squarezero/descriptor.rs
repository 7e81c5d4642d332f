//! Product descriptors such as `CP1^2 * PQ(2,1) * DIAG(3) * S4`.
//!
//! Terms are separated by `*`; each term is `CP1`, `S4`, `PQ(p,q)` or
//! `DIAG(r)`, optionally followed by `^k`. Keywords are case-insensitive,
//! whitespace is ignored, and `pt` or the empty string denote the point.

use super::{FactorKind, ManifoldError, ProductManifold, Result};

const MAX_MULTIPLICITY: u64 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Int(u64),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    text: String,
    /// 1-based column of the first character.
    column: usize,
}

fn tokenize(input: &str) -> Result<Vec<Token>> {
    let chars: Vec<(usize, char)> = input.chars().enumerate().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (col, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_alphabetic() {
            while i < chars.len() && chars[i].1.is_ascii_alphanumeric() {
                i += 1;
            }
            let text: String = chars[start..i].iter().map(|(_, c)| c).collect();
            out.push(Token {
                tok: Tok::Word(text.to_ascii_uppercase()),
                text,
                column: col + 1,
            });
        } else if c.is_ascii_digit() {
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().map(|(_, c)| c).collect();
            let value = text.parse::<u64>().map_err(|_| ManifoldError::Parse {
                column: col + 1,
                token: text.clone(),
                message: "integer too large".into(),
            })?;
            out.push(Token {
                tok: Tok::Int(value),
                text,
                column: col + 1,
            });
        } else if "*^(),".contains(c) {
            i += 1;
            out.push(Token {
                tok: Tok::Sym(c),
                text: c.to_string(),
                column: col + 1,
            });
        } else {
            return Err(ManifoldError::Parse {
                column: col + 1,
                token: c.to_string(),
                message: "unexpected character".into(),
            });
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end_column: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn error(&self, message: &str) -> ManifoldError {
        match self.peek() {
            Some(t) => ManifoldError::Parse {
                column: t.column,
                token: t.text.clone(),
                message: message.into(),
            },
            None => ManifoldError::Parse {
                column: self.end_column,
                token: "<end>".into(),
                message: message.into(),
            },
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        match self.peek() {
            Some(Token { tok: Tok::Sym(s), .. }) if *s == c => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error(&format!("expected `{c}`"))),
        }
    }

    fn int(&mut self) -> Result<u64> {
        match self.peek() {
            Some(Token { tok: Tok::Int(v), .. }) => {
                let v = *v;
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.error("expected a non-negative integer")),
        }
    }

    fn small_int(&mut self) -> Result<u32> {
        let t = self.peek().cloned();
        let v = self.int()?;
        u32::try_from(v).map_err(|_| ManifoldError::Parse {
            column: t.map_or(self.end_column, |t| t.column),
            token: v.to_string(),
            message: "integer too large".into(),
        })
    }

    /// Parses one term; `None` for the point.
    fn term(&mut self) -> Result<Option<(FactorKind, u64)>> {
        let Some(Token { tok: Tok::Word(w), .. }) = self.peek().cloned() else {
            return Err(self.error("expected CP1, PQ(p,q), DIAG(r), S4 or pt"));
        };
        self.pos += 1;
        let kind = match w.as_str() {
            "CP1" => Some(FactorKind::ProjLine),
            "S4" => Some(FactorKind::FourSphere),
            "PT" => None,
            "PQ" => {
                self.expect_sym('(')?;
                let p = self.small_int()?;
                self.expect_sym(',')?;
                let q = self.small_int()?;
                self.expect_sym(')')?;
                Some(FactorKind::PQ { p, q })
            }
            "DIAG" => {
                self.expect_sym('(')?;
                let r = self.small_int()?;
                self.expect_sym(')')?;
                Some(FactorKind::Diag { r })
            }
            _ => {
                self.pos -= 1;
                return Err(self.error("unknown factor"));
            }
        };
        let mut multiplicity = 1;
        if let Some(Token { tok: Tok::Sym('^'), .. }) = self.peek() {
            self.pos += 1;
            let at = self.pos;
            multiplicity = self.int()?;
            if multiplicity == 0 || multiplicity > MAX_MULTIPLICITY {
                self.pos = at;
                return Err(self.error(&format!("exponent must lie in 1..={MAX_MULTIPLICITY}")));
            }
        }
        Ok(kind.map(|k| (k, multiplicity)))
    }
}

/// Parses a product descriptor. Syntax errors carry the offending token and
/// its column; well-formed terms naming an invalid factor (for example
/// `PQ(0,2)`) are reported as [`ManifoldError::InvalidFactor`].
pub fn parse_product(input: &str) -> Result<ProductManifold> {
    let tokens = tokenize(input)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end_column: input.chars().count() + 1,
    };
    let mut factors = Vec::new();
    if parser.peek().is_none() {
        return Ok(ProductManifold::point());
    }
    loop {
        if let Some((kind, k)) = parser.term()? {
            kind.validate()?;
            factors.extend(std::iter::repeat_n(kind, k as usize));
        }
        match parser.peek() {
            None => break,
            Some(Token { tok: Tok::Sym('*'), .. }) => parser.pos += 1,
            Some(_) => return Err(parser.error("expected `*` or end of input")),
        }
    }
    ProductManifold::new(factors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_products() {
        let m = parse_product("CP1^2 * PQ(1,1)").unwrap();
        assert_eq!(
            m.factors(),
            &[FactorKind::ProjLine, FactorKind::ProjLine, FactorKind::PQ { p: 1, q: 1 }]
        );
        let m = parse_product("  s4*diag( 3 ) *  pq(2 , 0)^3 ").unwrap();
        assert_eq!(m.to_string(), "PQ(2,0)^3 * DIAG(3) * S4");
        assert!(parse_product("").unwrap().is_empty());
        assert!(parse_product("pt").unwrap().is_empty());
    }

    #[test]
    fn display_round_trips() {
        for s in ["CP1^3 * PQ(4,2) * DIAG(2)^2 * S4", "pt", "PQ(1,0)"] {
            assert_eq!(parse_product(s).unwrap().to_string(), s);
        }
    }

    #[test]
    fn syntax_errors_have_positions() {
        let e = parse_product("CP1 * PQ(2 1)").unwrap_err();
        assert_eq!(
            e,
            ManifoldError::Parse {
                column: 12,
                token: "1".into(),
                message: "expected `,`".into()
            }
        );
        let e = parse_product("CP2").unwrap_err();
        assert!(matches!(e, ManifoldError::Parse { column: 1, ref token, .. } if token == "CP2"));
        let e = parse_product("CP1 *").unwrap_err();
        assert!(matches!(e, ManifoldError::Parse { column: 6, ref token, .. } if token == "<end>"));
        let e = parse_product("CP1 % S4").unwrap_err();
        assert!(matches!(e, ManifoldError::Parse { column: 5, .. }));
        let e = parse_product("CP1^0").unwrap_err();
        assert!(matches!(e, ManifoldError::Parse { column: 5, .. }));
        let e = parse_product("CP1 S4").unwrap_err();
        assert!(matches!(e, ManifoldError::Parse { column: 5, .. }));
    }

    #[test]
    fn invalid_factors_are_domain_errors() {
        assert!(matches!(parse_product("PQ(0,2)"), Err(ManifoldError::InvalidFactor(_))));
        assert!(matches!(parse_product("DIAG(0)"), Err(ManifoldError::InvalidFactor(_))));
    }
}
