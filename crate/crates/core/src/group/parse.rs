//! Text grammar for group specs and canonical element strings.
//!
//! ```text
//! product := postfix ('x' postfix)*
//! postfix := primary ('^' INT | 'wr' 'sym' '(' INT ')')*
//! primary := 'cyc' '(' INT ')' | 'sym' '(' INT ')' | 'tri' '(' INT ')' | '(' product ')'
//! ```
//!
//! Whitespace between tokens is ignored. Postfix operators bind tighter than `x`,
//! so `cyc(3)^3 wr sym(2)` is `(cyc(3)^3) wr sym(2)`.

use super::GroupSpec;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Cyc,
    Sym,
    Tri,
    Wr,
    Times,
    Caret,
    LParen,
    RParen,
    Int(u64),
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    /// Returns the next token and its starting byte offset.
    fn next(&mut self) -> Result<(Tok, usize)> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[self.pos..];
        let Some(c) = rest.chars().next() else {
            return Ok((Tok::End, start));
        };
        for (kw, tok) in [("cyc", Tok::Cyc), ("sym", Tok::Sym), ("tri", Tok::Tri), ("wr", Tok::Wr)] {
            if rest.starts_with(kw) {
                self.pos += kw.len();
                return Ok((tok, start));
            }
        }
        let tok = match c {
            'x' | 'X' | '×' => Tok::Times,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            d if d.is_ascii_digit() => {
                let len = rest.bytes().take_while(u8::is_ascii_digit).count();
                let n = rest[..len].parse::<u64>().map_err(|_| Error::Parse {
                    pos: start,
                    msg: "integer too large".into(),
                })?;
                self.pos += len;
                return Ok((Tok::Int(n), start));
            }
            other => {
                return Err(Error::Parse { pos: start, msg: format!("unexpected character '{other}'") })
            }
        };
        self.pos += c.len_utf8();
        Ok((tok, start))
    }
}

struct SpecParser<'a> {
    lex: Lexer<'a>,
    peeked: (Tok, usize),
}

impl<'a> SpecParser<'a> {
    fn new(src: &'a str) -> Result<Self> {
        let mut lex = Lexer { src, pos: 0 };
        let peeked = lex.next()?;
        Ok(SpecParser { lex, peeked })
    }

    fn bump(&mut self) -> Result<(Tok, usize)> {
        let next = self.lex.next()?;
        Ok(std::mem::replace(&mut self.peeked, next))
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        let (tok, pos) = self.bump()?;
        if tok == want {
            Ok(())
        } else {
            Err(Error::Parse { pos, msg: format!("expected {what}") })
        }
    }

    fn int(&mut self) -> Result<u32> {
        match self.bump()? {
            (Tok::Int(n), pos) => {
                u32::try_from(n).map_err(|_| Error::Parse { pos, msg: "integer too large".into() })
            }
            (_, pos) => Err(Error::Parse { pos, msg: "expected integer".into() }),
        }
    }

    fn positive(&mut self) -> Result<u32> {
        let pos = self.peeked.1;
        let n = self.int()?;
        if n == 0 {
            return Err(Error::Parse { pos, msg: "size parameter must be at least 1".into() });
        }
        Ok(n)
    }

    fn call(&mut self) -> Result<u32> {
        self.expect(Tok::LParen, "'('")?;
        let n = self.positive()?;
        self.expect(Tok::RParen, "')'")?;
        Ok(n)
    }

    fn product(&mut self) -> Result<GroupSpec> {
        let mut parts = vec![self.postfix()?];
        while self.peeked.0 == Tok::Times {
            self.bump()?;
            parts.push(self.postfix()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            GroupSpec::DirectProduct(parts)
        })
    }

    fn postfix(&mut self) -> Result<GroupSpec> {
        let mut g = self.primary()?;
        loop {
            match self.peeked.0 {
                Tok::Caret => {
                    self.bump()?;
                    let k = self.positive()?;
                    g = GroupSpec::DirectProduct(vec![g; k as usize]);
                }
                Tok::Wr => {
                    self.bump()?;
                    self.expect(Tok::Sym, "'sym' after 'wr'")?;
                    let n = self.call()?;
                    g = GroupSpec::Wreath(Box::new(g), n);
                }
                _ => return Ok(g),
            }
        }
    }

    fn primary(&mut self) -> Result<GroupSpec> {
        match self.bump()? {
            (Tok::Cyc, _) => Ok(GroupSpec::Cyclic(self.call()?)),
            (Tok::Sym, _) => Ok(GroupSpec::Symmetric(self.call()?)),
            (Tok::Tri, _) => Ok(GroupSpec::TriangleSymmetric(self.call()?)),
            (Tok::LParen, _) => {
                let g = self.product()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(g)
            }
            (_, pos) => Err(Error::Parse { pos, msg: "expected cyc, sym, tri or '('".into() }),
        }
    }
}

/// Parses a group spec string such as `cyc(4)^3` or `cyc(3)^3 wr sym(2)`.
pub fn parse_spec(text: &str) -> Result<GroupSpec> {
    let mut p = SpecParser::new(text)?;
    let g = p.product()?;
    match p.peeked {
        (Tok::End, _) => {}
        (_, pos) => return Err(Error::Parse { pos, msg: "trailing input".into() }),
    }
    g.validate()?;
    Ok(g.normalized())
}

/// Structure of an element's text form, mirroring the group layout.
#[derive(Debug, Clone)]
pub(crate) enum Shape {
    Cyclic,
    Perm,
    Tuple(Vec<Shape>),
    Wreath(Box<Shape>),
}

pub(crate) struct ElementParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> ElementParser<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        ElementParser { src: src.as_bytes(), pos: 0 }
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn lit(&mut self, s: &str) -> Result<()> {
        self.ws();
        if self.src[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            Ok(())
        } else {
            self.err(&format!("expected '{s}'"))
        }
    }

    fn peek(&mut self, c: u8) -> bool {
        self.ws();
        self.src.get(self.pos) == Some(&c)
    }

    fn int(&mut self) -> Result<u32> {
        self.ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse { pos: start, msg: "integer too large".into() })
    }

    fn perm(&mut self, out: &mut Vec<u32>) -> Result<()> {
        self.lit("p:[")?;
        if !self.peek(b']') {
            loop {
                out.push(self.int()?);
                if self.peek(b',') {
                    self.pos += 1;
                } else {
                    break;
                }
            }
        }
        self.lit("]")
    }

    pub(crate) fn element(&mut self, shape: &Shape, out: &mut Vec<u32>) -> Result<()> {
        match shape {
            Shape::Cyclic => {
                self.lit("c:")?;
                out.push(self.int()?);
                Ok(())
            }
            Shape::Perm => self.perm(out),
            Shape::Tuple(parts) => {
                self.lit("(")?;
                for (i, s) in parts.iter().enumerate() {
                    if i > 0 {
                        self.lit(",")?;
                    }
                    self.element(s, out)?;
                }
                self.lit(")")
            }
            Shape::Wreath(base) => {
                self.lit("w:(")?;
                self.lit("[")?;
                if !self.peek(b']') {
                    loop {
                        self.element(base, out)?;
                        if self.peek(b',') {
                            self.pos += 1;
                        } else {
                            break;
                        }
                    }
                }
                self.lit("]")?;
                self.lit(",")?;
                self.perm(out)?;
                self.lit(")")
            }
        }
    }

    pub(crate) fn finish(&mut self) -> Result<()> {
        self.ws();
        if self.pos == self.src.len() {
            Ok(())
        } else {
            self.err("trailing input")
        }
    }
}
