use std::sync::Arc;

use super::{El, FiniteRing, RingKind};
use crate::error::{Error, Result};

/// Parsed ring spec: a finite ring, or a polynomial ring over one.
#[derive(Clone, Debug)]
pub enum ParsedRing {
    Finite(Arc<FiniteRing>),
    Poly(Arc<FiniteRing>),
}

struct Cursor<'a> {
    s: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.into() }
    }

    fn eat(&mut self, lit: &str) -> bool {
        if self.s[self.pos..].starts_with(lit) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<i64> {
        let rest = &self.s[self.pos..];
        let len = rest.char_indices().take_while(|(i, c)| c.is_ascii_digit() || (*i == 0 && *c == '-')).count();
        if len == 0 {
            return Err(self.err("expected an integer"));
        }
        let v = rest[..len].parse::<i64>().map_err(|_| self.err("bad integer"))?;
        self.pos += len;
        Ok(v)
    }

    fn ring(&mut self) -> Result<Arc<FiniteRing>> {
        if self.eat("zmod:") {
            let n = self.int()?;
            if n < 2 || n > u32::MAX as i64 {
                return Err(self.err("modulus must be at least 2"));
            }
            FiniteRing::zmod(n as u32)
        } else if self.eat("hyp:") {
            let inner = self.ring()?;
            FiniteRing::hyperbolic(&inner)
        } else if self.eat("prod(") {
            let mut fs = vec![self.ring()?];
            while self.eat(",") {
                fs.push(self.ring()?);
            }
            if !self.eat(")") {
                return Err(self.err("expected ')'"));
            }
            FiniteRing::product(&fs)
        } else {
            Err(self.err("expected zmod:, hyp:, poly: or prod("))
        }
    }
}

/// Parse a ring spec such as `zmod:5`, `hyp:zmod:2`, `poly:zmod:6`, `prod(zmod:2,zmod:3)`.
/// Returns the ring and the unparsed remainder.
pub fn parse_ring_prefix(s: &str) -> Result<(ParsedRing, &str)> {
    let mut c = Cursor { s, pos: 0 };
    let poly = c.eat("poly:");
    let r = c.ring()?;
    let rest = &s[c.pos..];
    Ok((if poly { ParsedRing::Poly(r) } else { ParsedRing::Finite(r) }, rest))
}

pub fn parse_ring(s: &str) -> Result<ParsedRing> {
    let (r, rest) = parse_ring_prefix(s.trim())?;
    if !rest.is_empty() {
        return Err(Error::Parse { pos: s.len() - rest.len(), msg: format!("unexpected trailing input '{rest}'") });
    }
    Ok(r)
}

/// Parse an element: an integer (image of Z → R) or a tuple `(a,b,…)` for hyperbolic and product rings.
pub fn parse_element(ring: &FiniteRing, s: &str) -> Result<El> {
    let s = s.trim();
    if let Some(inner) = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        let parts = split_top(inner);
        return match ring.kind() {
            RingKind::Hyperbolic { inner: base } if parts.len() == 2 => {
                let x = parse_element(base, parts[0])?;
                let y = parse_element(base, parts[1])?;
                Ok(x + base.size() as El * y)
            }
            RingKind::Product { factors } if parts.len() == factors.len() => {
                let mut a = 0;
                for (f, p) in factors.iter().zip(&parts).rev() {
                    a = a * f.size() as El + parse_element(f, p)?;
                }
                Ok(a)
            }
            _ => Err(Error::Parse { pos: 0, msg: format!("tuple '{s}' does not fit ring {}", ring.spec()) }),
        };
    }
    let v = s.parse::<i64>().map_err(|_| Error::Parse { pos: 0, msg: format!("bad element '{s}'") })?;
    Ok(ring.from_int(v))
}

fn split_top(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}
