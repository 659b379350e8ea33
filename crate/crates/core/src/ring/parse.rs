//! Parser for the ring-spec grammar:
//!
//! ```text
//! ring := atom (" x " atom)*
//! atom := base ["^" INT]
//! base := "Z/" INT | "GF(" INT ")" ["{" poly "}"] | "M" INT "(GF(" INT "))" | "(" ring ")"
//! poly := comma-separated coefficients, constant term first
//! ```
//!
//! Whitespace is insignificant everywhere. "^e" repeats the preceding atom as
//! e product factors, so "Z/2^5" is the 5-fold product of Z/2 (never Z/32).

use super::{GaloisSpec, RingSpec};
use crate::error::{Error, Result};

pub fn parse_ring_spec(text: &str) -> Result<RingSpec> {
    let mut p = Parser { bytes: text.as_bytes(), pos: 0 };
    let spec = p.ring()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(spec)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
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

    fn eat(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn int(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected an integer"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse { pos: start, msg: "integer too large".into() })
    }

    fn ring(&mut self) -> Result<RingSpec> {
        let mut factors = vec![self.atom()?];
        while self.peek() == Some(b'x') {
            self.pos += 1;
            factors.push(self.atom()?);
        }
        RingSpec::product(factors)
    }

    fn atom(&mut self) -> Result<RingSpec> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.int()?;
            if e == 0 || e > u32::MAX as u64 {
                return Err(self.err("power must be a positive integer"));
            }
            return base.power(e as u32);
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<RingSpec> {
        match self.peek() {
            Some(b'Z') => {
                self.pos += 1;
                self.eat(b'/')?;
                let n = self.int()?;
                RingSpec::zmod(n)
            }
            Some(b'G') => {
                self.pos += 1;
                self.eat(b'F')?;
                self.galois_body().map(RingSpec::Galois)
            }
            Some(b'M') => {
                self.pos += 1;
                let dim = self.int()?;
                if dim == 0 || dim > u32::MAX as u64 {
                    return Err(self.err("matrix dimension must be a positive integer"));
                }
                self.eat(b'(')?;
                self.eat(b'G')?;
                self.eat(b'F')?;
                let base = self.galois_body()?;
                self.eat(b')')?;
                RingSpec::matrix(dim as u32, base)
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.ring()?;
                self.eat(b')')?;
                Ok(inner)
            }
            _ => Err(self.err("expected 'Z/', 'GF(', 'M', or '('")),
        }
    }

    /// Parses `( INT ) [ "{" poly "}" ]` after "GF" has been consumed.
    fn galois_body(&mut self) -> Result<GaloisSpec> {
        self.eat(b'(')?;
        let q = self.int()?;
        self.eat(b')')?;
        let (p, k) = super::poly::prime_power(q)
            .ok_or_else(|| Error::InvalidParameter(format!("{q} is not a prime power")))?;
        if self.peek() == Some(b'{') {
            self.pos += 1;
            let mut coeffs = vec![self.int()?];
            while self.peek() == Some(b',') {
                self.pos += 1;
                coeffs.push(self.int()?);
            }
            self.eat(b'}')?;
            GaloisSpec::with_poly(p, k, coeffs)
        } else {
            GaloisSpec::new(p, k)
        }
    }
}
