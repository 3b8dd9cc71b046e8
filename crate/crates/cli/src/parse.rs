//! Recursive-descent parsers for ring expressions and element literals, and
//! the matching renderers.
//!
//! Ring grammar (whitespace insignificant, product left-associative and
//! binding loosest):
//!
//! ```text
//! expr := term ('x' term)*
//! term := 'Z' uint | 'F' uint '[x]/(' poly ')' | 'T' uint '(' expr ')' | '(' expr ')'
//! poly := mono ('+' mono)*
//! mono := uint | uint? 'x' ('^' uint)?
//! ```
//!
//! Element literals follow the ring's shape: decimal for `Zn`, `(l,r)` for
//! products, a polynomial for `F_p[x]/(f)`, and `[row;row;...]` for
//! triangular matrices, where row `i` lists its `n - i` upper-triangle
//! entries separated by commas.

use std::fmt;

use ringlab_core::ring::{poly_text, Elem, Ring, RingExpr, TriMatrix};

const MAX_POLY_DEGREE: usize = 512;

/// Parse-layer error; every variant maps to a CLI exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    /// Syntax error with a byte position.
    Syntax { pos: usize, message: String },
    /// Literal entry out of range for the ring.
    Range { message: String },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { pos, message } => {
                write!(f, "parse error at position {pos}: {message}")
            }
            ParseError::Range { message } => write!(f, "range error: {message}"),
        }
    }
}

impl std::error::Error for ParseError {}

struct Scanner<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(text: &'a str) -> Scanner<'a> {
        Scanner {
            src: text.as_bytes(),
            pos: 0,
        }
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", c as char)))
        }
    }

    fn uint(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let mut value: u64 = 0;
        while let Some(d) = self.src.get(self.pos).copied().filter(u8::is_ascii_digit) {
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add((d - b'0') as u64))
                .ok_or_else(|| self.error("integer literal too large".to_string()))?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected an unsigned integer".to_string()));
        }
        Ok(value)
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        if self.pos == self.src.len() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing input".to_string()))
        }
    }

    fn error(&self, message: String) -> ParseError {
        ParseError::Syntax {
            pos: self.pos,
            message,
        }
    }
}

/// Parses a ring expression such as `T2(Z2)`, `Z2 x Z2`, `F2[x]/(x^2)`.
pub fn parse_ring_expr(text: &str) -> Result<RingExpr, ParseError> {
    let mut s = Scanner::new(text);
    let expr = parse_expr(&mut s)?;
    s.finish()?;
    Ok(expr)
}

fn parse_expr(s: &mut Scanner) -> Result<RingExpr, ParseError> {
    let mut expr = parse_term(s)?;
    while s.peek() == Some(b'x') {
        s.pos += 1;
        let rhs = parse_term(s)?;
        expr = RingExpr::Product(Box::new(expr), Box::new(rhs));
    }
    Ok(expr)
}

fn parse_term(s: &mut Scanner) -> Result<RingExpr, ParseError> {
    match s.peek() {
        Some(b'Z') => {
            s.pos += 1;
            Ok(RingExpr::Zn(s.uint()?))
        }
        Some(b'F') => {
            s.pos += 1;
            let p = s.uint()?;
            s.expect(b'[')?;
            s.expect(b'x')?;
            s.expect(b']')?;
            s.expect(b'/')?;
            s.expect(b'(')?;
            let modulus = parse_poly(s)?;
            s.expect(b')')?;
            Ok(RingExpr::PolyQuotient { p, modulus })
        }
        Some(b'T') => {
            s.pos += 1;
            let n = s.uint()?;
            s.expect(b'(')?;
            let base = parse_expr(s)?;
            s.expect(b')')?;
            Ok(RingExpr::Triangular {
                n: n as usize,
                base: Box::new(base),
            })
        }
        Some(b'(') => {
            s.pos += 1;
            let expr = parse_expr(s)?;
            s.expect(b')')?;
            Ok(expr)
        }
        _ => Err(s.error("expected a ring expression (Z, F, T, or '(')".to_string())),
    }
}

fn parse_poly(s: &mut Scanner) -> Result<Vec<u64>, ParseError> {
    let mut coeffs: Vec<u64> = Vec::new();
    loop {
        let (coeff, power) = parse_mono(s)?;
        if power > MAX_POLY_DEGREE {
            return Err(s.error(format!("polynomial degree exceeds {MAX_POLY_DEGREE}")));
        }
        if coeffs.len() <= power {
            coeffs.resize(power + 1, 0);
        }
        coeffs[power] = coeffs[power]
            .checked_add(coeff)
            .ok_or_else(|| s.error("coefficient too large".to_string()))?;
        if !s.eat(b'+') {
            break;
        }
    }
    Ok(coeffs)
}

fn parse_mono(s: &mut Scanner) -> Result<(u64, usize), ParseError> {
    match s.peek() {
        Some(d) if d.is_ascii_digit() => {
            let coeff = s.uint()?;
            if s.peek() == Some(b'x') {
                s.pos += 1;
                Ok((coeff, parse_power(s)?))
            } else {
                Ok((coeff, 0))
            }
        }
        Some(b'x') => {
            s.pos += 1;
            Ok((1, parse_power(s)?))
        }
        _ => Err(s.error("expected a monomial".to_string())),
    }
}

fn parse_power(s: &mut Scanner) -> Result<usize, ParseError> {
    if s.eat(b'^') {
        Ok(s.uint()? as usize)
    } else {
        Ok(1)
    }
}

/// Parses an element literal for `ring`.
pub fn parse_element(ring: &Ring, text: &str) -> Result<Elem, ParseError> {
    let mut s = Scanner::new(text);
    let e = parse_el(&mut s, ring)?;
    s.finish()?;
    Ok(e)
}

fn parse_el(s: &mut Scanner, ring: &Ring) -> Result<Elem, ParseError> {
    if let Some(m) = ring.zn_modulus() {
        let v = s.uint()?;
        if v >= m {
            return Err(ParseError::Range {
                message: format!("entry {v} is out of range for Z{m}"),
            });
        }
        return Ok(Elem(v));
    }
    if let Some((left, right)) = ring.product_parts() {
        s.expect(b'(')?;
        let l = parse_el(s, left)?;
        s.expect(b',')?;
        let r = parse_el(s, right)?;
        s.expect(b')')?;
        return Ok(Elem(l.0 * right.card() + r.0));
    }
    if let Some((p, _)) = ring.poly_parts() {
        let coeffs = parse_poly(s)?;
        for &c in &coeffs {
            if c >= p {
                return Err(ParseError::Range {
                    message: format!("coefficient {c} is out of range for characteristic {p}"),
                });
            }
        }
        return Ok(ring
            .poly_element_from_coeffs(&coeffs)
            .expect("ring is a polynomial quotient"));
    }
    if let Some((n, base)) = ring.triangular_parts() {
        let base = base.clone();
        s.expect(b'[')?;
        let mut entries = Vec::new();
        for i in 0..n {
            if i > 0 {
                s.expect(b';')?;
            }
            for k in 0..(n - i) {
                if k > 0 {
                    s.expect(b',')?;
                }
                entries.push(parse_el(s, &base)?);
            }
        }
        s.expect(b']')?;
        let matrix = TriMatrix::new(n, entries).expect("entry count matches by construction");
        return ring.pack_tri(&matrix).map_err(|e| ParseError::Range {
            message: e.to_string(),
        });
    }
    Err(s.error("elements of quotient rings have no literal syntax".to_string()))
}

/// Renders an element so that `parse_element` reads it back.
pub fn render_element(ring: &Ring, e: Elem) -> String {
    if ring.zn_modulus().is_some() {
        return e.0.to_string();
    }
    if let Some((left, right)) = ring.product_parts() {
        let rc = right.card();
        return format!(
            "({},{})",
            render_element(left, Elem(e.0 / rc)),
            render_element(right, Elem(e.0 % rc))
        );
    }
    if ring.poly_parts().is_some() {
        return poly_text(&ring.poly_coeffs(e).expect("polynomial quotient"));
    }
    if let Some((n, base)) = ring.triangular_parts() {
        let m = ring.unpack_tri(e).expect("valid index");
        let rows: Vec<String> = (0..n)
            .map(|i| {
                (i..n)
                    .map(|j| render_element(base, m.get(i, j)))
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        return format!("[{}]", rows.join(";"));
    }
    // quotient rings: show the minimal representative of the coset
    if let Some((base, _)) = ring.quotient_parts() {
        let rep = ring.quotient_rep(e).expect("valid index");
        return render_element(base, rep);
    }
    e.0.to_string()
}
