//! Text form of polynomials.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := power (('*' power) | ('/' integer))*
//! power  := atom ['^' integer]
//! atom   := integer | name | 'alpha' | '(' expr ')'
//! ```
//!
//! `alpha` is the generator of the number field the polynomial lives over.
//! Printing is canonical: terms in decreasing lex order, coefficients as
//! `p/q`, irrational coefficients parenthesised in `alpha`.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::{Field, Rationals};
use super::mpoly::{MPoly, Vars};
use super::numfield::{qpoly_to_string, rational_to_string, NfElem, NumberField, QPoly};
use super::upoly::UPoly;
use crate::error::{Error, Result};

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    vars: &'a Arc<Vars>,
    k: &'a NumberField,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.to_string() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let t = core::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(t.parse().unwrap())
    }

    fn expr(&mut self) -> Result<MPoly<NfElem>> {
        let k = self.k;
        let mut acc = MPoly::zero(self.vars);
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign < 0 { acc.sub(&t, k) } else { acc.add(&t, k) };
            match self.peek() {
                Some(b'+') => sign = 1,
                Some(b'-') => sign = -1,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<MPoly<NfElem>> {
        let k = self.k;
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.power()?;
                    acc = acc.mul(&f, k);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.integer()?;
                    if d.is_zero() {
                        return self.err("division by zero");
                    }
                    let c = k.embed_rational(&BigRational::new(BigInt::one(), d));
                    acc = acc.scale(&c, k);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<MPoly<NfElem>> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.integer()?;
            let e: u32 = match e.try_into() {
                Ok(e) if e <= 1000 => e,
                _ => return self.err("exponent too large"),
            };
            return Ok(base.pow(e, self.k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MPoly<NfElem>> {
        let k = self.k;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(MPoly::constant(self.vars, k.from_int(&n), k))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = core::str::from_utf8(&self.s[start..self.pos]).unwrap();
                if let Some(i) = self.vars.index(name) {
                    return Ok(MPoly::var(self.vars, i, k));
                }
                if name == "alpha" {
                    return Ok(MPoly::constant(self.vars, k.generator(), k));
                }
                self.pos = start;
                self.err("unknown symbol")
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses `s` as a polynomial in `vars` over `k`.
pub fn parse_mpoly(s: &str, vars: &Arc<Vars>, k: &NumberField) -> Result<MPoly<NfElem>> {
    let mut p = Parser { s: s.as_bytes(), pos: 0, vars, k };
    let r = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(r)
}

/// Parses a univariate rational polynomial in `var`.
pub fn parse_qpoly(s: &str, var: &str) -> Result<QPoly> {
    let vars = Vars::new(&[var]);
    let q = NumberField::rationals();
    let p = parse_mpoly(s, &vars, &q)?;
    let mut c = vec![BigRational::zero(); p.degree_in(0).map_or(0, |d| d as usize + 1)];
    for (m, e) in p.terms() {
        c[m[0] as usize] = q.as_rational(e).unwrap();
    }
    Ok(UPoly::from_coeffs(&Rationals, c))
}

/// Parses a number-field element written in `alpha`.
pub fn parse_elem(s: &str, k: &NumberField) -> Result<NfElem> {
    let vars = Vars::new(&[]);
    let p = parse_mpoly(s, &vars, k)?;
    Ok(p.constant_value(k).unwrap_or_else(|| k.zero()))
}

fn coeff_to_string(k: &NumberField, c: &NfElem) -> (bool, String) {
    match k.as_rational(c) {
        Some(r) => (r.is_negative(), rational_to_string(&r.abs())),
        None => (false, alloc::format!("({})", qpoly_to_string(c, "alpha"))),
    }
}

pub fn elem_to_string(k: &NumberField, c: &NfElem) -> String {
    match k.as_rational(c) {
        Some(r) => rational_to_string(&r),
        None => qpoly_to_string(c, "alpha"),
    }
}

/// Canonical text form; `parse_mpoly` inverts it.
pub fn mpoly_to_string(p: &MPoly<NfElem>, k: &NumberField) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let names = &p.vars().names;
    let mut s = String::new();
    for (m, c) in p.terms().rev() {
        let (neg, body) = coeff_to_string(k, c);
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let is_const = m.iter().all(|&e| e == 0);
        let mut parts: Vec<String> = Vec::new();
        if is_const || !k.is_one(&k.neg(c)) && !k.is_one(c) {
            parts.push(body);
        }
        for (i, &e) in m.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(names[i].clone()),
                _ => parts.push(alloc::format!("{}^{}", names[i], e)),
            }
        }
        let _ = write!(s, "{}", parts.join("*"));
    }
    s
}
