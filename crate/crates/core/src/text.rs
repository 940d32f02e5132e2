//! Reading and printing polynomials.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := atom ['^' natural]
//! atom   := number ['/' number] | name | '(' expr ')'
//! ```
//!
//! Division is only allowed by nonzero constants.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact_arith::{Field, Rational};
use crate::polyseries::{Exponent, Poly};

/// `x, y, z` for up to three variables, `x1, …, xn` beyond.
pub fn default_names(n: usize) -> Vec<String> {
    if n <= 3 {
        ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("x{i}")).collect()
    }
}

pub fn parse_poly<F: Field, S: AsRef<str>>(src: &str, names: &[S]) -> Result<Poly<F>> {
    let names: Vec<&str> = names.iter().map(|s| s.as_ref()).collect();
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        names: &names,
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

/// Parse a rational literal such as `-3/4` or `7`.
pub fn parse_rational(src: &str) -> Result<Rational> {
    let p: Poly<Rational> = parse_poly::<Rational, &str>(src, &[])?;
    Ok(p.constant_coeff())
}

/// Identifiers occurring in the inputs, in natural order (`x2` before `x10`).
pub fn infer_variables<S: AsRef<str>>(inputs: &[S]) -> Vec<String> {
    let mut names: Vec<String> = Vec::new();
    for s in inputs {
        let b = s.as_ref().as_bytes();
        let mut i = 0;
        while i < b.len() {
            if b[i].is_ascii_alphabetic() || b[i] == b'_' {
                let start = i;
                while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                    i += 1;
                }
                let name = String::from_utf8_lossy(&b[start..i]).into_owned();
                if !names.contains(&name) {
                    names.push(name);
                }
            } else if b[i].is_ascii_digit() {
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
            } else {
                i += 1;
            }
        }
    }
    names.sort_by(|a, b| natural_cmp(a, b));
    names
}

fn natural_cmp(a: &str, b: &str) -> Ordering {
    let split = |s: &str| {
        let cut = s.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        let (head, tail) = s.split_at(cut);
        (head.to_string(), tail.parse::<u64>().ok())
    };
    split(a).cmp(&split(b)).then_with(|| a.cmp(b))
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    names: &'a [&'a str],
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
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

    fn expr<F: Field>(&mut self) -> Result<Poly<F>> {
        let n = self.names.len();
        let mut acc = Poly::zero(n);
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
            let t = self.term::<F>()?;
            acc = if sign < 0 { acc.sub(&t) } else { acc.add(&t) };
            match self.peek() {
                Some(b'+') => sign = 1,
                Some(b'-') => sign = -1,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term<F: Field>(&mut self) -> Result<Poly<F>> {
        let mut acc = self.factor::<F>()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.factor::<F>()?;
                    acc = acc.mul(&f);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let f = self.factor::<F>()?;
                    if !f.is_constant() || f.is_zero() {
                        return Err(Error::Parse {
                            pos: at,
                            msg: "division by a nonconstant or zero expression".into(),
                        });
                    }
                    acc = acc.scale(&f.constant_coeff().try_inv()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor<F: Field>(&mut self) -> Result<Poly<F>> {
        let base = self.atom::<F>()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let k = self.natural()?;
            let k = u32::try_from(k).map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn natural(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    fn atom<F: Field>(&mut self) -> Result<Poly<F>> {
        let n = self.names.len();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr::<F>()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.natural()?;
                let q = Rational::from_integer(num);
                Ok(Poly::constant(n, F::from_rational(&q)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match self.names.iter().position(|v| *v == name) {
                    Some(i) => Ok(Poly::var(n, i)),
                    None => Err(Error::UnknownVariable(name.to_string())),
                }
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Printing order: ascending total degree, then reverse lexicographic
/// (`x^2` before `x*y` before `y^2`).
fn print_cmp(a: &Exponent, b: &Exponent) -> Ordering {
    a.total_degree()
        .cmp(&b.total_degree())
        .then_with(|| b.cmp(a))
}

fn format_monomial<S: AsRef<str>>(e: &Exponent, names: &[S]) -> String {
    let mut parts = Vec::new();
    for (i, &a) in e.iter().enumerate() {
        match a {
            0 => {}
            1 => parts.push(names[i].as_ref().to_string()),
            _ => parts.push(format!("{}^{}", names[i].as_ref(), a)),
        }
    }
    parts.join("*")
}

pub fn format_poly<F: Field, S: AsRef<str>>(p: &Poly<F>, names: &[S]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut terms: Vec<(&Exponent, &F)> = p.terms().collect();
    terms.sort_by(|a, b| print_cmp(a.0, b.0));
    let mut out = String::new();
    for (k, (e, c)) in terms.into_iter().enumerate() {
        let r = c.repr();
        if k == 0 {
            if r.negative {
                out.push('-');
            }
        } else {
            out.push_str(if r.negative { " - " } else { " + " });
        }
        let mono = format_monomial(e, names);
        if mono.is_empty() {
            out.push_str(&r.magnitude);
        } else if r.is_one {
            out.push_str(&mono);
        } else {
            out.push_str(&r.magnitude);
            out.push('*');
            out.push_str(&mono);
        }
    }
    out
}

/// Render a rational as `p` or `p/q`.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() || q.is_zero() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
