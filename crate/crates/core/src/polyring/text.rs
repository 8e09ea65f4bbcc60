//! Plain-text polynomial format: `c * x1^a1 * ... * xN^aN` terms joined by
//! `+`/`-`, whitespace-insensitive, printed in descending graded-lex order.

use std::fmt;

use crate::error::{Error, Result};
use crate::polyring::{MultiPoly, VarietyRelation};
use crate::scalar::Scalar;

impl<T: Scalar> fmt::Display for MultiPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (exps, c)) in self.terms().rev().enumerate() {
            let c = c.as_f64();
            let mag = c.abs();
            match (idx, c < 0.0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            f.write_str(&format_coefficient(mag))?;
            for (v, &e) in exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, " * x{}", v + 1)?,
                    _ => write!(f, " * x{}^{}", v + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

/// `xk^d = (Q_0) + (Q_1) * xk + ...`, zero coefficients omitted.
impl<T: Scalar> fmt::Display for VarietyRelation<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.k();
        write!(f, "x{k}^{} = ", self.d())?;
        let mut first = true;
        for (i, q) in self.q().iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({q})")?,
                1 => write!(f, "({q}) * x{k}")?,
                _ => write!(f, "({q}) * x{k}^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

fn format_coefficient(c: f64) -> String {
    if c.fract() == 0.0 && c < 1e15 {
        format!("{}", c as u64)
    } else {
        format!("{c:?}")
    }
}

/// Parses the text format. Variables are `x1..xN`; with `nvars == None` the
/// count is the largest index seen (at least 1).
pub fn parse_poly(input: &str, nvars: Option<usize>) -> Result<MultiPoly<f64>> {
    let mut parser = Parser {
        src: input,
        bytes: input.as_bytes(),
        pos: 0,
    };
    let raw = parser.poly()?;
    let max_var = raw
        .iter()
        .flat_map(|(vars, _)| vars.iter().map(|(v, _)| *v))
        .max()
        .unwrap_or(0);
    let n = match nvars {
        Some(n) => {
            if max_var > n {
                return Err(Error::Parse {
                    input: input.to_string(),
                    position: 0,
                    message: format!("variable x{max_var} exceeds the {n} declared variables"),
                });
            }
            n
        }
        None => max_var.max(1),
    };
    let terms = raw.into_iter().map(|(vars, c)| {
        let mut e = vec![0u32; n];
        for (v, p) in vars {
            e[v - 1] += p;
        }
        (e, c)
    });
    Ok(MultiPoly::from_terms(n, terms))
}

type RawTerm = (Vec<(usize, u32)>, f64);

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            input: self.src.to_string(),
            position: self.pos,
            message: message.into(),
        })
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

    fn poly(&mut self) -> Result<Vec<RawTerm>> {
        let mut out = Vec::new();
        let mut sign = 1.0;
        match self.peek() {
            None => return self.err("empty input"),
            Some(b'-') => {
                sign = -1.0;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        loop {
            let (vars, c) = self.term()?;
            out.push((vars, sign * c));
            match self.peek() {
                None => break,
                Some(b'+') => sign = 1.0,
                Some(b'-') => sign = -1.0,
                Some(ch) => return self.err(format!("unexpected character {:?}", ch as char)),
            }
            self.pos += 1;
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<RawTerm> {
        let mut vars = Vec::new();
        let mut coef = 1.0;
        loop {
            match self.peek() {
                Some(b'x') => vars.push(self.variable()?),
                Some(ch) if ch.is_ascii_digit() || ch == b'.' => coef *= self.number()?,
                Some(ch) => return self.err(format!("expected a factor, found {:?}", ch as char)),
                None => return self.err("expected a factor, found end of input"),
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((vars, coef))
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn variable(&mut self) -> Result<(usize, u32)> {
        self.pos += 1; // 'x'
        let idx = self.digits();
        let Ok(v) = idx.parse::<usize>() else {
            return self.err("variable needs an index, e.g. x1");
        };
        if v == 0 {
            return self.err("variables are numbered from x1");
        }
        let mut power = 1;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let p = self.digits();
            power = match p.parse::<u32>() {
                Ok(p) => p,
                Err(_) => return self.err("exponent must be a nonnegative integer"),
            };
        }
        Ok((v, power))
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        let b = self.bytes;
        while self.pos < b.len() && (b[self.pos].is_ascii_digit() || b[self.pos] == b'.') {
            self.pos += 1;
        }
        if self.pos < b.len() && (b[self.pos] == b'e' || b[self.pos] == b'E') {
            let mark = self.pos;
            self.pos += 1;
            if self.pos < b.len() && (b[self.pos] == b'+' || b[self.pos] == b'-') {
                self.pos += 1;
            }
            if self.pos < b.len() && b[self.pos].is_ascii_digit() {
                self.digits();
            } else {
                self.pos = mark;
            }
        }
        match self.src[start..self.pos].parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => {
                self.pos = start;
                self.err("malformed number")
            }
        }
    }
}
