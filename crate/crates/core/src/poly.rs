//! Polynomial ring `F_p[x0..xn]` and its elements.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::monomial::{Monomial, MAX_VARS};

/// Standard graded polynomial ring over a prime field, grevlex order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ring {
    pub p: u32,
    pub nvars: usize,
}

impl Ring {
    pub fn new(p: u32, nvars: usize) -> Result<Self> {
        PrimeField::new(p)?;
        if nvars == 0 || nvars > MAX_VARS {
            return Err(Error::Precondition(format!(
                "number of variables must be in 1..={MAX_VARS}, got {nvars}"
            )));
        }
        Ok(Ring { p, nvars })
    }

    /// `F_32003[x0..x_{nvars-1}]`.
    pub fn standard(nvars: usize) -> Self {
        Ring::new(crate::field::DEFAULT_PRIME, nvars).expect("valid ring")
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        PrimeField::new(self.p).expect("validated prime")
    }

    /// Projective dimension `n` of `Proj R`.
    pub fn n(&self) -> usize {
        self.nvars - 1
    }

    pub fn var_names(&self) -> Vec<String> {
        (0..self.nvars).map(|i| format!("x{i}")).collect()
    }

    pub fn check_same(&self, o: &Ring) -> Result<()> {
        if self != o {
            return Err(Error::RingMismatch(format!("{self:?} vs {o:?}")));
        }
        Ok(())
    }

    /// The ring with one variable fewer, used for hyperplane sections.
    pub fn drop_var(&self) -> Result<Ring> {
        Ring::new(self.p, self.nvars - 1)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    ring: Ring,
    /// Strictly decreasing in grevlex, nonzero coefficients.
    terms: Vec<(Monomial, u32)>,
}

impl Poly {
    pub fn zero(ring: Ring) -> Self {
        Poly { ring, terms: Vec::new() }
    }

    pub fn constant(ring: Ring, c: i64) -> Self {
        let c = ring.field().from_i64(c);
        Self::monomial(ring, Monomial::ONE, c)
    }

    pub fn monomial(ring: Ring, m: Monomial, c: u32) -> Self {
        if c == 0 {
            Self::zero(ring)
        } else {
            Poly { ring, terms: vec![(m, c)] }
        }
    }

    pub fn var(ring: Ring, i: usize) -> Self {
        assert!(i < ring.nvars);
        Self::monomial(ring, Monomial::var(i), 1)
    }

    /// Build from arbitrary terms; sorts and combines.
    pub fn from_terms(ring: Ring, mut terms: Vec<(Monomial, u32)>) -> Self {
        let f = ring.field();
        terms.sort_by(|a, b| b.0.grevlex(&a.0));
        let mut out: Vec<(Monomial, u32)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = f.add(last.1, c),
                _ => out.push((m, c)),
            }
            if let Some(last) = out.last() {
                if last.1 == 0 {
                    out.pop();
                }
            }
        }
        Poly { ring, terms: out }
    }

    pub(crate) fn from_sorted_terms(ring: Ring, terms: Vec<(Monomial, u32)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0.grevlex(&w[1].0) == Ordering::Greater));
        Poly { ring, terms }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn terms(&self) -> &[(Monomial, u32)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<(Monomial, u32)> {
        self.terms.first().copied()
    }

    /// Degree of the leading term, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.0.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m, _)) => self.terms.iter().all(|t| t.0.degree() == m.degree()),
        }
    }

    /// Constant term if the polynomial is a constant.
    pub fn as_constant(&self) -> Option<u32> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(m, c)] if m.is_one() => Some(*c),
            _ => None,
        }
    }

    pub fn add(&self, o: &Poly) -> Result<Poly> {
        self.ring.check_same(&o.ring)?;
        Ok(self.combine(o, 1))
    }

    pub fn sub(&self, o: &Poly) -> Result<Poly> {
        self.ring.check_same(&o.ring)?;
        Ok(self.combine(o, self.ring.field().neg(1)))
    }

    /// `self + c * o`.
    pub(crate) fn combine(&self, o: &Poly, c: u32) -> Poly {
        let f = self.ring.field();
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < o.terms.len() {
            let ord = if i == self.terms.len() {
                Ordering::Less
            } else if j == o.terms.len() {
                Ordering::Greater
            } else {
                self.terms[i].0.grevlex(&o.terms[j].0)
            };
            match ord {
                Ordering::Greater => {
                    out.push(self.terms[i]);
                    i += 1;
                }
                Ordering::Less => {
                    let v = f.mul(c, o.terms[j].1);
                    if v != 0 {
                        out.push((o.terms[j].0, v));
                    }
                    j += 1;
                }
                Ordering::Equal => {
                    let v = f.add(self.terms[i].1, f.mul(c, o.terms[j].1));
                    if v != 0 {
                        out.push((self.terms[i].0, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Poly { ring: self.ring, terms: out }
    }

    pub fn scale(&self, c: u32) -> Poly {
        if c == 0 {
            return Poly::zero(self.ring);
        }
        let f = self.ring.field();
        Poly {
            ring: self.ring,
            terms: self.terms.iter().map(|&(m, a)| (m, f.mul(a, c))).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: u32) -> Poly {
        if c == 0 {
            return Poly::zero(self.ring);
        }
        let f = self.ring.field();
        Poly {
            ring: self.ring,
            terms: self.terms.iter().map(|&(t, a)| (t.mul(m), f.mul(a, c))).collect(),
        }
    }

    pub fn mul(&self, o: &Poly) -> Result<Poly> {
        self.ring.check_same(&o.ring)?;
        Ok(self.mul_unchecked(o))
    }

    pub(crate) fn mul_unchecked(&self, o: &Poly) -> Poly {
        let (small, big) = if self.terms.len() <= o.terms.len() { (self, o) } else { (o, self) };
        let mut acc = Poly::zero(self.ring);
        for (m, c) in &small.terms {
            acc = acc.combine(&big.mul_term(m, *c), 1);
        }
        acc
    }

    pub fn neg(&self) -> Poly {
        self.scale(self.ring.field().neg(1))
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut r = Poly::constant(self.ring, 1);
        for _ in 0..e {
            r = r.mul_unchecked(self);
        }
        r
    }

    /// Substitute `x_v -> sub` (a polynomial in the remaining variables of `target`),
    /// renumbering later variables down by one.
    pub fn substitute_var(&self, v: usize, sub: &Poly, target: Ring) -> Poly {
        let mut powers: Vec<Poly> = vec![Poly::constant(target, 1)];
        let mut acc = Poly::zero(target);
        for (m, c) in &self.terms {
            let (rest, e) = m.remove_var(v);
            while powers.len() <= e as usize {
                let next = powers.last().unwrap().mul_unchecked(sub);
                powers.push(next);
            }
            acc = acc.combine(&powers[e as usize].mul_term(&rest, *c), 1);
        }
        acc
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let f = self.ring.field();
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let sc = f.to_signed(*c);
            let (neg, abs) = (sc < 0, sc.unsigned_abs());
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                s.push_str(&abs.to_string());
            } else if abs == 1 {
                s.push_str(&m.fmt_with(names));
            } else {
                s.push_str(&format!("{abs}*{}", m.fmt_with(names)));
            }
        }
        s
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&self.ring.var_names()))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_with(&self.ring.var_names()))
    }
}

/// Parse a polynomial such as `3*x0^2*x1 - x2*x3` over `ring` with the given variable names.
///
/// Coefficients are integers reduced mod p. Errors carry the column (1-based) within `src`.
pub fn parse_poly(ring: Ring, names: &[String], src: &str) -> Result<Poly> {
    let bytes = src.as_bytes();
    let err = |pos: usize, msg: &str| Error::Parse { line: 1, col: pos + 1, msg: msg.to_string() };
    let f = ring.field();
    let mut pos = 0;
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let mut terms = Vec::new();
    let mut first = true;
    loop {
        skip_ws(&mut pos);
        if pos >= bytes.len() {
            if first {
                return Err(err(pos, "empty polynomial"));
            }
            break;
        }
        let mut sign = 1i64;
        if bytes[pos] == b'+' || bytes[pos] == b'-' {
            if bytes[pos] == b'-' {
                sign = -1;
            }
            pos += 1;
            skip_ws(&mut pos);
        } else if !first {
            return Err(err(pos, "expected '+' or '-'"));
        }
        first = false;
        let mut coef: u32 = f.from_i64(sign);
        let mut mono = Monomial::ONE;
        let mut expect_factor = true;
        let mut seen_factor = false;
        while expect_factor {
            skip_ws(&mut pos);
            if pos >= bytes.len() {
                return Err(err(pos, "expected a coefficient or variable"));
            }
            if bytes[pos].is_ascii_digit() {
                let start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                let digits = &src[start..pos];
                let mut v: u32 = 0;
                for d in digits.bytes() {
                    v = f.add(f.mul(v, 10 % f.characteristic()), (d - b'0') as u32 % f.characteristic());
                }
                coef = f.mul(coef, v);
            } else if bytes[pos].is_ascii_alphabetic() || bytes[pos] == b'_' {
                let start = pos;
                while pos < bytes.len() && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_') {
                    pos += 1;
                }
                let name = &src[start..pos];
                let idx = names
                    .iter()
                    .position(|n| n == name)
                    .ok_or_else(|| err(start, &format!("unknown variable '{name}'")))?;
                skip_ws(&mut pos);
                let mut e = 1u32;
                if pos < bytes.len() && bytes[pos] == b'^' {
                    pos += 1;
                    skip_ws(&mut pos);
                    let s = pos;
                    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    if s == pos {
                        return Err(err(pos, "expected exponent"));
                    }
                    e = src[s..pos].parse().map_err(|_| err(s, "exponent out of range"))?;
                }
                let mut ex = mono.exponents(MAX_VARS);
                ex[idx] += e;
                if ex[idx] > 255 {
                    return Err(err(start, "exponent out of range"));
                }
                mono = Monomial::from_exponents(&ex);
            } else {
                return Err(err(pos, &format!("unexpected character '{}'", bytes[pos] as char)));
            }
            seen_factor = true;
            skip_ws(&mut pos);
            if pos < bytes.len() && bytes[pos] == b'*' {
                pos += 1;
            } else {
                expect_factor = false;
            }
        }
        debug_assert!(seen_factor);
        terms.push((mono, coef));
    }
    Ok(Poly::from_terms(ring, terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("x{i}")).collect()
    }

    #[test]
    fn parse_and_print() {
        let r = Ring::standard(4);
        let p = parse_poly(r, &names(4), "3*x0^2*x1 - x2*x3").unwrap();
        assert_eq!(p.to_string(), "3*x0^2*x1 - x2*x3");
        let q = parse_poly(r, &names(4), "x0*x2 + x2*x0 - 2*x0*x2").unwrap();
        assert!(q.is_zero());
    }

    #[test]
    fn parse_errors_have_columns() {
        let r = Ring::standard(2);
        match parse_poly(r, &names(2), "x0 + y") {
            Err(Error::Parse { col, .. }) => assert_eq!(col, 6),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_poly(r, &names(2), "x0 x1").is_err());
    }

    #[test]
    fn coefficients_reduce_mod_p() {
        let r = Ring::standard(1);
        let p = parse_poly(r, &names(1), "32004*x0").unwrap();
        assert_eq!(p.terms()[0].1, 1);
    }

    #[test]
    fn ring_mismatch_is_an_error() {
        let a = Poly::var(Ring::standard(2), 0);
        let b = Poly::var(Ring::standard(3), 0);
        assert!(matches!(a.add(&b), Err(Error::RingMismatch(_))));
    }

    #[test]
    fn substitution() {
        let r = Ring::standard(3);
        let r2 = r.drop_var().unwrap();
        let p = parse_poly(r, &names(3), "x0*x2 + x2^2").unwrap();
        let sub = parse_poly(r2, &names(2), "x0 + x1").unwrap();
        let q = p.substitute_var(2, &sub, r2);
        let expect = parse_poly(r2, &names(2), "2*x0^2 + 3*x0*x1 + x1^2").unwrap();
        assert_eq!(q, expect);
    }
}
