//! Monomials in at most [`MAX_VARS`] variables with graded reverse lexicographic order.

use std::cmp::Ordering;
use std::fmt;

pub const MAX_VARS: usize = 8;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: [u8; MAX_VARS],
    deg: u16,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { exps: [0; MAX_VARS], deg: 0 };

    pub fn var(i: usize) -> Self {
        let mut m = Self::ONE;
        m.exps[i] = 1;
        m.deg = 1;
        m
    }

    pub fn from_exponents(e: &[u32]) -> Self {
        assert!(e.len() <= MAX_VARS);
        let mut m = Self::ONE;
        for (i, &a) in e.iter().enumerate() {
            assert!(a < 256, "exponent too large");
            m.exps[i] = a as u8;
            m.deg += a as u16;
        }
        m
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.deg as u32
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    pub fn exponents(&self, nvars: usize) -> Vec<u32> {
        self.exps[..nvars].iter().map(|&e| e as u32).collect()
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    #[inline]
    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut exps = [0u8; MAX_VARS];
        for i in 0..MAX_VARS {
            exps[i] = self.exps[i] + o.exps[i];
        }
        Monomial { exps, deg: self.deg + o.deg }
    }

    #[inline]
    pub fn divides(&self, o: &Monomial) -> bool {
        if self.deg > o.deg {
            return false;
        }
        (0..MAX_VARS).all(|i| self.exps[i] <= o.exps[i])
    }

    /// `o / self`, assuming `self` divides `o`.
    #[inline]
    pub fn quotient_of(&self, o: &Monomial) -> Monomial {
        let mut exps = [0u8; MAX_VARS];
        for i in 0..MAX_VARS {
            exps[i] = o.exps[i] - self.exps[i];
        }
        Monomial { exps, deg: o.deg - self.deg }
    }

    pub fn lcm(&self, o: &Monomial) -> Monomial {
        let mut exps = [0u8; MAX_VARS];
        let mut deg = 0;
        for i in 0..MAX_VARS {
            exps[i] = self.exps[i].max(o.exps[i]);
            deg += exps[i] as u16;
        }
        Monomial { exps, deg }
    }

    pub fn gcd_is_one(&self, o: &Monomial) -> bool {
        (0..MAX_VARS).all(|i| self.exps[i] == 0 || o.exps[i] == 0)
    }

    /// Graded reverse lexicographic comparison.
    #[inline]
    pub fn grevlex(&self, o: &Monomial) -> Ordering {
        match self.deg.cmp(&o.deg) {
            Ordering::Equal => {}
            c => return c,
        }
        for i in (0..MAX_VARS).rev() {
            if self.exps[i] != o.exps[i] {
                return o.exps[i].cmp(&self.exps[i]);
            }
        }
        Ordering::Equal
    }

    /// Drop variable `v` after substituting it away; exponents of later variables shift down.
    pub fn remove_var(&self, v: usize) -> (Monomial, u32) {
        let mut m = Self::ONE;
        let mut j = 0;
        for i in 0..MAX_VARS {
            if i == v {
                continue;
            }
            m.exps[j] = self.exps[i];
            m.deg += self.exps[i] as u16;
            j += 1;
        }
        (m, self.exps[v] as u32)
    }

    pub fn fmt_with(&self, names: &[String]) -> String {
        if self.deg == 0 {
            return "1".into();
        }
        let mut parts = Vec::new();
        for (i, name) in names.iter().enumerate() {
            match self.exps[i] {
                0 => {}
                1 => parts.push(name.clone()),
                e => parts.push(format!("{name}^{e}")),
            }
        }
        parts.join("*")
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..MAX_VARS).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.fmt_with(&names))
    }
}

/// All monomials of degree `d` in `nvars` variables, in decreasing grevlex order.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        let n = cur.len();
        if i + 1 == n {
            cur[i] = left;
            out.push(Monomial::from_exponents(cur));
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    if nvars == 0 {
        if d == 0 {
            out.push(Monomial::ONE);
        }
        return out;
    }
    rec(0, d, &mut cur, &mut out);
    out.sort_by(|a, b| b.grevlex(a));
    out
}

pub fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: i64 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Number of monomials of degree `d` in `nvars` variables.
pub fn count_monomials(nvars: usize, d: i64) -> i64 {
    if d < 0 {
        return 0;
    }
    if nvars == 0 {
        return (d == 0) as i64;
    }
    binomial(d + nvars as i64 - 1, nvars as i64 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grevlex_basics() {
        let x0 = Monomial::var(0);
        let x1 = Monomial::var(1);
        let x2 = Monomial::var(2);
        assert_eq!(x0.grevlex(&x1), Ordering::Greater);
        // x1^2 > x0*x2 in grevlex
        assert_eq!(x1.mul(&x1).grevlex(&x0.mul(&x2)), Ordering::Greater);
        assert_eq!(x0.mul(&x0).grevlex(&x1), Ordering::Greater);
    }

    #[test]
    fn counts_match_enumeration() {
        for n in 1..5 {
            for d in 0..5 {
                assert_eq!(monomials_of_degree(n, d).len() as i64, count_monomials(n, d as i64));
            }
        }
    }
}
