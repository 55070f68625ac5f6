//! Hilbert series of quotients by monomial submodules.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::monomial::{binomial, Monomial, MAX_VARS};

/// `Σ a_k t^k / (1 - t)^nvars` with a Laurent numerator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertSeries {
    pub nvars: usize,
    /// Nonzero numerator coefficients keyed by exponent.
    pub numerator: BTreeMap<i32, i64>,
}

impl HilbertSeries {
    pub fn zero(nvars: usize) -> Self {
        HilbertSeries { nvars, numerator: BTreeMap::new() }
    }

    pub fn from_coeffs(nvars: usize, shift: i32, coeffs: &[i64]) -> Self {
        let mut s = Self::zero(nvars);
        for (k, &c) in coeffs.iter().enumerate() {
            s.add_term(shift + k as i32, c);
        }
        s
    }

    fn add_term(&mut self, k: i32, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.numerator.entry(k).or_insert(0);
        *e += c;
        if *e == 0 {
            self.numerator.remove(&k);
        }
    }

    pub fn add(&self, o: &HilbertSeries) -> HilbertSeries {
        assert_eq!(self.nvars, o.nvars);
        let mut s = self.clone();
        for (&k, &c) in &o.numerator {
            s.add_term(k, c);
        }
        s
    }

    pub fn sub(&self, o: &HilbertSeries) -> HilbertSeries {
        assert_eq!(self.nvars, o.nvars);
        let mut s = self.clone();
        for (&k, &c) in &o.numerator {
            s.add_term(k, -c);
        }
        s
    }

    /// Multiply by `t^a`.
    pub fn shift(&self, a: i32) -> HilbertSeries {
        HilbertSeries {
            nvars: self.nvars,
            numerator: self.numerator.iter().map(|(&k, &c)| (k + a, c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_empty()
    }

    /// Hilbert function value in degree `t`.
    pub fn value(&self, t: i32) -> i64 {
        let n = self.nvars as i64;
        self.numerator
            .iter()
            .filter(|(&k, _)| k <= t)
            .map(|(&k, &c)| {
                let j = (t - k) as i64;
                if n == 0 {
                    if j == 0 {
                        c
                    } else {
                        0
                    }
                } else {
                    c * binomial(j + n - 1, n - 1)
                }
            })
            .sum()
    }

    /// `(h, d)` with series `h(t) / (1-t)^d` and `h(1) != 0`; `None` for the zero series.
    pub fn reduced(&self) -> Option<(BTreeMap<i32, i64>, usize)> {
        if self.is_zero() {
            return None;
        }
        let mut num = self.numerator.clone();
        let mut d = self.nvars;
        while d > 0 && num.values().sum::<i64>() == 0 {
            // Divide by (1 - t): coefficients of the quotient are partial sums.
            let mut q = BTreeMap::new();
            let mut acc = 0i64;
            let lo = *num.keys().next().unwrap();
            let hi = *num.keys().last().unwrap();
            for k in lo..hi {
                acc += num.get(&k).copied().unwrap_or(0);
                if acc != 0 {
                    q.insert(k, acc);
                }
            }
            num = q;
            d -= 1;
        }
        Some((num, d))
    }

    /// Krull dimension of the module; `None` for the zero module.
    pub fn dimension(&self) -> Option<usize> {
        self.reduced().map(|(_, d)| d)
    }

    /// Multiplicity (degree): `h(1)` of the reduced numerator.
    pub fn multiplicity(&self) -> i64 {
        self.reduced().map(|(h, _)| h.values().sum()).unwrap_or(0)
    }

    /// True if the series is a Laurent polynomial (finite length module).
    pub fn is_finite_length(&self) -> bool {
        matches!(self.dimension(), None | Some(0))
    }

    /// Range of degrees where a finite length module is nonzero.
    pub fn finite_support(&self) -> Option<(i32, i32)> {
        let (h, d) = self.reduced()?;
        if d != 0 {
            return None;
        }
        Some((*h.keys().next().unwrap(), *h.keys().last().unwrap()))
    }
}

/// Numerator `N(t)` of `HS(S / I) = N(t) / (1-t)^n` for a monomial ideal `I` (coefficients from t^0).
pub fn monomial_ideal_numerator(gens: &[Monomial]) -> Vec<i64> {
    let mut g = minimize(gens.to_vec());
    numerator_rec(&mut g)
}

fn minimize(mut g: Vec<Monomial>) -> Vec<Monomial> {
    g.sort_by_key(|m| m.degree());
    g.dedup();
    let mut out: Vec<Monomial> = Vec::with_capacity(g.len());
    for m in g {
        if !out.iter().any(|o| o.divides(&m)) {
            out.push(m);
        }
    }
    out
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    r
}

fn poly_add_shifted(a: &mut Vec<i64>, b: &[i64], shift: usize, sign: i64) {
    if a.len() < b.len() + shift {
        a.resize(b.len() + shift, 0);
    }
    for (j, &y) in b.iter().enumerate() {
        a[j + shift] += sign * y;
    }
}

fn numerator_rec(gens: &mut Vec<Monomial>) -> Vec<i64> {
    if gens.is_empty() {
        return vec![1];
    }
    if gens.iter().any(|m| m.is_one()) {
        return vec![0];
    }
    // Pairwise coprime generators: product of (1 - t^deg).
    let pairwise_coprime = gens.iter().enumerate().all(|(i, a)| gens[i + 1..].iter().all(|b| a.gcd_is_one(b)));
    if pairwise_coprime {
        let mut r = vec![1i64];
        for m in gens.iter() {
            let mut f = vec![0i64; m.degree() as usize + 1];
            f[0] = 1;
            f[m.degree() as usize] -= 1;
            r = poly_mul(&r, &f);
        }
        return r;
    }
    // Pivot on the variable occurring in the most non-linear-power generators.
    let mut counts = [0usize; MAX_VARS];
    for m in gens.iter() {
        if m.degree() > 1 {
            for (v, c) in counts.iter_mut().enumerate() {
                if m.exp(v) > 0 {
                    *c += 1;
                }
            }
        }
    }
    let v = (0..MAX_VARS).max_by_key(|&v| (counts[v], std::cmp::Reverse(v))).unwrap();
    let pivot = Monomial::var(v);
    // N(I) = N(I + (x)) + t * N(I : x)
    let mut plus: Vec<Monomial> = gens.iter().filter(|m| m.exp(v) == 0).copied().collect();
    plus.push(pivot);
    let mut plus = minimize(plus);
    let mut colon: Vec<Monomial> = gens
        .iter()
        .map(|m| if m.exp(v) > 0 { pivot.quotient_of(m) } else { *m })
        .collect();
    colon = minimize(colon);
    let a = numerator_rec(&mut plus);
    let b = numerator_rec(&mut colon);
    let mut r = a;
    poly_add_shifted(&mut r, &b, 1, 1);
    while r.len() > 1 && *r.last().unwrap() == 0 {
        r.pop();
    }
    r
}
