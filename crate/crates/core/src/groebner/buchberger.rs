//! Homogeneous Buchberger algorithm for submodules of graded free modules.
//!
//! Pairs are processed by degree (normal strategy) with the Gebauer-Moller criteria. Input
//! generators are interleaved degree by degree, so a generator that survives reduction
//! modulo everything of its degree and below is a minimal generator.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::field::PrimeField;
use crate::free::{Term, Vector};
use crate::groebner::order::ModuleOrder;
use crate::monomial::{Monomial, MAX_VARS};

#[derive(Clone, Debug)]
pub(crate) struct Elem {
    /// Monic, strictly decreasing in the engine order.
    pub terms: Vec<Term>,
    mask: u8,
}

impl Elem {
    #[inline]
    pub fn lead(&self) -> &Term {
        &self.terms[0]
    }
}

fn support_mask(m: &Monomial) -> u8 {
    let mut k = 0u8;
    for i in 0..MAX_VARS {
        if m.exp(i) > 0 {
            k |= 1 << i;
        }
    }
    k
}

/// Lead-term index: per component, the elements whose lead lies there.
#[derive(Clone, Debug, Default)]
pub(crate) struct LeadIndex {
    by_comp: Vec<Vec<usize>>,
}

impl LeadIndex {
    fn new(rank: usize) -> Self {
        LeadIndex { by_comp: vec![Vec::new(); rank] }
    }

    fn insert(&mut self, comp: usize, idx: usize) {
        self.by_comp[comp].push(idx);
    }

    #[inline]
    fn find(&self, elems: &[Elem], t: &Term) -> Option<usize> {
        let mask = support_mask(&t.mon);
        self.by_comp[t.comp as usize].iter().copied().find(|&i| {
            let e = &elems[i];
            e.mask & !mask == 0 && e.lead().mon.divides(&t.mon)
        })
    }
}

/// `f - c * q * g`, merged in decreasing order.
pub(crate) fn sub_mul(
    order: &ModuleOrder,
    field: PrimeField,
    f: &[Term],
    g: &[Term],
    q: &Monomial,
    c: u32,
) -> Vec<Term> {
    let nc = field.neg(c);
    let mut out = Vec::with_capacity(f.len() + g.len());
    let (mut i, mut j) = (0, 0);
    while i < f.len() && j < g.len() {
        let gm = g[j].mon.mul(q);
        match order.cmp_parts(&f[i].mon, f[i].comp as usize, &gm, g[j].comp as usize) {
            Ordering::Greater => {
                out.push(f[i]);
                i += 1;
            }
            Ordering::Less => {
                out.push(Term { mon: gm, comp: g[j].comp, coef: field.mul(nc, g[j].coef) });
                j += 1;
            }
            Ordering::Equal => {
                let v = field.add(f[i].coef, field.mul(nc, g[j].coef));
                if v != 0 {
                    out.push(Term { mon: f[i].mon, comp: f[i].comp, coef: v });
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&f[i..]);
    for t in &g[j..] {
        out.push(Term { mon: t.mon.mul(q), comp: t.comp, coef: field.mul(nc, t.coef) });
    }
    out
}

fn make_monic(field: PrimeField, terms: &mut [Term]) {
    if let Some(l) = terms.first() {
        if l.coef != 1 {
            let inv = field.inv(l.coef);
            for t in terms.iter_mut() {
                t.coef = field.mul(t.coef, inv);
            }
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Engine {
    pub order: ModuleOrder,
    pub field: PrimeField,
    pub elems: Vec<Elem>,
    index: LeadIndex,
    pairs: BTreeMap<i32, Vec<(usize, usize)>>,
    gens: BTreeMap<i32, Vec<(usize, Vec<Term>)>>,
    product_criterion: bool,
    /// Input positions of generators kept as minimal generators, in processing order.
    pub accepted: Vec<usize>,
    next_gen: usize,
}

impl Engine {
    pub fn new(order: ModuleOrder, field: PrimeField) -> Self {
        let rank = order.rank();
        Engine {
            product_criterion: rank == 1,
            index: LeadIndex::new(rank),
            order,
            field,
            elems: Vec::new(),
            pairs: BTreeMap::new(),
            gens: BTreeMap::new(),
            accepted: Vec::new(),
            next_gen: 0,
        }
    }

    /// Engine holding an already known Groebner basis (no pairs are generated).
    pub fn from_basis(order: ModuleOrder, field: PrimeField, bases: Vec<Vec<Term>>) -> Self {
        let mut e = Engine::new(order, field);
        for terms in bases {
            if terms.is_empty() {
                continue;
            }
            let lead = terms[0];
            let h = e.elems.len();
            e.elems.push(Elem { mask: support_mask(&lead.mon), terms });
            e.index.insert(lead.comp as usize, h);
        }
        e
    }

    /// Queue a homogeneous generator; returns its input position.
    pub fn push(&mut self, v: &Vector) -> usize {
        let pos = self.next_gen;
        self.next_gen += 1;
        if v.is_zero() {
            return pos;
        }
        let mut terms = v.terms().to_vec();
        self.order.sort_desc(&mut terms);
        let deg = terms[0].mon.degree() as i32 + self.order.degs[terms[0].comp as usize];
        self.gens.entry(deg).or_default().push((pos, terms));
        pos
    }

    fn lcm_deg(&self, i: usize, j: usize) -> (Monomial, i32) {
        let a = self.elems[i].lead();
        let b = self.elems[j].lead();
        let l = a.mon.lcm(&b.mon);
        let d = l.degree() as i32 + self.order.degs[a.comp as usize];
        (l, d)
    }

    fn spoly(&self, i: usize, j: usize) -> Vec<Term> {
        let (l, _) = self.lcm_deg(i, j);
        let a = &self.elems[i];
        let b = &self.elems[j];
        let qa = a.lead().mon.quotient_of(&l);
        let qb = b.lead().mon.quotient_of(&l);
        let fa: Vec<Term> = a.terms[1..].iter().map(|t| Term { mon: t.mon.mul(&qa), ..*t }).collect();
        sub_mul(&self.order, self.field, &fa, &b.terms[1..], &qb, 1)
    }

    /// Reduce until the lead term is not divisible by any lead term.
    pub fn top_reduce(&self, mut f: Vec<Term>) -> Vec<Term> {
        while let Some(t) = f.first().copied() {
            match self.index.find(&self.elems, &t) {
                Some(k) => {
                    let e = &self.elems[k];
                    let q = e.lead().mon.quotient_of(&t.mon);
                    f = sub_mul(&self.order, self.field, &f[1..], &e.terms[1..], &q, t.coef);
                }
                None => break,
            }
        }
        f
    }

    /// Full normal form.
    pub fn reduce_full(&self, mut f: Vec<Term>) -> Vec<Term> {
        let mut out = Vec::new();
        loop {
            f = self.top_reduce(f);
            if f.is_empty() {
                break;
            }
            // Move the irreducible lead term to the output, continue with the tail.
            out.push(f[0]);
            f.remove(0);
        }
        out
    }

    fn insert(&mut self, mut terms: Vec<Term>) -> usize {
        make_monic(self.field, &mut terms);
        let lead = terms[0];
        let h = self.elems.len();
        self.elems.push(Elem { mask: support_mask(&lead.mon), terms });
        self.update(h);
        self.index.insert(lead.comp as usize, h);
        h
    }

    /// Gebauer-Moller update for the new element `h`.
    fn update(&mut self, h: usize) {
        let hl = *self.elems[h].lead();
        let comp = hl.comp as usize;
        let others: Vec<usize> = self.index.by_comp[comp].clone();
        let mut c: Vec<(usize, Monomial, i32)> = others
            .iter()
            .map(|&g| {
                let (l, d) = self.lcm_deg(h, g);
                (g, l, d)
            })
            .collect();
        let coprime = |s: &Self, g: usize| s.product_criterion && hl.mon.gcd_is_one(&s.elems[g].lead().mon);
        let mut d: Vec<(usize, Monomial, i32)> = Vec::new();
        while let Some((g1, l1, d1)) = c.pop() {
            let keep = coprime(self, g1)
                || (!c.iter().any(|(_, l, _)| l.divides(&l1)) && !d.iter().any(|(_, l, _)| l.divides(&l1)));
            if keep {
                d.push((g1, l1, d1));
            }
        }
        let e: Vec<(usize, i32)> =
            d.into_iter().filter(|(g, _, _)| !coprime(self, *g)).map(|(g, _, deg)| (g, deg)).collect();
        // Prune old pairs made redundant by h.
        let mut pruned = BTreeMap::new();
        for (deg, list) in std::mem::take(&mut self.pairs) {
            let kept: Vec<(usize, usize)> = list
                .into_iter()
                .filter(|&(g1, g2)| {
                    if self.elems[g1].lead().comp as usize != comp {
                        return true;
                    }
                    let (l12, _) = self.lcm_deg(g1, g2);
                    if !hl.mon.divides(&l12) {
                        return true;
                    }
                    let (l1h, _) = self.lcm_deg(g1, h);
                    let (l2h, _) = self.lcm_deg(g2, h);
                    l1h == l12 || l2h == l12
                })
                .collect();
            if !kept.is_empty() {
                pruned.insert(deg, kept);
            }
        }
        self.pairs = pruned;
        for (g, deg) in e {
            self.pairs.entry(deg).or_default().push((g, h));
        }
    }

    fn next_degree(&self) -> Option<i32> {
        let a = self.pairs.keys().next().copied();
        let b = self.gens.keys().next().copied();
        match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        }
    }

    /// Process all pairs and queued generators of degree at most `upto` (everything if `None`).
    pub fn run(&mut self, upto: Option<i32>) {
        while let Some(d) = self.next_degree() {
            if let Some(u) = upto {
                if d > u {
                    break;
                }
            }
            if let Some(mut ps) = self.pairs.remove(&d) {
                ps.sort();
                for (i, j) in ps {
                    let s = self.spoly(i, j);
                    let r = self.top_reduce(s);
                    if !r.is_empty() {
                        self.insert(r);
                    }
                }
            }
            if let Some(gs) = self.gens.remove(&d) {
                for (pos, g) in gs {
                    let r = self.top_reduce(g);
                    if !r.is_empty() {
                        self.insert(r);
                        self.accepted.push(pos);
                    }
                }
            }
        }
    }

    /// Tail-reduce every element so the basis is reduced.
    pub fn interreduce(&mut self) {
        for k in 0..self.elems.len() {
            let terms = self.elems[k].terms.clone();
            let mut tail = terms[1..].to_vec();
            // Reduce the tail with all elements; the lead stays since it is minimal.
            tail = self.reduce_full(tail);
            let mut t = vec![terms[0]];
            t.extend(tail);
            self.elems[k].terms = t;
        }
    }
}

/// Convert order-sorted terms back to a canonical vector.
pub(crate) fn to_vector(field: PrimeField, terms: Vec<Term>) -> Vector {
    Vector::from_terms(field, terms)
}
