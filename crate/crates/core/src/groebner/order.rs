use std::cmp::Ordering;

use crate::free::{FreeModule, Term};
use crate::monomial::Monomial;

/// Term order on a graded free module.
///
/// Terms `m e_i` are compared by block (lower block first), then total degree `deg m + d_i`,
/// then grevlex of `m * T_i`, then `rank_i`. With trivial shifts this is a degree-compatible
/// term-over-position order; with shifts taken from lead terms of a previous level it is the
/// induced (Schreyer) order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleOrder {
    pub(crate) degs: Vec<i32>,
    pub(crate) shifts: Vec<Monomial>,
    pub(crate) rank: Vec<u32>,
    pub(crate) block: Vec<u8>,
    trivial_shifts: bool,
    single_block: bool,
}

impl ModuleOrder {
    pub fn standard(f: &FreeModule) -> Self {
        let r = f.rank();
        ModuleOrder {
            degs: f.degrees.clone(),
            shifts: vec![Monomial::ONE; r],
            rank: (0..r as u32).collect(),
            block: vec![0; r],
            trivial_shifts: true,
            single_block: true,
        }
    }

    /// Induced order on a module with basis mapping to `leads[i] = (m_i, c_i)` in a module ordered by `prev`.
    pub fn induced(prev: &ModuleOrder, leads: &[(Monomial, usize)], degs: Vec<i32>) -> Self {
        let shifts: Vec<Monomial> = leads.iter().map(|(m, c)| m.mul(&prev.shifts[*c])).collect();
        let mut idx: Vec<usize> = (0..leads.len()).collect();
        idx.sort_by_key(|&i| (prev.rank[leads[i].1], i));
        let mut rank = vec![0u32; leads.len()];
        for (pos, &i) in idx.iter().enumerate() {
            rank[i] = pos as u32;
        }
        let trivial = shifts.iter().all(|s| s.is_one());
        ModuleOrder {
            degs,
            shifts,
            rank,
            block: vec![0; leads.len()],
            trivial_shifts: trivial,
            single_block: true,
        }
    }

    /// Block order on `a ⊕ b` where every term of `a` exceeds every term of `b`.
    pub fn block_sum(a: &ModuleOrder, b: &ModuleOrder) -> Self {
        let mut o = a.clone();
        o.degs.extend_from_slice(&b.degs);
        o.shifts.extend_from_slice(&b.shifts);
        let off = a.rank.len() as u32;
        o.rank.extend(b.rank.iter().map(|r| r + off));
        let top = a.block.iter().copied().max().unwrap_or(0) + 1;
        o.block.extend(b.block.iter().map(|x| x + top));
        o.trivial_shifts = a.trivial_shifts && b.trivial_shifts;
        o.single_block = false;
        o
    }

    pub fn rank(&self) -> usize {
        self.degs.len()
    }

    #[inline]
    pub fn cmp_parts(&self, am: &Monomial, ac: usize, bm: &Monomial, bc: usize) -> Ordering {
        if !self.single_block && self.block[ac] != self.block[bc] {
            return self.block[bc].cmp(&self.block[ac]);
        }
        let da = am.degree() as i32 + self.degs[ac];
        let db = bm.degree() as i32 + self.degs[bc];
        if da != db {
            return da.cmp(&db);
        }
        let g = if self.trivial_shifts {
            am.grevlex(bm)
        } else {
            am.mul(&self.shifts[ac]).grevlex(&bm.mul(&self.shifts[bc]))
        };
        if g != Ordering::Equal {
            return g;
        }
        self.rank[ac].cmp(&self.rank[bc])
    }

    #[inline]
    pub fn cmp(&self, a: &Term, b: &Term) -> Ordering {
        self.cmp_parts(&a.mon, a.comp as usize, &b.mon, b.comp as usize)
    }

    /// Sort terms in decreasing order.
    pub fn sort_desc(&self, terms: &mut [Term]) {
        terms.sort_by(|a, b| self.cmp(b, a));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_order_puts_first_block_on_top() {
        let a = ModuleOrder::standard(&FreeModule::new(vec![0]));
        let b = ModuleOrder::standard(&FreeModule::new(vec![5]));
        let o = ModuleOrder::block_sum(&a, &b);
        let big = Monomial::from_exponents(&[3, 0, 0]);
        assert_eq!(o.cmp_parts(&Monomial::ONE, 0, &big, 1), Ordering::Greater);
    }

    #[test]
    fn induced_order_matches_lead_terms() {
        let prev = ModuleOrder::standard(&FreeModule::new(vec![0]));
        let x0 = Monomial::var(0);
        let x1 = Monomial::var(1);
        let o = ModuleOrder::induced(&prev, &[(x0, 0), (x1, 0)], vec![1, 1]);
        // x1 * e0 -> x0*x1, x0 * e1 -> x0*x1: equal images, tie broken by index.
        assert_eq!(o.cmp_parts(&x1, 0, &x0, 1), Ordering::Less);
        // x0 * e0 -> x0^2 > x1 * e1 -> x1^2
        assert_eq!(o.cmp_parts(&x0, 0, &x1, 1), Ordering::Greater);
    }
}
