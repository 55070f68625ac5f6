//! Brute-force reference computations on monomial bases of graded pieces.
//!
//! Nothing here touches the Groebner engine: every number comes from Gaussian elimination
//! on explicit spanning sets, one degree at a time.

use std::collections::{BTreeMap, HashMap};

use buchsbaum_core::{GradedMap, Poly};

pub struct Oracle {
    pub nvars: usize,
    pub p: u64,
}

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    (a + b) % p
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Row echelon form; returns the reduced rows and their pivot columns.
pub fn echelon(mut rows: Vec<Vec<u64>>, p: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut out: Vec<Vec<u64>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for c in 0..ncols {
        let Some(k) = rows.iter().position(|r| r[c] != 0) else { continue };
        let mut row = rows.swap_remove(k);
        let inv = inv_mod(row[c], p);
        for x in row.iter_mut() {
            *x = *x * inv % p;
        }
        for r in rows.iter_mut() {
            let a = r[c];
            if a != 0 {
                for j in c..ncols {
                    r[j] = (r[j] + (p - a) * row[j]) % p;
                }
            }
        }
        for r in out.iter_mut() {
            let a = r[c];
            if a != 0 {
                for j in c..ncols {
                    r[j] = (r[j] + (p - a) * row[j]) % p;
                }
            }
        }
        out.push(row);
        pivots.push(c);
    }
    (out, pivots)
}

pub fn rank(rows: Vec<Vec<u64>>, p: u64) -> usize {
    echelon(rows, p).1.len()
}

impl Oracle {
    pub fn new(nvars: usize, p: u32) -> Self {
        Oracle { nvars, p: p as u64 }
    }

    /// Exponent vectors of degree `d`.
    pub fn monomials(&self, d: i32) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        if d < 0 {
            return out;
        }
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if i + 1 == cur.len() {
                cur[i] = left;
                out.push(cur.clone());
                return;
            }
            for e in 0..=left {
                cur[i] = e;
                rec(i + 1, left - e, cur, out);
            }
        }
        let mut cur = vec![0u32; self.nvars];
        rec(0, d as u32, &mut cur, &mut out);
        out
    }

    fn index(&self, d: i32) -> HashMap<Vec<u32>, usize> {
        self.monomials(d).into_iter().enumerate().map(|(i, m)| (m, i)).collect()
    }

    /// Dense coefficient row of `mono * f` in degree `d`.
    fn times(&self, f: &Poly, mono: &[u32], idx: &HashMap<Vec<u32>, usize>) -> Vec<u64> {
        let mut row = vec![0u64; idx.len()];
        for (m, c) in f.terms() {
            let e: Vec<u32> = (0..self.nvars).map(|i| m.exp(i) + mono[i]).collect();
            let k = idx[&e];
            row[k] = add_mod(row[k], *c as u64, self.p);
        }
        row
    }

    /// Spanning rows of `[I]_d`.
    pub fn ideal_rows(&self, gens: &[Poly], d: i32) -> Vec<Vec<u64>> {
        let idx = self.index(d);
        let mut rows = Vec::new();
        for g in gens {
            let gd = g.degree().unwrap() as i32;
            for m in self.monomials(d - gd) {
                rows.push(self.times(g, &m, &idx));
            }
        }
        rows
    }

    pub fn ideal_dim(&self, gens: &[Poly], d: i32) -> usize {
        let rows = self.ideal_rows(gens, d);
        if rows.is_empty() {
            return 0;
        }
        rank(rows, self.p)
    }

    /// `dim [R/I]_d`.
    pub fn quotient_dim(&self, gens: &[Poly], d: i32) -> usize {
        self.monomials(d).len() - self.ideal_dim(gens, d)
    }

    /// Reduction data for `[R/I]_d`: echelon rows of `[I]_d`, pivots, and standard monomial positions.
    fn quotient_basis(&self, gens: &[Poly], d: i32) -> (Vec<Vec<u64>>, Vec<usize>, Vec<usize>) {
        let n = self.monomials(d).len();
        let rows = self.ideal_rows(gens, d);
        let (ech, piv) = if rows.is_empty() { (Vec::new(), Vec::new()) } else { echelon(rows, self.p) };
        let std: Vec<usize> = (0..n).filter(|c| !piv.contains(c)).collect();
        (ech, piv, std)
    }

    fn reduce(&self, mut v: Vec<u64>, ech: &[Vec<u64>], piv: &[usize]) -> Vec<u64> {
        for (r, &c) in ech.iter().zip(piv) {
            let a = v[c];
            if a != 0 {
                for j in 0..v.len() {
                    v[j] = (v[j] + (self.p - a) * r[j]) % self.p;
                }
            }
        }
        v
    }

    /// `β_{i,j}(R/I)` for `j <= max_deg`, from Koszul homology of `R/I`.
    pub fn betti_quotient(&self, gens: &[Poly], max_deg: i32) -> BTreeMap<(usize, i32), usize> {
        let nv = self.nvars;
        let subsets: Vec<Vec<Vec<usize>>> = (0..=nv).map(|i| subsets(nv, i)).collect();
        let mut cache: HashMap<i32, (Vec<Vec<u64>>, Vec<usize>, Vec<usize>)> = HashMap::new();
        let mut out = BTreeMap::new();
        for j in 0..=max_deg {
            // Ranks of d_i: C_i -> C_{i-1} in internal degree j.
            let mut ranks = vec![0usize; nv + 2];
            let mut dims = vec![0usize; nv + 1];
            for i in 0..=nv {
                let d = j - i as i32;
                if d < 0 {
                    continue;
                }
                let qb = cache.entry(d).or_insert_with(|| self.quotient_basis(gens, d)).clone();
                dims[i] = subsets[i].len() * qb.2.len();
                if i == 0 || dims[i] == 0 {
                    continue;
                }
                let tgt = cache.entry(d + 1).or_insert_with(|| self.quotient_basis(gens, d + 1)).clone();
                let src_monos = self.monomials(d);
                let tgt_idx = self.index(d + 1);
                let tgt_pos: HashMap<(usize, usize), usize> = {
                    let mut h = HashMap::new();
                    let mut k = 0;
                    for s in 0..subsets[i - 1].len() {
                        for &c in &tgt.2 {
                            h.insert((s, c), k);
                            k += 1;
                        }
                    }
                    h
                };
                let width = subsets[i - 1].len() * tgt.2.len();
                let sub_index: HashMap<Vec<usize>, usize> =
                    subsets[i - 1].iter().enumerate().map(|(k, s)| (s.clone(), k)).collect();
                let mut rows = Vec::new();
                for s in &subsets[i] {
                    for &c in &qb.2 {
                        let mono = &src_monos[c];
                        let mut row = vec![0u64; width];
                        for (pos, &v) in s.iter().enumerate() {
                            let mut t = s.clone();
                            t.remove(pos);
                            let sidx = sub_index[&t];
                            let mut e = mono.clone();
                            e[v] += 1;
                            let mut dense = vec![0u64; tgt_idx.len()];
                            dense[tgt_idx[&e]] = if pos % 2 == 0 { 1 } else { self.p - 1 };
                            let red = self.reduce(dense, &tgt.0, &tgt.1);
                            for &cc in &tgt.2 {
                                if red[cc] != 0 {
                                    let k = tgt_pos[&(sidx, cc)];
                                    row[k] = add_mod(row[k], red[cc], self.p);
                                }
                            }
                        }
                        rows.push(row);
                    }
                }
                ranks[i] = if rows.is_empty() || width == 0 { 0 } else { rank(rows, self.p) };
            }
            for i in 0..=nv {
                let b = dims[i] - ranks[i] - ranks[i + 1];
                if b > 0 {
                    out.insert((i, j), b);
                }
            }
        }
        out
    }

    /// `dim [(I : m^k) / I]_t` for a fixed `k` (equals the saturation once `k` is large).
    pub fn colon_power_excess(&self, gens: &[Poly], t: i32, k: i32) -> usize {
        let n = self.monomials(t).len();
        let monos_k = self.monomials(k);
        let big = self.quotient_basis(gens, t + k);
        let big_idx = self.index(t + k);
        let src = self.monomials(t);
        // Linear map R_t -> ⊕_{|α|=k} [R/I]_{t+k}, f ↦ (x^α f); kernel = [I : m^k]_t.
        let width = monos_k.len() * big.2.len();
        let mut cols_as_rows = Vec::new();
        for m in &src {
            let mut row = vec![0u64; width];
            for (a, alpha) in monos_k.iter().enumerate() {
                let e: Vec<u32> = m.iter().zip(alpha).map(|(x, y)| x + y).collect();
                let mut dense = vec![0u64; big_idx.len()];
                dense[big_idx[&e]] = 1;
                let red = self.reduce(dense, &big.0, &big.1);
                for (s, &c) in big.2.iter().enumerate() {
                    row[a * big.2.len() + s] = red[c];
                }
            }
            cols_as_rows.push(row);
        }
        let r = if width == 0 { 0 } else { rank(cols_as_rows, self.p) };
        let colon_dim = n - r;
        colon_dim - self.ideal_dim(gens, t)
    }

    /// Dense matrix of a graded map in degree `d` (rows: target monomial basis, columns: source).
    pub fn map_in_degree(&self, map: &GradedMap, d: i32) -> Vec<Vec<u64>> {
        let tgt_blocks: Vec<(usize, HashMap<Vec<u32>, usize>)> = {
            let mut off = 0;
            map.target
                .degrees
                .iter()
                .map(|&e| {
                    let idx = self.index(d - e);
                    let o = off;
                    off += idx.len();
                    (o, idx)
                })
                .collect()
        };
        let nrows: usize = tgt_blocks.iter().map(|b| b.1.len()).sum();
        let mut cols = Vec::new();
        for (j, &sd) in map.source.degrees.iter().enumerate() {
            for mono in self.monomials(d - sd) {
                let mut col = vec![0u64; nrows];
                for (i, (off, idx)) in tgt_blocks.iter().enumerate() {
                    let e = map.entry(i, j);
                    for (m, c) in e.terms() {
                        let ex: Vec<u32> = (0..self.nvars).map(|v| m.exp(v) + mono[v]).collect();
                        let k = off + idx[&ex];
                        col[k] = add_mod(col[k], *c as u64, self.p);
                    }
                }
                cols.push(col);
            }
        }
        cols
    }

    pub fn free_dim(&self, degrees: &[i32], d: i32) -> usize {
        degrees.iter().map(|&e| self.monomials(d - e).len()).sum()
    }

    /// Rank of a graded map in degree `d`.
    pub fn map_rank(&self, map: &GradedMap, d: i32) -> usize {
        let cols = self.map_in_degree(map, d);
        if cols.is_empty() || cols[0].is_empty() {
            return 0;
        }
        rank(cols, self.p)
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}
