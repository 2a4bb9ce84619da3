//! Graded multi-index tables over the 2d phase-space variables (q₁..q_d, p₁..p_d).

use std::sync::OnceLock;

/// Largest number of phase-space variables (d ≤ 3).
pub const MAX_VARS: usize = 6;
/// Largest Taylor order carried by jets.
pub const MAX_ORDER: usize = 6;

pub type Exps = [u8; MAX_VARS];

/// Multi-indices of total degree ≤ [`MAX_ORDER`], listed degree by degree so that
/// the indices of order ≤ K form a prefix.
pub struct MultiIndexTable {
    nv: usize,
    exps: Vec<Exps>,
    offsets: Vec<usize>,
    code: Vec<u32>,
    pairs: Vec<Vec<(u32, u32)>>,
    fact: Vec<f64>,
}

const RADIX: usize = MAX_ORDER + 1;
const NONE: u32 = u32::MAX;

fn encode(e: &Exps, nv: usize) -> usize {
    let mut k = 0;
    for i in (0..nv).rev() {
        k = k * RADIX + e[i] as usize;
    }
    k
}

fn push_degree(nv: usize, g: usize, var: usize, cur: &mut Exps, out: &mut Vec<Exps>) {
    if var + 1 == nv {
        cur[var] = g as u8;
        out.push(*cur);
        cur[var] = 0;
        return;
    }
    for k in (0..=g).rev() {
        cur[var] = k as u8;
        push_degree(nv, g - k, var + 1, cur, out);
    }
    cur[var] = 0;
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|x| x as f64).product()
}

impl MultiIndexTable {
    fn build(nv: usize) -> Self {
        let mut exps = Vec::new();
        let mut offsets = vec![0];
        for g in 0..=MAX_ORDER {
            let mut cur = [0u8; MAX_VARS];
            push_degree(nv, g, 0, &mut cur, &mut exps);
            offsets.push(exps.len());
        }
        let mut code = vec![NONE; RADIX.pow(nv as u32)];
        for (i, e) in exps.iter().enumerate() {
            code[encode(e, nv)] = i as u32;
        }
        let fact = exps
            .iter()
            .map(|e| e[..nv].iter().map(|&k| factorial(k as usize)).product())
            .collect();
        let mut pairs = Vec::with_capacity(exps.len());
        for e in &exps {
            let mut list = Vec::new();
            let mut sub = [0u8; MAX_VARS];
            loop {
                let mut rest = [0u8; MAX_VARS];
                for v in 0..nv {
                    rest[v] = e[v] - sub[v];
                }
                list.push((code[encode(&sub, nv)], code[encode(&rest, nv)]));
                // odometer increment of `sub` within the box 0..=e
                let mut v = 0;
                while v < nv {
                    if sub[v] < e[v] {
                        sub[v] += 1;
                        break;
                    }
                    sub[v] = 0;
                    v += 1;
                }
                if v == nv {
                    break;
                }
            }
            pairs.push(list);
        }
        Self {
            nv,
            exps,
            offsets,
            code,
            pairs,
            fact,
        }
    }

    pub fn nv(&self) -> usize {
        self.nv
    }

    /// Number of multi-indices with degree ≤ `order`.
    pub fn len(&self, order: usize) -> usize {
        self.offsets[order + 1]
    }

    /// Index range of the multi-indices of exact degree `g`.
    pub fn degree_range(&self, g: usize) -> std::ops::Range<usize> {
        self.offsets[g]..self.offsets[g + 1]
    }

    pub fn exps(&self, i: usize) -> &Exps {
        &self.exps[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.exps[i][..self.nv].iter().map(|&k| k as usize).sum()
    }

    /// γ! for the multi-index at position `i`.
    pub fn factorial(&self, i: usize) -> f64 {
        self.fact[i]
    }

    pub fn index_of(&self, e: &Exps) -> Option<usize> {
        let deg: usize = e[..self.nv].iter().map(|&k| k as usize).sum();
        if deg > MAX_ORDER {
            return None;
        }
        let k = self.code[encode(e, self.nv)];
        (k != NONE).then_some(k as usize)
    }

    /// All splittings γ = γ₁ + γ₂ as index pairs.
    pub fn pairs(&self, i: usize) -> &[(u32, u32)] {
        &self.pairs[i]
    }

    /// Index of γ + μ when that stays within the table.
    pub fn shifted(&self, i: usize, mu: &Exps) -> Option<usize> {
        let mut e = self.exps[i];
        for v in 0..self.nv {
            let s = e[v] as usize + mu[v] as usize;
            if s > MAX_ORDER {
                return None;
            }
            e[v] = s as u8;
        }
        self.index_of(&e)
    }
}

/// Shared table for `nv` variables (1 ≤ nv ≤ [`MAX_VARS`]).
pub fn table(nv: usize) -> &'static MultiIndexTable {
    static TABLES: [OnceLock<MultiIndexTable>; MAX_VARS + 1] = [
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
    ];
    assert!((1..=MAX_VARS).contains(&nv), "unsupported variable count {nv}");
    TABLES[nv].get_or_init(|| MultiIndexTable::build(nv))
}

/// Multi-indices (α, β) over d variables with |α| + |β| = m, listed as the
/// exponent vectors of ∂_q^α ∂_p^β and of the swapped ∂_p^α ∂_q^β, together
/// with the weight (−1)^{|α|}/(α!β!).
pub fn moyal_splits(d: usize, m: usize) -> Vec<(Exps, Exps, f64)> {
    let nv = 2 * d;
    let t = table(nv);
    let mut out = Vec::new();
    if m > MAX_ORDER {
        return out;
    }
    for i in t.degree_range(m) {
        let e = t.exps(i);
        let mut swapped = [0u8; MAX_VARS];
        let mut abs_alpha = 0usize;
        for j in 0..d {
            swapped[j] = e[d + j];
            swapped[d + j] = e[j];
            abs_alpha += e[j] as usize;
        }
        let sign = if abs_alpha % 2 == 0 { 1.0 } else { -1.0 };
        out.push((*e, swapped, sign / t.factorial(i)));
    }
    out
}
