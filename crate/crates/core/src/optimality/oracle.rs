//! Branch-and-bound maximum packing of difference sets.
//!
//! Every candidate codeword contains 0 and is reduced to the half mask of its
//! difference set over `1..=⌊L/2⌋` (`x` and `L − x` share a bit); codewords with
//! equal masks are interchangeable, so one representative per mask is kept.
//! The search branches on the smallest uncovered difference: either some
//! candidate whose smallest difference it is gets placed, or the difference is
//! left unused for good.

use std::collections::HashMap;

use super::certificate::{Certificate, Claim, Justification, OracleScope, WeightSpec};
use crate::code::{Code, Codeword, Provenance};
use crate::error::{CacError, Result};

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;

/// Largest length accepted for weights 2 and 3.
pub const MAX_LENGTH_SMALL_WEIGHT: u64 = 400;
/// Largest length accepted for weights of 4 or more.
pub const MAX_LENGTH: u64 = 200;
/// Upper limit on the number of `w`-subsets containing 0 that get enumerated.
pub const MAX_SUBSETS: u64 = 20_000_000;

const WORDS: usize = 4;
type Mask = [u64; WORDS];

fn popcount(m: &Mask) -> u32 {
    m.iter().map(|x| x.count_ones()).sum()
}

fn subset_of(a: &Mask, b: &Mask) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn lowest_bit(m: &Mask) -> Option<usize> {
    m.iter()
        .enumerate()
        .find(|(_, x)| **x != 0)
        .map(|(i, x)| i * 64 + x.trailing_zeros() as usize)
}

fn binom(n: u64, k: u64) -> u64 {
    let mut acc: u128 = 1;
    for i in 0..k.min(n) {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    if k > n {
        0
    } else {
        acc as u64
    }
}

struct Candidate {
    mask: Mask,
    size: u32,
    star: bool,
    elements: Vec<u64>,
}

struct Pool {
    l: u64,
    half: usize,
    cands: Vec<Candidate>,
    index: HashMap<(Mask, bool), usize>,
}

impl Pool {
    fn new(l: u64) -> Self {
        Self {
            l,
            half: (l / 2) as usize,
            cands: Vec::new(),
            index: HashMap::new(),
        }
    }

    fn mask_of(&self, elements: &[u64]) -> Mask {
        let mut m = [0u64; WORDS];
        for (i, &a) in elements.iter().enumerate() {
            for &b in &elements[i + 1..] {
                let d = b.abs_diff(a);
                let h = d.min(self.l - d) as usize - 1;
                m[h / 64] |= 1 << (h % 64);
            }
        }
        m
    }

    fn add(&mut self, elements: Vec<u64>, star: bool) {
        let mask = self.mask_of(&elements);
        if self.index.contains_key(&(mask, star)) {
            return;
        }
        self.index.insert((mask, star), self.cands.len());
        self.cands.push(Candidate {
            size: popcount(&mask),
            mask,
            star,
            elements,
        });
    }

    fn add_all_subsets(&mut self, w: usize, star: bool) {
        fn rec(pool: &mut Pool, w: usize, star: bool, next: u64, cur: &mut Vec<u64>) {
            if cur.len() == w {
                pool.add(cur.clone(), star);
                return;
            }
            let remaining = w - cur.len();
            for x in next..=pool.l - remaining as u64 {
                cur.push(x);
                rec(pool, w, star, x + 1, cur);
                cur.pop();
            }
        }
        rec(self, w, star, 1, &mut vec![0]);
    }

    fn add_equi(&mut self, w: usize, star: bool) {
        for g in 1..self.l {
            if let Ok(cw) = Codeword::equi_difference(self.l, g, w) {
                let elems: Vec<u64> = (0..w as u64).map(|k| k * g % self.l).collect();
                debug_assert_eq!(cw.weight(), w);
                self.add(elems, star);
            }
        }
    }
}

/// Outcome of one oracle run.
struct Outcome {
    best: Vec<usize>,
    nodes: u64,
    exhausted: bool,
}

struct Search<'a> {
    pool: &'a Pool,
    by_min: Vec<Vec<usize>>,
    exc_base: Vec<usize>,
    exc_star: Vec<usize>,
    size_base: u32,
    size_star: u32,
    n_star: usize,
    budget: u64,
    nodes: u64,
    chosen: Vec<usize>,
    stars: usize,
    best: Option<Vec<usize>>,
}

impl<'a> Search<'a> {
    fn new(pool: &'a Pool, w: usize, w_star: usize, n_star: usize, budget: u64) -> Self {
        let mut by_min = vec![Vec::new(); pool.half];
        let (size_base, size_star) = (w as u32 - 1, w_star.max(1) as u32 - 1);
        let mut exc_base = Vec::new();
        let mut exc_star = Vec::new();
        for (i, c) in pool.cands.iter().enumerate() {
            by_min[lowest_bit(&c.mask).expect("weight ≥ 2 codewords have differences")].push(i);
            if c.star && c.size < size_star {
                exc_star.push(i);
            }
            if !c.star && c.size < size_base {
                exc_base.push(i);
            }
        }
        exc_base.sort_by_key(|&i| pool.cands[i].size);
        exc_star.sort_by_key(|&i| pool.cands[i].size);
        Self {
            pool,
            by_min,
            exc_base,
            exc_star,
            size_base,
            size_star,
            n_star,
            budget,
            nodes: 0,
            chosen: Vec::new(),
            stars: 0,
            best: None,
        }
    }

    /// Most codewords that can still be added on `free`, or `None` if the
    /// required high-weight codewords no longer fit.
    fn bound(&self, free: &Mask) -> Option<usize> {
        let mut room = popcount(free);
        let need = self.n_star - self.stars;
        let mut placed = 0;
        for &i in &self.exc_star {
            if placed == need {
                break;
            }
            let c = &self.pool.cands[i];
            if subset_of(&c.mask, free) {
                if c.size > room {
                    return None;
                }
                room -= c.size;
                placed += 1;
            }
        }
        let rest = (need - placed) as u32 * self.size_star;
        if rest > room {
            return None;
        }
        room -= rest;
        let mut extra = 0;
        for &i in &self.exc_base {
            let c = &self.pool.cands[i];
            if subset_of(&c.mask, free) {
                if c.size > room {
                    break;
                }
                room -= c.size;
                extra += 1;
            }
        }
        Some(need + extra + (room / self.size_base) as usize)
    }

    fn dfs(&mut self, free: Mask) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(CacError::BudgetExhausted { budget: self.budget });
        }
        let best_len = self.best.as_ref().map(|b| b.len());
        if self.stars == self.n_star && best_len.is_none_or(|b| self.chosen.len() > b) {
            self.best = Some(self.chosen.clone());
        }
        let Some(bound) = self.bound(&free) else { return Ok(()) };
        if let Some(b) = self.best.as_ref().map(|b| b.len()) {
            if self.chosen.len() + bound <= b {
                return Ok(());
            }
        }
        let Some(e) = lowest_bit(&free) else { return Ok(()) };
        for k in 0..self.by_min[e].len() {
            let i = self.by_min[e][k];
            let c = &self.pool.cands[i];
            if !subset_of(&c.mask, &free) || (c.star && self.stars == self.n_star) {
                continue;
            }
            let star = c.star;
            let mut next = free;
            for (f, m) in next.iter_mut().zip(&c.mask) {
                *f &= !m;
            }
            self.chosen.push(i);
            self.stars += star as usize;
            self.dfs(next)?;
            self.stars -= star as usize;
            self.chosen.pop();
        }
        let mut next = free;
        next[e / 64] &= !(1 << (e % 64));
        self.dfs(next)
    }

    fn run(mut self) -> Outcome {
        let mut free = [0u64; WORDS];
        for h in 0..self.pool.half {
            free[h / 64] |= 1 << (h % 64);
        }
        let exhausted = self.dfs(free).is_err();
        Outcome {
            best: self.best.unwrap_or_default(),
            nodes: self.nodes,
            exhausted,
        }
    }
}

fn check_scale(l: u64, w: usize) -> Result<()> {
    if w < 2 {
        return Err(CacError::invalid("oracle weights must be at least 2"));
    }
    if l < w as u64 {
        return Err(CacError::invalid(format!("L = {l} is smaller than w = {w}")));
    }
    let cap = if w <= 3 { MAX_LENGTH_SMALL_WEIGHT } else { MAX_LENGTH };
    if l > cap {
        return Err(CacError::Precondition(format!(
            "L = {l} exceeds the oracle cap {cap} for weight {w}"
        )));
    }
    Ok(())
}

fn check_subset_count(l: u64, w: usize) -> Result<()> {
    let count = binom(l - 1, w as u64 - 1);
    if count > MAX_SUBSETS {
        return Err(CacError::Precondition(format!(
            "{count} candidate {w}-subsets of Z_{l} exceed the enumeration limit {MAX_SUBSETS}"
        )));
    }
    Ok(())
}

fn certificate(
    pool: &Pool,
    outcome: Outcome,
    weights: WeightSpec,
    scope: OracleScope,
    budget: u64,
) -> Result<Certificate> {
    let words = outcome
        .best
        .iter()
        .map(|&i| Codeword::new(pool.l, pool.cands[i].elements.iter().copied()))
        .collect::<Result<Vec<_>>>()?;
    let prov = Provenance::new("oracle").param("budget", budget).param("nodes", outcome.nodes);
    let witness = Code::new(pool.l, words, prov)?;
    let claim = match (outcome.exhausted, weights) {
        (true, _) => Claim::KLower,
        (false, WeightSpec::Mixed { .. }) => Claim::KMixedExact,
        (false, WeightSpec::Single { .. }) => Claim::KExact,
    };
    Ok(Certificate {
        claim,
        length: pool.l,
        weights,
        value: witness.len() as u64,
        justification: Justification::Oracle {
            scope,
            budget,
            nodes: outcome.nodes,
            exhausted: outcome.exhausted,
        },
        witness: Some(witness),
        checked_preconditions: Vec::new(),
    })
}

/// `K(L, w)` by exhaustive search. If the budget runs out, the best code found
/// so far is returned as a `K_lower` certificate.
pub fn k_exact_oracle(l: u64, w: usize, node_budget: u64) -> Result<Certificate> {
    check_scale(l, w)?;
    check_subset_count(l, w)?;
    let mut pool = Pool::new(l);
    pool.add_all_subsets(w, false);
    let outcome = Search::new(&pool, w, w, 0, node_budget).run();
    certificate(&pool, outcome, WeightSpec::Single { w }, OracleScope::AllCodewords, node_budget)
}

/// `K^e(L, w)`: as [`k_exact_oracle`] over equi-difference codewords only.
pub fn k_equi_oracle(l: u64, w: usize, node_budget: u64) -> Result<Certificate> {
    check_scale(l, w)?;
    let mut pool = Pool::new(l);
    pool.add_equi(w, false);
    let outcome = Search::new(&pool, w, w, 0, node_budget).run();
    let mut cert = certificate(&pool, outcome, WeightSpec::Single { w }, OracleScope::EquiDifference, node_budget)?;
    // re-derive the generators so the witness records them
    if let Some(code) = cert.witness.take() {
        let words = code
            .codewords()
            .iter()
            .map(|c| {
                let g = c.equi_generator().expect("equi-difference candidate");
                c.clone().with_generator(g)
            })
            .collect::<Result<Vec<_>>>()?;
        cert.witness = Some(Code::new(l, words, code.provenance().clone())?);
    }
    Ok(cert)
}

/// Largest code of length `L` with weights in `{w, w*}` and exactly `n`
/// codewords of weight `w*`.
pub fn k_mixed_oracle(l: u64, w: usize, w_star: usize, n: usize, node_budget: u64) -> Result<Certificate> {
    if w == w_star {
        return Err(CacError::invalid("the two weights must differ"));
    }
    check_scale(l, w)?;
    check_scale(l, w_star)?;
    check_subset_count(l, w)?;
    check_subset_count(l, w_star)?;
    let mut pool = Pool::new(l);
    if n > 0 {
        pool.add_all_subsets(w_star, true);
    }
    pool.add_all_subsets(w, false);
    let outcome = Search::new(&pool, w, w_star, n, node_budget).run();
    if outcome.best.is_empty() && n > 0 {
        return Err(if outcome.exhausted {
            CacError::BudgetExhausted { budget: node_budget }
        } else {
            CacError::Precondition(format!("no code of length {l} has {n} codewords of weight {w_star}"))
        });
    }
    certificate(
        &pool,
        outcome,
        WeightSpec::Mixed { w, w_star, n },
        OracleScope::AllCodewords,
        node_budget,
    )
}
