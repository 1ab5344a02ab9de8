//! Exhaustive search for equi-difference base codes of prime length.

use super::{ensure, BaseCode};
use crate::error::{CacError, Result};
use crate::numtheory::is_prime;

/// Default node budget for [`search_base`].
pub const DEFAULT_SEARCH_BUDGET: u64 = 200_000_000;

/// The lexicographically first generator set of a maximum (or `target_m`-sized)
/// code in `CAC^e(p, w)`.
pub fn search_base(p: u64, w: usize, target_m: Option<usize>) -> Result<BaseCode> {
    search_base_with_budget(p, w, target_m, DEFAULT_SEARCH_BUDGET)
}

pub fn search_base_with_budget(
    p: u64,
    w: usize,
    target_m: Option<usize>,
    budget: u64,
) -> Result<BaseCode> {
    ensure(is_prime(p), || format!("{p} is not prime"))?;
    ensure(w >= 2, || format!("weight {w} is below 2"))?;
    ensure(p >= 2 * w as u64 - 1, || {
        format!("p = {p} is smaller than 2w − 1 = {}", 2 * w - 1)
    })?;
    let mut s = Searcher::new(p, w, budget);
    let upper = s.upper();
    let found = match target_m {
        Some(m) if m > upper => {
            let max = s.maximum()?.len();
            return Err(CacError::TargetUnreachable { target: m, max });
        }
        Some(m) => match s.first_of_size(m)? {
            Some(found) => found,
            None => {
                let max = s.maximum()?.len();
                return Err(CacError::TargetUnreachable { target: m, max });
            }
        },
        None => s.maximum()?,
    };
    BaseCode::new(p, w, found)
}

/// Codewords `{0, g, …, (w−1)g}` for `1 ≤ g ≤ (p−1)/2` are the only
/// candidates needed: `g` and `p − g` have the same difference set. Each
/// difference set is stored as a mask over the half range `1..=(p−1)/2`.
struct Searcher {
    w1: usize,
    words: usize,
    half: usize,
    masks: Vec<u64>,
    nodes: u64,
    budget: u64,
}

impl Searcher {
    fn new(p: u64, w: usize, budget: u64) -> Self {
        let half = ((p - 1) / 2) as usize;
        let words = half.div_ceil(64).max(1);
        let mut masks = vec![0u64; half * words];
        for g in 1..=half as u64 {
            let row = &mut masks[(g as usize - 1) * words..g as usize * words];
            for k in 1..w as u64 {
                let x = k * g % p;
                let h = x.min(p - x) as usize - 1;
                row[h / 64] |= 1 << (h % 64);
            }
        }
        Self {
            w1: w - 1,
            words,
            half,
            masks,
            nodes: 0,
            budget,
        }
    }

    fn upper(&self) -> usize {
        self.half / self.w1
    }

    fn mask(&self, i: usize) -> &[u64] {
        &self.masks[i * self.words..(i + 1) * self.words]
    }

    fn disjoint(&self, i: usize, j: usize) -> bool {
        self.mask(i).iter().zip(self.mask(j)).all(|(a, b)| a & b == 0)
    }

    fn maximum(&mut self) -> Result<Vec<u64>> {
        for m in (1..=self.upper()).rev() {
            if let Some(found) = self.first_of_size(m)? {
                return Ok(found);
            }
        }
        Ok(Vec::new())
    }

    /// Multiplying a solution by the inverse of one of its generators gives a
    /// solution containing 1, so the lexicographically first one contains 1.
    fn first_of_size(&mut self, m: usize) -> Result<Option<Vec<u64>>> {
        if m == 0 {
            return Ok(Some(Vec::new()));
        }
        if m > self.upper() {
            return Ok(None);
        }
        let mut free = vec![!0u64; self.words];
        for (f, b) in free.iter_mut().zip(self.mask(0)) {
            *f &= !b;
        }
        let compat: Vec<usize> = (1..self.half).filter(|&j| self.disjoint(0, j)).collect();
        let mut chosen = vec![0usize];
        if self.dfs(m, &mut chosen, &free, &compat)? {
            return Ok(Some(chosen.iter().map(|&i| i as u64 + 1).collect()));
        }
        Ok(None)
    }

    fn dfs(&mut self, m: usize, chosen: &mut Vec<usize>, free: &[u64], compat: &[usize]) -> Result<bool> {
        if chosen.len() == m {
            return Ok(true);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(CacError::BudgetExhausted { budget: self.budget });
        }
        let need = m - chosen.len();
        if compat.len() < need {
            return Ok(false);
        }
        // only the first `half` bits of `free` are meaningful
        let free_bits: usize = free
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let valid = self.half.saturating_sub(i * 64).min(64);
                let keep = if valid == 64 { !0 } else { (1u64 << valid) - 1 };
                (f & keep).count_ones() as usize
            })
            .sum();
        if free_bits / self.w1 < need {
            return Ok(false);
        }
        for (idx, &c) in compat.iter().enumerate() {
            if compat.len() - idx < need {
                break;
            }
            let next: Vec<usize> = compat[idx + 1..]
                .iter()
                .copied()
                .filter(|&j| self.disjoint(c, j))
                .collect();
            let nfree: Vec<u64> = free.iter().zip(self.mask(c)).map(|(f, b)| f & !b).collect();
            chosen.push(c);
            if self.dfs(m, chosen, &nfree, &next)? {
                return Ok(true);
            }
            chosen.pop();
        }
        Ok(false)
    }
}
