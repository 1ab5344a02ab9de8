use super::{mul_mod, primitive_root, reduce, require_odd_prime};
use crate::error::{CacError, Result};

/// The cosets of the index-`e` subgroup `⟨α^e⟩` of `Z_p^×`.
///
/// Coset `j` is `α^j·⟨α^e⟩`, with `α` the smallest primitive root so labels
/// are reproducible. The subgroup itself (label 0) does not depend on `α`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetSystem {
    p: u64,
    e: u64,
    alpha: u64,
    // label[x] for x in 1..p; index 0 is unused
    label: Vec<u32>,
}

impl CosetSystem {
    pub fn new(p: u64, e: u64) -> Result<Self> {
        require_odd_prime(p)?;
        if e == 0 || !(p - 1).is_multiple_of(e) {
            return Err(CacError::precondition(format!("{e} does not divide {p} - 1")));
        }
        let alpha = primitive_root(p)?;
        let mut label = vec![u32::MAX; p as usize];
        let mut x = 1u64;
        for k in 0..p - 1 {
            label[x as usize] = (k % e) as u32;
            x = mul_mod(x, alpha, p);
        }
        Ok(Self { p, e, alpha, label })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Number of cosets.
    pub fn e(&self) -> u64 {
        self.e
    }

    pub fn alpha(&self) -> u64 {
        self.alpha
    }

    pub fn class_size(&self) -> u64 {
        (self.p - 1) / self.e
    }

    /// Coset label of `x`, or `None` when `x ≡ 0 (mod p)`.
    pub fn label(&self, x: i64) -> Option<usize> {
        match reduce(x, self.p) {
            0 => None,
            r => Some(self.label[r as usize] as usize),
        }
    }

    /// Members of coset `j`, increasing.
    pub fn class(&self, j: usize) -> Vec<u64> {
        (1..self.p)
            .filter(|&x| self.label[x as usize] as usize == j)
            .collect()
    }

    /// True iff `xs` are `e` nonzero residues lying in pairwise distinct cosets.
    pub fn is_sdr(&self, xs: &[i64]) -> bool {
        if xs.len() as u64 != self.e {
            return false;
        }
        let mut seen = vec![false; self.e as usize];
        for &x in xs {
            match self.label(x) {
                Some(j) if !seen[j] => seen[j] = true,
                _ => return false,
            }
        }
        true
    }
}
