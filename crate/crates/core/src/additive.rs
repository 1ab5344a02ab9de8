//! Sumsets, stabilizers and the exceptional-codeword classification.

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::code::Codeword;
use crate::error::{CacError, Result};
use crate::numtheory::divisors;

fn to_mask(set: &[u64], l: u64) -> FixedBitSet {
    let mut m = FixedBitSet::with_capacity(l as usize);
    for &x in set {
        m.insert((x % l) as usize);
    }
    m
}

/// `A + B` in `Z_L`, increasing.
pub fn sumset(a: &[u64], b: &[u64], l: u64) -> Vec<u64> {
    let mut m = FixedBitSet::with_capacity(l as usize);
    for &x in a {
        for &y in b {
            m.insert(((x % l + y % l) % l) as usize);
        }
    }
    m.ones().map(|x| x as u64).collect()
}

/// `d(S) = S − S`, including 0.
pub fn full_difference_set(s: &Codeword) -> Vec<u64> {
    let mut d = s.diff_mask();
    d.insert(0);
    d.ones().map(|x| x as u64).collect()
}

/// `H(T) = {h : h + T = T}`, increasing.
///
/// The stabilizer is a subgroup of the cyclic group `Z_L`, hence generated by
/// its least positive element, which divides `L`; only divisors are tried.
pub fn stabilizer(t: &[u64], l: u64) -> Vec<u64> {
    let mask = to_mask(t, l);
    let members: Vec<u64> = mask.ones().map(|x| x as u64).collect();
    let step = divisors(l)
        .into_iter()
        .find(|&s| members.iter().all(|&x| mask.contains(((x + s) % l) as usize)))
        .unwrap_or(l);
    (0..l / step).map(|k| k * step).collect()
}

/// The subgroup of `Z_L` of order `d`: the multiples of `L/d`.
pub fn subgroup_of_order(l: u64, d: u64) -> Result<Vec<u64>> {
    if d == 0 || l == 0 || !l.is_multiple_of(d) {
        return Err(CacError::precondition(format!("{d} does not divide {l}")));
    }
    let step = l / d;
    Ok((0..d).map(|k| k * step).collect())
}

/// Kneser's inequality `|A+B| ≥ |A+H| + |B+H| − |H|` with `H = H(A+B)`.
pub fn kneser_check(a: &[u64], b: &[u64], l: u64) -> bool {
    let ab = sumset(a, b, l);
    let h = stabilizer(&ab, l);
    let ah = sumset(a, &h, l).len();
    let bh = sumset(b, &h, l).len();
    ab.len() + h.len() >= ah + bh
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilizerReport {
    pub subject: Vec<u64>,
    pub length: u64,
    pub dstar: Vec<u64>,
    pub stab: Vec<u64>,
    pub exceptional: bool,
}

/// Computes `d*(S)`, `H(d(S))`, and whether `|d*(S)| < 2(|S| − 1)`.
pub fn classify_exceptional(s: &Codeword) -> StabilizerReport {
    let dstar = s.diff_star();
    let mut d = dstar.clone();
    d.push(0);
    let stab = stabilizer(&d, s.length());
    let exceptional = dstar.len() + 2 < 2 * s.weight();
    StabilizerReport {
        subject: s.elements().to_vec(),
        length: s.length(),
        dstar,
        stab,
        exceptional,
    }
}
