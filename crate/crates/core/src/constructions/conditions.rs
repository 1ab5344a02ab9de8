//! Coset-representative and quadratic-residue conditions, with the
//! congruence-class forms for small weights.

use serde::Serialize;

use super::ensure;
use crate::error::{CacError, Result};
use crate::numtheory::{is_prime, legendre, pow_mod, CosetSystem};

/// One candidate representative set and how its members are labelled.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SdrSetReport {
    pub name: String,
    pub elements: Vec<i64>,
    pub labels: Vec<Option<usize>>,
    pub is_sdr: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SdrReport {
    pub p: u64,
    pub w: u64,
    pub d: u64,
    pub alpha: u64,
    pub holds: bool,
    pub sets: Vec<SdrSetReport>,
}

impl SdrReport {
    /// Names of the sets that fail to be a system of distinct representatives.
    pub fn failures(&self) -> Vec<&str> {
        self.sets
            .iter()
            .filter(|s| !s.is_sdr)
            .map(|s| s.name.as_str())
            .collect()
    }
}

/// Checks that `{±1, …, ±d}` and, for `1 ≤ i < (w−1)/d`, the sets
/// `{i + j(w−1)/d, i − (j+1)(w−1)/d : 0 ≤ j < d}` are each a system of
/// distinct representatives of the cosets of `H^{2d}(p)`.
///
/// With `d = 1` the sets are named `QR1`, `QR2(i)`; otherwise `SDR1`, `SDR2(i)`.
pub fn check_sdr_conditions(p: u64, w: u64, d: u64) -> Result<SdrReport> {
    ensure(is_prime(p) && p > 2, || format!("{p} is not an odd prime"))?;
    ensure(w >= 2, || format!("weight {w} is below 2"))?;
    ensure(d >= 1 && (w - 1).is_multiple_of(d), || format!("d = {d} does not divide w − 1 = {}", w - 1))?;
    ensure((p - 1).is_multiple_of(2 * d), || format!("2d = {} does not divide p − 1 = {}", 2 * d, p - 1))?;
    ensure(p >= w, || format!("p = {p} is smaller than w = {w}"))?;

    let cs = CosetSystem::new(p, 2 * d)?;
    let (first, second) = if d == 1 { ("QR1", "QR2") } else { ("SDR1", "SDR2") };
    let step = ((w - 1) / d) as i64;
    let d = d as i64;

    let mut sets = Vec::new();
    let mut push = |name: String, elements: Vec<i64>| {
        let labels = elements.iter().map(|&x| cs.label(x)).collect();
        let is_sdr = cs.is_sdr(&elements);
        sets.push(SdrSetReport {
            name,
            elements,
            labels,
            is_sdr,
        });
    };
    push(first.to_owned(), (1..=d).flat_map(|k| [k, -k]).collect());
    for i in 1..step {
        let elems = (0..d).flat_map(|j| [i + j * step, i - (j + 1) * step]).collect();
        push(format!("{second}({i})"), elems);
    }
    let holds = sets.iter().all(|s| s.is_sdr);
    Ok(SdrReport {
        p,
        w,
        d: d as u64,
        alpha: cs.alpha(),
        holds,
        sets,
    })
}

/// `(−1/p) = −1` and `(i/p)((i−w+1)/p) = −1` for `1 ≤ i ≤ w−2`, evaluated with
/// Legendre symbols for any odd prime `p`.
pub fn qr_conditions_direct(p: u64, w: u64) -> Result<bool> {
    if legendre(-1, p)? != -1 {
        return Ok(false);
    }
    for i in 1..w.saturating_sub(1) as i64 {
        if legendre(i, p)? * legendre(i - w as i64 + 1, p)? != -1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `(i/p)((i−w)/p) = −1` for all `1 ≤ i ≤ w−1`.
pub fn check_wp_condition(p: u64, w: u64) -> Result<bool> {
    if !is_prime(p) || p == 2 {
        return Err(CacError::precondition(format!("{p} is not an odd prime")));
    }
    if w.is_multiple_of(p) {
        return Err(CacError::precondition(format!("gcd({p}, {w}) is not 1")));
    }
    for i in 1..w as i64 {
        if legendre(i, p)? * legendre(i - w as i64, p)? != -1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A union of residue classes modulo `modulus`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CongruenceClasses {
    pub modulus: u64,
    pub residues: Vec<u64>,
}

impl CongruenceClasses {
    fn from_signed(modulus: u64, signed: &[i64]) -> Self {
        let mut residues: Vec<u64> = signed
            .iter()
            .map(|&r| r.rem_euclid(modulus as i64) as u64)
            .collect();
        residues.sort_unstable();
        Self { modulus, residues }
    }

    pub fn contains(&self, n: u64) -> bool {
        self.residues.binary_search(&(n % self.modulus)).is_ok()
    }
}

/// Primes satisfying [`qr_conditions_direct`] for `4 ≤ w ≤ 11`, as residue classes.
pub fn direct_congruence_classes(w: u64) -> Option<CongruenceClasses> {
    let (m, rs): (u64, &[i64]) = match w {
        4 => (8, &[-1]),
        5 => (12, &[-1]),
        6 => (24, &[-1, -5]),
        7 => (40, &[-1, -9]),
        8 => (120, &[-1, -49]),
        9 => (420, &[-1, 59, -109, -121, 131, -169]),
        10 => (280, &[-1, -9, 31, -81, 111, -121]),
        11 => (168, &[-1, -5, -25, 43, 47, 67]),
        _ => return None,
    };
    Some(CongruenceClasses::from_signed(m, rs))
}

/// Primes satisfying [`check_wp_condition`] for `3 ≤ w ≤ 10`, as residue classes.
pub fn wp_congruence_classes(w: u64) -> Option<CongruenceClasses> {
    let (m, rs): (u64, &[i64]) = match w {
        3 => (8, &[-1, -3]),
        4 => (12, &[-1]),
        5 => (24, &[-1, -5]),
        6 => (40, &[-1, -9]),
        7 => (120, &[-1, -7, 17, -49]),
        8 => (420, &[-1, 59, -109, -121, 131, -169]),
        9 => (280, &[-1, -3, -9, -27, 31, 37, 53, -81, -83, 93, 111, -121]),
        10 => (168, &[-1, -5, -25, 43, 47, 67]),
        _ => return None,
    };
    Some(CongruenceClasses::from_signed(m, rs))
}

/// `p ≡ 5 (mod 24)`: sufficient for the `w = 5, d = 2` conditions.
pub fn sufficient_w5_d2(p: u64) -> bool {
    p % 24 == 5
}

/// `p ≡ 5 (mod 8)` and `10^{(p−1)/4} ≡ 1 (mod p)`: sufficient for the
/// `w = 7, d = 2` conditions.
pub fn sufficient_w7_d2(p: u64) -> bool {
    p % 8 == 5 && pow_mod(10, (p - 1) / 4, p) == 1
}
