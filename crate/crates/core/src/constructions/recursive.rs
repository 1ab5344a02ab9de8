//! Extensions of a prime-length equi-difference code to lengths `p^r`,
//! `w·p^r` and `(2w−1)·p^r`, and the small-prime code of length `(2w−1)p`.

use super::{check_wp_condition, ensure, BaseCode, PairCodeBuilder};
use crate::code::{Code, Codeword, Provenance};
use crate::error::{CacError, Result};
use crate::numtheory::{checked_pow, is_prime, lift_set, quadratic_residues};

fn lifted_generators(base: &BaseCode, r: u32) -> Result<Vec<u64>> {
    if base.generators().is_empty() {
        return Ok(Vec::new());
    }
    lift_set(base.generators(), base.p(), r)
}

fn check_r(r: u32) -> Result<()> {
    ensure(r >= 1, || "exponent r must be at least 1".into())
}

/// Code in `CAC^e(p^r, w)` with generators the lift of the base generators.
pub fn extend_to_pr(base: &BaseCode, r: u32) -> Result<Code> {
    check_r(r)?;
    let (p, w) = (base.p(), base.w() as u64);
    ensure(p >= 2 * w - 1, || format!("p = {p} is smaller than 2w − 1 = {}", 2 * w - 1))?;
    let q = checked_pow(p, r)?;
    let words = lifted_generators(base, r)?
        .into_iter()
        .map(|g| Codeword::equi_difference(q, g, base.w()))
        .collect::<Result<Vec<_>>>()?;
    let prov = Provenance::new("pr")
        .param("p", p)
        .param("r", r)
        .param("w", w)
        .param("m", base.m() as u64);
    Code::new(q, words, prov)
}

/// Code in `CAC^e(w·p^r, w)`: `(0, S_r(Γ))`, `(1, S_r(Q(p)))` and `(1, 0)`.
pub fn construct_wpr(base: &BaseCode, r: u32) -> Result<Code> {
    check_r(r)?;
    let (p, w) = (base.p(), base.w() as u64);
    ensure(p >= 2 * w - 1, || format!("p = {p} is smaller than 2w − 1 = {}", 2 * w - 1))?;
    if !check_wp_condition(p, w)? {
        return Err(CacError::Precondition(format!(
            "(i/p)((i−w)/p) = −1 fails for some 1 ≤ i < w at p = {p}, w = {w}"
        )));
    }
    let q = checked_pow(p, r)?;
    let prov = Provenance::new("wpr")
        .param("p", p)
        .param("r", r)
        .param("w", w)
        .param("m", base.m() as u64);
    let mut b = PairCodeBuilder::new(w, q, prov)?;
    for g in lifted_generators(base, r)? {
        b.push(0, g, base.w())?;
    }
    for g in lift_set(&quadratic_residues(p)?, p, r)? {
        b.push(1, g, base.w())?;
    }
    b.push(1, 0, base.w())?;
    b.finish()
}

/// Code in `CAC^e((2w−1)·p^r, w)`: `(0, S_r(Γ))` and `(1, g)` for every `g`.
pub fn construct_2w1pr(base: &BaseCode, r: u32) -> Result<Code> {
    check_r(r)?;
    let (p, w) = (base.p(), base.w() as u64);
    ensure(p > 2 * w - 1, || format!("p = {p} is not larger than 2w − 1 = {}", 2 * w - 1))?;
    let q = checked_pow(p, r)?;
    let prov = Provenance::new("2w1pr")
        .param("p", p)
        .param("r", r)
        .param("w", w)
        .param("m", base.m() as u64);
    let mut b = PairCodeBuilder::new(2 * w - 1, q, prov)?;
    for g in lifted_generators(base, r)? {
        b.push(0, g, base.w())?;
    }
    for g in 0..q {
        b.push(1, g, base.w())?;
    }
    b.finish()
}

/// Code in `CAC^e((2w−1)p, w)` with `p + 1` codewords, for `w ≤ p < 2w−1`.
pub fn construct_2w1p_small(p: u64, w: u64) -> Result<Code> {
    ensure(is_prime(p), || format!("{p} is not prime"))?;
    ensure(w >= 2, || format!("weight {w} is below 2"))?;
    ensure(w <= p && p < 2 * w - 1, || {
        format!("p = {p} is outside w ≤ p < 2w − 1 = {}", 2 * w - 1)
    })?;
    let prov = Provenance::new("2w1p-small").param("p", p).param("w", w);
    let mut b = PairCodeBuilder::new(2 * w - 1, p, prov)?;
    for g in 0..p {
        b.push(1, g, w as usize)?;
    }
    b.push(0, 1, w as usize)?;
    b.finish()
}
