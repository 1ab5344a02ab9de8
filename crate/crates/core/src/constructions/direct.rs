use serde::{Deserialize, Serialize};

use super::{check_sdr_conditions, ensure, PairCodeBuilder};
use crate::code::{Code, Provenance};
use crate::error::{CacError, Result};
use crate::numtheory::{checked_pow, is_prime, lift_set, CosetSystem};

/// Parameters of the direct construction of length `((w−1)/d)·p^r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectParams {
    pub p: u64,
    pub r: u32,
    pub w: u64,
    pub d: u64,
}

impl DirectParams {
    pub fn new(p: u64, r: u32, w: u64, d: u64) -> Result<Self> {
        let params = Self { p, r, w, d };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let Self { p, r, w, d } = *self;
        ensure(is_prime(p) && p > 2, || format!("{p} is not an odd prime"))?;
        ensure(r >= 1, || "exponent r must be at least 1".into())?;
        ensure(w >= 2, || format!("weight {w} is below 2"))?;
        ensure(d >= 1 && (w - 1) % d == 0, || format!("d = {d} does not divide w − 1 = {}", w - 1))?;
        ensure((p - 1) % (2 * d) == 0, || format!("2d = {} does not divide p − 1 = {}", 2 * d, p - 1))?;
        ensure(p >= w, || format!("p = {p} is smaller than w = {w}"))?;
        Ok(())
    }

    /// `(w−1)/d`, the size of the first CRT component.
    pub fn cofactor(&self) -> u64 {
        (self.w - 1) / self.d
    }

    pub fn length(&self) -> Result<u64> {
        Ok(self.cofactor() * checked_pow(self.p, self.r)?)
    }

    /// `(p^r − 1)/(2d)`.
    pub fn expected_size(&self) -> Result<u64> {
        Ok((checked_pow(self.p, self.r)? - 1) / (2 * self.d))
    }
}

/// Equi-difference code with generators `θ^{-1}(1, g)` for `g` in the lift of
/// `H^{2d}_0(p)`.
pub fn construct_direct(params: &DirectParams) -> Result<Code> {
    params.validate()?;
    let DirectParams { p, r, w, d } = *params;
    let report = check_sdr_conditions(p, w, d)?;
    if !report.holds {
        return Err(CacError::Precondition(format!(
            "p = {p}, w = {w}, d = {d}: {} not a system of distinct representatives",
            report.failures().join(", ")
        )));
    }
    let q = checked_pow(p, r)?;
    let a = params.cofactor();
    let prov = Provenance::new("direct")
        .param("p", p)
        .param("r", r)
        .param("w", w)
        .param("d", d);
    let mut b = PairCodeBuilder::new(a, q, prov)?;
    let h0 = CosetSystem::new(p, 2 * d)?.class(0);
    for g in lift_set(&h0, p, r)? {
        b.push(1, g, w as usize)?;
    }
    b.finish()
}
