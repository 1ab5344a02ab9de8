//! Closed-form values with machine-checked hypotheses and constructed witnesses.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::bounds::upper_prime_factors;
use super::certificate::{Certificate, Claim, Justification, WeightSpec};
use crate::code::{Code, Provenance};
use crate::constructions::{
    check_sdr_conditions, check_wp_condition, construct_2w1p_small, construct_2w1pr, construct_direct,
    construct_wpr, extend_to_pr, mixed_2w1pr, mixed_w1pr, mixed_wpr, search_base, BaseCode,
    DirectParams,
};
use crate::error::{CacError, Result};
use crate::numtheory::{checked_pow, is_prime};

/// A closed-form result together with its parameters.
///
/// Theorems that need a prime-length base code take optional generators; when
/// absent, a base of the required size is searched for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "theorem", rename_all = "kebab-case")]
pub enum TheoremTag {
    /// `K(((w−1)/d)·p^r, w) = (p^r − 1)/(2d)`.
    MainDirect { p: u64, w: u64, d: u64, r: u32 },
    /// `K(p^r, w) = (p^r − 1)/(2w − 2)`.
    MainPr { p: u64, w: u64, r: u32, base: Option<Vec<u64>> },
    /// `K(w·p^r, w) = (p^r − 1)/(2w − 2) + (p^r − 1)/2 + 1`.
    MainWpr { p: u64, w: u64, r: u32, base: Option<Vec<u64>> },
    /// `K((2w−1)·p^r, w) = p^r + (p^r − 1)/(2w − 2)`.
    Main2w1pr { p: u64, w: u64, r: u32, base: Option<Vec<u64>> },
    /// `K((2w−1)·p, w) = p + 1` for `w ≤ p < 2w − 1`.
    Main2w1pSmall { p: u64, w: u64 },
    /// `K((w−1)·p^r, w−1; w, n′) = n + (p^r + 1)/2` with
    /// `n′ = (p^r − 1)/2 − n(w − 2)`, from a base of `n` codewords of weight
    /// `w_star ∈ {w − 1, w}`.
    MixedW1pr { p: u64, w: u64, r: u32, n: u64, w_star: u64 },
    /// `K(w·p^r, w; w*, (p^r − 1)/(2w* − 2)) = (p^r + 1)/2 + (p^r − 1)/(2w* − 2)`.
    MixedWpr { p: u64, w: u64, w_star: u64, r: u32, base: Option<Vec<u64>> },
    /// `K((2w−1)·p^r, w; w*, (p^r − 1)/(2w* − 2)) = p^r + (p^r − 1)/(2w* − 2)`.
    Mixed2w1pr { p: u64, w: u64, w_star: u64, r: u32, base: Option<Vec<u64>> },
    /// `K(L, w) ≤ ⌊(L − 1)/(2w − 2)⌋` when every prime factor of `L` is at least `2w − 1`.
    UpperPrimeFactors { l: u64, w: u64 },
}

impl TheoremTag {
    pub fn name(&self) -> &'static str {
        match self {
            TheoremTag::MainDirect { .. } => "main-direct",
            TheoremTag::MainPr { .. } => "main-pr",
            TheoremTag::MainWpr { .. } => "main-wpr",
            TheoremTag::Main2w1pr { .. } => "main2w1pr",
            TheoremTag::Main2w1pSmall { .. } => "main2w1p-small",
            TheoremTag::MixedW1pr { .. } => "mixed-w1pr",
            TheoremTag::MixedWpr { .. } => "mixed-wpr",
            TheoremTag::Mixed2w1pr { .. } => "mixed2w1pr",
            TheoremTag::UpperPrimeFactors { .. } => "upper-prime-factors",
        }
    }

    fn params(&self) -> BTreeMap<String, serde_json::Value> {
        let mut v = serde_json::to_value(self).expect("tag serializes");
        let map = v.as_object_mut().expect("tagged enum is an object");
        map.remove("theorem");
        map.retain(|_, x| !x.is_null());
        map.clone().into_iter().collect()
    }
}

struct Checks(Vec<String>);

impl Checks {
    fn require(&mut self, cond: bool, what: impl Into<String>) -> Result<()> {
        let what = what.into();
        if !cond {
            return Err(CacError::Precondition(format!("hypothesis fails: {what}")));
        }
        self.0.push(what);
        Ok(())
    }
}

fn base_code(p: u64, w: u64, m: u64, given: &Option<Vec<u64>>, checks: &mut Checks) -> Result<BaseCode> {
    let base = match given {
        Some(g) => BaseCode::new(p, w as usize, g.clone())?,
        None => search_base(p, w as usize, Some(m as usize))?,
    };
    checks.require(
        base.m() as u64 == m,
        format!("base code in CAC^e({p}, {w}) with {m} codewords: {:?}", base.generators()),
    )?;
    Ok(base)
}

fn exact(tag: &TheoremTag, claim: Claim, weights: WeightSpec, value: u64, witness: Code, checks: Checks) -> Result<Certificate> {
    let cert = Certificate {
        claim,
        length: witness.length(),
        weights,
        value,
        justification: Justification::Theorem {
            tag: tag.name().to_owned(),
            params: tag.params(),
        },
        witness: Some(witness),
        checked_preconditions: checks.0,
    };
    cert.check()?;
    Ok(cert)
}

/// Checks the hypotheses of `tag`, builds the witness, and returns the
/// certificate. Any failing hypothesis is reported as a precondition error.
pub fn certify(tag: &TheoremTag) -> Result<Certificate> {
    let mut c = Checks(Vec::new());
    match tag {
        &TheoremTag::MainDirect { p, w, d, r } => {
            let params = DirectParams::new(p, r, w, d)?;
            c.require(true, format!("d = {d} divides w − 1 = {}", w - 1))?;
            c.require(true, format!("2d = {} divides p − 1 = {}", 2 * d, p - 1))?;
            c.require(true, format!("p = {p} ≥ w = {w}"))?;
            let report = check_sdr_conditions(p, w, d)?;
            for set in &report.sets {
                c.require(set.is_sdr, format!("{} = {:?} is a system of distinct representatives", set.name, set.elements))?;
            }
            let value = params.expected_size()?;
            exact(tag, Claim::KExact, WeightSpec::Single { w: w as usize }, value, construct_direct(&params)?, c)
        }
        TheoremTag::MainPr { p, w, r, base } => {
            let (p, w, r) = (*p, *w, *r);
            prime_and_divisible(p, w, &mut c)?;
            let m = (p - 1) / (2 * w - 2);
            let b = base_code(p, w, m, base, &mut c)?;
            let q = checked_pow(p, r)?;
            c.require(true, format!("all prime factors of {q} are ≥ 2w − 1 = {}", 2 * w - 1))?;
            exact(tag, Claim::KExact, WeightSpec::Single { w: w as usize }, (q - 1) / (2 * w - 2), extend_to_pr(&b, r)?, c)
        }
        TheoremTag::MainWpr { p, w, r, base } => {
            let (p, w, r) = (*p, *w, *r);
            prime_and_divisible(p, w, &mut c)?;
            c.require(check_wp_condition(p, w)?, format!("(i/{p})((i−{w})/{p}) = −1 for 1 ≤ i < {w}"))?;
            let m = (p - 1) / (2 * w - 2);
            let b = base_code(p, w, m, base, &mut c)?;
            let q = checked_pow(p, r)?;
            let value = (q - 1) / (2 * w - 2) + (q - 1) / 2 + 1;
            exact(tag, Claim::KExact, WeightSpec::Single { w: w as usize }, value, construct_wpr(&b, r)?, c)
        }
        TheoremTag::Main2w1pr { p, w, r, base } => {
            let (p, w, r) = (*p, *w, *r);
            prime_and_divisible(p, w, &mut c)?;
            let q = checked_pow(p, r)?;
            let value = q + (q - 1) / (2 * w - 2);
            let witness = if p == 2 * w - 1 {
                // (2w−1)·p^r = p^(r+1) and w = (p+1)/2: the lift of {1}
                c.require(true, format!("p = 2w − 1 = {p}: length {p}^{}", r + 1))?;
                extend_to_pr(&BaseCode::new(p, w as usize, vec![1])?, r + 1)?
            } else {
                let m = (p - 1) / (2 * w - 2);
                let b = base_code(p, w, m, base, &mut c)?;
                construct_2w1pr(&b, r)?
            };
            exact(tag, Claim::KExact, WeightSpec::Single { w: w as usize }, value, witness, c)
        }
        &TheoremTag::Main2w1pSmall { p, w } => {
            c.require(is_prime(p), format!("{p} is prime"))?;
            c.require(w <= p && p < 2 * w - 1, format!("w = {w} ≤ p = {p} < 2w − 1 = {}", 2 * w - 1))?;
            exact(tag, Claim::KExact, WeightSpec::Single { w: w as usize }, p + 1, construct_2w1p_small(p, w)?, c)
        }
        &TheoremTag::MixedW1pr { p, w, r, n, w_star } => {
            c.require(is_prime(p) && p > 2, format!("{p} is an odd prime"))?;
            c.require(w >= 3, format!("w = {w} ≥ 3"))?;
            c.require(p >= 2 * w - 1, format!("p = {p} ≥ 2w − 1 = {}", 2 * w - 1))?;
            let report = check_sdr_conditions(p, w, 1)?;
            for set in &report.sets {
                c.require(set.is_sdr, format!("{} holds", set.name))?;
            }
            c.require(w_star == w || w_star + 1 == w, format!("w* = {w_star} ∈ {{w − 1, w}}"))?;
            let q = checked_pow(p, r)?;
            c.require(
                n <= (q - 1) / (2 * (w_star - 1)),
                format!("n = {n} ≤ ⌊(p^r − 1)/(2(w* − 1))⌋ = {}", (q - 1) / (2 * (w_star - 1))),
            )?;
            let base_a = mixed_base(p, r, w_star, n, &mut c)?;
            let witness = mixed_w1pr(p, r, w, &base_a)?;
            let n_high = (q - 1) / 2 - n * (w - 2);
            let weights = WeightSpec::Mixed {
                w: (w - 1) as usize,
                w_star: w as usize,
                n: n_high as usize,
            };
            exact(tag, Claim::KMixedExact, weights, n + q.div_ceil(2), witness, c)
        }
        TheoremTag::MixedWpr { p, w, w_star, r, base } => {
            let (p, w, w_star, r) = (*p, *w, *w_star, *r);
            c.require(w < w_star, format!("w = {w} < w* = {w_star}"))?;
            prime_and_divisible(p, w_star, &mut c)?;
            c.require(check_wp_condition(p, w)?, format!("(i/{p})((i−{w})/{p}) = −1 for 1 ≤ i < {w}"))?;
            let m = (p - 1) / (2 * w_star - 2);
            let b = base_code(p, w_star, m, base, &mut c)?;
            let q = checked_pow(p, r)?;
            let n = (q - 1) / (2 * w_star - 2);
            let weights = WeightSpec::Mixed { w: w as usize, w_star: w_star as usize, n: n as usize };
            exact(tag, Claim::KMixedExact, weights, q.div_ceil(2) + n, mixed_wpr(&b, r, w)?, c)
        }
        TheoremTag::Mixed2w1pr { p, w, w_star, r, base } => {
            let (p, w, w_star, r) = (*p, *w, *w_star, *r);
            c.require(w < w_star, format!("w = {w} < w* = {w_star}"))?;
            prime_and_divisible(p, w_star, &mut c)?;
            let k = 2 * w - 1;
            c.require(
                (w_star - 1) % k == 0 || (2 * w_star - 1) % k == 0,
                format!("2w − 1 = {k} divides w* − 1 or 2w* − 1"),
            )?;
            let m = (p - 1) / (2 * w_star - 2);
            let b = base_code(p, w_star, m, base, &mut c)?;
            let q = checked_pow(p, r)?;
            let n = (q - 1) / (2 * w_star - 2);
            let weights = WeightSpec::Mixed { w: w as usize, w_star: w_star as usize, n: n as usize };
            exact(tag, Claim::KMixedExact, weights, q + n, mixed_2w1pr(&b, r, w)?, c)
        }
        &TheoremTag::UpperPrimeFactors { l, w } => {
            let Some(bound) = upper_prime_factors(l, w)? else {
                return Err(CacError::Precondition(format!(
                    "hypothesis fails: some prime factor of {l} is below 2w − 1 = {}",
                    2 * w - 1
                )));
            };
            c.require(true, format!("all prime factors of {l} are ≥ 2w − 1 = {}", 2 * w - 1))?;
            Ok(Certificate {
                claim: Claim::KUpper,
                length: l,
                weights: WeightSpec::Single { w: w as usize },
                value: bound,
                justification: Justification::Theorem {
                    tag: tag.name().to_owned(),
                    params: tag.params(),
                },
                witness: None,
                checked_preconditions: c.0,
            })
        }
    }
}

fn prime_and_divisible(p: u64, w: u64, c: &mut Checks) -> Result<()> {
    c.require(is_prime(p), format!("{p} is prime"))?;
    c.require(w >= 2, format!("w = {w} ≥ 2"))?;
    c.require((p - 1).is_multiple_of(2 * w - 2), format!("2w − 2 = {} divides p − 1 = {}", 2 * w - 2, p - 1))
}

/// A code of length `p^r` with `n` equi-difference codewords of weight `w*`:
/// the first `n` generators of the lifted maximum base code.
fn mixed_base(p: u64, r: u32, w_star: u64, n: u64, c: &mut Checks) -> Result<Code> {
    let q = checked_pow(p, r)?;
    if n == 0 {
        c.require(true, "empty base code")?;
        return Code::new(q, Vec::new(), Provenance::new("base"));
    }
    let base = search_base(p, w_star as usize, None)?;
    let lifted = if r == 1 { base.to_code()? } else { extend_to_pr(&base, r)? };
    c.require(
        lifted.len() as u64 >= n,
        format!("a code in CAC^e({q}, {w_star}) with at least {n} codewords (found {})", lifted.len()),
    )?;
    let words = lifted.codewords()[..n as usize].to_vec();
    Code::new(q, words, Provenance::new("base").param("p", p).param("r", r).param("w", w_star))
}
