//! Constructions of constant- and mixed-weight conflict-avoiding codes.
//!
//! All codes here are built on `Z_a × Z_{p^r}` and emitted in `Z_L` form
//! through the CRT bijection; the pair form of every generator is kept in the
//! provenance.

mod conditions;
mod direct;
mod mixed;
mod recursive;
mod search;

pub use conditions::{
    check_sdr_conditions, check_wp_condition, direct_congruence_classes, qr_conditions_direct,
    sufficient_w5_d2, sufficient_w7_d2, wp_congruence_classes, CongruenceClasses, SdrReport,
    SdrSetReport,
};
pub use direct::{construct_direct, DirectParams};
pub use mixed::{mixed_2w1pr, mixed_w1pr, mixed_wpr};
pub use recursive::{construct_2w1p_small, construct_2w1pr, construct_wpr, extend_to_pr};
pub use search::{search_base, search_base_with_budget, DEFAULT_SEARCH_BUDGET};

use serde::{Deserialize, Serialize};

use crate::code::{verify_cac, Code, Codeword, Provenance};
use crate::error::{CacError, Result};
use crate::numtheory::{is_prime, Crt};

/// Generators of an equi-difference code in `CAC^e(p, w)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseCode {
    p: u64,
    w: usize,
    generators: Vec<u64>,
}

impl BaseCode {
    /// Validates that the generators induce a conflict-avoiding code mod `p`.
    pub fn new(p: u64, w: usize, generators: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(CacError::precondition(format!("{p} is not prime")));
        }
        if w < 2 {
            return Err(CacError::invalid("base weight must be at least 2"));
        }
        let mut generators = generators;
        generators.sort_unstable();
        generators.dedup();
        if let Some(g) = generators.iter().find(|&&g| g == 0 || g >= p) {
            return Err(CacError::invalid(format!("generator {g} is not in Z_{p}^*")));
        }
        let base = Self { p, w, generators };
        let code = base.to_code()?;
        if !verify_cac(&code).is_ok() {
            return Err(CacError::invalid(format!(
                "generators {:?} do not form a code in CAC^e({p}, {w})",
                base.generators
            )));
        }
        Ok(base)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn w(&self) -> usize {
        self.w
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn m(&self) -> usize {
        self.generators.len()
    }

    pub fn to_code(&self) -> Result<Code> {
        let words = self
            .generators
            .iter()
            .map(|&g| Codeword::equi_difference(self.p, g, self.w))
            .collect::<Result<Vec<_>>>()?;
        let prov = Provenance::new("base")
            .param("p", self.p)
            .param("w", self.w as u64)
            .param("m", self.m() as u64);
        Code::new(self.p, words, prov)
    }

    /// Reads the generators back from an equi-difference code of prime length.
    pub fn from_code(code: &Code) -> Result<Self> {
        let w = match code.weights().keys().copied().collect::<Vec<_>>()[..] {
            [w] => w,
            [] => return Err(CacError::invalid("base code is empty")),
            _ => return Err(CacError::invalid("base code must have constant weight")),
        };
        let gens = code
            .codewords()
            .iter()
            .map(|c| {
                c.equi_generator()
                    .ok_or_else(|| CacError::invalid("base code has a codeword that is not equi-difference"))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(code.length(), w, gens)
    }
}

/// Accumulates equi-difference codewords over `Z_a × Z_q`.
pub(crate) struct PairCodeBuilder {
    crt: Crt,
    words: Vec<Codeword>,
    prov: Provenance,
}

impl PairCodeBuilder {
    pub(crate) fn new(a: u64, q: u64, prov: Provenance) -> Result<Self> {
        let crt = Crt::new(a, q)?;
        let mut prov = prov;
        prov.moduli = Some([a, q]);
        Ok(Self {
            crt,
            words: Vec::new(),
            prov,
        })
    }

    /// Adds the codeword `{k·(xa, xq) : 0 ≤ k < weight}`.
    pub(crate) fn push(&mut self, xa: u64, xq: u64, weight: usize) -> Result<u64> {
        let g = self.crt.join(xa, xq);
        self.words
            .push(Codeword::equi_difference(self.crt.modulus(), g, weight)?);
        self.prov.pairs.insert(g, [xa % self.crt.a(), xq % self.crt.q()]);
        Ok(g)
    }

    pub(crate) fn finish(self) -> Result<Code> {
        Code::new(self.crt.modulus(), self.words, self.prov)
    }
}

pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(CacError::Precondition(msg()))
    }
}
