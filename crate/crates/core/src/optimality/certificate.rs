use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::code::{verify_cac, Code, Verdict};
use crate::error::{CacError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Claim {
    #[serde(rename = "K_exact")]
    KExact,
    #[serde(rename = "K_lower")]
    KLower,
    #[serde(rename = "K_upper")]
    KUpper,
    #[serde(rename = "K_mixed_exact")]
    KMixedExact,
}

/// A single weight `w`, or base weight `w` with exactly `n` codewords of
/// weight `w_star`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightSpec {
    Mixed { w: usize, w_star: usize, n: usize },
    Single { w: usize },
}

impl WeightSpec {
    /// Whether the weight counts of `code` fit this weight profile.
    pub fn admits(&self, code: &Code) -> bool {
        let weights = code.weights();
        match *self {
            WeightSpec::Single { w } => weights.keys().all(|&k| k == w),
            WeightSpec::Mixed { w, w_star, n } => {
                weights.keys().all(|&k| k == w || k == w_star)
                    && weights.get(&w_star).copied().unwrap_or(0) == n
            }
        }
    }
}

/// Which codewords an oracle ranged over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleScope {
    AllCodewords,
    EquiDifference,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Justification {
    Theorem {
        tag: String,
        params: BTreeMap<String, serde_json::Value>,
    },
    Oracle {
        scope: OracleScope,
        budget: u64,
        nodes: u64,
        exhausted: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub claim: Claim,
    #[serde(rename = "L")]
    pub length: u64,
    pub weights: WeightSpec,
    pub value: u64,
    pub justification: Justification,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Code>,
    #[serde(default)]
    pub checked_preconditions: Vec<String>,
}

impl Certificate {
    /// Re-checks the witness: conflict-free, right length, right size and
    /// weight counts. Lower bounds must carry a witness.
    pub fn check(&self) -> Result<()> {
        let Some(code) = &self.witness else {
            if matches!(self.claim, Claim::KLower) {
                return Err(CacError::invalid("lower-bound certificate without witness"));
            }
            return Ok(());
        };
        if code.length() != self.length {
            return Err(CacError::invalid(format!(
                "witness length {} differs from L = {}",
                code.length(),
                self.length
            )));
        }
        if code.len() as u64 != self.value {
            return Err(CacError::invalid(format!(
                "witness has {} codewords, claimed {}",
                code.len(),
                self.value
            )));
        }
        if !self.weights.admits(code) {
            return Err(CacError::invalid(format!(
                "witness weights {:?} do not fit {:?}",
                code.weights(),
                self.weights
            )));
        }
        if let Verdict::Conflict(c) = verify_cac(code) {
            return Err(CacError::invalid(format!(
                "witness codewords {} and {} share difference {}",
                c.first, c.second, c.difference
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CacError::invalid(format!("certificate JSON: {e}")))
    }
}
