//! Reproducible catalogs of certified codes.
//!
//! An entry records the request that produced it, the code, its certificate
//! and the tool version. Rebuilding from the request gives the same entry up
//! to the timestamp.

use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::{verify_cac, Code, Verdict};
use crate::error::{CacError, Result};
use crate::optimality::{
    certify, k_equi_oracle, k_exact_oracle, k_mixed_oracle, Certificate, Justification, OracleScope, TheoremTag,
    WeightSpec, DEFAULT_NODE_BUDGET,
};

pub const CATALOG_FILE: &str = "catalog.json";
pub const SUMMARY_FILE: &str = "summary.csv";

fn default_budget() -> u64 {
    DEFAULT_NODE_BUDGET
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "request", rename_all = "kebab-case")]
pub enum CatalogRequest {
    Certify {
        theorem: TheoremTag,
    },
    ExactOracle {
        #[serde(rename = "L")]
        l: u64,
        w: usize,
        #[serde(default = "default_budget")]
        budget: u64,
    },
    EquiOracle {
        #[serde(rename = "L")]
        l: u64,
        w: usize,
        #[serde(default = "default_budget")]
        budget: u64,
    },
    MixedOracle {
        #[serde(rename = "L")]
        l: u64,
        w: usize,
        w_star: usize,
        n: usize,
        #[serde(default = "default_budget")]
        budget: u64,
    },
}

impl CatalogRequest {
    pub fn run(&self) -> Result<Certificate> {
        match self {
            CatalogRequest::Certify { theorem } => certify(theorem),
            &CatalogRequest::ExactOracle { l, w, budget } => k_exact_oracle(l, w, budget),
            &CatalogRequest::EquiOracle { l, w, budget } => k_equi_oracle(l, w, budget),
            &CatalogRequest::MixedOracle { l, w, w_star, n, budget } => k_mixed_oracle(l, w, w_star, n, budget),
        }
    }
}

/// The entries built by `catalog build` when no request list is given.
pub fn default_requests() -> Vec<CatalogRequest> {
    let t = |theorem| CatalogRequest::Certify { theorem };
    let exact = |l, w| CatalogRequest::ExactOracle { l, w, budget: DEFAULT_NODE_BUDGET };
    let equi = |l, w| CatalogRequest::EquiOracle { l, w, budget: DEFAULT_NODE_BUDGET };
    vec![
        t(TheoremTag::MainDirect { p: 37, w: 7, d: 2, r: 1 }),
        t(TheoremTag::MainDirect { p: 7, w: 4, d: 1, r: 1 }),
        t(TheoremTag::MainPr { p: 37, w: 4, r: 1, base: None }),
        t(TheoremTag::MainPr { p: 5, w: 3, r: 2, base: None }),
        t(TheoremTag::MainWpr { p: 13, w: 3, r: 1, base: None }),
        t(TheoremTag::Main2w1pr { p: 37, w: 4, r: 1, base: None }),
        t(TheoremTag::Main2w1pSmall { p: 5, w: 4 }),
        t(TheoremTag::MixedW1pr { p: 23, w: 4, r: 1, n: 1, w_star: 4 }),
        t(TheoremTag::UpperPrimeFactors { l: 49, w: 4 }),
        exact(21, 4),
        exact(35, 4),
        exact(25, 3),
        exact(9, 2),
        exact(10, 5),
        equi(37, 4),
        equi(47, 4),
        CatalogRequest::MixedOracle { l: 69, w: 3, w_star: 4, n: 9, budget: DEFAULT_NODE_BUDGET },
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogEntry {
    pub label: String,
    pub request: CatalogRequest,
    /// The witness, when the claim has one.
    pub code: Option<Code>,
    /// Stored without its witness, which is `code`.
    pub certificate: Certificate,
    pub version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl CatalogEntry {
    pub fn build(request: &CatalogRequest) -> Result<Self> {
        let mut certificate = request.run()?;
        let code = certificate.witness.take();
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        Ok(Self {
            label: label(&certificate),
            request: request.clone(),
            code,
            certificate,
            version: concat!("cac-core ", env!("CARGO_PKG_VERSION")).to_owned(),
            timestamp,
        })
    }

    /// Re-checks the witness and its certificate.
    pub fn verify(&self) -> Result<()> {
        if let Some(code) = &self.code {
            if let Verdict::Conflict(c) = verify_cac(code) {
                return Err(CacError::invalid(format!(
                    "entry {}: codewords {} and {} share difference {}",
                    self.label, c.first, c.second, c.difference
                )));
            }
        }
        let mut cert = self.certificate.clone();
        cert.witness = self.code.clone();
        cert.check()
            .map_err(|e| CacError::invalid(format!("entry {}: {e}", self.label)))
    }
}

/// `K(L,w)`, `K^e(L,w)` or `K(L,w;w*,n)`.
pub fn label(cert: &Certificate) -> String {
    let equi = matches!(
        cert.justification,
        Justification::Oracle { scope: OracleScope::EquiDifference, .. }
    );
    let k = if equi { "K^e" } else { "K" };
    match cert.weights {
        WeightSpec::Single { w } => format!("{k}({},{w})", cert.length),
        WeightSpec::Mixed { w, w_star, n } => format!("{k}({},{w};{w_star},{n})", cert.length),
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    /// Builds every request; entries keep the request order.
    pub fn build(requests: &[CatalogRequest]) -> Result<Self> {
        let entries = requests
            .par_iter()
            .map(CatalogEntry::build)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { entries })
    }

    /// Parses a catalog and verifies every entry.
    pub fn from_json(text: &str) -> Result<Self> {
        let catalog: Catalog =
            serde_json::from_str(text).map_err(|e| CacError::invalid(format!("catalog JSON: {e}")))?;
        for e in &catalog.entries {
            e.verify()?;
        }
        Ok(catalog)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("catalog serializes");
        s.push('\n');
        s
    }

    /// One row per entry: label, L, weights, size, claim, justification.
    pub fn summary_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["label", "L", "weights", "size", "claim", "justification"])
            .expect("in-memory write");
        for e in &self.entries {
            let c = &e.certificate;
            let weights = match c.weights {
                WeightSpec::Single { w } => w.to_string(),
                WeightSpec::Mixed { w, w_star, n } => format!("{w};{w_star}x{n}"),
            };
            let claim = serde_json::to_value(c.claim).expect("claim serializes");
            let justification = match &c.justification {
                Justification::Theorem { tag, .. } => format!("theorem:{tag}"),
                Justification::Oracle { nodes, exhausted, .. } => {
                    format!("oracle:{nodes} nodes{}", if *exhausted { " (budget hit)" } else { "" })
                }
            };
            w.write_record([
                e.label.clone(),
                c.length.to_string(),
                weights,
                c.value.to_string(),
                claim.as_str().unwrap_or_default().to_owned(),
                justification,
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv is utf-8")
    }

    /// Writes `catalog.json` and `summary.csv` into `dir`.
    pub fn save(&self, dir: &Path) -> Result<()> {
        let io = |e: std::io::Error| CacError::invalid(format!("{}: {e}", dir.display()));
        fs::create_dir_all(dir).map_err(io)?;
        fs::write(dir.join(CATALOG_FILE), self.to_json()).map_err(io)?;
        fs::write(dir.join(SUMMARY_FILE), self.summary_csv()).map_err(io)?;
        Ok(())
    }

    /// Loads `catalog.json` from `path`, or from `path/catalog.json` when
    /// `path` is a directory.
    pub fn load(path: &Path) -> Result<Self> {
        let file = if path.is_dir() { path.join(CATALOG_FILE) } else { path.to_path_buf() };
        let text = fs::read_to_string(&file).map_err(|e| CacError::invalid(format!("{}: {e}", file.display())))?;
        Self::from_json(&text)
    }
}
