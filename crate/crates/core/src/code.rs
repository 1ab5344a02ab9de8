//! Codewords, codes and the disjoint-difference-set verifier.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CacError, Result};

/// Largest length accepted by the bitmask-based difference machinery.
pub const MAX_LENGTH: u64 = 1 << 22;

/// A subset of `Z_L`, stored as sorted distinct residues.
///
/// `generator` is recorded for equi-difference codewords
/// `{0, g, 2g, ..., (w−1)g}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Codeword {
    length: u64,
    elements: Vec<u64>,
    generator: Option<u64>,
}

impl Codeword {
    pub fn new(length: u64, elements: impl IntoIterator<Item = u64>) -> Result<Self> {
        check_length(length)?;
        let mut elements: Vec<u64> = elements.into_iter().collect();
        if elements.is_empty() {
            return Err(CacError::invalid("a codeword needs at least one element"));
        }
        if let Some(x) = elements.iter().find(|&&x| x >= length) {
            return Err(CacError::invalid(format!("{x} is not a residue mod {length}")));
        }
        elements.sort_unstable();
        let before = elements.len();
        elements.dedup();
        if elements.len() != before {
            return Err(CacError::invalid("codeword elements must be distinct"));
        }
        Ok(Self {
            length,
            elements,
            generator: None,
        })
    }

    /// `{0, g, ..., (w−1)g} mod L`; fails if these are not `w` distinct residues.
    pub fn equi_difference(length: u64, generator: u64, weight: usize) -> Result<Self> {
        check_length(length)?;
        if weight == 0 {
            return Err(CacError::invalid("weight must be positive"));
        }
        let g = generator % length;
        let elements = (0..weight as u64).map(|k| ((k as u128 * g as u128) % length as u128) as u64);
        let mut cw = Self::new(length, elements).map_err(|_| {
            CacError::invalid(format!(
                "generator {generator} does not span {weight} distinct residues mod {length}"
            ))
        })?;
        cw.generator = Some(g);
        Ok(cw)
    }

    pub fn length(&self) -> u64 {
        self.length
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn weight(&self) -> usize {
        self.elements.len()
    }

    pub fn generator(&self) -> Option<u64> {
        self.generator
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elements.binary_search(&(x % self.length)).is_ok()
    }

    /// The recorded generator, or one found by testing each element.
    pub fn equi_generator(&self) -> Option<u64> {
        if self.generator.is_some() {
            return self.generator;
        }
        if self.elements[0] != 0 {
            return None;
        }
        let w = self.weight();
        self.elements[1..].iter().copied().find(|&g| {
            Codeword::equi_difference(self.length, g, w)
                .map(|c| c.elements == self.elements)
                .unwrap_or(false)
        })
    }

    /// Records `g` as generator if the elements really are its multiples.
    pub fn with_generator(mut self, g: u64) -> Result<Self> {
        let expected = Codeword::equi_difference(self.length, g, self.weight())?;
        if expected.elements != self.elements {
            return Err(CacError::invalid(format!(
                "codeword {:?} is not generated by {g}",
                self.elements
            )));
        }
        self.generator = Some(g % self.length);
        Ok(self)
    }

    pub fn translate(&self, shift: u64) -> Self {
        let shift = shift % self.length;
        let mut elements: Vec<u64> = self
            .elements
            .iter()
            .map(|&x| (x + shift) % self.length)
            .collect();
        elements.sort_unstable();
        Self {
            length: self.length,
            elements,
            generator: if shift == 0 { self.generator } else { None },
        }
    }

    /// Translate containing 0 (shifted by minus the smallest element).
    pub fn normalized(&self) -> Self {
        if self.elements[0] == 0 {
            return self.clone();
        }
        self.translate(self.length - self.elements[0])
    }

    /// `d*(S)`, the nonzero differences, increasing.
    pub fn diff_star(&self) -> Vec<u64> {
        self.diff_mask().ones().map(|x| x as u64).collect()
    }

    pub fn diff_mask(&self) -> FixedBitSet {
        let mut mask = FixedBitSet::with_capacity(self.length as usize);
        for (i, &a) in self.elements.iter().enumerate() {
            for &b in &self.elements[i + 1..] {
                mask.insert((b - a) as usize);
                mask.insert((self.length - (b - a)) as usize);
            }
        }
        mask
    }
}

fn check_length(length: u64) -> Result<()> {
    if length == 0 || length > MAX_LENGTH {
        return Err(CacError::invalid(format!(
            "length {length} outside 1..={MAX_LENGTH}"
        )));
    }
    Ok(())
}

/// Where a code came from: construction name and its parameters.
///
/// For codes built over `Z_a × Z_q`, `moduli` is `[a, q]` and `pairs` maps
/// each generator (as a residue of `Z_L`) to its pair form.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub source: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moduli: Option<[u64; 2]>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub pairs: BTreeMap<u64, [u64; 2]>,
}

impl Provenance {
    pub fn new(source: impl Into<String>) -> Self {
        Self {
            source: source.into(),
            ..Self::default()
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.params.insert(key.to_owned(), value.into());
        self
    }
}

/// A collection of codewords of a common length, held in canonical order.
///
/// Serializes to the canonical JSON form: codewords sorted, elements sorted,
/// `equi_generators` keyed by codeword index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "CodeRepr", try_from = "CodeRepr")]
pub struct Code {
    length: u64,
    codewords: Vec<Codeword>,
    provenance: Provenance,
}

impl Code {
    pub fn new(length: u64, mut codewords: Vec<Codeword>, provenance: Provenance) -> Result<Self> {
        check_length(length)?;
        if let Some(cw) = codewords.iter().find(|c| c.length != length) {
            return Err(CacError::invalid(format!(
                "codeword of length {} in a code of length {length}",
                cw.length
            )));
        }
        codewords.sort();
        Ok(Self {
            length,
            codewords,
            provenance,
        })
    }

    pub fn length(&self) -> u64 {
        self.length
    }

    pub fn codewords(&self) -> &[Codeword] {
        &self.codewords
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// weight → number of codewords of that weight.
    pub fn weights(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for c in &self.codewords {
            *m.entry(c.weight()).or_insert(0) += 1;
        }
        m
    }

    pub fn count_of_weight(&self, w: usize) -> usize {
        self.codewords.iter().filter(|c| c.weight() == w).count()
    }

    /// Generators of the equi-difference codewords, in codeword order.
    pub fn generators(&self) -> Vec<u64> {
        self.codewords.iter().filter_map(|c| c.generator).collect()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CodeRepr {
    length: u64,
    codewords: Vec<Vec<u64>>,
    weights: BTreeMap<usize, usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    equi_generators: BTreeMap<usize, u64>,
    provenance: Provenance,
}

impl From<Code> for CodeRepr {
    fn from(code: Code) -> Self {
        let weights = code.weights();
        let equi_generators = code
            .codewords
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.generator.map(|g| (i, g)))
            .collect();
        CodeRepr {
            length: code.length,
            codewords: code.codewords.into_iter().map(|c| c.elements).collect(),
            weights,
            equi_generators,
            provenance: code.provenance,
        }
    }
}

impl TryFrom<CodeRepr> for Code {
    type Error = CacError;

    fn try_from(repr: CodeRepr) -> Result<Self> {
        if let Some(&i) = repr.equi_generators.keys().find(|&&i| i >= repr.codewords.len()) {
            return Err(CacError::invalid(format!("generator index {i} has no codeword")));
        }
        let mut words = Vec::with_capacity(repr.codewords.len());
        for (i, elements) in repr.codewords.into_iter().enumerate() {
            let mut cw = Codeword::new(repr.length, elements)?;
            if let Some(&g) = repr.equi_generators.get(&i) {
                cw = cw.with_generator(g)?;
            }
            words.push(cw);
        }
        let code = Code::new(repr.length, words, repr.provenance)?;
        if code.weights() != repr.weights {
            return Err(CacError::invalid("weight table disagrees with the codewords"));
        }
        Ok(code)
    }
}

impl Code {
    /// Canonical single-line JSON followed by a newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("code serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CacError::invalid(format!("code JSON: {e}")))
    }
}

/// Two codewords whose difference sets meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conflict {
    /// Indices into [`Code::codewords`], `first < second`.
    pub first: usize,
    pub second: usize,
    /// Smallest shared nonzero difference.
    pub difference: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    Conflict(Conflict),
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Ok)
    }
}

/// Checks that the nonzero difference sets of all codewords are pairwise
/// disjoint. On failure reports the lexicographically smallest conflicting
/// pair of indices and their smallest common difference.
pub fn verify_cac(code: &Code) -> Verdict {
    let n = code.length as usize;
    // Fast path: claim every difference for its first owner.
    let mut owner = vec![u32::MAX; n];
    let mut clash = false;
    'outer: for (i, cw) in code.codewords.iter().enumerate() {
        for d in cw.diff_mask().ones() {
            if owner[d] != u32::MAX {
                clash = true;
                break 'outer;
            }
            owner[d] = i as u32;
        }
    }
    if !clash {
        return Verdict::Ok;
    }
    let masks: Vec<FixedBitSet> = code.codewords.par_iter().map(Codeword::diff_mask).collect();
    for i in 0..masks.len() {
        for j in i + 1..masks.len() {
            if let Some(d) = masks[i].intersection(&masks[j]).next() {
                return Verdict::Conflict(Conflict {
                    first: i,
                    second: j,
                    difference: d as u64,
                });
            }
        }
    }
    unreachable!("fast path found a shared difference")
}
