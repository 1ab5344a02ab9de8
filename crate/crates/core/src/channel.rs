//! Slot-synchronous collision channel without feedback.
//!
//! User `i` with codeword `S` and offset `τ` transmits in global slot `t`
//! exactly when `(t − τ) mod L ∈ S`. A slot with one transmitter is a success.

use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::{Code, Codeword};
use crate::error::{CacError, Result};

/// Largest number of configurations an exhaustive check will enumerate.
pub const MAX_EXHAUSTIVE_CONFIGURATIONS: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UserAssignment {
    pub user: usize,
    pub codeword: Codeword,
    pub offset: u64,
    pub active: bool,
}

impl UserAssignment {
    pub fn new(user: usize, codeword: Codeword, offset: u64, active: bool) -> Self {
        let offset = offset % codeword.length();
        Self { user, codeword, offset, active }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlotOutcome {
    Idle,
    Success(usize),
    Collision(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelTrace {
    pub slots: Vec<SlotOutcome>,
}

impl ChannelTrace {
    pub fn horizon(&self) -> usize {
        self.slots.len()
    }

    /// Successful slots of `user` in `start..start + len`.
    pub fn successes_in(&self, user: usize, start: usize, len: usize) -> usize {
        self.slots[start..start + len]
            .iter()
            .filter(|s| **s == SlotOutcome::Success(user))
            .count()
    }

    pub fn collisions_in(&self, start: usize, len: usize) -> usize {
        self.slots[start..start + len]
            .iter()
            .filter(|s| matches!(s, SlotOutcome::Collision(_)))
            .count()
    }
}

/// Runs the active users for `horizon` slots. Colliding user ids are sorted.
pub fn simulate(assignments: &[UserAssignment], horizon: usize) -> Result<ChannelTrace> {
    if horizon == 0 {
        return Err(CacError::invalid("horizon must be at least one slot"));
    }
    let Some(first) = assignments.first() else {
        return Ok(ChannelTrace { slots: vec![SlotOutcome::Idle; horizon] });
    };
    let l = first.codeword.length();
    if let Some(a) = assignments.iter().find(|a| a.codeword.length() != l) {
        return Err(CacError::invalid(format!(
            "user {} has length {}, expected {l}",
            a.user,
            a.codeword.length()
        )));
    }
    let mut senders: Vec<Vec<usize>> = vec![Vec::new(); l as usize];
    for a in assignments.iter().filter(|a| a.active) {
        for &x in a.codeword.elements() {
            senders[((x + a.offset) % l) as usize].push(a.user);
        }
    }
    let slots = (0..horizon)
        .map(|t| match senders[t % l as usize].as_slice() {
            [] => SlotOutcome::Idle,
            [u] => SlotOutcome::Success(*u),
            many => {
                let mut v = many.to_vec();
                v.sort_unstable();
                SlotOutcome::Collision(v)
            }
        })
        .collect();
    Ok(ChannelTrace { slots })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mode {
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
}

/// A user that fell short of its guaranteed success count.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Violation {
    /// Active codeword indices, ascending.
    pub active: Vec<usize>,
    pub offsets: Vec<u64>,
    pub user: usize,
    pub successes: usize,
    pub required: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightStats {
    pub min_successes: usize,
    pub required_successes: usize,
    /// Longest cyclic gap between consecutive successes; `None` if some
    /// configuration left the user without any success.
    pub worst_delay_observed: Option<u64>,
    pub worst_delay_bound: u64,
    /// Smallest distance between adjacent transmission slots of any codeword
    /// of this weight.
    pub min_gap: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuaranteeReport {
    pub code_ref: String,
    pub mode: Mode,
    pub w_limit: usize,
    pub configurations_checked: u64,
    pub violations: Vec<Violation>,
    pub per_weight: BTreeMap<usize, WeightStats>,
}

impl GuaranteeReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// What one user got in one configuration.
struct UserOutcome {
    user: usize,
    successes: usize,
    delay: Option<u64>,
}

/// Evaluates one configuration over a single period. For a periodic schedule
/// every window of `L` consecutive slots meets each residue exactly once, so
/// the per-period count is the count in every sliding window.
fn evaluate(code: &Code, active: &[usize], offsets: &[u64]) -> Vec<UserOutcome> {
    let l = code.length();
    let mut count = vec![0u8; l as usize];
    for (&u, &tau) in active.iter().zip(offsets) {
        for &x in code.codewords()[u].elements() {
            let s = ((x + tau) % l) as usize;
            count[s] = count[s].saturating_add(1);
        }
    }
    active
        .iter()
        .zip(offsets)
        .map(|(&u, &tau)| {
            let mut hits: Vec<u64> = code.codewords()[u]
                .elements()
                .iter()
                .map(|&x| (x + tau) % l)
                .filter(|&s| count[s as usize] == 1)
                .collect();
            hits.sort_unstable();
            UserOutcome { user: u, successes: hits.len(), delay: cyclic_max_gap(&hits, l) }
        })
        .collect()
}

fn cyclic_max_gap(sorted: &[u64], l: u64) -> Option<u64> {
    let (first, last) = (*sorted.first()?, *sorted.last()?);
    let inner = sorted.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0);
    Some(inner.max(first + l - last))
}

fn min_adjacent_gap(cw: &Codeword) -> u64 {
    let e = cw.elements();
    if e.len() < 2 {
        return cw.length();
    }
    let inner = e.windows(2).map(|w| w[1] - w[0]).min().unwrap_or(u64::MAX);
    inner.min(e[0] + cw.length() - e[e.len() - 1])
}

/// Running aggregate; merged associatively so the parallel result does not
/// depend on scheduling.
#[derive(Default)]
struct Tally {
    configurations: u64,
    violations: Vec<Violation>,
    /// weight → (min successes, worst delay or `None` once some user had no success)
    per_weight: BTreeMap<usize, (usize, Option<u64>)>,
}

impl Tally {
    fn record(&mut self, code: &Code, active: &[usize], offsets: &[u64], focus: Option<usize>) {
        self.configurations += 1;
        let others = active.len() - 1;
        for o in evaluate(code, active, offsets) {
            if focus.is_some_and(|f| f != o.user) {
                continue;
            }
            let w = code.codewords()[o.user].weight();
            // each other active user can take at most one slot per window
            let required = w.saturating_sub(others);
            if o.successes < required {
                self.violations.push(Violation {
                    active: active.to_vec(),
                    offsets: offsets.to_vec(),
                    user: o.user,
                    successes: o.successes,
                    required,
                });
            }
            let e = self.per_weight.entry(w).or_insert((usize::MAX, Some(0)));
            e.0 = e.0.min(o.successes);
            e.1 = match (e.1, o.delay) {
                (Some(a), Some(b)) => Some(a.max(b)),
                _ => None,
            };
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.configurations += other.configurations;
        self.violations.extend(other.violations);
        for (w, (s, d)) in other.per_weight {
            let e = self.per_weight.entry(w).or_insert((usize::MAX, Some(0)));
            e.0 = e.0.min(s);
            e.1 = match (e.1, d) {
                (Some(a), Some(b)) => Some(a.max(b)),
                _ => None,
            };
        }
        self
    }

    fn into_report(mut self, code: &Code, mode: Mode, w_limit: usize) -> GuaranteeReport {
        self.violations.sort();
        let l = code.length();
        let per_weight = self
            .per_weight
            .into_iter()
            .map(|(w, (min_successes, delay))| {
                let min_gap = code
                    .codewords()
                    .iter()
                    .filter(|c| c.weight() == w)
                    .map(min_adjacent_gap)
                    .min()
                    .unwrap_or(l);
                let required = w.saturating_sub(w_limit - 1);
                // `required` successes spread at least `min_gap` apart
                let bound = l.saturating_sub(required.saturating_sub(1) as u64 * min_gap);
                let stats = WeightStats {
                    min_successes,
                    required_successes: required,
                    worst_delay_observed: delay,
                    worst_delay_bound: bound,
                    min_gap,
                };
                (w, stats)
            })
            .collect();
        GuaranteeReport {
            code_ref: default_ref(code),
            mode,
            w_limit,
            configurations_checked: self.configurations,
            violations: self.violations,
            per_weight,
        }
    }
}

fn default_ref(code: &Code) -> String {
    format!("{}:L={}:n={}", code.provenance().source, code.length(), code.len())
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 0, &mut Vec::new(), &mut out);
    out
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Checks that every active user gets at least `w′ − (k − 1)` successes in
/// every window of `L` slots, where `w′` is its weight and `k ≤ w_limit` the
/// number of active users.
///
/// The code is not required to be conflict-free: on a code that is not, the
/// report lists the configurations that break the guarantee. Exhaustive mode
/// fixes the first active user's offset at 0, which loses nothing because a
/// common shift of all offsets shifts the trace.
pub fn verify_guarantee(code: &Code, w_limit: usize, mode: Mode) -> Result<GuaranteeReport> {
    if w_limit == 0 {
        return Err(CacError::invalid("w_limit must be at least 1"));
    }
    if code.is_empty() {
        return Err(CacError::invalid("the code has no codewords"));
    }
    let l = code.length();
    let n = code.len();
    let kmax = w_limit.min(n);
    let tally = match mode {
        Mode::Exhaustive => {
            let total = (1..=kmax as u64).fold(0u64, |acc, k| {
                acc.saturating_add(binomial(n as u64, k).saturating_mul(l.saturating_pow(k as u32 - 1)))
            });
            if total > MAX_EXHAUSTIVE_CONFIGURATIONS {
                return Err(CacError::Precondition(format!(
                    "exhaustive check needs {total} configurations, limit is {MAX_EXHAUSTIVE_CONFIGURATIONS}"
                )));
            }
            let work: Vec<(Vec<usize>, u64)> = (1..=kmax)
                .flat_map(|k| subsets(n, k))
                .flat_map(|s| {
                    // split on the second user's offset for parallelism
                    let first = if s.len() > 1 { l } else { 1 };
                    (0..first).map(move |t| (s.clone(), t))
                })
                .collect();
            work.par_iter()
                .map(|(active, t1)| {
                    let mut tally = Tally::default();
                    let k = active.len();
                    let mut offsets = vec![0u64; k];
                    if k > 1 {
                        offsets[1] = *t1;
                    }
                    loop {
                        tally.record(code, active, &offsets, None);
                        let mut i = 2;
                        while i < k {
                            offsets[i] += 1;
                            if offsets[i] < l {
                                break;
                            }
                            offsets[i] = 0;
                            i += 1;
                        }
                        if i >= k {
                            break;
                        }
                    }
                    tally
                })
                .reduce(Tally::default, Tally::merge)
        }
        Mode::Sampled { samples, seed } => (0..samples)
            .into_par_iter()
            .map(|i| {
                let mut rng = sample_rng(seed, i);
                let k = rng.gen_range(1..=kmax);
                let mut active = sample(&mut rng, n, k).into_vec();
                active.sort_unstable();
                let offsets: Vec<u64> = (0..k).map(|_| rng.gen_range(0..l)).collect();
                let mut tally = Tally::default();
                tally.record(code, &active, &offsets, None);
                tally
            })
            .reduce(Tally::default, Tally::merge),
    };
    Ok(tally.into_report(code, mode, w_limit))
}

fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Per-weight guarantees of a mixed-weight code when at most `w` users are
/// active, `w` being the base weight.
///
/// For each weight class, `samples` configurations are drawn that contain a
/// user of that class together with up to `w − 1` others; only that user is
/// scored. A user of weight `w′` should see at least `w′ − w + 1` successes
/// per window, and its successes lie at least `min_gap` apart, which bounds
/// the worst delay by `L − (w′ − w)·min_gap`.
pub fn priority_report(code: &Code, w: usize, samples: u64, seed: u64) -> Result<GuaranteeReport> {
    if w == 0 {
        return Err(CacError::invalid("base weight must be at least 1"));
    }
    let l = code.length();
    let n = code.len();
    let classes = code.weights();
    let tally = classes
        .keys()
        .enumerate()
        .map(|(ci, &wc)| {
            let members: Vec<usize> = (0..n).filter(|&i| code.codewords()[i].weight() == wc).collect();
            (0..samples)
                .into_par_iter()
                .map(|i| {
                    let mut rng = sample_rng(seed ^ ((ci as u64 + 1) << 48), i);
                    let focus = members[rng.gen_range(0..members.len())];
                    let others = rng.gen_range(0..=(w - 1).min(n - 1));
                    let mut pool: Vec<usize> = (0..n).filter(|&j| j != focus).collect();
                    let picked = sample(&mut rng, pool.len(), others).into_vec();
                    let mut active: Vec<usize> = picked.into_iter().map(|j| pool[j]).collect();
                    pool.clear();
                    active.push(focus);
                    active.sort_unstable();
                    let offsets: Vec<u64> = (0..active.len()).map(|_| rng.gen_range(0..l)).collect();
                    let mut tally = Tally::default();
                    tally.record(code, &active, &offsets, Some(focus));
                    tally
                })
                .reduce(Tally::default, Tally::merge)
        })
        .fold(Tally::default(), Tally::merge);
    Ok(tally.into_report(code, Mode::Sampled { samples, seed }, w))
}
