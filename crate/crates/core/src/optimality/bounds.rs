use crate::additive::classify_exceptional;
use crate::code::Codeword;
use crate::error::{CacError, Result};
use crate::numtheory::prime_factors;

/// `⌊(L−1)/(2w−2)⌋`: the counting bound when no codeword is exceptional.
pub fn upper_nonexceptional(l: u64, w: u64) -> Result<u64> {
    if w < 2 || l <= w {
        return Err(CacError::invalid(format!("need L > w ≥ 2, got L = {l}, w = {w}")));
    }
    Ok((l - 1) / (2 * w - 2))
}

/// The counting bound for lengths whose prime factors are all at least
/// `2w − 1`; `None` when some prime factor is smaller.
pub fn upper_prime_factors(l: u64, w: u64) -> Result<Option<u64>> {
    let bound = upper_nonexceptional(l, w)?;
    let smallest = prime_factors(l).into_iter().min().unwrap_or(l);
    Ok((smallest >= 2 * w - 1).then_some(bound))
}

/// Whether some `w`-subset of `Z_L` is exceptional. Enumerates subsets
/// containing 0, so only meant for small `L`.
pub fn has_exceptional_subset(l: u64, w: usize) -> bool {
    fn rec(l: u64, w: usize, next: u64, cur: &mut Vec<u64>) -> bool {
        if cur.len() == w {
            let cw = Codeword::new(l, cur.iter().copied()).expect("distinct residues");
            return classify_exceptional(&cw).exceptional;
        }
        for x in next..l {
            cur.push(x);
            if rec(l, w, x + 1, cur) {
                return true;
            }
            cur.pop();
        }
        false
    }
    if w == 0 || w as u64 > l {
        return false;
    }
    rec(l, w, 1, &mut vec![0])
}
