use super::{checked_pow, is_prime};
use crate::error::{CacError, Result};

/// Position and value of the least significant nonzero `p`-ary digit of a
/// nonzero residue `c` of `Z_{p^r}`.
///
/// `layer = t` means `p^t | c` and `p^{t+1} ∤ c`; `digit` is `c_t ∈ 1..p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PAdicProfile {
    pub c: u64,
    pub p: u64,
    pub r: u32,
    pub layer: u32,
    pub digit: u64,
}

pub fn p_adic_profile(c: u64, p: u64, r: u32) -> Result<PAdicProfile> {
    if !is_prime(p) {
        return Err(CacError::precondition(format!("{p} is not prime")));
    }
    if r == 0 {
        return Err(CacError::invalid("exponent r must be at least 1"));
    }
    let q = checked_pow(p, r)?;
    if c == 0 || c >= q {
        return Err(CacError::invalid(format!("{c} is not a nonzero residue mod {q}")));
    }
    let mut rest = c;
    let mut layer = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        layer += 1;
    }
    Ok(PAdicProfile {
        c,
        p,
        r,
        layer,
        digit: rest % p,
    })
}

/// All nonzero residues of `Z_{p^r}` whose least significant nonzero digit
/// lies in `digits`, increasing. Has `|digits|·(p^r − 1)/(p − 1)` elements.
pub fn lift_set(digits: &[u64], p: u64, r: u32) -> Result<Vec<u64>> {
    if !is_prime(p) {
        return Err(CacError::precondition(format!("{p} is not prime")));
    }
    if r == 0 {
        return Err(CacError::invalid("exponent r must be at least 1"));
    }
    if digits.is_empty() {
        return Err(CacError::invalid("digit set is empty"));
    }
    if let Some(bad) = digits.iter().find(|&&a| a == 0 || a >= p) {
        return Err(CacError::invalid(format!("{bad} is not in Z_{p}^*")));
    }
    let mut digits = digits.to_vec();
    digits.sort_unstable();
    digits.dedup();
    let q = checked_pow(p, r)?;
    let mut out = Vec::new();
    let mut pt = 1u64;
    for _ in 0..r {
        let high = q / (pt * p); // number of choices for the digits above position t
        for &a in &digits {
            for h in 0..high {
                out.push(a * pt + h * pt * p);
            }
        }
        pt *= p;
    }
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::CosetSystem;

    #[test]
    fn profile_examples() {
        let a = p_adic_profile(5, 5, 2).unwrap();
        assert_eq!((a.layer, a.digit), (1, 1));
        let b = p_adic_profile(6, 5, 2).unwrap();
        assert_eq!((b.layer, b.digit), (0, 1));
        // 3 · 10 = 30 ≡ 5 (mod 25): layer 1, digit 3 · 2 mod 5 = 1
        let c = p_adic_profile(30 % 25, 5, 2).unwrap();
        assert_eq!((c.layer, c.digit), (1, 1));
        assert!(p_adic_profile(0, 5, 2).is_err());
        assert!(p_adic_profile(25, 5, 2).is_err());
    }

    #[test]
    fn layer_multiplication_law_exhaustive() {
        for (p, r) in [(3u64, 1u32), (3, 2), (3, 5), (5, 2), (5, 5), (7, 3), (11, 3), (13, 2)] {
            let q = p.pow(r);
            if q > 3125 {
                continue;
            }
            for j in (1..q).filter(|j| j % p != 0) {
                let j0 = j % p;
                for c in 1..q {
                    let pc = p_adic_profile(c, p, r).unwrap();
                    let jc = p_adic_profile(j * c % q, p, r).unwrap();
                    assert_eq!(jc.layer, pc.layer);
                    assert_eq!(jc.digit, j0 * pc.digit % p);
                }
            }
        }
    }

    #[test]
    fn layer_sizes_partition() {
        let (p, r) = (5u64, 4u32);
        let q = p.pow(r);
        let mut counts = vec![0u64; r as usize];
        for c in 1..q {
            counts[p_adic_profile(c, p, r).unwrap().layer as usize] += 1;
        }
        for (t, &n) in counts.iter().enumerate() {
            assert_eq!(n, (p - 1) * p.pow(r - t as u32 - 1));
        }
    }

    #[test]
    fn lift_examples() {
        assert_eq!(lift_set(&[2, 3], 7, 1).unwrap(), vec![2, 3]);
        assert_eq!(lift_set(&[1], 5, 2).unwrap(), vec![1, 5, 6, 11, 16, 21]);
        assert!(lift_set(&[], 5, 2).is_err());
        assert!(lift_set(&[0, 1], 5, 2).is_err());
    }

    #[test]
    fn lift_matches_enumeration() {
        let h = CosetSystem::new(37, 4).unwrap().class(0);
        let lifted = lift_set(&h, 37, 2).unwrap();
        let brute: Vec<u64> = (1..37 * 37)
            .filter(|&c| h.contains(&p_adic_profile(c, 37, 2).unwrap().digit))
            .collect();
        assert_eq!(lifted, brute);
        assert_eq!(lifted.len(), 342);
        for (p, r, a) in [(5u64, 3u32, vec![1u64, 4]), (7, 2, vec![3]), (3, 4, vec![1, 2])] {
            let got = lift_set(&a, p, r).unwrap();
            assert_eq!(got.len() as u64, a.len() as u64 * (p.pow(r) - 1) / (p - 1));
        }
    }
}
