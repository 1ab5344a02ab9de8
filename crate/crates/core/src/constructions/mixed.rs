//! Mixed-weight rebuilds of the direct and recursive constructions.

use std::collections::BTreeSet;

use super::{check_sdr_conditions, check_wp_condition, ensure, BaseCode, PairCodeBuilder};
use crate::additive::classify_exceptional;
use crate::code::{verify_cac, Code, Provenance};
use crate::error::{CacError, Result};
use crate::numtheory::{checked_pow, inv_mod, is_prime, lift_set, p_adic_profile, quadratic_residues};

/// Mixed-weight code of length `(w−1)·p^r` built from the `d = 1` direct code
/// and a code `A` of length `p^r`.
///
/// Each equi-difference codeword `{0, a, …, (w*−1)a}` of `A` becomes
/// `T_a = {(0, k·a)}`; the `w* − 1` direct codewords whose last difference
/// `(0, ±(w−1)g)` it absorbs are truncated to weight `w − 1`, and
/// `{(j, 0) : 0 ≤ j ≤ w−2}` is added. Codewords of `A` that are not
/// equi-difference are ignored.
pub fn mixed_w1pr(p: u64, r: u32, w: u64, base_a: &Code) -> Result<Code> {
    ensure(is_prime(p) && p > 2, || format!("{p} is not an odd prime"))?;
    ensure(r >= 1, || "exponent r must be at least 1".into())?;
    ensure(w >= 3, || format!("weight {w} is below 3"))?;
    ensure(p >= w, || format!("p = {p} is smaller than w = {w}"))?;
    let report = check_sdr_conditions(p, w, 1)?;
    if !report.holds {
        return Err(CacError::Precondition(format!(
            "p = {p}, w = {w}: {} fails",
            report.failures().join(", ")
        )));
    }
    let q = checked_pow(p, r)?;
    if base_a.length() != q {
        return Err(CacError::invalid(format!(
            "base code has length {}, expected p^r = {q}",
            base_a.length()
        )));
    }
    if let crate::code::Verdict::Conflict(c) = verify_cac(base_a) {
        return Err(CacError::invalid(format!(
            "base code is not conflict-avoiding: codewords {} and {} share {}",
            c.first, c.second, c.difference
        )));
    }

    let residues: BTreeSet<u64> = quadratic_residues(p)?.into_iter().collect();
    let in_sq = |c: u64| -> Result<bool> { Ok(residues.contains(&p_adic_profile(c, p, r)?.digit)) };
    let inv = inv_mod(w - 1, q).expect("w − 1 < p is a unit");

    let mut designated = Vec::new();
    for (index, cw) in base_a.codewords().iter().enumerate() {
        if cw.weight() < 2 {
            continue;
        }
        let Some(a) = cw.equi_generator() else { continue };
        if classify_exceptional(cw).exceptional {
            return Err(CacError::ExceptionalBase { index, generator: a });
        }
        designated.push((a, cw.weight()));
    }

    let mut absorbed = BTreeSet::new();
    for &(a, ws) in &designated {
        for k in 1..ws as u64 {
            let x = ((k as u128 * a as u128 % q as u128) * inv as u128 % q as u128) as u64;
            let y = (q - x) % q;
            let g = match (in_sq(x)?, in_sq(y)?) {
                (true, false) => x,
                (false, true) => y,
                _ => {
                    return Err(CacError::Precondition(format!(
                        "exactly one of ±{k}·{a}·(w−1)^(-1) should lie in the residue lift"
                    )))
                }
            };
            if !absorbed.insert(g) {
                return Err(CacError::invalid(format!(
                    "base codewords share the difference {}",
                    k * a % q
                )));
            }
        }
    }

    let weights: Vec<u64> = designated.iter().map(|&(_, ws)| ws as u64).collect();
    let prov = Provenance::new("mixed-w1pr")
        .param("p", p)
        .param("r", r)
        .param("w", w)
        .param("n", designated.len() as u64)
        .param("base_weights", weights);
    let mut b = PairCodeBuilder::new(w - 1, q, prov)?;
    for &(a, ws) in &designated {
        b.push(0, a, ws)?;
    }
    for g in lift_set(&residues.iter().copied().collect::<Vec<_>>(), p, r)? {
        let weight = if absorbed.contains(&g) { w - 1 } else { w };
        b.push(1, g, weight as usize)?;
    }
    b.push(1, 0, (w - 1) as usize)?;
    b.finish()
}

fn check_fiber_lift(base: &BaseCode, r: u32) -> Result<()> {
    let (p, ws) = (base.p(), base.w() as u64);
    ensure(r == 1 || base.m() == 0 || p >= 2 * ws - 1, || {
        format!("lifting a weight-{ws} base to r = {r} needs p ≥ {}", 2 * ws - 1)
    })
}

fn lifted(base: &BaseCode, r: u32) -> Result<Vec<u64>> {
    if base.m() == 0 {
        return Ok(Vec::new());
    }
    lift_set(base.generators(), base.p(), r)
}

/// Length `w·p^r`: the `w·p^r` construction with the `(0, ·)` fiber carrying
/// weight-`w*` codewords from a base in `CAC^e(p, w*)`.
pub fn mixed_wpr(base: &BaseCode, r: u32, w: u64) -> Result<Code> {
    let p = base.p();
    ensure(r >= 1, || "exponent r must be at least 1".into())?;
    ensure(w >= 2, || format!("weight {w} is below 2"))?;
    ensure(p >= 2 * w - 1, || format!("p = {p} is smaller than 2w − 1 = {}", 2 * w - 1))?;
    check_fiber_lift(base, r)?;
    if !check_wp_condition(p, w)? {
        return Err(CacError::Precondition(format!(
            "(i/p)((i−w)/p) = −1 fails for some 1 ≤ i < w at p = {p}, w = {w}"
        )));
    }
    let q = checked_pow(p, r)?;
    let prov = Provenance::new("mixed-wpr")
        .param("p", p)
        .param("r", r)
        .param("w", w)
        .param("w_star", base.w() as u64)
        .param("m", base.m() as u64);
    let mut b = PairCodeBuilder::new(w, q, prov)?;
    for g in lifted(base, r)? {
        b.push(0, g, base.w())?;
    }
    for g in lift_set(&quadratic_residues(p)?, p, r)? {
        b.push(1, g, w as usize)?;
    }
    b.push(1, 0, w as usize)?;
    b.finish()
}

/// Length `(2w−1)·p^r`: the `(2w−1)·p^r` construction with the `(0, ·)` fiber
/// carrying weight-`w*` codewords.
pub fn mixed_2w1pr(base: &BaseCode, r: u32, w: u64) -> Result<Code> {
    let p = base.p();
    ensure(r >= 1, || "exponent r must be at least 1".into())?;
    ensure(w >= 2, || format!("weight {w} is below 2"))?;
    ensure(p > 2 * w - 1, || format!("p = {p} is not larger than 2w − 1 = {}", 2 * w - 1))?;
    check_fiber_lift(base, r)?;
    let q = checked_pow(p, r)?;
    let prov = Provenance::new("mixed-2w1pr")
        .param("p", p)
        .param("r", r)
        .param("w", w)
        .param("w_star", base.w() as u64)
        .param("m", base.m() as u64);
    let mut b = PairCodeBuilder::new(2 * w - 1, q, prov)?;
    for g in lifted(base, r)? {
        b.push(0, g, base.w())?;
    }
    for g in 0..q {
        b.push(1, g, w as usize)?;
    }
    b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::Codeword;
    use crate::constructions::{construct_direct, DirectParams};

    fn base_a_23() -> Code {
        let a1 = Codeword::new(23, 0..7).unwrap();
        Code::new(23, vec![a1], Provenance::new("manual")).unwrap()
    }

    fn sets(code: &Code, w: usize) -> Vec<Vec<u64>> {
        code.codewords()
            .iter()
            .filter(|c| c.weight() == w)
            .map(|c| c.elements().to_vec())
            .collect()
    }

    fn sorted(v: &[u64]) -> Vec<u64> {
        let mut v = v.to_vec();
        v.sort_unstable();
        v
    }

    #[test]
    fn example_p23_w4_wstar7() {
        let code = mixed_w1pr(23, 1, 4, &base_a_23()).unwrap();
        assert!(verify_cac(&code).is_ok());
        assert_eq!(code.length(), 69);
        assert_eq!(code.weights().into_iter().collect::<Vec<_>>(), vec![(3, 7), (4, 5), (7, 1)]);
        assert_eq!(sets(&code, 7), vec![sorted(&[0, 24, 48, 3, 27, 51, 6])]);

        let mut threes = sets(&code, 3);
        threes.sort();
        let mut expected: Vec<Vec<u64>> = [
            [0, 1, 2],
            [0, 25, 50],
            [0, 52, 35],
            [0, 31, 62],
            [0, 55, 41],
            [0, 16, 32],
            [0, 46, 23],
        ]
        .iter()
        .map(|s| sorted(s))
        .collect();
        expected.sort();
        assert_eq!(threes, expected);

        // surviving weight-4 codewords are S_3, S_4, S_12, S_13, S_18 of the direct code
        let direct = construct_direct(&DirectParams::new(23, 1, 4, 1).unwrap()).unwrap();
        let mut fours = sets(&code, 4);
        fours.sort();
        let mut kept: Vec<Vec<u64>> = direct
            .codewords()
            .iter()
            .filter(|c| {
                let g = c.generator().unwrap();
                [3, 4, 12, 13, 18].contains(&direct.provenance().pairs[&g][1])
            })
            .map(|c| c.elements().to_vec())
            .collect();
        kept.sort();
        assert_eq!(fours, kept);
        assert_eq!(fours.len(), 5);
    }

    #[test]
    fn absorbed_generators_match() {
        let code = mixed_w1pr(23, 1, 4, &base_a_23()).unwrap();
        let mut g: Vec<u64> = code
            .codewords()
            .iter()
            .filter(|c| c.weight() == 3)
            .map(|c| code.provenance().pairs[&c.generator().unwrap()][1])
            .filter(|&x| x != 0)
            .collect();
        g.sort_unstable();
        assert_eq!(g, vec![1, 2, 6, 8, 9, 16]);
    }

    #[test]
    fn empty_base_adds_only_the_fiber_codeword() {
        let empty = Code::new(23, vec![], Provenance::new("manual")).unwrap();
        let code = mixed_w1pr(23, 1, 4, &empty).unwrap();
        assert_eq!(code.len(), 12);
        assert_eq!(code.count_of_weight(3), 1);
        assert!(verify_cac(&code).is_ok());
    }

    #[test]
    fn exceptional_base_is_refused() {
        // {0, 5, 10, 15, 20} in Z_25 has d* = {5, 10, 15, 20}
        let a = Codeword::new(25, [0, 5, 10, 15, 20]).unwrap();
        let base = Code::new(25, vec![a], Provenance::new("manual")).unwrap();
        // (−1/5) = 1, so the conditions are rejected before the base is inspected
        let err = mixed_w1pr(5, 2, 4, &base).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let a = Codeword::new(49, [0, 7, 14, 21, 28, 35, 42]).unwrap();
        let base = Code::new(49, vec![a], Provenance::new("manual")).unwrap();
        assert!(matches!(
            mixed_w1pr(7, 2, 4, &base),
            Err(CacError::ExceptionalBase { index: 0, generator: 7 })
        ));
    }

    #[test]
    fn mixed_2w1pr_example() {
        let base = BaseCode::new(37, 4, vec![1, 6, 8, 10, 11, 14]).unwrap();
        let code = mixed_2w1pr(&base, 1, 3).unwrap();
        assert_eq!(code.length(), 185);
        assert_eq!(code.count_of_weight(3), 37);
        assert_eq!(code.count_of_weight(4), 6);
        assert!(verify_cac(&code).is_ok());
    }

    #[test]
    fn mixed_wpr_sizes() {
        let empty = BaseCode::new(47, 4, vec![]).unwrap();
        let code = mixed_wpr(&empty, 1, 4).unwrap();
        assert_eq!(code.len(), 24);
        let base = BaseCode::new(47, 5, vec![1]).unwrap();
        let code = mixed_wpr(&base, 2, 4).unwrap();
        assert_eq!(code.count_of_weight(4), (47 * 47 + 1) / 2);
        assert_eq!(code.count_of_weight(5), 48);
        assert!(verify_cac(&code).is_ok());
    }
}
