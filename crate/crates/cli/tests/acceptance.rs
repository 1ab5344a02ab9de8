//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use cac_core::additive::{classify_exceptional, kneser_check};
use cac_core::channel::{priority_report, verify_guarantee, Mode};
use cac_core::constructions::{
    check_sdr_conditions, check_wp_condition, construct_2w1pr, construct_direct, construct_wpr,
    direct_congruence_classes, extend_to_pr, mixed_w1pr, search_base, wp_congruence_classes, BaseCode,
    DirectParams,
};
use cac_core::numtheory::{is_prime, pow_mod};
use cac_core::optimality::{certify, k_equi_oracle, k_exact_oracle, Certificate, Claim, TheoremTag, DEFAULT_NODE_BUDGET};
use cac_core::{verify_cac, Code, Codeword, Provenance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn sorted(v: impl IntoIterator<Item = u64>) -> Vec<u64> {
    let mut v: Vec<u64> = v.into_iter().collect();
    v.sort_unstable();
    v
}

fn cac(args: &[&str]) -> Result<serde_json::Value, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_cac"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(out.status.success(), "cac {args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())
}

fn json_generators(code: &serde_json::Value) -> Vec<u64> {
    sorted(
        code["equi_generators"]
            .as_object()
            .map(|m| m.values().filter_map(|v| v.as_u64()).collect::<Vec<_>>())
            .unwrap_or_default(),
    )
}

fn verified(code: &Code) -> Result<(), String> {
    ensure!(verify_cac(code).is_ok(), "code of length {} fails verify_cac", code.length());
    Ok(())
}

fn golden_direct() -> Outcome {
    let code = cac(&["construct", "direct", "--p", "37", "--r", "1", "--w", "7", "--d", "2"])?;
    let gens = json_generators(&code);
    ensure!(gens == [1, 7, 10, 16, 34, 46, 49, 70, 100], "r=1 generators {gens:?}");
    let code = cac(&["construct", "direct", "--p", "37", "--r", "2", "--w", "7", "--d", "2"])?;
    let gens = json_generators(&code);
    let a0 = [37, 259, 370, 592, 1258, 1702, 1813, 2590, 3700];
    ensure!(a0.iter().all(|g| gens.contains(g)), "r=2 run misses an a=0 generator");
    Ok(format!("r=1: 9 generators; r=2: {} generators incl. the a=0 list", gens.len()))
}

fn golden_extensions() -> Outcome {
    let base = BaseCode::new(47, 4, vec![1, 4, 11, 19, 20, 21]).map_err(|e| e.to_string())?;
    let code = construct_wpr(&base, 1).map_err(|e| e.to_string())?;
    let gamma = [4, 20, 48, 68, 152, 160];
    let q_hat = [
        1, 9, 17, 21, 25, 37, 49, 53, 61, 65, 81, 89, 97, 101, 121, 145, 149, 153, 157, 165, 169, 173, 177,
    ];
    let expected = sorted(gamma.into_iter().chain(q_hat).chain([141]));
    ensure!(sorted(code.generators()) == expected, "Z_188 generators differ");
    ensure!(code.len() == 30, "Z_188 size {}", code.len());
    verified(&code)?;

    let base = BaseCode::new(37, 4, vec![1, 6, 8, 10, 11, 14]).map_err(|e| e.to_string())?;
    let code = construct_2w1pr(&base, 1).map_err(|e| e.to_string())?;
    let lambda = (0..37).map(|k| 1 + 7 * k);
    let expected = sorted([14, 84, 112, 119, 154, 196].into_iter().chain(lambda));
    ensure!(sorted(code.generators()) == expected, "Z_259 generators differ");
    ensure!(code.len() == 43, "Z_259 size {}", code.len());
    verified(&code)?;
    Ok("Z_188: 30 codewords, Z_259: 43 codewords".into())
}

fn stabilizer_table() -> Outcome {
    let rows: [(&[u64], &[u64], &[u64]); 5] = [
        (&[0, 15, 30, 45], &[0, 15, 30, 45], &[0, 15, 30, 45]),
        (&[0, 12, 24, 36], &[0, 12, 24, 36, 48], &[0, 12, 24, 36, 48]),
        (&[0, 10, 20, 30], &[0, 10, 20, 30, 40, 50], &[0, 10, 20, 30, 40, 50]),
        (&[0, 8, 30, 38], &[0, 8, 22, 30, 38, 52], &[0, 30]),
        (&[0, 8, 16, 24], &[0, 8, 16, 24, 36, 44, 52], &[0]),
    ];
    for (i, (s, d, h)) in rows.iter().enumerate() {
        let cw = Codeword::new(60, s.iter().copied()).map_err(|e| e.to_string())?;
        let report = classify_exceptional(&cw);
        let mut full = report.dstar.clone();
        full.push(0);
        ensure!(sorted(full) == *d, "S_{} difference set", i + 1);
        ensure!(report.stab == *h, "S_{} stabilizer {:?}", i + 1, report.stab);
        ensure!(report.exceptional == (i < 4), "S_{} exceptional flag", i + 1);
    }
    // d(S) is translation invariant, so subsets containing 0 cover every case.
    // |H| dividing w − 1 = 3 or 2w − 1 = 7 rules out being exceptional; a
    // non-exceptional subset may still have |H| = 3, e.g. {0, 1, 20, 21}.
    let (mut scanned, mut exceptional, mut plain_three) = (0u64, 0u64, 0u64);
    for a in 1..60u64 {
        for b in a + 1..60 {
            for c in b + 1..60 {
                let cw = Codeword::new(60, [0, a, b, c]).expect("distinct");
                let report = classify_exceptional(&cw);
                let h = report.stab.len() as u64;
                scanned += 1;
                if report.exceptional {
                    exceptional += 1;
                    ensure!(3 % h != 0 && 7 % h != 0, "exceptional {{0,{a},{b},{c}}} has |H| = {h}");
                    ensure!((2..=6).contains(&h), "exceptional {{0,{a},{b},{c}}} has |H| = {h}");
                } else if h == 3 {
                    plain_three += 1;
                }
            }
        }
    }
    Ok(format!(
        "5 rows match; {scanned} subsets scanned, {exceptional} exceptional, no exceptional one with |H| = 3 \
         ({plain_three} non-exceptional subsets have |H| = 3)"
    ))
}

fn oracle(cert: Certificate, expected: u64, name: &str) -> Result<String, String> {
    ensure!(cert.claim == Claim::KExact, "{name}: oracle did not finish");
    ensure!(cert.value == expected, "{name} = {}, expected {expected}", cert.value);
    cert.check().map_err(|e| e.to_string())?;
    Ok(format!("{name}={expected}"))
}

fn oracle_equalities() -> Outcome {
    let exact = |l, w| k_exact_oracle(l, w, DEFAULT_NODE_BUDGET).map_err(|e| e.to_string());
    let equi = |l, w| k_equi_oracle(l, w, DEFAULT_NODE_BUDGET).map_err(|e| e.to_string());
    let theorem = |t| certify(&t).map(|c| c.value).map_err(|e| e.to_string());
    let cases = [
        (exact(21, 4)?, theorem(TheoremTag::MainDirect { p: 7, w: 4, d: 1, r: 1 })?, "K(21,4)", 3),
        (exact(35, 4)?, theorem(TheoremTag::Main2w1pSmall { p: 5, w: 4 })?, "K(35,4)", 6),
        (exact(25, 3)?, theorem(TheoremTag::Main2w1pr { p: 5, w: 3, r: 1, base: None })?, "K(25,3)", 6),
        (exact(9, 2)?, theorem(TheoremTag::MainPr { p: 3, w: 2, r: 2, base: None })?, "K(9,2)", 4),
        (exact(10, 5)?, 1, "K(10,5)", 1),
        (equi(37, 4)?, theorem(TheoremTag::MainPr { p: 37, w: 4, r: 1, base: None })?, "K^e(37,4)", 6),
        (equi(47, 4)?, 6, "K^e(47,4)", 6),
    ];
    let mut done = Vec::new();
    for (cert, formula, name, expected) in cases {
        ensure!(formula == expected, "{name}: closed form gives {formula}");
        done.push(oracle(cert, expected, name)?);
    }
    Ok(done.join(" "))
}

fn legendre(a: i64, p: u64) -> i64 {
    let a = a.rem_euclid(p as i64) as u64;
    match pow_mod(a, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

fn condition_tables() -> Outcome {
    let mut checked = 0u64;
    for p in (3..10_000u64).filter(|&p| is_prime(p)) {
        for w in 4..=11u64 {
            let direct = legendre(-1, p) == -1
                && (1..=w as i64 - 2).all(|i| legendre(i, p) * legendre(i - w as i64 + 1, p) == -1);
            let table = direct_congruence_classes(w).expect("tabulated").contains(p);
            ensure!(table == direct, "direct table w={w} p={p}: table {table}, Legendre {direct}");
            checked += 1;
        }
        for w in 3..=10u64 {
            let wp = w % p != 0 && (1..w as i64).all(|i| legendre(i, p) * legendre(i - w as i64, p) == -1);
            let table = wp_congruence_classes(w).expect("tabulated").contains(p);
            ensure!(table == wp, "wp table w={w} p={p}: table {table}, Legendre {wp}");
            checked += 1;
        }
    }
    Ok(format!("{checked} (p, w) pairs, zero mismatches"))
}

fn mixed_example() -> Outcome {
    let a = Code::new(23, vec![Codeword::new(23, 0..7).expect("residues")], Provenance::new("example"))
        .map_err(|e| e.to_string())?;
    let code = mixed_w1pr(23, 1, 4, &a).map_err(|e| e.to_string())?;
    verified(&code)?;
    let of_weight = |w: usize| -> BTreeSet<Vec<u64>> {
        code.codewords().iter().filter(|c| c.weight() == w).map(|c| c.elements().to_vec()).collect()
    };
    let set = |rows: &[&[u64]]| -> BTreeSet<Vec<u64>> { rows.iter().map(|r| sorted(r.iter().copied())).collect() };
    ensure!(of_weight(7) == set(&[&[0, 24, 48, 3, 27, 51, 6]]), "T_1 differs");
    let s_prime = set(&[
        &[0, 1, 2],
        &[0, 25, 50],
        &[0, 52, 35],
        &[0, 31, 62],
        &[0, 55, 41],
        &[0, 16, 32],
        &[0, 46, 23],
    ]);
    ensure!(of_weight(3) == s_prime, "weight-3 codewords differ");
    let survivors = set(&[&[0, 49, 29, 9], &[0, 4, 8, 12], &[0, 58, 47, 36], &[0, 13, 26, 39], &[0, 64, 59, 54]]);
    ensure!(of_weight(4) == survivors, "surviving weight-4 codewords differ");
    // G: the Z_23 components of the shortened generators
    let g: BTreeSet<u64> = code
        .codewords()
        .iter()
        .filter(|c| c.weight() == 3)
        .filter_map(|c| c.generator())
        .map(|x| x % 23)
        .collect();
    ensure!(g == BTreeSet::from([0, 1, 2, 6, 8, 9, 16]), "G ∪ {{0}} = {g:?}");
    let counts: Vec<(usize, usize)> = code.weights().into_iter().collect();
    ensure!(counts == [(3, 7), (4, 5), (7, 1)], "weight counts {counts:?}");
    Ok("T_1, G, S'_g, S'_0 and survivors exact; 1×7, 7×3, 5×4".into())
}

fn construction_sweep() -> Outcome {
    const MAX_L: u64 = 5000;
    let primes: Vec<u64> = (3..=103).filter(|&p| is_prime(p)).collect();
    let (mut direct, mut recursive, mut mixed) = (0, 0, 0);
    for &p in &primes {
        for r in 1..=2u32 {
            let q = p.pow(r);
            for w in 3..=11u64 {
                for d in [1u64, 2] {
                    let Ok(params) = DirectParams::new(p, r, w, d) else { continue };
                    if params.length().map_or(true, |l| l > MAX_L) {
                        continue;
                    }
                    let holds = check_sdr_conditions(p, w, d).map(|rep| rep.holds).unwrap_or(false);
                    match construct_direct(&params) {
                        Ok(code) => {
                            ensure!(holds, "direct built p={p} r={r} w={w} d={d} without its conditions");
                            verified(&code)?;
                            ensure!(code.len() as u64 == (q - 1) / (2 * d), "direct size p={p} r={r} w={w} d={d}");
                            direct += 1;
                        }
                        Err(e) => ensure!(!holds, "direct p={p} r={r} w={w} d={d} failed: {e}"),
                    }
                }
            }
            for w in 2..=6u64 {
                if (p - 1) % (2 * w - 2) != 0 {
                    continue;
                }
                let m = (p - 1) / (2 * w - 2);
                let Ok(base) = search_base(p, w as usize, Some(m as usize)) else { continue };
                let mr = (q - 1) / (2 * w - 2);
                if q <= MAX_L {
                    let code = extend_to_pr(&base, r).map_err(|e| e.to_string())?;
                    verified(&code)?;
                    ensure!(code.len() as u64 == mr, "pr size p={p} r={r} w={w}");
                    recursive += 1;
                }
                if w * q <= MAX_L && check_wp_condition(p, w).unwrap_or(false) {
                    let code = construct_wpr(&base, r).map_err(|e| format!("wpr p={p} r={r} w={w}: {e}"))?;
                    verified(&code)?;
                    ensure!(code.len() as u64 == mr + (q - 1) / 2 + 1, "wpr size p={p} r={r} w={w}");
                    recursive += 1;
                }
                if (2 * w - 1) * q <= MAX_L && p > 2 * w - 1 {
                    let code = construct_2w1pr(&base, r).map_err(|e| format!("2w1pr p={p} r={r} w={w}: {e}"))?;
                    verified(&code)?;
                    ensure!(code.len() as u64 == q + mr, "2w1pr size p={p} r={r} w={w}");
                    recursive += 1;
                }
            }
        }
    }
    for p in [23u64, 31, 47] {
        for r in 1..=2u32 {
            let q = p.pow(r);
            for w in 3..=6u64 {
                for w_star in [w - 1, w] {
                    if (w - 1) * q > MAX_L || w_star < 2 {
                        continue;
                    }
                    let cap = (q - 1) / (2 * (w_star - 1));
                    for n in [0, 1, cap.min(3)] {
                        let tag = TheoremTag::MixedW1pr { p, w, r, n, w_star };
                        match certify(&tag) {
                            Ok(cert) => {
                                verified(cert.witness.as_ref().expect("witness"))?;
                                ensure!(cert.value == n + q.div_ceil(2), "{tag:?} size");
                                mixed += 1;
                            }
                            Err(e) if e.exit_code() == 2 => {}
                            Err(e) => return Err(format!("{tag:?}: {e}")),
                        }
                    }
                }
            }
            for w_star in 3..=6u64 {
                for w in 2..w_star {
                    let wpr = TheoremTag::MixedWpr { p, w, w_star, r, base: None };
                    let w2 = TheoremTag::Mixed2w1pr { p, w, w_star, r, base: None };
                    let n = (q - 1) / (2 * w_star - 2);
                    for (tag, l, value) in [(wpr, w * q, q.div_ceil(2) + n), (w2, (2 * w - 1) * q, q + n)] {
                        if l > MAX_L {
                            continue;
                        }
                        match certify(&tag) {
                            Ok(cert) => {
                                verified(cert.witness.as_ref().expect("witness"))?;
                                ensure!(cert.value == value && cert.length == l, "{tag:?} size");
                                mixed += 1;
                            }
                            Err(e) if e.exit_code() == 2 => {}
                            Err(e) => return Err(format!("{tag:?}: {e}")),
                        }
                    }
                }
            }
        }
    }
    ensure!(direct > 0 && recursive > 0 && mixed > 0, "empty sweep: {direct}/{recursive}/{mixed}");
    Ok(format!("{direct} direct, {recursive} recursive, {mixed} mixed codes verified"))
}

fn channel_guarantee() -> Outcome {
    let witness = k_exact_oracle(21, 4, DEFAULT_NODE_BUDGET)
        .map_err(|e| e.to_string())?
        .witness
        .expect("oracle witness");
    let report = verify_guarantee(&witness, 4, Mode::Exhaustive).map_err(|e| e.to_string())?;
    ensure!(report.violations.is_empty(), "K(21,4) witness: {} violations", report.violations.len());
    ensure!(report.per_weight[&4].min_successes >= 1, "K(21,4) witness: a user had no success");

    let a = Code::new(23, vec![Codeword::new(23, 0..7).expect("residues")], Provenance::new("example"))
        .map_err(|e| e.to_string())?;
    let code = mixed_w1pr(23, 1, 4, &a).map_err(|e| e.to_string())?;
    let sampled = verify_guarantee(&code, 4, Mode::Sampled { samples: 100_000, seed: 2024 }).map_err(|e| e.to_string())?;
    ensure!(sampled.violations.is_empty(), "mixed code: {} violations", sampled.violations.len());
    let prio = priority_report(&code, 4, 100_000, 2024).map_err(|e| e.to_string())?;
    ensure!(prio.violations.is_empty(), "mixed priority: {} violations", prio.violations.len());
    let seven = &prio.per_weight[&7];
    ensure!(seven.min_successes >= 4, "weight-7 user got {} successes", seven.min_successes);
    let delay = seven.worst_delay_observed.ok_or("weight-7 user starved")?;
    ensure!(delay <= 60, "weight-7 worst delay {delay}");
    Ok(format!(
        "{} exhaustive configs; mixed: {} + {} sampled, weight-7 min {} successes, worst delay {delay}",
        report.configurations_checked, sampled.configurations_checked, prio.configurations_checked, seven.min_successes
    ))
}

fn kneser_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let random_set = |rng: &mut ChaCha8Rng, l: u64, max: usize| -> Vec<u64> {
        let k = rng.gen_range(1..=max.min(l as usize));
        sorted((0..k).map(|_| rng.gen_range(0..l)).collect::<BTreeSet<_>>())
    };
    for _ in 0..100_000 {
        let l = rng.gen_range(1..=120u64);
        let a = random_set(&mut rng, l, 12);
        let b = random_set(&mut rng, l, 12);
        ensure!(kneser_check(&a, &b, l), "Kneser fails for {a:?} + {b:?} in Z_{l}");
    }
    // exceptional sets are built inside a union of cosets of a subgroup
    let mut exceptional = 0;
    for _ in 0..100_000 {
        let l = rng.gen_range(4..=120u64);
        let divisors: Vec<u64> = (2..=l).filter(|h| l % h == 0).collect();
        let h = divisors[rng.gen_range(0..divisors.len())];
        let step = l / h;
        let cosets = rng.gen_range(1..=2u64);
        let w = rng.gen_range(2..=(h * cosets).min(10) as usize);
        let pool: Vec<u64> = (0..cosets)
            .flat_map(|c| (0..h).map(move |j| (c + j * step) % l))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let w = w.min(pool.len());
        let mut s = BTreeSet::new();
        while s.len() < w {
            s.insert(pool[rng.gen_range(0..pool.len())]);
        }
        let cw = Codeword::new(l, s).expect("residues");
        let report = classify_exceptional(&cw);
        if report.exceptional {
            exceptional += 1;
            let hs = report.stab.len();
            ensure!((2..=2 * w - 2).contains(&hs), "|H| = {hs} for exceptional {:?} in Z_{l}", cw.elements());
        }
    }
    ensure!(exceptional > 1000, "only {exceptional} exceptional samples");
    Ok(format!("100000 Kneser pairs; {exceptional} exceptional sets within bounds"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("golden direct generator lists", Duration::from_secs(1), golden_direct),
        ("golden extension outputs", Duration::from_secs(1), golden_extensions),
        ("stabilizer table", Duration::from_secs(60), stabilizer_table),
        ("oracle vs theorem", Duration::from_secs(300), oracle_equalities),
        ("condition tables", Duration::from_secs(60), condition_tables),
        ("mixed-weight golden", Duration::from_secs(1), mixed_example),
        ("construction sweep", Duration::from_secs(600), construction_sweep),
        ("channel guarantee", Duration::from_secs(600), channel_guarantee),
        ("Kneser property suite", Duration::from_secs(60), kneser_suite),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > limit => Err(format!("{detail}; took {took:.2?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({took:.2?}): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({took:.2?}): {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
