use cac_core::channel::{priority_report, simulate, verify_guarantee, Mode, SlotOutcome, UserAssignment};
use cac_core::constructions::{construct_direct, mixed_w1pr, search_base, DirectParams};
use cac_core::{Code, Codeword, Provenance};
use proptest::prelude::*;

fn assign(code: &Code, offsets: &[u64]) -> Vec<UserAssignment> {
    code.codewords()
        .iter()
        .zip(offsets)
        .enumerate()
        .map(|(i, (c, &t))| UserAssignment::new(i, c.clone(), t, true))
        .collect()
}

#[test]
fn pairs_collide_at_most_once_per_window() {
    let code = search_base(13, 3, None).unwrap().to_code().unwrap();
    let l = code.length() as usize;
    for i in 0..code.len() {
        for j in i + 1..code.len() {
            for ti in 0..l as u64 {
                for tj in 0..l as u64 {
                    let users = [
                        UserAssignment::new(i, code.codewords()[i].clone(), ti, true),
                        UserAssignment::new(j, code.codewords()[j].clone(), tj, true),
                    ];
                    let trace = simulate(&users, 2 * l).unwrap();
                    for start in 0..l {
                        assert!(trace.collisions_in(start, l) <= 1);
                    }
                }
            }
        }
    }
}

#[test]
fn mixed_example_priorities() {
    let a = Code::new(23, vec![Codeword::new(23, 0..7).unwrap()], Provenance::new("manual")).unwrap();
    let code = mixed_w1pr(23, 1, 4, &a).unwrap();
    let report = priority_report(&code, 4, 2000, 11).unwrap();
    assert!(report.violations.is_empty());
    let seven = &report.per_weight[&7];
    assert!(seven.min_successes >= 4);
    assert_eq!(seven.required_successes, 4);
    assert!(seven.min_gap >= 3);
    assert!(seven.worst_delay_observed.unwrap() <= 60);
    assert!(report.per_weight[&3].min_successes >= 1);
    assert_eq!(report, priority_report(&code, 4, 2000, 11).unwrap());
}

#[test]
fn exhaustive_direct_codes() {
    for p in [7u64, 11] {
        let code = construct_direct(&DirectParams::new(p, 1, 3, 1).unwrap()).unwrap();
        let report = verify_guarantee(&code, 3, Mode::Exhaustive).unwrap();
        assert!(report.violations.is_empty(), "p={p}");
    }
    let single = Code::new(9, vec![Codeword::new(9, [0, 1, 5]).unwrap()], Provenance::new("manual")).unwrap();
    let report = verify_guarantee(&single, 1, Mode::Exhaustive).unwrap();
    assert_eq!((report.configurations_checked, report.violations.len()), (1, 0));
}

proptest! {
    #[test]
    fn shift_equivariance(offsets in proptest::collection::vec(0u64..37, 6), c in 0u64..37) {
        let code = search_base(37, 4, None).unwrap().to_code().unwrap();
        let l = 37usize;
        let base = simulate(&assign(&code, &offsets), 2 * l).unwrap();
        let shifted: Vec<u64> = offsets.iter().map(|t| t + c).collect();
        let moved = simulate(&assign(&code, &shifted), 2 * l).unwrap();
        for t in 0..l {
            prop_assert_eq!(&moved.slots[t + c as usize], &base.slots[t]);
        }
    }

    #[test]
    fn success_lower_bound(offsets in proptest::collection::vec(0u64..111, 4), pick in proptest::collection::btree_set(0usize..9, 1..=7)) {
        let code = construct_direct(&DirectParams::new(37, 1, 7, 2).unwrap()).unwrap();
        let users: Vec<UserAssignment> = pick
            .iter()
            .zip(offsets.iter().cycle())
            .map(|(&i, &t)| UserAssignment::new(i, code.codewords()[i].clone(), t, true))
            .collect();
        let trace = simulate(&users, 222).unwrap();
        for u in &pick {
            for start in 0..111 {
                prop_assert!(trace.successes_in(*u, start, 111) >= 7 - (pick.len() - 1));
            }
        }
        for s in &trace.slots {
            if let SlotOutcome::Collision(v) = s {
                prop_assert!(v.len() >= 2);
            }
        }
    }
}
