use std::collections::HashSet;

use tencusps::code_search::builtin;
use tencusps::gf3_linear::{membership, TernaryCode, TernaryWord, X_WIDTH};
use tencusps::separability_solver::{
    printed_c1_witness, solve, t_bound_audit, verify_witness, Component, SepSystem, SepWitness,
};

type Key = (i64, i64, Vec<(u32, i64, i64)>);

/// Multisets of (α, β) with α, β ∈ 0..=3, α + β ≥ 1, summing to (sa, sb).
fn type_multisets(sa: i64, sb: i64) -> Vec<Vec<(i64, i64)>> {
    let types: Vec<(i64, i64)> =
        (0..=3).flat_map(|a| (0..=3).map(move |b| (a, b))).filter(|&(a, b)| a + b >= 1).collect();
    let mut out = Vec::new();
    fn rec(types: &[(i64, i64)], from: usize, sa: i64, sb: i64, cur: &mut Vec<(i64, i64)>, out: &mut Vec<Vec<(i64, i64)>>) {
        if sa == 0 && sb == 0 {
            out.push(cur.clone());
            return;
        }
        for i in from..types.len() {
            let (a, b) = types[i];
            if a <= sa && b <= sb {
                cur.push((a, b));
                rec(types, i, sa - a, sb - b, cur, out);
                cur.pop();
            }
        }
    }
    rec(&types, 0, sa, sb, &mut Vec::new(), &mut out);
    out
}

fn master_ok(alpha_e: i64, beta_f: i64, comps: &[(TernaryWord, i64, i64)]) -> bool {
    let mut support = [false; X_WIDTH];
    let mut s = 0i64;
    for (w, a, b) in comps {
        for (i, v) in w.x().iter().enumerate() {
            support[i] |= *v != 0;
        }
        s += a * b - w.wt() as i64;
    }
    let covered = support.iter().filter(|&&v| v).count() as i64;
    3 * (comps.len() as i64 + 2) + 3 * alpha_e + 3 * beta_f + s >= 3 * (10 - covered)
}

/// Every witness, found by choosing words type by type and closing the
/// last component through a membership test.
fn oracle_witnesses(code: &TernaryCode) -> HashSet<Key> {
    let words: Vec<TernaryWord> = code.codewords().collect();
    let mut found = HashSet::new();
    for alpha_e in [0, 3] {
        for beta_f in [0, 3] {
            for types in type_multisets(3 - alpha_e, 3 - beta_f) {
                let pools: Vec<Vec<TernaryWord>> = types
                    .iter()
                    .map(|&(a, b)| {
                        words
                            .iter()
                            .copied()
                            .filter(|w| {
                                w.tail()[0] as i64 == a % 3
                                    && w.tail()[1] as i64 == b % 3
                                    && a * b - w.wt() as i64 >= -3
                            })
                            .collect()
                    })
                    .collect();
                let mut chosen = Vec::new();
                pick(code, alpha_e, beta_f, &types, &pools, &mut chosen, &mut found);
            }
        }
    }
    found
}

fn pick(
    code: &TernaryCode,
    alpha_e: i64,
    beta_f: i64,
    types: &[(i64, i64)],
    pools: &[Vec<TernaryWord>],
    chosen: &mut Vec<TernaryWord>,
    found: &mut HashSet<Key>,
) {
    let k = chosen.len();
    if k + 1 == types.len() {
        let (a, b) = types[k];
        let mut w = [0u8; X_WIDTH + 2];
        for c in chosen.iter() {
            for i in 0..X_WIDTH {
                w[i] = (w[i] + c.get(i)) % 3;
            }
        }
        for v in w.iter_mut().take(X_WIDTH) {
            *v = (3 - *v) % 3;
        }
        w[X_WIDTH] = (a % 3) as u8;
        w[X_WIDTH + 1] = (b % 3) as u8;
        let last = TernaryWord::new(&w).unwrap();
        if !membership(code, &last).unwrap() || a * b - (last.wt() as i64) < -3 {
            return;
        }
        let mut comps: Vec<(TernaryWord, i64, i64)> =
            chosen.iter().zip(types).map(|(w, &(a, b))| (*w, a, b)).collect();
        comps.push((last, a, b));
        if master_ok(alpha_e, beta_f, &comps) {
            let mut key: Vec<(u32, i64, i64)> = comps.iter().map(|(w, a, b)| (w.index(), *a, *b)).collect();
            key.sort_unstable();
            found.insert((alpha_e, beta_f, key));
        }
        return;
    }
    if types.is_empty() {
        return;
    }
    // within a run of equal types take words in nondecreasing pool order
    let lower = if k > 0 && types[k] == types[k - 1] {
        pools[k].iter().position(|w| *w == chosen[k - 1]).unwrap()
    } else {
        0
    };
    for w in &pools[k][lower..] {
        chosen.push(*w);
        pick(code, alpha_e, beta_f, types, pools, chosen, found);
        chosen.pop();
    }
}

fn key_of(w: &SepWitness) -> Key {
    let mut key: Vec<(u32, i64, i64)> = w.components.iter().map(|c| (c.word.index(), c.alpha, c.beta)).collect();
    key.sort_unstable();
    (w.alpha_e, w.beta_f, key)
}

fn system(name: &str) -> SepSystem {
    SepSystem::new(builtin(name).unwrap()).unwrap()
}

#[test]
fn oracle_agrees_on_feasibility_for_all_tables() {
    for name in ["C1", "C2", "C3", "C4", "C5", "C6", "C7"] {
        let sys = system(name);
        let oracle = oracle_witnesses(&sys.code);
        let out = solve(&sys);
        assert_eq!(out.feasible(), !oracle.is_empty(), "{name}");
        if let Some(w) = &out.witness {
            assert!(verify_witness(&sys, w).ok);
            assert!(oracle.contains(&key_of(w)), "{name}: solver witness not in oracle set");
        }
    }
}

#[test]
fn audit_counts_match_oracle() {
    // frozen from the oracle: C1 has 10 witnesses, C2 exactly one
    for (name, expected) in [("C1", 10u64), ("C2", 1)] {
        let sys = system(name);
        let oracle = oracle_witnesses(&sys.code);
        assert_eq!(oracle.len() as u64, expected, "{name}");
        let audit = t_bound_audit(&sys);
        let total: u64 = audit.witnesses_by_t.iter().map(|&(_, n)| n).sum();
        assert_eq!(total, expected, "{name}");
        let max_t = oracle.iter().map(|(_, _, k)| k.len()).max();
        assert_eq!(audit.max_feasible_t, max_t);
    }
}

#[test]
fn printed_witness_lies_in_c2_as_well() {
    let w = printed_c1_witness();
    assert!(verify_witness(&system("C2"), &w).ok);
    let oracle = oracle_witnesses(&builtin("C2").unwrap());
    assert_eq!(oracle.into_iter().collect::<Vec<_>>(), vec![key_of(&w)]);
}

#[test]
fn witness_rows_round_trip() {
    let w = printed_c1_witness();
    assert_eq!(SepWitness::from_rows(&w.to_rows()).unwrap(), w);
    assert_eq!(w.t(), 5);
}

#[test]
fn tampered_witness_is_rejected() {
    let sys = system("C1");
    let mut w = printed_c1_witness();
    w.components[0].alpha += 3;
    let r = verify_witness(&sys, &w);
    assert!(!r.ok);
    assert!(r.checks.iter().any(|c| c.name == "sum_alpha" && !c.pass));

    let mut w = printed_c1_witness();
    let x = w.components[0].word;
    let mut flipped = [0u8; X_WIDTH + 2];
    flipped.copy_from_slice(x.as_slice());
    flipped[0] = (flipped[0] + 1) % 3;
    w.components[0] = Component { word: TernaryWord::new(&flipped).unwrap(), ..w.components[0] };
    let r = verify_witness(&sys, &w);
    assert!(r.checks.iter().any(|c| c.name == "closure" && !c.pass));
}

#[test]
fn feasibility_is_monotone_in_the_code() {
    for name in ["C1", "C7"] {
        let code = builtin(name).unwrap();
        let subs = code.subcodes(4);
        assert_eq!(subs.len(), 121);
        let parent = solve(&system(name)).feasible();
        for sub in subs {
            let sys = SepSystem::new(sub).unwrap();
            let out = solve(&sys);
            if let Some(w) = out.witness {
                assert!(parent, "{name} subcode feasible but parent not");
                assert!(verify_witness(&system(name), &w).ok);
            }
        }
    }
}

#[test]
fn result_does_not_depend_on_thread_count() {
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            ["C1", "C2", "C5"]
                .iter()
                .map(|n| {
                    let out = solve(&system(n));
                    (out.witness, out.nodes_explored)
                })
                .collect::<Vec<_>>()
        })
    };
    assert_eq!(run(1), run(4));
}
