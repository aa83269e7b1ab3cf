//! Roots of h^⊥ and isotropic vectors u with hu ∈ {1, 2} in N_C, both by
//! the weight criteria and by exhaustive enumeration.
//!
//! A vector of ℚ ⊗ N_C is written u = r + η₁e∨ + η₂f∨ with r ∈ Z[10A₂]∨ and
//! (η₁, η₂) ∈ ℤ². For h = ae + bf this gives hu = aη₁ + bη₂ and
//! 3u² = 3r² + 2η₁η₂ (m = 3) or 3r² + 6η₁η₂ (m = 1). Writing
//! 3r² = −2K with K = Σ kᵢ over the ten A₂ components, all the searched
//! vectors have K ≤ 3.

use std::collections::HashMap;
use std::sync::OnceLock;

use serde::Serialize;

use super::LatticeError;
use crate::disc_forms::{is_admissible, is_isotropic, Ambient, FormSpec};
use crate::gf3_linear::{TernaryCode, X_WIDTH};

/// A vector (s·c + t·d)/3 of A₂∨ with norm −2k/3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct A2Vector {
    pub s: i8,
    pub t: i8,
    /// Class in A₂∨/A₂ ≅ F₃, with γ = (c + 2d)/3 as 1.
    pub coset: u8,
    pub k: u8,
}

const COMPONENT_BOX: i8 = 6;
const MAX_K: u8 = 3;
const ETA_BOX: i64 = 12;

/// All vectors of A₂∨ with norm ≥ −2, found by scanning (s, t) ∈ [−6, 6]²
/// (coordinates in [−2, 2] in the c, d basis).
pub fn a2_component_table() -> &'static [A2Vector] {
    static TABLE: OnceLock<Vec<A2Vector>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = Vec::new();
        for s in -COMPONENT_BOX..=COMPONENT_BOX {
            for t in -COMPONENT_BOX..=COMPONENT_BOX {
                if (s as i32 + t as i32).rem_euclid(3) != 0 {
                    continue;
                }
                let (s32, t32) = (s as i32, t as i32);
                let k3 = s32 * s32 - s32 * t32 + t32 * t32;
                debug_assert_eq!(k3 % 3, 0);
                let k = (k3 / 3) as u8;
                if k > MAX_K {
                    continue;
                }
                assert!(
                    s.abs() < COMPONENT_BOX && t.abs() < COMPONENT_BOX,
                    "A2 dual scan box too small"
                );
                let coset = match (s32.rem_euclid(3), t32.rem_euclid(3)) {
                    (0, 0) => 0,
                    (1, 2) => 1,
                    (2, 1) => 2,
                    _ => unreachable!("s + t ≡ 0 mod 3"),
                };
                out.push(A2Vector { s, t, coset, k });
            }
        }
        out
    })
}

/// For each x ∈ F₃¹⁰ (by base-3 index) and K ≤ 3, the number of
/// r ∈ Z[10A₂]∨ with class x and 3r² = −2K.
fn dual_vector_counts() -> &'static HashMap<u32, [u64; MAX_K as usize + 1]> {
    static COUNTS: OnceLock<HashMap<u32, [u64; MAX_K as usize + 1]>> = OnceLock::new();
    COUNTS.get_or_init(|| {
        let table = a2_component_table();
        let mut counts = HashMap::new();
        fn rec(
            table: &[A2Vector],
            comp: usize,
            index: u32,
            k: u8,
            counts: &mut HashMap<u32, [u64; MAX_K as usize + 1]>,
        ) {
            if comp == X_WIDTH {
                counts.entry(index).or_insert([0; MAX_K as usize + 1])[k as usize] += 1;
                return;
            }
            for v in table {
                if k + v.k <= MAX_K {
                    rec(table, comp + 1, index * 3 + v.coset as u32, k + v.k, counts);
                }
            }
        }
        rec(table, 0, 0, 0, &mut counts);
        counts
    })
}

/// Outcome of the exhaustive search for a given code and h = ae + bf.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RootReport {
    /// Roots of h^⊥ ∩ N_C that are not roots of Z[10A₂].
    pub count_extra: u64,
    /// Some u ∈ N_C has u² = 0 and hu ∈ {1, 2}.
    pub found_u: bool,
    /// h = 2b′ with b′ ∈ N_C and b′² = 2.
    pub found_half: bool,
}

fn ambient_for(m: u32) -> Result<Ambient, LatticeError> {
    match m {
        1 => Ok(Ambient::A10),
        3 => Ok(Ambient::A10xU3),
        _ => Err(LatticeError::BadM(m)),
    }
}

fn check_code(m: u32, code: &TernaryCode, need_admissible: bool) -> Result<(), LatticeError> {
    let ambient = ambient_for(m)?;
    if code.width() != ambient.word_width() {
        return Err(LatticeError::WidthMismatch {
            m,
            expected: ambient.word_width(),
            found: code.width(),
        });
    }
    if !is_isotropic(&FormSpec::new(ambient), code).expect("width checked") {
        return Err(LatticeError::NotIsotropic("criteria need an isotropic code".into()));
    }
    if need_admissible && !is_admissible(code) {
        return Err(LatticeError::Precondition("code is not admissible".into()));
    }
    Ok(())
}

fn check_ab(a: u64, b: u64) -> Result<(), LatticeError> {
    if a == 0 || b == 0 {
        return Err(LatticeError::Precondition("a and b must be positive".into()));
    }
    Ok(())
}

fn has_word_of_weight(code: &TernaryCode, wt: usize, zero_tail: bool) -> bool {
    code.codewords()
        .any(|w| w.wt() == wt && (!zero_tail || w.tail().iter().all(|&t| t == 0)))
}

/// Whether N_C contains u with u² = 0 and hu ∈ {1, 2}.
///
/// U(3) (code admissible): exactly when a = b = 1 and some word has
/// wt(x) = 1. U(1): exactly when a ≤ 2 or b ≤ 2.
pub fn criterion_u_exists(m: u32, code: &TernaryCode, a: u64, b: u64) -> Result<bool, LatticeError> {
    check_ab(a, b)?;
    check_code(m, code, m == 3)?;
    Ok(match m {
        3 => a == 1 && b == 1 && has_word_of_weight(code, 1, false),
        _ => a <= 2 || b <= 2,
    })
}

/// Whether h^⊥ ∩ N_C has roots outside Z[10A₂].
///
/// U(3) (code admissible): some word has wt(x) = 3 and zero tail; or a = b
/// and some word has wt(x) = 2; or a = 2b or b = 2a and some word has
/// wt(x) = 1. U(1): some word has wt(x) = 3, or a = b.
pub fn criterion_extra_roots(
    m: u32,
    code: &TernaryCode,
    a: u64,
    b: u64,
) -> Result<bool, LatticeError> {
    check_ab(a, b)?;
    check_code(m, code, m == 3)?;
    Ok(match m {
        3 => {
            has_word_of_weight(code, 3, true)
                || (a == b && has_word_of_weight(code, 2, false))
                || ((a == 2 * b || b == 2 * a) && has_word_of_weight(code, 1, false))
        }
        _ => has_word_of_weight(code, 3, false) || a == b,
    })
}

/// Exhaustive count over u = r + η₁e∨ + η₂f∨ in N_C.
///
/// The r-part ranges over all combinations of per-component vectors from
/// [`a2_component_table`] with K ≤ 3; (η₁, η₂) ranges over a box that is
/// checked to be unsaturated, and every hit is checked to satisfy the
/// derived bound |η₁η₂| ≤ 3.
pub fn brute_force_report(m: u32, code: &TernaryCode, a: u64, b: u64) -> Result<RootReport, LatticeError> {
    check_ab(a, b)?;
    check_code(m, code, false)?;
    let counts = dual_vector_counts();
    // codeword x-indices grouped by tail class (y₁, y₂)
    let mut by_tail: Vec<Vec<u32>> = vec![Vec::new(); 9];
    for w in code.codewords() {
        let xi = w.x().iter().fold(0u32, |acc, &v| acc * 3 + v as u32);
        let ti = if m == 3 { w.tail()[0] as usize * 3 + w.tail()[1] as usize } else { 0 };
        by_tail[ti].push(xi);
    }
    let tail_class = |e1: i64, e2: i64| -> usize {
        if m == 3 {
            (e1.rem_euclid(3) * 3 + e2.rem_euclid(3)) as usize
        } else {
            0
        }
    };
    // 3u² = −2K + c·η₁η₂
    let c: i64 = if m == 3 { 2 } else { 6 };
    let (a, b) = (a as i64, b as i64);

    let count_with = |k: i64, class: usize, skip_zero_x: bool| -> u64 {
        by_tail[class]
            .iter()
            .filter(|&&xi| !(skip_zero_x && xi == 0))
            .filter_map(|xi| counts.get(xi))
            .map(|c| c[k as usize])
            .sum()
    };

    let mut count_extra = 0u64;
    let mut found_u = false;
    for e1 in -ETA_BOX..=ETA_BOX {
        for e2 in -ETA_BOX..=ETA_BOX {
            let hu = a * e1 + b * e2;
            let class = tail_class(e1, e2);
            let on_edge = e1.abs() == ETA_BOX || e2.abs() == ETA_BOX;
            // roots: u² = −2, so 2K = 6 + c·η₁η₂
            if hu == 0 && (6 + c * e1 * e2) % 2 == 0 {
                let k = (6 + c * e1 * e2) / 2;
                if k >= 0 {
                    assert!(k <= MAX_K as i64, "root with K = {k} escapes the component tables");
                    let zero_eta = e1 == 0 && e2 == 0;
                    let hits = count_with(k, class, zero_eta);
                    if hits > 0 {
                        assert!((e1 * e2).abs() <= 3, "root at |η₁η₂| = {}", (e1 * e2).abs());
                        assert!(!on_edge, "η box saturated");
                    }
                    count_extra += hits;
                }
            }
            // isotropic: 2K = c·η₁η₂
            if (hu == 1 || hu == 2) && (c * e1 * e2) % 2 == 0 {
                let k = c * e1 * e2 / 2;
                if k >= 0 {
                    assert!(k <= MAX_K as i64, "isotropic vector with K = {k} escapes the tables");
                    if count_with(k, class, false) > 0 {
                        assert!(!on_edge, "η box saturated");
                        found_u = true;
                    }
                }
            }
        }
    }
    // the derived bound |η₁η₂| ≤ 3: scan |η₁η₂| = 4 explicitly
    for (e1, e2) in [(1, -4), (-1, 4), (2, -2), (-2, 2), (4, -1), (-4, 1)] {
        if a * e1 + b * e2 == 0 {
            let k2 = 6 + c * e1 * e2;
            assert!(k2 < 0, "boundary stratum |η₁η₂| = 4 admits roots");
        }
    }

    let found_half = half_vector_exists(m, &by_tail, a, b);
    Ok(RootReport { count_extra, found_u, found_half })
}

/// b′ = h/2 = (a/2)e + (b/2)f; with e = 3f∨, f = 3e∨ (m = 3) or e = f∨,
/// f = e∨ (m = 1) this is r = 0 and (η₁, η₂) = (mb/2, ma/2).
fn half_vector_exists(m: u32, by_tail: &[Vec<u32>], a: i64, b: i64) -> bool {
    let m = m as i64;
    if (m * a) % 2 != 0 || (m * b) % 2 != 0 {
        return false;
    }
    let (e1, e2) = (m * b / 2, m * a / 2);
    let class = if m == 3 { (e1.rem_euclid(3) * 3 + e2.rem_euclid(3)) as usize } else { 0 };
    let in_lattice = by_tail[class].contains(&0);
    // b′² = 2η₁η₂/m
    in_lattice && 2 * e1 * e2 == 2 * m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code_search::builtin;
    use crate::gf3_linear::TernaryWord;

    #[test]
    fn component_table_shape() {
        let table = a2_component_table();
        let count = |coset: u8, k: u8| table.iter().filter(|v| v.coset == coset && v.k == k).count();
        assert_eq!(count(0, 0), 1);
        assert_eq!(count(0, 3), 6);
        assert_eq!(count(1, 1), 3);
        assert_eq!(count(2, 1), 3);
        assert_eq!(table.len(), 13);
    }

    #[test]
    fn dual_bound_holds_and_is_attained() {
        for (&xi, ks) in dual_vector_counts() {
            let wt = TernaryWord::from_index(10, xi).wt() as usize;
            for (k, &n) in ks.iter().enumerate() {
                if n > 0 {
                    // r² = −2k/3 ≤ −2wt/3
                    assert!(k >= wt);
                }
            }
            if wt <= 3 {
                assert!(ks[wt] > 0, "no lift attains the bound for {xi}");
            }
        }
        // every x of weight ≤ 3 appears
        let n_small: usize = (0..=3).map(|w| binom(10, w) * (1 << w)).sum();
        assert_eq!(dual_vector_counts().len(), n_small);
    }

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn zero_code_u3() {
        let r = brute_force_report(3, &TernaryCode::zero(12), 1, 1).unwrap();
        assert_eq!(r, RootReport { count_extra: 0, found_u: false, found_half: false });
    }

    #[test]
    fn zero_code_u1_has_e_minus_f() {
        let r = brute_force_report(1, &TernaryCode::zero(10), 3, 3).unwrap();
        assert_eq!(r.count_extra, 2);
        assert!(!r.found_u);
        let half = brute_force_report(1, &TernaryCode::zero(10), 2, 2).unwrap();
        assert!(half.found_half);
    }

    #[test]
    fn criteria_examples() {
        let c7 = builtin("C7").unwrap();
        assert!(!criterion_u_exists(3, &c7, 1, 1).unwrap());
        assert!(!criterion_extra_roots(3, &c7, 1, 1).unwrap());
        let k = builtin("K").unwrap();
        assert!(criterion_u_exists(1, &k, 2, 7).unwrap());
        assert!(!criterion_u_exists(1, &k, 3, 4).unwrap());
        assert!(criterion_extra_roots(1, &k, 3, 3).unwrap());
        let wt3 = TernaryWord::new(&[1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0]).unwrap();
        let c = TernaryCode::from_rows(12, &[wt3]).unwrap();
        assert!(criterion_extra_roots(3, &c, 5, 2).unwrap());
        assert!(brute_force_report(3, &c, 5, 2).unwrap().count_extra > 0);
    }

    #[test]
    fn c1_oracle_agrees_with_criteria() {
        let c1 = builtin("C1").unwrap();
        let r = brute_force_report(3, &c1, 1, 1).unwrap();
        assert_eq!(r.found_u, criterion_u_exists(3, &c1, 1, 1).unwrap());
        assert_eq!(r.count_extra > 0, criterion_extra_roots(3, &c1, 1, 1).unwrap());
        assert!(!r.found_half);
    }

    #[test]
    fn wt1_and_wt2_words_trigger_u3_conditions() {
        // isotropic words: wt 1 with tail (1,1); wt 2 with tail (1,2)
        let w1 = TernaryWord::new(&[1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1]).unwrap();
        let c = TernaryCode::from_rows(12, &[w1]).unwrap();
        assert!(brute_force_report(3, &c, 1, 1).unwrap().found_u);
        assert!(brute_force_report(3, &c, 2, 1).unwrap().count_extra > 0);
        assert_eq!(brute_force_report(3, &c, 3, 1).unwrap().count_extra, 0);
        let w2 = TernaryWord::new(&[1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1, 2]).unwrap();
        let c = TernaryCode::from_rows(12, &[w2]).unwrap();
        assert!(brute_force_report(3, &c, 4, 4).unwrap().count_extra > 0);
        assert_eq!(brute_force_report(3, &c, 4, 5).unwrap().count_extra, 0);
    }
}
