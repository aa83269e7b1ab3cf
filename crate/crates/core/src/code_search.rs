//! Built-in code tables, seeded random discovery of isotropic codes, and
//! selection of subcodes by Artin invariant.

use std::collections::HashSet;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::disc_forms::{
    codes_equivalent, is_admissible, is_isotropic, q_value, word_has_weight3_property, Ambient,
    FormSpec,
};
use crate::gf3_linear::{weight_enumerator, TernaryCode, TernaryWord, WeightEnumerator};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("unknown built-in code {0:?} (expected C1..C7 or K)")]
    UnknownCode(String),
    #[error("sigma {sigma} out of range 1..={max} for U({m})")]
    SigmaOutOfRange { sigma: u32, m: u32, max: u32 },
    #[error("code of dimension {dim} has no subcode of dimension {want}")]
    TooSmall { dim: usize, want: usize },
    #[error("unsupported U(m) parameter m = {0}")]
    BadM(u32),
    #[error("dimension {0} exceeds the search limit of 5")]
    DimTooLarge(usize),
    #[error("predicate {predicate:?} does not apply to ambient {ambient:?}")]
    PredicateMismatch { predicate: Predicate, ambient: Ambient },
}

const C1: &str = "\
1 0 0 0 0 0 0 0 1 1 0 1
0 1 0 0 0 0 0 1 0 1 2 0
0 0 1 0 0 0 1 0 1 0 2 0
0 0 0 1 0 0 1 1 0 0 0 1
0 0 0 0 1 0 1 1 1 1 1 2
";
const C2: &str = "\
1 0 0 0 0 0 0 0 1 1 0 1
0 1 0 0 0 0 0 1 0 1 2 0
0 0 1 0 0 0 1 0 1 0 2 0
0 0 0 1 0 0 1 1 0 0 0 1
0 0 0 0 1 1 1 2 2 1 0 0
";
const C3: &str = "\
1 0 0 0 0 0 0 0 1 1 0 1
0 1 0 0 0 0 1 1 0 0 0 1
0 0 1 0 0 1 0 1 0 1 2 2
0 0 0 1 0 1 1 0 1 0 2 2
0 0 0 0 1 1 1 2 2 1 0 1
";
const C4: &str = "\
1 0 0 0 0 0 0 0 1 1 0 1
0 1 0 0 0 0 1 1 0 0 0 1
0 0 1 0 0 1 0 1 0 1 2 2
0 0 0 1 0 1 1 0 1 0 2 2
0 0 0 0 1 1 2 2 2 2 2 0
";
const C5: &str = "\
1 0 0 0 0 0 0 1 1 1 1 1
0 1 0 0 0 0 1 0 1 1 2 2
0 0 1 0 0 1 0 1 0 1 2 2
0 0 0 1 0 1 1 0 0 1 1 1
0 0 0 0 1 1 1 1 1 1 0 0
";
const C6: &str = "\
1 0 0 0 0 0 0 1 1 1 1 1
0 1 0 0 0 0 1 0 1 1 2 2
0 0 1 0 0 1 0 1 0 1 2 2
0 0 0 1 0 1 1 0 0 1 1 1
0 0 0 0 1 1 2 2 1 0 1 2
";
const C7: &str = "\
1 0 0 0 0 0 1 1 1 1 1 2
0 1 0 0 0 1 0 1 1 2 2 1
0 0 1 0 0 1 1 0 2 1 2 1
0 0 0 1 0 1 1 2 0 2 1 2
0 0 0 0 1 1 2 1 2 0 1 2
";
const K: &str = "\
1 0 0 0 0 1 1 1 1 1
0 1 0 0 1 0 1 1 2 2
0 0 1 0 1 1 0 2 1 2
0 0 0 1 1 1 2 0 2 1
";

pub const BUILTIN_NAMES: [&str; 8] = ["C1", "C2", "C3", "C4", "C5", "C6", "C7", "K"];

/// The printed generator matrix of a built-in code.
pub fn builtin_text(name: &str) -> Result<&'static str, SearchError> {
    Ok(match name {
        "C1" => C1,
        "C2" => C2,
        "C3" => C3,
        "C4" => C4,
        "C5" => C5,
        "C6" => C6,
        "C7" => C7,
        "K" => K,
        _ => return Err(SearchError::UnknownCode(name.to_string())),
    })
}

pub fn builtin(name: &str) -> Result<TernaryCode, SearchError> {
    Ok(builtin_text(name)?.parse().expect("built-in matrices parse"))
}

/// The expected weight enumerators of C1..C7 and K.
pub fn expected_enumerator(name: &str) -> Result<WeightEnumerator, SearchError> {
    let terms: &[(usize, u64)] = match name {
        "C1" => &[(0, 1), (3, 12), (4, 18), (5, 36), (6, 108), (7, 36), (8, 18), (9, 14)],
        "C2" => &[(0, 1), (3, 8), (4, 10), (5, 24), (6, 86), (7, 40), (8, 30), (9, 40), (10, 4)],
        "C3" => &[(0, 1), (3, 4), (4, 8), (5, 24), (6, 94), (7, 44), (8, 30), (9, 36), (10, 2)],
        "C4" => &[(0, 1), (3, 6), (4, 6), (5, 18), (6, 102), (7, 42), (8, 36), (9, 26), (10, 6)],
        "C5" => &[(0, 1), (4, 30), (6, 60), (7, 120), (9, 20), (10, 12)],
        "C6" => &[(0, 1), (4, 18), (5, 18), (6, 96), (7, 36), (8, 36), (9, 38)],
        "C7" => &[(0, 1), (5, 72), (6, 60), (8, 90), (9, 20)],
        "K" => &[(0, 1), (6, 60), (9, 20)],
        _ => return Err(SearchError::UnknownCode(name.to_string())),
    };
    Ok(WeightEnumerator::from_terms(terms))
}

/// Property required of every nonzero codeword during search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Predicate {
    /// wt(x) ≥ 3, and wt(x) = 3 forces a nonzero tail (U(3) ambient).
    Weight3,
    /// wt(x) ≥ 6 (U(1) ambient).
    MinWt6,
}

impl Predicate {
    pub fn holds(self, word: &TernaryWord) -> bool {
        match self {
            Predicate::Weight3 => word_has_weight3_property(word),
            Predicate::MinWt6 => word.is_zero() || word.wt() >= 6,
        }
    }

    pub fn holds_for_code(self, code: &TernaryCode) -> bool {
        code.codewords().all(|w| self.holds(&w))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub seed: u64,
    pub max_trials: u64,
    pub target_classes: usize,
}

pub const DEFAULT_SEED: u64 = 20_240_601;
pub const DEFAULT_TRIALS: u64 = 4096;

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { seed: DEFAULT_SEED, max_trials: DEFAULT_TRIALS, target_classes: usize::MAX }
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    /// Pairwise inequivalent codes, in order of first discovery.
    pub classes: Vec<TernaryCode>,
    pub trials: u64,
    /// Codes produced by the trials (before deduplication).
    pub candidates: u64,
}

/// b(u, v) = 0 for the ambient's discriminant form.
fn orthogonal(ambient: Ambient, u: &TernaryWord, v: &TernaryWord) -> bool {
    // 3·b = −2Σxx′ + y₁y′₂ + y₂y′₁ ≡ Σxx′ + y₁y′₂ + y₂y′₁ (mod 3)
    let mut s: u32 = u.x().iter().zip(v.x()).map(|(&a, &b)| (a * b) as u32).sum();
    if ambient == Ambient::A10xU3 {
        let (p, q) = (u.tail(), v.tail());
        s += (p[0] * q[1] + p[1] * q[0]) as u32;
    }
    s % 3 == 0
}

/// All nonzero isotropic words satisfying the predicate.
fn word_pool(ambient: Ambient, predicate: Predicate) -> &'static [TernaryWord] {
    static U3_WT3: OnceLock<Vec<TernaryWord>> = OnceLock::new();
    static U1_MINWT: OnceLock<Vec<TernaryWord>> = OnceLock::new();
    static U3_MINWT: OnceLock<Vec<TernaryWord>> = OnceLock::new();
    static U1_WT3: OnceLock<Vec<TernaryWord>> = OnceLock::new();
    let cell = match (ambient, predicate) {
        (Ambient::A10xU3, Predicate::Weight3) => &U3_WT3,
        (Ambient::A10xU3, Predicate::MinWt6) => &U3_MINWT,
        (_, Predicate::MinWt6) => &U1_MINWT,
        (_, Predicate::Weight3) => &U1_WT3,
    };
    cell.get_or_init(|| {
        let spec = FormSpec::new(ambient);
        let width = ambient.word_width();
        (1..3u32.pow(width as u32))
            .map(|i| TernaryWord::from_index(width, i))
            .filter(|w| predicate.holds(w) && q_value(&spec, w).expect("width").is_zero())
            .collect()
    })
}

const DEAD_END_LIMIT: usize = 400;
const RESTARTS_PER_TRIAL: usize = 50;

/// One greedy construction: adjoin random pool words that keep the span
/// isotropic and predicate-satisfying, restarting on dead ends.
fn greedy_code(
    ambient: Ambient,
    predicate: Predicate,
    dim: usize,
    pool: &[TernaryWord],
    rng: &mut ChaCha8Rng,
) -> Option<TernaryCode> {
    let width = ambient.word_width();
    if dim == 0 {
        return Some(TernaryCode::zero(width));
    }
    if pool.is_empty() {
        return None;
    }
    for _ in 0..RESTARTS_PER_TRIAL {
        let mut rows: Vec<TernaryWord> = Vec::new();
        let mut words: Vec<TernaryWord> = vec![TernaryWord::zero(width)];
        let mut failures = 0;
        while rows.len() < dim && failures < DEAD_END_LIMIT {
            let v = pool[rng.random_range(0..pool.len())];
            let ok = rows.iter().all(|r| orthogonal(ambient, r, &v))
                && words.iter().all(|c| {
                    let s1 = c.add(&v);
                    let s2 = c.add(&v.scale(2));
                    !s1.is_zero() && predicate.holds(&s1) && predicate.holds(&s2)
                });
            if !ok {
                failures += 1;
                continue;
            }
            failures = 0;
            let mut next = Vec::with_capacity(words.len() * 3);
            for c in &words {
                next.push(*c);
                next.push(c.add(&v));
                next.push(c.add(&v.scale(2)));
            }
            words = next;
            rows.push(v);
        }
        if rows.len() == dim {
            return Some(TernaryCode::from_rows(width, &rows).expect("width"));
        }
    }
    None
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

const BATCH: u64 = 256;

/// Seeded randomized discovery of inequivalent codes.
///
/// Trials run in parallel in fixed-size batches, each on its own stream of
/// a ChaCha8 generator seeded with `budget.seed`. Candidates are then
/// reduced sequentially in trial order: codes are grouped by weight
/// enumerator and kept only if inequivalent under [`SignedPermutation`]s
/// to every class found so far. The search stops after the batch in which
/// `target_classes` is reached, or when `max_trials` is exhausted.
///
/// [`SignedPermutation`]: crate::disc_forms::SignedPermutation
pub fn random_search(
    spec: &FormSpec,
    dim: usize,
    predicate: Predicate,
    budget: &SearchBudget,
) -> Result<SearchOutcome, SearchError> {
    if dim > 5 {
        return Err(SearchError::DimTooLarge(dim));
    }
    let ambient = spec.ambient;
    if ambient == Ambient::A10xU9 {
        return Err(SearchError::PredicateMismatch { predicate, ambient });
    }
    let pool = word_pool(ambient, predicate);
    let mut classes: Vec<(WeightEnumerator, TernaryCode)> = Vec::new();
    let mut seen: HashSet<TernaryCode> = HashSet::new();
    let mut trials = 0u64;
    let mut candidates = 0u64;
    let max_trials = budget.max_trials.max(1);
    while trials < max_trials && classes.len() < budget.target_classes {
        let end = (trials + BATCH).min(max_trials);
        let batch: Vec<Option<TernaryCode>> = (trials..end)
            .into_par_iter()
            .map(|t| greedy_code(ambient, predicate, dim, pool, &mut trial_rng(budget.seed, t)))
            .collect();
        for code in batch.into_iter().flatten() {
            candidates += 1;
            if !seen.insert(code.clone()) {
                continue;
            }
            let we = weight_enumerator(&code);
            let known = classes
                .iter()
                .filter(|(e, _)| *e == we)
                .any(|(_, rep)| codes_equivalent(rep, &code).is_some());
            if !known {
                classes.push((we, code));
            }
        }
        trials = end;
    }
    Ok(SearchOutcome { classes: classes.into_iter().map(|(_, c)| c).collect(), trials, candidates })
}

/// Whether a code is isotropic and admissible with the predicate.
pub fn is_valid_for(ambient: Ambient, predicate: Predicate, code: &TernaryCode) -> bool {
    code.width() == ambient.word_width()
        && is_isotropic(&FormSpec::new(ambient), code).unwrap_or(false)
        && is_admissible(code)
        && predicate.holds_for_code(code)
}

/// The span of the leading (6 − σ) RREF rows for U(3), (5 − σ) for U(1).
pub fn subcode_for_sigma(code: &TernaryCode, m: u32, sigma: u32) -> Result<TernaryCode, SearchError> {
    let top = match m {
        3 => 6,
        1 => 5,
        _ => return Err(SearchError::BadM(m)),
    };
    if sigma < 1 || sigma > top {
        return Err(SearchError::SigmaOutOfRange { sigma, m, max: top });
    }
    let want = (top - sigma) as usize;
    if code.dim() < want {
        return Err(SearchError::TooSmall { dim: code.dim(), want });
    }
    Ok(code.leading_subcode(want))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_match_expected_enumerators() {
        for name in BUILTIN_NAMES {
            let code = builtin(name).unwrap();
            assert_eq!(weight_enumerator(&code), expected_enumerator(name).unwrap(), "{name}");
        }
        assert!(builtin("C8").is_err());
    }

    #[test]
    fn c5_has_no_weight_three_or_five() {
        let we = weight_enumerator(&builtin("C5").unwrap());
        assert_eq!(we.0[3], 0);
        assert_eq!(we.0[5], 0);
    }

    #[test]
    fn sigma_subcodes() {
        let c7 = builtin("C7").unwrap();
        assert_eq!(subcode_for_sigma(&c7, 3, 6).unwrap().dim(), 0);
        assert_eq!(subcode_for_sigma(&c7, 3, 1).unwrap(), c7);
        let k = builtin("K").unwrap();
        let sub = subcode_for_sigma(&k, 1, 3).unwrap();
        assert_eq!(sub.dim(), 2);
        assert_eq!(sub.codewords().count(), 9);
        assert!(sub.codewords().all(|w| w.is_zero() || w.wt() >= 6));
        assert!(subcode_for_sigma(&c7, 3, 0).is_err());
        assert!(subcode_for_sigma(&k, 1, 6).is_err());
    }

    #[test]
    fn dim_zero_search_returns_zero_code() {
        let budget = SearchBudget { seed: 1, max_trials: 3, target_classes: usize::MAX };
        let out = random_search(&FormSpec::u3(), 0, Predicate::Weight3, &budget).unwrap();
        assert_eq!(out.classes, vec![TernaryCode::zero(12)]);
    }

    #[test]
    fn small_search_is_deterministic_and_valid() {
        let budget = SearchBudget { seed: 5, max_trials: 40, target_classes: usize::MAX };
        let a = random_search(&FormSpec::u3(), 3, Predicate::Weight3, &budget).unwrap();
        let b = random_search(&FormSpec::u3(), 3, Predicate::Weight3, &budget).unwrap();
        assert_eq!(a.classes, b.classes);
        for c in &a.classes {
            assert_eq!(c.dim(), 3);
            assert!(is_valid_for(Ambient::A10xU3, Predicate::Weight3, c));
        }
    }
}
