//! The integer/word feasibility system attached to a dimension-5 code: a
//! curve T = C_E + C_F + T₁ + ⋯ + T_t with intersection data (α, β) and
//! discriminant words x_ν, subject to the sum, residue, effectivity,
//! closure, and master inequalities.

use std::collections::HashMap;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::disc_forms::{has_weight3_property, is_admissible, is_isotropic, FormSpec};
use crate::gf3_linear::{membership, TernaryCode, TernaryWord, X_WIDTH};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SepError {
    #[error("code must have width 12, found {0}")]
    Width(usize),
    #[error("code must be isotropic, admissible and satisfy the weight-3 condition")]
    BadCode,
    #[error("witness row {row} is malformed: {msg}")]
    BadRow { row: usize, msg: String },
}

/// Derived bound on t: each component uses at least 1 of Σα + Σβ ≤ 6.
pub const T_MAX: usize = 6;

#[derive(Debug, Clone)]
pub struct SepSystem {
    pub code: TernaryCode,
    pub t_max: usize,
}

impl SepSystem {
    pub fn new(code: TernaryCode) -> Result<Self, SepError> {
        if code.width() != X_WIDTH + 2 {
            return Err(SepError::Width(code.width()));
        }
        if !is_isotropic(&FormSpec::u3(), &code).expect("width checked")
            || !is_admissible(&code)
            || !has_weight3_property(&code)
        {
            return Err(SepError::BadCode);
        }
        Ok(SepSystem { code, t_max: T_MAX })
    }

    pub fn with_t_max(mut self, t_max: usize) -> Self {
        self.t_max = t_max;
        self
    }
}

/// One component T_ν: its word (x_ν, ᾱ_ν, β̄_ν) and integers α_ν, β_ν.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Component {
    pub word: TernaryWord,
    pub alpha: i64,
    pub beta: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SepWitness {
    pub alpha_e: i64,
    pub beta_e: i64,
    pub alpha_f: i64,
    pub beta_f: i64,
    pub components: Vec<Component>,
}

impl SepWitness {
    pub fn t(&self) -> usize {
        self.components.len()
    }

    /// Rows [x₁..x₁₀, α, β]: first C_F, then C_E, then T₁, …, T_t.
    pub fn from_rows(rows: &[[i64; X_WIDTH + 2]]) -> Result<Self, SepError> {
        if rows.len() < 2 {
            return Err(SepError::BadRow { row: rows.len(), msg: "need the E and F rows".into() });
        }
        for (i, r) in rows.iter().enumerate() {
            if r[..X_WIDTH].iter().any(|&v| !(0..3).contains(&v)) {
                return Err(SepError::BadRow { row: i, msg: "x entries must be in 0..3".into() });
            }
            if r[X_WIDTH] < 0 || r[X_WIDTH + 1] < 0 {
                return Err(SepError::BadRow { row: i, msg: "α, β must be nonnegative".into() });
            }
        }
        let components = rows[2..]
            .iter()
            .map(|r| {
                let mut w = [0u8; X_WIDTH + 2];
                for i in 0..X_WIDTH {
                    w[i] = r[i] as u8;
                }
                w[X_WIDTH] = (r[X_WIDTH] % 3) as u8;
                w[X_WIDTH + 1] = (r[X_WIDTH + 1] % 3) as u8;
                Component {
                    word: TernaryWord::new(&w).expect("residues"),
                    alpha: r[X_WIDTH],
                    beta: r[X_WIDTH + 1],
                }
            })
            .collect();
        Ok(SepWitness {
            alpha_f: rows[0][X_WIDTH],
            beta_f: rows[0][X_WIDTH + 1],
            alpha_e: rows[1][X_WIDTH],
            beta_e: rows[1][X_WIDTH + 1],
            components,
        })
    }

    pub fn to_rows(&self) -> Vec<[i64; X_WIDTH + 2]> {
        let mut rows = Vec::new();
        let mut f = [0i64; X_WIDTH + 2];
        f[X_WIDTH] = self.alpha_f;
        f[X_WIDTH + 1] = self.beta_f;
        rows.push(f);
        let mut e = [0i64; X_WIDTH + 2];
        e[X_WIDTH] = self.alpha_e;
        e[X_WIDTH + 1] = self.beta_e;
        rows.push(e);
        for c in &self.components {
            let mut r = [0i64; X_WIDTH + 2];
            for (i, v) in c.word.x().iter().enumerate() {
                r[i] = *v as i64;
            }
            r[X_WIDTH] = c.alpha;
            r[X_WIDTH + 1] = c.beta;
            rows.push(r);
        }
        rows
    }
}

/// The witness listed for C1.
pub fn printed_c1_witness() -> SepWitness {
    SepWitness::from_rows(&[
        [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 3, 0],
        [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 3],
        [1, 0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 1],
        [0, 2, 0, 0, 0, 0, 0, 2, 0, 2, 1, 0],
        [0, 0, 2, 0, 0, 0, 2, 0, 2, 0, 1, 0],
        [0, 0, 0, 1, 0, 0, 1, 1, 0, 0, 0, 1],
        [2, 1, 1, 2, 0, 0, 0, 0, 0, 0, 1, 1],
    ])
    .expect("well-formed")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    /// t + 2 + (α_Eβ_E + α_Fβ_F + Σ(α_νβ_ν − wt(x_ν)))/3.
    pub lhs: String,
    /// 10 − |s₁(x₁) ∪ ⋯ ∪ s₁(x_t)|.
    pub rhs: String,
    pub ok: bool,
}

fn support_mask(w: &TernaryWord) -> u16 {
    w.x().iter().enumerate().filter(|(_, &v)| v != 0).fold(0, |m, (i, _)| m | (1 << i))
}

/// 3·LHS and 3·RHS of the master inequality.
fn master_sides(alpha_e: i64, beta_e: i64, alpha_f: i64, beta_f: i64, comps: &[Component]) -> (i64, i64) {
    let union = comps.iter().fold(0u16, |m, c| m | support_mask(&c.word));
    let s: i64 = comps.iter().map(|c| c.alpha * c.beta - c.word.wt() as i64).sum();
    let lhs3 = 3 * (comps.len() as i64 + 2) + alpha_e * beta_e + alpha_f * beta_f + s;
    let rhs3 = 3 * (10 - union.count_ones() as i64);
    (lhs3, rhs3)
}

/// Checks every constraint of the system and reports each one.
pub fn verify_witness(system: &SepSystem, w: &SepWitness) -> VerifyReport {
    let mut checks = Vec::new();
    let mut push = |name, pass, detail: String| checks.push(Check { name, pass, detail });
    let comps = &w.components;

    push(
        "e_f_fixed",
        w.beta_e == 3 && w.alpha_f == 3,
        format!("β_E = {}, α_F = {}", w.beta_e, w.alpha_f),
    );
    let ef_words_ok = [w.alpha_e, w.beta_f].iter().all(|&v| v == 0 || v == 3);
    push("e_f_values", ef_words_ok, format!("α_E = {}, β_F = {}", w.alpha_e, w.beta_f));
    let sa: i64 = comps.iter().map(|c| c.alpha).sum();
    let sb: i64 = comps.iter().map(|c| c.beta).sum();
    push("sum_alpha", w.alpha_e + sa == 3, format!("α_E + Σα = {}", w.alpha_e + sa));
    push("sum_beta", w.beta_f + sb == 3, format!("β_F + Σβ = {}", w.beta_f + sb));
    let nonneg = comps.iter().all(|c| c.alpha >= 0 && c.beta >= 0);
    push("nonnegative", nonneg, String::new());
    let bad_finite: Vec<usize> =
        (0..comps.len()).filter(|&i| comps[i].alpha <= 0 && comps[i].beta <= 0).collect();
    push("finite", bad_finite.is_empty(), format!("failing components {bad_finite:?}"));
    let bad_member: Vec<usize> = (0..comps.len())
        .filter(|&i| !membership(&system.code, &comps[i].word).unwrap_or(false))
        .collect();
    push("membership", bad_member.is_empty(), format!("failing components {bad_member:?}"));
    let bad_res: Vec<usize> = (0..comps.len())
        .filter(|&i| {
            let c = &comps[i];
            c.alpha.rem_euclid(3) != c.word.tail()[0] as i64
                || c.beta.rem_euclid(3) != c.word.tail()[1] as i64
        })
        .collect();
    push("residues", bad_res.is_empty(), format!("failing components {bad_res:?}"));
    let bad_eff: Vec<usize> = (0..comps.len())
        .filter(|&i| comps[i].alpha * comps[i].beta - (comps[i].word.wt() as i64) < -3)
        .collect();
    push("effectivity", bad_eff.is_empty(), format!("failing components {bad_eff:?}"));
    let mut sum = [0u8; X_WIDTH];
    for c in comps {
        for (s, v) in sum.iter_mut().zip(c.word.x()) {
            *s = (*s + v) % 3;
        }
    }
    push("closure", sum.iter().all(|&v| v == 0), format!("Σx = {sum:?}"));
    let (lhs3, rhs3) = master_sides(w.alpha_e, w.beta_e, w.alpha_f, w.beta_f, comps);
    let lhs = Ratio::new(lhs3, 3);
    let rhs = Ratio::new(rhs3, 3);
    push("master", lhs3 >= rhs3, format!("{lhs} ≥ {rhs}"));

    let ok = checks.iter().all(|c| c.pass);
    VerifyReport { checks, lhs: lhs.to_string(), rhs: rhs.to_string(), ok }
}

#[derive(Debug, Clone, Copy)]
struct Cand {
    word: TernaryWord,
    alpha: i64,
    beta: i64,
}

/// All admissible single components, in canonical order (word index, α, β).
fn candidates(code: &TernaryCode) -> Vec<Cand> {
    let mut words: Vec<TernaryWord> = code.codewords().collect();
    words.sort_by_key(|w| w.index());
    let mut out = Vec::new();
    for w in words {
        let (ta, tb) = (w.tail()[0] as i64, w.tail()[1] as i64);
        for alpha in (0..=3).filter(|a| a % 3 == ta) {
            for beta in (0..=3).filter(|b| b % 3 == tb) {
                if alpha + beta >= 1 && alpha * beta - w.wt() as i64 >= -3 {
                    out.push(Cand { word: w, alpha, beta });
                }
            }
        }
    }
    out
}

struct Search<'a> {
    cands: &'a [Cand],
    lookup: HashMap<(u32, i64, i64), usize>,
    alpha_e: i64,
    beta_f: i64,
    t: usize,
    find_all: bool,
}

#[derive(Default)]
struct Found {
    nodes: u64,
    first: Option<Vec<usize>>,
    count: u64,
}

impl Search<'_> {
    fn witness(&self, idx: &[usize]) -> SepWitness {
        SepWitness {
            alpha_e: self.alpha_e,
            beta_e: 3,
            alpha_f: 3,
            beta_f: self.beta_f,
            components: idx
                .iter()
                .map(|&i| Component { word: self.cands[i].word, alpha: self.cands[i].alpha, beta: self.cands[i].beta })
                .collect(),
        }
    }

    fn master_holds(&self, idx: &[usize]) -> bool {
        let comps = self.witness(idx).components;
        let (l, r) = master_sides(self.alpha_e, 3, 3, self.beta_f, &comps);
        l >= r
    }

    /// Extends `prefix` (nondecreasing candidate indices); the last
    /// component is forced by the sum and closure constraints.
    fn dfs(&self, prefix: &mut Vec<usize>, rem_a: i64, rem_b: i64, xsum: &[u8; X_WIDTH], found: &mut Found) {
        found.nodes += 1;
        if !self.find_all && found.first.is_some() {
            return;
        }
        if self.t == 0 {
            if rem_a == 0 && rem_b == 0 && self.master_holds(prefix) {
                found.count += 1;
                found.first.get_or_insert_with(|| prefix.clone());
            }
            return;
        }
        let start = prefix.last().copied().unwrap_or(0);
        if prefix.len() + 1 == self.t {
            let mut w = [0u8; X_WIDTH + 2];
            for i in 0..X_WIDTH {
                w[i] = (3 - xsum[i]) % 3;
            }
            if rem_a < 0 || rem_b < 0 || rem_a > 3 || rem_b > 3 {
                return;
            }
            w[X_WIDTH] = (rem_a % 3) as u8;
            w[X_WIDTH + 1] = (rem_b % 3) as u8;
            let key = (TernaryWord::new(&w).expect("residues").index(), rem_a, rem_b);
            if let Some(&c) = self.lookup.get(&key) {
                if c >= start {
                    prefix.push(c);
                    if self.master_holds(prefix) {
                        found.count += 1;
                        found.first.get_or_insert_with(|| prefix.clone());
                    }
                    prefix.pop();
                }
            }
            return;
        }
        let left_after = (self.t - prefix.len() - 1) as i64;
        for c in start..self.cands.len() {
            let cand = &self.cands[c];
            let (ra, rb) = (rem_a - cand.alpha, rem_b - cand.beta);
            if ra < 0 || rb < 0 || ra + rb < left_after {
                continue;
            }
            let mut next = *xsum;
            for (s, v) in next.iter_mut().zip(cand.word.x()) {
                *s = (*s + v) % 3;
            }
            prefix.push(c);
            self.dfs(prefix, ra, rb, &next, found);
            prefix.pop();
            if !self.find_all && found.first.is_some() {
                return;
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveOutcome {
    pub witness: Option<SepWitness>,
    pub nodes_explored: u64,
}

impl SolveOutcome {
    pub fn feasible(&self) -> bool {
        self.witness.is_some()
    }
}

/// Runs the search over (α_E, β_F, t) in canonical order; within each
/// level the subtrees rooted at the first component run in parallel and
/// are merged in candidate order.
fn run(system: &SepSystem, find_all: bool) -> (Option<SepWitness>, u64, Vec<(usize, u64)>) {
    let cands = candidates(&system.code);
    let lookup: HashMap<(u32, i64, i64), usize> = cands
        .iter()
        .enumerate()
        .map(|(i, c)| ((c.word.index(), c.alpha, c.beta), i))
        .collect();
    let mut nodes = 0u64;
    let mut per_t = Vec::new();
    let mut first: Option<SepWitness> = None;
    for alpha_e in [0, 3] {
        for beta_f in [0, 3] {
            for t in 0..=system.t_max {
                let search = Search { cands: &cands, lookup: lookup.clone(), alpha_e, beta_f, t, find_all };
                let (rem_a, rem_b) = (3 - alpha_e, 3 - beta_f);
                let results: Vec<Found> = if t <= 1 {
                    let mut f = Found::default();
                    search.dfs(&mut Vec::new(), rem_a, rem_b, &[0; X_WIDTH], &mut f);
                    vec![f]
                } else {
                    (0..cands.len())
                        .into_par_iter()
                        .map(|c| {
                            let mut f = Found::default();
                            let cand = &cands[c];
                            let (ra, rb) = (rem_a - cand.alpha, rem_b - cand.beta);
                            if ra < 0 || rb < 0 || ra + rb < (t - 1) as i64 {
                                return f;
                            }
                            let mut xsum = [0u8; X_WIDTH];
                            xsum.copy_from_slice(cand.word.x());
                            search.dfs(&mut vec![c], ra, rb, &xsum, &mut f);
                            f
                        })
                        .collect()
                };
                let mut count = 0;
                for f in results {
                    nodes += f.nodes;
                    count += f.count;
                    if first.is_none() {
                        if let Some(idx) = f.first {
                            first = Some(search.witness(&idx));
                        }
                    }
                }
                if count > 0 {
                    per_t.push((t, count));
                }
                if !find_all && first.is_some() {
                    return (first, nodes, per_t);
                }
            }
        }
    }
    (first, nodes, per_t)
}

/// The first witness in canonical order, or `None` after exhausting the
/// search space.
pub fn solve(system: &SepSystem) -> SolveOutcome {
    let (witness, nodes_explored, _) = run(system, false);
    SolveOutcome { witness, nodes_explored }
}

#[derive(Debug, Clone, Serialize)]
pub struct TBoundAudit {
    pub t_max_searched: usize,
    pub max_feasible_t: Option<usize>,
    /// (t, number of witnesses) for every t with at least one witness.
    pub witnesses_by_t: Vec<(usize, u64)>,
}

/// Enumerates every witness with t ≤ 8 and reports the largest t used.
pub fn t_bound_audit(system: &SepSystem) -> TBoundAudit {
    let wide = system.clone().with_t_max(8);
    let (_, _, per_t) = run(&wide, true);
    let max_feasible_t = per_t.iter().map(|&(t, _)| t).max();
    assert!(max_feasible_t.is_none_or(|t| t <= T_MAX), "witness with t > {T_MAX}");
    TBoundAudit { t_max_searched: 8, max_feasible_t, witnesses_by_t: per_t }
}
