//! Discriminant quadratic forms of Z[10A₂] ⊕ U(m) and the code predicates
//! built on them.
//!
//! The discriminant group of Z[10A₂] is F₃¹⁰ with basis γᵢ = (cᵢ + 2dᵢ)/3
//! and form q(x) = −2(x₁² + ⋯ + x₁₀²)/3 in ℚ/2ℤ. The U(m) summand adds
//! (ℤ/m)² with basis ē∨, f̄∨ and q(y) = 2y₁y₂/m. Tail slot 1 carries ē∨ and
//! slot 2 carries f̄∨; the group [`SignedPermutation`] contains the slot
//! swap, so every predicate here is insensitive to that choice.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf3_linear::{weight_enumerator, TernaryCode, TernaryWord, X_WIDTH};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("word width {found} does not match ambient {ambient:?} (width {expected})")]
    WidthMismatch { ambient: Ambient, expected: usize, found: usize },
    #[error("tail residue {0} out of range for the ambient")]
    BadTail(u32),
}

/// The three discriminant groups that occur.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ambient {
    /// F₃¹⁰, from Z[10A₂] ⊕ U(1).
    A10,
    /// F₃¹⁰ ⊕ F₃², from Z[10A₂] ⊕ U(3).
    A10xU3,
    /// F₃¹⁰ ⊕ (ℤ/9)², from Z[10A₂] ⊕ U(9).
    A10xU9,
}

impl Ambient {
    /// The m of the U(m) summand.
    pub fn m(self) -> u32 {
        match self {
            Ambient::A10 => 1,
            Ambient::A10xU3 => 3,
            Ambient::A10xU9 => 9,
        }
    }

    pub fn from_m(m: u32) -> Option<Ambient> {
        match m {
            1 => Some(Ambient::A10),
            3 => Some(Ambient::A10xU3),
            9 => Some(Ambient::A10xU9),
            _ => None,
        }
    }

    /// Width of a ternary word for this ambient (tail omitted for U(1)).
    pub fn word_width(self) -> usize {
        match self {
            Ambient::A10 => X_WIDTH,
            _ => X_WIDTH + 2,
        }
    }
}

/// A value in ℚ/2ℤ, stored as the reduced representative in [0, 2).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QMod2(Ratio<i64>);

impl QMod2 {
    pub fn new(numer: i64, denom: i64) -> Self {
        let r = Ratio::new(numer, denom);
        let two = Ratio::from_integer(2);
        let k = (r / two).floor();
        QMod2(r - k * two)
    }

    pub fn zero() -> Self {
        QMod2(Ratio::from_integer(0))
    }

    pub fn is_zero(&self) -> bool {
        *self.0.numer() == 0
    }

    pub fn ratio(&self) -> Ratio<i64> {
        self.0
    }

    pub fn add(self, other: QMod2) -> QMod2 {
        let s = self.0 + other.0;
        QMod2::new(*s.numer(), *s.denom())
    }
}

impl fmt::Display for QMod2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for QMod2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod 2", self.0)
    }
}

/// An element of a discriminant group: x ∈ F₃¹⁰ and a tail in (ℤ/m)².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DiscElement {
    pub x: [u8; X_WIDTH],
    pub tail: [u32; 2],
}

impl DiscElement {
    pub fn from_word(word: &TernaryWord) -> Self {
        let mut x = [0u8; X_WIDTH];
        x.copy_from_slice(&word.as_slice()[..X_WIDTH]);
        let mut tail = [0u32; 2];
        for (t, &v) in tail.iter_mut().zip(word.tail()) {
            *t = v as u32;
        }
        DiscElement { x, tail }
    }
}

/// A finite quadratic form: one of the three ambients with its q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FormSpec {
    pub ambient: Ambient,
}

impl FormSpec {
    pub fn new(ambient: Ambient) -> Self {
        FormSpec { ambient }
    }

    pub fn u1() -> Self {
        Self::new(Ambient::A10)
    }

    pub fn u3() -> Self {
        Self::new(Ambient::A10xU3)
    }

    pub fn u9() -> Self {
        Self::new(Ambient::A10xU9)
    }

    /// q(x, y) = −2Σxᵢ²/3 + 2y₁y₂/m mod 2.
    pub fn q(&self, elem: &DiscElement) -> Result<QMod2, FormError> {
        let m = self.ambient.m() as i64;
        for &t in &elem.tail {
            if t as i64 >= m.max(1) && m > 1 {
                return Err(FormError::BadTail(t));
            }
        }
        let sq: i64 = elem.x.iter().map(|&v| (v as i64) * (v as i64)).sum();
        let x_part = QMod2::new(-2 * sq, 3);
        if m == 1 {
            return Ok(x_part);
        }
        let y = QMod2::new(2 * elem.tail[0] as i64 * elem.tail[1] as i64, m);
        Ok(x_part.add(y))
    }

    /// b(u, v) = (q(u+v) − q(u) − q(v))/2 in ℚ/ℤ, as a representative in [0, 1).
    pub fn b(&self, u: &DiscElement, v: &DiscElement) -> Result<Ratio<i64>, FormError> {
        let m = self.ambient.m().max(1);
        let mut s = DiscElement { x: [0; X_WIDTH], tail: [0; 2] };
        for i in 0..X_WIDTH {
            s.x[i] = (u.x[i] + v.x[i]) % 3;
        }
        for j in 0..2 {
            s.tail[j] = if m == 1 { 0 } else { (u.tail[j] + v.tail[j]) % m };
        }
        let diff = self.q(&s)?.ratio() - self.q(u)?.ratio() - self.q(v)?.ratio();
        let half = diff / Ratio::from_integer(2);
        Ok(half - half.floor())
    }

    fn check_width(&self, word: &TernaryWord) -> Result<(), FormError> {
        let expected = self.ambient.word_width();
        if word.width() != expected {
            return Err(FormError::WidthMismatch {
                ambient: self.ambient,
                expected,
                found: word.width(),
            });
        }
        Ok(())
    }
}

/// q of a ternary word in the A10 or A10xU3 ambient.
pub fn q_value(spec: &FormSpec, word: &TernaryWord) -> Result<QMod2, FormError> {
    spec.check_width(word)?;
    spec.q(&DiscElement::from_word(word))
}

/// Whether q vanishes on every codeword.
pub fn is_isotropic(spec: &FormSpec, code: &TernaryCode) -> Result<bool, FormError> {
    for w in code.codewords() {
        if !q_value(spec, &w)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The congruence form of isotropy: wt(x) ≡ y₁y₂ (mod 3) for U(3),
/// wt(x) ≡ 0 (mod 3) for U(1).
pub fn word_isotropic_by_congruence(ambient: Ambient, word: &TernaryWord) -> bool {
    let wt = word.wt() as u32;
    match ambient {
        Ambient::A10 => wt % 3 == 0,
        Ambient::A10xU3 => {
            let t = word.tail();
            wt % 3 == (t[0] as u32 * t[1] as u32) % 3
        }
        Ambient::A10xU9 => {
            // tails of ternary words are read as residues in {0,1,2} ⊂ ℤ/9
            let t = word.tail();
            let y = 2 * t[0] as i64 * t[1] as i64;
            // −2wt/3 + 2y₁y₂/9 ≡ 0 mod 2  ⟺  −6wt + y ≡ 0 mod 18
            (-6 * wt as i64 + y).rem_euclid(18) == 0
        }
    }
}

pub fn is_isotropic_by_congruence(ambient: Ambient, code: &TernaryCode) -> bool {
    code.codewords().all(|w| word_isotropic_by_congruence(ambient, &w))
}

/// No nonzero codeword has zero x-part.
pub fn is_admissible(code: &TernaryCode) -> bool {
    code.codewords().all(|w| w.is_zero() || w.wt() > 0)
}

/// Every nonzero word has wt(x) ≥ 3, and wt(x) = 3 forces a nonzero tail.
pub fn has_weight3_property(code: &TernaryCode) -> bool {
    code.codewords().all(|w| word_has_weight3_property(&w))
}

pub fn word_has_weight3_property(w: &TernaryWord) -> bool {
    if w.is_zero() {
        return true;
    }
    let wt = w.wt();
    wt > 3 || (wt == 3 && w.tail().iter().any(|&t| t != 0))
}

/// An element of the group G generated by coordinate permutations of the
/// x-part, independent x-sign flips, the tail-slot swap and a global tail
/// sign.
///
/// Acting on a word w, the image has `out[i] = ±w[sigma[i]]` on the
/// x-part (sign from `negate[i]`) and `out[10+k] = ±w[10 + τ(k)]` on the
/// tail (τ the swap when `tail_swap`, sign from `tail_negate`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignedPermutation {
    pub sigma: [u8; X_WIDTH],
    pub negate: [bool; X_WIDTH],
    pub tail_swap: bool,
    pub tail_negate: bool,
}

impl SignedPermutation {
    pub fn identity() -> Self {
        let mut sigma = [0u8; X_WIDTH];
        for (i, s) in sigma.iter_mut().enumerate() {
            *s = i as u8;
        }
        SignedPermutation { sigma, negate: [false; X_WIDTH], tail_swap: false, tail_negate: false }
    }

    pub fn is_valid(&self) -> bool {
        let mut seen = [false; X_WIDTH];
        for &s in &self.sigma {
            if s as usize >= X_WIDTH || seen[s as usize] {
                return false;
            }
            seen[s as usize] = true;
        }
        true
    }

    pub fn apply(&self, word: &TernaryWord) -> TernaryWord {
        let mut out = *word;
        for i in 0..X_WIDTH.min(word.width()) {
            let v = word.get(self.sigma[i] as usize);
            out.set(i, if self.negate[i] { (3 - v) % 3 } else { v });
        }
        if word.width() == X_WIDTH + 2 {
            for k in 0..2 {
                let src = if self.tail_swap { 1 - k } else { k };
                let v = word.get(X_WIDTH + src);
                out.set(X_WIDTH + k, if self.tail_negate { (3 - v) % 3 } else { v });
            }
        }
        out
    }

    /// `self ∘ other`: first apply `other`, then `self`.
    pub fn compose(&self, other: &SignedPermutation) -> SignedPermutation {
        let mut sigma = [0u8; X_WIDTH];
        let mut negate = [false; X_WIDTH];
        for i in 0..X_WIDTH {
            let j = self.sigma[i] as usize;
            sigma[i] = other.sigma[j];
            negate[i] = self.negate[i] ^ other.negate[j];
        }
        SignedPermutation {
            sigma,
            negate,
            tail_swap: self.tail_swap ^ other.tail_swap,
            tail_negate: self.tail_negate ^ other.tail_negate,
        }
    }

    pub fn inverse(&self) -> SignedPermutation {
        let mut sigma = [0u8; X_WIDTH];
        let mut negate = [false; X_WIDTH];
        for i in 0..X_WIDTH {
            let j = self.sigma[i] as usize;
            sigma[j] = i as u8;
            negate[j] = self.negate[i];
        }
        SignedPermutation { sigma, negate, tail_swap: self.tail_swap, tail_negate: self.tail_negate }
    }

    pub fn apply_code(&self, code: &TernaryCode) -> TernaryCode {
        let rows: Vec<TernaryWord> = code.rows().iter().map(|r| self.apply(r)).collect();
        TernaryCode::from_rows(code.width(), &rows).expect("widths preserved")
    }

    /// Draws a uniformly random group element.
    pub fn random<R: rand::Rng + ?Sized>(rng: &mut R) -> Self {
        use rand::seq::SliceRandom;
        let mut g = Self::identity();
        g.sigma.shuffle(rng);
        for n in g.negate.iter_mut() {
            *n = rng.random_bool(0.5);
        }
        g.tail_swap = rng.random_bool(0.5);
        g.tail_negate = rng.random_bool(0.5);
        g
    }
}

pub fn apply_g(g: &SignedPermutation, word: &TernaryWord) -> TernaryWord {
    g.apply(word)
}

/// Per-coordinate invariant: for each weight w, the number of codewords of
/// x-weight w that are nonzero at the coordinate.
fn coordinate_invariants(words: &[TernaryWord], width: usize) -> Vec<[u32; X_WIDTH + 1]> {
    let mut inv = vec![[0u32; X_WIDTH + 1]; width];
    for w in words {
        let wt = w.wt();
        for (i, slot) in inv.iter_mut().enumerate() {
            if w.get(i) != 0 {
                slot[wt] += 1;
            }
        }
    }
    inv
}

struct EquivalenceSearch<'a> {
    words_a: &'a [TernaryWord],
    inv_a: Vec<[u32; X_WIDTH + 1]>,
    inv_b: Vec<[u32; X_WIDTH + 1]>,
    /// Sorted, deduplicated projections of B onto its first `d` positions in
    /// search order, for each depth d.
    proj_b: Vec<Vec<u32>>,
    /// B positions in the order they are assigned.
    order: Vec<usize>,
    width: usize,
}

impl EquivalenceSearch<'_> {
    /// Assigns position `order[depth]`; `partial[w]` holds the projection of
    /// g(a_w) onto the already-assigned positions.
    fn search(
        &self,
        depth: usize,
        partial: &[u32],
        g: &mut SignedPermutation,
        used: &mut [bool; X_WIDTH],
    ) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let pos = self.order[depth];
        if pos >= X_WIDTH {
            // tail positions are handled together at depth 0..2
            debug_assert_eq!(depth, 0);
            for (swap, neg) in [(false, false), (false, true), (true, false), (true, true)] {
                let src0 = if swap { X_WIDTH + 1 } else { X_WIDTH };
                let src1 = if swap { X_WIDTH } else { X_WIDTH + 1 };
                if self.inv_a[src0] != self.inv_b[X_WIDTH] || self.inv_a[src1] != self.inv_b[X_WIDTH + 1] {
                    continue;
                }
                let next: Vec<u32> = self
                    .words_a
                    .iter()
                    .zip(partial)
                    .map(|(w, &p)| {
                        let f = |v: u8| if neg { (3 - v) % 3 } else { v } as u32;
                        (p * 3 + f(w.get(src0))) * 3 + f(w.get(src1))
                    })
                    .collect();
                if !self.matches(&next, 2) {
                    continue;
                }
                g.tail_swap = swap;
                g.tail_negate = neg;
                if self.search(2, &next, g, used) {
                    return true;
                }
            }
            return false;
        }
        for src in 0..X_WIDTH {
            if used[src] || self.inv_a[src] != self.inv_b[pos] {
                continue;
            }
            for neg in [false, true] {
                let next: Vec<u32> = self
                    .words_a
                    .iter()
                    .zip(partial)
                    .map(|(w, &p)| {
                        let v = w.get(src);
                        p * 3 + if neg { (3 - v) % 3 } else { v } as u32
                    })
                    .collect();
                if !self.matches(&next, depth + 1) {
                    continue;
                }
                used[src] = true;
                g.sigma[pos] = src as u8;
                g.negate[pos] = neg;
                if self.search(depth + 1, &next, g, used) {
                    return true;
                }
                used[src] = false;
            }
        }
        false
    }

    fn matches(&self, partial: &[u32], depth: usize) -> bool {
        let mut p = partial.to_vec();
        p.sort_unstable();
        p.dedup();
        p == self.proj_b[depth]
    }
}

/// Searches for g ∈ G with g(A) = B.
///
/// Depth-first over the images of B's coordinates in fixed order (tail
/// first, then x₁..x₁₀), trying source coordinates in increasing order and
/// the positive sign first. A coordinate may only be matched with one that
/// has the same invariant, and every partial assignment must project A onto
/// exactly the projection of B. The first complete assignment is returned
/// after re-canonicalizing g(A) and comparing with B.
pub fn codes_equivalent(code_a: &TernaryCode, code_b: &TernaryCode) -> Option<SignedPermutation> {
    if code_a.width() != code_b.width() || code_a.dim() != code_b.dim() {
        return None;
    }
    let width = code_a.width();
    if width != X_WIDTH && width != X_WIDTH + 2 {
        return None;
    }
    if weight_enumerator(code_a) != weight_enumerator(code_b) {
        return None;
    }
    let words_a: Vec<TernaryWord> = code_a.codewords().collect();
    let words_b: Vec<TernaryWord> = code_b.codewords().collect();
    let inv_a = coordinate_invariants(&words_a, width);
    let inv_b = coordinate_invariants(&words_b, width);
    {
        let mut sa = inv_a[..X_WIDTH].to_vec();
        let mut sb = inv_b[..X_WIDTH].to_vec();
        sa.sort();
        sb.sort();
        if sa != sb {
            return None;
        }
    }

    let mut order: Vec<usize> = Vec::new();
    if width == X_WIDTH + 2 {
        order.push(X_WIDTH);
        order.push(X_WIDTH + 1);
    }
    order.extend(0..X_WIDTH);

    let mut proj_b = vec![vec![0u32]];
    let mut acc = vec![0u32; words_b.len()];
    for &pos in &order {
        for (a, w) in acc.iter_mut().zip(&words_b) {
            *a = *a * 3 + w.get(pos) as u32;
        }
        let mut p = acc.clone();
        p.sort_unstable();
        p.dedup();
        proj_b.push(p);
    }

    let search = EquivalenceSearch { words_a: &words_a, inv_a, inv_b, proj_b, order, width };
    let mut g = SignedPermutation::identity();
    let mut used = [false; X_WIDTH];
    let start = vec![0u32; words_a.len()];
    if !search.search(0, &start, &mut g, &mut used) {
        return None;
    }
    debug_assert_eq!(search.width, width);
    if g.apply_code(code_a) == *code_b {
        Some(g)
    } else {
        // projection equality at full depth implies set equality
        unreachable!("equivalence witness failed verification")
    }
}
