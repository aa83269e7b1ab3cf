//! Linear algebra over F₃: words, codes in reduced row echelon form,
//! codeword enumeration and weight enumerators.
//!
//! Words live in F₃ⁿ with n ∈ {10, 12}. The first ten coordinates are the
//! x-part (one coordinate per A₂ summand); a width-12 word carries two tail
//! coordinates for the U(3) discriminant. Hamming weight always counts the
//! x-part only.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Number of x-coordinates (one per A₂ summand).
pub const X_WIDTH: usize = 10;
/// Largest supported ambient width.
pub const MAX_WIDTH: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Gf3Error {
    #[error("width mismatch: expected {expected}, found {found}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("unsupported width {0} (must be between 1 and 12)")]
    BadWidth(usize),
    #[error("entry {0} is not a residue in {{0,1,2}}")]
    BadEntry(i64),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[inline]
fn add3(a: u8, b: u8) -> u8 {
    (a + b) % 3
}

#[inline]
fn mul3(a: u8, b: u8) -> u8 {
    (a * b) % 3
}

#[inline]
fn inv3(a: u8) -> u8 {
    // 1⁻¹ = 1, 2⁻¹ = 2
    debug_assert!(a != 0);
    a
}

/// An element of F₃ⁿ.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TernaryWord {
    width: u8,
    coords: [u8; MAX_WIDTH],
}

impl TernaryWord {
    pub fn zero(width: usize) -> Self {
        assert!(width >= 1 && width <= MAX_WIDTH, "bad word width {width}");
        TernaryWord { width: width as u8, coords: [0; MAX_WIDTH] }
    }

    /// Builds a word from residues; entries must already lie in {0,1,2}.
    pub fn new(entries: &[u8]) -> Result<Self, Gf3Error> {
        if entries.is_empty() || entries.len() > MAX_WIDTH {
            return Err(Gf3Error::BadWidth(entries.len()));
        }
        let mut w = Self::zero(entries.len());
        for (i, &e) in entries.iter().enumerate() {
            if e > 2 {
                return Err(Gf3Error::BadEntry(e as i64));
            }
            w.coords[i] = e;
        }
        Ok(w)
    }

    /// Builds a word from arbitrary integers, reducing each modulo 3.
    pub fn from_ints(entries: &[i64]) -> Result<Self, Gf3Error> {
        let reduced: Vec<u8> = entries.iter().map(|&e| e.rem_euclid(3) as u8).collect();
        Self::new(&reduced)
    }

    /// Decodes a base-3 index (coordinate 0 is the most significant digit).
    pub fn from_index(width: usize, mut index: u32) -> Self {
        let mut w = Self::zero(width);
        for i in (0..width).rev() {
            w.coords[i] = (index % 3) as u8;
            index /= 3;
        }
        w
    }

    /// Base-3 index of the word, inverse of [`TernaryWord::from_index`].
    pub fn index(&self) -> u32 {
        self.as_slice().iter().fold(0u32, |acc, &c| acc * 3 + c as u32)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width as usize
    }

    #[inline]
    pub fn as_slice(&self) -> &[u8] {
        &self.coords[..self.width()]
    }

    #[inline]
    pub fn get(&self, i: usize) -> u8 {
        self.as_slice()[i]
    }

    pub fn set(&mut self, i: usize, value: u8) {
        assert!(i < self.width() && value < 3);
        self.coords[i] = value;
    }

    /// The x-part: the first `min(10, width)` coordinates.
    pub fn x(&self) -> &[u8] {
        &self.coords[..self.width().min(X_WIDTH)]
    }

    /// Tail coordinates beyond the x-part (empty for width ≤ 10).
    pub fn tail(&self) -> &[u8] {
        if self.width() > X_WIDTH {
            &self.coords[X_WIDTH..self.width()]
        } else {
            &[]
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_slice().iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.width, other.width, "word width mismatch");
        let mut out = *self;
        for i in 0..self.width() {
            out.coords[i] = add3(self.coords[i], other.coords[i]);
        }
        out
    }

    pub fn scale(&self, s: u8) -> Self {
        let mut out = *self;
        for i in 0..self.width() {
            out.coords[i] = mul3(self.coords[i], s % 3);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(2)
    }

    /// Hamming weight of the x-part.
    pub fn wt(&self) -> usize {
        weight(self, X_WIDTH)
    }

    /// Standard dot product over F₃.
    pub fn dot(&self, other: &Self) -> u8 {
        assert_eq!(self.width, other.width, "word width mismatch");
        self.as_slice()
            .iter()
            .zip(other.as_slice())
            .fold(0, |acc, (&a, &b)| add3(acc, mul3(a, b)))
    }
}

impl fmt::Debug for TernaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.x().iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        if !self.tail().is_empty() {
            write!(f, " |")?;
            for c in self.tail() {
                write!(f, " {c}")?;
            }
        }
        write!(f, "]")
    }
}

impl fmt::Display for TernaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.as_slice().iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl Serialize for TernaryWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.as_slice().serialize(s)
    }
}

impl<'de> Deserialize<'de> for TernaryWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<u8>::deserialize(d)?;
        TernaryWord::new(&v).map_err(serde::de::Error::custom)
    }
}

/// Number of nonzero entries among the first `x_width` coordinates.
pub fn weight(word: &TernaryWord, x_width: usize) -> usize {
    let n = x_width.min(word.width());
    word.as_slice()[..n].iter().filter(|&&c| c != 0).count()
}

/// A linear code in F₃ⁿ, stored as its canonical RREF generator matrix.
///
/// Leading entries are 1 and pivot columns strictly increase, so two codes
/// are equal as subspaces iff their generator matrices are equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TernaryCode {
    width: usize,
    rows: Vec<TernaryWord>,
}

/// Serialized as `{width, rows}` with rows in canonical form.
impl Serialize for TernaryCode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("TernaryCode", 2)?;
        st.serialize_field("width", &self.width)?;
        st.serialize_field("rows", &self.rows)?;
        st.end()
    }
}

impl TernaryCode {
    pub fn zero(width: usize) -> Self {
        TernaryCode { width, rows: Vec::new() }
    }

    /// Span of the given rows, all of which must have `width` coordinates.
    pub fn from_rows(width: usize, rows: &[TernaryWord]) -> Result<Self, Gf3Error> {
        if width == 0 || width > MAX_WIDTH {
            return Err(Gf3Error::BadWidth(width));
        }
        for r in rows {
            if r.width() != width {
                return Err(Gf3Error::WidthMismatch { expected: width, found: r.width() });
            }
        }
        Ok(TernaryCode { width, rows: rref_rows(rows.to_vec(), width) })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// RREF generator rows.
    pub fn rows(&self) -> &[TernaryWord] {
        &self.rows
    }

    pub fn size(&self) -> usize {
        3usize.pow(self.dim() as u32)
    }

    /// Pivot column of each RREF row.
    pub fn pivots(&self) -> Vec<usize> {
        self.rows
            .iter()
            .map(|r| r.as_slice().iter().position(|&c| c != 0).expect("RREF row is nonzero"))
            .collect()
    }

    /// Codeword with coefficient vector `coeffs` against the RREF basis.
    pub fn combine(&self, coeffs: &[u8]) -> TernaryWord {
        assert_eq!(coeffs.len(), self.dim());
        let mut w = TernaryWord::zero(self.width);
        for (row, &c) in self.rows.iter().zip(coeffs) {
            if c != 0 {
                w = w.add(&row.scale(c));
            }
        }
        w
    }

    /// Iterates over all 3ᵏ codewords in coefficient-index order.
    pub fn codewords(&self) -> impl Iterator<Item = TernaryWord> + '_ {
        let k = self.dim();
        (0..self.size() as u32).map(move |idx| {
            let coeffs = TernaryWord::from_index(k.max(1), idx);
            if k == 0 {
                TernaryWord::zero(self.width)
            } else {
                self.combine(coeffs.as_slice())
            }
        })
    }

    /// Span of the first `k` RREF rows.
    pub fn leading_subcode(&self, k: usize) -> TernaryCode {
        assert!(k <= self.dim());
        TernaryCode { width: self.width, rows: self.rows[..k].to_vec() }
    }

    /// The code obtained by adjoining `word` to the span.
    pub fn extended(&self, word: &TernaryWord) -> TernaryCode {
        let mut rows = self.rows.clone();
        rows.push(*word);
        TernaryCode { width: self.width, rows: rref_rows(rows, self.width) }
    }

    /// The subcode whose coefficient vectors (w.r.t. the RREF basis) span
    /// the rows of `coeff_rows`.
    pub fn subcode_from_coefficients(&self, coeff_rows: &[Vec<u8>]) -> TernaryCode {
        let rows: Vec<TernaryWord> = coeff_rows.iter().map(|c| self.combine(c)).collect();
        TernaryCode { width: self.width, rows: rref_rows(rows, self.width) }
    }

    /// All subcodes of dimension `k`, each exactly once.
    pub fn subcodes(&self, k: usize) -> Vec<TernaryCode> {
        all_rref_matrices(k, self.dim())
            .into_iter()
            .map(|m| self.subcode_from_coefficients(&m))
            .collect()
    }

    /// Generator matrix in the text format (one row per line).
    pub fn to_text(&self) -> String {
        format_matrix(&self.rows)
    }

    /// Generator matrix as nested vectors, for JSON output.
    pub fn matrix(&self) -> Vec<Vec<u8>> {
        self.rows.iter().map(|r| r.as_slice().to_vec()).collect()
    }
}

impl fmt::Debug for TernaryCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TernaryCode(n={}, k={}) ", self.width, self.dim())?;
        f.debug_list().entries(self.rows.iter()).finish()
    }
}

fn rref_rows(mut rows: Vec<TernaryWord>, width: usize) -> Vec<TernaryWord> {
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r].get(col) != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].scale(inv3(rows[rank].get(col)));
        rows[rank] = pivot;
        for r in 0..rows.len() {
            if r != rank {
                let c = rows[r].get(col);
                if c != 0 {
                    rows[r] = rows[r].add(&pivot.scale(3 - c));
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    rows
}

/// Canonical RREF basis of the row span of `rows`.
pub fn rref(rows: &[TernaryWord]) -> Result<TernaryCode, Gf3Error> {
    let width = rows.first().map(|r| r.width()).unwrap_or(MAX_WIDTH);
    TernaryCode::from_rows(width, rows)
}

/// All 3ᵏ codewords of `code`.
pub fn enumerate_codewords(code: &TernaryCode) -> Vec<TernaryWord> {
    code.codewords().collect()
}

/// Whether `word` lies in the row span, decided by reduction against the RREF.
pub fn membership(code: &TernaryCode, word: &TernaryWord) -> Result<bool, Gf3Error> {
    if word.width() != code.width() {
        return Err(Gf3Error::WidthMismatch { expected: code.width(), found: word.width() });
    }
    let mut w = *word;
    for (row, p) in code.rows().iter().zip(code.pivots()) {
        let c = w.get(p);
        if c != 0 {
            w = w.add(&row.scale(3 - c));
        }
    }
    Ok(w.is_zero())
}

/// Coefficients c₀..c₁₀ of Σ z^{wt(x)} over the codewords.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeightEnumerator(pub [u64; X_WIDTH + 1]);

impl WeightEnumerator {
    pub fn coefficients(&self) -> &[u64; X_WIDTH + 1] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    /// Smallest nonzero weight that occurs, if any.
    pub fn min_nonzero_weight(&self) -> Option<usize> {
        (1..=X_WIDTH).find(|&i| self.0[i] > 0)
    }

    /// Builds an enumerator from (exponent, coefficient) terms.
    pub fn from_terms(terms: &[(usize, u64)]) -> Self {
        let mut c = [0u64; X_WIDTH + 1];
        for &(e, k) in terms {
            c[e] += k;
        }
        WeightEnumerator(c)
    }
}

impl fmt::Display for WeightEnumerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (e, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            parts.push(match e {
                0 => c.to_string(),
                1 => format!("{c}z"),
                _ => format!("{c}z^{e}"),
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl fmt::Debug for WeightEnumerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "we({self})")
    }
}

pub fn weight_enumerator(code: &TernaryCode) -> WeightEnumerator {
    let mut c = [0u64; X_WIDTH + 1];
    for w in code.codewords() {
        c[w.wt()] += 1;
    }
    WeightEnumerator(c)
}

/// Enumerates every k×n RREF matrix over F₃ (as coefficient rows).
pub fn all_rref_matrices(k: usize, n: usize) -> Vec<Vec<Vec<u8>>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut pivots = Vec::with_capacity(k);
    choose_pivots(0, k, n, &mut pivots, &mut out);
    out
}

fn choose_pivots(start: usize, k: usize, n: usize, pivots: &mut Vec<usize>, out: &mut Vec<Vec<Vec<u8>>>) {
    if pivots.len() == k {
        // Free positions: row r, column c > pivots[r], c not a pivot column.
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| ((pivots[r] + 1)..n).map(move |c| (r, c)))
            .filter(|(_, c)| !pivots.contains(c))
            .collect();
        let count = 3u64.pow(free.len() as u32);
        for idx in 0..count {
            let mut m = vec![vec![0u8; n]; k];
            for (r, &p) in pivots.iter().enumerate() {
                m[r][p] = 1;
            }
            let mut v = idx;
            for &(r, c) in &free {
                m[r][c] = (v % 3) as u8;
                v /= 3;
            }
            out.push(m);
        }
        return;
    }
    for p in start..n {
        pivots.push(p);
        choose_pivots(p + 1, k, n, pivots, out);
        pivots.pop();
    }
}

/// Formats rows in the text matrix format.
pub fn format_matrix(rows: &[TernaryWord]) -> String {
    let mut s = String::new();
    for r in rows {
        s.push_str(&r.to_string());
        s.push('\n');
    }
    s
}

/// Parses the text matrix format: one row per line, single digits in
/// {0,1,2} separated by whitespace; blank lines and `#` comments ignored.
pub fn parse_matrix(text: &str) -> Result<Vec<TernaryWord>, Gf3Error> {
    let mut rows = Vec::new();
    let mut width = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut entries = Vec::new();
        for tok in line.split_whitespace() {
            let v: u8 = match tok {
                "0" => 0,
                "1" => 1,
                "2" => 2,
                other => {
                    return Err(Gf3Error::Parse {
                        line: lineno + 1,
                        msg: format!("expected a digit in {{0,1,2}}, found {other:?}"),
                    })
                }
            };
            entries.push(v);
        }
        match width {
            None => width = Some(entries.len()),
            Some(w) if w != entries.len() => {
                return Err(Gf3Error::Parse {
                    line: lineno + 1,
                    msg: format!("row has {} entries, previous rows have {w}", entries.len()),
                })
            }
            _ => {}
        }
        rows.push(TernaryWord::new(&entries).map_err(|e| Gf3Error::Parse {
            line: lineno + 1,
            msg: e.to_string(),
        })?);
    }
    Ok(rows)
}

impl FromStr for TernaryCode {
    type Err = Gf3Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let rows = parse_matrix(s)?;
        rref(&rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[u8]) -> TernaryWord {
        TernaryWord::new(v).unwrap()
    }

    #[test]
    fn weight_counts_x_part_only() {
        let word = w(&[1, 0, 0, 0, 0, 0, 0, 0, 1, 1, 2, 2]);
        assert_eq!(word.wt(), 3);
        assert_eq!(weight(&word, 12), 5);
        assert_eq!(TernaryWord::zero(12).wt(), 0);
        assert_eq!(w(&[1, 0, 0, 0, 0, 0, 1, 1, 1, 1]).wt(), 5);
    }

    #[test]
    fn rref_of_zero_and_scalar_multiples() {
        let z = TernaryWord::zero(12);
        assert_eq!(rref(&[z, z]).unwrap().dim(), 0);
        let a = w(&[0, 2, 1, 0, 0, 1, 2, 0, 0, 1, 1, 0]);
        let code = rref(&[a, a.scale(2)]).unwrap();
        assert_eq!(code.dim(), 1);
        // leading entry normalized to 1
        assert_eq!(code.rows()[0].get(1), 1);
    }

    #[test]
    fn rref_rejects_width_mismatch() {
        let a = TernaryWord::zero(12);
        let b = TernaryWord::zero(10);
        assert!(matches!(rref(&[a, b]), Err(Gf3Error::WidthMismatch { .. })));
        let code = rref(&[a]).unwrap();
        assert!(membership(&code, &b).is_err());
    }

    #[test]
    fn dim_one_enumeration() {
        let a = w(&[1, 2, 0, 0, 0, 0, 0, 0, 0, 1]);
        let code = rref(&[a]).unwrap();
        let mut words = enumerate_codewords(&code);
        words.sort();
        let mut expect = vec![TernaryWord::zero(10), a, a.scale(2)];
        expect.sort();
        assert_eq!(words, expect);
        assert_eq!(enumerate_codewords(&TernaryCode::zero(12)), vec![TernaryWord::zero(12)]);
    }

    #[test]
    fn index_round_trip() {
        for idx in [0u32, 1, 2, 3, 100, 531_440] {
            assert_eq!(TernaryWord::from_index(12, idx).index(), idx);
        }
    }

    #[test]
    fn parse_ignores_comments_and_rejects_bad_digits() {
        let rows = parse_matrix("# header\n1 0 2\n\n0 1 1 # trailing\n").unwrap();
        assert_eq!(rows.len(), 2);
        assert!(parse_matrix("1 0 3\n").is_err());
        assert!(parse_matrix("1 0 1\n1 0\n").is_err());
    }

    #[test]
    fn subcode_counts_match_gaussian_binomials() {
        let code = rref(&[
            w(&[1, 0, 0, 0, 1, 1, 1, 0, 0, 0]),
            w(&[0, 1, 0, 0, 1, 2, 0, 1, 0, 0]),
            w(&[0, 0, 1, 0, 0, 1, 2, 0, 1, 0]),
        ])
        .unwrap();
        // [3 choose 1]_3 = 13, [3 choose 2]_3 = 13
        assert_eq!(code.subcodes(1).len(), 13);
        assert_eq!(code.subcodes(2).len(), 13);
        assert_eq!(code.subcodes(3), vec![code.clone()]);
        assert_eq!(code.subcodes(0), vec![TernaryCode::zero(10)]);
    }

    #[test]
    fn enumerator_display() {
        let e = WeightEnumerator::from_terms(&[(0, 1), (6, 60), (9, 20)]);
        assert_eq!(e.to_string(), "1 + 60z^6 + 20z^9");
        assert_eq!(e.total(), 81);
        assert_eq!(e.min_nonzero_weight(), Some(6));
    }
}
