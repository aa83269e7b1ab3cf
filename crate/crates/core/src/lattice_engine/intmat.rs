//! Exact integer matrix algorithms: Hermite and Smith normal forms,
//! determinants, and inertia of symmetric matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type BigMatrix = Vec<Vec<BigInt>>;

pub fn to_big(rows: &[Vec<i64>]) -> BigMatrix {
    rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
}

/// Row-style Hermite normal form of the row lattice: nonzero rows in echelon
/// form, positive pivots, entries above each pivot reduced into [0, pivot).
pub fn hnf(rows: &[Vec<BigInt>]) -> BigMatrix {
    let mut m: BigMatrix = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..ncols {
        if pivot_row == m.len() {
            break;
        }
        loop {
            // smallest nonzero entry at or below pivot_row
            let best = (pivot_row..m.len())
                .filter(|&r| !m[r][col].is_zero())
                .min_by(|&a, &b| m[a][col].abs().cmp(&m[b][col].abs()));
            let Some(best) = best else { break };
            m.swap(pivot_row, best);
            let mut done = true;
            for r in pivot_row + 1..m.len() {
                if m[r][col].is_zero() {
                    continue;
                }
                let q = m[r][col].div_floor(&m[pivot_row][col]);
                let (head, tail) = m.split_at_mut(r);
                let p = &head[pivot_row];
                for (x, y) in tail[0].iter_mut().zip(p) {
                    *x -= &q * y;
                }
                if !tail[0][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if pivot_row < m.len() && !m[pivot_row][col].is_zero() {
            if m[pivot_row][col].is_negative() {
                for x in m[pivot_row].iter_mut() {
                    *x = -&*x;
                }
            }
            pivots.push((pivot_row, col));
            pivot_row += 1;
        }
    }
    m.truncate(pivot_row);
    for &(pr, col) in &pivots {
        for r in 0..pr {
            let q = m[r][col].div_floor(&m[pr][col]);
            if q.is_zero() {
                continue;
            }
            let p = m[pr].clone();
            for (x, y) in m[r].iter_mut().zip(&p) {
                *x -= &q * y;
            }
        }
    }
    m
}

/// Column index of each row's leading entry in an echelon matrix.
pub fn pivot_columns(echelon: &[Vec<BigInt>]) -> Vec<usize> {
    echelon
        .iter()
        .map(|r| r.iter().position(|v| !v.is_zero()).expect("echelon rows are nonzero"))
        .collect()
}

/// Whether `v` lies in the row lattice of a Hermite form.
pub fn in_row_lattice(echelon: &[Vec<BigInt>], v: &[BigInt]) -> bool {
    let mut rest = v.to_vec();
    for (row, col) in echelon.iter().zip(pivot_columns(echelon)) {
        if rest[col].is_zero() {
            continue;
        }
        let (q, r) = rest[col].div_rem(&row[col]);
        if !r.is_zero() {
            return false;
        }
        for (x, y) in rest.iter_mut().zip(row) {
            *x -= &q * y;
        }
    }
    rest.iter().all(Zero::is_zero)
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(mat: &[Vec<BigInt>]) -> BigInt {
    let n = mat.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: BigMatrix = mat.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Nontrivial invariant factors (d₁ | d₂ | ⋯, all > 1) of the Smith normal
/// form, together with the number of zero invariant factors.
pub fn smith_invariants(mat: &[Vec<BigInt>]) -> (Vec<BigInt>, usize) {
    let mut m: BigMatrix = mat.to_vec();
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    let mut k = 0;
    while k < rows.min(cols) {
        // move the smallest nonzero entry of the trailing block to (k, k)
        let mut best: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if !m[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap(k, bi);
        for row in m.iter_mut() {
            row.swap(k, bj);
        }
        let mut clean = true;
        for i in k + 1..rows {
            if m[i][k].is_zero() {
                continue;
            }
            let q = m[i][k].div_floor(&m[k][k]);
            let pk = m[k].clone();
            for (x, y) in m[i].iter_mut().zip(&pk) {
                *x -= &q * y;
            }
            if !m[i][k].is_zero() {
                clean = false;
            }
        }
        for j in k + 1..cols {
            if m[k][j].is_zero() {
                continue;
            }
            let q = m[k][j].div_floor(&m[k][k]);
            for row in m.iter_mut() {
                let v = &q * &row[k];
                row[j] -= v;
            }
            if !m[k][j].is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // enforce divisibility of the trailing block by the pivot
        let pivot = m[k][k].clone();
        let bad = (k + 1..rows).find(|&i| (k + 1..cols).any(|j| !m[i][j].is_multiple_of(&pivot)));
        if let Some(i) = bad {
            let ri = m[i].clone();
            for (x, y) in m[k].iter_mut().zip(&ri) {
                *x += y;
            }
            continue;
        }
        diag.push(pivot.abs());
        k += 1;
    }
    let zeros = rows.min(cols) - diag.len();
    (diag.into_iter().filter(|d| !d.is_one()).collect(), zeros)
}

/// Inertia (n₊, n₋, n₀) of a symmetric matrix by pivoted symmetric
/// elimination over the rationals.
pub fn inertia(sym: &[Vec<BigInt>]) -> (usize, usize, usize) {
    let n = sym.len();
    let mut m: Vec<Vec<BigRational>> = sym
        .iter()
        .map(|r| r.iter().map(|v| BigRational::from_integer(v.clone())).collect())
        .collect();
    let (mut pos, mut neg) = (0, 0);
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        let diag = active.iter().copied().find(|&i| !m[i][i].is_zero());
        let p = match diag {
            Some(p) => p,
            None => {
                let pair = active.iter().copied().find_map(|i| {
                    active.iter().copied().find(|&j| j != i && !m[i][j].is_zero()).map(|j| (i, j))
                });
                let Some((i, j)) = pair else { break };
                // congruence: row_i += row_j, col_i += col_j gives m[i][i] = 2 m[i][j]
                let rj = m[j].clone();
                for (x, y) in m[i].iter_mut().zip(&rj) {
                    *x += y;
                }
                for row in m.iter_mut() {
                    let v = row[j].clone();
                    row[i] += v;
                }
                i
            }
        };
        let pv = m[p][p].clone();
        if pv.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        active.retain(|&i| i != p);
        for &i in &active {
            if m[i][p].is_zero() {
                continue;
            }
            let f = &m[i][p] / &pv;
            let rp = m[p].clone();
            for (x, y) in m[i].iter_mut().zip(&rp) {
                *x -= &f * y;
            }
            for row in m.iter_mut() {
                let v = &f * &row[p];
                row[i] -= v;
            }
        }
    }
    (pos, neg, n - pos - neg)
}
