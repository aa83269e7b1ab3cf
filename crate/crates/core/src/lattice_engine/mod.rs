//! Integer lattices around Z[10A₂] ⊕ U(m) and their overlattices.
//!
//! Coordinates of the base lattice are ordered c₁, d₁, …, c₁₀, d₁₀, e, f.

mod line_config;
mod intmat;
mod overlattice;
mod roots;
mod u9;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

pub use line_config::{line_configuration, LineConfigReport};
pub use intmat::{det as big_det, hnf, in_row_lattice, inertia, smith_invariants, BigMatrix};
pub use overlattice::{lift_word, overlattice, OverlatticeBasis};
pub use roots::{
    a2_component_table, brute_force_report, criterion_extra_roots, criterion_u_exists, A2Vector,
    RootReport,
};
pub use u9::{random_valid_u9_subgroup, u9_quotient_3elementary, U9Word};

pub const RANK: usize = 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("unsupported U(m) parameter m = {0}")]
    BadM(u32),
    #[error("Gram matrix is singular")]
    Singular,
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("code of width {found} does not fit U({m}) (expected width {expected})")]
    WidthMismatch { m: u32, expected: usize, found: usize },
    #[error("code is not isotropic: {0}")]
    NotIsotropic(String),
    #[error("generators span rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("generator products are not integral")]
    NonIntegral,
    #[error("vector length {found} does not match lattice rank {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// A lattice given by its Gram matrix in some basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerLattice {
    gram: Vec<Vec<i64>>,
}

impl IntegerLattice {
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) {
            return Err(LatticeError::NotSymmetric);
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(LatticeError::NotSymmetric);
                }
            }
        }
        let lat = IntegerLattice { gram };
        if lat.det().is_zero() {
            return Err(LatticeError::Singular);
        }
        Ok(lat)
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn is_even(&self) -> bool {
        self.gram.iter().enumerate().all(|(i, r)| r[i] % 2 == 0)
    }

    pub fn det(&self) -> BigInt {
        intmat::det(&intmat::to_big(&self.gram))
    }

    /// x·y under the form, for integer coordinate vectors.
    pub fn product(&self, x: &[i64], y: &[i64]) -> i64 {
        let mut s = 0i64;
        for (i, row) in self.gram.iter().enumerate() {
            if x[i] == 0 {
                continue;
            }
            let t: i64 = row.iter().zip(y).map(|(g, v)| g * v).sum();
            s += x[i] * t;
        }
        s
    }

    /// x·y for rational coordinate vectors.
    pub fn product_rational(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        let mut s = BigRational::zero();
        for (i, row) in self.gram.iter().enumerate() {
            if x[i].is_zero() {
                continue;
            }
            let mut t = BigRational::zero();
            for (g, v) in row.iter().zip(y) {
                if *g != 0 && !v.is_zero() {
                    t += v * BigRational::from_integer(BigInt::from(*g));
                }
            }
            s += &x[i] * t;
        }
        s
    }

    pub fn to_json(&self) -> GramJson {
        GramJson { rank: self.rank(), rows: self.gram.clone() }
    }
}

/// Serialized Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct GramJson {
    pub rank: usize,
    pub rows: Vec<Vec<i64>>,
}

/// Summary of a lattice's discriminant data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscReport {
    pub det: i64,
    pub elementary_divisors: Vec<i64>,
    pub signature: (usize, usize),
    pub even: bool,
}

impl DiscReport {
    pub fn of(lattice: &IntegerLattice) -> Result<Self, LatticeError> {
        Ok(DiscReport {
            det: lattice.det().to_i64().expect("determinant fits in i64"),
            elementary_divisors: disc_group(lattice)?,
            signature: signature(lattice),
            even: lattice.is_even(),
        })
    }
}

/// Gram matrix of Z[10A₂] ⊕ U(m).
pub fn gram_base(m: u32) -> Result<IntegerLattice, LatticeError> {
    if !matches!(m, 1 | 3 | 9) {
        return Err(LatticeError::BadM(m));
    }
    let mut g = vec![vec![0i64; RANK]; RANK];
    for i in 0..10 {
        let (c, d) = (2 * i, 2 * i + 1);
        g[c][c] = -2;
        g[d][d] = -2;
        g[c][d] = 1;
        g[d][c] = 1;
    }
    g[20][21] = m as i64;
    g[21][20] = m as i64;
    Ok(IntegerLattice { gram: g })
}

/// Nontrivial invariant factors of the discriminant group.
pub fn disc_group(lattice: &IntegerLattice) -> Result<Vec<i64>, LatticeError> {
    let (divs, zeros) = intmat::smith_invariants(&intmat::to_big(&lattice.gram));
    if zeros > 0 {
        return Err(LatticeError::Singular);
    }
    Ok(divs.iter().map(|d| d.to_i64().expect("invariant factor fits in i64")).collect())
}

/// (n₊, n₋) by exact symmetric elimination.
pub fn signature(lattice: &IntegerLattice) -> (usize, usize) {
    let (p, n, _) = intmat::inertia(&intmat::to_big(&lattice.gram));
    (p, n)
}

/// Gram matrix of a full-rank sublattice of ℚ ⊗ base spanned by rational
/// generators, after reduction to a triangular basis.
pub fn span_lattice(
    generators: &[Vec<BigRational>],
    base: &IntegerLattice,
) -> Result<(Vec<Vec<BigRational>>, IntegerLattice), LatticeError> {
    let n = base.rank();
    if let Some(g) = generators.iter().find(|g| g.len() != n) {
        return Err(LatticeError::LengthMismatch { expected: n, found: g.len() });
    }
    let mut denom = BigInt::one();
    for g in generators {
        for v in g {
            denom = denom.lcm(v.denom());
        }
    }
    let scaled: BigMatrix = generators
        .iter()
        .map(|g| g.iter().map(|v| (v * BigRational::from_integer(denom.clone())).to_integer()).collect())
        .collect();
    let h = intmat::hnf(&scaled);
    if h.len() != n {
        return Err(LatticeError::RankDeficient { rank: h.len(), expected: n });
    }
    let basis: Vec<Vec<BigRational>> = h
        .iter()
        .map(|r| r.iter().map(|v| BigRational::new(v.clone(), denom.clone())).collect())
        .collect();
    let mut gram = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i..n {
            let p = base.product_rational(&basis[i], &basis[j]);
            if !p.is_integer() {
                return Err(LatticeError::NonIntegral);
            }
            let v = p.to_integer().to_i64().ok_or(LatticeError::NonIntegral)?;
            gram[i][j] = v;
            gram[j][i] = v;
        }
    }
    let lat = IntegerLattice::new(gram)?;
    Ok((basis, lat))
}

/// Determinant of the lattice spanned by rational generators.
pub fn span_discriminant(
    generators: &[Vec<BigRational>],
    base: &IntegerLattice,
) -> Result<i64, LatticeError> {
    let (_, lat) = span_lattice(generators, base)?;
    Ok(lat.det().to_i64().expect("determinant fits in i64"))
}

pub(crate) fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
