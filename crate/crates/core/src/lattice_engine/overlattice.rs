//! The overlattice N_C of Z[10A₂] ⊕ U(m) attached to an isotropic code.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{gram_base, intmat, IntegerLattice, LatticeError, RANK};
use crate::disc_forms::{is_isotropic, Ambient, FormSpec};
use crate::gf3_linear::{TernaryCode, TernaryWord, X_WIDTH};

/// N_C together with the data it was built from. Vectors are stored as
/// integer numerators over the common denominator 3.
#[derive(Debug, Clone)]
pub struct OverlatticeBasis {
    pub m: u32,
    pub base: IntegerLattice,
    /// 3·(lift of each code generator).
    pub lifts: Vec<Vec<i64>>,
    /// 3·(basis vector of N_C), in Hermite form.
    pub basis: Vec<Vec<i64>>,
    /// Gram matrix of N_C in `basis`.
    pub lattice: IntegerLattice,
}

/// 3·(a lift to Z[10A₂]∨ ⊕ U(m)∨ of a discriminant word).
///
/// x_i contributes x_i(cᵢ + 2dᵢ) = 3xᵢγᵢ; for U(3), slot 1 (ē∨ = f/3)
/// contributes y₁·f and slot 2 (f̄∨ = e/3) contributes y₂·e.
pub fn lift_word(m: u32, word: &TernaryWord) -> Vec<i64> {
    let mut v = vec![0i64; RANK];
    for i in 0..X_WIDTH {
        let x = word.get(i) as i64;
        v[2 * i] = x;
        v[2 * i + 1] = 2 * x;
    }
    if m == 3 {
        let t = word.tail();
        v[21] = t[0] as i64;
        v[20] = t[1] as i64;
    }
    v
}

/// Builds N_C from an isotropic code: the span of the base lattice and the
/// lifts of the code generators, reduced to Hermite form.
pub fn overlattice(m: u32, code: &TernaryCode) -> Result<OverlatticeBasis, LatticeError> {
    let ambient = match m {
        1 => Ambient::A10,
        3 => Ambient::A10xU3,
        _ => return Err(LatticeError::BadM(m)),
    };
    if code.width() != ambient.word_width() {
        return Err(LatticeError::WidthMismatch {
            m,
            expected: ambient.word_width(),
            found: code.width(),
        });
    }
    let spec = FormSpec::new(ambient);
    if !is_isotropic(&spec, code).expect("width checked") {
        return Err(LatticeError::NotIsotropic(format!("q is nonzero on some word of\n{}", code.to_text())));
    }
    let base = gram_base(m)?;
    let lifts: Vec<Vec<i64>> = code.rows().iter().map(|r| lift_word(m, r)).collect();
    let mut gens: Vec<Vec<i64>> = (0..RANK)
        .map(|i| (0..RANK).map(|j| if i == j { 3 } else { 0 }).collect())
        .collect();
    gens.extend(lifts.iter().cloned());
    let h = intmat::hnf(&intmat::to_big(&gens));
    let basis: Vec<Vec<i64>> = h
        .iter()
        .map(|r| r.iter().map(|v| v.to_i64().expect("small entries")).collect())
        .collect();
    let mut gram = vec![vec![0i64; RANK]; RANK];
    for i in 0..RANK {
        for j in i..RANK {
            let p = base.product(&basis[i], &basis[j]);
            if p % 9 != 0 {
                return Err(LatticeError::NonIntegral);
            }
            gram[i][j] = p / 9;
            gram[j][i] = p / 9;
        }
    }
    let lattice = IntegerLattice::new(gram)?;
    if !lattice.is_even() {
        return Err(LatticeError::NotIsotropic("overlattice is odd".into()));
    }
    Ok(OverlatticeBasis { m, base, lifts, basis, lattice })
}

impl OverlatticeBasis {
    /// [N_C : base], from the Hermite basis (product of pivots is 3^{22−k}).
    pub fn index(&self) -> u64 {
        let prod: BigInt = intmat::pivot_columns(&intmat::to_big(&self.basis))
            .iter()
            .zip(&self.basis)
            .map(|(&c, r)| BigInt::from(r[c]))
            .product();
        let full = BigInt::from(3u64.pow(RANK as u32));
        assert!(!prod.is_zero());
        (full / prod).to_u64().expect("index fits")
    }
}
