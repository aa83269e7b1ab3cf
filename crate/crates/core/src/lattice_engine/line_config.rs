//! The 28 classes attached to the triple cover W³ = (x³ − x)(y³ − y): the
//! curves E, F, the twenty exceptional curves, and six line classes
//! l̃_α, m̃_α.

use num_rational::BigRational;
use serde::Serialize;

use super::{gram_base, ratio, span_discriminant, LatticeError, RANK};
use crate::code_search::builtin;
use crate::disc_forms::{codes_equivalent, SignedPermutation};
use crate::gf3_linear::{TernaryCode, TernaryWord, X_WIDTH};

const E: usize = 20;
const F: usize = 21;

#[derive(Debug, Clone, Serialize)]
pub struct LineConfigReport {
    pub discriminant: i64,
    pub words: Vec<TernaryWord>,
    pub code_dim: usize,
    pub code_matrix: Vec<Vec<u8>>,
    pub witness_to_c1: Option<SignedPermutation>,
}

impl LineConfigReport {
    /// Discriminant −9, a 5-dimensional code, and a verified equivalence.
    pub fn matches_expected(&self) -> bool {
        self.discriminant == -9 && self.code_dim == 5 && self.witness_to_c1.is_some()
    }
}

fn unit(i: usize) -> Vec<BigRational> {
    (0..RANK).map(|j| ratio((i == j) as i64, 1)).collect()
}

/// A_i = −(cᵢ + 2dᵢ)/3.
fn a_class(i: usize, v: &mut [BigRational]) {
    v[2 * i] -= ratio(1, 3);
    v[2 * i + 1] -= ratio(2, 3);
}

/// A′_i = −(2cᵢ + dᵢ)/3.
fn a_prime_class(i: usize, v: &mut [BigRational]) {
    v[2 * i] -= ratio(2, 3);
    v[2 * i + 1] -= ratio(1, 3);
}

/// The six line classes, l̃₀, l̃₁, l̃₂, m̃₀, m̃₁, m̃₂ (components 0-based).
pub fn line_classes() -> Vec<Vec<BigRational>> {
    let mut out = Vec::new();
    for alpha in 0..3 {
        let mut v = vec![ratio(0, 1); RANK];
        for i in 0..3 {
            a_class(3 * alpha + i, &mut v);
        }
        v[E] += ratio(1, 3);
        out.push(v);
    }
    for alpha in 0..3 {
        let mut v = vec![ratio(0, 1); RANK];
        for i in 0..3 {
            a_prime_class(alpha + 3 * i, &mut v);
        }
        v[F] += ratio(1, 3);
        out.push(v);
    }
    out
}

/// Class in F₃¹⁰ ⊕ F₃² of a vector of Z[10A₂]∨ ⊕ U(3)∨.
///
/// The component (s·c + t·d)/3 has class s mod 3 in units of γ = (c + 2d)/3;
/// e/3 = f∨ lands in slot 2 and f/3 = e∨ in slot 1.
pub fn discriminant_word(v: &[BigRational]) -> TernaryWord {
    let third = |q: &BigRational| -> u8 {
        let t = q * ratio(3, 1);
        assert!(t.is_integer(), "vector is not in the dual lattice");
        let n: i64 = t.to_integer().try_into().expect("small");
        n.rem_euclid(3) as u8
    };
    let mut w = [0u8; X_WIDTH + 2];
    for i in 0..X_WIDTH {
        let s = third(&v[2 * i]);
        let t = third(&v[2 * i + 1]);
        assert_eq!((2 * s) % 3, t, "component is not a multiple of γ");
        w[i] = s;
    }
    w[X_WIDTH] = third(&v[F]);
    w[X_WIDTH + 1] = third(&v[E]);
    TernaryWord::new(&w).expect("residues")
}

pub fn line_configuration() -> Result<LineConfigReport, LatticeError> {
    let base = gram_base(3)?;
    let lines = line_classes();
    let mut gens: Vec<Vec<BigRational>> = (0..RANK).map(unit).collect();
    gens.extend(lines.iter().cloned());
    let discriminant = span_discriminant(&gens, &base)?;
    let words: Vec<TernaryWord> = lines.iter().map(|v| discriminant_word(v)).collect();
    let code = TernaryCode::from_rows(X_WIDTH + 2, &words).expect("width 12");
    let c1 = builtin("C1").expect("builtin");
    let witness_to_c1 = codes_equivalent(&code, &c1);
    if let Some(g) = &witness_to_c1 {
        assert_eq!(g.apply_code(&code), c1);
    }
    Ok(LineConfigReport {
        discriminant,
        code_dim: code.dim(),
        code_matrix: code.matrix(),
        words,
        witness_to_c1,
    })
}
