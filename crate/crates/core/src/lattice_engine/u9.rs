//! Subgroups H of F₃¹⁰ ⊕ (ℤ/9)², the discriminant group of
//! Z[10A₂] ⊕ U(9), and whether H^⊥/H is 3-elementary.
//!
//! The group is modelled as ℤ¹² / diag(3, …, 3, 9, 9) with bilinear form
//! b(u, v) = (−6Σxᵢx′ᵢ + y₁y′₂ + y₂y′₁)/9 mod 1.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;

use super::{intmat, LatticeError};
use crate::disc_forms::{is_admissible, is_isotropic_by_congruence, Ambient};
use crate::gf3_linear::{TernaryCode, TernaryWord, X_WIDTH};

const N: usize = X_WIDTH + 2;

/// x ∈ F₃¹⁰ and y ∈ (ℤ/9)².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct U9Word {
    pub x: [u8; X_WIDTH],
    pub y: [u8; 2],
}

impl U9Word {
    fn moduli(i: usize) -> i64 {
        if i < X_WIDTH {
            3
        } else {
            9
        }
    }

    fn coords(&self) -> [i64; N] {
        let mut c = [0i64; N];
        for i in 0..X_WIDTH {
            c[i] = self.x[i] as i64;
        }
        c[X_WIDTH] = self.y[0] as i64;
        c[X_WIDTH + 1] = self.y[1] as i64;
        c
    }

    /// The F₃-word (x, y/3) for tails in 3ℤ/9.
    fn reduced(&self) -> Option<TernaryWord> {
        if self.y.iter().any(|&v| v % 3 != 0) {
            return None;
        }
        let mut w = [0u8; N];
        w[..X_WIDTH].copy_from_slice(&self.x);
        w[X_WIDTH] = self.y[0] / 3;
        w[X_WIDTH + 1] = self.y[1] / 3;
        Some(TernaryWord::new(&w).expect("residues"))
    }
}

/// Linear functional v ↦ 9·b(u, v) mod 9 as an integer row.
fn pairing_row(u: &U9Word) -> [i64; N] {
    let c = u.coords();
    let mut row = [0i64; N];
    for i in 0..X_WIDTH {
        row[i] = (-6 * c[i]).rem_euclid(9);
    }
    row[X_WIDTH] = c[X_WIDTH + 1];
    row[X_WIDTH + 1] = c[X_WIDTH];
    row
}

/// Whether H^⊥/H is 3-elementary, for H generated by `generators`.
///
/// Requires tails in 3ℤ/9, H isotropic and H ∩ Disc U(9) = 0.
pub fn u9_quotient_3elementary(generators: &[U9Word]) -> Result<bool, LatticeError> {
    let mut reduced = Vec::with_capacity(generators.len());
    for g in generators {
        if g.x.iter().any(|&v| v > 2) || g.y.iter().any(|&v| v > 8) {
            return Err(LatticeError::Precondition("entries out of range".into()));
        }
        reduced.push(g.reduced().ok_or_else(|| {
            LatticeError::Precondition("tails must lie in 3ℤ/9ℤ".into())
        })?);
    }
    let code = TernaryCode::from_rows(N, &reduced).expect("width 12");
    // q(x, 3η) = −2wt(x)/3 + 2η₁η₂ ≡ −2wt(x)/3 mod 2
    let x_only: Vec<TernaryWord> = code
        .codewords()
        .map(|w| TernaryWord::new(w.x()).expect("residues"))
        .collect();
    if !x_only.iter().all(|w| w.wt() % 3 == 0) {
        return Err(LatticeError::Precondition("H is not isotropic".into()));
    }
    debug_assert!(is_isotropic_by_congruence(Ambient::A10, &TernaryCode::from_rows(X_WIDTH, &x_only).unwrap()));
    if !is_admissible(&code) {
        return Err(LatticeError::Precondition("H meets the U(9) summand".into()));
    }

    // preimage of H^⊥ in ℤ¹²: kernel of v ↦ (9·b(h_j, v))_j mod 9
    let r = generators.len();
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for i in 0..N {
        let mut row = vec![BigInt::zero(); r + N];
        for (j, g) in generators.iter().enumerate() {
            row[j] = BigInt::from(pairing_row(g)[i]);
        }
        row[r + i] = BigInt::from(1);
        rows.push(row);
    }
    for j in 0..r {
        let mut row = vec![BigInt::zero(); r + N];
        row[j] = BigInt::from(9);
        rows.push(row);
    }
    let h = intmat::hnf(&rows);
    let kernel: Vec<Vec<BigInt>> = h
        .into_iter()
        .filter(|row| row[..r].iter().all(Zero::is_zero))
        .map(|row| row[r..].to_vec())
        .collect();
    debug_assert_eq!(kernel.len(), N);

    // preimage of H: generators plus the relation lattice
    let mut h_rows: Vec<Vec<BigInt>> = generators
        .iter()
        .map(|g| g.coords().iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    for i in 0..N {
        let mut row = vec![BigInt::zero(); N];
        row[i] = BigInt::from(U9Word::moduli(i));
        h_rows.push(row);
    }
    let l_h = intmat::hnf(&h_rows);

    Ok(kernel.iter().all(|z| {
        let z3: Vec<BigInt> = z.iter().map(|v| v * 3).collect();
        intmat::in_row_lattice(&l_h, &z3)
    }))
}

/// A random subgroup satisfying the preconditions of
/// [`u9_quotient_3elementary`]: an F₃-code of dimension `dim` whose x-parts
/// all have weight divisible by 3 and whose x-projection is injective, with
/// tails scaled into 3ℤ/9. Valid subgroups have dimension at most 4.
pub fn random_valid_u9_subgroup<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Option<Vec<U9Word>> {
    if dim > 4 {
        return None;
    }
    'restart: for _ in 0..1000 {
        let mut rows: Vec<TernaryWord> = Vec::new();
        while rows.len() < dim {
            let mut found = false;
            for _ in 0..200 {
                let mut w = [0u8; N];
                for v in w.iter_mut() {
                    *v = rng.random_range(0..3);
                }
                let cand = TernaryWord::new(&w).unwrap();
                let mut ext = rows.clone();
                ext.push(cand);
                let code = TernaryCode::from_rows(N, &ext).unwrap();
                if code.dim() == ext.len()
                    && is_admissible(&code)
                    && code.codewords().all(|c| c.wt() % 3 == 0)
                {
                    rows = ext;
                    found = true;
                    break;
                }
            }
            if !found {
                continue 'restart;
            }
        }
        return Some(
            rows.iter()
                .map(|w| {
                    let mut x = [0u8; X_WIDTH];
                    x.copy_from_slice(w.x());
                    U9Word { x, y: [3 * w.tail()[0], 3 * w.tail()[1]] }
                })
                .collect(),
        );
    }
    None
}
