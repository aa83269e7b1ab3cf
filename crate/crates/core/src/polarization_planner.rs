//! Existence of polarizations of degree d with root type 10A₂, and concrete
//! plans (code, h = ae + bf) certified by the lattice engine.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code_search::{builtin, subcode_for_sigma, SearchError};
use crate::gf3_linear::TernaryCode;
use crate::lattice_engine::{
    brute_force_report, criterion_extra_roots, criterion_u_exists, overlattice, DiscReport,
    LatticeError, RootReport,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlanError {
    #[error("degree must be positive")]
    NonPositiveDegree,
    #[error("sigma {sigma} out of range for {s_type:?}")]
    SigmaOutOfRange { sigma: u32, s_type: SType },
    #[error("override (a, b) = ({a}, {b}) has 2·m·ab ≠ {d}")]
    OverrideDegree { a: u64, b: u64, d: u64 },
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// The orthogonal complement of the root sublattice: U(1) or U(3).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SType {
    U1,
    U3,
}

impl SType {
    pub fn m(self) -> u32 {
        match self {
            SType::U1 => 1,
            SType::U3 => 3,
        }
    }

    pub fn max_sigma(self) -> u32 {
        match self {
            SType::U1 => 5,
            SType::U3 => 6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeQuery {
    pub d: u64,
    pub sigma: u32,
    pub s_type: SType,
}

/// Everything the plan's validity rests on, recomputed from scratch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificates {
    pub roots: RootReport,
    pub criterion_u_exists: bool,
    pub criterion_extra_roots: bool,
    pub overlattice: DiscReport,
    pub h_squared: u64,
}

impl Certificates {
    /// No short u, no extra roots, no half vector, the criteria agree with
    /// the oracle, and disc N_C = −3^{2σ}.
    pub fn passes(&self, sigma: u32, d: u64) -> bool {
        !self.roots.found_u
            && self.roots.count_extra == 0
            && !self.roots.found_half
            && !self.criterion_u_exists
            && !self.criterion_extra_roots
            && self.overlattice.det == -(3i64.pow(2 * sigma))
            && self.overlattice.elementary_divisors == vec![3; 2 * sigma as usize]
            && self.overlattice.even
            && self.overlattice.signature == (1, 21)
            && self.h_squared == d
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolarizationPlan {
    pub query: DegreeQuery,
    pub a: u64,
    pub b: u64,
    pub code: TernaryCode,
    pub certs: Certificates,
    pub certified: bool,
}

/// U(3): 6 | d. U(1): d = 2ab with a, b ≥ 3 and a ≠ b.
pub fn degree_admissible(d: u64, s_type: SType) -> bool {
    match s_type {
        SType::U3 => d > 0 && d % 6 == 0,
        SType::U1 => u1_factorization(d).is_some(),
    }
}

/// The lexicographically smallest (a, b) with d = 2ab, a, b ≥ 3, a ≠ b.
pub fn u1_factorization(d: u64) -> Option<(u64, u64)> {
    if d == 0 || d % 2 != 0 {
        return None;
    }
    let n = d / 2;
    (3..=n / 3).find(|&a| n % a == 0 && n / a >= 3 && n / a != a).map(|a| (a, n / a))
}

pub fn degree_table(s_type: SType, d_max: u64) -> Vec<u64> {
    (1..=d_max).filter(|&d| degree_admissible(d, s_type)).collect()
}

/// Recomputes all certificates for h = ae + bf over N_C.
pub fn certify(s_type: SType, code: &TernaryCode, a: u64, b: u64) -> Result<Certificates, PlanError> {
    let m = s_type.m();
    let roots = brute_force_report(m, code, a, b)?;
    let n = overlattice(m, code)?;
    Ok(Certificates {
        roots,
        criterion_u_exists: criterion_u_exists(m, code, a, b)?,
        criterion_extra_roots: criterion_extra_roots(m, code, a, b)?,
        overlattice: DiscReport::of(&n.lattice)?,
        h_squared: 2 * m as u64 * a * b,
    })
}

fn plan_code(s_type: SType, sigma: u32) -> Result<TernaryCode, PlanError> {
    let (name, m) = match s_type {
        SType::U3 => ("C7", 3),
        SType::U1 => ("K", 1),
    };
    Ok(subcode_for_sigma(&builtin(name)?, m, sigma)?)
}

fn check_query(query: &DegreeQuery) -> Result<(), PlanError> {
    if query.d == 0 {
        return Err(PlanError::NonPositiveDegree);
    }
    if query.sigma < 1 || query.sigma > query.s_type.max_sigma() {
        return Err(PlanError::SigmaOutOfRange { sigma: query.sigma, s_type: query.s_type });
    }
    Ok(())
}

/// A certified plan, or `None` when the degree is not admissible.
///
/// U(3): (a, b) = (1, d/6) with the (6 − σ)-dimensional leading subcode of
/// C7. U(1): the smallest admissible (a, b) with the (5 − σ)-dimensional
/// leading subcode of K.
pub fn make_plan(query: &DegreeQuery) -> Result<Option<PolarizationPlan>, PlanError> {
    check_query(query)?;
    if !degree_admissible(query.d, query.s_type) {
        return Ok(None);
    }
    let (a, b) = match query.s_type {
        SType::U3 => (1, query.d / 6),
        SType::U1 => u1_factorization(query.d).expect("admissible"),
    };
    build(query, a, b).map(Some)
}

/// A plan for an explicit (a, b), certified rather than trusted.
pub fn make_plan_with(query: &DegreeQuery, a: u64, b: u64) -> Result<PolarizationPlan, PlanError> {
    check_query(query)?;
    if a == 0 || b == 0 || 2 * query.s_type.m() as u64 * a * b != query.d {
        return Err(PlanError::OverrideDegree { a, b, d: query.d });
    }
    build(query, a, b)
}

fn build(query: &DegreeQuery, a: u64, b: u64) -> Result<PolarizationPlan, PlanError> {
    let code = plan_code(query.s_type, query.sigma)?;
    let certs = certify(query.s_type, &code, a, b)?;
    let certified = certs.passes(query.sigma, query.d);
    Ok(PolarizationPlan { query: *query, a, b, code, certs, certified })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissibility_examples() {
        assert_eq!(u1_factorization(24), Some((3, 4)));
        assert!(!degree_admissible(18, SType::U1));
        assert!(degree_admissible(6, SType::U3));
        assert!(!degree_admissible(8, SType::U1));
        assert_eq!(u1_factorization(36), Some((3, 6)));
    }

    #[test]
    fn tables() {
        assert_eq!(degree_table(SType::U3, 36), vec![6, 12, 18, 24, 30, 36]);
        assert_eq!(degree_table(SType::U1, 48), vec![24, 30, 36, 40, 42, 48]);
        assert!(degree_table(SType::U1, 23).is_empty());
    }

    #[test]
    fn degree_six_plan() {
        let q = DegreeQuery { d: 6, sigma: 1, s_type: SType::U3 };
        let plan = make_plan(&q).unwrap().unwrap();
        assert_eq!((plan.a, plan.b), (1, 1));
        assert_eq!(plan.code, builtin("C7").unwrap());
        assert!(plan.certified);
    }

    #[test]
    fn u1_plans() {
        let q = DegreeQuery { d: 30, sigma: 5, s_type: SType::U1 };
        let plan = make_plan(&q).unwrap().unwrap();
        assert_eq!((plan.a, plan.b), (3, 5));
        assert_eq!(plan.code.dim(), 0);
        assert!(plan.certified);
        let q = DegreeQuery { d: 8, sigma: 2, s_type: SType::U1 };
        assert!(make_plan(&q).unwrap().is_none());
    }

    #[test]
    fn override_is_certified_not_trusted() {
        // ab = 2 with a = 2b: C7 has no weight-1 words, so (2, 1) still passes
        let q = DegreeQuery { d: 12, sigma: 1, s_type: SType::U3 };
        assert!(make_plan_with(&q, 2, 1).unwrap().certified);
        assert!(make_plan_with(&q, 3, 1).is_err());
        // the zero code with a = b in U(1) has the roots ±(e − f)
        let q = DegreeQuery { d: 18, sigma: 5, s_type: SType::U1 };
        assert!(!make_plan_with(&q, 3, 3).unwrap().certified);
    }
}
