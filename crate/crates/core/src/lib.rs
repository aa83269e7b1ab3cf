//! Exact computations for ternary codes over discriminant groups of
//! Z[10A₂] ⊕ U(m): code predicates and equivalence, Nikulin overlattices,
//! root and isotropic-vector criteria, polarization plans, and the
//! separability feasibility system.

pub mod gf3_linear;
pub mod disc_forms;
pub mod lattice_engine;
pub mod code_search;
pub mod polarization_planner;
pub mod separability_solver;
pub mod cli;
