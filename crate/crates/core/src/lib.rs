//! Exact splitting-type densities for permutation groups of degree at most 5,
//! group-theoretic local gcd and arithmetic equivalence checks, and empirical
//! prime censuses via factorization patterns modulo `p`.

pub mod brute;
pub mod catalog;
pub mod density;
pub mod equiv;
pub mod ffpoly;
pub mod perm;
pub mod rational;
pub mod scanner;
pub mod verify;

pub use catalog::{get_entry, Catalog, CatalogEntry, CatalogError};
pub use density::{
    density_table, inert_density, joint_density_table, splitting_type, DensityTable,
    SplittingType,
};
pub use equiv::{
    cross_degree_exclusion, gcd_equivalent_same_closure, product_inert_analysis, rigidity_scan,
};
pub use ffpoly::{degree_pattern_mod_p, parse_polynomial, IntPoly};
pub use perm::{Group, Perm};
pub use rational::Rational;
pub use scanner::{compare_scans, scan, ScanReport};
