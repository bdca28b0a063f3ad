//! Group-side equivalence analyzers.
//!
//! Inside one Galois closure with group `G`, two subfields fixed by `U1` and
//! `U2` are compared class by class: the conjugacy classes of `G` stand in for
//! the unramified primes, each with Chebotarev weight `#C/#G`.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::catalog::{Catalog, CatalogEntry};
use crate::density::{
    self, gcd_class_profile, gcd_distribution, inert_density, type_class_profile, ClassProfile,
    DensityError, SplittingType,
};
use crate::perm::{ConjClass, Group, PermError};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivError {
    #[error(transparent)]
    Density(#[from] DensityError),
    #[error("index mismatch: [G1:U1] = {left}, [G2:U2] = {right}")]
    IndexMismatch { left: usize, right: usize },
    #[error("maximum degree {0} is outside the supported range 0..=5")]
    DegreeOutOfRange(usize),
}

impl From<PermError> for EquivError {
    fn from(e: PermError) -> EquivError {
        EquivError::Density(e.into())
    }
}

/// Outcome of comparing two per-class profiles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceVerdict<T> {
    pub equivalent: bool,
    /// First class (in class order) where the profiles differ.
    pub witness_class: Option<ConjClass>,
    pub profiles: (ClassProfile<T>, ClassProfile<T>),
}

impl<T: PartialEq + Clone> EquivalenceVerdict<T> {
    fn from_profiles(left: ClassProfile<T>, right: ClassProfile<T>) -> EquivalenceVerdict<T> {
        let witness_class = left
            .iter()
            .zip(&right)
            .find(|((_, a), (_, b))| a != b)
            .map(|((c, _), _)| c.clone());
        EquivalenceVerdict {
            equivalent: witness_class.is_none(),
            witness_class,
            profiles: (left, right),
        }
    }

    /// Values of both profiles at the witness class.
    pub fn witness_values(&self) -> Option<(T, T)> {
        let w = self.witness_class.as_ref()?;
        let a = self.profiles.0.iter().find(|(c, _)| c == w)?.1.clone();
        let b = self.profiles.1.iter().find(|(c, _)| c == w)?.1.clone();
        Some((a, b))
    }
}

/// Local GCD equivalence inside one closure: equal gcd of splitting types at
/// every conjugacy class.
pub fn gcd_equivalent_same_closure(
    g: &Group,
    u1: &Group,
    u2: &Group,
) -> Result<EquivalenceVerdict<u32>, EquivError> {
    Ok(EquivalenceVerdict::from_profiles(
        gcd_class_profile(g, u1)?,
        gcd_class_profile(g, u2)?,
    ))
}

/// Arithmetic equivalence inside one closure: equal splitting types at every
/// conjugacy class.
pub fn arithmetically_equivalent_same_closure(
    g: &Group,
    u1: &Group,
    u2: &Group,
) -> Result<EquivalenceVerdict<SplittingType>, EquivError> {
    Ok(EquivalenceVerdict::from_profiles(
        type_class_profile(g, u1)?,
        type_class_profile(g, u2)?,
    ))
}

/// Conjugacy classes whose splitting type (for the coset action on `G/U`) lies in `types`.
pub fn classes_with_type(
    g: &Group,
    u: &Group,
    types: &[SplittingType],
) -> Result<Vec<ConjClass>, EquivError> {
    Ok(type_class_profile(g, u)?
        .into_iter()
        .filter(|(_, t)| types.contains(t))
        .map(|(c, _)| c)
        .collect())
}

/// Inert analysis inside the direct product `G1 × G2`, which models the
/// compositum of two closures meeting only in the base field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductInertReport {
    /// Common index `[G1:U1] = [G2:U2]`.
    pub degree: usize,
    /// Density of pairs `(g, h)` inert in both coset actions.
    pub joint_inert_density: Rational,
    /// Density of pairs with `g^n = h^n = 1`, the identity pair excluded.
    pub order_p_pair_density: Rational,
    pub single_inert_densities: (Rational, Rational),
    /// Equal single inert densities, yet the joint density falls below them:
    /// the two fields cannot be locally GCD equivalent with disjoint closures.
    pub contradiction: bool,
}

/// Factors through independence in the direct product: the joint inert
/// density is the product of the single ones, and the pair count is the
/// product of per-factor counts.
pub fn product_inert_analysis(
    g1: &Group,
    u1: &Group,
    g2: &Group,
    u2: &Group,
) -> Result<ProductInertReport, EquivError> {
    let left = g1.index(u1)?;
    let right = g2.index(u2)?;
    if left != right {
        return Err(EquivError::IndexMismatch { left, right });
    }
    let n = left as i64;
    let single1 = inert_density(g1, u1)?;
    let single2 = inert_density(g2, u2)?;
    let joint = single1 * single2;
    let exp_one = |g: &Group| g.elements().iter().filter(|x| x.pow(n).is_identity()).count() as u64;
    let pairs = exp_one(g1) * exp_one(g2) - 1;
    let total = (g1.order() * g2.order()) as u64;
    let order_p_pair_density = Rational::from_counts(pairs, total);
    Ok(ProductInertReport {
        degree: left,
        joint_inert_density: joint,
        order_p_pair_density,
        single_inert_densities: (single1, single2),
        contradiction: single1 == single2 && joint < single1,
    })
}

/// A pair of equal-index subgroups of one catalog group that are gcd
/// equivalent without being conjugate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RigidityViolation {
    pub entry: String,
    pub index: usize,
    pub left: Group,
    pub right: Group,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RigidityGroupSummary {
    pub entry: String,
    pub subgroups_checked: usize,
    pub pairs_checked: usize,
    /// Non-conjugate pairs told apart by some gcd value.
    pub pairs_distinguished: usize,
    pub conjugate_pairs: usize,
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RigidityReport {
    pub max_degree: usize,
    pub groups: Vec<RigidityGroupSummary>,
    pub violations: Vec<RigidityViolation>,
}

impl RigidityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For every catalog group and every unordered pair of subgroups of equal
/// index `≤ max_degree`, checks that gcd equivalence forces conjugacy.
pub fn rigidity_scan(max_degree: usize) -> Result<RigidityReport, EquivError> {
    rigidity_scan_in(Catalog::standard(), max_degree)
}

pub fn rigidity_scan_in(catalog: &Catalog, max_degree: usize) -> Result<RigidityReport, EquivError> {
    if max_degree > 5 {
        return Err(EquivError::DegreeOutOfRange(max_degree));
    }
    let mut groups = Vec::new();
    let mut violations = Vec::new();
    for entry in catalog.entries() {
        let summary = rigidity_for_entry(entry, max_degree, &mut violations)?;
        groups.push(summary);
    }
    Ok(RigidityReport {
        max_degree,
        groups,
        violations,
    })
}

fn rigidity_for_entry(
    entry: &CatalogEntry,
    max_degree: usize,
    violations: &mut Vec<RigidityViolation>,
) -> Result<RigidityGroupSummary, EquivError> {
    let g = &entry.group;
    let subs: Vec<(usize, Group, Vec<u32>)> = if max_degree < 2 {
        Vec::new()
    } else {
        g.subgroups()
            .into_iter()
            .map(|u| (g.order() / u.order(), u))
            .filter(|(idx, _)| (2..=max_degree).contains(idx))
            .map(|(idx, u)| {
                let prof = gcd_class_profile(g, &u).map(|p| p.into_iter().map(|(_, v)| v).collect());
                prof.map(|p| (idx, u, p))
            })
            .collect::<Result<_, DensityError>>()?
    };
    let mut summary = RigidityGroupSummary {
        entry: entry.name.clone(),
        subgroups_checked: subs.len(),
        pairs_checked: 0,
        pairs_distinguished: 0,
        conjugate_pairs: 0,
        violations: 0,
    };
    for i in 0..subs.len() {
        for j in i + 1..subs.len() {
            let (idx1, u1, p1) = &subs[i];
            let (idx2, u2, p2) = &subs[j];
            if idx1 != idx2 {
                continue;
            }
            summary.pairs_checked += 1;
            let conjugate = g.are_conjugate_subgroups(u1, u2)?;
            if conjugate {
                summary.conjugate_pairs += 1;
            } else if p1 != p2 {
                summary.pairs_distinguished += 1;
            } else {
                summary.violations += 1;
                violations.push(RigidityViolation {
                    entry: entry.name.clone(),
                    index: *idx1,
                    left: u1.clone(),
                    right: u2.clone(),
                });
            }
        }
    }
    Ok(summary)
}

/// Why two catalog entries of different field degree cannot be locally GCD
/// equivalent: their gcd distributions differ at `gcd`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossDegreeWitness {
    pub left: String,
    pub right: String,
    pub gcd: u32,
    pub left_density: Rational,
    pub right_density: Rational,
    /// The gcd value occurs on one side only.
    pub unattainable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuarticGcd2Row {
    pub entry: String,
    /// Density of types with gcd 2, i.e. `(2,2)` and `(4)`.
    pub gcd2_density: Rational,
    pub type_22_density: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossDegreeReport {
    /// Field degrees in which each gcd value > 1 occurs.
    pub gcd_degrees: BTreeMap<u32, Vec<usize>>,
    pub quadratic_inert_density: Rational,
    pub quartic_rows: Vec<QuarticGcd2Row>,
    pub witnesses: Vec<CrossDegreeWitness>,
    /// Pairs of different degree with identical gcd distributions.
    pub unresolved: Vec<(String, String)>,
}

impl CrossDegreeReport {
    pub fn passed(&self) -> bool {
        self.unresolved.is_empty()
            && self.gcd_degrees.get(&3).is_some_and(|d| d == &[3])
            && self.gcd_degrees.get(&5).is_some_and(|d| d == &[5])
            && self
                .quartic_rows
                .iter()
                .all(|r| r.gcd2_density != self.quadratic_inert_density)
    }
}

/// Pairs of catalog entries with different field degrees, each separated by
/// a gcd value whose density differs (preferring values attained on one side only).
pub fn cross_degree_exclusion() -> Result<CrossDegreeReport, EquivError> {
    cross_degree_exclusion_in(Catalog::standard())
}

pub fn cross_degree_exclusion_in(catalog: &Catalog) -> Result<CrossDegreeReport, EquivError> {
    let mut dists = Vec::new();
    for e in catalog.entries() {
        dists.push((e, gcd_distribution(&e.group, &e.stabilizer)?));
    }
    let mut gcd_degrees: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (e, d) in &dists {
        for (&gcd, dens) in d {
            if gcd > 1 && !dens.is_zero() {
                let v = gcd_degrees.entry(gcd).or_default();
                if !v.contains(&e.field_degree) {
                    v.push(e.field_degree);
                    v.sort_unstable();
                }
            }
        }
    }

    let quadratic_inert_density = match catalog.get("C2") {
        Ok(c2) => inert_density(&c2.group, &c2.stabilizer)?,
        Err(_) => Rational::new(1, 2),
    };
    let mut quartic_rows = Vec::new();
    for (e, d) in &dists {
        if e.field_degree == 4 {
            let t22: SplittingType = "2,2".parse()?;
            let table = density::density_table(&e.group, &e.stabilizer)?;
            quartic_rows.push(QuarticGcd2Row {
                entry: e.name.clone(),
                gcd2_density: d.iter().filter(|(k, _)| *k % 2 == 0).map(|(_, v)| *v).sum(),
                type_22_density: table.get(&t22),
            });
        }
    }

    let mut witnesses = Vec::new();
    let mut unresolved = Vec::new();
    for i in 0..dists.len() {
        for j in i + 1..dists.len() {
            let (a, da) = &dists[i];
            let (b, db) = &dists[j];
            if a.field_degree == b.field_degree {
                continue;
            }
            let density_of = |d: &BTreeMap<u32, Rational>, k: u32| {
                d.get(&k).copied().unwrap_or_else(Rational::zero)
            };
            let mut keys: Vec<u32> = da.keys().chain(db.keys()).copied().collect();
            keys.sort_unstable();
            keys.dedup();
            // largest gcd value first: those are the one-sided ones
            keys.reverse();
            let witness = keys
                .iter()
                .find(|&&k| density_of(da, k).is_zero() != density_of(db, k).is_zero())
                .or_else(|| keys.iter().find(|&&k| density_of(da, k) != density_of(db, k)));
            match witness {
                Some(&k) => witnesses.push(CrossDegreeWitness {
                    left: a.name.clone(),
                    right: b.name.clone(),
                    gcd: k,
                    left_density: density_of(da, k),
                    right_density: density_of(db, k),
                    unattainable: density_of(da, k).is_zero() != density_of(db, k).is_zero(),
                }),
                None => unresolved.push((a.name.clone(), b.name.clone())),
            }
        }
    }
    Ok(CrossDegreeReport {
        gcd_degrees,
        quadratic_inert_density,
        quartic_rows,
        witnesses,
        unresolved,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{d4_lattice, get_entry};
    use crate::perm::Perm;

    fn st(s: &str) -> SplittingType {
        s.parse().unwrap()
    }

    #[test]
    fn conjugate_subgroups_are_equivalent() {
        let d4 = &get_entry("D4").unwrap().group;
        let lat = d4_lattice();
        let v = gcd_equivalent_same_closure(d4, &lat["K"], &lat["K~"]).unwrap();
        assert!(v.equivalent);
        assert!(v.witness_class.is_none());
        let a = arithmetically_equivalent_same_closure(d4, &lat["K"], &lat["K~"]).unwrap();
        assert!(a.equivalent);
    }

    #[test]
    fn d4_diagonal_vs_edge() {
        let d4 = &get_entry("D4").unwrap().group;
        let lat = d4_lattice();
        let v = gcd_equivalent_same_closure(d4, &lat["K"], &lat["K'"]).unwrap();
        assert!(!v.equivalent);
        let w = v.witness_class.clone().unwrap();
        assert_eq!(w.size(), 2);
        assert_eq!(w.representative.order(), 2);
        assert!(!w.members.contains(&Perm::parse_cycles(4, "(1 3)(2 4)").unwrap()));
        let (a, b) = v.witness_values().unwrap();
        assert_ne!(a, b);

        let a = arithmetically_equivalent_same_closure(d4, &lat["K"], &lat["K'"]).unwrap();
        assert!(!a.equivalent);
        let (x, y) = a.witness_values().unwrap();
        let mut pair = [x, y];
        pair.sort();
        assert_eq!(pair, [st("1,1,2"), st("2,2")]);
    }

    #[test]
    fn gcd_profile_diagonal_stabilizer() {
        let d4 = &get_entry("D4").unwrap().group;
        let lat = d4_lattice();
        let prof = gcd_class_profile(d4, &lat["K"]).unwrap();
        let edge = Perm::parse_cycles(4, "(1 4)(2 3)").unwrap();
        let diag = Perm::parse_cycles(4, "(1 3)").unwrap();
        let at = |p: &Perm| prof.iter().find(|(c, _)| c.contains(p)).unwrap().1;
        assert_eq!(at(&edge), 2);
        assert_eq!(at(&diag), 1);
    }

    #[test]
    fn v4_quadratics_not_equivalent() {
        let v4 = get_entry("V4").unwrap();
        let a = v4.subgroup("K_a").unwrap();
        let b = v4.subgroup("K_b").unwrap();
        assert!(!gcd_equivalent_same_closure(&v4.group, a, b).unwrap().equivalent);
    }

    #[test]
    fn classes_with_type_examples() {
        let d4 = &get_entry("D4").unwrap().group;
        let lat = d4_lattice();
        let s = Perm::parse_cycles(4, "(1 2 3 4)").unwrap();
        let mut rotations = vec![s.clone(), s.inverse()];
        rotations.sort();
        for name in ["K", "K'"] {
            let inert = classes_with_type(d4, &lat[name], &[st("4")]).unwrap();
            assert_eq!(inert.len(), 1);
            assert_eq!(inert[0].members, rotations);
        }
        let t22a = classes_with_type(d4, &lat["K"], &[st("2,2")]).unwrap();
        let t22b = classes_with_type(d4, &lat["K'"], &[st("2,2")]).unwrap();
        assert_ne!(t22a, t22b);
    }

    #[test]
    fn product_index_mismatch() {
        let a5 = get_entry("A5").unwrap();
        let s4 = get_entry("S4").unwrap();
        let err = product_inert_analysis(&a5.group, &a5.stabilizer, &s4.group, &s4.stabilizer)
            .unwrap_err();
        assert_eq!(err, EquivError::IndexMismatch { left: 5, right: 4 });
    }

    #[test]
    fn rigidity_degenerate_degrees() {
        let r = rigidity_scan(1).unwrap();
        assert!(r.passed());
        assert!(r.groups.iter().all(|g| g.pairs_checked == 0));
        assert_eq!(rigidity_scan(6).unwrap_err(), EquivError::DegreeOutOfRange(6));
    }
}
