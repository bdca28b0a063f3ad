//! Permutation realizations of the Galois groups of closures of extensions of
//! degree 2 to 5, with the subgroups that fix their distinguished subfields.
//!
//! Each entry acts naturally on the roots `{1..n}` of a degree-`n` defining
//! polynomial, so the stabilizer of point 1 fixes the degree-`n` field itself
//! and its splitting types are cycle types. Presentation relations are
//! checked when an entry is built.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use thiserror::Error;

use crate::perm::{Group, Perm, PermError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown catalog entry {0:?}")]
    UnknownEntry(String),
    #[error("entry {entry} has no subgroup named {name:?}")]
    UnknownSubgroup { entry: String, name: String },
    #[error("{entry}: relation {relation:?} does not hold")]
    RelationFailed { entry: String, relation: String },
    #[error("{entry}: malformed relation {relation:?}")]
    MalformedRelation { entry: String, relation: String },
    #[error("{entry}: expected group order {expected}, got {actual}")]
    OrderMismatch {
        entry: String,
        expected: usize,
        actual: usize,
    },
    #[error("{entry}: group is not transitive")]
    NotTransitive { entry: String },
    #[error("{entry}: subgroup {name} has index {actual}, expected {expected}")]
    IndexMismatch {
        entry: String,
        name: String,
        expected: usize,
        actual: usize,
    },
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// A named subgroup together with the degree of its fixed field over the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedSubgroup {
    pub group: Group,
    pub index: usize,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub group: Group,
    /// Degree of the field fixed by the stabilizer.
    pub field_degree: usize,
    /// Stabilizer of point 1.
    pub stabilizer: Group,
    pub named_subgroups: BTreeMap<String, NamedSubgroup>,
    /// Named presentation elements, e.g. `s` and `t` for a dihedral group.
    pub presentation: BTreeMap<String, Perm>,
    pub relations: Vec<String>,
}

impl CatalogEntry {
    /// Builds and validates an entry. `presentation` maps symbol names to
    /// elements in cycle notation; every relation must hold and every named
    /// subgroup must have its stated index.
    pub fn build(
        name: &str,
        degree: usize,
        generators: &[&str],
        expected_order: usize,
        presentation: &[(&str, &str)],
        relations: &[&str],
        named: &[(&str, &[&str], usize)],
    ) -> Result<CatalogEntry, CatalogError> {
        let gens = generators
            .iter()
            .map(|g| Perm::parse_cycles(degree, g))
            .collect::<Result<Vec<_>, _>>()?;
        let group = Group::generate(&gens)?;
        let fail_order = |actual| CatalogError::OrderMismatch {
            entry: name.to_string(),
            expected: expected_order,
            actual,
        };
        if group.order() != expected_order {
            return Err(fail_order(group.order()));
        }
        if !group.is_transitive() {
            return Err(CatalogError::NotTransitive {
                entry: name.to_string(),
            });
        }
        let pres = presentation
            .iter()
            .map(|(sym, cyc)| Ok((sym.to_string(), Perm::parse_cycles(degree, cyc)?)))
            .collect::<Result<BTreeMap<_, _>, CatalogError>>()?;
        for p in pres.values() {
            if !group.contains(p) {
                return Err(PermError::NotMember(p.clone()).into());
            }
        }
        for rel in relations {
            check_relation(name, degree, &pres, rel)?;
        }
        let stabilizer = group.point_stabilizer(1)?;
        let mut named_subgroups = BTreeMap::new();
        for (sub_name, sub_gens, index) in named {
            let gens = sub_gens
                .iter()
                .map(|g| Perm::parse_cycles(degree, g))
                .collect::<Result<Vec<_>, _>>()?;
            let sub = group.subgroup_generated(&gens)?;
            let actual = group.index(&sub)?;
            if actual != *index {
                return Err(CatalogError::IndexMismatch {
                    entry: name.to_string(),
                    name: sub_name.to_string(),
                    expected: *index,
                    actual,
                });
            }
            named_subgroups.insert(
                sub_name.to_string(),
                NamedSubgroup {
                    group: sub,
                    index: actual,
                },
            );
        }
        Ok(CatalogEntry {
            name: name.to_string(),
            group,
            field_degree: degree,
            stabilizer,
            named_subgroups,
            presentation: pres,
            relations: relations.iter().map(|r| r.to_string()).collect(),
        })
    }

    /// `stabilizer` (or `stab`, `K`) for the stabilizer of point 1, otherwise a
    /// named subgroup.
    pub fn subgroup(&self, name: &str) -> Result<&Group, CatalogError> {
        if matches!(name, "stabilizer" | "stab") {
            return Ok(&self.stabilizer);
        }
        match self.named_subgroups.get(name) {
            Some(s) => Ok(&s.group),
            None if name == "K" => Ok(&self.stabilizer),
            None => Err(CatalogError::UnknownSubgroup {
                entry: self.name.clone(),
                name: name.to_string(),
            }),
        }
    }

    /// Whether the degree-`n` field is itself Galois.
    pub fn is_galois(&self) -> bool {
        self.group.order() == self.field_degree
    }
}

fn eval_word(pres: &BTreeMap<String, Perm>, degree: usize, word: &str) -> Option<Perm> {
    let mut acc = Perm::identity(degree);
    for factor in word.split('*') {
        let factor = factor.trim();
        if factor == "1" {
            continue;
        }
        let (sym, exp) = match factor.split_once('^') {
            Some((s, e)) => (s.trim(), e.trim().parse::<i64>().ok()?),
            None => (factor, 1),
        };
        acc = acc.mul(&pres.get(sym)?.pow(exp));
    }
    Some(acc)
}

fn check_relation(
    entry: &str,
    degree: usize,
    pres: &BTreeMap<String, Perm>,
    relation: &str,
) -> Result<(), CatalogError> {
    let malformed = || CatalogError::MalformedRelation {
        entry: entry.to_string(),
        relation: relation.to_string(),
    };
    let (lhs, rhs) = relation.split_once('=').ok_or_else(malformed)?;
    let l = eval_word(pres, degree, lhs).ok_or_else(malformed)?;
    let r = eval_word(pres, degree, rhs).ok_or_else(malformed)?;
    if l != r {
        return Err(CatalogError::RelationFailed {
            entry: entry.to_string(),
            relation: relation.to_string(),
        });
    }
    Ok(())
}

/// Stable public names, in catalog order.
pub const ENTRY_NAMES: [&str; 13] = [
    "C2", "C3", "S3", "C4", "V4", "D4", "A4", "S4", "C5", "D5", "F5", "A5", "S5",
];

// D4 = <s, t> with s = (1 2 3 4), t = (1 3). Subgroup <-> fixed field, inclusion reversing.
const D4_LATTICE: [(&str, &[&str], usize); 10] = [
    ("K", &["(1 3)"], 4),
    ("K~", &["(2 4)"], 4),
    ("K'", &["(1 4)(2 3)"], 4),
    ("K~'", &["(1 2)(3 4)"], 4),
    ("K_sigma2", &["(1 3)(2 4)"], 4),
    ("K_2", &["(1 3)(2 4)", "(1 3)"], 2),
    ("K_sigma", &["(1 2 3 4)"], 2),
    ("K_2'", &["(1 3)(2 4)", "(1 4)(2 3)"], 2),
    ("F", &["(1 2 3 4)", "(1 3)"], 1),
    ("K^", &[], 8),
];

fn build_entry(name: &str) -> Result<CatalogEntry, CatalogError> {
    match name {
        "C2" => CatalogEntry::build(name, 2, &["(1 2)"], 2, &[("s", "(1 2)")], &["s^2 = 1"], &[]),
        "C3" => CatalogEntry::build(
            name,
            3,
            &["(1 2 3)"],
            3,
            &[("s", "(1 2 3)")],
            &["s^3 = 1"],
            &[],
        ),
        "S3" => CatalogEntry::build(
            name,
            3,
            &["(1 2 3)", "(1 2)"],
            6,
            &[("s", "(1 2 3)"), ("t", "(1 2)")],
            &["s^3 = 1", "t^2 = 1", "t*s*t = s^-1"],
            &[("K_2", &["(1 2 3)"], 2)],
        ),
        "C4" => CatalogEntry::build(
            name,
            4,
            &["(1 2 3 4)"],
            4,
            &[("s", "(1 2 3 4)")],
            &["s^4 = 1"],
            &[("K_2", &["(1 3)(2 4)"], 2)],
        ),
        "V4" => CatalogEntry::build(
            name,
            4,
            &["(1 2)(3 4)", "(1 3)(2 4)"],
            4,
            &[("a", "(1 2)(3 4)"), ("b", "(1 3)(2 4)")],
            &["a^2 = 1", "b^2 = 1", "a*b = b*a"],
            &[
                ("K_a", &["(1 2)(3 4)"], 2),
                ("K_b", &["(1 3)(2 4)"], 2),
                ("K_c", &["(1 4)(2 3)"], 2),
            ],
        ),
        "D4" => CatalogEntry::build(
            name,
            4,
            &["(1 2 3 4)", "(1 3)"],
            8,
            &[("s", "(1 2 3 4)"), ("t", "(1 3)")],
            &["s^4 = 1", "t^2 = 1", "t*s*t = s^3"],
            &D4_LATTICE,
        ),
        "A4" => CatalogEntry::build(
            name,
            4,
            &["(1 2 3)", "(1 2)(3 4)"],
            12,
            &[("s", "(1 2 3)"), ("t", "(1 2)(3 4)")],
            &["s^3 = 1", "t^2 = 1", "s*t*s*t*s*t = 1"],
            &[("K_3", &["(1 2)(3 4)", "(1 3)(2 4)"], 3)],
        ),
        // K_6 is the Galois sextic subfield: fixed by the normal Klein four-group.
        "S4" => CatalogEntry::build(
            name,
            4,
            &["(1 2 3 4)", "(1 2)"],
            24,
            &[("s", "(1 2 3 4)"), ("t", "(1 2)")],
            &["s^4 = 1", "t^2 = 1", "s*t*s*t*s*t = 1"],
            &[
                ("K_6", &["(1 2)(3 4)", "(1 3)(2 4)"], 6),
                ("K_2", &["(1 2 3)", "(1 2)(3 4)"], 2),
            ],
        ),
        "C5" => CatalogEntry::build(
            name,
            5,
            &["(1 2 3 4 5)"],
            5,
            &[("s", "(1 2 3 4 5)")],
            &["s^5 = 1"],
            &[],
        ),
        "D5" => CatalogEntry::build(
            name,
            5,
            &["(1 2 3 4 5)", "(2 5)(3 4)"],
            10,
            &[("s", "(1 2 3 4 5)"), ("t", "(2 5)(3 4)")],
            &["s^5 = 1", "t^2 = 1", "t*s*t = s^-1"],
            &[("K_2", &["(1 2 3 4 5)"], 2)],
        ),
        // With right-first composition the presentation's order-4 element is
        // the inverse of the generator (2 3 5 4).
        "F5" => CatalogEntry::build(
            name,
            5,
            &["(1 2 3 4 5)", "(2 3 5 4)"],
            20,
            &[("m", "(1 2 3 4 5)"), ("s", "(2 4 5 3)")],
            &["s^4 = 1", "m^5 = 1", "m*s = s*m^2"],
            &[("K_4", &["(1 2 3 4 5)"], 4)],
        ),
        "A5" => CatalogEntry::build(
            name,
            5,
            &["(1 2 3 4 5)", "(1 2 3)"],
            60,
            &[("s", "(1 2 3 4 5)"), ("t", "(1 2 3)")],
            &["s^5 = 1", "t^3 = 1", "s*t*s*t*s*t*s*t*s*t = 1"],
            &[],
        ),
        "S5" => CatalogEntry::build(
            name,
            5,
            &["(1 2 3 4 5)", "(1 2)"],
            120,
            &[("s", "(1 2 3 4 5)"), ("t", "(1 2)")],
            &["s^5 = 1", "t^2 = 1", "s*t*s*t*s*t*s*t = 1"],
            &[("K_2", &["(1 2 3)", "(3 4 5)"], 2)],
        ),
        other => Err(CatalogError::UnknownEntry(other.to_string())),
    }
}

/// An ordered collection of entries.
#[derive(Debug, Clone)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

impl Catalog {
    /// The 13 shipped entries. Panics only if a shipped entry fails validation.
    pub fn standard() -> &'static Catalog {
        static CATALOG: OnceLock<Catalog> = OnceLock::new();
        CATALOG.get_or_init(|| Catalog {
            entries: ENTRY_NAMES
                .iter()
                .map(|n| build_entry(n).expect("shipped catalog entry is valid"))
                .collect(),
        })
    }

    pub fn from_entries(entries: Vec<CatalogEntry>) -> Catalog {
        Catalog { entries }
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn get(&self, name: &str) -> Result<&CatalogEntry, CatalogError> {
        self.entries
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| CatalogError::UnknownEntry(name.to_string()))
    }

    /// Replaces the entry of the same name, or appends.
    pub fn with_entry(mut self, entry: CatalogEntry) -> Catalog {
        match self.entries.iter_mut().find(|e| e.name == entry.name) {
            Some(slot) => *slot = entry,
            None => self.entries.push(entry),
        }
        self
    }
}

/// Entry of the shipped catalog.
pub fn get_entry(name: &str) -> Result<&'static CatalogEntry, CatalogError> {
    Catalog::standard().get(name)
}

/// All ten subgroups of the order-8 dihedral group, keyed by the names of
/// their fixed fields: `K`, `K~`, `K'`, `K~'`, `K_sigma2`, `K_2`, `K_sigma`,
/// `K_2'`, `F` and `K^` (the closure).
pub fn d4_lattice() -> BTreeMap<String, Group> {
    get_entry("D4")
        .expect("D4 entry")
        .named_subgroups
        .iter()
        .map(|(k, v)| (k.clone(), v.group.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_entries_build() {
        let cat = Catalog::standard();
        assert_eq!(cat.entries().len(), 13);
        for e in cat.entries() {
            assert!(e.group.is_transitive(), "{}", e.name);
            assert_eq!(e.group.order() / e.stabilizer.order(), e.field_degree);
            assert_eq!(e.stabilizer, e.group.point_stabilizer(1).unwrap());
            for (n, s) in &e.named_subgroups {
                assert_eq!(e.group.index(&s.group).unwrap(), s.index, "{} {}", e.name, n);
            }
        }
    }

    #[test]
    fn entry_examples() {
        let d5 = get_entry("D5").unwrap();
        assert_eq!(d5.group.order(), 10);
        assert_eq!(d5.field_degree, 5);
        let c3 = get_entry("C3").unwrap();
        assert_eq!(c3.group.order(), 3);
        assert_eq!(c3.stabilizer.order(), 1);
        let f5 = get_entry("F5").unwrap();
        assert_eq!(f5.group.order(), 20);
        let k4 = f5.subgroup("K_4").unwrap();
        assert_eq!(k4.order(), 5);
        assert!(f5.group.is_normal(k4).unwrap());
        assert!(matches!(get_entry("NOPE"), Err(CatalogError::UnknownEntry(_))));
        assert!(matches!(
            f5.subgroup("K_9"),
            Err(CatalogError::UnknownSubgroup { .. })
        ));
    }

    #[test]
    fn galois_companions_are_normal() {
        for (entry, sub) in [
            ("S3", "K_2"),
            ("C4", "K_2"),
            ("A4", "K_3"),
            ("S4", "K_6"),
            ("S4", "K_2"),
            ("D5", "K_2"),
            ("F5", "K_4"),
            ("S5", "K_2"),
        ] {
            let e = get_entry(entry).unwrap();
            assert!(e.group.is_normal(e.subgroup(sub).unwrap()).unwrap(), "{entry} {sub}");
        }
    }

    #[test]
    fn bad_relation_rejected() {
        let err = CatalogEntry::build(
            "bad",
            4,
            &["(1 2 3 4)", "(1 3)"],
            8,
            &[("s", "(1 2 3 4)"), ("t", "(1 3)")],
            &["t*s*t = s"],
            &[],
        )
        .unwrap_err();
        assert!(matches!(err, CatalogError::RelationFailed { .. }));
        let err = CatalogEntry::build("bad", 3, &["(1 2 3)"], 6, &[], &[], &[]).unwrap_err();
        assert!(matches!(err, CatalogError::OrderMismatch { .. }));
        let err =
            CatalogEntry::build("bad", 4, &["(1 2)"], 2, &[], &[], &[]).unwrap_err();
        assert!(matches!(err, CatalogError::NotTransitive { .. }));
    }

    #[test]
    fn literal_f5_relation_needs_inverse_generator() {
        // m*s = s*m^2 fails for s = (2 3 5 4) itself under right-first composition.
        let err = CatalogEntry::build(
            "F5x",
            5,
            &["(1 2 3 4 5)", "(2 3 5 4)"],
            20,
            &[("m", "(1 2 3 4 5)"), ("s", "(2 3 5 4)")],
            &["m*s = s*m^2"],
            &[],
        )
        .unwrap_err();
        assert!(matches!(err, CatalogError::RelationFailed { .. }));
    }

    #[test]
    fn d4_lattice_shape() {
        let lat = d4_lattice();
        assert_eq!(lat.len(), 10);
        let s = Perm::parse_cycles(4, "(1 2 3 4)").unwrap();
        assert_eq!(lat["K_sigma"].order(), 4);
        assert!(lat["K_sigma"].contains(&s));
        assert_eq!(lat["F"].order(), 8);
        assert_eq!(lat["K^"].order(), 1);
        assert!(lat["K"].is_subgroup_of(&lat["K_2"]));
        assert!(lat["K~"].is_subgroup_of(&lat["K_2"]));
        assert!(!lat["K_2'"].is_subgroup_of(&lat["K"]));
        assert!(!lat["K"].is_subgroup_of(&lat["K_2'"]));
        assert!(lat["K'"].is_subgroup_of(&lat["K_2'"]));
        assert!(lat["K~'"].is_subgroup_of(&lat["K_2'"]));
        assert!(lat["K_sigma2"].is_subgroup_of(&lat["K_sigma"]));
        assert!(lat["K_sigma2"].is_subgroup_of(&lat["K_2"]));
        assert!(lat["K_sigma2"].is_subgroup_of(&lat["K_2'"]));
        // every subgroup of D4 appears exactly once
        let all = get_entry("D4").unwrap().group.subgroups();
        for sub in &all {
            assert_eq!(lat.values().filter(|g| *g == sub).count(), 1);
        }
    }

    #[test]
    fn d4_isomorphism_classes_of_quartic_subfields() {
        let d4 = &get_entry("D4").unwrap().group;
        let lat = d4_lattice();
        assert!(d4.are_conjugate_subgroups(&lat["K"], &lat["K~"]).unwrap());
        assert!(d4.are_conjugate_subgroups(&lat["K'"], &lat["K~'"]).unwrap());
        assert!(!d4.are_conjugate_subgroups(&lat["K"], &lat["K'"]).unwrap());
        assert!(d4.is_normal(&lat["K_sigma2"]).unwrap());
    }
}
