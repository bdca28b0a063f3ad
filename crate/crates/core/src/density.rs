//! Exact splitting-type densities from coset actions.
//!
//! For a Galois group `G` and the subgroup `U` fixing an intermediate field,
//! the splitting type of a prime with Frobenius element `g` is the list of
//! orbit sizes of `⟨g⟩` acting on the left cosets `G/U`. Counting elements
//! per type and dividing by `|G|` gives the Chebotarev density of that type.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::thread;

use num_integer::Integer;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::perm::{ConjClass, CosetTable, Group, Perm, PermError};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DensityError {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("splitting type must be a nonempty list of positive integers")]
    InvalidType,
    #[error("at least one subgroup is required")]
    NoSubgroups,
}

/// Ascending inertia degrees of the primes above an unramified prime.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SplittingType(Vec<u32>);

impl SplittingType {
    pub fn new(mut parts: Vec<u32>) -> Result<SplittingType, DensityError> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(DensityError::InvalidType);
        }
        parts.sort_unstable();
        Ok(SplittingType(parts))
    }

    /// All-ones type of the given degree.
    pub fn split(degree: u32) -> SplittingType {
        SplittingType(vec![1; degree as usize])
    }

    pub fn inert(degree: u32) -> SplittingType {
        SplittingType(vec![degree])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Sum of parts: the degree of the extension.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn gcd(&self) -> u32 {
        self.0.iter().fold(0, |a, &b| a.gcd(&b))
    }

    pub fn is_inert(&self) -> bool {
        self.0.len() == 1
    }

    pub fn is_split(&self) -> bool {
        self.0.iter().all(|&f| f == 1)
    }

    /// Comma-joined parts, e.g. `1,2,2`.
    pub fn key(&self) -> String {
        self.0
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.key())
    }
}

impl fmt::Debug for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for SplittingType {
    type Err = DensityError;

    /// Accepts `1,2,2` or `(1,2,2)`.
    fn from_str(s: &str) -> Result<SplittingType, DensityError> {
        let inner = s.trim();
        let inner = inner
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .unwrap_or(inner);
        let parts = inner
            .split(',')
            .map(|p| p.trim().parse::<u32>().map_err(|_| DensityError::InvalidType))
            .collect::<Result<Vec<_>, _>>()?;
        SplittingType::new(parts)
    }
}

impl Serialize for SplittingType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.key())
    }
}

impl<'de> Deserialize<'de> for SplittingType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<SplittingType, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Row keys of a density table: a single type, or a tuple for joint tables.
pub trait RowKey: Ord + Clone {
    fn label(&self) -> String;
}

impl RowKey for SplittingType {
    fn label(&self) -> String {
        self.to_string()
    }
}

impl RowKey for Vec<SplittingType> {
    fn label(&self) -> String {
        let inner: Vec<String> = self.iter().map(ToString::to_string).collect();
        format!("[{}]", inner.join(", "))
    }
}

/// Element counts per key over a group of known order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityTable<K: RowKey> {
    counts: BTreeMap<K, u64>,
    group_order: u64,
}

pub type JointDensityTable = DensityTable<Vec<SplittingType>>;

impl<K: RowKey> DensityTable<K> {
    pub fn from_counts(counts: BTreeMap<K, u64>, group_order: u64) -> DensityTable<K> {
        DensityTable {
            counts,
            group_order,
        }
    }

    pub fn group_order(&self) -> u64 {
        self.group_order
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn count(&self, key: &K) -> u64 {
        self.counts.get(key).copied().unwrap_or(0)
    }

    /// Density of a key; zero for keys that never occur.
    pub fn get(&self, key: &K) -> Rational {
        Rational::from_counts(self.count(key), self.group_order)
    }

    /// Rows in ascending key order.
    pub fn rows(&self) -> impl Iterator<Item = (&K, Rational)> + '_ {
        self.counts
            .iter()
            .map(move |(k, &c)| (k, Rational::from_counts(c, self.group_order)))
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.counts.keys()
    }

    pub fn total(&self) -> Rational {
        self.rows().map(|(_, d)| d).sum()
    }

    /// Sum of the densities of keys satisfying a predicate.
    pub fn density_where(&self, pred: impl Fn(&K) -> bool) -> Rational {
        self.rows().filter(|(k, _)| pred(k)).map(|(_, d)| d).sum()
    }

    /// Adds the counts of a partial table over the same group.
    pub fn merge(&mut self, other: &DensityTable<K>) {
        assert_eq!(self.group_order, other.group_order, "merging tables of different groups");
        for (k, &c) in &other.counts {
            *self.counts.entry(k.clone()).or_insert(0) += c;
        }
    }
}

impl<K: RowKey> fmt::Display for DensityTable<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, d) in self.rows() {
            writeln!(f, "{}: {}", k.label(), d)?;
        }
        Ok(())
    }
}

impl<K: RowKey> Serialize for DensityTable<K> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Row {
            key: String,
            count: u64,
            density: Rational,
        }
        let rows: Vec<Row> = self
            .counts
            .iter()
            .map(|(k, &c)| Row {
                key: k.label(),
                count: c,
                density: Rational::from_counts(c, self.group_order),
            })
            .collect();
        let mut st = s.serialize_struct("DensityTable", 2)?;
        st.serialize_field("group_order", &self.group_order)?;
        st.serialize_field("rows", &rows)?;
        st.end()
    }
}

/// The action of `G` by left multiplication on the left cosets of `U`.
pub struct CosetAction<'a> {
    group: &'a Group,
    table: CosetTable,
}

impl<'a> CosetAction<'a> {
    pub fn new(group: &'a Group, sub: &Group) -> Result<CosetAction<'a>, DensityError> {
        let table = group.left_cosets(sub)?;
        Ok(CosetAction { group, table })
    }

    /// Number of cosets, `[G:U]`.
    pub fn index(&self) -> usize {
        self.table.len()
    }

    pub fn cosets(&self) -> &CosetTable {
        &self.table
    }

    /// Images of the cosets under `g` (0-based coset indices).
    pub fn coset_images(&self, g: &Perm) -> Result<Vec<usize>, DensityError> {
        if !self.group.contains(g) {
            return Err(PermError::NotMember(g.clone()).into());
        }
        Ok(self.images_unchecked(g))
    }

    fn images_unchecked(&self, g: &Perm) -> Vec<usize> {
        self.table
            .representatives
            .iter()
            .map(|r| {
                let k = self.group.index_of(&g.mul(r)).expect("closed");
                self.table.coset_of_index(k)
            })
            .collect()
    }

    pub fn splitting_type(&self, g: &Perm) -> Result<SplittingType, DensityError> {
        if !self.group.contains(g) {
            return Err(PermError::NotMember(g.clone()).into());
        }
        Ok(self.splitting_type_unchecked(g))
    }

    pub(crate) fn splitting_type_unchecked(&self, g: &Perm) -> SplittingType {
        let images = self.images_unchecked(g);
        let n = images.len();
        let mut seen = vec![false; n];
        let mut parts = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                len += 1;
                x = images[x];
            }
            parts.push(len);
        }
        parts.sort_unstable();
        SplittingType(parts)
    }
}

/// Orbit sizes of `⟨g⟩` on the left cosets of `U` in `G`, ascending.
pub fn splitting_type(g: &Group, u: &Group, elem: &Perm) -> Result<SplittingType, DensityError> {
    CosetAction::new(g, u)?.splitting_type(elem)
}

fn count_types(action: &CosetAction<'_>, elements: &[Perm]) -> BTreeMap<SplittingType, u64> {
    let mut counts = BTreeMap::new();
    for e in elements {
        *counts.entry(action.splitting_type_unchecked(e)).or_insert(0) += 1;
    }
    counts
}

/// Density of each splitting type, by enumerating every element of `G`.
pub fn density_table(g: &Group, u: &Group) -> Result<DensityTable<SplittingType>, DensityError> {
    let action = CosetAction::new(g, u)?;
    Ok(DensityTable::from_counts(
        count_types(&action, g.elements()),
        g.order() as u64,
    ))
}

/// Same table as [`density_table`], with the element range split across
/// `jobs` threads. Partial counts merge by addition.
pub fn density_table_parallel(
    g: &Group,
    u: &Group,
    jobs: usize,
) -> Result<DensityTable<SplittingType>, DensityError> {
    let action = CosetAction::new(g, u)?;
    let jobs = jobs.max(1);
    let chunk = g.order().div_ceil(jobs).max(1);
    let mut table = DensityTable::from_counts(BTreeMap::new(), g.order() as u64);
    let partials: Vec<BTreeMap<SplittingType, u64>> = thread::scope(|s| {
        let handles: Vec<_> = g
            .elements()
            .chunks(chunk)
            .map(|part| {
                let action = &action;
                s.spawn(move || count_types(action, part))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    for p in partials {
        table.merge(&DensityTable::from_counts(p, g.order() as u64));
    }
    Ok(table)
}

/// Same table as [`density_table`], computed one conjugacy class at a time
/// with weight `#C/#G`.
pub fn density_table_by_classes(
    g: &Group,
    u: &Group,
) -> Result<DensityTable<SplittingType>, DensityError> {
    let action = CosetAction::new(g, u)?;
    let mut counts = BTreeMap::new();
    for class in g.conjugacy_classes() {
        let t = action.splitting_type_unchecked(&class.representative);
        *counts.entry(t).or_insert(0) += class.size() as u64;
    }
    Ok(DensityTable::from_counts(counts, g.order() as u64))
}

/// One conjugacy class with its splitting type and Chebotarev weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDensityRow {
    pub class: ConjClass,
    pub splitting_type: SplittingType,
    pub density: Rational,
}

/// Class-resolved table: one row per conjugacy class of `G`, in class order.
pub fn class_density_rows(g: &Group, u: &Group) -> Result<Vec<ClassDensityRow>, DensityError> {
    let action = CosetAction::new(g, u)?;
    Ok(g.conjugacy_classes()
        .into_iter()
        .map(|class| ClassDensityRow {
            splitting_type: action.splitting_type_unchecked(&class.representative),
            density: Rational::from_counts(class.size() as u64, g.order() as u64),
            class,
        })
        .collect())
}

/// Joint densities of splitting types in several subfields at once, keyed by
/// tuples in the order of `subs`.
pub fn joint_density_table(g: &Group, subs: &[Group]) -> Result<JointDensityTable, DensityError> {
    if subs.is_empty() {
        return Err(DensityError::NoSubgroups);
    }
    let actions = subs
        .iter()
        .map(|u| CosetAction::new(g, u))
        .collect::<Result<Vec<_>, _>>()?;
    let mut counts = BTreeMap::new();
    for e in g.elements() {
        let key: Vec<SplittingType> = actions
            .iter()
            .map(|a| a.splitting_type_unchecked(e))
            .collect();
        *counts.entry(key).or_insert(0) += 1;
    }
    Ok(DensityTable::from_counts(counts, g.order() as u64))
}

/// Per-class value of some function of the splitting type, in class order.
pub type ClassProfile<T> = Vec<(ConjClass, T)>;

/// Splitting type of each conjugacy class.
pub fn type_class_profile(
    g: &Group,
    u: &Group,
) -> Result<ClassProfile<SplittingType>, DensityError> {
    let action = CosetAction::new(g, u)?;
    Ok(g.conjugacy_classes()
        .into_iter()
        .map(|c| {
            let t = action.splitting_type_unchecked(&c.representative);
            (c, t)
        })
        .collect())
}

/// Gcd of the splitting type's parts for each conjugacy class.
pub fn gcd_class_profile(g: &Group, u: &Group) -> Result<ClassProfile<u32>, DensityError> {
    Ok(type_class_profile(g, u)?
        .into_iter()
        .map(|(c, t)| (c, t.gcd()))
        .collect())
}

/// Density of the single-part type `([G:U])`.
pub fn inert_density(g: &Group, u: &Group) -> Result<Rational, DensityError> {
    Ok(density_table(g, u)?.density_where(SplittingType::is_inert))
}

/// Density of the all-ones type.
pub fn split_density(g: &Group, u: &Group) -> Result<Rational, DensityError> {
    Ok(density_table(g, u)?.density_where(SplittingType::is_split))
}

/// Density of each gcd value of the splitting type.
pub fn gcd_distribution(g: &Group, u: &Group) -> Result<BTreeMap<u32, Rational>, DensityError> {
    let mut out: BTreeMap<u32, Rational> = BTreeMap::new();
    for (t, d) in density_table(g, u)?.rows() {
        let e = out.entry(t.gcd()).or_insert_with(Rational::zero);
        *e = *e + d;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(degree: usize, text: &str) -> Perm {
        Perm::parse_cycles(degree, text).unwrap()
    }

    fn st(parts: &[u32]) -> SplittingType {
        SplittingType::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn splitting_type_basics() {
        let t = st(&[2, 1, 2]);
        assert_eq!(t.parts(), &[1, 2, 2]);
        assert_eq!(t.key(), "1,2,2");
        assert_eq!(t.to_string(), "(1,2,2)");
        assert_eq!(t.gcd(), 1);
        assert_eq!(st(&[2, 2]).gcd(), 2);
        assert_eq!("(1,2,2)".parse::<SplittingType>().unwrap(), t);
        assert_eq!("2,2,1".parse::<SplittingType>().unwrap(), t);
        assert!(SplittingType::new(vec![]).is_err());
        assert!(SplittingType::new(vec![0, 1]).is_err());
        assert!("1,,2".parse::<SplittingType>().is_err());
    }

    #[test]
    fn splitting_type_examples() {
        let s3 = Group::symmetric(3);
        let a3 = Group::alternating(3);
        assert_eq!(splitting_type(&s3, &a3, &c(3, "(1 2 3)")).unwrap(), st(&[1, 1]));

        let stab = s3.point_stabilizer(1).unwrap();
        assert_eq!(splitting_type(&s3, &stab, &s3.identity()).unwrap(), st(&[1, 1, 1]));

        let a4 = Group::alternating(4);
        let v4 = a4
            .subgroup_generated(&[c(4, "(1 2)(3 4)"), c(4, "(1 3)(2 4)")])
            .unwrap();
        assert_eq!(
            splitting_type(&a4, &v4, &c(4, "(1 2)(3 4)")).unwrap(),
            st(&[1, 1, 1])
        );

        let err = splitting_type(&a4, &v4, &c(4, "(1 2)")).unwrap_err();
        assert!(matches!(err, DensityError::Perm(PermError::NotMember(_))));
    }

    #[test]
    fn stabilizer_action_is_natural_action() {
        for g in [Group::symmetric(4), Group::alternating(5)] {
            let stab = g.point_stabilizer(1).unwrap();
            let action = CosetAction::new(&g, &stab).unwrap();
            for e in g.elements() {
                let ct: Vec<u32> = e.cycle_type().iter().map(|&x| x as u32).collect();
                assert_eq!(action.splitting_type(e).unwrap().parts(), ct.as_slice());
            }
        }
    }

    #[test]
    fn s3_table() {
        let s3 = Group::symmetric(3);
        let stab = s3.point_stabilizer(1).unwrap();
        let t = density_table(&s3, &stab).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.get(&st(&[1, 1, 1])), Rational::new(1, 6));
        assert_eq!(t.get(&st(&[1, 2])), Rational::new(1, 2));
        assert_eq!(t.get(&st(&[3])), Rational::new(1, 3));
        assert_eq!(t.total(), Rational::one());
        assert_eq!(t, density_table_by_classes(&s3, &stab).unwrap());
        assert_eq!(t, density_table_parallel(&s3, &stab, 4).unwrap());
    }

    #[test]
    fn joint_single_equals_plain() {
        let s4 = Group::symmetric(4);
        let stab = s4.point_stabilizer(1).unwrap();
        let plain = density_table(&s4, &stab).unwrap();
        let joint = joint_density_table(&s4, &[stab]).unwrap();
        assert_eq!(plain.len(), joint.len());
        for (k, d) in plain.rows() {
            assert_eq!(joint.get(&vec![k.clone()]), d);
        }
        assert_eq!(
            joint_density_table(&s4, &[]).unwrap_err(),
            DensityError::NoSubgroups
        );
    }

    #[test]
    fn s3_joint_with_quadratic() {
        let s3 = Group::symmetric(3);
        let stab = s3.point_stabilizer(1).unwrap();
        let a3 = Group::alternating(3);
        let j = joint_density_table(&s3, &[stab, a3]).unwrap();
        assert_eq!(j.get(&vec![st(&[3]), st(&[1, 1])]), Rational::new(1, 3));
        assert_eq!(j.get(&vec![st(&[3]), st(&[2])]), Rational::zero());
    }

    #[test]
    fn gcd_profile_examples() {
        let c5 = Group::generate(&[c(5, "(1 2 3 4 5)")]).unwrap();
        let triv = Group::trivial(5);
        let prof = gcd_class_profile(&c5, &triv).unwrap();
        assert_eq!(prof[0].1, 1);
        assert!(prof[1..].iter().all(|(_, g)| *g == 5));
        assert_eq!(inert_density(&c5, &triv).unwrap(), Rational::new(4, 5));
    }

    #[test]
    fn gcd_distribution_sums_to_one() {
        let s4 = Group::symmetric(4);
        let stab = s4.point_stabilizer(1).unwrap();
        let d = gcd_distribution(&s4, &stab).unwrap();
        assert_eq!(d.values().copied().sum::<Rational>(), Rational::one());
        assert_eq!(d[&2], Rational::new(1, 8));
        assert_eq!(d[&4], Rational::new(1, 4));
    }

    #[test]
    fn non_subgroup_rejected() {
        let a4 = Group::alternating(4);
        let outside = Group::generate(&[c(4, "(1 2)")]).unwrap();
        assert!(density_table(&a4, &outside).is_err());
        assert!(gcd_class_profile(&a4, &outside).is_err());
        assert!(inert_density(&a4, &outside).is_err());
    }
}
