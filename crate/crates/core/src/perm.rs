//! Finite permutation groups, fully enumerated.
//!
//! Points are 1-based in every public surface (cycle notation, stabilizers),
//! stored 0-based internally. Composition applies the right factor first:
//! `p.compose(&q)` maps `x` to `p(q(x))`.
//!
//! Groups are small (the largest used here is a direct product of order
//! 14400), so every group keeps its full sorted element list and all
//! operations work by enumeration.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("image array is not a bijection on 1..={0}")]
    NotBijection(usize),
    #[error("permutation degree must be at least 1")]
    ZeroDegree,
    #[error("degree {0} exceeds the supported maximum of 255 points")]
    DegreeTooLarge(usize),
    #[error("point {point} out of range 1..={degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("at least one generator is required")]
    NoGenerators,
    #[error("element set is not a subgroup of the parent group")]
    NotSubgroup,
    #[error("element {0} is not in the group")]
    NotMember(Perm),
    #[error("element set is not closed under composition")]
    NotClosed,
    #[error("cannot parse cycle notation {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

/// A permutation of `{1, …, n}` stored as its image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Box<[u8]>,
}

impl Perm {
    pub fn identity(degree: usize) -> Perm {
        assert!((1..=255).contains(&degree), "degree out of range");
        Perm {
            images: (0..degree as u8).collect(),
        }
    }

    /// Builds a permutation from 1-based images: `images[i - 1]` is the image of `i`.
    pub fn from_images(images: &[usize]) -> Result<Perm, PermError> {
        let n = images.len();
        if n == 0 {
            return Err(PermError::ZeroDegree);
        }
        if n > 255 {
            return Err(PermError::DegreeTooLarge(n));
        }
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for &img in images {
            if img == 0 || img > n || seen[img - 1] {
                return Err(PermError::NotBijection(n));
            }
            seen[img - 1] = true;
            out.push((img - 1) as u8);
        }
        Ok(Perm {
            images: out.into_boxed_slice(),
        })
    }

    /// Builds a permutation of the given degree from 1-based cycles.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Perm, PermError> {
        if degree == 0 {
            return Err(PermError::ZeroDegree);
        }
        if degree > 255 {
            return Err(PermError::DegreeTooLarge(degree));
        }
        let mut images: Vec<usize> = (1..=degree).collect();
        let mut used = vec![false; degree];
        for cycle in cycles {
            for (k, &pt) in cycle.iter().enumerate() {
                if pt == 0 || pt > degree {
                    return Err(PermError::PointOutOfRange { point: pt, degree });
                }
                if used[pt - 1] {
                    return Err(PermError::NotBijection(degree));
                }
                used[pt - 1] = true;
                images[pt - 1] = cycle[(k + 1) % cycle.len()];
            }
        }
        Perm::from_images(&images)
    }

    /// Parses cycle notation such as `(1 2 3)(4 5)` or `()` for the identity.
    /// Points inside a cycle may be separated by spaces or commas.
    pub fn parse_cycles(degree: usize, text: &str) -> Result<Perm, PermError> {
        let err = |reason: &str| PermError::Parse {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = text.trim();
        if rest.is_empty() {
            return Err(err("empty input"));
        }
        while !rest.is_empty() {
            let open = rest.strip_prefix('(').ok_or_else(|| err("expected '('"))?;
            let close = open.find(')').ok_or_else(|| err("unbalanced '('"))?;
            let body = &open[..close];
            let mut cycle = Vec::new();
            for tok in body.split(|c: char| c.is_whitespace() || c == ',') {
                if tok.is_empty() {
                    continue;
                }
                cycle.push(tok.parse::<usize>().map_err(|_| err("non-numeric point"))?);
            }
            if !cycle.is_empty() {
                cycles.push(cycle);
            }
            rest = open[close + 1..].trim_start();
        }
        let refs: Vec<&[usize]> = cycles.iter().map(Vec::as_slice).collect();
        Perm::from_cycles(degree, &refs)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of a 1-based point.
    pub fn apply(&self, point: usize) -> usize {
        self.images[point - 1] as usize + 1
    }

    /// 1-based image array.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&i| i as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Result<Perm, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self.mul(other))
    }

    // Unchecked composition for callers that already know the degrees agree.
    pub(crate) fn mul(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            images: other
                .images
                .iter()
                .map(|&j| self.images[j as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u8;
        }
        Perm {
            images: inv.into_boxed_slice(),
        }
    }

    /// `x · self · x⁻¹`
    pub fn conjugate_by(&self, x: &Perm) -> Perm {
        x.mul(self).mul(&x.inverse())
    }

    pub fn pow(&self, exp: i64) -> Perm {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut result = Perm::identity(self.degree());
        for _ in 0..exp.unsigned_abs() {
            result = result.mul(&base);
        }
        result
    }

    /// Disjoint cycles of length ≥ 2, each starting at its smallest point (1-based).
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.images[x] as usize;
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Ascending cycle lengths, fixed points included as 1s.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut lens = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                len += 1;
                x = self.images[x] as usize;
            }
            lens.push(len);
        }
        lens.sort_unstable();
        lens
    }

    pub fn order(&self) -> usize {
        self.cycle_type()
            .into_iter()
            .fold(1, num_integer::lcm)
    }

    /// Places `self` on points `1..=n1` and `other` on `n1+1..=n1+n2`.
    pub fn disjoint_sum(&self, other: &Perm) -> Perm {
        let shift = self.degree() as u8;
        let images: Box<[u8]> = self
            .images
            .iter()
            .copied()
            .chain(other.images.iter().map(|&j| j + shift))
            .collect();
        assert!(images.len() <= 255, "degree out of range");
        Perm { images }
    }

    /// Restriction to the block of points `start..start+len` (1-based start),
    /// assuming the block is invariant.
    pub fn restrict(&self, start: usize, len: usize) -> Perm {
        let off = (start - 1) as u8;
        Perm {
            images: self.images[start - 1..start - 1 + len]
                .iter()
                .map(|&j| j - off)
                .collect(),
        }
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (k, p) in c.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A conjugacy class of a group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConjClass {
    /// Smallest member in image-array order.
    pub representative: Perm,
    /// Sorted members.
    pub members: Vec<Perm>,
}

impl ConjClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        self.members.binary_search(g).is_ok()
    }
}

/// Left cosets `gU` of a subgroup, in order of their smallest members.
#[derive(Debug, Clone)]
pub struct CosetTable {
    pub cosets: Vec<Vec<Perm>>,
    pub representatives: Vec<Perm>,
    // coset index of each parent element, aligned with the parent's sorted element list
    coset_of: Vec<usize>,
}

impl CosetTable {
    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    /// Coset index of the parent element with the given position.
    pub fn coset_of_index(&self, element_index: usize) -> usize {
        self.coset_of[element_index]
    }
}

/// A finite permutation group with all of its elements enumerated.
#[derive(Clone)]
pub struct Group {
    degree: usize,
    elements: Vec<Perm>,
    generators: Vec<Perm>,
}

impl PartialEq for Group {
    fn eq(&self, other: &Group) -> bool {
        self.degree == other.degree && self.elements == other.elements
    }
}

impl Eq for Group {}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Group(degree {}, order {}, <", self.degree, self.order())?;
        for (k, g) in self.generators.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str(">)")
    }
}

fn check_degrees(degree: usize, perms: &[Perm]) -> Result<(), PermError> {
    for p in perms {
        if p.degree() != degree {
            return Err(PermError::DegreeMismatch {
                left: degree,
                right: p.degree(),
            });
        }
    }
    Ok(())
}

impl Group {
    /// Closure of a nonempty generator list.
    pub fn generate(generators: &[Perm]) -> Result<Group, PermError> {
        let first = generators.first().ok_or(PermError::NoGenerators)?;
        Group::generate_with_degree(first.degree(), generators)
    }

    /// Closure of a possibly empty generator list; the empty list gives the trivial group.
    pub fn generate_with_degree(degree: usize, generators: &[Perm]) -> Result<Group, PermError> {
        if degree == 0 {
            return Err(PermError::ZeroDegree);
        }
        check_degrees(degree, generators)?;
        let identity = Perm::identity(degree);
        let mut seen: HashSet<Perm> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(identity.clone());
        queue.push_back(identity);
        // Right-multiplying by generators reaches every element of a finite group.
        while let Some(x) = queue.pop_front() {
            for g in generators {
                let y = x.mul(g);
                if !seen.contains(&y) {
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<Perm> = seen.into_iter().collect();
        elements.sort_unstable();
        let mut gens: Vec<Perm> = generators
            .iter()
            .filter(|g| !g.is_identity())
            .cloned()
            .collect();
        gens.dedup();
        Ok(Group {
            degree,
            elements,
            generators: gens,
        })
    }

    pub fn trivial(degree: usize) -> Group {
        Group {
            degree,
            elements: vec![Perm::identity(degree)],
            generators: Vec::new(),
        }
    }

    pub fn symmetric(n: usize) -> Group {
        if n == 1 {
            return Group::trivial(1);
        }
        let cycle: Vec<usize> = (2..=n).chain(std::iter::once(1)).collect();
        let gens = [
            Perm::from_images(&cycle).expect("n-cycle"),
            Perm::from_cycles(n, &[&[1, 2]]).expect("transposition"),
        ];
        Group::generate(&gens).expect("valid generators")
    }

    pub fn alternating(n: usize) -> Group {
        if n < 3 {
            return Group::trivial(n);
        }
        // 3-cycles (1 2 k) generate A_n.
        let gens: Vec<Perm> = (3..=n)
            .map(|k| Perm::from_cycles(n, &[&[1, 2, k]]).expect("3-cycle"))
            .collect();
        Group::generate(&gens).expect("valid generators")
    }

    /// Validates an explicit element set: nonempty, consistent degree, contains the
    /// identity, closed under composition.
    pub fn from_elements(degree: usize, elements: Vec<Perm>) -> Result<Group, PermError> {
        if degree == 0 {
            return Err(PermError::ZeroDegree);
        }
        check_degrees(degree, &elements)?;
        let mut elements = elements;
        elements.sort_unstable();
        elements.dedup();
        if elements.binary_search(&Perm::identity(degree)).is_err() {
            return Err(PermError::NotClosed);
        }
        for a in &elements {
            for b in &elements {
                if elements.binary_search(&a.mul(b)).is_err() {
                    return Err(PermError::NotClosed);
                }
            }
        }
        let generators = elements.iter().filter(|g| !g.is_identity()).cloned().collect();
        Ok(Group {
            degree,
            elements,
            generators,
        })
    }

    /// Subgroup of `self` generated by the given elements, which must belong to `self`.
    pub fn subgroup_generated(&self, generators: &[Perm]) -> Result<Group, PermError> {
        for g in generators {
            if g.degree() != self.degree {
                return Err(PermError::DegreeMismatch {
                    left: self.degree,
                    right: g.degree(),
                });
            }
            if !self.contains(g) {
                return Err(PermError::NotMember(g.clone()));
            }
        }
        Group::generate_with_degree(self.degree, generators)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Elements in ascending image-array order (the identity is first).
    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn identity(&self) -> Perm {
        Perm::identity(self.degree)
    }

    pub fn contains(&self, g: &Perm) -> bool {
        g.degree() == self.degree && self.elements.binary_search(g).is_ok()
    }

    /// Position of `g` in [`Group::elements`].
    pub fn index_of(&self, g: &Perm) -> Option<usize> {
        if g.degree() != self.degree {
            return None;
        }
        self.elements.binary_search(g).ok()
    }

    pub fn is_subgroup_of(&self, parent: &Group) -> bool {
        self.degree == parent.degree
            && parent.order().is_multiple_of(self.order())
            && self.elements.iter().all(|g| parent.contains(g))
    }

    fn require_subgroup(&self, sub: &Group) -> Result<(), PermError> {
        if sub.is_subgroup_of(self) {
            Ok(())
        } else {
            Err(PermError::NotSubgroup)
        }
    }

    pub fn index(&self, sub: &Group) -> Result<usize, PermError> {
        self.require_subgroup(sub)?;
        Ok(self.order() / sub.order())
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .all(|a| self.generators.iter().all(|b| a.mul(b) == b.mul(a)))
    }

    /// Orbit of a 1-based point, sorted.
    pub fn orbit(&self, point: usize) -> Result<Vec<usize>, PermError> {
        if point == 0 || point > self.degree {
            return Err(PermError::PointOutOfRange {
                point,
                degree: self.degree,
            });
        }
        let mut orbit: Vec<usize> = self.elements.iter().map(|g| g.apply(point)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        Ok(orbit)
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit(1).map(|o| o.len() == self.degree).unwrap_or(false)
    }

    /// Classes sorted by representative; the identity class comes first.
    pub fn conjugacy_classes(&self) -> Vec<ConjClass> {
        let mut class_id: Vec<Option<usize>> = vec![None; self.order()];
        let mut classes = Vec::new();
        for start in 0..self.order() {
            if class_id[start].is_some() {
                continue;
            }
            let id = classes.len();
            class_id[start] = Some(id);
            let mut members = vec![self.elements[start].clone()];
            let mut frontier = vec![self.elements[start].clone()];
            // Orbit under conjugation by generators is the whole class.
            while let Some(x) = frontier.pop() {
                for s in &self.generators {
                    let y = x.conjugate_by(s);
                    let k = self.index_of(&y).expect("closed under conjugation");
                    if class_id[k].is_none() {
                        class_id[k] = Some(id);
                        members.push(y.clone());
                        frontier.push(y);
                    }
                }
            }
            members.sort_unstable();
            classes.push(ConjClass {
                representative: members[0].clone(),
                members,
            });
        }
        classes
    }

    /// Index of the class containing each element, aligned with [`Group::elements`].
    pub fn class_indices(&self, classes: &[ConjClass]) -> Vec<usize> {
        let mut out = vec![usize::MAX; self.order()];
        for (c, class) in classes.iter().enumerate() {
            for m in &class.members {
                out[self.index_of(m).expect("class member")] = c;
            }
        }
        out
    }

    pub fn left_cosets(&self, sub: &Group) -> Result<CosetTable, PermError> {
        self.require_subgroup(sub)?;
        let mut coset_of = vec![usize::MAX; self.order()];
        let mut cosets = Vec::new();
        let mut representatives = Vec::new();
        for start in 0..self.order() {
            if coset_of[start] != usize::MAX {
                continue;
            }
            let g = &self.elements[start];
            let id = cosets.len();
            let mut coset: Vec<Perm> = sub.elements.iter().map(|u| g.mul(u)).collect();
            coset.sort_unstable();
            for m in &coset {
                coset_of[self.index_of(m).expect("coset member in parent")] = id;
            }
            representatives.push(g.clone());
            cosets.push(coset);
        }
        Ok(CosetTable {
            cosets,
            representatives,
            coset_of,
        })
    }

    pub fn point_stabilizer(&self, point: usize) -> Result<Group, PermError> {
        if point == 0 || point > self.degree {
            return Err(PermError::PointOutOfRange {
                point,
                degree: self.degree,
            });
        }
        let elements: Vec<Perm> = self
            .elements
            .iter()
            .filter(|g| g.apply(point) == point)
            .cloned()
            .collect();
        let generators = elements.iter().filter(|g| !g.is_identity()).cloned().collect();
        Ok(Group {
            degree: self.degree,
            elements,
            generators,
        })
    }

    /// Direct product acting on disjoint blocks `1..=n1` and `n1+1..=n1+n2`.
    pub fn direct_product(&self, other: &Group) -> Group {
        let left_id = self.identity();
        let right_id = other.identity();
        let mut elements = Vec::with_capacity(self.order() * other.order());
        for a in &self.elements {
            for b in &other.elements {
                elements.push(a.disjoint_sum(b));
            }
        }
        elements.sort_unstable();
        let generators = self
            .generators
            .iter()
            .map(|a| a.disjoint_sum(&right_id))
            .chain(other.generators.iter().map(|b| left_id.disjoint_sum(b)))
            .collect();
        Group {
            degree: self.degree + other.degree,
            elements,
            generators,
        }
    }

    /// Whether some `x` in `self` satisfies `x·U1·x⁻¹ = U2`.
    pub fn are_conjugate_subgroups(&self, u1: &Group, u2: &Group) -> Result<bool, PermError> {
        self.require_subgroup(u1)?;
        self.require_subgroup(u2)?;
        if u1.order() != u2.order() {
            return Ok(false);
        }
        // Equal orders: the conjugate lands inside U2 iff it equals U2.
        Ok(self.elements.iter().any(|x| {
            u1.generators
                .iter()
                .all(|g| u2.contains(&g.conjugate_by(x)))
        }))
    }

    pub fn conjugate_subgroup(&self, sub: &Group, x: &Perm) -> Result<Group, PermError> {
        self.require_subgroup(sub)?;
        if !self.contains(x) {
            return Err(PermError::NotMember(x.clone()));
        }
        let mut elements: Vec<Perm> = sub.elements.iter().map(|g| g.conjugate_by(x)).collect();
        elements.sort_unstable();
        let generators = sub.generators.iter().map(|g| g.conjugate_by(x)).collect();
        Ok(Group {
            degree: self.degree,
            elements,
            generators,
        })
    }

    pub fn is_normal(&self, sub: &Group) -> Result<bool, PermError> {
        self.require_subgroup(sub)?;
        Ok(self.generators.iter().all(|x| {
            sub.generators
                .iter()
                .all(|g| sub.contains(&g.conjugate_by(x)))
        }))
    }

    /// Intersection of all conjugates of `sub`.
    pub fn core(&self, sub: &Group) -> Result<Group, PermError> {
        self.require_subgroup(sub)?;
        let elements: Vec<Perm> = sub
            .elements
            .iter()
            .filter(|g| self.elements.iter().all(|x| sub.contains(&g.conjugate_by(x))))
            .cloned()
            .collect();
        let generators = elements.iter().filter(|g| !g.is_identity()).cloned().collect();
        Ok(Group {
            degree: self.degree,
            elements,
            generators,
        })
    }

    /// Every subgroup, sorted by order then by element list.
    ///
    /// Builds a multiplication table, so it is meant for groups of order up to a
    /// few hundred (all catalog groups).
    pub fn subgroups(&self) -> Vec<Group> {
        let n = self.order();
        let mut table = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                let k = self
                    .index_of(&self.elements[i].mul(&self.elements[j]))
                    .expect("closed");
                table[i * n + j] = k as u32;
            }
        }
        let mul = |i: usize, j: usize| table[i * n + j] as usize;

        // closure of an index set given as membership flags plus generator list
        let close = |gens: &[usize]| -> Vec<usize> {
            let mut member = vec![false; n];
            member[0] = true;
            let mut list = vec![0usize];
            let mut k = 0;
            while k < list.len() {
                let x = list[k];
                for &g in gens {
                    let y = mul(x, g);
                    if !member[y] {
                        member[y] = true;
                        list.push(y);
                    }
                }
                k += 1;
            }
            list.sort_unstable();
            list
        };

        let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut found: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        let mut cyclic: Vec<(Vec<usize>, usize)> = Vec::new();
        for g in 0..n {
            let sub = close(&[g]);
            if !seen.contains_key(&sub) {
                seen.insert(sub.clone(), found.len());
                let gens = if g == 0 { vec![] } else { vec![g] };
                found.push((sub.clone(), gens));
                cyclic.push((sub, g));
            }
        }
        // Every subgroup is a join of cyclic subgroups.
        let mut k = 0;
        while k < found.len() {
            let (members, gens) = found[k].clone();
            for (csub, c) in &cyclic {
                if csub.iter().all(|x| members.binary_search(x).is_ok()) {
                    continue;
                }
                let mut new_gens = gens.clone();
                new_gens.push(*c);
                let joined = close(&new_gens);
                if !seen.contains_key(&joined) {
                    seen.insert(joined.clone(), found.len());
                    found.push((joined, new_gens));
                }
            }
            k += 1;
        }

        let mut groups: Vec<Group> = found
            .into_iter()
            .map(|(members, gens)| Group {
                degree: self.degree,
                elements: members.iter().map(|&i| self.elements[i].clone()).collect(),
                generators: gens.iter().map(|&i| self.elements[i].clone()).collect(),
            })
            .collect();
        groups.sort_by(|a, b| {
            a.order()
                .cmp(&b.order())
                .then_with(|| a.elements.cmp(&b.elements))
        });
        groups
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(degree: usize, text: &str) -> Perm {
        Perm::parse_cycles(degree, text).unwrap()
    }

    fn dihedral8() -> Group {
        Group::generate(&[c(4, "(1 2 3 4)"), c(4, "(1 3)")]).unwrap()
    }

    #[test]
    fn compose_convention() {
        let id = Perm::identity(4);
        let s = c(4, "(1 2 3 4)");
        assert_eq!(id.compose(&s).unwrap(), s);
        let t = c(3, "(1 2)");
        assert!(t.compose(&t).unwrap().is_identity());
        assert_eq!(c(3, "(1 2 3)").compose(&t).unwrap(), c(3, "(1 3)"));
    }

    #[test]
    fn compose_table_matches_pointwise_definition() {
        let s3 = Group::symmetric(3);
        for p in s3.elements() {
            for q in s3.elements() {
                let r = p.compose(q).unwrap();
                for x in 1..=3 {
                    assert_eq!(r.apply(x), p.apply(q.apply(x)));
                }
            }
        }
    }

    #[test]
    fn compose_rejects_degree_mismatch() {
        let err = c(3, "(1 2)").compose(&c(4, "(1 2)")).unwrap_err();
        assert_eq!(err, PermError::DegreeMismatch { left: 3, right: 4 });
    }

    #[test]
    fn from_images_validates() {
        assert!(Perm::from_images(&[]).is_err());
        assert!(Perm::from_images(&[1, 1]).is_err());
        assert!(Perm::from_images(&[2, 3]).is_err());
        assert_eq!(Perm::from_images(&[2, 1]).unwrap(), c(2, "(1 2)"));
    }

    #[test]
    fn display_roundtrip() {
        let p = c(5, "(1 3 5)(2 4)");
        assert_eq!(p.to_string(), "(1 3 5)(2 4)");
        assert_eq!(Perm::parse_cycles(5, &p.to_string()).unwrap(), p);
        assert_eq!(Perm::identity(3).to_string(), "()");
        assert!(Perm::parse_cycles(3, "(1 2").is_err());
        assert!(Perm::parse_cycles(3, "(1 4)").is_err());
    }

    #[test]
    fn generate_examples() {
        assert_eq!(Group::generate(&[c(5, "(1 2 3 4 5)")]).unwrap().order(), 5);
        let s = c(5, "(1 2 3 4 5)");
        let t = c(5, "(2 5)(3 4)");
        let d5 = Group::generate(&[s.clone(), t.clone()]).unwrap();
        assert_eq!(d5.order(), 10);
        assert_eq!(t.mul(&s).mul(&t), s.inverse());
        assert_eq!(
            Group::generate(&[c(3, "(1 2 3)"), c(3, "(1 2)")]).unwrap().order(),
            6
        );
        assert_eq!(Group::generate(&[]).unwrap_err(), PermError::NoGenerators);
        assert!(Group::generate(&[c(3, "(1 2)"), c(4, "(1 2)")]).is_err());
    }

    #[test]
    fn standard_families() {
        assert_eq!(Group::symmetric(5).order(), 120);
        assert_eq!(Group::alternating(5).order(), 60);
        assert_eq!(Group::alternating(4).order(), 12);
        assert_eq!(Group::symmetric(1).order(), 1);
    }

    // Brute-force class computation: g ~ h iff some x with x g x⁻¹ = h.
    fn brute_class_sizes(g: &Group) -> Vec<usize> {
        let mut assigned = vec![false; g.order()];
        let mut sizes = Vec::new();
        for (i, a) in g.elements().iter().enumerate() {
            if assigned[i] {
                continue;
            }
            let mut size = 0;
            for (j, b) in g.elements().iter().enumerate() {
                if g.elements().iter().any(|x| x.mul(a).mul(&x.inverse()) == *b) {
                    assigned[j] = true;
                    size += 1;
                }
            }
            sizes.push(size);
        }
        sizes.sort_unstable();
        sizes
    }

    #[test]
    fn conjugacy_class_examples() {
        let c4 = Group::generate(&[c(4, "(1 2 3 4)")]).unwrap();
        assert_eq!(c4.conjugacy_classes().len(), 4);

        let s3 = Group::symmetric(3);
        let mut sizes: Vec<usize> = s3.conjugacy_classes().iter().map(ConjClass::size).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, brute_class_sizes(&s3));
        assert_eq!(sizes, vec![1, 2, 3]);

        let d4 = dihedral8();
        let mut sizes: Vec<usize> = d4.conjugacy_classes().iter().map(ConjClass::size).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, brute_class_sizes(&d4));
        assert_eq!(sizes, vec![1, 1, 2, 2, 2]);
    }

    #[test]
    fn classes_partition_and_are_closed() {
        for g in [Group::symmetric(4), Group::alternating(5), dihedral8()] {
            let classes = g.conjugacy_classes();
            assert_eq!(classes.iter().map(ConjClass::size).sum::<usize>(), g.order());
            assert!(classes[0].representative.is_identity());
            for w in classes.windows(2) {
                assert!(w[0].representative < w[1].representative);
            }
            for class in &classes {
                let ct = class.representative.cycle_type();
                for m in &class.members {
                    assert_eq!(m.cycle_type(), ct);
                    for x in g.elements() {
                        assert!(class.contains(&m.conjugate_by(x)));
                    }
                }
            }
        }
    }

    #[test]
    fn coset_examples() {
        let s3 = Group::symmetric(3);
        let a3 = Group::alternating(3);
        assert_eq!(s3.left_cosets(&a3).unwrap().len(), 2);
        assert_eq!(s3.left_cosets(&s3).unwrap().len(), 1);
        let d4 = dihedral8();
        let refl = d4.subgroup_generated(&[c(4, "(1 3)")]).unwrap();
        let table = d4.left_cosets(&refl).unwrap();
        assert_eq!(table.len(), 4);
        let mut all: Vec<Perm> = table.cosets.concat();
        all.sort();
        assert_eq!(all, d4.elements());
        assert!(table.cosets.iter().all(|c| c.len() == 2));
        let not_sub = Group::generate(&[c(4, "(1 2)")]).unwrap();
        assert_eq!(d4.left_cosets(&not_sub).unwrap_err(), PermError::NotSubgroup);
    }

    #[test]
    fn stabilizer_examples() {
        let c5 = Group::generate(&[c(5, "(1 2 3 4 5)")]).unwrap();
        assert_eq!(c5.point_stabilizer(3).unwrap().order(), 1);
        let s3 = Group::symmetric(3);
        let st = s3.point_stabilizer(3).unwrap();
        assert_eq!(st.elements(), &[Perm::identity(3), c(3, "(1 2)")]);
        assert_eq!(Group::alternating(4).point_stabilizer(1).unwrap().order(), 3);
        assert!(s3.point_stabilizer(4).is_err());
        assert!(s3.point_stabilizer(0).is_err());
    }

    #[test]
    fn direct_product_examples() {
        let c2 = Group::generate(&[c(2, "(1 2)")]).unwrap();
        assert_eq!(c2.direct_product(&c2).order(), 4);
        let triv = Group::trivial(1);
        let s3 = Group::symmetric(3);
        assert_eq!(triv.direct_product(&s3).order(), 6);
        let a5 = Group::alternating(5);
        let p = a5.direct_product(&a5);
        assert_eq!(p.order(), 3600);
        assert_eq!(p.degree(), 10);
        let regen = Group::generate(p.generators()).unwrap();
        assert_eq!(regen, p);
    }

    #[test]
    fn direct_product_blocks_restrict_to_factors() {
        let s3 = Group::symmetric(3);
        let c4 = Group::generate(&[c(4, "(1 2 3 4)")]).unwrap();
        let p = s3.direct_product(&c4);
        let mut left: Vec<Perm> = p.elements().iter().map(|g| g.restrict(1, 3)).collect();
        left.sort();
        left.dedup();
        assert_eq!(left, s3.elements());
        let mut right: Vec<Perm> = p.elements().iter().map(|g| g.restrict(4, 4)).collect();
        right.sort();
        right.dedup();
        assert_eq!(right, c4.elements());
    }

    #[test]
    fn subgroup_conjugacy_examples() {
        let d4 = dihedral8();
        let diag1 = d4.subgroup_generated(&[c(4, "(1 3)")]).unwrap();
        let diag2 = d4.subgroup_generated(&[c(4, "(2 4)")]).unwrap();
        let edge = d4.subgroup_generated(&[c(4, "(1 4)(2 3)")]).unwrap();
        assert!(d4.are_conjugate_subgroups(&diag1, &diag1).unwrap());
        assert!(d4.are_conjugate_subgroups(&diag1, &diag2).unwrap());
        assert!(!d4.are_conjugate_subgroups(&diag1, &edge).unwrap());
        let outside = Group::generate(&[c(4, "(1 2)")]).unwrap();
        assert!(d4.are_conjugate_subgroups(&diag1, &outside).is_err());
    }

    #[test]
    fn subgroup_enumeration_counts() {
        // Known subgroup counts of small groups.
        assert_eq!(dihedral8().subgroups().len(), 10);
        assert_eq!(Group::symmetric(3).subgroups().len(), 6);
        assert_eq!(Group::alternating(4).subgroups().len(), 10);
        assert_eq!(Group::symmetric(4).subgroups().len(), 30);
        assert_eq!(Group::alternating(5).subgroups().len(), 59);
        assert_eq!(Group::symmetric(5).subgroups().len(), 156);
        let order2 = dihedral8()
            .subgroups()
            .into_iter()
            .filter(|h| h.order() == 2)
            .count();
        assert_eq!(order2, 5);
    }

    #[test]
    fn core_and_normality() {
        let s4 = Group::symmetric(4);
        let stab = s4.point_stabilizer(1).unwrap();
        assert_eq!(s4.core(&stab).unwrap().order(), 1);
        assert!(!s4.is_normal(&stab).unwrap());
        let a4 = Group::alternating(4);
        assert!(s4.is_normal(&a4).unwrap());
        assert_eq!(s4.core(&a4).unwrap(), a4);
    }

    #[test]
    fn from_elements_checks_closure() {
        let ok = Group::from_elements(3, vec![Perm::identity(3), c(3, "(1 2)")]).unwrap();
        assert_eq!(ok.order(), 2);
        assert_eq!(
            Group::from_elements(3, vec![Perm::identity(3), c(3, "(1 2 3)")]).unwrap_err(),
            PermError::NotClosed
        );
        assert_eq!(
            Group::from_elements(3, vec![c(3, "(1 2)")]).unwrap_err(),
            PermError::NotClosed
        );
    }

    #[test]
    fn orders_and_powers() {
        let p = c(5, "(1 2 3)(4 5)");
        assert_eq!(p.order(), 6);
        assert!(p.pow(6).is_identity());
        assert_eq!(p.pow(-1), p.inverse());
        assert_eq!(p.cycle_type(), vec![2, 3]);
    }
}
