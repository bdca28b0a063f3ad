//! Slow reference implementations used to cross-check the fast paths.
//!
//! Nothing here shares code with the routines it checks: polynomials are
//! plain coefficient vectors, primes come from trial division and splitting
//! types are recovered from fixed-point counts instead of orbit walks.

use std::collections::BTreeMap;

use crate::density::SplittingType;
use crate::perm::{Group, Perm};

/// Prime factorization by trial division, ascending.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime_naive(n: u64) -> bool {
    n >= 2 && factor_u64(n) == [(n, 1)]
}

pub fn naive_primes(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&n| is_prime_naive(n)).collect()
}

// Dense polynomials over F_p, lowest coefficient first, no trailing zeros.

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv(a: u64, p: u64) -> u64 {
    // Fermat, p is small here
    let mut r = 1u64;
    for _ in 0..p - 2 {
        r = r * a % p;
    }
    r
}

/// Quotient when `den` divides `num` exactly.
fn divides(num: &[u64], den: &[u64], p: u64) -> Option<Vec<u64>> {
    let mut r = num.to_vec();
    let dl = den.len();
    if r.len() < dl {
        return None;
    }
    let lead_inv = inv(*den.last().unwrap(), p);
    let mut q = vec![0u64; r.len() - dl + 1];
    for i in (0..q.len()).rev() {
        let c = r[i + dl - 1] * lead_inv % p;
        q[i] = c;
        for j in 0..dl {
            r[i + j] = (r[i + j] + p * p - c * den[j] % p) % p;
        }
    }
    if trim(r).is_empty() {
        Some(trim(q))
    } else {
        None
    }
}

/// All monic polynomials of exact degree `d` over F_p.
fn monics(d: usize, p: u64) -> impl Iterator<Item = Vec<u64>> {
    let count = p.pow(d as u32);
    (0..count).map(move |mut k| {
        let mut v = Vec::with_capacity(d + 1);
        for _ in 0..d {
            v.push(k % p);
            k /= p;
        }
        v.push(1);
        v
    })
}

/// Monic irreducibles of degree `1..=max_degree`, found by trial division.
pub fn irreducibles(max_degree: usize, p: u64) -> Vec<Vec<u64>> {
    let mut irr: Vec<Vec<u64>> = Vec::new();
    for d in 1..=max_degree {
        let found: Vec<Vec<u64>> = monics(d, p)
            .filter(|f| {
                irr.iter()
                    .take_while(|g| 2 * (g.len() - 1) <= d)
                    .all(|g| divides(f, g, p).is_none())
            })
            .collect();
        irr.extend(found);
    }
    irr
}

/// Trial division over F_p by every monic irreducible of degree up to half
/// the largest input degree.
pub struct TrialFactorizer {
    p: u64,
    max_degree: usize,
    irreducibles: Vec<Vec<u64>>,
}

impl TrialFactorizer {
    pub fn new(p: u64, max_degree: usize) -> TrialFactorizer {
        TrialFactorizer {
            p,
            max_degree,
            irreducibles: irreducibles(max_degree / 2, p),
        }
    }

    /// Factorization pattern of `f` (coefficients lowest first, need not be
    /// reduced). `None` if `f` has a repeated factor or is constant after
    /// reduction.
    pub fn pattern(&self, coeffs: &[u64]) -> Option<SplittingType> {
        let p = self.p;
        let f = trim(coeffs.iter().map(|c| c % p).collect());
        if f.len() < 2 {
            return None;
        }
        let n = f.len() - 1;
        assert!(n <= self.max_degree, "degree {n} above {}", self.max_degree);
        let lead_inv = inv(f[n], p);
        let mut rest: Vec<u64> = f.iter().map(|c| c * lead_inv % p).collect();
        let mut parts = Vec::new();
        for g in &self.irreducibles {
            if 2 * (g.len() - 1) > n || rest.len() < g.len() {
                break;
            }
            let mut hits = 0;
            while let Some(q) = divides(&rest, g, p) {
                rest = q;
                hits += 1;
            }
            if hits > 1 {
                return None;
            }
            if hits == 1 {
                parts.push((g.len() - 1) as u32);
            }
        }
        // whatever is left has no factor of degree <= n/2, so it is irreducible
        if rest.len() > 1 {
            parts.push((rest.len() - 1) as u32);
        }
        SplittingType::new(parts).ok()
    }
}

/// One-off factorization pattern by [`TrialFactorizer`].
pub fn factor_pattern_exhaustive(coeffs: &[u64], p: u64) -> Option<SplittingType> {
    let degree = coeffs.len().saturating_sub(1).max(1);
    TrialFactorizer::new(p, degree).pattern(coeffs)
}

fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

/// Factorization pattern of every monic polynomial over F_p of degree
/// `1..=max_degree`, found by multiplying out all multisets of monic
/// irreducibles. Irreducibles of degree `d` are the monic polynomials of
/// degree `d` not reached as a product of lower-degree ones. Entries with a
/// repeated factor map to `None`.
///
/// Panics if a polynomial is reached twice, which would contradict unique
/// factorization.
pub fn factorization_census(p: u64, max_degree: usize) -> BTreeMap<Vec<u64>, Option<SplittingType>> {
    struct Walk<'a> {
        p: u64,
        target: usize,
        irr: &'a [Vec<u64>],
        census: &'a mut BTreeMap<Vec<u64>, Option<SplittingType>>,
    }

    impl Walk<'_> {
        /// Extends `acc` by irreducibles of index `>= start`; `prev` is the
        /// index of the last factor used.
        fn go(&mut self, start: usize, prev: Option<usize>, acc: &[u64], parts: &mut Vec<u32>, repeated: bool) {
            let deg = acc.len() - 1;
            if deg == self.target {
                let t = if repeated {
                    None
                } else {
                    Some(SplittingType::new(parts.clone()).expect("nonempty"))
                };
                let prev = self.census.insert(acc.to_vec(), t);
                assert!(prev.is_none(), "{acc:?} factored twice over F_{}", self.p);
                return;
            }
            for i in start..self.irr.len() {
                let g = &self.irr[i];
                if deg + g.len() - 1 > self.target {
                    continue;
                }
                parts.push((g.len() - 1) as u32);
                let prod = mul(acc, g, self.p);
                self.go(i, Some(i), &prod, parts, repeated || prev == Some(i));
                parts.pop();
            }
        }
    }

    let mut census = BTreeMap::new();
    let mut irr: Vec<Vec<u64>> = Vec::new();
    for d in 1..=max_degree {
        let known = irr.clone();
        let mut walk = Walk {
            p,
            target: d,
            irr: &known,
            census: &mut census,
        };
        walk.go(0, None, &[1], &mut Vec::new(), false);
        for f in monics(d, p) {
            if !census.contains_key(&f) {
                census.insert(f.clone(), Some(SplittingType::new(vec![d as u32]).expect("d > 0")));
                irr.push(f);
            }
        }
    }
    census
}

/// Splitting type of `g` on `G/U` from the fixed-point counts of its powers,
/// via Möbius inversion.
pub fn splitting_type_by_fixed_points(group: &Group, u: &Group, g: &Perm) -> SplittingType {
    let elems = group.elements();
    let index = elems.len() / u.order();
    // a representative of every coset: x ~ y iff x^-1 y in U
    let mut reps: Vec<&Perm> = Vec::new();
    for x in elems {
        if !reps
            .iter()
            .any(|r| u.contains(&r.inverse().compose(x).unwrap()))
        {
            reps.push(x);
        }
    }
    assert_eq!(reps.len(), index);
    let fix = |k: usize| -> usize {
        let gk = g.pow(k as i64);
        reps.iter()
            .filter(|x| u.contains(&x.inverse().compose(&gk).unwrap().compose(x).unwrap()))
            .count()
    };
    let mobius = |mut n: usize| -> i64 {
        let mut m = 1;
        let mut d = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                n /= d;
                if n.is_multiple_of(d) {
                    return 0;
                }
                m = -m;
            }
            d += 1;
        }
        if n > 1 {
            m = -m;
        }
        m
    };
    let mut parts = Vec::new();
    for d in 1..=index {
        let mut s: i64 = 0;
        for e in 1..=d {
            if d % e == 0 {
                s += mobius(d / e) * fix(e) as i64;
            }
        }
        let cycles = s / d as i64;
        for _ in 0..cycles {
            parts.push(d as u32);
        }
    }
    SplittingType::new(parts).expect("cycle lengths sum to the index")
}

/// Element count per splitting type by the fixed-point oracle.
pub fn density_counts(group: &Group, u: &Group) -> BTreeMap<SplittingType, u64> {
    let mut out = BTreeMap::new();
    for g in group.elements() {
        *out.entry(splitting_type_by_fixed_points(group, u, g)).or_insert(0) += 1;
    }
    out
}
