use gcdeq_core::catalog::{Catalog, ENTRY_NAMES};
use gcdeq_core::perm::{Group, Perm};
use proptest::prelude::*;

fn s5() -> Group {
    Group::symmetric(5)
}

fn elem(i: usize) -> Perm {
    let g = s5();
    g.elements()[i % g.order()].clone()
}

proptest! {
    #[test]
    fn composition_is_associative(a in 0usize..120, b in 0usize..120, c in 0usize..120) {
        let (x, y, z) = (elem(a), elem(b), elem(c));
        let left = x.compose(&y).unwrap().compose(&z).unwrap();
        let right = x.compose(&y.compose(&z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn inverse_cancels(a in 0usize..120) {
        let x = elem(a);
        prop_assert!(x.compose(&x.inverse()).unwrap().is_identity());
        prop_assert!(x.inverse().compose(&x).unwrap().is_identity());
    }

    #[test]
    fn right_factor_applies_first(a in 0usize..120, b in 0usize..120, pt in 1usize..=5) {
        let (x, y) = (elem(a), elem(b));
        prop_assert_eq!(x.compose(&y).unwrap().apply(pt), x.apply(y.apply(pt)));
    }

    #[test]
    fn cycle_notation_roundtrip(a in 0usize..120) {
        let x = elem(a);
        prop_assert_eq!(Perm::parse_cycles(5, &x.to_string()).unwrap(), x);
    }
}

#[test]
fn catalog_group_laws() {
    let catalog = Catalog::standard();
    assert_eq!(catalog.entries().len(), ENTRY_NAMES.len());
    for entry in catalog.entries() {
        let g = &entry.group;
        assert!(g.is_transitive(), "{}", entry.name);
        assert_eq!(g.order() / entry.stabilizer.order(), entry.field_degree);
        assert_eq!(entry.stabilizer, g.point_stabilizer(1).unwrap());

        let classes = g.conjugacy_classes();
        assert_eq!(classes.iter().map(|c| c.size()).sum::<usize>(), g.order());
        for class in &classes {
            for x in g.elements() {
                assert!(class.contains(&class.representative.conjugate_by(x)));
            }
        }

        for u in g.subgroups() {
            assert_eq!(g.order() % u.order(), 0, "Lagrange in {}", entry.name);
            let cosets = g.left_cosets(&u).unwrap();
            assert_eq!(cosets.len(), g.order() / u.order());
            let mut seen: Vec<&Perm> = cosets.cosets.iter().flatten().collect();
            assert!(cosets.cosets.iter().all(|c| c.len() == u.order()));
            seen.sort();
            seen.dedup();
            assert_eq!(seen.len(), g.order());
        }
    }
}

#[test]
fn direct_product_blocks() {
    let c3 = Group::generate(&[Perm::parse_cycles(3, "(1 2 3)").unwrap()]).unwrap();
    let s3 = Group::symmetric(3);
    let prod = c3.direct_product(&s3);
    assert_eq!(prod.order(), 18);
    assert_eq!(prod.degree(), 6);
    let mut left: Vec<Perm> = prod.elements().iter().map(|x| x.restrict(1, 3)).collect();
    let mut right: Vec<Perm> = prod.elements().iter().map(|x| x.restrict(4, 3)).collect();
    left.sort();
    left.dedup();
    right.sort();
    right.dedup();
    assert_eq!(left, c3.elements());
    assert_eq!(right, s3.elements());
}

#[test]
fn conjugacy_by_exhaustive_search() {
    // oracle: try every conjugator
    let s4 = Group::symmetric(4);
    let subs = s4.subgroups();
    for a in subs.iter().take(12) {
        for b in subs.iter().take(12) {
            let brute = a.order() == b.order()
                && s4.elements().iter().any(|x| {
                    a.elements().iter().all(|y| b.contains(&y.conjugate_by(x)))
                });
            assert_eq!(s4.are_conjugate_subgroups(a, b).unwrap(), brute);
        }
    }
}
