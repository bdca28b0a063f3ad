use gcdeq_core::brute;
use gcdeq_core::catalog::{d4_lattice, get_entry, Catalog};
use gcdeq_core::density::{
    density_table, density_table_by_classes, density_table_parallel, joint_density_table,
    splitting_type, SplittingType,
};
use gcdeq_core::perm::Group;
use gcdeq_core::rational::Rational;

fn st(s: &str) -> SplittingType {
    s.parse().unwrap()
}

#[test]
fn coset_orbits_match_fixed_point_oracle() {
    for entry in Catalog::standard().entries() {
        let g = &entry.group;
        for u in g.subgroups() {
            let table = density_table(g, &u).unwrap();
            let oracle = brute::density_counts(g, &u);
            let counts: Vec<(SplittingType, u64)> =
                table.keys().map(|k| (k.clone(), table.count(k))).collect();
            let expected: Vec<(SplittingType, u64)> = oracle.into_iter().collect();
            assert_eq!(counts, expected, "{} / order {}", entry.name, u.order());
        }
    }
}

#[test]
fn element_and_class_paths_agree() {
    for entry in Catalog::standard().entries() {
        for u in entry.group.subgroups() {
            let a = density_table(&entry.group, &u).unwrap();
            assert_eq!(a, density_table_by_classes(&entry.group, &u).unwrap());
            assert_eq!(a, density_table_parallel(&entry.group, &u, 3).unwrap());
            assert_eq!(a.total(), Rational::one());
        }
    }
}

#[test]
fn stabilizer_types_are_cycle_types() {
    for entry in Catalog::standard().entries() {
        for x in entry.group.elements() {
            let t = splitting_type(&entry.group, &entry.stabilizer, x).unwrap();
            let mut ct: Vec<u32> = x.cycle_type().into_iter().map(|c| c as u32).collect();
            ct.sort_unstable();
            assert_eq!(t.parts(), ct.as_slice());
        }
    }
}

#[test]
fn distinct_normal_subgroups_have_distinct_split_sets() {
    for entry in Catalog::standard().entries() {
        let g = &entry.group;
        let normals: Vec<Group> = g
            .subgroups()
            .into_iter()
            .filter(|u| g.is_normal(u).unwrap())
            .collect();
        for (i, n1) in normals.iter().enumerate() {
            for n2 in &normals[i + 1..] {
                let split = |n: &Group| -> Vec<_> {
                    let idx = (g.order() / n.order()) as u32;
                    g.elements()
                        .iter()
                        .filter(|x| splitting_type(g, n, x).unwrap() == SplittingType::split(idx))
                        .cloned()
                        .collect()
                };
                assert_ne!(split(n1), split(n2), "{}", entry.name);
            }
        }
    }
}

#[test]
fn single_subgroup_joint_equals_table() {
    let s4 = get_entry("S4").unwrap();
    let joint = joint_density_table(&s4.group, std::slice::from_ref(&s4.stabilizer)).unwrap();
    let single = density_table(&s4.group, &s4.stabilizer).unwrap();
    assert_eq!(joint.len(), single.len());
    for (k, d) in single.rows() {
        assert_eq!(joint.get(&vec![k.clone()]), d);
    }
}

#[test]
fn s3_joint_with_quadratic_companion() {
    let s3 = get_entry("S3").unwrap();
    let k2 = s3.subgroup("K_2").unwrap().clone();
    let joint = joint_density_table(&s3.group, &[s3.stabilizer.clone(), k2]).unwrap();
    assert_eq!(joint.get(&vec![st("3"), st("1,1")]), Rational::new(1, 3));
    assert_eq!(joint.get(&vec![st("1,2"), st("2")]), Rational::new(1, 2));
}

#[test]
fn d4_lattice_companion_types() {
    let d4 = get_entry("D4").unwrap();
    let lat = d4_lattice();
    let sigma = d4.presentation["s"].clone();
    assert_eq!(splitting_type(&d4.group, &lat["K_2"], &sigma).unwrap(), st("2"));
    assert_eq!(splitting_type(&d4.group, &lat["K_sigma"], &sigma).unwrap(), st("1,1"));
    let a4 = get_entry("A4").unwrap();
    let dt = gcdeq_core::perm::Perm::parse_cycles(4, "(1 2)(3 4)").unwrap();
    assert_eq!(splitting_type(&a4.group, a4.subgroup("K_3").unwrap(), &dt).unwrap(), st("1,1,1"));
}
