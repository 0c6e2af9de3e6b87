use std::collections::{HashSet, VecDeque};
use std::time::Instant;

use proptest::prelude::*;
use trigeom_core::group::classical::{classification_group, ClassicalCase};
use trigeom_core::group::search::{automorphism_group, correlation_group, find_isomorphism, SearchOptions};
use trigeom_core::group::{PermGroup, StabChain};
use trigeom_core::harness::lifted_family_group;
use trigeom_core::perm::Permutation;
use trigeom_core::space::LinearSpace;
use trigeom_core::triangle::TriangleComplex;

fn orders(space: LinearSpace) -> (u128, u128) {
    let start = Instant::now();
    let delta = TriangleComplex::new(&space);
    let sys = delta.incidence_system();
    let aut = automorphism_group(sys, &SearchOptions::default()).unwrap();
    let cor = correlation_group(sys, None, None, &SearchOptions::default()).unwrap();
    eprintln!("{}: {} {} in {:?}", space.kind(), aut.order(), cor.order(), start.elapsed());
    (aut.order(), cor.order())
}

#[test]
fn small_planes() {
    assert_eq!(orders(LinearSpace::affine_space(2, 3).unwrap()), (432, 1296));
    assert_eq!(orders(LinearSpace::projective_space(2, 2).unwrap()), (168, 1008));
    assert_eq!(orders(LinearSpace::complete_graph(4).unwrap()), (24, 144));
    assert_eq!(orders(LinearSpace::complete_graph(5).unwrap()), (120, 720));
}

#[test]
fn larger_planes() {
    assert_eq!(orders(LinearSpace::projective_space(2, 3).unwrap()), (5616, 33696));
    assert_eq!(orders(LinearSpace::affine_space(2, 4).unwrap()), (5760, 17280));
    assert_eq!(orders(LinearSpace::affine_space(2, 5).unwrap()), (12000, 36000));
    assert_eq!(orders(LinearSpace::projective_space(2, 4).unwrap()), (120960, 725760));
    assert_eq!(orders(LinearSpace::projective_space(3, 2).unwrap()), (20160, 60480));
    assert_eq!(orders(LinearSpace::affine_space(3, 3).unwrap()), (303264, 909792));
}

#[test]
fn unitals() {
    assert_eq!(orders(LinearSpace::hermitian_unital(2).unwrap()), (432, 1296));
    assert_eq!(orders(LinearSpace::hermitian_unital(3).unwrap()), (12096, 36288));
    assert_eq!(orders(LinearSpace::hermitian_unital(4).unwrap()), (249600, 748800));
}

#[test]
fn supplied_unital_group_matches_search() {
    let delta = TriangleComplex::new(&LinearSpace::hermitian_unital(4).unwrap());
    let sys = delta.incidence_system();
    let supplied = lifted_family_group(&delta).unwrap();
    let searched = automorphism_group(sys, &SearchOptions::default()).unwrap();
    assert_eq!(supplied.order(), searched.order());
    for g in searched.generators.iter().take(4) {
        assert!(supplied.contains(g));
    }
}

#[test]
fn smallest_unital_is_the_affine_plane_of_order_three() {
    let opts = SearchOptions::default();
    let unital = LinearSpace::hermitian_unital(2).unwrap();
    let plane = LinearSpace::affine_space(2, 3).unwrap();
    let id = Permutation::identity(2);
    let iso = find_isomorphism(unital.incidence_system(), plane.incidence_system(), &id, &opts).unwrap();
    let iso = iso.expect("isomorphic");
    for (a, b) in unital.incidence_system().edges() {
        assert!(plane.incidence_system().incident(iso.apply(a), iso.apply(b)));
    }
    let (du, dp) = (TriangleComplex::new(&unital), TriangleComplex::new(&plane));
    let id3 = Permutation::identity(3);
    assert!(find_isomorphism(du.incidence_system(), dp.incidence_system(), &id3, &opts).unwrap().is_some());
    let fano = TriangleComplex::new(&LinearSpace::projective_space(2, 2).unwrap());
    assert!(find_isomorphism(fano.incidence_system(), dp.incidence_system(), &id3, &opts).unwrap().is_none());
}

#[test]
fn projective_planes_are_self_dual() {
    let swap = Permutation::from_images(vec![1, 0]).unwrap();
    for q in [2, 3, 4, 5] {
        let plane = LinearSpace::projective_space(2, q).unwrap();
        let sys = plane.incidence_system();
        let cor = correlation_group(sys, Some(std::slice::from_ref(&swap)), None, &SearchOptions::default()).unwrap();
        assert!(cor.has_odd_type_perm(), "PG(2,{q})");
        assert!(plane.is_duality(cor.extra[0].perm()));
    }
    let affine = LinearSpace::affine_space(2, 3).unwrap();
    let cor = correlation_group(affine.incidence_system(), Some(&[swap]), None, &SearchOptions::default()).unwrap();
    assert!(!cor.has_odd_type_perm());
}

/// Closure of a generating set by breadth-first multiplication.
fn closure(n: usize, gens: &[Permutation]) -> usize {
    let mut seen = HashSet::new();
    let id = Permutation::identity(n);
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.compose(g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen.len()
}

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n as u32).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|images| Permutation::from_images(images).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn stabilizer_chain_order_matches_closure(gens in proptest::collection::vec(permutation(7), 1..4)) {
        let chain = StabChain::new(7, &gens, &[]);
        prop_assert_eq!(chain.order(), closure(7, &gens) as u128);
        for g in &gens {
            prop_assert!(chain.contains(g));
        }
    }

    #[test]
    fn products_of_automorphisms_are_automorphisms(word in proptest::collection::vec(0usize..64, 1..12)) {
        let delta = TriangleComplex::new(&LinearSpace::projective_space(2, 3).unwrap());
        let sys = delta.incidence_system();
        let aut = automorphism_group(sys, &SearchOptions::default()).unwrap();
        let gens = &aut.generators;
        let g = word
            .iter()
            .fold(Permutation::identity(sys.len()), |acc, &i| acc.compose(&gens[i % gens.len()]));
        for (a, b) in sys.edges() {
            prop_assert!(sys.incident(g.apply(a), g.apply(b)));
        }
        for x in 0..sys.len() {
            prop_assert_eq!(sys.type_of(g.apply(x)), sys.type_of(x));
        }
        prop_assert!(aut.group.contains(&g));
    }

    #[test]
    fn lifting_is_a_homomorphism(word in proptest::collection::vec(0usize..64, 1..8)) {
        let space = LinearSpace::affine_space(2, 4).unwrap();
        let delta = TriangleComplex::new(&space);
        let group = classification_group(&space, ClassicalCase::Agammal).unwrap();
        let gens = group.generators();
        let picked: Vec<&Permutation> = word.iter().map(|&i| &gens[i % gens.len()]).collect();
        let product = picked
            .iter()
            .fold(Permutation::identity(space.num_points()), |acc, g| acc.compose(g));
        let lifted_product = picked.iter().fold(
            trigeom_core::incidence::Correlation::identity(delta.incidence_system()),
            |acc, g| acc.compose(&delta.lift_point_map(g).unwrap()),
        );
        prop_assert_eq!(delta.lift_point_map(&product).unwrap(), lifted_product);
    }
}

#[test]
fn lifted_groups_are_flag_transitive() {
    let space = LinearSpace::projective_space(2, 2).unwrap();
    let delta = TriangleComplex::new(&space);
    let group: PermGroup = lifted_family_group(&delta).unwrap();
    assert_eq!(group.order(), 168);
    let (transitive, orbit) = trigeom_core::group::chamber_orbit(delta.incidence_system(), &group).unwrap();
    assert!(transitive);
    assert_eq!(orbit, 168);
}
